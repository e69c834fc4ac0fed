//! Command-line surface for the ETF toolkit: construct frames, verify
//! the defining identities, run the spectral-gap certificate, and
//! classify (d, n) pairs.
//!
//! Exit codes: 0 = success/pass, 1 = domain-level failure (construction
//! failed, a check failed, a pair is excluded), 2 = usage or I/O error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use etf_core::admissibility::{check_pair, scan_table, table_to_csv, AdmissibilityVerdict};
use etf_core::constructions::{
    harmonic_etf, simplex_etf, singer_difference_set, DifferenceSet, Frame,
};
use etf_core::gap_certificate::{certify, CertifyError, GapCertificateReport};
use etf_core::verification::{verify_frame, welch_bound};
use etf_core::{cmx, DEFAULT_REL_TOL, DEFAULT_TOL};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "etf",
    version,
    about = "Construct, verify, and certify complex equiangular tight frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a frame and emit it in cmx-1 format.
    Construct(ConstructArgs),
    /// Check unit norms, tightness, and equiangularity of a cmx-1 frame.
    Verify(VerifyArgs),
    /// Run the full spectral-gap certificate on a cmx-1 frame.
    CertifyGap(CertifyGapArgs),
    /// Classify (d,n) pairs against the known necessary conditions.
    Admissible(AdmissibleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Singer,
    Simplex,
    Harmonic,
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction family.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Prime power q for the Singer construction (d = q+1, n = q²+q+1).
    #[arg(long)]
    q: Option<u64>,
    /// Dimension d for the simplex construction (n = d+1).
    #[arg(long)]
    d: Option<usize>,
    /// Modulus v for an inline harmonic difference set.
    #[arg(long)]
    v: Option<u32>,
    /// Inline difference-set elements, comma separated (e.g. 0,1,3).
    #[arg(long, value_delimiter = ',')]
    elements: Option<Vec<u32>>,
    /// JSON file with {"v": .., "elements": [..]} instead of --v/--elements.
    #[arg(long)]
    ds_file: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input cmx-1 file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Residual tolerance for every check.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct CertifyGapArgs {
    /// Input cmx-1 file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Residual tolerance for identity checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Relative threshold for numerical rank decisions.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct AdmissibleArgs {
    /// Dimension d (single-pair mode, with --n).
    #[arg(long)]
    d: Option<u64>,
    /// Vector count n (single-pair mode, with --d).
    #[arg(long)]
    n: Option<u64>,
    /// Scan upper bound on d (with --nmax).
    #[arg(long)]
    dmax: Option<u64>,
    /// Scan upper bound on n (with --dmax).
    #[arg(long)]
    nmax: Option<u64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::CertifyGap(args) => cmd_certify_gap(args),
        Command::Admissible(args) => cmd_admissible(args),
    };
    ExitCode::from(code)
}

fn usage_error(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn cmd_construct(args: ConstructArgs) -> u8 {
    let (frame, label) = match args.kind {
        Kind::Singer => {
            let Some(q) = args.q else {
                return usage_error("--kind singer requires --q");
            };
            match singer_difference_set(q) {
                Ok(ds) => (harmonic_etf(&ds), format!("singer(q={q})")),
                Err(e) => {
                    eprintln!("construction failed: {e}");
                    return EXIT_FAIL;
                }
            }
        }
        Kind::Simplex => {
            let Some(d) = args.d else {
                return usage_error("--kind simplex requires --d");
            };
            if d == 0 {
                return usage_error("--d must be positive");
            }
            (simplex_etf(d), format!("simplex(d={d})"))
        }
        Kind::Harmonic => {
            let ds = match load_difference_set(&args) {
                Ok(ds) => ds,
                Err(code) => return code,
            };
            let label = format!("harmonic(v={}, k={})", ds.v(), ds.k());
            (harmonic_etf(&ds), label)
        }
    };

    let (d, n) = (frame.d(), frame.n());
    let alpha = welch_bound(d as u32, n as u32);
    let text = cmx::render(frame.matrix());
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    eprintln!("constructed {label}: d={d} n={n} alpha={alpha:.16}");
    EXIT_PASS
}

fn load_difference_set(args: &ConstructArgs) -> Result<DifferenceSet, u8> {
    let (v, elements) = if let Some(path) = &args.ds_file {
        if args.v.is_some() || args.elements.is_some() {
            return Err(usage_error("--ds-file conflicts with --v/--elements"));
        }
        parse_ds_file(path)?
    } else {
        match (args.v, args.elements.clone()) {
            (Some(v), Some(elements)) => (v, elements),
            _ => {
                return Err(usage_error(
                    "--kind harmonic requires --v and --elements, or --ds-file",
                ))
            }
        }
    };
    DifferenceSet::new(v, elements).map_err(|e| {
        eprintln!("construction failed: {e}");
        EXIT_FAIL
    })
}

fn parse_ds_file(path: &Path) -> Result<(u32, Vec<u32>), u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage_error(&format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| usage_error(&format!("{} is not valid JSON: {e}", path.display())))?;
    let v = value
        .get("v")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| usage_error("difference-set file needs a numeric \"v\""))?;
    let elements = value
        .get("elements")
        .and_then(|x| x.as_array())
        .ok_or_else(|| usage_error("difference-set file needs an \"elements\" array"))?
        .iter()
        .map(|x| x.as_u64().map(|e| e as u32))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| usage_error("difference-set elements must be nonnegative integers"))?;
    Ok((v as u32, elements))
}

fn load_frame(path: &Path) -> Result<Frame, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage_error(&format!("cannot read {}: {e}", path.display())))?;
    let matrix = cmx::parse(&text).map_err(|e| {
        usage_error(&format!(
            "{} is not a valid cmx-1 file: {e}",
            path.display()
        ))
    })?;
    if matrix.cols() < 2 {
        return Err(usage_error("frame must have at least two columns"));
    }
    Frame::from_matrix(matrix)
        .map_err(|e| usage_error(&format!("{} does not hold a frame: {e}", path.display())))
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let frame = match load_frame(&args.input) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let report = verify_frame(&frame, args.tol);
    match args.format {
        ReportFormat::Json => {
            let envelope = serde_json::json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "input_sha256": cmx::content_hash(frame.matrix()),
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
        }
        ReportFormat::Text => {
            println!(
                "frame: d={} n={} (tol {:.1e})",
                report.d, report.n, report.tol
            );
            println!(
                "  unit norm    residual {:.3e}  {}",
                report.unit_norm_residual,
                pass_str(report.unit_norm_pass)
            );
            println!(
                "  tightness    residual {:.3e}  {}",
                report.tightness_residual,
                pass_str(report.tight_pass)
            );
            println!(
                "  equiangular  spread {:.3e}, mean {:.10}, welch {:.10}  {}",
                report.equiangularity_spread,
                report.alpha_observed,
                report.welch_bound,
                pass_str(report.equiangular_pass)
            );
            println!("  coherence    {:.10}", report.coherence_observed);
            println!("{}", if report.passed { "PASSED" } else { "FAILED" });
        }
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn cmd_certify_gap(args: CertifyGapArgs) -> u8 {
    let frame = match load_frame(&args.input) {
        Ok(f) => f,
        Err(code) => return code,
    };
    match certify(&frame, args.tol, args.rel_tol) {
        Ok(report) => {
            match args.format {
                ReportFormat::Json => println!("{}", report.to_json()),
                ReportFormat::Text => print_certificate(&report),
            }
            if report.passed {
                EXIT_PASS
            } else {
                let step = report.first_failing_step().unwrap_or("unknown");
                eprintln!("FAILED at step: {step}");
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("FAILED at step: {}", failing_step(&e));
            eprintln!("  {e}");
            EXIT_FAIL
        }
    }
}

fn failing_step(e: &CertifyError) -> &'static str {
    match e {
        CertifyError::InvalidPair(_) => "parameters",
        CertifyError::NotAnEtf { .. } => "verification",
        CertifyError::PhaseDegeneracy { .. } => "block_form",
        CertifyError::InvariantViolation { .. } => "gram_objects",
        CertifyError::PairingViolation { .. } => "eigen_pairing",
        CertifyError::RankChainViolation { .. } => "rank_chain",
        CertifyError::Mat(_) => "linear_algebra",
    }
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_certificate(report: &GapCertificateReport) {
    let p = &report.params;
    println!("gap certificate: d={} n={}", p.d, p.n);
    println!("  input sha256 {}", report.provenance.input_sha256);
    println!(
        "  tolerances   tol {:.1e}, rel_tol {:.1e}",
        report.provenance.tol, report.provenance.rel_tol
    );
    println!(
        "  params       alpha {:.10}, gamma {}, mu {}, lambda {}",
        p.alpha, p.gamma_exact, p.mu_exact, p.lambda_exact
    );
    println!(
        "  verification unit-norm {:.3e}, tightness {:.3e}, spread {:.3e}  {}",
        report.verification.unit_norm_residual,
        report.verification.tightness_residual,
        report.verification.equiangularity_spread,
        pass_str(report.verification.passed)
    );
    println!(
        "  block form   col-norm {:.3e}, row-sum {:.3e}, tightness {:.3e}  {}",
        report.block_form.column_norm_residual,
        report.block_form.row_sum_residual,
        report.block_form.tightness_residual,
        pass_str(report.block_form.pass)
    );
    println!(
        "  flatness     identity {:.3e}, R·1 {:.3e}, K·1 {:.3e}  {}",
        report.flatness.check.identity_residual,
        report.flatness.check.r_row_sum_residual,
        report.flatness.check.k_row_sum_residual,
        pass_str(report.flatness.pass)
    );
    println!(
        "  proj. split  A²−B²−A {:.3e}, AB+BA−B {:.3e}  {}",
        report.projection_split.residual_a,
        report.projection_split.residual_b,
        pass_str(report.projection_split.pass)
    );
    let spectrum: Vec<String> = report
        .a_spectrum
        .iter()
        .map(|c| format!("{:.6}×{}", c.value, c.multiplicity))
        .collect();
    println!("  A spectrum   {}", spectrum.join(", "));
    if report.pairing_table.is_empty() {
        println!("  pairing      (no interior eigenvalue clusters)");
    }
    for entry in &report.pairing_table {
        println!(
            "  pairing      λ {:.6} (dim {}) ↔ {:.6} (dim {}), min σ(B|) {:.3e}{}",
            entry.lambda,
            entry.dim,
            entry.partner_lambda,
            entry.dim_partner,
            entry.bijection_min_singular,
            if entry.self_paired { " [self]" } else { "" }
        );
    }
    println!(
        "  κ+2γρ=γ+1    residual {:.3e}  {}",
        report.eigen_relation.residual,
        pass_str(report.eigen_relation.pass && report.shared_eigenvector.pass)
    );
    println!(
        "  kernels      dim ker K = {}, dim ker(R−μI) = {}, match {:.3e}, orth {:.3e}  {}",
        report.kernel_match.dim_ker_k,
        report.kernel_match.dim_ker_r_mu,
        report.kernel_match.residual,
        report.kernel_orthogonality.residual,
        pass_str(report.kernel_match.pass && report.kernel_orthogonality.pass)
    );
    println!(
        "  ranks        rank K = {} ≤ {}, rank R = {} ≤ {}, nullity K = {}, 2·nullity K = {}{}",
        report.ranks.rank_k,
        report.ranks.rank_k_limit,
        report.ranks.rank_r,
        report.ranks.rank_r_limit,
        report.ranks.nullity_k,
        report.ranks.pairing_lower_bound,
        if report.ranks.pairing_inequality_applicable {
            ""
        } else {
            " (lower bound not applicable)"
        }
    );
    println!(
        "  regime       λ = {} ; window {} < n < {}: {}",
        report.regime.lambda_exact,
        report.regime.window_lower,
        report.regime.window_upper,
        if report.regime.in_window {
            "in-window"
        } else {
            "not applicable"
        }
    );
    match report.n_le_bound {
        Some(true) => println!(
            "  bound        n = {} ≤ d²−d+1 = {}{}",
            p.n,
            report.bound_concluded,
            if u64::from(p.n) == u64::from(report.bound_concluded) {
                " (attained)"
            } else {
                ""
            }
        ),
        Some(false) => println!(
            "  bound        n = {} violates d²−d+1 = {}",
            p.n, report.bound_concluded
        ),
        None => println!(
            "  bound        d²−d+1 = {} (not asserted outside the window)",
            report.bound_concluded
        ),
    }
    println!("{}", if report.passed { "PASSED" } else { "FAILED" });
}

fn cmd_admissible(args: AdmissibleArgs) -> u8 {
    match (args.d, args.n, args.dmax, args.nmax) {
        (Some(d), Some(n), None, None) => {
            let verdict = match check_pair(d, n) {
                Ok(v) => v,
                Err(e) => return usage_error(&e.to_string()),
            };
            print_verdicts(std::slice::from_ref(&verdict), args.format, true);
            if verdict.is_excluded() {
                EXIT_FAIL
            } else {
                EXIT_PASS
            }
        }
        (None, None, Some(dmax), Some(nmax)) => {
            let rows = match scan_table(dmax, nmax) {
                Ok(r) => r,
                Err(e) => return usage_error(&e.to_string()),
            };
            print_verdicts(&rows, args.format, false);
            EXIT_PASS
        }
        _ => usage_error("use either --d with --n, or --dmax with --nmax"),
    }
}

fn print_verdicts(rows: &[AdmissibilityVerdict], format: TableFormat, single: bool) {
    match format {
        TableFormat::Csv => print!("{}", table_to_csv(rows)),
        TableFormat::Json => {
            let envelope = if single {
                serde_json::json!({
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "verdict": rows[0],
                })
            } else {
                serde_json::json!({
                    "tool_version": env!("CARGO_PKG_VERSION"),
                    "verdicts": rows,
                })
            };
            println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
        }
        TableFormat::Text => {
            for row in rows {
                let mut line = format!("({},{}): {}", row.d, row.n, row.overall);
                let violated = row.violated_names();
                if !violated.is_empty() {
                    line.push_str(": ");
                    line.push_str(&violated.join(", "));
                }
                if let Some(w) = &row.witness {
                    line.push_str(&format!("; witness {w}"));
                }
                println!("{line}");
                if single {
                    for cond in &row.conditions {
                        println!("  {}: {}", cond.name, cond.status);
                    }
                }
            }
        }
    }
}
