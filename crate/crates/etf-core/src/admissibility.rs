//! Classification of (d, n) pairs against the known necessary conditions
//! for a complex d×n ETF to exist: the Gerzon bound n ≤ d², the Naimark
//! complement form n ≤ (n−d)², the (3,8) exclusion, and the spectral gap
//! d²−d+1 < n < d². Existence witnesses are attached where this crate can
//! actually build the frame.
//!
//! "Not excluded" never claims existence; the known conditions are far
//! from sufficient. A claim of existence is exactly a witness tag.

use crate::exec;
use crate::finite_field::prime_power_decompose;
use serde::Serialize;
use thiserror::Error;

/// Scan size cap for [`scan_table`].
pub const MAX_SCAN: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum AdmissibilityError {
    #[error("invalid pair: need 1 ≤ d ≤ n, got ({d},{n})")]
    InvalidPair { d: u64, n: u64 },
    #[error("scan of d ≤ {d_max}, n ≤ {n_max} exceeds {MAX_SCAN} pairs")]
    TooLarge { d_max: u64, n_max: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Pass,
    Violated,
    NotApplicable,
}

impl std::fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Violated => "violated",
            ConditionStatus::NotApplicable => "not-applicable",
        })
    }
}

/// Canonical condition order used in reports, CSV columns, and messages.
pub const CONDITION_NAMES: [&str; 4] = [
    "gerzon",
    "naimark-gerzon",
    "singer-zauner-gap",
    "szollosi-(3,8)",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub status: ConditionStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Excluded,
    NotExcluded,
}

impl std::fmt::Display for Overall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Overall::Excluded => "excluded",
            Overall::NotExcluded => "not-excluded",
        })
    }
}

/// Construction this crate can run to actually produce an ETF at (d, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Harmonic frame of the Singer (q²+q+1, q+1, 1) difference set.
    Singer(u64),
    /// Regular d×(d+1) simplex.
    Simplex,
    /// Orthonormal basis (n = d; not an ETF in the α > 0 sense, but
    /// certainly not excluded).
    Orthobasis,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Singer(q) => write!(f, "singer({q})"),
            Witness::Simplex => f.write_str("simplex"),
            Witness::Orthobasis => f.write_str("orthobasis"),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityVerdict {
    pub d: u64,
    pub n: u64,
    pub conditions: Vec<ConditionCheck>,
    pub overall: Overall,
    pub witness: Option<Witness>,
}

impl AdmissibilityVerdict {
    pub fn is_excluded(&self) -> bool {
        self.overall == Overall::Excluded
    }

    pub fn violated_names(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .filter(|c| c.status == ConditionStatus::Violated)
            .map(|c| c.name)
            .collect()
    }

    pub fn status_of(&self, name: &str) -> Option<ConditionStatus> {
        self.conditions
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }
}

/// Evaluate every condition for a single pair in exact integer
/// arithmetic.
pub fn check_pair(d: u64, n: u64) -> Result<AdmissibilityVerdict, AdmissibilityError> {
    if d < 1 || n < d {
        return Err(AdmissibilityError::InvalidPair { d, n });
    }

    let gerzon = if n <= d * d {
        ConditionStatus::Pass
    } else {
        ConditionStatus::Violated
    };

    // The complement of an ETF is an (n−d)-dimensional ETF only for
    // n ≥ d+2; at n = d+1 the complement is one-dimensional and the
    // inequality would wrongly exclude simplices.
    let naimark_gerzon = if n < d + 2 {
        ConditionStatus::NotApplicable
    } else if n <= (n - d) * (n - d) {
        ConditionStatus::Pass
    } else {
        ConditionStatus::Violated
    };

    let gap = if d * d - d + 1 < n && n < d * d {
        ConditionStatus::Violated
    } else {
        ConditionStatus::Pass
    };

    let szollosi = if (d, n) == (3, 8) {
        ConditionStatus::Violated
    } else {
        ConditionStatus::Pass
    };

    let conditions = vec![
        ConditionCheck {
            name: CONDITION_NAMES[0],
            status: gerzon,
        },
        ConditionCheck {
            name: CONDITION_NAMES[1],
            status: naimark_gerzon,
        },
        ConditionCheck {
            name: CONDITION_NAMES[2],
            status: gap,
        },
        ConditionCheck {
            name: CONDITION_NAMES[3],
            status: szollosi,
        },
    ];

    let excluded = conditions
        .iter()
        .any(|c| c.status == ConditionStatus::Violated);

    // The d = 1 "simplex" is the degenerate α = 1 configuration (all
    // vectors on one line), so no witness is claimed there.
    let witness = if d >= 2
        && n == d * d - d + 1
        && d - 1 <= crate::constructions::MAX_SINGER_Q
        && prime_power_decompose(d - 1).is_some()
    {
        Some(Witness::Singer(d - 1))
    } else if n == d + 1 && d >= 2 {
        Some(Witness::Simplex)
    } else if n == d {
        Some(Witness::Orthobasis)
    } else {
        None
    };
    debug_assert!(
        witness.is_none() || !excluded,
        "witnessed pairs are never excluded"
    );

    Ok(AdmissibilityVerdict {
        d,
        n,
        conditions,
        overall: if excluded {
            Overall::Excluded
        } else {
            Overall::NotExcluded
        },
        witness,
    })
}

/// Verdicts for all 1 ≤ d ≤ d_max, d ≤ n ≤ n_max, ordered by (d, n)
/// regardless of how the scan is executed. Rows (fixed d) are the unit
/// of parallel work.
pub fn scan_table(d_max: u64, n_max: u64) -> Result<Vec<AdmissibilityVerdict>, AdmissibilityError> {
    if d_max
        .checked_mul(n_max)
        .is_none_or(|total| total > MAX_SCAN)
    {
        return Err(AdmissibilityError::TooLarge { d_max, n_max });
    }
    let rows: Vec<u64> = (1..=d_max).collect();
    let per_row = exec::map_collect(rows, |d| {
        (d..=n_max)
            .map(|n| check_pair(d, n).expect("pairs are valid by construction"))
            .collect::<Vec<_>>()
    });
    let total = per_row.iter().map(Vec::len).sum();
    let mut table = Vec::with_capacity(total);
    for row in per_row {
        table.extend(row);
    }
    Ok(table)
}

/// CSV rendering with a fixed header row.
pub fn table_to_csv(rows: &[AdmissibilityVerdict]) -> String {
    let mut out = String::from("d,n,");
    out.push_str(&CONDITION_NAMES.join(","));
    out.push_str(",overall,witness\n");
    for row in rows {
        out.push_str(&format!("{},{}", row.d, row.n));
        for cond in &row.conditions {
            out.push(',');
            out.push_str(&cond.status.to_string());
        }
        out.push(',');
        out.push_str(&row.overall.to_string());
        out.push(',');
        if let Some(w) = &row.witness {
            out.push_str(&w.to_string());
        }
        out.push('\n');
    }
    out
}
