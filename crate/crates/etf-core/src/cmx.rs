//! The cmx-1 on-disk matrix format: a one-line header followed by one
//! `re im` pair per entry in row-major order, printed with 17 significant
//! digits. That is enough for `parse(render(M))` to reproduce every finite
//! double bit for bit, while staying human-auditable.

use crate::matcore::{ComplexMatrix, C64};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const FORMAT_TAG: &str = "cmx-1";

/// Entry-count ceiling for parsed files (64M entries ≈ 1 GiB of
/// doubles); well past anything the dense kernels can digest.
pub const MAX_ENTRIES: usize = 1 << 26;

#[derive(Debug, Error)]
pub enum CmxError {
    #[error("missing or malformed header (expected `cmx-1 <rows> <cols>`)")]
    BadHeader,
    #[error("declared size {rows}x{cols} exceeds the {MAX_ENTRIES}-entry limit")]
    TooLarge { rows: usize, cols: usize },
    #[error("line {line}: expected `<re> <im>` with parseable floats")]
    BadEntry { line: usize },
    #[error("expected {expected} entries, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("line {line}: non-finite value")]
    NonFinite { line: usize },
}

pub fn render(m: &ComplexMatrix) -> String {
    let mut out = String::with_capacity(48 * m.rows() * m.cols() + 32);
    out.push_str(&format!("{FORMAT_TAG} {} {}\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m.get(i, j);
            out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
        }
    }
    out
}

pub fn parse(text: &str) -> Result<ComplexMatrix, CmxError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CmxError::BadHeader)?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some(FORMAT_TAG) {
        return Err(CmxError::BadHeader);
    }
    let rows: usize = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(CmxError::BadHeader)?;
    let cols: usize = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(CmxError::BadHeader)?;
    if fields.next().is_some() || rows == 0 || cols == 0 {
        return Err(CmxError::BadHeader);
    }
    let expected = rows
        .checked_mul(cols)
        .filter(|&e| e <= MAX_ENTRIES)
        .ok_or(CmxError::TooLarge { rows, cols })?;
    let mut data = Vec::with_capacity(expected);
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(CmxError::BadEntry { line: line_no })?;
        let im: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or(CmxError::BadEntry { line: line_no })?;
        if parts.next().is_some() {
            return Err(CmxError::BadEntry { line: line_no });
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(CmxError::NonFinite { line: line_no });
        }
        data.push(C64::new(re, im));
        if data.len() > expected {
            return Err(CmxError::WrongCount {
                expected,
                found: data.len(),
            });
        }
    }
    if data.len() != expected {
        return Err(CmxError::WrongCount {
            expected,
            found: data.len(),
        });
    }
    Ok(ComplexMatrix::from_raw(rows, cols, data))
}

/// SHA-256 of the canonical cmx-1 rendering, hex-encoded. Reports embed
/// this so a certificate can be tied to its exact input.
pub fn content_hash(m: &ComplexMatrix) -> String {
    let digest = Sha256::digest(render(m).as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bitwise() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| {
            C64::new(
                (i as f64 + 0.1) / 3.0,
                -((j as f64) * std::f64::consts::PI).sin(),
            )
        });
        let text = render(&m);
        let back = parse(&text).unwrap();
        assert_eq!(m, back);
        // Render of the reparse is identical text: stable hashes.
        assert_eq!(text, render(&back));
    }

    #[test]
    fn negative_zero_survives() {
        let m = ComplexMatrix::from_raw(1, 1, vec![C64::new(-0.0, 0.0)]);
        let back = parse(&render(&m)).unwrap();
        assert!(back.get(0, 0).re.is_sign_negative());
    }

    #[test]
    fn rejects_truncated_input() {
        let m = ComplexMatrix::identity(2);
        let text = render(&m);
        // Cutting mid-line leaves a partial entry; cutting whole lines
        // leaves too few.
        let cut = &text[..text.len() - 30];
        assert!(matches!(
            parse(cut),
            Err(CmxError::WrongCount { .. } | CmxError::BadEntry { .. })
        ));
        let header_only = text.lines().next().unwrap();
        assert!(matches!(
            parse(header_only),
            Err(CmxError::WrongCount { .. })
        ));
    }

    #[test]
    fn rejects_bad_header_and_nan() {
        assert!(matches!(
            parse("cmx-2 1 1\n0 0\n"),
            Err(CmxError::BadHeader)
        ));
        assert!(matches!(parse(""), Err(CmxError::BadHeader)));
        assert!(matches!(
            parse("cmx-1 1 1\nNaN 0.0\n"),
            Err(CmxError::NonFinite { .. })
        ));
        // Oversized or overflowing declared dimensions are refused
        // before any allocation happens.
        assert!(matches!(
            parse("cmx-1 99999999 99999999\n"),
            Err(CmxError::TooLarge { .. })
        ));
        let overflow = format!("cmx-1 {} 16\n", usize::MAX / 2);
        assert!(matches!(parse(&overflow), Err(CmxError::TooLarge { .. })));
    }

    #[test]
    fn hash_is_stable_and_input_sensitive() {
        let m = ComplexMatrix::identity(2);
        let h1 = content_hash(&m);
        let h2 = content_hash(&m);
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 64);
        let other = ComplexMatrix::ones(2, 2);
        assert_ne!(h1, content_hash(&other));
    }
}
