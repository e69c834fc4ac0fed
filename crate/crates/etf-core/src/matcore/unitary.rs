//! Householder-based unitary sending a given vector to the first
//! coordinate axis.

use super::{ComplexMatrix, MatError, C64, CONE};

/// Unitary U with `U·v = ‖v‖·e₁` (first coordinate real positive).
///
/// Built from the stable complex Householder reflector (reflection target
/// `−sign(v₁)‖v‖e₁` avoids cancellation) composed with a diagonal phase
/// that turns the leading coordinate real positive. For `v = e₁` this
/// collapses to the identity exactly.
pub fn unitary_mapping_to_e1(v: &[C64]) -> Result<ComplexMatrix, MatError> {
    let n = v.len();
    let beta = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if beta == 0.0 || n == 0 {
        return Err(MatError::ZeroVector);
    }
    let sign = if v[0].norm() == 0.0 {
        CONE
    } else {
        v[0] / v[0].norm()
    };
    let alpha = -sign * beta;

    // u = v − α·e₁;  H = I − (2/‖u‖²)·uu*  maps v to α·e₁.
    let mut u: Vec<C64> = v.to_vec();
    u[0] -= alpha;
    let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let mut h = ComplexMatrix::identity(n);
    if uu > 0.0 {
        let factor = 2.0 / uu;
        for i in 0..n {
            for j in 0..n {
                let cur = h.get(i, j);
                h.set(i, j, cur - u[i] * u[j].conj() * factor);
            }
        }
    }

    // Phase row 1 so the image coordinate becomes +β.
    let d0 = -sign.conj();
    for j in 0..n {
        let cur = h.get(0, j);
        h.set(0, j, cur * d0);
    }
    Ok(h)
}
