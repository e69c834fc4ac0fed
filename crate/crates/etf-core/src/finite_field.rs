//! Arithmetic in GF(p^m) on the polynomial basis, sized for the Singer
//! difference-set construction (orders up to 2^20).
//!
//! Field selection is deterministic without external tables: the modulus
//! is the monic irreducible of degree m whose coefficient word (base-p,
//! constant term least significant) is smallest, and the generator is the
//! primitive element with the smallest such word.

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{m} exceeds the supported maximum 2^20")]
    TooLarge { p: u64, m: u32 },
    #[error("division by zero in GF({order})")]
    DivisionByZero { order: u64 },
    #[error("GF({big}) is not a cubic extension of GF({q})")]
    SubfieldMismatch { big: u64, q: u64 },
}

/// Element of GF(p^m): residues mod p on the polynomial basis,
/// low degree first, always of length m.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A concrete GF(p^m): prime, degree, reduction modulus, and a verified
/// primitive generator.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    order: u64,
    modulus: Vec<u64>,
    generator: FieldElement,
}

/// Construct GF(p^m) deterministically.
pub fn make_field(p: u64, m: u32) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    assert!(m >= 1, "extension degree must be positive");
    let order = checked_pow(p, m).ok_or(FieldError::TooLarge { p, m })?;
    if order > MAX_ORDER {
        return Err(FieldError::TooLarge { p, m });
    }

    let modulus = smallest_irreducible(p, m);
    let mut spec = FieldSpec {
        p,
        m,
        order,
        modulus,
        generator: FieldElement {
            coeffs: vec![0; m as usize],
        },
    };
    spec.generator = spec.smallest_primitive();
    Ok(spec)
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field order q = p^m.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Reduction modulus, low degree first, length m+1, leading term 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.element_from_index(1)
    }

    /// Element whose base-p coefficient word equals `index` (< p^m).
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        assert!(index < self.order, "index out of range");
        let mut coeffs = vec![0; self.m as usize];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn element_index(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce by the monic modulus from the top down.
        for deg in (m..prod.len()).rev() {
            let coeff = prod[deg];
            if coeff == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, &mc) in self.modulus.iter().enumerate().take(m) {
                let idx = deg - m + k;
                prod[idx] = (prod[idx] + coeff * (self.p - mc)) % self.p;
            }
        }
        prod.truncate(m);
        FieldElement { coeffs: prod }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero { order: self.order });
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: &FieldElement) -> u64 {
        assert!(!a.is_zero());
        let n = self.order - 1;
        let mut ord = n;
        for f in distinct_prime_factors(n) {
            while ord % f == 0 && self.pow(a, ord / f) == self.one() {
                ord /= f;
            }
        }
        ord
    }

    fn smallest_primitive(&self) -> FieldElement {
        let n = self.order - 1;
        let factors = distinct_prime_factors(n);
        for idx in 1..self.order {
            let g = self.element_from_index(idx);
            let primitive = factors.iter().all(|&f| self.pow(&g, n / f) != self.one());
            if primitive {
                return g;
            }
        }
        unreachable!("every finite field has a primitive element")
    }
}

/// Relative trace from GF(q³) down to GF(q): x + x^q + x^{q²}.
///
/// `spec_big` must be the degree-3m extension sharing the characteristic
/// of q; the result is fixed by the q-power Frobenius and so lies in the
/// subfield copy of GF(q).
pub fn relative_trace(
    spec_big: &FieldSpec,
    q: u64,
    x: &FieldElement,
) -> Result<FieldElement, FieldError> {
    let mismatch = FieldError::SubfieldMismatch {
        big: spec_big.order(),
        q,
    };
    let (p, k) = match prime_power_decompose(q) {
        Some(pk) => pk,
        None => return Err(mismatch),
    };
    if p != spec_big.p() || spec_big.degree() != 3 * k || q.pow(3) != spec_big.order() {
        return Err(mismatch);
    }
    let xq = spec_big.pow(x, q);
    let xq2 = spec_big.pow(&xq, q);
    Ok(spec_big.add(&spec_big.add(x, &xq), &xq2))
}

/// Trial-division primality; inputs here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Decompose q = p^k with p prime and k ≥ 1; `None` if q is not a prime
/// power.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

fn checked_pow(p: u64, m: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(p)?;
        if acc > MAX_ORDER {
            return None;
        }
    }
    Some(acc)
}

/// Smallest monic irreducible of degree m over GF(p), ordered by the
/// base-p coefficient word with the constant term least significant
/// (so GF(8) gets x³+x+1, not x³+x²+1).
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    if m == 1 {
        return vec![0, 1]; // x itself
    }
    let count = (0..m).fold(1u64, |acc, _| acc * p);
    for code in 0..count {
        let mut poly = vec![0u64; m + 1];
        let mut rest = code;
        for c in poly.iter_mut().take(m) {
            *c = rest % p;
            rest /= p;
        }
        poly[m] = 1;
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

/// Trial factorization: a reducible monic polynomial of degree m has a
/// monic factor of degree at most m/2.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let m = poly.len() - 1;
    for e in 1..=(m / 2) {
        let count = (0..e).fold(1u64, |acc, _| acc * p);
        for code in 0..count {
            let mut divisor = vec![0u64; e + 1];
            let mut rest = code;
            for c in divisor.iter_mut().take(e) {
                *c = rest % p;
                rest /= p;
            }
            divisor[e] = 1;
            if poly_divides(&divisor, poly, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(divisor: &[u64], poly: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let deg = rem.len() - 1;
        if lead != 0 {
            // divisor is monic: subtract lead * divisor * x^(deg-dd)
            for (k, &dc) in divisor.iter().enumerate() {
                let idx = deg - dd + k;
                rem[idx] = (rem[idx] + lead * (p - dc % p)) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_has_generator_one() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.element_index(f.generator()), 1);
    }

    #[test]
    fn gf8_modulus_is_x3_x_1() {
        // The two irreducible cubics over GF(2) are x³+x+1 and x³+x²+1;
        // the first has the smaller coefficient word (1011 vs 1101).
        let f = make_field(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn gf8_x_cubed_is_x_plus_one() {
        let f = make_field(2, 3).unwrap();
        let x = f.element_from_index(2);
        let x2 = f.mul(&x, &x);
        let x3 = f.mul(&x, &x2);
        assert_eq!(x3.coeffs(), &[1, 1, 0]);
    }

    #[test]
    fn gf3_generator_is_two() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.element_index(f.generator()), 2);
        assert_eq!(f.element_order(f.generator()), 2);
    }

    #[test]
    fn gf7_inverse_of_three_is_five() {
        let f = make_field(7, 1).unwrap();
        let three = f.element_from_index(3);
        let inv = f.inv(&three).unwrap();
        assert_eq!(f.element_index(&inv), 5);
        assert_eq!(f.mul(&three, &inv), f.one());
    }

    #[test]
    fn additive_identity() {
        let f = make_field(3, 2).unwrap();
        for idx in 0..f.order() {
            let a = f.element_from_index(idx);
            assert_eq!(f.add(&a, &f.zero()), a);
        }
    }

    #[test]
    fn division_by_zero_rejected() {
        let f = make_field(5, 1).unwrap();
        assert!(matches!(
            f.inv(&f.zero()),
            Err(FieldError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(matches!(make_field(6, 1), Err(FieldError::NotPrime(6))));
    }

    #[test]
    fn rejects_oversized_field() {
        assert!(matches!(
            make_field(2, 21),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn generator_enumerates_units() {
        // Exhaustive cyclicity check for the small cubic extensions.
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let (p, k) = prime_power_decompose(q).unwrap();
            let f = make_field(p, 3 * k).unwrap();
            let mut seen = std::collections::HashSet::new();
            let mut x = f.one();
            for _ in 0..(f.order() - 1) {
                assert!(seen.insert(f.element_index(&x)));
                x = f.mul(&x, f.generator());
            }
            assert_eq!(x, f.one(), "generator order must be q³−1");
            assert_eq!(seen.len() as u64, f.order() - 1);
        }
    }

    #[test]
    fn trace_of_zero_and_one() {
        let f = make_field(2, 3).unwrap();
        assert!(relative_trace(&f, 2, &f.zero()).unwrap().is_zero());
        // 1 + 1 + 1 = 1 in characteristic 2.
        assert_eq!(relative_trace(&f, 2, &f.one()).unwrap(), f.one());
    }

    #[test]
    fn trace_lands_in_subfield() {
        let f = make_field(3, 3).unwrap();
        for idx in 0..f.order() {
            let x = f.element_from_index(idx);
            let t = relative_trace(&f, 3, &x).unwrap();
            assert_eq!(f.pow(&t, 3), t, "trace must be Frobenius-fixed");
        }
    }

    #[test]
    fn trace_is_additive_and_subfield_linear() {
        let f = make_field(2, 6).unwrap(); // GF(64) over GF(4)
        let q = 4;
        let subfield: Vec<FieldElement> = (0..f.order())
            .map(|i| f.element_from_index(i))
            .filter(|x| f.pow(x, q) == *x)
            .collect();
        assert_eq!(subfield.len() as u64, q);
        for i in (0..f.order()).step_by(7) {
            for j in (0..f.order()).step_by(11) {
                let x = f.element_from_index(i);
                let y = f.element_from_index(j);
                let tx = relative_trace(&f, q, &x).unwrap();
                let ty = relative_trace(&f, q, &y).unwrap();
                let txy = relative_trace(&f, q, &f.add(&x, &y)).unwrap();
                assert_eq!(txy, f.add(&tx, &ty));
                for lam in &subfield {
                    let tlx = relative_trace(&f, q, &f.mul(lam, &x)).unwrap();
                    assert_eq!(tlx, f.mul(lam, &tx));
                }
            }
        }
    }

    #[test]
    fn trace_zero_set_has_q_squared_elements() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let (p, k) = prime_power_decompose(q).unwrap();
            let f = make_field(p, 3 * k).unwrap();
            let zero_count = (0..f.order())
                .filter(|&i| {
                    relative_trace(&f, q, &f.element_from_index(i))
                        .unwrap()
                        .is_zero()
                })
                .count() as u64;
            assert_eq!(zero_count, q * q, "trace-zero count at q={q}");
        }
    }

    #[test]
    fn subfield_mismatch_detected() {
        let f = make_field(2, 4).unwrap();
        let x = f.one();
        assert!(matches!(
            relative_trace(&f, 2, &x),
            Err(FieldError::SubfieldMismatch { .. })
        ));
        let g = make_field(3, 3).unwrap();
        assert!(matches!(
            relative_trace(&g, 2, &g.one()),
            Err(FieldError::SubfieldMismatch { .. })
        ));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power_decompose(64), Some((2, 6)));
        assert_eq!(prime_power_decompose(7), Some((7, 1)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(prime_power_decompose(1), None);
    }
}
