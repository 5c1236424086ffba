//! Arithmetic in `Q[t]/(m)` and in polynomial rings over it, with dynamic
//! splitting of the modulus.
//!
//! The modulus need not be irreducible.  Inverting an element either
//! succeeds, certifies the element zero, or exhibits a factorization of the
//! modulus into coprime factors; callers restart their computation modulo
//! each factor.  For squarefree `m` this evaluates algebraic conditions
//! simultaneously at all roots of `m` without ever factoring over the
//! rationals, splitting exactly when different roots behave differently.

use num::rational::BigRational;
use num::traits::{One, Zero};

use super::gcd::{
    qp_add, qp_degree, qp_exact_div, qp_is_zero, qp_monic, qp_mul, qp_rem, qp_scale, qp_sub,
    qp_trim, QPoly,
};
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Element of the quotient ring: a reduced coefficient vector.
pub type KElem = QPoly;

/// Polynomial over the quotient ring, dense in ascending degree.
pub type KPoly = Vec<KElem>;

/// Outcome of an inversion attempt in `Q[t]/(m)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Inverted {
    Inverse(KElem),
    Zero,
    /// The element is a zero divisor; the modulus factors as the product of
    /// the two returned monic coprime polynomials of positive degree.
    Split(QPoly, QPoly),
}

/// Raised by quotient-polynomial operations that needed to invert a zero
/// divisor: carries the induced factorization of the modulus.
#[derive(Clone, Debug)]
pub struct SplitEvent {
    pub factors: (QPoly, QPoly),
}

/// `Q[t]/(m)` with `m` monic of positive degree.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientRing {
    modulus: QPoly,
}

fn qp_egcd(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly, QPoly) {
    let mut r0 = qp_trim(a.to_vec());
    let mut r1 = qp_trim(b.to_vec());
    let mut s0: QPoly = vec![BigRational::one()];
    let mut s1: QPoly = Vec::new();
    let mut t0: QPoly = Vec::new();
    let mut t1: QPoly = vec![BigRational::one()];
    while !qp_is_zero(&r1) {
        let (q, r) = super::gcd::qp_divmod(&r0, &r1);
        let s = qp_sub(&s0, &qp_mul(&q, &s1));
        let t = qp_sub(&t0, &qp_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

impl QuotientRing {
    /// Builds `Q[t]/(m)`, normalizing `m` to monic form.
    pub fn new(modulus: &[BigRational]) -> Self {
        let m = qp_monic(modulus);
        assert!(
            qp_degree(&m).map_or(false, |d| d >= 1),
            "modulus must have positive degree"
        );
        QuotientRing { modulus: m }
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        qp_degree(&self.modulus).unwrap()
    }

    pub fn reduce(&self, p: &[BigRational]) -> KElem {
        qp_rem(p, &self.modulus)
    }

    pub fn zero(&self) -> KElem {
        Vec::new()
    }

    pub fn one(&self) -> KElem {
        vec![BigRational::one()]
    }

    pub fn from_rational(&self, c: &BigRational) -> KElem {
        if c.is_zero() {
            Vec::new()
        } else {
            vec![c.clone()]
        }
    }

    /// The generator `t` of the quotient ring (reduced if `deg m = 1`).
    pub fn generator(&self) -> KElem {
        self.reduce(&[BigRational::zero(), BigRational::one()])
    }

    pub fn add(&self, a: &KElem, b: &KElem) -> KElem {
        qp_add(a, b)
    }

    pub fn sub(&self, a: &KElem, b: &KElem) -> KElem {
        qp_sub(a, b)
    }

    pub fn neg(&self, a: &KElem) -> KElem {
        qp_scale(a, &-BigRational::one())
    }

    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        self.reduce(&qp_mul(a, b))
    }

    pub fn is_zero(&self, a: &KElem) -> bool {
        qp_is_zero(a)
    }

    /// Inverts modulo the modulus, or splits the modulus on a zero divisor.
    pub fn invert(&self, a: &KElem) -> Inverted {
        let a = self.reduce(a);
        if qp_is_zero(&a) {
            return Inverted::Zero;
        }
        let (g, s, _) = qp_egcd(&a, &self.modulus);
        let gd = qp_degree(&g).expect("gcd of nonzero inputs is nonzero");
        if gd == 0 {
            let inv = qp_scale(&s, &(BigRational::one() / &g[0]));
            return Inverted::Inverse(self.reduce(&inv));
        }
        let g = qp_monic(&g);
        let co = qp_exact_div(&self.modulus, &g).expect("gcd divides modulus");
        Inverted::Split(g, qp_monic(&co))
    }

    /// Restricts an element to a factor ring of the modulus.
    pub fn transport(&self, a: &KElem, target: &QuotientRing) -> KElem {
        target.reduce(a)
    }
}

pub fn kp_trim(ring: &QuotientRing, mut p: KPoly) -> KPoly {
    while p.last().map_or(false, |c| ring.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn kp_is_zero(p: &[KElem]) -> bool {
    p.iter().all(|c| qp_is_zero(c))
}

pub fn kp_degree(p: &[KElem]) -> Option<usize> {
    p.iter().rposition(|c| !qp_is_zero(c))
}

pub fn kp_add(ring: &QuotientRing, a: &[KElem], b: &[KElem]) -> KPoly {
    let n = a.len().max(b.len());
    let mut out = vec![ring.zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = ring.add(&out[i], c);
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = ring.add(&out[i], c);
    }
    kp_trim(ring, out)
}

pub fn kp_sub(ring: &QuotientRing, a: &[KElem], b: &[KElem]) -> KPoly {
    let neg_b: KPoly = b.iter().map(|c| ring.neg(c)).collect();
    kp_add(ring, a, &neg_b)
}

pub fn kp_mul(ring: &QuotientRing, a: &[KElem], b: &[KElem]) -> KPoly {
    if kp_is_zero(a) || kp_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if qp_is_zero(ca) {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            let prod = ring.mul(ca, cb);
            out[i + j] = ring.add(&out[i + j], &prod);
        }
    }
    kp_trim(ring, out)
}

pub fn kp_scale(ring: &QuotientRing, p: &[KElem], e: &KElem) -> KPoly {
    let out: KPoly = p.iter().map(|c| ring.mul(c, e)).collect();
    kp_trim(ring, out)
}

pub fn kp_derivative(ring: &QuotientRing, p: &[KElem]) -> KPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    let out: KPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| qp_scale(c, &BigRational::from_integer(i.into())))
        .collect();
    kp_trim(ring, out)
}

pub fn kp_eval(ring: &QuotientRing, p: &[KElem], x: &KElem) -> KElem {
    let mut acc = ring.zero();
    for c in p.iter().rev() {
        acc = ring.add(&ring.mul(&acc, x), c);
    }
    acc
}

/// Division with remainder; fails with a modulus split when the leading
/// coefficient of `b` is a zero divisor.
pub fn kp_divmod(
    ring: &QuotientRing,
    a: &[KElem],
    b: &[KElem],
) -> std::result::Result<(KPoly, KPoly), SplitEvent> {
    let b = kp_trim(ring, b.to_vec());
    let db = kp_degree(&b).expect("division by zero polynomial");
    let lc_inv = match ring.invert(&b[db]) {
        Inverted::Inverse(inv) => inv,
        Inverted::Zero => unreachable!("trimmed polynomial has nonzero leading coefficient"),
        Inverted::Split(f, g) => return Err(SplitEvent { factors: (f, g) }),
    };
    let mut rem = kp_trim(ring, a.to_vec());
    let da = match kp_degree(&rem) {
        None => return Ok((Vec::new(), Vec::new())),
        Some(d) => d,
    };
    if da < db {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![ring.zero(); da - db + 1];
    while let Some(dr) = kp_degree(&rem) {
        if dr < db {
            break;
        }
        let factor = ring.mul(&rem[dr], &lc_inv);
        quot[dr - db] = factor.clone();
        for (k, c) in b.iter().enumerate().take(db + 1) {
            let sub = ring.mul(&factor, c);
            let idx = dr - db + k;
            rem[idx] = ring.sub(&rem[idx], &sub);
        }
        rem = kp_trim(ring, rem);
    }
    Ok((kp_trim(ring, quot), rem))
}

/// Monic normalization; fails with a modulus split when the leading
/// coefficient is a zero divisor.
pub fn kp_monic(
    ring: &QuotientRing,
    p: &[KElem],
) -> std::result::Result<KPoly, SplitEvent> {
    let p = kp_trim(ring, p.to_vec());
    let Some(d) = kp_degree(&p) else {
        return Ok(Vec::new());
    };
    match ring.invert(&p[d]) {
        Inverted::Inverse(inv) => Ok(kp_scale(ring, &p, &inv)),
        Inverted::Zero => unreachable!("trimmed polynomial has nonzero leading coefficient"),
        Inverted::Split(f, g) => Err(SplitEvent { factors: (f, g) }),
    }
}

/// Monic gcd over the quotient ring, splitting the modulus when a leading
/// coefficient fails to invert.
pub fn kp_gcd(
    ring: &QuotientRing,
    a: &[KElem],
    b: &[KElem],
) -> std::result::Result<KPoly, SplitEvent> {
    let mut x = kp_trim(ring, a.to_vec());
    let mut y = kp_trim(ring, b.to_vec());
    while !kp_is_zero(&y) {
        let (_, r) = kp_divmod(ring, &x, &y)?;
        x = y;
        y = r;
    }
    kp_monic(ring, &x)
}

/// Squarefree part: `p / gcd(p, p')`, monic.
pub fn kp_squarefree(
    ring: &QuotientRing,
    p: &[KElem],
) -> std::result::Result<KPoly, SplitEvent> {
    let p = kp_trim(ring, p.to_vec());
    if kp_degree(&p).map_or(true, |d| d == 0) {
        return kp_monic(ring, &p);
    }
    let dp = kp_derivative(ring, &p);
    let g = kp_gcd(ring, &p, &dp)?;
    if kp_degree(&g).map_or(true, |d| d == 0) {
        return kp_monic(ring, &p);
    }
    let (q, r) = kp_divmod(ring, &p, &g)?;
    debug_assert!(kp_is_zero(&r), "gcd divides");
    kp_monic(ring, &q)
}

/// Reads a polynomial in two distinguished variables as a polynomial in
/// `var_main` over `Q[t]/(m)`, `t` being `var_base`.  All other variables
/// must have been specialized away.
pub fn kpoly_from_bivariate(
    ring: &QuotientRing,
    p: &MultiPoly,
    var_main: usize,
    var_base: usize,
) -> Result<KPoly> {
    let mut out: KPoly = Vec::new();
    for coeff in p.coeffs_in(var_main) {
        let uni = coeff.to_univariate(var_base).ok_or_else(|| {
            Error::Computation(
                "polynomial involves variables beyond the quotient base".into(),
            )
        })?;
        out.push(ring.reduce(&uni));
    }
    Ok(kp_trim(ring, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn qp(coeffs: &[i64]) -> QPoly {
        qp_trim(coeffs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn inversion_in_a_field() {
        // Q[t]/(t^2 - 2)
        let ring = QuotientRing::new(&qp(&[-2, 0, 1]));
        match ring.invert(&qp(&[0, 1])) {
            Inverted::Inverse(inv) => {
                assert_eq!(ring.mul(&qp(&[0, 1]), &inv), ring.one());
                assert_eq!(inv, vec![q(0), BigRational::new(1.into(), 2.into())]);
            }
            other => panic!("expected inverse, got {other:?}"),
        }
        match ring.invert(&qp(&[1, 1])) {
            Inverted::Inverse(inv) => {
                assert_eq!(ring.mul(&qp(&[1, 1]), &inv), ring.one());
                assert_eq!(inv, qp(&[-1, 1]));
            }
            other => panic!("expected inverse, got {other:?}"),
        }
        assert_eq!(ring.invert(&ring.zero()), Inverted::Zero);
    }

    #[test]
    fn zero_divisor_splits_modulus() {
        // Q[t]/(t^2 - 1)
        let ring = QuotientRing::new(&qp(&[-1, 0, 1]));
        match ring.invert(&qp(&[-1, 1])) {
            Inverted::Split(f, g) => {
                assert_eq!(qp_mul(&f, &g), ring.modulus().clone());
                assert_eq!(f, qp(&[-1, 1]));
                assert_eq!(g, qp(&[1, 1]));
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn quotient_poly_gcd_finds_algebraic_root() {
        // over K = Q[t]/(t^2 - 2): gcd(a^2 - 2, a - t) = a - t
        let ring = QuotientRing::new(&qp(&[-2, 0, 1]));
        let p: KPoly = vec![qp(&[-2]), ring.zero(), ring.one()];
        let r: KPoly = vec![qp(&[0, -1]), ring.one()];
        let g = kp_gcd(&ring, &p, &r).unwrap();
        assert_eq!(g, kp_trim(&ring, r.clone()));
    }

    #[test]
    fn gcd_split_propagates() {
        // over K = Q[t]/(t^2 - 1): leading coefficient t - 1 is a zero divisor
        let ring = QuotientRing::new(&qp(&[-1, 0, 1]));
        let p: KPoly = vec![ring.one(), qp(&[-1, 1])];
        let other: KPoly = vec![ring.one(), ring.zero(), ring.one()];
        match kp_gcd(&ring, &other, &p) {
            Err(SplitEvent { factors: (f, g) }) => {
                assert_eq!(qp_mul(&f, &g), ring.modulus().clone());
            }
            Ok(g) => panic!("expected split, got gcd {g:?}"),
        }
    }

    #[test]
    fn squarefree_over_quotient() {
        // (a - 1)^2 * a over Q[t]/(t - 3) ~ Q
        let ring = QuotientRing::new(&qp(&[-3, 1]));
        let p: KPoly = vec![ring.zero(), ring.one(), qp(&[-2]), ring.one()];
        let sf = kp_squarefree(&ring, &p).unwrap();
        let expect: KPoly = vec![ring.zero(), qp(&[-1]), ring.one()];
        assert_eq!(sf, kp_trim(&ring, expect));
    }

    proptest! {
        #[test]
        fn prop_invert_consistent(coeffs in proptest::collection::vec(-4i64..=4, 2)) {
            // modulus t^2 - 1 with roots 1 and -1
            let ring = QuotientRing::new(&qp(&[-1, 0, 1]));
            let e = qp_trim(coeffs.iter().map(|&c| q(c)).collect());
            let at1 = super::super::gcd::qp_eval(&e, &q(1));
            let atm1 = super::super::gcd::qp_eval(&e, &q(-1));
            match ring.invert(&e) {
                Inverted::Zero => {
                    prop_assert!(at1.is_zero() && atm1.is_zero());
                }
                Inverted::Inverse(inv) => {
                    prop_assert!(!at1.is_zero() && !atm1.is_zero());
                    prop_assert_eq!(ring.mul(&e, &inv), ring.one());
                }
                Inverted::Split(f, g) => {
                    prop_assert!(at1.is_zero() != atm1.is_zero());
                    prop_assert_eq!(qp_mul(&f, &g), ring.modulus().clone());
                }
            }
        }
    }
}
