//! Sparse multivariate polynomials over exact rationals.
//!
//! A polynomial carries an ordered list of variable names fixed at
//! construction.  Terms are compared by total degree, with ties broken first
//! by the exponent of the last declared variable and then lexicographically
//! on the remaining variables in declared order, so declaring parameters
//! first and the distinguished variable last (for example `[x, y, t]`) makes
//! terms of equal degree sort by their power of `t`.  Display writes terms
//! in descending order and writes the
//! factors of each monomial in declared-variable order, which is the
//! canonical textual form used throughout: the quartic of the length-four
//! cycle family prints as
//! `t^4 + x*t^3 - 8*y*t^2 - 36*x*y*t - 27*x^2*y + 16*y^2`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Exponent vector; ordering is graded, then lexicographic from the last
/// variable backwards.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, den: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&den.0).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let n = self.0.len();
                if n == 0 {
                    return Ordering::Equal;
                }
                match self.0[n - 1].cmp(&other.0[n - 1]) {
                    Ordering::Equal => {
                        for (a, b) in self.0[..n - 1].iter().zip(&other.0[..n - 1]) {
                            match a.cmp(b) {
                                Ordering::Equal => continue,
                                ord => return ord,
                            }
                        }
                        Ordering::Equal
                    }
                    ord => ord,
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: &Arc<Vec<String>>) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<Vec<String>>) -> Self {
        MultiPoly::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Arc<Vec<String>>, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_int(vars: &Arc<Vec<String>>, c: i64) -> Self {
        MultiPoly::constant(vars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable with index `idx`.
    pub fn var(vars: &Arc<Vec<String>>, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), BigRational::one());
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builder for integer-coefficient polynomials in tests and tables.
    pub fn from_terms(vars: &Arc<Vec<String>>, terms: &[(i64, &[u32])]) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (c, exps) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent arity mismatch");
            let m = Monomial(exps.to_vec());
            let v = BigRational::from_integer(BigInt::from(*c));
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry = &*entry + &v;
        }
        map.retain(|_, v| !v.is_zero());
        MultiPoly {
            vars: vars.clone(),
            terms: map,
        }
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.total_degree() == 0)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn assert_same_vars(&self, other: &MultiPoly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            let coeff = c * BigRational::from_integer(BigInt::from(e));
            terms.insert(Monomial(exps), coeff);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Coefficients as a dense univariate polynomial in `var`; index `k`
    /// holds the coefficient of `var^k` as a polynomial with `var`-exponent
    /// zero.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![MultiPoly::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut exps = m.0.clone();
            exps[var] = 0;
            coeffs[k].terms.insert(Monomial(exps), c.clone());
        }
        coeffs
    }

    /// Rebuilds `sum coeffs[k] * var^k`; coefficients must not involve `var`.
    pub fn from_coeffs_in(
        vars: &Arc<Vec<String>>,
        var: usize,
        coeffs: &[MultiPoly],
    ) -> MultiPoly {
        let mut acc = MultiPoly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            assert_eq!(c.degree_in(var), 0, "coefficient involves the main variable");
            let mut shifted = c.clone();
            let mut terms = BTreeMap::new();
            for (m, v) in &shifted.terms {
                let mut exps = m.0.clone();
                exps[var] = k as u32;
                terms.insert(Monomial(exps), v.clone());
            }
            shifted.terms = terms;
            acc = &acc + &shifted;
        }
        acc
    }

    /// Substitutes a polynomial (over the same variable list) for `var`.
    pub fn substitute(&self, var: usize, replacement: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(replacement);
        let coeffs = self.coeffs_in(var);
        let mut acc = MultiPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * replacement) + c;
        }
        acc
    }

    /// Substitutes a rational constant for `var`.
    pub fn substitute_rational(&self, var: usize, value: &BigRational) -> MultiPoly {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff = &coeff * value;
            }
            let entry = terms.entry(Monomial(exps)).or_insert_with(BigRational::zero);
            *entry = &*entry + &coeff;
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Evaluates at a full rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (e, v) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    term = &term * v;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Re-expresses the polynomial over a different variable list, matching
    /// variables by name.  Fails if a dropped variable occurs with positive
    /// exponent or a used variable is missing from the new list.
    pub fn project_vars(&self, new_vars: &Arc<Vec<String>>) -> Result<MultiPoly> {
        let mapping: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => exps[j] = e,
                    None => {
                        return Err(Error::Computation(format!(
                            "variable {} still occurs with positive exponent",
                            self.vars[i]
                        )))
                    }
                }
            }
            terms.insert(Monomial(exps), c.clone());
        }
        Ok(MultiPoly {
            vars: new_vars.clone(),
            terms,
        })
    }

    /// Exact polynomial division; `None` when `self` is not a multiple of
    /// `div`.
    pub fn exact_div(&self, div: &MultiPoly) -> Option<MultiPoly> {
        self.assert_same_vars(div);
        assert!(!div.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars);
        let (dm, dc) = {
            let (m, c) = div.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.quotient(&dm);
            let qc = &rc / &dc;
            let mut t = MultiPoly::zero(&self.vars);
            t.terms.insert(qm, qc);
            quot = &quot + &t;
            rem = &rem - &(&t * div);
        }
        Some(quot)
    }

    /// Content-normalized form: clears denominators, divides by the integer
    /// content, and makes the leading coefficient positive.
    pub fn primitive_normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&n);
        }
        let factor = BigRational::new(denom_lcm, numer_gcd);
        let mut out = self.scale(&factor);
        if out.leading().map_or(false, |(_, c)| c.is_negative()) {
            out = -&out;
        }
        out
    }

    /// Resultant of `self` and `other` with respect to `var`, as the Bareiss
    /// determinant of the Sylvester matrix over the remaining variables.
    pub fn resultant_in(&self, var: usize, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let m = self.degree_in(var) as usize;
        let n = other.degree_in(var) as usize;
        if m == 0 && n == 0 {
            return MultiPoly::one(&self.vars);
        }
        if m == 0 {
            return self.pow(n as u32);
        }
        if n == 0 {
            return other.pow(m as u32);
        }
        let fc = self.coeffs_in(var);
        let gc = other.coeffs_in(var);
        let size = m + n;
        let zero = MultiPoly::zero(&self.vars);
        let mut sylvester = vec![vec![zero.clone(); size]; size];
        for i in 0..n {
            for (k, c) in fc.iter().enumerate() {
                sylvester[i][i + m - k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in gc.iter().enumerate() {
                sylvester[n + i][i + n - k] = c.clone();
            }
        }
        poly_det_bareiss(sylvester, &self.vars)
    }

    /// Dense coefficient vector when only `var` occurs; `None` otherwise.
    pub fn to_univariate(&self, var: usize) -> Option<Vec<BigRational>> {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if i != var && e != 0 {
                    return None;
                }
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Some(coeffs)
    }

    /// Builds a polynomial in `var` from a dense coefficient vector.
    pub fn from_univariate(
        vars: &Arc<Vec<String>>,
        var: usize,
        coeffs: &[BigRational],
    ) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; vars.len()];
            exps[var] = k as u32;
            terms.insert(Monomial(exps), c.clone());
        }
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }
}

/// Fraction-free determinant of a square matrix of polynomials.
pub fn poly_det_bareiss(mut m: Vec<Vec<MultiPoly>>, vars: &Arc<Vec<String>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars);
    }
    for row in &m {
        assert_eq!(row.len(), n, "non-square matrix");
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = MultiPoly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry = &*entry + c;
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry = &*entry - c;
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_vars(other);
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.product(m2);
                let c = c1 * c2;
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry = &*entry + &c;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }
}

fn fmt_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().rev().enumerate() {
            let neg = coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let factors: Vec<String> = mono
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        self.vars[v].clone()
                    } else {
                        format!("{}^{}", self.vars[v], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", fmt_coefficient(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coefficient(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
