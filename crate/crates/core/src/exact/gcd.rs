//! Polynomial gcds and squarefree structure.
//!
//! Univariate polynomials over the rationals are dense coefficient vectors
//! in ascending degree, trimmed so the zero polynomial is the empty vector.
//! Multivariate gcds use the primitive polynomial remainder sequence, which
//! is all the discriminant loci here need.

use num::rational::BigRational;
use num::traits::{One, Zero};

use super::poly::MultiPoly;

pub type QPoly = Vec<BigRational>;

pub fn qp_trim(mut p: QPoly) -> QPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn qp_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Degree, or `None` for the zero polynomial.
pub fn qp_degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn qp_monic(p: &[BigRational]) -> QPoly {
    match qp_degree(p) {
        None => Vec::new(),
        Some(d) => {
            let lc = p[d].clone();
            p[..=d].iter().map(|c| c / &lc).collect()
        }
    }
}

pub fn qp_scale(p: &[BigRational], k: &BigRational) -> QPoly {
    if k.is_zero() {
        return Vec::new();
    }
    p.iter().map(|c| c * k).collect()
}

pub fn qp_add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] + c;
    }
    qp_trim(out)
}

pub fn qp_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    qp_add(a, &qp_scale(b, &-BigRational::one()))
}

pub fn qp_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if qp_is_zero(a) || qp_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ca * cb);
        }
    }
    qp_trim(out)
}

/// Quotient and remainder with `b` nonzero.
pub fn qp_divmod(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let db = qp_degree(b).expect("division by zero polynomial");
    let mut rem = qp_trim(a.to_vec());
    let da = match qp_degree(&rem) {
        None => return (Vec::new(), Vec::new()),
        Some(d) => d,
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); da - db + 1];
    while let Some(dr) = qp_degree(&rem) {
        if dr < db {
            break;
        }
        let factor = &rem[dr] / &b[db];
        quot[dr - db] = factor.clone();
        for (k, c) in b[..=db].iter().enumerate() {
            let idx = dr - db + k;
            rem[idx] = &rem[idx] - &(&factor * c);
        }
        rem = qp_trim(rem);
    }
    (qp_trim(quot), rem)
}

pub fn qp_rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    qp_divmod(a, b).1
}

/// Exact quotient, or `None` when the remainder is nonzero.
pub fn qp_exact_div(a: &[BigRational], b: &[BigRational]) -> Option<QPoly> {
    let (q, r) = qp_divmod(a, b);
    if qp_is_zero(&r) {
        Some(q)
    } else {
        None
    }
}

/// Monic greatest common divisor.
pub fn qp_gcd(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut x = qp_trim(a.to_vec());
    let mut y = qp_trim(b.to_vec());
    while !qp_is_zero(&y) {
        let r = qp_rem(&x, &y);
        x = y;
        y = r;
    }
    qp_monic(&x)
}

pub fn qp_derivative(p: &[BigRational]) -> QPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    qp_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(i.into()))
            .collect(),
    )
}

pub fn qp_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Squarefree decomposition by repeated gcds: returns monic pairwise-coprime
/// factors with their multiplicities, so the input is the product of the
/// leading coefficient and `factor^multiplicity` over all entries.
pub fn squarefree_decomposition(p: &[BigRational]) -> Vec<(QPoly, u32)> {
    let p = qp_monic(p);
    let mut out = Vec::new();
    if qp_degree(&p).map_or(true, |d| d == 0) {
        return out;
    }
    let dp = qp_derivative(&p);
    let mut g = qp_gcd(&p, &dp);
    let mut w = qp_exact_div(&p, &g).expect("gcd divides");
    let mut mult = 1u32;
    while qp_degree(&w).map_or(false, |d| d > 0) {
        let y = qp_gcd(&w, &g);
        let factor = qp_exact_div(&w, &y).expect("gcd divides");
        if qp_degree(&factor).map_or(false, |d| d > 0) {
            out.push((qp_monic(&factor), mult));
        }
        w = y;
        if !qp_is_zero(&g) {
            g = qp_exact_div(&g, &w).map(qp_trim).unwrap_or_else(|| {
                panic!("squarefree decomposition invariant broken")
            });
        }
        mult += 1;
    }
    out
}

fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    let mut c = MultiPoly::zero(p.vars());
    for coeff in p.coeffs_in(var) {
        if !coeff.is_zero() {
            c = multi_gcd(&c, &coeff);
        }
    }
    c
}

fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    let dg = g.degree_in(var);
    let lc_g = g.coeffs_in(var)[dg as usize].clone();
    let vars = f.vars().clone();
    let mut r = f.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < dg {
            break;
        }
        let lc_r = r.coeffs_in(var)[dr as usize].clone();
        let mut shift_exps = vec![0u32; vars.len()];
        shift_exps[var] = dr - dg;
        let shift = MultiPoly::from_terms(&vars, &[(1, &shift_exps)]);
        r = &(&r * &lc_g) - &(&(&lc_r * &shift) * g);
    }
    r
}

/// Greatest common divisor by primitive polynomial remainder sequences,
/// content-normalized with positive leading coefficient.
pub fn multi_gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return q.primitive_normalized();
    }
    if q.is_zero() {
        return p.primitive_normalized();
    }
    let vars = p.vars();
    let main = (0..vars.len()).find(|&v| p.degree_in(v) > 0 || q.degree_in(v) > 0);
    let Some(var) = main else {
        return MultiPoly::one(vars);
    };
    let cp = content_in(p, var);
    let cq = content_in(q, var);
    let pp = p.exact_div(&cp).expect("content divides");
    let qq = q.exact_div(&cq).expect("content divides");
    let cont_gcd = multi_gcd(&cp, &cq);
    let (mut a, mut b) = if pp.degree_in(var) >= qq.degree_in(var) {
        (pp, qq)
    } else {
        (qq, pp)
    };
    loop {
        if b.is_zero() {
            break;
        }
        if b.degree_in(var) == 0 {
            a = MultiPoly::one(vars);
            break;
        }
        let r = pseudo_rem(&a, &b, var);
        let r = if r.is_zero() {
            r
        } else {
            let cr = content_in(&r, var);
            r.exact_div(&cr).expect("content divides")
        };
        a = b;
        b = r;
    }
    (&cont_gcd * &a).primitive_normalized()
}

/// Product of the distinct irreducible factors, content-normalized: the
/// polynomial divided by its gcd with all first partial derivatives.
pub fn squarefree_part(p: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut g = p.clone();
    let mut saw_variable = false;
    for v in 0..p.vars().len() {
        let d = p.derivative(v);
        if !d.is_zero() {
            saw_variable = true;
            g = multi_gcd(&g, &d);
        }
    }
    if !saw_variable {
        return MultiPoly::one(p.vars());
    }
    p.exact_div(&g)
        .expect("gcd with partials divides")
        .primitive_normalized()
}
