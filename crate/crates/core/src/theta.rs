//! Theta functions on the tropicalization of an anticanonical cycle.
//!
//! A cycle of rational curves `C = C_1 + ... + C_k` representing the
//! anticanonical class tropicalizes to a fan `B` in the dual space of the
//! divisor lattice: one ray per component along the dual basis vector
//! `C_i*`, one two-dimensional cone per adjacent pair.  Integral points of
//! `B` index theta functions, and the product of two of them expands as
//!
//! `theta_p . theta_q = sum over (beta, r) of N x^beta theta_r`
//!
//! where `beta` runs over the monoid of curve classes and `r` over the fan
//! points balancing the intersection numbers: `beta . C_k = p_k + q_k -
//! r_k` for every component.  The enumeration here is exact; the curve
//! counts `N` are supplied from outside except in the forced cases (the
//! empty class and single cycle components), so the degree-eight mirror
//! families come out with no free input at all.

use num::bigint::BigInt;
use num::traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::cone::in_cone;
use crate::delpezzo::{Degree, DelPezzo};
use crate::error::{Error, Result};
use crate::exact::poly::MultiPoly;
use crate::lattice::{IntegralLattice, LatticeVector, Sublattice};

/// A cycle of rational curves with its class data and the monoid of curve
/// classes used for the coefficient ring.
#[derive(Debug)]
pub struct CycleConfig {
    lattice: Arc<IntegralLattice>,
    classes: Vec<LatticeVector>,
    monoid: Vec<(String, LatticeVector)>,
}

impl CycleConfig {
    /// Validates and builds a cycle configuration on the given surface:
    /// the classes must sum to the anticanonical class, consecutive
    /// components must meet once (cyclically, for cycles of length three or
    /// more), and the monoid generators must be linearly independent with
    /// every component class in their cone.
    pub fn new(
        dp: &DelPezzo,
        classes: Vec<LatticeVector>,
        monoid: Vec<(String, LatticeVector)>,
    ) -> Result<CycleConfig> {
        let lattice = dp.picard().clone();
        let k = classes.len();
        if k == 0 {
            return Err(Error::Unsupported("a cycle needs at least one component".into()));
        }
        if k == 2 {
            return Err(Error::Unsupported(
                "non-cyclic configuration: two components meeting twice are not a simple cycle"
                    .into(),
            ));
        }
        let mut total = vec![BigInt::zero(); lattice.rank()];
        for c in &classes {
            for (t, x) in total.iter_mut().zip(c.coords()) {
                *t += x;
            }
        }
        if total != dp.anticanonical().coords() {
            return Err(Error::Unsupported(
                "component classes must sum to the anticanonical class".into(),
            ));
        }
        if k >= 3 {
            for i in 0..k {
                let j = (i + 1) % k;
                if classes[i].dot(&classes[j]) != BigInt::from(1) {
                    return Err(Error::Unsupported(format!(
                        "non-cyclic configuration: components {} and {} pair to {}",
                        i + 1,
                        j + 1,
                        classes[i].dot(&classes[j])
                    )));
                }
            }
        }
        let mut labels = BTreeSet::new();
        for (label, _) in &monoid {
            if label.is_empty() || !labels.insert(label.clone()) {
                return Err(Error::Unsupported(
                    "monoid generator labels must be nonempty and distinct".into(),
                ));
            }
        }
        let gen_vectors: Vec<LatticeVector> = monoid.iter().map(|(_, v)| v.clone()).collect();
        let span = Sublattice::from_generators(&lattice, &gen_vectors);
        if span.rank() != monoid.len() {
            return Err(Error::Unsupported(
                "monoid generators must be linearly independent".into(),
            ));
        }
        let gen_coords: Vec<Vec<BigInt>> =
            gen_vectors.iter().map(|g| g.coords().to_vec()).collect();
        for c in &classes {
            if !in_cone(c.coords(), &gen_coords) {
                return Err(Error::Unsupported(format!(
                    "component class {c} lies outside the monoid cone"
                )));
            }
        }
        Ok(CycleConfig {
            lattice,
            classes,
            monoid,
        })
    }

    /// The quadric cycle: a section of `F_2`, two fibers and the
    /// anticanonical-degree section, classes `s, f, s+2f, f` with `s` the
    /// class named `x` and `f` named `y`.
    pub fn f2() -> CycleConfig {
        let dp = DelPezzo::new(Degree::Quadric);
        let pic = dp.picard().clone();
        let s = pic.vector(&[-1, 1]);
        let f = pic.vector(&[1, 0]);
        let classes = vec![s.clone(), f.clone(), pic.vector(&[1, 1]), f.clone()];
        CycleConfig::new(&dp, classes, vec![("x".into(), s), ("y".into(), f)])
            .expect("builtin configuration is valid")
    }

    /// The product of two lines: four rulings in alternation, the two
    /// classes named `x` and `y`.
    pub fn p1p1() -> CycleConfig {
        let dp = DelPezzo::new(Degree::Quadric);
        let pic = dp.picard().clone();
        let u = pic.vector(&[1, 0]);
        let v = pic.vector(&[0, 1]);
        let classes = vec![u.clone(), v.clone(), u.clone(), v.clone()];
        CycleConfig::new(&dp, classes, vec![("x".into(), u), ("y".into(), v)])
            .expect("builtin configuration is valid")
    }

    /// The blown-up plane of degree eight: exceptional curve `E`, two
    /// fibers `f = l - e1` and a line, classes `E, f, E+f, f` with `E`
    /// named `x` and `f` named `y`.
    pub fn f1() -> CycleConfig {
        let dp = DelPezzo::new(Degree::Standard(8));
        let pic = dp.picard().clone();
        let e = pic.vector(&[0, 1]);
        let f = pic.vector(&[1, -1]);
        let classes = vec![e.clone(), f.clone(), pic.vector(&[1, 0]), f.clone()];
        CycleConfig::new(&dp, classes, vec![("x".into(), e), ("y".into(), f)])
            .expect("builtin configuration is valid")
    }

    /// The hexagon of the six lines on the degree-six surface, with the
    /// four-generator monoid `e1, e2, e3, l - e1 - e2 - e3` named
    /// `x, y, z, t`.
    pub fn degree_six_hexagon() -> CycleConfig {
        let dp = DelPezzo::new(Degree::Standard(6));
        let pic = dp.picard().clone();
        let classes = vec![
            pic.vector(&[0, 1, 0, 0]),
            pic.vector(&[1, -1, -1, 0]),
            pic.vector(&[0, 0, 1, 0]),
            pic.vector(&[1, 0, -1, -1]),
            pic.vector(&[0, 0, 0, 1]),
            pic.vector(&[1, -1, 0, -1]),
        ];
        let monoid = vec![
            ("x".into(), pic.vector(&[0, 1, 0, 0])),
            ("y".into(), pic.vector(&[0, 0, 1, 0])),
            ("z".into(), pic.vector(&[0, 0, 0, 1])),
            ("t".into(), pic.vector(&[1, -1, -1, -1])),
        ];
        CycleConfig::new(&dp, classes, monoid).expect("builtin configuration is valid")
    }

    pub fn cycle_length(&self) -> usize {
        self.classes.len()
    }

    pub fn lattice(&self) -> &Arc<IntegralLattice> {
        &self.lattice
    }

    pub fn classes(&self) -> &[LatticeVector] {
        &self.classes
    }

    pub fn monoid_generators(&self) -> &[(String, LatticeVector)] {
        &self.monoid
    }

    /// Pairings of a class with every cycle component.
    fn pairings(&self, beta: &LatticeVector) -> Vec<BigInt> {
        self.classes.iter().map(|c| beta.dot(c)).collect()
    }
}

/// An integral point of the tropicalization: nonnegative coordinates in
/// the dual basis `C_1*, ..., C_k*`, supported on a face of the cycle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanPoint {
    coeffs: Vec<u32>,
}

fn face_ok(coeffs: &[u32]) -> bool {
    let k = coeffs.len();
    let support: Vec<usize> = (0..k).filter(|&i| coeffs[i] > 0).collect();
    match support.as_slice() {
        [] | [_] => true,
        [i, j] => (i + 1) % k == *j || (j + 1) % k == *i,
        _ => false,
    }
}

impl FanPoint {
    pub fn new(coeffs: Vec<u32>) -> Result<FanPoint> {
        if !face_ok(&coeffs) {
            return Err(Error::Unsupported(format!(
                "support of {coeffs:?} is not a face of the cycle"
            )));
        }
        Ok(FanPoint { coeffs })
    }

    pub fn zero(k: usize) -> FanPoint {
        FanPoint {
            coeffs: vec![0; k],
        }
    }

    /// The primitive generator `C_i*` of the i-th ray (zero-indexed).
    pub fn ray(k: usize, i: usize) -> FanPoint {
        assert!(i < k, "ray index out of range");
        let mut coeffs = vec![0; k];
        coeffs[i] = 1;
        FanPoint { coeffs }
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] > 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The tropicalization fan: one ray per component and one two-dimensional
/// cone per cyclically adjacent pair.
pub struct Fan {
    rays: Vec<FanPoint>,
    two_cones: Vec<(usize, usize)>,
}

impl Fan {
    pub fn rays(&self) -> &[FanPoint] {
        &self.rays
    }

    pub fn two_cones(&self) -> &[(usize, usize)] {
        &self.two_cones
    }

    pub fn cone_count(&self) -> usize {
        self.rays.len() + self.two_cones.len()
    }
}

pub fn build_fan(config: &CycleConfig) -> Fan {
    let k = config.cycle_length();
    let rays = (0..k).map(|i| FanPoint::ray(k, i)).collect();
    let two_cones = if k >= 3 {
        (0..k).map(|i| (i, (i + 1) % k)).collect()
    } else {
        Vec::new()
    };
    Fan { rays, two_cones }
}

/// One term of a theta product: the curve class `beta` (as exponents over
/// the monoid generators and as a lattice class), the output fan point,
/// and the pairing certificate `beta . C_k` for every component.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTerm {
    pub beta_exponents: Vec<u32>,
    pub beta: LatticeVector,
    pub r: FanPoint,
    pub pairings: Vec<BigInt>,
}

/// A functional positive on every monoid generator, as weights per
/// generator plus the pairing budget coefficients over the components.
fn ample_weights(config: &CycleConfig) -> Result<(Vec<u64>, Vec<u64>)> {
    let k = config.cycle_length();
    let gens = config.monoid_generators();
    let mut lambda = vec![0u64; k];
    loop {
        let weights: Vec<BigInt> = gens
            .iter()
            .map(|(_, g)| {
                let mut w = BigInt::zero();
                for (i, c) in config.classes().iter().enumerate() {
                    w += BigInt::from(lambda[i]) * g.dot(c);
                }
                w
            })
            .collect();
        if weights.iter().all(|w| *w > BigInt::zero()) {
            let w64: Vec<u64> = weights
                .iter()
                .map(|w| u64::try_from(w).expect("small search weights"))
                .collect();
            return Ok((w64, lambda));
        }
        // advance the odometer over {0..3}^k
        let mut i = 0;
        loop {
            if i == k {
                return Err(Error::Computation(
                    "unbounded enumeration (non-pointed monoid)".into(),
                ));
            }
            if lambda[i] < 3 {
                lambda[i] += 1;
                break;
            }
            lambda[i] = 0;
            i += 1;
        }
    }
}

/// All terms of the product `theta_p . theta_q`: pairs of a monoid class
/// `beta` and a fan point `r` with `beta . C_k = p_k + q_k - r_k` for every
/// component.  The enumeration is bounded by pairing `p + q` against a
/// functional positive on the monoid, so it is finite exactly when such a
/// functional exists.
pub fn structure_terms(
    config: &CycleConfig,
    p: &FanPoint,
    q: &FanPoint,
) -> Result<Vec<StructureTerm>> {
    let k = config.cycle_length();
    if p.coefficients().len() != k || q.coefficients().len() != k {
        return Err(Error::LatticeMismatch(
            "fan point arity does not match the cycle".into(),
        ));
    }
    let (weights, lambda) = ample_weights(config)?;
    let budget: u64 = (0..k)
        .map(|i| lambda[i] * u64::from(p.coefficients()[i] + q.coefficients()[i]))
        .sum();
    let gens = config.monoid_generators();
    let mut exponents = vec![0u32; gens.len()];
    let mut terms: Vec<StructureTerm> = Vec::new();
    let mut seen = BTreeSet::new();
    enumerate_monoid(
        config,
        p,
        q,
        &weights,
        budget,
        0,
        &mut exponents,
        &mut seen,
        &mut terms,
    );
    terms.sort_by(|a, b| {
        (&a.beta_exponents, a.r.coefficients()).cmp(&(&b.beta_exponents, b.r.coefficients()))
    });
    Ok(terms)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_monoid(
    config: &CycleConfig,
    p: &FanPoint,
    q: &FanPoint,
    weights: &[u64],
    budget: u64,
    pos: usize,
    exponents: &mut Vec<u32>,
    seen: &mut BTreeSet<Vec<BigInt>>,
    terms: &mut Vec<StructureTerm>,
) {
    if pos == weights.len() {
        let gens = config.monoid_generators();
        let rank = config.lattice().rank();
        let mut coords = vec![BigInt::zero(); rank];
        for ((_, g), &e) in gens.iter().zip(exponents.iter()) {
            for (c, x) in coords.iter_mut().zip(g.coords()) {
                *c += x * BigInt::from(e);
            }
        }
        if !seen.insert(coords.clone()) {
            return;
        }
        let beta = config.lattice().vector_from_bigint(coords);
        let pairings = config.pairings(&beta);
        let k = config.cycle_length();
        let mut r = Vec::with_capacity(k);
        for i in 0..k {
            let ri = BigInt::from(p.coefficients()[i] + q.coefficients()[i]) - &pairings[i];
            if ri < BigInt::zero() {
                return;
            }
            r.push(u32::try_from(&ri).expect("fan coordinates stay small"));
        }
        if !face_ok(&r) {
            return;
        }
        terms.push(StructureTerm {
            beta_exponents: exponents.clone(),
            beta,
            r: FanPoint { coeffs: r },
            pairings,
        });
        return;
    }
    let mut e = 0u32;
    loop {
        let used = u64::from(e) * weights[pos];
        if used > budget {
            break;
        }
        exponents[pos] = e;
        enumerate_monoid(
            config,
            p,
            q,
            weights,
            budget - used,
            pos + 1,
            exponents,
            seen,
            terms,
        );
        e += 1;
    }
    exponents[pos] = 0;
}

/// Key for an externally supplied curve count: the two fan points
/// multiplied, the class `beta` by coordinates, and the output fan point.
pub type CountKey = (FanPoint, FanPoint, Vec<BigInt>, FanPoint);

/// The count for a term, when forced: 1 for the empty class and for single
/// cycle components.  Everything else needs outside input.
fn forced_count(config: &CycleConfig, term: &StructureTerm) -> Option<i64> {
    if term.beta.coords().iter().all(|c| c.is_zero()) {
        return Some(1);
    }
    if config.classes().iter().any(|c| c == &term.beta) {
        return Some(1);
    }
    None
}

fn resolve_count(
    config: &CycleConfig,
    p: &FanPoint,
    q: &FanPoint,
    term: &StructureTerm,
    counts: &BTreeMap<CountKey, i64>,
) -> Option<i64> {
    forced_count(config, term).or_else(|| {
        let key = (
            p.clone(),
            q.clone(),
            term.beta.coords().to_vec(),
            term.r.clone(),
        );
        counts.get(&key).copied()
    })
}

fn nonadjacent_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let adjacent = (i + 1) % k == j || (j + 1) % k == i;
            if !adjacent {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// The count keys the presentation would need beyond the forced defaults.
pub fn missing_counts(
    config: &CycleConfig,
    counts: &BTreeMap<CountKey, i64>,
) -> Result<Vec<CountKey>> {
    let k = config.cycle_length();
    let mut missing = Vec::new();
    for (i, j) in nonadjacent_pairs(k) {
        let p = FanPoint::ray(k, i);
        let q = FanPoint::ray(k, j);
        for term in structure_terms(config, &p, &q)? {
            if resolve_count(config, &p, &q, &term, counts).is_none() {
                missing.push((p.clone(), q.clone(), term.beta.coords().to_vec(), term.r));
            }
        }
    }
    Ok(missing)
}

/// One relation of the presentation: the product of two theta generators
/// minus its structure-constant expansion.
#[derive(Debug)]
pub struct Relation {
    lhs: (usize, usize),
    display: String,
    poly: MultiPoly,
}

impl Relation {
    /// Indices of the two generators multiplied on the left-hand side.
    pub fn generators(&self) -> (usize, usize) {
        self.lhs
    }

    /// The relation as a polynomial in the monoid variables followed by
    /// the theta generators.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display)
    }
}

/// A finite presentation of the theta algebra: named generators, the
/// coefficient variables, and one relation per non-adjacent generator
/// pair.
#[derive(Debug)]
pub struct ThetaPresentation {
    pub generator_names: Vec<String>,
    pub monoid_names: Vec<String>,
    pub relations: Vec<Relation>,
}

/// Computes the presentation, naming the theta generators `a, b, c, ...`
/// in cyclic order.  Counts beyond the forced defaults are read from
/// `counts`; a term not covered by either is an error naming the tuple.
pub fn presentation(
    config: &CycleConfig,
    counts: &BTreeMap<CountKey, i64>,
) -> Result<ThetaPresentation> {
    let k = config.cycle_length();
    if k < 4 {
        return Err(Error::Unsupported(
            "presentations need a cycle of at least four components".into(),
        ));
    }
    assert!(k <= 26, "generator naming runs a..z");
    let generator_names: Vec<String> = (0..k)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let monoid_names: Vec<String> = config
        .monoid_generators()
        .iter()
        .map(|(label, _)| label.clone())
        .collect();
    for name in &generator_names {
        if monoid_names.contains(name) {
            return Err(Error::Unsupported(format!(
                "monoid variable {name} collides with a theta generator name"
            )));
        }
    }
    let mut vars: Vec<String> = monoid_names.clone();
    vars.extend(generator_names.iter().cloned());
    let vars = Arc::new(vars);
    let offset = monoid_names.len();

    let mut relations = Vec::new();
    for (i, j) in nonadjacent_pairs(k) {
        let p = FanPoint::ray(k, i);
        let q = FanPoint::ray(k, j);
        let terms = structure_terms(config, &p, &q)?;
        let mut display = format!("{}*{}", generator_names[i], generator_names[j]);
        let mut lhs_exp = vec![0u32; vars.len()];
        lhs_exp[offset + i] += 1;
        lhs_exp[offset + j] += 1;
        let mut poly = MultiPoly::from_terms(&vars, &[(1, &lhs_exp)]);
        for term in &terms {
            let n = resolve_count(config, &p, &q, term, counts).ok_or_else(|| {
                Error::Computation(format!(
                    "count required for p={}, q={}, beta={}, r={}",
                    p, q, term.beta, term.r
                ))
            })?;
            let mut exp = vec![0u32; vars.len()];
            for (g, &e) in term.beta_exponents.iter().enumerate() {
                exp[g] = e;
            }
            for (g, &e) in term.r.coefficients().iter().enumerate() {
                exp[offset + g] = e;
            }
            poly = &poly - &MultiPoly::from_terms(&vars, &[(n, &exp)]);

            let mut factors: Vec<String> = Vec::new();
            if n.unsigned_abs() != 1 {
                factors.push(n.unsigned_abs().to_string());
            }
            for (name, &e) in monoid_names.iter().zip(&term.beta_exponents) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            for (name, &e) in generator_names.iter().zip(term.r.coefficients()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let rendered = if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            };
            display.push_str(if n >= 0 { " - " } else { " + " });
            display.push_str(&rendered);
        }
        relations.push(Relation {
            lhs: (i, j),
            display,
            poly,
        });
    }
    Ok(ThetaPresentation {
        generator_names,
        monoid_names,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn term_summary(terms: &[StructureTerm]) -> Vec<(String, Vec<u32>)> {
        terms
            .iter()
            .map(|t| (t.beta.to_string(), t.r.coefficients().to_vec()))
            .collect()
    }

    #[test]
    fn fan_shapes() {
        let square = build_fan(&CycleConfig::f2());
        assert_eq!(square.rays().len(), 4);
        assert_eq!(square.two_cones().len(), 4);
        assert_eq!(square.cone_count(), 8);

        // triangle of lines in the plane
        let dp = DelPezzo::new(Degree::Standard(9));
        let l = dp.picard().vector(&[1]);
        let triangle = CycleConfig::new(
            &dp,
            vec![l.clone(), l.clone(), l.clone()],
            vec![("x".into(), l.clone())],
        )
        .unwrap();
        let fan = build_fan(&triangle);
        assert_eq!(fan.rays().len(), 3);
        assert_eq!(fan.two_cones().len(), 3);

        // nodal cubic: a single component
        let cubic = CycleConfig::new(
            &dp,
            vec![dp.picard().vector(&[3])],
            vec![("x".into(), l)],
        )
        .unwrap();
        let fan = build_fan(&cubic);
        assert_eq!(fan.rays().len(), 1);
        assert_eq!(fan.two_cones().len(), 0);
    }

    #[test]
    fn config_validation_errors() {
        let dp = DelPezzo::new(Degree::Quadric);
        let pic = dp.picard().clone();
        let a = pic.vector(&[1, 0]);
        let b = pic.vector(&[0, 1]);
        // wrong anticanonical sum
        assert!(CycleConfig::new(
            &dp,
            vec![a.clone(), b.clone(), a.clone()],
            vec![("x".into(), a.clone())],
        )
        .is_err());
        // dependent monoid generators
        let err = CycleConfig::new(
            &dp,
            vec![a.clone(), b.clone(), a.clone(), b.clone()],
            vec![
                ("x".into(), a.clone()),
                ("y".into(), b.clone()),
                ("z".into(), pic.vector(&[1, 1])),
            ],
        )
        .unwrap_err();
        assert!(err.to_string().contains("independent"), "{err}");
        // class outside the monoid cone
        let err = CycleConfig::new(
            &dp,
            vec![a.clone(), b.clone(), a.clone(), b.clone()],
            vec![("x".into(), a.clone()), ("y".into(), pic.vector(&[1, 1]))],
        )
        .unwrap_err();
        assert!(err.to_string().contains("monoid cone"), "{err}");
        // broken cyclic pairing
        let dp6 = DelPezzo::new(Degree::Standard(6));
        let pic6 = dp6.picard().clone();
        let err = CycleConfig::new(
            &dp6,
            vec![
                pic6.vector(&[0, 1, 0, 0]),
                pic6.vector(&[0, 0, 1, 0]),
                pic6.vector(&[0, 0, 0, 1]),
                pic6.vector(&[3, -2, -2, -2]),
            ],
            vec![("x".into(), pic6.vector(&[1, 0, 0, 0]))],
        )
        .unwrap_err();
        assert!(err.to_string().contains("non-cyclic"), "{err}");
    }

    #[test]
    fn fan_point_faces() {
        assert!(FanPoint::new(vec![0, 0, 0, 0]).is_ok());
        assert!(FanPoint::new(vec![0, 3, 0, 0]).is_ok());
        assert!(FanPoint::new(vec![1, 2, 0, 0]).is_ok());
        assert!(FanPoint::new(vec![2, 0, 0, 1]).is_ok()); // wraps around
        assert!(FanPoint::new(vec![1, 0, 1, 0]).is_err());
        assert!(FanPoint::new(vec![1, 1, 1, 0]).is_err());
    }

    #[test]
    fn quadric_structure_terms() {
        let config = CycleConfig::f2();
        // opposite fibers: the unique section class, doubled first ray
        let terms = structure_terms(
            &config,
            &FanPoint::ray(4, 1),
            &FanPoint::ray(4, 3),
        )
        .unwrap();
        assert_eq!(term_summary(&terms), vec![("-a + b".to_string(), vec![2, 0, 0, 0])]);

        // section times opposite section: the fiber class, at the origin
        let terms = structure_terms(
            &config,
            &FanPoint::ray(4, 0),
            &FanPoint::ray(4, 2),
        )
        .unwrap();
        assert_eq!(term_summary(&terms), vec![("a".to_string(), vec![0, 0, 0, 0])]);

        // a square: stays on its own ray with no curve correction
        let terms = structure_terms(
            &config,
            &FanPoint::ray(4, 0),
            &FanPoint::ray(4, 0),
        )
        .unwrap();
        assert_eq!(term_summary(&terms), vec![("0".to_string(), vec![2, 0, 0, 0])]);
    }

    #[test]
    fn presentations_match_displayed_families() {
        let cases: [(CycleConfig, [&str; 2]); 3] = [
            (CycleConfig::f2(), ["a*c - y", "b*d - x*a^2"]),
            (CycleConfig::p1p1(), ["a*c - y", "b*d - x"]),
            (CycleConfig::f1(), ["a*c - y", "b*d - x*a"]),
        ];
        for (config, expected) in cases {
            let pres = presentation(&config, &BTreeMap::new()).unwrap();
            assert_eq!(pres.generator_names, vec!["a", "b", "c", "d"]);
            assert_eq!(pres.monoid_names, vec!["x", "y"]);
            let strs: Vec<String> =
                pres.relations.iter().map(|r| r.to_string()).collect();
            assert_eq!(strs, expected);
        }
    }

    #[test]
    fn relation_polynomials_match_displays() {
        let pres = presentation(&CycleConfig::f2(), &BTreeMap::new()).unwrap();
        let poly = pres.relations[1].poly();
        // b*d - x*a^2 in variables (x, y, a, b, c, d)
        let vars = poly.vars().clone();
        let expected = MultiPoly::from_terms(
            &vars,
            &[(1, &[0, 0, 0, 1, 0, 1]), (-1, &[1, 0, 2, 0, 0, 0])],
        );
        assert_eq!(poly, &expected);
    }

    #[test]
    fn hexagon_needs_conic_counts() {
        let config = CycleConfig::degree_six_hexagon();
        let err = presentation(&config, &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("count required"), "{err}");

        let missing = missing_counts(&config, &BTreeMap::new()).unwrap();
        let mut classes: Vec<String> = missing
            .iter()
            .map(|(_, _, beta, _)| {
                config
                    .lattice()
                    .vector_from_bigint(beta.clone())
                    .to_string()
            })
            .collect();
        classes.sort();
        assert_eq!(classes, vec!["l - e1", "l - e2", "l - e3"]);

        // supplying the three counts unblocks the presentation
        let mut counts = BTreeMap::new();
        for key in missing {
            counts.insert(key, 1);
        }
        assert!(missing_counts(&config, &counts).unwrap().is_empty());
        let pres = presentation(&config, &counts).unwrap();
        assert_eq!(pres.relations.len(), 9);
        let ad = pres
            .relations
            .iter()
            .find(|r| r.generators() == (0, 3))
            .unwrap();
        assert_eq!(ad.to_string(), "a*d - y*z*t");
    }

    fn arb_fan_point(k: usize) -> impl Strategy<Value = FanPoint> {
        (0..k, 0u32..3, 0u32..3).prop_map(move |(i, ci, cj)| {
            let mut coeffs = vec![0u32; k];
            coeffs[i] = ci;
            coeffs[(i + 1) % k] = cj;
            FanPoint::new(coeffs).unwrap()
        })
    }

    fn config_by_index(which: usize) -> CycleConfig {
        match which {
            0 => CycleConfig::f2(),
            1 => CycleConfig::p1p1(),
            _ => CycleConfig::f1(),
        }
    }

    proptest! {
        #[test]
        fn prop_product_commutes(
            which in 0usize..3,
            p in arb_fan_point(4),
            q in arb_fan_point(4),
        ) {
            let config = config_by_index(which);
            let pq = structure_terms(&config, &p, &q).unwrap();
            let qp = structure_terms(&config, &q, &p).unwrap();
            prop_assert_eq!(pq, qp);
        }

        #[test]
        fn prop_terms_balance(
            which in 0usize..3,
            p in arb_fan_point(4),
            q in arb_fan_point(4),
        ) {
            let config = config_by_index(which);
            for term in structure_terms(&config, &p, &q).unwrap() {
                // certificate matches a fresh pairing computation
                let fresh: Vec<BigInt> = config
                    .classes()
                    .iter()
                    .map(|c| term.beta.dot(c))
                    .collect();
                prop_assert_eq!(&fresh, &term.pairings);
                for i in 0..4 {
                    let lhs = &term.pairings[i];
                    let rhs = BigInt::from(p.coefficients()[i])
                        + BigInt::from(q.coefficients()[i])
                        - BigInt::from(term.r.coefficients()[i]);
                    prop_assert_eq!(lhs, &rhs);
                }
                // beta really is the declared combination of generators
                let gens = config.monoid_generators();
                let mut coords = vec![BigInt::zero(); 2];
                for ((_, g), &e) in gens.iter().zip(&term.beta_exponents) {
                    for (c, x) in coords.iter_mut().zip(g.coords()) {
                        *c += x * BigInt::from(e);
                    }
                }
                prop_assert_eq!(coords.as_slice(), term.beta.coords());
            }
        }
    }
}
