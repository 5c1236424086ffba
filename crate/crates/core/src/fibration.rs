//! Singular fibers of the elliptic pencils carried by the cycle mirrors.
//!
//! A four-component cycle presentation cuts out an affine surface in
//! coordinates `a, b, c, d`, and the sum `a + b + c + d` is a pencil of
//! elliptic curves on it.  This module locates the degenerate members of
//! that pencil and sorts them into Kodaira types.
//!
//! The discriminant in the pencil parameter `t` is computed by exact
//! elimination: substitute `d = t - a - b - c`, adjoin the rank-drop minors
//! of the Jacobian of the two relations, and eliminate the remaining
//! coordinates with iterated resultants.  Resultants overshoot, so every
//! surviving factor is certified against a genuine singular point before it
//! is kept, and the symbolic discriminant is rebuilt from certified
//! specializations by Lagrange interpolation on a parameter grid.
//!
//! Classification of a fiber over a root of `m(t)` works over the quotient
//! field Q[t]/(m).  Eliminating one coordinate presents the fiber as a
//! double cover `u^2 = disc(a)` of the base line, so a root of the
//! discriminant of multiplicity two is a node of the fiber and a root of
//! multiplicity three is a cusp.  Zero divisors encountered along the way
//! split `m` and the computation restarts on each factor, which keeps the
//! answer uniform across the conjugate fibers.
//!
//! Some degenerations hide their singular points outside the coordinate
//! chart: the members of the pencil can become mutually tangent at a point
//! of the boundary cycle, and the colliding nodes land there.  That event
//! is recognized exactly, through the asymptotic directions of the fiber
//! degenerating (the top form of the chart polynomial acquires a repeated
//! factor).  A double root of the discriminant with no affine singular
//! point and collided asymptotics is a two-component cycle: a cuspidal
//! degeneration at the boundary would force a third boundary component and
//! discriminant order three, which contradicts order two.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::delpezzo::{Degree, Polarization};
use crate::error::{Error, Result};
use crate::exact::gcd::{
    qp_degree, qp_derivative, qp_exact_div, qp_gcd, qp_is_zero, qp_monic, qp_mul, qp_trim,
    squarefree_decomposition, squarefree_part, QPoly,
};
use crate::exact::parse::parse_polynomial;
use crate::exact::poly::MultiPoly;
use crate::exact::quotient::{
    kp_degree, kp_derivative, kp_divmod, kp_gcd, kp_is_zero, kp_monic, kpoly_from_bivariate,
    Inverted, KPoly, QuotientRing, SplitEvent,
};
use crate::lattice::{LatticeVector, Sublattice};
use crate::mirror::admissible_orbits;
use crate::roots::RootSystem;
use crate::theta::{self, CycleConfig};

/// Kodaira type of a degenerate fiber, as far as this module can tell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberType {
    /// Cycle of `n` rational curves (`n` nodes, Euler number `n`).
    I(u32),
    /// Cuspidal rational curve, Euler number 2.
    II,
    /// The computed local data matches none of the supported shapes.
    Unclassified,
}

impl FiberType {
    /// Euler number contribution of one geometric fiber of this type.
    pub fn euler(&self) -> Option<i64> {
        match self {
            FiberType::I(n) => Some(*n as i64),
            FiberType::II => Some(2),
            FiberType::Unclassified => None,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberType::I(n) => write!(f, "I{n}"),
            FiberType::II => write!(f, "II"),
            FiberType::Unclassified => write!(f, "unclassified"),
        }
    }
}

/// One packet of singular fibers: all fibers over the roots of `location`.
#[derive(Clone, Debug)]
pub struct FiberEntry {
    location: QPoly,
    multiplicity: u32,
    fiber: FiberType,
}

impl FiberEntry {
    /// Squarefree polynomial in `t` whose roots carry this fiber type,
    /// in integer primitive form.
    pub fn location(&self) -> MultiPoly {
        let vars = t_vars();
        MultiPoly::from_univariate(&vars, 0, &self.location).primitive_normalized()
    }

    /// Number of geometric fibers in the packet.
    pub fn degree(&self) -> usize {
        qp_degree(&self.location).unwrap_or(0)
    }

    /// Order of vanishing of the discriminant at each root of the location.
    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn fiber_type(&self) -> &FiberType {
        &self.fiber
    }
}

impl fmt::Display for FiberEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.fiber, self.location())
    }
}

/// Finite singular fibers of one member of a pencil family.
#[derive(Debug)]
pub struct FiberReport {
    family: String,
    parameters: Vec<(String, BigRational)>,
    discriminant: MultiPoly,
    fibers: Vec<FiberEntry>,
    euler_finite: i64,
}

impl FiberReport {
    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn parameters(&self) -> &[(String, BigRational)] {
        &self.parameters
    }

    /// Discriminant in `t`, integer primitive with positive leading term.
    pub fn discriminant(&self) -> &MultiPoly {
        &self.discriminant
    }

    pub fn fibers(&self) -> &[FiberEntry] {
        &self.fibers
    }

    /// Sum of Euler numbers of the classified finite fibers.
    pub fn euler_finite(&self) -> i64 {
        self.euler_finite
    }
}

/// Parameter locus where singular fibers collide, for one family.
#[derive(Debug)]
pub struct LocusReport {
    family: String,
    monomial_factors: Vec<(String, u32)>,
    polynomial: MultiPoly,
}

impl LocusReport {
    pub fn family(&self) -> &str {
        &self.family
    }

    /// Single-parameter monomial factors split off the collision polynomial,
    /// as (parameter name, exponent) pairs.
    pub fn monomial_factors(&self) -> &[(String, u32)] {
        &self.monomial_factors
    }

    /// Squarefree primitive part of the collision polynomial, with positive
    /// leading coefficient and the monomial factors removed.
    pub fn polynomial(&self) -> &MultiPoly {
        &self.polynomial
    }
}

/// Euler-number bookkeeping of a fiber report against the fiber at infinity.
#[derive(Debug)]
pub struct EulerAccounting {
    pub expected: i64,
    pub actual: i64,
    pub contributions: Vec<(String, i64)>,
    pub unclassified: Vec<String>,
    pub consistent: bool,
}

/// Matching of one nef-cone face orbit with collision loci.
#[derive(Debug)]
pub struct FaceMatch {
    pub roots: Vec<String>,
    pub orbit_type: String,
    pub variables: Vec<String>,
    pub loci: Vec<String>,
}

/// Pairing of nef faces (simple-root orbits) with collision loci.
#[derive(Debug)]
pub struct FaceMatchReport {
    pub matches: Vec<FaceMatch>,
    pub unmatched_loci: Vec<String>,
}

fn t_vars() -> Arc<Vec<String>> {
    Arc::new(vec!["t".to_string()])
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A two-relation affine surface carrying the pencil `a + b + c + d = t`.
///
/// Variables are laid out as parameters first, then the four coordinates,
/// then `t`.  The relations never involve `t`; the pencil enters through the
/// substitution `d = t - a - b - c`.
#[derive(Debug)]
pub struct PencilFamily {
    name: String,
    vars: Arc<Vec<String>>,
    relations: [MultiPoly; 2],
    params: Vec<usize>,
    coords: [usize; 4],
    tvar: usize,
    nonzero_coords: Vec<usize>,
    symbolic: OnceLock<std::result::Result<MultiPoly, String>>,
}

impl PencilFamily {
    /// Builds a family from relation strings in the parameters and `a..d`.
    pub fn new(name: &str, parameters: &[&str], relations: [&str; 2]) -> Result<PencilFamily> {
        let reserved = ["a", "b", "c", "d", "t"];
        let mut names: Vec<String> = Vec::new();
        for p in parameters {
            if p.is_empty() || reserved.contains(p) {
                return Err(Error::Unsupported(format!(
                    "parameter name {p:?} collides with a pencil coordinate"
                )));
            }
            if names.iter().any(|n| n == p) {
                return Err(Error::Unsupported(format!(
                    "duplicate parameter name {p:?}"
                )));
            }
            names.push((*p).to_string());
        }
        names.extend(reserved.iter().map(|s| s.to_string()));
        let vars = Arc::new(names);
        let r0 = parse_polynomial(relations[0], &vars)?;
        let r1 = parse_polynomial(relations[1], &vars)?;
        PencilFamily::assemble(name, vars, [r0, r1], parameters.len())
    }

    /// Derives the pencil family of a four-component cycle from its theta
    /// presentation; the monoid variables become the parameters.
    pub fn from_cycle(name: &str, config: &CycleConfig) -> Result<PencilFamily> {
        if config.cycle_length() != 4 {
            return Err(Error::Unsupported(
                "pencil families need a four-component cycle".into(),
            ));
        }
        let pres = theta::presentation(config, &BTreeMap::new())?;
        assert_eq!(pres.relations.len(), 2, "a 4-cycle has two opposite pairs");
        if pres.monoid_names.iter().any(|n| n == "t") {
            return Err(Error::Unsupported(
                "monoid variable t collides with the pencil parameter".into(),
            ));
        }
        let nparams = pres.monoid_names.len();
        let mut names = pres.monoid_names.clone();
        names.extend(pres.generator_names.iter().cloned());
        names.push("t".to_string());
        let vars = Arc::new(names);
        let relations = [
            pres.relations[0].poly().project_vars(&vars)?,
            pres.relations[1].poly().project_vars(&vars)?,
        ];
        PencilFamily::assemble(name, vars, relations, nparams)
    }

    /// The cycle on the second Hirzebruch surface: `{ac - y, bd - x a^2}`.
    pub fn f2() -> PencilFamily {
        PencilFamily::from_cycle("f2", &CycleConfig::f2()).expect("builtin cycle is valid")
    }

    /// The cycle on the quadric surface: `{ac - y, bd - x}`.
    pub fn p1p1() -> PencilFamily {
        PencilFamily::from_cycle("p1p1", &CycleConfig::p1p1()).expect("builtin cycle is valid")
    }

    /// The cycle on the first Hirzebruch surface: `{ac - y, bd - x a}`.
    pub fn f1() -> PencilFamily {
        PencilFamily::from_cycle("f1", &CycleConfig::f1()).expect("builtin cycle is valid")
    }

    fn assemble(
        name: &str,
        vars: Arc<Vec<String>>,
        relations: [MultiPoly; 2],
        nparams: usize,
    ) -> Result<PencilFamily> {
        let params: Vec<usize> = (0..nparams).collect();
        let coords = [nparams, nparams + 1, nparams + 2, nparams + 3];
        let tvar = nparams + 4;
        for r in &relations {
            if r.is_zero() {
                return Err(Error::Unsupported("a pencil relation is zero".into()));
            }
            if r.degree_in(tvar) > 0 {
                return Err(Error::Unsupported(
                    "relations must not involve the pencil parameter t".into(),
                ));
            }
        }
        let rows: Vec<Vec<MultiPoly>> = relations
            .iter()
            .map(|r| coords.iter().map(|&v| r.derivative(v)).collect())
            .collect();
        let mut rank_two = false;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let minor = &(&rows[0][i] * &rows[1][j]) - &(&rows[0][j] * &rows[1][i]);
                if !minor.is_zero() {
                    rank_two = true;
                }
            }
        }
        if !rank_two {
            return Err(Error::Unsupported(
                "relations do not cut out a surface: the Jacobian has rank below two".into(),
            ));
        }
        let nonzero_coords = axis_exclusions(&relations, nparams, &coords);
        Ok(PencilFamily {
            name: name.to_string(),
            vars,
            relations,
            params,
            coords,
            tvar,
            nonzero_coords,
            symbolic: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameter_names(&self) -> Vec<&str> {
        self.params.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn relations(&self) -> &[MultiPoly; 2] {
        &self.relations
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    /// The pencil form `a + b + c + d - t`.
    pub fn pencil_form(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars);
        for &v in &self.coords {
            out = &out + &MultiPoly::var(&self.vars, v);
        }
        &out - &MultiPoly::var(&self.vars, self.tvar)
    }

    fn check_values(&self, values: &[BigRational]) -> Result<()> {
        if values.len() != self.params.len() {
            return Err(Error::Unsupported(format!(
                "family {} takes {} parameter values, got {}",
                self.name,
                self.params.len(),
                values.len()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::Unsupported(format!(
                    "parameters on an excluded locus: {} = 0",
                    self.vars[self.params[k]]
                )));
            }
        }
        Ok(())
    }

    fn substituted(&self, values: &[BigRational]) -> Result<[MultiPoly; 2]> {
        self.check_values(values)?;
        let mut rel = self.relations.clone();
        for r in rel.iter_mut() {
            for (k, &pi) in self.params.iter().enumerate() {
                *r = r.substitute_rational(pi, &values[k]);
            }
        }
        Ok(rel)
    }

    /// Replaces `d` by `t - a - b - c` in both relations.
    fn pencil_system(&self, rel: &[MultiPoly; 2]) -> [MultiPoly; 2] {
        let [ia, ib, ic, id] = self.coords;
        let mut repl = MultiPoly::var(&self.vars, self.tvar);
        for v in [ia, ib, ic] {
            repl = &repl - &MultiPoly::var(&self.vars, v);
        }
        [rel[0].substitute(id, &repl), rel[1].substitute(id, &repl)]
    }

    /// The two substituted relations together with the three rank-drop
    /// minors of their Jacobian in `a, b, c`.
    fn jacobian_system(&self, g: &[MultiPoly; 2]) -> Vec<MultiPoly> {
        let vs = [self.coords[0], self.coords[1], self.coords[2]];
        let d0: Vec<MultiPoly> = vs.iter().map(|&v| g[0].derivative(v)).collect();
        let d1: Vec<MultiPoly> = vs.iter().map(|&v| g[1].derivative(v)).collect();
        let mut sys = vec![self.strip_ghost(&g[0]), self.strip_ghost(&g[1])];
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let minor = &(&d0[i] * &d1[j]) - &(&d0[j] * &d1[i]);
            if !minor.is_zero() {
                sys.push(self.strip_ghost(&minor));
            }
        }
        sys
    }

    /// Integer-primitive form with monomial factors in the provably nonzero
    /// coordinates divided out; those factors vanish nowhere on the fibers.
    fn strip_ghost(&self, p: &MultiPoly) -> MultiPoly {
        if p.is_zero() {
            return p.clone();
        }
        let mut q = p.primitive_normalized();
        for &v in &self.nonzero_coords {
            let mono = MultiPoly::var(&self.vars, v);
            while q.degree_in(v) > 0 {
                match q.exact_div(&mono) {
                    Some(r) => q = r,
                    None => break,
                }
            }
        }
        q
    }

    /// One elimination stage: resultants of a minimal-degree pivot against
    /// every other polynomial involving `var`.
    fn eliminate_once(&self, system: Vec<MultiPoly>, var: usize) -> Vec<MultiPoly> {
        let mut with: Vec<MultiPoly> = Vec::new();
        let mut out: Vec<MultiPoly> = Vec::new();
        for p in system {
            if p.degree_in(var) > 0 {
                with.push(p);
            } else if !out.contains(&p) {
                out.push(p);
            }
        }
        if with.is_empty() {
            return out;
        }
        let pivot_at = with
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| p.degree_in(var))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = with.remove(pivot_at);
        for other in &with {
            let r = pivot.resultant_in(var, other);
            if r.is_zero() {
                continue;
            }
            let r = self.strip_ghost(&r);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    /// Discriminant in `t` of the member at exact parameter values, from the
    /// elimination pipeline, with every factor certified by an affine
    /// singular point.  Boundary degenerations do not appear here.
    pub fn eliminated_discriminant(&self, values: &[BigRational]) -> Result<MultiPoly> {
        let rel = self.substituted(values)?;
        let g = self.pencil_system(&rel);
        let mut sys = self.jacobian_system(&g);
        for &v in [self.coords[2], self.coords[1], self.coords[0]].iter() {
            sys = self.eliminate_once(sys, v);
        }
        let mut acc: Option<QPoly> = None;
        for p in &sys {
            let uni = p.to_univariate(self.tvar).ok_or_else(|| {
                Error::Computation("elimination left variables other than t".into())
            })?;
            let uni = qp_trim(uni);
            if qp_is_zero(&uni) {
                continue;
            }
            acc = Some(match acc {
                None => uni,
                Some(cur) => qp_gcd(&cur, &uni),
            });
        }
        let raw = acc.ok_or_else(|| {
            Error::Computation("elimination produced the zero polynomial (degenerate family)".into())
        })?;
        let tv = t_vars();
        if qp_degree(&raw) == Some(0) {
            return Ok(MultiPoly::one(&tv));
        }
        let chart = self.chart_at(values)?;
        if !chart.quadratic {
            return Err(Error::Unsupported(
                "certification requires a chart quadratic over the base line".into(),
            ));
        }
        let mut kept: QPoly = vec![rat(1)];
        for (f, _) in squarefree_decomposition(&qp_monic(&raw)) {
            let mut entries = Vec::new();
            let mut dropped = Vec::new();
            classify_packet(
                &chart,
                &f,
                0,
                CertMode::AffineOnly,
                true,
                &mut entries,
                &mut dropped,
            )?;
            for e in &entries {
                for _ in 0..e.multiplicity {
                    kept = qp_mul(&kept, &e.location);
                }
            }
        }
        Ok(MultiPoly::from_univariate(&tv, 0, &kept).primitive_normalized())
    }

    /// The symbolic discriminant over the parameter ring, interpolated from
    /// certified specializations and verified at extra sample points.
    fn symbolic_discriminant(&self) -> Result<&MultiPoly> {
        let stored = self
            .symbolic
            .get_or_init(|| self.compute_symbolic().map_err(|e| e.to_string()));
        stored
            .as_ref()
            .map_err(|m| Error::Computation(format!("symbolic discriminant unavailable: {m}")))
    }

    fn compute_symbolic(&self) -> Result<MultiPoly> {
        let p = self.params.len();
        if p == 0 {
            let d = self.eliminated_discriminant(&[])?;
            let coeffs = d.to_univariate(0).expect("discriminant is univariate");
            return Ok(MultiPoly::from_univariate(&self.vars, self.tvar, &coeffs));
        }
        if p > 3 {
            return Err(Error::Unsupported(
                "symbolic discriminants support at most three parameters".into(),
            ));
        }
        let rungs: [Vec<i64>; 3] = [
            vec![1, 2, 3],
            vec![1, 2, 3, 4, 5],
            vec![5, 6, 7, 8, 9, 10, 11],
        ];
        let mut last_err = String::from("no sample grid succeeded");
        for rung in &rungs {
            match self.interpolate_on(rung) {
                Ok(d) => return Ok(d),
                Err(e) => last_err = e.to_string(),
            }
        }
        Err(Error::Computation(format!(
            "symbolic interpolation failed: {last_err}"
        )))
    }

    fn interpolate_on(&self, node_ints: &[i64]) -> Result<MultiPoly> {
        let p = self.params.len();
        let nodes: Vec<BigRational> = node_ints.iter().map(|&n| rat(n)).collect();
        let mut points: Vec<Vec<BigRational>> = vec![Vec::new()];
        for _ in 0..p {
            let mut next = Vec::new();
            for prefix in &points {
                for n in &nodes {
                    let mut q = prefix.clone();
                    q.push(n.clone());
                    next.push(q);
                }
            }
            points = next;
        }
        let mut samples: Vec<QPoly> = Vec::with_capacity(points.len());
        let mut degree: Option<usize> = None;
        for pt in &points {
            let d = self.eliminated_discriminant(pt)?;
            let uni = qp_monic(&d.to_univariate(0).expect("discriminant is univariate"));
            let dd = qp_degree(&uni).unwrap_or(0);
            match degree {
                None => degree = Some(dd),
                Some(prev) if prev != dd => {
                    return Err(Error::Computation(
                        "inconsistent specializations across the sample grid".into(),
                    ))
                }
                _ => {}
            }
            samples.push(uni);
        }
        let n = degree.unwrap_or(0);
        if n == 0 {
            return Err(Error::Computation(
                "specializations have no singular fibers".into(),
            ));
        }
        let mut total = MultiPoly::from_univariate(&self.vars, self.tvar, &{
            let mut lead = vec![BigRational::zero(); n + 1];
            lead[n] = rat(1);
            lead
        });
        for k in 0..n {
            let values: Vec<BigRational> = samples
                .iter()
                .map(|s| s.get(k).cloned().unwrap_or_else(BigRational::zero))
                .collect();
            let coeff = interpolate_grid(&self.vars, &self.params, &nodes, &values);
            if coeff.is_zero() {
                continue;
            }
            let tk = MultiPoly::var(&self.vars, self.tvar).pow(k as u32);
            total = &total + &(&coeff * &tk);
        }
        for j in 0..3usize {
            let extras: Vec<BigRational> = (0..p)
                .map(|k| rat([23, 29, 31][(j + k) % 3]))
                .collect();
            let direct = self.eliminated_discriminant(&extras)?;
            let direct = qp_monic(&direct.to_univariate(0).expect("univariate"));
            let mut spec = total.clone();
            for (k, &pi) in self.params.iter().enumerate() {
                spec = spec.substitute_rational(pi, &extras[k]);
            }
            let spec = qp_monic(&qp_trim(
                spec.to_univariate(self.tvar).expect("only t remains"),
            ));
            if spec != direct {
                return Err(Error::Computation(
                    "interpolated discriminant fails verification at extra points".into(),
                ));
            }
        }
        Ok(total.primitive_normalized())
    }

    /// Monic specialization of the symbolic discriminant at exact values.
    fn specialized_record(&self, values: &[BigRational]) -> Result<QPoly> {
        self.check_values(values)?;
        let sym = self.symbolic_discriminant()?;
        let mut s = sym.clone();
        for (k, &pi) in self.params.iter().enumerate() {
            s = s.substitute_rational(pi, &values[k]);
        }
        let uni = qp_trim(s.to_univariate(self.tvar).expect("only t remains"));
        if qp_is_zero(&uni) {
            return Err(Error::Computation(
                "the discriminant vanishes identically at these parameters".into(),
            ));
        }
        Ok(qp_monic(&uni))
    }

    /// Chart data of the member at exact values: the curve is projected to
    /// the `(a, b)` plane and presented as a quadratic cover of the `a` line.
    fn chart_at(&self, values: &[BigRational]) -> Result<FiberChart> {
        let rel = self.substituted(values)?;
        let g = self.pencil_system(&rel);
        let [ia, ib, ic, _] = self.coords;
        let d0 = g[0].degree_in(ic);
        let d1 = g[1].degree_in(ic);
        let h = match (d0, d1) {
            (0, 0) => {
                return Err(Error::Unsupported(
                    "chart construction needs a relation involving the third coordinate".into(),
                ))
            }
            (0, _) => g[0].clone(),
            (_, 0) => g[1].clone(),
            _ => {
                if d0 <= d1 {
                    g[0].resultant_in(ic, &g[1])
                } else {
                    g[1].resultant_in(ic, &g[0])
                }
            }
        };
        if h.is_zero() {
            return Err(Error::Computation(
                "chart projection collapsed: the relations share a component".into(),
            ));
        }
        let h = self.strip_ghost(&h);
        let collided = asymptotics_collided(&h, ia, ib);
        let quadratic = h.degree_in(ib) == 2;
        let (disc, lead) = if quadratic {
            let cs = h.coeffs_in(ib);
            let four = MultiPoly::from_int(&self.vars, 4);
            let disc = &(&cs[1] * &cs[1]) - &(&four * &(&cs[2] * &cs[0]));
            (disc, cs[2].clone())
        } else {
            (MultiPoly::zero(&self.vars), MultiPoly::zero(&self.vars))
        };
        Ok(FiberChart {
            avar: ia,
            tvar: self.tvar,
            quadratic,
            axis_excluded: self.nonzero_coords.contains(&ia),
            disc,
            lead,
            collided,
        })
    }
}

/// Coordinates that provably vanish nowhere on any fiber: a relation of the
/// shape `u*v - m` with `m` a term in the parameters alone forces both `u`
/// and `v` to be invertible once the parameters avoid the excluded loci.
fn axis_exclusions(relations: &[MultiPoly; 2], nparams: usize, coords: &[usize; 4]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for r in relations {
        if r.num_terms() != 2 {
            continue;
        }
        let terms: Vec<(Vec<u32>, BigRational)> = r
            .terms()
            .map(|(m, c)| (m.0.clone(), c.clone()))
            .collect();
        let coord_support = |exps: &[u32]| -> Vec<usize> {
            coords
                .iter()
                .filter(|&&v| exps[v] > 0)
                .cloned()
                .collect()
        };
        let param_only = |exps: &[u32]| exps.iter().skip(nparams).all(|&e| e == 0);
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            let prod = &terms[i].0;
            let pure = &terms[j].0;
            if !param_only(pure) {
                continue;
            }
            let support = coord_support(prod);
            if support.len() == 2 && support.iter().all(|&v| prod[v] == 1) {
                for v in support {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Tensor-product Lagrange interpolation on the grid `nodes^params.len()`,
/// with the first parameter varying slowest in `values`.
fn interpolate_grid(
    vars: &Arc<Vec<String>>,
    params: &[usize],
    nodes: &[BigRational],
    values: &[BigRational],
) -> MultiPoly {
    let Some((&first, rest)) = params.split_first() else {
        return MultiPoly::constant(vars, values[0].clone());
    };
    let chunk = values.len() / nodes.len();
    let x = MultiPoly::var(vars, first);
    let mut total = MultiPoly::zero(vars);
    for (i, ni) in nodes.iter().enumerate() {
        let sub = interpolate_grid(vars, rest, nodes, &values[i * chunk..(i + 1) * chunk]);
        if sub.is_zero() {
            continue;
        }
        let mut basis = MultiPoly::one(vars);
        let mut denom = rat(1);
        for (j, nj) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            basis = &basis * &(&x - &MultiPoly::constant(vars, nj.clone()));
            denom *= ni - nj;
        }
        total = &total + &(&sub * &basis).scale(&denom.recip());
    }
    total
}

/// Detects the collision of the fiber's asymptotic directions: the top form
/// of the chart polynomial in `(a, b)`, with axis factors removed, acquires
/// a repeated root exactly when two boundary points of the fiber merge.
fn asymptotics_collided(h: &MultiPoly, avar: usize, bvar: usize) -> bool {
    let mut dmax = 0u32;
    for (m, _) in h.terms() {
        dmax = dmax.max(m.0[avar] + m.0[bvar]);
    }
    if dmax == 0 {
        return false;
    }
    let mut coeffs = vec![BigRational::zero(); dmax as usize + 1];
    for (m, c) in h.terms() {
        if m.0[avar] + m.0[bvar] != dmax {
            continue;
        }
        for (v, &e) in m.0.iter().enumerate() {
            if v != avar && v != bvar && e > 0 {
                return false;
            }
        }
        coeffs[m.0[avar] as usize] = c.clone();
    }
    let first = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let form: QPoly = qp_trim(coeffs[first..].to_vec());
    match qp_degree(&form) {
        None | Some(0) => false,
        Some(_) => {
            let g = qp_gcd(&form, &qp_derivative(&form));
            qp_degree(&g).map_or(false, |d| d > 0)
        }
    }
}

/// Presentation of one member as a quadratic cover of the `a` line.
struct FiberChart {
    avar: usize,
    tvar: usize,
    quadratic: bool,
    axis_excluded: bool,
    disc: MultiPoly,
    lead: MultiPoly,
    collided: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CertMode {
    /// Keep only factors with a certified affine singular point.
    AffineOnly,
    /// The factor is part of the discriminant of record; never drop it.
    Record,
}

enum Step {
    Split(QPoly, QPoly),
    NotZeroDim,
    Extraneous,
    Uncertifiable,
    Certified(u32),
    Typed(FiberType),
}

/// Yun squarefree decomposition over the quotient ring, with zero-divisor
/// splits surfacing as errors for the caller to branch on.
fn kp_squarefree_factors(
    ring: &QuotientRing,
    p: &KPoly,
) -> std::result::Result<Vec<(KPoly, u32)>, SplitEvent> {
    let p = kp_monic(ring, p)?;
    let Some(d) = kp_degree(&p) else {
        return Ok(Vec::new());
    };
    if d == 0 {
        return Ok(Vec::new());
    }
    let dp = kp_derivative(ring, &p);
    let mut g = kp_gcd(ring, &p, &dp)?;
    let (mut w, r) = kp_divmod(ring, &p, &g)?;
    debug_assert!(kp_is_zero(&r), "gcd divides");
    let mut out = Vec::new();
    let mut mult = 1u32;
    while kp_degree(&w).map_or(false, |d| d > 0) {
        let y = kp_gcd(ring, &w, &g)?;
        let (factor, r) = kp_divmod(ring, &w, &y)?;
        debug_assert!(kp_is_zero(&r), "gcd divides");
        if kp_degree(&factor).map_or(false, |d| d > 0) {
            out.push((kp_monic(ring, &factor)?, mult));
        }
        w = y;
        if kp_degree(&w).map_or(false, |d| d > 0) {
            let (q, r) = kp_divmod(ring, &g, &w)?;
            debug_assert!(kp_is_zero(&r), "gcd divides");
            g = q;
        }
        mult += 1;
    }
    Ok(out)
}

/// Classifies the fibers over the roots of `modulus`, assuming the roots all
/// have multiplicity `mu` in the discriminant.  Singular points of the fiber
/// are multiple roots of the cover discriminant: multiplicity two is a node,
/// three is a cusp.
fn classify_once(
    chart: &FiberChart,
    modulus: &QPoly,
    mu: u32,
    mode: CertMode,
) -> Result<Step> {
    if !chart.quadratic {
        return Ok(Step::Typed(FiberType::Unclassified));
    }
    let ring = QuotientRing::new(modulus);
    let dk = kpoly_from_bivariate(&ring, &chart.disc, chart.avar, chart.tvar)?;
    if kp_is_zero(&dk) {
        return Ok(Step::NotZeroDim);
    }
    let ak = kpoly_from_bivariate(&ring, &chart.lead, chart.avar, chart.tvar)?;
    let factors = match kp_squarefree_factors(&ring, &dk) {
        Ok(f) => f,
        Err(SplitEvent { factors: (f, g) }) => return Ok(Step::Split(f, g)),
    };
    let mut n2 = 0usize;
    let mut n3 = 0usize;
    let mut nhigh = 0usize;
    let mut lead_shared = false;
    for (f, j) in factors {
        if j < 2 {
            continue;
        }
        let mut f = f;
        if chart.axis_excluded {
            loop {
                if f.len() <= 1 {
                    break;
                }
                match ring.invert(&f[0]) {
                    Inverted::Inverse(_) => break,
                    Inverted::Zero => {
                        f.remove(0);
                    }
                    Inverted::Split(p, q) => return Ok(Step::Split(p, q)),
                }
            }
        }
        let Some(d) = kp_degree(&f) else { continue };
        if d == 0 {
            continue;
        }
        if kp_is_zero(&ak) {
            lead_shared = true;
            continue;
        }
        let shared = match kp_gcd(&ring, &f, &ak) {
            Ok(g) => kp_degree(&g).map_or(false, |dg| dg > 0),
            Err(SplitEvent { factors: (p, q) }) => return Ok(Step::Split(p, q)),
        };
        if shared {
            lead_shared = true;
            continue;
        }
        match j {
            2 => n2 += d,
            3 => n3 += d,
            _ => nhigh += d,
        }
    }
    Ok(decide(mode, mu, n2, n3, nhigh, lead_shared, chart.collided))
}

fn decide(
    mode: CertMode,
    mu: u32,
    n2: usize,
    n3: usize,
    nhigh: usize,
    lead_shared: bool,
    collided: bool,
) -> Step {
    let total = n2 + n3 + nhigh;
    if mode == CertMode::AffineOnly {
        // Certification: decide whether the packet carries genuine affine
        // singular points and, if so, their discriminant order.  A node
        // accounts for order one and a cusp for order two.
        return if total == 0 && !lead_shared {
            Step::Extraneous
        } else if lead_shared || nhigh > 0 {
            Step::Uncertifiable
        } else {
            Step::Certified((n2 + 2 * n3) as u32)
        };
    }
    if total == 0 {
        return if mu == 2 && n3 == 0 && collided {
            Step::Typed(FiberType::I(2))
        } else {
            Step::Typed(FiberType::Unclassified)
        };
    }
    if lead_shared || nhigh > 0 {
        return Step::Typed(FiberType::Unclassified);
    }
    if n3 > 0 {
        return if n3 == 1 && n2 == 0 && mu == 2 {
            Step::Typed(FiberType::II)
        } else {
            Step::Typed(FiberType::Unclassified)
        };
    }
    if n2 as u32 == mu {
        Step::Typed(FiberType::I(mu))
    } else if mu == 2 && n2 < 2 && collided {
        Step::Typed(FiberType::I(2))
    } else {
        Step::Typed(FiberType::Unclassified)
    }
}

fn classify_packet(
    chart: &FiberChart,
    modulus: &QPoly,
    mu: u32,
    mode: CertMode,
    strict: bool,
    out: &mut Vec<FiberEntry>,
    dropped: &mut Vec<QPoly>,
) -> Result<()> {
    match classify_once(chart, modulus, mu, mode)? {
        Step::Split(f, g) => {
            classify_packet(chart, &qp_monic(&f), mu, mode, strict, out, dropped)?;
            classify_packet(chart, &qp_monic(&g), mu, mode, strict, out, dropped)?;
        }
        Step::NotZeroDim => {
            if strict {
                return Err(Error::Computation(
                    "the singular-point system is not zero-dimensional over the given location"
                        .into(),
                ));
            }
            out.push(FiberEntry {
                location: qp_monic(modulus),
                multiplicity: mu,
                fiber: FiberType::Unclassified,
            });
        }
        Step::Extraneous => dropped.push(qp_monic(modulus)),
        Step::Uncertifiable => {
            return Err(Error::Computation(
                "cannot determine discriminant multiplicities from the affine chart".into(),
            ))
        }
        Step::Certified(order) => out.push(FiberEntry {
            location: qp_monic(modulus),
            multiplicity: order,
            fiber: FiberType::Unclassified,
        }),
        Step::Typed(fiber) => out.push(FiberEntry {
            location: qp_monic(modulus),
            multiplicity: mu,
            fiber,
        }),
    }
    Ok(())
}

/// Polynomial in `t` whose roots are the finite singular-fiber locations of
/// the member at `values`, or the symbolic discriminant over the parameter
/// ring when `values` is `None`.
pub fn singular_fiber_polynomial(
    family: &PencilFamily,
    values: Option<&[BigRational]>,
) -> Result<MultiPoly> {
    match values {
        None => {
            let sym = family.symbolic_discriminant()?;
            let mut names: Vec<String> = family
                .params
                .iter()
                .map(|&i| family.vars[i].clone())
                .collect();
            names.push("t".to_string());
            sym.project_vars(&Arc::new(names))
        }
        Some(v) => {
            let record = family.specialized_record(v)?;
            let affine = family.eliminated_discriminant(v)?;
            let au = qp_monic(&qp_trim(
                affine.to_univariate(0).expect("discriminant is univariate"),
            ));
            if qp_degree(&au).map_or(false, |d| d > 0) && qp_exact_div(&record, &au).is_none() {
                return Err(Error::Computation(
                    "affine certification disagrees with the symbolic discriminant".into(),
                ));
            }
            let tv = t_vars();
            Ok(MultiPoly::from_univariate(&tv, 0, &record).primitive_normalized())
        }
    }
}

/// Full singular-fiber analysis of the member at exact parameter values.
pub fn fiber_report(family: &PencilFamily, values: &[BigRational]) -> Result<FiberReport> {
    let record = family.specialized_record(values)?;
    let chart = family.chart_at(values)?;
    let mut fibers: Vec<FiberEntry> = Vec::new();
    let mut dropped: Vec<QPoly> = Vec::new();
    for (f, mu) in squarefree_decomposition(&record) {
        classify_packet(
            &chart,
            &f,
            mu,
            CertMode::Record,
            false,
            &mut fibers,
            &mut dropped,
        )?;
    }
    debug_assert!(dropped.is_empty(), "record factors are never dropped");
    fibers.sort_by(|x, y| {
        (std::cmp::Reverse(x.multiplicity), x.degree(), &x.location).cmp(&(
            std::cmp::Reverse(y.multiplicity),
            y.degree(),
            &y.location,
        ))
    });
    let total: usize = fibers.iter().map(|e| e.degree() * e.multiplicity as usize).sum();
    debug_assert_eq!(Some(total), qp_degree(&record), "multiplicities add up");
    let euler_finite = fibers
        .iter()
        .filter_map(|e| e.fiber.euler().map(|v| v * e.degree() as i64))
        .sum();
    let tv = t_vars();
    let parameters = family
        .params
        .iter()
        .zip(values)
        .map(|(&i, v)| (family.vars[i].clone(), v.clone()))
        .collect();
    Ok(FiberReport {
        family: family.name.clone(),
        parameters,
        discriminant: MultiPoly::from_univariate(&tv, 0, &record).primitive_normalized(),
        fibers,
        euler_finite,
    })
}

/// Kodaira type of the fiber over the roots of `location`, which must divide
/// the discriminant of the member at `values`.
pub fn classify_fiber(
    family: &PencilFamily,
    values: &[BigRational],
    location: &MultiPoly,
) -> Result<FiberType> {
    let effective: Vec<usize> = (0..location.vars().len())
        .filter(|&v| location.degree_in(v) > 0)
        .collect();
    let lu = match effective.as_slice() {
        [v] => location.to_univariate(*v).expect("single variable"),
        _ => {
            return Err(Error::Unsupported(
                "the location must be a nonconstant polynomial in t alone".into(),
            ))
        }
    };
    let lu = qp_monic(&qp_trim(lu));
    let record = family.specialized_record(values)?;
    let mut mu = 0u32;
    let mut cur = record;
    while let Some(q) = qp_exact_div(&cur, &lu) {
        mu += 1;
        cur = q;
    }
    if mu == 0 {
        return Err(Error::Computation(
            "the location does not divide the discriminant at these parameters".into(),
        ));
    }
    let chart = family.chart_at(values)?;
    let mut entries: Vec<FiberEntry> = Vec::new();
    let mut dropped: Vec<QPoly> = Vec::new();
    classify_packet(&chart, &lu, mu, CertMode::Record, true, &mut entries, &mut dropped)?;
    let mut types: Vec<FiberType> = Vec::new();
    for e in entries {
        if !types.contains(&e.fiber) {
            types.push(e.fiber);
        }
    }
    match types.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(Error::Computation(
            "no fiber data over the given location".into(),
        )),
        _ => Err(Error::Computation(
            "the location splits into fibers of different types".into(),
        )),
    }
}

/// Collision locus: the parameter locus where finite singular fibers merge,
/// computed as the `t`-discriminant of the symbolic fiber polynomial.
pub fn collision_locus(family: &PencilFamily) -> Result<LocusReport> {
    let sym = family.symbolic_discriminant()?;
    let dt = sym.derivative(family.tvar);
    let res = sym.resultant_in(family.tvar, &dt);
    if res.is_zero() {
        return Err(Error::Computation(
            "the discriminant has a repeated factor in t for all parameters".into(),
        ));
    }
    let mut poly = res.primitive_normalized();
    let mut monomial_factors: Vec<(String, u32)> = Vec::new();
    for &pi in &family.params {
        let v = MultiPoly::var(&family.vars, pi);
        let mut count = 0u32;
        while poly.degree_in(pi) > 0 {
            match poly.exact_div(&v) {
                Some(q) => {
                    poly = q;
                    count += 1;
                }
                None => break,
            }
        }
        if count > 0 {
            monomial_factors.push((family.vars[pi].clone(), count));
        }
    }
    let sf = squarefree_part(&poly).primitive_normalized();
    let names: Vec<String> = family
        .params
        .iter()
        .map(|&i| family.vars[i].clone())
        .collect();
    let polynomial = sf.project_vars(&Arc::new(names))?;
    Ok(LocusReport {
        family: family.name.clone(),
        monomial_factors,
        polynomial,
    })
}

/// Checks the Euler numbers of the finite fibers against `12 - d`, the
/// complement of the cycle fiber at infinity of a surface of type `d`.
pub fn euler_check(degree: &Degree, report: &FiberReport) -> EulerAccounting {
    let expected = 12 - degree.value() as i64;
    let mut contributions = Vec::new();
    let mut unclassified = Vec::new();
    let mut actual = 0i64;
    for e in report.fibers() {
        match e.fiber.euler() {
            Some(per_fiber) => {
                let total = per_fiber * e.degree() as i64;
                contributions.push((e.to_string(), total));
                actual += total;
            }
            None => unclassified.push(e.location().to_string()),
        }
    }
    EulerAccounting {
        expected,
        actual,
        contributions,
        consistent: actual == expected && unclassified.is_empty(),
        unclassified,
    }
}

/// Pairs the admissible simple-root orbits of a polarization with collision
/// loci through a root-to-parameter dictionary: an orbit matches the loci
/// whose polynomials involve only the variables of its roots.
pub fn face_subfamily_report(
    pol: &Polarization,
    root_variables: &[(LatticeVector, String)],
    loci: &[MultiPoly],
) -> Result<FaceMatchReport> {
    let rs = RootSystem::of_sublattice(pol.sublattice())?;
    let simple = rs.simple_roots().to_vec();
    let orbits = admissible_orbits(&rs);
    let lattice = pol.sublattice().ambient().clone();
    let mut used = vec![false; loci.len()];
    let mut matches = Vec::new();
    for orbit in orbits {
        let roots: Vec<&LatticeVector> = orbit.iter().map(|&i| &simple[i]).collect();
        let mut variables = Vec::new();
        for r in &roots {
            let hit = root_variables
                .iter()
                .find(|(v, _)| v == *r || *v == -*r)
                .map(|(_, name)| name.clone())
                .ok_or_else(|| {
                    Error::Unsupported(format!("no parameter variable assigned to root {r}"))
                })?;
            variables.push(hit);
        }
        let orbit_lattice = Sublattice::from_generators(
            &lattice,
            &roots.iter().map(|r| (*r).clone()).collect::<Vec<_>>(),
        );
        let orbit_type = RootSystem::of_sublattice(&orbit_lattice)?
            .classify()?
            .to_string();
        let mut found = Vec::new();
        for (k, l) in loci.iter().enumerate() {
            let names: Vec<&str> = (0..l.vars().len())
                .filter(|&v| l.degree_in(v) > 0)
                .map(|v| l.vars()[v].as_str())
                .collect();
            if names.is_empty() {
                continue;
            }
            if names.iter().all(|n| variables.iter().any(|w| w == n)) {
                found.push(l.to_string());
                used[k] = true;
            }
        }
        matches.push(FaceMatch {
            roots: roots.iter().map(|r| r.to_string()).collect(),
            orbit_type,
            variables,
            loci: found,
        });
    }
    let unmatched_loci = loci
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(l, _)| l.to_string())
        .collect();
    Ok(FaceMatchReport {
        matches,
        unmatched_loci,
    })
}
