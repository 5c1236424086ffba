//! Weak del Pezzo surfaces through their Picard lattices.
//!
//! A surface of degree `d <= 9` is modeled by `I_{1,9-d}` with
//! anticanonical class `3l - e1 - ... - e_{9-d}`; the quadric geometry
//! (degree 8 of product type, written `8'`) uses `II_{1,1}` with
//! anticanonical class `2a + 2b`.  Which roots of the anticanonical
//! complement are classes of (-2)-curves is recorded by a polarization: a
//! saturated negative definite sublattice `L`, with the curve classes the
//! simple roots of `L`.  Exceptional classes (`E^2 = -1`, `E.k = 1`) are
//! enumerated exactly by reducing to a fixed-norm problem in the
//! anticanonical complement, and the effective cone is spanned by the
//! simple roots together with the exceptional classes that stay
//! irreducible, i.e. pair nonnegatively with every simple root.  In
//! degrees eight and nine the negative curves alone do not span the Picard
//! lattice and the ruling classes join the generator list.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use num::Integer;
use std::fmt;
use std::sync::Arc;

use crate::cone::{dual_cone_under_pairing, extremal_ray_indices, PolyCone};
use crate::error::{Error, Result};
use crate::exact::matrix::RatMatrix;
use crate::lattice::{signature, DefiniteEnumerator, IntegralLattice, LatticeVector, Sublattice};
use crate::roots::RootSystem;

/// Degree of a weak del Pezzo surface; `Quadric` is the product-type
/// degree-8 geometry, printed `8'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Standard(u8),
    Quadric,
}

impl Degree {
    pub fn value(&self) -> u8 {
        match self {
            Degree::Standard(d) => *d,
            Degree::Quadric => 8,
        }
    }

    pub fn parse(s: &str) -> Result<Degree> {
        match s {
            "8'" | "8p" | "8prime" => Ok(Degree::Quadric),
            _ => match s.parse::<u8>() {
                Ok(d) if (1..=9).contains(&d) => Ok(Degree::Standard(d)),
                _ => Err(Error::Parse(format!(
                    "degree must be 1..9 or 8' (got {s:?})"
                ))),
            },
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Standard(d) => write!(f, "{d}"),
            Degree::Quadric => write!(f, "8'"),
        }
    }
}

/// A weak del Pezzo surface, presented by lattice data.
pub struct DelPezzo {
    degree: Degree,
    picard: Arc<IntegralLattice>,
    anticanonical: LatticeVector,
}

impl DelPezzo {
    pub fn new(degree: Degree) -> DelPezzo {
        match degree {
            Degree::Standard(d) => {
                assert!((1..=9).contains(&d), "degree out of range");
                let n = (9 - d) as usize;
                let picard = IntegralLattice::hyperbolic_unimodular(n);
                let mut coords = vec![3i64];
                coords.extend(std::iter::repeat(-1).take(n));
                let anticanonical = picard.vector(&coords);
                DelPezzo {
                    degree,
                    picard,
                    anticanonical,
                }
            }
            Degree::Quadric => {
                let picard = IntegralLattice::hyperbolic_plane();
                let anticanonical = picard.vector(&[2, 2]);
                DelPezzo {
                    degree,
                    picard,
                    anticanonical,
                }
            }
        }
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn picard(&self) -> &Arc<IntegralLattice> {
        &self.picard
    }

    pub fn anticanonical(&self) -> &LatticeVector {
        &self.anticanonical
    }

    pub fn anticanonical_complement(&self) -> Sublattice {
        Sublattice::from_generators(&self.picard, &[self.anticanonical.clone()])
            .orthogonal_complement()
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        RootSystem::of_sublattice(&self.anticanonical_complement())
    }

    /// All classes with `E^2 = -1` and `E.k = 1`, sorted by coordinates.
    pub fn exceptional_classes(&self) -> Result<Vec<LatticeVector>> {
        let k = &self.anticanonical;
        let d = BigInt::from(self.degree.value());
        let gk = self.picard.gram().mul_vec(k.coords());
        let Some(v0) = solve_dot_one(&gk) else {
            return Ok(Vec::new());
        };
        let perp = self.anticanonical_complement();
        let basis = perp.basis_matrix();
        // write E = v0 + B u; then E^2 = -1 becomes a fixed-norm condition
        // on u shifted by the complement part of v0
        let mut w0: Vec<BigRational> = Vec::with_capacity(self.picard.rank());
        for i in 0..self.picard.rank() {
            let vi = BigRational::from_integer(v0[i].clone());
            let fi = BigRational::new(k.coords()[i].clone(), d.clone());
            w0.push(vi - fi);
        }
        let b_rat = RatMatrix::from_int(basis);
        let center = b_rat
            .solve(&w0)
            .expect("complement part of v0 lies in the span of the complement");
        let neg_gram = -&perp.gram();
        let enumerator = DefiniteEnumerator::from_int_gram(&neg_gram)?;
        // -(E_perp)^2 = 1 + 1/d
        let target = BigRational::one() + BigRational::new(BigInt::one(), d.clone());
        let mut out = Vec::new();
        for u in enumerator.enumerate(&center, &target) {
            let bu = basis.mul_vec(&u);
            let coords: Vec<BigInt> = v0.iter().zip(&bu).map(|(a, b)| a + b).collect();
            let e = self.picard.vector_from_bigint(coords);
            debug_assert_eq!(e.norm(), BigInt::from(-1));
            debug_assert_eq!(e.dot(k), BigInt::one());
            out.push(e);
        }
        out.sort_by(|a, b| a.coords().cmp(b.coords()));
        Ok(out)
    }

    /// Exceptional classes pairing nonnegatively with every positive root
    /// of the polarization: the ones that remain irreducible on the
    /// polarized surface.
    pub fn irreducible_exceptional_classes(
        &self,
        pol: &Polarization,
    ) -> Result<Vec<LatticeVector>> {
        Ok(self
            .exceptional_classes()?
            .into_iter()
            .filter(|e| {
                pol.simple_roots()
                    .iter()
                    .all(|alpha| e.dot(alpha) >= BigInt::zero())
            })
            .collect())
    }

    /// Generators of the effective cone: simple roots of the polarization
    /// and irreducible exceptional classes, plus ruling classes in degrees
    /// without enough negative curves.
    pub fn effective_generators(&self, pol: &Polarization) -> Result<Vec<LatticeVector>> {
        let mut gens: Vec<LatticeVector> = pol.simple_roots().to_vec();
        gens.extend(self.irreducible_exceptional_classes(pol)?);
        match self.degree {
            Degree::Standard(8) => {
                // the fiber class l - e1 alongside the section e1
                gens.push(self.picard.vector(&[1, -1]));
            }
            Degree::Standard(9) => {
                gens.push(self.picard.vector(&[1]));
            }
            Degree::Quadric => {
                // both rulings; when b - a is a curve, b stays effective
                // as (b - a) + a and drops out as a non-extremal generator
                gens.push(self.picard.vector(&[1, 0]));
                gens.push(self.picard.vector(&[0, 1]));
            }
            _ => {}
        }
        Ok(gens)
    }

    /// Extreme rays of the effective cone.
    pub fn effective_rays(&self, pol: &Polarization) -> Result<Vec<LatticeVector>> {
        let gens = self.effective_generators(pol)?;
        let coords: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        let idx = extremal_ray_indices(&coords);
        let mut rays: Vec<LatticeVector> = idx.into_iter().map(|i| gens[i].clone()).collect();
        rays.sort_by(|a, b| a.coords().cmp(b.coords()));
        Ok(rays)
    }

    /// The nef cone, dual to the effective cone under the intersection
    /// pairing.
    pub fn nef_cone(&self, pol: &Polarization) -> Result<PolyCone> {
        let rays = self.effective_rays(pol)?;
        let coords: Vec<Vec<BigInt>> = rays.iter().map(|r| r.coords().to_vec()).collect();
        Ok(dual_cone_under_pairing(self.picard.gram(), &coords))
    }

    pub fn nef_rays(&self, pol: &Polarization) -> Result<Vec<LatticeVector>> {
        let cone = self.nef_cone(pol)?;
        assert!(
            cone.lineality.is_empty(),
            "nef cone of a del Pezzo surface is pointed"
        );
        Ok(cone
            .rays
            .into_iter()
            .map(|c| self.picard.vector_from_bigint(c))
            .collect())
    }

    /// For each simple root of the polarization, the face of the nef cone
    /// on that root's wall.  Every returned face contains the anticanonical
    /// ray.
    pub fn nef_faces_through_anticanonical(
        &self,
        pol: &Polarization,
    ) -> Result<Vec<(LatticeVector, Vec<LatticeVector>)>> {
        let nef = self.nef_rays(pol)?;
        let mut faces = Vec::new();
        for alpha in pol.simple_roots() {
            let face: Vec<LatticeVector> = nef
                .iter()
                .filter(|r| r.dot(alpha).is_zero())
                .cloned()
                .collect();
            faces.push((alpha.clone(), face));
        }
        Ok(faces)
    }
}

/// Checks that `l` is a polarization of the del Pezzo surface: a saturated
/// negative definite sublattice of the anticanonical complement.
pub fn validate_polarization(dp: &DelPezzo, l: &Sublattice) -> Result<()> {
    if l.ambient() != dp.picard() {
        return Err(Error::LatticeMismatch(
            "polarization lives in a different lattice".into(),
        ));
    }
    for b in l.basis_vectors() {
        if !b.dot(dp.anticanonical()).is_zero() {
            return Err(Error::Unsupported(format!(
                "polarization generator {} is not orthogonal to the anticanonical class",
                b
            )));
        }
    }
    let (pos, _, zero) = signature(&l.gram());
    if pos > 0 || zero > 0 {
        return Err(Error::Unsupported(
            "polarization must be negative definite".into(),
        ));
    }
    if !l.is_saturated() {
        return Err(Error::Unsupported(
            "polarization must be saturated; replace it by its saturation".into(),
        ));
    }
    Ok(())
}

/// A validated polarization carried with its positive and simple roots, the
/// classes of (-2)-curves on the polarized surface.
pub struct Polarization {
    sublattice: Sublattice,
    positive: Vec<LatticeVector>,
    simple: Vec<LatticeVector>,
}

impl Polarization {
    pub fn new(dp: &DelPezzo, sublattice: &Sublattice) -> Result<Polarization> {
        validate_polarization(dp, sublattice)?;
        let rs = RootSystem::of_sublattice(sublattice)?;
        Ok(Polarization {
            sublattice: sublattice.clone(),
            positive: rs.positive_roots().to_vec(),
            simple: rs.simple_roots().to_vec(),
        })
    }

    /// The full polarization, `L` the whole anticanonical complement.
    pub fn full(dp: &DelPezzo) -> Result<Polarization> {
        Polarization::new(dp, &dp.anticanonical_complement())
    }

    /// The trivial polarization `L = 0`: no curve is a (-2)-curve.
    pub fn trivial(dp: &DelPezzo) -> Polarization {
        let sub = Sublattice::from_generators(dp.picard(), &[]);
        Polarization::new(dp, &sub).expect("the zero sublattice is a polarization")
    }

    pub fn sublattice(&self) -> &Sublattice {
        &self.sublattice
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.positive
    }

    pub fn simple_roots(&self) -> &[LatticeVector] {
        &self.simple
    }
}

/// One integral solution of `sum coeffs_i x_i = 1`, if the coefficients are
/// coprime.
fn solve_dot_one(coeffs: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut combo = vec![BigInt::zero(); coeffs.len()];
    for (i, c) in coeffs.iter().enumerate() {
        let eg = g.extended_gcd(c);
        for x in combo.iter_mut() {
            *x = &*x * &eg.x;
        }
        combo[i] = eg.y;
        g = eg.gcd;
    }
    if g.is_one() {
        Some(combo)
    } else {
        None
    }
}
