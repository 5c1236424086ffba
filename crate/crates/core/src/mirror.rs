//! Markings of the rational elliptic surface lattice and mirror duality
//! for lattice-polarized del Pezzo surfaces.
//!
//! A rational elliptic surface has `H^2` isometric to the rank ten
//! hyperbolic lattice `I(1,9)` with basis `l, e1, ..., e9`; the class
//! `f0 = 3l - e1 - ... - e9` of an elliptic fiber is isotropic.  A marking
//! of type `d` is a cycle of classes `delta_1, ..., delta_d` summing to
//! `f0` (components of an `I_d` fiber); its span `F_d` is an affine
//! `A_{d-1}` lattice and the quotient of `F_d^perp` by its radical `<f0>`
//! recovers the anticanonical complement `f_d^perp` of the degree `d` del
//! Pezzo surface.  The quadric marking `8'` uses the affine diagram branch
//! node instead of a chain end and pairs with the quadric surface the same
//! way.
//!
//! For a saturated negative definite sublattice `L` of `f_d^perp` the
//! mirror dual is `Lcheck = L^perp \cap f_d^perp`.  Strata of the period
//! domain correspond to saturations `sat<L, alpha>` over roots `alpha`,
//! organized here into a poset of isomorphism classes where two strata are
//! identified when both the sublattices and their mirror duals are
//! isometric.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::delpezzo::{Degree, DelPezzo};
use crate::error::{Error, Result};
use crate::exact::matrix::{IntMatrix, RatMatrix};
use crate::lattice::{
    find_positive_definite_isometry, IntegralLattice, LatticeVector, Sublattice,
};
use crate::roots::{gram_root_type, RootSystem, RootSystemType};

/// Simple roots of the affine `E8` diagram in `I(1,9)`: `alpha_i` is
/// `e_i - e_{i+1}` for `1 <= i <= 8` and `alpha_0` is `l - e1 - e2 - e3`.
fn alpha(lat: &Arc<IntegralLattice>, i: usize) -> LatticeVector {
    assert!(i <= 8, "affine E8 has simple roots alpha_0 .. alpha_8");
    assert_eq!(lat.rank(), 10, "marking roots live in I(1,9)");
    let mut coords = vec![0i64; 10];
    if i == 0 {
        coords[0] = 1;
        coords[1] = -1;
        coords[2] = -1;
        coords[3] = -1;
    } else {
        coords[i] = 1;
        coords[i + 1] = -1;
    }
    lat.vector(&coords)
}

/// The nine simple roots `alpha_1, ..., alpha_8, alpha_0` of the affine
/// `E8` diagram inside `I(1,9)`, in that order.
pub fn affine_e8_simple_roots(lat: &Arc<IntegralLattice>) -> Vec<LatticeVector> {
    let mut roots: Vec<LatticeVector> = (1..=8).map(|i| alpha(lat, i)).collect();
    roots.push(alpha(lat, 0));
    roots
}

/// The isotropic fiber class `f0 = 3l - e1 - ... - e9` of `I(1,9)`.
pub fn fiber_class(lat: &Arc<IntegralLattice>) -> LatticeVector {
    assert_eq!(lat.rank(), 10, "the fiber class lives in I(1,9)");
    let mut coords = vec![-1i64; 10];
    coords[0] = 3;
    lat.vector(&coords)
}

/// A marking of `I(1,9)`: the components of an `I_d` fiber, classes
/// `delta_1, ..., delta_d` summing to the fiber class `f0`.
pub struct Marking {
    degree: Degree,
    lattice: Arc<IntegralLattice>,
    deltas: Vec<LatticeVector>,
    fiber: LatticeVector,
}

impl Marking {
    /// Marking of type `d` for `1 <= d <= 9`, or of quadric type `8'`.
    ///
    /// The chain markings take `delta_j = alpha_{9-j}` for `j < d` and
    /// close up with `delta_d = f0 - (delta_1 + ... + delta_{d-1})`; the
    /// quadric marking runs `alpha_8, ..., alpha_3` and then turns onto
    /// the branch node `alpha_0` before closing up.
    pub fn new(degree: Degree) -> Marking {
        let lattice = IntegralLattice::hyperbolic_unimodular(9);
        let fiber = fiber_class(&lattice);
        let mut deltas: Vec<LatticeVector> = match degree {
            Degree::Standard(d) => {
                assert!((1..=9).contains(&d), "marking types are 1..9 and 8'");
                (1..d as usize).map(|j| alpha(&lattice, 9 - j)).collect()
            }
            Degree::Quadric => {
                let mut v: Vec<LatticeVector> =
                    (3..=8).rev().map(|i| alpha(&lattice, i)).collect();
                v.push(alpha(&lattice, 0));
                v
            }
        };
        let mut last = fiber.clone();
        for delta in &deltas {
            last = &last - delta;
        }
        deltas.push(last);
        let marking = Marking {
            degree,
            lattice,
            deltas,
            fiber,
        };
        marking.verify().expect("marking identities");
        marking
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn lattice(&self) -> &Arc<IntegralLattice> {
        &self.lattice
    }

    pub fn deltas(&self) -> &[LatticeVector] {
        &self.deltas
    }

    pub fn fiber(&self) -> &LatticeVector {
        &self.fiber
    }

    /// The marking sublattice `F_d` spanned by the deltas.
    pub fn span(&self) -> Sublattice {
        Sublattice::from_generators(&self.lattice, &self.deltas)
    }

    /// The orthogonal complement `F_d^perp` in `I(1,9)`.
    pub fn complement(&self) -> Sublattice {
        self.span().orthogonal_complement()
    }

    /// Checks the marking identities: the deltas sum to the fiber class
    /// and their pairing matrix is the affine cycle of the right length
    /// (a single isotropic class for `d = 1`, the doubled bond for
    /// `d = 2`, the `d`-cycle with adjacent pairings 1 otherwise).
    pub fn verify(&self) -> Result<()> {
        let n = self.deltas.len();
        let mut sum = self.lattice.zero_vector();
        for delta in &self.deltas {
            sum = &sum + delta;
        }
        if sum != self.fiber {
            return Err(Error::Computation(
                "marking components do not sum to the fiber class".into(),
            ));
        }
        for (i, a) in self.deltas.iter().enumerate() {
            for (j, b) in self.deltas.iter().enumerate().skip(i) {
                let pairing = a.dot(b);
                let expected: i64 = if i == j {
                    if n == 1 {
                        0
                    } else {
                        -2
                    }
                } else if n == 2 {
                    2
                } else if (j - i) == 1 || (j - i) == n - 1 {
                    1
                } else {
                    0
                };
                if pairing != BigInt::from(expected) {
                    return Err(Error::Computation(format!(
                        "marking pairing delta_{}.delta_{} is {}, expected {}",
                        i + 1,
                        j + 1,
                        pairing,
                        expected
                    )));
                }
            }
        }
        Ok(())
    }
}

pub use crate::delpezzo::validate_polarization;

/// The mirror dual of a polarization: all classes orthogonal to both the
/// polarization and the anticanonical class.  Always saturated.
pub fn mirror_sublattice(dp: &DelPezzo, l: &Sublattice) -> Result<Sublattice> {
    validate_polarization(dp, l)?;
    Ok(mirror_unchecked(dp, l))
}

fn mirror_unchecked(dp: &DelPezzo, l: &Sublattice) -> Sublattice {
    let f_span =
        Sublattice::from_generators(dp.picard(), std::slice::from_ref(dp.anticanonical()));
    l.sum(&f_span).orthogonal_complement()
}

/// A polarization together with its mirror dual.
pub struct MirrorPair {
    degree: Degree,
    polarization: Sublattice,
    mirror: Sublattice,
}

impl MirrorPair {
    pub fn new(dp: &DelPezzo, polarization: &Sublattice) -> Result<MirrorPair> {
        let mirror = mirror_sublattice(dp, polarization)?;
        Ok(MirrorPair {
            degree: dp.degree(),
            polarization: polarization.clone(),
            mirror,
        })
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn polarization(&self) -> &Sublattice {
        &self.polarization
    }

    pub fn mirror(&self) -> &Sublattice {
        &self.mirror
    }

    /// Root system type of the roots inside the polarization.
    pub fn polarization_root_type(&self) -> Result<RootSystemType> {
        Ok(gram_root_type(&self.polarization.gram())?.0)
    }

    /// Root system type of the roots inside the mirror dual.
    pub fn mirror_root_type(&self) -> Result<RootSystemType> {
        Ok(gram_root_type(&self.mirror.gram())?.0)
    }
}

/// An isometric embedding of the anticanonical complement `f_d^perp` into
/// `I(1,9)` landing in the marked complement `F_d^perp`, recorded by the
/// images of the canonical basis.
pub struct MarkedEmbedding {
    marking: Marking,
    source: Sublattice,
    images: Vec<LatticeVector>,
}

impl MarkedEmbedding {
    pub fn degree(&self) -> Degree {
        self.marking.degree()
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    /// The anticanonical complement inside the del Pezzo Picard lattice.
    pub fn source(&self) -> &Sublattice {
        &self.source
    }

    /// Images in `I(1,9)` of the canonical basis of the source.
    pub fn images(&self) -> &[LatticeVector] {
        &self.images
    }

    /// Image of a vector of the anticanonical complement.
    pub fn embed(&self, v: &LatticeVector) -> Result<LatticeVector> {
        let coords = self.source.coordinates_of(v).ok_or_else(|| {
            Error::LatticeMismatch("vector is not in the anticanonical complement".into())
        })?;
        let lat = self.marking.lattice();
        let mut out = vec![BigInt::zero(); lat.rank()];
        for (c, image) in coords.iter().zip(&self.images) {
            for (k, x) in image.coords().iter().enumerate() {
                out[k] += c * x;
            }
        }
        Ok(lat.vector_from_bigint(out))
    }
}

/// Embeddings of `f_d^perp` into the marked complement `F_d^perp`, up to
/// composition with isometries of `I(1,9)` fixing the fiber class.
///
/// There is exactly one class for every type: translations along the
/// radical `<f0>` absorb the choice of lift and every isometry of the
/// definite quotient extends, so the returned vector always has length
/// one.  The degree 9 embedding is the empty map.
pub fn enumerate_embeddings(degree: Degree) -> Result<Vec<MarkedEmbedding>> {
    let dp = DelPezzo::new(degree);
    let source = dp.anticanonical_complement();
    let marking = Marking::new(degree);
    let fperp = marking.complement();
    let (radical, quotient, section) = fperp.radical_quotient_and_section("F_perp mod radical");
    let expected_radical =
        Sublattice::from_generators(marking.lattice(), std::slice::from_ref(marking.fiber()));
    assert_eq!(radical, expected_radical, "radical of F_d^perp is <f0>");
    let src_gram = source.gram();
    let t = find_positive_definite_isometry(&-&src_gram, &-quotient.gram())?
        .ok_or_else(|| Error::Computation("no embedding into the marked complement".into()))?;
    let lat = marking.lattice().clone();
    let mut images = Vec::with_capacity(t.cols());
    for j in 0..t.cols() {
        let col = t.column(j);
        let mut coords = vec![BigInt::zero(); lat.rank()];
        for (c, s) in col.iter().zip(&section) {
            for (k, x) in s.coords().iter().enumerate() {
                coords[k] += c * x;
            }
        }
        images.push(lat.vector_from_bigint(coords));
    }
    for (i, a) in images.iter().enumerate() {
        assert!(a.dot(marking.fiber()).is_zero(), "image misses F_d^perp");
        for (j, b) in images.iter().enumerate() {
            assert_eq!(a.dot(b), *src_gram.get(i, j), "embedding breaks the form");
        }
    }
    Ok(vec![MarkedEmbedding {
        marking,
        source,
        images,
    }])
}

/// One isomorphism class of polarizations reachable from a base
/// polarization by adjoining roots and saturating.
pub struct Stratum {
    sublattice: Sublattice,
    mirror: Sublattice,
    root_type: RootSystemType,
    mirror_root_type: RootSystemType,
    dimension: usize,
    fibers: Option<Vec<usize>>,
}

impl Stratum {
    /// Representative sublattice, in Picard coordinates.
    pub fn sublattice(&self) -> &Sublattice {
        &self.sublattice
    }

    /// Mirror dual of the representative.
    pub fn mirror(&self) -> &Sublattice {
        &self.mirror
    }

    pub fn rank(&self) -> usize {
        self.sublattice.rank()
    }

    /// Type of the roots inside the representative.
    pub fn root_type(&self) -> &RootSystemType {
        &self.root_type
    }

    /// Type of the roots inside the mirror dual.
    pub fn mirror_root_type(&self) -> &RootSystemType {
        &self.mirror_root_type
    }

    /// Dimension of the corresponding period stratum.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Predicted multiplicities of the finite singular fibers, when the
    /// root type allows a prediction of `I_n` shape.
    pub fn fibers(&self) -> Option<&[usize]> {
        self.fibers.as_deref()
    }
}

/// The poset of strata isomorphism classes over a base polarization,
/// graded by rank, with covers given by adjoining a single root.
pub struct StrataPoset {
    degree: Degree,
    strata: Vec<Stratum>,
    covers: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Strata in discovery order; index 0 is the base class and ranks are
    /// nondecreasing along the list.
    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    /// Cover relations `(lower, upper)` between stratum indices, where the
    /// upper class is reached from the lower by adjoining one root.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }
}

/// Roots of the anticanonical complement with machine-integer coordinates
/// and a precomputed pairing table, shared across the strata search.
struct AmbientRoots {
    /// Ambient pairing matrix.
    gram: Vec<Vec<i64>>,
    /// Positive roots, ambient coordinates.
    coords: Vec<Vec<i64>>,
    /// Gram images `G r` of the positive roots.
    gram_coords: Vec<Vec<i64>>,
    /// Pairings between positive roots.
    pairings: Vec<Vec<i64>>,
    /// Positive roots as lattice vectors, for classification.
    vectors: Vec<LatticeVector>,
}

fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| i64::try_from(x).expect("coordinate fits a machine integer"))
        .collect()
}

impl AmbientRoots {
    fn new(dp: &DelPezzo, system: &RootSystem) -> AmbientRoots {
        let gram: Vec<Vec<i64>> = {
            let g = dp.picard().gram();
            (0..g.rows())
                .map(|i| (0..g.cols()).map(|j| i64::try_from(g.get(i, j)).unwrap()).collect())
                .collect()
        };
        let coords: Vec<Vec<i64>> = system
            .positive_roots()
            .iter()
            .map(|r| to_i64(r.coords()))
            .collect();
        let gram_coords: Vec<Vec<i64>> = coords
            .iter()
            .map(|r| gram.iter().map(|row| dot_i64(row, r)).collect())
            .collect();
        let pairings = coords
            .iter()
            .map(|a| gram_coords.iter().map(|gb| dot_i64(a, gb)).collect())
            .collect();
        AmbientRoots {
            gram,
            coords,
            gram_coords,
            pairings,
            vectors: system.positive_roots().to_vec(),
        }
    }

    /// Both signs of the positive roots, for type classification.
    fn signed_vectors(&self, indices: &[usize]) -> Vec<LatticeVector> {
        let mut out = Vec::with_capacity(2 * indices.len());
        for &i in indices {
            out.push(self.vectors[i].clone());
            out.push(-&self.vectors[i]);
        }
        out
    }
}

/// One side of a stratum class (the sublattice or its mirror dual), with
/// everything the merge test needs in machine integers.
struct SideData {
    sub: Sublattice,
    basis: Vec<Vec<i64>>,
    det: i128,
    /// Indices of the positive ambient roots lying in the sublattice.
    roots: Vec<usize>,
    /// Indices of the simple roots of that closed subsystem.
    simples: Vec<usize>,
}

impl SideData {
    /// `other_basis` spans the orthogonal partner, so membership in this
    /// (saturated) sublattice is orthogonality to it.
    fn new(sub: Sublattice, other_basis: &[Vec<i64>], amb: &AmbientRoots) -> SideData {
        let basis: Vec<Vec<i64>> = (0..sub.rank())
            .map(|j| to_i64(&sub.basis_matrix().column(j)))
            .collect();
        let roots: Vec<usize> = (0..amb.coords.len())
            .filter(|&i| {
                other_basis
                    .iter()
                    .map(|b| dot_i64(b, &amb.gram_coords[i]))
                    .all(|p| p == 0)
            })
            .collect();
        let member_pos: HashMap<Vec<i64>, usize> = roots
            .iter()
            .map(|&i| (amb.coords[i].clone(), i))
            .collect();
        let simples: Vec<usize> = roots
            .iter()
            .copied()
            .filter(|&i| {
                !roots.iter().any(|&j| {
                    let diff: Vec<i64> = amb.coords[i]
                        .iter()
                        .zip(&amb.coords[j])
                        .map(|(a, b)| a - b)
                        .collect();
                    i != j && member_pos.contains_key(&diff)
                })
            })
            .collect();
        let det = det_i128(&gram_of(&basis, amb));
        SideData {
            sub,
            basis,
            det,
            roots,
            simples,
        }
    }

    fn fingerprint(&self) -> (usize, i128, usize, usize) {
        (self.sub.rank(), self.det, self.roots.len(), self.simples.len())
    }

    fn root_system(&self, amb: &AmbientRoots) -> RootSystem {
        RootSystem::from_roots(self.sub.ambient(), amb.signed_vectors(&self.roots))
    }
}

/// Gram matrix of the span of `basis` columns under the ambient pairing.
fn gram_of(basis: &[Vec<i64>], amb: &AmbientRoots) -> Vec<Vec<i64>> {
    let images: Vec<Vec<i64>> = basis
        .iter()
        .map(|b| amb.gram.iter().map(|row| dot_i64(row, b)).collect())
        .collect();
    basis
        .iter()
        .map(|a| images.iter().map(|gb| dot_i64(a, gb)).collect())
        .collect()
}

fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        return 1;
    }
    sign * a[n - 1][n - 1]
}

/// Decides whether two saturated sublattices whose roots span them are
/// isometric, by mapping the simple roots of one onto roots of the other
/// with matching pairings and checking that the induced linear map carries
/// one lattice into the other.  With equal determinants, one inclusion of
/// equal-covolume lattices is equality.
fn isometric_by_roots(a: &SideData, b: &SideData, amb: &AmbientRoots) -> bool {
    if a.fingerprint() != b.fingerprint() {
        return false;
    }
    if a.simples.is_empty() {
        return true;
    }
    let target: Vec<Vec<i64>> = a
        .simples
        .iter()
        .map(|&i| a.simples.iter().map(|&j| amb.pairings[i][j]).collect())
        .collect();
    // images are signed roots of b: (index, sign)
    let mut images: Vec<(usize, i64)> = Vec::with_capacity(a.simples.len());
    root_image_dfs(a, b, amb, &target, &mut images)
}

fn root_image_dfs(
    a: &SideData,
    b: &SideData,
    amb: &AmbientRoots,
    target: &[Vec<i64>],
    images: &mut Vec<(usize, i64)>,
) -> bool {
    let pos = images.len();
    if pos == a.simples.len() {
        return extends_integrally(a, b, amb, images);
    }
    for &cand in &b.roots {
        for sign in [1i64, -1] {
            let ok = images.iter().enumerate().all(|(j, &(img, img_sign))| {
                sign * img_sign * amb.pairings[cand][img] == target[pos][j]
            });
            if ok {
                images.push((cand, sign));
                if root_image_dfs(a, b, amb, target, images) {
                    return true;
                }
                images.pop();
            }
        }
    }
    false
}

/// Checks that the root-image assignment extends to a map sending the
/// whole of `a` into `b` integrally.
fn extends_integrally(
    a: &SideData,
    b: &SideData,
    amb: &AmbientRoots,
    images: &[(usize, i64)],
) -> bool {
    let dim = amb.coords[0].len();
    let simple_cols: Vec<Vec<BigInt>> = a
        .simples
        .iter()
        .map(|&i| amb.coords[i].iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let simple_matrix = RatMatrix::from_int(&IntMatrix::from_columns(&simple_cols, dim));
    let b_basis_cols: Vec<Vec<BigInt>> = b
        .basis
        .iter()
        .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let b_matrix = RatMatrix::from_int(&IntMatrix::from_columns(&b_basis_cols, dim));
    for col in &a.basis {
        let rhs: Vec<BigRational> = col
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        let Some(q) = simple_matrix.solve(&rhs) else {
            return false;
        };
        let mut image = vec![BigRational::zero(); dim];
        for (qi, &(idx, sign)) in q.iter().zip(images) {
            for (k, &x) in amb.coords[idx].iter().enumerate() {
                image[k] += qi * BigRational::from_integer(BigInt::from(sign * x));
            }
        }
        match b_matrix.solve(&image) {
            Some(y) if y.iter().all(|c| c.is_integer()) => {}
            _ => return false,
        }
    }
    true
}

struct StratumClass {
    child: SideData,
    comp: SideData,
    comp_abstract: Arc<IntegralLattice>,
    root_type: RootSystemType,
    comp_root_type: RootSystemType,
}

/// Enumerates the strata classes over `base`: saturations `sat<L, alpha>`
/// over roots `alpha` of the anticanonical complement, iterated until the
/// poset closes up.  Two strata are identified when the sublattices are
/// isometric and so are their mirror duals.
pub fn strata_poset(dp: &DelPezzo, base: &Sublattice) -> Result<StrataPoset> {
    validate_polarization(dp, base)?;
    let fperp = dp.anticanonical_complement();
    let ambient_system = RootSystem::of_sublattice(&fperp)?;
    let amb = AmbientRoots::new(dp, &ambient_system);
    let positive = ambient_system.positive_roots();
    let n = dp.picard().rank();
    let root_columns: Vec<IntMatrix> = positive
        .iter()
        .map(|r| IntMatrix::from_columns(std::slice::from_ref(&r.coords().to_vec()), n))
        .collect();

    let make_class = |sub: Sublattice| -> Result<StratumClass> {
        let comp = mirror_unchecked(dp, &sub);
        let comp_basis: Vec<Vec<i64>> = (0..comp.rank())
            .map(|j| to_i64(&comp.basis_matrix().column(j)))
            .collect();
        let child = SideData::new(sub, &comp_basis, &amb);
        let comp = SideData::new(comp, &child.basis, &amb);
        let root_type = child.root_system(&amb).classify()?;
        let comp_root_type = comp.root_system(&amb).classify()?;
        Ok(StratumClass {
            comp_abstract: comp.sub.as_abstract("stratum mirror"),
            child,
            comp,
            root_type,
            comp_root_type,
        })
    };

    let mut classes: Vec<StratumClass> = vec![make_class(base.saturation())?];
    let mut structural: HashMap<IntMatrix, usize> = HashMap::new();
    structural.insert(classes[0].child.sub.basis_matrix().clone(), 0);
    let mut covers: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: VecDeque<usize> = VecDeque::from([0]);

    while let Some(ci) = queue.pop_front() {
        let rep = classes[ci].child.sub.clone();
        for (root, col) in positive.iter().zip(&root_columns) {
            if rep.contains(root) {
                continue;
            }
            let child = Sublattice::from_basis_matrix(
                dp.picard(),
                rep.basis_matrix().concat_columns(col),
            )
            .saturation();
            if let Some(&cj) = structural.get(child.basis_matrix()) {
                covers.insert((ci, cj));
                continue;
            }
            let cand = make_class(child)?;
            let mut matched = None;
            for (j, known) in classes.iter().enumerate() {
                if !isometric_by_roots(&cand.child, &known.child, &amb) {
                    continue;
                }
                let comps_match = if cand.comp.simples.len() == cand.comp.sub.rank() {
                    isometric_by_roots(&cand.comp, &known.comp, &amb)
                } else {
                    cand.comp.fingerprint() == known.comp.fingerprint()
                        && crate::lattice::is_isometric(
                            &cand.comp_abstract,
                            &known.comp_abstract,
                        )?
                };
                if comps_match {
                    matched = Some(j);
                    break;
                }
            }
            let cj = match matched {
                Some(j) => j,
                None => {
                    classes.push(cand);
                    queue.push_back(classes.len() - 1);
                    classes.len() - 1
                }
            };
            structural.insert(classes[cj].child.sub.basis_matrix().clone(), cj);
            covers.insert((ci, cj));
        }
    }

    let d = dp.degree().value() as usize;
    let strata = classes
        .into_iter()
        .map(|c| Stratum {
            dimension: (9 - d) - c.root_type.rank(),
            fibers: predicted_fibers(&c.root_type, dp.degree()),
            sublattice: c.child.sub,
            mirror: c.comp.sub,
            root_type: c.root_type,
            mirror_root_type: c.comp_root_type,
        })
        .collect();
    Ok(StrataPoset {
        degree: dp.degree(),
        strata,
        covers: covers.into_iter().collect(),
    })
}

/// Dimension of the period stratum of a polarization: `9 - d` minus the
/// rank of the span of the roots inside it.
pub fn period_dimension(dp: &DelPezzo, l: &Sublattice) -> Result<usize> {
    validate_polarization(dp, l)?;
    let (t, _) = gram_root_type(&l.gram())?;
    Ok(9 - dp.degree().value() as usize - t.rank())
}

/// Multiplicities of the finite `I_n` fibers predicted for a stratum of
/// the given root type: each `A_k` component contributes an `I_{k+1}`
/// fiber and the rest of the Euler number `12 - d` is filled with `I_1`.
/// Root types with a component not of `A` type, or too large to fit, have
/// no prediction of this shape.
pub fn predicted_fibers(root_type: &RootSystemType, degree: Degree) -> Option<Vec<usize>> {
    let mut ns: Vec<usize> = Vec::new();
    for c in root_type.components() {
        if c.series != 'A' {
            return None;
        }
        ns.push(c.rank + 1);
    }
    let total = 12 - degree.value() as usize;
    let used: usize = ns.iter().sum();
    if used > total {
        return None;
    }
    ns.extend(std::iter::repeat(1).take(total - used));
    ns.sort_unstable_by(|a, b| b.cmp(a));
    Some(ns)
}

/// Orbits of the simple roots under automorphisms of their Coxeter graph,
/// as sorted blocks of indices into `simple_roots()`.
pub fn admissible_orbits(rs: &RootSystem) -> Vec<Vec<usize>> {
    let adj = rs.simple_adjacency();
    let n = adj.len();
    let degrees: Vec<usize> = adj
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect();

    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }

    fn search(
        pos: usize,
        adj: &[Vec<bool>],
        degrees: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        parent: &mut [usize],
    ) {
        let n = adj.len();
        if pos == n {
            for i in 0..n {
                let (a, b) = (find(parent, i), find(parent, perm[i]));
                if a != b {
                    parent[a] = b;
                }
            }
            return;
        }
        for j in 0..n {
            if used[j] || degrees[j] != degrees[pos] {
                continue;
            }
            if (0..pos).any(|k| adj[pos][k] != adj[j][perm[k]]) {
                continue;
            }
            perm[pos] = j;
            used[j] = true;
            search(pos + 1, adj, degrees, perm, used, parent);
            used[j] = false;
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    search(0, &adj, &degrees, &mut perm, &mut used, &mut parent);

    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = blocks.into_values().collect();
    for b in &mut out {
        b.sort_unstable();
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::is_isometric;

    fn degrees() -> Vec<Degree> {
        let mut v: Vec<Degree> = (1..=9).map(Degree::Standard).collect();
        v.push(Degree::Quadric);
        v
    }

    #[test]
    fn marking_identities_every_type() {
        for d in degrees() {
            let m = Marking::new(d);
            m.verify().unwrap();
            let count = match d {
                Degree::Standard(k) => k as usize,
                Degree::Quadric => 8,
            };
            assert_eq!(m.deltas().len(), count);
        }
    }

    #[test]
    fn degree_one_marking_is_the_fiber_class() {
        let m = Marking::new(Degree::Standard(1));
        assert_eq!(m.deltas()[0], *m.fiber());
        assert_eq!(m.deltas()[0].norm(), BigInt::from(0));
    }

    #[test]
    fn quadric_marking_turns_onto_the_branch_node() {
        let m = Marking::new(Degree::Quadric);
        let lat = m.lattice();
        assert_eq!(m.deltas()[6], alpha(lat, 0));
        assert_eq!(m.deltas()[0], alpha(lat, 8));
        for delta in m.deltas() {
            assert_eq!(delta.norm(), BigInt::from(-2));
        }
    }

    #[test]
    fn affine_diagram_quotient_is_e8() {
        let lat = IntegralLattice::hyperbolic_unimodular(9);
        let roots = affine_e8_simple_roots(&lat);
        assert_eq!(roots.len(), 9);
        let span = Sublattice::from_generators(&lat, &roots);
        assert_eq!(span.rank(), 9);
        let (radical, quotient) = span.radical_and_quotient("affine E8 quotient");
        let f0_span = Sublattice::from_generators(&lat, &[fiber_class(&lat)]);
        assert_eq!(radical, f0_span);
        let (t, _) = gram_root_type(quotient.gram()).unwrap();
        assert_eq!(t.to_string(), "E8");
    }

    #[test]
    fn marked_complement_matches_anticanonical_complement() {
        for d in degrees() {
            let m = Marking::new(d);
            let fperp = m.complement();
            assert_eq!(fperp.rank(), 10 - d.value() as usize);
            let (radical, quotient) = fperp.radical_and_quotient("quotient");
            let f0_span = Sublattice::from_generators(m.lattice(), &[fiber_class(m.lattice())]);
            assert_eq!(radical, f0_span, "radical of F_{}^perp", d);
            let dp = DelPezzo::new(d);
            let small = dp.anticanonical_complement().as_abstract("f_d^perp");
            assert!(
                is_isometric(&quotient, &small).unwrap(),
                "quotient of F_{}^perp",
                d
            );
        }
    }

    #[test]
    fn degree_eight_markings_have_distinct_complements() {
        let plain = Marking::new(Degree::Standard(8));
        let quadric = Marking::new(Degree::Quadric);
        let plain_gram = IntegralLattice::from_gram(
            "plain",
            IntMatrix::from_rows(&[vec![-8, 8], vec![8, -8]]),
        );
        let affine_a1 = IntegralLattice::from_gram(
            "affine A1",
            IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]]),
        );
        let plain_perp = plain.complement().as_abstract("F_8^perp");
        let quadric_perp = quadric.complement().as_abstract("F_8'^perp");
        assert!(is_isometric(&plain_perp, &plain_gram).unwrap());
        assert!(is_isometric(&quadric_perp, &affine_a1).unwrap());
        assert!(!is_isometric(&plain_perp, &quadric_perp).unwrap());
    }

    #[test]
    fn quadric_mirror_swaps_trivial_and_a1() {
        let dp = DelPezzo::new(Degree::Quadric);
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let pair = MirrorPair::new(&dp, &zero).unwrap();
        assert_eq!(pair.mirror().rank(), 1);
        assert_eq!(pair.mirror_root_type().unwrap().to_string(), "A1");
        let full = pair.mirror().clone();
        let back = MirrorPair::new(&dp, &full).unwrap();
        assert_eq!(back.mirror().rank(), 0);
        assert_eq!(back.mirror_root_type().unwrap().to_string(), "0");
    }

    #[test]
    fn mirror_duality_on_degree_six_strata() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let poset = strata_poset(&dp, &zero).unwrap();
        for s in poset.strata() {
            let l = s.sublattice();
            let m = s.mirror();
            for a in l.basis_vectors() {
                for b in m.basis_vectors() {
                    assert_eq!(a.dot(&b), BigInt::from(0));
                }
            }
            assert_eq!(l.rank() + m.rank(), 3);
            let double = mirror_sublattice(&dp, m).unwrap();
            assert_eq!(&double, l);
        }
    }

    #[test]
    fn one_embedding_class_per_degree() {
        for d in degrees() {
            let embeddings = enumerate_embeddings(d).unwrap();
            assert_eq!(embeddings.len(), 1, "degree {}", d);
            let e = &embeddings[0];
            assert_eq!(e.images().len(), 9 - d.value() as usize);
        }
    }

    #[test]
    fn embedding_maps_vectors_isometrically() {
        let e = &enumerate_embeddings(Degree::Standard(6)).unwrap()[0];
        let dp = DelPezzo::new(Degree::Standard(6));
        let rs = dp.root_system().unwrap();
        for a in rs.roots() {
            let img = e.embed(a).unwrap();
            assert_eq!(img.norm(), BigInt::from(-2));
            assert!(img.dot(e.marking().fiber()).is_zero());
        }
        for a in rs.roots() {
            for b in rs.roots() {
                let (ia, ib) = (e.embed(a).unwrap(), e.embed(b).unwrap());
                assert_eq!(a.dot(b), ia.dot(&ib));
            }
        }
    }

    #[test]
    fn degree_six_strata_classes() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let poset = strata_poset(&dp, &zero).unwrap();
        assert_eq!(poset.strata().len(), 6);
        let mut seen: Vec<(String, String, usize)> = poset
            .strata()
            .iter()
            .map(|s| {
                (
                    s.root_type().to_string(),
                    s.mirror_root_type().to_string(),
                    s.dimension(),
                )
            })
            .collect();
        seen.sort();
        let mut expected = vec![
            ("0".to_string(), "A2+A1".to_string(), 3),
            ("A1".to_string(), "A2".to_string(), 2),
            ("A1".to_string(), "A1".to_string(), 2),
            ("A1+A1".to_string(), "0".to_string(), 1),
            ("A2".to_string(), "A1".to_string(), 1),
            ("A2+A1".to_string(), "0".to_string(), 0),
        ];
        expected.sort();
        assert_eq!(seen, expected);
        let two_a1_dets: Vec<BigInt> = poset
            .strata()
            .iter()
            .filter(|s| s.root_type().to_string() == "A1")
            .map(|s| s.mirror().gram().det())
            .collect();
        let mut dets: Vec<i64> = two_a1_dets
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        dets.sort_unstable();
        assert_eq!(dets, vec![3, 12]);
    }

    #[test]
    fn degree_six_cover_relations() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let poset = strata_poset(&dp, &zero).unwrap();
        for &(lo, hi) in poset.covers() {
            let a = &poset.strata()[lo];
            let b = &poset.strata()[hi];
            assert_eq!(a.rank() + 1, b.rank());
        }
        assert_eq!(poset.covers().len(), 7);
    }

    #[test]
    fn degree_eight_strata() {
        let dp = DelPezzo::new(Degree::Standard(8));
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let poset = strata_poset(&dp, &zero).unwrap();
        assert_eq!(poset.strata().len(), 1);
        assert!(poset.covers().is_empty());

        let dpq = DelPezzo::new(Degree::Quadric);
        let zeroq = Sublattice::from_generators(dpq.picard(), &[]);
        let posetq = strata_poset(&dpq, &zeroq).unwrap();
        assert_eq!(posetq.strata().len(), 2);
        assert_eq!(posetq.covers(), &[(0, 1)]);
    }

    #[test]
    fn fiber_predictions_match_root_ranks() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let zero = Sublattice::from_generators(dp.picard(), &[]);
        let poset = strata_poset(&dp, &zero).unwrap();
        for s in poset.strata() {
            let fibers = s.fibers().expect("degree six strata are all A type");
            let total: usize = fibers.iter().sum();
            assert_eq!(total, 6);
            let drops: usize = fibers.iter().map(|n| n - 1).sum();
            assert_eq!(drops, s.root_type().rank());
        }
        let deepest = poset
            .strata()
            .iter()
            .find(|s| s.root_type().to_string() == "A2+A1")
            .unwrap();
        assert_eq!(deepest.fibers().unwrap(), &[3, 2, 1]);
    }

    #[test]
    fn e8_prediction_overflows_at_degree_one() {
        let eight_a1 = RootSystemType::new(vec![crate::roots::AdeType::new('A', 1); 8]);
        assert_eq!(predicted_fibers(&eight_a1, Degree::Standard(1)), None);
        let e8 = RootSystemType::new(vec![crate::roots::AdeType::new('E', 8)]);
        assert_eq!(predicted_fibers(&e8, Degree::Standard(1)), None);
        let a8 = RootSystemType::new(vec![crate::roots::AdeType::new('A', 8)]);
        assert_eq!(
            predicted_fibers(&a8, Degree::Standard(1)),
            Some(vec![9, 1, 1])
        );
    }

    #[test]
    fn period_dimensions() {
        let dp6 = DelPezzo::new(Degree::Standard(6));
        let zero6 = Sublattice::from_generators(dp6.picard(), &[]);
        assert_eq!(period_dimension(&dp6, &zero6).unwrap(), 3);
        let dp1 = DelPezzo::new(Degree::Standard(1));
        let zero1 = Sublattice::from_generators(dp1.picard(), &[]);
        assert_eq!(period_dimension(&dp1, &zero1).unwrap(), 8);
        let dpq = DelPezzo::new(Degree::Quadric);
        let full = mirror_sublattice(
            &dpq,
            &Sublattice::from_generators(dpq.picard(), &[]),
        )
        .unwrap();
        assert_eq!(period_dimension(&dpq, &full).unwrap(), 0);
    }

    #[test]
    fn admissible_orbits_degree_six() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let rs = dp.root_system().unwrap();
        let orbits = admissible_orbits(&rs);
        let named: Vec<Vec<String>> = orbits
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&i| rs.simple_roots()[i].to_string())
                    .collect()
            })
            .collect();
        assert_eq!(orbits.len(), 2);
        assert!(named.contains(&vec!["l - e1 - e2 - e3".to_string()]));
        let pair: Vec<String> = vec!["-e1 + e2".to_string(), "-e2 + e3".to_string()];
        assert!(named.iter().any(|b| {
            let mut s = b.clone();
            s.sort();
            s == pair
        }));
    }

    #[test]
    fn admissible_orbits_e8_are_singletons() {
        let dp = DelPezzo::new(Degree::Standard(1));
        let rs = dp.root_system().unwrap();
        let orbits = admissible_orbits(&rs);
        assert_eq!(orbits.len(), 8);
        assert!(orbits.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn polarization_validation_rejects_bad_inputs() {
        let dp = DelPezzo::new(Degree::Standard(6));
        let pic = dp.picard();
        let not_perp = Sublattice::from_generators(pic, &[pic.basis_vector(1)]);
        assert!(mirror_sublattice(&dp, &not_perp).is_err());
        let alpha1 = pic.vector(&[1, -1, -1, -1]);
        let unsaturated = Sublattice::from_generators(pic, &[alpha1.scale(2)]);
        assert!(mirror_sublattice(&dp, &unsaturated).is_err());
    }
}
