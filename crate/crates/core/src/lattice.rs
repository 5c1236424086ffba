//! Integral lattices: free Z-modules of finite rank with an integer-valued
//! symmetric bilinear form.
//!
//! The surfaces studied here have hyperbolic Picard lattices: `I_{1,n}` with
//! basis `l, e1, ..., en` of signature `(1, n)`, and the hyperbolic plane
//! `II_{1,1}` with basis `a, b` pairing to `[[0,1],[1,0]]`.  Orthogonal
//! complements of anticanonical or marking classes inside them are negative
//! definite or semidefinite, which is where all the enumeration happens:
//! vectors of fixed norm in a definite lattice are listed by exact
//! Fincke-Pohst backtracking, and isometry of definite lattices is decided
//! by mapping a basis onto norm-matched candidates with pairing pruning.
//! Semidefinite lattices are handled through their radical quotient, which
//! splits off the radical as a direct summand.

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::matrix::{IntMatrix, RatMatrix};

/// A free Z-module with named basis and symmetric integer Gram matrix.
#[derive(Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    name: String,
    labels: Vec<String>,
    gram: IntMatrix,
}

impl IntegralLattice {
    pub fn new(name: &str, labels: Vec<String>, gram: IntMatrix) -> Arc<Self> {
        assert_eq!(gram.rows(), gram.cols(), "Gram matrix must be square");
        assert_eq!(labels.len(), gram.rows(), "label count must match rank");
        assert!(gram.is_symmetric(), "Gram matrix must be symmetric");
        Arc::new(IntegralLattice {
            name: name.to_string(),
            labels,
            gram,
        })
    }

    /// Abstract lattice with synthesized basis labels `g1, ..., gn`.
    pub fn from_gram(name: &str, gram: IntMatrix) -> Arc<Self> {
        let labels = (1..=gram.rows()).map(|i| format!("g{i}")).collect();
        IntegralLattice::new(name, labels, gram)
    }

    /// `I_{1,n}`: basis `l, e1, ..., en` with `l^2 = 1`, `ei^2 = -1`.
    pub fn hyperbolic_unimodular(n: usize) -> Arc<Self> {
        let mut labels = vec!["l".to_string()];
        labels.extend((1..=n).map(|i| format!("e{i}")));
        let mut entries = vec![1i64];
        entries.extend(std::iter::repeat(-1).take(n));
        IntegralLattice::new(
            &format!("I_{{1,{n}}}"),
            labels,
            IntMatrix::from_diag(&entries),
        )
    }

    /// `II_{1,1}`: basis `a, b` with `a^2 = b^2 = 0`, `a.b = 1`.
    pub fn hyperbolic_plane() -> Arc<Self> {
        IntegralLattice::new(
            "II_{1,1}",
            vec!["a".to_string(), "b".to_string()],
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn discriminant(&self) -> BigInt {
        self.gram.det()
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.gram)
    }

    pub fn vector(self: &Arc<Self>, coords: &[i64]) -> LatticeVector {
        assert_eq!(coords.len(), self.rank(), "coordinate arity mismatch");
        LatticeVector {
            parent: self.clone(),
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn vector_from_bigint(self: &Arc<Self>, coords: Vec<BigInt>) -> LatticeVector {
        assert_eq!(coords.len(), self.rank(), "coordinate arity mismatch");
        LatticeVector {
            parent: self.clone(),
            coords,
        }
    }

    pub fn basis_vector(self: &Arc<Self>, i: usize) -> LatticeVector {
        let mut coords = vec![BigInt::zero(); self.rank()];
        coords[i] = BigInt::one();
        LatticeVector {
            parent: self.clone(),
            coords,
        }
    }

    pub fn basis_vector_by_label(self: &Arc<Self>, label: &str) -> Option<LatticeVector> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.basis_vector(i))
    }

    pub fn zero_vector(self: &Arc<Self>) -> LatticeVector {
        LatticeVector {
            parent: self.clone(),
            coords: vec![BigInt::zero(); self.rank()],
        }
    }

    /// Pairing of coordinate vectors through the Gram matrix.
    pub fn pair_coords(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let gb = self.gram.mul_vec(b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    }
}

fn same_lattice(a: &Arc<IntegralLattice>, b: &Arc<IntegralLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element of an integral lattice, in basis coordinates.
#[derive(Clone, Debug)]
pub struct LatticeVector {
    parent: Arc<IntegralLattice>,
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn parent(&self) -> &Arc<IntegralLattice> {
        &self.parent
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coords_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        assert!(
            same_lattice(&self.parent, &other.parent),
            "vectors from different lattices"
        );
        self.parent.pair_coords(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> BigInt {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        let k = BigInt::from(k);
        LatticeVector {
            parent: self.parent.clone(),
            coords: self.coords.iter().map(|c| c * &k).collect(),
        }
    }
}

impl PartialEq for LatticeVector {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.parent, &other.parent) && self.coords == other.coords
    }
}

impl Eq for LatticeVector {}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, other: &LatticeVector) -> LatticeVector {
        assert!(
            same_lattice(&self.parent, &other.parent),
            "vectors from different lattices"
        );
        LatticeVector {
            parent: self.parent.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, other: &LatticeVector) -> LatticeVector {
        assert!(
            same_lattice(&self.parent, &other.parent),
            "vectors from different lattices"
        );
        LatticeVector {
            parent: self.parent.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector {
            parent: self.parent.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{}", self.parent.labels[i])?;
            } else {
                write!(f, "{}*{}", mag, self.parent.labels[i])?;
            }
        }
        Ok(())
    }
}

/// A sublattice of an ambient lattice, stored by its canonical
/// Hermite-normal-form column basis.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Arc<IntegralLattice>,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn from_generators(ambient: &Arc<IntegralLattice>, gens: &[LatticeVector]) -> Self {
        for g in gens {
            assert!(
                same_lattice(&g.parent, ambient),
                "generator from a different lattice"
            );
        }
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
        let m = IntMatrix::from_columns(&cols, ambient.rank());
        Sublattice {
            ambient: ambient.clone(),
            basis: m.hnf_columns(),
        }
    }

    pub fn from_basis_matrix(ambient: &Arc<IntegralLattice>, m: IntMatrix) -> Self {
        assert_eq!(m.rows(), ambient.rank(), "basis rows must match ambient rank");
        Sublattice {
            ambient: ambient.clone(),
            basis: m.hnf_columns(),
        }
    }

    pub fn ambient(&self) -> &Arc<IntegralLattice> {
        &self.ambient
    }

    /// Canonical column basis in ambient coordinates.
    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        (0..self.basis.cols())
            .map(|j| LatticeVector {
                parent: self.ambient.clone(),
                coords: self.basis.column(j),
            })
            .collect()
    }

    /// Gram matrix of the restricted form in the canonical basis.
    pub fn gram(&self) -> IntMatrix {
        let bt = self.basis.transpose();
        &(&bt * self.ambient.gram()) * &self.basis
    }

    /// The restricted form as an abstract lattice.
    pub fn as_abstract(&self, name: &str) -> Arc<IntegralLattice> {
        IntegralLattice::from_gram(name, self.gram())
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        assert!(
            same_lattice(&v.parent, &self.ambient),
            "vector from a different lattice"
        );
        self.basis.column_span_contains(&v.coords)
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the
    /// sublattice.
    pub fn coordinates_of(&self, v: &LatticeVector) -> Option<Vec<BigInt>> {
        let sol = self.basis.solve_rational(&v.coords)?;
        let mut out = Vec::with_capacity(sol.len());
        for c in sol {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    pub fn saturation(&self) -> Sublattice {
        Sublattice {
            ambient: self.ambient.clone(),
            basis: self.basis.column_saturation(),
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.basis == self.basis.column_saturation()
    }

    /// Smallest sublattice containing both.
    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        assert!(
            same_lattice(&self.ambient, &other.ambient),
            "sublattices of different lattices"
        );
        Sublattice {
            ambient: self.ambient.clone(),
            basis: self.basis.concat_columns(&other.basis).hnf_columns(),
        }
    }

    /// Orthogonal complement in the ambient lattice; always saturated.
    pub fn orthogonal_complement(&self) -> Sublattice {
        let pairings = &self.basis.transpose() * self.ambient.gram();
        Sublattice {
            ambient: self.ambient.clone(),
            basis: pairings.kernel(),
        }
    }

    /// Radical of the restricted form (as a sublattice of the ambient
    /// lattice) together with the nondegenerate quotient form.
    pub fn radical_and_quotient(&self, quotient_name: &str) -> (Sublattice, Arc<IntegralLattice>) {
        let (radical, quotient, _) = self.radical_quotient_and_section(quotient_name);
        (radical, quotient)
    }

    /// Like [`Sublattice::radical_and_quotient`], but also returns
    /// representatives of the quotient basis as ambient vectors, so the
    /// quotient form can be lifted back into the ambient lattice.
    pub fn radical_quotient_and_section(
        &self,
        quotient_name: &str,
    ) -> (Sublattice, Arc<IntegralLattice>, Vec<LatticeVector>) {
        let gram = self.gram();
        let (adapted, radical_rank) = radical_adapted_basis(&gram);
        // adapted columns: first `radical_rank` span the radical in
        // sublattice coordinates, the rest represent the quotient.
        let total = adapted.cols();
        let rad_idx: Vec<usize> = (0..radical_rank).collect();
        let quot_idx: Vec<usize> = (radical_rank..total).collect();
        let rad_in_ambient = &self.basis * &adapted.select_columns(&rad_idx);
        let quot_cols = adapted.select_columns(&quot_idx);
        let quot_gram = &(&quot_cols.transpose() * &gram) * &quot_cols;
        let section_in_ambient = &self.basis * &quot_cols;
        let section = (0..section_in_ambient.cols())
            .map(|j| LatticeVector {
                parent: self.ambient.clone(),
                coords: section_in_ambient.column(j),
            })
            .collect();
        (
            Sublattice {
                ambient: self.ambient.clone(),
                basis: rad_in_ambient.hnf_columns(),
            },
            IntegralLattice::from_gram(quotient_name, quot_gram),
            section,
        )
    }
}

impl PartialEq for Sublattice {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.ambient, &other.ambient) && self.basis == other.basis
    }
}

impl Eq for Sublattice {}

/// A basis of `Z^n` whose first `r` columns span the kernel of `gram`.
fn radical_adapted_basis(gram: &IntMatrix) -> (IntMatrix, usize) {
    let kernel = gram.kernel();
    let r = kernel.cols();
    (kernel.complete_columns_to_basis(), r)
}

/// Exact signature `(positive, negative, zero)` of a symmetric matrix by
/// congruence diagonalization over the rationals.
pub fn signature(gram: &IntMatrix) -> (usize, usize, usize) {
    assert!(gram.is_symmetric(), "signature of a non-symmetric matrix");
    let n = gram.rows();
    let mut a = RatMatrix::from_int(gram);
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        if a.get(k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a.get(j, j).is_zero()) {
                swap_symmetric(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a.get(k, j).is_zero()) {
                add_symmetric(&mut a, k, j);
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let pivot = a.get(k, k).clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if !a.get(i, k).is_zero() {
                let factor = -(a.get(i, k) / &pivot);
                row_col_op(&mut a, i, k, &factor);
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

fn swap_symmetric(a: &mut RatMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let x = a.get(i, c).clone();
        let y = a.get(j, c).clone();
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let x = a.get(r, i).clone();
        let y = a.get(r, j).clone();
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

fn add_symmetric(a: &mut RatMatrix, dst: usize, src: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(dst, c) + a.get(src, c);
        a.set(dst, c, v);
    }
    for r in 0..n {
        let v = a.get(r, dst) + a.get(r, src);
        a.set(r, dst, v);
    }
}

fn row_col_op(a: &mut RatMatrix, dst: usize, src: usize, factor: &BigRational) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(dst, c) + &(a.get(src, c) * factor);
        a.set(dst, c, v);
    }
    for r in 0..n {
        let v = a.get(r, dst) + &(a.get(r, src) * factor);
        a.set(r, dst, v);
    }
}

/// Exact enumerator for a positive definite rational Gram matrix.
pub struct DefiniteEnumerator {
    rank: usize,
    /// Unit lower triangular factor of `gram = l * diag(d) * l^T`.
    l: Vec<Vec<BigRational>>,
    d: Vec<BigRational>,
    /// The same factorization over `Ratio<i128>` when every entry is small
    /// enough that the search arithmetic provably stays inside `i128`.
    fast: Option<FastLdl>,
}

struct FastLdl {
    l: Vec<Vec<Ratio<i128>>>,
    d: Vec<Ratio<i128>>,
}

/// Magnitude cap for numerators and denominators entering the `i128`
/// search path.  With rank at most 16 and every input below the cap, the
/// largest intermediate product stays under `2^110`, leaving headroom.
const FAST_LIMIT: i128 = 1 << 18;

fn small_ratio(x: &BigRational) -> Option<Ratio<i128>> {
    let n = i128::try_from(x.numer()).ok()?;
    let d = i128::try_from(x.denom()).ok()?;
    if n.abs() >= FAST_LIMIT || d >= FAST_LIMIT {
        return None;
    }
    Some(Ratio::new(n, d))
}

impl DefiniteEnumerator {
    pub fn new(gram: &RatMatrix) -> Result<Self> {
        let n = gram.rows();
        assert_eq!(gram.rows(), gram.cols());
        let mut l = vec![vec![BigRational::zero(); n]; n];
        let mut d = vec![BigRational::zero(); n];
        for k in 0..n {
            let mut dk = gram.get(k, k).clone();
            for j in 0..k {
                dk = dk - &(&(&l[k][j] * &l[k][j]) * &d[j]);
            }
            if !dk.is_positive() {
                return Err(Error::Unsupported(
                    "Gram matrix is not positive definite".into(),
                ));
            }
            l[k][k] = BigRational::one();
            d[k] = dk;
            for i in k + 1..n {
                let mut v = gram.get(i, k).clone();
                for j in 0..k {
                    v = v - &(&(&l[i][j] * &l[k][j]) * &d[j]);
                }
                l[i][k] = v / &d[k];
            }
        }
        let fast = if n <= 16 {
            let ls: Option<Vec<Vec<Ratio<i128>>>> = l
                .iter()
                .map(|row| row.iter().map(small_ratio).collect())
                .collect();
            let ds: Option<Vec<Ratio<i128>>> = d.iter().map(small_ratio).collect();
            match (ls, ds) {
                (Some(l), Some(d)) => Some(FastLdl { l, d }),
                _ => None,
            }
        } else {
            None
        };
        Ok(DefiniteEnumerator { rank: n, l, d, fast })
    }

    pub fn from_int_gram(gram: &IntMatrix) -> Result<Self> {
        DefiniteEnumerator::new(&RatMatrix::from_int(gram))
    }

    /// All integer vectors `v` with `(v + center)^T G (v + center) = target`.
    pub fn enumerate(&self, center: &[BigRational], target: &BigRational) -> Vec<Vec<BigInt>> {
        assert_eq!(center.len(), self.rank, "center arity mismatch");
        if target.is_negative() {
            return Vec::new();
        }
        if self.rank == 0 {
            return if target.is_zero() {
                vec![Vec::new()]
            } else {
                Vec::new()
            };
        }
        if let Some(fast) = &self.fast {
            let c: Option<Vec<Ratio<i128>>> = center.iter().map(small_ratio).collect();
            let t = small_ratio(target);
            if let (Some(c), Some(t)) = (c, t) {
                let mut out = Vec::new();
                let mut partial = vec![0i128; self.rank];
                if fast.search(&c, t, self.rank, &mut partial, &mut out).is_some() {
                    return out;
                }
            }
        }
        let mut out = Vec::new();
        let mut partial = vec![BigInt::zero(); self.rank];
        self.search(center, target.clone(), self.rank, &mut partial, &mut out);
        out
    }

    fn search(
        &self,
        center: &[BigRational],
        remaining: BigRational,
        level: usize,
        partial: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        let k = level - 1;
        // shift = c_k + sum_{j > k} L[j][k] (v_j + c_j)
        let mut shift = center[k].clone();
        for j in k + 1..self.rank {
            let vj = BigRational::from_integer(partial[j].clone()) + &center[j];
            shift = shift + &(&self.l[j][k] * &vj);
        }
        let bound = &remaining / &self.d[k];
        let radius = floor_sqrt_rational(&bound) + BigInt::one();
        let center_floor = (-&shift).floor().to_integer();
        let lo = &center_floor - &radius;
        let hi = &center_floor + &radius + BigInt::one();
        let mut v = lo;
        while v <= hi {
            let y = BigRational::from_integer(v.clone()) + &shift;
            let cost = &(&y * &y) * &self.d[k];
            if cost <= remaining {
                if k == 0 {
                    if cost == remaining {
                        partial[0] = v.clone();
                        out.push(partial.clone());
                    }
                } else {
                    partial[k] = v.clone();
                    self.search(center, &remaining - &cost, k, partial, out);
                }
            }
            v += BigInt::one();
        }
    }
}

/// Largest nonnegative integer `k` with `k^2 <= r`; zero when `r < 0`.
fn floor_sqrt_rational(r: &BigRational) -> BigInt {
    if r.is_negative() {
        return BigInt::zero();
    }
    r.floor().to_integer().sqrt()
}

impl FastLdl {
    /// Returns `None` when an intermediate grows past the overflow guard,
    /// in which case the caller must redo the search in big arithmetic.
    fn search(
        &self,
        center: &[Ratio<i128>],
        remaining: Ratio<i128>,
        level: usize,
        partial: &mut Vec<i128>,
        out: &mut Vec<Vec<BigInt>>,
    ) -> Option<()> {
        let rank = self.d.len();
        let k = level - 1;
        let mut shift = center[k];
        for j in k + 1..rank {
            let vj = guarded(Ratio::from_integer(partial[j]) + center[j])?;
            let term = guarded(self.l[j][k] * vj)?;
            shift = guarded(shift + term)?;
        }
        let bound = guarded(remaining / self.d[k])?;
        let radius = floor_sqrt_small(bound) + 1;
        let center_floor = (-shift).floor().to_integer();
        let lo = center_floor.checked_sub(radius)?;
        let hi = center_floor.checked_add(radius)?.checked_add(1)?;
        for v in lo..=hi {
            let y = guarded(Ratio::from_integer(v) + shift)?;
            let cost = guarded(guarded(y * y)? * self.d[k])?;
            if cost <= remaining {
                if k == 0 {
                    if cost == remaining {
                        partial[0] = v;
                        out.push(partial.iter().map(|&x| BigInt::from(x)).collect());
                    }
                } else {
                    partial[k] = v;
                    self.search(center, guarded(remaining - cost)?, k, partial, out)?;
                }
            }
        }
        Some(())
    }
}

/// Overflow guard for the `i128` search: keeping every stored value under
/// `2^60` bounds each cross multiplication inside ratio arithmetic and
/// comparisons by `2^121`.
fn guarded(r: Ratio<i128>) -> Option<Ratio<i128>> {
    const GUARD: i128 = 1 << 60;
    (r.numer().abs() < GUARD && *r.denom() < GUARD).then_some(r)
}

/// Largest nonnegative integer `k` with `k^2 <= r`; zero when `r < 0`.
fn floor_sqrt_small(r: Ratio<i128>) -> i128 {
    if r < Ratio::from_integer(0) {
        return 0;
    }
    let f = r.floor().to_integer() as u128;
    let mut x = f;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + f / x) / 2;
    }
    while x.checked_mul(x).map_or(true, |s| s > f) {
        x -= 1;
    }
    x as i128
}

/// Vectors of the given norm in a definite lattice (positive or negative
/// definite; the target is interpreted in the lattice's own sign
/// convention).
pub fn vectors_of_norm(lattice: &Arc<IntegralLattice>, norm: i64) -> Result<Vec<LatticeVector>> {
    let (pos, neg, zero) = lattice.signature();
    if zero > 0 || (pos > 0 && neg > 0) {
        return Err(Error::Unsupported(
            "fixed-norm enumeration needs a definite lattice".into(),
        ));
    }
    if lattice.rank() == 0 {
        return Ok(Vec::new());
    }
    let (gram, target) = if neg > 0 {
        ((-lattice.gram()).clone(), BigInt::from(-norm))
    } else {
        (lattice.gram().clone(), BigInt::from(norm))
    };
    let enumerator = DefiniteEnumerator::from_int_gram(&gram)?;
    let center = vec![BigRational::zero(); lattice.rank()];
    let coords = enumerator.enumerate(&center, &BigRational::from_integer(target));
    Ok(coords
        .into_iter()
        .map(|c| lattice.vector_from_bigint(c))
        .collect())
}

/// Decides isometry of lattices that are definite or semidefinite,
/// splitting off radicals first.  Indefinite inputs are not supported.
pub fn is_isometric(a: &IntegralLattice, b: &IntegralLattice) -> Result<bool> {
    let sig_a = a.signature();
    let sig_b = b.signature();
    if sig_a != sig_b {
        return Ok(false);
    }
    let (pos, neg, zero) = sig_a;
    if pos > 0 && neg > 0 {
        return Err(Error::Unsupported(
            "isometry testing for indefinite lattices".into(),
        ));
    }
    if pos == 0 && neg == 0 {
        return Ok(true);
    }
    let (ga, gb) = if zero > 0 {
        (
            radical_quotient_gram(a.gram()),
            radical_quotient_gram(b.gram()),
        )
    } else {
        (a.gram().clone(), b.gram().clone())
    };
    let (ga, gb) = if neg > 0 { (-&ga, -&gb) } else { (ga, gb) };
    definite_isometric(&ga, &gb)
}

/// Gram matrix of the nondegenerate quotient by the radical.
pub fn radical_quotient_gram(gram: &IntMatrix) -> IntMatrix {
    let (adapted, r) = radical_adapted_basis(gram);
    let idx: Vec<usize> = (r..adapted.cols()).collect();
    let q = adapted.select_columns(&idx);
    &(&q.transpose() * gram) * &q
}

fn definite_isometric(ga: &IntMatrix, gb: &IntMatrix) -> Result<bool> {
    Ok(find_positive_definite_isometry(ga, gb)?.is_some())
}

/// Searches for a basis map `T` with `T^t gb T = ga` between positive
/// definite Gram matrices; columns of `T` are the images of the basis of
/// the first lattice.
pub fn find_positive_definite_isometry(
    ga: &IntMatrix,
    gb: &IntMatrix,
) -> Result<Option<IntMatrix>> {
    if ga.rows() != gb.rows() {
        return Ok(None);
    }
    if ga.det() != gb.det() {
        return Ok(None);
    }
    let n = ga.rows();
    if n == 0 {
        return Ok(Some(IntMatrix::zero(0, 0)));
    }
    let enumerator = DefiniteEnumerator::from_int_gram(gb)?;
    let zero_center = vec![BigRational::zero(); n];
    let mut candidates_by_norm: HashMap<BigInt, Vec<Vec<BigInt>>> = HashMap::new();
    for i in 0..n {
        let norm = ga.get(i, i).clone();
        candidates_by_norm.entry(norm.clone()).or_insert_with(|| {
            enumerator.enumerate(&zero_center, &BigRational::from_integer(norm))
        });
    }
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    if isometry_dfs(ga, gb, &candidates_by_norm, &mut images) {
        Ok(Some(IntMatrix::from_columns(&images, n)))
    } else {
        Ok(None)
    }
}

fn isometry_dfs(
    ga: &IntMatrix,
    gb: &IntMatrix,
    candidates_by_norm: &HashMap<BigInt, Vec<Vec<BigInt>>>,
    images: &mut Vec<Vec<BigInt>>,
) -> bool {
    let i = images.len();
    if i == ga.rows() {
        return true;
    }
    let norm = ga.get(i, i).clone();
    for cand in candidates_by_norm.get(&norm).map_or(&[][..], |v| &v[..]) {
        let g_cand = gb.mul_vec(cand);
        let ok = images.iter().enumerate().all(|(j, img)| {
            let pair: BigInt = img.iter().zip(&g_cand).map(|(x, y)| x * y).sum();
            pair == *ga.get(i, j)
        });
        if ok {
            images.push(cand.clone());
            if isometry_dfs(ga, gb, candidates_by_norm, images) {
                return true;
            }
            images.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn hyperbolic_basics() {
        let l9 = IntegralLattice::hyperbolic_unimodular(9);
        assert_eq!(l9.rank(), 10);
        assert_eq!(l9.signature(), (1, 9, 0));
        // f0 = 3l - e1 - ... - e9 has norm 0
        let mut coords = vec![3i64];
        coords.extend(std::iter::repeat(-1).take(9));
        let f0 = l9.vector(&coords);
        assert_eq!(f0.norm(), bi(0));

        let l3 = IntegralLattice::hyperbolic_unimodular(3);
        let f6 = l3.vector(&[3, -1, -1, -1]);
        assert_eq!(f6.norm(), bi(6));
        assert_eq!(f6.to_string(), "3*l - e1 - e2 - e3");

        let hp = IntegralLattice::hyperbolic_plane();
        let f8 = hp.vector(&[2, 2]);
        assert_eq!(f8.norm(), bi(8));
        assert_eq!(f8.to_string(), "2*a + 2*b");
    }

    #[test]
    fn vector_display() {
        let l2 = IntegralLattice::hyperbolic_unimodular(2);
        assert_eq!(l2.vector(&[0, 1, -1]).to_string(), "e1 - e2");
        assert_eq!(l2.vector(&[1, -2, 0]).to_string(), "l - 2*e1");
        assert_eq!(l2.vector(&[0, 0, 0]).to_string(), "0");
        assert_eq!(l2.vector(&[-1, 0, 1]).to_string(), "-l + e2");
    }

    #[test]
    fn orthogonal_complement_of_anticanonical() {
        // complement of 3l - e1 - e2 in I_{1,2}: rank 2, negative definite
        let l2 = IntegralLattice::hyperbolic_unimodular(2);
        let f7 = l2.vector(&[3, -1, -1]);
        let sub = Sublattice::from_generators(&l2, &[f7.clone()]);
        let perp = sub.orthogonal_complement();
        assert_eq!(perp.rank(), 2);
        for v in perp.basis_vectors() {
            assert_eq!(v.dot(&f7), bi(0));
        }
        let gram = perp.gram();
        assert_eq!(signature(&gram), (0, 2, 0));
    }

    #[test]
    fn complement_is_saturated() {
        let l3 = IntegralLattice::hyperbolic_unimodular(3);
        let f6 = l3.vector(&[3, -1, -1, -1]);
        let sub = Sublattice::from_generators(&l3, &[f6]);
        let perp = sub.orthogonal_complement();
        assert!(perp.is_saturated());
        assert_eq!(perp.rank(), 3);
    }

    #[test]
    fn membership_and_coordinates() {
        let l2 = IntegralLattice::hyperbolic_unimodular(2);
        let a = l2.vector(&[1, -1, 0]);
        let b = l2.vector(&[0, 1, -1]);
        let sub = Sublattice::from_generators(&l2, &[a.clone(), b.clone()]);
        let v = &a + &b.scale(2);
        assert!(sub.contains(&v));
        let coords = sub.coordinates_of(&v).unwrap();
        // reconstruct from canonical basis
        let rebuilt: Vec<BigInt> = {
            let m = sub.basis_matrix();
            m.mul_vec(&coords)
        };
        assert_eq!(rebuilt, v.coords().to_vec());
        assert!(!sub.contains(&l2.vector(&[1, 0, 0])));
    }

    #[test]
    fn saturation_detects_index() {
        let l2 = IntegralLattice::hyperbolic_unimodular(2);
        let v = l2.vector(&[0, 2, 0]);
        let sub = Sublattice::from_generators(&l2, &[v]);
        assert!(!sub.is_saturated());
        let sat = sub.saturation();
        assert!(sat.is_saturated());
        assert_eq!(sat.basis_vectors()[0], l2.vector(&[0, 1, 0]));
    }

    #[test]
    fn radical_and_quotient_of_degenerate_form() {
        // span of e1 - e2 and f = 3l - e1 - e2: contains the null direction?
        // simpler: abstract degenerate lattice diag(-2, 0)
        let lat = IntegralLattice::from_gram("test", IntMatrix::from_diag(&[-2, 0]));
        let full = Sublattice::from_basis_matrix(&lat, IntMatrix::identity(2));
        let (rad, quot) = full.radical_and_quotient("q");
        assert_eq!(rad.rank(), 1);
        assert_eq!(quot.rank(), 1);
        assert_eq!(quot.gram(), &IntMatrix::from_diag(&[-2]));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&IntMatrix::from_diag(&[1, -1, -1])), (1, 2, 0));
        assert_eq!(signature(&IntMatrix::zero(3, 3)), (0, 0, 3));
        let a2 = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(signature(&a2), (2, 0, 0));
        let hp = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&hp), (1, 1, 0));
    }

    #[test]
    fn enumeration_counts_roots_of_a2() {
        let a2 = IntegralLattice::from_gram(
            "A2",
            IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]),
        );
        let roots = vectors_of_norm(&a2, 2).unwrap();
        assert_eq!(roots.len(), 6);
        let neg_a2 = IntegralLattice::from_gram(
            "A2(-1)",
            IntMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]),
        );
        let roots = vectors_of_norm(&neg_a2, -2).unwrap();
        assert_eq!(roots.len(), 6);
    }

    #[test]
    fn centered_enumeration() {
        let gram = RatMatrix::from_int(&IntMatrix::from_diag(&[1]));
        let en = DefiniteEnumerator::new(&gram).unwrap();
        let half = BigRational::new(bi(1), bi(2));
        let quarter = BigRational::new(bi(1), bi(4));
        let hits = en.enumerate(&[half], &quarter);
        // (v + 1/2)^2 = 1/4 at v = 0 and v = -1
        let mut got: Vec<i64> = hits.iter().map(|v| i64::try_from(&v[0]).unwrap()).collect();
        got.sort();
        assert_eq!(got, vec![-1, 0]);
    }

    #[test]
    fn isometry_examples() {
        let a2 = IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        let a2_alt = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        let a1a1 = IntMatrix::from_diag(&[2, 2]);
        let la = IntegralLattice::from_gram("A2", a2);
        let lb = IntegralLattice::from_gram("A2'", a2_alt);
        let lc = IntegralLattice::from_gram("A1+A1", a1a1);
        assert!(is_isometric(&la, &lb).unwrap());
        assert!(!is_isometric(&la, &lc).unwrap());
        // negative definite pair
        let na = IntegralLattice::from_gram("nA2", IntMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]));
        let nb = IntegralLattice::from_gram("nA2'", IntMatrix::from_rows(&[vec![-2, -1], vec![-1, -2]]));
        assert!(is_isometric(&na, &nb).unwrap());
    }

    #[test]
    fn isometry_with_radical() {
        let a = IntegralLattice::from_gram("d", IntMatrix::from_diag(&[-2, 0]));
        let b = IntegralLattice::from_gram(
            "d'",
            IntMatrix::from_rows(&[vec![-2, -2], vec![-2, -2]]),
        );
        assert!(is_isometric(&a, &b).unwrap());
        let c = IntegralLattice::from_gram("d''", IntMatrix::from_diag(&[-4, 0]));
        assert!(!is_isometric(&a, &c).unwrap());
    }

    #[test]
    fn indefinite_isometry_rejected() {
        let a = IntegralLattice::hyperbolic_unimodular(1);
        let b = IntegralLattice::hyperbolic_unimodular(1);
        assert!(is_isometric(&a, &b).is_err());
    }

    fn box_enumerate(gram: &IntMatrix, target: i64) -> Vec<Vec<BigInt>> {
        // exact box bound: v_i^2 <= target * (G^{-1})_{ii}
        let n = gram.rows();
        let inv = RatMatrix::from_int(gram).inverse().unwrap();
        let mut bounds = Vec::new();
        for i in 0..n {
            let b = BigRational::from_integer(bi(target)) * inv.get(i, i);
            bounds.push(i64::try_from(&floor_sqrt_rational(&b)).unwrap());
        }
        let mut out = Vec::new();
        let mut v = vec![0i64; n];
        fn rec(
            gram: &IntMatrix,
            bounds: &[i64],
            v: &mut Vec<i64>,
            i: usize,
            target: i64,
            out: &mut Vec<Vec<BigInt>>,
        ) {
            if i == bounds.len() {
                let coords: Vec<BigInt> = v.iter().map(|&x| bi(x)).collect();
                let gv = gram.mul_vec(&coords);
                let norm: BigInt = coords.iter().zip(&gv).map(|(x, y)| x * y).sum();
                if norm == bi(target) {
                    out.push(coords);
                }
                return;
            }
            for x in -bounds[i]..=bounds[i] {
                v[i] = x;
                rec(gram, bounds, v, i + 1, target, out);
            }
        }
        rec(gram, &bounds, &mut v, 0, target, &mut out);
        out
    }

    proptest! {
        #[test]
        fn prop_enumeration_matches_box_oracle(
            entries in proptest::collection::vec(-2i64..=2, 9),
            target in 1i64..=6,
        ) {
            // build a positive definite gram as B^T B + I
            let b = IntMatrix::from_rows(&[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
                entries[6..9].to_vec(),
            ]);
            let gram = &(&b.transpose() * &b) + &IntMatrix::identity(3);
            let en = DefiniteEnumerator::from_int_gram(&gram).unwrap();
            let center = vec![BigRational::zero(); 3];
            let mut fp = en.enumerate(&center, &BigRational::from_integer(bi(target)));
            let mut boxed = box_enumerate(&gram, target);
            fp.sort();
            boxed.sort();
            prop_assert_eq!(fp, boxed);
        }

        #[test]
        fn prop_fast_search_matches_big_arithmetic(
            entries in proptest::collection::vec(-3i64..=3, 9),
            target_num in 1i64..=9,
            target_den in 1i64..=4,
            center_num in proptest::collection::vec(-3i64..=3, 3),
            center_den in 1i64..=3,
        ) {
            let b = IntMatrix::from_rows(&[
                entries[0..3].to_vec(),
                entries[3..6].to_vec(),
                entries[6..9].to_vec(),
            ]);
            let gram = &(&b.transpose() * &b) + &IntMatrix::identity(3);
            let mut en = DefiniteEnumerator::from_int_gram(&gram).unwrap();
            prop_assert!(en.fast.is_some());
            let center: Vec<BigRational> = center_num
                .iter()
                .map(|&n| BigRational::new(bi(n), bi(center_den)))
                .collect();
            let target = BigRational::new(bi(target_num), bi(target_den));
            let mut fast = en.enumerate(&center, &target);
            en.fast = None;
            let mut slow = en.enumerate(&center, &target);
            fast.sort();
            slow.sort();
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn prop_signature_congruence_invariant(
            diag in proptest::collection::vec(-2i64..=2, 3),
            ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..5),
        ) {
            let g = IntMatrix::from_diag(&diag);
            let mut u = IntMatrix::identity(3);
            for (i, j, c) in ops {
                if i != j {
                    u.add_multiple_of_col(i, j, &bi(c));
                }
            }
            let congruent = &(&u.transpose() * &g) * &u;
            prop_assert_eq!(signature(&g), signature(&congruent));
            let expected_pos = diag.iter().filter(|&&d| d > 0).count();
            let expected_neg = diag.iter().filter(|&&d| d < 0).count();
            let expected_zero = diag.iter().filter(|&&d| d == 0).count();
            prop_assert_eq!(signature(&g), (expected_pos, expected_neg, expected_zero));
        }
    }
}
