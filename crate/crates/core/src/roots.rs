//! Root systems of definite lattices.
//!
//! A root is a vector of norm -2 in a negative definite lattice.  Roots are
//! split into positive and negative halves by pairing with the fixed
//! interior class whose coordinates are `(n, n-1, ..., 1)` in the parent
//! basis (with a lexicographic tiebreak), simple roots are the positive
//! roots that are not sums of two positive roots, and the Coxeter graph of
//! the simple roots is classified into ADE components.  Sublattices keep
//! their ambient coordinates throughout, so root vectors print as classes
//! like `l - e1 - e2 - e3` and positive roots of hyperbolic complements
//! are the effective ones.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{signature, vectors_of_norm, IntegralLattice, LatticeVector, Sublattice};

/// One irreducible ADE factor, e.g. `A2` or `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdeType {
    pub series: char,
    pub rank: usize,
}

impl AdeType {
    pub fn new(series: char, rank: usize) -> Self {
        AdeType { series, rank }
    }

    /// Number of roots of the irreducible system.
    pub fn root_count(&self) -> usize {
        match self.series {
            'A' => self.rank * (self.rank + 1),
            'D' => 2 * self.rank * (self.rank - 1),
            'E' => match self.rank {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => unreachable!("E series has rank 6, 7 or 8"),
            },
            _ => unreachable!("series is A, D or E"),
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Sort key: larger systems first, `E > D > A` among equal ranks.
fn type_sort_key(t: &AdeType) -> (usize, char) {
    (t.rank, t.series)
}

/// A finite root system type: a multiset of ADE components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSystemType {
    components: Vec<AdeType>,
}

impl RootSystemType {
    pub fn new(mut components: Vec<AdeType>) -> Self {
        components.sort_by(|a, b| type_sort_key(b).cmp(&type_sort_key(a)));
        RootSystemType { components }
    }

    pub fn trivial() -> Self {
        RootSystemType {
            components: Vec::new(),
        }
    }

    pub fn components(&self) -> &[AdeType] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(|c| c.root_count()).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// The roots of a negative definite lattice, kept in the coordinates of the
/// lattice the vectors were born in.
pub struct RootSystem {
    roots: Vec<LatticeVector>,
    positive: Vec<LatticeVector>,
    simple: Vec<LatticeVector>,
}

impl RootSystem {
    /// Root system of a negative definite sublattice; root vectors are
    /// expressed in the ambient basis and positivity is decided by the
    /// ambient functional, so different sublattices of one lattice get
    /// compatible positive systems.
    pub fn of_sublattice(sub: &Sublattice) -> Result<RootSystem> {
        let gram = sub.gram();
        let (pos, _, zero) = signature(&gram);
        if pos > 0 || zero > 0 {
            return Err(Error::Unsupported(
                "root systems need a negative definite lattice".into(),
            ));
        }
        let abstract_lat = sub.as_abstract("span");
        let roots_local = vectors_of_norm(&abstract_lat, -2)?;
        let basis = sub.basis_matrix();
        let ambient = sub.ambient().clone();
        let roots: Vec<LatticeVector> = roots_local
            .iter()
            .map(|r| ambient.vector_from_bigint(basis.mul_vec(r.coords())))
            .collect();
        Ok(RootSystem::from_roots(&ambient, roots))
    }

    /// Root system of a whole lattice in its own coordinates.
    pub fn of_lattice(lattice: &Arc<IntegralLattice>) -> Result<RootSystem> {
        let (pos, _, zero) = lattice.signature();
        if pos > 0 || zero > 0 {
            return Err(Error::Unsupported(
                "root systems need a negative definite lattice".into(),
            ));
        }
        let roots = vectors_of_norm(lattice, -2)?;
        Ok(RootSystem::from_roots(lattice, roots))
    }

    pub(crate) fn from_roots(parent: &Arc<IntegralLattice>, roots: Vec<LatticeVector>) -> RootSystem {
        let positive: Vec<LatticeVector> = roots
            .iter()
            .filter(|r| is_positive(parent, r.coords()))
            .cloned()
            .collect();
        assert_eq!(2 * positive.len(), roots.len(), "roots come in +- pairs");
        let simple = simples_of(&positive);
        RootSystem {
            roots,
            positive,
            simple,
        }
    }

    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.positive
    }

    pub fn simple_roots(&self) -> &[LatticeVector] {
        &self.simple
    }

    /// Adjacency of the Coxeter graph on the simple roots (edge where the
    /// pairing is nonzero).
    pub fn simple_adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.simple.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if !self.simple[i].dot(&self.simple[j]).is_zero() {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        adj
    }

    /// ADE components together with the simple-root indices in each.
    pub fn classify_with_components(&self) -> Result<Vec<(AdeType, Vec<usize>)>> {
        let n = self.simple.len();
        for i in 0..n {
            for j in i + 1..n {
                let p = self.simple[i].dot(&self.simple[j]);
                if !p.is_zero() && !p.is_one() {
                    return Err(Error::NotAde(format!(
                        "not simply-laced: simple roots pair to {p}"
                    )));
                }
            }
        }
        let adj = self.simple_adjacency();
        let mut seen = vec![false; n];
        let mut result = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                component.push(v);
                for (w, &is_adj) in adj[v].iter().enumerate() {
                    if is_adj && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            component.sort();
            let t = classify_component(&adj, &component)?;
            result.push((t, component));
        }
        result.sort_by(|a, b| type_sort_key(&b.0).cmp(&type_sort_key(&a.0)));
        Ok(result)
    }

    pub fn classify(&self) -> Result<RootSystemType> {
        let comps = self.classify_with_components()?;
        Ok(RootSystemType::new(comps.into_iter().map(|(t, _)| t).collect()))
    }
}

/// Positive roots that are not sums of two positive roots.
fn simples_of(positive: &[LatticeVector]) -> Vec<LatticeVector> {
    let pos_set: HashSet<Vec<BigInt>> = positive.iter().map(|p| p.coords().to_vec()).collect();
    positive
        .iter()
        .filter(|gamma| {
            !positive.iter().any(|alpha| {
                let beta: Vec<BigInt> = gamma
                    .coords()
                    .iter()
                    .zip(alpha.coords())
                    .map(|(g, a)| g - a)
                    .collect();
                beta != vec![BigInt::zero(); beta.len()] && pos_set.contains(&beta)
            })
        })
        .cloned()
        .collect()
}

/// Splits a root set by an explicit linear functional, given as the vector
/// pairing against it.  A root is positive when the pairing is strictly
/// positive; the functional must not vanish on any root.  The simple roots
/// are the positive roots that are not sums of two positive roots, and they
/// are verified to form a basis of the sublattice generated by all roots.
pub fn positive_and_simple(
    parent: &Arc<IntegralLattice>,
    roots: &[LatticeVector],
    functional: &LatticeVector,
) -> Result<(Vec<LatticeVector>, Vec<LatticeVector>)> {
    let mut positive = Vec::new();
    for r in roots {
        let v = functional.dot(r);
        if v.is_zero() {
            return Err(Error::Unsupported(format!(
                "non-generic functional: vanishes on the root {r}"
            )));
        }
        if v.is_positive() {
            positive.push(r.clone());
        }
    }
    assert_eq!(2 * positive.len(), roots.len(), "roots come in +- pairs");
    let simple = simples_of(&positive);
    let span_all = Sublattice::from_generators(parent, roots);
    let span_simple = Sublattice::from_generators(parent, &simple);
    assert_eq!(
        span_simple.basis_matrix(),
        span_all.basis_matrix(),
        "simple roots span the root sublattice"
    );
    assert_eq!(
        simple.len(),
        span_all.rank(),
        "simple roots are linearly independent"
    );
    Ok((positive, simple))
}

/// All norm -2 vectors of a negative definite lattice, or of the quotient
/// modulo the radical when the lattice is only semidefinite.  The returned
/// lattice is the one the root coordinates refer to: the input itself in the
/// definite case, the radical quotient otherwise.
pub fn enumerate_roots(
    lattice: &Arc<IntegralLattice>,
) -> Result<(Arc<IntegralLattice>, Vec<LatticeVector>)> {
    let (pos, _, zero) = lattice.signature();
    if pos > 0 {
        return Err(Error::Unsupported(
            "root enumeration needs a negative semidefinite lattice".into(),
        ));
    }
    if zero == 0 {
        let roots = vectors_of_norm(lattice, -2)?;
        return Ok((lattice.clone(), roots));
    }
    let quotient = crate::lattice::radical_quotient_gram(lattice.gram());
    let name = format!("{} mod radical", lattice.name());
    let q = IntegralLattice::from_gram(&name, quotient);
    let roots = vectors_of_norm(&q, -2)?;
    Ok((q, roots))
}

/// Splits vectors into halves: positive when the pairing with the interior
/// class of coordinates `(n, n-1, ..., 1)` is positive, with a
/// lexicographic tiebreak.  In a hyperbolic lattice `I_{1,n}` that class is
/// `(n+1)l + n e1 + ... + e_n`, so positive roots pair positively with an
/// ample-side class and are the effective ones.
pub fn is_positive(parent: &Arc<IntegralLattice>, coords: &[BigInt]) -> bool {
    let n = coords.len();
    let h: Vec<BigInt> = (0..n).map(|i| BigInt::from((n - i) as i64)).collect();
    let s = parent.pair_coords(&h, coords);
    if !s.is_zero() {
        return s.is_positive();
    }
    for c in coords {
        if !c.is_zero() {
            return c.is_positive();
        }
    }
    false
}

fn classify_component(adj: &[Vec<bool>], vertices: &[usize]) -> Result<AdeType> {
    let rank = vertices.len();
    let degree: Vec<usize> = vertices
        .iter()
        .map(|&v| vertices.iter().filter(|&&w| adj[v][w]).count())
        .collect();
    let edges: usize = degree.iter().sum::<usize>() / 2;
    if edges != rank - 1 {
        return Err(Error::NotAde(format!(
            "not a Dynkin diagram: component with {rank} vertices and {edges} edges is not a tree"
        )));
    }
    if degree.iter().any(|&d| d > 3) {
        return Err(Error::NotAde(
            "not a Dynkin diagram: vertex of degree four in the Coxeter graph".into(),
        ));
    }
    let branches: Vec<usize> = (0..rank).filter(|&i| degree[i] == 3).collect();
    match branches.len() {
        0 => Ok(AdeType::new('A', rank)),
        1 => {
            let b = vertices[branches[0]];
            let mut arms: Vec<usize> = Vec::new();
            for &v in vertices {
                if v != b && adj[b][v] {
                    // walk away from the branch vertex
                    let mut len = 1;
                    let mut prev = b;
                    let mut cur = v;
                    loop {
                        let next = vertices
                            .iter()
                            .find(|&&w| w != prev && adj[cur][w])
                            .copied();
                        match next {
                            Some(w) => {
                                len += 1;
                                prev = cur;
                                cur = w;
                            }
                            None => break,
                        }
                    }
                    arms.push(len);
                }
            }
            arms.sort();
            match arms.as_slice() {
                [1, 1, c] => Ok(AdeType::new('D', c + 3)),
                [1, 2, 2] => Ok(AdeType::new('E', 6)),
                [1, 2, 3] => Ok(AdeType::new('E', 7)),
                [1, 2, 4] => Ok(AdeType::new('E', 8)),
                _ => Err(Error::NotAde(format!(
                    "not a Dynkin diagram: branched graph with arms {arms:?}"
                ))),
            }
        }
        _ => Err(Error::NotAde(
            "not a Dynkin diagram: more than one branch vertex in a component".into(),
        )),
    }
}

/// Root system type of a definite or semidefinite Gram matrix: the type of
/// the nondegenerate quotient together with the radical rank.
pub fn gram_root_type(gram: &crate::exact::matrix::IntMatrix) -> Result<(RootSystemType, usize)> {
    let (pos, _, zero) = signature(gram);
    if pos > 0 {
        return Err(Error::Unsupported(
            "root type of a lattice with positive directions".into(),
        ));
    }
    let quotient = if zero > 0 {
        crate::lattice::radical_quotient_gram(gram)
    } else {
        gram.clone()
    };
    let lat = IntegralLattice::from_gram("quotient", quotient);
    let rs = RootSystem::of_lattice(&lat)?;
    Ok((rs.classify()?, zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::IntMatrix;

    fn anticanonical_complement(n: usize) -> Sublattice {
        let lat = IntegralLattice::hyperbolic_unimodular(n);
        let mut coords = vec![3i64];
        coords.extend(std::iter::repeat(-1).take(n));
        let f = lat.vector(&coords);
        Sublattice::from_generators(&lat, &[f]).orthogonal_complement()
    }

    #[test]
    fn complement_root_systems_by_degree() {
        // degree d corresponds to I_{1,9-d}
        let expected: &[(usize, &str, usize)] = &[
            (1, "E8", 240),
            (2, "E7", 126),
            (3, "E6", 72),
            (4, "D5", 40),
            (5, "A4", 20),
            (6, "A2+A1", 8),
            (7, "A1", 2),
            (8, "0", 0),
        ];
        for &(d, type_str, count) in expected {
            let perp = anticanonical_complement(9 - d);
            let rs = RootSystem::of_sublattice(&perp).unwrap();
            assert_eq!(rs.roots().len(), count, "degree {d} root count");
            assert_eq!(
                rs.classify().unwrap().to_string(),
                type_str,
                "degree {d} type"
            );
        }
    }

    #[test]
    fn quadric_complement_is_a1() {
        let hp = IntegralLattice::hyperbolic_plane();
        let f = hp.vector(&[2, 2]);
        let perp = Sublattice::from_generators(&hp, &[f]).orthogonal_complement();
        assert_eq!(perp.gram(), IntMatrix::from_diag(&[-2]));
        let rs = RootSystem::of_sublattice(&perp).unwrap();
        assert_eq!(rs.classify().unwrap().to_string(), "A1");
    }

    #[test]
    fn degree_seven_complement_gram() {
        let perp = anticanonical_complement(2);
        // basis {e1 - e2, l - 2e1 - e2} up to column normal form
        let gram = perp.gram();
        assert_eq!(gram.det(), BigInt::from(7));
        let lat = IntegralLattice::from_gram("f7perp", gram);
        let expected = IntegralLattice::from_gram(
            "expected",
            IntMatrix::from_rows(&[vec![-2, 1], vec![1, -4]]),
        );
        assert!(crate::lattice::is_isometric(&lat, &expected).unwrap());
    }

    #[test]
    fn degree_eight_complement_has_norm_minus_eight() {
        let perp = anticanonical_complement(1);
        assert_eq!(perp.gram(), IntMatrix::from_diag(&[-8]));
    }

    #[test]
    fn degree_six_simple_roots() {
        let perp = anticanonical_complement(3);
        let rs = RootSystem::of_sublattice(&perp).unwrap();
        let mut simples: Vec<String> = rs.simple_roots().iter().map(|r| r.to_string()).collect();
        simples.sort();
        // simple roots e2 - e1, e3 - e2 and l - e1 - e2 - e3 in basis-order display
        let mut expected = vec![
            "l - e1 - e2 - e3".to_string(),
            "-e1 + e2".to_string(),
            "-e2 + e3".to_string(),
        ];
        expected.sort();
        assert_eq!(simples, expected);
        assert_eq!(rs.positive_roots().len(), 4);
    }

    #[test]
    fn simple_count_matches_rank() {
        for n in 1..=8usize {
            let perp = anticanonical_complement(n);
            let rs = RootSystem::of_sublattice(&perp).unwrap();
            let expected_rank: usize = rs.classify().unwrap().rank();
            assert_eq!(rs.simple_roots().len(), expected_rank, "n = {n}");
        }
    }

    #[test]
    fn classify_abstract_examples() {
        // A3 path
        let a3 = IntMatrix::from_rows(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        let lat = IntegralLattice::from_gram("a3", a3);
        let rs = RootSystem::of_lattice(&lat).unwrap();
        assert_eq!(rs.classify().unwrap().to_string(), "A3");
        assert_eq!(rs.roots().len(), 12);

        // D4 star
        let d4 = IntMatrix::from_rows(&[
            vec![-2, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ]);
        let lat = IntegralLattice::from_gram("d4", d4);
        let rs = RootSystem::of_lattice(&lat).unwrap();
        assert_eq!(rs.classify().unwrap().to_string(), "D4");
        assert_eq!(rs.roots().len(), 24);
    }

    #[test]
    fn explicit_functional_splits_and_errors() {
        let a2 = IntegralLattice::from_gram(
            "a2",
            IntMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]),
        );
        let roots = vectors_of_norm(&a2, -2).unwrap();
        assert_eq!(roots.len(), 6);

        let generic = a2.vector(&[-3, -1]);
        let (pos, simple) = positive_and_simple(&a2, &roots, &generic).unwrap();
        assert_eq!(pos.len(), 3);
        assert_eq!(simple.len(), 2);

        // (-2, -1) pairs to zero with the root (0, 1)
        let degenerate = a2.vector(&[-2, -1]);
        let err = positive_and_simple(&a2, &roots, &degenerate).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non-generic functional"), "{msg}");
        assert!(msg.contains("g2"), "{msg}");
    }

    #[test]
    fn explicit_functional_matches_default_split() {
        for n in [1usize, 3, 8] {
            let perp = anticanonical_complement(n);
            let parent = perp.ambient().clone();
            let rs = RootSystem::of_sublattice(&perp).unwrap();
            let h: Vec<i64> = (0..parent.rank()).map(|i| (parent.rank() - i) as i64).collect();
            let functional = parent.vector(&h);
            let (pos, simple) =
                positive_and_simple(&parent, rs.roots(), &functional).unwrap();
            assert_eq!(pos.len(), rs.positive_roots().len(), "n = {n}");
            assert_eq!(simple.len(), rs.simple_roots().len(), "n = {n}");
        }
    }

    #[test]
    fn split_sizes_on_small_systems() {
        // A1: one positive, one simple
        let a1 = IntegralLattice::from_gram("a1", IntMatrix::from_diag(&[-2]));
        let roots = vectors_of_norm(&a1, -2).unwrap();
        let (pos, simple) = positive_and_simple(&a1, &roots, &a1.vector(&[-1])).unwrap();
        assert_eq!((pos.len(), simple.len()), (1, 1));

        // E8 realized as the anticanonical complement in I_{1,8}
        let perp = anticanonical_complement(8);
        let parent = perp.ambient().clone();
        let rs = RootSystem::of_sublattice(&perp).unwrap();
        let h: Vec<i64> = (0..9).map(|i| (9 - i) as i64).collect();
        let (pos, simple) =
            positive_and_simple(&parent, rs.roots(), &parent.vector(&h)).unwrap();
        assert_eq!((pos.len(), simple.len()), (120, 8));
    }

    #[test]
    fn positive_roots_decompose_over_simples() {
        for n in 3..=8usize {
            let perp = anticanonical_complement(n);
            let rs = RootSystem::of_sublattice(&perp).unwrap();
            let cols: Vec<Vec<BigInt>> = rs
                .simple_roots()
                .iter()
                .map(|s| s.coords().to_vec())
                .collect();
            let m = IntMatrix::from_columns(&cols, n + 1);
            for gamma in rs.positive_roots() {
                let x = m
                    .solve_rational(gamma.coords())
                    .unwrap_or_else(|| panic!("{gamma} outside the simple-root span"));
                for c in &x {
                    assert!(c.is_integer(), "non-integral coefficient for {gamma}");
                    assert!(!c.numer().is_negative(), "negative coefficient for {gamma}");
                }
            }
        }
    }

    #[test]
    fn semidefinite_roots_counted_mod_radical() {
        let affine = IntegralLattice::from_gram(
            "affine-a1",
            IntMatrix::from_rows(&[vec![-2, 2], vec![2, -2]]),
        );
        let (quotient, roots) = enumerate_roots(&affine).unwrap();
        assert_eq!(quotient.rank(), 1);
        assert_eq!(roots.len(), 2);

        let definite = IntegralLattice::from_gram("a1", IntMatrix::from_diag(&[-2]));
        let (same, roots) = enumerate_roots(&definite).unwrap();
        assert_eq!(same.name(), "a1");
        assert_eq!(roots.len(), 2);

        let err = enumerate_roots(&IntegralLattice::hyperbolic_plane()).unwrap_err();
        assert!(err.to_string().contains("semidefinite"));
    }

    #[test]
    fn non_simply_laced_pairing_is_rejected() {
        // +-v, +-w with v.w = -1: a closed root set whose positive half has
        // a pairing outside {0, 1}
        let lat = IntegralLattice::from_gram(
            "skew",
            IntMatrix::from_rows(&[vec![-2, -1], vec![-1, -2]]),
        );
        let roots = vec![
            lat.vector(&[1, 0]),
            lat.vector(&[-1, 0]),
            lat.vector(&[0, 1]),
            lat.vector(&[0, -1]),
        ];
        let rs = RootSystem::from_roots(&lat, roots);
        let err = rs.classify().unwrap_err();
        assert!(err.to_string().contains("not simply-laced"), "{err}");
    }

    #[test]
    fn non_dynkin_graphs_are_rejected() {
        // triangle
        let adj = vec![
            vec![false, true, true],
            vec![true, false, true],
            vec![true, true, false],
        ];
        let err = classify_component(&adj, &[0, 1, 2]).unwrap_err();
        assert!(err.to_string().contains("not a Dynkin diagram"), "{err}");

        // star with four arms
        let mut adj = vec![vec![false; 5]; 5];
        for i in 1..5 {
            adj[0][i] = true;
            adj[i][0] = true;
        }
        let err = classify_component(&adj, &[0, 1, 2, 3, 4]).unwrap_err();
        assert!(err.to_string().contains("not a Dynkin diagram"), "{err}");

        // branch with arms (2, 2, 2)
        let edges = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
        let mut adj = vec![vec![false; 7]; 7];
        for &(i, j) in &edges {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        let err = classify_component(&adj, &[0, 1, 2, 3, 4, 5, 6]).unwrap_err();
        assert!(err.to_string().contains("not a Dynkin diagram"), "{err}");
    }

    #[test]
    fn positivity_splits_roots() {
        let perp = anticanonical_complement(5);
        let parent = perp.ambient().clone();
        let rs = RootSystem::of_sublattice(&perp).unwrap();
        for r in rs.roots() {
            let p = is_positive(&parent, r.coords());
            let m: Vec<BigInt> = r.coords().iter().map(|c| -c).collect();
            assert_ne!(p, is_positive(&parent, &m));
        }
    }

    #[test]
    fn gram_root_type_with_radical() {
        // A1 plus a rank-2 radical
        let gram = IntMatrix::from_diag(&[-2, 0, 0]);
        let (t, rad) = gram_root_type(&gram).unwrap();
        assert_eq!(t.to_string(), "A1");
        assert_eq!(rad, 2);
    }

    #[test]
    fn root_counts_formula() {
        assert_eq!(AdeType::new('A', 4).root_count(), 20);
        assert_eq!(AdeType::new('D', 5).root_count(), 40);
        assert_eq!(AdeType::new('E', 6).root_count(), 72);
        assert_eq!(AdeType::new('E', 7).root_count(), 126);
        assert_eq!(AdeType::new('E', 8).root_count(), 240);
    }

    #[test]
    fn type_display_ordering() {
        let t = RootSystemType::new(vec![AdeType::new('A', 1), AdeType::new('A', 2)]);
        assert_eq!(t.to_string(), "A2+A1");
        let t = RootSystemType::new(vec![AdeType::new('A', 4), AdeType::new('D', 4)]);
        assert_eq!(t.to_string(), "D4+A4");
        assert_eq!(RootSystemType::trivial().to_string(), "0");
    }
}
