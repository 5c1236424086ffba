//! Exact rational polyhedral cones in integer coordinates.
//!
//! Cones are handled in two presentations: spanned by finitely many integer
//! ray generators, or cut out by finitely many integer inequalities.
//! Membership in a spanned cone is a pure feasibility question and is
//! decided by a Phase-I simplex over exact rationals with Bland's rule, so
//! there is no cycling and no floating point.  Conversion from inequalities
//! to rays is the double description method: lineality is split off first
//! by passing to the quotient, then rays are built up one halfspace at a
//! time with the algebraic rank test for adjacency.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use num::Integer;
use std::collections::BTreeSet;

use crate::exact::matrix::{IntMatrix, RatMatrix};

/// Divides out the content, keeping direction; the zero vector is unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Decides whether `target` is a nonnegative rational combination of the
/// generators, by Phase-I simplex with Bland's rule.
pub fn in_cone(target: &[BigInt], generators: &[Vec<BigInt>]) -> bool {
    let n = target.len();
    let m = generators.len();
    if target.iter().all(|c| c.is_zero()) {
        return true;
    }
    if m == 0 {
        return false;
    }
    // rows of [A | I] lambda = b with b >= 0 after sign flips
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        let flip = target[i].is_negative();
        let mut row: Vec<BigRational> = Vec::with_capacity(m + n);
        for g in generators {
            let e = BigRational::from_integer(g[i].clone());
            row.push(if flip { -e } else { e });
        }
        for j in 0..n {
            row.push(if i == j {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::zero()
            });
        }
        tableau.push(row);
        let b = BigRational::from_integer(target[i].clone());
        rhs.push(if flip { -b } else { b });
    }
    let mut basis: Vec<usize> = (m..m + n).collect();
    loop {
        let objective: BigRational = basis
            .iter()
            .zip(&rhs)
            .filter(|(&b, _)| b >= m)
            .map(|(_, r)| r.clone())
            .sum();
        if objective.is_zero() {
            return true;
        }
        // reduced cost of column j: c_j - sum over artificial-basic rows
        let mut entering = None;
        'cols: for j in 0..m + n {
            if basis.contains(&j) {
                continue;
            }
            let mut r = if j >= m {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::zero()
            };
            for (i, &b) in basis.iter().enumerate() {
                if b >= m {
                    r = r - &tableau[i][j];
                }
            }
            if r.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(e) = entering else {
            return false;
        };
        // ratio test, ties broken by smallest basis variable
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..n {
            if tableau[i][e].is_positive() {
                let ratio = &rhs[i] / &tableau[i][e];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return false;
        };
        // pivot on (l, e)
        let pivot = tableau[l][e].clone();
        for x in tableau[l].iter_mut() {
            *x = &*x / &pivot;
        }
        rhs[l] = &rhs[l] / &pivot;
        for i in 0..n {
            if i != l && !tableau[i][e].is_zero() {
                let f = tableau[i][e].clone();
                for j in 0..m + n {
                    let upd = &tableau[i][j] - &(&f * &tableau[l][j]);
                    tableau[i][j] = upd;
                }
                let upd = &rhs[i] - &(&f * &rhs[l]);
                rhs[i] = upd;
            }
        }
        basis[l] = e;
    }
}

/// Whether the spanned cone contains no line.
pub fn cone_is_pointed(generators: &[Vec<BigInt>]) -> bool {
    let nonzero: Vec<&Vec<BigInt>> = generators
        .iter()
        .filter(|g| !g.iter().all(|c| c.is_zero()))
        .collect();
    let Some(first) = nonzero.first() else {
        return true;
    };
    // not pointed iff 0 is a nontrivial nonnegative combination, i.e. the
    // vector (0, ..., 0, 1) lies in the cone of the (g_i, 1)
    let n = first.len();
    let mut target = vec![BigInt::zero(); n];
    target.push(BigInt::from(1));
    let lifted: Vec<Vec<BigInt>> = nonzero
        .iter()
        .map(|g| {
            let mut v = (*g).clone();
            v.push(BigInt::from(1));
            v
        })
        .collect();
    !in_cone(&target, &lifted)
}

/// Indices of generators spanning extreme rays, one index per distinct ray.
/// The generators must span a pointed cone.
pub fn extremal_ray_indices(generators: &[Vec<BigInt>]) -> Vec<usize> {
    assert!(
        cone_is_pointed(generators),
        "extreme rays need a pointed cone"
    );
    let mut distinct: Vec<(Vec<BigInt>, usize)> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.iter().all(|c| c.is_zero()) {
            continue;
        }
        let p = primitive(g);
        if !distinct.iter().any(|(q, _)| *q == p) {
            distinct.push((p, i));
        }
    }
    let mut out = Vec::new();
    for (j, (ray, idx)) in distinct.iter().enumerate() {
        let others: Vec<Vec<BigInt>> = distinct
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, (q, _))| q.clone())
            .collect();
        if !in_cone(ray, &others) {
            out.push(*idx);
        }
    }
    out.sort();
    out
}

/// A cone presented by extreme rays plus a lineality space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCone {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl PolyCone {
    /// Membership, treating lineality directions as two-sided.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut gens = self.rays.clone();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|c| -c).collect());
        }
        in_cone(v, &gens)
    }
}

/// Extreme rays and lineality of `{x : n.x >= 0}` for the given normals.
pub fn cone_from_inequalities(dim: usize, normals: &[Vec<BigInt>]) -> PolyCone {
    let mut cleaned: Vec<Vec<BigInt>> = Vec::new();
    for n in normals {
        if n.iter().all(|c| c.is_zero()) {
            continue;
        }
        let p = primitive(n);
        if !cleaned.contains(&p) {
            cleaned.push(p);
        }
    }
    if cleaned.is_empty() {
        let lineality = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        return PolyCone {
            rays: Vec::new(),
            lineality,
        };
    }
    let n_mat = IntMatrix::from_bigint_rows(cleaned.clone());
    let lin = n_mat.kernel();
    let r = lin.cols();
    let rays = if r == 0 {
        pointed_dual(&cleaned, dim)
    } else {
        let adapted = lin.complete_columns_to_basis();
        let section_idx: Vec<usize> = (r..dim).collect();
        let section = adapted.select_columns(&section_idx);
        // normals descend to the quotient: reduced row = n^T * section
        let reduced: Vec<Vec<BigInt>> = cleaned
            .iter()
            .map(|n| {
                (0..section.cols())
                    .map(|j| {
                        let col = section.column(j);
                        n.iter().zip(&col).map(|(a, b)| a * b).sum()
                    })
                    .collect()
            })
            .collect();
        pointed_dual(&reduced, dim - r)
            .into_iter()
            .map(|z| primitive(&section.mul_vec(&z)))
            .collect()
    };
    let mut rays = rays;
    rays.sort();
    let mut lineality: Vec<Vec<BigInt>> = (0..r).map(|j| lin.column(j)).collect();
    lineality.sort();
    PolyCone { rays, lineality }
}

/// Double description for normals of full rank `dim`.
fn pointed_dual(normals: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if dim == 0 {
        return Vec::new();
    }
    // greedy choice of dim independent normals for the initial simplicial cone
    let mut init: Vec<usize> = Vec::new();
    for i in 0..normals.len() {
        let mut rows: Vec<Vec<BigInt>> = init.iter().map(|&k| normals[k].clone()).collect();
        rows.push(normals[i].clone());
        if IntMatrix::from_bigint_rows(rows.clone()).rank() == rows.len() {
            init.push(i);
            if init.len() == dim {
                break;
            }
        }
    }
    assert_eq!(init.len(), dim, "normals must have full rank");
    let m = IntMatrix::from_bigint_rows(init.iter().map(|&k| normals[k].clone()).collect());
    let m_inv = RatMatrix::from_int(&m).inverse().expect("independent rows");
    // ray j pairs to delta_ij with the initial normals
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..dim {
        let col: Vec<BigRational> = (0..dim).map(|i| m_inv.get(i, j).clone()).collect();
        let lcm = col
            .iter()
            .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = col
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        rays.push(primitive(&ints));
    }
    let processed: Vec<usize> = init.clone();
    let mut processed: BTreeSet<usize> = processed.into_iter().collect();
    let dot = |n: &[BigInt], r: &[BigInt]| -> BigInt {
        n.iter().zip(r).map(|(a, b)| a * b).sum()
    };
    let tight_set = |ray: &[BigInt], processed: &BTreeSet<usize>| -> BTreeSet<usize> {
        processed
            .iter()
            .filter(|&&t| dot(&normals[t], ray).is_zero())
            .copied()
            .collect()
    };
    for h_idx in 0..normals.len() {
        if processed.contains(&h_idx) {
            continue;
        }
        let h = &normals[h_idx];
        let values: Vec<BigInt> = rays.iter().map(|r| dot(h, r)).collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() {
            processed.insert(h_idx);
            continue;
        }
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let zero: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_zero())
            .collect();
        let mut new_rays: Vec<Vec<BigInt>> = Vec::new();
        for &p in &pos {
            let tp = tight_set(&rays[p], &processed);
            for &q in &neg {
                let tq = tight_set(&rays[q], &processed);
                let common: Vec<usize> = tp.intersection(&tq).copied().collect();
                let adjacent = if dim == 2 {
                    true
                } else {
                    let rows: Vec<Vec<BigInt>> =
                        common.iter().map(|&t| normals[t].clone()).collect();
                    !rows.is_empty() && IntMatrix::from_bigint_rows(rows).rank() == dim - 2
                };
                if adjacent {
                    let a = &values[p];
                    let b = &values[q];
                    let combo: Vec<BigInt> = rays[p]
                        .iter()
                        .zip(&rays[q])
                        .map(|(x, y)| a * y - b * x)
                        .collect();
                    let combo = primitive(&combo);
                    if !new_rays.contains(&combo) {
                        new_rays.push(combo);
                    }
                }
            }
        }
        let mut kept: Vec<Vec<BigInt>> = Vec::new();
        for &i in pos.iter().chain(&zero) {
            kept.push(rays[i].clone());
        }
        for nr in new_rays {
            if !kept.contains(&nr) {
                kept.push(nr);
            }
        }
        rays = kept;
        processed.insert(h_idx);
    }
    rays
}

/// Extreme rays of `{x : (x, g) >= 0 for all generators}` under the pairing
/// given by a Gram matrix.
pub fn dual_cone_under_pairing(gram: &IntMatrix, generators: &[Vec<BigInt>]) -> PolyCone {
    let normals: Vec<Vec<BigInt>> = generators.iter().map(|g| gram.mul_vec(g)).collect();
    cone_from_inequalities(gram.rows(), &normals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(coords: &[i64]) -> Vec<BigInt> {
        coords.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn membership_basics() {
        let gens = vec![v(&[1, 0]), v(&[1, 1])];
        assert!(in_cone(&v(&[2, 1]), &gens));
        assert!(in_cone(&v(&[1, 1]), &gens));
        assert!(in_cone(&v(&[0, 0]), &gens));
        assert!(!in_cone(&v(&[0, -1]), &gens));
        assert!(!in_cone(&v(&[-1, 0]), &gens));
        assert!(!in_cone(&v(&[1, 2]), &gens));
    }

    #[test]
    fn extremal_rays_filter_interior_generators() {
        let gens = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert_eq!(extremal_ray_indices(&gens), vec![0, 1]);
        let dups = vec![v(&[1, 0]), v(&[2, 0]), v(&[0, 0])];
        assert_eq!(extremal_ray_indices(&dups), vec![0]);
    }

    #[test]
    fn orthant_is_self_dual() {
        let gram = IntMatrix::identity(3);
        let gens = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let dual = dual_cone_under_pairing(&gram, &gens);
        assert!(dual.lineality.is_empty());
        assert_eq!(
            dual.rays,
            vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]
        );
    }

    #[test]
    fn halfspace_has_lineality() {
        let gram = IntMatrix::identity(2);
        let gens = vec![v(&[1, 0])];
        let dual = dual_cone_under_pairing(&gram, &gens);
        assert_eq!(dual.rays, vec![v(&[1, 0])]);
        assert_eq!(dual.lineality, vec![v(&[0, 1])]);
        assert!(dual.contains(&v(&[3, -5])));
        assert!(!dual.contains(&v(&[-1, 2])));
    }

    #[test]
    fn square_cone_in_three_dimensions() {
        // cone over a square: normals x >= 0, y >= 0, z - x >= 0, z - y >= 0
        // with apex rays the four corners
        let normals = vec![
            v(&[1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[-1, 0, 1]),
            v(&[0, -1, 1]),
        ];
        let cone = cone_from_inequalities(3, &normals);
        assert!(cone.lineality.is_empty());
        assert_eq!(cone.rays.len(), 4);
        for r in &cone.rays {
            for n in &normals {
                let d: BigInt = n.iter().zip(r).map(|(a, b)| a * b).sum();
                assert!(!d.is_negative());
            }
        }
        assert!(cone.rays.contains(&v(&[0, 0, 1])));
        assert!(cone.rays.contains(&v(&[1, 1, 1])));
    }

    #[test]
    fn empty_normals_give_whole_space() {
        let cone = cone_from_inequalities(2, &[]);
        assert!(cone.rays.is_empty());
        assert_eq!(cone.lineality.len(), 2);
    }

    #[test]
    fn opposite_halfspaces_leave_a_hyperplane() {
        let normals = vec![v(&[1, 0]), v(&[-1, 0])];
        let cone = cone_from_inequalities(2, &normals);
        assert!(cone.rays.is_empty());
        assert_eq!(cone.lineality, vec![v(&[0, 1])]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prop_dual_matches_direct_inequalities(
            gens in proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 3),
                1..5,
            ),
            probe in proptest::collection::vec(-4i64..=4, 3),
        ) {
            let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| v(g)).collect();
            let gram = IntMatrix::identity(3);
            let dual = dual_cone_under_pairing(&gram, &gens);
            let x = v(&probe);
            let satisfies = gens.iter().all(|g| {
                let d: BigInt = g.iter().zip(&x).map(|(a, b)| a * b).sum();
                !d.is_negative()
            });
            prop_assert_eq!(satisfies, dual.contains(&x));
        }

        #[test]
        fn prop_extremal_subset_spans_same_cone(
            gens in proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 3),
                1..6,
            ),
        ) {
            let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| v(g)).collect();
            prop_assume!(cone_is_pointed(&gens));
            let idx = extremal_ray_indices(&gens);
            let sub: Vec<Vec<BigInt>> = idx.iter().map(|&i| gens[i].clone()).collect();
            for g in &gens {
                prop_assert!(in_cone(g, &sub));
            }
        }
    }
}
