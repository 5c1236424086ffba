//! Dense matrices over exact scalars.
//!
//! The lattice, cone, and discriminant layers all reduce to linear algebra
//! over `Z` or `Q` on small dense matrices.  `IntMatrix` provides the integer
//! normal forms: Bareiss (fraction-free) determinants, Smith normal form with
//! its unimodular transforms, and Hermite normal form as the canonical
//! representative of a sublattice basis.  `RatMatrix` provides exact
//! Gauss-Jordan inversion and linear solving over the rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Dense row-major matrix over arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Result of [`IntMatrix::smith_normal_form`]: `u * a * v = s` with `u` and
/// `v` unimodular and `s` diagonal, each diagonal entry nonnegative and
/// dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from integer rows.  Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds from columns; `rows` disambiguates the empty case.
    pub fn from_columns(columns: &[Vec<BigInt>], rows: usize) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        let mut m = IntMatrix::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_diag(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(e));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = idx.iter().map(|&j| self.column(j)).collect();
        IntMatrix::from_columns(&cols, self.rows)
    }

    pub fn concat_columns(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMatrix::from_columns(&cols, self.rows)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// Rows as `i64` values, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(i64::try_from(self.get(i, j)).ok()?);
            }
            out.push(row);
        }
        Some(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q * row[src]`
    pub fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let add = self.get(src, j) * q;
            let v = self.get(dst, j) + add;
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += q * col[src]`
    pub fn add_multiple_of_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let add = self.get(i, src) * q;
            let v = self.get(i, dst) + add;
            self.set(i, dst, v);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by Bareiss fraction-free elimination.  Panics on a
    /// non-square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    /// Smith normal form via pivot shrinking: repeatedly moves a minimal
    /// nonzero entry to the pivot, clears its row and column with exact or
    /// remainder-leaving steps, and restores the divisibility chain by row
    /// merges.  All row operations are mirrored on `u`, all column
    /// operations on `v`, so `u * self * v = s` throughout.
    pub fn smith_normal_form(&self) -> SmithForm {
        let rows = self.rows;
        let cols = self.cols;
        let mut s = self.clone();
        let mut u = IntMatrix::identity(rows);
        let mut v = IntMatrix::identity(cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s.get(i, j).is_zero()
                        && pivot
                            .map_or(true, |(pi, pj)| s.get(i, j).abs() < s.get(pi, pj).abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !s.get(i, t).is_zero() {
                    let q = -(s.get(i, t) / s.get(t, t));
                    if !q.is_zero() {
                        s.add_multiple_of_row(i, t, &q);
                        u.add_multiple_of_row(i, t, &q);
                    }
                    if !s.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !s.get(t, j).is_zero() {
                    let q = -(s.get(t, j) / s.get(t, t));
                    if !q.is_zero() {
                        s.add_multiple_of_col(j, t, &q);
                        v.add_multiple_of_col(j, t, &q);
                    }
                    if !s.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }

            let p = s.get(t, t).clone();
            let mut divisible = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(s.get(i, j) % &p).is_zero() {
                        s.add_multiple_of_row(t, i, &BigInt::one());
                        u.add_multiple_of_row(t, i, &BigInt::one());
                        divisible = false;
                        break 'scan;
                    }
                }
            }
            if !divisible {
                continue;
            }
            if s.get(t, t).is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        SmithForm { s, u, v }
    }

    /// Number of nonzero diagonal entries of the Smith form.
    pub fn rank(&self) -> usize {
        let s = self.smith_normal_form().s;
        (0..self.rows.min(self.cols))
            .filter(|&i| !s.get(i, i).is_zero())
            .count()
    }

    /// Row-style Hermite normal form: row echelon with positive pivots and
    /// entries above each pivot reduced into `[0, pivot)`.  Canonical for the
    /// row span.
    pub fn hnf_rows(&self) -> IntMatrix {
        let mut h = self.clone();
        let rows = h.rows;
        let cols = h.cols;
        let mut pr = 0;
        for c in 0..cols {
            if pr >= rows {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in pr..rows {
                    if !h.get(i, c).is_zero()
                        && best.map_or(true, |b| h.get(i, c).abs() < h.get(b, c).abs())
                    {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(pr, b);
                let mut again = false;
                for i in pr + 1..rows {
                    if !h.get(i, c).is_zero() {
                        let q = -(h.get(i, c) / h.get(pr, c));
                        if !q.is_zero() {
                            h.add_multiple_of_row(i, pr, &q);
                        }
                        if !h.get(i, c).is_zero() {
                            again = true;
                        }
                    }
                }
                if again {
                    continue;
                }
                if h.get(pr, c).is_negative() {
                    h.negate_row(pr);
                }
                let p = h.get(pr, c).clone();
                for i in 0..pr {
                    let (q, _) = h.get(i, c).div_mod_floor(&p);
                    if !q.is_zero() {
                        h.add_multiple_of_row(i, pr, &(-q));
                    }
                }
                pr += 1;
                break;
            }
        }
        h
    }

    /// Column-style Hermite normal form with zero columns dropped: the
    /// canonical basis matrix for the column span.
    pub fn hnf_columns(&self) -> IntMatrix {
        let h = self.transpose().hnf_rows().transpose();
        let nonzero: Vec<usize> = (0..h.cols)
            .filter(|&j| (0..h.rows).any(|i| !h.get(i, j).is_zero()))
            .collect();
        h.select_columns(&nonzero)
    }

    /// Basis of the integer right kernel, in Hermite-canonical column form.
    pub fn kernel(&self) -> IntMatrix {
        let SmithForm { s, v, .. } = self.smith_normal_form();
        let rank = (0..self.rows.min(self.cols))
            .filter(|&i| !s.get(i, i).is_zero())
            .count();
        let idx: Vec<usize> = (rank..self.cols).collect();
        v.select_columns(&idx).hnf_columns()
    }

    /// Basis of the saturation of the column span: all vectors with a
    /// positive multiple in the span.
    pub fn column_saturation(&self) -> IntMatrix {
        let SmithForm { s, u, .. } = self.smith_normal_form();
        let rank = (0..self.rows.min(self.cols))
            .filter(|&i| !s.get(i, i).is_zero())
            .count();
        let u_inv = RatMatrix::from_int(&u)
            .inverse()
            .expect("unimodular matrix is invertible")
            .to_int()
            .expect("inverse of unimodular matrix is integral");
        let idx: Vec<usize> = (0..rank).collect();
        u_inv.select_columns(&idx).hnf_columns()
    }

    /// Completes a saturated full-column-rank set of columns to a basis of
    /// the ambient row space: returns a unimodular matrix whose first
    /// `self.cols` columns span the same sublattice as `self`.
    pub fn complete_columns_to_basis(&self) -> IntMatrix {
        let n = self.rows;
        let r = self.cols;
        if r == 0 {
            return IntMatrix::identity(n);
        }
        let SmithForm { s, u, v } = self.smith_normal_form();
        for i in 0..r {
            assert!(
                s.get(i, i).is_one(),
                "columns must be saturated and independent"
            );
        }
        let u_inv = RatMatrix::from_int(&u)
            .inverse()
            .expect("unimodular matrix is invertible")
            .to_int()
            .expect("inverse of unimodular matrix is integral");
        // U * self * V = [I_r; 0], so self * V equals the first r columns of
        // U^{-1}; the remaining columns of U^{-1} complete the basis.
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let sv = self * &v;
        for j in 0..r {
            cols.push(sv.column(j));
        }
        for j in r..n {
            cols.push(u_inv.column(j));
        }
        IntMatrix::from_columns(&cols, n)
    }

    /// Solves `self * x = b` over the rationals, returning one solution if
    /// the system is consistent.
    pub fn solve_rational(&self, b: &[BigInt]) -> Option<Vec<BigRational>> {
        let rat_b: Vec<BigRational> = b.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        RatMatrix::from_int(self).solve(&rat_b)
    }

    /// Tests whether `v` lies in the integer column span.
    pub fn column_span_contains(&self, v: &[BigInt]) -> bool {
        match self.solve_rational(v) {
            Some(x) => x.iter().all(|c| c.is_integer()),
            None => false,
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        m
    }
}

/// Dense row-major matrix over arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RatMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Every entry as an integer, if all denominators are 1.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_integer() {
                    return None;
                }
                out.set(i, j, e.to_integer());
            }
        }
        Some(out)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a.get(i, col).is_zero());
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            a.swap_rows_int(col, p);
            inv.swap_rows_int(col, p);
            let scale = a.get(col, col).recip();
            a.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for i in 0..n {
                if i != col && !a.get(i, col).is_zero() {
                    let factor = -a.get(i, col).clone();
                    a.add_multiple_of_row(i, col, &factor);
                    inv.add_multiple_of_row(i, col, &factor);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = b`, returning one solution with free variables set
    /// to zero, or `None` when inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut pr = 0;
        for c in 0..self.cols {
            if pr >= self.rows {
                break;
            }
            let Some(p) = (pr..self.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows_int(pr, p);
            rhs.swap(pr, p);
            let scale = a.get(pr, c).recip();
            a.scale_row(pr, &scale);
            rhs[pr] = &rhs[pr] * &scale;
            for i in 0..self.rows {
                if i != pr && !a.get(i, c).is_zero() {
                    let factor = a.get(i, c).clone();
                    a.add_multiple_of_row(i, pr, &(-factor.clone()));
                    rhs[i] = &rhs[i] - &(&factor * &rhs[pr]);
                }
            }
            pivots.push((pr, c));
            pr += 1;
        }
        for i in pr..self.rows {
            if !rhs[i].is_zero() {
                return None;
            }
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for &(r, c) in &pivots {
            x[c] = rhs[r].clone();
        }
        Some(x)
    }

    fn swap_rows_int(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, k: &BigRational) {
        for j in 0..self.cols {
            let v = self.get(i, j) * k;
            self.set(i, j, v);
        }
    }

    fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &BigRational) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let add = self.get(src, j) * q;
            let v = self.get(dst, j) + add;
            self.set(dst, j, v);
        }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_cofactor(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m.get(0, j).is_zero() {
                continue;
            }
            let minor_rows: Vec<Vec<BigInt>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m.get(i, c).clone())
                        .collect()
                })
                .collect();
            let term = m.get(0, j) * det_cofactor(&IntMatrix::from_bigint_rows(minor_rows));
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn arb_matrix(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(-max_abs..=max_abs, r * c).prop_map(move |vals| {
                let rows: Vec<Vec<i64>> = vals.chunks(c).map(|ch| ch.to_vec()).collect();
                IntMatrix::from_rows(&rows)
            })
        })
    }

    fn arb_square(max_dim: usize, max_abs: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max_dim).prop_flat_map(move |n| {
            proptest::collection::vec(-max_abs..=max_abs, n * n).prop_map(move |vals| {
                let rows: Vec<Vec<i64>> = vals.chunks(n).map(|ch| ch.to_vec()).collect();
                IntMatrix::from_rows(&rows)
            })
        })
    }

    fn unimodular_from_ops(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for &(i, j, c) in ops {
            let (i, j) = (i % n, j % n);
            if i != j {
                m.add_multiple_of_col(i, j, &BigInt::from(c));
            }
        }
        m
    }

    #[test]
    fn det_known_values() {
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).det(), BigInt::from(-2));
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(m.det(), BigInt::from(5));
        assert_eq!(IntMatrix::identity(4).det(), BigInt::one());
        assert_eq!(IntMatrix::zero(3, 3).det(), BigInt::zero());
    }

    #[test]
    fn det_needs_row_swap() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![0, 2, 1], vec![0, 0, 3], vec![5, 0, 0]]);
        assert_eq!(m.det(), det_cofactor(&m));
    }

    #[test]
    fn smith_known_diagonals() {
        let f = IntMatrix::from_diag(&[2, 3]).smith_normal_form();
        assert_eq!(f.s, IntMatrix::from_diag(&[1, 6]));

        let f = IntMatrix::from_diag(&[4, 6, 10]).smith_normal_form();
        assert_eq!(f.s, IntMatrix::from_diag(&[2, 2, 60]));

        let f = IntMatrix::zero(2, 3).smith_normal_form();
        assert_eq!(f.s, IntMatrix::zero(2, 3));

        let f = IntMatrix::identity(3).smith_normal_form();
        assert_eq!(f.s, IntMatrix::identity(3));
    }

    #[test]
    fn smith_nonsquare() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6], vec![4, 8, 12]]);
        let f = m.smith_normal_form();
        assert_eq!(&(&f.u * &m) * &f.v, f.s);
        assert_eq!(f.s.get(0, 0), &BigInt::from(2));
        assert!(f.s.get(1, 1).is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn hnf_membership() {
        let basis = IntMatrix::from_columns(
            &[
                vec![BigInt::from(2), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(3)],
            ],
            2,
        );
        assert!(basis.column_span_contains(&[BigInt::from(4), BigInt::from(-3)]));
        assert!(!basis.column_span_contains(&[BigInt::from(1), BigInt::from(0)]));
        assert!(!basis.column_span_contains(&[BigInt::from(2), BigInt::from(1)]));
    }

    #[test]
    fn saturation_examples() {
        let m = IntMatrix::from_columns(&[vec![BigInt::from(2), BigInt::from(4)]], 2);
        let sat = m.column_saturation();
        assert_eq!(sat.cols(), 1);
        assert_eq!(sat.column(0), vec![BigInt::from(1), BigInt::from(2)]);

        let m = IntMatrix::from_diag(&[2, 3]);
        assert_eq!(m.column_saturation(), IntMatrix::identity(2));
    }

    #[test]
    fn kernel_example() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero_matrix());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = RatMatrix::from_int(&m).inverse().unwrap();
        let prod = &RatMatrix::from_int(&m) * &inv;
        assert_eq!(prod, RatMatrix::identity(2));
        assert!(RatMatrix::from_int(&IntMatrix::zero(2, 2)).inverse().is_err());
    }

    proptest! {
        #[test]
        fn prop_det_matches_cofactor(m in arb_square(4, 6)) {
            prop_assert_eq!(m.det(), det_cofactor(&m));
        }

        #[test]
        fn prop_smith_contract(m in arb_matrix(5, 8)) {
            let f = m.smith_normal_form();
            prop_assert_eq!(&(&f.u * &m) * &f.v, f.s.clone());
            prop_assert_eq!(f.u.det().abs(), BigInt::one());
            prop_assert_eq!(f.v.det().abs(), BigInt::one());
            let n = m.rows().min(m.cols());
            for i in 0..f.s.rows() {
                for j in 0..f.s.cols() {
                    if i != j {
                        prop_assert!(f.s.get(i, j).is_zero());
                    }
                }
            }
            for i in 0..n {
                prop_assert!(!f.s.get(i, i).is_negative());
            }
            for i in 0..n.saturating_sub(1) {
                let a = f.s.get(i, i);
                let b = f.s.get(i + 1, i + 1);
                if !a.is_zero() {
                    prop_assert!((b % a).is_zero());
                } else {
                    prop_assert!(b.is_zero());
                }
            }
        }

        #[test]
        fn prop_kernel_annihilates(m in arb_matrix(5, 6)) {
            let k = m.kernel();
            if k.cols() > 0 {
                prop_assert!((&m * &k).is_zero_matrix());
            }
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
        }

        #[test]
        fn prop_hnf_canonical_under_column_ops(
            m in arb_matrix(4, 5),
            ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6),
        ) {
            let w = unimodular_from_ops(m.cols(), &ops);
            prop_assert_eq!(m.hnf_columns(), (&m * &w).hnf_columns());
        }

        #[test]
        fn prop_inverse_round_trip(m in arb_square(4, 5)) {
            if m.det().is_zero() {
                prop_assert!(RatMatrix::from_int(&m).inverse().is_err());
            } else {
                let rm = RatMatrix::from_int(&m);
                let inv = rm.inverse().unwrap();
                prop_assert_eq!(&rm * &inv, RatMatrix::identity(m.rows()));
                prop_assert_eq!(&inv * &rm, RatMatrix::identity(m.rows()));
            }
        }

        #[test]
        fn prop_solve_consistent(m in arb_matrix(4, 5), xs in proptest::collection::vec(-5i64..=5, 4)) {
            let x: Vec<BigInt> = xs.iter().take(m.cols()).map(|&v| BigInt::from(v)).collect();
            if x.len() == m.cols() {
                let b = m.mul_vec(&x);
                let sol = m.solve_rational(&b);
                prop_assert!(sol.is_some());
                let sol = sol.unwrap();
                let rb: Vec<BigRational> = b.iter().map(|v| BigRational::from_integer(v.clone())).collect();
                prop_assert_eq!(RatMatrix::from_int(&m).mul_vec(&sol), rb);
            }
        }
    }
}
