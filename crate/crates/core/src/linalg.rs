//! Dense exact linear algebra over `Q(z_r)`.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cyclo::CycloNum;

pub type Vector = Vec<CycloNum>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    r: u32,
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl Matrix {
    pub fn zeros(r: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            r,
            rows,
            cols,
            data: vec![CycloNum::zero(r); rows * cols],
        }
    }

    pub fn identity(r: u32, n: usize) -> Self {
        let mut m = Self::zeros(r, n, n);
        for i in 0..n {
            m.set(i, i, CycloNum::one(r));
        }
        m
    }

    pub fn scalar(r: u32, n: usize, c: &CycloNum) -> Self {
        let mut m = Self::zeros(r, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(r: u32, rows: Vec<Vector>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let data: Vec<CycloNum> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), nrows * ncols, "ragged rows");
        Matrix {
            r,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(r: u32, rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(r, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> u32 {
        self.r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloNum::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.r, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = CycloNum::zero(self.r);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            r: self.r,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            r: self.r,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Matrix {
        Matrix {
            r: self.r,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Matrix {
        (0..e).fold(Self::identity(self.r, self.rows), |acc, _| acc.mul(self))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let f = self.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let rv = self.get(row, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &(&f * rv);
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CycloNum::zero(self.r); self.cols];
                v[f] = CycloNum::one(self.r);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.r, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycloNum::one(self.r));
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.r, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Restriction to an invariant subspace with the given basis: the matrix
    /// `B` with `A * basis_j = sum_i B_ij basis_i`. `None` if not invariant.
    pub fn restrict(&self, basis: &[Vector]) -> Option<Matrix> {
        let k = basis.len();
        let images: Vec<Vector> = basis.iter().map(|b| self.mul_vec(b)).collect();
        let coords = Subspace::coordinates_in(self.r, basis, &images)?;
        Some(Matrix::from_columns(self.r, k, &coords))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over Q(z_{})]", self.rows, self.cols, self.r)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

/// A subspace of `Q(z_r)^dim` kept as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    r: u32,
    dim: usize,
    // Rows in reduced echelon form.
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(r: u32, dim: usize) -> Self {
        Subspace {
            r,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(r: u32, dim: usize) -> Self {
        let mut s = Self::zero(r, dim);
        for i in 0..dim {
            let mut e = vec![CycloNum::zero(r); dim];
            e[i] = CycloNum::one(r);
            s.insert(&e);
        }
        s
    }

    pub fn spanned_by(r: u32, dim: usize, vectors: &[Vector]) -> Self {
        let mut s = Self::zero(r, dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[CycloNum]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[CycloNum]) -> bool {
        self.reduce(v).iter().all(CycloNum::is_zero)
    }

    /// Adds `v`; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[CycloNum]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w: Vector = w.iter().map(|x| x * &inv).collect();
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, w);
        self.pivots.insert(pos, p);
        true
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Solve a.x = b.y over the stacked bases.
        let k = self.rows.len();
        let cols: Vec<Vector> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|v| v.iter().map(|x| -x).collect()))
            .collect();
        let m = Matrix::from_columns(self.r, self.dim, &cols);
        let vecs: Vec<Vector> = m
            .nullspace()
            .into_iter()
            .map(|c| {
                let mut v = vec![CycloNum::zero(self.r); self.dim];
                for (coef, row) in c[..k].iter().zip(&self.rows) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += &(coef * y);
                    }
                }
                v
            })
            .collect();
        Subspace::spanned_by(self.r, self.dim, &vecs)
    }

    /// Coordinates of each target in the (linearly independent) `basis`.
    pub fn coordinates_in(r: u32, basis: &[Vector], targets: &[Vector]) -> Option<Vec<Vector>> {
        let dim = basis.first().map_or(0, Vec::len);
        let k = basis.len();
        let mut out = Vec::with_capacity(targets.len());
        let mut aug = Matrix::zeros(r, dim, k + targets.len());
        for (j, b) in basis.iter().enumerate() {
            for (i, x) in b.iter().enumerate() {
                aug.set(i, j, x.clone());
            }
        }
        for (t, v) in targets.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                aug.set(i, k + t, x.clone());
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&p| p >= k) || pivots.len() < k {
            return None;
        }
        for t in 0..targets.len() {
            out.push((0..k).map(|i| aug.get(i, k + t).clone()).collect());
        }
        Some(out)
    }

    /// A complement basis made of standard vectors.
    pub fn standard_complement(&self) -> Vec<Vector> {
        let mut sub = self.clone();
        let mut out = Vec::new();
        for i in 0..self.dim {
            let mut e = vec![CycloNum::zero(self.r); self.dim];
            e[i] = CycloNum::one(self.r);
            if sub.insert(&e) {
                out.push(e);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> CycloNum {
        CycloNum::from_int(3, n)
    }

    #[test]
    fn inverse_and_rank() {
        let m = Matrix::from_rows(3, vec![vec![q(1), q(2)], vec![q(3), CycloNum::root(3, 1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3, 2));
        let sing = Matrix::from_rows(3, vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(sing.rank(), 1);
        assert!(sing.inverse().is_none());
        let ns = sing.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(sing.mul_vec(&ns[0]).iter().all(CycloNum::is_zero));
    }

    #[test]
    fn subspace_ops() {
        let e = |a: i64, b: i64, c: i64| vec![q(a), q(b), q(c)];
        let s = Subspace::spanned_by(3, 3, &[e(1, 1, 0), e(0, 1, 1)]);
        assert_eq!(s.dimension(), 2);
        assert!(s.contains(&e(1, 2, 1)));
        assert!(!s.contains(&e(1, 0, 0)));
        let t = Subspace::spanned_by(3, 3, &[e(1, 0, 0), e(0, 1, 0)]);
        let i = s.intersect(&t);
        assert_eq!(i.dimension(), 1);
        assert!(i.contains(&e(1, 1, 0)));
        assert_eq!(s.standard_complement().len(), 1);
    }

    #[test]
    fn restriction_to_invariant_subspace() {
        let m = Matrix::from_rows(3, vec![vec![q(2), q(1)], vec![q(0), q(3)]]);
        let b = vec![vec![q(1), q(0)]];
        let res = m.restrict(&b).unwrap();
        assert_eq!(res, Matrix::from_rows(3, vec![vec![q(2)]]));
        assert!(m.restrict(&[vec![q(0), q(1)]]).is_none());
    }
}
