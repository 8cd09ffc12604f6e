//! Dense exact linear algebra: Gauss–Jordan elimination with the fixed
//! pivot rule (first nonzero in row-major scan), giving the canonical
//! reduced row echelon form. Every derived basis in the crate is therefore
//! reproducible bit for bit.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            spec,
            rows,
            cols,
            data: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            spec,
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_fn(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            spec,
            rows,
            cols,
            data,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.spec(), self.spec, "field mismatch in matrix entry");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.spec.zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = self.at(i, j);
                        if !a.is_zero() {
                            acc = &acc + &(a * x);
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Canonical reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero in row-major scan
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.at(r, c).inv().unwrap();
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = &(m.at(i, j) - &(&factor * m.at(r, j)));
                        m.set(i, j, v.clone());
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Some particular solution of `A x = b` (free variables zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.iter().any(|x| x.spec() != self.spec) {
            let other = b
                .iter()
                .find(|x| x.spec() != self.spec)
                .map(|x| x.spec())
                .unwrap();
            return Err(Error::FieldMismatch(
                self.spec.to_string(),
                other.to_string(),
            ));
        }
        if b.len() != self.rows {
            return Err(Error::InvalidInput(format!(
                "solve: {} rows vs rhs of length {}",
                self.rows,
                b.len()
            )));
        }
        // eliminate on [A | b]
        let mut aug = Matrix::zero(self.spec, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (e, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the rhs column: inconsistent
        }
        let mut x = vec![self.spec.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = e.at(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Echelon basis of `{x : A x = 0}`; the stacked basis rows are in
    /// canonical RREF (each vector's first nonzero coordinate is 1).
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (e, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut vecs = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![self.spec.zero(); self.cols];
            v[fc] = self.spec.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&(e.at(r, fc).clone());
            }
            vecs.push(v);
        }
        echelon_basis(self.spec, &vecs)
    }

    /// `A⁻¹` when `A` is square of full rank.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(self.spec, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, self.spec.one());
        }
        let (e, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return Ok(None);
        }
        let mut inv = Matrix::zero(self.spec, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.at(i, n + j).clone());
            }
        }
        Ok(Some(inv))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| self.at(i, j) * c)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zero(self.spec, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &(out.at(i, j) + &(a * b));
                    out.set(i, j, v.clone());
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| {
            self.at(i, j) + rhs.at(i, j)
        })
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.spec, self.rows, self.cols, |i, j| {
            self.at(i, j) - rhs.at(i, j)
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Canonical echelon basis of the span of `vecs` (nonzero RREF rows).
pub fn echelon_basis(spec: FieldSpec, vecs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(spec, vecs);
    let (e, pivots) = m.rref();
    (0..pivots.len()).map(|i| e.row(i).to_vec()).collect()
}

/// Coordinates of `v` in the span of `basis` (vectors as rows), if any.
pub fn coords_in_span(
    spec: FieldSpec,
    basis: &[Vec<Scalar>],
    v: &[Scalar],
) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let m = Matrix::from_rows(spec, basis).transpose();
    m.solve(v).ok().flatten()
}

/// Dot product of two coordinate vectors.
pub fn dot(spec: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut acc = spec.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}
