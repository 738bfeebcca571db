//! Dense exact linear algebra over the coefficient field.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Dense matrix over k, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixOverK {
    pub rows: usize,
    pub cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl MatrixOverK {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        MatrixOverK { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        debug_assert!(rows.iter().all(|row| row.len() == c));
        MatrixOverK { rows: r, cols: c, field, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> MatrixOverK {
        let mut t = Self::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &MatrixOverK) -> Result<MatrixOverK> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.set(i, j, out.get(i, j).add(&a.mul(b)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc.add(&a.mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                self.set(r, j, self.get(r, j).mul(&inv));
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// One solution of `self * x = b` (free variables set to zero), or None.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        debug_assert_eq!(b.len(), self.rows);
        let mut aug = MatrixOverK::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right kernel, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m.get(r, free).neg();
            }
            out.push(v);
        }
        out
    }
}

/// A subquotient Z/B of k^n: the span of `cycles` modulo the span of
/// `boundaries` (which must lie inside it). Vectors are columns.
pub struct Subquotient {
    ambient: usize,
    /// [boundary span | chosen cycle representatives], used for projection.
    frame: MatrixOverK,
    nboundaries: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subquotient {
    pub fn new(
        field: FieldSpec,
        ambient: usize,
        cycles: &[Vec<Scalar>],
        boundaries: &[Vec<Scalar>],
    ) -> Result<Subquotient> {
        for v in cycles.iter().chain(boundaries) {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch("subquotient vector length".into()));
            }
        }
        // Columns: boundaries first, then cycles; cycle columns that add a new
        // pivot become the quotient basis.
        let total = boundaries.len() + cycles.len();
        let mut m = MatrixOverK::zero(field, ambient, total);
        for (j, v) in boundaries.iter().chain(cycles.iter()).enumerate() {
            for i in 0..ambient {
                m.set(i, j, v[i].clone());
            }
        }
        let pivots = m.clone().rref();
        let nb_rank_cols: Vec<usize> = pivots
            .iter()
            .copied()
            .filter(|&c| c >= boundaries.len())
            .collect();
        let nboundaries = pivots.len() - nb_rank_cols.len();
        let mut basis = Vec::new();
        let mut frame_cols: Vec<Vec<Scalar>> = pivots
            .iter()
            .copied()
            .filter(|&c| c < boundaries.len())
            .map(|c| m.column(c))
            .collect();
        for &c in &nb_rank_cols {
            let v = m.column(c);
            frame_cols.push(v.clone());
            basis.push(v);
        }
        let mut frame = MatrixOverK::zero(field, ambient, frame_cols.len());
        for (j, v) in frame_cols.iter().enumerate() {
            for i in 0..ambient {
                frame.set(i, j, v[i].clone());
            }
        }
        Ok(Subquotient { ambient, frame, nboundaries, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Coordinates of `v` (must lie in the cycle span) in the quotient basis.
    pub fn project(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch("projection vector length".into()));
        }
        let x = self
            .frame
            .solve(v)
            .ok_or_else(|| Error::Precondition("vector not in cycle span".into()))?;
        Ok(x[self.nboundaries..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> FieldSpec {
        FieldSpec::default_fp()
    }

    fn m(rows: &[&[i64]]) -> MatrixOverK {
        MatrixOverK::from_rows(
            f(),
            rows.iter().map(|r| r.iter().map(|&v| f().from_i64(v)).collect()).collect(),
        )
    }

    #[test]
    fn rank_cases() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(MatrixOverK::zero(f(), 3, 2).rank(), 0);
    }

    #[test]
    fn solve_and_verify() {
        let a = m(&[&[1, 2, 3], &[0, 1, 4]]);
        let b = vec![f().from_i64(7), f().from_i64(9)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        // Inconsistent system.
        let a2 = m(&[&[1, 1], &[2, 2]]);
        assert!(a2.solve(&[f().from_i64(1), f().from_i64(3)]).is_none());
    }

    #[test]
    fn kernel_is_kernel() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(|v| v.is_zero()));
        // Rank-nullity.
        assert_eq!(a.rank() + ker.len(), a.cols);
    }

    #[test]
    fn matmul_identity() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6]]);
        let id = MatrixOverK::identity(f(), 2);
        assert_eq!(a.matmul(&id).unwrap(), a);
    }

    #[test]
    fn subquotient_dims_and_projection() {
        // Z = span{e1, e2}, B = span{e1} in k^3: quotient is 1-dimensional.
        let e1 = vec![f().one(), f().zero(), f().zero()];
        let e2 = vec![f().zero(), f().one(), f().zero()];
        let sq = Subquotient::new(f(), 3, &[e1.clone(), e2.clone()], &[e1.clone()]).unwrap();
        assert_eq!(sq.dim(), 1);
        // e1 + 5 e2 projects to coordinate 5.
        let v = vec![f().one(), f().from_i64(5), f().zero()];
        assert_eq!(sq.project(&v).unwrap(), vec![f().from_i64(5)]);
        // A vector outside Z is rejected.
        let e3 = vec![f().zero(), f().zero(), f().one()];
        assert!(sq.project(&e3).is_err());
    }

    #[test]
    fn subquotient_zero_quotient() {
        let e1 = vec![f().one(), f().zero()];
        let sq = Subquotient::new(f(), 2, &[e1.clone()], &[e1.clone()]).unwrap();
        assert_eq!(sq.dim(), 0);
        assert!(sq.project(&e1).unwrap().is_empty());
    }
}
