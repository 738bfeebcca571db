//! Graded matrices over the polynomial ring and their degree-d strands.
//!
//! A `PolyMatrix` represents a degree-0 map F -> G of graded free modules,
//! where generator j of F sits in internal degree `col_degs[j]` and generator
//! i of G in `row_degs[i]`; entry (i,j) must therefore be homogeneous of
//! degree `col_degs[j] - row_degs[i]`. All rank/solve questions reduce to
//! finite k-linear strands.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::MatrixOverK;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use crate::sparse::SparseTriplets;
use std::collections::HashMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    field: FieldSpec,
    nvars: usize,
    pub row_degs: Vec<i64>,
    pub col_degs: Vec<i64>,
    /// Row-major, rows.len() x cols.len().
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(field: FieldSpec, nvars: usize, row_degs: Vec<i64>, col_degs: Vec<i64>) -> Self {
        let entries = vec![Polynomial::zero(field, nvars); row_degs.len() * col_degs.len()];
        PolyMatrix { field, nvars, row_degs, col_degs, entries }
    }

    /// Validating constructor: every entry must be homogeneous of the degree
    /// forced by the row/column degrees.
    pub fn new(
        field: FieldSpec,
        nvars: usize,
        row_degs: Vec<i64>,
        col_degs: Vec<i64>,
        entries: Vec<Polynomial>,
    ) -> Result<Self> {
        if entries.len() != row_degs.len() * col_degs.len() {
            return Err(Error::DimensionMismatch("entry count".into()));
        }
        let m = PolyMatrix { field, nvars, row_degs, col_degs, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let e = self.get(i, j);
                if e.field() != self.field || e.nvars() != self.nvars {
                    return Err(Error::IncompatibleOperands(format!("entry ({i},{j})")));
                }
                let want = self.col_degs[j] - self.row_degs[i];
                if !e.is_homogeneous_of(want) {
                    return Err(Error::Inhomogeneous {
                        row: i,
                        col: j,
                        msg: format!("expected degree {want}, got {e}"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.row_degs.len()
    }

    pub fn cols(&self) -> usize {
        self.col_degs.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols() + j]
    }

    /// Set with homogeneity check against the stored degrees.
    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) -> Result<()> {
        let want = self.col_degs[j] - self.row_degs[i];
        if !p.is_homogeneous_of(want) {
            return Err(Error::Inhomogeneous {
                row: i,
                col: j,
                msg: format!("expected degree {want}, got {p}"),
            });
        }
        let c = self.cols();
        self.entries[i * c + j] = p;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn negate(&self) -> PolyMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.negate();
        }
        out
    }

    pub fn try_sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.row_degs != rhs.row_degs || self.col_degs != rhs.col_degs {
            return Err(Error::DimensionMismatch("matrix sub degrees".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&rhs.entries) {
            *a = a.try_sub(b)?;
        }
        Ok(out)
    }

    /// Matrix product; source/target degrees must chain.
    pub fn compose(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.col_degs != rhs.row_degs {
            return Err(Error::DimensionMismatch(format!(
                "compose: inner degrees {:?} vs {:?}",
                self.col_degs, rhs.row_degs
            )));
        }
        let mut out =
            PolyMatrix::zero(self.field, self.nvars, self.row_degs.clone(), rhs.col_degs.clone());
        for i in 0..self.rows() {
            for j in 0..rhs.cols() {
                let mut acc = Polynomial::zero(self.field, self.nvars);
                for k in 0..self.cols() {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(rhs.get(k, j))?)?;
                }
                let c = out.cols();
                out.entries[i * c + j] = acc;
            }
        }
        Ok(out)
    }

    /// Apply to a column vector of polynomials.
    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch("apply: vector length".into()));
        }
        let mut out = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let mut acc = Polynomial::zero(self.field, self.nvars);
            for j in 0..self.cols() {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc = acc.try_add(&a.try_mul(&v[j])?)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows()).map(|i| self.get(i, j).clone()).collect()
    }

    /// Assemble from a grid of blocks. Row/column degree vectors are the
    /// concatenations of the block rows'/columns' degrees, which must agree
    /// across the grid.
    pub fn from_blocks(grid: &[Vec<&PolyMatrix>]) -> Result<PolyMatrix> {
        let first = grid
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Construction("empty block grid".into()))?;
        let (field, nvars) = (first.field, first.nvars);
        let mut row_degs = Vec::new();
        for row in grid {
            for b in row.iter().skip(1) {
                if b.row_degs != row[0].row_degs {
                    return Err(Error::DimensionMismatch("block row degrees".into()));
                }
            }
            row_degs.extend_from_slice(&row[0].row_degs);
        }
        let mut col_degs = Vec::new();
        for (bj, b) in grid[0].iter().enumerate() {
            for row in grid.iter().skip(1) {
                if row.len() != grid[0].len() {
                    return Err(Error::DimensionMismatch("ragged block grid".into()));
                }
                if row[bj].col_degs != b.col_degs {
                    return Err(Error::DimensionMismatch("block column degrees".into()));
                }
            }
            col_degs.extend_from_slice(&b.col_degs);
        }
        let mut out = PolyMatrix::zero(field, nvars, row_degs, col_degs);
        let mut roff = 0;
        for row in grid {
            let mut coff = 0;
            for b in row {
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        out.set(roff + i, coff + j, b.get(i, j).clone())?;
                    }
                }
                coff += b.cols();
            }
            roff += row[0].rows();
        }
        Ok(out)
    }

    /// Entry-wise image in k (kill all positive-degree terms): the matrix of
    /// the map tensored down to the residue field.
    pub fn reduce_mod_max_ideal(&self) -> MatrixOverK {
        let mut m = MatrixOverK::zero(self.field, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m.set(i, j, self.get(i, j).eval_zero());
            }
        }
        m
    }

    /// Is every entry in the maximal ideal (minimality of the map)?
    pub fn is_minimal(&self) -> bool {
        self.entries.iter().all(|p| p.in_max_ideal())
    }

    /// Dense matrix of the internal-degree-d strand.
    pub fn strand(&self, d: i64) -> MatrixOverK {
        let src = strand_basis(self.nvars, &self.col_degs, d);
        let tgt = strand_basis(self.nvars, &self.row_degs, d);
        let index = strand_index(&tgt);
        let mut m = MatrixOverK::zero(self.field, tgt.len(), src.len());
        for (cj, (j, mono)) in src.iter().enumerate() {
            for i in 0..self.rows() {
                let p = self.get(i, *j);
                for (mt, c) in p.terms() {
                    let target = mt.mul(mono);
                    let ri = index[&(i, target)];
                    m.set(ri, cj, m.get(ri, cj).add(c));
                }
            }
        }
        m
    }

    /// Rank of the degree-d strand via sparse elimination.
    pub fn strand_rank_sparse(&self, d: i64) -> usize {
        let src = strand_basis(self.nvars, &self.col_degs, d);
        let tgt = strand_basis(self.nvars, &self.row_degs, d);
        let index = strand_index(&tgt);
        let mut sp = SparseTriplets::new(tgt.len(), src.len());
        for (cj, (j, mono)) in src.iter().enumerate() {
            for i in 0..self.rows() {
                for (mt, c) in self.get(i, *j).terms() {
                    sp.push(index[&(i, mt.mul(mono))], cj, c.clone());
                }
            }
        }
        sp.rank()
    }
}

/// Basis of the degree-d strand of a graded free module with the given
/// generator degrees: pairs (generator index, monomial multiplier), generators
/// in order, monomials in descending order.
pub fn strand_basis(nvars: usize, degs: &[i64], d: i64) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for (i, &g) in degs.iter().enumerate() {
        for m in monomials_of_degree(nvars, d - g) {
            out.push((i, m));
        }
    }
    out
}

fn strand_index(basis: &[(usize, Monomial)]) -> HashMap<(usize, Monomial), usize> {
    basis.iter().enumerate().map(|(k, (i, m))| ((*i, m.clone()), k)).collect()
}

/// Strand dimension without materializing the basis.
pub fn strand_dim(nvars: usize, degs: &[i64], d: i64) -> usize {
    degs.iter()
        .map(|&g| {
            let e = d - g;
            if e < 0 {
                0
            } else {
                // Monomial count in `nvars` variables of degree e.
                let mut n: i64 = 1;
                for t in 1..nvars as i64 {
                    n = n * (e + t) / t;
                }
                n as usize
            }
        })
        .sum()
}

/// Coordinates of a homogeneous polynomial vector in the degree-d strand
/// basis; errors if some component is not homogeneous of the forced degree.
pub fn vector_in_strand(v: &[Polynomial], degs: &[i64], d: i64) -> Result<Vec<Scalar>> {
    if v.len() != degs.len() {
        return Err(Error::DimensionMismatch("strand vector length".into()));
    }
    let field = v
        .first()
        .map(|p| p.field())
        .ok_or_else(|| Error::DimensionMismatch("empty strand vector".into()))?;
    let nvars = v[0].nvars();
    let basis = strand_basis(nvars, degs, d);
    let index = strand_index(&basis);
    let mut out = vec![field.zero(); basis.len()];
    for (i, p) in v.iter().enumerate() {
        if !p.is_homogeneous_of(d - degs[i]) {
            return Err(Error::Inhomogeneous {
                row: i,
                col: 0,
                msg: format!("component degree must be {}", d - degs[i]),
            });
        }
        for (m, c) in p.terms() {
            out[index[&(i, m.clone())]] = c.clone();
        }
    }
    Ok(out)
}

/// Reassemble a strand coordinate vector into polynomials.
pub fn vector_from_strand(
    field: FieldSpec,
    nvars: usize,
    degs: &[i64],
    d: i64,
    coords: &[Scalar],
) -> Vec<Polynomial> {
    let basis = strand_basis(nvars, degs, d);
    debug_assert_eq!(basis.len(), coords.len());
    let mut out = vec![Polynomial::zero(field, nvars); degs.len()];
    for ((i, m), c) in basis.iter().zip(coords) {
        out[*i].add_term(m.clone(), c.clone());
    }
    out
}

/// Solve M x = b in the graded category: b is a homogeneous vector of
/// internal degree d in the target of M, and the solution x (if any) is a
/// homogeneous degree-d vector in the source. Free variables are set to zero,
/// so the answer is deterministic.
pub fn graded_solve(m: &PolyMatrix, b: &[Polynomial], d: i64) -> Result<Option<Vec<Polynomial>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch("graded_solve: rhs length".into()));
    }
    for (i, p) in b.iter().enumerate() {
        if !p.is_homogeneous_of(d - m.row_degs[i]) {
            return Err(Error::Inhomogeneous {
                row: i,
                col: 0,
                msg: format!("rhs component degree must be {}", d - m.row_degs[i]),
            });
        }
    }
    let rhs = vector_in_strand(b, &m.row_degs, d).or_else(|_| {
        // All-zero rhs with no terms still has valid coordinates.
        Ok::<_, Error>(vec![m.field().zero(); strand_dim(m.nvars(), &m.row_degs, d)])
    })?;
    let strand = m.strand(d);
    Ok(strand
        .solve(&rhs)
        .map(|x| vector_from_strand(m.field(), m.nvars(), &m.col_degs, d, &x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> FieldSpec {
        FieldSpec::default_fp()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, f(), 3).unwrap()
    }

    fn koszul_d1() -> PolyMatrix {
        PolyMatrix::new(f(), 3, vec![0], vec![1, 1, 1], vec![p("x1"), p("x2"), p("x3")]).unwrap()
    }

    fn koszul_d2() -> PolyMatrix {
        PolyMatrix::new(
            f(),
            3,
            vec![1, 1, 1],
            vec![2, 2, 2],
            vec![
                p("x2").negate(),
                p("x3").negate(),
                Polynomial::zero(f(), 3),
                p("x1"),
                Polynomial::zero(f(), 3),
                p("x3").negate(),
                Polynomial::zero(f(), 3),
                p("x1"),
                p("x2"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn homogeneity_enforced() {
        let bad = PolyMatrix::new(f(), 3, vec![0], vec![1], vec![p("x1^2")]);
        assert!(matches!(bad, Err(Error::Inhomogeneous { .. })));
        let mixed = PolyMatrix::new(f(), 3, vec![0], vec![2], vec![p("x1^2+x3")]);
        assert!(matches!(mixed, Err(Error::Inhomogeneous { .. })));
    }

    #[test]
    fn koszul_composes_to_zero() {
        assert!(koszul_d1().compose(&koszul_d2()).unwrap().is_zero());
    }

    #[test]
    fn strand_ranks_of_koszul_d1() {
        let d1 = koszul_d1();
        // Degree-1 strand: 3 source generators -> 3 linear monomials, rank 3.
        assert_eq!(d1.strand(1).rank(), 3);
        assert_eq!(d1.strand_rank_sparse(1), 3);
        // Degree-2 strand: 9 columns onto the 6 quadrics, surjective.
        assert_eq!(d1.strand(2).rank(), 6);
        assert_eq!(d1.strand_rank_sparse(2), 6);
        assert_eq!(strand_dim(3, &d1.col_degs, 2), 9);
    }

    #[test]
    fn dense_and_sparse_strands_agree() {
        let d2 = koszul_d2();
        for d in 0..6 {
            assert_eq!(d2.strand(d).rank(), d2.strand_rank_sparse(d));
        }
    }

    #[test]
    fn graded_solve_roundtrip() {
        let d1 = koszul_d1();
        // x1*x2 is in the image of d1 in degree 2.
        let b = vec![p("x1*x2")];
        let x = graded_solve(&d1, &b, 2).unwrap().unwrap();
        assert_eq!(d1.apply(&x).unwrap(), b);
        // Constant 1 is not (the map lands in the maximal ideal in degree 0).
        let none = graded_solve(&d1, &[p("1")], 0).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn strand_coordinates_roundtrip() {
        let degs = vec![1, 2];
        let v = vec![p("x1*x2-3*x3^2"), p("x2")];
        let coords = vector_in_strand(&v, &degs, 3).unwrap();
        let back = vector_from_strand(f(), 3, &degs, 3, &coords);
        assert_eq!(back, v);
    }

    #[test]
    fn block_assembly() {
        let a = koszul_d1();
        let z = PolyMatrix::zero(f(), 3, vec![0], vec![1, 1, 1]);
        let stacked = PolyMatrix::from_blocks(&[vec![&a, &z]]).unwrap();
        assert_eq!(stacked.cols(), 6);
        assert_eq!(stacked.row_degs, vec![0]);
        let grid = PolyMatrix::from_blocks(&[vec![&a], vec![&z]]).unwrap();
        assert_eq!(grid.rows(), 2);
    }
}
