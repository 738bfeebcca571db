//! Degreewise k-linear model of a graded quotient ring R/I.
//!
//! Each degree-d stratum is computed by row-reducing the span of I_d against
//! the monomial basis of R_d; the non-pivot monomials represent a basis of
//! (R/I)_d and arbitrary polynomials reduce to coordinates in that basis.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::{Homogeneity, Polynomial};
use std::collections::HashMap;

pub struct QuotientRing {
    field: FieldSpec,
    nvars: usize,
    gens: Vec<Polynomial>,
}

/// The degree-d slice: RREF rows of I_d plus the induced quotient basis.
pub struct Stratum {
    pub degree: i64,
    /// All monomials of degree d, in the fixed descending order (columns).
    pub monomials: Vec<Monomial>,
    /// Monomials at non-pivot columns: a basis of (R/I)_d.
    pub basis: Vec<Monomial>,
    pivots: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    col_index: HashMap<Monomial, usize>,
    basis_pos: HashMap<usize, usize>,
    field: FieldSpec,
}

impl QuotientRing {
    pub fn new(field: FieldSpec, nvars: usize, gens: Vec<Polynomial>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.field() != field || g.nvars() != nvars {
                return Err(Error::IncompatibleOperands(format!("generator {i}")));
            }
            if matches!(g.homogeneity(), Homogeneity::Inhomogeneous) {
                return Err(Error::UnsupportedInput(format!(
                    "generator {i} is not homogeneous"
                )));
            }
        }
        Ok(QuotientRing { field, nvars, gens: gens.into_iter().filter(|g| !g.is_zero()).collect() })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn stratum(&self, d: i64) -> Stratum {
        let monomials = monomials_of_degree(self.nvars, d);
        let col_index: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        // Span of I_d: every monomial multiple of every generator.
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in &self.gens {
            let gd = g.degree().unwrap() as i64;
            for m in monomials_of_degree(self.nvars, d - gd) {
                let prod = g.mul_monomial(&m);
                let mut row = vec![self.field.zero(); monomials.len()];
                for (mm, c) in prod.terms() {
                    row[col_index[mm]] = c.clone();
                }
                rows.push(row);
            }
        }
        // In-place RREF keeping only independent rows.
        let ncols = monomials.len();
        let mut pivots: Vec<usize> = Vec::new();
        let mut kept: Vec<Vec<Scalar>> = Vec::new();
        for mut row in rows {
            // Eliminate against existing pivot rows.
            for k in 0..kept.len() {
                let c = pivots[k];
                if !row[c].is_zero() {
                    let fac = row[c].clone();
                    for j in 0..ncols {
                        row[j] = row[j].sub(&fac.mul(&kept[k][j]));
                    }
                }
            }
            if let Some(c) = (0..ncols).find(|&j| !row[j].is_zero()) {
                let inv = row[c].inv();
                for j in 0..ncols {
                    row[j] = row[j].mul(&inv);
                }
                // Back-eliminate the new pivot from earlier rows.
                for (kr, _) in kept.iter_mut().zip(&pivots) {
                    if !kr[c].is_zero() {
                        let f = kr[c].clone();
                        for j in 0..ncols {
                            kr[j] = kr[j].sub(&f.mul(&row[j]));
                        }
                    }
                }
                kept.push(row);
                pivots.push(c);
            }
        }
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let basis: Vec<Monomial> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_set.contains(i))
            .map(|(_, m)| m.clone())
            .collect();
        let basis_pos: HashMap<usize, usize> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_set.contains(i))
            .enumerate()
            .map(|(b, (i, _))| (i, b))
            .collect();
        Stratum {
            degree: d,
            monomials,
            basis,
            pivots,
            rows: kept,
            col_index,
            basis_pos,
            field: self.field,
        }
    }

    /// Hilbert function of R/I in degrees 0..=dmax.
    pub fn hilbert(&self, dmax: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for d in 0..=dmax {
            let s = self.stratum(d);
            out.push(s.dim());
            // Once a stratum vanishes all later ones do too (R_1·R_d spans).
            if s.dim() == 0 {
                for _ in (d + 1)..=dmax {
                    out.push(0);
                }
                break;
            }
        }
        out
    }

    /// Least degree with (R/I)_d = 0, within the bound; None when the
    /// quotient is not (visibly) m-primary.
    pub fn socle_bound(&self, dmax: i64) -> Option<i64> {
        (0..=dmax).find(|&d| self.stratum(d).dim() == 0)
    }
}

impl Stratum {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of p + I in the non-pivot monomial basis. p must be
    /// homogeneous of this stratum's degree (zero allowed).
    pub fn reduce(&self, p: &Polynomial) -> Result<Vec<Scalar>> {
        if !p.is_homogeneous_of(self.degree) {
            return Err(Error::Inhomogeneous {
                row: 0,
                col: 0,
                msg: format!("reduce expects degree {}", self.degree),
            });
        }
        let mut v = vec![self.field.zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            v[self.col_index[m]] = c.clone();
        }
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if !v[c].is_zero() {
                let f = v[c].clone();
                for j in 0..v.len() {
                    v[j] = v[j].sub(&f.mul(&row[j]));
                }
            }
        }
        let mut out = vec![self.field.zero(); self.basis.len()];
        for (i, val) in v.into_iter().enumerate() {
            if !val.is_zero() {
                out[*self.basis_pos.get(&i).expect("non-pivot residue")] = val;
            }
        }
        Ok(out)
    }
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

    #[test]
    fn maximal_ideal_quotient() {
        let q = QuotientRing::new(f(), 3, vec![p("x1"), p("x2"), p("x3")]).unwrap();
        assert_eq!(q.hilbert(4), vec![1, 0, 0, 0, 0]);
        assert_eq!(q.socle_bound(4), Some(1));
    }

    #[test]
    fn squares_quotient_hilbert() {
        // R/(x1^2, x2^2, x3^2): Hilbert 1, 3, 3, 1, 0.
        let q = QuotientRing::new(f(), 3, vec![p("x1^2"), p("x2^2"), p("x3^2")]).unwrap();
        assert_eq!(q.hilbert(5), vec![1, 3, 3, 1, 0, 0]);
    }

    #[test]
    fn non_primary_has_no_socle_bound() {
        let q = QuotientRing::new(f(), 3, vec![p("x1"), p("x2")]).unwrap();
        assert_eq!(q.socle_bound(10), None);
    }

    #[test]
    fn reduce_respects_relations() {
        let q = QuotientRing::new(f(), 3, vec![p("x2^2-x1*x3")]).unwrap();
        let s = q.stratum(2);
        assert_eq!(s.dim(), 5);
        // x2^2 and x1*x3 agree in the quotient.
        let a = s.reduce(&p("x2^2")).unwrap();
        let b = s.reduce(&p("x1*x3")).unwrap();
        assert_eq!(a, b);
        // An ideal element reduces to zero.
        let zero = s.reduce(&p("3*x2^2-3*x1*x3")).unwrap();
        assert!(zero.iter().all(|c| c.is_zero()));
        // Reduction is k-linear on representatives.
        let c1 = s.reduce(&p("x1^2+x2^2")).unwrap();
        let c2: Vec<Scalar> = s
            .reduce(&p("x1^2"))
            .unwrap()
            .iter()
            .zip(&s.reduce(&p("x2^2")).unwrap())
            .map(|(u, v)| u.add(v))
            .collect();
        assert_eq!(c1, c2);
    }

    #[test]
    fn pfaffian_type_quotient_is_primary() {
        // (x3^2, x2*x3, x2^2-x1*x3, x1*x2, x1^2) is m-primary with Hilbert 1,3,1.
        let gens = vec![p("x3^2"), p("x2*x3"), p("x2^2-x1*x3"), p("x1*x2"), p("x1^2")];
        let q = QuotientRing::new(f(), 3, gens).unwrap();
        assert_eq!(q.hilbert(4), vec![1, 3, 1, 0, 0]);
    }
}
