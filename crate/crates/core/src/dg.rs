//! DG-algebra structures on length <= 3 complexes as structure-constant
//! tables, with exact Leibniz/commutativity checking and construction by
//! lifting.
//!
//! Only two tables are stored: C_1·C_1 -> C_2 for ordered pairs i < j
//! (graded commutativity and vanishing odd squares then hold by construction)
//! and C_1·C_2 -> C_3 for all pairs. Everything else is forced: C_0 acts as
//! the ring, and products landing above degree 3 vanish.

use crate::complex::FreeComplex;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{graded_solve, PolyMatrix};
use crate::linalg::MatrixOverK;
use crate::poly::Polynomial;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct DGProduct {
    /// (i, j) with i < j, both C_1 indices -> coordinates in C_2.
    pub one_one: BTreeMap<(usize, usize), Vec<Polynomial>>,
    /// (i in C_1, j in C_2) -> coordinates in C_3.
    pub one_two: BTreeMap<(usize, usize), Vec<Polynomial>>,
}

fn zero_vec(c: &FreeComplex, n: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(c.field(), c.nvars()); c.rank(n)]
}

fn add_scaled(acc: &mut [Polynomial], v: &[Polynomial], s: &Polynomial) -> Result<()> {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.try_add(&b.try_mul(s)?)?;
    }
    Ok(())
}

impl DGProduct {
    pub fn empty() -> Self {
        DGProduct { one_one: BTreeMap::new(), one_two: BTreeMap::new() }
    }

    fn table_11(&self, c: &FreeComplex, i: usize, j: usize) -> Vec<Polynomial> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => zero_vec(c, 2),
            Less => self.one_one.get(&(i, j)).cloned().unwrap_or_else(|| zero_vec(c, 2)),
            Greater => self
                .one_one
                .get(&(j, i))
                .map(|v| v.iter().map(|p| p.negate()).collect())
                .unwrap_or_else(|| zero_vec(c, 2)),
        }
    }

    fn table_12(&self, c: &FreeComplex, i: usize, j: usize) -> Vec<Polynomial> {
        self.one_two.get(&(i, j)).cloned().unwrap_or_else(|| zero_vec(c, 3))
    }

    /// Product of basis generators a ∈ C_i, b ∈ C_j as coordinates in
    /// C_{i+j} (empty vector when the target vanishes or i+j > 3).
    pub fn gen_product(
        &self,
        c: &FreeComplex,
        i: usize,
        ai: usize,
        j: usize,
        bj: usize,
    ) -> Vec<Polynomial> {
        if i + j > 3 {
            return Vec::new();
        }
        match (i, j) {
            (0, _) => {
                let mut v = zero_vec(c, j);
                v[bj] = Polynomial::one(c.field(), c.nvars());
                v
            }
            (_, 0) => {
                let mut v = zero_vec(c, i);
                v[ai] = Polynomial::one(c.field(), c.nvars());
                v
            }
            (1, 1) => self.table_11(c, ai, bj),
            (1, 2) => self.table_12(c, ai, bj),
            // (-1)^{2·1} = +1: products through C_2 commute with C_1.
            (2, 1) => self.table_12(c, bj, ai),
            _ => zero_vec(c, i + j),
        }
    }

    /// Bilinear extension of the generator products to coordinate vectors
    /// with polynomial entries.
    pub fn mul(
        &self,
        c: &FreeComplex,
        i: usize,
        a: &[Polynomial],
        j: usize,
        b: &[Polynomial],
    ) -> Result<Vec<Polynomial>> {
        if a.len() != c.rank(i) || b.len() != c.rank(j) {
            return Err(Error::DimensionMismatch("product operand length".into()));
        }
        if i + j > 3 {
            return Ok(Vec::new());
        }
        let mut acc = zero_vec(c, i + j);
        for (ai, pa) in a.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (bj, pb) in b.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                let t = self.gen_product(c, i, ai, j, bj);
                add_scaled(&mut acc, &t, &pa.try_mul(pb)?)?;
            }
        }
        Ok(acc)
    }
}

/// Apply the differential to a coordinate vector in C_n, n >= 1.
pub fn apply_d(c: &FreeComplex, n: usize, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
    c.d[n - 1].apply(v)
}

fn basis_vec(c: &FreeComplex, n: usize, i: usize) -> Vec<Polynomial> {
    let mut v = zero_vec(c, n);
    v[i] = Polynomial::one(c.field(), c.nvars());
    v
}

#[derive(Debug)]
pub struct LeibnizReport {
    pub defects: Vec<String>,
}

impl LeibnizReport {
    pub fn pass(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Evaluate d(ab) - d(a)b - (-1)^i a d(b) on every generator pair
/// (i, j) with i <= j, i, j >= 1. Pairs with i + j > 3 check the forced
/// relation d(a)b = (-1)^{i+1} a d(b) (their product vanishes in C_{>3}).
pub fn check_leibniz(c: &FreeComplex, p: &DGProduct) -> Result<LeibnizReport> {
    let mut defects = Vec::new();
    for (i, j) in [(1usize, 1usize), (1, 2), (2, 2), (1, 3)] {
        for ai in 0..c.rank(i) {
            let bstart = if i == j { ai } else { 0 };
            for bj in bstart..c.rank(j) {
                let a = basis_vec(c, i, ai);
                let b = basis_vec(c, j, bj);
                // d(ab), in C_{i+j-1}; zero when i+j > 3.
                let mut lhs = if i + j <= 3 {
                    apply_d(c, i + j, &p.mul(c, i, &a, j, &b)?)?
                } else {
                    zero_vec(c, i + j - 1)
                };
                let da = apply_d(c, i, &a)?;
                let term1 = p.mul(c, i - 1, &da, j, &b)?;
                let db = apply_d(c, j, &b)?;
                let term2 = p.mul(c, i, &a, j - 1, &db)?;
                for (k, t) in term1.iter().enumerate() {
                    lhs[k] = lhs[k].try_sub(t)?;
                }
                for (k, t) in term2.iter().enumerate() {
                    // (-1)^i a d(b): our stored pairs have i odd except (2,2).
                    lhs[k] = if i % 2 == 0 {
                        lhs[k].try_sub(t)?
                    } else {
                        lhs[k].try_add(t)?
                    };
                }
                if lhs.iter().any(|q| !q.is_zero()) {
                    defects.push(format!(
                        "Leibniz defect for (C{}[{}], C{}[{}]): {:?}",
                        i,
                        ai,
                        j,
                        bj,
                        lhs.iter().map(|q| q.to_string()).collect::<Vec<_>>()
                    ));
                }
            }
        }
    }
    Ok(LeibnizReport { defects })
}

/// Construct a DG structure on a resolution of a cyclic module by lifting the
/// Leibniz constraints through the (exact) differentials. Deterministic: the
/// graded solver sets free variables to zero.
pub fn complete_product_by_lifting(c: &FreeComplex) -> Result<DGProduct> {
    let mut p = DGProduct::empty();
    let degs1 = c.degs(1);
    // C_1·C_1: solve d_2(g) = d_1(a)b - d_1(b)a.
    for i in 0..c.rank(1) {
        for j in (i + 1)..c.rank(1) {
            let di = c.d[0].get(0, i).clone();
            let dj = c.d[0].get(0, j).clone();
            let mut rhs = zero_vec(c, 1);
            rhs[j] = di;
            rhs[i] = dj.negate();
            let deg = degs1[i] + degs1[j];
            let g = solve_or_zero(&c.d[1], &rhs, deg)?.ok_or_else(|| {
                Error::Construction(format!("no product lift for C1 pair ({i},{j})"))
            })?;
            p.one_one.insert((i, j), g);
        }
    }
    // C_1·C_2: solve d_3(g) = d_1(a)h - a·d_2(h).
    let degs2 = c.degs(2);
    for i in 0..c.rank(1) {
        for j in 0..c.rank(2) {
            let a = basis_vec(c, 1, i);
            let h = basis_vec(c, 2, j);
            let da = c.d[0].get(0, i).clone();
            let dh = apply_d(c, 2, &h)?;
            let adh = p.mul(c, 1, &a, 1, &dh)?;
            let mut rhs = zero_vec(c, 2);
            for (k, t) in adh.iter().enumerate() {
                rhs[k] = h[k].try_mul(&da)?.try_sub(t)?;
            }
            let deg = degs1[i] + degs2[j];
            let g = solve_or_zero(&c.d[2], &rhs, deg)?.ok_or_else(|| {
                Error::Construction(format!("no product lift for C1[{i}]·C2[{j}]"))
            })?;
            p.one_two.insert((i, j), g);
        }
    }
    Ok(p)
}

/// graded_solve wrapper that treats an empty solution space correctly: when
/// the matrix has zero columns a zero rhs lifts to the empty vector.
fn solve_or_zero(
    m: &PolyMatrix,
    rhs: &[Polynomial],
    deg: i64,
) -> Result<Option<Vec<Polynomial>>> {
    if m.cols() == 0 {
        return if rhs.iter().all(|p| p.is_zero()) { Ok(Some(Vec::new())) } else { Ok(None) };
    }
    graded_solve(m, rhs, deg)
}

// --- Reduction to the residue field -----------------------------------------

/// A complex with k-constant differentials and structure constants: the image
/// of (C, product) under ⊗k.
#[derive(Clone, Debug)]
pub struct ReducedDG {
    pub ranks: [usize; 4],
    pub d: [MatrixOverK; 3],
    pub one_one: BTreeMap<(usize, usize), Vec<Scalar>>,
    pub one_two: BTreeMap<(usize, usize), Vec<Scalar>>,
    field: crate::field::FieldSpec,
}

pub fn reduce_mod_m(c: &FreeComplex, p: &DGProduct) -> ReducedDG {
    let d = [
        c.d[0].reduce_mod_max_ideal(),
        c.d[1].reduce_mod_max_ideal(),
        c.d[2].reduce_mod_max_ideal(),
    ];
    let red = |t: &BTreeMap<(usize, usize), Vec<Polynomial>>| {
        t.iter()
            .map(|(k, v)| (*k, v.iter().map(|q| q.eval_zero()).collect()))
            .collect()
    };
    ReducedDG {
        ranks: c.ranks(),
        d,
        one_one: red(&p.one_one),
        one_two: red(&p.one_two),
        field: c.field(),
    }
}

impl ReducedDG {
    pub fn field(&self) -> crate::field::FieldSpec {
        self.field
    }

    fn table(&self, t: &BTreeMap<(usize, usize), Vec<Scalar>>, key: (usize, usize), n: usize) -> Vec<Scalar> {
        t.get(&key).cloned().unwrap_or_else(|| vec![self.field.zero(); self.ranks[n]])
    }

    /// Product of vectors in C̄_1 × C̄_1 -> C̄_2.
    pub fn mul11(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec![self.field.zero(); self.ranks[2]];
        for i in 0..self.ranks[1] {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.ranks[1] {
                if b[j].is_zero() || i == j {
                    continue;
                }
                let (t, sign) = if i < j {
                    (self.table(&self.one_one, (i, j), 2), false)
                } else {
                    (self.table(&self.one_one, (j, i), 2), true)
                };
                let s = a[i].mul(&b[j]);
                let s = if sign { s.neg() } else { s };
                for (k, v) in t.iter().enumerate() {
                    acc[k] = acc[k].add(&v.mul(&s));
                }
            }
        }
        acc
    }

    /// Product of vectors in C̄_1 × C̄_2 -> C̄_3.
    pub fn mul12(&self, a: &[Scalar], h: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec![self.field.zero(); self.ranks[3]];
        for i in 0..self.ranks[1] {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.ranks[2] {
                if h[j].is_zero() {
                    continue;
                }
                let t = self.table(&self.one_two, (i, j), 3);
                let s = a[i].mul(&h[j]);
                for (k, v) in t.iter().enumerate() {
                    acc[k] = acc[k].add(&v.mul(&s));
                }
            }
        }
        acc
    }
}

// --- Tensor product of DG structures ----------------------------------------

/// Product on A ⊗ B from products on A and B:
/// (a⊗b)(a'⊗b') = (-1)^{|b||a'|} (a a') ⊗ (b b').
pub fn tensor_dg(
    a: &FreeComplex,
    pa: &DGProduct,
    b: &FreeComplex,
    pb: &DGProduct,
    t: &FreeComplex,
    layout: &crate::complex::TensorLayout,
) -> Result<DGProduct> {
    let mut out = DGProduct::empty();
    // Enumerate T_1 and T_2 generators as (A-degree, B-degree, A-index, B-index).
    let blocks = |n: usize| -> Vec<(usize, usize, usize, usize)> {
        let mut v = Vec::new();
        for i in (0..=n).rev() {
            let j = n - i;
            if i > 3 || j > 3 || a.rank(i) == 0 || b.rank(j) == 0 {
                continue;
            }
            for ai in 0..a.rank(i) {
                for bi in 0..b.rank(j) {
                    v.push((i, j, ai, bi));
                }
            }
        }
        v
    };
    let t1 = blocks(1);
    let t2 = blocks(2);
    debug_assert_eq!(t1.len(), t.rank(1));
    debug_assert_eq!(t2.len(), t.rank(2));

    let place = |i: usize,
                 j: usize,
                 av: &[Polynomial],
                 bv: &[Polynomial],
                 negate: bool,
                 n: usize|
     -> Result<Vec<Polynomial>> {
        // Embed (A_i coords av) ⊗ (B_j coords bv) into T_n.
        let mut out = zero_vec(t, n);
        if i > 3 || j > 3 || a.rank(i) == 0 || b.rank(j) == 0 {
            if av.iter().any(|p| !p.is_zero()) && bv.iter().any(|p| !p.is_zero()) {
                return Err(Error::Construction("tensor product block overflow".into()));
            }
            return Ok(out);
        }
        for (ai, pa) in av.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (bi, pb) in bv.iter().enumerate() {
                if pb.is_zero() {
                    continue;
                }
                let idx = layout.index(i, j, ai, bi);
                let v = pa.try_mul(pb)?;
                let v = if negate { v.negate() } else { v };
                out[idx] = out[idx].try_add(&v)?;
            }
        }
        Ok(out)
    };

    // T_1 · T_1.
    for (x, &(i1, j1, a1, b1)) in t1.iter().enumerate() {
        for (y, &(i2, j2, a2, b2)) in t1.iter().enumerate() {
            if x >= y {
                continue;
            }
            let av = pa.gen_product(a, i1, a1, i2, a2);
            let bv = pb.gen_product(b, j1, b1, j2, b2);
            let av = pad(a, i1 + i2, av);
            let bv = pad(b, j1 + j2, bv);
            let negate = (j1 * i2) % 2 == 1;
            let v = place(i1 + i2, j1 + j2, &av, &bv, negate, 2)?;
            out.one_one.insert((x, y), v);
        }
    }
    // T_1 · T_2.
    for (x, &(i1, j1, a1, b1)) in t1.iter().enumerate() {
        for (y, &(i2, j2, a2, b2)) in t2.iter().enumerate() {
            let av = pa.gen_product(a, i1, a1, i2, a2);
            let bv = pb.gen_product(b, j1, b1, j2, b2);
            let av = pad(a, i1 + i2, av);
            let bv = pad(b, j1 + j2, bv);
            let negate = (j1 * i2) % 2 == 1;
            let v = place(i1 + i2, j1 + j2, &av, &bv, negate, 3)?;
            out.one_two.insert((x, y), v);
        }
    }
    Ok(out)
}

/// gen_product returns an empty vector above the top; normalize to the actual
/// rank so tensor bookkeeping can treat it uniformly.
fn pad(c: &FreeComplex, n: usize, v: Vec<Polynomial>) -> Vec<Polynomial> {
    if n > 3 {
        return Vec::new();
    }
    if v.len() == c.rank(n) {
        v
    } else {
        zero_vec(c, n)
    }
}
