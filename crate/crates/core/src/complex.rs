//! Graded free complexes of length <= 3, mapping cones, tensor products, and
//! strand-wise exactness checking.
//!
//! A complex is stored uniformly as four modules C_0..C_3 (possibly of rank 0)
//! and three differentials; shorter complexes simply have empty tails.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graded::{strand_dim, PolyMatrix};
use crate::poly::Polynomial;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator { name: name.into(), degree }
    }
}

pub type GradedFreeModule = Vec<Generator>;

#[derive(Clone, Debug)]
pub struct FreeComplex {
    field: FieldSpec,
    nvars: usize,
    pub modules: [GradedFreeModule; 4],
    /// d[i]: C_{i+1} -> C_i.
    pub d: [PolyMatrix; 3],
}

pub fn degrees(m: &GradedFreeModule) -> Vec<i64> {
    m.iter().map(|g| g.degree).collect()
}

impl FreeComplex {
    pub fn new(
        field: FieldSpec,
        nvars: usize,
        modules: [GradedFreeModule; 4],
        d: [PolyMatrix; 3],
    ) -> Result<Self> {
        for (i, dm) in d.iter().enumerate() {
            if dm.row_degs != degrees(&modules[i]) || dm.col_degs != degrees(&modules[i + 1]) {
                return Err(Error::DimensionMismatch(format!(
                    "differential {} does not match module twists",
                    i + 1
                )));
            }
        }
        for m in &modules {
            let mut names: Vec<&str> = m.iter().map(|g| g.name.as_str()).collect();
            names.sort();
            names.dedup();
            if names.len() != m.len() {
                return Err(Error::Construction("duplicate generator name in module".into()));
            }
        }
        Ok(FreeComplex { field, nvars, modules, d })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self, i: usize) -> usize {
        self.modules[i].len()
    }

    pub fn ranks(&self) -> [usize; 4] {
        [self.rank(0), self.rank(1), self.rank(2), self.rank(3)]
    }

    pub fn degs(&self, i: usize) -> Vec<i64> {
        degrees(&self.modules[i])
    }

    /// d ∘ d = 0 verification; the report names every offending entry.
    pub fn check_complex(&self) -> ComplexReport {
        let mut violations = Vec::new();
        for n in 0..2 {
            match self.d[n].compose(&self.d[n + 1]) {
                Ok(c) => {
                    for i in 0..c.rows() {
                        for j in 0..c.cols() {
                            if !c.get(i, j).is_zero() {
                                violations.push(format!(
                                    "d{}∘d{} nonzero at ({},{}) = {}",
                                    n + 1,
                                    n + 2,
                                    i,
                                    j,
                                    c.get(i, j)
                                ));
                            }
                        }
                    }
                }
                Err(e) => violations.push(format!("d{}∘d{}: {}", n + 1, n + 2, e)),
            }
        }
        ComplexReport { violations }
    }

    /// Default strand bound: max twist in C_3 (falling back to any module)
    /// plus a safety margin.
    pub fn default_dmax(&self) -> i64 {
        let top = self.modules[3]
            .iter()
            .map(|g| g.degree)
            .max()
            .or_else(|| self.modules.iter().flatten().map(|g| g.degree).max())
            .unwrap_or(0);
        top + 10
    }

    /// Homology dimensions per homological degree (0..3) and internal degree
    /// (0..=dmax), by exact strand ranks.
    pub fn exactness_check(&self, dmax: i64) -> ExactnessReport {
        let degs: Vec<Vec<i64>> = (0..4).map(|i| self.degs(i)).collect();
        let mut h = vec![vec![0usize; (dmax + 1) as usize]; 4];
        for d in 0..=dmax {
            let dims: Vec<usize> =
                degs.iter().map(|g| strand_dim(self.nvars, g, d)).collect();
            let r: Vec<usize> = (0..3).map(|n| self.d[n].strand_rank_sparse(d)).collect();
            h[0][d as usize] = dims[0] - r[0];
            h[1][d as usize] = dims[1] - r[0] - r[1];
            h[2][d as usize] = dims[2] - r[1] - r[2];
            h[3][d as usize] = dims[3] - r[2];
        }
        ExactnessReport { dmax, h: [h[0].clone(), h[1].clone(), h[2].clone(), h[3].clone()] }
    }
}

#[derive(Debug)]
pub struct ComplexReport {
    pub violations: Vec<String>,
}

impl ComplexReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug)]
pub struct ExactnessReport {
    pub dmax: i64,
    /// h[i][d] = dim_k H_i in internal degree d.
    pub h: [Vec<usize>; 4],
}

impl ExactnessReport {
    /// Zero homology in homological degrees 1..3 (i.e. the complex is a
    /// resolution of its H_0 up to the bound).
    pub fn acyclic(&self) -> bool {
        (1..4).all(|i| self.h[i].iter().all(|&v| v == 0))
    }

    /// Hilbert function of H_0 up to the bound.
    pub fn hilbert_h0(&self) -> &[usize] {
        &self.h[0]
    }
}

/// A degree-0 morphism of complexes; maps[n]: source C_n -> target C_n.
pub struct ComplexMorphism {
    pub source: FreeComplex,
    pub target: FreeComplex,
    pub maps: [PolyMatrix; 3],
}

impl ComplexMorphism {
    /// Check the commuting squares φ_{n-1} ∘ d^A_n = d^B_n ∘ φ_n.
    pub fn validate(&self) -> Result<()> {
        for n in 0..3 {
            if self.maps[n].row_degs != self.target.degs(n)
                || self.maps[n].col_degs != self.source.degs(n)
            {
                return Err(Error::DimensionMismatch(format!("morphism map {n} twists")));
            }
        }
        for n in 0..2 {
            let left = self.maps[n].compose(&self.source.d[n])?;
            let right = self.target.d[n].compose(&self.maps[n + 1])?;
            if left.try_sub(&right)? != PolyMatrix::zero(
                self.source.field,
                self.source.nvars,
                left.row_degs.clone(),
                left.col_degs.clone(),
            ) {
                return Err(Error::Precondition(format!(
                    "morphism square {} does not commute",
                    n + 1
                )));
            }
        }
        Ok(())
    }
}

/// Mapping cone with C_n = A_{n-1} ⊕ B_n and morphism block carrying the sign
/// (-1)^{n-1}. The source must vanish in homological degree 3 so that the
/// cone has length 3.
pub fn mapping_cone(phi: &ComplexMorphism) -> Result<FreeComplex> {
    phi.validate()?;
    let (a, b) = (&phi.source, &phi.target);
    if a.rank(3) != 0 {
        return Err(Error::Precondition("cone source must have length <= 2".into()));
    }
    let field = a.field;
    let nvars = a.nvars;
    let modules: [GradedFreeModule; 4] = [
        b.modules[0].clone(),
        a.modules[0].iter().chain(&b.modules[1]).cloned().collect(),
        a.modules[1].iter().chain(&b.modules[2]).cloned().collect(),
        a.modules[2].iter().chain(&b.modules[3]).cloned().collect(),
    ];
    let mut d: Vec<PolyMatrix> = Vec::new();
    for n in 1..=3usize {
        // Blocks: [[d^A_{n-1}, 0], [(-1)^{n-1} φ_{n-1}, d^B_n]]; for n = 1
        // the A-row is absent (A_{-1} = 0).
        let signed_phi = if (n - 1) % 2 == 0 {
            phi.maps[n - 1].clone()
        } else {
            phi.maps[n - 1].negate()
        };
        if n == 1 {
            d.push(PolyMatrix::from_blocks(&[vec![&signed_phi, &b.d[0]]])?);
        } else {
            let da = &a.d[n - 2];
            let z = PolyMatrix::zero(field, nvars, a.degs(n - 2), b.degs(n));
            d.push(PolyMatrix::from_blocks(&[
                vec![da, &z],
                vec![&signed_phi, &b.d[n - 1]],
            ])?);
        }
    }
    FreeComplex::new(field, nvars, modules, [d.remove(0), d.remove(0), d.remove(0)])
}

/// Position bookkeeping for tensor products: within C_n, blocks A_i ⊗ B_{n-i}
/// are laid out with i descending, and within a block the A index is major.
pub struct TensorLayout {
    offsets: HashMap<(usize, usize), usize>,
    b_ranks: [usize; 4],
}

impl TensorLayout {
    /// Index of a_ai ⊗ b_bi inside C_{i+j}.
    pub fn index(&self, i: usize, j: usize, ai: usize, bi: usize) -> usize {
        self.offsets[&(i, j)] + ai * self.b_ranks[j] + bi
    }

    pub fn block_offset(&self, i: usize, j: usize) -> Option<usize> {
        self.offsets.get(&(i, j)).copied()
    }
}

/// Tensor product of complexes with Koszul signs:
/// d(a⊗b) = d(a)⊗b + (-1)^{|a|} a⊗d(b). Total length must stay <= 3.
pub fn tensor_complexes(a: &FreeComplex, b: &FreeComplex) -> Result<(FreeComplex, TensorLayout)> {
    if a.field != b.field || a.nvars != b.nvars {
        return Err(Error::IncompatibleOperands("tensor of mismatched rings".into()));
    }
    let len = |c: &FreeComplex| (0..4).rev().find(|&i| c.rank(i) > 0).unwrap_or(0);
    if len(a) + len(b) > 3 {
        return Err(Error::Precondition("tensor product longer than 3".into()));
    }
    let field = a.field;
    let nvars = a.nvars;
    let mut modules: [GradedFreeModule; 4] = Default::default();
    let mut offsets = HashMap::new();
    for n in 0..4usize {
        for i in (0..=n).rev() {
            let j = n - i;
            if a.rank(i) == 0 || b.rank(j) == 0 {
                if a.rank(i) > 0 || b.rank(j) > 0 {
                    // Block exists but is empty; no offset entry needed.
                }
                continue;
            }
            offsets.insert((i, j), modules[n].len());
            for ga in &a.modules[i] {
                for gb in &b.modules[j] {
                    modules[n].push(Generator::new(
                        format!("{}*{}", ga.name, gb.name),
                        ga.degree + gb.degree,
                    ));
                }
            }
        }
    }
    let layout =
        TensorLayout { offsets, b_ranks: [b.rank(0), b.rank(1), b.rank(2), b.rank(3)] };
    let mut diffs = Vec::new();
    for n in 1..=3usize {
        let mut m = PolyMatrix::zero(field, nvars, degrees(&modules[n - 1]), degrees(&modules[n]));
        for i in (0..=n).rev() {
            let j = n - i;
            if i > 3 || j > 3 || a.rank(i) == 0 || b.rank(j) == 0 {
                continue;
            }
            for ai in 0..a.rank(i) {
                for bi in 0..b.rank(j) {
                    let col = layout.index(i, j, ai, bi);
                    if i >= 1 && a.rank(i - 1) > 0 {
                        // d(a) ⊗ b component.
                        for ti in 0..a.rank(i - 1) {
                            let e = a.d[i - 1].get(ti, ai);
                            if !e.is_zero() {
                                let row = layout.index(i - 1, j, ti, bi);
                                m.set(row, col, e.clone())?;
                            }
                        }
                    }
                    if j >= 1 && b.rank(j - 1) > 0 {
                        // (-1)^i a ⊗ d(b) component.
                        for tj in 0..b.rank(j - 1) {
                            let e = b.d[j - 1].get(tj, bi);
                            if !e.is_zero() {
                                let row = layout.index(i, j - 1, ai, tj);
                                let v = if i % 2 == 0 { e.clone() } else { e.negate() };
                                m.set(row, col, v)?;
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    let cx = FreeComplex::new(
        field,
        nvars,
        modules,
        [diffs.remove(0), diffs.remove(0), diffs.remove(0)],
    )?;
    Ok((cx, layout))
}

/// Infer column twists of a matrix from homogeneity against known row twists.
/// Every column must have a nonzero entry and all entries must agree.
pub fn infer_col_degs(
    row_degs: &[i64],
    rows: usize,
    cols: usize,
    entries: &[Polynomial],
) -> Result<Vec<i64>> {
    debug_assert_eq!(entries.len(), rows * cols);
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut deg: Option<i64> = None;
        for i in 0..rows {
            let e = &entries[i * cols + j];
            if e.is_zero() {
                continue;
            }
            let ed = match e.homogeneity() {
                crate::poly::Homogeneity::Degree(d) => d as i64,
                _ => {
                    return Err(Error::Inhomogeneous {
                        row: i,
                        col: j,
                        msg: "inhomogeneous entry during twist inference".into(),
                    })
                }
            };
            let cand = row_degs[i] + ed;
            match deg {
                None => deg = Some(cand),
                Some(d) if d != cand => {
                    return Err(Error::TwistInference(format!(
                        "column {j} entries force conflicting twists {d} and {cand}"
                    )))
                }
                _ => {}
            }
        }
        out.push(deg.ok_or_else(|| {
            Error::TwistInference(format!("column {j} is zero; twist is ambiguous"))
        })?);
    }
    Ok(out)
}

// --- JSON interchange -------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct ComplexJson {
    pub modules: Vec<Vec<Generator>>,
    /// differentials[i] is a dense rows x cols array of polynomial strings.
    pub differentials: Vec<Vec<Vec<String>>>,
}

impl FreeComplex {
    pub fn to_json(&self) -> ComplexJson {
        let modules = self.modules.iter().map(|m| m.to_vec()).collect();
        let differentials = self
            .d
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                    .collect()
            })
            .collect();
        ComplexJson { modules, differentials }
    }

    pub fn from_json(json: &ComplexJson, field: FieldSpec, nvars: usize) -> Result<FreeComplex> {
        if json.modules.len() != 4 || json.differentials.len() != 3 {
            return Err(Error::UnsupportedInput("complex JSON must have 4 modules, 3 differentials".into()));
        }
        let modules: [GradedFreeModule; 4] = [
            json.modules[0].clone(),
            json.modules[1].clone(),
            json.modules[2].clone(),
            json.modules[3].clone(),
        ];
        let mut d = Vec::new();
        for (n, arr) in json.differentials.iter().enumerate() {
            let (rows, cols) = (modules[n].len(), modules[n + 1].len());
            if arr.len() != rows || arr.iter().any(|r| r.len() != cols) {
                return Err(Error::DimensionMismatch(format!("differential {} shape", n + 1)));
            }
            let mut entries = Vec::with_capacity(rows * cols);
            for row in arr {
                for s in row {
                    entries.push(if s.trim() == "0" {
                        Polynomial::zero(field, nvars)
                    } else {
                        Polynomial::parse(s, field, nvars)?
                    });
                }
            }
            d.push(PolyMatrix::new(
                field,
                nvars,
                degrees(&modules[n]),
                degrees(&modules[n + 1]),
                entries,
            )?);
        }
        FreeComplex::new(field, nvars, modules, [d.remove(0), d.remove(0), d.remove(0)])
    }
}
