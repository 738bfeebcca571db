//! Structured matrix families over k[x1,x2,x3]: banded square matrices, the
//! skew-symmetric block matrices assembled from them, and lower-banded
//! almost-square matrices with a pure-power tail. Each family comes with its
//! free resolution, a multiplicative structure on that resolution, explicit
//! division lifts of the row maps, and closed-form predictions for the Tor
//! profile of the trimmed ideals.

use crate::complex::{infer_col_degs, tensor_complexes, FreeComplex, Generator, GradedFreeModule};
use crate::dg::{check_leibniz, complete_product_by_lifting, tensor_dg, DGProduct};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graded::PolyMatrix;
use crate::koszul::build_koszul;
use crate::linalg::MatrixOverK;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::tor::{TorClass, TorProfile};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Identifies one member of the supported families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilySpec {
    /// Ideal of maximal sub-pfaffians of the (2m+1)x(2m+1) skew block matrix
    /// with band parameter j; m >= 2, 0 <= j <= m+1.
    Pfaffian { m: usize, j: usize },
    /// Maximal minors of the banded p x (p-1) matrix plus the tail x3^(p-1).
    Jp { p: usize },
    /// Squared-entry variant with tail x3^(2p-2).
    JpPrime { p: usize },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Pfaffian { m, j } => {
                if m < 2 {
                    return Err(Error::Precondition("pfaffian family needs m >= 2".into()));
                }
                if j > m + 1 {
                    return Err(Error::IndexOutOfRange { index: j, max: m + 1 });
                }
            }
            FamilySpec::Jp { p } | FamilySpec::JpPrime { p } => {
                if p < 2 {
                    return Err(Error::Precondition("banded minor family needs p >= 2".into()));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Pfaffian { m, j } => write!(f, "pfaffian:m={m},j={j}"),
            FamilySpec::Jp { p } => write!(f, "jp:p={p}"),
            FamilySpec::JpPrime { p } => write!(f, "jpprime:p={p}"),
        }
    }
}

fn parse_params(s: &str) -> Result<HashMap<String, usize>> {
    let mut out = HashMap::new();
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected key=value, got `{part}`") })?;
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse { pos: 0, msg: format!("bad integer `{v}`") })?;
        out.insert(k.trim().to_string(), n);
    }
    Ok(out)
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Accepts `pfaffian:m=3,j=1`, `jp:p=4`, `jpprime:p=4`.
    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse { pos: 0, msg: "family id needs `tag:params`".into() })?;
        let params = parse_params(rest)?;
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("missing parameter `{k}`") })
        };
        let spec = match tag.trim() {
            "pfaffian" => FamilySpec::Pfaffian { m: get("m")?, j: get("j")? },
            "jp" => FamilySpec::Jp { p: get("p")? },
            "jpprime" => FamilySpec::JpPrime { p: get("p")? },
            other => {
                return Err(Error::Parse { pos: 0, msg: format!("unknown family `{other}`") })
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn xpow(field: FieldSpec, var: usize, e: u16) -> Polynomial {
    // var is 1-based; e = 0 gives the unit.
    let mut exps = vec![0u16; 3];
    exps[var - 1] = e;
    Polynomial::monomial(field, Monomial(exps), field.one())
}

/// The m x m banded matrix with rows i <= m-j carrying x1^2, x3^2, x2^2 at
/// columns m-i, m-i+1, m-i+2 and rows i > m-j carrying the unsquared entries.
pub fn build_u(field: FieldSpec, m: usize, j: usize) -> Result<PolyMatrix> {
    if j > m {
        return Err(Error::IndexOutOfRange { index: j, max: m });
    }
    if m == 0 {
        return Err(Error::Precondition("banded matrix needs m >= 1".into()));
    }
    let mut entries = vec![Polynomial::zero(field, 3); m * m];
    for i in 1..=m {
        let e: u16 = if i <= m - j { 2 } else { 1 };
        for (k, var) in [1usize, 3, 2].into_iter().enumerate() {
            let c = m as i64 - i as i64 + k as i64;
            if (1..=m as i64).contains(&c) {
                entries[(i - 1) * m + (c as usize - 1)] = xpow(field, var, e);
            }
        }
    }
    let row_degs: Vec<i64> = (1..=m).map(|i| if i <= m - j { 0 } else { 1 }).collect();
    PolyMatrix::new(field, 3, row_degs, vec![2; m], entries)
}

/// The (2m+1)x(2m+1) skew-symmetric block matrix built from the banded
/// matrix: corner entries x1, x2 (squared unless the parameter dictates
/// otherwise) glue three zero blocks to the banded block and its negated
/// transpose. Cases: j < m uses squared corners, j = m squares only the x1
/// corner, j = m+1 squares neither (and both of the latter use band m).
pub fn build_v(field: FieldSpec, m: usize, j: usize) -> Result<PolyMatrix> {
    if j > m + 1 {
        return Err(Error::IndexOutOfRange { index: j, max: m + 1 });
    }
    if m == 0 {
        return Err(Error::Precondition("skew block matrix needs m >= 1".into()));
    }
    let u = build_u(field, m, j.min(m))?;
    let (e1, e2): (u16, u16) = if j < m {
        (2, 2)
    } else if j == m {
        (2, 1)
    } else {
        (1, 1)
    };
    let n = 2 * m + 1;
    let mut grid = vec![vec![Polynomial::zero(field, 3); n]; n];
    grid[m - 1][m] = xpow(field, 1, e1);
    grid[m][m + 1] = xpow(field, 2, e2);
    for a in 0..m {
        for c in 0..m {
            let ent = u.get(c, a);
            if !ent.is_zero() {
                grid[a][m + 1 + c] = ent.clone();
            }
        }
    }
    for i in 0..n {
        for k in 0..i {
            grid[i][k] = grid[k][i].negate();
        }
    }
    let s: i64 = if j == m + 1 { 1 } else { 2 };
    let mut row_degs = vec![0i64; n];
    for c in 0..m {
        row_degs[m + 1 + c] = match j.cmp(&m) {
            std::cmp::Ordering::Less => {
                if c + 1 <= m - j {
                    0
                } else {
                    1
                }
            }
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
        };
    }
    let col_degs: Vec<i64> = row_degs.iter().map(|r| s - r).collect();
    let flat: Vec<Polynomial> = grid.into_iter().flatten().collect();
    PolyMatrix::new(field, 3, row_degs, col_degs, flat)
}

fn to_grid(m: &PolyMatrix) -> Vec<Vec<Polynomial>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn assert_skew(grid: &[Vec<Polynomial>]) -> Result<()> {
    let n = grid.len();
    if grid.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("skew check needs a square matrix".into()));
    }
    for i in 0..n {
        for k in i..n {
            if !grid[i][k].try_add(&grid[k][i])?.is_zero() {
                return Err(Error::Precondition(format!(
                    "matrix is not skew-symmetric at ({i},{k})"
                )));
            }
        }
    }
    Ok(())
}

type PfMemo = HashMap<Vec<usize>, Polynomial>;

fn pf_rec(grid: &[Vec<Polynomial>], idx: &[usize], memo: &mut PfMemo) -> Result<Polynomial> {
    let field = grid[0][0].field();
    if idx.len() % 2 == 1 {
        return Ok(Polynomial::zero(field, 3));
    }
    if idx.is_empty() {
        return Ok(Polynomial::one(field, 3));
    }
    if let Some(v) = memo.get(idx) {
        return Ok(v.clone());
    }
    // Expand along the first remaining row; the entry at the t-th remaining
    // column carries sign (-1)^(t+1).
    let mut acc = Polynomial::zero(field, 3);
    for t in 1..idx.len() {
        let e = &grid[idx[0]][idx[t]];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> =
            idx.iter().enumerate().filter(|&(s, _)| s != 0 && s != t).map(|(_, &v)| v).collect();
        let sub = pf_rec(grid, &rest, memo)?;
        let term = e.try_mul(&sub)?;
        acc = if t % 2 == 1 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
    }
    memo.insert(idx.to_vec(), acc.clone());
    Ok(acc)
}

/// Pfaffian of the skew matrix with the 1-based rows/columns in `deleted`
/// removed. An odd remaining size yields 0.
pub fn pfaffian_of_grid(grid: &[Vec<Polynomial>], deleted: &[usize]) -> Result<Polynomial> {
    assert_skew(grid)?;
    let n = grid.len();
    for &d in deleted {
        if d < 1 || d > n {
            return Err(Error::IndexOutOfRange { index: d, max: n });
        }
    }
    let keep: Vec<usize> = (1..=n).filter(|i| !deleted.contains(i)).map(|i| i - 1).collect();
    let mut memo = PfMemo::new();
    pf_rec(grid, &keep, &mut memo)
}

pub fn pfaffian(m: &PolyMatrix, deleted: &[usize]) -> Result<Polynomial> {
    pfaffian_of_grid(&to_grid(m), deleted)
}

/// Determinant by first-row minor expansion, memoized on the remaining
/// column set. Independent of the pfaffian recursion; used as its oracle via
/// pf(A)^2 = det(A).
pub fn determinant_of_grid(grid: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = grid.len();
    if grid.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("determinant needs a square matrix".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("determinant of an empty matrix".into()));
    }
    let field = grid[0][0].field();
    let mut memo: HashMap<Vec<usize>, Polynomial> = HashMap::new();
    fn rec(
        grid: &[Vec<Polynomial>],
        field: FieldSpec,
        cols: &[usize],
        memo: &mut HashMap<Vec<usize>, Polynomial>,
    ) -> Result<Polynomial> {
        if cols.is_empty() {
            return Ok(Polynomial::one(field, 3));
        }
        if let Some(v) = memo.get(cols) {
            return Ok(v.clone());
        }
        let row = grid.len() - cols.len();
        let mut acc = Polynomial::zero(field, 3);
        for (t, &c) in cols.iter().enumerate() {
            let e = &grid[row][c];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&v| v != c).collect();
            let sub = rec(grid, field, &rest, memo)?;
            let term = e.try_mul(&sub)?;
            acc = if t % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
        }
        memo.insert(cols.to_vec(), acc.clone());
        Ok(acc)
    }
    let cols: Vec<usize> = (0..n).collect();
    rec(grid, field, &cols, &mut memo)
}

pub fn determinant(m: &PolyMatrix) -> Result<Polynomial> {
    determinant_of_grid(&to_grid(m))
}

fn zero_vec(field: FieldSpec, n: usize) -> Vec<Polynomial> {
    vec![Polynomial::zero(field, 3); n]
}

/// Length-3 self-dual resolution presented by an odd skew matrix V: the outer
/// differentials are the signed maximal sub-pfaffians and their transpose,
/// the middle differential is V itself. The product tables are
///   f1_i . f1_j = sum_k sign(i,j,k) Pf_{ijk} f2_k,  f1_i . f2_j = delta_ij f3_1,
/// where sign(i,j,k) = (-1)^(i+j+k) for 1-based indices, flipped once more
/// when k lies strictly between i and j (the index triple is read in sorted
/// order); the Leibniz checker certifies the convention.
pub fn pfaffian_resolution(v: &PolyMatrix) -> Result<(FreeComplex, DGProduct)> {
    let n = v.rows();
    if n != v.cols() || n % 2 == 0 {
        return Err(Error::Precondition("presentation matrix must be skew of odd size".into()));
    }
    let grid = to_grid(v);
    assert_skew(&grid)?;
    let field = grid[0][0].field();
    let mut memo = PfMemo::new();
    let mut d1e: Vec<Polynomial> = Vec::with_capacity(n);
    for i in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let pf = pf_rec(&grid, &keep, &mut memo)?;
        if pf.is_zero() {
            return Err(Error::FamilyDegenerate(format!(
                "maximal sub-pfaffian {} vanishes",
                i + 1
            )));
        }
        d1e.push(if i % 2 == 0 { pf } else { pf.negate() });
    }
    let f1degs = infer_col_degs(&[0], 1, n, &d1e)?;
    let d1 = PolyMatrix::new(field, 3, vec![0], f1degs.clone(), d1e.clone())?;
    let flat: Vec<Polynomial> = grid.iter().flatten().cloned().collect();
    let f2degs = infer_col_degs(&f1degs, n, n, &flat)?;
    let d2 = PolyMatrix::new(field, 3, f1degs.clone(), f2degs.clone(), flat)?;
    let f3degs = infer_col_degs(&f2degs, n, 1, &d1e)?;
    let d3 = PolyMatrix::new(field, 3, f2degs.clone(), f3degs.clone(), d1e)?;
    let modules: [GradedFreeModule; 4] = [
        vec![Generator::new("f0", 0)],
        (0..n).map(|i| Generator::new(format!("f1_{}", i + 1), f1degs[i])).collect(),
        (0..n).map(|i| Generator::new(format!("f2_{}", i + 1), f2degs[i])).collect(),
        vec![Generator::new("f3_1", f3degs[0])],
    ];
    let cx = FreeComplex::new(field, 3, modules, [d1, d2, d3])?;
    let rep = cx.check_complex();
    if !rep.pass() {
        return Err(Error::FamilyDegenerate(format!("not a complex: {}", rep.violations[0])));
    }
    let mut product = DGProduct::empty();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut coords = zero_vec(field, n);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let keep: Vec<usize> =
                    (0..n).filter(|&t| t != i && t != j && t != k).collect();
                let pf3 = pf_rec(&grid, &keep, &mut memo)?;
                if pf3.is_zero() {
                    continue;
                }
                let mut neg = (i + j + k + 1) % 2 == 1;
                if i < k && k < j {
                    neg = !neg;
                }
                coords[k] = if neg { pf3.negate() } else { pf3 };
            }
            product.one_one.insert((i, j), coords);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let val = if i == j {
                Polynomial::one(field, 3)
            } else {
                Polynomial::zero(field, 3)
            };
            product.one_two.insert((i, j), vec![val]);
        }
    }
    let leib = check_leibniz(&cx, &product)?;
    if !leib.pass() {
        return Err(Error::FamilyDegenerate(format!(
            "product fails the derivation rule: {}",
            leib.defects[0]
        )));
    }
    if !cx.exactness_check(cx.default_dmax()).acyclic() {
        return Err(Error::FamilyDegenerate("complex has homology above degree zero".into()));
    }
    Ok((cx, product))
}

/// Resolution of the banded-minor ideal plus pure-power tail, as the tensor
/// product of the two-column banded resolution with the two-term tail
/// resolution. Generator order: F_1 = [h1_1..h1_p, tail], F_2 =
/// [h2_1..h2_{p-1}, h1_1*tail..h1_p*tail], F_3 = [h2_c*tail].
pub fn hilbert_burch(field: FieldSpec, p: usize, primed: bool) -> Result<(FreeComplex, DGProduct)> {
    if p < 2 {
        return Err(Error::Precondition("banded minor family needs p >= 2".into()));
    }
    let e: u16 = if primed { 2 } else { 1 };
    let mut xg = vec![vec![Polynomial::zero(field, 3); p - 1]; p];
    for c in 0..p - 1 {
        for (off, var) in [1usize, 2, 3].into_iter().enumerate() {
            if c + off < p {
                xg[c + off][c] = xpow(field, var, e);
            }
        }
    }
    // Signed maximal minors: delta_r = (-1)^r det(X without row r), 0-based.
    let mut delta = Vec::with_capacity(p);
    for r in 0..p {
        let minor: Vec<Vec<Polynomial>> =
            (0..p).filter(|&i| i != r).map(|i| xg[i].clone()).collect();
        let d = determinant_of_grid(&minor)?;
        if d.is_zero() {
            return Err(Error::FamilyDegenerate(format!("maximal minor {} vanishes", r + 1)));
        }
        delta.push(if r % 2 == 0 { d } else { d.negate() });
    }
    let h1deg = (e as i64) * (p as i64 - 1);
    let h2deg = h1deg + e as i64;
    let h_modules: [GradedFreeModule; 4] = [
        vec![Generator::new("h0", 0)],
        (0..p).map(|i| Generator::new(format!("h1_{}", i + 1), h1deg)).collect(),
        (0..p - 1).map(|i| Generator::new(format!("h2_{}", i + 1), h2deg)).collect(),
        vec![],
    ];
    let hd1 = PolyMatrix::new(field, 3, vec![0], vec![h1deg; p], delta)?;
    let hd2 = PolyMatrix::new(
        field,
        3,
        vec![h1deg; p],
        vec![h2deg; p - 1],
        xg.into_iter().flatten().collect(),
    )?;
    let hd3 = PolyMatrix::zero(field, 3, vec![h2deg; p - 1], vec![]);
    let h = FreeComplex::new(field, 3, h_modules, [hd1, hd2, hd3])?;
    if !h.check_complex().pass() {
        return Err(Error::FamilyDegenerate("banded minor presentation is not a complex".into()));
    }
    let ph = complete_product_by_lifting(&h)?;
    // The tail is an x3 power in both variants: any x2 power lies in the
    // minimal prime (x1, x2) of the minor ideal, so it would be a
    // zerodivisor and the tensor would not be a resolution.
    let texp: i64 = if primed { 2 * p as i64 - 2 } else { p as i64 - 1 };
    let tvar = 3usize;
    let g_modules: [GradedFreeModule; 4] = [
        vec![Generator::new("g0", 0)],
        vec![Generator::new("tail", texp)],
        vec![],
        vec![],
    ];
    let gd1 = PolyMatrix::new(field, 3, vec![0], vec![texp], vec![xpow(field, tvar, texp as u16)])?;
    let g = FreeComplex::new(
        field,
        3,
        g_modules,
        [gd1, PolyMatrix::zero(field, 3, vec![texp], vec![]), PolyMatrix::zero(field, 3, vec![], vec![])],
    )?;
    let (t, layout) = tensor_complexes(&h, &g)?;
    let pt = tensor_dg(&h, &ph, &g, &DGProduct::empty(), &t, &layout)?;
    let leib = check_leibniz(&t, &pt)?;
    if !leib.pass() {
        return Err(Error::FamilyDegenerate(format!(
            "tensor product fails the derivation rule: {}",
            leib.defects[0]
        )));
    }
    if !t.exactness_check(t.default_dmax()).acyclic() {
        return Err(Error::FamilyDegenerate("tensor complex has homology above degree zero".into()));
    }
    Ok((t, pt))
}

/// A constructed family member: resolution, product, and the presented ideal
/// (entries of the first differential, signs included).
pub struct BuiltFamily {
    pub spec: FamilySpec,
    pub complex: FreeComplex,
    pub product: DGProduct,
    pub ideal: Vec<Polynomial>,
}

pub fn build_family(field: FieldSpec, spec: FamilySpec) -> Result<BuiltFamily> {
    spec.validate()?;
    let (complex, product) = match spec {
        FamilySpec::Pfaffian { m, j } => pfaffian_resolution(&build_v(field, m, j)?)?,
        FamilySpec::Jp { p } => hilbert_burch(field, p, false)?,
        FamilySpec::JpPrime { p } => hilbert_burch(field, p, true)?,
    };
    let ideal = (0..complex.rank(1)).map(|i| complex.d[0].get(0, i).clone()).collect();
    Ok(BuiltFamily { spec, complex, product, ideal })
}

/// Split a polynomial as x1*a + x2*b + x3*c by greedy division in variable
/// order x1, x2, x3 (every term of positive degree is divisible by one).
fn greedy_split(p: &Polynomial) -> Result<[Polynomial; 3]> {
    let field = p.field();
    let mut out = [
        Polynomial::zero(field, 3),
        Polynomial::zero(field, 3),
        Polynomial::zero(field, 3),
    ];
    for (m, c) in p.terms() {
        let var = (0..3).find(|&v| m.0[v] > 0).ok_or_else(|| {
            Error::Precondition("cannot split a constant term through the variables".into())
        })?;
        let q = Monomial::var(3, var).quotient_into(m);
        out[var].add_term(q, c.clone());
    }
    Ok(out)
}

fn validate_q1(c: &FreeComplex, i: usize, q: &PolyMatrix) -> Result<()> {
    let field = c.field();
    for col in 0..c.rank(2) {
        let mut lhs = Polynomial::zero(field, 3);
        for (row, var) in [1usize, 2, 3].into_iter().enumerate() {
            lhs = lhs.try_add(&q.get(row, col).try_mul(&xpow(field, var, 1))?)?;
        }
        if lhs.try_sub(c.d[1].get(i - 1, col))? != Polynomial::zero(field, 3) {
            return Err(Error::FixtureMismatch(format!(
                "closed-form lift for direction {i} disagrees with the differential at column {}",
                col + 1
            )));
        }
    }
    Ok(())
}

/// The printed closed-form lift q1 of row i of the middle differential
/// through (x1, x2, x3), as a 3 x rank(F_2) matrix (rows e1, e2, e3).
/// Validated against the differential; a mismatch is reported, not repaired.
pub fn explicit_q1(fam: &BuiltFamily, i: usize) -> Result<PolyMatrix> {
    let c = &fam.complex;
    let n1 = c.rank(1);
    if i < 1 || i > n1 {
        return Err(Error::IndexOutOfRange { index: i, max: n1 });
    }
    let field = c.field();
    let n2 = c.rank(2);
    let mut entries = vec![Polynomial::zero(field, 3); 3 * n2];
    // set(row 1..3, col 1-based).
    let mut set = |row: usize, col: usize, val: Polynomial| {
        entries[(row - 1) * n2 + (col - 1)] = val;
    };
    let one = Polynomial::one(field, 3);
    match fam.spec {
        FamilySpec::Pfaffian { m, j } => {
            // Row e2, column 2m+3-i (absent for i = 1).
            if i >= 2 {
                let val = if i <= j + 1 && i <= m + 1 {
                    one.clone()
                } else if i <= m + 1 {
                    xpow(field, 2, 1)
                } else if i <= 2 * m + 1 - j {
                    xpow(field, 2, 1).negate()
                } else {
                    one.negate()
                };
                set(2, 2 * m + 3 - i, val);
            }
            // Row e3, column 2m+2-i.
            let val3 = if i <= j && i < m + 1 {
                Some(one.clone())
            } else if i < m + 1 {
                Some(xpow(field, 3, 1))
            } else if i == m + 1 {
                None
            } else if i <= 2 * m + 1 - j {
                Some(xpow(field, 3, 1).negate())
            } else {
                Some(one.negate())
            };
            if let Some(v) = val3 {
                set(3, 2 * m + 2 - i, v);
            }
            // Row e1, column 2m+1-i (absent for i = 2m+1).
            if i <= 2 * m {
                let val = if i + 1 <= j {
                    one.clone()
                } else if i < m + 1 {
                    xpow(field, 1, 1)
                } else if i == m + 1 {
                    if j < m + 1 {
                        xpow(field, 1, 1).negate()
                    } else {
                        one.negate()
                    }
                } else if i <= 2 * m + 1 - j {
                    xpow(field, 1, 1).negate()
                } else {
                    one.negate()
                };
                set(1, 2 * m + 1 - i, val);
            }
        }
        FamilySpec::Jp { p } => {
            if i == p {
                return Err(Error::UnsupportedInput(
                    "no closed-form lift for this direction; use the computed lift".into(),
                ));
            }
            if i < p {
                // F_2 columns: h2_c at c, h1_c*tail at (p-1)+c (1-based c).
                if i > 2 {
                    set(3, i - 2, one.clone());
                }
                if i > 1 {
                    set(2, i - 1, one.clone());
                }
                set(1, i, one.clone());
                set(3, p - 1 + i, xpow(field, 3, p as u16 - 2).negate());
            } else {
                // Tail direction: split each signed minor through the variables.
                for (jj, gen) in fam.ideal.iter().take(p).enumerate() {
                    let parts = greedy_split(gen)?;
                    for (row, part) in parts.into_iter().enumerate() {
                        if !part.is_zero() {
                            set(row + 1, p - 1 + jj + 1, part);
                        }
                    }
                }
            }
        }
        FamilySpec::JpPrime { .. } => {
            return Err(Error::UnsupportedInput(
                "no closed-form lift for the squared family; use the computed lift".into(),
            ));
        }
    }
    let w = c.degs(1)[i - 1];
    let q = PolyMatrix::new(field, 3, vec![w + 1; 3], c.degs(2), entries)?;
    validate_q1(c, i, &q)?;
    Ok(q)
}

/// Lift of row i of the middle differential through (x1, x2, x3) by graded
/// solving (free variables zero). Always exists for a row in the maximal
/// ideal; agrees with the closed forms up to the kernel of the evaluation.
pub fn lifted_q1(c: &FreeComplex, i: usize) -> Result<PolyMatrix> {
    let n1 = c.rank(1);
    if i < 1 || i > n1 {
        return Err(Error::IndexOutOfRange { index: i, max: n1 });
    }
    let field = c.field();
    let w = c.degs(1)[i - 1];
    let k = build_koszul(field, 3, 3, w, "q")?;
    let n2 = c.rank(2);
    let mut entries = vec![Polynomial::zero(field, 3); 3 * n2];
    for col in 0..n2 {
        let rhs = vec![c.d[1].get(i - 1, col).clone()];
        let y = k
            .lift(1, &rhs)?
            .ok_or_else(|| Error::LiftFailed(format!("row {i} column {} not in (x1,x2,x3)", col + 1)))?;
        for row in 0..3 {
            entries[row * n2 + col] = y[row].clone();
        }
    }
    PolyMatrix::new(field, 3, vec![w + 1; 3], c.degs(2), entries)
}

/// Closed-form prediction for the trimmed ideal's profile and class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub profile: TorProfile,
    pub class: TorClass,
    /// The closed form permits the computed class to collapse to Golod.
    pub golod_allowed: bool,
}

fn check_sigma(sigma: &[usize], max: usize) -> Result<()> {
    if sigma.is_empty() {
        return Err(Error::Precondition("empty trim index set".into()));
    }
    for w in sigma.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Precondition("trim indices must be strictly increasing".into()));
        }
    }
    if sigma[0] < 1 || *sigma.last().unwrap() > max {
        return Err(Error::IndexOutOfRange { index: *sigma.last().unwrap(), max });
    }
    Ok(())
}

/// Rank over k of the stacked constant parts of the lifts for the directions
/// in sigma, plus the set of columns with a nonzero constant entry.
fn reduced_q_rank(fam: &BuiltFamily, sigma: &[usize]) -> Result<(usize, Vec<bool>)> {
    let field = fam.complex.field();
    let n2 = fam.complex.rank(2);
    let mut rows: Vec<Vec<crate::field::Scalar>> = Vec::new();
    for &i in sigma {
        let q = match explicit_q1(fam, i) {
            Ok(q) => q,
            Err(Error::UnsupportedInput(_)) => lifted_q1(&fam.complex, i)?,
            Err(e) => return Err(e),
        };
        let red = q.reduce_mod_max_ideal();
        for r in 0..3 {
            rows.push((0..n2).map(|cc| red.get(r, cc).clone()).collect());
        }
    }
    let mut nonzero = vec![false; n2];
    for row in &rows {
        for (cc, v) in row.iter().enumerate() {
            if !v.is_zero() {
                nonzero[cc] = true;
            }
        }
    }
    let rank =
        if rows.is_empty() || n2 == 0 { 0 } else { MatrixOverK::from_rows(field, rows).rank() };
    Ok((rank, nonzero))
}

fn nonneg(v: i64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Precondition(format!("predicted {what} is negative")))
}

/// Predicted (m, n, p, q, r) and class for trimming the family's ideal at the
/// 1-based directions in sigma. Returns None when the closed form's
/// hypotheses do not cover the parameters.
pub fn predicted_tuple(fam: &BuiltFamily, sigma: &[usize]) -> Result<Option<Prediction>> {
    check_sigma(sigma, fam.complex.rank(1))?;
    let t = sigma.len() as i64;
    match fam.spec {
        FamilySpec::Pfaffian { m, j } => {
            if !(m >= 3 || (m == 2 && j == 0)) {
                return Ok(None);
            }
            let (rank, nonzero) = reduced_q_rank(fam, sigma)?;
            let s = sigma.iter().filter(|&&cc| nonzero[cc - 1]).count() as i64;
            let n = 2 * m as i64 + 1;
            let r = nonneg(n - t - rank as i64 + s, "r")?;
            let profile = TorProfile {
                m: nonneg(n + 2 * t - rank as i64, "m")?,
                n: nonneg(1 + t, "n")?,
                p: 0,
                q: 1,
                r,
            };
            Ok(Some(Prediction { profile, class: TorClass::G(r), golod_allowed: true }))
        }
        FamilySpec::Jp { p } => {
            if p < 4 {
                return Ok(None);
            }
            let golod = sigma.contains(&(p + 1));
            let (rank, _) = reduced_q_rank(fam, sigma)?;
            let m_pred = nonneg(p as i64 + 1 + 2 * t - rank as i64, "m")?;
            let n_pred = nonneg(p as i64 - 1 + t, "n")?;
            if golod {
                let profile = TorProfile { m: m_pred, n: n_pred, p: 0, q: 0, r: 0 };
                return Ok(Some(Prediction {
                    profile,
                    class: TorClass::Golod,
                    golod_allowed: false,
                }));
            }
            let pp = nonneg(p as i64 - t, "p")?;
            let qq = nonneg(p as i64 - 1 - rank as i64, "q")?;
            let profile = TorProfile { m: m_pred, n: n_pred, p: pp, q: qq, r: qq };
            // Trimming an initial segment of directions never collapses.
            let initial = sigma.iter().enumerate().all(|(k, &v)| v == k + 1);
            Ok(Some(Prediction {
                profile,
                class: TorClass::H(pp, qq),
                golod_allowed: !initial,
            }))
        }
        FamilySpec::JpPrime { p } => {
            if p < 4 {
                return Ok(None);
            }
            let golod = sigma.contains(&(p + 1));
            let m_pred = nonneg(p as i64 + 1 + 2 * t, "m")?;
            let n_pred = nonneg(p as i64 - 1 + t, "n")?;
            if golod {
                let profile = TorProfile { m: m_pred, n: n_pred, p: 0, q: 0, r: 0 };
                return Ok(Some(Prediction {
                    profile,
                    class: TorClass::Golod,
                    golod_allowed: false,
                }));
            }
            let pp = nonneg(p as i64 - t, "p")?;
            let qq = p - 1;
            let profile = TorProfile { m: m_pred, n: n_pred, p: pp, q: qq, r: qq };
            Ok(Some(Prediction { profile, class: TorClass::H(pp, qq), golod_allowed: false }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::reduce_mod_m;
    use crate::tor::{classify, compute_profile, homology_algebra};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f() -> FieldSpec {
        FieldSpec::default_fp()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, f(), 3).unwrap()
    }

    fn z() -> Polynomial {
        Polynomial::zero(f(), 3)
    }

    #[test]
    fn family_spec_parsing() {
        let s: FamilySpec = "pfaffian:m=3,j=1".parse().unwrap();
        assert_eq!(s, FamilySpec::Pfaffian { m: 3, j: 1 });
        assert_eq!(s.to_string(), "pfaffian:m=3,j=1");
        let s: FamilySpec = "jp:p=4".parse().unwrap();
        assert_eq!(s, FamilySpec::Jp { p: 4 });
        let s: FamilySpec = " jpprime:p=5 ".parse().unwrap();
        assert_eq!(s, FamilySpec::JpPrime { p: 5 });
        assert!("pfaffian:m=3".parse::<FamilySpec>().is_err());
        assert!("pfaffian:m=1,j=0".parse::<FamilySpec>().is_err());
        assert!("pfaffian:m=2,j=4".parse::<FamilySpec>().is_err());
        assert!("nope:p=3".parse::<FamilySpec>().is_err());
        assert!("jp".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn banded_matrix_fixtures() {
        let u21 = build_u(f(), 2, 1).unwrap();
        let want = [["x1^2", "x3^2"], ["x3", "x2"]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(u21.get(i, j), &p(want[i][j]));
            }
        }
        let u31 = build_u(f(), 3, 1).unwrap();
        let want = [
            ["0", "x1^2", "x3^2"],
            ["x1^2", "x3^2", "x2^2"],
            ["x3", "x2", "0"],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let w = if want[i][j] == "0" { z() } else { p(want[i][j]) };
                assert_eq!(u31.get(i, j), &w);
            }
        }
        let u32 = build_u(f(), 3, 2).unwrap();
        let want = [
            ["0", "x1^2", "x3^2"],
            ["x1", "x3", "x2"],
            ["x3", "x2", "0"],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let w = if want[i][j] == "0" { z() } else { p(want[i][j]) };
                assert_eq!(u32.get(i, j), &w);
            }
        }
        assert!(build_u(f(), 2, 3).is_err());
    }

    #[test]
    fn skew_block_matrix_is_skew() {
        for (m, j) in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 3), (3, 4)] {
            let v = build_v(f(), m, j).unwrap();
            let n = 2 * m + 1;
            for i in 0..n {
                assert!(v.get(i, i).is_zero());
                for k in 0..n {
                    assert!(v.get(i, k).try_add(v.get(k, i)).unwrap().is_zero());
                }
            }
            // Corner entries.
            let e1 = if j <= m { 2 } else { 1 };
            let e2 = if j < m { 2 } else { 1 };
            assert_eq!(v.get(m - 1, m), &p(&format!("x1^{e1}")));
            assert_eq!(v.get(m, m + 1), &p(&format!("x2^{e2}")));
        }
        assert!(build_v(f(), 2, 4).is_err());
    }

    #[test]
    fn pfaffian_basics() {
        let two = vec![vec![z(), p("x1")], vec![p("x1").negate(), z()]];
        assert_eq!(pfaffian_of_grid(&two, &[]).unwrap(), p("x1"));
        // Odd size: zero.
        assert!(pfaffian_of_grid(&two, &[1]).unwrap().is_zero());
        // 4x4 with rows [0,a,b,c],[−a,0,d,e],[−b,−d,0,f],[−c,−e,−f,0]:
        // pfaffian af − be + cd.
        let (a, b, c, d, e, ff) = (p("x1"), p("x2"), p("x3"), p("x3"), p("x2"), p("x1"));
        let g = vec![
            vec![z(), a.clone(), b.clone(), c.clone()],
            vec![a.negate(), z(), d.clone(), e.clone()],
            vec![b.negate(), d.negate(), z(), ff.clone()],
            vec![c.negate(), e.negate(), ff.negate(), z()],
        ];
        let want = a
            .try_mul(&ff)
            .unwrap()
            .try_sub(&b.try_mul(&e).unwrap())
            .unwrap()
            .try_add(&c.try_mul(&d).unwrap())
            .unwrap();
        assert_eq!(pfaffian_of_grid(&g, &[]).unwrap(), want);
        // Non-skew input rejected.
        let bad = vec![vec![z(), p("x1")], vec![p("x1"), z()]];
        assert!(pfaffian_of_grid(&bad, &[]).is_err());
        // Out-of-range deletion rejected.
        assert!(pfaffian_of_grid(&two, &[3]).is_err());
    }

    /// Pfaffian as the signed sum over perfect matchings: pair the smallest
    /// remaining index with each other index, sign (-1)^(position among the
    /// others).
    fn matching_sum(grid: &[Vec<Polynomial>], idx: &[usize]) -> Polynomial {
        let field = grid[0][0].field();
        if idx.is_empty() {
            return Polynomial::one(field, 3);
        }
        let mut acc = Polynomial::zero(field, 3);
        for t in 1..idx.len() {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != 0 && s != t)
                .map(|(_, &v)| v)
                .collect();
            let term = grid[idx[0]][idx[t]].try_mul(&matching_sum(grid, &rest)).unwrap();
            acc = if t % 2 == 1 { acc.try_add(&term).unwrap() } else { acc.try_sub(&term).unwrap() };
        }
        acc
    }

    fn random_skew(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Polynomial>> {
        let mut g = vec![vec![z(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let c = Polynomial::constant(f(), 3, rng.gen_range(-9..=9));
                g[i][j] = c.clone();
                g[j][i] = c.negate();
            }
        }
        g
    }

    #[test]
    fn pfaffian_matches_matching_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 6, 8] {
            for _ in 0..5 {
                let g = random_skew(&mut rng, n);
                let idx: Vec<usize> = (0..n).collect();
                assert_eq!(pfaffian_of_grid(&g, &[]).unwrap(), matching_sum(&g, &idx));
            }
        }
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2usize, 4, 6] {
            for _ in 0..5 {
                let g = random_skew(&mut rng, n);
                let pf = pfaffian_of_grid(&g, &[]).unwrap();
                let det = determinant_of_grid(&g).unwrap();
                assert_eq!(pf.try_mul(&pf).unwrap(), det);
            }
        }
    }

    /// Independent 5x5 skew fixture whose signed sub-pfaffians are the five
    /// displayed quadrics.
    fn fixture_x() -> PolyMatrix {
        let rows = [
            ["0", "0", "0", "x1", "x2"],
            ["0", "0", "x1", "x2", "x3"],
            ["0", "-x1", "0", "x3", "0"],
            ["-x1", "-x2", "-x3", "0", "0"],
            ["-x2", "-x3", "0", "0", "0"],
        ];
        let entries: Vec<Polynomial> = rows
            .iter()
            .flatten()
            .map(|s| if *s == "0" { z() } else { p(s) })
            .collect();
        PolyMatrix::new(f(), 3, vec![0; 5], vec![1; 5], entries).unwrap()
    }

    #[test]
    fn fixture_generators_and_class() {
        let (cx, pr) = pfaffian_resolution(&fixture_x()).unwrap();
        assert_eq!(cx.ranks(), [1, 5, 5, 1]);
        let gens: Vec<Polynomial> = (0..5).map(|i| cx.d[0].get(0, i).clone()).collect();
        let want = ["x3^2", "-x2*x3", "x2^2-x1*x3", "-x1*x2", "x1^2"];
        for (g, w) in gens.iter().zip(want) {
            assert_eq!(g, &p(w));
        }
        let h = homology_algebra(&reduce_mod_m(&cx, &pr)).unwrap();
        let profile = compute_profile(&h);
        assert_eq!(classify(&h, &profile, 1), TorClass::G(5));
    }

    #[test]
    fn skew_block_resolution_class() {
        let fam = build_family(f(), FamilySpec::Pfaffian { m: 2, j: 1 }).unwrap();
        assert_eq!(fam.complex.ranks(), [1, 5, 5, 1]);
        let h = homology_algebra(&reduce_mod_m(&fam.complex, &fam.product)).unwrap();
        let profile = compute_profile(&h);
        assert_eq!(classify(&h, &profile, 1), TorClass::G(5));
    }

    #[test]
    fn banded_minor_family_fixture() {
        let fam = build_family(f(), FamilySpec::Jp { p: 3 }).unwrap();
        assert_eq!(fam.complex.ranks(), [1, 4, 5, 2]);
        let want = ["x2^2-x1*x3", "-x1*x2", "x1^2", "x3^2"];
        for (g, w) in fam.ideal.iter().zip(want) {
            assert_eq!(g, &p(w));
        }
        let h = homology_algebra(&reduce_mod_m(&fam.complex, &fam.product)).unwrap();
        let profile = compute_profile(&h);
        assert_eq!(classify(&h, &profile, 1), TorClass::H(3, 2));
    }

    #[test]
    fn degenerate_small_parameter_still_builds() {
        let fam = build_family(f(), FamilySpec::Jp { p: 2 }).unwrap();
        assert_eq!(fam.complex.ranks(), [1, 3, 3, 1]);
    }

    #[test]
    fn closed_form_lifts_validate() {
        for j in 0..=3usize {
            let fam = build_family(f(), FamilySpec::Pfaffian { m: 2, j }).unwrap();
            for i in 1..=5usize {
                explicit_q1(&fam, i).unwrap_or_else(|e| panic!("m=2 j={j} i={i}: {e}"));
            }
        }
        let fam = build_family(f(), FamilySpec::Pfaffian { m: 3, j: 1 }).unwrap();
        for i in 1..=7usize {
            explicit_q1(&fam, i).unwrap_or_else(|e| panic!("m=3 j=1 i={i}: {e}"));
        }
    }

    #[test]
    fn closed_form_lifts_validate_banded() {
        let fam = build_family(f(), FamilySpec::Jp { p: 4 }).unwrap();
        for i in [1usize, 2, 3, 5] {
            let qe = explicit_q1(&fam, i).unwrap_or_else(|e| panic!("p=4 i={i}: {e}"));
            // Computed lift satisfies the same identity; difference lies in
            // the kernel of evaluation against (x1, x2, x3).
            let ql = lifted_q1(&fam.complex, i).unwrap();
            for col in 0..fam.complex.rank(2) {
                let mut acc = z();
                for (row, var) in [1usize, 2, 3].into_iter().enumerate() {
                    let d = qe.get(row, col).try_sub(ql.get(row, col)).unwrap();
                    acc = acc.try_add(&d.try_mul(&xpow(f(), var, 1)).unwrap()).unwrap();
                }
                assert!(acc.is_zero());
            }
        }
        assert!(matches!(explicit_q1(&fam, 4), Err(Error::UnsupportedInput(_))));
        let fam = build_family(f(), FamilySpec::JpPrime { p: 4 }).unwrap();
        assert!(matches!(explicit_q1(&fam, 1), Err(Error::UnsupportedInput(_))));
        // The computed lift covers directions with no closed form.
        let q = lifted_q1(&fam.complex, 1).unwrap();
        validate_q1(&fam.complex, 1, &q).unwrap();
    }

    #[test]
    fn predictions_match_closed_forms() {
        // Below the hypothesis threshold: no prediction.
        let fam = build_family(f(), FamilySpec::Pfaffian { m: 2, j: 1 }).unwrap();
        assert!(predicted_tuple(&fam, &[1]).unwrap().is_none());
        // m=2, j=0 is covered.
        let fam = build_family(f(), FamilySpec::Pfaffian { m: 2, j: 0 }).unwrap();
        let pr = predicted_tuple(&fam, &[1]).unwrap().unwrap();
        assert_eq!((pr.profile.m, pr.profile.n, pr.profile.r), (7, 2, 4));
        assert_eq!(pr.class, TorClass::G(4));
        // m=3, j=1, one direction.
        let fam = build_family(f(), FamilySpec::Pfaffian { m: 3, j: 1 }).unwrap();
        let pr = predicted_tuple(&fam, &[1]).unwrap().unwrap();
        assert_eq!((pr.profile.m, pr.profile.n, pr.profile.r), (8, 2, 5));
        assert_eq!(pr.class, TorClass::G(5));
        // Banded minor family.
        let fam = build_family(f(), FamilySpec::Jp { p: 4 }).unwrap();
        let pr = predicted_tuple(&fam, &[1]).unwrap().unwrap();
        assert_eq!(pr.class, TorClass::H(3, 2));
        assert_eq!(
            (pr.profile.m, pr.profile.n, pr.profile.p, pr.profile.q, pr.profile.r),
            (6, 4, 3, 2, 2)
        );
        assert!(!pr.golod_allowed);
        let pr = predicted_tuple(&fam, &[5]).unwrap().unwrap();
        assert_eq!(pr.class, TorClass::Golod);
        // Squared variant keeps q at its maximum.
        let fam = build_family(f(), FamilySpec::JpPrime { p: 4 }).unwrap();
        let pr = predicted_tuple(&fam, &[1]).unwrap().unwrap();
        assert_eq!(pr.class, TorClass::H(3, 3));
        assert_eq!(
            (pr.profile.m, pr.profile.n, pr.profile.p, pr.profile.q, pr.profile.r),
            (7, 4, 3, 3, 3)
        );
        let pr = predicted_tuple(&fam, &[5]).unwrap().unwrap();
        assert_eq!(pr.class, TorClass::Golod);
        // Bad sigma.
        assert!(predicted_tuple(&fam, &[]).is_err());
        assert!(predicted_tuple(&fam, &[2, 2]).is_err());
        assert!(predicted_tuple(&fam, &[6]).is_err());
    }
}
