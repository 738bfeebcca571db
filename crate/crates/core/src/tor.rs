//! Homology algebras of reduced DG complexes, the (m,n,p,q,r) invariants,
//! Tor-algebra classification, and the independent Koszul-homology oracle.

use crate::dg::ReducedDG;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::koszul::{merge_sign, subsets_of_size};
use crate::linalg::{MatrixOverK, Subquotient};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::quotient::{QuotientRing, Stratum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// H_1, H_2, H_3 of a DG algebra over k, with the induced multiplication
/// recorded on a fixed homology basis.
pub struct HomologyAlgebra {
    field: FieldSpec,
    /// dims of H_1, H_2, H_3.
    pub dim: [usize; 3],
    /// h11[a][b]: class of (basis a of H_1)·(basis b of H_1) in H_2.
    pub h11: Vec<Vec<Vec<Scalar>>>,
    /// h12[a][j]: class of (basis a of H_1)·(basis j of H_2) in H_3.
    pub h12: Vec<Vec<Vec<Scalar>>>,
}

impl HomologyAlgebra {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Assemble an algebra directly from structure-constant tables, e.g. a
    /// printed multiplication table. h11 must be dim[0] x dim[0] vectors of
    /// length dim[1]; h12 must be dim[0] x dim[1] vectors of length dim[2].
    pub fn from_tables(
        field: FieldSpec,
        dim: [usize; 3],
        h11: Vec<Vec<Vec<Scalar>>>,
        h12: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self> {
        if h11.len() != dim[0]
            || h11.iter().any(|r| r.len() != dim[0] || r.iter().any(|v| v.len() != dim[1]))
            || h12.len() != dim[0]
            || h12.iter().any(|r| r.len() != dim[1] || r.iter().any(|v| v.len() != dim[2]))
        {
            return Err(Error::DimensionMismatch("structure table shape".into()));
        }
        Ok(HomologyAlgebra { field, dim, h11, h12 })
    }
}

/// Homology of a reduced (k-constant) DG complex, with products projected
/// onto the chosen homology bases.
pub fn homology_algebra(red: &ReducedDG) -> Result<HomologyAlgebra> {
    let field = red.field();
    // Cycle and boundary spaces per homological degree 1..3.
    let mut sq: Vec<Subquotient> = Vec::new();
    for i in 1..=3usize {
        let cycles = red.d[i - 1].kernel_basis();
        let boundaries: Vec<Vec<Scalar>> = if i < 3 {
            (0..red.d[i].cols).map(|j| red.d[i].column(j)).collect()
        } else {
            Vec::new()
        };
        sq.push(Subquotient::new(field, red.ranks[i], &cycles, &boundaries)?);
    }
    let dim = [sq[0].dim(), sq[1].dim(), sq[2].dim()];
    let mut h11 = vec![vec![Vec::new(); dim[0]]; dim[0]];
    for a in 0..dim[0] {
        for b in 0..dim[0] {
            let prod = red.mul11(&sq[0].basis()[a], &sq[0].basis()[b]);
            h11[a][b] = sq[1].project(&prod)?;
        }
    }
    let mut h12 = vec![vec![Vec::new(); dim[1]]; dim[0]];
    for a in 0..dim[0] {
        for j in 0..dim[1] {
            let prod = red.mul12(&sq[0].basis()[a], &sq[1].basis()[j]);
            h12[a][j] = sq[2].project(&prod)?;
        }
    }
    Ok(HomologyAlgebra { field, dim, h11, h12 })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TorProfile {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

/// (m, n, p, q, r): minimal generators, type, dim H_1², dim H_1·H_2, and the
/// rank of the homothety map H_2 -> Hom(H_1, H_3).
pub fn compute_profile(h: &HomologyAlgebra) -> TorProfile {
    let field = h.field;
    let (m, d2, n) = (h.dim[0], h.dim[1], h.dim[2]);
    // p = dim span of all H_1·H_1 products inside H_2.
    let rows11: Vec<Vec<Scalar>> = (0..m)
        .flat_map(|a| ((a + 1)..m).map(move |b| (a, b)))
        .map(|(a, b)| h.h11[a][b].clone())
        .collect();
    let p = rank_of_rows(field, d2, &rows11);
    // q = dim span of all H_1·H_2 products inside H_3.
    let rows12: Vec<Vec<Scalar>> = (0..m)
        .flat_map(|a| (0..d2).map(move |j| (a, j)))
        .map(|(a, j)| h.h12[a][j].clone())
        .collect();
    let q = rank_of_rows(field, n, &rows12);
    // r = rank of ν: H_2 -> Hom(H_1, H_3), each h_2 flattened to an m×n slab.
    let rows_nu: Vec<Vec<Scalar>> = (0..d2)
        .map(|j| {
            let mut row = Vec::with_capacity(m * n);
            for a in 0..m {
                row.extend(h.h12[a][j].iter().cloned());
            }
            row
        })
        .collect();
    let r = rank_of_rows(field, m * n, &rows_nu);
    TorProfile { m, n, p, q, r }
}

fn rank_of_rows(field: FieldSpec, width: usize, rows: &[Vec<Scalar>]) -> usize {
    if rows.is_empty() || width == 0 {
        return 0;
    }
    MatrixOverK::from_rows(field, rows.to_vec()).rank()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TorClass {
    CI,
    TE,
    B,
    G(usize),
    H(usize, usize),
    Golod,
    Unclassified,
}

impl fmt::Display for TorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorClass::CI => write!(f, "CI"),
            TorClass::TE => write!(f, "TE"),
            TorClass::B => write!(f, "B"),
            TorClass::G(r) => write!(f, "G({r})"),
            TorClass::H(p, q) => write!(f, "H({p},{q})"),
            TorClass::Golod => write!(f, "Golod"),
            TorClass::Unclassified => write!(f, "unclassified"),
        }
    }
}

/// Decision table on (p, q, r), with a randomized homothety-rank
/// discriminator for the (3,0,0) ambiguity between TE and H(3,0):
/// the TE table multiplies H_1 on itself by a skew 3×3 pattern (rank <= 2 for
/// every homothety), while H(3,0) attains homothety rank 3.
pub fn classify(h: &HomologyAlgebra, pr: &TorProfile, seed: u64) -> TorClass {
    match (pr.p, pr.q, pr.r) {
        (0, 0, 0) => TorClass::Golod,
        (3, 1, 3) if pr.m == 3 && pr.n == 1 => TorClass::CI,
        (1, 1, 2) => TorClass::B,
        (0, 1, r) if r >= 2 => TorClass::G(r),
        (3, 0, 0) => {
            if max_homothety_rank_is_3(h, seed) {
                TorClass::H(3, 0)
            } else {
                TorClass::TE
            }
        }
        (p, q, r) if r == q => TorClass::H(p, q),
        _ => TorClass::Unclassified,
    }
}

fn max_homothety_rank_is_3(h: &HomologyAlgebra, seed: u64) -> bool {
    let field = h.field;
    let m = h.dim[0];
    let d2 = h.dim[1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = match field {
        FieldSpec::Fp(p) => p as i64,
        FieldSpec::Rational => 10007,
    };
    for _ in 0..20 {
        let c: Vec<Scalar> = (0..m).map(|_| field.from_i64(rng.gen_range(0..span))).collect();
        // Matrix of (h ·): H_1 -> H_2 at h = Σ c_a e_a.
        let rows: Vec<Vec<Scalar>> = (0..m)
            .map(|b| {
                let mut row = vec![field.zero(); d2];
                for a in 0..m {
                    if c[a].is_zero() {
                        continue;
                    }
                    for (k, v) in h.h11[a][b].iter().enumerate() {
                        row[k] = row[k].add(&v.mul(&c[a]));
                    }
                }
                row
            })
            .collect();
        if rank_of_rows(field, d2, &rows) >= 3 {
            return true;
        }
    }
    false
}

// --- Koszul homology oracle ---------------------------------------------------

/// Default internal-degree guard for the oracle.
pub fn oracle_default_dmax(gens: &[Polynomial]) -> i64 {
    let maxdeg = gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0) as i64;
    3 * maxdeg + 6
}

/// Tor profile of R/I computed the slow, independent way: homology of
/// K_• ⊗ R/I degreewise over k, with the multiplication induced by the
/// exterior product. Requires I to be m-primary (detected within dmax).
pub fn koszul_homology_oracle(
    field: FieldSpec,
    nvars: usize,
    gens: &[Polynomial],
    dmax: i64,
    seed: u64,
) -> Result<(TorProfile, TorClass)> {
    let h = oracle_homology_algebra(field, nvars, gens, dmax)?;
    let pr = compute_profile(&h);
    let class = classify(&h, &pr, seed);
    Ok((pr, class))
}

/// The homology algebra H_•(K ⊗ R/I) with exterior-product multiplication.
pub fn oracle_homology_algebra(
    field: FieldSpec,
    nvars: usize,
    gens: &[Polynomial],
    dmax: i64,
) -> Result<HomologyAlgebra> {
    if nvars != 3 {
        return Err(Error::UnsupportedInput("oracle is specific to 3 variables".into()));
    }
    let q = QuotientRing::new(field, nvars, gens.to_vec())?;
    let socle = q.socle_bound(dmax).ok_or_else(|| {
        Error::UnsupportedInput(format!("ideal is not visibly m-primary within degree {dmax}"))
    })?;
    // (K_i ⊗ A)_d vanishes for d > socle + i, so socle + 3 bounds everything.
    let dtop = socle + 3;
    let strata: Vec<Stratum> = (0..=dtop).map(|d| q.stratum(d)).collect();
    let subsets: [Vec<Vec<usize>>; 4] = [
        subsets_of_size(3, 0),
        subsets_of_size(3, 1),
        subsets_of_size(3, 2),
        subsets_of_size(3, 3),
    ];
    let sdim = |d: i64| -> usize {
        if (0..=dtop).contains(&d) {
            strata[d as usize].dim()
        } else {
            0
        }
    };
    let amb = |i: usize, d: i64| -> usize { subsets[i].len() * sdim(d - i as i64) };

    // Differential (K_i ⊗ A)_d -> (K_{i-1} ⊗ A)_d.
    let boundary = |i: usize, d: i64| -> Result<MatrixOverK> {
        let rows = amb(i - 1, d);
        let cols = amb(i, d);
        let mut m = MatrixOverK::zero(field, rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(m);
        }
        let src_stratum = &strata[(d - i as i64) as usize];
        let tgt_stratum = &strata[(d - i as i64 + 1) as usize];
        for (si, s) in subsets[i].iter().enumerate() {
            for (bi, mono) in src_stratum.basis.iter().enumerate() {
                let col = si * src_stratum.dim() + bi;
                for (a, &var) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&v| v != var).collect();
                    let ti = subsets[i - 1].iter().position(|t| *t == rest).unwrap();
                    let sign = if a % 2 == 0 { field.one() } else { field.from_i64(-1) };
                    let moved = Polynomial::monomial(
                        field,
                        mono.mul(&Monomial::var(nvars, var - 1)),
                        field.one(),
                    );
                    let coords = tgt_stratum.reduce(&moved)?;
                    for (l, c) in coords.iter().enumerate() {
                        if !c.is_zero() {
                            let row = ti * tgt_stratum.dim() + l;
                            m.set(row, col, m.get(row, col).add(&sign.mul(c)));
                        }
                    }
                }
            }
        }
        Ok(m)
    };

    // Per (i, d): homology subquotient.
    let mut sq: Vec<Vec<Option<Subquotient>>> = vec![vec![], vec![], vec![], vec![]];
    let mut offsets: Vec<Vec<usize>> = vec![vec![], vec![], vec![], vec![]];
    let mut dims = [0usize; 4];
    for i in 1..=3usize {
        for d in 0..=dtop {
            let di = boundary(i, d)?;
            let cycles = if amb(i, d) == 0 { Vec::new() } else { di.kernel_basis() };
            let boundaries: Vec<Vec<Scalar>> = if i < 3 && amb(i + 1, d) > 0 {
                let dnext = boundary(i + 1, d)?;
                (0..dnext.cols).map(|j| dnext.column(j)).collect()
            } else {
                Vec::new()
            };
            let s = Subquotient::new(field, amb(i, d), &cycles, &boundaries)?;
            offsets[i].push(dims[i]);
            dims[i] += s.dim();
            sq[i].push(Some(s));
        }
    }

    // Exterior multiplication of ambient vectors.
    let mult = |i: usize, d1: i64, u: &[Scalar], j: usize, d2: i64, v: &[Scalar]| -> Result<Vec<Scalar>> {
        let n = i + j;
        let d = d1 + d2;
        let out_dim = if n <= 3 { amb(n, d) } else { 0 };
        let mut out = vec![field.zero(); out_dim];
        if out_dim == 0 {
            return Ok(out);
        }
        let s1 = &strata[(d1 - i as i64) as usize];
        let s2 = &strata[(d2 - j as i64) as usize];
        let st = &strata[(d - n as i64) as usize];
        for (si, s) in subsets[i].iter().enumerate() {
            for bi in 0..s1.dim() {
                let cu = &u[si * s1.dim() + bi];
                if cu.is_zero() {
                    continue;
                }
                for (tj, t) in subsets[j].iter().enumerate() {
                    let Some((sign, merged)) = merge_sign(s, t) else { continue };
                    for bj in 0..s2.dim() {
                        let cv = &v[tj * s2.dim() + bj];
                        if cv.is_zero() {
                            continue;
                        }
                        let prod = Polynomial::monomial(
                            field,
                            s1.basis[bi].mul(&s2.basis[bj]),
                            field.one(),
                        );
                        let coords = st.reduce(&prod)?;
                        let mi = subsets[n].iter().position(|w| *w == merged).unwrap();
                        let scale = cu.mul(cv).mul(&field.from_i64(sign));
                        for (l, c) in coords.iter().enumerate() {
                            if !c.is_zero() {
                                let idx = mi * st.dim() + l;
                                out[idx] = out[idx].add(&c.mul(&scale));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    };

    // Assemble global homology bases: (degree, subquotient-local index).
    let basis_list = |i: usize| -> Vec<(i64, usize)> {
        let mut v = Vec::new();
        for d in 0..=dtop {
            let s = sq[i][d as usize].as_ref().unwrap();
            for l in 0..s.dim() {
                v.push((d, l));
            }
        }
        v
    };
    let b1 = basis_list(1);
    let b2 = basis_list(2);

    let project_global = |n: usize, d: i64, amb_vec: &[Scalar]| -> Result<Vec<Scalar>> {
        let mut out = vec![field.zero(); dims[n]];
        if !(0..=dtop).contains(&d) || amb_vec.is_empty() {
            return Ok(out);
        }
        let s = sq[n][d as usize].as_ref().unwrap();
        let coords = s.project(amb_vec)?;
        let off = offsets[n][d as usize];
        for (l, c) in coords.into_iter().enumerate() {
            out[off + l] = c;
        }
        Ok(out)
    };

    let rep = |i: usize, (d, l): (i64, usize)| -> &[Scalar] {
        &sq[i][d as usize].as_ref().unwrap().basis()[l]
    };

    let mut h11 = vec![vec![Vec::new(); dims[1]]; dims[1]];
    for (a, &ka) in b1.iter().enumerate() {
        for (b, &kb) in b1.iter().enumerate() {
            let prod = mult(1, ka.0, rep(1, ka), 1, kb.0, rep(1, kb))?;
            h11[a][b] = project_global(2, ka.0 + kb.0, &prod)?;
        }
    }
    let mut h12 = vec![vec![Vec::new(); dims[2]]; dims[1]];
    for (a, &ka) in b1.iter().enumerate() {
        for (j, &kj) in b2.iter().enumerate() {
            let prod = mult(1, ka.0, rep(1, ka), 2, kj.0, rep(2, kj))?;
            h12[a][j] = project_global(3, ka.0 + kj.0, &prod)?;
        }
    }
    Ok(HomologyAlgebra { field, dim: [dims[1], dims[2], dims[3]], h11, h12 })
}

// --- Report JSON ---------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Report {
    pub ideal: Vec<String>,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub class: String,
    pub method: String,
}

impl Report {
    pub fn new(ideal: Vec<String>, pr: &TorProfile, class: TorClass, method: &str) -> Self {
        Report {
            ideal,
            m: pr.m,
            n: pr.n,
            p: pr.p,
            q: pr.q,
            r: pr.r,
            class: class.to_string(),
            method: method.to_string(),
        }
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

    /// Hand-build a HomologyAlgebra straight from a printed multiplication
    /// table: products given as (a, b) -> H_2 index and (a, j) -> H_3 index
    /// with signs.
    fn table_algebra(
        m: usize,
        d2: usize,
        n: usize,
        t11: &[(usize, usize, usize, i64)],
        t12: &[(usize, usize, usize, i64)],
    ) -> HomologyAlgebra {
        let mut h11 = vec![vec![vec![f().zero(); d2]; m]; m];
        for &(a, b, k, s) in t11 {
            h11[a][b][k] = f().from_i64(s);
            h11[b][a][k] = f().from_i64(-s);
        }
        let mut h12 = vec![vec![vec![f().zero(); n]; d2]; m];
        for &(a, j, k, s) in t12 {
            h12[a][j][k] = f().from_i64(s);
        }
        HomologyAlgebra { field: f(), dim: [m, d2, n], h11, h12 }
    }

    #[test]
    fn decision_table_from_printed_tables() {
        // CI: f2 = pairwise products of the three f1; f1^i f2^j = δ_ij f3.
        let ci = table_algebra(
            3,
            3,
            1,
            &[(1, 2, 0, 1), (2, 0, 1, 1), (0, 1, 2, 1)],
            &[(0, 0, 0, 1), (1, 1, 0, 1), (2, 2, 0, 1)],
        );
        let pr = compute_profile(&ci);
        assert_eq!((pr.p, pr.q, pr.r), (3, 1, 3));
        assert_eq!(classify(&ci, &pr, 0), TorClass::CI);

        // TE: same H_1·H_1 pattern, no H_1·H_2 products.
        let te = table_algebra(3, 3, 1, &[(1, 2, 0, 1), (2, 0, 1, 1), (0, 1, 2, 1)], &[]);
        let pr = compute_profile(&te);
        assert_eq!((pr.p, pr.q, pr.r), (3, 0, 0));
        assert_eq!(classify(&te, &pr, 0), TorClass::TE);

        // B: f1^1 f1^2 = f2^3; f1^1 f2^1 = f3^1 = f1^2 f2^2.
        let b = table_algebra(2, 3, 1, &[(0, 1, 2, 1)], &[(0, 0, 0, 1), (1, 1, 0, 1)]);
        let pr = compute_profile(&b);
        assert_eq!((pr.p, pr.q, pr.r), (1, 1, 2));
        assert_eq!(classify(&b, &pr, 0), TorClass::B);

        // G(r), r = 4: f1^i f2^i = f3^1 for i <= 4.
        let g4 = table_algebra(
            4,
            4,
            1,
            &[],
            &[(0, 0, 0, 1), (1, 1, 0, 1), (2, 2, 0, 1), (3, 3, 0, 1)],
        );
        let pr = compute_profile(&g4);
        assert_eq!((pr.p, pr.q, pr.r), (0, 1, 4));
        assert_eq!(classify(&g4, &pr, 0), TorClass::G(4));

        // H(p,q) = H(2,1): f1^3 f1^i = f2^i (i<=2); f1^3 f2^3 = f3^1.
        let h21 = table_algebra(3, 3, 1, &[(2, 0, 0, 1), (2, 1, 1, 1)], &[(2, 2, 0, 1)]);
        let pr = compute_profile(&h21);
        assert_eq!((pr.p, pr.q, pr.r), (2, 1, 1));
        assert_eq!(classify(&h21, &pr, 0), TorClass::H(2, 1));

        // H(3,0): f1^4 f1^i = f2^i (i<=3), nothing into H_3. Distinguished
        // from TE by attaining homothety rank 3.
        let h30 = table_algebra(4, 3, 1, &[(3, 0, 0, 1), (3, 1, 1, 1), (3, 2, 2, 1)], &[]);
        let pr = compute_profile(&h30);
        assert_eq!((pr.p, pr.q, pr.r), (3, 0, 0));
        assert_eq!(classify(&h30, &pr, 0), TorClass::H(3, 0));

        // Trivial multiplication: Golod.
        let golod = table_algebra(5, 5, 2, &[], &[]);
        let pr = compute_profile(&golod);
        assert_eq!((pr.p, pr.q, pr.r), (0, 0, 0));
        assert_eq!(classify(&golod, &pr, 0), TorClass::Golod);
    }

    #[test]
    fn discriminator_seed_independence() {
        let te = table_algebra(3, 3, 1, &[(1, 2, 0, 1), (2, 0, 1, 1), (0, 1, 2, 1)], &[]);
        let pr = compute_profile(&te);
        for seed in 0..10 {
            assert_eq!(classify(&te, &pr, seed), TorClass::TE);
        }
    }

    #[test]
    fn oracle_on_maximal_ideal_is_ci() {
        let gens = vec![p("x1"), p("x2"), p("x3")];
        let (pr, class) =
            koszul_homology_oracle(f(), 3, &gens, oracle_default_dmax(&gens), 1).unwrap();
        assert_eq!((pr.m, pr.n), (3, 1));
        assert_eq!(class, TorClass::CI);
    }

    #[test]
    fn oracle_on_regular_sequence_of_squares() {
        let gens = vec![p("x1^2"), p("x2^2"), p("x3^2")];
        let (pr, class) =
            koszul_homology_oracle(f(), 3, &gens, oracle_default_dmax(&gens), 1).unwrap();
        assert_eq!((pr.m, pr.n), (3, 1));
        assert_eq!(class, TorClass::CI);
    }

    #[test]
    fn oracle_on_square_of_maximal_ideal_is_golod() {
        let gens = vec![p("x1^2"), p("x1*x2"), p("x1*x3"), p("x2^2"), p("x2*x3"), p("x3^2")];
        let (pr, class) =
            koszul_homology_oracle(f(), 3, &gens, oracle_default_dmax(&gens), 1).unwrap();
        assert_eq!((pr.m, pr.n), (6, 3));
        assert_eq!(class, TorClass::Golod);
    }

    #[test]
    fn oracle_rejects_non_primary() {
        let gens = vec![p("x1"), p("x2")];
        let err = koszul_homology_oracle(f(), 3, &gens, 8, 1);
        assert!(matches!(err, Err(Error::UnsupportedInput(_))));
    }

    #[test]
    fn reduced_koszul_homology_is_exterior_algebra() {
        use crate::dg::{complete_product_by_lifting, reduce_mod_m};
        use crate::koszul::build_koszul;
        let k = build_koszul(f(), 3, 3, 0, "").unwrap();
        let pr_full = complete_product_by_lifting(&k.complex).unwrap();
        let red = reduce_mod_m(&k.complex, &pr_full);
        let h = homology_algebra(&red).unwrap();
        assert_eq!(h.dim, [3, 3, 1]);
        let prof = compute_profile(&h);
        assert_eq!((prof.p, prof.q, prof.r), (3, 1, 3));
        assert_eq!(classify(&h, &prof, 7), TorClass::CI);
    }

    #[test]
    fn report_serialization() {
        let pr = TorProfile { m: 7, n: 2, p: 0, q: 1, r: 2 };
        let rep = Report::new(vec!["x1^2".into()], &pr, TorClass::G(2), "koszul-oracle");
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"class\":\"G(2)\""));
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.r, 2);
    }
}
