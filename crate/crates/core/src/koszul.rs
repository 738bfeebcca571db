//! The Koszul complex on x1..xn as a DG algebra, with twisted copies.

use crate::complex::{FreeComplex, Generator};
use crate::dg::DGProduct;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graded::{graded_solve, PolyMatrix};
use crate::poly::{Homogeneity, Polynomial};

/// Koszul complex with exterior product. Generators e_S are indexed by
/// subsets S of {1..n}, ordered by (size, lexicographic); the global twist
/// shifts every generator degree (K(-w) has its unit in degree w).
pub struct KoszulComplex {
    pub complex: FreeComplex,
    pub product: DGProduct,
    pub n: usize,
    pub twist: i64,
    /// subsets[k] lists the index sets of the K_k generators (1-based vars).
    pub subsets: [Vec<Vec<usize>>; 4],
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn subset_name(s: &[usize], tag: &str) -> String {
    if s.is_empty() {
        format!("e0{tag}")
    } else {
        format!("e{}{}", s.iter().map(|v| v.to_string()).collect::<String>(), tag)
    }
}

/// Sign of merging S and T: (-1)^{#inversions}; None when they intersect.
pub fn merge_sign(s: &[usize], t: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut inv = 0usize;
    for &a in s {
        for &b in t {
            if a == b {
                return None;
            }
            if a > b {
                inv += 1;
            }
        }
    }
    let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
    u.sort_unstable();
    Some((if inv % 2 == 0 { 1 } else { -1 }, u))
}

/// Build the Koszul complex on x1..xn (n <= 3 used here) over the ring in
/// `nvars` variables, globally twisted by `twist`, with generator names
/// suffixed by `tag` to keep direct sums collision-free.
pub fn build_koszul(
    field: FieldSpec,
    nvars: usize,
    n: usize,
    twist: i64,
    tag: &str,
) -> Result<KoszulComplex> {
    if n > nvars {
        return Err(Error::Precondition("Koszul on more generators than variables".into()));
    }
    if n > 3 {
        return Err(Error::Precondition("Koszul complexes here have length <= 3".into()));
    }
    let subsets: [Vec<Vec<usize>>; 4] = [
        subsets_of_size(n, 0),
        subsets_of_size(n, 1),
        subsets_of_size(n, 2),
        subsets_of_size(n, 3),
    ];
    let modules: [Vec<Generator>; 4] = [0, 1, 2, 3].map(|k| {
        subsets[k]
            .iter()
            .map(|s| Generator::new(subset_name(s, tag), k as i64 + twist))
            .collect()
    });
    let mut d = Vec::new();
    for k in 1..=3usize {
        let mut m = PolyMatrix::zero(
            field,
            nvars,
            modules[k - 1].iter().map(|g| g.degree).collect(),
            modules[k].iter().map(|g| g.degree).collect(),
        );
        for (col, s) in subsets[k].iter().enumerate() {
            for (a, &var) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&v| v != var).collect();
                let row = subsets[k - 1].iter().position(|t| *t == rest).unwrap();
                let sign = if a % 2 == 0 { 1 } else { -1 };
                let x = Polynomial::variable(field, nvars, var - 1)
                    .scale(&field.from_i64(sign));
                m.set(row, col, x)?;
            }
        }
        d.push(m);
    }
    let complex = FreeComplex::new(field, nvars, modules, [d.remove(0), d.remove(0), d.remove(0)])?;
    // Exterior product.
    let mut product = DGProduct::empty();
    for (i, s) in subsets[1].iter().enumerate() {
        for (j, t) in subsets[1].iter().enumerate().skip(i + 1) {
            let mut v = vec![Polynomial::zero(field, nvars); subsets[2].len()];
            if let Some((sign, u)) = merge_sign(s, t) {
                let pos = subsets[2].iter().position(|w| *w == u).unwrap();
                v[pos] = Polynomial::constant(field, nvars, sign);
            }
            product.one_one.insert((i, j), v);
        }
    }
    for (i, s) in subsets[1].iter().enumerate() {
        for (j, t) in subsets[2].iter().enumerate() {
            let mut v = vec![Polynomial::zero(field, nvars); subsets[3].len()];
            if let Some((sign, u)) = merge_sign(s, t) {
                let pos = subsets[3].iter().position(|w| *w == u).unwrap();
                v[pos] = Polynomial::constant(field, nvars, sign);
            }
            product.one_two.insert((i, j), v);
        }
    }
    Ok(KoszulComplex { complex, product, n, twist, subsets })
}

impl KoszulComplex {
    /// Lift a homogeneous cycle z in K_{k-1} through m_k: returns y with
    /// m_k(y) = z, or None when z is not in the image (e.g. units in K_0).
    pub fn lift(&self, k: usize, z: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
        if !(1..=3).contains(&k) {
            return Err(Error::Precondition("lift degree out of range".into()));
        }
        let degs = self.complex.degs(k - 1);
        if z.len() != degs.len() {
            return Err(Error::DimensionMismatch("lift input length".into()));
        }
        // Infer the internal degree from the first nonzero component.
        let mut d = None;
        for (i, p) in z.iter().enumerate() {
            match p.homogeneity() {
                Homogeneity::Zero => continue,
                Homogeneity::Degree(e) => {
                    let cand = e as i64 + degs[i];
                    if let Some(prev) = d {
                        if prev != cand {
                            return Err(Error::Inhomogeneous {
                                row: i,
                                col: 0,
                                msg: "lift input mixes internal degrees".into(),
                            });
                        }
                    }
                    d = Some(cand);
                }
                Homogeneity::Inhomogeneous => {
                    return Err(Error::Inhomogeneous {
                        row: i,
                        col: 0,
                        msg: "lift input component inhomogeneous".into(),
                    })
                }
            }
        }
        let Some(d) = d else {
            // z = 0 lifts to 0.
            return Ok(Some(vec![
                Polynomial::zero(self.complex.field(), self.complex.nvars());
                self.complex.rank(k)
            ]));
        };
        graded_solve(&self.complex.d[k - 1], z, d)
    }
}
