//! Monomials over a fixed variable set x1..xn, ordered degree-then-lex.

use std::cmp::Ordering;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The variable x_{i+1} (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending
/// monomial order (deterministic strand bases).
pub fn monomials_of_degree(nvars: usize, d: i64) -> Vec<Monomial> {
    if d < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fill(&mut out, &mut exps, 0, d as u16, nvars);
    out.sort();
    out.reverse();
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut Vec<u16>, i: usize, rem: u16, nvars: usize) {
    if i + 1 == nvars {
        exps[i] = rem;
        out.push(Monomial(exps.clone()));
        exps[i] = 0;
        return;
    }
    for e in 0..=rem {
        exps[i] = e;
        fill(out, exps, i + 1, rem - e, nvars);
    }
    exps[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(3, -1).len(), 0);
        for d in 0..8i64 {
            let n = monomials_of_degree(3, d).len() as i64;
            assert_eq!(n, (d + 1) * (d + 2) / 2);
        }
    }

    #[test]
    fn order_is_degree_then_lex() {
        let a = Monomial(vec![0, 2, 0]); // x2^2
        let b = Monomial(vec![1, 0, 1]); // x1*x3
        assert!(a < b);
        let c = Monomial(vec![0, 0, 3]);
        assert!(b < c);
    }

    #[test]
    fn display_form() {
        assert_eq!(Monomial(vec![2, 1, 0]).to_string(), "x1^2*x2");
        assert_eq!(Monomial(vec![0, 0, 0]).to_string(), "1");
    }
}
