//! Sparse multivariate polynomials with exact field coefficients.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::Monomial;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Total-degree guard: operations whose result would exceed this degree are
/// rejected (bug containment for runaway multiplications).
pub const DEGREE_GUARD: u32 = 200;

/// Homogeneity status of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Inhomogeneous,
}

/// A sparse polynomial in `nvars` variables; no zero coefficients are stored,
/// so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), field.from_i64(c));
        p
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    /// The variable x_{i+1} (0-based).
    pub fn variable(field: FieldSpec, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), field.one());
        p
    }

    pub fn monomial(field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d != m.degree() => return Homogeneity::Inhomogeneous,
                _ => {}
            }
        }
        match deg {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Degree(d),
        }
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Degree(e) => d >= 0 && e as i64 == d,
            Homogeneity::Inhomogeneous => false,
        }
    }

    fn compatible(&self, rhs: &Polynomial) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::IncompatibleOperands(format!(
                "field {:?} vs {:?}",
                self.field, rhs.field
            )));
        }
        if self.nvars != rhs.nvars {
            return Err(Error::IncompatibleOperands(format!(
                "{} vs {} variables",
                self.nvars, rhs.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.compatible(rhs)?;
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.compatible(rhs)?;
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.compatible(rhs)?;
        if let (Some(a), Some(b)) = (self.degree(), rhs.degree()) {
            if a + b > DEGREE_GUARD {
                return Err(Error::DegreeGuard { degree: a + b, guard: DEGREE_GUARD });
            }
        }
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in rhs.terms.iter() {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field, self.nvars);
        }
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, a) in self.terms.iter() {
            out.add_term(m.clone(), a.mul(c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (ma, c) in self.terms.iter() {
            out.add_term(ma.mul(m), c.clone());
        }
        out
    }

    /// Constant term: implements reduction modulo the irrelevant ideal.
    pub fn eval_zero(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Sum of terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: i64) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        if d < 0 {
            return out;
        }
        for (m, c) in self.terms.iter() {
            if m.degree() as i64 == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// All coefficients lie in the maximal ideal (no constant term).
    pub fn in_max_ideal(&self) -> bool {
        self.eval_zero().is_zero()
    }

    /// Parse the text grammar: terms joined by `+`/`-`; a term is an optional
    /// integer coefficient and `*`-separated powers `xi^e`. Whitespace ignored.
    pub fn parse(input: &str, field: FieldSpec, nvars: usize) -> Result<Polynomial> {
        Parser { bytes: input.as_bytes(), pos: 0, field, nvars }.parse()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial add")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial sub")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial mul")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (neg, mag) = match c.balanced_i64() {
                Some(n) if n < 0 => (true, (-n).to_string()),
                Some(n) => (false, n.to_string()),
                None => {
                    let s = c.to_string();
                    match s.strip_prefix('-') {
                        Some(rest) => (true, rest.to_string()),
                        None => (false, s),
                    }
                }
            };
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag == "1" {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    field: FieldSpec,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn parse(mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.field, self.nvars);
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut sign = 1i64;
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
            }
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c.mul(&self.field.from_i64(sign)));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return self.err("expected '+' or '-' between terms"),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let mut coeff = self.field.one();
        let mut exps = vec![0u16; self.nvars];
        let mut saw_factor = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n = self.integer()?;
            coeff = self.field.from_i64(n);
            saw_factor = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !matches!(self.peek(), Some(b'x')) {
                return Ok((Monomial(exps), coeff));
            }
        }
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    let idx = self.integer()? as usize;
                    if idx == 0 || idx > self.nvars {
                        return self.err(&format!("variable index out of range 1..={}", self.nvars));
                    }
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.integer()?;
                        if !(0..=DEGREE_GUARD as i64).contains(&e) {
                            return self.err("exponent out of range");
                        }
                        e as u16
                    } else {
                        1
                    };
                    exps[idx - 1] += e;
                    saw_factor = true;
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                        continue;
                    }
                    break;
                }
                _ => {
                    if saw_factor {
                        return self.err("expected variable power after '*'");
                    }
                    return self.err("expected term");
                }
            }
        }
        Ok((Monomial(exps), coeff))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer overflow".to_string() })
    }
}

/// Single entry point for the three ring operations (CLI-facing).
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: &str) -> Result<Polynomial> {
    match op {
        "add" => a.try_add(b),
        "sub" => a.try_sub(b),
        "mul" => a.try_mul(b),
        other => Err(Error::UnsupportedInput(format!("unknown op {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, FieldSpec::default_fp(), 3).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &p("x1+x2") * &p("x1-x2");
        assert_eq!(lhs, p("x1^2-x2^2"));
    }

    #[test]
    fn absorbing_zero() {
        let a = p("x1^2+3*x2");
        let z = Polynomial::zero(FieldSpec::default_fp(), 3);
        assert!((&a * &z).is_zero());
    }

    #[test]
    fn term_by_term_expansion() {
        // (x2^2 - x1*x3) * x1*x2 = x1*x2^3 - x1^2*x2*x3
        assert_eq!(&p("x2^2-x1*x3") * &p("x1*x2"), p("x1*x2^3-x1^2*x2*x3"));
    }

    #[test]
    fn eval_zero_cases() {
        assert_eq!(p("5+x1").eval_zero(), FieldSpec::default_fp().from_i64(5));
        assert!(p("x1^2*x3").eval_zero().is_zero());
        assert!(Polynomial::zero(FieldSpec::default_fp(), 3).eval_zero().is_zero());
    }

    #[test]
    fn homogeneous_components() {
        let a = p("x1+x1*x2");
        assert_eq!(a.homogeneous_component(2), p("x1*x2"));
        assert!(a.homogeneous_component(3).is_zero());
        let b = p("x1^2*x2-x3^3");
        assert_eq!(b.homogeneous_component(3), b);
    }

    #[test]
    fn eval_zero_is_ring_hom() {
        let a = p("2+x1+x2^2");
        let b = p("3+x3");
        assert_eq!((&a * &b).eval_zero(), a.eval_zero().mul(&b.eval_zero()));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = p("x1");
        let b = Polynomial::parse("x1", FieldSpec::Fp(101), 3).unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::IncompatibleOperands(_))));
    }

    #[test]
    fn degree_guard_trips() {
        let a = Polynomial::monomial(
            FieldSpec::default_fp(),
            Monomial(vec![150, 0, 0]),
            FieldSpec::default_fp().one(),
        );
        assert!(matches!(a.try_mul(&a), Err(Error::DegreeGuard { .. })));
    }

    #[test]
    fn parse_errors_are_positioned() {
        match Polynomial::parse("x1^2 + y", FieldSpec::default_fp(), 3) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["x2^2-x1*x3", "-x1*x2", "x1^2", "5", "2*x1*x2-3*x3+1"] {
            let a = p(s);
            assert_eq!(Polynomial::parse(&a.to_string(), a.field(), 3).unwrap(), a);
        }
    }
}
