//! Exact coefficient fields: prime fields F_p (odd p, default 32003) and Q.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Default prime characteristic.
pub const DEFAULT_PRIME: u64 = 32003;

/// Which field coefficients live in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Fp(u64),
    Rational,
}

impl FieldSpec {
    pub fn default_fp() -> Self {
        FieldSpec::Fp(DEFAULT_PRIME)
    }

    /// Characteristic: p for F_p, 0 for Q.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Fp(p) => *p,
            FieldSpec::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { v: 0, p: *p },
            FieldSpec::Rational => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Fp(p) => {
                let p = *p;
                let v = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { v, p }
            }
            FieldSpec::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn is_prime_char(p: u64) -> bool {
        if p < 2 {
            return false;
        }
        if p % 2 == 0 {
            return p == 2;
        }
        let mut d = 3u64;
        while d.saturating_mul(d) <= p {
            if p % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    }
}

/// An element of the coefficient field in canonical form.
///
/// F_p values are stored in `[0, p)`; rationals are always reduced, so
/// structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Fp { v: u64, p: u64 },
    Q(BigRational),
}

impl Scalar {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
            Scalar::Q(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Q(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Q(r) => r.is_one(),
        }
    }

    fn check(&self, rhs: &Scalar) -> (u64, u64, u64) {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => (*a, *b, *p),
            _ => panic!("scalar field mismatch: {:?} vs {:?}", self.spec(), rhs.spec()),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => {
                let (a, b, p) = self.check(rhs);
                Scalar::Fp { v: (a + b) % p, p }
            }
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            _ => {
                let (a, b, p) = self.check(rhs);
                Scalar::Fp { v: (a + p - b) % p, p }
            }
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => {
                let (a, b, p) = self.check(rhs);
                Scalar::Fp { v: ((a as u128 * b as u128) % p as u128) as u64, p }
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero");
                // Fermat: v^(p-2) mod p.
                let (mut base, mut exp, p) = (*v as u128, p - 2, *p as u128);
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Fp { v: acc as u64, p: p as u64 }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }

    /// Signed integer representative: balanced lift for F_p, exact for
    /// integral rationals (None otherwise).
    pub fn balanced_i64(&self) -> Option<i64> {
        match self {
            Scalar::Fp { v, p } => {
                if *v > p / 2 {
                    Some(*v as i64 - *p as i64)
                } else {
                    Some(*v as i64)
                }
            }
            Scalar::Q(r) => {
                if r.is_integer() {
                    use num::ToPrimitive;
                    r.to_integer().to_i64()
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { .. } => write!(f, "{}", self.balanced_i64().unwrap()),
            Scalar::Q(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.to_integer())
                } else if r.denom().is_negative() {
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}
