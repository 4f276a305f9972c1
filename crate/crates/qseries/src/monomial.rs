//! Signed monomials `s * q^a * z^b`, the argument type for theta and Appell
//! constructors.
//!
//! The sign is restricted to +-1 and the z-exponent to half-integers, which is
//! exactly what the theta/Appell argument positions require.

use crate::error::{Error, Result};
use crate::QExp;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::Neg;

/// `sign * q^qexp * z^zexp` with `sign` in {+1, -1} and `zexp` a half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: i8,
    pub qexp: QExp,
    pub zexp: QExp,
}

impl Monomial {
    pub fn new(sign: i8, qexp: QExp) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +-1");
        Monomial { sign, qexp, zexp: QExp::zero() }
    }

    pub fn with_z(sign: i8, qexp: QExp, zexp: QExp) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +-1");
        assert!(
            (zexp * QExp::from_integer(2)).is_integer(),
            "z-exponent must be a half-integer"
        );
        Monomial { sign, qexp, zexp }
    }

    /// `q^a` with integer exponent.
    pub fn q(a: i64) -> Self {
        Monomial::new(1, QExp::from_integer(a))
    }

    /// `-q^a` with integer exponent.
    pub fn neg_q(a: i64) -> Self {
        Monomial::new(-1, QExp::from_integer(a))
    }

    pub fn one() -> Self {
        Monomial::new(1, QExp::zero())
    }

    pub fn minus_one() -> Self {
        Monomial::new(-1, QExp::zero())
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.qexp.is_zero() && self.zexp.is_zero()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            sign: self.sign * other.sign,
            qexp: self.qexp + other.qexp,
            zexp: self.zexp + other.zexp,
        }
    }

    /// `self^k` for integer k (sign follows parity of k).
    pub fn pow(&self, k: i64) -> Monomial {
        Monomial {
            sign: if k.rem_euclid(2) == 0 { 1 } else { self.sign },
            qexp: self.qexp * QExp::from_integer(k),
            zexp: self.zexp * QExp::from_integer(k),
        }
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Parse `1`, `-1`, `q`, `-q`, `q^3`, `-q^-2`, `q^1/2`, `-q^3/2`.
    pub fn parse(s: &str) -> Result<Monomial> {
        let s = s.trim();
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1i8, r.trim()),
            None => (1i8, s),
        };
        if rest == "1" {
            return Ok(Monomial::new(sign, QExp::zero()));
        }
        let rest = rest
            .strip_prefix('q')
            .ok_or_else(|| Error::InvalidParameters(format!("cannot parse monomial `{s}`")))?;
        if rest.is_empty() {
            return Ok(Monomial::new(sign, QExp::one()));
        }
        let exp = rest
            .strip_prefix('^')
            .ok_or_else(|| Error::InvalidParameters(format!("cannot parse monomial `{s}`")))?;
        let exp = exp.trim_matches(|c| c == '(' || c == ')');
        let qexp = parse_qexp(exp)
            .ok_or_else(|| Error::InvalidParameters(format!("bad exponent in `{s}`")))?;
        Ok(Monomial::new(sign, qexp))
    }
}

pub(crate) fn parse_qexp(s: &str) -> Option<QExp> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(QExp::new(n, d))
        }
        None => Some(QExp::from_integer(s.trim().parse().ok()?)),
    }
}

impl Neg for Monomial {
    type Output = Monomial;
    fn neg(self) -> Monomial {
        Monomial { sign: -self.sign, ..self }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.qexp.is_zero() && self.zexp.is_zero() {
            return write!(f, "1");
        }
        let mut first = true;
        if !self.qexp.is_zero() {
            first = false;
            if self.qexp.is_one() {
                write!(f, "q")?;
            } else if self.qexp.is_integer() && !self.qexp.is_negative() {
                write!(f, "q^{}", self.qexp.numer())?;
            } else {
                write!(f, "q^{}", self.qexp)?;
            }
        }
        if !self.zexp.is_zero() {
            if !first {
                write!(f, "*")?;
            }
            if self.zexp.is_one() {
                write!(f, "z")?;
            } else {
                write!(f, "z^{}", self.zexp)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["1", "-1", "q", "-q", "q^3", "-q^-2", "q^1/2", "-q^3/2", "q^-5/2"] {
            let m = Monomial::parse(s).unwrap();
            let back = Monomial::parse(&m.to_string()).unwrap();
            assert_eq!(m, back, "{s}");
        }
    }

    #[test]
    fn pow_sign_parity() {
        let m = Monomial::neg_q(3);
        assert_eq!(m.pow(2).sign, 1);
        assert_eq!(m.pow(-3).sign, -1);
        assert_eq!(m.pow(-3).qexp, QExp::from_integer(-9));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Monomial::parse("2q").is_err());
        assert!(Monomial::parse("q^a").is_err());
    }
}
