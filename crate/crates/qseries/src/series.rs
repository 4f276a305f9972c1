//! Exact truncated Laurent series in `q` with rational exponents.
//!
//! A [`ScaledSeries`] stores exponents as integers that mean multiples of
//! `1/scale`, so `q^{1/8}` lives in a series with `scale` divisible by 8.
//! Coefficients are arbitrary-precision rationals.
//!
//! Truncation is tracked, never assumed: every value carries `valid_below`,
//! the bound below which its coefficients are exact, and every operation
//! computes the exact bound of its output.  Comparisons are only meaningful
//! below the common bound.

use crate::error::{Error, Result};
use crate::{Coef, QExp};
use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Truncation bound in scaled exponent units. `None` means the series is
/// exact (a Laurent polynomial known in full).
pub type Bound = Option<i64>;

fn bound_min(a: Bound, b: Bound) -> Bound {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn bound_add(a: Bound, shift: i64) -> Bound {
    a.map(|x| x + shift)
}

/// Sparse truncated Laurent series in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSeries {
    /// Exponents are multiples of `1/scale`; always >= 1.
    scale: i64,
    /// Scaled exponent -> nonzero coefficient; every key is `< valid_below`.
    coeffs: BTreeMap<i64, Coef>,
    /// Coefficients are exact for all scaled exponents `< valid_below`.
    valid_below: Bound,
}

impl ScaledSeries {
    // ----- constructors -------------------------------------------------

    /// The exact zero series.
    pub fn zero() -> Self {
        ScaledSeries { scale: 1, coeffs: BTreeMap::new(), valid_below: None }
    }

    /// Zero to the given order: nothing is known at or above `order`.
    pub fn zero_below(order: QExp) -> Self {
        let scale = *order.denom();
        ScaledSeries {
            scale,
            coeffs: BTreeMap::new(),
            valid_below: Some(*order.numer()),
        }
    }

    /// The exact constant 1.
    pub fn one() -> Self {
        Self::monomial(Coef::one(), QExp::zero())
    }

    /// The exact single term `c * q^e`.
    pub fn monomial(c: Coef, e: QExp) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(*e.numer(), c);
        }
        ScaledSeries { scale: *e.denom(), coeffs, valid_below: None }
    }

    /// Exact polynomial from (exponent, coefficient) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (QExp, Coef)>) -> Self {
        let mut acc = Self::zero();
        for (e, c) in terms {
            acc = acc.add(&Self::monomial(c, e));
        }
        acc
    }

    fn normalized(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        if let Some(v) = self.valid_below {
            self.coeffs.retain(|&k, _| k < v);
        }
        // reduce the scale when the whole support (and the bound) allows it
        let mut g = self.scale;
        for &k in self.coeffs.keys() {
            g = g.gcd(&k);
        }
        if let Some(v) = self.valid_below {
            g = g.gcd(&v);
        }
        if g > 1 {
            self.coeffs = self.coeffs.into_iter().map(|(k, c)| (k / g, c)).collect();
            self.valid_below = self.valid_below.map(|v| v / g);
            self.scale /= g;
        }
        self
    }

    // ----- accessors ----------------------------------------------------

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Truncation bound as a rational q-exponent; `None` when exact.
    pub fn valid_below(&self) -> Option<QExp> {
        self.valid_below.map(|v| QExp::new(v, self.scale))
    }

    /// Least exponent of the true support: the first stored term, or the
    /// truncation bound when the series is zero to order (`None` when the
    /// series is exactly zero).
    pub fn min_exp(&self) -> Option<QExp> {
        match self.coeffs.keys().next() {
            Some(&k) => Some(QExp::new(k, self.scale)),
            None => self.valid_below(),
        }
    }

    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e` (zero when absent; only meaningful below the bound).
    pub fn coeff(&self, e: QExp) -> Coef {
        let scaled = e * QExp::from_integer(self.scale);
        if !scaled.is_integer() {
            return Coef::zero();
        }
        self.coeffs.get(scaled.numer()).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (QExp, &Coef)> + '_ {
        let s = self.scale;
        self.coeffs.iter().map(move |(&k, c)| (QExp::new(k, s), c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// True when every stored coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.denom().is_one())
    }

    // ----- rescaling ----------------------------------------------------

    fn to_scale(&self, new_scale: i64) -> ScaledSeries {
        debug_assert!(new_scale % self.scale == 0);
        let f = new_scale / self.scale;
        if f == 1 {
            return self.clone();
        }
        ScaledSeries {
            scale: new_scale,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * f, c.clone())).collect(),
            valid_below: self.valid_below.map(|v| v * f),
        }
    }

    fn common_scale(&self, other: &ScaledSeries) -> (ScaledSeries, ScaledSeries) {
        let l = self.scale.lcm(&other.scale);
        (self.to_scale(l), other.to_scale(l))
    }

    // ----- ring operations ------------------------------------------------

    pub fn add(&self, other: &ScaledSeries) -> ScaledSeries {
        let (mut a, b) = self.common_scale(other);
        a.valid_below = bound_min(a.valid_below, b.valid_below);
        for (k, c) in b.coeffs {
            let entry = a.coeffs.entry(k).or_insert_with(Coef::zero);
            *entry += c;
        }
        a.normalized()
    }

    pub fn neg(&self) -> ScaledSeries {
        ScaledSeries {
            scale: self.scale,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
            valid_below: self.valid_below,
        }
    }

    pub fn sub(&self, other: &ScaledSeries) -> ScaledSeries {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &Coef) -> ScaledSeries {
        if c.is_zero() {
            // scalar zero kills the stored terms but not the unknown tail
            return ScaledSeries {
                scale: self.scale,
                coeffs: BTreeMap::new(),
                valid_below: self.valid_below,
            }
            .normalized();
        }
        ScaledSeries {
            scale: self.scale,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
            valid_below: self.valid_below,
        }
    }

    /// Multiply by the exact monomial `c * q^e` (an exponent shift).
    pub fn mul_monomial(&self, c: &Coef, e: QExp) -> ScaledSeries {
        let l = self.scale.lcm(e.denom());
        let a = self.to_scale(l);
        let shift = *e.numer() * (l / e.denom());
        ScaledSeries {
            scale: l,
            coeffs: a.coeffs.into_iter().map(|(k, v)| (k + shift, v * c)).collect(),
            valid_below: bound_add(a.valid_below, shift),
        }
        .normalized()
    }

    /// Exact convolution below the propagated bound:
    /// `valid = min(a.valid + b.min_exp, b.valid + a.min_exp)`.
    pub fn mul(&self, other: &ScaledSeries) -> ScaledSeries {
        if self.coeffs.is_empty() && self.valid_below.is_none() {
            return ScaledSeries::zero();
        }
        if other.coeffs.is_empty() && other.valid_below.is_none() {
            return ScaledSeries::zero();
        }
        let (a, b) = self.common_scale(other);
        let min_a = a.coeffs.keys().next().copied().or(a.valid_below);
        let min_b = b.coeffs.keys().next().copied().or(b.valid_below);
        let valid = bound_min(
            a.valid_below.and_then(|v| min_b.map(|m| v + m)),
            b.valid_below.and_then(|v| min_a.map(|m| v + m)),
        );
        let mut out: BTreeMap<i64, Coef> = BTreeMap::new();
        for (&ka, ca) in &a.coeffs {
            for (&kb, cb) in &b.coeffs {
                let k = ka + kb;
                if let Some(v) = valid {
                    if k >= v {
                        // b's keys only grow; the rest of this row is dead
                        break;
                    }
                }
                let entry = out.entry(k).or_insert_with(Coef::zero);
                *entry += ca * cb;
            }
        }
        ScaledSeries { scale: a.scale, coeffs: out, valid_below: valid }.normalized()
    }

    /// Drop all information at or above `below` (tightens the bound).
    pub fn truncate(&self, below: QExp) -> ScaledSeries {
        let l = self.scale.lcm(below.denom());
        let mut a = self.to_scale(l);
        let b = *below.numer() * (l / below.denom());
        a.valid_below = bound_min(a.valid_below, Some(b));
        a.normalized()
    }

    /// Multiplicative inverse. The leading coefficient must be nonzero; the
    /// result is valid below `valid - 2*min_exp` (Newton iteration doubles
    /// precision each step, so the cost is a few convolutions).
    pub fn invert(&self) -> Result<ScaledSeries> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let valid = self.valid_below.ok_or(Error::UnboundedOperand)?;
        let (&m, c0) = self.coeffs.first_key_value().ok_or(Error::ZeroLeadingCoefficient)?;
        // u = q^{-m} * self / c0 has constant term 1
        let u = self
            .mul_monomial(&(Coef::one() / c0), QExp::new(-m, self.scale))
            .to_scale(self.scale);
        let target = valid - m; // relative precision of 1/u
        if target <= 0 {
            return Ok(ScaledSeries::zero_below(QExp::new(valid - 2 * m, self.scale)));
        }
        let mut inv = ScaledSeries {
            scale: self.scale,
            coeffs: BTreeMap::from([(0, Coef::one())]),
            valid_below: Some(1),
        };
        let mut prec: i64 = 1;
        while prec < target {
            prec = (prec * 2).min(target);
            let clip = QExp::new(prec, self.scale);
            // x <- x (2 - u x), computed at the new precision
            inv.valid_below = Some(prec);
            let ux = u.truncate(clip).mul(&inv);
            let two_minus = ScaledSeries::monomial(Coef::from(BigInt::from(2)), QExp::zero())
                .sub(&ux);
            inv = inv.mul(&two_minus).truncate(clip);
        }
        let inv = inv.mul_monomial(&(Coef::one() / c0), QExp::new(-m, self.scale));
        debug_assert_eq!(inv.valid_below(), Some(QExp::new(valid - 2 * m, self.scale)));
        Ok(inv)
    }

    /// Integer power, negative allowed (uses [`ScaledSeries::invert`]).
    pub fn pow(&self, n: i64) -> Result<ScaledSeries> {
        if n == 0 {
            return Ok(ScaledSeries::one());
        }
        let (mut base, mut e) = if n < 0 {
            (self.invert()?, (-n) as u64)
        } else {
            (self.clone(), n as u64)
        };
        let mut acc: Option<ScaledSeries> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(r) => r.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.unwrap())
    }

    // ----- substitutions --------------------------------------------------

    /// `q -> q^k` for positive rational `k`; the bound rescales with it.
    pub fn substitute_power(&self, k: QExp) -> ScaledSeries {
        assert!(k.is_positive(), "substitution power must be positive");
        // exponent e/scale maps to e*numer(k) / (scale*denom(k))
        let s = self.scale * k.denom();
        let f = |e: i64| -> i64 { e * k.numer() };
        ScaledSeries {
            scale: s,
            coeffs: self.coeffs.iter().map(|(&e, c)| (f(e), c.clone())).collect(),
            valid_below: self.valid_below.map(f),
        }
        .normalized()
    }

    /// `q -> -q`: multiplies the coefficient of `q^n` by `(-1)^n`.
    /// Requires integer support.
    pub fn sign_twist(&self) -> Result<ScaledSeries> {
        let view = self.integral_view()?;
        let coeffs = view
            .coeffs
            .iter()
            .map(|(&k, c)| (k, if k.rem_euclid(2) == 0 { c.clone() } else { -c.clone() }))
            .collect();
        Ok(ScaledSeries { scale: 1, coeffs, valid_below: view.valid_below }.normalized())
    }

    /// Keep exactly the terms with exponent ≡ `residue` (mod `modulus`).
    /// Requires integer support.
    pub fn dissect(&self, modulus: u32, residue: i64) -> Result<ScaledSeries> {
        assert!(modulus >= 1);
        let view = self.integral_view()?;
        let m = modulus as i64;
        let r = residue.rem_euclid(m);
        let coeffs = view
            .coeffs
            .iter()
            .filter(|(&k, _)| k.rem_euclid(m) == r)
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Ok(ScaledSeries { scale: 1, coeffs, valid_below: view.valid_below }.normalized())
    }

    /// Reinterpret on the integer grid; errors out if any stored exponent is
    /// genuinely fractional. A fractional bound is floored (sound).
    fn integral_view(&self) -> Result<ScaledSeries> {
        if self.scale == 1 {
            return Ok(self.clone());
        }
        let s = self.scale;
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            if k % s != 0 {
                return Err(Error::FractionalTwist);
            }
            coeffs.insert(k.div_euclid(s), c.clone());
        }
        Ok(ScaledSeries {
            scale: 1,
            coeffs,
            valid_below: self.valid_below.map(|v| v.div_euclid(s)),
        })
    }
}

impl fmt::Display for ScaledSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if e.is_one() {
                write!(f, "{c}*q")?;
            } else {
                write!(f, "{c}*q^{e}")?;
            }
        }
        match self.valid_below() {
            Some(v) => write!(f, " + O(q^{v})"),
            None => Ok(()),
        }
    }
}

/// `C(x, 2) = x(x-1)/2` for integers, as an exponent.
pub fn binom2(n: i64) -> QExp {
    QExp::new(n * (n - 1), 2)
}

/// `x(x-1)/2` for rational `x`.
pub fn binom2_q(x: QExp) -> QExp {
    x * (x - QExp::one()) / QExp::from_integer(2)
}

/// Rational coefficient from an integer.
pub fn coef(n: i64) -> Coef {
    Coef::from(BigInt::from(n))
}

/// Rational coefficient `n/d`.
pub fn coef_ratio(n: i64, d: i64) -> Coef {
    Coef::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QExp;

    fn q() -> ScaledSeries {
        ScaledSeries::monomial(Coef::one(), QExp::one())
    }

    #[test]
    fn add_cancellation() {
        // (1 - q) + q = 1
        let a = ScaledSeries::one().sub(&q());
        let b = q();
        let s = a.add(&b);
        assert_eq!(s, ScaledSeries::one());
    }

    #[test]
    fn add_identity() {
        let a = ScaledSeries::from_terms([(QExp::new(1, 2), coef(3))]);
        assert_eq!(a.add(&ScaledSeries::zero()), a);
    }

    #[test]
    fn add_rescales() {
        // q^{1/2} + q has scale 2 and both terms
        let a = ScaledSeries::monomial(Coef::one(), QExp::new(1, 2));
        let s = a.add(&q());
        assert_eq!(s.scale(), 2);
        assert_eq!(s.coeff(QExp::new(1, 2)), Coef::one());
        assert_eq!(s.coeff(QExp::one()), Coef::one());
    }

    #[test]
    fn mul_difference_of_squares() {
        let p = ScaledSeries::one().add(&q());
        let m = ScaledSeries::one().sub(&q());
        let s = p.mul(&m);
        assert_eq!(s.coeff(QExp::zero()), Coef::one());
        assert_eq!(s.coeff(QExp::one()), Coef::zero());
        assert_eq!(s.coeff(QExp::from_integer(2)), -Coef::one());
    }

    #[test]
    fn mul_identity() {
        let a = ScaledSeries::from_terms([(QExp::new(-3, 2), coef(2)), (QExp::one(), coef(5))]);
        assert_eq!(a.mul(&ScaledSeries::one()), a);
    }

    #[test]
    fn mul_valid_bound_rule() {
        // (sum q^n truncated below q^5) * (1 - q) = 1 + O(q^5)
        let geom = ScaledSeries::from_terms((0..5).map(|n| (QExp::from_integer(n), Coef::one())))
            .truncate(QExp::from_integer(5));
        let s = geom.mul(&ScaledSeries::one().sub(&q()));
        assert_eq!(s.valid_below(), Some(QExp::from_integer(5)));
        assert_eq!(s.coeff(QExp::zero()), Coef::one());
        for n in 1..5 {
            assert_eq!(s.coeff(QExp::from_integer(n)), Coef::zero(), "q^{n}");
        }
    }

    #[test]
    fn invert_geometric() {
        let s = ScaledSeries::one().sub(&q()).truncate(QExp::from_integer(10));
        let inv = s.invert().unwrap();
        for n in 0..10 {
            assert_eq!(inv.coeff(QExp::from_integer(n)), Coef::one());
        }
        assert_eq!(inv.valid_below(), Some(QExp::from_integer(10)));
    }

    #[test]
    fn invert_monomial_factor() {
        // invert(q * (1 + q)) = q^{-1} * (1 - q + q^2 - ...)
        let s = q().mul(&ScaledSeries::one().add(&q())).truncate(QExp::from_integer(8));
        let inv = s.invert().unwrap();
        assert_eq!(inv.min_exp(), Some(QExp::from_integer(-1)));
        assert_eq!(inv.coeff(QExp::from_integer(-1)), Coef::one());
        assert_eq!(inv.coeff(QExp::zero()), -Coef::one());
        // valid shrinks by 2*min_exp
        assert_eq!(inv.valid_below(), Some(QExp::from_integer(6)));
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(QExp::zero()), Coef::one());
        assert!(prod.terms().filter(|(e, _)| !e.is_zero()).count() == 0);
    }

    #[test]
    fn invert_zero_errors() {
        let z = ScaledSeries::zero_below(QExp::from_integer(4));
        assert_eq!(z.invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn substitute_power_basics() {
        let a = ScaledSeries::one().add(&q());
        let s = a.substitute_power(QExp::from_integer(2));
        assert_eq!(s.coeff(QExp::from_integer(2)), Coef::one());
        assert_eq!(a.substitute_power(QExp::one()), a);
        let half = ScaledSeries::monomial(Coef::one(), QExp::new(1, 2));
        assert_eq!(half.substitute_power(QExp::from_integer(2)), q());
    }

    #[test]
    fn sign_twist_involution() {
        let a = ScaledSeries::from_terms([
            (QExp::zero(), coef(1)),
            (QExp::one(), coef(1)),
            (QExp::from_integer(2), coef(1)),
        ]);
        let t = a.sign_twist().unwrap();
        assert_eq!(t.coeff(QExp::one()), -Coef::one());
        assert_eq!(t.sign_twist().unwrap(), a);
    }

    #[test]
    fn sign_twist_rejects_fractional() {
        let a = ScaledSeries::monomial(Coef::one(), QExp::new(1, 2));
        assert_eq!(a.sign_twist(), Err(Error::FractionalTwist));
    }

    #[test]
    fn dissect_examples() {
        let a = ScaledSeries::from_terms(
            (0..4).map(|n| (QExp::from_integer(n), Coef::one())),
        );
        let d0 = a.dissect(3, 0).unwrap();
        assert_eq!(d0.coeff(QExp::zero()), Coef::one());
        assert_eq!(d0.coeff(QExp::from_integer(3)), Coef::one());
        assert_eq!(d0.num_terms(), 2);
        assert_eq!(a.dissect(1, 0).unwrap(), a);
    }

    #[test]
    fn zero_series_conventions() {
        let z = ScaledSeries::zero_below(QExp::from_integer(3));
        assert_eq!(z.min_exp(), Some(QExp::from_integer(3)));
        assert!(z.is_zero_to_order());
        let s = z.add(&ScaledSeries::one());
        assert_eq!(s.coeff(QExp::zero()), Coef::one());
        assert_eq!(s.valid_below(), Some(QExp::from_integer(3)));
    }
}
