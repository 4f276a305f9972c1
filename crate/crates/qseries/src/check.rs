//! Coefficient-wise comparison of truncated series, and the retry driver
//! that pads internal truncation until a requested order is certified.

use crate::error::{Error, Result};
use crate::series::ScaledSeries;
use crate::{Coef, QExp};
use serde::{Deserialize, Serialize};

/// First disagreeing coefficient of a failed comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Exponent as an exact rational string, e.g. `"-1/8"`.
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    /// Sides agree on every exponent below `valid_to`.
    Pass { valid_to: QExp },
    Fail(Mismatch),
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass { .. })
    }
}

/// Compare two series on their common valid range.
pub fn compare(lhs: &ScaledSeries, rhs: &ScaledSeries) -> CheckOutcome {
    let valid = match (lhs.valid_below(), rhs.valid_below()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    };
    let diff = lhs.sub(rhs);
    let bad = diff.terms().next().map(|(e, _)| e);
    match bad {
        None => CheckOutcome::Pass {
            valid_to: valid.unwrap_or(QExp::from_integer(i64::MAX / 8)),
        },
        Some(e) => CheckOutcome::Fail(Mismatch {
            exponent: e.to_string(),
            lhs: fmt_coef(&lhs.coeff(e)),
            rhs: fmt_coef(&rhs.coeff(e)),
        }),
    }
}

pub fn fmt_coef(c: &Coef) -> String {
    if num::One::is_one(c.denom()) {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Run `build` at increasing internal truncation until the comparison is
/// certified through `order` (or fails). Fractional prefactors and negative
/// leading exponents eat validity; two bumps cover every case in practice
/// and a third is allowed before giving up.
pub fn compare_to_order<F>(order: QExp, mut build: F) -> Result<CheckOutcome>
where
    F: FnMut(QExp) -> Result<(ScaledSeries, ScaledSeries)>,
{
    let mut internal = order;
    for _ in 0..3 {
        let (lhs, rhs) = build(internal)?;
        match compare(&lhs, &rhs) {
            CheckOutcome::Fail(m) => {
                // only report mismatches inside the requested range; a
                // mismatch beyond it means the sides were computed past
                // their shared validity, which compare() prevents
                return Ok(CheckOutcome::Fail(m));
            }
            CheckOutcome::Pass { valid_to } => {
                if valid_to >= order {
                    return Ok(CheckOutcome::Pass { valid_to });
                }
                let deficit = order - valid_to;
                internal = internal + deficit + QExp::from_integer(1);
            }
        }
    }
    Err(Error::InvalidParameters(format!(
        "could not certify comparison through order {order} after padding"
    )))
}

/// Like [`compare_to_order`] but for a list of (lhs, rhs) pairs that must all
/// agree (used when one verification produces several series equalities).
pub fn compare_many_to_order<F>(order: QExp, mut build: F) -> Result<CheckOutcome>
where
    F: FnMut(QExp) -> Result<Vec<(ScaledSeries, ScaledSeries)>>,
{
    let mut internal = order;
    for _ in 0..3 {
        let pairs = build(internal)?;
        let mut worst: Option<QExp> = None;
        let mut failed = None;
        for (lhs, rhs) in &pairs {
            match compare(lhs, rhs) {
                CheckOutcome::Fail(m) => {
                    failed = Some(m);
                    break;
                }
                CheckOutcome::Pass { valid_to } => {
                    worst = Some(worst.map_or(valid_to, |w: QExp| w.min(valid_to)));
                }
            }
        }
        if let Some(m) = failed {
            return Ok(CheckOutcome::Fail(m));
        }
        let valid_to = worst.unwrap_or(QExp::from_integer(i64::MAX / 8));
        if valid_to >= order {
            return Ok(CheckOutcome::Pass { valid_to });
        }
        internal = internal + (order - valid_to) + QExp::from_integer(1);
    }
    Err(Error::InvalidParameters(format!(
        "could not certify comparison through order {order} after padding"
    )))
}
