//! Canonical textual form for series, used by the cache and reports:
//!
//! `scale=D; valid_below=N; terms=[(e, num/den), ...]`
//!
//! with `e` the integer scaled exponent (a multiple of `1/D`), terms sorted
//! by `e`, and exact decimal-free rationals. An exact series writes
//! `valid_below=inf`.

use crate::error::{Error, Result};
use crate::series::ScaledSeries;
use crate::{Coef, QExp};
use num::BigInt;
use std::str::FromStr;

pub fn to_canonical_text(s: &ScaledSeries) -> String {
    let scale = s.scale();
    let valid = match s.valid_below() {
        Some(v) => (v * QExp::from_integer(scale)).numer().to_string(),
        None => "inf".to_string(),
    };
    let mut out = format!("scale={scale}; valid_below={valid}; terms=[");
    let mut first = true;
    for (e, c) in s.terms() {
        if !first {
            out.push_str(", ");
        }
        first = false;
        let se = e * QExp::from_integer(scale);
        debug_assert!(se.is_integer());
        out.push_str(&format!("({}, {}/{})", se.numer(), c.numer(), c.denom()));
    }
    out.push(']');
    out
}

pub fn from_canonical_text(text: &str) -> Result<ScaledSeries> {
    let bad = |m: &str| Error::InvalidParameters(format!("canonical series: {m}"));
    let mut scale: Option<i64> = None;
    let mut valid: Option<Option<i64>> = None;
    let mut terms: Vec<(i64, Coef)> = Vec::new();
    for part in split_top(text) {
        let part = part.trim();
        if let Some(v) = part.strip_prefix("scale=") {
            scale = Some(v.trim().parse().map_err(|_| bad("bad scale"))?);
        } else if let Some(v) = part.strip_prefix("valid_below=") {
            let v = v.trim();
            valid = Some(if v == "inf" {
                None
            } else {
                Some(v.parse().map_err(|_| bad("bad valid_below"))?)
            });
        } else if let Some(v) = part.strip_prefix("terms=") {
            let v = v.trim();
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| bad("terms not bracketed"))?;
            for item in split_parens(inner) {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let inner = item
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .ok_or_else(|| bad("term not parenthesized"))?;
                let (e, c) = inner.split_once(',').ok_or_else(|| bad("term needs a comma"))?;
                let e: i64 = e.trim().parse().map_err(|_| bad("bad exponent"))?;
                let (n, d) = c.trim().split_once('/').ok_or_else(|| bad("bad rational"))?;
                let n = BigInt::from_str(n.trim()).map_err(|_| bad("bad numerator"))?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad("bad denominator"))?;
                if d == BigInt::from(0) {
                    return Err(bad("zero denominator"));
                }
                terms.push((e, Coef::new(n, d)));
            }
        } else if !part.is_empty() {
            return Err(bad("unknown field"));
        }
    }
    let scale = scale.ok_or_else(|| bad("missing scale"))?;
    let valid = valid.ok_or_else(|| bad("missing valid_below"))?;
    if scale < 1 {
        return Err(bad("scale must be positive"));
    }
    let mut s = ScaledSeries::from_terms(
        terms.into_iter().map(|(e, c)| (QExp::new(e, scale), c)),
    );
    if let Some(v) = valid {
        s = s.truncate(QExp::new(v, scale));
    }
    Ok(s)
}

/// Split on `;` outside brackets.
fn split_top(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ';' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Split on `,` outside parentheses.
fn split_parens(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{coef, coef_ratio};
    use num::{One, Zero};

    #[test]
    fn roundtrip() {
        let s = ScaledSeries::from_terms([
            (QExp::new(-1, 8), coef(2)),
            (QExp::new(3, 4), coef_ratio(-5, 3)),
        ])
        .truncate(QExp::from_integer(7));
        let text = to_canonical_text(&s);
        let back = from_canonical_text(&text).unwrap();
        assert_eq!(s, back, "{text}");
    }

    #[test]
    fn exact_roundtrip() {
        let s = ScaledSeries::from_terms([(QExp::zero(), coef(1)), (QExp::one(), coef(-1))]);
        let text = to_canonical_text(&s);
        assert!(text.contains("valid_below=inf"));
        assert_eq!(from_canonical_text(&text).unwrap(), s);
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_canonical_text("scale=0; valid_below=1; terms=[]").is_err());
        assert!(from_canonical_text("nonsense").is_err());
    }
}
