//! Laurent series in `z` over [`ScaledSeries`] coefficients on a finite
//! z-exponent window.
//!
//! The z-scale is fixed to 2 so half-integer powers `z^{m/2}` are carried
//! exactly. A window is not a support claim: the true object usually has
//! nonzero coefficients at every z-exponent it supports. What makes windowed
//! arithmetic sound is the *tail bound*: a certified lower bound on the
//! q-valuation of the out-of-window coefficients, carried on the support
//! lattice of the true object. Products certify a z-subwindow by checking
//! that every omitted term would first contribute at or above the target
//! q-order (see [`BiSeries::bi_mul`]).

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::series::ScaledSeries;
use crate::{Coef, QExp};
use num::{One, Zero};
use std::collections::BTreeMap;

pub const ZSCALE: i64 = 2;

/// A practically-infinite q-order used for "no contribution".
fn inf_qexp() -> QExp {
    QExp::from_integer(i64::MAX / 8)
}

/// One tail piece: a min-of-quadratics valuation bound supported on the
/// scaled-key lattice `key ≡ offset (mod step)`. Quadratics are in the true
/// z-exponent `beta = key / ZSCALE`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailPiece {
    pub quads: Vec<[QExp; 3]>,
    pub step: i64,
    pub offset: i64,
}

impl TailPiece {
    fn on_lattice(&self, key: i64) -> bool {
        (key - self.offset).rem_euclid(self.step) == 0
    }

    fn eval_key(&self, key: i64) -> QExp {
        if !self.on_lattice(key) {
            return inf_qexp();
        }
        let beta = QExp::new(key, ZSCALE);
        self.quads
            .iter()
            .map(|[a2, a1, a0]| *a2 * beta * beta + *a1 * beta + *a0)
            .min()
            .unwrap_or_else(inf_qexp)
    }
}

/// Lower bound on the q-valuation of z-coefficients outside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailBound {
    /// Nothing is known outside the window; products cannot be certified.
    Unknown,
    /// The window is the exact z-support: outside coefficients vanish.
    ZeroOutside,
    /// Union of lattice-supported pieces; the bound at a key is the minimum
    /// over the pieces containing it (and vanishes off every lattice).
    Pieces(Vec<TailPiece>),
}

impl TailBound {
    /// One quadratic on the full half-integer grid.
    pub fn quad(a2: QExp, a1: QExp, a0: QExp) -> TailBound {
        TailBound::Pieces(vec![TailPiece { quads: vec![[a2, a1, a0]], step: 1, offset: 0 }])
    }

    /// One quadratic supported on `key ≡ offset (mod step)` in scaled keys.
    pub fn quad_on(a2: QExp, a1: QExp, a0: QExp, step: i64, offset: i64) -> TailBound {
        assert!(step >= 1);
        TailBound::Pieces(vec![TailPiece {
            quads: vec![[a2, a1, a0]],
            step,
            offset: offset.rem_euclid(step),
        }])
    }

    /// `val(beta) >= slope*|beta| + off` on a scaled-key lattice.
    pub fn abs_linear_on(slope: QExp, off: QExp, step: i64, offset: i64) -> TailBound {
        assert!(step >= 1);
        TailBound::Pieces(vec![TailPiece {
            quads: vec![[QExp::zero(), slope, off], [QExp::zero(), -slope, off]],
            step,
            offset: offset.rem_euclid(step),
        }])
    }

    /// Bound for a sum: the union of pieces (pointwise minimum).
    fn merge(&self, other: &TailBound) -> TailBound {
        match (self, other) {
            (TailBound::Unknown, _) | (_, TailBound::Unknown) => TailBound::Unknown,
            (TailBound::ZeroOutside, x) => x.clone(),
            (x, TailBound::ZeroOutside) => x.clone(),
            (TailBound::Pieces(a), TailBound::Pieces(b)) => {
                let mut v = a.clone();
                v.extend(b.iter().cloned());
                TailBound::Pieces(v)
            }
        }
    }

    fn shift_val(&self, dv: QExp) -> TailBound {
        match self {
            TailBound::Pieces(ps) => TailBound::Pieces(
                ps.iter()
                    .map(|p| TailPiece {
                        quads: p.quads.iter().map(|[a2, a1, a0]| [*a2, *a1, *a0 + dv]).collect(),
                        ..*p
                    })
                    .collect(),
            ),
            other => other.clone(),
        }
    }

    /// Bound for `z^{dz} * F` (dz in scaled keys).
    fn shift_z(&self, dz_key: i64) -> TailBound {
        let dz = QExp::new(dz_key, ZSCALE);
        match self {
            TailBound::Pieces(ps) => TailBound::Pieces(
                ps.iter()
                    .map(|p| TailPiece {
                        quads: p
                            .quads
                            .iter()
                            .map(|[a2, a1, a0]| {
                                [
                                    *a2,
                                    *a1 - *a2 * dz * QExp::from_integer(2),
                                    *a2 * dz * dz - *a1 * dz + *a0,
                                ]
                            })
                            .collect(),
                        step: p.step,
                        offset: (p.offset + dz_key).rem_euclid(p.step),
                    })
                    .collect(),
            ),
            other => other.clone(),
        }
    }

    fn eval_key(&self, key: i64) -> Option<QExp> {
        match self {
            TailBound::Unknown => None,
            TailBound::ZeroOutside => Some(inf_qexp()),
            TailBound::Pieces(ps) => Some(
                ps.iter().map(|p| p.eval_key(key)).min().unwrap_or_else(inf_qexp),
            ),
        }
    }

    /// Global minimum over all keys (`None` when unbounded below or unknown).
    fn global_min(&self) -> Option<QExp> {
        match self {
            TailBound::Unknown => None,
            TailBound::ZeroOutside => Some(inf_qexp()),
            TailBound::Pieces(ps) => {
                let mut best = inf_qexp();
                for p in ps {
                    for q in &p.quads {
                        best = best.min(quad_global_min(q)?);
                    }
                }
                Some(best)
            }
        }
    }
}

/// Bivariate Laurent series: a finite z-window of exact q-series plus a tail
/// bound for the out-of-window coefficients.
#[derive(Debug, Clone)]
pub struct BiSeries {
    /// Scaled z-window bounds, inclusive; keys are multiples of `1/ZSCALE`.
    zmin: i64,
    zmax: i64,
    coeffs: BTreeMap<i64, ScaledSeries>,
    /// Shared q-truncation: every stored coefficient is exact below this.
    valid_below: QExp,
    tail: TailBound,
}

impl BiSeries {
    /// Build from (scaled z-exponent, series) pairs; coefficients are clipped
    /// to the shared validity and summed when keys repeat.
    pub fn from_parts(
        zmin: i64,
        zmax: i64,
        valid_below: QExp,
        tail: TailBound,
        parts: impl IntoIterator<Item = (i64, ScaledSeries)>,
    ) -> Self {
        let mut coeffs: BTreeMap<i64, ScaledSeries> = BTreeMap::new();
        for (k, s) in parts {
            assert!(zmin <= k && k <= zmax, "z-exponent outside window");
            let entry = coeffs.entry(k).or_insert_with(ScaledSeries::zero);
            *entry = entry.add(&s);
        }
        let coeffs = coeffs
            .into_iter()
            .map(|(k, s)| (k, s.truncate(valid_below)))
            .filter(|(_, s)| !s.is_zero_to_order())
            .collect();
        BiSeries { zmin, zmax, coeffs, valid_below, tail }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.zmin, self.zmax)
    }

    pub fn valid_below(&self) -> QExp {
        self.valid_below
    }

    pub fn tail(&self) -> &TailBound {
        &self.tail
    }

    /// Coefficient of `z^{k/ZSCALE}`; `None` outside the window, the zero
    /// series when in-window but absent.
    pub fn zcoeff(&self, k: i64) -> Option<ScaledSeries> {
        if k < self.zmin || k > self.zmax {
            return None;
        }
        Some(
            self.coeffs
                .get(&k)
                .cloned()
                .unwrap_or_else(|| ScaledSeries::zero_below(self.valid_below)),
        )
    }

    pub fn zcoeffs(&self) -> impl Iterator<Item = (i64, &ScaledSeries)> + '_ {
        self.coeffs.iter().map(|(&k, s)| (k, s))
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let zmin = self.zmin.max(other.zmin);
        let zmax = self.zmax.min(other.zmax);
        let valid = self.valid_below.min(other.valid_below);
        let tail = self.tail.merge(&other.tail);
        let mut out = BTreeMap::new();
        for k in zmin..=zmax {
            let s = match (self.coeffs.get(&k), other.coeffs.get(&k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => continue,
            };
            let s = s.truncate(valid);
            if !s.is_zero_to_order() {
                out.insert(k, s);
            }
        }
        BiSeries { zmin, zmax, coeffs: out, valid_below: valid, tail }
    }

    pub fn neg(&self) -> BiSeries {
        BiSeries {
            zmin: self.zmin,
            zmax: self.zmax,
            coeffs: self.coeffs.iter().map(|(&k, s)| (k, s.neg())).collect(),
            valid_below: self.valid_below,
            tail: self.tail.clone(),
        }
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.neg())
    }

    /// Multiply by a univariate q-series (z-degree zero).
    pub fn mul_scalar_series(&self, s: &ScaledSeries) -> BiSeries {
        let s_min = s.min_exp().unwrap_or(QExp::zero());
        let mut valid = self.valid_below + s_min;
        if let (Some(sv), Some(gm)) = (s.valid_below(), self.global_min_val()) {
            valid = valid.min(sv + gm);
        }
        let coeffs: BTreeMap<i64, ScaledSeries> = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k, c.mul(s).truncate(valid)))
            .filter(|(_, c)| !c.is_zero_to_order())
            .collect();
        BiSeries {
            zmin: self.zmin,
            zmax: self.zmax,
            coeffs,
            valid_below: valid,
            tail: self.tail.shift_val(s_min),
        }
    }

    /// Multiply by an exact monomial `sign * q^a * z^b`.
    pub fn mul_monomial(&self, m: &Monomial) -> BiSeries {
        let dz = (m.zexp * QExp::from_integer(ZSCALE)).to_integer();
        let c = if m.sign < 0 { -Coef::one() } else { Coef::one() };
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, s)| (k + dz, s.mul_monomial(&c, m.qexp)))
            .collect();
        BiSeries {
            zmin: self.zmin + dz,
            zmax: self.zmax + dz,
            coeffs,
            valid_below: self.valid_below + m.qexp,
            tail: self.tail.shift_z(dz).shift_val(m.qexp),
        }
    }

    /// Least q-valuation of any coefficient, stored or tail.
    fn global_min_val(&self) -> Option<QExp> {
        let mut best = self.tail.global_min()?;
        for s in self.coeffs.values() {
            if let Some(m) = s.min_exp() {
                best = best.min(m);
            }
        }
        Some(best)
    }

    /// Certified windowed product. A z-coefficient of the result is kept only
    /// if every contribution the finite windows cannot see (an out-of-window
    /// factor on either side) is provably `O(q^order)`, using the operands'
    /// tail bounds on their support lattices. Errors with
    /// [`Error::EmptySafeWindow`] when no coefficient survives.
    ///
    /// The result carries `TailBound::Unknown`: a certified product is a
    /// terminal value meant for comparison, not further windowed products.
    pub fn bi_mul(&self, other: &BiSeries, order: QExp) -> Result<BiSeries> {
        let (f, g) = (self, other);
        let mut kept: BTreeMap<i64, ScaledSeries> = BTreeMap::new();
        let mut safe: Vec<i64> = Vec::new();
        for gamma in (f.zmin + g.zmin)..=(f.zmax + g.zmax) {
            let Some(t) = certify_threshold(f, g, gamma) else { continue };
            if t < order {
                continue;
            }
            // in-window pairwise accumulation; absent coefficients are zero
            // to order, and their truncation error still counts
            let mut valid = order;
            let mut acc = ScaledSeries::zero_below(order);
            for alpha in f.zmin..=f.zmax {
                let beta = gamma - alpha;
                if beta < g.zmin || beta > g.zmax {
                    continue;
                }
                let fa = f.coeffs.get(&alpha);
                let gb = g.coeffs.get(&beta);
                let fa_min = fa.and_then(|s| s.min_exp()).unwrap_or(f.valid_below);
                let gb_min = gb.and_then(|s| s.min_exp()).unwrap_or(g.valid_below);
                valid = valid.min(g.valid_below + fa_min).min(f.valid_below + gb_min);
                if let (Some(fa), Some(gb)) = (fa, gb) {
                    acc = acc.add(&fa.mul(gb));
                }
            }
            if valid < order {
                continue;
            }
            safe.push(gamma);
            let acc = acc.truncate(order);
            if !acc.is_zero_to_order() {
                kept.insert(gamma, acc);
            }
        }
        if safe.is_empty() {
            return Err(Error::EmptySafeWindow);
        }
        let contiguous = safe.windows(2).all(|w| w[1] == w[0] + 1);
        let (lo, hi) = if contiguous {
            (safe[0], *safe.last().unwrap())
        } else {
            largest_run(&safe)
        };
        kept.retain(|&k, _| lo <= k && k <= hi);
        Ok(BiSeries { zmin: lo, zmax: hi, coeffs: kept, valid_below: order, tail: TailBound::Unknown })
    }

    /// Substitute `z := v` (a pure q-monomial). Sums the monomial-weighted
    /// z-coefficients; the validity accounts for both the window shift and
    /// the certified tail. A negative-sign `v` requires integer z-support.
    pub fn specialize_z(&self, v: &Monomial) -> Result<ScaledSeries> {
        assert!(v.zexp.is_zero(), "substitution value must be a q-monomial");
        let mut valid = self.valid_below + window_min_shift(self.zmin, self.zmax, v.qexp);
        // out-of-window coefficients contribute q^{val(beta) + beta*v.qexp}
        match &self.tail {
            TailBound::Unknown => {
                return Err(Error::NonGenericParameters(
                    "cannot specialize a windowed series without a tail bound".into(),
                ))
            }
            TailBound::ZeroOutside => {}
            TailBound::Pieces(ps) => {
                for p in ps {
                    for [a2, a1, a0] in &p.quads {
                        let shifted = [*a2, *a1 + v.qexp, *a0];
                        let m = quad_global_min(&shifted).ok_or_else(|| {
                            Error::NonGenericParameters(
                                "tail bound too weak for z-specialization".into(),
                            )
                        })?;
                        valid = valid.min(m);
                    }
                }
            }
        }
        let mut out = ScaledSeries::zero_below(valid);
        for (&k, s) in &self.coeffs {
            let beta = QExp::new(k, ZSCALE);
            let sign = if v.sign < 0 {
                if !beta.is_integer() {
                    return Err(Error::NonGenericParameters(
                        "negative substitution value on half-integer z-power".into(),
                    ));
                }
                if beta.numer().rem_euclid(2) == 1 {
                    -Coef::one()
                } else {
                    Coef::one()
                }
            } else {
                Coef::one()
            };
            out = out.add(&s.mul_monomial(&sign, v.qexp * beta));
        }
        Ok(out.truncate(valid))
    }

    /// Shrink the z-window, dropping outside coefficients. Sound for lattice
    /// builders whose tail bound holds at every key, which is how all
    /// builders in this crate construct their windows.
    pub fn restrict_window(&self, zmin: i64, zmax: i64) -> BiSeries {
        assert!(self.zmin <= zmin && zmax <= self.zmax, "can only shrink a window");
        BiSeries {
            zmin,
            zmax,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| zmin <= k && k <= zmax)
                .map(|(&k, s)| (k, s.clone()))
                .collect(),
            valid_below: self.valid_below,
            tail: self.tail.clone(),
        }
    }
}

fn largest_run(sorted: &[i64]) -> (i64, i64) {
    let mut best = (sorted[0], sorted[0]);
    let mut cur = (sorted[0], sorted[0]);
    for &x in &sorted[1..] {
        if x == cur.1 + 1 {
            cur.1 = x;
        } else {
            cur = (x, x);
        }
        if cur.1 - cur.0 > best.1 - best.0 {
            best = cur;
        }
    }
    best
}

fn window_min_shift(zmin: i64, zmax: i64, qexp: QExp) -> QExp {
    let lo = QExp::new(zmin, ZSCALE) * qexp;
    let hi = QExp::new(zmax, ZSCALE) * qexp;
    lo.min(hi).min(QExp::zero())
}

/// Largest q-order T such that all unseen contributions to the product
/// coefficient at `gamma` are provably >= T. `None` when no bound exists.
fn certify_threshold(f: &BiSeries, g: &BiSeries, gamma: i64) -> Option<QExp> {
    let mut t = inf_qexp();
    // (1) alpha outside f's window, any beta
    t = t.min(outside_pair_min(f, g, gamma)?);
    // (2) alpha inside f's window, beta outside g's window
    for alpha in f.zmin..=f.zmax {
        let beta = gamma - alpha;
        if beta >= g.zmin && beta <= g.zmax {
            continue;
        }
        let va = f
            .coeffs
            .get(&alpha)
            .and_then(|s| s.min_exp())
            .unwrap_or(f.valid_below);
        let vb = g.tail.eval_key(beta)?;
        t = t.min(va + vb);
    }
    Some(t)
}

/// Min over alpha outside f's window of `tail_f(alpha) + valbound_g(gamma-alpha)`.
fn outside_pair_min(f: &BiSeries, g: &BiSeries, gamma: i64) -> Option<QExp> {
    let fps: &[TailPiece] = match &f.tail {
        TailBound::Unknown => return None,
        TailBound::ZeroOutside => return Some(inf_qexp()),
        TailBound::Pieces(ps) => ps,
    };
    let mut best = inf_qexp();

    // beta in g's window: finitely many alpha = gamma - beta to check
    for beta in g.zmin..=g.zmax {
        let alpha = gamma - beta;
        if alpha >= f.zmin && alpha <= f.zmax {
            continue;
        }
        let vf = f.tail.eval_key(alpha)?;
        let vg = g
            .coeffs
            .get(&beta)
            .and_then(|s| s.min_exp())
            .unwrap_or(g.valid_below);
        best = best.min(vf + vg);
    }

    // beta in g's tail: minimize piece_f(alpha) + piece_g(gamma - alpha) over
    // the rays alpha < f.zmin and alpha > f.zmax, on the combined lattice
    // (scanning a superset of the true domain only lowers the bound)
    let gps: &[TailPiece] = match &g.tail {
        TailBound::Unknown => return None,
        TailBound::ZeroOutside => &[],
        TailBound::Pieces(ps) => ps,
    };
    for fp in fps {
        for gp in gps {
            // alpha ≡ fp.offset (mod fp.step) and gamma - alpha ≡ gp.offset (mod gp.step)
            let Some((step, offset)) = crt_lattice(fp.step, fp.offset, gp.step, gamma - gp.offset)
            else {
                continue; // no common lattice point: no contribution
            };
            for fq in &fp.quads {
                for gq in &gp.quads {
                    // h(k) as a quadratic in the scaled key k of alpha
                    let gqx = QExp::new(gamma, ZSCALE);
                    let half = QExp::new(1, ZSCALE);
                    // quad in beta composed with beta = k/ZSCALE
                    let a2 = (fq[0] + gq[0]) * half * half;
                    let a1 = (fq[1] - QExp::from_integer(2) * gq[0] * gqx - gq[1]) * half;
                    let a0 = fq[2] + gq[0] * gqx * gqx + gq[1] * gqx + gq[2];
                    let m = lattice_rays_min(
                        [a2, a1, a0],
                        f.zmin - 1,
                        f.zmax + 1,
                        step,
                        offset,
                    )?;
                    best = best.min(m);
                }
            }
        }
    }
    Some(best)
}

/// Solve `k ≡ a (mod s)`, `k ≡ b (mod t)`; returns `(lcm, smallest solution)`.
fn crt_lattice(s: i64, a: i64, t: i64, b: i64) -> Option<(i64, i64)> {
    use num::integer::Integer;
    let g = s.gcd(&t);
    if (b - a).rem_euclid(g) != 0 {
        return None;
    }
    let l = s / g * t;
    // walk one residue class: k = a + s*i, find i with k ≡ b (mod t)
    let mut k = a.rem_euclid(s);
    for _ in 0..t {
        if (k - b).rem_euclid(t) == 0 {
            return Some((l, k.rem_euclid(l)));
        }
        k += s;
    }
    None
}

/// Minimum of `a2 k^2 + a1 k + a0` over lattice points `k ≡ offset (mod step)`
/// in the rays `k <= lo` and `k >= hi`. Exact for upward parabolas: the
/// convex minimum sits at a lattice point adjacent to the (clamped) vertex.
fn lattice_rays_min(q: [QExp; 3], lo: i64, hi: i64, step: i64, offset: i64) -> Option<QExp> {
    let [a2, a1, a0] = q;
    let h = |k: i64| -> QExp {
        let x = QExp::from_integer(k);
        a2 * x * x + a1 * x + a0
    };
    if a2.is_zero() {
        return if a1.is_zero() { Some(a0) } else { None };
    }
    if a2 < QExp::zero() {
        return None;
    }
    let snap_le = |x: i64| -> i64 { x - (x - offset).rem_euclid(step) };
    let snap_ge = |x: i64| -> i64 {
        let d = (x - offset).rem_euclid(step);
        if d == 0 { x } else { x + (step - d) }
    };
    let vertex = -a1 / (QExp::from_integer(2) * a2);
    let mut best: Option<QExp> = None;
    let mut upd = |v: QExp| {
        best = Some(best.map_or(v, |b: QExp| b.min(v)));
    };
    // left ray: lattice points <= lo
    let lmax = snap_le(lo);
    if vertex >= QExp::from_integer(lmax) {
        // decreasing toward the boundary
        upd(h(lmax));
    } else {
        // k1 = largest lattice <= vertex, k2 = k1 + step (first above)
        let k1 = snap_le(vertex.floor().to_integer());
        upd(h(k1));
        if k1 + step <= lmax {
            upd(h(k1 + step));
        }
    }
    // right ray: lattice points >= hi
    let rmin = snap_ge(hi);
    if vertex <= QExp::from_integer(rmin) {
        upd(h(rmin));
    } else {
        let k1 = snap_ge(vertex.ceil().to_integer());
        upd(h(k1));
        if k1 - step >= rmin {
            upd(h(k1 - step));
        }
    }
    best
}

/// Global minimum of an upward parabola or flat line (`None` otherwise).
fn quad_global_min(q: &[QExp; 3]) -> Option<QExp> {
    let [a2, a1, a0] = *q;
    if a2.is_zero() {
        if a1.is_zero() {
            Some(a0)
        } else {
            None
        }
    } else if a2 > QExp::zero() {
        Some(a0 - a1 * a1 / (QExp::from_integer(4) * a2))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::coef;

    fn poly_bi(terms: &[(i64, i64, i64)], valid: i64) -> BiSeries {
        // (2*zexp, qexp, coefficient) with exact z-support
        let zmin = terms.iter().map(|t| t.0).min().unwrap();
        let zmax = terms.iter().map(|t| t.0).max().unwrap();
        BiSeries::from_parts(
            zmin,
            zmax,
            QExp::from_integer(valid),
            TailBound::ZeroOutside,
            terms.iter().map(|&(z, q, c)| {
                (z, ScaledSeries::monomial(coef(c), QExp::from_integer(q)))
            }),
        )
    }

    #[test]
    fn bi_mul_difference_of_squares() {
        // (z + z^{-1}) (z - z^{-1}) = z^2 - z^{-2}
        let a = poly_bi(&[(2, 0, 1), (-2, 0, 1)], 10);
        let b = poly_bi(&[(2, 0, 1), (-2, 0, -1)], 10);
        let p = a.bi_mul(&b, QExp::from_integer(10)).unwrap();
        assert_eq!(p.zcoeff(4).unwrap().coeff(QExp::zero()), coef(1));
        assert_eq!(p.zcoeff(-4).unwrap().coeff(QExp::zero()), coef(-1));
        assert!(p.zcoeff(0).unwrap().is_zero_to_order());
    }

    #[test]
    fn bi_mul_identity() {
        let a = poly_bi(&[(1, 0, 2), (-3, 1, 5)], 9);
        let one = poly_bi(&[(0, 0, 1)], 9);
        let p = a.bi_mul(&one, QExp::from_integer(9)).unwrap();
        assert_eq!(p.zcoeff(1).unwrap().coeff(QExp::zero()), coef(2));
        assert_eq!(p.zcoeff(-3).unwrap().coeff(QExp::one()), coef(5));
    }

    #[test]
    fn specialize_constant_in_z() {
        let a = poly_bi(&[(0, 1, 7)], 12);
        let s = a.specialize_z(&Monomial::neg_q(2)).unwrap();
        assert_eq!(s.coeff(QExp::one()), coef(7));
    }

    #[test]
    fn specialize_at_minus_one() {
        // z + z^{-1} at z = -1 gives -2
        let a = poly_bi(&[(2, 0, 1), (-2, 0, 1)], 12);
        let s = a.specialize_z(&Monomial::minus_one()).unwrap();
        assert_eq!(s.coeff(QExp::zero()), coef(-2));
    }

    #[test]
    fn quadratic_tail_certifies_central_window() {
        // j(z;q)-style factor with window |n| <= 1: the lattice-aware bound
        // certifies the central product coefficients at order 3 because the
        // first omitted term is q^{C(-2,2)} = q^3 away
        let half = QExp::new(1, 2);
        let tail = TailBound::quad_on(half, -half, QExp::zero(), 2, 0);
        let f = BiSeries::from_parts(
            -2,
            2,
            QExp::from_integer(6),
            tail.clone(),
            (-1..=1).map(|n| {
                (2 * n, ScaledSeries::monomial(coef(1), QExp::new(n * (n - 1), 2)))
            }),
        );
        let g = f.clone();
        let p = f.bi_mul(&g, QExp::from_integer(3)).unwrap();
        let (lo, hi) = p.window();
        assert!(lo <= 0 && hi >= 0, "central coefficient must certify: {lo}..{hi}");
        // widening the input window must not change certified coefficients
        let wide = BiSeries::from_parts(
            -6,
            6,
            QExp::from_integer(6),
            tail,
            (-3..=3).map(|n| {
                (2 * n, ScaledSeries::monomial(coef(1), QExp::new(n * (n - 1), 2)))
            }),
        );
        let pw = wide.bi_mul(&wide, QExp::from_integer(3)).unwrap();
        for k in lo..=hi {
            assert_eq!(
                p.zcoeff(k).unwrap(),
                pw.zcoeff(k).unwrap(),
                "certified coefficient changed at key {k}"
            );
        }
    }
}
