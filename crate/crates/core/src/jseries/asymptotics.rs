//! Asymptotic expansion of a J-series by powers of `t`.
//!
//! Every stored term contributes Laurent-type data at its exponents: a
//! monomial `b t^{r/lam}` puts `b` on the plain power, a compensator splits
//! into `a/(x-y)` on `t^x` and `-a/(x-y)` on `t^y`, and a resonant compensator
//! puts `a` on `t^x log t`. Exponents are aggregated within [`TOL_POLE`].

use super::{JSeries, JSeriesError, TOL_POLE};
use crate::float::{creal, Real, C};

/// One aggregated term `t^alpha (c1 + c2 log t)` of the expansion.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticTerm<T: Real> {
    pub alpha: T,
    pub c1: C<T>,
    pub c2: C<T>,
}

/// Raw (exponent, plain, log) events before aggregation.
fn events<T: Real>(series: &JSeries<T>) -> Vec<(T, C<T>, C<T>)> {
    let tol = T::of(TOL_POLE);
    let zero = creal(T::zero());
    let mut ev = Vec::new();
    for (k, coeff) in series.a_terms() {
        let (x, y) = series.exponents_of_a(k);
        if (x - y).abs() <= tol {
            ev.push((x, zero, *coeff));
        } else {
            let spread = *coeff / (x - y);
            ev.push((x, spread, zero));
            ev.push((y, -spread, zero));
        }
    }
    for (k, coeff) in series.b_terms() {
        ev.push((series.exponent_of_b(k), *coeff, zero));
    }
    ev
}

/// Coefficients of `t^alpha` and `t^alpha log t`, aggregating every stored
/// term whose exponent matches `alpha` within [`TOL_POLE`]. Returns zeros when
/// nothing matches.
pub fn asymptotic_coeffs<T: Real>(series: &JSeries<T>, alpha: T) -> (C<T>, C<T>) {
    let tol = T::of(TOL_POLE);
    let mut c1 = creal(T::zero());
    let mut c2 = creal(T::zero());
    for (e, plain, logc) in events(series) {
        if (e - alpha).abs() <= tol {
            c1 = c1 + plain;
            c2 = c2 + logc;
        }
    }
    (c1, c2)
}

/// Full aggregated expansion, sorted by strictly increasing exponent.
pub fn asymptotic_terms<T: Real>(series: &JSeries<T>) -> Vec<AsymptoticTerm<T>> {
    let mut ev = events(series);
    ev.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tol = T::of(TOL_POLE);
    let mut out: Vec<AsymptoticTerm<T>> = Vec::new();
    for (e, plain, logc) in ev {
        match out.last_mut() {
            Some(term) if (e - term.alpha).abs() <= tol => {
                term.c1 = term.c1 + plain;
                term.c2 = term.c2 + logc;
            }
            _ => out.push(AsymptoticTerm {
                alpha: e,
                c1: plain,
                c2: logc,
            }),
        }
    }
    out.retain(|t| t.c1.norm() > T::zero() || t.c2.norm() > T::zero());
    out
}

/// Smallest exponent with a nonvanishing aggregated coefficient.
pub fn leading_term<T: Real>(series: &JSeries<T>) -> Result<AsymptoticTerm<T>, JSeriesError> {
    asymptotic_terms(series)
        .into_iter()
        .find(|t| t.c1.norm() + t.c2.norm() > T::of(1e-300))
        .ok_or(JSeriesError::DegenerateLeadingTerm)
}

/// A partial sum of the expansion plus a computable remainder envelope.
#[derive(Debug, Clone)]
pub struct PartialExpansion<T: Real> {
    /// Terms with exponent below `cut`.
    pub terms: Vec<AsymptoticTerm<T>>,
    /// The gap-adjusted cut position actually used.
    pub cut: T,
    /// Envelope constant: remainder is bounded by
    /// `k_env * t^cut * (1 + 1/|log t|) + tail(t)`.
    pub k_env: T,
    tail_source: Option<JSeries<T>>,
}

impl<T: Real> PartialExpansion<T> {
    /// Value of the partial sum at real `t`.
    pub fn value(&self, t: T) -> C<T> {
        let log_t = t.ln();
        let mut acc = creal(T::zero());
        for term in &self.terms {
            let pow = t.powf(term.alpha);
            acc = acc + (term.c1 + term.c2 * log_t) * pow;
        }
        acc
    }

    /// Bound on `|f(t) - partial(t)|` for real `t` in (0, 1).
    pub fn envelope(&self, t: T) -> T {
        let mut env = T::zero();
        if self.k_env > T::zero() {
            let log_abs = t.ln().abs();
            env = self.k_env * t.powf(self.cut) * (T::one() + T::one() / log_abs);
        }
        if let Some(src) = &self.tail_source {
            if let Ok(ev) = src.evaluate(super::SectorPoint::real(t).unwrap()) {
                env = env + ev.tail_bound;
            }
        }
        env
    }
}

/// Shifts a requested cutoff into the gap structure of the exponents
/// actually present, with clearance at least `w / (2(n+1))`, `w` the minimal
/// progression spacing (the guaranteed-achievable ladder clearance). Only
/// stored exponents are poles of the finite representation; for a truncated
/// series the cut additionally stays below the smallest exponent the unknown
/// tail could carry.
fn adjust_cut<T: Real>(series: &JSeries<T>, cutoff: T) -> T {
    let n = series.spectrum().len();
    let w = T::one() / series.spectrum().max_lambda();
    let clearance = w / T::of((2 * (n + 1)) as f64);
    let cap = series.truncation().map(|order| {
        T::of((order + 1) as f64) / series.spectrum().max_lambda() - clearance
    });
    let mut cutoff = cutoff;
    if let Some(cap) = cap {
        cutoff = cutoff.min(cap);
    }
    let mut pts: Vec<T> = asymptotic_terms(series).iter().map(|t| t.alpha).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dist = |x: T| {
        pts.iter()
            .map(|&p| (p - x).abs())
            .fold(T::infinity(), T::min)
    };
    if dist(cutoff) >= clearance {
        return cutoff;
    }
    // midpoint of the gap of actual exponents containing the request
    let below = pts
        .iter()
        .cloned()
        .filter(|&p| p <= cutoff)
        .fold(T::neg_infinity(), T::max);
    let above = pts
        .iter()
        .cloned()
        .filter(|&p| p > cutoff)
        .fold(T::infinity(), T::min);
    let lo = if below.is_finite() { below } else { cutoff - w };
    let hi = if above.is_finite() { above } else { cutoff + w };
    let hi = match cap {
        Some(cap) => hi.min(cap + clearance),
        None => hi,
    };
    (lo + hi) * T::of(0.5)
}

/// Partial sum of the expansion below `cutoff` (gap-adjusted), with a
/// remainder envelope of the shape `K t^cut (1 + 1/|log t|)`.
///
/// The envelope constant comes from bounding the Mellin image of the series on
/// the boundary of the semistrip `Re s <= -cut`: on the vertical line the
/// distance of `s` to a pole at `-x` is at least `|x - cut|`, on the
/// horizontal rays it is at least 1.
pub fn partial_sum<T: Real>(series: &JSeries<T>, cutoff: T) -> PartialExpansion<T> {
    let cut = adjust_cut(series, cutoff);
    let all = asymptotic_terms(series);
    let terms: Vec<_> = all.iter().filter(|t| t.alpha < cut).cloned().collect();
    let any_above = all.iter().any(|t| t.alpha >= cut);
    let truncated = series.truncation().is_some();

    let k_env = if !any_above && !truncated {
        // no poles beyond the cut line: the remainder contour integral vanishes
        T::zero()
    } else {
        let mut sup_vert = T::zero();
        let mut sup_ray = T::zero();
        for (k, coeff) in series.a_terms() {
            let (x, y) = series.exponents_of_a(k);
            let dx = (x - cut).abs().max(T::of(1e-12));
            let dy = (y - cut).abs().max(T::of(1e-12));
            sup_vert = sup_vert + coeff.norm() / (dx * dy);
            sup_ray = sup_ray + coeff.norm();
        }
        for (k, coeff) in series.b_terms() {
            let x = series.exponent_of_b(k);
            let dx = (x - cut).abs().max(T::of(1e-12));
            sup_vert = sup_vert + coeff.norm() / dx;
            sup_ray = sup_ray + coeff.norm();
        }
        sup_vert.max(sup_ray) / T::PI()
    };

    PartialExpansion {
        terms,
        cut,
        k_env,
        tail_source: if truncated {
            Some(series.clone())
        } else {
            None
        },
    }
}
