//! The Petrov operator as a zero-count reducer: the Rolle-type inequality and
//! the progression-elimination chain.

use super::sector::{arg_increment_arc, delta_zero};
use super::{count_zeros_interval, ZeroCountError, ZeroCountReport};
use crate::float::{c, creal, Real, C};
use crate::jseries::compensator::sinc;
use crate::jseries::{AKey, BKey, JSeries, SectorPoint};
use crate::mellin::petrov_series;
use std::collections::BTreeMap;

/// `P_kappa f(t) = (f(t e^{-i kappa}) - f(t e^{i kappa})) / (2i)` evaluated
/// directly from the two rotated arguments.
pub fn petrov_numeric<T: Real>(
    series: &JSeries<T>,
    kappa: T,
    t: T,
) -> Result<C<T>, ZeroCountError> {
    let minus = series.evaluate(SectorPoint::new(t, -kappa).map_err(crate::jseries::JSeriesError::from)?)?;
    let plus = series.evaluate(SectorPoint::new(t, kappa)?)?;
    Ok((minus.value - plus.value) / c(T::zero(), T::of(2.0)))
}

/// How a Petrov-inequality verification concluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// A sub-computation could not be certified; reason attached.
    Inconclusive(String),
}

/// All quantities entering the Rolle-type inequality
/// `N(f) <= 1 + N(P_kappa f) + (D1 - D0)/(2 pi)`.
///
/// `D1` is the forward argument increment along the unit arc and `D0` the
/// forward small-radius limit `2 kappa alpha_min`; the counterclockwise
/// contour traverses the inner arc backwards, hence the minus sign. The
/// bound with `+D0`, as sometimes quoted, is reported alongside.
#[derive(Debug, Clone)]
pub struct PetrovVerification<T: Real> {
    pub kappa: T,
    pub n_f: Option<ZeroCountReport<T>>,
    pub n_pf: Option<ZeroCountReport<T>>,
    pub delta1: Option<T>,
    pub delta0: Option<T>,
    pub lhs: Option<u32>,
    pub rhs: Option<T>,
    pub rhs_plus_form: Option<T>,
    pub verdict: Verdict,
}

/// Checks the Petrov inequality for a real series. Contour or certification
/// failures yield an inconclusive verdict, never an error.
pub fn verify_petrov<T: Real>(series: &JSeries<T>, kappa: T) -> PetrovVerification<T> {
    let mut out = PetrovVerification {
        kappa,
        n_f: None,
        n_pf: None,
        delta1: None,
        delta0: None,
        lhs: None,
        rhs: None,
        rhs_plus_form: None,
        verdict: Verdict::Inconclusive("not started".into()),
    };
    if !series.is_real() {
        out.verdict = Verdict::Inconclusive("series is not real on (0,1)".into());
        return out;
    }
    let t_lo = T::of(1e-8);
    let t_hi = T::one() - T::of(1e-9);

    let n_f = match count_zeros_interval(series, t_lo, t_hi) {
        Ok(r) => r,
        Err(e) => {
            out.verdict = Verdict::Inconclusive(format!("count of f failed: {e}"));
            return out;
        }
    };
    // sine kills leave coefficient dust ~1e-16 of the certificate scale;
    // prune it so the count sees the function, not the roundoff
    let pf = match petrov_series(series, kappa) {
        Ok(p) => p.pruned(T::of(1e-12)),
        Err(e) => {
            out.verdict = Verdict::Inconclusive(format!("Petrov series failed: {e}"));
            return out;
        }
    };
    let n_pf = match count_zeros_interval(&pf, t_lo, t_hi) {
        Ok(r) => r,
        Err(e) => {
            out.verdict = Verdict::Inconclusive(format!("count of P_k f failed: {e}"));
            return out;
        }
    };
    let d1 = if series.is_zero() {
        Ok(T::zero())
    } else {
        arg_increment_arc(series, T::one(), kappa)
    };
    let d0 = if series.is_zero() {
        Ok(T::zero())
    } else {
        delta_zero(series, kappa)
    };

    out.n_f = Some(n_f.clone());
    out.n_pf = Some(n_pf.clone());
    match (d1, d0) {
        (Ok(d1), Ok(d0)) => {
            out.delta1 = Some(d1);
            out.delta0 = Some(d0);
            let two_pi = T::of(2.0) * T::PI();
            let rhs = T::one() + T::of(n_pf.count as f64) + (d1 - d0) / two_pi;
            let rhs_plus = T::one() + T::of(n_pf.count as f64) + (d1 + d0) / two_pi;
            out.lhs = Some(n_f.count);
            out.rhs = Some(rhs);
            out.rhs_plus_form = Some(rhs_plus);
            if !n_f.certified || !n_pf.certified {
                out.verdict = Verdict::Inconclusive("uncertified zero count".into());
            } else if T::of(n_f.count as f64) <= rhs + T::of(1e-9) {
                out.verdict = Verdict::Holds;
            } else {
                out.verdict = Verdict::Violated;
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            out.verdict = Verdict::Inconclusive(format!("argument increment failed: {e}"));
        }
    }
    out
}

/// Per-step record of the reduction chain.
#[derive(Debug, Clone)]
pub struct ReductionStep<T: Real> {
    /// Spectrum slot eliminated at this step.
    pub slot: usize,
    pub kappa: T,
    /// Zero count before the step (when real and certified).
    pub n_before: Option<u32>,
    /// Zero count after the step.
    pub n_after: Option<u32>,
    pub delta1: Option<T>,
    pub delta0: Option<T>,
    /// Series after the step.
    pub series: JSeries<T>,
}

/// Result of the full elimination chain.
#[derive(Debug, Clone)]
pub struct ReductionChain<T: Real> {
    pub steps: Vec<ReductionStep<T>>,
    pub final_series: JSeries<T>,
    /// Sup of |final| on the check grid in [0.1, 0.9].
    pub final_sup: T,
    /// Residual allowance the final sup was checked against.
    pub allowance: T,
}

/// One Petrov step at `kappa = pi lambda_slot`, written directly in
/// eliminated form: every factor `sin(pi lambda_slot * (r / lambda_slot))`
/// is an exact zero by key arithmetic, so terms on the eliminated progression
/// are dropped symbolically rather than rounded away.
///
/// A compensator straddling the eliminated progression leaves its partner
/// monomial behind with the stable coefficient
/// `-a (-1)^p kappa sinc(kappa (x - y))` (`x` the dying exponent), which is
/// the residue of the sine-multiplied double pole at the surviving location.
/// A resonant compensator with both slots on the eliminated progression
/// leaves `-a kappa (-1)^p t^x`, which no later step can remove; it is keyed
/// to the eliminated slot and caught by the residual check.
fn petrov_eliminate<T: Real>(
    series: &JSeries<T>,
    slot: usize,
) -> Result<JSeries<T>, ZeroCountError> {
    let lambda = series.spectrum().lambda(slot);
    let kappa = T::PI() * lambda;
    let half = T::of(0.5);
    let mut a_new: BTreeMap<AKey, C<T>> = BTreeMap::new();
    let mut b_new: BTreeMap<BKey, C<T>> = BTreeMap::new();
    let mut add_b = |k: BKey, v: C<T>| {
        if v.norm() > T::zero() {
            let e = b_new.entry(k).or_insert_with(|| creal(T::zero()));
            *e = *e + v;
        }
    };

    for (k, coeff) in series.b_terms() {
        if k.i == slot {
            continue; // sin(pi r) = 0 exactly
        }
        let x = series.exponent_of_b(k);
        add_b(*k, -*coeff * (kappa * x).sin());
    }

    for (k, coeff) in series.a_terms() {
        let (x, y) = series.exponents_of_a(k);
        match (k.i == slot, k.j == slot) {
            (true, true) => {
                if k.p != k.q {
                    continue; // both sine factors vanish exactly
                }
                // resonant log term: P_kappa(a t^x log t) = -a kappa (-1)^p t^x
                let sign = if k.p % 2 == 0 { T::one() } else { -T::one() };
                add_b(BKey { r: k.p, i: slot }, -*coeff * (kappa * sign));
            }
            (true, false) => {
                // x dies; residue at the surviving pole -y
                let delta = x - y;
                let sign = if k.p % 2 == 0 { T::one() } else { -T::one() };
                let v = -*coeff * (sign * kappa * sinc(kappa * delta));
                add_b(BKey { r: k.q, i: k.j }, v);
            }
            (false, true) => {
                let delta = y - x;
                let sign = if k.q % 2 == 0 { T::one() } else { -T::one() };
                let v = -*coeff * (sign * kappa * sinc(kappa * delta));
                add_b(BKey { r: k.p, i: k.i }, v);
            }
            (false, false) => {
                let sx = (kappa * x).sin();
                let sy = (kappa * y).sin();
                let keep = -*coeff * ((sx + sy) * half);
                if keep.norm() > T::zero() {
                    let e = a_new.entry(*k).or_insert_with(|| creal(T::zero()));
                    *e = *e + keep;
                }
                let dd = kappa * (kappa * (x + y) * half).cos() * sinc(kappa * (x - y) * half);
                let shed = -*coeff * (dd * half);
                add_b(BKey { r: k.p, i: k.i }, shed);
                add_b(BKey { r: k.q, i: k.j }, shed);
            }
        }
    }
    a_new.retain(|_, v| v.norm() > T::zero());
    b_new.retain(|_, v| v.norm() > T::zero());
    Ok(series.rebuild(a_new, b_new, kappa)?)
}

/// Applies the Petrov operator with `kappa = pi lambda_n, ..., pi lambda_1`,
/// eliminating one pole progression per step. After step `k` the surviving
/// progressions must be exactly the first `n - k` slots; a step that leaves
/// mass on the progression it was meant to kill fails with
/// [`ZeroCountError::ResidualNotZero`]. The final series must evaluate below
/// ten times the combined tail allowance on [0.1, 0.9].
pub fn reduction_chain<T: Real>(series: &JSeries<T>) -> Result<ReductionChain<T>, ZeroCountError> {
    let n = series.spectrum().len();
    let real_input = series.is_real();
    let t_lo = T::of(1e-6);
    let t_hi = T::one() - T::of(1e-9);
    let count_of = |s: &JSeries<T>| -> Option<u32> {
        if !real_input {
            return None;
        }
        count_zeros_interval(s, t_lo, t_hi)
            .ok()
            .filter(|r| r.certified)
            .map(|r| r.count)
    };

    let mut current = series.clone();
    let mut steps: Vec<ReductionStep<T>> = Vec::new();
    for (step_idx, slot) in (0..n).rev().enumerate() {
        let lambda = current.spectrum().lambda(slot);
        let kappa = T::PI() * lambda;
        let n_before = count_of(&current);
        let d1 = arg_increment_arc(&current, T::one(), kappa).ok();
        let d0 = delta_zero(&current, kappa).ok();
        let next = petrov_eliminate(&current, slot)?;

        // the eliminated progression and everything above it must be gone
        let mut residual = T::zero();
        for (k, v) in next.a_terms() {
            if k.i >= slot || k.j >= slot {
                residual = residual + v.norm();
            }
        }
        for (k, v) in next.b_terms() {
            if k.i >= slot {
                residual = residual + v.norm();
            }
        }
        if residual > T::zero() {
            let allowance = next.certificate().c() * T::of(1e-12);
            if residual > allowance {
                return Err(ZeroCountError::ResidualNotZero {
                    step: step_idx,
                    residual: residual.to_f64_lossy(),
                    allowance: allowance.to_f64_lossy(),
                });
            }
        }
        let n_after = count_of(&next);
        steps.push(ReductionStep {
            slot,
            kappa,
            n_before,
            n_after,
            delta1: d1,
            delta0: d0,
            series: next.clone(),
        });
        current = next;
    }

    // final series must vanish within the combined tail allowance
    let mut final_sup = T::zero();
    let mut allowance = T::zero();
    for k in 0..17 {
        let t = T::of(0.1) + T::of(0.05) * T::of(k as f64);
        let ev = current.evaluate(SectorPoint::real(t)?)?;
        final_sup = final_sup.max(ev.value.norm());
        allowance = allowance.max(ev.tail_bound);
    }
    // roundoff floor: the chain multiplies coefficients by sines and divided
    // differences, all bounded by the certificate constant
    let floor = series.certificate().c() * T::of(1e-13);
    let allowed = (allowance + floor) * T::of(10.0);
    if final_sup > allowed {
        return Err(ZeroCountError::ResidualNotZero {
            step: n,
            residual: final_sup.to_f64_lossy(),
            allowance: allowed.to_f64_lossy(),
        });
    }
    Ok(ReductionChain {
        steps,
        final_series: current,
        final_sup,
        allowance: allowed,
    })
}
