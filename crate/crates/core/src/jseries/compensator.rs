//! Stable evaluation of the compensator binomial and its relatives.
//!
//! The compensator is
//!
//! ```text
//! l_{pq,lm,mu}(t) = (t^{p/lm} - t^{q/mu}) / (p/lm - q/mu),   resonant value t^{p/lm} log t,
//! ```
//!
//! evaluated everywhere through the single formula
//! `t^{q/mu} * log t * phi((p/lm - q/mu) * log t)` with `phi(z) = (e^z - 1)/z`,
//! which is exact in both regimes and needs no branching on the resonance.

use crate::float::{c, creal, Real, C};
use crate::jseries::{JSeriesError, SectorPoint};
use num_complex::Complex;

/// `(e^z - 1)/z` with the removable singularity filled in; relative error
/// below 1e-14 for |z| <= 1.
pub fn phi_stable<T: Real>(z: C<T>) -> C<T> {
    let threshold = T::of(0.5);
    if z.norm() < threshold {
        // power series sum_{k>=0} z^k/(k+1)!
        let mut term = creal(T::one());
        let mut acc = term;
        for k in 1..32u32 {
            term = term * z / T::of((k + 1) as f64);
            acc = acc + term;
            if term.norm() <= acc.norm() * T::of(1e-18) {
                break;
            }
        }
        acc
    } else {
        (z.exp() - T::one()) / z
    }
}

/// `sin(w)/w` with the removable singularity filled in.
pub fn sinc<T: Real>(w: T) -> T {
    if w.abs() < T::of(1e-2) {
        let w2 = w * w;
        // 1 - w^2/6 + w^4/120 - w^6/5040
        T::one() - w2 / T::of(6.0) + w2 * w2 / T::of(120.0)
            - w2 * w2 * w2 / T::of(5040.0)
    } else {
        w.sin() / w
    }
}

/// `e^{i a}` for real `a`.
pub fn cis<T: Real>(a: T) -> C<T> {
    c(a.cos(), a.sin())
}

/// Divided difference of `u -> e^{i kappa u}` over real nodes `x, y`,
/// computed as `i kappa e^{i kappa (x+y)/2} sinc(kappa (x-y)/2)`; collapses to
/// the derivative at `x = y`.
pub fn dd_cis<T: Real>(kappa: T, x: T, y: T) -> C<T> {
    let half = T::of(0.5);
    let mid = cis(kappa * (x + y) * half);
    let s = sinc(kappa * (x - y) * half);
    let i: C<T> = Complex::i();
    i * mid * (kappa * s)
}

/// Compensator on exponents `x = p/lambda`, `y = q/mu` at a point of the
/// universal cover. `log t = ln(modulus) + i * argument`.
///
/// The pair `(x, y)` is ordered internally so the result is bitwise symmetric
/// under swapping the two exponent slots.
pub fn compensator_exponents<T: Real>(x: T, y: T, point: SectorPoint<T>) -> C<T> {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let log_t = point.log();
    let delta = hi - lo;
    log_t * (log_t * lo).exp() * phi_stable(log_t * delta)
}

/// `l_{pq,lambda,mu}` at a sector point.
pub fn compensator_eval<T: Real>(
    p: i64,
    q: i64,
    lambda: T,
    mu: T,
    point: SectorPoint<T>,
) -> Result<C<T>, JSeriesError> {
    if lambda <= T::zero() || mu <= T::zero() {
        return Err(JSeriesError::InvalidExponent);
    }
    Ok(compensator_exponents(
        T::of(p as f64) / lambda,
        T::of(q as f64) / mu,
        point,
    ))
}

/// d/dt of the compensator on exponents `(x, y)` at real `t in (0, 1)`:
/// `t^{y-1} (y L phi(d L) + e^{d L})` with `d = x - y`, `L = log t`.
pub fn compensator_derivative<T: Real>(x: T, y: T, t: T) -> T {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let log_t = t.ln();
    let delta = hi - lo;
    let dl = delta * log_t;
    let phi = phi_stable(creal(dl)).re;
    t.powf(lo - T::one()) * (lo * log_t * phi + dl.exp())
}
