//! Numerical forward and inverse Mellin transforms.
//!
//! The inverse transform integrates `t^{-s} g(s) / (2 pi i)` over the
//! boundary of a semistrip enclosing all poles of `g`: two horizontal rays at
//! `Im s = -1` and `Im s = +1` joined by a vertical segment one unit to the
//! right of the rightmost pole, so `|s + p/lam| >= 1` along the whole
//! contour. For `t < 1` the kernel `t^{-s}` decays like `e^{-|log t| |Re s|}`
//! leftwards, which fixes the ray truncation.

use super::{MellinError, MellinRep};
use crate::float::{c, creal, Real, C};
use crate::quad;
use num_complex::Complex;

/// Truncated semistrip boundary for the inverse transform.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec<T: Real> {
    /// Abscissa parameter: the vertical segment sits at `Re s = -M + 1`.
    pub m_abscissa: T,
    /// Length of the horizontal rays measured from the vertical segment.
    pub ray_truncation: T,
    /// Quadrature tolerance per contour piece.
    pub quad_tol: T,
}

impl<T: Real> ContourSpec<T> {
    /// Contour adapted to a representation and an evaluation point: the
    /// vertical segment clears the rightmost pole by one unit and the rays
    /// reach `40/|log t|` past the leftmost pole so the discarded tail is
    /// below `1e-16` of the peak for `t <= 0.9`.
    pub fn auto(g: &MellinRep<T>, t: T) -> Self {
        let low = g.lower_exponent().unwrap_or(T::zero());
        let high = g.upper_exponent().unwrap_or(T::zero());
        let log_abs = t.ln().abs().max(T::of(1e-3));
        let reach = T::of(40.0) / log_abs;
        ContourSpec {
            m_abscissa: low,
            ray_truncation: (high - low) + reach + T::one(),
            quad_tol: T::of(1e-8),
        }
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.quad_tol = tol;
        self
    }

    /// Abscissa of the vertical segment.
    pub fn vertical_abscissa(&self) -> T {
        -self.m_abscissa + T::one()
    }

    /// Checks that the vertical segment separates all poles of `g` with a
    /// visible margin.
    pub fn validate(&self, g: &MellinRep<T>) -> Result<(), MellinError> {
        let v = self.vertical_abscissa();
        let margin = T::of(0.5);
        for pole in g.pole_locations() {
            if pole > v - margin {
                return Err(MellinError::ContourInvalid(format!(
                    "pole at {} too close to the vertical segment Re s = {}",
                    pole.to_f64_lossy(),
                    v.to_f64_lossy()
                )));
            }
        }
        if !(self.ray_truncation > T::zero()) {
            return Err(MellinError::ContourInvalid(
                "ray truncation must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Inverse Mellin transform of a structured representation at real
/// `t in (0, 1)`, by quadrature over the truncated semistrip boundary.
/// Returns the value and an estimate of quadrature plus truncation error.
pub fn inverse_mellin<T: Real>(
    g: &MellinRep<T>,
    t: T,
    contour: &ContourSpec<T>,
) -> Result<(C<T>, T), MellinError> {
    if !(t > T::zero() && t < T::one()) {
        return Err(MellinError::InvalidEvaluationPoint(t.to_f64_lossy()));
    }
    if g.is_empty() {
        return Ok((creal(T::zero()), T::zero()));
    }
    contour.validate(g)?;
    let xv = contour.vertical_abscissa();
    let xl = xv - contour.ray_truncation;
    let log_t = t.ln(); // negative
    let tol = contour.quad_tol;
    let piece_tol = tol * T::of(0.25);

    // t^{-s} = e^{-s log t}
    let kernel = move |s: C<T>| (-s * log_t).exp();
    let integrand = move |s: C<T>, g: &MellinRep<T>| {
        kernel(s) * g.eval_at(s).expect("contour stays clear of poles")
    };

    // bottom ray: s = x - i, x from xl to xv
    let f_bottom = |x: T| integrand(c(x, -T::one()), g);
    let (v_bottom, e_bottom) = quad::adaptive(&f_bottom, xl, xv, piece_tol);
    // vertical segment: s = xv + i y, y from -1 to 1, ds = i dy
    let f_vert = |y: T| integrand(c(xv, y), g) * Complex::i();
    let (v_vert, e_vert) = quad::adaptive(&f_vert, -T::one(), T::one(), piece_tol);
    // top ray: s = x + i, x from xv to xl
    let f_top = |x: T| integrand(c(x, T::one()), g);
    let (v_top_rev, e_top) = quad::adaptive(&f_top, xl, xv, piece_tol);
    let v_top = -v_top_rev;

    let two_pi = T::of(2.0) * T::PI();
    let total = (v_bottom + v_vert + v_top) / (Complex::i() * two_pi);

    // discarded-ray tail: |g| <= sum of coefficient magnitudes there
    let (d1, s1) = g.l1_norms();
    let sup_g = d1 + s1;
    let tail = sup_g * t.powf(-xl) / (T::PI() * log_t.abs());
    let err = (e_bottom + e_vert + e_top) / two_pi + tail;
    Ok((total, err))
}

/// Forward Mellin transform `int_0^1 t^{s-1} u(t) dt` of a black-box
/// evaluator by adaptive quadrature after the substitution `t = e^{-u}`.
///
/// Converges for `Re s` above the negated lowest exponent of `u`; divergence
/// shows up as panel contributions that stop decaying and is reported as
/// [`MellinError::DivergentIntegral`].
pub fn mellin_numeric<T: Real, F: Fn(T) -> C<T>>(
    f: &F,
    s: C<T>,
    quad_tol: T,
) -> Result<(C<T>, T), MellinError> {
    // integrand e^{-s u} f(e^{-u}) on u in (0, infinity)
    let integrand = move |u: T| (-s * u).exp() * f((-u).exp());
    let mut total = creal(T::zero());
    let mut err = T::zero();
    let mut prev_mag = T::infinity();
    let mut growth_run = 0u32;
    let mut quiet_run = 0u32;
    let panel_tol = quad_tol * T::of(0.05);
    for k in 0..600u32 {
        let a = T::of(k as f64);
        let b = T::of((k + 1) as f64);
        let (v, e) = quad::adaptive(&integrand, a, b, panel_tol);
        total = total + v;
        err = err + e;
        let mag = v.norm();
        if k > 2 && mag >= prev_mag && mag > quad_tol {
            growth_run += 1;
            if growth_run >= 5 {
                return Err(MellinError::DivergentIntegral);
            }
        } else {
            growth_run = 0;
        }
        if mag < quad_tol * T::of(0.01) {
            quiet_run += 1;
            if quiet_run >= 2 {
                return Ok((total, err + mag));
            }
        } else {
            quiet_run = 0;
        }
        prev_mag = mag;
    }
    Err(MellinError::DivergentIntegral)
}
