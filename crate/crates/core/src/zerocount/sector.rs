//! Argument increments and the argument principle on sector contours.

use super::{Method, ZeroCountError, ZeroCountReport};
use crate::float::{Real, C};
use crate::jseries::asymptotics::leading_term;
use crate::jseries::{JSeries, JSeriesError, SectorPoint};

/// Sector contour `{ |arg z| <= kappa, epsilon <= |z| <= 1 }` on the
/// universal cover.
#[derive(Debug, Clone, Copy)]
pub struct SectorContour<T: Real> {
    pub kappa: T,
    pub epsilon_inner: T,
    /// Base number of samples per contour piece before adaptive refinement.
    pub samples: usize,
}

impl<T: Real> SectorContour<T> {
    pub fn new(kappa: T, epsilon_inner: T) -> Result<Self, ZeroCountError> {
        if !(epsilon_inner > T::zero() && epsilon_inner < T::one())
            || !(kappa > T::zero() && kappa <= T::PI())
        {
            return Err(ZeroCountError::InvalidInterval);
        }
        Ok(Self {
            kappa,
            epsilon_inner,
            samples: 64,
        })
    }
}

/// Total increment of `arg f` along a parametrized path, by phase unwrapping
/// with adaptive refinement until every step is below pi/4. Also returns the
/// smallest |f| seen. Near-vanishing values or unresolvable phase steps
/// surface as [`ZeroCountError::ZeroOnContour`].
fn phase_increment<T, P>(
    series: &JSeries<T>,
    path: &P,
    a: T,
    b: T,
    base_samples: usize,
) -> Result<(T, T), ZeroCountError>
where
    T: Real,
    P: Fn(T) -> SectorPoint<T>,
{
    let eval = |u: T| -> Result<C<T>, JSeriesError> {
        Ok(series.evaluate(path(u))?.value)
    };
    let quarter_pi = T::PI() * T::of(0.25);
    let mut min_abs = T::infinity();
    let mut max_abs = T::zero();
    let mut total = T::zero();

    // segment stack of (u0, f(u0), u1, f(u1), depth)
    let mut stack: Vec<(T, C<T>, T, C<T>, u32)> = Vec::new();
    let n = base_samples.max(8);
    let mut prev_u = a;
    let mut prev_f = eval(a)?;
    for k in 1..=n {
        let u = a + (b - a) * T::of(k as f64) / T::of(n as f64);
        let fu = eval(u)?;
        stack.push((prev_u, prev_f, u, fu, 0));
        prev_u = u;
        prev_f = fu;
    }
    while let Some((u0, f0, u1, f1, depth)) = stack.pop() {
        for f in [f0, f1] {
            let m = f.norm();
            min_abs = min_abs.min(m);
            max_abs = max_abs.max(m);
        }
        if f0.norm() == T::zero() || f1.norm() == T::zero() {
            return Err(ZeroCountError::ZeroOnContour { min_abs: 0.0 });
        }
        let step = (f1 / f0).arg();
        if step.abs() <= quarter_pi {
            total = total + step;
            continue;
        }
        if depth >= 42 {
            return Err(ZeroCountError::ZeroOnContour {
                min_abs: min_abs.to_f64_lossy(),
            });
        }
        let um = (u0 + u1) * T::of(0.5);
        let fm = eval(um)?;
        stack.push((u0, f0, um, fm, depth + 1));
        stack.push((um, fm, u1, f1, depth + 1));
    }
    if max_abs > T::zero() && min_abs < max_abs * T::of(1e-13) {
        return Err(ZeroCountError::ZeroOnContour {
            min_abs: min_abs.to_f64_lossy(),
        });
    }
    Ok((total, min_abs))
}

/// Increment of `arg f` along the arc `{ radius e^{i kappa phi}, phi in [-1, 1] }`.
pub fn arg_increment_arc<T: Real>(
    series: &JSeries<T>,
    radius: T,
    kappa: T,
) -> Result<T, ZeroCountError> {
    if series.is_zero() {
        return Err(ZeroCountError::ZeroOnContour { min_abs: 0.0 });
    }
    let path = |phi: T| SectorPoint::new(radius, kappa * phi).expect("radius > 0");
    let (total, _) = phase_increment(series, &path, -T::one(), T::one(), 64)?;
    Ok(total)
}

/// Limit of the arc increment as the radius goes to zero: `2 kappa alpha_min`
/// where `alpha_min` is the smallest exponent with a nonvanishing aggregated
/// coefficient (the log factor does not move the limit).
pub fn delta_zero<T: Real>(series: &JSeries<T>, kappa: T) -> Result<T, ZeroCountError> {
    let lead = leading_term(series)?;
    Ok(T::of(2.0) * kappa * lead.alpha)
}

/// Zero count (with multiplicity) inside a sector via the winding number of
/// `f` along the sector boundary.
pub fn argument_principle_count<T: Real>(
    series: &JSeries<T>,
    contour: &SectorContour<T>,
) -> Result<ZeroCountReport<T>, ZeroCountError> {
    if series.is_zero() {
        return Err(ZeroCountError::ZeroOnContour { min_abs: 0.0 });
    }
    let kappa = contour.kappa;
    let eps = contour.epsilon_inner;
    let n = contour.samples;
    let one = T::one();

    // counterclockwise: outbound lower ray, outer arc, inbound upper ray,
    // inner arc traversed backwards
    let lower_ray = |t: T| SectorPoint::new(t, -kappa).expect("t > 0");
    let (d_lower, m1) = phase_increment(series, &lower_ray, eps, one, n)?;
    let outer_arc = |phi: T| SectorPoint::new(one, kappa * phi).expect("radius 1");
    let (d_outer, m2) = phase_increment(series, &outer_arc, -one, one, n)?;
    let upper_ray = |u: T| SectorPoint::new(one + u * (eps - one), kappa).expect("u in [0,1]");
    let (d_upper, m3) = phase_increment(series, &upper_ray, T::zero(), one, n)?;
    let inner_arc = |phi: T| SectorPoint::new(eps, kappa * phi).expect("eps > 0");
    let (d_inner_fwd, m4) = phase_increment(series, &inner_arc, -one, one, n)?;

    let total = d_lower + d_outer + d_upper - d_inner_fwd;
    let two_pi = T::of(2.0) * T::PI();
    let winding = total / two_pi;
    let count_real = winding.round();
    let defect = (winding - count_real).abs();
    let margin = m1.min(m2).min(m3).min(m4);
    let count = count_real.to_f64_lossy().max(0.0) as u32;
    Ok(ZeroCountReport {
        count,
        certified: defect < T::of(0.05) && count_real >= -T::of(0.01) && margin > T::zero(),
        zeros: vec![],
        method: Method::ArgumentPrinciple,
        margin,
        flagged: vec![],
    })
}
