//! Center location and closed level-curve tracing.
//!
//! The tracer follows the Hamiltonian-like flow of `F = log f`: the field
//! `(-F_y, F_x)` has unit order near the separatrix where the gradient of `f`
//! itself degenerates, so one step-size policy works from the center down to
//! levels hugging the corners. Each step is projected back onto the level set
//! by a Newton correction along the gradient.

use super::{DarbouxSystem, FoliationError, Oval};
use crate::float::Real;

/// Located center and its level.
#[derive(Debug, Clone, Copy)]
pub struct CenterInfo<T: Real> {
    pub center: [T; 2],
    pub t_center: T,
    /// Probed level range with closed ovals: `(0, t_center)`.
    pub t_range: (T, T),
}

/// Newton solve of `theta = 0` from a seed in the positive region.
pub fn find_center<T: Real>(
    sys: &DarbouxSystem<T>,
    seed: [T; 2],
) -> Result<CenterInfo<T>, FoliationError> {
    let mut x = seed[0];
    let mut y = seed[1];
    if sys.log_first_integral(x, y).is_err() {
        return Err(FoliationError::NoCenterFound);
    }
    let scale = sys.region().diameter();
    let mut converged = false;
    for _ in 0..100 {
        let th = sys.theta(x, y).map_err(|_| FoliationError::NoCenterFound)?;
        let h = sys
            .theta_jacobian(x, y)
            .map_err(|_| FoliationError::NoCenterFound)?;
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det.abs() < T::of(1e-300) {
            return Err(FoliationError::NoCenterFound);
        }
        let dx = (th[0] * h[1][1] - th[1] * h[0][1]) / det;
        let dy = (th[1] * h[0][0] - th[0] * h[1][0]) / det;
        x = x - dx;
        y = y - dy;
        if !sys.region().contains(x, y) || sys.log_first_integral(x, y).is_err() {
            return Err(FoliationError::NoCenterFound);
        }
        if dx.abs() + dy.abs() < scale * T::of(1e-15) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(FoliationError::NoCenterFound);
    }
    let t_center = sys.first_integral(x, y)?;
    Ok(CenterInfo {
        center: [x, y],
        t_center,
        t_range: (T::zero(), t_center),
    })
}

/// Tracing controls.
#[derive(Debug, Clone, Copy)]
pub struct TraceOptions<T: Real> {
    /// Seed for the center search; region midpoint when absent.
    pub seed: Option<[T; 2]>,
    /// Relative level tolerance: the trace keeps `|f - t| <= level_tol_rel * t`.
    pub level_tol_rel: T,
    /// Closure tolerance relative to arc length.
    pub closure_tol_rel: T,
    /// Maximum tangent turn per step (radians); drives the step size.
    pub max_angle: T,
    pub max_steps: usize,
    /// Starting ray direction from the center.
    pub start_direction: [T; 2],
}

impl<T: Real> Default for TraceOptions<T> {
    fn default() -> Self {
        Self {
            seed: None,
            level_tol_rel: T::of(1e-10),
            closure_tol_rel: T::of(1e-8),
            max_angle: T::of(0.008),
            max_steps: 400_000,
            start_direction: [T::one(), T::zero()],
        }
    }
}

fn norm2<T: Real>(v: [T; 2]) -> T {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Unit tangent of the level curve at a point: `rot90(grad F)` normalized,
/// `orient = +-1` fixing the traversal sense.
fn tangent_at<T: Real>(
    sys: &DarbouxSystem<T>,
    p: [T; 2],
    orient: T,
) -> Result<[T; 2], FoliationError> {
    let g = sys.theta(p[0], p[1])?;
    let n = norm2(g);
    if n == T::zero() {
        return Err(FoliationError::OnSeparatrix { index: 0 });
    }
    Ok([-orient * g[1] / n, orient * g[0] / n])
}

/// Projects a point back to the level set `log f = log t` by Newton steps
/// along the gradient.
fn project_to_level<T: Real>(
    sys: &DarbouxSystem<T>,
    p: &mut [T; 2],
    log_t: T,
    tol: T,
) -> Result<T, FoliationError> {
    let mut residual = T::infinity();
    for _ in 0..12 {
        let lf = sys.log_first_integral(p[0], p[1])?;
        residual = (lf - log_t).abs();
        if residual <= tol {
            return Ok(residual);
        }
        let g = sys.theta(p[0], p[1])?;
        let n2 = g[0] * g[0] + g[1] * g[1];
        if n2 == T::zero() {
            break;
        }
        let corr = (lf - log_t) / n2;
        p[0] = p[0] - corr * g[0];
        p[1] = p[1] - corr * g[1];
    }
    if residual <= tol * T::of(10.0) {
        Ok(residual)
    } else {
        Err(FoliationError::TraceDiverged { steps: 0 })
    }
}

/// One classical RK4 step of the unit tangent field.
fn rk4_step<T: Real>(
    sys: &DarbouxSystem<T>,
    p: [T; 2],
    h: T,
    orient: T,
) -> Result<[T; 2], FoliationError> {
    let half = T::of(0.5);
    let k1 = tangent_at(sys, p, orient)?;
    let k2 = tangent_at(sys, [p[0] + half * h * k1[0], p[1] + half * h * k1[1]], orient)?;
    let k3 = tangent_at(sys, [p[0] + half * h * k2[0], p[1] + half * h * k2[1]], orient)?;
    let k4 = tangent_at(sys, [p[0] + h * k3[0], p[1] + h * k3[1]], orient)?;
    let sixth = T::of(1.0 / 6.0);
    Ok([
        p[0] + h * sixth * (k1[0] + T::of(2.0) * (k2[0] + k3[0]) + k4[0]),
        p[1] + h * sixth * (k1[1] + T::of(2.0) * (k2[1] + k3[1]) + k4[1]),
    ])
}

/// Traces the oval of `{f = t}` around the center, adaptive in the tangent
/// turn angle, terminating on return to the starting cross-section.
/// Best seed on a coarse interior grid: the point with the largest `log f`
/// among those where all polynomials are positive.
fn default_seed<T: Real>(sys: &DarbouxSystem<T>) -> Result<[T; 2], FoliationError> {
    let r = sys.region();
    let n = 17usize;
    let mut best: Option<([T; 2], T)> = None;
    for a in 1..n {
        for b in 1..n {
            let x = r.x_min + (r.x_max - r.x_min) * T::of(a as f64 / n as f64);
            let y = r.y_min + (r.y_max - r.y_min) * T::of(b as f64 / n as f64);
            if let Ok(lf) = sys.log_first_integral(x, y) {
                if best.map(|(_, v)| lf > v).unwrap_or(true) {
                    best = Some(([x, y], lf));
                }
            }
        }
    }
    best.map(|(p, _)| p).ok_or(FoliationError::NoCenterFound)
}

pub fn trace_oval<T: Real>(
    sys: &DarbouxSystem<T>,
    t: T,
    opts: &TraceOptions<T>,
) -> Result<Oval<T>, FoliationError> {
    let seed = match opts.seed {
        Some(s) => s,
        None => default_seed(sys)?,
    };
    let info = find_center(sys, seed)?;
    if !(t > T::zero() && t < info.t_center) {
        return Err(FoliationError::LevelOutOfRange {
            t: t.to_f64_lossy(),
            t_center: info.t_center.to_f64_lossy(),
        });
    }
    let log_t = t.ln();
    let level_tol = opts.level_tol_rel.max(T::of(1e-14));
    let diam = sys.region().diameter();

    // bracket f = t along the start ray, treating points outside the branch
    // domain as "below any level"
    let dir_n = norm2(opts.start_direction);
    let dir = [opts.start_direction[0] / dir_n, opts.start_direction[1] / dir_n];
    let value_at = |s: T| -> Option<T> {
        let p = [info.center[0] + s * dir[0], info.center[1] + s * dir[1]];
        if !sys.region().contains(p[0], p[1]) {
            return None;
        }
        sys.log_first_integral(p[0], p[1]).ok()
    };
    let mut s_lo = T::zero();
    let mut s_hi = diam * T::of(1e-6);
    loop {
        match value_at(s_hi) {
            Some(lf) if lf > log_t => {
                s_lo = s_hi;
                s_hi = s_hi * T::of(2.0);
                if s_hi > diam * T::of(4.0) {
                    return Err(FoliationError::NoCenterFound);
                }
            }
            _ => break,
        }
    }
    for _ in 0..200 {
        let mid = (s_lo + s_hi) * T::of(0.5);
        match value_at(mid) {
            Some(lf) if lf > log_t => s_lo = mid,
            _ => s_hi = mid,
        }
    }
    let s_star = (s_lo + s_hi) * T::of(0.5);
    let mut start = [
        info.center[0] + s_star * dir[0],
        info.center[1] + s_star * dir[1],
    ];
    project_to_level(sys, &mut start, log_t, level_tol)?;

    // pick the counterclockwise orientation about the center
    let mut orient = T::one();
    let v0_try = tangent_at(sys, start, orient)?;
    let radial = [start[0] - info.center[0], start[1] - info.center[1]];
    if radial[0] * v0_try[1] - radial[1] * v0_try[0] < T::zero() {
        orient = -orient;
    }
    let v0 = tangent_at(sys, start, orient)?;

    let mut points: Vec<[T; 2]> = vec![start];
    let mut tangents: Vec<[T; 2]> = vec![v0];
    let mut residuals: Vec<T> = vec![T::zero()];
    let mut arc_len = T::zero();
    let mut max_dist = T::zero();
    let h_min = diam * T::of(1e-13);
    let h_max = diam * T::of(2e-2);
    let mut h = diam * T::of(1e-4);
    let mut p = start;
    let mut v_here = v0;
    let mut closure: Option<([T; 2], T)> = None;

    for _step in 0..opts.max_steps {
        // adaptive step: keep the tangent turn below max_angle
        let mut accepted: Option<([T; 2], [T; 2])> = None;
        for _ in 0..60 {
            match rk4_step(sys, p, h, orient).and_then(|mut q| {
                project_to_level(sys, &mut q, log_t, level_tol).map(|_| q)
            }) {
                Ok(q) => {
                    let vq = tangent_at(sys, q, orient)?;
                    let dot = (v_here[0] * vq[0] + v_here[1] * vq[1])
                        .min(T::one())
                        .max(-T::one());
                    let angle = dot.acos();
                    if angle <= opts.max_angle {
                        accepted = Some((q, vq));
                        if angle < opts.max_angle * T::of(0.25) {
                            h = (h * T::of(1.4)).min(h_max);
                        }
                        break;
                    }
                }
                Err(_) => {}
            }
            h = h * T::of(0.5);
            if h < h_min {
                return Err(FoliationError::SaddleTooClose {
                    h: h.to_f64_lossy(),
                });
            }
        }
        let (q, vq) = accepted.ok_or(FoliationError::SaddleTooClose {
            h: h.to_f64_lossy(),
        })?;

        // section crossing: signed distance along the start tangent
        let d_prev = (p[0] - start[0]) * v0[0] + (p[1] - start[1]) * v0[1];
        let d_next = (q[0] - start[0]) * v0[0] + (q[1] - start[1]) * v0[1];
        let close_enough = {
            let dx = q[0] - start[0];
            let dy = q[1] - start[1];
            (dx * dx + dy * dy).sqrt() < max_dist * T::of(0.3) + h * T::of(4.0)
        };
        if arc_len > h * T::of(8.0)
            && d_prev < T::zero()
            && d_next >= T::zero()
            && close_enough
        {
            // interpolate the crossing
            let w = d_prev / (d_prev - d_next);
            let mut cross = [
                p[0] + w * (q[0] - p[0]),
                p[1] + w * (q[1] - p[1]),
            ];
            let _ = project_to_level(sys, &mut cross, log_t, level_tol);
            let gap = norm2([cross[0] - start[0], cross[1] - start[1]]);
            let seg = norm2([cross[0] - p[0], cross[1] - p[1]]);
            closure = Some((cross, gap));
            arc_len = arc_len + seg;
            break;
        }

        let seg = norm2([q[0] - p[0], q[1] - p[1]]);
        arc_len = arc_len + seg;
        let dist = norm2([q[0] - info.center[0], q[1] - info.center[1]]);
        let start_dist = norm2([q[0] - start[0], q[1] - start[1]]);
        max_dist = max_dist.max(start_dist).max(dist);
        let lf = sys.log_first_integral(q[0], q[1])?;
        residuals.push((lf - log_t).abs() * t);
        points.push(q);
        tangents.push(vq);
        p = q;
        v_here = vq;
    }

    let (_, gap) = closure.ok_or(FoliationError::TraceDiverged {
        steps: opts.max_steps,
    })?;
    if gap > opts.closure_tol_rel * arc_len {
        return Err(FoliationError::TraceDiverged {
            steps: points.len(),
        });
    }

    let mut oval = Oval {
        points,
        tangents,
        residuals,
        t,
        center: info.center,
        arc_length: arc_len,
        closure_gap: gap,
    };
    // normalize to counterclockwise (positive signed area)
    let n = oval.points.len();
    let mut area2 = T::zero();
    for k in 0..n {
        let a = oval.points[k];
        let b = oval.points[(k + 1) % n];
        area2 = area2 + (a[0] * b[1] - b[0] * a[1]);
    }
    if area2 < T::zero() {
        oval.points.reverse();
        oval.tangents.reverse();
        oval.residuals.reverse();
        for v in &mut oval.tangents {
            v[0] = -v[0];
            v[1] = -v[1];
        }
    }
    Ok(oval)
}
