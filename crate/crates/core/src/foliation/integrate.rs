//! Line integrals of rational 1-forms along traced ovals.
//!
//! Segments between traced points are replaced by cubic Hermite arcs built
//! from the stored unit tangents, so the quadrature error scales with the
//! fifth power of the tangent-turn step rather than the third. The reported
//! error estimate compares against the integral over the half-resolution
//! polyline.

use super::{AdmissibleForm, DarbouxSystem, FoliationError, Oval};
use crate::float::Real;

/// Gauss-Legendre 8 nodes/weights on [-1, 1] (symmetric halves).
const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Integral over one Hermite segment from `(p0, m0)` to `(p1, m1)`
/// (tangents already scaled by the chord length).
fn hermite_segment<T: Real, F: FnMut(T, T) -> Result<[T; 2], FoliationError>>(
    p0: [T; 2],
    m0: [T; 2],
    p1: [T; 2],
    m1: [T; 2],
    w: &mut F,
) -> Result<T, FoliationError> {
    let mut acc = T::zero();
    let half = T::of(0.5);
    let mut eval_at = |u: T, weight: T| -> Result<(), FoliationError> {
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = T::of(2.0) * u3 - T::of(3.0) * u2 + T::one();
        let h10 = u3 - T::of(2.0) * u2 + u;
        let h01 = -T::of(2.0) * u3 + T::of(3.0) * u2;
        let h11 = u3 - u2;
        let d00 = T::of(6.0) * u2 - T::of(6.0) * u;
        let d10 = T::of(3.0) * u2 - T::of(4.0) * u + T::one();
        let d01 = -d00;
        let d11 = T::of(3.0) * u2 - T::of(2.0) * u;
        let x = h00 * p0[0] + h10 * m0[0] + h01 * p1[0] + h11 * m1[0];
        let y = h00 * p0[1] + h10 * m0[1] + h01 * p1[1] + h11 * m1[1];
        let dx = d00 * p0[0] + d10 * m0[0] + d01 * p1[0] + d11 * m1[0];
        let dy = d00 * p0[1] + d10 * m0[1] + d01 * p1[1] + d11 * m1[1];
        let cov = w(x, y)?;
        acc = acc + weight * (cov[0] * dx + cov[1] * dy);
        Ok(())
    };
    for (xk, wk) in GL8_X.iter().zip(GL8_W.iter()) {
        // map from [-1,1] to [0,1]
        let u_plus = half * (T::one() + T::of(*xk));
        let u_minus = half * (T::one() - T::of(*xk));
        eval_at(u_plus, T::of(*wk) * half)?;
        eval_at(u_minus, T::of(*wk) * half)?;
    }
    Ok(acc)
}

fn integrate_polyline<T: Real>(
    sys: &DarbouxSystem<T>,
    omega: &AdmissibleForm<T>,
    points: &[[T; 2]],
    tangents: &[[T; 2]],
) -> Result<T, FoliationError> {
    let n = points.len();
    let mut total = T::zero();
    for k in 0..n {
        let k1 = (k + 1) % n;
        let p0 = points[k];
        let p1 = points[k1];
        let chord = ((p1[0] - p0[0]) * (p1[0] - p0[0])
            + (p1[1] - p0[1]) * (p1[1] - p0[1]))
            .sqrt();
        let m0 = [tangents[k][0] * chord, tangents[k][1] * chord];
        let m1 = [tangents[k1][0] * chord, tangents[k1][1] * chord];
        let mut w = |x: T, y: T| omega.eval(sys, x, y);
        total = total + hermite_segment(p0, m0, p1, m1, &mut w)?;
    }
    Ok(total)
}

/// `oint_omega` along a traced oval, with a resolution-halving error
/// estimate.
pub fn integrate_form<T: Real>(
    sys: &DarbouxSystem<T>,
    oval: &Oval<T>,
    omega: &AdmissibleForm<T>,
) -> Result<(T, T), FoliationError> {
    let full = integrate_polyline(sys, omega, &oval.points, &oval.tangents)?;
    // half resolution: every other point
    let pts: Vec<[T; 2]> = oval.points.iter().step_by(2).cloned().collect();
    let tgs: Vec<[T; 2]> = oval.tangents.iter().step_by(2).cloned().collect();
    let coarse = integrate_polyline(sys, omega, &pts, &tgs)?;
    let err = (full - coarse).abs() / T::of(15.0) + full.abs() * T::of(1e-15);
    Ok((full, err))
}

/// What happened at one grid level of a scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanStatus {
    Ok,
    TraceFailed(String),
    IntegrateFailed(String),
}

/// One row of an integral scan.
#[derive(Debug, Clone)]
pub struct ScanRow<T: Real> {
    pub t: T,
    pub value: Option<T>,
    pub error: Option<T>,
    pub status: ScanStatus,
}

/// Traces and integrates over a grid of levels; failures are flagged per
/// point instead of aborting the scan.
pub fn integral_scan<T: Real>(
    sys: &DarbouxSystem<T>,
    omega: &AdmissibleForm<T>,
    t_grid: &[T],
    opts: &super::trace::TraceOptions<T>,
) -> Vec<ScanRow<T>> {
    t_grid
        .iter()
        .map(|&t| match super::trace::trace_oval(sys, t, opts) {
            Err(e) => ScanRow {
                t,
                value: None,
                error: None,
                status: ScanStatus::TraceFailed(e.to_string()),
            },
            Ok(oval) => match integrate_form(sys, &oval, omega) {
                Err(e) => ScanRow {
                    t,
                    value: None,
                    error: None,
                    status: ScanStatus::IntegrateFailed(e.to_string()),
                },
                Ok((v, err)) => ScanRow {
                    t,
                    value: Some(v),
                    error: Some(err),
                    status: ScanStatus::Ok,
                },
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::poly::BivariatePoly;
    use crate::foliation::trace::{trace_oval, TraceOptions};
    use crate::foliation::Region;
    use crate::foliation::DarbouxExponents;

    fn triangle(lambdas: &[f64]) -> DarbouxSystem<f64> {
        let x = BivariatePoly::from_monomials(&[(1, 0, 1.0)]);
        let y = BivariatePoly::from_monomials(&[(0, 1, 1.0)]);
        let rest =
            BivariatePoly::from_monomials(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0)]);
        DarbouxSystem::new(
            vec![x, y, rest],
            DarbouxExponents::new(lambdas.to_vec()).unwrap(),
            Region::new(-0.5, 1.5, -0.5, 1.5).unwrap(),
        )
        .unwrap()
    }

    /// omega = x dy
    fn x_dy() -> AdmissibleForm<f64> {
        AdmissibleForm::polynomial(
            BivariatePoly::zero(),
            BivariatePoly::from_monomials(&[(1, 0, 1.0)]),
            3,
        )
    }

    #[test]
    fn exact_form_integrates_to_zero() {
        // omega = d(x^2 y) = 2xy dx + x^2 dy over a cycle
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let oval = trace_oval(&sys, 0.5 / 27.0, &TraceOptions::default()).unwrap();
        let dp = AdmissibleForm::polynomial(
            BivariatePoly::from_monomials(&[(1, 1, 2.0)]),
            BivariatePoly::from_monomials(&[(2, 0, 1.0)]),
            3,
        );
        let (v, _) = integrate_form(&sys, &oval, &dp).unwrap();
        assert!(v.abs() < 1e-8, "closed integral {v}");
    }

    #[test]
    fn theta_integrates_to_zero() {
        // theta = sum dp_j/p_j: closed, residue-free interior
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let oval = trace_oval(&sys, 0.4 / 27.0, &TraceOptions::default()).unwrap();
        // common denominator x y (1-x-y):
        // A = y(1-x-y) dp1/dx-part etc.; assemble explicitly
        let x = BivariatePoly::from_monomials(&[(1, 0, 1.0)]);
        let y = BivariatePoly::from_monomials(&[(0, 1, 1.0)]);
        let rest =
            BivariatePoly::from_monomials(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0)]);
        // dx-component: y*rest*1 + x*y*(-1)  (from dp3 = -dx - dy)
        let a = y.mul(&rest).add(&x.mul(&y).scale(-1.0));
        // dy-component: x*rest*1 + x*y*(-1)
        let b = x.mul(&rest).add(&x.mul(&y).scale(-1.0));
        let theta_form = AdmissibleForm {
            numerator_dx: a,
            numerator_dy: b,
            denominator_powers: vec![1, 1, 1],
            max_pole_order: 1,
        };
        let (v, _) = integrate_form(&sys, &oval, &theta_form).unwrap();
        assert!(
            v.abs() < 1e-8 * oval.arc_length,
            "closed log-form integral {v}"
        );
    }

    #[test]
    fn area_form_approaches_triangle_area() {
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let omega = x_dy();
        let t = 1e-3 / 27.0;
        let oval = trace_oval(&sys, t, &TraceOptions::default()).unwrap();
        let (v, err) = integrate_form(&sys, &oval, &omega).unwrap();
        // counterclockwise x dy is the enclosed area -> triangle area 1/2
        assert!((v - 0.5).abs() < 0.02, "I = {v}, err {err}");
    }

    #[test]
    fn scan_is_monotone_toward_area() {
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let omega = x_dy();
        let grid: Vec<f64> = (0..6)
            .map(|k| (1.0 / 27.0) * 0.9 * 0.25f64.powi(k))
            .collect();
        let rows = integral_scan(&sys, &omega, &grid, &TraceOptions::default());
        let vals: Vec<f64> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.status, ScanStatus::Ok, "{:?}", r.status);
                r.value.unwrap()
            })
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0], "areas must grow as t drops: {vals:?}");
        }
        assert!((vals[vals.len() - 1] - 0.5).abs() < 0.05);
    }

    #[test]
    fn exact_form_scan_is_all_zeros() {
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let dp = AdmissibleForm::polynomial(
            BivariatePoly::from_monomials(&[(1, 1, 2.0)]),
            BivariatePoly::from_monomials(&[(2, 0, 1.0)]),
            3,
        );
        let grid = [0.7 / 27.0, 0.2 / 27.0];
        for row in integral_scan(&sys, &dp, &grid, &TraceOptions::default()) {
            assert!(row.value.unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn different_sections_agree() {
        let sys = triangle(&[1.0, 1.0, 1.0]);
        let omega = x_dy();
        let t = 0.3 / 27.0;
        let mut opts = TraceOptions::default();
        let o1 = trace_oval(&sys, t, &opts).unwrap();
        opts.start_direction = [0.0, 1.0];
        let o2 = trace_oval(&sys, t, &opts).unwrap();
        opts.start_direction = [-0.3, 0.7];
        let o3 = trace_oval(&sys, t, &opts).unwrap();
        let (v1, _) = integrate_form(&sys, &o1, &omega).unwrap();
        let (v2, _) = integrate_form(&sys, &o2, &omega).unwrap();
        let (v3, _) = integrate_form(&sys, &o3, &omega).unwrap();
        assert!((v1 - v2).abs() < 1e-9, "{v1} vs {v2}");
        assert!((v1 - v3).abs() < 1e-9, "{v1} vs {v3}");
    }
}
