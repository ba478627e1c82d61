//! Zero counting for real J-series on (0, 1) and on complex sectors.
//!
//! Two routes: a geometric-grid sign scan with bisection refinement (features
//! accumulate at `t = 0`, and the scan floor is pushed down to where the
//! leading asymptotic term provably dominates the remainder envelope), and
//! the argument principle on a sector contour, which counts with multiplicity
//! and is authoritative for even-order zeros.

pub mod petrov;
pub mod sector;

use crate::float::Real;
use crate::jseries::asymptotics::{asymptotic_terms, leading_term, partial_sum};
use crate::jseries::{JSeries, JSeriesError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZeroCountError {
    #[error(transparent)]
    Series(#[from] JSeriesError),
    #[error("series must be real on (0,1) for this operation")]
    NotRealSeries,
    #[error("invalid interval: need 0 < tMin < tMax <= 1")]
    InvalidInterval,
    #[error("function vanishes (|f| = {min_abs}) on the contour")]
    ZeroOnContour { min_abs: f64 },
    #[error("reduction step {step} left residual mass {residual} above allowance {allowance}")]
    ResidualNotZero {
        step: usize,
        residual: f64,
        allowance: f64,
    },
}

/// Counting method recorded in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SignScan,
    ArgumentPrinciple,
}

/// A located zero.
#[derive(Debug, Clone, Copy)]
pub struct ZeroRecord<T: Real> {
    pub location: T,
    pub multiplicity: u32,
    /// Size of |f| at the edges of the exclusion window around the zero.
    pub residual_margin: T,
}

/// Outcome of a zero count.
#[derive(Debug, Clone)]
pub struct ZeroCountReport<T: Real> {
    /// Zeros counted with multiplicity.
    pub count: u32,
    pub certified: bool,
    pub zeros: Vec<ZeroRecord<T>>,
    pub method: Method,
    /// Minimum of |f| over the certifying grid/contour away from the
    /// exclusion windows.
    pub margin: T,
    /// Subintervals where a small |f| dip could not be resolved.
    pub flagged: Vec<(T, T)>,
}

/// Largest floor below which the leading asymptotic term dominates the
/// remainder envelope by a factor of 10, certifying `(0, floor)` zero-free.
/// Returns `t_min` when no such certificate is found above it.
fn certified_floor<T: Real>(series: &JSeries<T>, t_min: T, t_max: T) -> (T, bool) {
    let lead = match leading_term(series) {
        Ok(l) => l,
        Err(_) => return (t_min, false),
    };
    let alpha = lead.alpha;
    let (c1n, c2n) = (lead.c1.norm(), lead.c2.norm());
    // cut in the first exponent gap above alpha
    let next = asymptotic_terms(series)
        .iter()
        .map(|t| t.alpha)
        .find(|&a| a > alpha + T::of(1e-9))
        .unwrap_or(alpha + T::one() / series.spectrum().max_lambda());
    let expansion = partial_sum(series, (alpha + next) * T::of(0.5));
    let ten = T::of(10.0);

    let mut t = t_max;
    for _ in 0..220 {
        t = t * T::of(0.5);
        if t < t_min {
            return (t_min, false);
        }
        let log_abs = t.ln().abs();
        let lead_lower = if c2n > T::zero() {
            if c2n * log_abs < T::of(2.0) * c1n {
                continue;
            }
            (c2n * log_abs - c1n) * t.powf(alpha)
        } else {
            c1n * t.powf(alpha)
        };
        if lead_lower >= ten * expansion.envelope(t) && expansion.cut > alpha {
            return (t.max(t_min), t > t_min);
        }
    }
    (t_min, false)
}

/// Geometric-grid sign scan with bisection refinement on `(t_min, t_max)`.
///
/// Sign changes locate simple zeros; interior dips of |f| without a sign
/// change are chased to the critical point of `f` and either resolved as
/// even-order zeros (the local quadratic model must carry the bracket) or
/// flagged, in which case the report is not certified. An identically zero
/// series counts as having no isolated zeros.
pub fn count_zeros_interval<T: Real>(
    series: &JSeries<T>,
    t_min: T,
    t_max: T,
) -> Result<ZeroCountReport<T>, ZeroCountError> {
    if !(t_min > T::zero() && t_min < t_max && t_max <= T::one()) {
        return Err(ZeroCountError::InvalidInterval);
    }
    if !series.is_real() {
        return Err(ZeroCountError::NotRealSeries);
    }
    if series.is_zero() {
        return Ok(ZeroCountReport {
            count: 0,
            certified: true,
            zeros: vec![],
            method: Method::SignScan,
            margin: T::zero(),
            flagged: vec![],
        });
    }

    let (floor, _tail_certified) = certified_floor(series, t_min, t_max);
    let n_grid = 800usize;
    let ratio = (floor / t_max).powf(T::one() / T::of((n_grid - 1) as f64));
    let mut grid = Vec::with_capacity(n_grid);
    let mut t = t_max;
    for _ in 0..n_grid {
        grid.push(t);
        t = t * ratio;
    }
    grid.reverse(); // ascending

    let f = |t: T| -> Result<T, ZeroCountError> { Ok(series.eval_real(t)?.re) };
    let fv: Vec<T> = grid.iter().map(|&t| f(t)).collect::<Result<_, _>>()?;
    let scale = fv.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        // numerically indistinguishable from zero on the whole grid
        return Ok(ZeroCountReport {
            count: 0,
            certified: false,
            zeros: vec![],
            method: Method::SignScan,
            margin: T::zero(),
            flagged: vec![(t_min, t_max)],
        });
    }

    let mut zeros: Vec<ZeroRecord<T>> = Vec::new();
    let mut flagged: Vec<(T, T)> = Vec::new();
    let mut excluded: Vec<usize> = Vec::new();

    // simple zeros from sign changes
    for j in 0..n_grid - 1 {
        if fv[j] == T::zero() {
            continue; // handled as a dip below
        }
        if fv[j] * fv[j + 1] < T::zero() {
            let (mut a, mut b) = (grid[j], grid[j + 1]);
            let (mut fa, _fb) = (fv[j], fv[j + 1]);
            for _ in 0..90 {
                let m = (a + b) * T::of(0.5);
                let fm = f(m)?;
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < T::zero() {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            let loc = (a + b) * T::of(0.5);
            zeros.push(ZeroRecord {
                location: loc,
                multiplicity: 1,
                residual_margin: fv[j].abs().min(fv[j + 1].abs()),
            });
            excluded.push(j);
            excluded.push(j + 1);
        }
    }

    // interior |f| dips without a sign change: chase the critical point and
    // classify its value. Evaluation noise sits around 1e-15 * scale, so
    // anything below 1e-13 * scale is a zero, anything above 1e-11 * scale
    // is provably nonzero, and the narrow band between is flagged.
    let dip_tol = scale * T::of(1e-4);
    let zero_tol = scale * T::of(1e-13);
    let clear_tol = scale * T::of(1e-11);
    for j in 1..n_grid - 1 {
        let here = fv[j].abs();
        // a genuine dip is a V: the value must drop well below a neighbor,
        // which excludes ulp jitter on plateaus of tiny function values
        let v_shape = here < T::of(0.25) * fv[j - 1].abs().max(fv[j + 1].abs());
        if here < dip_tol
            && v_shape
            && here <= fv[j - 1].abs()
            && here < fv[j + 1].abs()
            && fv[j - 1] * fv[j + 1] > T::zero()
            && !excluded.contains(&j)
        {
            let (lo, hi) = (grid[j - 1], grid[j + 1]);
            let d_lo = series.derivative_at(lo)?.re;
            let d_hi = series.derivative_at(hi)?.re;
            if d_lo * d_hi >= T::zero() {
                flagged.push((lo, hi));
                continue;
            }
            // bisect f' to the critical point
            let (mut a, mut b, mut da) = (lo, hi, d_lo);
            for _ in 0..80 {
                let m = (a + b) * T::of(0.5);
                let dm = series.derivative_at(m)?.re;
                if da * dm <= T::zero() {
                    b = m;
                } else {
                    a = m;
                    da = dm;
                }
            }
            let tc = (a + b) * T::of(0.5);
            let ftc = f(tc)?.abs();
            if ftc <= zero_tol {
                // quadratic model must carry the bracket edges
                let w = (hi - lo) * T::of(0.25);
                let f2 = (f(tc + w)? - f(tc)? * T::of(2.0) + f(tc - w)?) / (w * w);
                let predicted = f2.abs() * w * w * T::of(0.5);
                if predicted >= T::of(10.0) * (ftc + scale * T::of(1e-13)) {
                    zeros.push(ZeroRecord {
                        location: tc,
                        multiplicity: 2,
                        residual_margin: fv[j - 1].abs().min(fv[j + 1].abs()),
                    });
                    excluded.push(j - 1);
                    excluded.push(j);
                    excluded.push(j + 1);
                } else {
                    flagged.push((lo, hi));
                }
            } else if ftc < clear_tol {
                flagged.push((lo, hi));
            }
            // larger critical values are certified nonzero dips
        }
    }

    let margin = fv
        .iter()
        .enumerate()
        .filter(|(j, _)| !excluded.contains(j))
        .fold(T::infinity(), |m, (_, v)| m.min(v.abs()));
    let margin = if margin.is_finite() { margin } else { T::zero() };

    zeros.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
    let count = zeros.iter().map(|z| z.multiplicity).sum();
    let certified = flagged.is_empty() && margin > T::zero();
    Ok(ZeroCountReport {
        count,
        certified,
        zeros,
        method: Method::SignScan,
        margin,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::c;
    use crate::jseries::{BKey, Spectrum};

    fn spec(ls: &[f64]) -> Spectrum<f64> {
        Spectrum::new(ls.to_vec()).unwrap()
    }

    /// f = t - 0.5 sqrt(t): one simple zero at t = 1/4.
    fn one_zero_series() -> JSeries<f64> {
        JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![],
            vec![
                (BKey { r: 1, i: 0 }, c(1.0, 0.0)),
                (BKey { r: 1, i: 1 }, c(-0.5, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_zero_located() {
        let report = count_zeros_interval(&one_zero_series(), 0.01, 0.99).unwrap();
        assert_eq!(report.count, 1);
        assert!(report.certified);
        assert!((report.zeros[0].location - 0.25).abs() < 1e-10);
        assert_eq!(report.zeros[0].multiplicity, 1);
        assert!(report.margin > 0.0);
    }

    #[test]
    fn monomial_has_no_interior_zero() {
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        let report = count_zeros_interval(&s, 0.01, 0.99).unwrap();
        assert_eq!(report.count, 0);
        assert!(report.certified);
    }

    #[test]
    fn quadratic_in_u_fixture() {
        // f = t - 2.5 t^{1.3} + 1.5 t^{1.6}; with u = t^{0.3} the zeros solve
        // 1.5 u^2 - 2.5 u + 1 = 0, i.e. u in {2/3, 1}; only u = 2/3 is interior
        let s = JSeries::exact(
            spec(&[1.0, 1.0 / 1.3, 1.0 / 1.6]),
            0,
            vec![],
            vec![
                (BKey { r: 1, i: 0 }, c(1.0, 0.0)),
                (BKey { r: 1, i: 1 }, c(-2.5, 0.0)),
                (BKey { r: 1, i: 2 }, c(1.5, 0.0)),
            ],
        )
        .unwrap();
        let report = count_zeros_interval(&s, 0.01, 0.99).unwrap();
        assert_eq!(report.count, 1);
        let oracle = (2.0f64 / 3.0).powf(1.0 / 0.3);
        assert!(
            (report.zeros[0].location - oracle).abs() < 1e-9,
            "{} vs {}",
            report.zeros[0].location,
            oracle
        );
    }

    #[test]
    fn double_zero_resolved_by_dip_chase() {
        // f = t^{3/2} - t + t^{1/2}/4 = sqrt(t) (sqrt(t) - 1/2)^2: double zero
        // at t = 1/4, no sign change
        let s = JSeries::exact(
            spec(&[2.0 / 3.0, 1.0, 2.0]),
            0,
            vec![],
            vec![
                (BKey { r: 1, i: 0 }, c(1.0, 0.0)),
                (BKey { r: 1, i: 1 }, c(-1.0, 0.0)),
                (BKey { r: 1, i: 2 }, c(0.25, 0.0)),
            ],
        )
        .unwrap();
        let report = count_zeros_interval(&s, 0.01, 0.99).unwrap();
        assert_eq!(report.count, 2);
        assert!(report.certified, "flagged: {:?}", report.flagged);
        assert_eq!(report.zeros.len(), 1);
        assert_eq!(report.zeros[0].multiplicity, 2);
        assert!((report.zeros[0].location - 0.25).abs() < 1e-6);
    }

    #[test]
    fn zero_series_counts_zero() {
        let report =
            count_zeros_interval(&JSeries::zero(spec(&[1.0])), 0.1, 0.9).unwrap();
        assert_eq!(report.count, 0);
        assert!(report.certified);
    }

    #[test]
    fn interval_validation() {
        let s = one_zero_series();
        assert!(matches!(
            count_zeros_interval(&s, 0.0, 0.5),
            Err(ZeroCountError::InvalidInterval)
        ));
        assert!(matches!(
            count_zeros_interval(&s, 0.5, 0.2),
            Err(ZeroCountError::InvalidInterval)
        ));
    }

    #[test]
    fn deep_scan_floor_certified_by_asymptotics() {
        // zero sits at 0.25; scanning from 1e-12 must still find exactly one
        let report = count_zeros_interval(&one_zero_series(), 1e-12, 0.99).unwrap();
        assert_eq!(report.count, 1);
        assert!(report.certified);
    }
}
