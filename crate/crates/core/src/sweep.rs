//! Parameter sweeps: zero counts over perturbation grids.
//!
//! A sweep probes how the number of zeros behaves as the Darboux exponents
//! and coefficient scales move, which is the operational face of local
//! boundedness. Grid points are evaluated independently and assembled in
//! deterministic grid order.

use crate::float::{creal, Real};
use crate::foliation::{
    integral_scan, AdmissibleForm, DarbouxExponents, DarbouxSystem, ScanStatus, TraceOptions,
};
use crate::jseries::{JSeries, Spectrum};
use crate::zerocount::{count_zeros_interval, ZeroCountError};
use serde::{Deserialize, Serialize};

/// One perturbation axis of a sweep grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum SweepAxis {
    /// Relative perturbation of one exponent: `lambda_i -> lambda_i (1 + d)`,
    /// `d` running over `points` values in `[-rel, rel]`.
    Exponent { index: usize, rel: f64, points: usize },
    /// Overall coefficient scaling over `points` factors in `[lo, hi]`.
    CoeffScale { lo: f64, hi: f64, points: usize },
}

impl SweepAxis {
    fn values(&self) -> Vec<f64> {
        let pts = match self {
            SweepAxis::Exponent { points, .. } => *points,
            SweepAxis::CoeffScale { points, .. } => *points,
        }
        .max(1);
        (0..pts)
            .map(|k| {
                let u = if pts == 1 {
                    0.5
                } else {
                    k as f64 / (pts - 1) as f64
                };
                match self {
                    SweepAxis::Exponent { rel, .. } => -rel + 2.0 * rel * u,
                    SweepAxis::CoeffScale { lo, hi, .. } => lo + (hi - lo) * u,
                }
            })
            .collect()
    }
}

/// Sweep description: axes plus the counting interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    #[serde(rename = "tMin", default = "default_t_min")]
    pub t_min: f64,
    #[serde(rename = "tMax", default = "default_t_max")]
    pub t_max: f64,
}

fn default_t_min() -> f64 {
    1e-6
}

fn default_t_max() -> f64 {
    1.0 - 1e-9
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Axis coordinates of the grid point, in axis order.
    pub coords: Vec<f64>,
    pub count: Option<u32>,
    pub certified: bool,
    /// Failure or uncertainty note; grid points are flagged, never dropped.
    pub note: Option<String>,
}

/// Assembled sweep results.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// Maximum certified count over the grid (the empirical local bound).
    pub max_count: Option<u32>,
    pub conclusive: usize,
}

/// Cartesian product of the axis value lists, in deterministic grid order.
pub fn grid_points(axes: &[SweepAxis]) -> Vec<Vec<f64>> {
    cartesian(axes)
}

fn cartesian(axes: &[SweepAxis]) -> Vec<Vec<f64>> {
    let mut grid: Vec<Vec<f64>> = vec![vec![]];
    for axis in axes {
        let vals = axis.values();
        let mut next = Vec::with_capacity(grid.len() * vals.len());
        for base in &grid {
            for &v in &vals {
                let mut row = base.clone();
                row.push(v);
                next.push(row);
            }
        }
        grid = next;
    }
    grid
}

/// The perturbed series at one grid point.
pub fn perturbed_series<T: Real>(
    base: &JSeries<T>,
    axes: &[SweepAxis],
    coords: &[f64],
) -> Result<JSeries<T>, ZeroCountError> {
    let mut lambdas: Vec<T> = base.spectrum().lambdas().to_vec();
    let mut scale = T::one();
    for (axis, &v) in axes.iter().zip(coords.iter()) {
        match axis {
            SweepAxis::Exponent { index, .. } => {
                if *index >= lambdas.len() {
                    return Err(ZeroCountError::InvalidInterval);
                }
                lambdas[*index] = lambdas[*index] * (T::one() + T::of(v));
            }
            SweepAxis::CoeffScale { .. } => {
                scale = scale * T::of(v);
            }
        }
    }
    let spectrum = Spectrum::new(lambdas).map_err(crate::jseries::JSeriesError::from)?;
    let mut s = base.with_spectrum(spectrum)?;
    if scale != T::one() {
        s = s.scaled(creal(scale))?;
    }
    Ok(s)
}

/// Zero count of the perturbed series at one grid point.
pub fn series_sweep_row<T: Real>(
    base: &JSeries<T>,
    axes: &[SweepAxis],
    coords: &[f64],
    t_min: f64,
    t_max: f64,
) -> SweepRow {
    match perturbed_series(base, axes, coords)
        .and_then(|s| count_zeros_interval(&s, T::of(t_min), T::of(t_max)))
    {
        Ok(report) => SweepRow {
            coords: coords.to_vec(),
            count: Some(report.count),
            certified: report.certified,
            note: (!report.certified).then(|| "uncertified count".to_string()),
        },
        Err(e) => SweepRow {
            coords: coords.to_vec(),
            count: None,
            certified: false,
            note: Some(e.to_string()),
        },
    }
}

/// Zero counts of a series over the whole perturbation grid.
pub fn sweep_zero_counts<T: Real>(base: &JSeries<T>, spec: &SweepSpec) -> SweepTable {
    let grid = cartesian(&spec.axes);
    let rows: Vec<SweepRow> = grid
        .iter()
        .map(|coords| series_sweep_row(base, &spec.axes, coords, spec.t_min, spec.t_max))
        .collect();
    summarize(rows)
}

/// Grid-based zero counts of pseudoabelian integral samples for a system
/// sweep: sign changes of `I(t)` over the level grid. Counts here are never
/// certified (sampling only).
pub fn sweep_system_counts<T: Real>(
    sys: &DarbouxSystem<T>,
    omega: &AdmissibleForm<T>,
    t_grid: &[T],
    axes: &[SweepAxis],
) -> SweepTable {
    let grid = cartesian(axes);
    let rows: Vec<SweepRow> = grid
        .iter()
        .map(|coords| {
            let mut lambdas: Vec<T> = sys.exponents().lambdas().to_vec();
            let mut bad: Option<String> = None;
            for (axis, &v) in axes.iter().zip(coords.iter()) {
                match axis {
                    SweepAxis::Exponent { index, .. } => {
                        if *index >= lambdas.len() {
                            bad = Some("exponent index out of range".into());
                        } else {
                            lambdas[*index] = lambdas[*index] * (T::one() + T::of(v));
                        }
                    }
                    SweepAxis::CoeffScale { .. } => {
                        // scaling omega does not move zeros of the integral
                    }
                }
            }
            if let Some(note) = bad {
                return SweepRow {
                    coords: coords.clone(),
                    count: None,
                    certified: false,
                    note: Some(note),
                };
            }
            let perturbed = DarbouxExponents::new(lambdas)
                .and_then(|e| {
                    DarbouxSystem::new(sys.polys().to_vec(), e, sys.region())
                });
            match perturbed {
                Err(e) => SweepRow {
                    coords: coords.clone(),
                    count: None,
                    certified: false,
                    note: Some(e.to_string()),
                },
                Ok(psys) => {
                    let scan =
                        integral_scan(&psys, omega, t_grid, &TraceOptions::default());
                    let vals: Vec<T> = scan
                        .iter()
                        .filter(|r| r.status == ScanStatus::Ok)
                        .filter_map(|r| r.value)
                        .collect();
                    let failures = scan.len() - vals.len();
                    let mut count = 0u32;
                    for w in vals.windows(2) {
                        if w[0] * w[1] < T::zero() {
                            count += 1;
                        }
                    }
                    SweepRow {
                        coords: coords.clone(),
                        count: Some(count),
                        certified: false,
                        note: (failures > 0)
                            .then(|| format!("{failures} trace failures")),
                    }
                }
            }
        })
        .collect();
    summarize(rows)
}

/// Folds evaluated rows into a table with the empirical bound.
pub fn summarize(rows: Vec<SweepRow>) -> SweepTable {
    let max_count = rows.iter().filter_map(|r| r.count).max();
    let conclusive = rows.iter().filter(|r| r.count.is_some()).count();
    SweepTable {
        rows,
        max_count,
        conclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::c;
    use crate::jseries::BKey;

    fn one_zero_series() -> JSeries<f64> {
        JSeries::exact(
            Spectrum::new(vec![1.0, 2.0]).unwrap(),
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
    fn nine_point_exponent_grid_keeps_count() {
        let spec = SweepSpec {
            axes: vec![
                SweepAxis::Exponent { index: 0, rel: 0.01, points: 3 },
                SweepAxis::Exponent { index: 1, rel: 0.01, points: 3 },
            ],
            t_min: 1e-6,
            t_max: 1.0 - 1e-9,
        };
        let table = sweep_zero_counts(&one_zero_series(), &spec);
        assert_eq!(table.rows.len(), 9);
        for row in &table.rows {
            assert_eq!(row.count, Some(1), "coords {:?}", row.coords);
            assert!(row.certified);
        }
        assert_eq!(table.max_count, Some(1));
    }

    #[test]
    fn zero_series_family_all_zero() {
        let base = JSeries::zero(Spectrum::new(vec![1.0]).unwrap());
        let spec = SweepSpec {
            axes: vec![SweepAxis::Exponent { index: 0, rel: 0.01, points: 5 }],
            t_min: 1e-4,
            t_max: 0.9,
        };
        let table = sweep_zero_counts(&base, &spec);
        assert!(table.rows.iter().all(|r| r.count == Some(0)));
    }

    #[test]
    fn coefficient_scaling_axis() {
        let spec = SweepSpec {
            axes: vec![SweepAxis::CoeffScale { lo: 0.5, hi: 2.0, points: 4 }],
            t_min: 1e-6,
            t_max: 1.0 - 1e-9,
        };
        let table = sweep_zero_counts(&one_zero_series(), &spec);
        // scaling all coefficients does not move the zero
        assert!(table.rows.iter().all(|r| r.count == Some(1)));
    }

    #[test]
    fn rational_crossing_stays_finite() {
        // lambda_2 sweeping through the rational value 2.0 keeps N stable
        let spec = SweepSpec {
            axes: vec![SweepAxis::Exponent { index: 1, rel: 0.05, points: 7 }],
            t_min: 1e-6,
            t_max: 1.0 - 1e-9,
        };
        let table = sweep_zero_counts(&one_zero_series(), &spec);
        for row in &table.rows {
            assert_eq!(row.count, Some(1), "coords {:?}", row.coords);
        }
    }
}
