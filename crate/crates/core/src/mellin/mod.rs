//! Structured Mellin transforms of J-series.
//!
//! The transform of a monomial is `M(b t^{r/lam}) = b/(s + r/lam)`; the
//! transform of a compensator is `M(a l_{x,y}) = -a / ((s+x)(s+y))` (the
//! binomial anchored at the lower exponent picks up a minus sign under the
//! integral `int_0^1 t^{s-1} l(t) dt`). A [`MellinRep`] stores the resulting
//! pole data keyed exactly like the series coefficients, so near-resonant
//! exponent pairs never get merged and the map back to series space is a
//! structural bijection.

pub mod contour;
pub mod kernel;

use crate::float::{creal, Real, C};
use crate::jseries::{AKey, BKey, DecayCertificate, JSeries, JSeriesError, Spectrum, TOL_POLE};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MellinError {
    #[error("evaluation point within {dist} of a pole")]
    NearPole { dist: f64 },
    #[error("Mellin integral diverges for this abscissa")]
    DivergentIntegral,
    #[error("contour does not separate the poles: {0}")]
    ContourInvalid(String),
    #[error("inverse Mellin evaluation requires 0 < t < 1, got {0}")]
    InvalidEvaluationPoint(f64),
    #[error(transparent)]
    Series(#[from] JSeriesError),
}

/// Meromorphic function with at most second-order real poles on the spectrum
/// progressions: sum of `c / ((s + p/lam_i)(s + q/lam_j))` double terms and
/// `b / (s + r/lam_i)` simple terms.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinRep<T: Real> {
    spectrum: Spectrum<T>,
    m: u32,
    doubles: BTreeMap<AKey, C<T>>,
    simples: BTreeMap<BKey, C<T>>,
    cert: DecayCertificate<T>,
    truncation: Option<i64>,
}

impl<T: Real> MellinRep<T> {
    /// Structured Mellin transform of a series: pole data keyed identically to
    /// the series terms (compensator coefficients flip sign, see module docs).
    pub fn forward(series: &JSeries<T>) -> Self {
        let doubles = series.a_terms().map(|(k, v)| (*k, -*v)).collect();
        let simples = series.b_terms().map(|(k, v)| (*k, *v)).collect();
        Self {
            spectrum: series.spectrum().clone(),
            m: series.m(),
            doubles,
            simples,
            cert: series.certificate(),
            truncation: series.truncation(),
        }
    }

    /// Inverse structural map of [`MellinRep::forward`].
    pub fn to_series(&self) -> Result<JSeries<T>, JSeriesError> {
        let a = self.doubles.iter().map(|(k, v)| (*k, -*v)).collect();
        let b = self.simples.iter().map(|(k, v)| (*k, *v)).collect();
        JSeries::new(
            self.spectrum.clone(),
            self.m,
            a,
            b,
            self.cert,
            self.truncation,
        )
    }

    pub(crate) fn from_parts(
        spectrum: Spectrum<T>,
        m: u32,
        doubles: BTreeMap<AKey, C<T>>,
        simples: BTreeMap<BKey, C<T>>,
        cert: DecayCertificate<T>,
        truncation: Option<i64>,
    ) -> Self {
        Self {
            spectrum,
            m,
            doubles,
            simples,
            cert,
            truncation,
        }
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn certificate(&self) -> DecayCertificate<T> {
        self.cert
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    pub fn double_terms(&self) -> impl Iterator<Item = (&AKey, &C<T>)> {
        self.doubles.iter()
    }

    pub fn simple_terms(&self) -> impl Iterator<Item = (&BKey, &C<T>)> {
        self.simples.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.doubles.is_empty() && self.simples.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.doubles.len() + self.simples.len()
    }

    fn exponents_of_double(&self, k: &AKey) -> (T, T) {
        (
            T::of(k.p as f64) / self.spectrum.lambda(k.i),
            T::of(k.q as f64) / self.spectrum.lambda(k.j),
        )
    }

    fn exponent_of_simple(&self, k: &BKey) -> T {
        T::of(k.r as f64) / self.spectrum.lambda(k.i)
    }

    /// Pole locations `s = -exponent`, with repetitions.
    pub fn pole_locations(&self) -> Vec<T> {
        let mut out = Vec::new();
        for k in self.doubles.keys() {
            let (x, y) = self.exponents_of_double(k);
            out.push(-x);
            out.push(-y);
        }
        for k in self.simples.keys() {
            out.push(-self.exponent_of_simple(k));
        }
        out
    }

    /// Smallest exponent present (rightmost pole sits at its negative).
    pub fn lower_exponent(&self) -> Option<T> {
        let mut low = T::infinity();
        for k in self.doubles.keys() {
            let (x, y) = self.exponents_of_double(k);
            low = low.min(x).min(y);
        }
        for k in self.simples.keys() {
            low = low.min(self.exponent_of_simple(k));
        }
        low.is_finite().then_some(low)
    }

    /// Largest exponent present (leftmost pole at its negative).
    pub fn upper_exponent(&self) -> Option<T> {
        let mut hi = T::neg_infinity();
        for k in self.doubles.keys() {
            let (x, y) = self.exponents_of_double(k);
            hi = hi.max(x).max(y);
        }
        for k in self.simples.keys() {
            hi = hi.max(self.exponent_of_simple(k));
        }
        hi.is_finite().then_some(hi)
    }

    /// Sum `(sum |double|, sum |simple|)` of coefficient magnitudes.
    pub fn l1_norms(&self) -> (T, T) {
        let d = self
            .doubles
            .values()
            .fold(T::zero(), |acc, v| acc + v.norm());
        let s = self
            .simples
            .values()
            .fold(T::zero(), |acc, v| acc + v.norm());
        (d, s)
    }

    /// Termwise evaluation away from the poles.
    pub fn eval_at(&self, s: C<T>) -> Result<C<T>, MellinError> {
        let guard = T::of(1e-9);
        let mut acc = creal(T::zero());
        for (k, coeff) in &self.doubles {
            let (x, y) = self.exponents_of_double(k);
            let dx = s + x;
            let dy = s + y;
            if dx.norm() <= guard || dy.norm() <= guard {
                return Err(MellinError::NearPole {
                    dist: dx.norm().min(dy.norm()).to_f64_lossy(),
                });
            }
            acc = acc + *coeff / (dx * dy);
        }
        for (k, coeff) in &self.simples {
            let dx = s + self.exponent_of_simple(k);
            if dx.norm() <= guard {
                return Err(MellinError::NearPole {
                    dist: dx.norm().to_f64_lossy(),
                });
            }
            acc = acc + *coeff / dx;
        }
        Ok(acc)
    }

    /// Merged Laurent data: for every pole location (clustered within
    /// [`TOL_POLE`]) the coefficients of `(s - s0)^{-1}` and `(s - s0)^{-2}`.
    pub fn principal_parts(&self) -> Vec<PrincipalPart<T>> {
        let tol = T::of(TOL_POLE);
        // events: (location, order1, order2)
        let mut ev: Vec<(T, C<T>, C<T>)> = Vec::new();
        let zero = creal(T::zero());
        for (k, coeff) in &self.doubles {
            let (x, y) = self.exponents_of_double(k);
            if (x - y).abs() <= tol {
                ev.push((-x, zero, *coeff));
            } else {
                ev.push((-x, *coeff / (y - x), zero));
                ev.push((-y, *coeff / (x - y), zero));
            }
        }
        for (k, coeff) in &self.simples {
            ev.push((-self.exponent_of_simple(k), *coeff, zero));
        }
        ev.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut out: Vec<PrincipalPart<T>> = Vec::new();
        for (loc, c1, c2) in ev {
            match out.last_mut() {
                Some(pp) if (loc - pp.location).abs() <= tol => {
                    pp.residue = pp.residue + c1;
                    pp.second_order = pp.second_order + c2;
                }
                _ => out.push(PrincipalPart {
                    location: loc,
                    residue: c1,
                    second_order: c2,
                }),
            }
        }
        out.retain(|pp| pp.residue.norm() > T::zero() || pp.second_order.norm() > T::zero());
        out
    }
}

/// Laurent data of one merged pole.
#[derive(Debug, Clone, Copy)]
pub struct PrincipalPart<T: Real> {
    pub location: T,
    pub residue: C<T>,
    pub second_order: C<T>,
}

pub use contour::{inverse_mellin, mellin_numeric, ContourSpec};
pub use kernel::{apply_kernel, petrov_series, GrowthTag, Kernel};
