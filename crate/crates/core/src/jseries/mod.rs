//! Truncated J-series: finite sums of compensators and power monomials
//!
//! ```text
//! f(t) = sum a_{pq,i,j} l_{p/lam_i, q/lam_j}(t) + sum b_{r,i} t^{r/lam_i}
//! ```
//!
//! over a finite spectrum `lam_1..lam_n`, with an exponential decay
//! certificate `|a_{pq}| <= C rho^{-(p+q)}`, `|b_r| <= C rho^{-r}`, `rho > 2`.
//! Series evaluate on the universal cover of the punctured unit disk and are
//! immutable values; every operation returns a new series.

pub mod asymptotics;
pub mod compensator;

use crate::float::{creal, Real, C};
use compensator::{cis, compensator_exponents, compensator_derivative, dd_cis};
use num_complex::Complex;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Relative tolerance for distinctness of spectrum entries.
pub const TOL_SPEC: f64 = 1e-12;
/// Absolute tolerance for aggregating exponents in asymptotic expansions.
pub const TOL_POLE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum JSeriesError {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("invalid decay certificate: {0}")]
    InvalidCertificate(String),
    #[error("index {index} below lower limit {min} (m = {m})")]
    IndexBelowLimit { index: i64, min: i64, m: u32 },
    #[error("index {index} exceeds truncation order {order}")]
    IndexAboveTruncation { index: i64, order: i64 },
    #[error("spectrum slot {slot} out of range (n = {n})")]
    SlotOutOfRange { slot: usize, n: usize },
    #[error("coefficient {magnitude} violates decay bound {bound} at combined index {index}")]
    CoefficientBound { magnitude: f64, bound: f64, index: i64 },
    #[error("nonpositive Darboux exponent")]
    InvalidExponent,
    #[error("sector point outside the convergence certificate: log-modulus budget {budget}, needed {needed}")]
    SectorOutOfRange { budget: f64, needed: f64 },
    #[error("rotation would drop the decay certificate below 2 (rho -> {rho_new})")]
    CertificateLoss { rho_new: f64 },
    #[error("invalid sector point: modulus must be positive")]
    InvalidPoint,
    #[error("series has no nonvanishing asymptotic term")]
    DegenerateLeadingTerm,
}

/// Finite ordered set of Darboux exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Real> {
    lambdas: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Order is significant: slots in coefficient keys index into this list.
    pub fn new(lambdas: Vec<T>) -> Result<Self, JSeriesError> {
        if lambdas.is_empty() {
            return Err(JSeriesError::InvalidSpectrum("empty spectrum".into()));
        }
        for &l in &lambdas {
            if !(l > T::zero()) || !l.is_finite() {
                return Err(JSeriesError::InvalidSpectrum(format!(
                    "exponent {l} is not a positive finite real"
                )));
            }
        }
        let tol = T::of(TOL_SPEC);
        for i in 0..lambdas.len() {
            for j in (i + 1)..lambdas.len() {
                let (a, b) = (lambdas[i], lambdas[j]);
                if (a - b).abs() <= tol * a.max(b) {
                    return Err(JSeriesError::InvalidSpectrum(format!(
                        "entries {i} and {j} coincide within tolerance"
                    )));
                }
            }
        }
        Ok(Self { lambdas })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambda(&self, i: usize) -> T {
        self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn min_lambda(&self) -> T {
        self.lambdas.iter().cloned().fold(T::infinity(), T::min)
    }

    pub fn max_lambda(&self) -> T {
        self.lambdas.iter().cloned().fold(T::zero(), T::max)
    }

    /// `max_i 1/lambda_i`.
    pub fn max_inv_lambda(&self) -> T {
        T::one() / self.min_lambda()
    }
}

/// A point of the universal cover of the punctured closed unit disk:
/// `modulus * e^{i argument}` with unbounded argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPoint<T: Real> {
    modulus: T,
    argument: T,
}

impl<T: Real> SectorPoint<T> {
    pub fn new(modulus: T, argument: T) -> Result<Self, JSeriesError> {
        if !(modulus > T::zero()) || !modulus.is_finite() || !argument.is_finite() {
            return Err(JSeriesError::InvalidPoint);
        }
        Ok(Self { modulus, argument })
    }

    /// Point on the real interval (0, infinity) with argument 0.
    pub fn real(t: T) -> Result<Self, JSeriesError> {
        Self::new(t, T::zero())
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    pub fn argument(&self) -> T {
        self.argument
    }

    /// The branch of `log t` selected by the cover: `ln(modulus) + i argument`.
    pub fn log(&self) -> C<T> {
        Complex::new(self.modulus.ln(), self.argument)
    }

    /// The point rotated by `e^{i kappa}` on the cover.
    pub fn rotated(&self, kappa: T) -> Self {
        Self {
            modulus: self.modulus,
            argument: self.argument + kappa,
        }
    }
}

/// Exponential decay certificate `(C, rho)` with `rho > 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate<T: Real> {
    c: T,
    rho: T,
}

impl<T: Real> DecayCertificate<T> {
    pub fn new(c: T, rho: T) -> Result<Self, JSeriesError> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(JSeriesError::InvalidCertificate(format!("C = {c}")));
        }
        if !(rho > T::of(2.0)) || !rho.is_finite() {
            return Err(JSeriesError::InvalidCertificate(format!(
                "rho = {rho} must exceed 2"
            )));
        }
        Ok(Self { c, rho })
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn rho(&self) -> T {
        self.rho
    }
}

/// Key of a compensator coefficient `a_{p q, i, j}`; `i, j` are spectrum slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AKey {
    pub p: i64,
    pub q: i64,
    pub i: usize,
    pub j: usize,
}

/// Key of a monomial coefficient `b_{r, i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BKey {
    pub r: i64,
    pub i: usize,
}

/// Result of evaluating a series at a point.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult<T: Real> {
    pub value: C<T>,
    /// Bound on the contribution of coefficients beyond the truncation order;
    /// zero for exactly represented series.
    pub tail_bound: T,
}

/// A truncated J-series. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct JSeries<T: Real> {
    spectrum: Spectrum<T>,
    m: u32,
    a: BTreeMap<AKey, C<T>>,
    b: BTreeMap<BKey, C<T>>,
    cert: DecayCertificate<T>,
    /// `Some(P)`: the stored terms are a truncation at combined order `P` of a
    /// longer series whose tail is controlled by the certificate. `None`: the
    /// stored terms are the whole series.
    truncation: Option<i64>,
}

impl<T: Real> JSeries<T> {
    pub fn new(
        spectrum: Spectrum<T>,
        m: u32,
        a_terms: Vec<(AKey, C<T>)>,
        b_terms: Vec<(BKey, C<T>)>,
        cert: DecayCertificate<T>,
        truncation: Option<i64>,
    ) -> Result<Self, JSeriesError> {
        let min_index = 1 - m as i64;
        let n = spectrum.len();
        let slack = T::of(1.0 + 1e-9);
        let mut a = BTreeMap::new();
        for (k, v) in a_terms {
            if k.p < min_index || k.q < min_index {
                return Err(JSeriesError::IndexBelowLimit {
                    index: k.p.min(k.q),
                    min: min_index,
                    m,
                });
            }
            if k.i >= n || k.j >= n {
                return Err(JSeriesError::SlotOutOfRange { slot: k.i.max(k.j), n });
            }
            if let Some(order) = truncation {
                if k.p + k.q > order {
                    return Err(JSeriesError::IndexAboveTruncation {
                        index: k.p + k.q,
                        order,
                    });
                }
            }
            if v.norm() > T::zero() {
                let e = a.entry(k).or_insert_with(|| creal(T::zero()));
                *e = *e + v;
            }
        }
        let mut b = BTreeMap::new();
        for (k, v) in b_terms {
            if k.r < min_index {
                return Err(JSeriesError::IndexBelowLimit {
                    index: k.r,
                    min: min_index,
                    m,
                });
            }
            if k.i >= n {
                return Err(JSeriesError::SlotOutOfRange { slot: k.i, n });
            }
            if let Some(order) = truncation {
                if k.r > order {
                    return Err(JSeriesError::IndexAboveTruncation { index: k.r, order });
                }
            }
            if v.norm() > T::zero() {
                let e = b.entry(k).or_insert_with(|| creal(T::zero()));
                *e = *e + v;
            }
        }
        a.retain(|_, v| v.norm() > T::zero());
        b.retain(|_, v| v.norm() > T::zero());
        // decay bounds apply to the aggregated coefficients
        for (k, v) in &a {
            let bound = cert.c * cert.rho.powi(-((k.p + k.q) as i32));
            if v.norm() > bound * slack {
                return Err(JSeriesError::CoefficientBound {
                    magnitude: v.norm().to_f64_lossy(),
                    bound: bound.to_f64_lossy(),
                    index: k.p + k.q,
                });
            }
        }
        for (k, v) in &b {
            let bound = cert.c * cert.rho.powi(-(k.r as i32));
            if v.norm() > bound * slack {
                return Err(JSeriesError::CoefficientBound {
                    magnitude: v.norm().to_f64_lossy(),
                    bound: bound.to_f64_lossy(),
                    index: k.r,
                });
            }
        }
        Ok(Self {
            spectrum,
            m,
            a,
            b,
            cert,
            truncation,
        })
    }

    /// Exactly represented series with an automatically covering certificate.
    pub fn exact(
        spectrum: Spectrum<T>,
        m: u32,
        a_terms: Vec<(AKey, C<T>)>,
        b_terms: Vec<(BKey, C<T>)>,
    ) -> Result<Self, JSeriesError> {
        let rho = T::of(4.0);
        // provisional constant definitely covering the aggregated table
        let mut mass = T::one();
        let mut top = 0i64;
        for (k, v) in &a_terms {
            mass = mass + v.norm();
            top = top.max((k.p + k.q).abs());
        }
        for (k, v) in &b_terms {
            mass = mass + v.norm();
            top = top.max(k.r.abs());
        }
        let provisional = DecayCertificate::new(mass * rho.powi(top as i32 + 1), rho)?;
        let mut out = Self::new(spectrum, m, a_terms, b_terms, provisional, None)?;
        out.cert = DecayCertificate::new(out.cover_constant(rho).max(T::one()), rho)?;
        Ok(out)
    }

    /// The zero series over a spectrum.
    pub fn zero(spectrum: Spectrum<T>) -> Self {
        Self {
            spectrum,
            m: 0,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            cert: DecayCertificate {
                c: T::one(),
                rho: T::of(4.0),
            },
            truncation: None,
        }
    }

    /// Single monomial `coeff * t^{r/lambda_i}`.
    pub fn monomial(
        spectrum: Spectrum<T>,
        r: i64,
        i: usize,
        coeff: C<T>,
    ) -> Result<Self, JSeriesError> {
        let m = if r >= 1 { 0 } else { (1 - r) as u32 };
        Self::exact(spectrum, m, vec![], vec![(BKey { r, i }, coeff)])
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

    pub fn a_terms(&self) -> impl Iterator<Item = (&AKey, &C<T>)> {
        self.a.iter()
    }

    pub fn b_terms(&self) -> impl Iterator<Item = (&BKey, &C<T>)> {
        self.b.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    /// True when every stored coefficient is real.
    pub fn is_real(&self) -> bool {
        self.a.values().chain(self.b.values()).all(|v| v.im == T::zero())
    }

    /// Exponent pair `(p/lambda_i, q/lambda_j)` of an a-key.
    pub fn exponents_of_a(&self, k: &AKey) -> (T, T) {
        (
            T::of(k.p as f64) / self.spectrum.lambda(k.i),
            T::of(k.q as f64) / self.spectrum.lambda(k.j),
        )
    }

    /// Exponent `r/lambda_i` of a b-key.
    pub fn exponent_of_b(&self, k: &BKey) -> T {
        T::of(k.r as f64) / self.spectrum.lambda(k.i)
    }

    /// Smallest exponent carried by any stored term, `None` for the zero series.
    pub fn lower_exponent(&self) -> Option<T> {
        let mut low = T::infinity();
        for k in self.a.keys() {
            let (x, y) = self.exponents_of_a(k);
            low = low.min(x).min(y);
        }
        for k in self.b.keys() {
            low = low.min(self.exponent_of_b(k));
        }
        if low.is_finite() {
            Some(low)
        } else {
            None
        }
    }

    /// Spectrum slots that still carry a nonzero coefficient.
    pub fn support_slots(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for k in self.a.keys() {
            s.insert(k.i);
            s.insert(k.j);
        }
        for k in self.b.keys() {
            s.insert(k.i);
        }
        s
    }

    /// Sum of coefficient magnitudes `(sum |a|, sum |b|)`.
    pub fn l1_norms(&self) -> (T, T) {
        let sa = self
            .a
            .values()
            .fold(T::zero(), |acc, v| acc + v.norm());
        let sb = self
            .b
            .values()
            .fold(T::zero(), |acc, v| acc + v.norm());
        (sa, sb)
    }

    /// Smallest certificate constant covering the stored coefficients at a
    /// given decay rate.
    pub fn cover_constant(&self, rho: T) -> T {
        let mut c = T::of(1e-30);
        for (k, v) in &self.a {
            c = c.max(v.norm() * rho.powi((k.p + k.q) as i32));
        }
        for (k, v) in &self.b {
            c = c.max(v.norm() * rho.powi(k.r as i32));
        }
        c * T::of(1.0 + 1e-12)
    }

    fn sector_check(&self, point: SectorPoint<T>) -> Result<(), JSeriesError> {
        if point.modulus <= T::one() {
            return Ok(());
        }
        // For modulus above 1 the per-index growth r^{1/lambda_min} must stay
        // below rho/2 for the certificate to keep a geometric margin.
        let needed = point.modulus.ln() * self.spectrum.max_inv_lambda();
        let budget = self.cert.rho.ln() - T::of(2.0).ln();
        if needed >= budget {
            return Err(JSeriesError::SectorOutOfRange {
                budget: budget.to_f64_lossy(),
                needed: needed.to_f64_lossy(),
            });
        }
        Ok(())
    }

    fn tail_bound(&self, point: SectorPoint<T>) -> T {
        let order = match self.truncation {
            None => return T::zero(),
            Some(p) => p,
        };
        let r = point.modulus;
        let n = T::of(self.spectrum.len() as f64);
        let rho = self.cert.rho;
        // per-index modulus growth for r > 1; none for r <= 1
        let amp = if r > T::one() {
            r.powf(self.spectrum.max_inv_lambda())
        } else {
            T::one()
        };
        let x = amp / rho;
        if x >= T::one() {
            return T::infinity();
        }
        // worst |t^gamma| over admissible low exponents
        let e_min = T::of((1 - self.m as i64) as f64);
        let gamma_low = if e_min >= T::zero() {
            e_min / self.spectrum.max_lambda()
        } else {
            e_min / self.spectrum.min_lambda()
        };
        let prefactor = r.powf(gamma_low).max(T::one());
        let log_norm = point.log().norm().max(T::of(1e-3));
        let k0 = order + 1;
        let one = T::one();
        let geo = x.powi(k0 as i32) / (one - x);
        let lin = x.powi(k0 as i32) * (T::of(k0 as f64) - T::of((k0 - 1) as f64) * x)
            / ((one - x) * (one - x));
        let pairs = lin + T::of((2 * self.m as i64 - 1) as f64) * geo;
        let tail_a = n * n * pairs.max(T::zero()) * log_norm;
        let tail_b = n * geo;
        self.cert.c * prefactor * (tail_a + tail_b)
    }

    /// Evaluates the truncated sum at a point of the universal cover, together
    /// with a bound on what the certified tail could add.
    pub fn evaluate(&self, point: SectorPoint<T>) -> Result<EvalResult<T>, JSeriesError> {
        self.sector_check(point)?;
        let log_t = point.log();
        let mut value = creal(T::zero());
        for (k, coeff) in &self.a {
            let (x, y) = self.exponents_of_a(k);
            value = value + *coeff * compensator_exponents(x, y, point);
        }
        for (k, coeff) in &self.b {
            let x = self.exponent_of_b(k);
            value = value + *coeff * (log_t * x).exp();
        }
        Ok(EvalResult {
            value,
            tail_bound: self.tail_bound(point),
        })
    }

    /// Convenience: value at real `t`, discarding the tail bound.
    pub fn eval_real(&self, t: T) -> Result<C<T>, JSeriesError> {
        Ok(self.evaluate(SectorPoint::real(t)?)?.value)
    }

    /// Termwise derivative at real `t` in (0, 1).
    pub fn derivative_at(&self, t: T) -> Result<C<T>, JSeriesError> {
        if !(t > T::zero()) {
            return Err(JSeriesError::InvalidPoint);
        }
        let mut value = creal(T::zero());
        for (k, coeff) in &self.a {
            let (x, y) = self.exponents_of_a(k);
            value = value + *coeff * compensator_derivative(x, y, t);
        }
        for (k, coeff) in &self.b {
            let x = self.exponent_of_b(k);
            value = value + *coeff * (x * t.powf(x - T::one()));
        }
        Ok(value)
    }

    /// Series of `t -> f(e^{i kappa} t)`.
    ///
    /// Exact coefficient algebra: compensators pick up the symmetric phase
    /// average, and each compensator sheds a divided-difference contribution
    /// onto the two monomial slots it straddles. For real `kappa` the rotation
    /// phases are unimodular, so the decay rate of the certificate is kept and
    /// only the constant is re-covered.
    pub fn rotate(&self, kappa: T) -> Result<JSeries<T>, JSeriesError> {
        let half = T::of(0.5);
        let mut a_new: BTreeMap<AKey, C<T>> = BTreeMap::new();
        let mut b_new: BTreeMap<BKey, C<T>> = BTreeMap::new();
        for (k, coeff) in &self.a {
            let (x, y) = self.exponents_of_a(k);
            let factor = (cis(kappa * x) + cis(kappa * y)) * half;
            let v = *coeff * factor;
            if v.norm() > T::zero() {
                let e = a_new.entry(*k).or_insert_with(|| creal(T::zero()));
                *e = *e + v;
            }
            let shed = *coeff * dd_cis(kappa, x, y) * half;
            if shed.norm() > T::zero() {
                let e = b_new
                    .entry(BKey { r: k.p, i: k.i })
                    .or_insert_with(|| creal(T::zero()));
                *e = *e + shed;
                let e = b_new
                    .entry(BKey { r: k.q, i: k.j })
                    .or_insert_with(|| creal(T::zero()));
                *e = *e + shed;
            }
        }
        for (k, coeff) in &self.b {
            let x = self.exponent_of_b(k);
            let v = *coeff * cis(kappa * x);
            if v.norm() > T::zero() {
                let e = b_new.entry(*k).or_insert_with(|| creal(T::zero()));
                *e = *e + v;
            }
        }
        a_new.retain(|_, v| v.norm() > T::zero());
        b_new.retain(|_, v| v.norm() > T::zero());
        self.rebuild(a_new, b_new, kappa)
    }

    /// Assembles a derived series from transformed coefficient tables,
    /// recovering a valid certificate and truncation order.
    pub(crate) fn rebuild(
        &self,
        a: BTreeMap<AKey, C<T>>,
        b: BTreeMap<BKey, C<T>>,
        kappa: T,
    ) -> Result<JSeries<T>, JSeriesError> {
        let rho = self.cert.rho;
        if !(rho > T::of(2.0)) {
            return Err(JSeriesError::CertificateLoss {
                rho_new: rho.to_f64_lossy(),
            });
        }
        let mut out = JSeries {
            spectrum: self.spectrum.clone(),
            m: self.m,
            a,
            b,
            cert: self.cert,
            truncation: self.truncation,
        };
        // divided differences are bounded by |kappa|, so the transformed tail
        // stays inside C * (1 + |kappa| n rho^{m+1} / (rho - 1)) at rate rho
        let n = T::of(self.spectrum.len() as f64);
        let cushion = T::one()
            + kappa.abs() * n * rho.powi(self.m as i32 + 1) / (rho - T::one());
        let c_new = out.cover_constant(rho).max(self.cert.c * cushion);
        out.cert = DecayCertificate::new(c_new, rho)?;
        if let Some(order) = self.truncation {
            let mut max_idx = order;
            for k in out.a.keys() {
                max_idx = max_idx.max(k.p + k.q);
            }
            for k in out.b.keys() {
                max_idx = max_idx.max(k.r);
            }
            out.truncation = Some(max_idx);
        }
        Ok(out)
    }

    /// Same coefficients over a perturbed spectrum (used by parameter sweeps).
    pub fn with_spectrum(&self, spectrum: Spectrum<T>) -> Result<JSeries<T>, JSeriesError> {
        if spectrum.len() != self.spectrum.len() {
            return Err(JSeriesError::InvalidSpectrum(
                "spectrum size changed".into(),
            ));
        }
        Ok(JSeries {
            spectrum,
            ..self.clone()
        })
    }

    /// Drops coefficients below `rel_floor` times their certificate bound.
    ///
    /// Coefficient maps built from kernel multiplications leave roundoff dust
    /// on annihilated terms (a sine kill evaluates to ~1e-16 instead of 0);
    /// the dust is far below the certificate scale and removing it changes
    /// the function by less than the roundoff of evaluating the survivors.
    pub fn pruned(&self, rel_floor: T) -> JSeries<T> {
        let c0 = self.cert.c;
        let rho = self.cert.rho;
        let mut out = self.clone();
        out.a
            .retain(|k, v| v.norm() > rel_floor * c0 * rho.powi(-((k.p + k.q) as i32)));
        out.b
            .retain(|k, v| v.norm() > rel_floor * c0 * rho.powi(-(k.r as i32)));
        out
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: C<T>) -> Result<JSeries<T>, JSeriesError> {
        let a = self
            .a
            .iter()
            .map(|(k, v)| (*k, *v * factor))
            .collect();
        let b = self
            .b
            .iter()
            .map(|(k, v)| (*k, *v * factor))
            .collect();
        self.rebuild(a, b, T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::c;

    fn spec(ls: &[f64]) -> Spectrum<f64> {
        Spectrum::new(ls.to_vec()).unwrap()
    }

    fn akey(p: i64, q: i64, i: usize, j: usize) -> AKey {
        AKey { p, q, i, j }
    }

    fn bkey(r: i64, i: usize) -> BKey {
        BKey { r, i }
    }

    #[test]
    fn spectrum_rejects_nonpositive_and_duplicates() {
        assert!(Spectrum::new(vec![1.0, -1.0]).is_err());
        assert!(Spectrum::new(vec![0.0]).is_err());
        assert!(Spectrum::new(vec![1.0, 1.0 + 1e-14]).is_err());
        assert!(Spectrum::new(vec![1.0, 1.0 + 1e-9]).is_ok());
    }

    #[test]
    fn single_monomial_evaluates_with_zero_tail() {
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        let r = s.evaluate(SectorPoint::real(0.3).unwrap()).unwrap();
        assert!((r.value.re - 0.3).abs() < 1e-16);
        assert_eq!(r.value.im, 0.0);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn compensator_term_matches_oracle() {
        // a_{1,1,lambda=1,mu=2} = 1 at t = 0.25 -> -0.5
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(akey(1, 1, 0, 1), c(1.0, 0.0))],
            vec![],
        )
        .unwrap();
        let v = s.eval_real(0.25).unwrap();
        assert!((v.re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        // f = t has derivative 1
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        assert!((s.derivative_at(0.77).unwrap().re - 1.0).abs() < 1e-15);
        // f = l_{1,1,1,2} = 2(t - sqrt t); derivative zero at t = 0.25
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(akey(1, 1, 0, 1), c(1.0, 0.0))],
            vec![],
        )
        .unwrap();
        assert!(s.derivative_at(0.25).unwrap().norm() < 1e-14);
    }

    #[test]
    fn coefficient_bound_enforced() {
        let bad = JSeries::new(
            spec(&[1.0]),
            0,
            vec![],
            vec![(bkey(3, 0), c(1.0, 0.0))],
            DecayCertificate::new(1.0, 4.0).unwrap(),
            None,
        );
        assert!(matches!(bad, Err(JSeriesError::CoefficientBound { .. })));
    }

    #[test]
    fn index_limits_enforced() {
        let below = JSeries::exact(spec(&[1.0]), 0, vec![], vec![(bkey(0, 0), c(1.0, 0.0))]);
        assert!(matches!(below, Err(JSeriesError::IndexBelowLimit { .. })));
        let ok = JSeries::exact(spec(&[1.0]), 1, vec![], vec![(bkey(0, 0), c(1.0, 0.0))]);
        assert!(ok.is_ok());
    }

    #[test]
    fn rotation_of_monomial_is_phase() {
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        let k = 0.37;
        let rot = s.rotate(k).unwrap();
        let (_, coeff) = rot.b_terms().next().unwrap();
        let expect = cis(k);
        assert!((coeff - expect).norm() < 1e-16);
        // evaluation matches f(e^{ik} t)
        let t = 0.62;
        let direct = s
            .evaluate(SectorPoint::new(t, k).unwrap())
            .unwrap()
            .value;
        let via = rot.eval_real(t).unwrap();
        assert!((direct - via).norm() < 1e-15);
    }

    #[test]
    fn rotation_identity_at_zero() {
        let s = JSeries::exact(
            spec(&[1.0, 1.7]),
            1,
            vec![(akey(1, 2, 0, 1), c(0.3, -0.1))],
            vec![(bkey(0, 0), c(0.5, 0.0)), (bkey(2, 1), c(-0.2, 0.4))],
        )
        .unwrap();
        let rot = s.rotate(0.0).unwrap();
        for ((k1, v1), (k2, v2)) in s.a_terms().zip(rot.a_terms()) {
            assert_eq!(k1, k2);
            assert_eq!(v1, v2);
        }
        for ((k1, v1), (k2, v2)) in s.b_terms().zip(rot.b_terms()) {
            assert_eq!(k1, k2);
            assert_eq!(v1, v2);
        }
    }

    #[test]
    fn lower_exponent_derived() {
        let s = JSeries::exact(
            spec(&[2.0, 0.5]),
            1,
            vec![(akey(1, 2, 0, 1), c(0.1, 0.0))],
            vec![(bkey(0, 0), c(0.5, 0.0))],
        )
        .unwrap();
        // exponents: a -> (1/2, 4), b -> 0
        assert_eq!(s.lower_exponent().unwrap(), 0.0);
    }

    #[test]
    fn sector_certificate_blocks_large_modulus() {
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        // rho = 4: budget ln(2); modulus e^0.5 fine, e^0.8 not
        assert!(s.evaluate(SectorPoint::new(0.5f64.exp(), 0.0).unwrap()).is_ok());
        assert!(matches!(
            s.evaluate(SectorPoint::new(0.8f64.exp(), 0.0).unwrap()),
            Err(JSeriesError::SectorOutOfRange { .. })
        ));
    }

    #[test]
    fn truncated_series_reports_tail() {
        let s = JSeries::new(
            spec(&[1.0]),
            0,
            vec![],
            vec![(bkey(1, 0), c(0.2, 0.0))],
            DecayCertificate::new(1.0, 4.0).unwrap(),
            Some(6),
        )
        .unwrap();
        let r = s.evaluate(SectorPoint::real(0.5).unwrap()).unwrap();
        assert!(r.tail_bound > 0.0);
        assert!(r.tail_bound < 1e-2);
    }
}
