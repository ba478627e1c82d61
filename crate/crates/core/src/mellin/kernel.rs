//! Entire kernels acting on structured Mellin transforms.
//!
//! Multiplying a pole representation by an entire `K(s)` and projecting back
//! onto the principal parts is pole-local algebra: a simple term picks up
//! `K` at its pole, a double term picks up the symmetric average of `K` at its
//! two poles plus a divided-difference overflow onto the matching simple
//! terms. The divided-difference form is exact for separated poles and
//! collapses to `K'` at a genuine second-order pole, so no resonance
//! branching is needed.

use super::{MellinError, MellinRep};
use crate::float::{creal, Real, C};
use crate::jseries::compensator::{cis, dd_cis, sinc};
use crate::jseries::{AKey, BKey, DecayCertificate, JSeries, JSeriesError};
use num_complex::Complex;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Growth class of a kernel on horizontal strips of the `s`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthTag {
    /// Bounded on every strip `|Im s| <= h` (required by [`apply_kernel`]).
    BoundedOnStrips,
    /// No boundedness certificate.
    Unbounded,
}

type Eval1<T> = Arc<dyn Fn(T) -> C<T> + Send + Sync>;
type Eval2<T> = Arc<dyn Fn(T, T) -> C<T> + Send + Sync>;

/// An entire function presented by value, derivative, and stable
/// divided-difference evaluators (arguments are real because all poles of a
/// [`MellinRep`] are real).
#[derive(Clone)]
pub struct Kernel<T: Real> {
    value: Eval1<T>,
    deriv: Eval1<T>,
    divdiff: Eval2<T>,
    growth: GrowthTag,
    /// Bound for |K| at real arguments (certificate bookkeeping).
    sup_bound: T,
    /// Bound for the divided differences at real arguments.
    dd_bound: T,
}

impl<T: Real> std::fmt::Debug for Kernel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel")
            .field("growth", &self.growth)
            .field("sup_bound", &self.sup_bound)
            .field("dd_bound", &self.dd_bound)
            .finish()
    }
}

impl<T: Real> Kernel<T> {
    pub fn new(
        value: Eval1<T>,
        deriv: Eval1<T>,
        divdiff: Eval2<T>,
        growth: GrowthTag,
        sup_bound: T,
        dd_bound: T,
    ) -> Self {
        Self {
            value,
            deriv,
            divdiff,
            growth,
            sup_bound,
            dd_bound,
        }
    }

    /// The identity kernel `K = 1`.
    pub fn one() -> Self {
        Self {
            value: Arc::new(|_| creal(T::one())),
            deriv: Arc::new(|_| creal(T::zero())),
            divdiff: Arc::new(|_, _| creal(T::zero())),
            growth: GrowthTag::BoundedOnStrips,
            sup_bound: T::one(),
            dd_bound: T::zero(),
        }
    }

    /// `K(s) = sin(kappa s)`.
    ///
    /// The divided difference uses the product-to-sum identity
    /// `sin u - sin v = 2 cos((u+v)/2) sin((u-v)/2)`, so it stays accurate
    /// down to coincident arguments where it equals `kappa cos(kappa x)`.
    /// Arguments whose phase is an exact integer multiple of pi evaluate to
    /// exactly zero.
    pub fn sin(kappa: T) -> Self {
        let ratio = kappa / T::PI();
        let value = move |x: T| {
            let u = ratio * x;
            if u == u.round() {
                return creal(T::zero());
            }
            creal((kappa * x).sin())
        };
        let deriv = move |x: T| creal(kappa * (kappa * x).cos());
        let divdiff = move |u: T, v: T| {
            let half = T::of(0.5);
            creal(kappa * (kappa * (u + v) * half).cos() * sinc(kappa * (u - v) * half))
        };
        Self {
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            divdiff: Arc::new(divdiff),
            growth: GrowthTag::BoundedOnStrips,
            sup_bound: T::one(),
            dd_bound: kappa.abs(),
        }
    }

    /// `K(s) = e^{-i kappa s}`, the Mellin symbol of argument rotation.
    pub fn exp_rotation(kappa: T) -> Self {
        Self {
            value: Arc::new(move |x: T| cis(-kappa * x)),
            deriv: Arc::new(move |x: T| {
                Complex::i() * (-kappa) * cis(-kappa * x)
            }),
            divdiff: Arc::new(move |u: T, v: T| dd_cis(-kappa, u, v)),
            growth: GrowthTag::BoundedOnStrips,
            sup_bound: T::one(),
            dd_bound: kappa.abs(),
        }
    }

    /// Pointwise product of two kernels, with a symmetrized divided
    /// difference `dd(fg) = (f(u)+f(v)) dd_g / 2 + (g(u)+g(v)) dd_f / 2`.
    pub fn product(&self, other: &Kernel<T>) -> Kernel<T> {
        let f = self.clone();
        let g = other.clone();
        let fv = f.value.clone();
        let gv = g.value.clone();
        let fd = f.deriv.clone();
        let gd = g.deriv.clone();
        let fdd = f.divdiff.clone();
        let gdd = g.divdiff.clone();
        let fv2 = f.value.clone();
        let gv2 = g.value.clone();
        let growth = if f.growth == GrowthTag::BoundedOnStrips
            && g.growth == GrowthTag::BoundedOnStrips
        {
            GrowthTag::BoundedOnStrips
        } else {
            GrowthTag::Unbounded
        };
        Kernel {
            value: Arc::new(move |x| fv(x) * gv(x)),
            deriv: Arc::new(move |x| fd(x) * (g.value)(x) + (f.value)(x) * gd(x)),
            divdiff: Arc::new(move |u, v| {
                let half = T::of(0.5);
                (fv2(u) + fv2(v)) * gdd(u, v) * half + (gv2(u) + gv2(v)) * fdd(u, v) * half
            }),
            growth,
            sup_bound: self.sup_bound * other.sup_bound,
            dd_bound: self.sup_bound * other.dd_bound + self.dd_bound * other.sup_bound,
        }
    }

    pub fn value_at(&self, x: T) -> C<T> {
        (self.value)(x)
    }

    pub fn deriv_at(&self, x: T) -> C<T> {
        (self.deriv)(x)
    }

    pub fn div_diff(&self, u: T, v: T) -> C<T> {
        if u == v {
            return (self.deriv)(u);
        }
        (self.divdiff)(u, v)
    }

    pub fn growth(&self) -> GrowthTag {
        self.growth
    }
}

/// Principal-part projection of `s -> K(s) g(s)`.
///
/// Simple term `b/(s+x)` maps to `K(-x) b/(s+x)`. Double term
/// `c/((s+x)(s+y))` maps to `(K(-x)+K(-y))/2` on the same double term plus
/// `dd_K(-x,-y)/2` on each of the simple terms `1/(s+x)`, `1/(s+y)`; at
/// `x = y` this reproduces the Laurent data `K(-x) c/(s+x)^2 + K'(-x) c/(s+x)`.
pub fn apply_kernel<T: Real>(g: &MellinRep<T>, kernel: &Kernel<T>) -> MellinRep<T> {
    let half = T::of(0.5);
    let mut doubles: BTreeMap<AKey, C<T>> = BTreeMap::new();
    let mut simples: BTreeMap<BKey, C<T>> = BTreeMap::new();
    for (k, coeff) in g.double_terms() {
        let (x, y) = g.exponents_of_double(k);
        let kx = kernel.value_at(-x);
        let ky = kernel.value_at(-y);
        let keep = (kx + ky) * half * *coeff;
        if keep.norm() > T::zero() {
            let e = doubles.entry(*k).or_insert_with(|| creal(T::zero()));
            *e = *e + keep;
        }
        let shed = kernel.div_diff(-x, -y) * half * *coeff;
        if shed.norm() > T::zero() {
            let e = simples
                .entry(BKey { r: k.p, i: k.i })
                .or_insert_with(|| creal(T::zero()));
            *e = *e + shed;
            let e = simples
                .entry(BKey { r: k.q, i: k.j })
                .or_insert_with(|| creal(T::zero()));
            *e = *e + shed;
        }
    }
    for (k, coeff) in g.simple_terms() {
        let x = g.exponent_of_simple(k);
        let v = kernel.value_at(-x) * *coeff;
        if v.norm() > T::zero() {
            let e = simples.entry(*k).or_insert_with(|| creal(T::zero()));
            *e = *e + v;
        }
    }
    doubles.retain(|_, v| v.norm() > T::zero());
    simples.retain(|_, v| v.norm() > T::zero());

    // re-cover the certificate: stored terms exactly, tail through the kernel
    // bounds (|K| <= sup on the poles, divided differences <= dd)
    let rho = g.certificate().rho();
    let n = T::of(g.spectrum().len() as f64);
    let cushion = kernel.sup_bound
        + kernel.dd_bound * n * rho.powi(g.m() as i32 + 1) / (rho - T::one());
    let mut c_new = g.certificate().c() * cushion.max(T::of(1e-30));
    for (k, v) in &doubles {
        c_new = c_new.max(v.norm() * rho.powi((k.p + k.q) as i32) * T::of(1.0 + 1e-12));
    }
    for (k, v) in &simples {
        c_new = c_new.max(v.norm() * rho.powi(k.r as i32) * T::of(1.0 + 1e-12));
    }
    let cert = DecayCertificate::new(c_new, rho).expect("rho inherited from valid certificate");

    let truncation = g.truncation().map(|order| {
        let mut max_idx = order;
        for k in doubles.keys() {
            max_idx = max_idx.max(k.p + k.q);
        }
        for k in simples.keys() {
            max_idx = max_idx.max(k.r);
        }
        max_idx
    });
    MellinRep::from_parts(
        g.spectrum().clone(),
        g.m(),
        doubles,
        simples,
        cert,
        truncation,
    )
}

/// The Petrov operator at the series level:
/// `P_kappa f = (f(t e^{-i kappa}) - f(t e^{i kappa})) / (2i)`, realized as
/// forward Mellin, multiplication by `sin(kappa s)`, and the structural
/// inverse.
pub fn petrov_series<T: Real>(
    series: &JSeries<T>,
    kappa: T,
) -> Result<JSeries<T>, JSeriesError> {
    let g = MellinRep::forward(series);
    let out = apply_kernel(&g, &Kernel::sin(kappa));
    out.to_series()
}

#[allow(unused)]
fn suppress_unused(_: MellinError) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float::c;
    use crate::jseries::{SectorPoint, Spectrum};

    fn spec(ls: &[f64]) -> Spectrum<f64> {
        Spectrum::new(ls.to_vec()).unwrap()
    }

    #[test]
    fn sine_kernel_zeros_and_divdiff() {
        let k = Kernel::sin(std::f64::consts::PI);
        for j in 1..=6i64 {
            assert_eq!(k.value_at(-(j as f64)).norm(), 0.0);
        }
        // divDiff(x, x) equals derivAt(x)
        let x = 0.437;
        assert_eq!(k.div_diff(x, x), k.deriv_at(x));
        // near-coincident arguments agree with the derivative
        let kappa = 1.3;
        let k = Kernel::sin(kappa);
        let d = k.div_diff(1.0, 1.0 + 1e-13);
        let expect = kappa * (kappa * 1.0f64).cos();
        assert!((d.re - expect).abs() / expect.abs() < 1e-10);
    }

    #[test]
    fn divdiff_symmetric() {
        let k = Kernel::sin(0.83);
        let (u, v) = (0.31, -1.57);
        assert_eq!(k.div_diff(u, v), k.div_diff(v, u));
    }

    #[test]
    fn identity_kernel_is_noop() {
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(AKey { p: 1, q: 2, i: 0, j: 1 }, c(0.5, 0.25))],
            vec![(BKey { r: 1, i: 0 }, c(-1.0, 0.0))],
        )
        .unwrap();
        let g = MellinRep::forward(&s);
        let out = apply_kernel(&g, &Kernel::one());
        for (s0, s1) in g.double_terms().zip(out.double_terms()) {
            assert_eq!(s0, s1);
        }
        for (s0, s1) in g.simple_terms().zip(out.simple_terms()) {
            assert_eq!(s0, s1);
        }
    }

    #[test]
    fn sine_kernel_kills_integer_pole() {
        // K(s) = sin(pi s) on 1/(s+1): coefficient sin(-pi) = 0, term vanishes
        let s = JSeries::monomial(spec(&[1.0]), 1, 0, c(1.0, 0.0)).unwrap();
        let g = MellinRep::forward(&s);
        let out = apply_kernel(&g, &Kernel::sin(std::f64::consts::PI));
        assert!(out.is_empty());
    }

    #[test]
    fn sine_kernel_on_double_term_laurent_oracle() {
        // K = sin(pi s) on 1/((s+1)(s+1/2)): pole at -1 dies, residue at -1/2
        // becomes sin(-pi/2)/( -1/2 + 1 ) = -2
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(AKey { p: 1, q: 1, i: 0, j: 1 }, c(-1.0, 0.0))],
            vec![],
        )
        .unwrap();
        let g = MellinRep::forward(&s); // +1/((s+1)(s+1/2))
        let out = apply_kernel(&g, &Kernel::sin(std::f64::consts::PI));
        let pp = out.principal_parts();
        assert_eq!(pp.len(), 1, "pole at -1 must be annihilated: {pp:?}");
        assert!((pp[0].location + 0.5).abs() < 1e-14);
        assert!((pp[0].residue.re + 2.0).abs() < 1e-13);
        assert!(pp[0].second_order.norm() < 1e-15);
    }

    #[test]
    fn kernel_composition_matches_product_polewise() {
        let s = JSeries::exact(
            spec(&[1.0, 1.618]),
            1,
            vec![
                (AKey { p: 1, q: 2, i: 0, j: 1 }, c(0.3, -0.2)),
                (AKey { p: 0, q: 0, i: 0, j: 0 }, c(0.1, 0.0)),
            ],
            vec![(BKey { r: 2, i: 1 }, c(0.7, 0.1))],
        )
        .unwrap();
        let g = MellinRep::forward(&s);
        let k1 = Kernel::sin(0.9);
        let k2 = Kernel::exp_rotation(0.4);
        let seq = apply_kernel(&apply_kernel(&g, &k1), &k2);
        let prod = apply_kernel(&g, &k1.product(&k2));
        let pp_seq = seq.principal_parts();
        let pp_prod = prod.principal_parts();
        assert_eq!(pp_seq.len(), pp_prod.len());
        for (a, b) in pp_seq.iter().zip(pp_prod.iter()) {
            assert!((a.location - b.location).abs() < 1e-12);
            assert!((a.residue - b.residue).norm() < 1e-12);
            assert!((a.second_order - b.second_order).norm() < 1e-12);
        }
    }

    #[test]
    fn petrov_series_zero_cases() {
        // kappa = 0 gives the zero series
        let s = JSeries::exact(
            spec(&[1.0]),
            0,
            vec![],
            vec![(BKey { r: 1, i: 0 }, c(1.0, 0.0))],
        )
        .unwrap();
        assert!(petrov_series(&s, 0.0).unwrap().is_zero());
        // b_{1, lambda=1}, kappa = pi: sin(pi) = 0 kills the series
        assert!(petrov_series(&s, std::f64::consts::PI).unwrap().is_zero());
    }

    #[test]
    fn petrov_series_matches_analytic_definition() {
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(AKey { p: 1, q: 1, i: 0, j: 1 }, c(0.8, 0.0))],
            vec![(BKey { r: 1, i: 0 }, c(1.0, 0.0)), (BKey { r: 3, i: 1 }, c(-0.4, 0.0))],
        )
        .unwrap();
        let kappa = 0.7;
        let ps = petrov_series(&s, kappa).unwrap();
        for &t in &[0.2, 0.5, 0.8] {
            let minus = s
                .evaluate(SectorPoint::new(t, -kappa).unwrap())
                .unwrap()
                .value;
            let plus = s
                .evaluate(SectorPoint::new(t, kappa).unwrap())
                .unwrap()
                .value;
            let direct = (minus - plus) / c(0.0, 2.0);
            let via = ps.eval_real(t).unwrap();
            assert!((direct - via).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn rotation_kernel_realizes_shift() {
        // apply_kernel with e^{-i kappa s} then invert structurally: the
        // series evaluates to f(e^{i kappa} t)
        let s = JSeries::exact(
            spec(&[1.0, 2.0]),
            0,
            vec![(AKey { p: 1, q: 1, i: 0, j: 1 }, c(0.5, 0.0))],
            vec![(BKey { r: 2, i: 0 }, c(1.0, 0.0))],
        )
        .unwrap();
        let kappa = 0.45;
        let shifted = apply_kernel(&MellinRep::forward(&s), &Kernel::exp_rotation(kappa))
            .to_series()
            .unwrap();
        for &t in &[0.3, 0.6] {
            let direct = s
                .evaluate(SectorPoint::new(t, kappa).unwrap())
                .unwrap()
                .value;
            let via = shifted.eval_real(t).unwrap();
            assert!((direct - via).norm() < 1e-13);
        }
    }
}
