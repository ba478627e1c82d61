//! Property tests for the spec-level invariants.

mod common;

use common::{random_series, GenOptions};
use proptest::prelude::*;
use pseudoabel::float::c;
use pseudoabel::io;
use pseudoabel::jseries::compensator::{compensator_eval, compensator_exponents};
use pseudoabel::jseries::SectorPoint;
use pseudoabel::mellin::{petrov_series, Kernel, MellinRep};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    /// Swapping the two exponent slots leaves the compensator bitwise equal.
    #[test]
    fn compensator_symmetry_exact(
        p in 1i64..8,
        q in 1i64..8,
        lambda in 0.5f64..2.5,
        mu in 0.5f64..2.5,
        t in 0.05f64..0.99,
        arg in -1.0f64..1.0,
    ) {
        let point = SectorPoint::new(t, arg).unwrap();
        let a = compensator_eval(p, q, lambda, mu, point).unwrap();
        let b = compensator_eval(q, p, mu, lambda, point).unwrap();
        prop_assert_eq!(a, b);
    }

    /// |t^{-gamma} l| <= |log t| with gamma the smaller exponent.
    #[test]
    fn compensator_bound(
        x in 0.1f64..4.0,
        y in 0.1f64..4.0,
        t in 0.01f64..0.99,
    ) {
        let point = SectorPoint::real(t).unwrap();
        let ell = compensator_exponents(x, y, point);
        let gamma = x.min(y);
        let lhs = t.powf(-gamma) * ell.norm();
        prop_assert!(lhs <= t.ln().abs() * (1.0 + 1e-12),
            "lhs {} vs |log t| {}", lhs, t.ln().abs());
    }

    /// Near resonance the compensator approaches the log branch linearly.
    #[test]
    fn compensator_resonance_continuity(
        x in 0.2f64..3.0,
        t in 0.05f64..0.9,
    ) {
        let point = SectorPoint::real(t).unwrap();
        let resonant = t.powf(x) * t.ln();
        let near = compensator_exponents(x + 1e-12, x, point);
        prop_assert!((near.re - resonant).abs() <= 1e-10 * resonant.abs(),
            "{} vs {}", near.re, resonant);
    }

    /// Kernel divided differences: symmetric, and the diagonal equals the
    /// derivative.
    #[test]
    fn kernel_divdiff_invariants(
        kappa in 0.1f64..3.0,
        u in -4.0f64..4.0,
        v in -4.0f64..4.0,
    ) {
        let k = Kernel::sin(kappa);
        prop_assert_eq!(k.div_diff(u, v), k.div_diff(v, u));
        prop_assert_eq!(k.div_diff(u, u), k.deriv_at(u));
        // secant consistency away from the diagonal
        if (u - v).abs() > 1e-3 {
            let secant = ((kappa * u).sin() - (kappa * v).sin()) / (u - v);
            prop_assert!((k.div_diff(u, v).re - secant).abs() <= 1e-10 * (1.0 + secant.abs()));
        }
    }

    /// Rotations compose additively on evaluation.
    #[test]
    fn rotation_composition(seed in 0u64..1000, k1 in -0.6f64..0.6, k2 in -0.6f64..0.6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = random_series(&mut rng, &GenOptions::default());
        let once = series.rotate(k1 + k2).unwrap();
        let twice = series.rotate(k1).unwrap().rotate(k2).unwrap();
        for &t in &[0.25, 0.5, 0.75] {
            let a = once.eval_real(t).unwrap();
            let b = twice.eval_real(t).unwrap();
            prop_assert!((a - b).norm() <= 1e-8, "t {}: {} vs {}", t, a, b);
        }
    }

    /// Real series evaluate real on the real interval.
    #[test]
    fn reality_on_interval(seed in 0u64..1000, t in 0.01f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = random_series(&mut rng, &GenOptions { real_only: true, ..Default::default() });
        let v = series.eval_real(t).unwrap();
        prop_assert!(v.im.abs() <= 1e-13 * v.re.abs().max(1.0));
    }

    /// Petrov of a real series is real on the interval.
    #[test]
    fn petrov_reality(seed in 0u64..500, t in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = random_series(&mut rng, &GenOptions { real_only: true, ..Default::default() });
        let ps = petrov_series(&series, 0.8).unwrap();
        let v = ps.eval_real(t).unwrap();
        prop_assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1.0));
    }

    /// Structural Mellin round trip is coefficient-exact.
    #[test]
    fn mellin_structural_round_trip(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = random_series(&mut rng, &GenOptions::default());
        let back = MellinRep::forward(&series).to_series().unwrap();
        prop_assert_eq!(series, back);
    }

    /// JSON serialization round trip is bit-exact.
    #[test]
    fn json_round_trip_bit_exact(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let series = random_series(&mut rng, &GenOptions { truncated: seed % 2 == 0, ..Default::default() });
        let text = io::series_to_json(&series);
        let back = io::series_from_json(&text).unwrap();
        prop_assert_eq!(&series, &back);
        // every coefficient byte-identical
        for ((k1, v1), (k2, v2)) in series.a_terms().zip(back.a_terms()) {
            prop_assert_eq!(k1, k2);
            prop_assert_eq!(v1.re.to_bits(), v2.re.to_bits());
            prop_assert_eq!(v1.im.to_bits(), v2.im.to_bits());
        }
        for ((k1, v1), (k2, v2)) in series.b_terms().zip(back.b_terms()) {
            prop_assert_eq!(k1, k2);
            prop_assert_eq!(v1.re.to_bits(), v2.re.to_bits());
            prop_assert_eq!(v1.im.to_bits(), v2.im.to_bits());
        }
    }
}

#[test]
fn compensator_rejects_bad_exponents() {
    let point = SectorPoint::real(0.5).unwrap();
    assert!(compensator_eval(1, 1, -1.0, 1.0, point).is_err());
    assert!(compensator_eval(1, 1, 1.0, 0.0, point).is_err());
}

#[test]
fn rotated_series_keeps_certificate_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let series = random_series(&mut rng, &GenOptions::default());
    let rot = series.rotate(1.2).unwrap();
    assert_eq!(
        rot.certificate().rho(),
        series.certificate().rho(),
        "real rotations keep the decay rate"
    );
    // and the constant still covers every stored coefficient
    let c0 = rot.certificate().c();
    let rho = rot.certificate().rho();
    for (k, v) in rot.a_terms() {
        assert!(v.norm() <= c0 * rho.powi(-((k.p + k.q) as i32)) * (1.0 + 1e-9));
    }
    for (k, v) in rot.b_terms() {
        assert!(v.norm() <= c0 * rho.powi(-(k.r as i32)) * (1.0 + 1e-9));
    }
}

#[test]
fn scaled_series_scales_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let series = random_series(&mut rng, &GenOptions::default());
    let scaled = series.scaled(c(2.0, 0.0)).unwrap();
    let t = 0.4;
    let a = series.eval_real(t).unwrap();
    let b = scaled.eval_real(t).unwrap();
    assert!((b - a * 2.0).norm() < 1e-14 * a.norm().max(1.0));
}
