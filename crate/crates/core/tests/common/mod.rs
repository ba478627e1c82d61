//! Shared test infrastructure: arbitrary-precision oracles built on
//! astro-float and a configurable random-series generator.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use num_complex::Complex64;
use pseudoabel::float::c;
use pseudoabel::jseries::{AKey, BKey, DecayCertificate, SectorPoint, Spectrum};
use pseudoabel::JSeries64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const PREC: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

/// Complex arithmetic over BigFloat, enough for the oracles.
#[derive(Clone, Debug)]
pub struct CBig {
    pub re: BigFloat,
    pub im: BigFloat,
}

pub fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

impl CBig {
    pub fn from_c(z: Complex64) -> Self {
        Self {
            re: bf(z.re),
            im: bf(z.im),
        }
    }

    pub fn real(x: f64) -> Self {
        Self {
            re: bf(x),
            im: bf(0.0),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            re: self.re.add(&o.re, PREC, RM),
            im: self.im.add(&o.im, PREC, RM),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            re: self.re.sub(&o.re, PREC, RM),
            im: self.im.sub(&o.im, PREC, RM),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let rr = self.re.mul(&o.re, PREC, RM);
        let ii = self.im.mul(&o.im, PREC, RM);
        let ri = self.re.mul(&o.im, PREC, RM);
        let ir = self.im.mul(&o.re, PREC, RM);
        Self {
            re: rr.sub(&ii, PREC, RM),
            im: ri.add(&ir, PREC, RM),
        }
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Self {
            re: self.re.mul(s, PREC, RM),
            im: self.im.mul(s, PREC, RM),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        let n2 = o
            .re
            .mul(&o.re, PREC, RM)
            .add(&o.im.mul(&o.im, PREC, RM), PREC, RM);
        let num = self.mul(&Self {
            re: o.re.clone(),
            im: o.im.neg(),
        });
        Self {
            re: num.re.div(&n2, PREC, RM),
            im: num.im.div(&n2, PREC, RM),
        }
    }

    /// `e^self` via `e^re (cos im + i sin im)`.
    pub fn exp(&self, cc: &mut Consts) -> Self {
        let mag = self.re.exp(PREC, RM, cc);
        let cos = self.im.cos(PREC, RM, cc);
        let sin = self.im.sin(PREC, RM, cc);
        Self {
            re: mag.mul(&cos, PREC, RM),
            im: mag.mul(&sin, PREC, RM),
        }
    }

    pub fn norm(&self) -> BigFloat {
        self.re
            .mul(&self.re, PREC, RM)
            .add(&self.im.mul(&self.im, PREC, RM), PREC, RM)
            .sqrt(PREC, RM)
    }

    /// Nearest-f64 approximation (through a decimal string round-trip).
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(bf_to_f64(&self.re), bf_to_f64(&self.im))
    }
}

pub fn bf_to_f64(x: &BigFloat) -> f64 {
    // format! on BigFloat produces a decimal string f64 can parse
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}

pub fn bf_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(ord) if ord <= 0)
}

/// `log t` on the universal cover at a sector point, in big precision.
pub fn big_log_t(point: SectorPoint<f64>, cc: &mut Consts) -> CBig {
    CBig {
        re: bf(point.modulus()).ln(PREC, RM, cc),
        im: bf(point.argument()),
    }
}

/// `t^alpha` at a sector point for a big-precision exponent.
pub fn big_pow(log_t: &CBig, alpha: &BigFloat, cc: &mut Consts) -> CBig {
    log_t.scale(alpha).exp(cc)
}

/// Arbitrary-precision compensator: `(t^x - t^y)/(x - y)` with the genuinely
/// resonant case `t^x log t`, evaluated with 256-bit arithmetic. `x`, `y` are
/// computed from the integer indices and the exact f64 exponents.
pub fn big_compensator(
    p: i64,
    q: i64,
    lambda: f64,
    mu: f64,
    point: SectorPoint<f64>,
    cc: &mut Consts,
) -> CBig {
    let x = bf(p as f64).div(&bf(lambda), PREC, RM);
    let y = bf(q as f64).div(&bf(mu), PREC, RM);
    let log_t = big_log_t(point, cc);
    let delta = x.sub(&y, PREC, RM);
    if delta.is_zero() {
        return big_pow(&log_t, &x, cc).mul(&log_t);
    }
    let tx = big_pow(&log_t, &x, cc);
    let ty = big_pow(&log_t, &y, cc);
    tx.sub(&ty).div(&CBig {
        re: delta,
        im: bf(0.0),
    })
}

/// Termwise arbitrary-precision evaluation of a J-series at a sector point.
pub fn big_series_eval(series: &JSeries64, point: SectorPoint<f64>, cc: &mut Consts) -> CBig {
    let mut acc = CBig::real(0.0);
    let log_t = big_log_t(point, cc);
    for (k, coeff) in series.a_terms() {
        let lam = series.spectrum().lambda(k.i);
        let mu = series.spectrum().lambda(k.j);
        let ell = big_compensator(k.p, k.q, lam, mu, point, cc);
        acc = acc.add(&ell.mul(&CBig::from_c(*coeff)));
    }
    for (k, coeff) in series.b_terms() {
        let lam = series.spectrum().lambda(k.i);
        let alpha = bf(k.r as f64).div(&bf(lam), PREC, RM);
        let pow = big_pow(&log_t, &alpha, cc);
        acc = acc.add(&pow.mul(&CBig::from_c(*coeff)));
    }
    acc
}

/// Arbitrary-precision evaluation of a structured Mellin representation.
pub fn big_mellin_eval(
    g: &pseudoabel::MellinRep64,
    s: Complex64,
    cc: &mut Consts,
) -> CBig {
    let _ = cc;
    let sb = CBig::from_c(s);
    let mut acc = CBig::real(0.0);
    for (k, coeff) in g.double_terms() {
        let x = bf(k.p as f64).div(&bf(g.spectrum().lambda(k.i)), PREC, RM);
        let y = bf(k.q as f64).div(&bf(g.spectrum().lambda(k.j)), PREC, RM);
        let dx = sb.add(&CBig { re: x, im: bf(0.0) });
        let dy = sb.add(&CBig { re: y, im: bf(0.0) });
        acc = acc.add(&CBig::from_c(*coeff).div(&dx.mul(&dy)));
    }
    for (k, coeff) in g.simple_terms() {
        let x = bf(k.r as f64).div(&bf(g.spectrum().lambda(k.i)), PREC, RM);
        let dx = sb.add(&CBig { re: x, im: bf(0.0) });
        acc = acc.add(&CBig::from_c(*coeff).div(&dx));
    }
    acc
}

/// Options for the random series generator.
#[derive(Clone, Debug)]
pub struct GenOptions {
    pub n_max: usize,
    pub index_max: i64,
    pub m_max: u32,
    pub real_only: bool,
    /// Restrict compensators to distinct spectrum slots (the geometric case).
    pub cross_slot_only: bool,
    /// Minimal gap between cross-progression ladder points; 0 disables.
    pub min_ladder_gap: f64,
    pub truncated: bool,
    pub max_a_terms: usize,
    pub max_b_terms: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        Self {
            n_max: 3,
            index_max: 16,
            m_max: 1,
            real_only: false,
            cross_slot_only: false,
            min_ladder_gap: 0.0,
            truncated: false,
            max_a_terms: 6,
            max_b_terms: 5,
        }
    }
}

fn random_spectrum(rng: &mut ChaCha8Rng, o: &GenOptions) -> Spectrum<f64> {
    let n = rng.gen_range(1..=o.n_max);
    'outer: for _ in 0..5000 {
        let lambdas: Vec<f64> = (0..n).map(|_| rng.gen_range(0.6..2.4)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if (lambdas[i] - lambdas[j]).abs() < 0.03 * lambdas[i].max(lambdas[j]) {
                    continue 'outer;
                }
            }
        }
        if o.min_ladder_gap > 0.0 {
            let top = o.index_max + 2;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    for r in 1..=top {
                        for q in 1..=top {
                            let gap =
                                (r as f64 / lambdas[i] - q as f64 / lambdas[j]).abs();
                            if gap < o.min_ladder_gap {
                                continue 'outer;
                            }
                        }
                    }
                }
            }
        }
        return Spectrum::new(lambdas).unwrap();
    }
    panic!("spectrum generation failed; constraints too tight");
}

/// Random J-series within the generator constraints. Coefficients respect a
/// random decay certificate, and the series is real when requested.
pub fn random_series(rng: &mut ChaCha8Rng, o: &GenOptions) -> JSeries64 {
    let spectrum = random_spectrum(rng, o);
    let n = spectrum.len();
    let m = if o.m_max == 0 { 0 } else { rng.gen_range(0..=o.m_max) };
    let min_idx = 1 - m as i64;
    let rho: f64 = rng.gen_range(2.5..5.0);
    let coeff = |rng: &mut ChaCha8Rng, scale: f64| -> num_complex::Complex<f64> {
        let mag = rng.gen_range(0.1..1.0) * scale;
        if o.real_only {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            c(sign * mag, 0.0)
        } else {
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            c(mag * phase.cos(), mag * phase.sin())
        }
    };

    let mut a_terms = Vec::new();
    if n >= 2 || !o.cross_slot_only {
        let count = rng.gen_range(0..=o.max_a_terms);
        for _ in 0..count {
            let p = rng.gen_range(min_idx..=(o.index_max - 1).max(min_idx));
            let q_hi = (o.index_max - p.max(0)).max(min_idx);
            let q = rng.gen_range(min_idx..=q_hi);
            let i = rng.gen_range(0..n);
            let j = if o.cross_slot_only {
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                j
            } else {
                rng.gen_range(0..n)
            };
            let scale = rho.powi(-((p + q) as i32));
            a_terms.push((AKey { p, q, i, j }, coeff(rng, scale)));
        }
    }
    let mut b_terms = Vec::new();
    for _ in 0..rng.gen_range(1..=o.max_b_terms) {
        let r = rng.gen_range(min_idx..=o.index_max);
        let i = rng.gen_range(0..n);
        let scale = rho.powi(-(r as i32));
        b_terms.push((BKey { r, i }, coeff(rng, scale)));
    }

    // covering constant over the aggregated coefficient tables
    use std::collections::BTreeMap;
    let mut agg_a: BTreeMap<AKey, Complex64> = BTreeMap::new();
    for (k, v) in &a_terms {
        *agg_a.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += v;
    }
    let mut agg_b: BTreeMap<BKey, Complex64> = BTreeMap::new();
    for (k, v) in &b_terms {
        *agg_b.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += v;
    }
    let mut cmax: f64 = 1.0;
    for (k, v) in &agg_a {
        cmax = cmax.max(v.norm() * rho.powi((k.p + k.q) as i32) * 1.2);
    }
    for (k, v) in &agg_b {
        cmax = cmax.max(v.norm() * rho.powi(k.r as i32) * 1.2);
    }
    JSeries64::new(
        spectrum,
        m,
        a_terms,
        b_terms,
        DecayCertificate::new(cmax, rho).unwrap(),
        o.truncated.then_some(o.index_max),
    )
    .unwrap()
}

pub fn assert_close_c(a: Complex64, b: Complex64, tol: f64, what: &str) {
    assert!(
        (a - b).norm() <= tol,
        "{what}: {a} vs {b} (|diff| = {}, tol {tol})",
        (a - b).norm()
    );
}
