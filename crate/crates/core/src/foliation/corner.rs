//! Saddle-corner machinery: the local leaf in linearized coordinates, its
//! monomial integrals, and the explicit linearizing map at a transversal
//! corner.

use super::{DarbouxSystem, FoliationError};
use crate::float::Real;
use crate::jseries::compensator::compensator_eval;
use crate::jseries::SectorPoint;

/// Sampled arc of the local leaf `y = t^{1/mu} x^{-lambda/mu}` for
/// `x in (t^{1/lambda}, 1)`, log-spaced. The endpoints land on the
/// cross-sections `{x = 1}` and `{y = 1}`.
pub fn corner_curve<T: Real>(
    lambda: T,
    mu: T,
    t: T,
    x_range: Option<(T, T)>,
    samples: usize,
) -> Result<Vec<[T; 2]>, FoliationError> {
    if !(lambda > T::zero() && mu > T::zero()) {
        return Err(FoliationError::InvalidSystem(
            "corner exponents must be positive".into(),
        ));
    }
    if !(t > T::zero() && t < T::one()) {
        return Err(FoliationError::InvalidSystem(format!(
            "corner level t must lie in (0,1), got {}",
            t.to_f64_lossy()
        )));
    }
    let (x_lo, x_hi) = x_range.unwrap_or((t.powf(T::one() / lambda), T::one()));
    let n = samples.max(2);
    let log_lo = x_lo.ln();
    let log_hi = x_hi.ln();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let u = T::of(k as f64) / T::of((n - 1) as f64);
        let x = (log_lo + (log_hi - log_lo) * u).exp();
        let y = t.powf(T::one() / mu) * x.powf(-lambda / mu);
        out.push([x, y]);
    }
    Ok(out)
}

/// Closed form of `int x^{p-1} y^q dx` along the corner curve: the stable
/// compensator formula `-(1/lambda) l_{pq,lambda,mu}(t)`, exact in both the
/// separated and resonant regimes.
pub fn corner_monomial_integral<T: Real>(
    p: i64,
    q: i64,
    lambda: T,
    mu: T,
    t: T,
) -> Result<T, FoliationError> {
    if !(t > T::zero() && t < T::one()) {
        return Err(FoliationError::InvalidSystem(format!(
            "corner level t must lie in (0,1), got {}",
            t.to_f64_lossy()
        )));
    }
    let ell = compensator_eval(p, q, lambda, mu, SectorPoint::real(t)?)?;
    Ok(-ell.re / lambda)
}

/// Local linearization at a transversal corner: the forward map
/// `psi(x, y) = (p_i, p_j prod_{k != i,j} p_k^{lambda_k / lambda_j})` turns
/// the first integral into the exact monomial `xt^{lambda_i} yt^{lambda_j}`;
/// the inverse is a certified Newton iteration on a box.
#[derive(Clone)]
pub struct LinearizedCorner<T: Real> {
    sys: DarbouxSystem<T>,
    pub i: usize,
    pub j: usize,
    pub corner: [T; 2],
    /// Certified box `[0, box_size]^2` in the linearized coordinates.
    pub box_size: T,
    /// Max relative defect of `f(psi^{-1}) / (xt^{lam_i} yt^{lam_j}) - 1`
    /// observed on the certification grid.
    pub monomiality_residual: T,
}

impl<T: Real> std::fmt::Debug for LinearizedCorner<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearizedCorner")
            .field("i", &self.i)
            .field("j", &self.j)
            .field("corner", &self.corner)
            .field("box_size", &self.box_size)
            .field("monomiality_residual", &self.monomiality_residual)
            .finish()
    }
}

impl<T: Real> LinearizedCorner<T> {
    /// Forward map `(x, y) -> (xt, yt)`.
    pub fn forward(&self, x: T, y: T) -> Result<[T; 2], FoliationError> {
        let pi = self.sys.polys()[self.i].eval(x, y);
        let pj = self.sys.polys()[self.j].eval(x, y);
        let mut rest = T::one();
        let lam_j = self.sys.exponents().lambda(self.j);
        for (k, p) in self.sys.polys().iter().enumerate() {
            if k == self.i || k == self.j {
                continue;
            }
            let v = p.eval(x, y);
            if v <= T::zero() {
                return Err(FoliationError::BranchError {
                    index: k,
                    value: v.to_f64_lossy(),
                });
            }
            rest = rest * v.powf(self.sys.exponents().lambda(k) / lam_j);
        }
        Ok([pi, pj * rest])
    }

    /// Gradient of the second forward component.
    fn grad_second(&self, x: T, y: T) -> Result<[T; 2], FoliationError> {
        let lam_j = self.sys.exponents().lambda(self.j);
        let pj = self.sys.polys()[self.j].eval(x, y);
        let gj = self.sys.gradient_of(self.j, x, y);
        let mut rest = T::one();
        let mut rest_log_grad = [T::zero(); 2];
        for (k, p) in self.sys.polys().iter().enumerate() {
            if k == self.i || k == self.j {
                continue;
            }
            let v = p.eval(x, y);
            if v <= T::zero() {
                return Err(FoliationError::BranchError {
                    index: k,
                    value: v.to_f64_lossy(),
                });
            }
            let w = self.sys.exponents().lambda(k) / lam_j;
            rest = rest * v.powf(w);
            let g = self.sys.gradient_of(k, x, y);
            rest_log_grad[0] = rest_log_grad[0] + w * g[0] / v;
            rest_log_grad[1] = rest_log_grad[1] + w * g[1] / v;
        }
        Ok([
            gj[0] * rest + pj * rest * rest_log_grad[0],
            gj[1] * rest + pj * rest * rest_log_grad[1],
        ])
    }

    /// Newton inverse of the forward map, valid inside the certified box.
    pub fn inverse(&self, xt: T, yt: T) -> Result<[T; 2], FoliationError> {
        let mut p = self.corner;
        let scale = self.sys.region().diameter();
        for _ in 0..80 {
            let fw = self.forward(p[0], p[1])?;
            let rx = fw[0] - xt;
            let ry = fw[1] - yt;
            let gi = self.sys.gradient_of(self.i, p[0], p[1]);
            let g2 = self.grad_second(p[0], p[1])?;
            let det = gi[0] * g2[1] - gi[1] * g2[0];
            if det.abs() < T::of(1e-300) {
                return Err(FoliationError::InversionDiverged);
            }
            let dx = (rx * g2[1] - ry * gi[1]) / det;
            let dy = (ry * gi[0] - rx * g2[0]) / det;
            p[0] = p[0] - dx;
            p[1] = p[1] - dy;
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(FoliationError::InversionDiverged);
            }
            if dx.abs() + dy.abs() < scale * T::of(1e-15) {
                return Ok(p);
            }
        }
        Err(FoliationError::InversionDiverged)
    }
}

/// Builds the linearization at the recorded corner of curves `i` and `j` and
/// certifies a box on which the inverse converges and the first integral is
/// the exact monomial. `order` controls the certification grid density.
pub fn linearize_corner<T: Real>(
    sys: &DarbouxSystem<T>,
    pair: (usize, usize),
    order: usize,
) -> Result<LinearizedCorner<T>, FoliationError> {
    let (i, j) = pair;
    let corner = sys
        .corners()
        .iter()
        .find(|c| (c.i, c.j) == (i, j) || (c.i, c.j) == (j, i))
        .map(|c| c.point)
        .ok_or(FoliationError::NoSuchCorner { i, j })?;

    let mut lc = LinearizedCorner {
        sys: sys.clone(),
        i,
        j,
        corner,
        box_size: T::zero(),
        monomiality_residual: T::zero(),
    };

    // probe for a nearby point with positive linearized coordinates to size
    // the box; try the region interior first, then the diagonals
    let delta = sys.region().diameter() * T::of(0.05);
    let interior = sys.region().center();
    let mut dirs = vec![[interior[0] - corner[0], interior[1] - corner[1]]];
    for d in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
        dirs.push([T::of(d[0]), T::of(d[1])]);
    }
    let mut beta = T::zero();
    for dirv in dirs {
        let dn = (dirv[0] * dirv[0] + dirv[1] * dirv[1]).sqrt();
        if dn == T::zero() {
            continue;
        }
        let probe = [
            corner[0] + delta * dirv[0] / dn,
            corner[1] + delta * dirv[1] / dn,
        ];
        if let Ok(fw) = lc.forward(probe[0], probe[1]) {
            if fw[0] > T::zero() && fw[1] > T::zero() {
                beta = fw[0].min(fw[1]);
                break;
            }
        }
    }
    if !(beta > T::zero()) {
        return Err(FoliationError::InversionDiverged);
    }

    let lam_i = sys.exponents().lambda(i);
    let lam_j = sys.exponents().lambda(j);
    let grid = order.max(3);
    for _ in 0..30 {
        let mut worst = T::zero();
        let mut ok = true;
        'grid: for a in 0..=grid {
            for b in 0..=grid {
                let xt = beta * T::of(a as f64) / T::of(grid as f64);
                let yt = beta * T::of(b as f64) / T::of(grid as f64);
                let p = match lc.inverse(xt, yt) {
                    Ok(p) => p,
                    Err(_) => {
                        ok = false;
                        break 'grid;
                    }
                };
                let fw = match lc.forward(p[0], p[1]) {
                    Ok(v) => v,
                    Err(_) => {
                        ok = false;
                        break 'grid;
                    }
                };
                let round_trip = (fw[0] - xt).abs() + (fw[1] - yt).abs();
                if round_trip > beta * T::of(1e-9) {
                    ok = false;
                    break 'grid;
                }
                if xt > T::zero() && yt > T::zero() {
                    match lc.sys.first_integral(p[0], p[1]) {
                        Ok(f) => {
                            let mono = xt.powf(lam_i) * yt.powf(lam_j);
                            let defect = (f / mono - T::one()).abs();
                            worst = worst.max(defect);
                            if defect > T::of(1e-8) {
                                ok = false;
                                break 'grid;
                            }
                        }
                        Err(_) => {
                            ok = false;
                            break 'grid;
                        }
                    }
                }
            }
        }
        if ok {
            lc.box_size = beta;
            lc.monomiality_residual = worst;
            return Ok(lc);
        }
        beta = beta * T::of(0.6);
    }
    Err(FoliationError::InversionDiverged)
}
