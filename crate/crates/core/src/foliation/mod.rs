//! Darbouxian integrable systems on the plane and their closed level curves.
//!
//! A system is a list of real bivariate polynomials `p_j` with positive
//! exponents `lambda_j`; the multivalued first integral is
//! `f = prod p_j^{lambda_j}` and the dual logarithmic form is
//! `theta = sum lambda_j dp_j / p_j`. Ovals are sought in a connected
//! component where every `p_j > 0` and accumulate on the separatrix
//! `{prod p_j = 0}` as the level goes to zero.

pub mod corner;
pub mod integrate;
pub mod poly;
pub mod trace;

use crate::float::Real;
use crate::jseries::JSeriesError;
use poly::BivariatePoly;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FoliationError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("polynomial {index} is nonpositive ({value}) at the evaluation point")]
    BranchError { index: usize, value: f64 },
    #[error("point lies on the separatrix (p_{index} = 0)")]
    OnSeparatrix { index: usize },
    #[error("curves {i} and {j} intersect non-transversally near ({x}, {y})")]
    TransversalityFailure { i: usize, j: usize, x: f64, y: f64 },
    #[error("no center found from the given seed")]
    NoCenterFound,
    #[error("level {t} is not inside the oval range (0, {t_center})")]
    LevelOutOfRange { t: f64, t_center: f64 },
    #[error("trace did not close after {steps} steps")]
    TraceDiverged { steps: usize },
    #[error("step size collapsed near a saddle (h = {h})")]
    SaddleTooClose { h: f64 },
    #[error("1-form has a pole on the oval (p_{index} <= 0 at a quadrature node)")]
    PoleOnOval { index: usize },
    #[error("local inverse iteration failed to certify a box")]
    InversionDiverged,
    #[error("no transversal corner recorded for curve pair ({i}, {j})")]
    NoSuchCorner { i: usize, j: usize },
    #[error(transparent)]
    Series(#[from] JSeriesError),
}

/// Rectangular region of interest `[x_min, x_max] x [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T: Real> {
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
}

impl<T: Real> Region<T> {
    pub fn new(x_min: T, x_max: T, y_min: T, y_max: T) -> Result<Self, FoliationError> {
        if !(x_min < x_max && y_min < y_max) {
            return Err(FoliationError::InvalidSystem("degenerate region box".into()));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn diameter(&self) -> T {
        let dx = self.x_max - self.x_min;
        let dy = self.y_max - self.y_min;
        (dx * dx + dy * dy).sqrt()
    }

    pub fn center(&self) -> [T; 2] {
        [
            (self.x_min + self.x_max) * T::of(0.5),
            (self.y_min + self.y_max) * T::of(0.5),
        ]
    }
}

/// Positive Darboux exponents of a foliation. Unlike the J-series spectrum,
/// repeats are allowed: distinct separatrix curves may carry equal weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxExponents<T: Real> {
    lambdas: Vec<T>,
}

impl<T: Real> DarbouxExponents<T> {
    pub fn new(lambdas: Vec<T>) -> Result<Self, FoliationError> {
        if lambdas.is_empty() {
            return Err(FoliationError::InvalidSystem("no exponents".into()));
        }
        for &l in &lambdas {
            if !(l > T::zero()) || !l.is_finite() {
                return Err(FoliationError::InvalidSystem(format!(
                    "exponent {l} is not a positive finite real"
                )));
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

    pub fn lambda(&self, j: usize) -> T {
        self.lambdas[j]
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }
}

/// A transversal intersection of two separatrix curves inside the region.
#[derive(Debug, Clone, Copy)]
pub struct Corner<T: Real> {
    pub i: usize,
    pub j: usize,
    pub point: [T; 2],
    /// `|det(grad p_i, grad p_j)| / (|grad p_i| |grad p_j|)` at the point.
    pub transversality_margin: T,
}

/// Darbouxian system: polynomials, exponents, and a region of interest in
/// which intersections were located and certified transversal.
#[derive(Debug, Clone)]
pub struct DarbouxSystem<T: Real> {
    polys: Vec<BivariatePoly<T>>,
    grads: Vec<(BivariatePoly<T>, BivariatePoly<T>)>,
    exponents: DarbouxExponents<T>,
    region: Region<T>,
    corners: Vec<Corner<T>>,
}

impl<T: Real> DarbouxSystem<T> {
    pub fn new(
        polys: Vec<BivariatePoly<T>>,
        exponents: DarbouxExponents<T>,
        region: Region<T>,
    ) -> Result<Self, FoliationError> {
        if polys.len() != exponents.len() {
            return Err(FoliationError::InvalidSystem(format!(
                "{} polynomials vs {} exponents",
                polys.len(),
                exponents.len()
            )));
        }
        for (j, p) in polys.iter().enumerate() {
            if p.is_constant() {
                return Err(FoliationError::InvalidSystem(format!(
                    "p_{j} is constant"
                )));
            }
        }
        // reject proportional pairs (shared components)
        for i in 0..polys.len() {
            for j in (i + 1)..polys.len() {
                if proportional(&polys[i], &polys[j]) {
                    return Err(FoliationError::InvalidSystem(format!(
                        "p_{i} and p_{j} are proportional"
                    )));
                }
            }
        }
        let grads = polys.iter().map(|p| (p.dx(), p.dy())).collect();
        let mut sys = Self {
            polys,
            grads,
            exponents,
            region,
            corners: vec![],
        };
        sys.corners = sys.locate_corners()?;
        Ok(sys)
    }

    pub fn polys(&self) -> &[BivariatePoly<T>] {
        &self.polys
    }

    pub fn exponents(&self) -> &DarbouxExponents<T> {
        &self.exponents
    }

    pub fn region(&self) -> Region<T> {
        self.region
    }

    pub fn corners(&self) -> &[Corner<T>] {
        &self.corners
    }

    pub fn gradient_of(&self, j: usize, x: T, y: T) -> [T; 2] {
        [self.grads[j].0.eval(x, y), self.grads[j].1.eval(x, y)]
    }

    /// `f(x, y) = prod p_j^{lambda_j}` through `exp(sum lambda_j log p_j)`.
    pub fn first_integral(&self, x: T, y: T) -> Result<T, FoliationError> {
        Ok(self.log_first_integral(x, y)?.exp())
    }

    /// `log f = sum lambda_j log p_j`; requires every `p_j > 0`.
    pub fn log_first_integral(&self, x: T, y: T) -> Result<T, FoliationError> {
        let mut acc = T::zero();
        for (j, p) in self.polys.iter().enumerate() {
            let v = p.eval(x, y);
            if v <= T::zero() {
                return Err(FoliationError::BranchError {
                    index: j,
                    value: v.to_f64_lossy(),
                });
            }
            acc = acc + self.exponents.lambda(j) * v.ln();
        }
        Ok(acc)
    }

    /// `theta = sum lambda_j grad p_j / p_j` as a covector; errors on the
    /// separatrix where some `p_j` vanishes.
    pub fn theta(&self, x: T, y: T) -> Result<[T; 2], FoliationError> {
        let mut tx = T::zero();
        let mut ty = T::zero();
        for (j, p) in self.polys.iter().enumerate() {
            let v = p.eval(x, y);
            if v == T::zero() {
                return Err(FoliationError::OnSeparatrix { index: j });
            }
            let lam = self.exponents.lambda(j);
            let g = self.gradient_of(j, x, y);
            tx = tx + lam * g[0] / v;
            ty = ty + lam * g[1] / v;
        }
        Ok([tx, ty])
    }

    /// Jacobian of `theta` (the Hessian of `log f`).
    pub fn theta_jacobian(&self, x: T, y: T) -> Result<[[T; 2]; 2], FoliationError> {
        let mut h = [[T::zero(); 2]; 2];
        for (j, p) in self.polys.iter().enumerate() {
            let v = p.eval(x, y);
            if v == T::zero() {
                return Err(FoliationError::OnSeparatrix { index: j });
            }
            let lam = self.exponents.lambda(j);
            let g = self.gradient_of(j, x, y);
            let pxx = self.grads[j].0.dx().eval(x, y);
            let pxy = self.grads[j].0.dy().eval(x, y);
            let pyy = self.grads[j].1.dy().eval(x, y);
            let v2 = v * v;
            h[0][0] = h[0][0] + lam * (pxx / v - g[0] * g[0] / v2);
            h[0][1] = h[0][1] + lam * (pxy / v - g[0] * g[1] / v2);
            h[1][1] = h[1][1] + lam * (pyy / v - g[1] * g[1] / v2);
        }
        h[1][0] = h[0][1];
        Ok(h)
    }

    /// Finds pairwise intersections of the separatrix curves inside the
    /// region by sign-change cells plus Newton refinement, and certifies the
    /// gradients independent at each.
    fn locate_corners(&self) -> Result<Vec<Corner<T>>, FoliationError> {
        let n_cells = 48usize;
        let margin = T::of(1e-6);
        let mut corners: Vec<Corner<T>> = Vec::new();
        let dedup_dist = self.region.diameter() * T::of(1e-7);
        for i in 0..self.polys.len() {
            for j in (i + 1)..self.polys.len() {
                for ci in 0..n_cells {
                    for cj in 0..n_cells {
                        let fx = |k: usize| {
                            self.region.x_min
                                + (self.region.x_max - self.region.x_min)
                                    * T::of(k as f64 / n_cells as f64)
                        };
                        let fy = |k: usize| {
                            self.region.y_min
                                + (self.region.y_max - self.region.y_min)
                                    * T::of(k as f64 / n_cells as f64)
                        };
                        let (x0, x1, y0, y1) = (fx(ci), fx(ci + 1), fy(cj), fy(cj + 1));
                        let corner_vals = |p: &BivariatePoly<T>| {
                            [
                                p.eval(x0, y0),
                                p.eval(x1, y0),
                                p.eval(x0, y1),
                                p.eval(x1, y1),
                            ]
                        };
                        let vi = corner_vals(&self.polys[i]);
                        let vj = corner_vals(&self.polys[j]);
                        let changes = |v: &[T; 4]| {
                            let mut pos = false;
                            let mut neg = false;
                            for &x in v {
                                pos |= x >= T::zero();
                                neg |= x <= T::zero();
                            }
                            pos && neg
                        };
                        if !(changes(&vi) && changes(&vj)) {
                            continue;
                        }
                        let seed = [(x0 + x1) * T::of(0.5), (y0 + y1) * T::of(0.5)];
                        if let Some(pt) = self.newton_pair(i, j, seed) {
                            if !self.region.contains(pt[0], pt[1]) {
                                continue;
                            }
                            if corners.iter().any(|c| {
                                let dx = c.point[0] - pt[0];
                                let dy = c.point[1] - pt[1];
                                c.i == i && c.j == j && (dx * dx + dy * dy).sqrt() < dedup_dist
                            }) {
                                continue;
                            }
                            let gi = self.gradient_of(i, pt[0], pt[1]);
                            let gj = self.gradient_of(j, pt[0], pt[1]);
                            let ni = (gi[0] * gi[0] + gi[1] * gi[1]).sqrt();
                            let nj = (gj[0] * gj[0] + gj[1] * gj[1]).sqrt();
                            let det = (gi[0] * gj[1] - gi[1] * gj[0]).abs();
                            let tmargin = if ni > T::zero() && nj > T::zero() {
                                det / (ni * nj)
                            } else {
                                T::zero()
                            };
                            if tmargin < margin {
                                return Err(FoliationError::TransversalityFailure {
                                    i,
                                    j,
                                    x: pt[0].to_f64_lossy(),
                                    y: pt[1].to_f64_lossy(),
                                });
                            }
                            corners.push(Corner {
                                i,
                                j,
                                point: pt,
                                transversality_margin: tmargin,
                            });
                        }
                    }
                }
            }
        }
        Ok(corners)
    }

    /// Newton iteration for `p_i = p_j = 0` from a seed.
    fn newton_pair(&self, i: usize, j: usize, seed: [T; 2]) -> Option<[T; 2]> {
        let mut x = seed[0];
        let mut y = seed[1];
        let scale = self.region.diameter();
        for _ in 0..60 {
            let fi = self.polys[i].eval(x, y);
            let fj = self.polys[j].eval(x, y);
            let gi = self.gradient_of(i, x, y);
            let gj = self.gradient_of(j, x, y);
            let det = gi[0] * gj[1] - gi[1] * gj[0];
            if det.abs() < T::of(1e-300) {
                return None;
            }
            let dx = (fi * gj[1] - fj * gi[1]) / det;
            let dy = (fj * gi[0] - fi * gj[0]) / det;
            x = x - dx;
            y = y - dy;
            if !x.is_finite() || !y.is_finite() || (x * x + y * y).sqrt() > scale * T::of(1e3) {
                return None;
            }
            if dx.abs() + dy.abs() < scale * T::of(1e-15) {
                return Some([x, y]);
            }
        }
        None
    }
}

fn proportional<T: Real>(a: &BivariatePoly<T>, b: &BivariatePoly<T>) -> bool {
    let ma = a.monomials();
    let mb = b.monomials();
    if ma.len() != mb.len() || ma.is_empty() {
        return false;
    }
    let mut ratio: Option<T> = None;
    for ((ia, ja, ca), (ib, jb, cb)) in ma.iter().zip(mb.iter()) {
        if ia != ib || ja != jb {
            return false;
        }
        let r = *ca / *cb;
        match ratio {
            None => ratio = Some(r),
            Some(r0) => {
                if ((r - r0) / r0).abs() > T::of(1e-12) {
                    return false;
                }
            }
        }
    }
    true
}

/// Rational 1-form `omega = (A dx + B dy) / prod p_j^{k_j}` whose polar locus
/// is contained in the separatrix by construction.
#[derive(Debug, Clone)]
pub struct AdmissibleForm<T: Real> {
    pub numerator_dx: BivariatePoly<T>,
    pub numerator_dy: BivariatePoly<T>,
    pub denominator_powers: Vec<u32>,
    pub max_pole_order: u32,
}

impl<T: Real> AdmissibleForm<T> {
    pub fn polynomial(a: BivariatePoly<T>, b: BivariatePoly<T>, n_polys: usize) -> Self {
        Self {
            numerator_dx: a,
            numerator_dy: b,
            denominator_powers: vec![0; n_polys],
            max_pole_order: 0,
        }
    }

    /// Covector value at a point of the positive region.
    pub fn eval(
        &self,
        sys: &DarbouxSystem<T>,
        x: T,
        y: T,
    ) -> Result<[T; 2], FoliationError> {
        let mut denom = T::one();
        for (j, &k) in self.denominator_powers.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let v = sys.polys()[j].eval(x, y);
            if v <= T::zero() {
                return Err(FoliationError::PoleOnOval { index: j });
            }
            denom = denom * v.powi(k as i32);
        }
        Ok([
            self.numerator_dx.eval(x, y) / denom,
            self.numerator_dy.eval(x, y) / denom,
        ])
    }
}

/// Structural admissibility data for a form against a system.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub effective_pole_orders: Vec<u32>,
    pub max_allowed: u32,
}

/// Poles of the form are confined to the separatrix by the representation;
/// what remains to check is that every pole order stays within the declared
/// maximum.
pub fn admissibility_check<T: Real>(
    sys: &DarbouxSystem<T>,
    form: &AdmissibleForm<T>,
) -> AdmissibilityReport {
    let orders = form.denominator_powers.clone();
    let admissible = orders.len() == sys.polys().len()
        && orders.iter().all(|&k| k <= form.max_pole_order);
    AdmissibilityReport {
        admissible,
        effective_pole_orders: orders,
        max_allowed: form.max_pole_order,
    }
}

/// A traced closed level curve.
#[derive(Debug, Clone)]
pub struct Oval<T: Real> {
    /// Closed polyline, counterclockwise, first point not repeated.
    pub points: Vec<[T; 2]>,
    /// Unit tangents at the points, matching the orientation.
    pub tangents: Vec<[T; 2]>,
    /// Per-point level residuals `|f - t|`.
    pub residuals: Vec<T>,
    pub t: T,
    pub center: [T; 2],
    pub arc_length: T,
    /// Gap between the returning trace and its starting point.
    pub closure_gap: T,
}

impl<T: Real> Oval<T> {
    /// Winding number of the polyline about the center.
    pub fn winding_number(&self) -> i32 {
        let mut total = T::zero();
        let n = self.points.len();
        for k in 0..n {
            let a = self.points[k];
            let b = self.points[(k + 1) % n];
            let va = [a[0] - self.center[0], a[1] - self.center[1]];
            let vb = [b[0] - self.center[0], b[1] - self.center[1]];
            let cross = va[0] * vb[1] - va[1] * vb[0];
            let dot = va[0] * vb[0] + va[1] * vb[1];
            total = total + cross.atan2(dot);
        }
        (total / (T::of(2.0) * T::PI()))
            .round()
            .to_f64_lossy() as i32
    }

    pub fn max_residual(&self) -> T {
        self.residuals
            .iter()
            .fold(T::zero(), |m, &r| m.max(r))
    }
}

pub use corner::{corner_curve, corner_monomial_integral, linearize_corner, LinearizedCorner};
pub use integrate::{integral_scan, integrate_form, ScanRow, ScanStatus};
pub use trace::{find_center, trace_oval, CenterInfo, TraceOptions};
