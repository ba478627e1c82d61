//! Bivariate polynomials with compensated Horner evaluation.
//!
//! Evaluation runs error-free transformations (TwoSum / FMA TwoProd) through
//! both Horner loops, which keeps residuals trustworthy near the separatrix
//! where the polynomial values almost cancel.

use crate::float::Real;

/// Dense bivariate polynomial `sum c[j][i] x^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly<T: Real> {
    /// rows[j][i] multiplies x^i y^j
    rows: Vec<Vec<T>>,
}

fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Compensated Horner: value of `sum coeffs[k] x^k` with a first-order error
/// correction.
fn horner_compensated<T: Real>(coeffs: &[T], x: T) -> T {
    if coeffs.is_empty() {
        return T::zero();
    }
    let mut s = coeffs[coeffs.len() - 1];
    let mut err = T::zero();
    for &c in coeffs.iter().rev().skip(1) {
        let (p, pi) = two_prod(s, x);
        let (s2, sigma) = two_sum(p, c);
        err = err * x + (pi + sigma);
        s = s2;
    }
    s + err
}

impl<T: Real> BivariatePoly<T> {
    /// Builds from `(i, j, coefficient)` monomials (`x^i y^j`), accumulating
    /// duplicates.
    pub fn from_monomials(monomials: &[(u32, u32, T)]) -> Self {
        let deg_y = monomials.iter().map(|m| m.1).max().unwrap_or(0) as usize;
        let deg_x = monomials.iter().map(|m| m.0).max().unwrap_or(0) as usize;
        let mut rows = vec![vec![T::zero(); deg_x + 1]; deg_y + 1];
        for &(i, j, c) in monomials {
            rows[j as usize][i as usize] = rows[j as usize][i as usize] + c;
        }
        Self { rows }
    }

    pub fn zero() -> Self {
        Self {
            rows: vec![vec![T::zero()]],
        }
    }

    pub fn constant(c: T) -> Self {
        Self { rows: vec![vec![c]] }
    }

    /// Monomial list `(i, j, c)` of the nonzero coefficients.
    pub fn monomials(&self) -> Vec<(u32, u32, T)> {
        let mut out = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                if c != T::zero() {
                    out.push((i as u32, j as u32, c));
                }
            }
        }
        out
    }

    pub fn eval(&self, x: T, y: T) -> T {
        let vals: Vec<T> = self
            .rows
            .iter()
            .map(|row| horner_compensated(row, x))
            .collect();
        horner_compensated(&vals, y)
    }

    /// Partial derivative in `x`.
    pub fn dx(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                if row.len() <= 1 {
                    vec![T::zero()]
                } else {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(i, &c)| c * T::of(i as f64))
                        .collect()
                }
            })
            .collect();
        Self { rows }
    }

    /// Partial derivative in `y`.
    pub fn dy(&self) -> Self {
        if self.rows.len() <= 1 {
            return Self::zero();
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, row)| row.iter().map(|&c| c * T::of(j as f64)).collect())
            .collect();
        Self { rows }
    }

    pub fn degree(&self) -> u32 {
        let mut deg = 0u32;
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                if c != T::zero() {
                    deg = deg.max((i + j) as u32);
                }
            }
        }
        deg
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().all(|&c| c == T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let ny = self.rows.len().max(other.rows.len());
        let nx = self
            .rows
            .iter()
            .chain(other.rows.iter())
            .map(|r| r.len())
            .max()
            .unwrap_or(1);
        let mut rows = vec![vec![T::zero(); nx]; ny];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                rows[j][i] = rows[j][i] + c;
            }
        }
        for (j, row) in other.rows.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                rows[j][i] = rows[j][i] + c;
            }
        }
        Self { rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ny = self.rows.len() + other.rows.len() - 1;
        let nx = self.rows.iter().map(|r| r.len()).max().unwrap_or(1)
            + other.rows.iter().map(|r| r.len()).max().unwrap_or(1)
            - 1;
        let mut rows = vec![vec![T::zero(); nx]; ny];
        for (j1, r1) in self.rows.iter().enumerate() {
            for (i1, &c1) in r1.iter().enumerate() {
                if c1 == T::zero() {
                    continue;
                }
                for (j2, r2) in other.rows.iter().enumerate() {
                    for (i2, &c2) in r2.iter().enumerate() {
                        rows[j1 + j2][i1 + i2] = rows[j1 + j2][i1 + i2] + c1 * c2;
                    }
                }
            }
        }
        Self { rows }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&c| c * s).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivatives() {
        // p = x^2 y + 3x - 2
        let p = BivariatePoly::from_monomials(&[(2, 1, 1.0), (1, 0, 3.0), (0, 0, -2.0)]);
        assert_eq!(p.eval(2.0, 3.0), 4.0 * 3.0 + 6.0 - 2.0);
        let px = p.dx();
        assert_eq!(px.eval(2.0, 3.0), 2.0 * 2.0 * 3.0 + 3.0);
        let py = p.dy();
        assert_eq!(py.eval(2.0, 3.0), 4.0);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn algebra() {
        let a = BivariatePoly::from_monomials(&[(1, 0, 1.0)]); // x
        let b = BivariatePoly::from_monomials(&[(0, 1, 1.0)]); // y
        let ab = a.mul(&b);
        assert_eq!(ab.eval(2.0, 5.0), 10.0);
        let s = a.add(&b).scale(3.0);
        assert_eq!(s.eval(2.0, 5.0), 21.0);
    }

    #[test]
    fn compensated_horner_near_cancellation() {
        // (x - 1)^6 expanded, evaluated at x close to 1: plain Horner loses
        // most digits, the compensated loop keeps the value near the truth
        let coeffs: [f64; 7] = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];
        let p = BivariatePoly::from_monomials(
            &coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u32, 0u32, c))
                .collect::<Vec<_>>(),
        );
        let x = 1.0 + 1e-3;
        let exact = 1e-18;
        let got = p.eval(x, 0.0);
        assert!((got - exact).abs() < 1e-24, "got {got}");
    }
}
