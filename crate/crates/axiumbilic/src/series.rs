//! Truncated bivariate Taylor series up to total degree 4.
//!
//! A [`Series2`] stores the coefficients of `Σ c_ij X^i Y^j` for `i + j <= deg`
//! in monomial (not factorial) normalisation. It doubles as the polynomial type
//! for Monge jets and as a forward-mode differentiation scalar: evaluating a
//! geometric formula on series arguments yields its Taylor expansion.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub const MAX_DEG: usize = 4;
const LEN: usize = 15;

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Series2 {
    deg: usize,
    c: [f64; LEN],
}

impl Series2 {
    pub fn zero(deg: usize) -> Self {
        assert!(deg <= MAX_DEG, "series degree {deg} exceeds {MAX_DEG}");
        Series2 { deg, c: [0.0; LEN] }
    }

    pub fn constant(v: f64, deg: usize) -> Self {
        let mut s = Self::zero(deg);
        s.c[0] = v;
        s
    }

    /// `x0 + X`
    pub fn var_x(x0: f64, deg: usize) -> Self {
        let mut s = Self::constant(x0, deg);
        if deg >= 1 {
            s.c[idx(1, 0)] = 1.0;
        }
        s
    }

    /// `y0 + Y`
    pub fn var_y(y0: f64, deg: usize) -> Self {
        let mut s = Self::constant(y0, deg);
        if deg >= 1 {
            s.c[idx(0, 1)] = 1.0;
        }
        s
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.deg {
            0.0
        } else {
            self.c[idx(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i + j <= self.deg);
        self.c[idx(i, j)] = v;
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative `∂^{i+j} / ∂X^i ∂Y^j` at the expansion point.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn truncate(&self, deg: usize) -> Self {
        let deg = deg.min(self.deg);
        let mut s = Self::zero(deg);
        for d in 0..=deg {
            for j in 0..=d {
                s.c[idx(d - j, j)] = self.c[idx(d - j, j)];
            }
        }
        s
    }

    /// Same coefficients, capacity raised to `deg` (missing terms are zero).
    pub fn with_deg(&self, deg: usize) -> Self {
        let mut s = Self::zero(deg);
        for d in 0..=deg.min(self.deg) {
            for j in 0..=d {
                s.c[idx(d - j, j)] = self.c[idx(d - j, j)];
            }
        }
        s
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut s = *self;
        s.c.iter_mut().for_each(|v| *v *= k);
        s
    }

    pub fn dx(&self) -> Self {
        let deg = self.deg.saturating_sub(1);
        let mut s = Self::zero(deg);
        if self.deg == 0 {
            return s;
        }
        for d in 0..=deg {
            for j in 0..=d {
                let i = d - j;
                s.c[idx(i, j)] = (i + 1) as f64 * self.c[idx(i + 1, j)];
            }
        }
        s
    }

    pub fn dy(&self) -> Self {
        let deg = self.deg.saturating_sub(1);
        let mut s = Self::zero(deg);
        if self.deg == 0 {
            return s;
        }
        for d in 0..=deg {
            for j in 0..=d {
                let i = d - j;
                s.c[idx(i, j)] = (j + 1) as f64 * self.c[idx(i, j + 1)];
            }
        }
        s
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> Self {
        let c0 = self.c[0];
        assert!(c0 != 0.0, "series reciprocal of a non-unit");
        // 1/(c0 (1 + u)) = (1/c0) Σ (-u)^k
        let mut u = self.scale(1.0 / c0);
        u.c[0] = 0.0;
        let mut term = Self::constant(1.0, self.deg);
        let mut acc = term;
        for _ in 0..self.deg {
            term = term * (-u);
            acc = acc + term;
        }
        acc.scale(1.0 / c0)
    }

    /// Evaluates this series, read as a polynomial in `(X, Y)`, at generic arguments.
    pub fn eval<S: Scalar>(&self, x: S, y: S) -> S {
        let mut out = x.cst(0.0);
        for i in (0..=self.deg).rev() {
            let mut row = x.cst(0.0);
            for j in (0..=(self.deg - i)).rev() {
                row = row * y + self.c[idx(i, j)];
            }
            out = out * x + row;
        }
        out
    }

    /// Re-expands the polynomial around `(x0, y0)`.
    pub fn shift(&self, x0: f64, y0: f64) -> Self {
        self.eval(Series2::var_x(x0, self.deg), Series2::var_y(y0, self.deg))
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Add for Series2 {
    type Output = Series2;
    fn add(self, o: Series2) -> Series2 {
        let deg = self.deg.min(o.deg);
        let mut s = Series2::zero(deg);
        for k in 0..idx(0, deg) + 1 {
            s.c[k] = self.c[k] + o.c[k];
        }
        s
    }
}

impl Sub for Series2 {
    type Output = Series2;
    fn sub(self, o: Series2) -> Series2 {
        self + (-o)
    }
}

impl Neg for Series2 {
    type Output = Series2;
    fn neg(self) -> Series2 {
        self.scale(-1.0)
    }
}

impl Mul for Series2 {
    type Output = Series2;
    fn mul(self, o: Series2) -> Series2 {
        let deg = self.deg.min(o.deg);
        let mut s = Series2::zero(deg);
        for d1 in 0..=deg {
            for j1 in 0..=d1 {
                let a = self.c[idx(d1 - j1, j1)];
                if a == 0.0 {
                    continue;
                }
                for d2 in 0..=(deg - d1) {
                    for j2 in 0..=d2 {
                        s.c[idx(d1 - j1 + d2 - j2, j1 + j2)] += a * o.c[idx(d2 - j2, j2)];
                    }
                }
            }
        }
        s
    }
}

impl Add<f64> for Series2 {
    type Output = Series2;
    fn add(mut self, v: f64) -> Series2 {
        self.c[0] += v;
        self
    }
}

impl Mul<f64> for Series2 {
    type Output = Series2;
    fn mul(self, v: f64) -> Series2 {
        self.scale(v)
    }
}

impl AddAssign for Series2 {
    fn add_assign(&mut self, o: Series2) {
        *self = *self + o;
    }
}

/// Arithmetic shared by `f64` and [`Series2`] so geometric formulas can be
/// written once and evaluated either pointwise or as Taylor expansions.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
    + Add<f64, Output = Self> + Mul<f64, Output = Self>
{
    /// A constant of the same shape as `self`.
    fn cst(&self, v: f64) -> Self;
    fn recip(&self) -> Self;
}

impl Scalar for f64 {
    fn cst(&self, v: f64) -> f64 {
        v
    }
    fn recip(&self) -> f64 {
        1.0 / self
    }
}

impl Scalar for Series2 {
    fn cst(&self, v: f64) -> Series2 {
        Series2::constant(v, self.deg)
    }
    fn recip(&self) -> Series2 {
        Series2::recip(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(deg: usize, terms: &[(usize, usize, f64)]) -> Series2 {
        let mut s = Series2::zero(deg);
        for &(i, j, v) in terms {
            s.set(i, j, v);
        }
        s
    }

    #[test]
    fn product_of_linear_terms() {
        let a = poly(4, &[(0, 0, 1.0), (1, 0, 2.0)]);
        let b = poly(4, &[(0, 0, 3.0), (0, 1, -1.0)]);
        let p = a * b;
        assert_eq!(p.coeff(0, 0), 3.0);
        assert_eq!(p.coeff(1, 0), 6.0);
        assert_eq!(p.coeff(0, 1), -1.0);
        assert_eq!(p.coeff(1, 1), -2.0);
    }

    #[test]
    fn recip_round_trip() {
        let a = poly(4, &[(0, 0, 2.0), (1, 0, 0.5), (1, 1, -3.0), (0, 2, 1.0)]);
        let one = a * a.recip();
        assert!((one.coeff(0, 0) - 1.0).abs() < 1e-15);
        for d in 1..=4 {
            for j in 0..=d {
                assert!(one.coeff(d - j, j).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn shift_matches_pointwise_eval() {
        let p = poly(4, &[(2, 0, 1.0), (1, 2, -0.5), (0, 4, 0.25), (3, 1, 2.0)]);
        let q = p.shift(0.3, -0.2);
        let direct = p.eval(0.3 + 0.1, -0.2 + 0.05);
        let via = q.eval(0.1, 0.05);
        assert!((direct - via).abs() < 1e-14);
    }

    #[test]
    fn derivatives_of_monomial() {
        let p = poly(4, &[(2, 1, 1.0)]);
        assert_eq!(p.dx().coeff(1, 1), 2.0);
        assert_eq!(p.dy().coeff(2, 0), 1.0);
        let at = p.shift(1.0, 2.0);
        assert!((at.derivative(1, 0) - 4.0).abs() < 1e-14);
        assert!((at.derivative(2, 1) - 2.0).abs() < 1e-14);
    }
}
