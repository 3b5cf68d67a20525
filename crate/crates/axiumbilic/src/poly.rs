//! Univariate polynomials: evaluation, real roots with multiplicity, and exact
//! Sylvester resultants over the rationals.
//!
//! Coefficient vectors are in ascending order: `c[k]` multiplies `p^k`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Imaginary parts below `REAL_TOL * (1 + |re|)` count as real.
pub const REAL_TOL: f64 = 1e-8;
/// Eigenvalues closer than this are merged into one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-6;

pub fn horner(c: &[f64], p: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * p + v)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &v)| k as f64 * v).collect()
}

pub fn trim(c: &[f64]) -> Vec<f64> {
    let mut v = c.to_vec();
    while v.len() > 1 && *v.last().unwrap() == 0.0 {
        v.pop();
    }
    v
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

/// All complex roots of `c` (ascending), from the companion matrix.
pub fn complex_roots(c: &[f64]) -> Vec<(f64, f64)> {
    let c = trim(c);
    let n = c.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

/// Real roots with multiplicities, sorted ascending.
///
/// Eigenvalues are clustered first (a multiple root splits into a small
/// complex cloud), then a cluster is real when its centroid is. Simple real
/// roots are polished by Newton on the original polynomial.
pub fn real_roots(c: &[f64]) -> Vec<RealRoot> {
    let c = trim(c);
    let roots = complex_roots(&c);
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..roots.len() {
                if used[j] {
                    continue;
                }
                let near = members.iter().any(|&k| {
                    let (a, b) = roots[k];
                    let (x, y) = roots[j];
                    ((a - x).powi(2) + (b - y).powi(2)).sqrt() < CLUSTER_RADIUS * (1.0 + a.abs())
                });
                if near {
                    members.push(j);
                    used[j] = true;
                    grew = true;
                }
            }
        }
        let n = members.len() as f64;
        let re = members.iter().map(|&k| roots[k].0).sum::<f64>() / n;
        let im = members.iter().map(|&k| roots[k].1).sum::<f64>() / n;
        if im.abs() < REAL_TOL * (1.0 + re.abs()) {
            let value = if members.len() == 1 { polish(&c, re) } else { re };
            out.push(RealRoot { value, multiplicity: members.len() });
        }
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    out
}

fn polish(c: &[f64], mut p: f64) -> f64 {
    let d = derivative(c);
    for _ in 0..3 {
        let f = horner(c, p);
        let g = horner(&d, p);
        if g == 0.0 {
            break;
        }
        let next = p - f / g;
        if !next.is_finite() || (next - p).abs() > 1e-6 * (1.0 + p.abs()) {
            break;
        }
        p = next;
    }
    p
}

/// Minimal commutative ring interface for generic polynomial code.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Dense univariate polynomial over a [`Ring`], ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<T>(pub Vec<T>);

impl<T: Ring> UPoly<T> {
    pub fn constant(v: T) -> Self {
        UPoly(vec![v])
    }

    pub fn monomial(v: T, k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = v;
        UPoly(c)
    }

    pub fn scale(&self, v: &T) -> Self {
        UPoly(self.0.iter().map(|c| c.clone() * v.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return UPoly(vec![T::zero()]);
        }
        UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = UPoly::constant(T::from_i64(1));
        for _ in 0..n {
            out = out * self.clone();
        }
        out
    }
}

impl<T: Ring> Add for UPoly<T> {
    type Output = UPoly<T>;
    fn add(self, o: UPoly<T>) -> UPoly<T> {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<T>, k: usize| v.get(k).cloned().unwrap_or_else(T::zero);
        UPoly((0..n).map(|k| get(&self.0, k) + get(&o.0, k)).collect())
    }
}

impl<T: Ring> Sub for UPoly<T> {
    type Output = UPoly<T>;
    fn sub(self, o: UPoly<T>) -> UPoly<T> {
        self + UPoly(o.0.into_iter().map(|c| -c).collect())
    }
}

impl<T: Ring> Mul for UPoly<T> {
    type Output = UPoly<T>;
    fn mul(self, o: UPoly<T>) -> UPoly<T> {
        let mut out = vec![T::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly(out)
    }
}

pub fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

pub fn rational_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn trim_rational(c: &[BigRational]) -> Vec<BigRational> {
    let mut v = c.to_vec();
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

/// Determinant by exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return <BigRational as Zero>::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= p.clone();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / p.clone();
            for k in col..n {
                let v = m[col][k].clone() * f.clone();
                m[r][k] -= v;
            }
        }
    }
    det
}

/// Sylvester resultant `Res(f, g)` of two polynomials with rational coefficients.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let f = trim_rational(f);
    let g = trim_rational(g);
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut rows = vec![vec![<BigRational as Zero>::zero(); size]; size];
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    determinant(rows)
}

/// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lead(f)`.
pub fn discriminant(f: &[BigRational]) -> BigRational {
    let f = trim_rational(f);
    let n = f.len() - 1;
    let d = UPoly(f.clone()).derivative().0;
    let res = resultant(&f, &d) / f[n].clone();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Relative difference of two exact rationals, in floating point.
pub fn relative_gap(a: &BigRational, b: &BigRational) -> f64 {
    let diff = (a - b).abs();
    let scale = a.abs().max(b.abs());
    if scale.is_zero() {
        0.0
    } else {
        to_f64(&(diff / scale))
    }
}
