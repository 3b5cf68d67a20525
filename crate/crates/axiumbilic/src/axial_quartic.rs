//! The quartic differential equation of axial curvature lines.
//!
//! `a₄dy⁴ + a₃dy³dx + a₂dy²dx² + a₁dydx³ + a₀dx⁴ = 0`, or in the slope
//! `p = dy/dx`, `𝒢(p) = a₄p⁴ + a₃p³ + a₂p² + a₁p + a₀`.

use crate::error::{Error, Result};
use crate::monge_surface::{fundamental_forms_at, normal_products, FundamentalForms, MongeJet, NormalProducts};
use crate::poly;
use crate::series::{Scalar, Series2};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuarticCoefficients {
    pub a4: f64,
    pub a3: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

impl QuarticCoefficients {
    pub fn from_ascending(c: [f64; 5]) -> Self {
        QuarticCoefficients { a0: c[0], a1: c[1], a2: c[2], a3: c[3], a4: c[4] }
    }

    /// `[a₀, a₁, a₂, a₃, a₄]`, the polynomial in `p`.
    pub fn ascending(&self) -> [f64; 5] {
        [self.a0, self.a1, self.a2, self.a3, self.a4]
    }

    /// The same equation in `q = dx/dy`: `a₀q⁴ + a₁q³ + a₂q² + a₃q + a₄`.
    pub fn reversed(&self) -> [f64; 5] {
        [self.a4, self.a3, self.a2, self.a1, self.a0]
    }

    pub fn max_abs(&self) -> f64 {
        self.ascending().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Divided by the entry of largest magnitude (sign included).
    pub fn normalized(&self) -> [f64; 5] {
        let c = self.ascending();
        let big = c.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        if big == 0.0 {
            return c;
        }
        c.map(|v| v / big)
    }

    /// Distance between the normalized quintuples, minimised over the sign.
    pub fn projective_distance(&self, other: &QuarticCoefficients) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        let d = |s: f64| a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - s * y).abs()));
        d(1.0).min(d(-1.0))
    }

    /// Real roots in the projective line as angles in `[0, π)`.
    pub fn direction_angles(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for r in poly::real_roots(&self.ascending()) {
            if r.value.abs() <= 1.0 {
                out.push(r.value.atan().rem_euclid(std::f64::consts::PI));
            }
        }
        for r in poly::real_roots(&self.reversed()) {
            if r.value.abs() < 1.0 {
                let (dx, dy): (f64, f64) = (r.value, 1.0);
                out.push(dy.atan2(dx).rem_euclid(std::f64::consts::PI));
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

/// General-chart coefficients `[a₀, …, a₄]` from metric and normal products.
///
/// The `a₂` term is re-derived from `Jac(‖k_n − H‖², I) = 0`:
/// `a₂ = −12FG²(e·e) + 12E²F(g·g) + 24EG²(e·f) − 24E²G(f·g)`.
pub fn general_coefficients<S: Scalar>(n: &NormalProducts<S>) -> [S; 5] {
    let (e, f, g) = (n.e, n.f, n.g);
    let eg_m4 = e * g - f * f * 4.0;
    let eg_m2 = e * g - f * f * 2.0;
    let e2 = e * e;
    let g2 = g * g;
    let a4 = -(f * eg_m2 * n.gg * 4.0) + g * eg_m4 * n.fg * 4.0 + f * g2 * n.ff * 8.0 + f * g2 * n.eg * 4.0
        - g2 * g * n.ef * 4.0;
    let a3 = -(e * eg_m4 * n.gg * 4.0) - e * f * g * n.fg * 32.0 + e * g2 * n.ff * 16.0 - g2 * g * n.ee * 4.0
        + e * g2 * n.eg * 8.0;
    let a2 = -(f * g2 * n.ee * 12.0) + e2 * f * n.gg * 12.0 + e * g2 * n.ef * 24.0 - e2 * g * n.fg * 24.0;
    let a1 = e2 * e * n.gg * 4.0 + g * eg_m4 * n.ee * 4.0 + e * f * g * n.ef * 32.0 - e2 * g * n.ff * 16.0
        - e2 * g * n.eg * 8.0;
    let a0 = f * eg_m2 * n.ee * 4.0 - e * eg_m4 * n.ef * 4.0 - e2 * f * n.ff * 8.0 - e2 * f * n.eg * 4.0
        + e2 * e * n.fg * 4.0;
    [a0, a1, a2, a3, a4]
}

pub fn quartic_general(f: &FundamentalForms) -> QuarticCoefficients {
    QuarticCoefficients::from_ascending(general_coefficients(&NormalProducts::from_forms(f)))
}

/// The reduced form in terms of `a₀`, `a₁` only. It equals the general
/// quartic times `E³`.
pub fn quartic_prop1(f: &FundamentalForms) -> QuarticCoefficients {
    let c = general_coefficients(&NormalProducts::from_forms(f));
    let (a0, a1) = (c[0], c[1]);
    let (e, ff, g) = (f.e, f.f, f.g);
    QuarticCoefficients {
        a4: a0 * g * (e * g - 4.0 * ff * ff) + a1 * ff * (2.0 * ff * ff - e * g),
        a3: -8.0 * a0 * e * ff * g + a1 * e * (4.0 * ff * ff - e * g),
        a2: -6.0 * a0 * g * e * e + 3.0 * a1 * ff * e * e,
        a1: a1 * e * e * e,
        a0: a0 * e * e * e,
    }
}

/// `E = G`, `F = 0`: `a₁ = −a₃ = 4E³[e·e + g·g − 4f·f − 2e·g]`,
/// `a₀ = a₄ = −a₂/6 = 4E³[f·g − e·f]`.
pub fn quartic_isothermic(f: &FundamentalForms) -> Result<QuarticCoefficients> {
    let scale = f.e.abs().max(f.g.abs());
    let eps = tol::tol(1e-12) * scale.max(1.0);
    if (f.e - f.g).abs() > eps || f.f.abs() > eps {
        return Err(Error::NotIsothermic { de: (f.e - f.g).abs(), f: f.f.abs() });
    }
    let n = NormalProducts::from_forms(f);
    let e3 = f.e * f.e * f.e;
    let a1 = 4.0 * e3 * (n.ee + n.gg - 4.0 * n.ff - 2.0 * n.eg);
    let a0 = 4.0 * e3 * (n.fg - n.ef);
    Ok(QuarticCoefficients { a4: a0, a3: -a1, a2: -6.0 * a0, a1, a0 })
}

pub fn eval_g(q: &QuarticCoefficients, p: f64) -> f64 {
    poly::horner(&q.ascending(), p)
}

/// General-chart quartic of the patch at `(x, y)`.
pub fn quartic_at(jet: &MongeJet, x: f64, y: f64) -> Result<QuarticCoefficients> {
    Ok(quartic_general(&fundamental_forms_at(jet, x, y)?))
}

/// Taylor expansions of `a₀ = (general a₀)/4` and `a₁ = (general a₁)/4` at
/// `(x, y)` as series in the offsets.
pub fn local_coefficients(jet: &MongeJet, x: f64, y: f64, deg: usize) -> [Series2; 5] {
    let n = normal_products(jet, Series2::var_x(x, deg), Series2::var_y(y, deg));
    general_coefficients(&n).map(|s| s.scale(0.25))
}

/// `a₀ = a00 + a10 x + a01 y + ½a20 x² + a11 xy + ½a02 y² + …`, likewise `a₁`
/// with the `b` coefficients. Normalised so that in isothermic coordinates
/// `a₀ = f·g − e·f` and `a₁ = e·e + g·g − 4f·f − 2e·g`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct QuarticSeries {
    pub a00: f64,
    pub a10: f64,
    pub a01: f64,
    pub a20: f64,
    pub a11: f64,
    pub a02: f64,
    pub b00: f64,
    pub b10: f64,
    pub b01: f64,
    pub b20: f64,
    pub b11: f64,
    pub b02: f64,
}

impl QuarticSeries {
    pub fn from_series(a0: &Series2, a1: &Series2) -> Self {
        QuarticSeries {
            a00: a0.coeff(0, 0),
            a10: a0.coeff(1, 0),
            a01: a0.coeff(0, 1),
            a20: a0.derivative(2, 0),
            a11: a0.coeff(1, 1),
            a02: a0.derivative(0, 2),
            b00: a1.coeff(0, 0),
            b10: a1.coeff(1, 0),
            b01: a1.coeff(0, 1),
            b20: a1.derivative(2, 0),
            b11: a1.coeff(1, 1),
            b02: a1.derivative(0, 2),
        }
    }

    /// Jacobian determinant `∂(a₀, a₁)/∂(x, y)` at the origin.
    pub fn jacobian(&self) -> f64 {
        self.a10 * self.b01 - self.a01 * self.b10
    }

    pub fn max_linear(&self) -> f64 {
        [self.a10, self.a01, self.b10, self.b01].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn monge_series(jet: &MongeJet) -> QuarticSeries {
    let c = local_coefficients(jet, 0.0, 0.0, 2);
    QuarticSeries::from_series(&c[0], &c[1])
}

/// Which pair of relations makes the origin axiumbilic:
/// `First` is `r₁₁ = s/2, s₁₁ = −r/2`, `Second` is `r₁₁ = −s/2, s₁₁ = r/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum AxiumbilicBranch {
    First,
    Second,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiumbilicTest {
    pub axiumbilic: bool,
    /// `r₁₁r + s₁₁s`
    pub a00: f64,
    /// `r² + s² − 4(r₁₁² + s₁₁²)`
    pub b00: f64,
    pub branch: Option<AxiumbilicBranch>,
}

pub fn axiumbilic_tolerance(jet: &MongeJet) -> f64 {
    tol::tol(1e-9) * (1.0 + jet.magnitude())
}

pub fn is_axiumbilic(jet: &MongeJet) -> AxiumbilicTest {
    let (r, s) = (jet.r_diff(), jet.s_diff());
    let (r11, s11) = (jet.r(1, 1), jet.s(1, 1));
    let a00 = r11 * r + s11 * s;
    let b00 = r * r + s * s - 4.0 * (r11 * r11 + s11 * s11);
    let eps = axiumbilic_tolerance(jet);
    let axiumbilic = a00.abs() <= eps && b00.abs() <= eps;
    let branch = if !axiumbilic {
        None
    } else {
        let first = (r11 - 0.5 * s).abs().max((s11 + 0.5 * r).abs());
        let second = (r11 + 0.5 * s).abs().max((s11 - 0.5 * r).abs());
        if first <= eps && second <= eps {
            Some(AxiumbilicBranch::Both)
        } else if first <= second {
            Some(AxiumbilicBranch::First)
        } else {
            Some(AxiumbilicBranch::Second)
        }
    };
    AxiumbilicTest { axiumbilic, a00, b00, branch }
}

/// Solutions of `a₀ = a₁ = 0` (with all five coefficients vanishing) in the
/// closed disk of `radius` around `center`, from Newton iterations seeded on
/// an `n × n` grid over the enclosing square.
pub fn locate_axiumbilics(jet: &MongeJet, center: (f64, f64), radius: f64, n: usize) -> Vec<(f64, f64)> {
    let mut found: Vec<(f64, f64)> = Vec::new();
    let n = n.max(1);
    let dedupe = 1e-6 * radius.max(1e-3);
    for i in 0..n {
        for j in 0..n {
            let (fx, fy) = if n == 1 {
                (0.0, 0.0)
            } else {
                (2.0 * i as f64 / (n - 1) as f64 - 1.0, 2.0 * j as f64 / (n - 1) as f64 - 1.0)
            };
            let seed = (center.0 + radius * fx, center.1 + radius * fy);
            if let Some(p) = newton_axiumbilic(jet, seed, center, 2.0 * radius) {
                if (p.0 - center.0).hypot(p.1 - center.1) <= radius * (1.0 + 1e-12)
                    && !found.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < dedupe)
                {
                    found.push(p);
                }
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    found
}

/// Newton iteration on `(a₀, a₁)` from `seed`, abandoned when it leaves the
/// disk of radius `limit` around `center`.
pub fn newton_axiumbilic(jet: &MongeJet, seed: (f64, f64), center: (f64, f64), limit: f64) -> Option<(f64, f64)> {
    let (mut x, mut y) = seed;
    let mut converged = false;
    for _ in 0..40 {
        let c = local_coefficients(jet, x, y, 1);
        let (f0, f1) = (c[0].value(), c[1].value());
        let (j00, j01, j10, j11) = (c[0].coeff(1, 0), c[0].coeff(0, 1), c[1].coeff(1, 0), c[1].coeff(0, 1));
        let det = j00 * j11 - j01 * j10;
        let scale = j00.abs().max(j01.abs()).max(j10.abs()).max(j11.abs());
        if det.abs() <= 1e-14 * scale * scale || !det.is_finite() {
            return None;
        }
        let dx = (f0 * j11 - f1 * j01) / det;
        let dy = (j00 * f1 - j10 * f0) / det;
        x -= dx;
        y -= dy;
        if (x - center.0).hypot(y - center.1) > limit || !x.is_finite() || !y.is_finite() {
            return None;
        }
        if dx.hypot(dy) <= 1e-14 * (1.0 + x.abs() + y.abs()) {
            converged = true;
            break;
        }
    }
    let c = local_coefficients(jet, x, y, 1);
    let grad = c.iter().fold(0.0f64, |m, s| m.max(s.coeff(1, 0).abs()).max(s.coeff(0, 1).abs()));
    let worst = c.iter().fold(0.0f64, |m, s| m.max(s.value().abs()));
    if worst <= 1e-9 * (grad + jet.magnitude()) && (converged || worst <= 1e-12 * (grad + 1.0)) {
        Some((x, y))
    } else {
        None
    }
}
