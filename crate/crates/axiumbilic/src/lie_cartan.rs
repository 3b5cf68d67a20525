//! The Lie-Cartan suspension of the axial quartic.
//!
//! `𝒢(x, y, p) = Σ aₖ(x, y) pᵏ` is lifted to `(x, y, p)` space (or to the
//! dual chart `q = dx/dy` with the reversed quartic). Its tangent field is
//! `X = 𝒢ₚ ∂x + p𝒢ₚ ∂y − (𝒢ₓ + p𝒢ᵧ) ∂p`.

use crate::axial_quartic::{local_coefficients, QuarticSeries};
use crate::error::{Error, Result};
use crate::monge_surface::MongeJet;
use crate::normal_form::{chi_invariant, NormalFormAB};
use crate::poly::{self, RealRoot, UPoly};
use crate::series::Series2;
use crate::tol;
use num_rational::BigRational;
use serde::Serialize;

/// Source of the quartic coefficients `a₀ … a₄` as local Taylor expansions.
pub trait CoefficientField {
    /// Expansions of `a₀ … a₄` at `(x, y)` to total degree `deg` in the offsets.
    fn local(&self, x: f64, y: f64, deg: usize) -> [Series2; 5];
}

/// The quartic of a Monge jet.
#[derive(Clone, Debug, PartialEq)]
pub struct JetField {
    pub jet: MongeJet,
}

impl JetField {
    pub fn new(jet: &MongeJet) -> Self {
        JetField { jet: *jet }
    }
}

impl CoefficientField for JetField {
    fn local(&self, x: f64, y: f64, deg: usize) -> [Series2; 5] {
        local_coefficients(&self.jet, x, y, deg)
    }
}

/// The symmetric model `[a₀, a₁, −6a₀, −a₁, a₀]` with `a₀, a₁` the quadratic
/// polynomials of a [`QuarticSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModelField {
    pub series: QuarticSeries,
}

impl ModelField {
    /// `a₀ = y`, `a₁ = ax + by`.
    pub fn normal_form(a: f64, b: f64) -> Self {
        ModelField { series: QuarticSeries { a01: 1.0, b10: a, b01: b, ..Default::default() } }
    }

    pub fn from_series(series: &QuarticSeries) -> Self {
        ModelField { series: *series }
    }

    fn polys(&self) -> (Series2, Series2) {
        let s = &self.series;
        let mut a0 = Series2::zero(2);
        let mut a1 = Series2::zero(2);
        for (p, c) in [
            (&mut a0, [s.a00, s.a10, s.a01, s.a20, s.a11, s.a02]),
            (&mut a1, [s.b00, s.b10, s.b01, s.b20, s.b11, s.b02]),
        ] {
            p.set(0, 0, c[0]);
            p.set(1, 0, c[1]);
            p.set(0, 1, c[2]);
            p.set(2, 0, 0.5 * c[3]);
            p.set(1, 1, c[4]);
            p.set(0, 2, 0.5 * c[5]);
        }
        (a0, a1)
    }
}

impl CoefficientField for ModelField {
    fn local(&self, x: f64, y: f64, deg: usize) -> [Series2; 5] {
        let (a0, a1) = self.polys();
        let a0 = a0.shift(x, y).with_deg(deg);
        let a1 = a1.shift(x, y).with_deg(deg);
        [a0, a1, a0.scale(-6.0), -a1, a0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    /// `p = dy/dx`
    P,
    /// `q = dx/dy`
    Q,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::P => Chart::Q,
            Chart::Q => Chart::P,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Chart::P => "p",
            Chart::Q => "q",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LCState {
    pub x: f64,
    pub y: f64,
    /// Slope in the active chart.
    pub s: f64,
    pub chart: Chart,
}

impl LCState {
    pub fn new(x: f64, y: f64, s: f64, chart: Chart) -> Self {
        LCState { x, y, s, chart }
    }

    /// State for the direction with slope `p = dy/dx` (`±∞` for vertical),
    /// in the chart where the slope has modulus at most one.
    pub fn from_slope(x: f64, y: f64, p: f64) -> Self {
        if p.abs() <= 1.0 {
            LCState::new(x, y, p, Chart::P)
        } else {
            LCState::new(x, y, 1.0 / p, Chart::Q)
        }
    }

    /// `dy/dx`; infinite for the vertical direction.
    pub fn p(&self) -> f64 {
        match self.chart {
            Chart::P => self.s,
            Chart::Q => {
                if self.s == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / self.s
                }
            }
        }
    }

    /// Unit tangent direction in the plane.
    pub fn direction(&self) -> (f64, f64) {
        let (u, v) = match self.chart {
            Chart::P => (1.0, self.s),
            Chart::Q => (self.s, 1.0),
        };
        let n = u.hypot(v);
        (u / n, v / n)
    }

    pub fn switched(&self) -> LCState {
        LCState::new(self.x, self.y, 1.0 / self.s, self.chart.other())
    }

    fn vec(&self) -> [f64; 3] {
        [self.x, self.y, self.s]
    }

    fn with_vec(&self, v: [f64; 3]) -> LCState {
        LCState::new(v[0], v[1], v[2], self.chart)
    }
}

/// Value and partial derivatives of `𝒢` in a chart.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GJet {
    pub g: f64,
    pub gx: f64,
    pub gy: f64,
    pub gs: f64,
    pub gxx: f64,
    pub gxy: f64,
    pub gyy: f64,
    pub gxs: f64,
    pub gys: f64,
    pub gss: f64,
}

impl GJet {
    pub fn gradient(&self) -> [f64; 3] {
        [self.gx, self.gy, self.gs]
    }

    pub fn gradient_norm(&self) -> f64 {
        norm(self.gradient())
    }

    pub fn hessian(&self) -> [[f64; 3]; 3] {
        [[self.gxx, self.gxy, self.gxs], [self.gxy, self.gyy, self.gys], [self.gxs, self.gys, self.gss]]
    }
}

fn chart_coefficients(c: &[Series2; 5], chart: Chart) -> [Series2; 5] {
    match chart {
        Chart::P => *c,
        Chart::Q => [c[4], c[3], c[2], c[1], c[0]],
    }
}

/// `𝒢` and its derivatives to second order (first order when `second` is false).
pub fn g_jet<F: CoefficientField + ?Sized>(field: &F, state: &LCState, second: bool) -> GJet {
    let c = chart_coefficients(&field.local(state.x, state.y, if second { 2 } else { 1 }), state.chart);
    let s = state.s;
    let mut j = GJet::default();
    let mut pw = [1.0; 5];
    for k in 1..5 {
        pw[k] = pw[k - 1] * s;
    }
    for (k, ck) in c.iter().enumerate() {
        let (v, vx, vy) = (ck.coeff(0, 0), ck.coeff(1, 0), ck.coeff(0, 1));
        j.g += v * pw[k];
        j.gx += vx * pw[k];
        j.gy += vy * pw[k];
        if k >= 1 {
            let kf = k as f64;
            j.gs += kf * v * pw[k - 1];
            j.gxs += kf * vx * pw[k - 1];
            j.gys += kf * vy * pw[k - 1];
        }
        if k >= 2 {
            j.gss += (k * (k - 1)) as f64 * v * pw[k - 2];
        }
        if second {
            j.gxx += 2.0 * ck.coeff(2, 0) * pw[k];
            j.gxy += ck.coeff(1, 1) * pw[k];
            j.gyy += 2.0 * ck.coeff(0, 2) * pw[k];
        }
    }
    j
}

pub fn field_from_jet(j: &GJet, state: &LCState) -> [f64; 3] {
    let s = state.s;
    match state.chart {
        Chart::P => [j.gs, s * j.gs, -(j.gx + s * j.gy)],
        Chart::Q => [s * j.gs, j.gs, -(j.gy + s * j.gx)],
    }
}

/// The tangent field `X` at a state.
pub fn lc_field<F: CoefficientField + ?Sized>(field: &F, state: &LCState) -> [f64; 3] {
    field_from_jet(&g_jet(field, state, false), state)
}

/// Jacobian of `X` in the chart coordinates `(x, y, s)`.
pub fn dx_matrix(j: &GJet, state: &LCState) -> [[f64; 3]; 3] {
    let s = state.s;
    match state.chart {
        Chart::P => [
            [j.gxs, j.gys, j.gss],
            [s * j.gxs, s * j.gys, j.gs + s * j.gss],
            [-(j.gxx + s * j.gxy), -(j.gxy + s * j.gyy), -(j.gxs + j.gy + s * j.gys)],
        ],
        Chart::Q => [
            [s * j.gxs, s * j.gys, j.gs + s * j.gss],
            [j.gxs, j.gys, j.gss],
            [-(j.gxy + s * j.gxx), -(j.gyy + s * j.gxy), -(j.gys + j.gx + s * j.gxs)],
        ],
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EquilibriumKind {
    Saddle,
    Node,
    SaddleNode,
    MorseCone,
}

/// An equilibrium of `X` on the projective line over an axiumbilic point.
///
/// `λ₁` belongs to the direction transversal to the line, `λ₂` to the line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LCEquilibrium {
    /// `dy/dx`; infinite for the vertical direction.
    pub p: f64,
    /// Chart used for the linearisation and the slope there.
    pub chart: Chart,
    pub slope: f64,
    pub multiplicity: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub kind: EquilibriumKind,
    /// Eigenvector of `λ₁` in `(x, y, s)`.
    pub v1: [f64; 3],
    /// Eigenvector of `λ₂`, the line direction.
    pub v2: [f64; 3],
    /// `|(𝒢ₓ, 𝒢ᵧ)|`, zero at cone points.
    pub grad_xy: f64,
    pub x0: f64,
    pub y0: f64,
}

impl LCEquilibrium {
    pub fn state(&self) -> LCState {
        LCState::new(self.x0, self.y0, self.slope, self.chart)
    }

    /// Angle of the direction in `(−π/2, π/2]`.
    pub fn angle(&self) -> f64 {
        if self.p.is_infinite() {
            std::f64::consts::FRAC_PI_2
        } else {
            self.p.atan()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquilibriumCensus {
    pub saddles: usize,
    pub nodes: usize,
    pub saddle_nodes: usize,
    pub cones: usize,
}

pub fn census(eqs: &[LCEquilibrium]) -> EquilibriumCensus {
    let mut c = EquilibriumCensus::default();
    for e in eqs {
        match e.kind {
            EquilibriumKind::Saddle => c.saddles += 1,
            EquilibriumKind::Node => c.nodes += 1,
            EquilibriumKind::SaddleNode => c.saddle_nodes += 1,
            EquilibriumKind::MorseCone => c.cones += 1,
        }
    }
    c
}

/// Coefficients of `𝒢ₓ + p𝒢ᵧ` (p chart) and `𝒢ᵧ + q𝒢ₓ` (q chart) over `(x0, y0)`.
pub fn line_polynomials(c: &[Series2; 5]) -> ([f64; 6], [f64; 6]) {
    let ax = |k: isize| if (0..5).contains(&k) { c[k as usize].coeff(1, 0) } else { 0.0 };
    let ay = |k: isize| if (0..5).contains(&k) { c[k as usize].coeff(0, 1) } else { 0.0 };
    let mut pp = [0.0; 6];
    let mut qq = [0.0; 6];
    for j in 0..6isize {
        pp[j as usize] = ax(j) + ay(j - 1);
        qq[j as usize] = ay(4 - j) + ax(5 - j);
    }
    (pp, qq)
}

/// Equilibria of `X` on the projective line over the axiumbilic point `(x0, y0)`.
pub fn line_equilibria<F: CoefficientField + ?Sized>(field: &F, x0: f64, y0: f64) -> Result<Vec<LCEquilibrium>> {
    let c = field.local(x0, y0, 2);
    let (pp, qq) = line_polynomials(&c);
    let scale = pp.iter().chain(qq.iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    let values = c.iter().fold(0.0f64, |m, s| m.max(s.coeff(0, 0).abs()));
    if values > tol::tol(1e-8) * (1.0 + scale) {
        return Err(Error::NotAxiumbilic { a0: c[0].coeff(0, 0), a1: c[1].coeff(0, 0) });
    }
    if scale <= tol::tol(1e-12) {
        return Err(Error::Degenerate("projective line consists of equilibria".into()));
    }
    let mut found: Vec<(f64, usize)> = Vec::new();
    let snap = |c: &[f64; 6], v: f64| if c[0].abs() <= tol::tol(1e-14) * scale && v.abs() < poly::CLUSTER_RADIUS { 0.0 } else { v };
    for r in poly::real_roots(&pp) {
        if r.value.abs() <= 1.0 {
            found.push((snap(&pp, r.value), r.multiplicity));
        }
    }
    for r in poly::real_roots(&qq) {
        if r.value.abs() < 1.0 {
            let v = snap(&qq, r.value);
            let p = if v == 0.0 { f64::INFINITY } else { 1.0 / v };
            found.push((p, r.multiplicity));
        }
    }
    let eps = tol::tol(1e-8) * scale;
    let mut out = Vec::new();
    for (p, multiplicity) in found {
        let state = if p.abs() <= 1e3 {
            LCState::new(x0, y0, p, Chart::P)
        } else {
            LCState::new(x0, y0, 1.0 / p, Chart::Q)
        };
        let j = g_jet(field, &state, true);
        let m = dx_matrix(&j, &state);
        let lambda2 = m[2][2];
        let lambda1 = m[0][0] + m[1][1] + m[2][2] - lambda2;
        let (u, v) = match state.chart {
            Chart::P => (1.0, state.s),
            Chart::Q => (state.s, 1.0),
        };
        let n = u.hypot(v);
        let w = [u / n, v / n, 0.0];
        let b10 = mat_vec(&m, w)[2];
        let gap = lambda1 - lambda2;
        let mut v1 = if gap.abs() > eps { [w[0], w[1], b10 / gap] } else { w };
        let nv = norm(v1);
        v1 = [v1[0] / nv, v1[1] / nv, v1[2] / nv];
        let grad_xy = j.gx.hypot(j.gy);
        let kind = if grad_xy <= eps {
            EquilibriumKind::MorseCone
        } else if multiplicity >= 2 || lambda1.abs() <= eps || lambda2.abs() <= eps {
            EquilibriumKind::SaddleNode
        } else if lambda1 * lambda2 < 0.0 {
            EquilibriumKind::Saddle
        } else {
            EquilibriumKind::Node
        };
        out.push(LCEquilibrium {
            p,
            chart: state.chart,
            slope: state.s,
            multiplicity,
            lambda1,
            lambda2,
            kind,
            v1,
            v2: [0.0, 0.0, 1.0],
            grad_xy,
            x0,
            y0,
        });
    }
    out.sort_by(|a, b| a.angle().partial_cmp(&b.angle()).unwrap());
    Ok(out)
}

/// Equilibria of the normal form with parameters `(a, b)`.
pub fn lc_equilibria(a: f64, b: f64) -> Result<Vec<LCEquilibrium>> {
    line_equilibria(&ModelField::normal_form(a, b), 0.0, 0.0)
}

/// Closed-form eigenvalues at a root `p` of `P = pR`.
pub fn eigen_formula(a: f64, b: f64, p: f64) -> (f64, f64) {
    if p == 0.0 {
        return (a, -(a + 1.0));
    }
    let p2 = p * p;
    let dr = 4.0 * p2 * p - 3.0 * b * p2 - 2.0 * (6.0 + a) * p + b;
    ((p2 + 1.0).powi(3) / (p2 - 1.0), -p * dr)
}

/// `(λ₁, λ₂)` of the `a = −1` normal form at any `p`.
pub fn lc_eigenvalues_e34(b: f64, p: f64) -> (f64, f64) {
    let p2 = p * p;
    (
        4.0 * p2 * p2 - 3.0 * b * p2 * p - 9.0 * p2 + b * p - 1.0,
        p * (-5.0 * p2 * p + 4.0 * b * p2 + 15.0 * p - 2.0 * b),
    )
}

/// The same pair at a nonzero root of `p³ − bp² − 5p + b`.
pub fn lc_eigenvalues_e34_at_root(p: f64) -> (f64, f64) {
    let p2 = p * p;
    ((p2 + 1.0).powi(3) / (p2 - 1.0), -p2 * (p2 * p2 + 2.0 * p2 + 5.0) / (p2 - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConePoint {
    pub p: f64,
    pub hessian_det: f64,
    pub hessian_formula: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `(p² + 1)³/(p² − 1)`
    pub lambda_formula: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseAnalysis {
    pub chi: f64,
    pub b01: f64,
    pub cones: Vec<ConePoint>,
    pub s_discriminant: BigRational,
    pub s_discriminant_formula: BigRational,
    pub resultant: BigRational,
    pub resultant_formula: BigRational,
    /// The equilibrium at `p = 0` on the regular sheet.
    pub saddle_node: LCEquilibrium,
    /// `ℓ₁ = (1, −a20)` in `(x, p)`.
    pub l1: (f64, f64),
}

/// `S(p) = (p⁴ − 6p² + 1) + b01·p(1 − p²)` ascending.
pub fn s_coefficients(b01: f64) -> [f64; 5] {
    [1.0, b01, -6.0, -b01, 1.0]
}

/// `S(p)` in the factored form, exact at `p = 0, ±1`.
pub fn eval_s(b01: f64, p: f64) -> f64 {
    let p2 = p * p;
    (p2 * p2 - 6.0 * p2 + 1.0) + b01 * p * (1.0 - p2)
}

/// Hessian determinant of `𝒢` along the line, `−𝒢ₓₓ·𝒢ᵧₚ²`.
pub fn hessian_formula(a20: f64, b20: f64, b01: f64, p: f64) -> f64 {
    let p2 = p * p;
    let gxx = a20 * (1.0 - 6.0 * p2 + p2 * p2) + b20 * p * (1.0 - p2);
    let gyp = b01 - 12.0 * p - 3.0 * b01 * p2 + 4.0 * p2 * p;
    -gxx * gyp * gyp
}

fn rational_s(b01: &BigRational) -> UPoly<BigRational> {
    let q = |v: i64| poly::rational_frac(v, 1);
    UPoly(vec![q(1), b01.clone(), q(-6), -b01.clone(), q(1)])
}

/// `Res(S, Hess)` exactly, for the exact binary values of the inputs.
pub fn cone_resultant(a20: f64, b20: f64, b01: f64) -> BigRational {
    let q = |v: i64| poly::rational_frac(v, 1);
    let (a20, b20, b01) = (poly::rational(a20), poly::rational(b20), poly::rational(b01));
    let gxx = UPoly(vec![q(1), q(0), q(-6), q(0), q(1)]).scale(&a20) + UPoly(vec![q(0), q(1), q(0), q(-1)]).scale(&b20);
    let gyp = UPoly(vec![b01.clone(), q(-12), -(q(3) * b01.clone()), q(4)]);
    let hess = (gxx * gyp.pow(2)).scale(&q(-1));
    poly::resultant(&rational_s(&b01).0, &hess.0)
}

/// `256χ⁴(16 + b01²)⁶`
pub fn cone_resultant_formula(a20: f64, b20: f64, b01: f64) -> BigRational {
    let q = |v: i64| poly::rational_frac(v, 1);
    let (a20, b20, b01) = (poly::rational(a20), poly::rational(b20), poly::rational(b01));
    let chi = b20 - a20 * b01.clone();
    let u = q(16) + b01.clone() * b01;
    let pw = |x: &BigRational, n: usize| (0..n).fold(q(1), |acc, _| acc * x.clone());
    q(256) * pw(&chi, 4) * pw(&u, 6)
}

pub fn s_discriminant(b01: f64) -> BigRational {
    poly::discriminant(&rational_s(&poly::rational(b01)).0)
}

/// `4(16 + b01²)³`
pub fn s_discriminant_formula(b01: f64) -> BigRational {
    let q = |v: i64| poly::rational_frac(v, 1);
    let b = poly::rational(b01);
    let u = q(16) + b.clone() * b;
    q(4) * u.clone() * u.clone() * u
}

/// Cone points and the transversal saddle-node of an adapted `T = 0` series.
pub fn morse_analysis_e45(series: &QuarticSeries) -> Result<MorseAnalysis> {
    let chi = chi_invariant(series)?;
    let scale = 1.0 + series.b20.abs() + series.a20.abs() * (1.0 + series.b01.abs());
    if chi.abs() <= tol::tol(1e-9) * scale {
        return Err(Error::Degenerate("chi = 0".into()));
    }
    let field = ModelField::from_series(series);
    let eqs = line_equilibria(&field, 0.0, 0.0)?;
    let mut cones = Vec::new();
    let mut saddle_node = None;
    for e in eqs {
        match e.kind {
            EquilibriumKind::MorseCone => {
                let j = g_jet(&field, &e.state(), true);
                let p = e.p;
                cones.push(ConePoint {
                    p,
                    hessian_det: det3(&j.hessian()),
                    hessian_formula: hessian_formula(series.a20, series.b20, series.b01, p),
                    lambda1: e.lambda1,
                    lambda2: e.lambda2,
                    lambda_formula: (p * p + 1.0).powi(3) / (p * p - 1.0),
                });
            }
            _ if e.p == 0.0 || e.p.abs() < 1e-9 => saddle_node = Some(e),
            _ => {}
        }
    }
    let saddle_node = saddle_node.ok_or_else(|| Error::Degenerate("no equilibrium at p = 0".into()))?;
    Ok(MorseAnalysis {
        chi,
        b01: series.b01,
        cones,
        s_discriminant: s_discriminant(series.b01),
        s_discriminant_formula: s_discriminant_formula(series.b01),
        resultant: cone_resultant(series.a20, series.b20, series.b01),
        resultant_formula: cone_resultant_formula(series.a20, series.b20, series.b01),
        saddle_node,
        l1: (1.0, -series.a20),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SaddleNodeFlavor {
    /// Saddle-node along the projective line (`a = −1`).
    E34,
    /// Saddle-node transversal to the projective line (`T = 0`).
    E45,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaylorComparison {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub residual: f64,
}

/// 2-jets of the restricted field in the `(x, p)` chart at `p = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleNodeReport {
    pub flavor: SaddleNodeFlavor,
    /// `y(x, p)` on `𝒢 = 0`.
    pub y: Series2,
    pub xdot: Series2,
    pub pdot: Series2,
    pub comparisons: Vec<TaylorComparison>,
    /// Alternative readings recorded without a verdict.
    pub alternatives: Vec<TaylorComparison>,
}

impl SaddleNodeReport {
    pub fn max_residual(&self) -> f64 {
        self.comparisons.iter().fold(0.0f64, |m, c| m.max(c.residual))
    }

    pub fn get(&self, name: &str) -> Option<&TaylorComparison> {
        self.comparisons.iter().chain(self.alternatives.iter()).find(|c| c.name == name)
    }
}

/// Solves `𝒢(x, y, p) = 0` for `y(x, p)` near the origin and returns
/// `(y, ẋ, ṗ)` as series in `(x, p)`.
pub fn restricted_two_jet<F: CoefficientField + ?Sized>(field: &F) -> Result<(Series2, Series2, Series2)> {
    let c = field.local(0.0, 0.0, 3);
    let gy0 = c[0].coeff(0, 1);
    if gy0.abs() <= tol::tol(1e-10) * (1.0 + c.iter().fold(0.0f64, |m, s| m.max(s.max_abs()))) {
        return Err(Error::ImplicitFailure("G_y vanishes at the origin".into()));
    }
    let xs = Series2::var_x(0.0, 2);
    let ps = Series2::var_y(0.0, 2);
    let g_at = |y: Series2| {
        let mut acc = Series2::zero(2);
        let mut pk = Series2::constant(1.0, 2);
        for ck in &c {
            acc += ck.eval(xs, y) * pk;
            pk = pk * ps;
        }
        acc
    };
    let mut y = Series2::zero(2);
    for _ in 0..6 {
        y = y - g_at(y).scale(1.0 / gy0);
    }
    if g_at(y).max_abs() > 1e-10 * (1.0 + gy0.abs()) {
        return Err(Error::ImplicitFailure("fixed point did not converge".into()));
    }
    let mut xdot = Series2::zero(2);
    let mut gx = Series2::zero(2);
    let mut gy = Series2::zero(2);
    let mut pk = Series2::constant(1.0, 2);
    let mut pkm1 = Series2::zero(2);
    for (k, ck) in c.iter().enumerate() {
        let v = ck.eval(xs, y);
        if k >= 1 {
            xdot += v.scale(k as f64) * pkm1;
        }
        gx += ck.dx().with_deg(2).eval(xs, y) * pk;
        gy += ck.dy().with_deg(2).eval(xs, y) * pk;
        pkm1 = pk;
        pk = pk * ps;
    }
    let pdot = -(gx + ps * gy);
    Ok((y, xdot, pdot))
}

fn cmp(name: &str, computed: f64, expected: f64) -> TaylorComparison {
    TaylorComparison { name: name.to_string(), computed, expected, residual: (computed - expected).abs() }
}

/// Compares the computed 2-jets with the expected saddle-node normal forms.
///
/// E34 (`a = −1`): `y = xp`, `ẋ = −x + bxp`, `ṗ = −bp²`.
/// E45: `y = −½a20 x²`, `ẋ = ½χ x²`; the linear `p` term of `ṗ` is recorded
/// against both `−1` and `−(1 + a11 + χ)`.
pub fn saddle_node_chart_check(nf: &NormalFormAB, flavor: SaddleNodeFlavor) -> Result<SaddleNodeReport> {
    let field = JetField::new(&nf.jet);
    let (y, xdot, pdot) = restricted_two_jet(&field)?;
    let mut comparisons = Vec::new();
    let mut alternatives = Vec::new();
    match flavor {
        SaddleNodeFlavor::E34 => {
            let b = nf.b;
            comparisons.push(cmp("y.xp", y.coeff(1, 1), 1.0));
            comparisons.push(cmp("y.x", y.coeff(1, 0), 0.0));
            comparisons.push(cmp("y.p", y.coeff(0, 1), 0.0));
            comparisons.push(cmp("xdot.x", xdot.coeff(1, 0), -1.0));
            comparisons.push(cmp("xdot.p", xdot.coeff(0, 1), 0.0));
            comparisons.push(cmp("xdot.xp", xdot.coeff(1, 1), b));
            comparisons.push(cmp("pdot.p", pdot.coeff(0, 1), 0.0));
            comparisons.push(cmp("pdot.pp", pdot.coeff(0, 2), -b));
            alternatives.push(cmp("pdot.x", pdot.coeff(1, 0), 0.0));
            alternatives.push(cmp("pdot.xp", pdot.coeff(1, 1), 0.0));
        }
        SaddleNodeFlavor::E45 => {
            let s = &nf.series;
            let chi = chi_invariant(s)?;
            comparisons.push(cmp("y.xx", y.coeff(2, 0), -0.5 * s.a20));
            comparisons.push(cmp("y.x", y.coeff(1, 0), 0.0));
            comparisons.push(cmp("y.p", y.coeff(0, 1), 0.0));
            comparisons.push(cmp("xdot.x", xdot.coeff(1, 0), 0.0));
            comparisons.push(cmp("xdot.p", xdot.coeff(0, 1), 0.0));
            comparisons.push(cmp("xdot.xx", xdot.coeff(2, 0), 0.5 * chi));
            alternatives.push(cmp("pdot.p (reading -1)", pdot.coeff(0, 1), -1.0));
            alternatives.push(cmp("pdot.p (reading -(1+a11+chi))", pdot.coeff(0, 1), -(1.0 + s.a11 + chi)));
        }
    }
    Ok(SaddleNodeReport { flavor, y, xdot, pdot, comparisons, alternatives })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    Budget,
    WindowExit,
    Equilibrium,
    StopPoint,
    StepUnderflow,
    ProjectionFailure,
    MaxSteps,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrateOptions {
    /// Arclength budget in chart coordinates.
    pub budget: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Local error tolerance per step.
    pub rtol: f64,
    /// `[xmin, xmax, ymin, ymax]`
    pub window: Option<[f64; 4]>,
    pub stop_points: Vec<(f64, f64)>,
    pub stop_radius: f64,
    pub max_steps: usize,
    /// `‖X‖ ≤ eq_tol·‖∇𝒢‖` counts as an equilibrium.
    pub eq_tol: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            budget: 1.0,
            h_init: 1e-3,
            h_max: 2e-2,
            h_min: 1e-12,
            rtol: 1e-10,
            window: None,
            stop_points: Vec::new(),
            stop_radius: 0.0,
            max_steps: 200_000,
            eq_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LCTrajectory {
    pub states: Vec<LCState>,
    /// `|𝒢|/‖∇𝒢‖` at each state.
    pub residuals: Vec<f64>,
    pub arclength: f64,
    pub stop: StopReason,
}

impl LCTrajectory {
    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| (s.x, s.y)).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, &r| m.max(r))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,x,y,p,chart,G_residual\n");
        for (i, (s, r)) in self.states.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!("{i},{:e},{:e},{:e},{},{:e}\n", s.x, s.y, s.p(), s.chart.label(), r));
        }
        out
    }
}

fn residual(j: &GJet) -> f64 {
    let n = j.gradient_norm();
    if n == 0.0 {
        if j.g == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        j.g.abs() / n
    }
}

/// Newton steps along `∇𝒢` back onto `𝒢 = 0`.
pub fn project<F: CoefficientField + ?Sized>(field: &F, state: &LCState) -> (LCState, f64) {
    let mut st = *state;
    for _ in 0..6 {
        let j = g_jet(field, &st, false);
        let n2 = dot(j.gradient(), j.gradient());
        if n2 == 0.0 || !n2.is_finite() {
            return (st, residual(&j));
        }
        let r = residual(&j);
        if r < 1e-15 * (1.0 + st.x.abs() + st.y.abs()) {
            return (st, r);
        }
        let k = j.g / n2;
        st = st.with_vec([st.x - k * j.gx, st.y - k * j.gy, st.s - k * j.gs]);
    }
    let r = residual(&g_jet(field, &st, false));
    (st, r)
}

fn switch_chart(st: &LCState, dir: [f64; 3]) -> (LCState, [f64; 3]) {
    let s = st.s;
    let d = [dir[0], dir[1], -dir[2] / (s * s)];
    let n = norm(d);
    (st.switched(), [d[0] / n, d[1] / n, d[2] / n])
}

/// Newton in the slope alone, keeping `(x, y)` fixed.
fn solve_slope<F: CoefficientField + ?Sized>(field: &F, state: LCState) -> LCState {
    let mut st = state;
    for _ in 0..8 {
        let j = g_jet(field, &st, false);
        if j.gs == 0.0 || !j.gs.is_finite() {
            break;
        }
        let ds = j.g / j.gs;
        st.s -= ds;
        if ds.abs() < 1e-16 * (1.0 + st.s.abs()) {
            break;
        }
    }
    st
}

fn unit_field<F: CoefficientField + ?Sized>(field: &F, st: &LCState, reference: [f64; 3]) -> Option<[f64; 3]> {
    let x = lc_field(field, st);
    let n = norm(x);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    let sign = if dot(x, reference) < 0.0 { -1.0 } else { 1.0 };
    Some([sign * x[0] / n, sign * x[1] / n, sign * x[2] / n])
}

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dp_step<F: CoefficientField + ?Sized>(field: &F, st: &LCState, h: f64, reference: [f64; 3]) -> Option<([f64; 3], f64)> {
    let z = st.vec();
    let mut k = [[0.0; 3]; 7];
    for i in 0..7 {
        let _ = DP_C[i];
        let mut zi = z;
        for (j, kj) in k.iter().enumerate().take(i) {
            for d in 0..3 {
                zi[d] += h * DP_A[i][j] * kj[d];
            }
        }
        let r = if i == 0 { reference } else { k[i - 1] };
        k[i] = unit_field(field, &st.with_vec(zi), r)?;
    }
    let mut z5 = z;
    let mut err = [0.0; 3];
    for i in 0..7 {
        for d in 0..3 {
            z5[d] += h * DP_B5[i] * k[i][d];
            err[d] += h * (DP_B5[i] - DP_B4[i]) * k[i][d];
        }
    }
    Some((z5, norm(err)))
}

fn inside(window: &[f64; 4], x: f64, y: f64) -> bool {
    x >= window[0] && x <= window[1] && y >= window[2] && y <= window[3]
}

/// Fraction of the segment `a → b` that stays inside the window.
fn clip_fraction(window: &[f64; 4], a: (f64, f64), b: (f64, f64)) -> f64 {
    let mut t: f64 = 1.0;
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    if b.0 < window[0] && dx != 0.0 {
        t = t.min((window[0] - a.0) / dx);
    }
    if b.0 > window[1] && dx != 0.0 {
        t = t.min((window[1] - a.0) / dx);
    }
    if b.1 < window[2] && dy != 0.0 {
        t = t.min((window[2] - a.1) / dy);
    }
    if b.1 > window[3] && dy != 0.0 {
        t = t.min((window[3] - a.1) / dy);
    }
    t.clamp(0.0, 1.0)
}

/// Integrates the unit tangent field along `𝒢 = 0` from `start`;
/// `direction` chooses the orientation relative to `X(start)`.
pub fn integrate_lc<F: CoefficientField + ?Sized>(
    field: &F,
    start: &LCState,
    direction: f64,
    opts: &IntegrateOptions,
) -> Result<LCTrajectory> {
    let (st0, r0) = project(field, start);
    if r0 > 1e-9 * tol::scale() {
        return Err(Error::ImplicitFailure(format!("start is off the surface (residual {r0:e})")));
    }
    let mut st = st0;
    let mut traj = LCTrajectory { states: vec![st], residuals: vec![r0], arclength: 0.0, stop: StopReason::Budget };
    let j0 = g_jet(field, &st, false);
    let x0 = field_from_jet(&j0, &st);
    let nx = norm(x0);
    if nx <= opts.eq_tol * j0.gradient_norm() || nx == 0.0 {
        traj.stop = StopReason::Equilibrium;
        return Ok(traj);
    }
    let sign = if direction < 0.0 { -1.0 } else { 1.0 };
    let mut dir = [sign * x0[0] / nx, sign * x0[1] / nx, sign * x0[2] / nx];
    if st.s.abs() > 1.2 {
        (st, dir) = switch_chart(&st, dir);
        traj.states[0] = st;
    }
    let mut left: Vec<bool> =
        opts.stop_points.iter().map(|&(px, py)| (st.x - px).hypot(st.y - py) >= opts.stop_radius).collect();
    let mut h = opts.h_init.min(opts.h_max);
    let mut steps = 0usize;
    loop {
        if traj.arclength >= opts.budget * (1.0 - 1e-12) {
            traj.stop = StopReason::Budget;
            return Ok(traj);
        }
        if steps >= opts.max_steps {
            traj.stop = StopReason::MaxSteps;
            return Ok(traj);
        }
        steps += 1;
        h = h.min(opts.h_max).min(opts.budget - traj.arclength);
        let Some((z, err)) = dp_step(field, &st, h, dir) else {
            traj.stop = StopReason::Equilibrium;
            return Ok(traj);
        };
        if err > opts.rtol && h > opts.h_min {
            h = (h * (0.9 * (opts.rtol / err).powf(0.2)).max(0.2)).max(opts.h_min);
            continue;
        }
        let (next, r) = project(field, &st.with_vec(z));
        if r > 1e-9 * tol::scale() {
            if h <= opts.h_min {
                traj.stop = StopReason::ProjectionFailure;
                return Ok(traj);
            }
            h = (0.5 * h).max(opts.h_min);
            continue;
        }
        if h <= opts.h_min && err > opts.rtol {
            traj.stop = StopReason::StepUnderflow;
            return Ok(traj);
        }
        let seg = norm([next.x - st.x, next.y - st.y, next.s - st.s]);
        if let Some(w) = &opts.window {
            if !inside(w, next.x, next.y) {
                let t = clip_fraction(w, (st.x, st.y), (next.x, next.y));
                let clipped = solve_slope(
                    field,
                    LCState::new(
                        st.x + t * (next.x - st.x),
                        st.y + t * (next.y - st.y),
                        st.s + t * (next.s - st.s),
                        st.chart,
                    ),
                );
                let rc = residual(&g_jet(field, &clipped, false));
                traj.states.push(clipped);
                traj.residuals.push(rc);
                traj.arclength += t * seg;
                traj.stop = StopReason::WindowExit;
                return Ok(traj);
            }
        }
        traj.states.push(next);
        traj.residuals.push(r);
        traj.arclength += seg;
        st = next;
        let mut hit = false;
        for (k, &(px, py)) in opts.stop_points.iter().enumerate() {
            let d = (st.x - px).hypot(st.y - py);
            if d >= opts.stop_radius {
                left[k] = true;
            } else if left[k] && traj.arclength > 2.0 * opts.stop_radius {
                hit = true;
            }
        }
        if hit {
            traj.stop = StopReason::StopPoint;
            return Ok(traj);
        }
        let j = g_jet(field, &st, false);
        let x = field_from_jet(&j, &st);
        let nx = norm(x);
        if nx <= opts.eq_tol * j.gradient_norm() || nx == 0.0 {
            traj.stop = StopReason::Equilibrium;
            return Ok(traj);
        }
        let sgn = if dot(x, dir) < 0.0 { -1.0 } else { 1.0 };
        dir = [sgn * x[0] / nx, sgn * x[1] / nx, sgn * x[2] / nx];
        if st.s.abs() > 1.2 {
            (st, dir) = switch_chart(&st, dir);
            if let Some(last) = traj.states.last_mut() {
                *last = st;
            }
        }
        let grow = if err > 0.0 { (0.9 * (opts.rtol / err).powf(0.2)).min(5.0) } else { 5.0 };
        h = (h * grow.max(1.0)).min(opts.h_max);
    }
}

/// Roots of `𝒢(x, y, ·)` in both charts, as slopes `dy/dx`.
pub fn slopes_at<F: CoefficientField + ?Sized>(field: &F, x: f64, y: f64) -> Vec<RealRoot> {
    let c = field.local(x, y, 0);
    let v: Vec<f64> = c.iter().map(|s| s.coeff(0, 0)).collect();
    let mut out: Vec<RealRoot> = poly::real_roots(&v).into_iter().filter(|r| r.value.abs() <= 1.0).collect();
    let rev: Vec<f64> = v.iter().rev().copied().collect();
    for r in poly::real_roots(&rev) {
        if r.value.abs() < 1.0 {
            let p = if r.value == 0.0 { f64::INFINITY } else { 1.0 / r.value };
            out.push(RealRoot { value: p, multiplicity: r.multiplicity });
        }
    }
    out
}
