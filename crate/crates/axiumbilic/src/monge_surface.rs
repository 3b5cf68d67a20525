//! Surface patches in R⁴ given by a fourth-order Monge jet.
//!
//! The patch is `(x, y, R(x, y), S(x, y))` with
//! `R = Σ r_jk x^j y^k / (j! k!)`, `S` likewise, over `2 <= j + k <= 4`.

use crate::error::{Error, Result};
use crate::series::{factorial, Scalar, Series2};
use crate::tol;
use serde_json::{Map, Value};

/// Index set of jet coefficients, in the order of the JSON keys.
pub const INDEX: [(usize, usize); 12] = [
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (4, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 4),
];

fn slot(j: usize, k: usize) -> usize {
    INDEX
        .iter()
        .position(|&jk| jk == (j, k))
        .unwrap_or_else(|| panic!("no jet coefficient with index ({j}, {k})"))
}

fn key(j: usize, k: usize) -> String {
    format!("{j}{k}")
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct MongeJet {
    pub r: [f64; 12],
    pub s: [f64; 12],
}

impl MongeJet {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn r(&self, j: usize, k: usize) -> f64 {
        self.r[slot(j, k)]
    }

    pub fn s(&self, j: usize, k: usize) -> f64 {
        self.s[slot(j, k)]
    }

    pub fn set_r(&mut self, j: usize, k: usize, v: f64) {
        self.r[slot(j, k)] = v;
    }

    pub fn set_s(&mut self, j: usize, k: usize, v: f64) {
        self.s[slot(j, k)] = v;
    }

    pub fn with_r(mut self, j: usize, k: usize, v: f64) -> Self {
        self.set_r(j, k, v);
        self
    }

    pub fn with_s(mut self, j: usize, k: usize, v: f64) -> Self {
        self.set_s(j, k, v);
        self
    }

    /// `r = r02 - r20`
    pub fn r_diff(&self) -> f64 {
        self.r(0, 2) - self.r(2, 0)
    }

    /// `s = s02 - s20`
    pub fn s_diff(&self) -> f64 {
        self.s(0, 2) - self.s(2, 0)
    }

    pub fn magnitude(&self) -> f64 {
        self.r.iter().chain(self.s.iter()).fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn validate(&self) -> Result<()> {
        for (&(j, k), (rv, sv)) in INDEX.iter().zip(self.r.iter().zip(self.s.iter())) {
            if !rv.is_finite() {
                return Err(Error::NonFinite(format!("r{j}{k}")));
            }
            if !sv.is_finite() {
                return Err(Error::NonFinite(format!("s{j}{k}")));
            }
        }
        Ok(())
    }

    fn poly(c: &[f64; 12]) -> Series2 {
        let mut p = Series2::zero(4);
        for (n, &(j, k)) in INDEX.iter().enumerate() {
            p.set(j, k, c[n] / (factorial(j) * factorial(k)));
        }
        p
    }

    /// `R` as a degree-4 polynomial in monomial normalisation.
    pub fn r_poly(&self) -> Series2 {
        Self::poly(&self.r)
    }

    pub fn s_poly(&self) -> Series2 {
        Self::poly(&self.s)
    }

    /// Builds a jet from the degree 2..4 part of two polynomials.
    pub fn from_polys(r: &Series2, s: &Series2) -> Self {
        let mut jet = Self::zero();
        for (n, &(j, k)) in INDEX.iter().enumerate() {
            let f = factorial(j) * factorial(k);
            jet.r[n] = r.coeff(j, k) * f;
            jet.s[n] = s.coeff(j, k) * f;
        }
        jet
    }

    /// Exact polynomial addition of extra terms to `R` and `S`.
    pub fn add_polys(&self, dr: &Series2, ds: &Series2) -> Self {
        let r = self.r_poly() + dr.with_deg(4);
        let s = self.s_poly() + ds.with_deg(4);
        Self::from_polys(&r, &s)
    }

    /// The embedding's first and second partials of `R` and `S` at `(x, y)`:
    /// `[f_x, f_y, f_xx, f_xy, f_yy]`.
    pub fn partials_at(&self, x: f64, y: f64) -> ([f64; 5], [f64; 5]) {
        let pick = |p: Series2| {
            let e = p.shift(x, y);
            [e.derivative(1, 0), e.derivative(0, 1), e.derivative(2, 0), e.derivative(1, 1), e.derivative(0, 2)]
        };
        (pick(self.r_poly()), pick(self.s_poly()))
    }

    /// Parses the JSON schema `{"r": {"20": .., ..}, "s": {..}}`; missing keys are zero.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("top level must be an object".into()))?;
        for k in obj.keys() {
            if k != "r" && k != "s" {
                return Err(Error::Parse(format!("unknown top-level key \"{k}\"")));
            }
        }
        let mut jet = Self::zero();
        for (name, target) in [("r", &mut jet.r), ("s", &mut jet.s)] {
            let Some(part) = obj.get(name) else { continue };
            let part = part
                .as_object()
                .ok_or_else(|| Error::Parse(format!("\"{name}\" must be an object")))?;
            for (k, val) in part {
                let n = INDEX
                    .iter()
                    .position(|&(j, i)| key(j, i) == *k)
                    .ok_or_else(|| Error::Parse(format!("unknown key \"{name}.{k}\"")))?;
                let x = val
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("\"{name}.{k}\" must be a number")))?;
                target[n] = x;
            }
        }
        jet.validate()?;
        Ok(jet)
    }

    pub fn to_json_value(&self) -> Value {
        let part = |c: &[f64; 12]| {
            let mut m = Map::new();
            for (n, &(j, k)) in INDEX.iter().enumerate() {
                m.insert(key(j, k), Value::from(c[n]));
            }
            Value::Object(m)
        };
        let mut m = Map::new();
        m.insert("r".into(), part(&self.r));
        m.insert("s".into(), part(&self.s));
        Value::Object(m)
    }

    /// Tangent rotation `x = cos θ u + sin θ v`, `y = -sin θ u + cos θ v`.
    pub fn rotate_tangent(&self, theta: f64) -> Self {
        let (sn, cs) = theta.sin_cos();
        let mut xs = Series2::zero(4);
        xs.set(1, 0, cs);
        xs.set(0, 1, sn);
        let mut ys = Series2::zero(4);
        ys.set(1, 0, -sn);
        ys.set(0, 1, cs);
        Self::from_polys(&self.r_poly().eval(xs, ys), &self.s_poly().eval(xs, ys))
    }

    /// Normal-plane rotation `(R, S) -> (cos φ R + sin φ S, -sin φ R + cos φ S)`.
    pub fn rotate_normal(&self, phi: f64) -> Self {
        let (sn, cs) = phi.sin_cos();
        let mut out = Self::zero();
        for n in 0..12 {
            out.r[n] = cs * self.r[n] + sn * self.s[n];
            out.s[n] = -sn * self.r[n] + cs * self.s[n];
        }
        out
    }

    /// Homotety of R⁴ by `lambda`: `r_jk -> lambda^(1 - j - k) r_jk`.
    pub fn homotety(&self, lambda: f64) -> Self {
        let mut out = *self;
        for (n, &(j, k)) in INDEX.iter().enumerate() {
            let f = lambda.powi(1 - (j + k) as i32);
            out.r[n] *= f;
            out.s[n] *= f;
        }
        out
    }

    /// Monge jet of the same surface at the point over `(x0, y0)`: translate,
    /// rotate R⁴ so the tangent plane becomes the first coordinate plane, and
    /// re-solve the patch as a graph, truncating at order four.
    pub fn recenter(&self, x0: f64, y0: f64) -> Result<Self> {
        let frame = frame_at(self, x0, y0)?;
        let e1 = normalize(frame.t1);
        let e2 = normalize(sub4(frame.t2, scale4(e1, dot4(frame.t2, e1))));
        let basis = [e1, e2, frame.n1, frame.n2];

        let rp = self.r_poly().shift(x0, y0) + (-self.r_poly().eval(x0, y0));
        let sp = self.s_poly().shift(x0, y0) + (-self.s_poly().eval(x0, y0));
        let comps = [Series2::var_x(0.0, 4), Series2::var_y(0.0, 4), rp, sp];
        let coord = |b: [f64; 4]| {
            let mut acc = Series2::zero(4);
            for k in 0..4 {
                acc += comps[k].scale(b[k]);
            }
            acc
        };
        let u = coord(basis[0]);
        let v = coord(basis[1]);
        let z = coord(basis[2]);
        let w = coord(basis[3]);

        let (a, b, c, d) = (u.coeff(1, 0), u.coeff(0, 1), v.coeff(1, 0), v.coeff(0, 1));
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return Err(Error::DegenerateFrame { x: x0, y: y0 });
        }
        let nonlinear = |s: &Series2| {
            let mut t = *s;
            t.set(0, 0, 0.0);
            t.set(1, 0, 0.0);
            t.set(0, 1, 0.0);
            t
        };
        let (un, vn) = (nonlinear(&u), nonlinear(&v));
        let uu = Series2::var_x(0.0, 4);
        let vv = Series2::var_y(0.0, 4);
        let mut xs = Series2::zero(4);
        let mut ys = Series2::zero(4);
        for _ in 0..5 {
            let ru = uu - un.eval(xs, ys);
            let rv = vv - vn.eval(xs, ys);
            xs = (ru.scale(d) - rv.scale(b)).scale(1.0 / det);
            ys = (rv.scale(a) - ru.scale(c)).scale(1.0 / det);
        }
        Ok(Self::from_polys(&z.eval(xs, ys), &w.eval(xs, ys)))
    }
}

pub(crate) fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn scale4(a: [f64; 4], k: f64) -> [f64; 4] {
    [a[0] * k, a[1] * k, a[2] * k, a[3] * k]
}

fn sub4(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn normalize(a: [f64; 4]) -> [f64; 4] {
    scale4(a, 1.0 / dot4(a, a).sqrt())
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The vector `n` with `det(a, b, c, ·) = <n, ·>`.
pub fn wedge3(a: [f64; 4], b: [f64; 4], c: [f64; 4]) -> [f64; 4] {
    let mut n = [0.0; 4];
    for (i, ni) in n.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        let minor = [
            [a[cols[0]], a[cols[1]], a[cols[2]]],
            [b[cols[0]], b[cols[1]], b[cols[2]]],
            [c[cols[0]], c[cols[1]], c[cols[2]]],
        ];
        // cofactor of the last row, column i
        let sign = if (3 + i) % 2 == 0 { 1.0 } else { -1.0 };
        *ni = sign * det3(minor);
    }
    n
}

pub fn det4(a: [f64; 4], b: [f64; 4], c: [f64; 4], d: [f64; 4]) -> f64 {
    dot4(wedge3(a, b, c), d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub t1: [f64; 4],
    pub t2: [f64; 4],
    pub n1: [f64; 4],
    pub n2: [f64; 4],
}

pub fn frame_at(jet: &MongeJet, x: f64, y: f64) -> Result<Frame> {
    let (r, s) = jet.partials_at(x, y);
    let t1 = [1.0, 0.0, r[0], s[0]];
    let t2 = [0.0, 1.0, r[1], s[1]];
    let n1t = [-r[0], -r[1], 1.0, 0.0];
    let n2t = wedge3(t1, t2, n1t);
    let gram = dot4(t1, t1) * dot4(t2, t2) - dot4(t1, t2).powi(2);
    if !(gram.is_finite() && gram > 1e-300) || !dot4(n2t, n2t).is_finite() {
        return Err(Error::DegenerateFrame { x, y });
    }
    Ok(Frame { t1, t2, n1: normalize(n1t), n2: normalize(n2t) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub e1: f64,
    pub f1: f64,
    pub g1: f64,
    pub e2: f64,
    pub f2: f64,
    pub g2: f64,
}

impl FundamentalForms {
    /// Flat metric `E = G = 1, F = 0` with the given second forms.
    pub fn euclidean(e1: f64, f1: f64, g1: f64, e2: f64, f2: f64, g2: f64) -> Self {
        FundamentalForms { e: 1.0, f: 0.0, g: 1.0, e1, f1, g1, e2, f2, g2 }
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn second_form_scale(&self) -> f64 {
        [self.e1, self.f1, self.g1, self.e2, self.f2, self.g2]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

pub fn fundamental_forms_at(jet: &MongeJet, x: f64, y: f64) -> Result<FundamentalForms> {
    let fr = frame_at(jet, x, y)?;
    let (r, s) = jet.partials_at(x, y);
    let axx = [0.0, 0.0, r[2], s[2]];
    let axy = [0.0, 0.0, r[3], s[3]];
    let ayy = [0.0, 0.0, r[4], s[4]];
    Ok(FundamentalForms {
        e: dot4(fr.t1, fr.t1),
        f: dot4(fr.t1, fr.t2),
        g: dot4(fr.t2, fr.t2),
        e1: dot4(axx, fr.n1),
        f1: dot4(axy, fr.n1),
        g1: dot4(ayy, fr.n1),
        e2: dot4(axx, fr.n2),
        f2: dot4(axy, fr.n2),
        g2: dot4(ayy, fr.n2),
    })
}

pub fn mean_curvature_vector(f: &FundamentalForms) -> Result<(f64, f64)> {
    let w = f.det();
    if !(w > 0.0) {
        return Err(Error::DegenerateMetric(w));
    }
    let h = |e: f64, ff: f64, g: f64| (f.e * g - 2.0 * f.f * ff + f.g * e) / (2.0 * w);
    Ok((h(f.e1, f.f1, f.g1), h(f.e2, f.f2, f.g2)))
}

pub fn normal_curvature(f: &FundamentalForms, dx: f64, dy: f64) -> Result<(f64, f64)> {
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let i = f.e * dx * dx + 2.0 * f.f * dx * dy + f.g * dy * dy;
    let ii = |e: f64, ff: f64, g: f64| e * dx * dx + 2.0 * ff * dx * dy + g * dy * dy;
    Ok((ii(f.e1, f.f1, f.g1) / i, ii(f.e2, f.f2, f.g2) / i))
}

/// `‖k_n(v) − H‖²` in the direction `(dx, dy)`.
pub fn ellipse_distance_sq(f: &FundamentalForms, dx: f64, dy: f64) -> Result<f64> {
    let (k1, k2) = normal_curvature(f, dx, dy)?;
    let (h1, h2) = mean_curvature_vector(f)?;
    Ok((k1 - h1).powi(2) + (k2 - h2).powi(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum EllipseShape {
    NonDegenerate,
    Circle,
    Segment,
    Point,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureEllipse {
    pub center: (f64, f64),
    pub l_max: f64,
    pub l_min: f64,
    /// Unit directions of the major and minor axes in the normal plane.
    pub axes: [(f64, f64); 2],
    pub shape: EllipseShape,
    /// `(e₁ − g₁)f₂ − (e₂ − g₂)f₁` in a metric-orthonormal tangent basis.
    pub degeneracy: f64,
}

/// Closed-form ellipse of curvature: with an orthonormal tangent basis the
/// normal curvature is `H + u cos 2θ + v sin 2θ`, so the semi-axes are the
/// singular values of `[u v]`.
pub fn curvature_ellipse(f: &FundamentalForms) -> Result<CurvatureEllipse> {
    let w = f.det();
    if !(w > 0.0 && f.e > 0.0) {
        return Err(Error::DegenerateMetric(w));
    }
    let center = mean_curvature_vector(f)?;
    let w1 = (1.0 / f.e.sqrt(), 0.0);
    let k = 1.0 / (f.e * w).sqrt();
    let w2 = (-f.f * k, f.e * k);
    let bil = |e: f64, ff: f64, g: f64, a: (f64, f64), b: (f64, f64)| {
        e * a.0 * b.0 + ff * (a.0 * b.1 + a.1 * b.0) + g * a.1 * b.1
    };
    let u = (
        0.5 * (bil(f.e1, f.f1, f.g1, w1, w1) - bil(f.e1, f.f1, f.g1, w2, w2)),
        0.5 * (bil(f.e2, f.f2, f.g2, w1, w1) - bil(f.e2, f.f2, f.g2, w2, w2)),
    );
    let v = (bil(f.e1, f.f1, f.g1, w1, w2), bil(f.e2, f.f2, f.g2, w1, w2));
    // M Mᵀ = u uᵀ + v vᵀ
    let m11 = u.0 * u.0 + v.0 * v.0;
    let m22 = u.1 * u.1 + v.1 * v.1;
    let m12 = u.0 * u.1 + v.0 * v.1;
    let half_tr = 0.5 * (m11 + m22);
    let rad = (0.25 * (m11 - m22).powi(2) + m12 * m12).sqrt();
    let l_max = (half_tr + rad).max(0.0).sqrt();
    let l_min = (half_tr - rad).max(0.0).sqrt();
    let psi = 0.5 * (2.0 * m12).atan2(m11 - m22);
    let axes = [(psi.cos(), psi.sin()), (-psi.sin(), psi.cos())];
    let degeneracy = u.0 * v.1 - u.1 * v.0;

    let scale = f.second_form_scale().max(1e-300);
    let eps = tol::tol(1e-10);
    let shape = if l_max <= eps * scale {
        EllipseShape::Point
    } else if (l_max - l_min) <= eps * scale {
        EllipseShape::Circle
    } else if degeneracy.abs() <= eps * scale * scale {
        EllipseShape::Segment
    } else {
        EllipseShape::NonDegenerate
    };
    Ok(CurvatureEllipse { center, l_max, l_min, axes, shape, degeneracy })
}

pub fn curvature_ellipse_at(jet: &MongeJet, x: f64, y: f64) -> Result<CurvatureEllipse> {
    curvature_ellipse(&fundamental_forms_at(jet, x, y)?)
}

/// Quantities the axial quartic depends on: the metric and the normal-space
/// inner products of the second derivatives
/// (`ee = e₁² + e₂²`, `ef = e₁f₁ + e₂f₂`, ...). They are rational in the jet,
/// so they can be evaluated on [`Series2`] arguments.
#[derive(Clone, Copy, Debug)]
pub struct NormalProducts<S> {
    pub e: S,
    pub f: S,
    pub g: S,
    pub ee: S,
    pub ff: S,
    pub gg: S,
    pub ef: S,
    pub fg: S,
    pub eg: S,
}

impl NormalProducts<f64> {
    pub fn from_forms(f: &FundamentalForms) -> Self {
        NormalProducts {
            e: f.e,
            f: f.f,
            g: f.g,
            ee: f.e1 * f.e1 + f.e2 * f.e2,
            ff: f.f1 * f.f1 + f.f2 * f.f2,
            gg: f.g1 * f.g1 + f.g2 * f.g2,
            ef: f.e1 * f.f1 + f.e2 * f.f2,
            fg: f.f1 * f.g1 + f.f2 * f.g2,
            eg: f.e1 * f.g1 + f.e2 * f.g2,
        }
    }
}

/// Normal products of the patch at generic arguments, using the projection
/// `P_N = I − T (TᵀT)⁻¹ Tᵀ` so no square roots are needed.
pub fn normal_products<S: Scalar>(jet: &MongeJet, x: S, y: S) -> NormalProducts<S> {
    let rp = jet.r_poly();
    let sp = jet.s_poly();
    let (rx, ry) = (rp.dx(), rp.dy());
    let (sx, sy) = (sp.dx(), sp.dy());
    let d = |p: &Series2| p.eval(x, y);
    let (rx_, ry_, sx_, sy_) = (d(&rx), d(&ry), d(&sx), d(&sy));
    let sec = [
        (d(&rx.dx()), d(&sx.dx())),
        (d(&rx.dy()), d(&sx.dy())),
        (d(&ry.dy()), d(&sy.dy())),
    ];
    let e = rx_ * rx_ + sx_ * sx_ + 1.0;
    let f = rx_ * ry_ + sx_ * sy_;
    let g = ry_ * ry_ + sy_ * sy_ + 1.0;
    let inv_w = (e * g - f * f).recip();
    let tproj: Vec<(S, S)> = sec.iter().map(|&(u3, u4)| (rx_ * u3 + sx_ * u4, ry_ * u3 + sy_ * u4)).collect();
    let ip = |i: usize, j: usize| {
        let raw = sec[i].0 * sec[j].0 + sec[i].1 * sec[j].1;
        let (a1, a2) = tproj[i];
        let (b1, b2) = tproj[j];
        let corr = g * a1 * b1 - f * (a1 * b2 + a2 * b1) + e * a2 * b2;
        raw - corr * inv_w
    };
    NormalProducts { e, f, g, ee: ip(0, 0), ff: ip(1, 1), gg: ip(2, 2), ef: ip(0, 1), fg: ip(1, 2), eg: ip(0, 2) }
}
