//! One-parameter families of jets: the E34 and E45 deformations, their
//! bifurcation functions, point counts and continuation of the axiumbilic
//! locus in `(x, y, t)`.

use crate::axial_quartic::{local_coefficients, locate_axiumbilics};
use crate::classifier::{classify_point, discriminant_delta, ClassTag};
use crate::error::{Error, Result};
use crate::monge_surface::MongeJet;
use crate::normal_form::{chi_invariant, reduce_to_normal_form, reductions, NormalFormAB};
use crate::series::Series2;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Deformation {
    /// `R += t(x³/6 − xy²/2)`, `S += t x²y`.
    E34Branch1,
    /// `R += t x²y`, `S += t(−x³/6 + xy²/2)`.
    E34Branch2,
    /// `R += t xy`, `S += t xy`.
    E45,
    Constant,
}

fn poly(terms: &[(usize, usize, f64)]) -> Series2 {
    let mut s = Series2::zero(4);
    for &(i, j, v) in terms {
        s.set(i, j, v);
    }
    s
}

pub fn e34_deformation(base: &MongeJet, t: f64, branch: Deformation) -> MongeJet {
    let cubic = poly(&[(3, 0, t / 6.0), (1, 2, -t / 2.0)]);
    let mixed = poly(&[(2, 1, t)]);
    match branch {
        Deformation::E34Branch2 => base.add_polys(&mixed, &(-cubic)),
        _ => base.add_polys(&cubic, &mixed),
    }
}

pub fn e45_deformation(base: &MongeJet, t: f64) -> MongeJet {
    let xy = poly(&[(1, 1, t)]);
    base.add_polys(&xy, &xy)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneParamFamily {
    pub base: MongeJet,
    pub deformation: Deformation,
    pub t_range: (f64, f64),
}

impl OneParamFamily {
    pub fn new(base: MongeJet, deformation: Deformation, t_range: (f64, f64)) -> Self {
        OneParamFamily { base, deformation, t_range }
    }

    pub fn member(&self, t: f64) -> MongeJet {
        match self.deformation {
            Deformation::E34Branch1 | Deformation::E34Branch2 => e34_deformation(&self.base, t, self.deformation),
            Deformation::E45 => e45_deformation(&self.base, t),
            Deformation::Constant => self.base,
        }
    }
}

/// `(a₀, a₁)` at `(x, y)` and their Jacobian rows.
fn pair(jet: &MongeJet, x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let c = local_coefficients(jet, x, y, 1);
    (
        [c[0].value(), c[1].value()],
        [[c[0].coeff(1, 0), c[0].coeff(0, 1)], [c[1].coeff(1, 0), c[1].coeff(0, 1)]],
    )
}

/// Newton on `(a₀, a₁) = 0` at a fixed member, from `seed`.
fn correct_at(jet: &MongeJet, seed: (f64, f64)) -> Option<(f64, f64)> {
    let (mut x, mut y) = seed;
    for _ in 0..30 {
        let (f, j) = pair(jet, x, y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dy = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) || (x - seed.0).hypot(y - seed.1) > 0.1 {
            return None;
        }
        if dx.hypot(dy) <= 1e-15 * (1.0 + x.abs() + y.abs()) {
            break;
        }
    }
    let (f, j) = pair(jet, x, y);
    let g = j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    (f[0].abs().max(f[1].abs()) <= 1e-10 * (g + 1.0)).then_some((x, y))
}

/// Follows the base point to parameter `t` in fixed substeps.
pub fn track_point(family: &OneParamFamily, t: f64) -> Result<(f64, f64)> {
    let n = 16;
    let mut at = (0.0, 0.0);
    for k in 1..=n {
        let tk = t * k as f64 / n as f64;
        at = correct_at(&family.member(tk), at).ok_or(Error::LostPoint { x: at.0, y: at.1 })?;
    }
    Ok(at)
}

/// Normal form of the member at `t` re-centred at the tracked point, with the
/// reduction continued in `(a, b)` from the base reduction.
pub fn tracked_normal_form(family: &OneParamFamily, t: f64) -> Result<NormalFormAB> {
    tracked_normal_form_from(family, t, &reduce_to_normal_form(&family.base)?)
}

/// As [`tracked_normal_form`], continuing a chosen reduction of the base.
pub fn tracked_normal_form_from(family: &OneParamFamily, t: f64, start: &NormalFormAB) -> Result<NormalFormAB> {
    let n = 8;
    let mut at = (0.0, 0.0);
    let mut nf = start.clone();
    for k in 1..=n {
        let tk = t * k as f64 / n as f64;
        let (_, p, next) = delta_at(family, tk, at, (nf.a, nf.b)).ok_or(Error::LostPoint { x: at.0, y: at.1 })?;
        at = p;
        nf = next;
    }
    Ok(nf)
}

/// `Δ(a(t), b(t))` of the tracked point.
pub fn f_e34(family: &OneParamFamily, t: f64) -> Result<f64> {
    let nf = tracked_normal_form(family, t)?;
    Ok(discriminant_delta(nf.a, nf.b))
}

/// Base chart of an E45 family: rotation, homotety and `sign χ`.
fn e45_chart(base: &MongeJet) -> Result<(f64, f64, f64)> {
    let nf = reduce_to_normal_form(base)?;
    let chi = chi_invariant(&nf.series)?;
    if chi == 0.0 {
        return Err(Error::Degenerate("chi = 0".into()));
    }
    Ok((nf.theta, nf.lambda, chi.signum()))
}

/// Critical value of `a₁` along `a₀ = 0` in the adapted chart of the base,
/// signed by `χ`: negative with two axiumbilic points nearby, positive with
/// none. Also returns the critical point.
pub fn f_e45_with_point(family: &OneParamFamily, t: f64) -> Result<(f64, (f64, f64))> {
    let (theta, lambda, sign) = e45_chart(&family.base)?;
    let jet = family.member(t).rotate_tangent(theta).homotety(lambda);
    let (mut x, mut y) = (0.0, 0.0);
    for _ in 0..50 {
        let c = local_coefficients(&jet, x, y, 2);
        let (a, b) = (&c[0], &c[1]);
        let d = |s: &Series2, i, j| s.derivative(i, j);
        let f0 = a.value();
        let jac = d(a, 1, 0) * d(b, 0, 1) - d(a, 0, 1) * d(b, 1, 0);
        let jx = d(a, 2, 0) * d(b, 0, 1) + d(a, 1, 0) * d(b, 1, 1) - d(a, 1, 1) * d(b, 1, 0) - d(a, 0, 1) * d(b, 2, 0);
        let jy = d(a, 1, 1) * d(b, 0, 1) + d(a, 1, 0) * d(b, 0, 2) - d(a, 0, 2) * d(b, 1, 0) - d(a, 0, 1) * d(b, 1, 1);
        let (m00, m01, m10, m11) = (d(a, 1, 0), d(a, 0, 1), jx, jy);
        let det = m00 * m11 - m01 * m10;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::ImplicitFailure(format!("singular system at ({x}, {y})")));
        }
        let dx = (f0 * m11 - jac * m01) / det;
        let dy = (m00 * jac - m10 * f0) / det;
        x -= dx;
        y -= dy;
        if !(x.is_finite() && y.is_finite()) || x.hypot(y) > 1.0 {
            return Err(Error::ImplicitFailure("left the chart".into()));
        }
        if dx.hypot(dy) <= 1e-15 * (1.0 + x.abs() + y.abs()) {
            break;
        }
    }
    let c = local_coefficients(&jet, x, y, 0);
    Ok((sign * c[1].value(), (x, y)))
}

pub fn f_e45(family: &OneParamFamily, t: f64) -> Result<f64> {
    Ok(f_e45_with_point(family, t)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocatedPoint {
    pub x: f64,
    pub y: f64,
    pub class: ClassTag,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub chi: Option<f64>,
    pub delta: Option<f64>,
}

/// Class of the point over `(x, y)` after re-centring the jet there.
pub fn classify_at(jet: &MongeJet, x: f64, y: f64) -> Result<LocatedPoint> {
    let local = jet.recenter(x, y)?;
    let c = classify_point(&local)?;
    Ok(LocatedPoint { x, y, class: c.tag, a: c.evidence.a, b: c.evidence.b, chi: c.evidence.chi, delta: c.evidence.delta })
}

/// Axiumbilic points in the disk of `radius` around the origin, classified.
pub fn count_axiumbilics(jet: &MongeJet, radius: f64) -> Vec<LocatedPoint> {
    locate_axiumbilics(jet, (0.0, 0.0), radius, 41)
        .into_iter()
        .map(|(x, y)| {
            classify_at(jet, x, y).unwrap_or(LocatedPoint {
                x,
                y,
                class: ClassTag::Unclassified,
                a: None,
                b: None,
                chi: None,
                delta: None,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocusNode {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum E34Flavor {
    /// Double root of `R` away from `p = 0`, crossed by a sign change of `Δ`.
    Delta,
    /// Some reduction has `a = −1`.
    MinusOne,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusEvent {
    /// Turning point of `t` along the locus; candidate E45.
    Fold { t: f64, x: f64, y: f64, f: Option<f64> },
    /// E3 ↔ E4 change; candidate E34.
    ClassChange { t: f64, x: f64, y: f64, from: ClassTag, to: ClassTag, flavor: E34Flavor, f: f64 },
}

impl LocusEvent {
    pub fn t(&self) -> f64 {
        match self {
            LocusEvent::Fold { t, .. } | LocusEvent::ClassChange { t, .. } => *t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stall {
    pub last: LocusNode,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Locus {
    pub nodes: Vec<LocusNode>,
    pub classes: Vec<ClassTag>,
    pub events: Vec<LocusEvent>,
    pub stall: Option<Stall>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusOptions {
    pub radius: f64,
    pub ds_max: f64,
    pub ds_min: f64,
    pub max_steps: usize,
}

impl Default for LocusOptions {
    fn default() -> Self {
        LocusOptions { radius: 0.05, ds_max: 2e-3, ds_min: 1e-12, max_steps: 2000 }
    }
}

struct Eval {
    f: [f64; 2],
    rows: [[f64; 3]; 2],
}

fn eval3(family: &OneParamFamily, u: [f64; 3]) -> Eval {
    let (f, j) = pair(&family.member(u[2]), u[0], u[1]);
    let h = 1e-6;
    let (fp, _) = pair(&family.member(u[2] + h), u[0], u[1]);
    let (fm, _) = pair(&family.member(u[2] - h), u[0], u[1]);
    let ft = [(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)];
    Eval { f, rows: [[j[0][0], j[0][1], ft[0]], [j[1][0], j[1][1], ft[1]]] }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 0.0 && n.is_finite()).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = dot(m[0], cross(m[1], m[2]));
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let col = |k: usize| [m[0][k], m[1][k], m[2][k]];
    let (c0, c1, c2) = (col(0), col(1), col(2));
    Some([dot(r, cross(c1, c2)) / det, dot(c0, cross(r, c2)) / det, dot(c0, cross(c1, r)) / det])
}

fn tangent(family: &OneParamFamily, u: [f64; 3]) -> Option<[f64; 3]> {
    let e = eval3(family, u);
    unit(cross(e.rows[0], e.rows[1]))
}

fn corrector(family: &OneParamFamily, pred: [f64; 3], tau: [f64; 3]) -> Option<[f64; 3]> {
    let mut u = pred;
    for _ in 0..12 {
        let e = eval3(family, u);
        let r = [e.f[0], e.f[1], dot(tau, [u[0] - pred[0], u[1] - pred[1], u[2] - pred[2]])];
        let du = solve3([e.rows[0], e.rows[1], tau], r)?;
        for k in 0..3 {
            u[k] -= du[k];
        }
        if !u.iter().all(|v| v.is_finite()) {
            return None;
        }
        if dot(du, du).sqrt() <= 1e-14 * (1.0 + u[0].abs() + u[1].abs()) {
            let e = eval3(family, u);
            let g = e.rows.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            return (e.f[0].abs().max(e.f[1].abs()) <= 1e-10 * (1.0 + g)).then_some(u);
        }
    }
    None
}

/// One branch of the pseudo-arclength continuation from `start` along `tau0`.
fn branch(
    family: &OneParamFamily,
    start: [f64; 3],
    tau0: [f64; 3],
    opts: &LocusOptions,
) -> (Vec<[f64; 3]>, Option<Stall>) {
    let (t0, t1) = family.t_range;
    let mut out = vec![start];
    let mut u = start;
    let mut tau = tau0;
    let mut ds = opts.ds_max;
    for _ in 0..opts.max_steps {
        let pred = [u[0] + ds * tau[0], u[1] + ds * tau[1], u[2] + ds * tau[2]];
        match corrector(family, pred, tau) {
            Some(next) => {
                let Some(mut nt) = tangent(family, next) else {
                    return (out, Some(stall(u, "singular Jacobian")));
                };
                if dot(nt, tau) < 0.0 {
                    nt = [-nt[0], -nt[1], -nt[2]];
                }
                u = next;
                tau = nt;
                out.push(u);
                ds = (ds * 1.5).min(opts.ds_max);
                if u[2] < t0 || u[2] > t1 || u[0].hypot(u[1]) > opts.radius {
                    return (out, None);
                }
            }
            None => {
                ds *= 0.5;
                if ds < opts.ds_min {
                    return (out, Some(stall(u, "corrector failed")));
                }
            }
        }
    }
    (out, Some(stall(u, "step limit")))
}

fn stall(u: [f64; 3], reason: &str) -> Stall {
    Stall { last: LocusNode { x: u[0], y: u[1], t: u[2] }, reason: reason.into() }
}

/// Fold point: `a₀ = a₁ = det ∂(a₀, a₁)/∂(x, y) = 0`.
fn refine_fold(family: &OneParamFamily, guess: [f64; 3]) -> Option<[f64; 3]> {
    let jdet = |u: [f64; 3]| {
        let (_, j) = pair(&family.member(u[2]), u[0], u[1]);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    };
    let mut u = guess;
    for _ in 0..30 {
        let e = eval3(family, u);
        let g = jdet(u);
        let h = 1e-7;
        let mut grad = [0.0; 3];
        for k in 0..3 {
            let (mut up, mut um) = (u, u);
            let hk = if k == 2 { h * 1e-1 } else { h };
            up[k] += hk;
            um[k] -= hk;
            grad[k] = (jdet(up) - jdet(um)) / (2.0 * hk);
        }
        let du = solve3([e.rows[0], e.rows[1], grad], [e.f[0], e.f[1], g])?;
        for k in 0..3 {
            u[k] -= du[k];
        }
        if dot(du, du).sqrt() <= 1e-15 * (1.0 + u[0].abs() + u[1].abs()) {
            break;
        }
    }
    u.iter().all(|v| v.is_finite()).then_some(u)
}

fn class_of(family: &OneParamFamily, u: [f64; 3]) -> ClassTag {
    let m = family.member(u[2]);
    m.recenter(u[0], u[1]).and_then(|j| classify_point(&j)).map(|c| c.tag).unwrap_or(ClassTag::Unclassified)
}

/// Reduction of the member at `t` continuing `prev = (a, b)`.
fn delta_at(family: &OneParamFamily, t: f64, seed: (f64, f64), prev: (f64, f64)) -> Option<(f64, (f64, f64), NormalFormAB)> {
    let m = family.member(t);
    let at = correct_at(&m, seed)?;
    let nf = reductions(&m.recenter(at.0, at.1).ok()?)
        .ok()?
        .into_iter()
        .min_by(|x, y| {
            let d = |n: &NormalFormAB| (n.a - prev.0).hypot(n.b - prev.1);
            d(x).partial_cmp(&d(y)).unwrap()
        })?;
    Some((discriminant_delta(nf.a, nf.b), at, nf))
}

fn is_e34_side(tag: ClassTag) -> bool {
    matches!(tag, ClassTag::E3 | ClassTag::E4)
}

/// Locates `Δ = 0` between two nodes by regula falsi in `t`, following
/// whichever reduction at `a` changes the sign of `Δ` on the way to `b`.
fn refine_class_change(family: &OneParamFamily, a: [f64; 3], b: [f64; 3]) -> Option<(f64, (f64, f64), f64, E34Flavor)> {
    let starts = reductions(&family.member(a[2]).recenter(a[0], a[1]).ok()?).ok()?;
    starts.iter().find_map(|nf| refine_from(family, a, b, (nf.a, nf.b)))
}

fn refine_from(family: &OneParamFamily, a: [f64; 3], b: [f64; 3], ab: (f64, f64)) -> Option<(f64, (f64, f64), f64, E34Flavor)> {
    let lerp = |t: f64| {
        let w = (t - a[2]) / (b[2] - a[2]);
        (a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1]))
    };
    let (mut ta, mut tb) = (a[2], b[2]);
    let (mut fa, _, na) = delta_at(family, ta, (a[0], a[1]), ab)?;
    let mut prev_a = (na.a, na.b);
    let n = 16;
    let mut prev = prev_a;
    let mut fb = fa;
    for k in 1..=n {
        let t = ta + (tb - ta) * k as f64 / n as f64;
        let (f, _, nf) = delta_at(family, t, lerp(t), prev)?;
        prev = (nf.a, nf.b);
        fb = f;
    }
    let mut prev_b = prev;
    if fa * fb > 0.0 {
        return None;
    }
    let mut best = (ta, lerp(ta), fa, prev_a);
    let mut side = 0i8;
    for _ in 0..200 {
        let tm = if fb != fa { (ta * fb - tb * fa) / (fb - fa) } else { 0.5 * (ta + tb) };
        let guide = if (tm - ta).abs() < (tb - tm).abs() { prev_a } else { prev_b };
        let (fm, pm, nf) = delta_at(family, tm, lerp(tm), guide)?;
        best = (tm, pm, fm, (nf.a, nf.b));
        if fm.abs() < 1e-12 || (tb - ta).abs() <= 1e-15 * (1.0 + tm.abs()) {
            break;
        }
        if fm * fa < 0.0 {
            tb = tm;
            fb = fm;
            prev_b = (nf.a, nf.b);
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            ta = tm;
            fa = fm;
            prev_a = (nf.a, nf.b);
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    let (t, p, f, ab) = best;
    let flavor = if (ab.0 + 1.0).abs() < 1e-3 { E34Flavor::MinusOne } else { E34Flavor::Delta };
    Some((t, p, f, flavor))
}

/// Pseudo-arclength continuation of `(a₀, a₁) = 0` in `(x, y, t)` through the
/// base point, within `family.t_range` and the disk of `opts.radius`, with
/// fold and class-change events.
pub fn track_locus(family: &OneParamFamily, opts: &LocusOptions) -> Locus {
    let start = [0.0, 0.0, 0.0];
    let Some(tau) = tangent(family, start) else {
        return Locus {
            nodes: vec![LocusNode { x: 0.0, y: 0.0, t: 0.0 }],
            classes: vec![class_of(family, start)],
            events: Vec::new(),
            stall: Some(stall(start, "singular Jacobian at the base point")),
        };
    };
    let (fwd, s1) = branch(family, start, tau, opts);
    let (bwd, s2) = branch(family, start, [-tau[0], -tau[1], -tau[2]], opts);
    let mut pts: Vec<[f64; 3]> = bwd.into_iter().rev().collect();
    pts.extend(fwd.into_iter().skip(1));

    let mut events = Vec::new();
    for i in 1..pts.len().saturating_sub(1) {
        let d0 = pts[i][2] - pts[i - 1][2];
        let d1 = pts[i + 1][2] - pts[i][2];
        let turning = d0 * d1 < 0.0 || (d0 == 0.0 && d1 != 0.0 && i == 1);
        if turning {
            if let Some(u) = refine_fold(family, pts[i]) {
                let f = match family.deformation {
                    Deformation::E45 => f_e45(family, u[2]).ok(),
                    _ => None,
                };
                events.push(LocusEvent::Fold { t: u[2], x: u[0], y: u[1], f });
            }
        }
    }

    let classified: Vec<ClassTag> = pts.iter().map(|&u| class_of(family, u)).collect();
    let mut last: Option<usize> = None;
    for i in 0..pts.len() {
        let tag = classified[i];
        if !is_e34_side(tag) {
            continue;
        }
        if let Some(j) = last {
            let prev = classified[j];
            if prev != tag {
                if let Some((t, p, f, flavor)) = refine_class_change(family, pts[j], pts[i]) {
                    events.push(LocusEvent::ClassChange { t, x: p.0, y: p.1, from: prev, to: tag, flavor, f });
                }
            }
        }
        last = Some(i);
    }
    events.sort_by(|a, b| a.t().partial_cmp(&b.t()).unwrap());

    Locus {
        nodes: pts.iter().map(|u| LocusNode { x: u[0], y: u[1], t: u[2] }).collect(),
        classes: classified,
        events,
        stall: s1.or(s2),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub points: Vec<LocatedPoint>,
    pub f: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub locus: Locus,
}

impl SweepReport {
    pub fn events(&self) -> &[LocusEvent] {
        &self.locus.events
    }

    /// One line per (t, point); rows without points leave the point fields empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,n_points,index,x,y,class,a,b,chi,F\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        for r in &self.rows {
            let f = opt(r.f);
            if r.points.is_empty() {
                s += &format!("{:.17e},0,,,,,,,,{f}\n", r.t);
            }
            for (k, p) in r.points.iter().enumerate() {
                s += &format!(
                    "{:.17e},{},{k},{:.17e},{:.17e},{},{},{},{},{f}\n",
                    r.t,
                    r.points.len(),
                    p.x,
                    p.y,
                    p.class,
                    opt(p.a),
                    opt(p.b),
                    opt(p.chi)
                );
            }
        }
        s
    }
}

/// Bifurcation function of the family at `t`, when defined.
pub fn family_f(family: &OneParamFamily, t: f64) -> Option<f64> {
    match family.deformation {
        Deformation::E45 => f_e45(family, t).ok(),
        Deformation::E34Branch1 | Deformation::E34Branch2 => f_e34(family, t).ok(),
        Deformation::Constant => None,
    }
}

/// Counts on `steps + 1` evenly spaced parameters plus the continued locus.
pub fn sweep(family: &OneParamFamily, steps: usize, radius: f64) -> SweepReport {
    let (t0, t1) = family.t_range;
    let n = steps.max(1);
    let rows = (0..=n)
        .map(|k| {
            let t = if k == n { t1 } else { t0 + (t1 - t0) * k as f64 / n as f64 };
            SweepRow { t, points: count_axiumbilics(&family.member(t), radius), f: family_f(family, t) }
        })
        .collect();
    let ds_max = radius / 50.0;
    let locus = track_locus(family, &LocusOptions { radius, ds_max, ..Default::default() });
    SweepReport { rows, locus }
}

/// Base of the E34 sweep: normal form `(−125/36, 73/9)`, where `R` has the
/// double root `p = 1/2`.
pub fn e34_sweep_base() -> MongeJet {
    let (a, b) = (-125.0 / 36.0, 73.0 / 9.0);
    MongeJet::zero()
        .with_s(0, 2, 2.0)
        .with_r(1, 1, -1.0)
        .with_r(2, 1, a / 2.0)
        .with_r(0, 3, a / 2.0 - 4.0)
        .with_s(0, 3, b)
}

/// E45 example jet with quartic terms chosen so the quadratic parts `a11`,
/// `a02`, `b11`, `b02` of the adapted series vanish; no other axiumbilic
/// point comes near the fold.
pub fn e45_sweep_base() -> MongeJet {
    MongeJet::zero()
        .with_r(0, 2, 2.0)
        .with_s(0, 2, 2.0)
        .with_r(1, 1, -1.0)
        .with_s(1, 1, 1.0)
        .with_r(0, 3, -1.0)
        .with_s(2, 2, 1.0)
        .with_r(1, 3, -10.0)
        .with_s(1, 3, 12.0)
        .with_r(0, 4, 47.75)
        .with_s(0, 4, 44.75)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameter_is_the_base() {
        let base = e34_sweep_base();
        assert_eq!(e34_deformation(&base, 0.0, Deformation::E34Branch1), base);
        assert_eq!(e45_deformation(&base, 0.0), base);
    }

    #[test]
    fn deformation_coefficients() {
        let m = e34_deformation(&MongeJet::zero(), 1.0, Deformation::E34Branch1);
        assert_eq!((m.r(3, 0), m.r(1, 2), m.s(2, 1)), (1.0, -1.0, 2.0));
        let m = e45_deformation(&MongeJet::zero(), 0.5);
        assert_eq!((m.r(1, 1), m.s(1, 1)), (0.5, 0.5));
    }
}
