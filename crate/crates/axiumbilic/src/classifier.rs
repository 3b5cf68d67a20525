//! Classification of axiumbilic points from the normal-form pair `(a, b)`.
//!
//! `R(p) = (p⁴ − 6p² + 1) + (1 − p²)(a + bp)`, `P(p) = pR(p)`, and `Δ(a, b)`
//! is the discriminant of `R`.

use crate::axial_quartic::{is_axiumbilic, monge_series};
use crate::error::{Error, Result};
use crate::monge_surface::MongeJet;
use crate::normal_form::{chi_invariant, invariants_from_jet, reduce_to_normal_form, NormalFormAB};
use crate::poly::{self, RealRoot, UPoly};
use crate::series::Scalar;
use crate::tol;
use num_rational::BigRational;
use serde::Serialize;
use std::fmt;

/// Cusps of `Δ = 0`.
pub fn cusps() -> [(f64, f64); 2] {
    let b = 2.5 * 5f64.sqrt();
    [(-13.5, b), (-13.5, -b)]
}

pub fn discriminant_delta(a: f64, b: f64) -> f64 {
    delta_generic(a, b)
}

/// `Δ` on any [`Scalar`], e.g. a [`crate::series::Series2`] for its Taylor model.
pub fn delta_generic<S: Scalar>(a: S, b: S) -> S {
    let b2 = b * b;
    let u = b2 + 16.0;
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    a4 * a * 16.0 + (b2 + 68.0) * a4 * 4.0 + (b2 + 144.0) * a3 * 16.0 - (b2 + -80.0) * u * a2 * 8.0
        + u * u * a * 96.0
        + u * u * u * 4.0
}

/// Sum of the magnitudes of the terms of `Δ`, the scale for its zero band.
pub fn delta_scale(a: f64, b: f64) -> f64 {
    let b2 = b * b;
    let u = 16.0 + b2;
    16.0 * a.abs().powi(5)
        + 4.0 * (b2 + 68.0) * a.powi(4)
        + 16.0 * (b2 + 144.0) * a.abs().powi(3)
        + 8.0 * (b2 - 80.0).abs() * u * a * a
        + 96.0 * u * u * a.abs()
        + 4.0 * u * u * u
}

/// `Δ(a, ·)` as an exact polynomial in `b`.
pub fn delta_in_b(a: &BigRational) -> UPoly<BigRational> {
    let q = |v: i64| poly::rational_frac(v, 1);
    let b2 = UPoly::monomial(q(1), 2);
    let u = b2.clone() + UPoly::constant(q(16));
    let c = |v: BigRational| UPoly::constant(v);
    let a2 = a.clone() * a.clone();
    let a3 = a2.clone() * a.clone();
    let a4 = a3.clone() * a.clone();
    let a5 = a4.clone() * a.clone();
    c(q(16) * a5)
        + (b2.clone() + c(q(68))).scale(&(q(4) * a4))
        + (b2.clone() + c(q(144))).scale(&(q(16) * a3))
        - ((b2 - c(q(80))) * u.clone()).scale(&(q(8) * a2))
        + u.pow(2).scale(&(q(96) * a.clone()))
        + u.pow(3).scale(&q(4))
}

/// `Res_b(Δ, ∂Δ/∂b)` at a rational `a`.
pub fn delta_b_resultant(a: &BigRational) -> BigRational {
    let d = delta_in_b(a);
    poly::resultant(&d.0, &d.derivative().0)
}

/// `274877906944(1 + a)(a² + 8a + 32)²a¹⁶(2a + 27)⁶`
pub fn delta_b_resultant_closed(a: &BigRational) -> BigRational {
    let q = |v: i64| poly::rational_frac(v, 1);
    let one = q(1);
    let quad = a.clone() * a.clone() + q(8) * a.clone() + q(32);
    let lin = q(2) * a.clone() + q(27);
    let pw = |x: &BigRational, n: usize| (0..n).fold(one.clone(), |acc, _| acc * x.clone());
    q(274877906944) * (one.clone() + a.clone()) * pw(&quad, 2) * pw(a, 16) * pw(&lin, 6)
}

/// `R` ascending.
pub fn r_coefficients(a: f64, b: f64) -> [f64; 5] {
    [1.0 + a, b, -6.0 - a, -b, 1.0]
}

/// `P = pR` ascending.
pub fn p_coefficients(a: f64, b: f64) -> [f64; 6] {
    let r = r_coefficients(a, b);
    [0.0, r[0], r[1], r[2], r[3], r[4]]
}

/// Factored form; exact at `p = ±1`.
pub fn eval_r(a: f64, b: f64, p: f64) -> f64 {
    let p2 = p * p;
    (p2 * p2 - 6.0 * p2 + 1.0) + (1.0 - p2) * (a + b * p)
}

pub fn real_roots_r(a: f64, b: f64) -> Vec<RealRoot> {
    poly::real_roots(&r_coefficients(a, b))
}

/// Real roots of `P` with multiplicity; `p = 0` is merged with a root of `R` at 0.
pub fn real_roots_p(a: f64, b: f64) -> Vec<RealRoot> {
    let mut roots = real_roots_r(a, b);
    let zero_tol = poly::CLUSTER_RADIUS;
    if let Some(z) = roots.iter_mut().find(|r| r.value.abs() < zero_tol) {
        z.multiplicity += 1;
        z.value = 0.0;
    } else {
        roots.push(RealRoot { value: 0.0, multiplicity: 1 });
        roots.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap());
    }
    roots
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    E3,
    E4,
    E5,
    #[serde(rename = "E34_1")]
    E34_1,
    #[serde(rename = "E45_1")]
    E45_1,
    Degenerate,
    Unclassified,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::E3 => "E3",
            ClassTag::E4 => "E4",
            ClassTag::E5 => "E5",
            ClassTag::E34_1 => "E34_1",
            ClassTag::E45_1 => "E45_1",
            ClassTag::Degenerate => "Degenerate",
            ClassTag::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Evidence {
    pub delta: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub p_roots: Vec<RealRoot>,
    pub chi: Option<f64>,
    pub t_invariant: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiumbilicClass {
    pub tag: ClassTag,
    pub evidence: Evidence,
    pub normal_form: Option<NormalFormAB>,
}

impl AxiumbilicClass {
    fn bare(tag: ClassTag, note: &str) -> Self {
        AxiumbilicClass {
            tag,
            evidence: Evidence { note: Some(note.to_string()), ..Default::default() },
            normal_form: None,
        }
    }
}

/// `(simple, double, higher)` real roots.
pub fn root_census(roots: &[RealRoot]) -> (usize, usize, usize) {
    let simple = roots.iter().filter(|r| r.multiplicity == 1).count();
    let double = roots.iter().filter(|r| r.multiplicity == 2).count();
    (simple, double, roots.len() - simple - double)
}

pub fn delta_band(a: f64, b: f64) -> f64 {
    tol::tol(1e-7) * delta_scale(a, b)
}

pub fn classify_ab(a: f64, b: f64) -> AxiumbilicClass {
    let delta = discriminant_delta(a, b);
    let p_roots = real_roots_p(a, b);
    let mut ev = Evidence { delta: Some(delta), a: Some(a), b: Some(b), p_roots: p_roots.clone(), ..Default::default() };
    let mk = |tag, ev: Evidence| AxiumbilicClass { tag, evidence: ev, normal_form: None };
    let eps = tol::tol(1e-9) * (1.0 + a.abs() + b.abs());

    if a.abs() <= eps {
        ev.note = Some("a = 0: not transversal".into());
        return mk(ClassTag::Unclassified, ev);
    }
    let near = |x: f64, y: f64| (a - x).abs() <= 1e-7 * (1.0 + x.abs()) && (b - y).abs() <= 1e-7 * (1.0 + y.abs());
    if near(-1.0, 0.0) || cusps().iter().any(|&(x, y)| near(x, y)) {
        ev.note = Some("excluded point of the E34 stratum".into());
        return mk(ClassTag::Degenerate, ev);
    }
    let census = root_census(&p_roots);
    let in_band = delta.abs() <= delta_band(a, b);
    let a_is_minus_one = (a + 1.0).abs() <= eps;

    let by_rule = if a_is_minus_one || in_band {
        ClassTag::E34_1
    } else if delta < 0.0 {
        ClassTag::E3
    } else if a > 0.0 {
        ClassTag::E5
    } else {
        ClassTag::E4
    };
    let by_roots = match census {
        (3, 0, 0) => Some(ClassTag::E3),
        (5, 0, 0) => Some(if a > 0.0 { ClassTag::E5 } else { ClassTag::E4 }),
        (3, 1, 0) => Some(ClassTag::E34_1),
        _ => None,
    };
    if in_band && !a_is_minus_one {
        // the root structure decides inside the band
        return match by_roots {
            Some(tag) => mk(tag, ev),
            None => {
                ev.note = Some(format!("root census {census:?} inside the delta band"));
                mk(ClassTag::Unclassified, ev)
            }
        };
    }
    if by_roots == Some(by_rule) {
        mk(by_rule, ev)
    } else {
        ev.note = Some(format!("delta rule gives {by_rule} but root census is {census:?}"));
        mk(ClassTag::Unclassified, ev)
    }
}

/// Full pipeline for a jet whose origin is axiumbilic.
pub fn classify_point(jet: &MongeJet) -> Result<AxiumbilicClass> {
    let test = is_axiumbilic(jet);
    if !test.axiumbilic {
        return Err(Error::NotAxiumbilic { a0: test.a00, a1: test.b00 });
    }
    let (r, s) = (jet.r_diff(), jet.s_diff());
    if (r * r + s * s).sqrt() <= tol::tol(1e-12) * (1.0 + jet.magnitude()) {
        return Ok(AxiumbilicClass::bare(ClassTag::Degenerate, "r=s=0"));
    }
    let inv = invariants_from_jet(jet);
    let series = monge_series(jet);
    let lin = series.max_linear();
    if lin <= tol::tol(1e-12) * (1.0 + jet.magnitude()).powi(2) {
        return Ok(AxiumbilicClass::bare(ClassTag::Degenerate, "vanishing linear part"));
    }
    let transversal = series.jacobian().abs() > tol::tol(1e-9) * lin * lin;
    let nf = match reduce_to_normal_form(jet) {
        Ok(nf) => nf,
        Err(Error::NonReducible) => return Ok(AxiumbilicClass::bare(ClassTag::Degenerate, "not reducible")),
        Err(e) => return Err(e),
    };
    if transversal {
        let mut class = classify_ab(nf.a, nf.b);
        class.evidence.t_invariant = Some(inv.t());
        class.normal_form = Some(nf);
        return Ok(class);
    }
    let chi = chi_invariant(&nf.series)?;
    let evidence = Evidence {
        delta: Some(discriminant_delta(nf.a, nf.b)),
        a: Some(nf.a),
        b: Some(nf.b),
        p_roots: real_roots_p(nf.a, nf.b),
        chi: Some(chi),
        t_invariant: Some(inv.t()),
        note: None,
    };
    let scale = 1.0 + nf.series.b20.abs() + nf.series.a20.abs() * (1.0 + nf.series.b01.abs());
    let tag = if chi.abs() > tol::tol(1e-9) * scale { ClassTag::E45_1 } else { ClassTag::Degenerate };
    Ok(AxiumbilicClass { tag, evidence, normal_form: Some(nf) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramCell {
    pub a: f64,
    pub b: f64,
    pub tag: ClassTag,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityDiagram {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub cells: Vec<DiagramCell>,
    /// Segments of `Δ = 0` from marching squares.
    pub contour: Vec<[(f64, f64); 2]>,
    pub cusps: [(f64, f64); 2],
    pub special: (f64, f64),
}

impl StabilityDiagram {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,tag,delta\n");
        for c in &self.cells {
            out.push_str(&format!("{:.17e},{:.17e},{},{:.17e}\n", c.a, c.b, c.tag, c.delta));
        }
        out
    }

    pub fn cell_at(&self, a: f64, b: f64) -> Option<&DiagramCell> {
        self.cells.iter().min_by(|x, y| {
            let dx = (x.a - a).powi(2) + (x.b - b).powi(2);
            let dy = (y.a - a).powi(2) + (y.b - b).powi(2);
            dx.partial_cmp(&dy).unwrap()
        })
    }
}

/// Cell-centred classification on an `na × nb` grid plus the `Δ = 0` contour.
pub fn stability_diagram(a_range: (f64, f64), b_range: (f64, f64), na: usize, nb: usize) -> Result<StabilityDiagram> {
    if !(a_range.1 > a_range.0 && b_range.1 > b_range.0) || na == 0 || nb == 0 {
        return Err(Error::Degenerate("empty diagram window".into()));
    }
    let da = (a_range.1 - a_range.0) / na as f64;
    let db = (b_range.1 - b_range.0) / nb as f64;
    let mut cells = Vec::with_capacity(na * nb);
    for j in 0..nb {
        for i in 0..na {
            let a = a_range.0 + (i as f64 + 0.5) * da;
            let b = b_range.0 + (j as f64 + 0.5) * db;
            let class = classify_ab(a, b);
            cells.push(DiagramCell { a, b, tag: class.tag, delta: class.evidence.delta.unwrap_or(f64::NAN) });
        }
    }
    let node = |i: usize, j: usize| (a_range.0 + i as f64 * da, b_range.0 + j as f64 * db);
    let val = |i: usize, j: usize| {
        let (a, b) = node(i, j);
        discriminant_delta(a, b)
    };
    let mut contour = Vec::new();
    for j in 0..nb {
        for i in 0..na {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = corners.iter().map(|&(x, y)| val(x, y)).collect();
            let mut pts = Vec::new();
            for k in 0..4 {
                let (v0, v1) = (v[k], v[(k + 1) % 4]);
                if (v0 < 0.0) != (v1 < 0.0) {
                    let (p0, p1) = (node(corners[k].0, corners[k].1), node(corners[(k + 1) % 4].0, corners[(k + 1) % 4].1));
                    let w = v0 / (v0 - v1);
                    pts.push((p0.0 + w * (p1.0 - p0.0), p0.1 + w * (p1.1 - p0.1)));
                }
            }
            if pts.len() == 2 {
                contour.push([pts[0], pts[1]]);
            } else if pts.len() == 4 {
                contour.push([pts[0], pts[1]]);
                contour.push([pts[2], pts[3]]);
            }
        }
    }
    Ok(StabilityDiagram { a_range, b_range, cells, contour, cusps: cusps(), special: (-1.0, 0.0) })
}

/// Solves `Δ(a, b) = 0` for `a` near `-1` at each small `b` and returns the
/// least-squares coefficient `c` in `a + 1 ≈ c b²`.
pub fn fit_boundary_near_minus_one(bs: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &b in bs {
        let mut a = -1.0;
        for _ in 0..60 {
            let s = delta_generic(crate::series::Series2::var_x(a, 1), crate::series::Series2::constant(b, 1));
            let step = s.value() / s.coeff(1, 0);
            a -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let b2 = b * b;
        num += (a + 1.0) * b2;
        den += b2 * b2;
    }
    num / den
}
