//! Reduction of a transversal axiumbilic point to
//! `y(p⁴ − 6p² + 1) + (ax + by)p(1 − p²) + O(2) = 0`.

use crate::axial_quartic::{is_axiumbilic, monge_series, QuarticSeries};
use crate::error::{Error, Result};
use crate::monge_surface::MongeJet;
use crate::poly;
use crate::tol;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicQuarticInvariants {
    pub r: f64,
    pub s: f64,
    pub alpha: [f64; 4],
    pub beta: [f64; 6],
}

impl CubicQuarticInvariants {
    /// `α₂α₃ − α₁α₄`
    pub fn t(&self) -> f64 {
        let a = &self.alpha;
        a[1] * a[2] - a[0] * a[3]
    }

    /// `(α₂α₃ − α₁α₄)(r² + s²)`
    pub fn determinant(&self) -> f64 {
        self.t() * (self.r * self.r + self.s * self.s)
    }
}

pub fn invariants_from_jet(jet: &MongeJet) -> CubicQuarticInvariants {
    let r = |j, k| jet.r(j, k);
    let s = |j, k| jet.s(j, k);
    CubicQuarticInvariants {
        r: jet.r_diff(),
        s: jet.s_diff(),
        alpha: [
            s(1, 2) - s(3, 0) + 2.0 * r(2, 1),
            r(3, 0) - r(1, 2) + 2.0 * s(2, 1),
            s(0, 3) - s(2, 1) + 2.0 * r(1, 2),
            r(2, 1) - r(0, 3) + 2.0 * s(1, 2),
        ],
        beta: [
            s(2, 2) - s(4, 0) + 2.0 * r(3, 1),
            r(4, 0) - r(2, 2) + 2.0 * s(3, 1),
            s(1, 3) - s(3, 1) + 2.0 * r(2, 2),
            r(3, 1) - r(1, 3) + 2.0 * s(2, 2),
            s(0, 4) - s(2, 2) + 2.0 * r(1, 3),
            r(2, 2) - r(0, 4) + 2.0 * s(1, 3),
        ],
    }
}

/// `(T, T·(r² + s²))`
pub fn transversality_t(inv: &CubicQuarticInvariants) -> (f64, f64) {
    (inv.t(), inv.determinant())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationRoot {
    /// `θ ∈ (−π/2, π/2]`; `π/2` stands for the root at infinity.
    pub theta: f64,
    pub multiplicity: usize,
}

/// Coefficients of the rotation quintic in `t = tan θ`, ascending.
pub fn rotation_quintic_coefficients(a10: f64, a01: f64, b10: f64, b01: f64) -> [f64; 6] {
    [a10, -(a01 + b10), b01 - 6.0 * a10, 6.0 * a01 + b10, a10 - b01, -a01]
}

/// Real roots of the rotation quintic. When the leading coefficient vanishes
/// the quarter turn is added.
pub fn rotation_quintic(a10: f64, a01: f64, b10: f64, b01: f64) -> Result<Vec<RotationRoot>> {
    let c = rotation_quintic_coefficients(a10, a01, b10, b01);
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::ZeroQuintic);
    }
    let mut out: Vec<RotationRoot> = Vec::new();
    let lead_zero = c[5].abs() <= tol::tol(1e-12) * scale;
    let c_eff: Vec<f64> = if lead_zero { c[..5].to_vec() } else { c.to_vec() };
    for r in poly::real_roots(&c_eff) {
        out.push(RotationRoot { theta: r.value.atan(), multiplicity: r.multiplicity });
    }
    if lead_zero {
        out.push(RotationRoot { theta: FRAC_PI_2, multiplicity: 1 });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormAB {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub lambda: f64,
    pub transversal: bool,
    /// `T` of the input jet.
    pub t_invariant: f64,
    /// `T` after rotation and homotety.
    pub t_reduced: f64,
    /// Series of the reduced jet (`a10 = 0`, `a01 = 1`).
    pub series: QuarticSeries,
    /// The rotated and rescaled jet.
    pub jet: MongeJet,
}

fn linear_scale(s: &QuarticSeries) -> f64 {
    s.max_linear().max(f64::MIN_POSITIVE)
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    theta: f64,
    multiplicity: usize,
    a01: f64,
}

fn candidates(jet: &MongeJet) -> Result<Vec<Candidate>> {
    let s = monge_series(jet);
    let scale = linear_scale(&s);
    let roots = rotation_quintic(s.a10, s.a01, s.b10, s.b01)?;
    let mut out = Vec::new();
    for r in roots {
        let rs = monge_series(&jet.rotate_tangent(r.theta));
        if rs.a10.abs() <= 1e-6 * scale {
            out.push(Candidate { theta: r.theta, multiplicity: r.multiplicity, a01: rs.a01 });
        }
    }
    Ok(out)
}

fn check_reducible(jet: &MongeJet) -> Result<()> {
    let test = is_axiumbilic(jet);
    if !test.axiumbilic {
        return Err(Error::NotAxiumbilic { a0: test.a00, a1: test.b00 });
    }
    let (r, s) = (jet.r_diff(), jet.s_diff());
    if (r * r + s * s).sqrt() <= tol::tol(1e-12) * (1.0 + jet.magnitude()) {
        return Err(Error::Degenerate("r=s=0".into()));
    }
    Ok(())
}

/// Rotation root with the best-conditioned `a01`; multiple roots are used
/// only when no simple root qualifies, ties go to the smallest `|θ|`.
pub fn reduce_to_normal_form(jet: &MongeJet) -> Result<NormalFormAB> {
    check_reducible(jet)?;
    let cands = candidates(jet)?;
    let simple: Vec<Candidate> = cands.iter().copied().filter(|c| c.multiplicity == 1).collect();
    let pool = if simple.is_empty() { cands } else { simple };
    let best = pool
        .iter()
        .copied()
        .fold(None::<Candidate>, |acc, c| match acc {
            None => Some(c),
            Some(b) => {
                let (x, y) = (c.a01.abs(), b.a01.abs());
                if x > y * (1.0 + 1e-9) || ((x - y).abs() <= 1e-9 * y && c.theta.abs() < b.theta.abs()) {
                    Some(c)
                } else {
                    Some(b)
                }
            }
        })
        .ok_or(Error::NonReducible)?;
    finish(jet, best.theta)
}

/// Same reduction with the rotation root nearest to `theta_hint` (mod π).
pub fn reduce_near(jet: &MongeJet, theta_hint: f64) -> Result<NormalFormAB> {
    check_reducible(jet)?;
    let cands = candidates(jet)?;
    let dist = |t: f64| {
        let d = (t - theta_hint).rem_euclid(std::f64::consts::PI);
        d.min(std::f64::consts::PI - d)
    };
    let best = cands
        .iter()
        .copied()
        .min_by(|a, b| dist(a.theta).partial_cmp(&dist(b.theta)).unwrap())
        .ok_or(Error::NonReducible)?;
    finish(jet, best.theta)
}

/// One reduction per rotation root.
pub fn reductions(jet: &MongeJet) -> Result<Vec<NormalFormAB>> {
    check_reducible(jet)?;
    Ok(candidates(jet)?.iter().filter_map(|c| finish(jet, c.theta).ok()).collect())
}

/// The reduction whose `a` is closest to `−1`; for an E34 point of the
/// `a = −1` flavor this puts the saddle-node at `p = 0`.
pub fn reduce_minus_one_flavor(jet: &MongeJet) -> Result<NormalFormAB> {
    reductions(jet)?
        .into_iter()
        .min_by(|x, y| (x.a + 1.0).abs().partial_cmp(&(y.a + 1.0).abs()).unwrap())
        .ok_or(Error::NonReducible)
}

/// Reduction with a prescribed rotation angle (which must make `a10` vanish).
pub fn reduce_with_theta(jet: &MongeJet, theta: f64) -> Result<NormalFormAB> {
    check_reducible(jet)?;
    finish(jet, theta)
}

fn finish(jet: &MongeJet, theta: f64) -> Result<NormalFormAB> {
    let base = monge_series(jet);
    let scale = linear_scale(&base);
    let rotated = jet.rotate_tangent(theta);
    let rs = monge_series(&rotated);
    if rs.a10.abs() > 1e-6 * scale {
        return Err(Error::NotAdapted(format!("a10 = {} after rotation", rs.a10)));
    }
    if rs.a01.abs() <= tol::tol(1e-9) * scale {
        return Err(Error::NonReducible);
    }
    let lambda = rs.a01.cbrt();
    let reduced = rotated.homotety(lambda);
    let series = monge_series(&reduced);
    let a = rs.b10 / rs.a01;
    let b = rs.b01 / rs.a01;
    Ok(NormalFormAB {
        a,
        b,
        theta,
        lambda,
        transversal: a.abs() > tol::tol(1e-9) * (1.0 + b.abs()),
        t_invariant: invariants_from_jet(jet).t(),
        t_reduced: invariants_from_jet(&reduced).t(),
        series,
        jet: reduced,
    })
}

/// `χ = b20 − a20·b01` of a series in adapted form.
pub fn chi_invariant(series: &QuarticSeries) -> Result<f64> {
    let eps = tol::tol(1e-8);
    if series.a10.abs() > eps || series.b10.abs() > eps || (series.a01 - 1.0).abs() > eps {
        return Err(Error::NotAdapted(format!(
            "a10 = {}, b10 = {}, a01 = {}",
            series.a10, series.b10, series.a01
        )));
    }
    Ok(series.b20 - series.a20 * series.b01)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e5_jet() -> MongeJet {
        MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, 1.0)
    }

    #[test]
    fn alpha_and_beta_examples() {
        let inv = invariants_from_jet(&MongeJet::zero().with_s(1, 2, 1.0));
        assert_eq!(inv.alpha, [1.0, 0.0, 0.0, 2.0]);
        let inv = invariants_from_jet(&MongeJet::zero().with_s(2, 2, 1.0));
        assert_eq!(inv.beta, [1.0, 0.0, 0.0, 2.0, -1.0, 0.0]);
    }

    #[test]
    fn quintic_examples() {
        let roots = rotation_quintic(0.0, 1.0, 0.0, 0.5).unwrap();
        assert!(roots.iter().any(|r| r.theta.abs() < 1e-12));
        let roots = rotation_quintic(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(roots.iter().any(|r| r.theta == FRAC_PI_2));
        let t2: Vec<f64> = roots.iter().filter(|r| r.theta != FRAC_PI_2).map(|r| r.theta.tan().powi(2)).collect();
        assert_eq!(t2.len(), 4);
        for v in t2 {
            let a = (v - (3.0 + 8f64.sqrt())).abs();
            let b = (v - (3.0 - 8f64.sqrt())).abs();
            assert!(a.min(b) < 1e-9);
        }
        assert!(rotation_quintic(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn e5_example_reduces_to_two_zero() {
        let nf = reduce_to_normal_form(&e5_jet()).unwrap();
        assert!((nf.a - 2.0).abs() < 1e-12, "a = {}", nf.a);
        assert!(nf.b.abs() < 1e-12);
        assert_eq!(invariants_from_jet(&e5_jet()).t(), -2.0);
    }

    #[test]
    fn minus_four_and_minus_half() {
        let base = MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, -1.0);
        let nf = reduce_to_normal_form(&base.with_r(0, 3, -3.0)).unwrap();
        assert!((nf.a + 4.0).abs() < 1e-12 && nf.b.abs() < 1e-12, "{} {}", nf.a, nf.b);
        let nf = reduce_to_normal_form(&base.with_r(0, 3, -10.0)).unwrap();
        assert!((nf.a + 0.5).abs() < 1e-12 && nf.b.abs() < 1e-12, "{} {}", nf.a, nf.b);
    }

    #[test]
    fn every_quintic_root_kills_a10() {
        let jet = MongeJet::zero()
            .with_s(0, 2, 2.0)
            .with_r(1, 1, -1.0)
            .with_s(1, 2, 0.7)
            .with_r(2, 1, -0.4)
            .with_s(0, 3, 1.3)
            .with_r(3, 0, 0.2);
        let s = monge_series(&jet);
        for root in rotation_quintic(s.a10, s.a01, s.b10, s.b01).unwrap() {
            let rs = monge_series(&jet.rotate_tangent(root.theta));
            assert!(rs.a10.abs() < 1e-9, "theta {} a10 {}", root.theta, rs.a10);
        }
    }

    #[test]
    fn zero_jet_is_degenerate() {
        assert!(matches!(reduce_to_normal_form(&MongeJet::zero()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn adapted_chi() {
        let s = QuarticSeries { a01: 1.0, b20: 1.0, b01: 3.0, ..Default::default() };
        assert_eq!(chi_invariant(&s).unwrap(), 1.0);
        let bad = QuarticSeries { a01: 2.0, ..Default::default() };
        assert!(chi_invariant(&bad).is_err());
    }
}
