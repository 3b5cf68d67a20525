//! Named identity checks run by `axi verify`.

use crate::catalog;
use crate::classifier::{classify_ab, cusps, delta_b_resultant, delta_b_resultant_closed, delta_scale, discriminant_delta, eval_r, ClassTag};
use crate::lie_cartan::{
    census, cone_resultant, cone_resultant_formula, eigen_formula, eval_s, g_jet, lc_equilibria, lc_field, project,
    s_discriminant, s_discriminant_formula, saddle_node_chart_check, EquilibriumKind, JetField,
    LCState, SaddleNodeFlavor,
};
use crate::normal_form::{reduce_minus_one_flavor, reduce_to_normal_form};
use crate::poly::{self, relative_gap};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub group: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Copy)]
pub struct VerifyConfig<'a> {
    /// A check name or a group name.
    pub only: Option<&'a str>,
    /// The discriminant under test; swapped out by mutation tests.
    pub delta: fn(f64, f64) -> f64,
}

impl Default for VerifyConfig<'_> {
    fn default() -> Self {
        VerifyConfig { only: None, delta: discriminant_delta }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s += &format!(
                "{} {}/{} residual={:.3e} tol={:.1e} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.group,
                c.name,
                c.residual,
                c.tolerance,
                c.detail
            );
        }
        s
    }
}

type Runner = fn(&VerifyConfig) -> (f64, String);

const CHECKS: &[(&str, &str, f64, Runner)] = &[
    ("delta_at_minus_one", "discriminant", 1e-12, delta_at_minus_one),
    ("delta_factorization", "discriminant", 1e-9, delta_factorization),
    ("delta_b_resultant", "resultants", 1e-6, resultant_b),
    ("cone_resultant", "resultants", 1e-6, resultant_cones),
    ("cusp_membership", "discriminant", 1e-6, cusp_membership),
    ("r_at_plus_minus_one", "boundary", 1e-12, r_at_pm_one),
    ("s_values", "boundary", 1e-12, s_values),
    ("s_discriminant", "boundary", 1e-9, s_disc),
    ("eigenvalues_at_roots", "eigenvalues", 1e-8, eigen_roots),
    ("eigenvalues_at_origin", "eigenvalues", 1e-12, eigen_origin),
    ("root_sign_correspondence", "census", 0.0, root_sign),
    ("equilibrium_census", "census", 0.0, equilibrium_census),
    ("tangency", "tangency", 1e-12, tangency),
    ("saddle_node_e34", "taylor", 1e-6, taylor_e34),
    ("saddle_node_e45", "taylor", 1e-6, taylor_e45),
];

/// `(name, group)` of every check.
pub fn check_names() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|c| (c.0, c.1)).collect()
}

/// Runs the selected checks; `Err` for an unknown `only`.
pub fn run(config: &VerifyConfig) -> Result<VerifyReport, String> {
    let selected: Vec<_> = CHECKS
        .iter()
        .filter(|c| config.only.is_none_or(|o| o == c.0 || o == c.1))
        .collect();
    if selected.is_empty() {
        return Err(format!("no check or group named {:?}", config.only.unwrap_or("")));
    }
    let checks = selected
        .into_iter()
        .map(|&(name, group, tolerance, f)| {
            let (residual, detail) = f(config);
            Check { name, group, passed: residual <= tolerance, residual, tolerance, detail }
        })
        .collect();
    Ok(VerifyReport { checks })
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

/// Low-discrepancy points in `[lo, hi)`.
fn spread(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let g = 0.618_033_988_749_894_9;
    (0..n).map(move |k| lo + (hi - lo) * ((k as f64 + 0.5) * g).fract())
}

fn delta_at_minus_one(c: &VerifyConfig) -> (f64, String) {
    let d = (c.delta)(-1.0, 0.0);
    (d.abs(), format!("Δ(-1,0) = {d:e}"))
}

pub fn delta_b0_closed(a: f64) -> f64 {
    let q = a * a + 8.0 * a + 32.0;
    16.0 * (a + 1.0) * q * q
}

fn delta_factorization(c: &VerifyConfig) -> (f64, String) {
    let worst = spread(100, -30.0, 10.0).map(|a| rel((c.delta)(a, 0.0), delta_b0_closed(a))).fold(0.0, f64::max);
    (worst, "Δ(a,0) = 16(a+1)(a²+8a+32)² at 100 points of [-30,10]".into())
}

fn resultant_b(_: &VerifyConfig) -> (f64, String) {
    let worst = [(2, 1), (-2, 1), (3, 1), (-5, 1), (1, 2)]
        .iter()
        .map(|&(n, d)| {
            let a = poly::rational_frac(n, d);
            relative_gap(&delta_b_resultant(&a), &delta_b_resultant_closed(&a))
        })
        .fold(0.0, f64::max);
    (worst, "Res_b(Δ, ∂Δ/∂b) at a = 2, -2, 3, -5, 1/2".into())
}

fn resultant_cones(_: &VerifyConfig) -> (f64, String) {
    let nf = reduce_to_normal_form(&catalog::e45()).expect("E45 example reduces");
    let s = nf.series;
    let mut worst = relative_gap(&cone_resultant(s.a20, s.b20, s.b01), &cone_resultant_formula(s.a20, s.b20, s.b01));
    for (a20, b20, b01) in [(1.0, 4.0, -4.0), (0.5, -2.0, 3.0), (-1.25, 0.75, 0.0)] {
        worst = worst.max(relative_gap(&cone_resultant(a20, b20, b01), &cone_resultant_formula(a20, b20, b01)));
    }
    (worst, "Res(S, Hess) = 256χ⁴(16+b01²)⁶".into())
}

fn cusp_membership(c: &VerifyConfig) -> (f64, String) {
    let worst = cusps().iter().map(|&(a, b)| (c.delta)(a, b).abs() / delta_scale(a, b)).fold(0.0, f64::max);
    (worst, "Δ(-27/2, ±5√5/2) relative to its term scale".into())
}

fn r_at_pm_one(_: &VerifyConfig) -> (f64, String) {
    let mut rng = StdRng::seed_from_u64(7);
    let worst = (0..1000)
        .map(|_| {
            let (a, b) = (rng.gen_range(-30.0..10.0), rng.gen_range(-20.0..20.0));
            (eval_r(a, b, 1.0) + 4.0).abs().max((eval_r(a, b, -1.0) + 4.0).abs())
        })
        .fold(0.0, f64::max);
    (worst, "R(±1) = -4".into())
}

fn s_values(_: &VerifyConfig) -> (f64, String) {
    let worst = spread(100, -20.0, 20.0)
        .map(|b| {
            let e = |p: f64| eval_s(b, p);
            (e(1.0) + 4.0).abs().max((e(-1.0) + 4.0).abs()).max((e(0.0) - 1.0).abs())
        })
        .fold(0.0, f64::max);
    (worst, "S(±1) = -4, S(0) = 1".into())
}

fn s_disc(_: &VerifyConfig) -> (f64, String) {
    let worst = spread(100, -20.0, 20.0)
        .map(|b| relative_gap(&s_discriminant(b), &s_discriminant_formula(b)))
        .fold(0.0, f64::max);
    (worst, "disc(S) = 4(16+b01²)³".into())
}

fn eigen_roots(_: &VerifyConfig) -> (f64, String) {
    let mut worst = 0.0f64;
    let mut n = 0;
    for a in spread(41, -20.0, 5.0) {
        for b in spread(41, -10.0, 10.0) {
            let Ok(eqs) = lc_equilibria(a, b) else { continue };
            for e in eqs.iter().filter(|e| e.p != 0.0 && e.p.is_finite() && e.multiplicity == 1) {
                worst = worst.max(rel(e.lambda1, eigen_formula(a, b, e.p).0));
                n += 1;
            }
        }
    }
    (worst, format!("λ₁ = (p²+1)³/(p²-1) at {n} roots"))
}

fn eigen_origin(_: &VerifyConfig) -> (f64, String) {
    let mut worst = 0.0f64;
    for a in spread(40, -20.0, 5.0) {
        let b = 1.5 * a.sin();
        let Ok(eqs) = lc_equilibria(a, b) else { continue };
        if let Some(e) = eqs.iter().find(|e| e.p == 0.0 && e.multiplicity == 1) {
            worst = worst.max((e.lambda1 - a).abs()).max((e.lambda2 + a + 1.0).abs());
        }
    }
    (worst, "(λ₁, λ₂) = (a, -(a+1)) at p = 0".into())
}

fn root_sign(c: &VerifyConfig) -> (f64, String) {
    let mut bad = 0usize;
    for a in spread(60, -20.0, 5.0) {
        for b in spread(60, -10.0, 10.0) {
            let d = (c.delta)(a, b);
            if d.abs() <= 1e-7 * delta_scale(a, b) {
                continue;
            }
            let n = crate::classifier::real_roots_r(a, b).len();
            if (d < 0.0 && n != 2) || (d > 0.0 && n != 4) {
                bad += 1;
            }
        }
    }
    (bad as f64, format!("{bad} sign/root-count violations"))
}

/// Saddle/node/saddle-node counts expected for a class.
pub fn expected_census(tag: ClassTag) -> Option<(usize, usize, bool)> {
    match tag {
        ClassTag::E3 => Some((3, 0, false)),
        ClassTag::E4 => Some((4, 1, false)),
        ClassTag::E5 => Some((5, 0, false)),
        ClassTag::E34_1 => Some((0, 0, true)),
        _ => None,
    }
}

/// Whether the equilibria of `(a, b)` match its class.
pub fn census_agrees(a: f64, b: f64) -> bool {
    let class = classify_ab(a, b);
    let Some((s, n, sn)) = expected_census(class.tag) else { return true };
    let Ok(eqs) = lc_equilibria(a, b) else { return false };
    let c = census(&eqs);
    if sn {
        c.saddle_nodes >= 1
    } else {
        c.saddles == s && c.nodes == n && c.saddle_nodes == 0 && eqs.iter().all(|e| e.kind != EquilibriumKind::MorseCone)
    }
}

fn equilibrium_census(_: &VerifyConfig) -> (f64, String) {
    let mut samples: Vec<(f64, f64)> = spread(100, -20.0, 5.0).zip(spread(100, -10.0, 10.0).skip(37)).collect();
    samples.extend([(2.0, 0.0), (-4.0, 0.0), (-1.0, 1.0), (-0.5, 0.0)]);
    let bad = samples.iter().filter(|&&(a, b)| !census_agrees(a, b)).count();
    (bad as f64, format!("{bad} of {} samples disagree", samples.len()))
}

/// Largest `|X·∇𝒢| / (|X||∇𝒢|)` over `n` random states projected onto `𝒢 = 0`.
pub fn tangency_residual(n: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let jets = [catalog::e3(), catalog::e5(), catalog::e34(), catalog::e45()];
    let fields: Vec<JetField> = jets.iter().map(JetField::new).collect();
    let mut worst = 0.0f64;
    for k in 0..n {
        let f = &fields[k % fields.len()];
        let raw = LCState::from_slope(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-3.0..3.0));
        let (st, _) = project(f, &raw);
        let g = g_jet(f, &st, false).gradient();
        let x = lc_field(f, &st);
        let nx = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let ng = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if nx * ng > 0.0 {
            worst = worst.max((x[0] * g[0] + x[1] * g[1] + x[2] * g[2]).abs() / (nx * ng));
        }
    }
    worst
}

fn tangency(_: &VerifyConfig) -> (f64, String) {
    (tangency_residual(2000, 11), "X·∇𝒢 on 2000 projected states".into())
}

fn taylor_e34(_: &VerifyConfig) -> (f64, String) {
    let nf = reduce_minus_one_flavor(&catalog::e34()).expect("E34 example reduces");
    match saddle_node_chart_check(&nf, SaddleNodeFlavor::E34) {
        Ok(r) => (r.max_residual(), "y = xp, ẋ = -x + bxp, ṗ = -bp²".into()),
        Err(e) => (f64::INFINITY, e.to_string()),
    }
}

fn taylor_e45(_: &VerifyConfig) -> (f64, String) {
    let nf = reduce_to_normal_form(&catalog::e45()).expect("E45 example reduces");
    match saddle_node_chart_check(&nf, SaddleNodeFlavor::E45) {
        Ok(r) => (r.max_residual(), "y = -a20 x²/2, ẋ = χx²/2".into()),
        Err(e) => (f64::INFINITY, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let r = run(&VerifyConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn group_filter() {
        let r = run(&VerifyConfig { only: Some("resultants"), ..Default::default() }).unwrap();
        assert_eq!(r.checks.len(), 2);
        assert!(run(&VerifyConfig { only: Some("nope"), ..Default::default() }).is_err());
    }

    #[test]
    fn sign_mutation_is_caught() {
        fn mutant(a: f64, b: f64) -> f64 {
            discriminant_delta(a, b) - 2.0 * 96.0 * (16.0 + b * b).powi(2) * a
        }
        let r = run(&VerifyConfig { only: Some("delta_factorization"), delta: mutant }).unwrap();
        assert!(!r.passed());
    }
}
