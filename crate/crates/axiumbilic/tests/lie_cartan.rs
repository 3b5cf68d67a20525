use axiumbilic::axial_quartic::quartic_at;
use axiumbilic::catalog;
use axiumbilic::classifier::{classify_point, eval_r, real_roots_r};
use axiumbilic::lie_cartan::*;
use axiumbilic::monge_surface::MongeJet;
use axiumbilic::normal_form::{reduce_minus_one_flavor, reduce_to_normal_form};
use axiumbilic::poly::{relative_gap, to_f64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_jet(rng: &mut StdRng) -> MongeJet {
    let mut j = MongeJet::zero();
    for i in 0..12 {
        j.r[i] = rng.gen_range(-2.0..2.0);
        j.s[i] = rng.gen_range(-2.0..2.0);
    }
    j
}

/// `𝒢` straight from the pointwise quartic, in the p chart.
fn g_direct(jet: &MongeJet, x: f64, y: f64, p: f64) -> f64 {
    let q = quartic_at(jet, x, y).unwrap().ascending();
    q.iter().rev().fold(0.0, |acc, c| acc * p + c) / 4.0
}

#[test]
fn zero_gradient_gives_zero_field() {
    let f = JetField::new(&MongeJet::zero());
    assert_eq!(lc_field(&f, &LCState::from_slope(0.2, -0.1, 0.5)), [0.0, 0.0, 0.0]);
}

#[test]
fn normal_form_field_on_the_line() {
    for (a, b) in [(2.0, 0.0), (-0.5, 0.3), (-4.0, -1.0)] {
        let f = ModelField::normal_form(a, b);
        for p in [-1.0, -0.4, 0.0, 0.3, 0.9] {
            let x = lc_field(&f, &LCState::from_slope(0.0, 0.0, p));
            assert_eq!((x[0], x[1]), (0.0, 0.0));
            let want = -p * eval_r(a, b, p);
            assert!((x[2] - want).abs() < 1e-12 * (1.0 + want.abs()), "{} vs {want}", x[2]);
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..30 {
        let jet = random_jet(&mut rng);
        let (x, y, p) = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-1.0..1.0));
        let j = g_jet(&JetField::new(&jet), &LCState::new(x, y, p, Chart::P), false);
        let h = 1e-5;
        let fd = [
            (g_direct(&jet, x + h, y, p) - g_direct(&jet, x - h, y, p)) / (2.0 * h),
            (g_direct(&jet, x, y + h, p) - g_direct(&jet, x, y - h, p)) / (2.0 * h),
            (g_direct(&jet, x, y, p + h) - g_direct(&jet, x, y, p - h)) / (2.0 * h),
        ];
        assert!((j.g - g_direct(&jet, x, y, p)).abs() < 1e-12 * (1.0 + j.g.abs()));
        let scale = 1.0 + j.gradient_norm();
        for (u, v) in j.gradient().iter().zip(fd) {
            assert!((u - v).abs() < 1e-6 * scale, "{u} vs {v}");
        }
    }
}

#[test]
fn field_is_tangent() {
    let mut rng = StdRng::seed_from_u64(42);
    let mut n = 0;
    while n < 2000 {
        let jet = random_jet(&mut rng);
        let f = JetField::new(&jet);
        let (x, y) = (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
        for r in slopes_at(&f, x, y) {
            let st = LCState::from_slope(x, y, r.value);
            let j = g_jet(&f, &st, false);
            let xv = field_from_jet(&j, &st);
            let g = j.gradient();
            let dotp: f64 = xv.iter().zip(g).map(|(a, b)| a * b).sum();
            let nx = xv.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(dotp.abs() <= 1e-12 * nx * j.gradient_norm() + 1e-300, "{dotp}");
            n += 1;
        }
    }
}

#[test]
fn equilibria_examples() {
    let e5 = lc_equilibria(2.0, 0.0).unwrap();
    assert_eq!(e5.len(), 5);
    assert!(e5.iter().all(|e| e.kind == EquilibriumKind::Saddle));

    let e4 = lc_equilibria(-0.5, 0.0).unwrap();
    assert_eq!(e4.len(), 5);
    let origin = e4.iter().find(|e| e.p == 0.0).unwrap();
    assert_eq!(origin.kind, EquilibriumKind::Node);
    assert_eq!((origin.lambda1, origin.lambda2), (-0.5, -0.5));
    assert_eq!(census(&e4), EquilibriumCensus { saddles: 4, nodes: 1, saddle_nodes: 0, cones: 0 });

    let e34 = lc_equilibria(-1.0, 1.0).unwrap();
    let origin = e34.iter().find(|e| e.p == 0.0).unwrap();
    assert_eq!(origin.kind, EquilibriumKind::SaddleNode);
    assert_eq!((origin.lambda1, origin.lambda2), (-1.0, 0.0));
    assert_eq!(census(&e34), EquilibriumCensus { saddles: 3, nodes: 0, saddle_nodes: 1, cones: 0 });

    let e3 = lc_equilibria(-4.0, 0.0).unwrap();
    assert_eq!(census(&e3), EquilibriumCensus { saddles: 3, nodes: 0, saddle_nodes: 0, cones: 0 });
}

#[test]
fn eigenvalues_at_roots_of_r() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(-20.0..5.0), rng.gen_range(-10.0..10.0));
        let eqs = lc_equilibria(a, b).unwrap();
        let origin = eqs.iter().find(|e| e.p == 0.0).unwrap();
        assert_eq!((origin.lambda1, origin.lambda2), (a, -(a + 1.0)));
        for e in eqs.iter().filter(|e| e.p != 0.0 && e.multiplicity == 1) {
            let p2 = e.p * e.p;
            let want = (p2 + 1.0).powi(3) / (p2 - 1.0);
            assert!((e.lambda1 - want).abs() <= 1e-8 * want.abs(), "{} vs {want}", e.lambda1);
            assert!((e.lambda2 - eigen_formula(a, b, e.p).1).abs() <= 1e-8 * (1.0 + e.lambda2.abs()));
        }
        assert_eq!(eqs.len(), real_roots_r(a, b).len() + 1);
    }
}

#[test]
fn e34_eigenvalues() {
    assert_eq!(lc_eigenvalues_e34(1.0, 0.0), (-1.0, 0.0));
    assert_eq!(lc_eigenvalues_e34(-2.5, 0.0), (-1.0, 0.0));
    for b in [1.0, -0.7, 3.0] {
        let eqs = lc_equilibria(-1.0, b).unwrap();
        let roots: Vec<&LCEquilibrium> = eqs.iter().filter(|e| e.p != 0.0).collect();
        assert_eq!(roots.len(), 3);
        for e in roots {
            let cubic = e.p.powi(3) - b * e.p * e.p - 5.0 * e.p + b;
            assert!(cubic.abs() < 1e-10);
            let (l1, l2) = lc_eigenvalues_e34(b, e.p);
            let (r1, r2) = lc_eigenvalues_e34_at_root(e.p);
            assert!((l1 - r1).abs() < 1e-9 * (1.0 + r1.abs()) && (l2 - r2).abs() < 1e-9 * (1.0 + r2.abs()));
            let (g1, g2) = eigen_formula(-1.0, b, e.p);
            assert!((g1 - r1).abs() < 1e-9 * (1.0 + r1.abs()) && (g2 - r2).abs() < 1e-9 * (1.0 + r2.abs()));
            assert!((e.lambda1 - r1).abs() < 1e-8 * (1.0 + r1.abs()));
            assert!(l1 * l2 < 0.0);
            assert_eq!(e.kind, EquilibriumKind::Saddle);
        }
    }
}

#[test]
fn s_boundary_values() {
    let mut rng = StdRng::seed_from_u64(44);
    for _ in 0..100 {
        let b = rng.gen_range(-20.0..20.0);
        assert_eq!((eval_s(b, 1.0), eval_s(b, -1.0), eval_s(b, 0.0)), (-4.0, -4.0, 1.0));
        assert!(relative_gap(&s_discriminant(b), &s_discriminant_formula(b)) < 1e-9);
    }
    assert_eq!(to_f64(&s_discriminant_formula(-4.0)), 131072.0);
}

#[test]
fn e45_morse_analysis() {
    let c = classify_point(&catalog::e45()).unwrap();
    let series = c.normal_form.unwrap().series;
    let m = morse_analysis_e45(&series).unwrap();
    assert_eq!(m.b01, -4.0);
    assert_eq!(m.cones.len(), 4);
    let mut ps: Vec<f64> = m.cones.iter().map(|c| c.p).collect();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(ps[0] < -1.0 && (-1.0..0.0).contains(&ps[1]) && (0.0..1.0).contains(&ps[2]) && ps[3] > 1.0, "{ps:?}");
    for cp in &m.cones {
        let p2 = cp.p * cp.p;
        let want = (p2.powi(3) + 3.0 * p2 * p2 + 3.0 * p2 + 1.0) / (p2 - 1.0);
        assert!((cp.lambda1 - want).abs() <= 1e-8 * want.abs());
        assert!((cp.lambda2 + want).abs() <= 1e-8 * want.abs());
        assert!(cp.hessian_det.abs() > 1e-6);
        assert!((cp.hessian_det - cp.hessian_formula).abs() <= 1e-8 * cp.hessian_formula.abs());
    }
    assert!(relative_gap(&m.resultant, &m.resultant_formula) < 1e-6);
    assert_eq!(m.s_discriminant, m.s_discriminant_formula);
    assert_eq!(m.saddle_node.kind, EquilibriumKind::SaddleNode);
    assert_eq!(m.l1, (1.0, -series.a20));
    // v1 spans (1, −a20) in (x, p)
    let v = m.saddle_node.v1;
    assert!((v[2] / v[0] + series.a20).abs() < 1e-8 && v[1].abs() < 1e-12);
}

#[test]
fn e34_saddle_node_two_jet() {
    let nf = reduce_minus_one_flavor(&catalog::e34()).unwrap();
    assert!((nf.a + 1.0).abs() < 1e-9 && (nf.b - 1.0).abs() < 1e-9);
    let r = saddle_node_chart_check(&nf, SaddleNodeFlavor::E34).unwrap();
    let pp = r.get("pdot.pp").unwrap();
    assert!((pp.computed + 1.0).abs() < 1e-6, "{pp:?}");
    assert!(r.max_residual() < 1e-6, "{:?}", r.comparisons);
}

#[test]
fn e45_saddle_node_two_jet() {
    let nf = reduce_to_normal_form(&catalog::e45()).unwrap();
    let r = saddle_node_chart_check(&nf, SaddleNodeFlavor::E45).unwrap();
    assert!((r.get("xdot.xx").unwrap().computed - 4.0).abs() < 1e-6);
    assert!((r.get("y.xx").unwrap().computed + 0.5).abs() < 1e-6);
    assert!(r.max_residual() < 1e-6, "{:?}", r.comparisons);
    assert_eq!(r.alternatives.len(), 2);
}

#[test]
fn chart_check_needs_a_regular_sheet() {
    let zero = ModelField::from_series(&Default::default());
    assert!(restricted_two_jet(&zero).is_err());
}

#[test]
fn integration_from_an_equilibrium_stops_at_once() {
    let f = ModelField::normal_form(2.0, 0.0);
    let e = &lc_equilibria(2.0, 0.0).unwrap()[0];
    let t = integrate_lc(&f, &e.state(), 1.0, &IntegrateOptions::default()).unwrap();
    assert_eq!(t.stop, StopReason::Equilibrium);
    assert_eq!(t.arclength, 0.0);
    assert_eq!(t.states.len(), 1);
}

#[test]
fn unstable_manifold_of_a_saddle() {
    let f = ModelField::normal_form(2.0, 0.0);
    for e in lc_equilibria(2.0, 0.0).unwrap() {
        let st = e.state();
        let off = 1e-4;
        let start = LCState::new(st.x + off * e.v1[0], st.y + off * e.v1[1], st.s + off * e.v1[2], st.chart);
        let (start, r) = project(&f, &start);
        assert!(r < 1e-12);
        let opts = IntegrateOptions { budget: 0.2, ..Default::default() };
        let t = integrate_lc(&f, &start, 1.0, &opts).unwrap();
        let u = integrate_lc(&f, &start, -1.0, &opts).unwrap();
        assert!(t.max_residual() < 1e-8 && u.max_residual() < 1e-8);
        let far = |tr: &LCTrajectory| tr.states.last().map(|s| s.x.hypot(s.y)).unwrap();
        assert!(far(&t).min(far(&u)) > 0.1, "{} {}", far(&t), far(&u));
        for tr in [&t, &u] {
            let s = tr.states.last().unwrap();
            assert!((s.p().atan() - e.p.atan()).abs() < 1e-6 || (s.p().atan() - e.p.atan()).abs() > 3.14, "{} {}", s.p(), e.p);
        }
    }
}

/// Smallest distance to `target` over return budgets near `length`.
fn closest_return(f: &JetField, from: &LCState, dir: f64, length: f64, target: (f64, f64)) -> f64 {
    let dist = |b: f64| {
        let opts = IntegrateOptions { budget: b, ..Default::default() };
        let s = *integrate_lc(f, from, dir, &opts).unwrap().states.last().unwrap();
        (s.x - target.0).hypot(s.y - target.1)
    };
    let (mut lo, mut hi) = (0.5 * length, 1.5 * length);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..90 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(0.5 * (lo + hi))
}

#[test]
fn chart_switch_round_trip() {
    let f = JetField::new(&catalog::e5());
    let opts = IntegrateOptions { budget: 0.5, ..Default::default() };
    let mut tried = 0;
    for i in -4..=4 {
        for k in -4..=4 {
            let (x, y) = (0.04 * i as f64, 0.04 * k as f64 + 0.01);
            for r in slopes_at(&f, x, y) {
                let start = LCState::from_slope(x, y, r.value);
                for dir in [1.0, -1.0] {
                    if tried == 3 {
                        return;
                    }
                    let t = integrate_lc(&f, &start, dir, &opts).unwrap();
                    if t.stop != StopReason::Budget || t.states.iter().all(|s| s.chart == start.chart) {
                        continue;
                    }
                    let end = *t.states.last().unwrap();
                    let back = [1.0, -1.0]
                        .iter()
                        .map(|&d| closest_return(&f, &end, d, t.arclength, (x, y)))
                        .fold(f64::INFINITY, f64::min);
                    assert!(back < 1e-8, "{back}");
                    for w in t.states.windows(2) {
                        assert!((w[0].x - w[1].x).hypot(w[0].y - w[1].y) <= opts.h_max + 1e-12);
                    }
                    tried += 1;
                }
            }
        }
    }
    panic!("only {tried} trajectories changed chart");
}

#[test]
fn quadruple_covering_away_from_the_point() {
    let f = JetField::new(&catalog::e4());
    for (x, y) in [(0.05, 0.0), (-0.03, 0.04), (0.0, -0.06)] {
        let roots = slopes_at(&f, x, y);
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }
}

#[test]
fn trajectory_csv_header() {
    let f = ModelField::normal_form(2.0, 0.0);
    let e = &lc_equilibria(2.0, 0.0).unwrap()[0];
    let t = integrate_lc(&f, &e.state(), 1.0, &IntegrateOptions::default()).unwrap();
    assert!(t.to_csv().starts_with("step,x,y,p,chart,G_residual\n0,"));
}
