use axiumbilic::axial_quartic::*;
use axiumbilic::catalog;
use axiumbilic::monge_surface::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn forms(rng: &mut StdRng, iso: bool) -> FundamentalForms {
    let mut v = || rng.gen_range(-2.0..2.0);
    let (e1, f1, g1, e2, f2, g2) = (v(), v(), v(), v(), v(), v());
    let (e, f, g) = if iso {
        let e = rng.gen_range(0.5..2.0);
        (e, 0.0, e)
    } else {
        let e: f64 = rng.gen_range(0.5..2.0);
        let g = rng.gen_range(0.5..2.0);
        let f = rng.gen_range(-0.9..0.9) * (e * g).sqrt();
        (e, f, g)
    };
    FundamentalForms { e, f, g, e1, f1, g1, e2, f2, g2 }
}

#[test]
fn point_ellipse_gives_the_zero_quartic() {
    let f = FundamentalForms::euclidean(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
    assert_eq!(quartic_general(&f).ascending(), [0.0; 5]);
    assert_eq!(quartic_prop1(&f).max_abs(), 0.0);
    assert_eq!(quartic_isothermic(&f).unwrap().max_abs(), 0.0);
}

#[test]
fn segment_example() {
    let q = quartic_general(&FundamentalForms::euclidean(1.0, 0.0, -1.0, 0.0, 0.0, 0.0));
    assert_eq!(q.ascending(), [0.0, 16.0, 0.0, -16.0, 0.0]);
    let mut ang = q.direction_angles();
    ang.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let pi = std::f64::consts::PI;
    let want = [0.0, pi / 4.0, pi / 2.0, 3.0 * pi / 4.0];
    assert_eq!(ang.len(), 4);
    for (a, w) in ang.iter().zip(want) {
        assert!((a - w).abs() < 1e-12);
    }
}

#[test]
fn isothermic_quadruple() {
    let f = FundamentalForms::euclidean(0.0, 1.0, 1.0, 0.0, 0.0, 0.0);
    let q = quartic_isothermic(&f).unwrap();
    assert_eq!(q.ascending(), [4.0, -12.0, -24.0, 12.0, 4.0]);
    assert_eq!(quartic_general(&f).ascending(), q.ascending());
    let skew = FundamentalForms { f: 0.2, ..f };
    assert!(quartic_isothermic(&skew).is_err());
}

#[test]
fn isothermic_specialisation_is_exact() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..100 {
        let f = forms(&mut rng, true);
        let g = quartic_general(&f);
        let scale = g.max_abs().max(1.0);
        assert!((g.a4 - g.a0).abs() < 1e-12 * scale);
        assert!((g.a3 + g.a1).abs() < 1e-12 * scale);
        assert!((g.a2 + 6.0 * g.a0).abs() < 1e-12 * scale);
        let iso = quartic_isothermic(&f).unwrap();
        assert!(g.projective_distance(&iso) < 1e-10);
        assert!(g.projective_distance(&quartic_prop1(&f)) < 1e-10);
    }
}

#[test]
fn reduced_form_has_the_general_root_set() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..100 {
        let f = forms(&mut rng, false);
        let a = quartic_general(&f).direction_angles();
        let b = quartic_prop1(&f).direction_angles();
        assert_eq!(a.len(), b.len());
        for (u, v) in a.iter().zip(b.iter()) {
            assert!((u - v).abs() < 1e-8);
        }
    }
}

/// The axial directions are where `‖k_n − H‖²` is critical on the unit circle.
#[test]
fn roots_are_critical_directions_of_the_ellipse_distance() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let f = forms(&mut rng, false);
        let q = quartic_general(&f);
        for t in q.direction_angles() {
            let d = |s: f64| ellipse_distance_sq(&f, s.cos(), s.sin()).unwrap();
            let h = 1e-5;
            let slope = (d(t + h) - d(t - h)) / (2.0 * h);
            assert!(slope.abs() < 1e-6 * (1.0 + d(t)), "{slope}");
        }
    }
}

#[test]
fn eval_g_examples() {
    assert_eq!(eval_g(&QuarticCoefficients::from_ascending([1.0, 0.0, 0.0, 0.0, 0.0]), 3.7), 1.0);
    assert_eq!(eval_g(&QuarticCoefficients::from_ascending([1.0, 0.0, -6.0, 0.0, 1.0]), 1.0), -4.0);
    let q = quartic_at(&catalog::e5(), 0.1, 0.0).unwrap();
    let roots = axiumbilic::poly::real_roots(&q.ascending());
    assert!(!roots.is_empty());
    for r in roots {
        assert!(eval_g(&q, r.value).abs() < 1e-9 * q.max_abs());
    }
}

#[test]
fn series_examples() {
    assert_eq!(monge_series(&MongeJet::zero()), QuarticSeries::default());
    let s = monge_series(&catalog::e45());
    assert_eq!((s.a00, s.b00, s.a10, s.a01, s.b10, s.b01), (0.0, 0.0, 0.0, 1.0, 0.0, -4.0));
    // second derivatives of a₀, a₁ in x
    assert_eq!((s.a20, s.b20), (1.0, 4.0));
}

/// Grid samples of the pointwise quartic agree with the series to third order.
#[test]
fn series_matches_pointwise_quartic() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..50 {
        let mut jet = MongeJet::zero();
        for i in 0..12 {
            jet.r[i] = rng.gen_range(-1.0..1.0);
            jet.s[i] = rng.gen_range(-1.0..1.0);
        }
        let (r, s) = (jet.r_diff(), jet.s_diff());
        jet.set_r(1, 1, -0.5 * s);
        jet.set_s(1, 1, 0.5 * r);
        assert!(is_axiumbilic(&jet).axiumbilic);
        let ser = monge_series(&jet);
        assert!(ser.a00.abs() < 1e-12 && ser.b00.abs() < 1e-12);
        let model = |x: f64, y: f64| {
            (
                ser.a10 * x + ser.a01 * y + 0.5 * ser.a20 * x * x + ser.a11 * x * y + 0.5 * ser.a02 * y * y,
                ser.b10 * x + ser.b01 * y + 0.5 * ser.b20 * x * x + ser.b11 * x * y + 0.5 * ser.b02 * y * y,
            )
        };
        let worst = |h: f64| {
            let mut w = 0.0f64;
            for i in -2..=2 {
                for j in -2..=2 {
                    let (x, y) = (h * i as f64 / 2.0, h * j as f64 / 2.0);
                    let q = quartic_at(&jet, x, y).unwrap();
                    let (m0, m1) = model(x, y);
                    w = w.max((q.a0 / 4.0 - m0).abs()).max((q.a1 / 4.0 - m1).abs());
                }
            }
            w
        };
        let (w1, w2) = (worst(1e-2), worst(5e-3));
        assert!(w1 < 1e-4, "{w1}");
        if w1 > 1e-12 {
            assert!(w1 / w2 > 5.0, "ratio {}", w1 / w2);
        }
    }
}

#[test]
fn axiumbilic_examples() {
    let z = is_axiumbilic(&MongeJet::zero());
    assert!(z.axiumbilic);
    assert_eq!(z.branch, Some(AxiumbilicBranch::Both));
    let j = MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0);
    let t = is_axiumbilic(&j);
    assert!(t.axiumbilic);
    assert_eq!(t.branch, Some(AxiumbilicBranch::Second));
    let n = is_axiumbilic(&MongeJet::zero().with_r(1, 1, 1.0));
    assert!(!n.axiumbilic);
    assert_eq!(n.b00, -4.0);
}

#[test]
fn axiumbilic_iff_circle() {
    for name in ["e3", "e4", "e5", "e34", "e45"] {
        let jet = catalog::by_name(name).unwrap();
        assert!(is_axiumbilic(&jet).axiumbilic, "{name}");
        assert_eq!(curvature_ellipse_at(&jet, 0.0, 0.0).unwrap().shape, EllipseShape::Circle, "{name}");
        for (x, y) in [(0.05, 0.0), (0.0, -0.03), (0.02, 0.02)] {
            let q = quartic_at(&jet, x, y).unwrap();
            assert!(q.max_abs() > 1e-6);
            assert_ne!(curvature_ellipse_at(&jet, x, y).unwrap().shape, EllipseShape::Circle);
        }
    }
}

#[test]
fn located_points_are_axiumbilic() {
    let pts = locate_axiumbilics(&catalog::e5(), (0.0, 0.0), 0.5, 41);
    assert!(pts.iter().any(|p| p.0.hypot(p.1) < 1e-10));
    assert_eq!(pts.len(), 3, "{pts:?}");
    for &(x, y) in &pts {
        let el = curvature_ellipse_at(&catalog::e5(), x, y).unwrap();
        assert_eq!(el.shape, EllipseShape::Circle);
    }
}
