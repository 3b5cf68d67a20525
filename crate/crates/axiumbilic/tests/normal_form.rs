use axiumbilic::axial_quartic::{monge_series, QuarticSeries};
use axiumbilic::catalog;
use axiumbilic::error::Error;
use axiumbilic::monge_surface::MongeJet;
use axiumbilic::normal_form::*;
use axiumbilic::poly::horner;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_axiumbilic(rng: &mut StdRng) -> MongeJet {
    let mut jet = MongeJet::zero();
    for i in 0..12 {
        jet.r[i] = rng.gen_range(-2.0..2.0);
        jet.s[i] = rng.gen_range(-2.0..2.0);
    }
    let (r, s) = (jet.r_diff(), jet.s_diff());
    jet.set_r(1, 1, -0.5 * s);
    jet.set_s(1, 1, 0.5 * r);
    jet
}

#[test]
fn invariant_examples() {
    let z = invariants_from_jet(&MongeJet::zero());
    assert_eq!((z.r, z.s, z.alpha, z.beta), (0.0, 0.0, [0.0; 4], [0.0; 6]));
    let a = invariants_from_jet(&MongeJet::zero().with_s(1, 2, 1.0));
    assert_eq!(a.alpha, [1.0, 0.0, 0.0, 2.0]);
    let b = invariants_from_jet(&MongeJet::zero().with_s(2, 2, 1.0));
    assert_eq!((b.beta[0], b.beta[2], b.beta[3], b.beta[4]), (1.0, 0.0, 2.0, -1.0));
    assert_eq!((b.beta[1], b.beta[5]), (0.0, 0.0));
}

#[test]
fn transversality_examples() {
    assert_eq!(transversality_t(&invariants_from_jet(&catalog::e5())), (-2.0, -8.0));
    assert_eq!(transversality_t(&invariants_from_jet(&catalog::e45())).0, 0.0);
    assert_eq!(transversality_t(&invariants_from_jet(&MongeJet::zero())), (0.0, 0.0));
}

#[test]
fn quintic_examples() {
    let r = rotation_quintic(0.0, 1.0, 0.0, 3.0).unwrap();
    assert!(r.iter().any(|x| x.theta == 0.0));
    // t⁴ − 6t² + 1 plus the quarter turn
    let r = rotation_quintic(1.0, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(r.len(), 5);
    assert_eq!(r[4].theta, std::f64::consts::FRAC_PI_2);
    for x in &r[..4] {
        let t2 = x.theta.tan().powi(2);
        let want = [3.0 - 8f64.sqrt(), 3.0 + 8f64.sqrt()];
        assert!(want.iter().any(|w| (t2 - w).abs() < 1e-12 * w));
    }
    assert!(matches!(rotation_quintic(0.0, 0.0, 0.0, 0.0), Err(Error::ZeroQuintic)));
}

#[test]
fn quintic_roots_have_small_residuals() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..200 {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let c = rotation_quintic_coefficients(v[0], v[1], v[2], v[3]);
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let roots = rotation_quintic(v[0], v[1], v[2], v[3]).unwrap();
        assert!(!roots.is_empty());
        for r in roots {
            let t = r.theta.tan();
            let res = horner(&c, t) / (scale * (1.0 + t.abs()).powi(5));
            assert!(res.abs() < 1e-9, "{res}");
        }
    }
}

#[test]
fn reduction_examples() {
    let nf = reduce_to_normal_form(&catalog::e5()).unwrap();
    assert!((nf.a - 2.0).abs() < 1e-12 && nf.b.abs() < 1e-12);
    let nf = reduce_to_normal_form(&catalog::e3()).unwrap();
    assert!((nf.a + 4.0).abs() < 1e-12 && nf.b.abs() < 1e-12);
    let e4 = MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, -1.0).with_r(0, 3, -10.0);
    let nf = reduce_to_normal_form(&e4).unwrap();
    assert!((nf.a + 0.5).abs() < 1e-12 && nf.b.abs() < 1e-12);
    assert!(nf.transversal);
    assert!(matches!(reduce_to_normal_form(&MongeJet::zero()), Err(Error::Degenerate(_))));
    assert!(matches!(reduce_to_normal_form(&MongeJet::zero().with_r(1, 1, 1.0)), Err(Error::NotAxiumbilic { .. })));
}

#[test]
fn constructed_normal_forms_reduce_to_themselves() {
    for (a, b) in [(2.0, 0.0), (-4.0, 0.0), (-0.5, 0.0), (1.5, -2.0), (-7.0, 3.0)] {
        let nf = reduce_with_theta(&catalog::normal_form_jet(a, b), 0.0).unwrap();
        assert!((nf.a - a).abs() < 1e-12 && (nf.b - b).abs() < 1e-12, "{a} {b}: {nf:?}");
    }
}

#[test]
fn reduced_series_is_adapted() {
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..100 {
        let jet = random_axiumbilic(&mut rng);
        let Ok(nf) = reduce_to_normal_form(&jet) else { continue };
        let s = nf.series;
        assert!(s.a10.abs() < 1e-9, "{}", s.a10);
        assert!((s.a01 - 1.0).abs() < 1e-9);
        assert!((s.b10 - nf.a).abs() < 1e-8 * (1.0 + nf.a.abs()));
        assert!((s.b01 - nf.b).abs() < 1e-8 * (1.0 + nf.b.abs()));
        let rotated = monge_series(&jet.rotate_tangent(nf.theta));
        assert!(rotated.a10.abs() < 1e-9 * (1.0 + rotated.max_linear()));
        if nf.t_invariant.abs() > 1e-9 {
            assert_eq!(nf.t_invariant.signum(), nf.t_reduced.signum());
        }
    }
}

#[test]
fn homotety_leaves_a_b_alone() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..50 {
        let jet = random_axiumbilic(&mut rng);
        let Ok(nf) = reduce_to_normal_form(&jet) else { continue };
        let lambda = rng.gen_range(0.3..3.0);
        let scaled = reduce_with_theta(&jet.homotety(lambda), nf.theta).unwrap();
        assert!((scaled.a - nf.a).abs() < 1e-8 * (1.0 + nf.a.abs()));
        assert!((scaled.b - nf.b).abs() < 1e-8 * (1.0 + nf.b.abs()));
    }
}

#[test]
fn rotations_permute_the_reductions() {
    let mut rng = StdRng::seed_from_u64(24);
    for _ in 0..30 {
        let jet = random_axiumbilic(&mut rng);
        let Ok(base) = reductions(&jet) else { continue };
        let phi = rng.gen_range(-1.0..1.0);
        for moved in [jet.rotate_tangent(phi), jet.rotate_normal(phi)] {
            for nf in reductions(&moved).unwrap() {
                let hit = base.iter().any(|b| (b.a - nf.a).abs() + (b.b - nf.b).abs() < 1e-7 * (1.0 + nf.a.abs() + nf.b.abs()));
                assert!(hit, "({}, {}) not among {:?}", nf.a, nf.b, base.iter().map(|b| (b.a, b.b)).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn chi_examples() {
    assert_eq!(chi_invariant(&monge_series(&catalog::e45())).unwrap(), 8.0);
    let flat = catalog::e45().with_s(2, 2, 0.0);
    assert_eq!(chi_invariant(&monge_series(&flat)).unwrap(), 0.0);
    let s = QuarticSeries { a01: 1.0, a20: 0.0, b20: 1.0, b01: -17.0, ..Default::default() };
    assert_eq!(chi_invariant(&s).unwrap(), 1.0);
    let bad = QuarticSeries { a01: 2.0, ..s };
    assert!(matches!(chi_invariant(&bad), Err(Error::NotAdapted(_))));
}
