#![allow(dead_code)]

use axiumbilic::monge_surface::*;
use rand::rngs::StdRng;
use rand::Rng;

pub fn fact(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

/// R and S evaluated straight from the Taylor coefficients.
pub fn embed(jet: &MongeJet, x: f64, y: f64) -> [f64; 4] {
    let mut r = 0.0;
    let mut s = 0.0;
    for &(j, k) in INDEX.iter() {
        let m = x.powi(j as i32) * y.powi(k as i32) / (fact(j) * fact(k));
        r += jet.r(j, k) * m;
        s += jet.s(j, k) * m;
    }
    [x, y, r, s]
}

pub fn dot(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(b.iter()).map(|(u, v)| u * v).sum()
}

pub fn random_jet(rng: &mut StdRng, size: f64) -> MongeJet {
    let mut j = MongeJet::zero();
    for i in 0..12 {
        j.r[i] = rng.gen_range(-size..size);
        j.s[i] = rng.gen_range(-size..size);
    }
    j
}

/// Forms from central differences of the embedding, projected on the frame normals.
pub fn fd_forms(jet: &MongeJet, x: f64, y: f64, h: f64) -> [f64; 9] {
    let a = |dx: f64, dy: f64| embed(jet, x + dx, y + dy);
    let comb = |c: &[(f64, f64, f64)]| {
        let mut v = [0.0; 4];
        for &(w, dx, dy) in c {
            let p = a(dx, dy);
            for i in 0..4 {
                v[i] += w * p[i];
            }
        }
        v
    };
    let ax = comb(&[(0.5 / h, h, 0.0), (-0.5 / h, -h, 0.0)]);
    let ay = comb(&[(0.5 / h, 0.0, h), (-0.5 / h, 0.0, -h)]);
    let h2 = h * h;
    let axx = comb(&[(1.0 / h2, h, 0.0), (-2.0 / h2, 0.0, 0.0), (1.0 / h2, -h, 0.0)]);
    let ayy = comb(&[(1.0 / h2, 0.0, h), (-2.0 / h2, 0.0, 0.0), (1.0 / h2, 0.0, -h)]);
    let q = 0.25 / h2;
    let axy = comb(&[(q, h, h), (-q, h, -h), (-q, -h, h), (q, -h, -h)]);
    let fr = frame_at(jet, x, y).unwrap();
    [
        dot(ax, ax),
        dot(ax, ay),
        dot(ay, ay),
        dot(axx, fr.n1),
        dot(axy, fr.n1),
        dot(ayy, fr.n1),
        dot(axx, fr.n2),
        dot(axy, fr.n2),
        dot(ayy, fr.n2),
    ]
}

pub fn forms_vec(f: &FundamentalForms) -> [f64; 9] {
    [f.e, f.f, f.g, f.e1, f.f1, f.g1, f.e2, f.f2, f.g2]
}

/// Extremes of ‖k_n − H‖ by dense sampling of metric-unit directions with a
/// golden-section polish of the best samples.
pub fn sampled_axes(f: &FundamentalForms, n: usize) -> (f64, f64) {
    let dist = |t: f64| ellipse_distance_sq(f, t.cos(), t.sin()).unwrap().sqrt();
    let step = std::f64::consts::PI / n as f64;
    let polish = |t0: f64, sign: f64| {
        let (mut lo, mut hi) = (t0 - step, t0 + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if sign * dist(m1) > sign * dist(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        dist(0.5 * (lo + hi))
    };
    let ts: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    let imax = ts.iter().copied().fold(0.0, |b, t| if dist(t) > dist(b) { t } else { b });
    let imin = ts.iter().copied().fold(0.0, |b, t| if dist(t) < dist(b) { t } else { b });
    (polish(imax, 1.0), polish(imin, -1.0))
}
