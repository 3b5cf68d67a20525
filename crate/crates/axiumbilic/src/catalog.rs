//! Named example jets.

use crate::monge_surface::MongeJet;

/// Normal form `(2, 0)`.
pub fn e5() -> MongeJet {
    MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, 1.0)
}

/// Normal form `(−4, 0)`.
pub fn e3() -> MongeJet {
    MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, -1.0).with_r(0, 3, -3.0)
}

/// Normal form `(−1, 1)`, a saddle-node on the projective line at `p = 0`.
pub fn e34() -> MongeJet {
    MongeJet::zero()
        .with_s(0, 2, 2.0)
        .with_r(1, 1, -1.0)
        .with_s(1, 2, -1.0)
        .with_r(0, 3, -6.0)
        .with_s(0, 3, 1.0)
}

/// `T = 0` with `χ ≠ 0`.
pub fn e45() -> MongeJet {
    MongeJet::zero()
        .with_r(0, 2, 2.0)
        .with_s(0, 2, 2.0)
        .with_r(1, 1, -1.0)
        .with_s(1, 1, 1.0)
        .with_r(0, 3, -1.0)
        .with_s(2, 2, 1.0)
}

/// A jet whose reduction at `θ = 0` is the normal form `(a, b)`.
pub fn normal_form_jet(a: f64, b: f64) -> MongeJet {
    MongeJet::zero()
        .with_s(0, 2, 2.0)
        .with_r(1, 1, -1.0)
        .with_r(2, 1, a / 2.0)
        .with_r(0, 3, a / 2.0 - 4.0)
        .with_s(0, 3, b)
}

/// Normal form `(−1/2, 0)`.
pub fn e4() -> MongeJet {
    normal_form_jet(-0.5, 0.0)
}

/// Looks a jet up by name: `e3`, `e4`, `e5`, `e34`, `e45`.
pub fn by_name(name: &str) -> Option<MongeJet> {
    match name {
        "e3" => Some(e3()),
        "e4" => Some(e4()),
        "e5" => Some(e5()),
        "e34" => Some(e34()),
        "e45" => Some(e45()),
        _ => None,
    }
}
