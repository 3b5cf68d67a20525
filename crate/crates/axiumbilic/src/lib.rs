//! Axial curvature lines and axiumbilic points of surfaces in R⁴.

pub mod error;
pub mod monge_surface;
pub mod poly;
pub mod series;
pub mod tol;
pub mod axial_quartic;
pub mod normal_form;
pub mod classifier;
pub mod lie_cartan;
pub mod axial_net;
pub mod bifurcation_family;
pub mod catalog;
pub mod verify;
pub mod emit;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/surfaces.md")]
    mod chapter1 {}
    #[doc = include_str!("../../../book/src/quartic.md")]
    mod chapter2 {}
    #[doc = include_str!("../../../book/src/normal_form.md")]
    mod chapter3 {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod chapter4 {}
    #[doc = include_str!("../../../book/src/lie_cartan.md")]
    mod chapter5 {}
    #[doc = include_str!("../../../book/src/portraits.md")]
    mod chapter6 {}
    #[doc = include_str!("../../../book/src/bifurcations.md")]
    mod chapter7 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod chapter8 {}
}
