//! Axial curvature nets: the four axial directions at regular points, traced
//! lines, separatrices of the Lie-Cartan field and full portraits.

use crate::axial_quartic::locate_axiumbilics;
use crate::classifier::{classify_point, ClassTag};
use crate::error::{Error, Result};
use crate::lie_cartan::{
    integrate_lc, lc_field, line_equilibria, slopes_at, EquilibriumKind, IntegrateOptions, JetField, LCEquilibrium,
    LCState, StopReason,
};
use crate::monge_surface::{curvature_ellipse, ellipse_distance_sq, fundamental_forms_at, EllipseShape, MongeJet};
use serde::Serialize;

/// Principal lines follow the large axis of the ellipse, mean lines the small one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Net {
    Principal,
    Mean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NetSelection {
    Principal,
    Mean,
    Both,
}

impl NetSelection {
    pub fn includes(self, net: Net) -> bool {
        matches!(
            (self, net),
            (NetSelection::Both, _) | (NetSelection::Principal, Net::Principal) | (NetSelection::Mean, Net::Mean)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AxialDirection {
    /// `dy/dx`, infinite for vertical.
    pub p: f64,
    /// `‖k_n − H‖²` in this direction.
    pub distance_sq: f64,
    pub net: Net,
}

impl AxialDirection {
    pub fn vector(&self) -> (f64, f64) {
        LCState::from_slope(0.0, 0.0, self.p).direction()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxialDirections {
    /// Principal pair first, then the mean pair.
    pub directions: Vec<AxialDirection>,
    /// Relative gap between the pairs; tiny near axiumbilic points.
    pub conditioning: f64,
    pub reliable: bool,
    /// First-fundamental-form cosine within each pair.
    pub orthogonality: Vec<f64>,
}

impl AxialDirections {
    pub fn net(&self, net: Net) -> Vec<AxialDirection> {
        self.directions.iter().copied().filter(|d| d.net == net).collect()
    }

    /// Net of the direction nearest (projectively) to `(u, v)`.
    pub fn nearest(&self, u: f64, v: f64) -> Option<AxialDirection> {
        let n = u.hypot(v);
        self.directions
            .iter()
            .copied()
            .max_by(|a, b| {
                let (a1, a2) = a.vector();
                let (b1, b2) = b.vector();
                ((a1 * u + a2 * v).abs() / n).partial_cmp(&((b1 * u + b2 * v).abs() / n)).unwrap()
            })
    }
}

/// The axial directions at a regular point, split by ranking `‖k_n − H‖²`.
pub fn directions_at(jet: &MongeJet, x: f64, y: f64) -> Result<AxialDirections> {
    let forms = fundamental_forms_at(jet, x, y)?;
    let ellipse = curvature_ellipse(&forms)?;
    if matches!(ellipse.shape, EllipseShape::Circle | EllipseShape::Point) {
        return Err(Error::Degenerate("all directions axial; split undefined".into()));
    }
    let field = JetField::new(jet);
    let mut dirs = Vec::new();
    for r in slopes_at(&field, x, y) {
        let (u, v) = LCState::from_slope(0.0, 0.0, r.value).direction();
        let d = ellipse_distance_sq(&forms, u, v)?;
        for _ in 0..r.multiplicity {
            dirs.push(AxialDirection { p: r.value, distance_sq: d, net: Net::Mean });
        }
    }
    dirs.sort_by(|a, b| b.distance_sq.partial_cmp(&a.distance_sq).unwrap());
    let n = dirs.len();
    for d in dirs.iter_mut().take(n.min(2)) {
        d.net = Net::Principal;
    }
    let conditioning = if n == 4 {
        (dirs[1].distance_sq - dirs[2].distance_sq) / dirs[0].distance_sq.max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let ortho = |a: &AxialDirection, b: &AxialDirection| {
        let (u1, v1) = a.vector();
        let (u2, v2) = b.vector();
        let i = |p: f64, q: f64, r: f64, s: f64| forms.e * p * r + forms.f * (p * s + q * r) + forms.g * q * s;
        i(u1, v1, u2, v2) / (i(u1, v1, u1, v1) * i(u2, v2, u2, v2)).sqrt()
    };
    let orthogonality = if n == 4 { vec![ortho(&dirs[0], &dirs[1]), ortho(&dirs[2], &dirs[3])] } else { Vec::new() };
    Ok(AxialDirections { directions: dirs, conditioning, reliable: n == 4 && conditioning > 1e-10, orthogonality })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineKind {
    Separatrix,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub net: Net,
    pub kind: LineKind,
    pub points: Vec<(f64, f64)>,
}

/// A traced line through a seed, both orientations joined.
#[derive(Clone, Debug, PartialEq)]
pub struct TracedLine {
    pub net: Net,
    pub points: Vec<(f64, f64)>,
    pub states: Vec<LCState>,
    /// Stop reasons of the backward and forward halves.
    pub stops: (StopReason, StopReason),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceOptions {
    pub budget: f64,
    pub h_max: f64,
    pub window: Option<[f64; 4]>,
    pub stop_points: Vec<(f64, f64)>,
    pub stop_radius: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { budget: 1.0, h_max: 1e-2, window: None, stop_points: Vec::new(), stop_radius: 0.0 }
    }
}

impl TraceOptions {
    fn integrate(&self) -> IntegrateOptions {
        IntegrateOptions {
            budget: self.budget,
            h_max: self.h_max,
            h_init: (self.h_max * 0.1).min(1e-3),
            window: self.window,
            stop_points: self.stop_points.clone(),
            stop_radius: self.stop_radius,
            ..Default::default()
        }
    }
}

/// Traces the line of `net` through `seed`; `which` picks one of the two
/// directions of the pair.
pub fn trace_line(jet: &MongeJet, seed: (f64, f64), net: Net, which: usize, opts: &TraceOptions) -> Result<TracedLine> {
    let dirs = directions_at(jet, seed.0, seed.1)?;
    let pair = dirs.net(net);
    let d = pair.get(which.min(pair.len().saturating_sub(1))).ok_or(Error::ZeroDirection)?;
    let start = LCState::from_slope(seed.0, seed.1, d.p);
    let field = JetField::new(jet);
    if opts.budget <= 0.0 {
        return Ok(TracedLine {
            net,
            points: vec![seed],
            states: vec![start],
            stops: (StopReason::Budget, StopReason::Budget),
        });
    }
    let io = opts.integrate();
    let fwd = integrate_lc(&field, &start, 1.0, &io)?;
    let bwd = integrate_lc(&field, &start, -1.0, &io)?;
    let mut states: Vec<LCState> = bwd.states.iter().rev().copied().collect();
    states.extend(fwd.states.iter().skip(1).copied());
    Ok(TracedLine {
        net,
        points: states.iter().map(|s| (s.x, s.y)).collect(),
        states,
        stops: (bwd.stop, fwd.stop),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ManifoldRole {
    /// Hyperbolic manifold transversal to the projective line.
    Hyperbolic,
    /// Center manifold transversal to the projective line.
    Center,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatrixHalf {
    pub net: Net,
    pub points: Vec<(f64, f64)>,
    pub stop: StopReason,
    /// Whether the flow of `X` leaves the equilibrium along this half.
    pub outward: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Separatrix {
    pub p: f64,
    pub kind: EquilibriumKind,
    pub role: ManifoldRole,
    pub halves: [SeparatrixHalf; 2],
}

impl Separatrix {
    /// Both halves joined through the axiumbilic point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self.halves[0].points.iter().rev().copied().collect();
        out.extend(self.halves[1].points.iter().skip(1).copied());
        out
    }
}

pub const SEPARATRIX_OFFSET: f64 = 1e-4;

fn window_box(center: (f64, f64), w: f64) -> [f64; 4] {
    [center.0 - w, center.0 + w, center.1 - w, center.1 + w]
}

fn manifold_role(e: &LCEquilibrium) -> Option<ManifoldRole> {
    let eps = 1e-8 * (1.0 + e.lambda1.abs().max(e.lambda2.abs()));
    match e.kind {
        EquilibriumKind::Saddle | EquilibriumKind::MorseCone => Some(ManifoldRole::Hyperbolic),
        EquilibriumKind::SaddleNode if e.lambda1.abs() > eps => Some(ManifoldRole::Hyperbolic),
        EquilibriumKind::SaddleNode => Some(ManifoldRole::Center),
        EquilibriumKind::Node => None,
    }
}

/// Net of a traced half, read off a vertex away from the singular point.
fn half_net(jet: &MongeJet, states: &[LCState], origin: (f64, f64)) -> Net {
    let far = states
        .iter()
        .rev()
        .find(|s| directions_at(jet, s.x, s.y).map(|d| d.reliable).unwrap_or(false) && (s.x - origin.0).hypot(s.y - origin.1) > 0.0);
    let Some(s) = far else { return Net::Principal };
    let (u, v) = s.direction();
    directions_at(jet, s.x, s.y).ok().and_then(|d| d.nearest(u, v)).map(|d| d.net).unwrap_or(Net::Principal)
}

/// Separatrices of the axiumbilic point at the origin of `jet`, traced
/// inside the square of half-width `window`.
pub fn separatrices(jet: &MongeJet, window: f64) -> Result<Vec<Separatrix>> {
    let class = classify_point(jet)?;
    if matches!(class.tag, ClassTag::Unclassified | ClassTag::Degenerate) {
        return Err(Error::Degenerate(format!("no separatrix structure for class {}", class.tag)));
    }
    let field = JetField::new(jet);
    let eqs = line_equilibria(&field, 0.0, 0.0)?;
    let stops = locate_axiumbilics(jet, (0.0, 0.0), window * std::f64::consts::SQRT_2, 41);
    let opts = IntegrateOptions {
        budget: 8.0 * window,
        h_max: window / 40.0,
        h_init: 1e-5,
        window: Some(window_box((0.0, 0.0), window)),
        stop_points: stops,
        stop_radius: window * 0.01,
        ..Default::default()
    };
    let mut out = Vec::new();
    for e in &eqs {
        let Some(role) = manifold_role(e) else { continue };
        let st = e.state();
        let mut halves = Vec::new();
        for sign in [-1.0, 1.0] {
            let off = [sign * e.v1[0], sign * e.v1[1], sign * e.v1[2]];
            let seed = LCState::new(
                st.x + SEPARATRIX_OFFSET * off[0],
                st.y + SEPARATRIX_OFFSET * off[1],
                st.s + SEPARATRIX_OFFSET * off[2],
                st.chart,
            );
            let x = lc_field(&field, &seed);
            let along = x[0] * off[0] + x[1] * off[1] + x[2] * off[2];
            if role == ManifoldRole::Center && along < 0.0 {
                halves.push(inward_arm(jet, &field, (st.x, st.y), (off[0], off[1]), window, &opts)?);
                continue;
            }
            let dir = if along >= 0.0 { 1.0 } else { -1.0 };
            let traj = integrate_lc(&field, &seed, dir, &opts)?;
            let mut pts = vec![(st.x, st.y)];
            pts.extend(traj.states.iter().map(|s| (s.x, s.y)));
            halves.push(SeparatrixHalf {
                net: half_net(jet, &traj.states, (st.x, st.y)),
                points: pts,
                stop: traj.stop,
                outward: along > 0.0,
            });
        }
        let h1 = halves.pop().unwrap();
        let h0 = halves.pop().unwrap();
        out.push(Separatrix { p: e.p, kind: e.kind, role, halves: [h0, h1] });
    }
    Ok(out)
}

/// The inward side of a center manifold is one orbit of a parabolic sector;
/// it is represented by the line through a point half a window away along
/// the center direction, traced into the singular point.
fn inward_arm(
    jet: &MongeJet,
    field: &JetField,
    origin: (f64, f64),
    toward: (f64, f64),
    window: f64,
    opts: &IntegrateOptions,
) -> Result<SeparatrixHalf> {
    let n = toward.0.hypot(toward.1);
    let (u, v) = (toward.0 / n, toward.1 / n);
    let far = (origin.0 + 0.5 * window * u, origin.1 + 0.5 * window * v);
    let dirs = directions_at(jet, far.0, far.1)?;
    let d = dirs.nearest(u, v).ok_or(Error::ZeroDirection)?;
    let start = LCState::from_slope(far.0, far.1, d.p);
    let a = integrate_lc(field, &start, 1.0, opts)?;
    let b = integrate_lc(field, &start, -1.0, opts)?;
    let end_gap = |t: &crate::lie_cartan::LCTrajectory| {
        let s = t.states.last().unwrap();
        (s.x - origin.0).hypot(s.y - origin.1)
    };
    let (inner, outer) = if end_gap(&a) <= end_gap(&b) { (a, b) } else { (b, a) };
    let mut pts = vec![origin];
    pts.extend(inner.states.iter().rev().map(|s| (s.x, s.y)));
    pts.extend(outer.states.iter().skip(1).map(|s| (s.x, s.y)));
    Ok(SeparatrixHalf { net: d.net, points: pts, stop: outer.stop, outward: false })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Portrait {
    /// Half-width of the square window centred at the origin.
    pub window: f64,
    pub class: ClassTag,
    pub separatrices: Vec<Separatrix>,
    pub lines: Vec<Polyline>,
    pub equilibria: Vec<LCEquilibrium>,
    pub axiumbilics: Vec<(f64, f64)>,
}

impl Portrait {
    pub fn separatrix_polylines(&self) -> Vec<Polyline> {
        self.separatrices
            .iter()
            .flat_map(|s| {
                s.halves.iter().map(|h| Polyline { net: h.net, kind: LineKind::Separatrix, points: h.points.clone() })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("line,kind,net,vertex,x,y\n");
        let all = self.separatrix_polylines().into_iter().chain(self.lines.iter().cloned());
        for (i, l) in all.enumerate() {
            for (k, (x, y)) in l.points.iter().enumerate() {
                out.push_str(&format!("{i},{:?},{:?},{k},{:e},{:e}\n", l.kind, l.net, x, y));
            }
        }
        out
    }
}

/// Separatrices plus `density` ring-seeded generic lines per selected net.
pub fn portrait(jet: &MongeJet, window: f64, density: usize, nets: NetSelection) -> Result<Portrait> {
    if !(window > 0.0) {
        return Err(Error::Degenerate("window must be positive".into()));
    }
    let class = classify_point(jet)?;
    let seps = separatrices(jet, window)?;
    let equilibria = line_equilibria(&JetField::new(jet), 0.0, 0.0)?;
    let axiumbilics = locate_axiumbilics(jet, (0.0, 0.0), window * std::f64::consts::SQRT_2, 41)
        .into_iter()
        .filter(|p| p.0.abs() <= window && p.1.abs() <= window)
        .collect::<Vec<_>>();
    let topts = TraceOptions {
        budget: 6.0 * window,
        h_max: window / 40.0,
        window: Some(window_box((0.0, 0.0), window)),
        stop_points: axiumbilics.clone(),
        stop_radius: window * 0.01,
    };
    let mut lines = Vec::new();
    let ring = 0.95 * window;
    for k in 0..density {
        let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / density as f64;
        let seed = (ring * ang.cos(), ring * ang.sin());
        for net in [Net::Principal, Net::Mean] {
            if !nets.includes(net) {
                continue;
            }
            for which in 0..2 {
                if let Ok(line) = trace_line(jet, seed, net, which, &topts) {
                    lines.push(Polyline { net, kind: LineKind::Generic, points: line.points });
                }
            }
        }
    }
    let separatrices = seps
        .into_iter()
        .map(|mut s| {
            for h in s.halves.iter_mut() {
                if !nets.includes(h.net) {
                    h.points.truncate(1);
                }
            }
            s
        })
        .collect();
    Ok(Portrait { window, class: class.tag, separatrices, lines, equilibria, axiumbilics })
}

/// Combinatorial summary of the separatrix structure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TopologyCensus {
    pub separatrices: usize,
    pub hyperbolic: usize,
    pub center_curves: usize,
    pub center_inward_arms: usize,
    pub center_outward_arms: usize,
    /// A saddle-node whose center manifold is the projective line itself.
    pub center_along_line: usize,
    pub cones: usize,
    pub saddles: usize,
    pub nodes: usize,
}

pub fn topology_census(jet: &MongeJet, window: f64) -> Result<TopologyCensus> {
    let seps = separatrices(jet, window)?;
    let eqs = line_equilibria(&JetField::new(jet), 0.0, 0.0)?;
    let mut c = TopologyCensus { separatrices: seps.len(), ..Default::default() };
    for s in &seps {
        match s.role {
            ManifoldRole::Hyperbolic => c.hyperbolic += 1,
            ManifoldRole::Center => {
                c.center_curves += 1;
                for h in &s.halves {
                    if h.outward {
                        c.center_outward_arms += 1;
                    } else {
                        c.center_inward_arms += 1;
                    }
                }
            }
        }
    }
    for e in &eqs {
        match e.kind {
            EquilibriumKind::Saddle => c.saddles += 1,
            EquilibriumKind::Node => c.nodes += 1,
            EquilibriumKind::MorseCone => c.cones += 1,
            EquilibriumKind::SaddleNode => {
                if manifold_role(e) == Some(ManifoldRole::Hyperbolic) {
                    c.center_along_line += 1;
                }
            }
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e5() -> MongeJet {
        MongeJet::zero().with_s(0, 2, 2.0).with_r(1, 1, -1.0).with_s(1, 2, 1.0)
    }

    #[test]
    fn axiumbilic_point_has_no_split() {
        assert!(directions_at(&e5(), 0.0, 0.0).is_err());
    }

    #[test]
    fn split_at_regular_point() {
        let d = directions_at(&e5(), 0.1, 0.0).unwrap();
        assert_eq!(d.directions.len(), 4);
        assert!(d.reliable);
        for o in &d.orthogonality {
            assert!(o.abs() < 1e-8, "{o}");
        }
    }

    #[test]
    fn zero_budget_line() {
        let opts = TraceOptions { budget: 0.0, ..Default::default() };
        let l = trace_line(&e5(), (0.1, 0.0), Net::Principal, 0, &opts).unwrap();
        assert_eq!(l.points, vec![(0.1, 0.0)]);
    }
}
