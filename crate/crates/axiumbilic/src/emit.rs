//! Deterministic emitters: JSON with 17 significant digits, SVG portraits and
//! diagrams, classification and sweep reports.

use crate::axial_net::{LineKind, Net, Portrait};
use crate::bifurcation_family::SweepReport;
use crate::classifier::{classify_point, ClassTag, StabilityDiagram};
use crate::error::Result;
use crate::lie_cartan::{line_equilibria, JetField};
use crate::monge_surface::MongeJet;
use serde_json::{json, Map, Value};
use std::fmt::Write;

/// Pretty JSON with sorted keys and every float printed as `{:.16e}`.
pub fn json_string(v: &Value) -> String {
    let mut s = String::new();
    write_json(&mut s, v, 0);
    s.push('\n');
    s
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                out.push_str(&format!("{x:.16e}"));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_json(out, &m[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Class, normal-form data, `P` roots and the equilibrium table at the origin.
pub fn classify_report(jet: &MongeJet) -> Result<Value> {
    let c = classify_point(jet)?;
    let mut m = Map::new();
    m.insert("class".into(), json!(c.tag.to_string()));
    let ev = &c.evidence;
    for (k, v) in [("a", ev.a), ("b", ev.b), ("chi", ev.chi), ("delta", ev.delta), ("t_invariant", ev.t_invariant)] {
        if let Some(x) = v {
            m.insert(k.into(), num(x));
        }
    }
    if let Some(n) = &ev.note {
        m.insert("reason".into(), json!(n));
    }
    if c.tag == ClassTag::Degenerate {
        return Ok(Value::Object(m));
    }
    if !ev.p_roots.is_empty() {
        let roots: Vec<Value> =
            ev.p_roots.iter().map(|r| json!({"p": num(r.value), "multiplicity": r.multiplicity})).collect();
        m.insert("p_roots".into(), Value::Array(roots));
    }
    if let Ok(eqs) = line_equilibria(&JetField::new(jet), 0.0, 0.0) {
        let rows: Vec<Value> = eqs
            .iter()
            .map(|e| {
                json!({
                    "p": num(e.p),
                    "angle": num(e.angle()),
                    "kind": format!("{:?}", e.kind),
                    "multiplicity": e.multiplicity,
                    "lambda1": num(e.lambda1),
                    "lambda2": num(e.lambda2),
                })
            })
            .collect();
        m.insert("eigenvalues".into(), Value::Array(rows));
    }
    Ok(Value::Object(m))
}

pub const VIEWPORT: f64 = 800.0;
pub const SEPARATRIX_STROKE: f64 = 2.0;
pub const GENERIC_STROKE: f64 = 0.7;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (
            (p.0 - self.x.0) / (self.x.1 - self.x.0) * VIEWPORT,
            VIEWPORT - (p.1 - self.y.0) / (self.y.1 - self.y.0) * VIEWPORT,
        )
    }

    fn path(&self, pts: &[(f64, f64)]) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (u, v) = self.map(p);
            let _ = write!(d, "{}{u:.3},{v:.3}", if i == 0 { "M" } else { " L" });
        }
        d
    }
}

fn svg_open(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{VIEWPORT}\" height=\"{VIEWPORT}\" viewBox=\"0 0 {VIEWPORT} {VIEWPORT}\">"
    );
    let _ = writeln!(out, "<rect width=\"{VIEWPORT}\" height=\"{VIEWPORT}\" fill=\"white\"/>");
}

fn net_color(net: Net) -> &'static str {
    match net {
        Net::Principal => "#1f4e9c",
        Net::Mean => "#b0341e",
    }
}

/// Portrait in a y-up 800×800 viewport: one layer per net, separatrices
/// (whole, both halves joined) on top, axiumbilic points marked.
pub fn portrait_svg(p: &Portrait) -> String {
    let w = p.window;
    let fr = Frame { x: (-w, w), y: (-w, w) };
    let mut out = String::new();
    svg_open(&mut out);
    for net in [Net::Principal, Net::Mean] {
        let id = match net {
            Net::Principal => "principal",
            Net::Mean => "mean",
        };
        let _ = writeln!(
            out,
            "<g id=\"{id}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{GENERIC_STROKE:.1}\">",
            net_color(net)
        );
        for l in p.lines.iter().filter(|l| l.net == net && l.kind == LineKind::Generic) {
            let _ = writeln!(out, "<path class=\"generic\" d=\"{}\"/>", fr.path(&l.points));
        }
        out.push_str("</g>\n");
    }
    let _ = writeln!(out, "<g id=\"separatrices\" fill=\"none\" stroke=\"black\" stroke-width=\"{SEPARATRIX_STROKE:.1}\">");
    for s in &p.separatrices {
        let mut pts: Vec<(f64, f64)> = s.halves[0].points.iter().rev().copied().collect();
        pts.extend(s.halves[1].points.iter().skip(1).copied());
        let _ = writeln!(out, "<path class=\"separatrix\" data-kind=\"{:?}\" d=\"{}\"/>", s.kind, fr.path(&pts));
    }
    out.push_str("</g>\n<g id=\"axiumbilic\" fill=\"black\">\n");
    for &q in &p.axiumbilics {
        let (u, v) = fr.map(q);
        let _ = writeln!(out, "<circle cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"4\"/>");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn tag_color(tag: ClassTag) -> &'static str {
    match tag {
        ClassTag::E3 => "#f4d03f",
        ClassTag::E4 => "#85c1e9",
        ClassTag::E5 => "#82e0aa",
        ClassTag::E34_1 => "#7f8c8d",
        ClassTag::E45_1 => "#7f8c8d",
        ClassTag::Degenerate => "#2c3e50",
        ClassTag::Unclassified => "#ffffff",
    }
}

/// Stability diagram: cells coloured by class, `Δ = 0` contour, cusps and
/// `(−1, 0)` marked.
pub fn diagram_svg(d: &StabilityDiagram) -> String {
    let fr = Frame { x: d.a_range, y: d.b_range };
    let mut out = String::new();
    svg_open(&mut out);
    let na = d.cells.iter().filter(|c| c.b == d.cells[0].b).count().max(1);
    let nb = (d.cells.len() / na).max(1);
    let (cw, ch) = (VIEWPORT / na as f64, VIEWPORT / nb as f64);
    out.push_str("<g id=\"cells\" stroke=\"none\">\n");
    for c in &d.cells {
        let (u, v) = fr.map((c.a, c.b));
        let _ = writeln!(
            out,
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{cw:.3}\" height=\"{ch:.3}\" fill=\"{}\" data-tag=\"{}\"/>",
            u - cw / 2.0,
            v - ch / 2.0,
            tag_color(c.tag),
            c.tag
        );
    }
    out.push_str("</g>\n<g id=\"contour\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n");
    for seg in &d.contour {
        let _ = writeln!(out, "<path d=\"{}\"/>", fr.path(seg));
    }
    out.push_str("</g>\n<g id=\"marks\">\n");
    for &c in &d.cusps {
        let (u, v) = fr.map(c);
        let _ = writeln!(out, "<circle class=\"cusp\" cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"5\" fill=\"red\"/>");
    }
    let (u, v) = fr.map(d.special);
    let _ = writeln!(out, "<circle class=\"special\" cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"5\" fill=\"purple\"/>");
    out.push_str("</g>\n</svg>\n");
    out
}

/// Event log of a sweep.
pub fn events_json(report: &SweepReport) -> Value {
    json!({
        "events": serde_json::to_value(&report.locus.events).unwrap_or(Value::Null),
        "stall": serde_json::to_value(&report.locus.stall).unwrap_or(Value::Null),
        "locus_nodes": report.locus.nodes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = json_string(&json!({"b": 0.1, "a": 1}));
        assert_eq!(s, "{\n  \"a\": 1,\n  \"b\": 1.0000000000000001e-1\n}\n");
    }

    #[test]
    fn zero_jet_report() {
        let v = classify_report(&MongeJet::zero()).unwrap();
        assert_eq!(v, json!({"class": "Degenerate", "reason": "r=s=0"}));
    }
}
