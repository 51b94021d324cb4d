//! Deterministic SVG figures: the optimal packing, the extremal hexagons and
//! the moduli curve.
//!
//! All coordinates go through [`num`], so identical inputs give byte-identical
//! files.

use std::fmt::Write as _;

use crate::configuration::CriticalConfiguration;
use crate::domain::{dyadic, Branch};
use crate::error::{Error, Result};
use crate::geometry::{boundary_points, Vec2};
use crate::hexagon::{circumscribed_for, inscribed_for};
use crate::lattice::{contact_points, enumerate_points};
use crate::moduli::moduli_curve;
use crate::solvers::DEFAULT_ROOT_TOL;

const BOUNDARY_SAMPLES: usize = 192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Packing,
    Hexagons,
    Moduli,
}

impl std::str::FromStr for RenderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "packing" => Ok(RenderKind::Packing),
            "hexagons" => Ok(RenderKind::Hexagons),
            "moduli" => Ok(RenderKind::Moduli),
            other => Err(Error::domain(format!("unknown figure '{other}'"))),
        }
    }
}

pub fn render(kind: RenderKind, p: f64, m: u32) -> Result<String> {
    match kind {
        RenderKind::Packing => render_packing(p, m),
        RenderKind::Hexagons => render_hexagons(p, m),
        RenderKind::Moduli => render_moduli(p, m),
    }
}

/// Fixed four-decimal formatting with negative zero folded to zero.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.0000".to_string()
    } else {
        s
    }
}

fn header(min: f64, size: f64, out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="640" height="640">"#,
        num(min),
        num(min),
        num(size),
        num(size)
    );
}

fn polygon_path(points: &[Vec2]) -> String {
    let mut d = String::new();
    for (i, v) in points.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(v.x), num(v.y));
    }
    d.push_str(" Z");
    d
}

fn dot(out: &mut String, v: Vec2, r: f64, fill: &str) {
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
        num(v.x),
        num(v.y),
        num(r)
    );
}

/// Translates of `2^m · D_p` on the optimal packing lattice inside the window
/// `[-4·2^m, 4·2^m]²`, with the six contact points of the central ball.
pub fn render_packing(p: f64, m: u32) -> Result<String> {
    let config = CriticalConfiguration::new(p, m)?;
    let lattice = config.doubled()?.lattice;
    let k = dyadic(m);
    let window = 4.0 * k;
    let ball = boundary_points(p, k, BOUNDARY_SAMPLES);

    let mut centres = vec![Vec2::ZERO];
    centres.extend(enumerate_points(&lattice, window + k)?);

    let mut out = String::new();
    header(-window, 2.0 * window, &mut out);
    let _ = writeln!(
        out,
        "<!-- optimal lattice packing of 2^{m} D_p, p = {}, density = {} -->",
        num(p),
        num(crate::packing::packing_report(&config, &Default::default())?.density)
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="{}">"#, num(0.02 * k));
    for c in &centres {
        let shifted: Vec<Vec2> = ball.iter().map(|&b| b + *c).collect();
        let fill = if *c == Vec2::ZERO { "#f4a261" } else { "#a8dadc" };
        let _ = writeln!(out, r##"<path d="{}" fill="{fill}" stroke="#1d3557"/>"##, polygon_path(&shifted));
    }
    for c in contact_points(&lattice) {
        dot(&mut out, c.scale(0.5), 0.05 * k, "#e63946");
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// `2^m · D_p` with its inscribed and circumscribed hexagons. At `p = 1` the
/// circumscribed hexagon is omitted with a note.
pub fn render_hexagons(p: f64, m: u32) -> Result<String> {
    let config = CriticalConfiguration::new(p, m)?;
    let k = dyadic(m);
    let inscribed = inscribed_for(&config.lattice);
    let circumscribed = if p > 1.0 {
        Some(circumscribed_for(p, &config.lattice)?)
    } else {
        None
    };
    let extent = circumscribed
        .map(|h| h.vertices.iter().map(|v| v.sup_norm()).fold(k, f64::max))
        .unwrap_or(k)
        * 1.15;

    let mut out = String::new();
    header(-extent, 2.0 * extent, &mut out);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="{}" fill="none">"#, num(0.01 * extent));
    let _ = writeln!(
        out,
        r##"<path d="{}" stroke="#1d3557"/>"##,
        polygon_path(&boundary_points(p, k, BOUNDARY_SAMPLES))
    );
    let _ = writeln!(out, r##"<path d="{}" stroke="#2a9d8f"/>"##, polygon_path(&inscribed.vertices));
    if let Some(h) = &circumscribed {
        let _ = writeln!(out, r##"<path d="{}" stroke="#e63946"/>"##, polygon_path(&h.vertices));
    }
    for v in inscribed.vertices {
        dot(&mut out, v, 0.015 * extent, "#264653");
    }
    out.push_str("</g>\n");
    let font = num(0.045 * extent);
    let x = num(-0.95 * extent);
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{}" font-size="{font}">inscribed area {}</text>"#,
        num(-0.88 * extent),
        num(inscribed.area)
    );
    let note = match &circumscribed {
        Some(h) => format!("circumscribed area {}", num(h.area)),
        None => "circumscribed hexagon omitted: tangents at the corners of D_1 are not unique".to_string(),
    };
    let _ = writeln!(out, r#"<text x="{x}" y="{}" font-size="{font}">{note}</text>"#, num(-0.80 * extent));
    out.push_str("</svg>\n");
    Ok(out)
}

/// The moduli curve `σ ↦ Δ(p, σ)` on `[1, σ_p]` (scaled by `4^m`), with both
/// branch endpoints and the sampled minimum marked.
pub fn render_moduli(p: f64, m: u32) -> Result<String> {
    let config = CriticalConfiguration::new(p, m)?;
    let scale = 4f64.powi(m as i32);
    let curve = moduli_curve(p, 201, DEFAULT_ROOT_TOL)?;
    let pts: Vec<Vec2> = curve.iter().map(|c| Vec2::new(c.sigma, scale * c.delta)).collect();

    let (w, h, margin) = (640.0, 400.0, 50.0);
    let (x0, x1) = (pts[0].x, pts[pts.len() - 1].x);
    let (mut y0, mut y1) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.y), hi.max(v.y)));
    let pad = ((y1 - y0) * 0.1).max(1e-6 * y1.abs());
    y0 -= pad;
    y1 += pad;
    let xspan = (x1 - x0).max(1e-9);
    let map = |v: Vec2| {
        Vec2::new(
            margin + (v.x - x0) / xspan * (w - 2.0 * margin),
            h - margin - (v.y - y0) / (y1 - y0) * (h - 2.0 * margin),
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#
    );
    let mut d = String::new();
    for (i, v) in pts.iter().enumerate() {
        let s = map(*v);
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(s.x), num(s.y));
    }
    let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#1d3557" stroke-width="2"/>"##);

    let left = map(pts[0]);
    let right = map(pts[pts.len() - 1]);
    dot(&mut out, left, 5.0, if config.branch == Branch::Delta1 { "#e63946" } else { "#457b9d" });
    dot(&mut out, right, 5.0, if config.branch == Branch::Delta0 { "#e63946" } else { "#457b9d" });

    // Index-ordered argmin of the sampled curve.
    let argmin = pts
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if v.y < pts[best].y { i } else { best });
    let min = map(pts[argmin]);
    let _ = writeln!(
        out,
        r##"<path d="M{} {} l-7 -12 l14 0 Z" fill="#2a9d8f" id="minimum" data-sigma="{}"/>"##,
        num(min.x),
        num(min.y - 6.0),
        num(pts[argmin].x)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12">sigma = 1, Delta(p,1) = {}</text>"#,
        num(margin),
        num(h - 15.0),
        num(scale * config.constants.delta1)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="end">sigma_p = {}, Delta(p,sigma_p) = {}</text>"#,
        num(w - margin),
        num(h - 15.0),
        num(config.constants.sigma_p),
        num(scale * config.constants.delta0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" font-size="14">moduli curve, p = {}, m = {m}</text>"#,
        num(margin),
        num(p)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

/// σ of the minimum marker in a moduli figure.
pub fn moduli_marker_sigma(svg: &str) -> Option<f64> {
    let start = svg.find(r#"id="minimum" data-sigma=""#)? + r#"id="minimum" data-sigma=""#.len();
    let end = svg[start..].find('"')? + start;
    svg[start..end].parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::sigma_p;

    #[test]
    fn packing_figure() {
        let svg = render_packing(2.0, 0).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"viewBox="-4.0000 -4.0000 8.0000 8.0000""#));
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg, render_packing(2.0, 0).unwrap());
        let svg = render_packing(1.5, 2).unwrap();
        assert!(svg.contains(r#"viewBox="-16.0000 -16.0000 32.0000 32.0000""#));
    }

    #[test]
    fn hexagon_figure_diamond_note() {
        let svg = render_hexagons(1.0, 0).unwrap();
        assert!(svg.contains("circumscribed hexagon omitted"));
        assert_eq!(svg.matches("<path").count(), 2);
        let svg = render_hexagons(2.0, 0).unwrap();
        assert_eq!(svg.matches("<path").count(), 3);
    }

    #[test]
    fn moduli_marker_for_davis_exponent() {
        let svg = render_moduli(2.3, 0).unwrap();
        let sigma = moduli_marker_sigma(&svg).unwrap();
        assert!((sigma - sigma_p(2.3)).abs() < 1e-4);
        let svg = render_moduli(3.0, 0).unwrap();
        assert!((moduli_marker_sigma(&svg).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn num_folds_negative_zero() {
        assert_eq!(num(-0.00001), "0.0000");
        assert_eq!(num(-1.5), "-1.5000");
    }
}
