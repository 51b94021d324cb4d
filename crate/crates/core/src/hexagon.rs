//! Inscribed and circumscribed hexagons at the six contact points of a critical
//! lattice.
//!
//! The inscribed hexagon has vertices `±a, ±(a+b), ±b` and area `3Δ`. The
//! circumscribed one is bounded by the tangent lines at the same six points and
//! has area `4Δ`.

use serde::{Deserialize, Serialize};

use crate::configuration::CriticalConfiguration;
use crate::domain::LatticeBasis;
use crate::error::{Error, Result};
use crate::geometry::{normal, shoelace_area, Vec2};
use crate::lattice::contact_points;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    /// Counterclockwise; vertex `i + 3` is the antipode of vertex `i`.
    pub vertices: [Vec2; 6],
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexagonPair {
    pub inscribed_vertices: [Vec2; 6],
    pub circumscribed_vertices: [Vec2; 6],
    pub inscribed_area: f64,
    pub circumscribed_area: f64,
}

impl HexagonPair {
    pub fn new(inscribed: Hexagon, circumscribed: Hexagon) -> Self {
        HexagonPair {
            inscribed_vertices: inscribed.vertices,
            circumscribed_vertices: circumscribed.vertices,
            inscribed_area: inscribed.area,
            circumscribed_area: circumscribed.area,
        }
    }
}

/// Hexagon through the contact points of `lattice`.
pub fn inscribed_for(lattice: &LatticeBasis) -> Hexagon {
    let vertices = contact_points(lattice);
    Hexagon {
        vertices,
        area: shoelace_area(&vertices),
    }
}

/// Hexagon cut out by the tangent lines to `scale · D_p` at `contacts`, which
/// must be ordered counterclockwise.
pub fn tangent_hexagon(p: f64, contacts: &[Vec2; 6]) -> Result<Hexagon> {
    if !(p > 1.0) {
        return Err(Error::domain(format!(
            "tangent lines are not unique at the corners of D_1 (got p = {p}); the circumscribed area is 4Δ by formula only"
        )));
    }
    let normals: Vec<Vec2> = contacts.iter().map(|&c| normal(p, c)).collect();
    let mut vertices = [Vec2::ZERO; 6];
    for i in 0..6 {
        let j = (i + 1) % 6;
        let (n1, n2) = (normals[i], normals[j]);
        let (r1, r2) = (n1.dot(contacts[i]), n2.dot(contacts[j]));
        let det = n1.cross(n2);
        let scale = (n1.dot(n1) * n2.dot(n2)).sqrt();
        if det.abs() <= 1e-12 * scale {
            return Err(Error::Degenerate(format!(
                "tangents at {:?} and {:?} are parallel",
                contacts[i], contacts[j]
            )));
        }
        // Cramer's rule for n1·z = r1, n2·z = r2.
        vertices[i] = Vec2::new((r1 * n2.y - r2 * n1.y) / det, (n1.x * r2 - n2.x * r1) / det);
    }
    Ok(Hexagon {
        vertices,
        area: shoelace_area(&vertices),
    })
}

pub fn circumscribed_for(p: f64, lattice: &LatticeBasis) -> Result<Hexagon> {
    tangent_hexagon(p, &contact_points(lattice))
}

/// Minimal-area hexagon inscribed in `2^m · D_p`.
pub fn inscribed_hexagon(p: f64, m: u32) -> Result<Hexagon> {
    Ok(inscribed_for(&CriticalConfiguration::new(p, m)?.lattice))
}

/// Hexagon circumscribed about `2^m · D_p` with sides touching at the critical
/// contact points. Refuses `p = 1`.
pub fn circumscribed_hexagon(p: f64, m: u32) -> Result<Hexagon> {
    let config = CriticalConfiguration::new(p, m)?;
    circumscribed_for(p, &config.lattice)
}

pub fn hexagon_pair(p: f64, m: u32) -> Result<HexagonPair> {
    let config = CriticalConfiguration::new(p, m)?;
    Ok(HexagonPair::new(
        inscribed_for(&config.lattice),
        circumscribed_for(p, &config.lattice)?,
    ))
}
