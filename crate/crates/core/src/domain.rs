//! Value types shared by every computation, and the three-way classification of
//! the domains `2^m · D_p` by their exponent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p must be ≥ 1 (got {p})")))
    }
}

/// The domain `2^m · D_p` with `D_p = { |x|^p + |y|^p ≤ 1 }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    p: f64,
    m: u32,
}

impl BallSpec {
    pub fn new(p: f64, m: u32) -> Result<Self> {
        check_exponent(p)?;
        Ok(BallSpec { p, m })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The dilation factor `2^m`.
    pub fn scale(&self) -> f64 {
        dyadic(self.m)
    }

    /// Whether `v` lies in the closed domain.
    pub fn contains(&self, v: Vec2) -> bool {
        crate::geometry::power_sum(self.p, v.scale(1.0 / self.scale())) <= 1.0
    }

    /// The same ball one dilation level up, `2^{m+1} · D_p`.
    pub fn doubled(&self) -> BallSpec {
        BallSpec {
            p: self.p,
            m: self.m + 1,
        }
    }

    pub fn class(&self, davis_constant: f64) -> DomainClass {
        // p is validated at construction.
        classify(self.p, davis_constant).expect("validated exponent")
    }
}

/// `2^m` as an exact power of two.
pub fn dyadic(m: u32) -> f64 {
    2f64.powi(m as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainClass {
    /// `1 ≤ p < 2`
    Minkowski,
    /// `2 ≤ p < p₀`
    Davis,
    /// `p ≥ p₀`
    ChebyshevCohn,
}

impl DomainClass {
    pub fn name(&self) -> &'static str {
        match self {
            DomainClass::Minkowski => "Minkowski",
            DomainClass::Davis => "Davis",
            DomainClass::ChebyshevCohn => "ChebyshevCohn",
        }
    }
}

impl fmt::Display for DomainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classify `D_p` by its exponent.
///
/// The ranges are half-open: `p = 2` is Davis and `p = p₀` is Chebyshev–Cohn.
/// The two critical-determinant branches agree at both boundaries.
pub fn classify(p: f64, davis_constant: f64) -> Result<DomainClass> {
    check_exponent(p)?;
    if !(davis_constant > 2.57 && davis_constant < 2.58) {
        return Err(Error::domain(format!(
            "Davis constant must lie in (2.57, 2.58) (got {davis_constant})"
        )));
    }
    Ok(if p < 2.0 {
        DomainClass::Minkowski
    } else if p < davis_constant {
        DomainClass::Davis
    } else {
        DomainClass::ChebyshevCohn
    })
}

/// Which closed form gives the critical determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `Δ(p, σ_p) = 2^{2m-1} σ_p`, realized by the lattice through `(1, 0)`.
    Delta0,
    /// `Δ(p, 1) = 4^{m-1/p} (1 + τ_p) / (1 - τ_p)`, realized by the lattice
    /// through `(-2^{-1/p}, 2^{-1/p})`.
    Delta1,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Delta0 => "Delta0",
            Branch::Delta1 => "Delta1",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A planar lattice given by two basis vectors.
///
/// The determinant is always recomputed from the vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    a: Vec2,
    b: Vec2,
}

impl LatticeBasis {
    pub fn new(a: Vec2, b: Vec2) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Degenerate("non-finite basis vector".into()));
        }
        let det = a.cross(b).abs();
        let scale = a.sup_norm().max(b.sup_norm());
        if det == 0.0 || det <= 1e-14 * scale * scale {
            return Err(Error::Degenerate(format!(
                "basis {a:?}, {b:?} has determinant {det:e}"
            )));
        }
        Ok(LatticeBasis { a, b })
    }

    pub fn a(&self) -> Vec2 {
        self.a
    }

    pub fn b(&self) -> Vec2 {
        self.b
    }

    /// `|a_x b_y - a_y b_x|`
    pub fn det(&self) -> f64 {
        self.a.cross(self.b).abs()
    }

    pub fn point(&self, u: i64, v: i64) -> Vec2 {
        self.a.scale(u as f64) + self.b.scale(v as f64)
    }

    /// Both basis vectors multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<LatticeBasis> {
        LatticeBasis::new(self.a.scale(k), self.b.scale(k))
    }

    /// Real coordinates `(u, v)` with `u·a + v·b = z`.
    pub fn coordinates(&self, z: Vec2) -> Vec2 {
        let d = self.a.cross(self.b);
        Vec2::new(z.cross(self.b) / d, self.a.cross(z) / d)
    }

    /// Whether `z` is a lattice point, allowing `tol` deviation in each integer coordinate.
    pub fn contains(&self, z: Vec2, tol: f64) -> bool {
        let c = self.coordinates(z);
        (c.x - c.x.round()).abs() <= tol && (c.y - c.y.round()).abs() <= tol
    }

    /// Whether every vector of `other` is a point of this lattice.
    pub fn contains_lattice(&self, other: &LatticeBasis, tol: f64) -> bool {
        self.contains(other.a, tol) && self.contains(other.b, tol)
    }

    /// Row-sum norm of the inverse of the matrix with columns `a`, `b`.
    pub fn inverse_row_sum_norm(&self) -> f64 {
        let d = self.a.cross(self.b).abs();
        let row0 = self.b.y.abs() + self.b.x.abs();
        let row1 = self.a.y.abs() + self.a.x.abs();
        row0.max(row1) / d
    }
}

/// A point `(τ, σ)` of the Minkowski–Cohn moduli space together with its
/// determinant `Δ(p, σ) = (τ + σ)(1 + τ^p)^{-1/p}(1 + σ^p)^{-1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub p: f64,
    pub sigma: f64,
    pub tau: f64,
    pub delta: f64,
}

/// Optimal packing summary for one domain `2^m · D_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub spec: BallSpec,
    pub class: DomainClass,
    pub branch: Branch,
    pub critical_determinant: f64,
    /// Area of `2^m · D_p`.
    pub area: f64,
    pub density: f64,
    /// The packing lattice (critical for the doubled domain).
    pub lattice: LatticeBasis,
    /// Admissibility of the packing lattice for the doubled domain.
    pub verified_admissible: bool,
    /// Antipodal contact pairs of the packing lattice on the doubled domain's boundary.
    pub boundary_pairs: usize,
}
