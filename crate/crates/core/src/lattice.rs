//! Construction of the two critical lattices and their dilates, lattice point
//! enumeration, and admissibility / boundary-contact checks.

use serde::{Deserialize, Serialize};

use crate::domain::{check_exponent, dyadic, BallSpec, Branch, LatticeBasis};
use crate::error::{Error, Result};
use crate::geometry::{power_sum, Vec2};
use crate::solvers::CriticalConstants;

pub const DEFAULT_CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalLatticeKind {
    /// Contains `(1, 0)`; moduli point `(τ, σ) = (0, σ_p)`.
    Lambda0,
    /// Contains `(-2^{-1/p}, 2^{-1/p})`; moduli point `(τ, σ) = (τ_p, 1)`.
    Lambda1,
}

impl CriticalLatticeKind {
    pub fn for_branch(branch: Branch) -> Self {
        match branch {
            Branch::Delta0 => CriticalLatticeKind::Lambda0,
            Branch::Delta1 => CriticalLatticeKind::Lambda1,
        }
    }

    pub fn branch(&self) -> Branch {
        match self {
            CriticalLatticeKind::Lambda0 => Branch::Delta0,
            CriticalLatticeKind::Lambda1 => Branch::Delta1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CriticalLatticeKind::Lambda0 => "Lambda0",
            CriticalLatticeKind::Lambda1 => "Lambda1",
        }
    }
}

/// `(1 + t^p)^{-1/p}`
fn normalizer(p: f64, t: f64) -> f64 {
    (1.0 + t.powf(p)).powf(-1.0 / p)
}

/// The lattice with basis
/// `a = 2^m (1, τ)(1 + τ^p)^{-1/p}`, `b = 2^m (-1, σ)(1 + σ^p)^{-1/p}`.
///
/// Both basis vectors lie on the boundary of `2^m · D_p`.
pub fn build_lattice(p: f64, tau: f64, sigma: f64, m: u32) -> Result<LatticeBasis> {
    check_exponent(p)?;
    if !(tau >= 0.0 && tau < sigma) {
        return Err(Error::domain(format!("need 0 ≤ τ < σ (got τ = {tau}, σ = {sigma})")));
    }
    let na = normalizer(p, tau);
    let nb = normalizer(p, sigma);
    let a = Vec2::new(na, tau * na);
    let b = Vec2::new(-nb, sigma * nb);
    let k = dyadic(m);
    LatticeBasis::new(a.scale(k), b.scale(k))
}

/// The critical lattice of the given kind, dilated to `2^m · D_p` (its
/// sublattice `2^m Λ`).
pub fn critical_lattice(
    p: f64,
    kind: CriticalLatticeKind,
    m: u32,
    constants: &CriticalConstants,
) -> Result<LatticeBasis> {
    if constants.p != p {
        return Err(Error::domain(format!(
            "constants computed for p = {} used with p = {p}",
            constants.p
        )));
    }
    match kind {
        CriticalLatticeKind::Lambda0 => build_lattice(p, 0.0, constants.sigma_p, m),
        CriticalLatticeKind::Lambda1 => build_lattice(p, constants.tau_p, 1.0, m),
    }
}

/// All nonzero lattice points with sup-norm at most `radius`.
///
/// Integer coordinates are bounded by `‖B⁻¹‖_∞ · radius + 1`, which covers every
/// point of the sup-norm ball.
pub fn enumerate_points(basis: &LatticeBasis, radius: f64) -> Result<Vec<Vec2>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(format!("radius must be positive (got {radius})")));
    }
    let scale = basis.a().sup_norm().max(basis.b().sup_norm());
    if basis.det() <= 1e-14 * scale * scale {
        return Err(Error::Degenerate("lattice basis has vanishing determinant".into()));
    }
    let bound = (basis.inverse_row_sum_norm() * radius).floor() as i64 + 1;
    let mut points = Vec::new();
    for u in -bound..=bound {
        for v in -bound..=bound {
            if u == 0 && v == 0 {
                continue;
            }
            let z = basis.point(u, v);
            if z.sup_norm() <= radius {
                points.push(z);
            }
        }
    }
    Ok(points)
}

/// The six points `±a, ±(a+b), ±b`, counterclockwise by angle starting from the
/// one with the smallest nonnegative argument.
pub fn contact_points(basis: &LatticeBasis) -> [Vec2; 6] {
    let (a, b) = (basis.a(), basis.b());
    let mut pts = [a, a + b, b, -a, -(a + b), -b];
    let angle = |v: &Vec2| {
        let t = v.y.atan2(v.x);
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    };
    pts.sort_by(|l, r| angle(l).total_cmp(&angle(r)));
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub is_admissible: bool,
    /// Antipodal pairs of lattice points on the boundary.
    pub boundary_pairs: usize,
    /// Smallest `|x|^p + |y|^p` over the rescaled nonzero lattice points.
    pub min_power_sum: f64,
}

/// Check that no nonzero lattice point lies inside `2^m · D_p` and count the
/// antipodal pairs on its boundary.
///
/// `tol` is relative to the boundary value 1 of the rescaled power sum.
pub fn admissibility_check(basis: &LatticeBasis, spec: &BallSpec, tol: f64) -> Result<Admissibility> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let k = spec.scale();
    // Interior points have sup-norm below 2^m; the margin also sees near-contacts.
    let points = enumerate_points(basis, 2.0 * k)?;
    let mut min_power_sum = f64::INFINITY;
    let mut on_boundary = 0;
    for z in points {
        let s = power_sum(spec.p(), z.scale(1.0 / k));
        min_power_sum = min_power_sum.min(s);
        if (s - 1.0).abs() <= tol {
            on_boundary += 1;
        }
    }
    Ok(Admissibility {
        is_admissible: min_power_sum >= 1.0 - tol,
        boundary_pairs: on_boundary / 2,
        min_power_sum,
    })
}
