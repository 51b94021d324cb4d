//! Direct systems of dilated balls and critical lattices over the dyadic levels
//! `0 ≤ 1 ≤ 2 ≤ …`, with doubling as the transition map.
//!
//! The direct limit of `D_p → 2D_p → 4D_p → …` is modeled by what is computable
//! about it: every point of the plane is eventually contained, and the
//! smallest containing level is well defined.

use serde::{Deserialize, Serialize};

use crate::domain::{check_exponent, dyadic, BallSpec, LatticeBasis};
use crate::error::{Error, Result};
use crate::geometry::{gauge, Vec2};
use crate::lattice::{critical_lattice, CriticalLatticeKind};
use crate::solvers::CriticalConstants;

/// A level of the directed set `ℕ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicLevel(pub u32);

impl DyadicLevel {
    /// Any two levels are bounded above by their maximum.
    pub fn upper_bound(self, other: DyadicLevel) -> DyadicLevel {
        self.max(other)
    }

    pub fn scale(self) -> f64 {
        dyadic(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    /// `D_p → 2 D_p → 2² D_p → …`
    Balls,
    /// `Λ_p → 2 Λ_p → 2² Λ_p → …`
    Lattices,
}

/// A direct system whose transition `π_m^n` multiplies by `2^{n-m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSystem {
    pub kind: SystemKind,
    pub p: f64,
}

impl DirectSystem {
    pub fn new(kind: SystemKind, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(DirectSystem { kind, p })
    }

    fn factor(from: DyadicLevel, to: DyadicLevel) -> Result<f64> {
        if from > to {
            return Err(Error::OrderViolation { from: from.0, to: to.0 });
        }
        Ok(dyadic(to.0 - from.0))
    }

    /// `π_m^n(point) = 2^{n-m} · point`.
    pub fn transition(&self, from: DyadicLevel, to: DyadicLevel, point: Vec2) -> Result<Vec2> {
        Ok(point.scale(Self::factor(from, to)?))
    }

    /// The transition applied to a lattice basis (the group homomorphism `x ↦ 2^{n-m} x`).
    pub fn transition_basis(&self, from: DyadicLevel, to: DyadicLevel, basis: &LatticeBasis) -> Result<LatticeBasis> {
        basis.scaled(Self::factor(from, to)?)
    }

    /// The object at `level`, as the ball it names.
    pub fn ball(&self, level: DyadicLevel) -> BallSpec {
        BallSpec::new(self.p, level.0).expect("validated exponent")
    }

    /// Check `π_m^m = id` and `π_n^k ∘ π_m^n = π_m^k` on `points`, bitwise.
    pub fn check_functor_laws(&self, m: DyadicLevel, n: DyadicLevel, k: DyadicLevel, points: &[Vec2]) -> Result<bool> {
        for &z in points {
            if self.transition(m, m, z)? != z {
                return Ok(false);
            }
            let composite = self.transition(n, k, self.transition(m, n, z)?)?;
            if composite != self.transition(m, k, z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub level: u32,
}

fn contained(p: f64, point: Vec2, level: u32) -> bool {
    crate::geometry::power_sum(p, point.scale(1.0 / dyadic(level))) <= 1.0
}

/// Smallest level `m` with `point ∈ 2^m · D_p`.
///
/// Starts from `⌈log₂ gauge⌉` and then corrects against the direct containment
/// test, so the answer is minimal with respect to that test.
pub fn limit_membership(p: f64, point: Vec2) -> Result<Membership> {
    check_exponent(p)?;
    if !point.is_finite() {
        return Err(Error::domain("point must be finite"));
    }
    let g = gauge(p, point);
    let mut level = if g <= 1.0 { 0 } else { g.log2().ceil().max(0.0) as u32 };
    while !contained(p, point, level) {
        level += 1;
    }
    while level > 0 && contained(p, point, level - 1) {
        level -= 1;
    }
    Ok(Membership { member: true, level })
}

/// Smallest level among the multiples of `stride` (a cofinal subsystem) containing `point`.
pub fn limit_membership_cofinal(p: f64, point: Vec2, stride: u32) -> Result<Membership> {
    if stride == 0 {
        return Err(Error::domain("stride must be positive"));
    }
    let full = limit_membership(p, point)?;
    let level = full.level.div_ceil(stride) * stride;
    Ok(Membership { member: true, level })
}

/// `[Λ, 2Λ, …, 2^depth Λ]` for the critical lattice of the given kind.
pub fn lattice_chain(
    p: f64,
    kind: CriticalLatticeKind,
    depth: u32,
    constants: &CriticalConstants,
) -> Result<Vec<LatticeBasis>> {
    if depth < 1 {
        return Err(Error::domain("chain depth must be at least 1"));
    }
    let system = DirectSystem::new(SystemKind::Lattices, p)?;
    let base = critical_lattice(p, kind, 0, constants)?;
    let mut chain = vec![base];
    for level in 1..=depth {
        let prev = chain[level as usize - 1];
        chain.push(system.transition_basis(DyadicLevel(level - 1), DyadicLevel(level), &prev)?);
    }
    Ok(chain)
}

/// Index of `sub` in `sup` as a subgroup, `det(sub) / det(sup)`.
///
/// For `2Λ ⊂ Λ` in the plane this is 4, although the doubling step is often
/// described as passing to a sublattice "of index two".
pub fn subgroup_index(sub: &LatticeBasis, sup: &LatticeBasis) -> f64 {
    sub.det() / sup.det()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::admissibility_check;
    use approx::assert_abs_diff_eq;

    #[test]
    fn transition_examples() {
        let s = DirectSystem::new(SystemKind::Balls, 2.0).unwrap();
        let z = Vec2::new(0.3, -1.25);
        assert_eq!(s.transition(DyadicLevel(0), DyadicLevel(0), z).unwrap(), z);
        assert_eq!(
            s.transition(DyadicLevel(1), DyadicLevel(3), Vec2::new(1.0, 0.0)).unwrap(),
            Vec2::new(4.0, 0.0)
        );
        let two_step = s
            .transition(DyadicLevel(1), DyadicLevel(2), s.transition(DyadicLevel(0), DyadicLevel(1), z).unwrap())
            .unwrap();
        assert_eq!(two_step, s.transition(DyadicLevel(0), DyadicLevel(2), z).unwrap());
    }

    #[test]
    fn transition_rejects_reverse_order() {
        let s = DirectSystem::new(SystemKind::Balls, 2.0).unwrap();
        let err = s.transition(DyadicLevel(3), DyadicLevel(1), Vec2::ZERO).unwrap_err();
        assert_eq!(err, Error::OrderViolation { from: 3, to: 1 });
    }

    #[test]
    fn membership_examples() {
        assert_eq!(limit_membership(2.0, Vec2::ZERO).unwrap(), Membership { member: true, level: 0 });
        assert_eq!(limit_membership(2.0, Vec2::new(3.0, 0.0)).unwrap().level, 2);
        assert_eq!(limit_membership(1.0, Vec2::new(1.0, 1.0)).unwrap().level, 1);
        // exactly on the boundary of 2 D_2
        assert_eq!(limit_membership(2.0, Vec2::new(2.0, 0.0)).unwrap().level, 1);
        assert_eq!(limit_membership_cofinal(2.0, Vec2::new(3.0, 0.0), 2).unwrap().level, 2);
        assert_eq!(limit_membership_cofinal(2.0, Vec2::new(1.5, 0.0), 2).unwrap().level, 2);
    }

    #[test]
    fn chain_determinants_and_sublattices() {
        let c = CriticalConstants::with_default_tol(2.0).unwrap();
        let chain = lattice_chain(2.0, CriticalLatticeKind::Lambda0, 2, &c).unwrap();
        let s3 = 3f64.sqrt();
        assert_abs_diff_eq!(chain[0].det(), s3 / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(chain[1].det(), 2.0 * s3, epsilon = 1e-14);
        assert_abs_diff_eq!(chain[2].det(), 8.0 * s3, epsilon = 1e-13);
        for m in 1..chain.len() {
            assert!(chain[m - 1].contains_lattice(&chain[m], 1e-9));
            assert!(!chain[m].contains_lattice(&chain[m - 1], 1e-9));
            assert_abs_diff_eq!(subgroup_index(&chain[m], &chain[m - 1]), 4.0, epsilon = 1e-12);
            let spec = BallSpec::new(2.0, m as u32).unwrap();
            let adm = admissibility_check(&chain[m], &spec, 1e-9).unwrap();
            assert!(adm.is_admissible && adm.boundary_pairs == 3);
        }
    }

    #[test]
    fn chain_needs_depth() {
        let c = CriticalConstants::with_default_tol(2.0).unwrap();
        assert!(lattice_chain(2.0, CriticalLatticeKind::Lambda0, 0, &c).is_err());
    }
}
