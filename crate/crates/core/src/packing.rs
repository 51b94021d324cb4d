//! Ball areas, optimal lattice-packing densities and non-overlap verification.
//!
//! Translates `λ + K` of a centrally symmetric convex body `K` by a lattice have
//! disjoint interiors iff no nonzero lattice point lies in the interior of
//! `2K`. The densest lattice packing of `2^m · D_p` therefore uses the critical
//! lattice of `2^{m+1} · D_p`, with density `V(2^m D_p) / (4 Δ(2^m D_p))`.

use crate::configuration::{CriticalConfiguration, Tolerances};
use crate::domain::{check_exponent, dyadic, BallSpec, LatticeBasis, PackingReport};
use crate::error::{Error, Result};
use crate::geometry::{boundary_points, power_sum};
use crate::lattice::{admissibility_check, enumerate_points};
use crate::numeric::adaptive_simpson;

/// Area of `D_p`.
///
/// By the `x ↔ y` symmetry the quarter area is `2∫₀^c (1 - x^p)^{1/p} dx - c²`
/// with `c = 2^{-1/p}`, which keeps the integrand away from the vertical
/// tangent at `x = 1`.
pub fn unit_ball_area(p: f64, quad_tol: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(quad_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    let c = 2f64.powf(-1.0 / p);
    let integral = adaptive_simpson(|x| (1.0 - x.powf(p)).max(0.0).powf(1.0 / p), 0.0, c, quad_tol / 8.0)?;
    Ok(4.0 * (2.0 * integral - c * c))
}

/// Area of `2^m · D_p`; the quadrature error of the unit area is below
/// `quad_tol` and scales by `4^m`.
pub fn ball_area(p: f64, m: u32, quad_tol: f64) -> Result<f64> {
    let k = dyadic(m);
    Ok(k * k * unit_ball_area(p, quad_tol)?)
}

/// Optimal lattice-packing density of `2^m · D_p` with default tolerances.
pub fn packing_density(p: f64, m: u32) -> Result<PackingReport> {
    packing_density_with(p, m, &Tolerances::default())
}

pub fn packing_density_with(p: f64, m: u32, tol: &Tolerances) -> Result<PackingReport> {
    let config = CriticalConfiguration::with_tolerances(p, m, tol)?;
    packing_report(&config, tol)
}

/// Packing report for an already computed configuration.
pub fn packing_report(config: &CriticalConfiguration, tol: &Tolerances) -> Result<PackingReport> {
    let spec = config.spec;
    let area = ball_area(spec.p(), spec.m(), tol.quadrature)?;
    let packing = config.doubled()?;
    let lattice = packing.lattice;
    let adm = admissibility_check(&lattice, &packing.spec, tol.contact)?;
    Ok(PackingReport {
        spec,
        class: config.class,
        branch: config.branch,
        critical_determinant: config.critical_determinant,
        area,
        density: area / lattice.det(),
        lattice,
        verified_admissible: adm.is_admissible,
        boundary_pairs: adm.boundary_pairs,
    })
}

/// Whether translates of `2^m · D_p` by `lattice` have pairwise disjoint
/// interiors.
///
/// Checked twice: no nonzero lattice point lies in the interior of
/// `2^{m+1} · D_p`, and no sampled boundary point of a neighbouring translate
/// falls inside `2^m · D_p`.
pub fn verify_packing_lattice(lattice: &LatticeBasis, spec: &BallSpec, samples: usize, tol: f64) -> Result<bool> {
    if samples < 10 {
        return Err(Error::domain(format!("need at least 10 boundary samples (got {samples})")));
    }
    let p = spec.p();
    let k = spec.scale();
    let neighbours = enumerate_points(lattice, 2.0 * k * (1.0 + 1e-6))?;

    let membership_ok = neighbours
        .iter()
        .all(|&z| power_sum(p, z.scale(0.5 / k)) >= 1.0 - tol);

    let boundary = boundary_points(p, k, samples);
    let sampling_ok = neighbours.iter().all(|&z| {
        boundary
            .iter()
            .all(|&s| power_sum(p, (z + s).scale(1.0 / k)) >= 1.0 - tol)
    });

    Ok(membership_ok && sampling_ok)
}

/// Non-overlap of the optimal packing of `2^m · D_p`.
pub fn verify_nonoverlap(p: f64, m: u32, samples: usize) -> Result<bool> {
    let tol = Tolerances::default();
    let config = CriticalConfiguration::with_tolerances(p, m, &tol)?;
    let packing = config.doubled()?;
    verify_packing_lattice(&packing.lattice, &config.spec, samples, tol.contact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn areas() {
        assert_abs_diff_eq!(ball_area(2.0, 0, 1e-12).unwrap(), PI, epsilon = 1e-11);
        assert_abs_diff_eq!(ball_area(1.0, 0, 1e-12).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ball_area(2.0, 1, 1e-12).unwrap(), 4.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn area_rejects_bad_input() {
        assert!(ball_area(0.5, 0, 1e-12).is_err());
        assert!(ball_area(2.0, 0, 0.0).is_err());
    }

    #[test]
    fn densities() {
        let r = packing_density(2.0, 0).unwrap();
        assert_abs_diff_eq!(r.density, PI / 12f64.sqrt(), epsilon = 1e-9);
        assert!(r.verified_admissible);
        assert_eq!(r.boundary_pairs, 3);

        let r = packing_density(1.0, 0).unwrap();
        assert_abs_diff_eq!(r.density, 1.0, epsilon = 1e-10);

        let base = packing_density(2.7, 0).unwrap().density;
        for m in 1..4 {
            assert_abs_diff_eq!(packing_density(2.7, m).unwrap().density, base, epsilon = 1e-12);
        }
    }

    #[test]
    fn nonoverlap() {
        assert!(verify_nonoverlap(2.0, 0, 1000).unwrap());
        assert!(verify_nonoverlap(1.5, 2, 1000).unwrap());

        let config = CriticalConfiguration::new(2.0, 0).unwrap();
        let shrunk = config.doubled().unwrap().lattice.scaled(0.99).unwrap();
        assert!(!verify_packing_lattice(&shrunk, &config.spec, 1000, 1e-9).unwrap());
    }

    #[test]
    fn nonoverlap_needs_samples() {
        let config = CriticalConfiguration::new(2.0, 0).unwrap();
        assert!(verify_packing_lattice(&config.lattice, &config.spec, 5, 1e-9).is_err());
    }
}
