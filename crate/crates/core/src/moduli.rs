//! Brute-force minimization of the lattice determinant over the Minkowski–Cohn
//! moduli space.
//!
//! Admissible lattices of `D_p` with three antipodal pairs of boundary points
//! are parametrized by `σ ∈ [1, σ_p]`: the basis of [`build_lattice`] puts `a`
//! and `b` on the boundary for any `(τ, σ)`, and `τ = τ(σ)` is fixed by asking
//! that `a + b` lies on the boundary as well. Minimizing
//! `Δ(p, σ) = (τ + σ)(1 + τ^p)^{-1/p}(1 + σ^p)^{-1/p}` over this curve gives the
//! critical determinant without using either closed form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{check_exponent, Branch, ModuliPoint};
use crate::error::{Error, Result};
use crate::geometry::{power_sum, Vec2};
use crate::lattice::build_lattice;
use crate::numeric::{bracketed_root, golden_section_min};
use crate::solvers::{sigma_p, solve_tau_p, DEFAULT_ROOT_TOL};

/// Slack added to the upper end of the τ bracket; the root sits exactly at τ_p when σ = 1.
const TAU_BRACKET_SLACK: f64 = 1e-9;
/// Slack accepted on σ at both ends of `[1, σ_p]`.
const SIGMA_SLACK: f64 = 1e-12;

fn basis_vectors(p: f64, tau: f64, sigma: f64) -> (Vec2, Vec2) {
    let na = (1.0 + tau.powf(p)).powf(-1.0 / p);
    let nb = (1.0 + sigma.powf(p)).powf(-1.0 / p);
    (Vec2::new(na, tau * na), Vec2::new(-nb, sigma * nb))
}

/// `|a_x + b_x|^p + |a_y + b_y|^p - 1` for the basis at `(τ, σ)`.
pub fn contact_residual(p: f64, sigma: f64, tau: f64) -> f64 {
    let (a, b) = basis_vectors(p, tau, sigma);
    power_sum(p, a + b) - 1.0
}

/// `τ ∈ [0, τ_p]` putting the third pair `±(a + b)` on the boundary of `D_p`.
pub fn solve_tau_of_sigma(p: f64, sigma: f64, tol: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let sp = sigma_p(p);
    if !(sigma >= 1.0 - SIGMA_SLACK && sigma <= sp + SIGMA_SLACK) {
        return Err(Error::domain(format!(
            "σ = {sigma} outside the moduli range [1, {sp}]"
        )));
    }
    let tau_p = solve_tau_p(p, DEFAULT_ROOT_TOL.min(tol))?;
    let hi = tau_p + TAU_BRACKET_SLACK;
    for tau in [0.0, hi] {
        let (a, b) = basis_vectors(p, tau, sigma);
        if a.x + b.x < 0.0 {
            return Err(Error::SignConvention(format!(
                "a_x + b_x = {} < 0 at p = {p}, σ = {sigma}, τ = {tau}",
                a.x + b.x
            )));
        }
    }
    let root = bracketed_root(|t| contact_residual(p, sigma, t), 0.0, hi, tol, "tau_of_sigma")
        .map_err(|e| match e {
            Error::NoSignChange { .. } => Error::domain(format!(
                "no contact root in [0, τ_p] for σ = {sigma}: σ is outside the admissible moduli range"
            )),
            other => other,
        })?;
    Ok(root.x.min(tau_p))
}

/// `(τ + σ)(1 + τ^p)^{-1/p}(1 + σ^p)^{-1/p}`
pub fn moduli_delta(p: f64, sigma: f64, tau: f64) -> f64 {
    (tau + sigma) * (1.0 + tau.powf(p)).powf(-1.0 / p) * (1.0 + sigma.powf(p)).powf(-1.0 / p)
}

pub fn moduli_point(p: f64, sigma: f64, tol: f64) -> Result<ModuliPoint> {
    let tau = solve_tau_of_sigma(p, sigma, tol)?;
    Ok(ModuliPoint {
        p,
        sigma,
        tau,
        delta: moduli_delta(p, sigma, tau),
    })
}

/// Uniform grid of moduli points over `σ ∈ [1, σ_p]`, in σ order.
pub fn moduli_curve(p: f64, nodes: usize, tol: f64) -> Result<Vec<ModuliPoint>> {
    if nodes < 2 {
        return Err(Error::domain("moduli curve needs at least two nodes"));
    }
    let sp = sigma_p(p);
    (0..nodes)
        .into_par_iter()
        .map(|i| {
            let sigma = if i == nodes - 1 {
                sp
            } else {
                1.0 + (sp - 1.0) * i as f64 / (nodes - 1) as f64
            };
            moduli_point(p, sigma, tol)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub p: f64,
    pub sigma_star: f64,
    pub tau_star: f64,
    pub delta_star: f64,
    /// Grid spacing in σ.
    pub resolution: f64,
    pub sigma_p: f64,
}

impl OracleResult {
    /// The branch whose endpoint the minimizer sits on, if it is within one grid
    /// step of either `σ = 1` or `σ = σ_p`.
    pub fn endpoint_branch(&self) -> Option<Branch> {
        let near_one = self.sigma_star - 1.0 <= self.resolution;
        let near_sp = self.sigma_p - self.sigma_star <= self.resolution;
        match (near_one, near_sp) {
            (true, false) => Some(Branch::Delta1),
            (false, true) => Some(Branch::Delta0),
            _ => None,
        }
    }
}

/// Minimum of `Δ(p, σ)` over the moduli curve: a uniform scan of `grid_size + 1`
/// nodes refined by golden-section search over the neighbouring grid cells.
pub fn oracle_min(p: f64, grid_size: usize) -> Result<OracleResult> {
    check_exponent(p)?;
    if grid_size < 100 {
        return Err(Error::domain(format!("grid size must be at least 100 (got {grid_size})")));
    }
    let tol = DEFAULT_ROOT_TOL;
    let sp = sigma_p(p);
    let curve = moduli_curve(p, grid_size + 1, tol)?;
    // Index-ordered reduction: ties go to the smallest σ.
    let (best_idx, _) = curve
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, pt)| {
            if pt.delta < bv {
                (i, pt.delta)
            } else {
                (bi, bv)
            }
        });
    let resolution = (sp - 1.0) / grid_size as f64;
    let lo = curve[best_idx.saturating_sub(1)].sigma;
    let hi = curve[(best_idx + 1).min(curve.len() - 1)].sigma;

    let mut failure = None;
    let (sigma_refined, delta_refined) = if hi > lo {
        golden_section_min(
            |s| match moduli_point(p, s, tol) {
                Ok(pt) => pt.delta,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            lo,
            hi,
            1e-12,
        )
    } else {
        (curve[best_idx].sigma, curve[best_idx].delta)
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let best = if delta_refined < curve[best_idx].delta {
        moduli_point(p, sigma_refined, tol)?
    } else {
        curve[best_idx]
    };
    Ok(OracleResult {
        p,
        sigma_star: best.sigma,
        tau_star: best.tau,
        delta_star: best.delta,
        resolution,
        sigma_p: sp,
    })
}

/// Determinant of the lattice built at a moduli point, computed from its basis
/// vectors rather than the moduli formula.
pub fn lattice_determinant(point: &ModuliPoint) -> Result<f64> {
    Ok(build_lattice(point.p, point.tau, point.sigma, 0)?.det())
}
