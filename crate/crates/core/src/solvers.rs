//! Implicit scalar equations, the two closed-form critical-determinant branches,
//! and the branch selector.
//!
//! Two closed forms compete for the critical determinant of `2^m · D_p`:
//!
//! * `Δ(p, σ_p) = 2^{2m-1} σ_p` with `σ_p = (2^p - 1)^{1/p}`,
//! * `Δ(p, 1) = 4^{m-1/p} (1 + τ_p) / (1 - τ_p)` where `τ_p ∈ [0, 1)` solves
//!   `2(1 - τ)^p = 1 + τ^p`.
//!
//! `Δ(p, 1)` is the critical determinant for `1 ≤ p ≤ 2` and `p ≥ p₀`, and
//! `Δ(p, σ_p)` for `2 ≤ p ≤ p₀`, where the Davis constant `p₀ ≈ 2.5725` is the
//! crossing point of the two branches. Some statements of this result attach
//! the labels the other way round; the brute-force moduli oracle in
//! [`crate::moduli`] confirms the assignment used here.

use std::sync::OnceLock;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::domain::{check_exponent, BallSpec, Branch};
use crate::error::{Error, Result};
use crate::numeric::{bracketed_root, Root};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_DAVIS_TOL: f64 = 1e-10;

/// Bracket known to contain the Davis constant.
pub const DAVIS_BRACKET: (f64, f64) = (2.57, 2.58);

/// Residual of `2(1 - τ)^p = 1 + τ^p`.
pub fn tau_residual(p: f64, tau: f64) -> f64 {
    2.0 * (1.0 - tau).powf(p) - 1.0 - tau.powf(p)
}

/// Root of `2(1 - τ)^p = 1 + τ^p` in `[0, 1)`, with the full solver trace.
pub fn solve_tau_p_traced(p: f64, tol: f64) -> Result<Root> {
    check_exponent(p)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    // The residual is 1 at τ = 0 and -2 at τ = 1: exactly one sign change.
    bracketed_root(|t| tau_residual(p, t), 0.0, 1.0, tol, "tau_p")
}

pub fn solve_tau_p(p: f64, tol: f64) -> Result<f64> {
    solve_tau_p_traced(p, tol).map(|r| r.x)
}

/// `σ_p = (2^p - 1)^{1/p}`, evaluated as `2 (1 - 2^{-p})^{1/p}` so large `p` neither
/// overflows nor cancels.
pub fn sigma_p(p: f64) -> f64 {
    2.0 * ((-(2f64.powf(-p))).ln_1p() / p).exp()
}

/// `Δ(p, σ_p)` on `2^m · D_p`: `4^m · σ_p / 2`.
pub fn delta_branch0(p: f64, m: u32) -> f64 {
    4f64.powi(m as i32) * sigma_p(p) / 2.0
}

/// `Δ(p, 1)` on `2^m · D_p`: `4^{m - 1/p} (1 + τ_p) / (1 - τ_p)`.
pub fn delta_branch1(p: f64, m: u32, tau_p: f64) -> f64 {
    4f64.powi(m as i32) * 4f64.powf(-1.0 / p) * (1.0 + tau_p) / (1.0 - tau_p)
}

/// The per-exponent constants that both branches and both critical lattices use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalConstants {
    pub p: f64,
    pub tau_p: f64,
    pub sigma_p: f64,
    /// `Δ(p, σ_p)` at `m = 0`.
    pub delta0: f64,
    /// `Δ(p, 1)` at `m = 0`.
    pub delta1: f64,
}

impl CriticalConstants {
    pub fn new(p: f64, tol: f64) -> Result<Self> {
        let tau_p = solve_tau_p(p, tol)?;
        Ok(Self::from_tau(p, tau_p))
    }

    pub fn with_default_tol(p: f64) -> Result<Self> {
        Self::new(p, DEFAULT_ROOT_TOL)
    }

    fn from_tau(p: f64, tau_p: f64) -> Self {
        CriticalConstants {
            p,
            tau_p,
            sigma_p: sigma_p(p),
            delta0: delta_branch0(p, 0),
            delta1: delta_branch1(p, 0, tau_p),
        }
    }

    /// A copy with `τ_p` shifted by `offset`. Only useful for checking that the
    /// verification suite notices a wrong root.
    pub fn perturbed_tau(&self, offset: f64) -> Self {
        Self::from_tau(self.p, self.tau_p + offset)
    }

    /// Value of `branch` on `2^m · D_p`.
    pub fn branch_value(&self, branch: Branch, m: u32) -> f64 {
        match branch {
            Branch::Delta0 => delta_branch0(self.p, m),
            Branch::Delta1 => delta_branch1(self.p, m, self.tau_p),
        }
    }
}

/// Solve `Δ(p, σ_p) = Δ(p, 1)` for `p` on `[2.57, 2.58]`.
pub fn solve_davis_constant(tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut inner_failure = None;
    let gap = |p: f64| match solve_tau_p(p, 1e-14) {
        Ok(tau) => delta_branch0(p, 0) - delta_branch1(p, 0, tau),
        Err(e) => {
            inner_failure.get_or_insert(e);
            f64::NAN
        }
    };
    let root = bracketed_root(gap, DAVIS_BRACKET.0, DAVIS_BRACKET.1, tol, "davis_constant");
    if let Some(e) = inner_failure {
        return Err(e);
    }
    root.map(|r| r.x)
}

/// The Davis constant at [`DEFAULT_DAVIS_TOL`], computed once.
pub fn davis_constant() -> f64 {
    static P0: OnceLock<f64> = OnceLock::new();
    *P0.get_or_init(|| {
        solve_davis_constant(DEFAULT_DAVIS_TOL).expect("Davis constant bracket contains a sign change")
    })
}

/// The branch that gives the critical determinant of `D_p`.
pub fn select_branch(p: f64, davis_constant: f64) -> Branch {
    if p <= 2.0 || p >= davis_constant {
        Branch::Delta1
    } else {
        Branch::Delta0
    }
}

/// Critical determinant of `2^m · D_p` and the branch that realizes it.
pub fn critical_determinant(
    spec: BallSpec,
    constants: &CriticalConstants,
    davis_constant: f64,
) -> Result<(f64, Branch)> {
    check_exponent(spec.p())?;
    if constants.p != spec.p() {
        return Err(Error::domain(format!(
            "constants computed for p = {} used with p = {}",
            constants.p,
            spec.p()
        )));
    }
    let branch = select_branch(spec.p(), davis_constant);
    let value = constants.branch_value(branch, spec.m());
    if (constants.delta0 - constants.delta1).abs() > 1e-12 {
        debug!(
            "p = {}: selected {} = {}; the alternative labeling would give {}",
            spec.p(),
            branch,
            value,
            constants.branch_value(other(branch), spec.m())
        );
    }
    Ok((value, branch))
}

fn other(branch: Branch) -> Branch {
    match branch {
        Branch::Delta0 => Branch::Delta1,
        Branch::Delta1 => Branch::Delta0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn tau_p_linear_and_quadratic_cases() {
        // p = 1: 2(1 - τ) = 1 + τ  =>  τ = 1/3
        assert_abs_diff_eq!(solve_tau_p(1.0, 1e-12).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        // p = 2: τ² - 4τ + 1 = 0  =>  τ = 2 - √3
        assert_abs_diff_eq!(solve_tau_p(2.0, 1e-12).unwrap(), 2.0 - SQRT3, epsilon = 1e-12);
    }

    #[test]
    fn tau_p_large_exponents() {
        for &p in &[5.0, 10.0, 50.0] {
            let r = solve_tau_p_traced(p, 1e-12).unwrap();
            assert!((0.0..1.0).contains(&r.x));
            assert!(tau_residual(p, r.x).abs() < 1e-12);
            assert!(r.bracket_widths.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn tau_p_rejects_bad_input() {
        assert!(solve_tau_p(0.9, 1e-12).is_err());
        assert!(solve_tau_p(2.0, 0.0).is_err());
    }

    #[test]
    fn sigma_p_values() {
        assert_eq!(sigma_p(1.0), 1.0);
        assert_abs_diff_eq!(sigma_p(2.0), SQRT3, epsilon = 1e-15);
        // 2 - σ_50 ≈ 3.6e-17 is below the spacing of doubles near 2.
        let s50 = sigma_p(50.0);
        assert!(s50 > 1.97 && s50 <= 2.0);
        assert!(sigma_p(20.0) < 2.0);
        for &p in &[1.0, 1.5, 2.0, 3.0, 10.0] {
            assert_abs_diff_eq!(sigma_p(p), (2f64.powf(p) - 1.0).powf(1.0 / p), epsilon = 1e-15);
        }
    }

    #[test]
    fn branch0_values() {
        assert_abs_diff_eq!(delta_branch0(2.0, 0), SQRT3 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(delta_branch0(1.0, 0), 0.5, epsilon = 1e-15);
        // 4^3 · √3/2; the literal 2^{m-1}σ_p form would give 4√3 and break the
        // 4^m determinant scaling of the dilated lattices.
        assert_abs_diff_eq!(delta_branch0(2.0, 3), 32.0 * SQRT3, epsilon = 1e-12);
    }

    #[test]
    fn branch1_values() {
        assert_abs_diff_eq!(delta_branch1(2.0, 0, 2.0 - SQRT3), SQRT3 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(delta_branch1(1.0, 0, 1.0 / 3.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(delta_branch1(2.0, 1, 2.0 - SQRT3), 2.0 * SQRT3, epsilon = 1e-14);
    }

    #[test]
    fn davis_constant_in_bracket() {
        let p0 = solve_davis_constant(1e-10).unwrap();
        assert!(p0 > 2.57 && p0 < 2.58);
        assert!((p0 - 2.5725).abs() < 1e-3);
        let c = CriticalConstants::with_default_tol(p0).unwrap();
        assert!((c.delta0 - c.delta1).abs() < 1e-10);
        assert_eq!(davis_constant(), p0);
    }

    #[test]
    fn selector_examples() {
        let p0 = davis_constant();
        let det = |p: f64| {
            let c = CriticalConstants::with_default_tol(p).unwrap();
            let (v, b) = critical_determinant(BallSpec::new(p, 0).unwrap(), &c, p0).unwrap();
            (v, b, c)
        };
        let (v, b, c) = det(1.5);
        assert_eq!(b, Branch::Delta1);
        assert_eq!(v, c.delta1);
        let (v, b, c) = det(2.2);
        assert_eq!(b, Branch::Delta0);
        assert_eq!(v, c.delta0);
        let (v, _, c) = det(2.0);
        assert_abs_diff_eq!(v, SQRT3 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.delta0, c.delta1, epsilon = 1e-12);
    }

    #[test]
    fn selector_rejects_mismatched_constants() {
        let c = CriticalConstants::with_default_tol(1.5).unwrap();
        let spec = BallSpec::new(3.0, 0).unwrap();
        assert!(critical_determinant(spec, &c, davis_constant()).is_err());
    }
}
