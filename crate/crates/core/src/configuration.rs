//! The critical configuration of one domain `2^m · D_p`: its constants, branch,
//! critical determinant and critical lattice, computed together.

use serde::{Deserialize, Serialize};

use crate::domain::{BallSpec, Branch, DomainClass, LatticeBasis};
use crate::error::Result;
use crate::lattice::{critical_lattice, CriticalLatticeKind, DEFAULT_CONTACT_TOL};
use crate::solvers::{
    critical_determinant, davis_constant, solve_davis_constant, CriticalConstants, DEFAULT_DAVIS_TOL,
    DEFAULT_ROOT_TOL,
};

/// Explicit numerical tolerances. Every computation takes these rather than
/// hidden constants; `Default` gives the standard values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual tolerance for scalar roots (`τ_p`, `τ(σ)`).
    pub root: f64,
    /// Branch-gap tolerance for the Davis constant.
    pub davis: f64,
    /// Relative tolerance for boundary contact and admissibility.
    pub contact: f64,
    /// Absolute error for the unit-ball area quadrature.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root: DEFAULT_ROOT_TOL,
            davis: DEFAULT_DAVIS_TOL,
            contact: DEFAULT_CONTACT_TOL,
            quadrature: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn davis_constant(&self) -> Result<f64> {
        if self.davis == DEFAULT_DAVIS_TOL {
            Ok(davis_constant())
        } else {
            solve_davis_constant(self.davis)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalConfiguration {
    pub spec: BallSpec,
    pub constants: CriticalConstants,
    pub davis_constant: f64,
    pub class: DomainClass,
    pub branch: Branch,
    pub critical_determinant: f64,
    /// Critical lattice of `2^m · D_p` for the selected branch.
    pub lattice: LatticeBasis,
}

impl CriticalConfiguration {
    pub fn new(p: f64, m: u32) -> Result<Self> {
        Self::with_tolerances(p, m, &Tolerances::default())
    }

    pub fn with_tolerances(p: f64, m: u32, tol: &Tolerances) -> Result<Self> {
        let spec = BallSpec::new(p, m)?;
        let constants = CriticalConstants::new(p, tol.root)?;
        Self::from_constants(spec, constants, tol.davis_constant()?)
    }

    pub fn from_constants(spec: BallSpec, constants: CriticalConstants, davis_constant: f64) -> Result<Self> {
        let (critical_determinant, branch) = critical_determinant(spec, &constants, davis_constant)?;
        let lattice = critical_lattice(spec.p(), CriticalLatticeKind::for_branch(branch), spec.m(), &constants)?;
        Ok(CriticalConfiguration {
            spec,
            constants,
            davis_constant,
            class: crate::domain::classify(spec.p(), davis_constant)?,
            branch,
            critical_determinant,
            lattice,
        })
    }

    pub fn kind(&self) -> CriticalLatticeKind {
        CriticalLatticeKind::for_branch(self.branch)
    }

    /// The same configuration one dilation level up.
    pub fn doubled(&self) -> Result<Self> {
        Self::from_constants(self.spec.doubled(), self.constants, self.davis_constant)
    }
}
