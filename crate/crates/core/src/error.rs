use thiserror::Error;

/// Errors produced by the lattice and packing computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation (for example `p < 1`).
    #[error("{0}")]
    Domain(String),

    /// A bracketing root finder found no sign change on its interval.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e} ({context})")]
    NoSignChange {
        context: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative solver ran out of iterations.
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature did not reach tolerance {requested:e}; achieved error bound {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    /// A lattice basis or a tangent construction collapsed.
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// A direct-system transition was requested against the level order.
    #[error("level order violated: {from} > {to}")]
    OrderViolation { from: u32, to: u32 },

    /// A sign convention assumed by the moduli parametrization failed.
    #[error("sign convention violated: {0}")]
    SignConvention(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical solvers (as opposed to bad input).
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. }
                | Error::NoConvergence { .. }
                | Error::Quadrature { .. }
                | Error::SignConvention(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
