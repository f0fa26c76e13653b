//! Error type shared by the numerical core.
//!
//! Failures here are diagnoses, not bugs: an ill-conditioned overlap matrix
//! means the requested basis order exceeds what the working precision can
//! resolve; a pairing defect means the odd-sector kernel lost its exact
//! antisymmetric structure to grid/quadrature inconsistency. Callers are
//! expected to surface these with their parameters so a user can pick a
//! smaller basis, extended precision, or a finer grid.

use core::fmt;

/// Everything that can go numerically wrong in the core pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum CoreError {
    /// A parameter was outside its mathematical domain (e.g. `β ≤ 0` in a
    /// base integral, an empty basis, a malformed grid).
    Domain(&'static str),
    /// Cholesky factorization of the overlap matrix hit a non-positive pivot:
    /// the Gram matrix is numerically singular at the working precision.
    /// Carries the pivot index, the condition estimate accumulated up to the
    /// breakdown, and the nonlinear parameter `μ` when the failure happened
    /// inside a `μ` scan.
    IllConditionedOverlap {
        pivot: usize,
        cond_estimate: f64,
        mu: Option<f64>,
    },
    /// The implicit QL/QR sweep failed to converge on some eigenvalue within
    /// the iteration cap. Practically unseen; reported rather than looped.
    EigenNoConvergence { index: usize },
    /// An odd-sector singular value had no partner within relative `1e-8`:
    /// the antisymmetric kernel's Slater pairing was broken by the
    /// discretization. Carries the unpaired value and its index.
    PairingDefect { index: usize, value: f64 },
    /// The one-electron finite-difference energy did not settle under grid
    /// refinement / domain doubling.
    Resolution { detail: &'static str },
    /// A root bracket did not straddle a sign change.
    Bracket { lo: f64, hi: f64 },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Domain(what) => write!(f, "domain error: {what}"),
            CoreError::IllConditionedOverlap {
                pivot,
                cond_estimate,
                mu,
            } => {
                write!(
                    f,
                    "overlap matrix ill-conditioned at working precision: \
                     Cholesky pivot {pivot} not positive (condition estimate {cond_estimate:.3e}"
                )?;
                if let Some(mu) = mu {
                    write!(f, ", mu = {mu}")?;
                }
                write!(f, "); reduce the basis order or use extended precision")
            }
            CoreError::EigenNoConvergence { index } => {
                write!(f, "eigensolver failed to converge at index {index}")
            }
            CoreError::PairingDefect { index, value } => write!(
                f,
                "odd-sector singular value {value:.6e} at index {index} is unpaired \
                 beyond relative 1e-8; grid and quadrature are inconsistent"
            ),
            CoreError::Resolution { detail } => {
                write!(f, "radial solver failed to converge: {detail}")
            }
            CoreError::Bracket { lo, hi } => write!(
                f,
                "no sign change on the bracket [{lo}, {hi}]; root not enclosed"
            ),
        }
    }
}

impl core::error::Error for CoreError {}
