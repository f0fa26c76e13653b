//! Variational ground-state solve and the nonlinear `μ` optimization.
//!
//! The linear part of the ansatz is handled by assembly ([`crate::matrix`])
//! plus the generalized eigensolver ([`crate::linalg`]); this module wires
//! them together behind a runtime precision switch and wraps the result in
//! a [`VariationalState`] that the analysis stages consume. The exponential
//! falloff `μ` is the one nonlinear parameter; [`optimize_mu`] minimizes
//! the lowest eigenvalue over it with a grid-guarded golden-section search.

use alloc::vec::Vec;

use crate::basis::{BasisSet, Parity};
use crate::linalg::gen_sym_eig;
use crate::matrix::{assemble, ModelParams};
use crate::scalar::{Dd, Real};
use crate::CoreError;

/// Working precision of the assembly + generalized eigensolve.
///
/// `Double` is plain `f64`. `Extended` runs the same code paths over a
/// double-double scalar (~31 significant digits) and rounds the results
/// back to `f64`; it exists because the Hylleraas overlap matrix crosses
/// `cond(S) ≈ 1e16` near basis order `Ω = 12` and the high-order energies
/// are unreachable in plain doubles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

impl core::fmt::Display for Precision {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Precision::Double => f.write_str("double"),
            Precision::Extended => f.write_str("extended"),
        }
    }
}

/// A solved variational state: the lowest generalized eigenpair of one
/// parity sector, with its conditioning diagnostics.
///
/// `coefficients` are in the *normalized* basis convention (unit-diagonal
/// overlap) and are S-orthonormal, so `Σᵢⱼ cᵢ Sᵢⱼ cⱼ = 1` with the
/// normalized overlap. All fields are rounded to `f64` regardless of the
/// precision the solve ran in.
#[derive(Clone, Debug)]
pub struct VariationalState {
    pub energy: f64,
    pub coefficients: Vec<f64>,
    /// Term norms `√(Sᵢᵢ)` of the raw overlap (full measure).
    pub norms: Vec<f64>,
    pub basis: BasisSet,
    pub params: ModelParams,
    /// `‖Hc − E·Sc‖₂` in the normalized convention, rounded to `f64`.
    pub residual: f64,
    /// Condition estimate of the normalized overlap from its Cholesky
    /// pivot spread.
    pub cond_s: f64,
    pub precision: Precision,
}

impl VariationalState {
    /// Coefficients of the bare terms `e^{−μs} sⁿ tᵐ uᵖ`, scaled so that
    /// `⟨ψ|ψ⟩ = 1` under the full volume measure (the `2π²` included).
    /// This is the convention the wavefunction-analysis stage consumes.
    pub fn raw_coefficients(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(self.norms.iter())
            .map(|(c, n)| c / n)
            .collect()
    }
}

fn solve_in<R: Real>(
    basis: &BasisSet,
    params: ModelParams,
    precision: Precision,
) -> Result<VariationalState, CoreError> {
    let pair = assemble::<R>(basis, params)?;
    let eig = gen_sym_eig(&pair.h, &pair.s)?;
    let n = basis.len();
    let energy = eig.values[0];
    let c: Vec<R> = (0..n).map(|i| *eig.vectors.at(i, 0)).collect();

    // Residual ‖Hc − E·Sc‖ in the working precision.
    let hc = pair.h.matvec(&c);
    let sc = pair.s.matvec(&c);
    let mut acc = R::ZERO;
    for i in 0..n {
        let d = hc[i] - energy * sc[i];
        acc += d * d;
    }
    let residual = acc.sqrt().to_f64();

    Ok(VariationalState {
        energy: energy.to_f64(),
        coefficients: c.iter().map(|x| x.to_f64()).collect(),
        norms: pair.norms.iter().map(|x| x.to_f64()).collect(),
        basis: basis.clone(),
        params,
        residual,
        cond_s: eig.cond_s,
        precision,
    })
}

/// Solve for the lowest state of the basis's parity sector.
///
/// The singlet (spatially symmetric) sector is an even-`m` basis, the
/// triplet (spatially antisymmetric) an odd-`m` one, so "ground state of
/// the sector" covers both physical states of interest.
pub fn solve_ground(
    basis: &BasisSet,
    params: ModelParams,
    precision: Precision,
) -> Result<VariationalState, CoreError> {
    match precision {
        Precision::Double => solve_in::<f64>(basis, params, precision),
        Precision::Extended => solve_in::<Dd>(basis, params, precision),
    }
}

/// Result of [`optimize_mu`].
#[derive(Clone, Debug)]
pub struct MuOptimum {
    pub mu: f64,
    pub state: VariationalState,
}

const GRID_POINTS: usize = 16;
const MU_ABS_TOL: f64 = 1e-3;
/// Bracket widenings attempted before the grid shape is taken at face value.
const MAX_WIDENINGS: usize = 2;

fn attach_mu(err: CoreError, mu: f64) -> CoreError {
    match err {
        CoreError::IllConditionedOverlap {
            pivot,
            cond_estimate,
            ..
        } => CoreError::IllConditionedOverlap {
            pivot,
            cond_estimate,
            mu: Some(mu),
        },
        other => other,
    }
}

/// Minimize the lowest sector energy over the falloff parameter `μ`.
///
/// Strategy: sample a 16-point log-spaced grid over `mu_range` as a
/// unimodality guard; if the minimum lands on an edge, widen the range by
/// ×2 on that side (at most twice) and rescan. The final golden-section
/// refinement runs on the grid cell bracketing the global grid minimum,
/// to an absolute `μ` tolerance of `1e-3`. Deterministic for a given
/// range: no randomness, fixed iteration order.
///
/// A conditioning failure at any trial `μ` aborts the optimization with
/// that `μ` attached to the error.
pub fn optimize_mu(
    params: ModelParams,
    omega: u32,
    parity: Parity,
    mu_range: (f64, f64),
    precision: Precision,
) -> Result<MuOptimum, CoreError> {
    let (mut lo, mut hi) = mu_range;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(CoreError::Domain("mu range must satisfy 0 < lo < hi"));
    }

    let eval = |mu: f64| -> Result<VariationalState, CoreError> {
        let basis = BasisSet::new(omega, parity, mu)?;
        solve_ground(&basis, params, precision).map_err(|e| attach_mu(e, mu))
    };

    // Grid scan with edge-widening.
    let mut widenings = 0usize;
    let (grid, energies, kmin) = loop {
        let ratio = libm::pow(hi / lo, 1.0 / (GRID_POINTS as f64 - 1.0));
        let grid: Vec<f64> = (0..GRID_POINTS)
            .map(|k| lo * libm::pow(ratio, k as f64))
            .collect();
        let mut energies = Vec::with_capacity(GRID_POINTS);
        for &mu in &grid {
            energies.push(eval(mu)?.energy);
        }
        let mut kmin = 0usize;
        for k in 1..GRID_POINTS {
            if energies[k] < energies[kmin] {
                kmin = k;
            }
        }
        if (kmin == 0 || kmin == GRID_POINTS - 1) && widenings < MAX_WIDENINGS {
            if kmin == 0 {
                lo /= 2.0;
            } else {
                hi *= 2.0;
            }
            widenings += 1;
            continue;
        }
        break (grid, energies, kmin);
    };

    // Bracket the global grid minimum; fall back to the cell itself when
    // the minimum sits on an edge after max widenings.
    let a = if kmin > 0 { grid[kmin - 1] } else { grid[kmin] };
    let b = if kmin + 1 < GRID_POINTS {
        grid[kmin + 1]
    } else {
        grid[kmin]
    };
    let mut best_mu = grid[kmin];
    let mut best_e = energies[kmin];

    if b > a {
        // Golden-section search, keeping track of the best point seen.
        let inv_phi = 0.618033988749894848_f64;
        let mut x0 = a;
        let mut x3 = b;
        let mut x1 = x3 - inv_phi * (x3 - x0);
        let mut x2 = x0 + inv_phi * (x3 - x0);
        let mut f1 = eval(x1)?.energy;
        let mut f2 = eval(x2)?.energy;
        while x3 - x0 > MU_ABS_TOL {
            if f1 < f2 {
                x3 = x2;
                x2 = x1;
                f2 = f1;
                x1 = x3 - inv_phi * (x3 - x0);
                f1 = eval(x1)?.energy;
            } else {
                x0 = x1;
                x1 = x2;
                f1 = f2;
                x2 = x0 + inv_phi * (x3 - x0);
                f2 = eval(x2)?.energy;
            }
        }
        let (xm, fm) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
        if fm < best_e {
            best_mu = xm;
            best_e = fm;
        }
    }

    let state = eval(best_mu)?;
    debug_assert!(state.energy <= best_e + 1e-12);
    Ok(MuOptimum {
        mu: best_mu,
        state,
    })
}
