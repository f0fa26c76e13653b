//! Variational treatment of two Coulomb-interacting electrons in an isotropic
//! harmonic trap with an optional on-centre Coulomb impurity, plus the
//! entanglement analysis of the resulting ground states.
//!
//! In scaled oscillator units the Hamiltonian handled here is
//!
//! ```text
//! H = Σ_{i=1,2} [ -½∇ᵢ² + ½rᵢ² + z/rᵢ ] + λ_ee/r₁₂
//! ```
//!
//! where `z` is the impurity coupling (negative for an acceptor) and `λ_ee`
//! the electron-electron repulsion strength. Setting the trap term to zero,
//! `z = -2`, `λ_ee = 1` recovers the free-space helium atom, which serves as
//! the primary calibration target of the whole pipeline.
//!
//! For total-spin eigenstates with zero total orbital angular momentum the
//! spatial wavefunction depends only on `r₁`, `r₂` and the interelectronic
//! distance `r₁₂`, so a Hylleraas basis is used throughout: with
//! `s = r₁ + r₂`, `t = r₂ − r₁`, `u = r₁₂`,
//!
//! ```text
//! ψ = Σ c_{nmp} e^{-μs} s^n t^m u^p ,   n + m + p ≤ Ω ,
//! ```
//!
//! `m` even for the (spatially symmetric) singlet sector and odd for the
//! triplet. Every matrix element of `H` then reduces to a finite sum of
//! closed-form base integrals, and the Rayleigh-Ritz problem `Hc = ESc`
//! is solved directly.
//!
//! Monomial Hylleraas overlap matrices are notoriously ill-conditioned: in
//! IEEE double precision the Cholesky factorization of `S` breaks down near
//! `Ω ≈ 12`. The crate is therefore generic over its scalar type and ships a
//! double-double type ([`scalar::Dd`], ~31 significant digits) so large
//! bases remain usable; see [`variational::Precision`].
//!
//! From a converged state the crate extracts natural-orbital occupancies by
//! expanding `ψ` in Legendre partial waves `f_l(r₁, r₂)`, discretizing each
//! `f_l` on a uniform radial grid (Nyström style) and diagonalizing; the
//! occupancies feed von Neumann and linear entanglement entropies. A small
//! one-electron finite-difference solver supplies the ionization threshold
//! (the confinement strength at which the two-electron ground energy meets
//! the one-electron one).
//!
//! Module map, roughly in pipeline order:
//!
//! * [`scalar`] — `Real` abstraction over `f64` and double-double arithmetic.
//! * [`basis`] — basis enumeration and sparse polynomial algebra in `(s,t,u)`.
//! * [`integrals`] — the closed-form base integral and weighted integration.
//! * [`matrix`] — overlap/kinetic/potential assembly into a matrix pencil.
//! * [`linalg`] — dense symmetric eigensolvers, SVD, tridiagonal solvers.
//! * [`variational`] — pencil solve, nonlinear `μ` optimization, state type.
//! * [`wavefunction`] — position-space evaluation, partial waves, kernels.
//! * [`entanglement`] — occupancies, entropies, convergence tables.
//! * [`one_electron`] — radial solver and the ionization-threshold search.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; all I/O, file formats and the command-line surface live in the
//! companion `qdot2e-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod basis;
pub mod entanglement;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod matrix;
pub mod one_electron;
pub mod scalar;
pub mod variational;
pub mod wavefunction;

pub use error::CoreError;
