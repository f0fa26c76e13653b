//! Wavefunction evaluation, Fourier-Legendre partial waves, and their
//! discretization into kernel matrices.
//!
//! A solved state depends on `(r₁, r₂, cosθ₁₂)` only, so the two-particle
//! density factorizes over relative angular momentum: expanding
//! `ψ = Σ_l f_l(r₁, r₂)·P_l(cosθ₁₂)/(r₁r₂)` turns the natural-orbital
//! problem into independent radial integral equations, one per `l`. This
//! module computes `f_l` by Gauss-Legendre quadrature in `cosθ` and
//! discretizes each one on a uniform radial grid as `M_ij = Δr·f_l(rᵢ, rⱼ)`,
//! the algebraic eigenproblem the entanglement stage diagonalizes.
//!
//! Everything here runs in `f64`: the coefficients arriving from the solver
//! are already rounded to double, and the grid discretization error (order
//! `Δr²`) dwarfs anything extended precision could recover.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{Parity, TriPoly};
use crate::integrals::integrate_weighted;
use crate::linalg::Matrix;
use crate::matrix::{weight_measure, TWO_PI_SQ};
use crate::variational::VariationalState;
use crate::CoreError;

/// Uniform radial mesh `rᵢ = i·Δr`, `i = 0..n_max`, with `Δr = R/n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    r_cut: f64,
    n_max: usize,
    delta_r: f64,
}

impl RadialGrid {
    pub fn new(r_cut: f64, n_max: usize) -> Result<Self, CoreError> {
        if !(r_cut > 0.0) || !r_cut.is_finite() {
            return Err(CoreError::Domain("radial cutoff must be positive and finite"));
        }
        if n_max == 0 {
            return Err(CoreError::Domain("radial grid needs at least one subinterval"));
        }
        Ok(Self {
            r_cut,
            n_max,
            delta_r: r_cut / n_max as f64,
        })
    }

    #[inline]
    pub fn r_cut(&self) -> f64 {
        self.r_cut
    }

    #[inline]
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    #[inline]
    pub fn delta_r(&self) -> f64 {
        self.delta_r
    }

    /// Number of nodes, `n_max + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n_max + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.delta_r
    }
}

/// One discretized partial wave: `M_ij = Δr·f_l(rᵢ, rⱼ)`.
///
/// Even-sector kernels are exactly symmetric and odd-sector ones exactly
/// antisymmetric by construction (the upper triangle is computed and
/// mirrored with the parity sign), and row/column 0 is identically zero
/// because `f_l` carries the factor `r₁r₂`.
#[derive(Clone, Debug)]
pub struct PartialWaveKernel {
    pub l: u32,
    pub parity: Parity,
    pub m: Matrix<f64>,
    pub grid: RadialGrid,
}

/// Gauss-Legendre nodes (ascending) and weights on `[−1, 1]`.
///
/// Newton iteration on `P_q` from the Chebyshev-like initial guess; nodes
/// come out symmetric and the rule is exact through polynomial degree
/// `2q − 1`.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0_f64; q];
    let mut weights = vec![0.0_f64; q];
    let half = q.div_ceil(2);
    for i in 0..half {
        // i-th root of P_q in descending order from +1.
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5));
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q as u32, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Weight from the derivative at the converged node.
        let (_, dp) = legendre_with_derivative(q as u32, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[q - 1 - i] = x;
        weights[q - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if q % 2 == 1 {
        // Middle node is exactly zero for odd q.
        let mid = q / 2;
        nodes[mid] = 0.0;
        let (_, d) = legendre_with_derivative(q as u32, 0.0);
        weights[mid] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre_with_derivative(n: u32, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0_f64;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // P_n′ from P_n and P_{n−1}: (x² − 1)P_n′ = n(xP_n − P_{n−1}).
    let d = if (x * x - 1.0).abs() < 1e-300 {
        // At the endpoints: P_n′(±1) = (±1)^{n+1}·n(n+1)/2.
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * n as f64 * (n as f64 + 1.0) / 2.0
    } else {
        n as f64 * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, d)
}

/// `P_l(x)` by the three-term recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    legendre_with_derivative(l, x).0
}

#[inline]
fn pow_u32(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Precomputed evaluator for one state: terms collapsed into coefficients
/// of powers of `u`, so a fixed `(r₁, r₂)` pair costs one collapse and
/// each angular node only a Horner sweep.
struct PsiEvaluator {
    mu: f64,
    /// `(n, m, p, coefficient)` per term, coefficients measure-normalized.
    terms: Vec<(u32, u32, u32, f64)>,
    p_max: u32,
}

impl PsiEvaluator {
    fn new(state: &VariationalState) -> Self {
        let raw = state.raw_coefficients();
        let mut p_max = 0;
        let terms: Vec<(u32, u32, u32, f64)> = state
            .basis
            .terms
            .iter()
            .zip(raw.iter())
            .map(|(t, &c)| {
                p_max = p_max.max(t.p);
                (t.n, t.m, t.p, c)
            })
            .collect();
        Self {
            mu: state.basis.mu,
            terms,
            p_max,
        }
    }

    /// Coefficients `A_p(s, t)` of `ψ·e^{μs} = Σ_p A_p·u^p`.
    fn u_coefficients(&self, s: f64, t: f64, out: &mut [f64]) {
        for a in out.iter_mut() {
            *a = 0.0;
        }
        for &(n, m, p, c) in &self.terms {
            out[p as usize] += c * pow_u32(s, n) * pow_u32(t, m);
        }
    }

    fn eval(&self, r1: f64, r2: f64, x: f64) -> f64 {
        let s = r1 + r2;
        let t = r2 - r1;
        let u2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * x;
        let u = libm::sqrt(u2.max(0.0));
        let mut a = vec![0.0_f64; self.p_max as usize + 1];
        self.u_coefficients(s, t, &mut a);
        horner(&a, u) * libm::exp(-self.mu * s)
    }
}

#[inline]
fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Wavefunction value at physical coordinates `(r₁, r₂, x = cosθ₁₂)`,
/// in the unit-normalization convention of the volume measure
/// (`∫|ψ|² dτ = 1` with `dτ = 2π²·u(s² − t²)·ds dt du`).
pub fn eval_psi(state: &VariationalState, r1: f64, r2: f64, x: f64) -> f64 {
    assert!(r1 >= 0.0 && r2 >= 0.0, "radii must be nonnegative");
    assert!((-1.0..=1.0).contains(&x), "cosine out of range");
    PsiEvaluator::new(state).eval(r1, r2, x)
}

/// Partial-wave amplitude
/// `f_l(r₁, r₂) = r₁r₂·(2l+1)/2·∫_{−1}^{1} ψ(r₁, r₂, x)·P_l(x) dx`
/// by `q`-node Gauss-Legendre quadrature. Deterministic for fixed `q`.
pub fn partial_wave(state: &VariationalState, l: u32, r1: f64, r2: f64, q: usize) -> f64 {
    assert!(q >= l as usize + 1, "quadrature order must exceed l");
    let ev = PsiEvaluator::new(state);
    let (nodes, weights) = gauss_legendre(q);
    let mut acc = 0.0;
    for (xq, wq) in nodes.iter().zip(weights.iter()) {
        acc += wq * ev.eval(r1, r2, *xq) * legendre(l, *xq);
    }
    r1 * r2 * (2.0 * l as f64 + 1.0) / 2.0 * acc
}

/// Discretize several partial waves over one grid, sharing the wavefunction
/// evaluations: the computation is dominated by `ψ` at the quadrature nodes
/// of every `(rᵢ, rⱼ)` pair, identical for all `l`.
pub fn kernel_stack(
    state: &VariationalState,
    ls: &[u32],
    grid: &RadialGrid,
    q: usize,
) -> Vec<PartialWaveKernel> {
    let l_max = ls.iter().copied().max().unwrap_or(0);
    assert!(q >= l_max as usize + 1, "quadrature order must exceed max l");
    let parity = state.basis.parity;
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let ev = PsiEvaluator::new(state);
    let (nodes, weights) = gauss_legendre(q);
    // Weighted Legendre table: tab[k][iq] = w_q·P_{ls[k]}(x_q).
    let tab: Vec<Vec<f64>> = ls
        .iter()
        .map(|&l| {
            nodes
                .iter()
                .zip(weights.iter())
                .map(|(x, w)| w * legendre(l, *x))
                .collect()
        })
        .collect();

    let n = grid.len();
    let dr = grid.delta_r();
    let mut kernels: Vec<Matrix<f64>> = ls.iter().map(|_| Matrix::zeros(n, n)).collect();
    let mut a = vec![0.0_f64; ev.p_max as usize + 1];
    let mut psi = vec![0.0_f64; q];
    for i in 1..n {
        let r1 = grid.node(i);
        for j in i..n {
            let r2 = grid.node(j);
            let s = r1 + r2;
            let t = r2 - r1;
            ev.u_coefficients(s, t, &mut a);
            let envelope = libm::exp(-ev.mu * s);
            let base = r1 * r1 + r2 * r2;
            let cross = 2.0 * r1 * r2;
            for (iq, x) in nodes.iter().enumerate() {
                let u = libm::sqrt((base - cross * x).max(0.0));
                psi[iq] = horner(&a, u) * envelope;
            }
            let pref = dr * r1 * r2 / 2.0;
            for (k, &l) in ls.iter().enumerate() {
                let mut acc = 0.0;
                for iq in 0..q {
                    acc += tab[k][iq] * psi[iq];
                }
                let val = pref * (2.0 * l as f64 + 1.0) * acc;
                kernels[k].set(i, j, val);
                if j != i {
                    kernels[k].set(j, i, sign * val);
                }
            }
        }
    }
    kernels
        .into_iter()
        .zip(ls.iter())
        .map(|(m, &l)| PartialWaveKernel {
            l,
            parity,
            m,
            grid: grid.clone(),
        })
        .collect()
}

/// Discretize one partial wave: `M_ij = Δr·f_l(rᵢ, rⱼ)`.
pub fn kernel_matrix(
    state: &VariationalState,
    l: u32,
    grid: &RadialGrid,
    q: usize,
) -> PartialWaveKernel {
    kernel_stack(state, &[l], grid, q).pop().unwrap()
}

/// Mean single-electron radius `⟨(r₁ + r₂)/2⟩ = ⟨s⟩/2`, evaluated
/// analytically through the base integrals.
pub fn mean_radius(state: &VariationalState) -> Result<f64, CoreError> {
    let raw = state.raw_coefficients();
    let beta = 2.0 * state.basis.mu;
    let polys: Vec<TriPoly<f64>> = state
        .basis
        .terms
        .iter()
        .map(|t| TriPoly::monomial(t.n, t.m, t.p, 1.0))
        .collect();
    let weight = weight_measure::<f64>().mul(&TriPoly::monomial(1, 0, 0, 0.5));
    let n = polys.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i..n {
            let integrand = polys[i].mul(&polys[j]).mul(&weight);
            let v = integrate_weighted(&integrand, beta)?;
            let w = if i == j { 1.0 } else { 2.0 };
            acc += w * raw[i] * raw[j] * v;
        }
    }
    Ok(TWO_PI_SQ * acc)
}

/// Reference radius where the noninteracting trap ground state's radial
/// density `(4/√π)·r²e^{−r²}` falls below `1e-8`.
fn reference_radius() -> f64 {
    let density =
        |r: f64| 4.0 / libm::sqrt(core::f64::consts::PI) * r * r * libm::exp(-r * r) - 1e-8;
    let mut lo = 2.0_f64; // density still above cut here
    let mut hi = 10.0_f64; // far below cut
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if density(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Automatic radial cutoff for confined states: the noninteracting
/// reference radius, scaled up by how much the state's mean radius exceeds
/// the noninteracting mean `2/√π`. Free-space runs use a fixed default
/// instead (see the CLI layer); the coverage achieved by either choice is
/// visible in the normalization sum rule reported downstream.
pub fn auto_radial_extent(state: &VariationalState) -> Result<f64, CoreError> {
    const MEAN_R_NONINTERACTING: f64 = 1.128_379_167_095_512_6; // 2/√π
    let r0 = reference_radius();
    let ratio = mean_radius(state)? / MEAN_R_NONINTERACTING;
    Ok(r0 * ratio.max(1.0))
}
