//! Natural-orbital occupancies and entanglement entropies.
//!
//! Diagonalizing the discretized partial-wave kernels gives the
//! Schmidt/Slater coefficients `k_nl`: symmetric eigenvalues in the even
//! (singlet) sector, paired singular values in the odd (triplet) sector.
//! Occupancies follow as `λ_nl = (4π·k_nl/(2l+1))²`, each `(2l+1)`-fold
//! degenerate in the even sector and `2(2l+1)`-fold in the odd one; the
//! degeneracy factors are kept symbolic (`g_l` weights in the sums) rather
//! than materialized. From the occupancies come the von Neumann entropies
//! of the reduced one-electron state — `S_S` for the singlet,
//! `S_T^{s_z}` for the triplet components — and the singlet linear
//! entropy `L`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::basis::Parity;
use crate::linalg::{svd, sym_eig};
use crate::variational::VariationalState;
use crate::wavefunction::{kernel_stack, PartialWaveKernel, RadialGrid};
use crate::CoreError;

/// Occupancies below this are indistinguishable from diagonalization noise
/// and are dropped before any entropy sum; the dropped mass shows up in the
/// truncation defect instead of as `log`-of-noise terms.
pub const OCCUPANCY_FLOOR: f64 = 1e-12;

/// Relative mismatch allowed between the two members of an odd-sector
/// singular-value pair before it is reported as a structural defect.
pub const PAIRING_RTOL: f64 = 1e-8;

const FOUR_PI: f64 = 4.0 * core::f64::consts::PI;

/// Occupancy lists per relative angular momentum `l = 0..=l_max`.
#[derive(Clone, Debug)]
pub struct OccupancySpectrum {
    pub parity: Parity,
    /// `per_l[l]` is the descending list of retained occupancies `λ_nl`.
    pub per_l: Vec<Vec<f64>>,
    /// `|1 − Σ_{n,l} g_l·λ_nl|` over the retained occupancies, with
    /// `g_l = 2l+1` (even) or `2(2l+1)` (odd). Measures everything lost to
    /// the radial cutoff, the `l` cutoff, the grid, and the occupancy
    /// floor at once.
    pub truncation_defect: f64,
}

impl OccupancySpectrum {
    fn degeneracy(&self, l: usize) -> f64 {
        let g = 2.0 * l as f64 + 1.0;
        match self.parity {
            Parity::Even => g,
            Parity::Odd => 2.0 * g,
        }
    }

    /// `Σ g_l λ_nl` over the retained spectrum — 1 up to the defect.
    pub fn weighted_mass(&self) -> f64 {
        let mut acc = 0.0;
        for (l, lams) in self.per_l.iter().enumerate() {
            let g = self.degeneracy(l);
            for &lam in lams {
                acc += g * lam;
            }
        }
        acc
    }
}

/// Occupancies of one partial-wave kernel, descending, floor applied.
///
/// Even parity: signed symmetric eigenvalues `k` of `M`, one occupancy per
/// eigenvector. Odd parity: singular values of `M`, which the antisymmetry
/// forces into equal pairs — one occupancy per pair. A pair mismatch above
/// [`PAIRING_RTOL`] (relative) on a value large enough to matter is
/// reported as [`CoreError::PairingDefect`]: it signals an inconsistent
/// grid or quadrature, not a physical spectrum.
pub fn occupancies(kernel: &PartialWaveKernel) -> Result<Vec<f64>, CoreError> {
    let scale = FOUR_PI / (2.0 * kernel.l as f64 + 1.0);
    let mut out: Vec<f64> = Vec::new();
    match kernel.parity {
        Parity::Even => {
            let (vals, _) = sym_eig(&kernel.m)?;
            for k in vals {
                let lam = (scale * k) * (scale * k);
                if lam >= OCCUPANCY_FLOOR {
                    out.push(lam);
                }
            }
        }
        Parity::Odd => {
            let s = svd(&kernel.m)?;
            let sigma = s.sigma;
            let mut i = 0usize;
            while i < sigma.len() {
                let lam = (scale * sigma[i]) * (scale * sigma[i]);
                if lam < OCCUPANCY_FLOOR {
                    break; // descending: everything further is floor noise
                }
                let partner = if i + 1 < sigma.len() { sigma[i + 1] } else { -1.0 };
                let rel = (sigma[i] - partner).abs() / sigma[i];
                if rel > PAIRING_RTOL {
                    return Err(CoreError::PairingDefect {
                        index: i,
                        value: rel,
                    });
                }
                out.push(lam);
                i += 2;
            }
        }
    }
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(out)
}

/// Assemble the spectrum from kernels for `l = 0..=l_max` (in that order,
/// one parity, one grid).
pub fn occupancy_spectrum(kernels: &[PartialWaveKernel]) -> Result<OccupancySpectrum, CoreError> {
    if kernels.is_empty() {
        return Err(CoreError::Domain("spectrum needs at least the l = 0 kernel"));
    }
    let parity = kernels[0].parity;
    let n = kernels[0].grid.n_max();
    for (l, k) in kernels.iter().enumerate() {
        if k.l as usize != l {
            return Err(CoreError::Domain("kernels must cover l = 0..=l_max in order"));
        }
        if k.parity != parity || k.grid.n_max() != n {
            return Err(CoreError::Domain("kernels must share parity and grid"));
        }
    }
    let mut per_l = Vec::with_capacity(kernels.len());
    for k in kernels {
        per_l.push(occupancies(k)?);
    }
    let mut spec = OccupancySpectrum {
        parity,
        per_l,
        truncation_defect: 0.0,
    };
    spec.truncation_defect = (1.0 - spec.weighted_mass()).abs();
    Ok(spec)
}

fn occupancy_entropy_sum(spec: &OccupancySpectrum) -> f64 {
    // −Σ g_l λ log₂λ over retained occupancies; zero terms contribute 0
    // by the floor (0·log 0 := 0 convention).
    let mut acc = 0.0;
    for (l, lams) in spec.per_l.iter().enumerate() {
        let g = 2.0 * l as f64 + 1.0;
        for &lam in lams {
            acc -= g * lam * libm::log2(lam);
        }
    }
    acc
}

/// Singlet von Neumann entropy `S_S = −Σ (2l+1) λ⁺ log₂ λ⁺` in bits.
pub fn entropy_singlet(spec: &OccupancySpectrum) -> f64 {
    assert!(
        spec.parity == Parity::Even,
        "singlet entropy needs an even-sector spectrum"
    );
    occupancy_entropy_sum(spec)
}

/// Triplet von Neumann entropy in bits:
/// `S_T^{±1} = −1 − 2Σ (2l+1) λ⁻ log₂ λ⁻`, and `S_T^{0}` is that plus 1
/// exactly (the two spin reductions differ only in one mixing bit).
pub fn entropy_triplet(spec: &OccupancySpectrum, s_z: i8) -> f64 {
    assert!(
        spec.parity == Parity::Odd,
        "triplet entropy needs an odd-sector spectrum"
    );
    assert!(matches!(s_z, -1 | 0 | 1), "s_z must be 0 or ±1");
    let base = -1.0 + 2.0 * occupancy_entropy_sum(spec);
    if s_z == 0 {
        base + 1.0
    } else {
        base
    }
}

/// Singlet linear entropy `L = 1 − Σ (2l+1) (λ⁺)²`.
pub fn linear_entropy(spec: &OccupancySpectrum) -> f64 {
    assert!(
        spec.parity == Parity::Even,
        "linear entropy needs an even-sector spectrum"
    );
    let mut acc = 0.0;
    for (l, lams) in spec.per_l.iter().enumerate() {
        let g = 2.0 * l as f64 + 1.0;
        for &lam in lams {
            acc += g * lam * lam;
        }
    }
    1.0 - acc
}

/// One entropy evaluation with its resolution parameters attached.
#[derive(Clone, Debug)]
pub struct EntropyReport {
    pub parity: Parity,
    /// `S_S` (even) or `S_T^{s_z}` (odd), in bits.
    pub s_vn: f64,
    /// Spin projection for the triplet; `None` for the singlet.
    pub s_z: Option<i8>,
    /// Linear entropy; singlet only.
    pub linear: Option<f64>,
    pub truncation_defect: f64,
    pub l_max: u32,
    pub n_max: usize,
    pub r_cut: f64,
    pub quad_order: usize,
}

/// Full analysis pipeline for one solved state: kernels for
/// `l = 0..=l_max`, spectrum, entropies.
///
/// `s_z` must be `None` for an even-sector state and `Some(0 | ±1)` for an
/// odd-sector one.
pub fn entropy_report(
    state: &VariationalState,
    grid: &RadialGrid,
    l_max: u32,
    quad_order: usize,
    s_z: Option<i8>,
) -> Result<EntropyReport, CoreError> {
    match (state.basis.parity, s_z) {
        (Parity::Even, None) => {}
        (Parity::Odd, Some(-1 | 0 | 1)) => {}
        (Parity::Even, Some(_)) => {
            return Err(CoreError::Domain("s_z does not apply to a singlet state"));
        }
        (Parity::Odd, _) => {
            return Err(CoreError::Domain("triplet report needs s_z of 0 or ±1"));
        }
    }
    let ls: Vec<u32> = (0..=l_max).collect();
    let kernels = kernel_stack(state, &ls, grid, quad_order);
    let spec = occupancy_spectrum(&kernels)?;
    let (s_vn, linear) = match state.basis.parity {
        Parity::Even => (entropy_singlet(&spec), Some(linear_entropy(&spec))),
        Parity::Odd => (entropy_triplet(&spec, s_z.unwrap()), None),
    };
    Ok(EntropyReport {
        parity: spec.parity,
        s_vn,
        s_z,
        linear,
        truncation_defect: spec.truncation_defect,
        l_max,
        n_max: grid.n_max(),
        r_cut: grid.r_cut(),
        quad_order,
    })
}

/// One cell of a linear-entropy convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceCell {
    pub l_max: u32,
    pub n_max: usize,
    pub r_cut: f64,
    pub quad_order: usize,
    pub l_ap: f64,
}

/// Linear-entropy convergence study over `(l_max, n_max)` resolution pairs
/// at fixed radial cutoff, for a singlet state.
///
/// Cells are emitted row-major in the order given (`l_max` outer, `n_max`
/// inner). Kernels are computed once per `n_max` at the largest `l_max`
/// and smaller-`l_max` cells reuse the per-`l` sums, so the table costs
/// one kernel stack per column.
pub fn convergence_table(
    state: &VariationalState,
    r_cut: f64,
    l_maxes: &[u32],
    n_maxes: &[usize],
    quad_order: usize,
) -> Result<Vec<ConvergenceCell>, CoreError> {
    if state.basis.parity != Parity::Even {
        return Err(CoreError::Domain("convergence table is defined for singlet states"));
    }
    let l_top = l_maxes.iter().copied().max().unwrap_or(0);
    let ls: Vec<u32> = (0..=l_top).collect();
    // per-column (n_max) list of per-l Σλ² values
    let mut sq_sums: Vec<Vec<f64>> = Vec::with_capacity(n_maxes.len());
    for &n_max in n_maxes {
        let grid = RadialGrid::new(r_cut, n_max)?;
        let kernels = kernel_stack(state, &ls, &grid, quad_order);
        let mut sums = Vec::with_capacity(ls.len());
        for k in &kernels {
            let lams = occupancies(k)?;
            let g = 2.0 * k.l as f64 + 1.0;
            sums.push(lams.iter().map(|&x| g * x * x).sum::<f64>());
        }
        sq_sums.push(sums);
    }
    let mut cells = Vec::with_capacity(l_maxes.len() * n_maxes.len());
    for &l_max in l_maxes {
        for (col, &n_max) in n_maxes.iter().enumerate() {
            let l_ap = 1.0 - sq_sums[col][..=l_max as usize].iter().sum::<f64>();
            cells.push(ConvergenceCell {
                l_max,
                n_max,
                r_cut,
                quad_order,
                l_ap,
            });
        }
    }
    Ok(cells)
}

/// CSV rendering of a convergence table (header + one line per cell).
pub fn convergence_table_csv(cells: &[ConvergenceCell]) -> String {
    let mut out = String::from("l_max,n_max,R,Q,L_ap\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.7}",
            c.l_max, c.n_max, c.r_cut, c.quad_order, c.l_ap
        );
    }
    out
}
