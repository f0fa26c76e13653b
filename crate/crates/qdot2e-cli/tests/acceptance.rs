//! Acceptance suite: eight end-to-end checks of the physics this library
//! exists to compute, each against its stated tolerance. One test per
//! criterion; each prints a single `[criterion N] PASS` line with the
//! numbers behind the verdict (visible with `--nocapture`, and echoed by
//! the harness on failure).
//!
//! Tolerances and tiers:
//! - Reference energies and the convergence-table cells are checked at the
//!   tolerances the reference values are printed to.
//! - Property checks (monotonicity, dominance, limits) run at basis orders
//!   chosen so the property is resolved well beyond its margin; where a
//!   double-precision order-8 basis is not converged enough (large γ), the
//!   check escalates to order 12 in extended precision rather than
//!   asserting against truncation noise.

use qdot2e_cli::config::{
    default_sweep_grid, Format, GammaSpec, Mode, MuSpec, RSpec, ResolvedRun, StateKind,
};
use qdot2e_cli::record::{Entry, RunRecord};
use qdot2e_cli::runner::{self, RunKind};
use qdot2e_core::basis::{BasisSet, Parity};
use qdot2e_core::entanglement::{entropy_report, occupancy_spectrum};
use qdot2e_core::integrals::base_integral;
use qdot2e_core::linalg::svd;
use qdot2e_core::matrix::ModelParams;
use qdot2e_core::variational::{optimize_mu, solve_ground, Precision};
use qdot2e_core::wavefunction::{auto_radial_extent, gauss_legendre, kernel_stack, RadialGrid};

/// Established free-space helium ground-state energy (hartree).
const HELIUM_REFERENCE: f64 = -2.903724377;

/// A scaled-dot run request with the library defaults; criteria override
/// the fields they exercise.
fn dot_cfg() -> ResolvedRun {
    ResolvedRun {
        mode: Mode::ScaledDot,
        eta: 0.0,
        gamma: GammaSpec::Single(1.0),
        state: StateKind::Singlet,
        sz: 0,
        omega: 8,
        mu: MuSpec::Scan { lo: 0.2, hi: 10.0 },
        r_cut: RSpec::Auto,
        nmax: 300,
        lmax: 4,
        quad: 64,
        out: None,
        format: Format::Csv,
        cache_dir: None,
        precision: Precision::Double,
    }
}

fn ok_record(entry: &Entry) -> &RunRecord {
    match entry {
        Entry::Ok(rec) => rec,
        Entry::Err(e) => panic!("sweep point failed: gamma={} {}", e.gamma, e.error),
    }
}

// --------------------------------------------------------------------------

#[test]
fn criterion_1_free_space_helium_energy() {
    // Desk tier: order 10, double precision, fixed exponent 3.
    let basis = BasisSet::new(10, Parity::Even, 3.0).unwrap();
    let desk = solve_ground(&basis, ModelParams::helium(), Precision::Double).unwrap();
    let desk_err = (desk.energy - HELIUM_REFERENCE).abs();
    assert!(
        desk_err < 1e-6,
        "[criterion 1] FAIL — desk tier E = {:.12}, |Δ| = {desk_err:.3e} (need < 1e-6)",
        desk.energy
    );

    // Full tier: order 14 needs extended precision (the overlap passes
    // condition 1e16 and Cholesky breaks down in double).
    let basis = BasisSet::new(14, Parity::Even, 3.0).unwrap();
    let full = solve_ground(&basis, ModelParams::helium(), Precision::Extended).unwrap();
    let full_err = (full.energy - HELIUM_REFERENCE).abs();
    assert!(
        full_err < 1e-9,
        "[criterion 1] FAIL — full tier E = {:.12}, |Δ| = {full_err:.3e} (need < 1e-9)",
        full.energy
    );

    println!(
        "[criterion 1] PASS — helium E(Ω=10, f64) = {:.9} (|Δ| = {:.1e} < 1e-6), \
         E(Ω=14, extended) = {:.12} (|Δ| = {:.1e} < 1e-9)",
        desk.energy, desk_err, full.energy, full_err
    );
}

#[test]
fn criterion_2_convergence_table_reproduction() {
    let outcome = runner::table1(10).unwrap();
    let mut worst = 0.0_f64;
    for &(l_max, n_max, got, reference, delta, pass) in &outcome.cells {
        worst = worst.max(delta);
        assert!(
            pass,
            "[criterion 2] FAIL — cell (l_max={l_max}, n_max={n_max}): \
             L_ap = {got:.7} vs reference {reference:.7}, |Δ| = {delta:.2e} > {:.0e}",
            runner::TABLE1_TOL
        );
    }
    assert!(outcome.all_pass);
    println!(
        "[criterion 2] PASS — all six L_ap cells match the reference values, \
         worst |Δ| = {worst:.2e} (tolerance {:.0e})",
        runner::TABLE1_TOL
    );
}

#[test]
fn criterion_3_converged_linear_entropy() {
    // Converged tier for the helium linear entropy: order 10, the
    // canonical radial window R = 7.5 with 300 steps, partial waves to 4.
    let basis = BasisSet::new(10, Parity::Even, 3.0).unwrap();
    let state = solve_ground(&basis, ModelParams::helium(), Precision::Double).unwrap();
    let grid = RadialGrid::new(7.5, 300).unwrap();
    let report = entropy_report(&state, &grid, 4, 64, None).unwrap();
    let linear = report.linear.unwrap();
    let err = (linear - 0.0159).abs();
    assert!(
        err <= 1.5e-4,
        "[criterion 3] FAIL — L = {linear:.8}, |L − 0.0159| = {err:.2e} > 1.5e-4"
    );
    println!(
        "[criterion 3] PASS — converged linear entropy L = {linear:.8} \
         (within 1.5e-4 of 0.0159, the window spanned by published values)"
    );
}

#[test]
fn criterion_4_ionization_threshold() {
    let mut cfg = dot_cfg();
    cfg.eta = -2.0;
    let outcome = runner::gamma_c(&cfg, false).unwrap();
    let root = outcome.threshold.gamma_c;
    let err = (root - 0.8327).abs();
    assert!(
        err <= 1e-3,
        "[criterion 4] FAIL — gamma_c = {root:.6}, |Δ| = {err:.2e} > 1e-3"
    );
    let (g_lo, g_hi) = outcome.threshold.g_at_initial;
    assert!(
        g_lo * g_hi < 0.0,
        "[criterion 4] FAIL — initial bracket does not straddle a sign change"
    );
    println!(
        "[criterion 4] PASS — ionization threshold gamma_c = {root:.6} \
         (|Δ| = {err:.1e} from 0.8327, tolerance 1e-3), bracket [{:.3}, {:.3}]",
        outcome.threshold.bracket.0, outcome.threshold.bracket.1
    );
}

/// Solve the η = −0.4 singlet at one γ on the resolved tier — order 12 in
/// extended precision, exponent re-optimized near the order-8 seed, 600
/// radial steps — and return the two leading l = 0 occupancies.
///
/// The tier matters here: at order 8 the γ = 50 state (impurity charge
/// ηγ = −20, hydrogenically compact) carries occupancy truncation errors
/// of a few 1e-3, the same size as the λ increments the criterion tracks.
/// Order 12 with a doubled grid pushes that error to ~1e-4.
fn leading_l0_occupancies(gamma: f64) -> (f64, f64) {
    let params = ModelParams::scaled_dot(-0.4, gamma).unwrap();
    let seed = optimize_mu(params, 8, Parity::Even, (0.2, 10.0), Precision::Double).unwrap();
    let opt = optimize_mu(
        params,
        12,
        Parity::Even,
        (0.75 * seed.mu, 1.75 * seed.mu),
        Precision::Extended,
    )
    .unwrap();
    let r = auto_radial_extent(&opt.state).unwrap();
    let grid = RadialGrid::new(r, 600).unwrap();
    let kernels = kernel_stack(&opt.state, &[0], &grid, 64);
    let spec = occupancy_spectrum(&kernels).unwrap();
    let l0 = &spec.per_l[0];
    assert!(l0.len() >= 2, "need at least two l = 0 occupancies");
    (l0[0], l0[1])
}

#[test]
fn criterion_5_asymptotic_occupancy_doublet() {
    // Attractive impurity, singlet sector: the two leading l = 0
    // occupancies must close in on 1/2 monotonically as γ grows, each
    // within 0.05 of 1/2 by γ = 50.
    let gammas = [10.0, 20.0, 50.0];
    let mut d0 = Vec::new();
    let mut d1 = Vec::new();
    for &g in &gammas {
        let (l0, l1) = leading_l0_occupancies(g);
        d0.push((l0 - 0.5).abs());
        d1.push((l1 - 0.5).abs());
    }
    for k in 1..gammas.len() {
        assert!(
            d0[k] < d0[k - 1] && d1[k] < d1[k - 1],
            "[criterion 5] FAIL — distances to 1/2 not monotone: \
             λ00 {d0:?}, λ10 {d1:?} over γ = {gammas:?}"
        );
    }
    assert!(
        d0[2] < 0.05 && d1[2] < 0.05,
        "[criterion 5] FAIL — at γ = 50: |λ00 − ½| = {:.4}, |λ10 − ½| = {:.4} (need < 0.05)",
        d0[2],
        d1[2]
    );
    println!(
        "[criterion 5] PASS — η = −0.4 singlet doublet: |λ00 − ½| = \
         {:.3e} → {:.3e} → {:.3e}, |λ10 − ½| = {:.3e} → {:.3e} → {:.3e} \
         over γ = 10, 20, 50 (monotone, final < 0.05)",
        d0[0], d0[1], d0[2], d1[0], d1[1], d1[2]
    );
}

#[test]
fn criterion_6_triplet_disentanglement() {
    // Triplet at γ = 50 with the attractive impurity: a single occupied
    // pair, λ⁻00 → 1/2, and the s_z = ±1 entropy below 0.05 bits. The
    // order-8 double-precision tier leaves S_T ≈ 0.13, still dominated by
    // basis truncation, so this criterion runs at order 12 in extended
    // precision with the exponent re-optimized around the order-8 seed.
    let params = ModelParams::scaled_dot(-0.4, 50.0).unwrap();
    let seed = optimize_mu(params, 8, Parity::Odd, (0.2, 10.0), Precision::Double).unwrap();

    let refined = optimize_mu(
        params,
        12,
        Parity::Odd,
        (0.75 * seed.mu, 1.75 * seed.mu),
        Precision::Extended,
    )
    .unwrap();
    let r = auto_radial_extent(&refined.state).unwrap();
    let grid = RadialGrid::new(r, 300).unwrap();
    let kernels = kernel_stack(&refined.state, &[0, 1, 2, 3, 4, 5, 6, 7, 8], &grid, 64);
    let spec = occupancy_spectrum(&kernels).unwrap();
    let lam00 = spec.per_l[0][0];
    let report = entropy_report(&refined.state, &grid, 8, 64, Some(1)).unwrap();

    assert!(
        (lam00 - 0.5).abs() <= 0.05,
        "[criterion 6] FAIL — λ⁻00 = {lam00:.5}, |Δ| from ½ = {:.3e} > 0.05",
        (lam00 - 0.5).abs()
    );
    assert!(
        report.s_vn <= 0.05,
        "[criterion 6] FAIL — S_T(±1) = {:.5} > 0.05 at γ = 50",
        report.s_vn
    );
    println!(
        "[criterion 6] PASS — η = −0.4 triplet at γ = 50 (Ω = 12, extended): \
         λ⁻00 = {lam00:.5} (|Δ| = {:.2e} from ½), S_T(±1) = {:.4} ≤ 0.05",
        (lam00 - 0.5).abs(),
        report.s_vn
    );
}

/// Brute-force cubature of `f(s,t,u)·e^{−βs}` over the ordered wedge
/// `0 ≤ t ≤ u ≤ s`, mapping the wedge to a box (`u = s·y`, `t = u·x`).
fn wedge_cubature(f: impl Fn(f64, f64, f64) -> f64, beta: f64) -> f64 {
    let s_cut = 60.0 / beta;
    let (xs, ws) = gauss_legendre(160);
    let (xi, wi) = gauss_legendre(40);
    let mut total = 0.0;
    for (qs, cs) in xs.iter().zip(ws.iter()) {
        let s = (qs + 1.0) / 2.0 * s_cut;
        let w_s = cs / 2.0 * s_cut * (-beta * s).exp();
        let mut inner = 0.0;
        for (qy, cy) in xi.iter().zip(wi.iter()) {
            let y = (qy + 1.0) / 2.0;
            let u = s * y;
            for (qx, cx) in xi.iter().zip(wi.iter()) {
                let x = (qx + 1.0) / 2.0;
                inner += cy / 2.0 * cx / 2.0 * s * s * y * f(s, u * x, u);
            }
        }
        total += w_s * inner;
    }
    total
}

#[test]
fn criterion_7_exact_limit_invariants() {
    // (a) Noninteracting limit γ = 0: the exact ground energy is 3 (two
    // isotropic oscillator quanta); the variational value must sit on or
    // above it and the singlet entropy must vanish.
    let cfg = dot_cfg();
    let free = runner::compute_point(&cfg, 0.0, RunKind::Entropy).unwrap();
    assert!(
        free.energy >= 3.0 - 1e-12 && free.energy <= 3.0 + 1e-3,
        "[criterion 7] FAIL — γ = 0 energy {} violates the variational bound at 3",
        free.energy
    );
    let s0 = free.s_vn.unwrap();
    assert!(
        s0 <= 1e-3,
        "[criterion 7] FAIL — γ = 0 singlet entropy {s0:.2e} > 1e-3"
    );

    // (b) The two triplet spin reductions differ by exactly one bit of
    // spin mixing: S_T(0) − S_T(±1) = 1 up to one rounding step.
    let mut tcfg = dot_cfg();
    tcfg.state = StateKind::Triplet;
    tcfg.sz = 1;
    let t_pm = runner::compute_point(&tcfg, 2.0, RunKind::Entropy).unwrap();
    tcfg.sz = 0;
    let t_0 = runner::compute_point(&tcfg, 2.0, RunKind::Entropy).unwrap();
    let bit = t_0.s_vn.unwrap() - t_pm.s_vn.unwrap();
    assert!(
        (bit - 1.0).abs() <= 1e-15,
        "[criterion 7] FAIL — S_T(0) − S_T(±1) = {bit} (must be 1 exactly)"
    );

    // (c) Normalization sum rules: the retained occupancies account for
    // the full norm to 1e-3 in both sectors at a moderate coupling.
    let s_rec = runner::compute_point(&cfg, 2.0, RunKind::Entropy).unwrap();
    for (name, rec) in [("singlet", &s_rec), ("triplet", &t_pm)] {
        let defect = rec.trunc_defect.unwrap();
        assert!(
            defect <= 1e-3,
            "[criterion 7] FAIL — {name} occupancy sum rule off by {defect:.2e} > 1e-3"
        );
    }

    // (d) Odd-sector singular values come in antisymmetry-forced pairs;
    // members must agree to 1e-8 relative.
    let params = ModelParams::scaled_dot(0.0, 2.0).unwrap();
    let opt = optimize_mu(params, 8, Parity::Odd, (0.2, 10.0), Precision::Double).unwrap();
    let r = auto_radial_extent(&opt.state).unwrap();
    let grid = RadialGrid::new(r, 300).unwrap();
    let mut worst_pair = 0.0_f64;
    for kernel in kernel_stack(&opt.state, &[0, 1, 2], &grid, 64) {
        let sigma = svd(&kernel.m).unwrap().sigma;
        let mut i = 0;
        while i + 1 < sigma.len() && sigma[i] > 1e-9 * sigma[0] {
            let rel = (sigma[i] - sigma[i + 1]).abs() / sigma[i];
            worst_pair = worst_pair.max(rel);
            assert!(
                rel <= 1e-8,
                "[criterion 7] FAIL — singular values {} and {} differ by {rel:.2e} relative \
                 (l = {})",
                sigma[i],
                sigma[i + 1],
                kernel.l
            );
            i += 2;
        }
    }

    // (e) The closed-form wedge integrals against independent cubature.
    let mut worst_int = 0.0_f64;
    for &(a, b, c) in &[(0u32, 0u32, 0u32), (2, 1, 0), (1, 1, 1), (3, 0, 2), (2, 4, 3)] {
        for &beta in &[2.0, 6.0] {
            let exact = base_integral::<f64>(a, b, c, beta).unwrap();
            let weight =
                move |s: f64, t: f64, u: f64| s.powi(a as i32) * u.powi(b as i32) * t.powi(c as i32);
            let numeric = wedge_cubature(weight, beta);
            let rel = (exact - numeric).abs() / exact.abs();
            worst_int = worst_int.max(rel);
            assert!(
                rel <= 1e-10,
                "[criterion 7] FAIL — base integral ({a},{b},{c};β={beta}) off by {rel:.2e}"
            );
        }
    }

    // (f) Grid refinement of the convergence table is monotone in n_max.
    let table = runner::table1(10).unwrap();
    for l in [0u32, 1] {
        let row: Vec<f64> = table
            .cells
            .iter()
            .filter(|c| c.0 == l)
            .map(|c| c.2)
            .collect();
        assert!(
            row[0] > row[1] && row[1] > row[2],
            "[criterion 7] FAIL — L_ap row l_max={l} not decreasing over n_max: {row:?}"
        );
    }

    println!(
        "[criterion 7] PASS — γ = 0: E = {:.8} ≥ 3, S_S = {s0:.2e}; spin-mixing bit = {bit}; \
         sum-rule defects ≤ 1e-3; worst pair split {worst_pair:.1e}; worst integral {worst_int:.1e}; \
         table rows monotone",
        free.energy
    );
}

#[test]
fn criterion_8_monotonicity_and_dominance() {
    // Entanglement properties over the default sweep grid (40 log-spaced
    // γ in [0.05, 100]). Partial waves to l = 8 throughout: the large-γ
    // states put real weight beyond l = 4 and the comparisons should not
    // hinge on clipped tails.
    //
    // The order-8 double tier resolves every property except the
    // donor-vs-bare comparison at the five grid points above γ = 40,
    // where its truncation error exceeds the true (positive) margin; those
    // points are re-verified at order 12 in extended precision, seeded by
    // the order-8 exponent.
    let grid_spec = default_sweep_grid();
    let grid = grid_spec.expand();
    assert_eq!(grid.len(), 40);

    let mut bare = dot_cfg();
    bare.lmax = 8;
    bare.gamma = grid_spec;
    let bare_recs: Vec<RunRecord> = runner::sweep(&bare).iter().map(|e| ok_record(e).clone()).collect();

    let mut donor = bare.clone();
    donor.eta = 1.0;
    let donor_recs: Vec<RunRecord> =
        runner::sweep(&donor).iter().map(|e| ok_record(e).clone()).collect();

    let mut triplet = bare.clone();
    triplet.state = StateKind::Triplet;
    triplet.sz = 1;
    let triplet_recs: Vec<RunRecord> =
        runner::sweep(&triplet).iter().map(|e| ok_record(e).clone()).collect();

    // (1) S_S(η = 0, γ) strictly increasing across the grid.
    for k in 1..grid.len() {
        let (prev, next) = (bare_recs[k - 1].s_vn.unwrap(), bare_recs[k].s_vn.unwrap());
        assert!(
            next > prev,
            "[criterion 8] FAIL — S_S(η=0) not strictly increasing: \
             S({:.4}) = {prev:.6} vs S({:.4}) = {next:.6}",
            grid[k - 1],
            grid[k]
        );
    }

    // (2) Donor dominance S_S(η=1) ≥ S_S(η=0) at every grid point.
    let mut min_margin_bulk = f64::INFINITY;
    let mut escalated = Vec::new();
    for k in 0..grid.len() {
        let s_bare = bare_recs[k].s_vn.unwrap();
        let s_donor = donor_recs[k].s_vn.unwrap();
        if grid[k] <= 40.0 {
            min_margin_bulk = min_margin_bulk.min(s_donor - s_bare);
            assert!(
                s_donor >= s_bare,
                "[criterion 8] FAIL — dominance violated at γ = {:.4}: \
                 S(η=1) = {s_donor:.6} < S(η=0) = {s_bare:.6}",
                grid[k]
            );
        } else {
            // Escalated tier: order 12, extended precision, exponent
            // re-optimized near the order-8 seed.
            let mut point = |cfg: &ResolvedRun, recs: &[RunRecord]| -> f64 {
                let mut esc = cfg.clone();
                esc.omega = 12;
                esc.precision = Precision::Extended;
                let seed = recs[k].mu;
                esc.mu = MuSpec::Scan {
                    lo: 0.75 * seed,
                    hi: 1.75 * seed,
                };
                runner::compute_point(&esc, grid[k], RunKind::Entropy)
                    .unwrap()
                    .s_vn
                    .unwrap()
            };
            let s_bare_12 = point(&bare, &bare_recs);
            let s_donor_12 = point(&donor, &donor_recs);
            assert!(
                s_donor_12 >= s_bare_12,
                "[criterion 8] FAIL — dominance violated at γ = {:.4} (order-12 tier): \
                 S(η=1) = {s_donor_12:.6} < S(η=0) = {s_bare_12:.6}",
                grid[k]
            );
            escalated.push((grid[k], s_donor_12 - s_bare_12));
        }
    }

    // (3) Singlet entropy at or above the triplet s_z = ±1 entropy at
    // every sampled point except near γ = 0, where both vanish and the
    // ordering is below resolution. "Near" here is γ < 0.3; the observed
    // ordering below that is reported but not asserted.
    let mut min_st_margin = f64::INFINITY;
    let mut held_below = true;
    for k in 0..grid.len() {
        let margin = bare_recs[k].s_vn.unwrap() - triplet_recs[k].s_vn.unwrap();
        if grid[k] >= 0.3 {
            min_st_margin = min_st_margin.min(margin);
            assert!(
                margin >= 0.0,
                "[criterion 8] FAIL — triplet entropy above singlet at γ = {:.4} \
                 (margin {margin:.3e})",
                grid[k]
            );
        } else if margin < 0.0 {
            held_below = false;
        }
    }

    let esc_text: Vec<String> = escalated
        .iter()
        .map(|(g, m)| format!("γ={g:.0}: +{m:.3}"))
        .collect();
    println!(
        "[criterion 8] PASS — S_S(η=0) strictly increasing over the 40-point grid; \
         donor dominance holds (min margin {min_margin_bulk:.3e} for γ ≤ 40; order-12 tier {}); \
         singlet ≥ triplet for γ ≥ 0.3 (min margin {min_st_margin:.3e}; ordering below 0.3 held: \
         {held_below})",
        esc_text.join(", ")
    );
}
