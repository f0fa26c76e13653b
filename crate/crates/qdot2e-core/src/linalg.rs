//! Dense linear algebra: symmetric eigensolver, symmetric-definite
//! generalized eigensolver, SVD, and tridiagonal solvers.
//!
//! Everything is hand-rolled on top of a plain row-major [`Matrix`] for one
//! reason: the generalized eigensolve must run in *double-double* precision
//! (Hylleraas overlap matrices pass `cond(S) ≈ 1e18` around basis order
//! `Ω = 12`, beyond any `f64` factorization), and no mainstream Rust linear
//! algebra crate is generic over a compensated scalar while staying
//! `no_std`. The algorithms are the classical ones — Householder
//! tridiagonalization, implicit-shift QL, Cholesky reduction of the pencil,
//! Golub-Kahan-Reinsch SVD, Sturm-sequence bisection — sized for the dense
//! symmetric problems of a few hundred rows this crate actually produces.
//!
//! The SVD and the tridiagonal solvers are `f64`-only: they act on kernel
//! discretizations and finite-difference operators whose entries are already
//! rounded to double, so extended precision would buy nothing there.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Real;
use crate::CoreError;

/// Dense row-major matrix over the working scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Real> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![R::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, R::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    /// Set both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: R) {
        self.set(i, j, v);
        if i != j {
            self.set(j, i, v);
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| *self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| *self.at(j, i))
    }

    pub fn scaled(&self, f: R) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * f).collect(),
        }
    }

    pub fn matvec(&self, x: &[R]) -> Vec<R> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = R::ZERO;
                for (j, &xj) in x.iter().enumerate() {
                    acc += *self.at(i, j) * xj;
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> R {
        let mut m = R::ZERO;
        for &v in &self.data {
            m = m.max_by_val(v.abs());
        }
        m
    }

    /// Largest absolute asymmetry `max |Aᵢⱼ − Aⱼᵢ|` (zero for square
    /// symmetric input; callers use it as a contract check).
    pub fn symmetry_defect(&self) -> R {
        let mut m = R::ZERO;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                m = m.max_by_val((*self.at(i, j) - *self.at(j, i)).abs());
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> R {
        let mut acc = R::ZERO;
        for &v in &self.data {
            acc += v * v;
        }
        acc.sqrt()
    }

    /// Round every entry to `f64` (identity for `f64` matrices).
    pub fn map_to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_f64()).collect(),
        }
    }
}

fn check_square_symmetric<R: Real>(a: &Matrix<R>, what: &'static str) -> Result<(), CoreError> {
    if a.nrows() != a.ncols() {
        return Err(CoreError::Domain(what));
    }
    // Tolerance: half the scalar's digits, scaled by the matrix magnitude —
    // loose enough for honestly symmetric data assembled in floating point,
    // tight enough to reject transposition mistakes outright.
    let tol = R::EPSILON.sqrt() * a.max_abs();
    if a.symmetry_defect() > tol {
        return Err(CoreError::Domain(what));
    }
    Ok(())
}

/// Cholesky factorization `A = L·Lᵀ` of a symmetric positive-definite matrix,
/// with a cheap condition estimate `(max diag(L) / min diag(L))²` from the
/// pivot spread.
///
/// A non-positive pivot aborts with [`CoreError::IllConditionedOverlap`]
/// carrying the pivot index and the estimate accumulated so far; for the
/// overlap matrices this crate feeds in, that failure is the practical
/// signal that the basis order exceeds the working precision.
#[derive(Clone, Debug)]
pub struct CholeskyFactor<R: Real> {
    pub l: Matrix<R>,
    pub cond_estimate: f64,
}

pub fn cholesky<R: Real>(a: &Matrix<R>) -> Result<CholeskyFactor<R>, CoreError> {
    check_square_symmetric(a, "cholesky requires a square symmetric matrix")?;
    let n = a.nrows();
    let mut l = Matrix::zeros(n, n);
    let mut min_piv = f64::INFINITY;
    let mut max_piv = 0.0_f64;
    for j in 0..n {
        let mut d = *a.at(j, j);
        for k in 0..j {
            let ljk = *l.at(j, k);
            d -= ljk * ljk;
        }
        if !(d > R::ZERO) {
            let cond = if min_piv > 0.0 && min_piv.is_finite() {
                (max_piv / min_piv) * (max_piv / min_piv)
            } else {
                f64::INFINITY
            };
            return Err(CoreError::IllConditionedOverlap {
                pivot: j,
                cond_estimate: cond,
                mu: None,
            });
        }
        let piv = d.sqrt();
        let piv_f = piv.to_f64();
        min_piv = min_piv.min(piv_f);
        max_piv = max_piv.max(piv_f);
        l.set(j, j, piv);
        for i in (j + 1)..n {
            let mut v = *a.at(i, j);
            for k in 0..j {
                v -= *l.at(i, k) * *l.at(j, k);
            }
            l.set(i, j, v / piv);
        }
    }
    let r = max_piv / min_piv;
    Ok(CholeskyFactor {
        l,
        cond_estimate: r * r,
    })
}

/// Forward-substitute `L y = b` in place (`l` lower triangular).
pub fn solve_lower<R: Real>(l: &Matrix<R>, b: &mut [R]) {
    let n = l.nrows();
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v -= *l.at(i, k) * b[k];
        }
        b[i] = v / *l.at(i, i);
    }
}

/// Back-substitute `Lᵀ x = b` in place.
pub fn solve_lower_transpose<R: Real>(l: &Matrix<R>, b: &mut [R]) {
    let n = l.nrows();
    for i in (0..n).rev() {
        let mut v = b[i];
        for k in (i + 1)..n {
            v -= *l.at(k, i) * b[k];
        }
        b[i] = v / *l.at(i, i);
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form with
/// accumulated orthogonal transforms (EISPACK `tred2` lineage): on return,
/// `q` holds the orthogonal matrix, `d` the diagonal and `e[1..]` the
/// subdiagonal.
fn tridiagonalize<R: Real>(q: &mut Matrix<R>, d: &mut [R], e: &mut [R]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = R::ZERO;
        if l > 0 {
            let mut scale = R::ZERO;
            for k in 0..=l {
                scale += q.at(i, k).abs();
            }
            if scale == R::ZERO {
                e[i] = *q.at(i, l);
            } else {
                for k in 0..=l {
                    let v = *q.at(i, k) / scale;
                    q.set(i, k, v);
                    h += v * v;
                }
                let f = *q.at(i, l);
                let g = if f >= R::ZERO { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                q.set(i, l, f - g);
                let mut f_acc = R::ZERO;
                for j in 0..=l {
                    q.set(j, i, *q.at(i, j) / h);
                    let mut g_acc = R::ZERO;
                    for k in 0..=j {
                        g_acc += *q.at(j, k) * *q.at(i, k);
                    }
                    for k in (j + 1)..=l {
                        g_acc += *q.at(k, j) * *q.at(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * *q.at(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let fj = *q.at(i, j);
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        let v = *q.at(j, k) - (fj * e[k] + gj * *q.at(i, k));
                        q.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = *q.at(i, l);
        }
        d[i] = h;
    }
    d[0] = R::ZERO;
    e[0] = R::ZERO;
    for i in 0..n {
        if d[i] != R::ZERO {
            for j in 0..i {
                let mut g = R::ZERO;
                for k in 0..i {
                    g += *q.at(i, k) * *q.at(k, j);
                }
                for k in 0..i {
                    let v = *q.at(k, j) - g * *q.at(k, i);
                    q.set(k, j, v);
                }
            }
        }
        d[i] = *q.at(i, i);
        q.set(i, i, R::ONE);
        for j in 0..i {
            q.set(j, i, R::ZERO);
            q.set(i, j, R::ZERO);
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix with
/// transform accumulation (EISPACK `tql2` lineage). `d` holds the diagonal
/// (eigenvalues on return), `e[1..]` the subdiagonal; the columns of `z`
/// are rotated into eigenvectors.
fn ql_implicit<R: Real>(d: &mut [R], e: &mut [R], z: &mut Matrix<R>) -> Result<(), CoreError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = R::ZERO;

    // Deflation needs an absolute floor as well as the relative test: a
    // matrix whose spectrum spans many orders of magnitude (natural-orbital
    // kernels reach eigenvalues ~1e−20 of the norm) has diagonal entries so
    // small that `|e| ≤ ε·(|d_m|+|d_m+1|)` can never be met — the rotations
    // stall at rounding level of the *matrix* scale, not the local one.
    // Treating `|e| ≤ ε·‖T‖_∞` as converged perturbs eigenvalues by at most
    // ε·‖T‖, the same bound the dense reduction already carries.
    let mut anorm = R::ZERO;
    for i in 0..n {
        let row = d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { R::ZERO };
        if row > anorm {
            anorm = row;
        }
    }
    let floor = R::EPSILON * anorm;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= R::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(CoreError::EigenNoConvergence { index: l });
            }
            // Wilkinson-style shift from the leading 2×2.
            let mut g = (d[l + 1] - d[l]) / (e[l] + e[l]);
            let mut r = g.hypot(R::ONE);
            let denom = g + if g >= R::ZERO { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = R::ONE;
            let mut c = R::ONE;
            let mut p = R::ZERO;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == R::ZERO {
                    // Rotation annihilated early: deflate and restart.
                    d[i + 1] -= p;
                    e[m] = R::ZERO;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + (c + c) * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = *z.at(k, i + 1);
                    z.set(k, i + 1, s * *z.at(k, i) + c * f);
                    z.set(k, i, c * *z.at(k, i) - s * f);
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = R::ZERO;
        }
    }
    Ok(())
}

/// Ascending-order sort of an eigensystem by value, with a deterministic
/// eigenvector sign: the first component exceeding `1e-8` of the column's
/// max magnitude is made positive.
fn sort_and_fix_signs<R: Real>(values: &mut [R], vectors: &mut Matrix<R>) {
    let n = values.len();
    // Selection sort with explicit column swaps: n is a few hundred at most
    // and this keeps the permutation trivially deterministic.
    for i in 0..n {
        let mut k = i;
        for j in (i + 1)..n {
            if values[j] < values[k] {
                k = j;
            }
        }
        if k != i {
            values.swap(i, k);
            for r in 0..vectors.nrows() {
                let a = *vectors.at(r, i);
                let b = *vectors.at(r, k);
                vectors.set(r, i, b);
                vectors.set(r, k, a);
            }
        }
    }
    let threshold = R::from_f64(1e-8);
    for j in 0..n {
        let mut maxmag = R::ZERO;
        for i in 0..vectors.nrows() {
            maxmag = maxmag.max_by_val(vectors.at(i, j).abs());
        }
        let cut = threshold * maxmag;
        for i in 0..vectors.nrows() {
            let v = *vectors.at(i, j);
            if v.abs() > cut {
                if v < R::ZERO {
                    for r in 0..vectors.nrows() {
                        let w = *vectors.at(r, j);
                        vectors.set(r, j, -w);
                    }
                }
                break;
            }
        }
    }
}

/// Full eigendecomposition of a symmetric matrix: eigenvalues ascending,
/// orthonormal eigenvectors as the columns of the returned matrix.
pub fn sym_eig<R: Real>(a: &Matrix<R>) -> Result<(Vec<R>, Matrix<R>), CoreError> {
    check_square_symmetric(a, "sym_eig requires a square symmetric matrix")?;
    let n = a.nrows();
    let mut q = a.clone();
    let mut d = vec![R::ZERO; n];
    let mut e = vec![R::ZERO; n];
    tridiagonalize(&mut q, &mut d, &mut e);
    ql_implicit(&mut d, &mut e, &mut q)?;
    sort_and_fix_signs(&mut d, &mut q);
    Ok((d, q))
}

/// Result of the symmetric-definite generalized eigenproblem `Hc = E·Sc`.
pub struct GenEigen<R: Real> {
    /// Eigenvalues, ascending.
    pub values: Vec<R>,
    /// S-orthonormal eigenvectors as columns (`CᵀSC = I`).
    pub vectors: Matrix<R>,
    /// Condition estimate of `S` from the Cholesky pivot spread.
    pub cond_s: f64,
}

/// Solve `Hc = E·Sc` for symmetric `H` and symmetric positive-definite `S`
/// by Cholesky reduction: with `S = LLᵀ`, the standard problem
/// `(L⁻¹HL⁻ᵀ)y = Ey` is solved and `c = L⁻ᵀy` restored.
pub fn gen_sym_eig<R: Real>(h: &Matrix<R>, s: &Matrix<R>) -> Result<GenEigen<R>, CoreError> {
    check_square_symmetric(h, "gen_sym_eig requires symmetric H")?;
    let chol = cholesky(s)?; // also validates S
    let n = h.nrows();
    if s.nrows() != n {
        return Err(CoreError::Domain("H and S dimensions must agree"));
    }
    let l = &chol.l;

    // B = L⁻¹ H L⁻ᵀ, built column-by-column: W = L⁻¹H, then Bᵀ = L⁻¹Wᵀ.
    let mut w = Matrix::zeros(n, n);
    let mut col = vec![R::ZERO; n];
    for j in 0..n {
        for i in 0..n {
            col[i] = *h.at(i, j);
        }
        solve_lower(l, &mut col);
        for i in 0..n {
            w.set(i, j, col[i]);
        }
    }
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        col.copy_from_slice(w.row(i));
        solve_lower(l, &mut col);
        for j in 0..n {
            b.set(j, i, col[j]);
        }
    }
    // Symmetrize away the factorization round-off before the QL sweep.
    let half = R::ONE / R::from_u32(2);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (*b.at(i, j) + *b.at(j, i)) * half;
            b.set(i, j, v);
            b.set(j, i, v);
        }
    }

    let (values, y) = sym_eig(&b)?;
    let mut vectors = Matrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            col[i] = *y.at(i, j);
        }
        solve_lower_transpose(l, &mut col);
        for i in 0..n {
            vectors.set(i, j, col[i]);
        }
    }
    let mut values = values;
    sort_and_fix_signs(&mut values, &mut vectors);
    Ok(GenEigen {
        values,
        vectors,
        cond_s: chol.cond_estimate,
    })
}

/// Singular value decomposition `M = U·Σ·Vᵀ`.
pub struct Svd {
    /// Left singular vectors (columns), `m × n` for an `m × n` input with
    /// `m ≥ n` (thin form).
    pub u: Matrix<f64>,
    /// Singular values, descending, all ≥ 0.
    pub sigma: Vec<f64>,
    /// Right singular vectors (columns), `n × n`.
    pub v: Matrix<f64>,
}

/// Golub-Kahan-Reinsch SVD (Householder bidiagonalization + implicit-shift
/// QR on the bidiagonal). `f64` only — see the module docs.
pub fn svd(a: &Matrix<f64>) -> Result<Svd, CoreError> {
    if a.nrows() < a.ncols() {
        // Decompose the transpose and swap factors.
        let t = svd(&a.transpose())?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    let m = a.nrows();
    let n = a.ncols();
    let mut u = a.clone();
    let mut w = vec![0.0_f64; n];
    let mut v = Matrix::<f64>::zeros(n, n);
    let mut rv1 = vec![0.0_f64; n];

    // Householder reduction to bidiagonal form.
    let mut g = 0.0;
    let mut scale = 0.0;
    let mut anorm = 0.0_f64;
    for i in 0..n {
        let l = i + 1;
        rv1[i] = scale * g;
        g = 0.0;
        scale = 0.0;
        if i < m {
            for k in i..m {
                scale += u.at(k, i).abs();
            }
            if scale != 0.0 {
                let mut s = 0.0;
                for k in i..m {
                    let val = u.at(k, i) / scale;
                    u.set(k, i, val);
                    s += val * val;
                }
                let f = *u.at(i, i);
                g = if f >= 0.0 { -libm::sqrt(s) } else { libm::sqrt(s) };
                let h = f * g - s;
                u.set(i, i, f - g);
                for j in l..n {
                    let mut s = 0.0;
                    for k in i..m {
                        s += u.at(k, i) * u.at(k, j);
                    }
                    let f = s / h;
                    for k in i..m {
                        let val = *u.at(k, j) + f * *u.at(k, i);
                        u.set(k, j, val);
                    }
                }
                for k in i..m {
                    let val = *u.at(k, i) * scale;
                    u.set(k, i, val);
                }
            }
        }
        w[i] = scale * g;
        g = 0.0;
        scale = 0.0;
        if i < m && i != n - 1 {
            for k in l..n {
                scale += u.at(i, k).abs();
            }
            if scale != 0.0 {
                let mut s = 0.0;
                for k in l..n {
                    let val = u.at(i, k) / scale;
                    u.set(i, k, val);
                    s += val * val;
                }
                let f = *u.at(i, l);
                g = if f >= 0.0 { -libm::sqrt(s) } else { libm::sqrt(s) };
                let h = f * g - s;
                u.set(i, l, f - g);
                for k in l..n {
                    rv1[k] = u.at(i, k) / h;
                }
                for j in l..m {
                    let mut s = 0.0;
                    for k in l..n {
                        s += u.at(j, k) * u.at(i, k);
                    }
                    for k in l..n {
                        let val = *u.at(j, k) + s * rv1[k];
                        u.set(j, k, val);
                    }
                }
                for k in l..n {
                    let val = *u.at(i, k) * scale;
                    u.set(i, k, val);
                }
            }
        }
        anorm = anorm.max(w[i].abs() + rv1[i].abs());
    }

    // Accumulate right-hand transforms.
    for i in (0..n).rev() {
        let l = i + 1;
        if i < n - 1 {
            if g != 0.0 {
                for j in l..n {
                    v.set(j, i, (u.at(i, j) / u.at(i, l)) / g);
                }
                for j in l..n {
                    let mut s = 0.0;
                    for k in l..n {
                        s += u.at(i, k) * v.at(k, j);
                    }
                    for k in l..n {
                        let val = *v.at(k, j) + s * *v.at(k, i);
                        v.set(k, j, val);
                    }
                }
            }
            for j in l..n {
                v.set(i, j, 0.0);
                v.set(j, i, 0.0);
            }
        }
        v.set(i, i, 1.0);
        g = rv1[i];
    }

    // Accumulate left-hand transforms.
    for i in (0..m.min(n)).rev() {
        let l = i + 1;
        g = w[i];
        for j in l..n {
            u.set(i, j, 0.0);
        }
        if g != 0.0 {
            let ginv = 1.0 / g;
            for j in l..n {
                let mut s = 0.0;
                for k in l..m {
                    s += u.at(k, i) * u.at(k, j);
                }
                let f = (s / u.at(i, i)) * ginv;
                for k in i..m {
                    let val = *u.at(k, j) + f * *u.at(k, i);
                    u.set(k, j, val);
                }
            }
            for j in i..m {
                let val = *u.at(j, i) * ginv;
                u.set(j, i, val);
            }
        } else {
            for j in i..m {
                u.set(j, i, 0.0);
            }
        }
        let val = *u.at(i, i) + 1.0;
        u.set(i, i, val);
    }

    // Diagonalize the bidiagonal form by implicit-shift QR.
    for k in (0..n).rev() {
        for iteration in 0..64 {
            let mut flag = true;
            let mut l = k;
            let mut nm = 0usize;
            loop {
                if rv1[l].abs() <= f64::EPSILON * anorm {
                    flag = false;
                    break;
                }
                nm = l - 1;
                if w[nm].abs() <= f64::EPSILON * anorm {
                    break;
                }
                l -= 1;
            }
            if flag {
                // Cancel rv1[l] against the column above.
                let mut c = 0.0;
                let mut s = 1.0;
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] *= c;
                    if f.abs() <= f64::EPSILON * anorm {
                        break;
                    }
                    g = w[i];
                    let h = Real::hypot(f, g);
                    w[i] = h;
                    let hinv = 1.0 / h;
                    c = g * hinv;
                    s = -f * hinv;
                    for j in 0..m {
                        let y = *u.at(j, nm);
                        let z = *u.at(j, i);
                        u.set(j, nm, y * c + z * s);
                        u.set(j, i, z * c - y * s);
                    }
                }
            }
            let z = w[k];
            if l == k {
                if z < 0.0 {
                    w[k] = -z;
                    for j in 0..n {
                        let val = -*v.at(j, k);
                        v.set(j, k, val);
                    }
                }
                break;
            }
            if iteration == 63 {
                return Err(CoreError::EigenNoConvergence { index: k });
            }
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            g = rv1[nm];
            let mut h = rv1[k];
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
            g = Real::hypot(f, 1.0);
            let gsign = if f >= 0.0 { g.abs() } else { -g.abs() };
            f = ((x - z) * (x + z) + h * ((y / (f + gsign)) - h)) / x;
            let mut c = 1.0;
            let mut s = 1.0;
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g *= c;
                let zz = Real::hypot(f, h);
                rv1[j] = zz;
                let zzinv = 1.0 / zz;
                c = f * zzinv;
                s = h * zzinv;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                for jj in 0..n {
                    let xx = *v.at(jj, j);
                    let zz = *v.at(jj, i);
                    v.set(jj, j, xx * c + zz * s);
                    v.set(jj, i, zz * c - xx * s);
                }
                let zz = Real::hypot(f, h);
                w[j] = zz;
                if zz != 0.0 {
                    let zzinv = 1.0 / zz;
                    c = f * zzinv;
                    s = h * zzinv;
                }
                f = c * g + s * y;
                x = c * y - s * g;
                for jj in 0..m {
                    let yy = *u.at(jj, j);
                    let zz = *u.at(jj, i);
                    u.set(jj, j, yy * c + zz * s);
                    u.set(jj, i, zz * c - yy * s);
                }
            }
            rv1[l] = 0.0;
            rv1[k] = f;
            w[k] = x;
        }
    }

    // Sort singular values descending, permuting both factor columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[j].partial_cmp(&w[i]).unwrap());
    let sigma: Vec<f64> = order.iter().map(|&i| w[i]).collect();
    let u_sorted = Matrix::from_fn(m, n, |r, c| *u.at(r, order[c]));
    let v_sorted = Matrix::from_fn(n, n, |r, c| *v.at(r, order[c]));
    Ok(Svd {
        u: u_sorted,
        sigma,
        v: v_sorted,
    })
}

/// Count of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x`, by the Sturm sequence of leading-principal-minor pivots.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0usize;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let off2 = off[i - 1] * off[i - 1];
        // Guard the pivot against exact zeros (boundary hit).
        let denom = if d == 0.0 { f64::MIN_POSITIVE } else { d };
        d = (diag[i] - x) - off2 / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenpair of a symmetric tridiagonal matrix,
/// by Sturm-sequence bisection for the value and one pass of inverse
/// iteration for the vector. `off` has length `n − 1`.
pub fn tridiag_lowest(diag: &[f64], off: &[f64]) -> Result<(f64, Vec<f64>), CoreError> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(CoreError::Domain("tridiagonal sizes must be n and n-1"));
    }
    if n == 1 {
        return Ok((diag[0], vec![1.0]));
    }
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < n - 1 {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    let tol = 1e-14 * scale;
    let mut a = lo;
    let mut b = hi;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // bisection exhausted f64 resolution
        }
        if sturm_count(diag, off, mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    let lambda = 0.5 * (a + b);

    // Inverse iteration with a slightly relaxed shift; two sweeps settle the
    // vector for well-separated ground states (the only use here).
    let shift = lambda - 1e-10 * scale;
    let mut x = vec![1.0_f64; n];
    for _ in 0..2 {
        x = solve_shifted_tridiag(diag, off, shift, &x);
        let nrm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(CoreError::EigenNoConvergence { index: 0 });
        }
        for v in &mut x {
            *v /= nrm;
        }
    }
    // Deterministic sign: largest-magnitude component positive.
    let mut imax = 0;
    for i in 1..n {
        if x[i].abs() > x[imax].abs() {
            imax = i;
        }
    }
    if x[imax] < 0.0 {
        for v in &mut x {
            *v = -*v;
        }
    }
    Ok((lambda, x))
}

/// Solve `(T − σI) y = b` for tridiagonal `T` by LU with partial pivoting
/// (the two-candidate row swap specific to tridiagonal systems).
fn solve_shifted_tridiag(diag: &[f64], off: &[f64], sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Band storage: lower (after pivoting fills one extra), main, upper1, upper2.
    let mut d = vec![0.0_f64; n]; // main
    let mut u1 = vec![0.0_f64; n]; // first super
    let mut u2 = vec![0.0_f64; n]; // second super (fill-in)
    let mut rhs = b.to_vec();
    for i in 0..n {
        d[i] = diag[i] - sigma;
        u1[i] = if i + 1 < n { off[i] } else { 0.0 };
    }
    let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { off[i - 1] } else { 0.0 }).collect();
    for i in 0..n - 1 {
        if sub[i + 1].abs() > d[i].abs() {
            // Swap row i and i+1.
            let (a0, a1, a2) = (sub[i + 1], d[i + 1], u1[i + 1]);
            sub[i + 1] = d[i];
            d[i + 1] = u1[i];
            u1[i + 1] = u2[i];
            d[i] = a0;
            u1[i] = a1;
            u2[i] = a2;
            rhs.swap(i, i + 1);
        }
        let piv = if d[i] == 0.0 { f64::MIN_POSITIVE } else { d[i] };
        let m = sub[i + 1] / piv;
        d[i + 1] -= m * u1[i];
        u1[i + 1] -= m * u2[i];
        rhs[i + 1] -= m * rhs[i];
    }
    // Back substitution.
    let mut y = vec![0.0_f64; n];
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v -= u1[i] * y[i + 1];
        }
        if i + 2 < n {
            v -= u2[i] * y[i + 2];
        }
        let piv = if d[i] == 0.0 { f64::MIN_POSITIVE } else { d[i] };
        y[i] = v / piv;
    }
    y
}
