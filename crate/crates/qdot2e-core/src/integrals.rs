//! The closed-form base integral underlying every Hylleraas matrix element.
//!
//! Over the ordered domain `0 ≤ t ≤ u ≤ s < ∞` that the `(s, t, u)`
//! coordinates inhabit,
//!
//! ```text
//! I(a, b, c; β) = ∫₀^∞ ds ∫₀^s du ∫₀^u dt  e^{-βs} s^a u^b t^c
//!              = (a + b + c + 2)! / [ (c+1)(b+c+2) β^{a+b+c+3} ]
//! ```
//!
//! (integrate `t`, then `u`, then recognize the Euler integral in `s`).
//! Every overlap, kinetic and potential entry in this crate is a finite sum
//! of these.
//!
//! **Argument-order warning.** `I`'s second slot is the power of `u` and its
//! third the power of `t`, while [`TriPoly`] keys exponents as `(s, t, u)`.
//! [`integrate_weighted`] performs that swap in exactly one place; keep it
//! that way. The cubature oracle in the integration tests exists to catch
//! precisely this class of mistake.

use crate::basis::TriPoly;
use crate::scalar::Real;
use crate::CoreError;

/// Evaluate `I(a, b, c; β)` for `s`-power `a`, `u`-power `b`, `t`-power `c`.
///
/// The factorial-over-power ratio is accumulated as an interleaved product
/// `Π_{k=1}^{a+b+c+2} (k/β)` followed by one extra `1/β`, so intermediates
/// never overflow unless the result itself does — the same guard a
/// log-domain fallback would provide, without its precision loss. The
/// interleaving also makes the exact recurrence
/// `I(a+1,b,c;β) = ((a+b+c+3)/β) · I(a,b,c;β)` hold bit-for-bit.
pub fn base_integral<R: Real>(a: u32, b: u32, c: u32, beta: R) -> Result<R, CoreError> {
    if !(beta > R::ZERO) {
        return Err(CoreError::Domain("base integral requires beta > 0"));
    }
    Ok(base_integral_unchecked(a, b, c, beta))
}

/// `base_integral` without the domain check, for validated hot loops.
///
/// The fixed `(c, b)`-dependent denominator is divided out *first*; the
/// `(k/β)` factors then accumulate in ascending `k`, so raising `a` by one
/// replays the identical instruction sequence plus a single extra multiply —
/// which is what makes the recurrence test below exact rather than
/// approximate.
#[inline]
pub(crate) fn base_integral_unchecked<R: Real>(a: u32, b: u32, c: u32, beta: R) -> R {
    let n = a + b + c + 2;
    let mut acc = R::ONE / (R::from_u32(c + 1) * R::from_u32(b + c + 2));
    acc /= beta;
    for k in 1..=n {
        acc *= R::from_u32(k) / beta;
    }
    acc
}

/// Integrate a polynomial in `(s, t, u)` against the bare weight
/// `e^{-βs}` over `0 ≤ t ≤ u ≤ s`: the linear extension of `base_integral`
/// to [`TriPoly`]. Measure factors such as `u(s²−t²)` and the overall `2π²`
/// are the caller's responsibility (see [`crate::matrix`]).
pub fn integrate_weighted<R: Real>(poly: &TriPoly<R>, beta: R) -> Result<R, CoreError> {
    if !(beta > R::ZERO) {
        return Err(CoreError::Domain("base integral requires beta > 0"));
    }
    let mut total = R::ZERO;
    for ((s_pow, t_pow, u_pow), coeff) in poly.iter() {
        // TriPoly keys are (s, t, u); the base integral wants (s, u, t).
        total += coeff * base_integral_unchecked(s_pow, u_pow, t_pow, beta);
    }
    Ok(total)
}
