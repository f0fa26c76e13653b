//! Hylleraas basis enumeration and sparse polynomial algebra in `(s, t, u)`.
//!
//! A basis function is `φ_{nmp} = e^{-μs} s^n t^m u^p` with `n + m + p ≤ Ω`.
//! Under electron exchange `t → −t` while `s` and `u` are invariant, so even
//! `m` spans the spatially symmetric (singlet) sector and odd `m` the
//! antisymmetric (triplet) one.
//!
//! Everything that has to be integrated — overlap products, kinetic-energy
//! integrands, potential weights — is a polynomial in `(s, t, u)` times
//! `e^{-2μs}`, so a tiny exact sparse-polynomial type ([`TriPoly`]) plus one
//! closed-form base integral (see [`crate::integrals`]) covers the entire
//! matrix assembly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Real;

/// Exchange symmetry sector, selected by the parity of the `t` exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Even powers of `t`: spatially symmetric (singlet) sector.
    Even,
    /// Odd powers of `t`: spatially antisymmetric (triplet) sector.
    Odd,
}

impl Parity {
    #[inline]
    pub fn matches(self, m: u32) -> bool {
        match self {
            Parity::Even => m % 2 == 0,
            Parity::Odd => m % 2 == 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// One Hylleraas monomial exponent triple: `s^n t^m u^p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisTerm {
    pub n: u32,
    pub m: u32,
    pub p: u32,
}

impl BasisTerm {
    #[inline]
    pub fn degree(self) -> u32 {
        self.n + self.m + self.p
    }
}

/// An ordered Hylleraas basis: every `(n, m, p)` with `n + m + p ≤ Ω` and the
/// requested `t`-parity, together with the shared exponential parameter `μ`.
///
/// Term order is fixed (ascending total degree, then `n`, then `m`) so that
/// assembled matrices, eigenvector coefficient layouts and cache keys are
/// reproducible across runs and platforms.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    pub terms: Vec<BasisTerm>,
    pub omega: u32,
    pub parity: Parity,
    pub mu: f64,
}

impl BasisSet {
    /// Build the complete basis of order `omega` in the given parity sector.
    ///
    /// Returns a `Domain` error if `mu ≤ 0` or not finite.
    pub fn new(omega: u32, parity: Parity, mu: f64) -> Result<Self, crate::CoreError> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(crate::CoreError::Domain("basis exponent mu must be positive"));
        }
        Ok(Self {
            terms: generate_terms(omega, parity),
            omega,
            parity,
            mu,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Enumerate every exponent triple with `n + m + p ≤ omega` and `m` of the
/// requested parity, in the canonical order (total degree, then `n`, then `m`).
pub fn generate_terms(omega: u32, parity: Parity) -> Vec<BasisTerm> {
    let mut terms = Vec::new();
    for degree in 0..=omega {
        for n in 0..=degree {
            for m in 0..=(degree - n) {
                if parity.matches(m) {
                    let p = degree - n - m;
                    terms.push(BasisTerm { n, m, p });
                }
            }
        }
    }
    terms
}

/// Which Hylleraas coordinate a derivative acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HylVar {
    S,
    T,
    U,
}

/// Sparse exact polynomial in `(s, t, u)`: a map from the exponent triple
/// `(a, b, c)` of `s^a t^b u^c` to its coefficient.
///
/// Coefficients live in the working scalar type so the same assembly code
/// runs in double and double-double precision. Zero coefficients are never
/// stored, and the `BTreeMap` backing gives deterministic iteration order,
/// which keeps floating-point summation order (and therefore results)
/// reproducible.
#[derive(Clone, Debug)]
pub struct TriPoly<R: Real> {
    coeffs: BTreeMap<(u32, u32, u32), R>,
}

impl<R: Real> Default for TriPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Real> TriPoly<R> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    /// The single monomial `coeff · s^a t^b u^c`.
    pub fn monomial(a: u32, b: u32, c: u32, coeff: R) -> Self {
        let mut p = Self::zero();
        p.accumulate(a, b, c, coeff);
        p
    }

    /// Build from a list of `(a, b, c, coeff)` entries (duplicates add up).
    pub fn from_monomials(entries: &[(u32, u32, u32, R)]) -> Self {
        let mut p = Self::zero();
        for &(a, b, c, coeff) in entries {
            p.accumulate(a, b, c, coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Iterate monomials in deterministic (lexicographic exponent) order.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32, u32), R)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, a: u32, b: u32, c: u32) -> R {
        self.coeffs.get(&(a, b, c)).copied().unwrap_or(R::ZERO)
    }

    fn accumulate(&mut self, a: u32, b: u32, c: u32, coeff: R) {
        if coeff == R::ZERO {
            return;
        }
        let slot = self.coeffs.entry((a, b, c)).or_insert(R::ZERO);
        *slot += coeff;
        if *slot == R::ZERO {
            self.coeffs.remove(&(a, b, c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b, c), v) in other.iter() {
            out.accumulate(a, b, c, v);
        }
        out
    }

    pub fn scale(&self, factor: R) -> Self {
        if factor == R::ZERO {
            return Self::zero();
        }
        let mut out = Self::zero();
        for ((a, b, c), v) in self.iter() {
            out.accumulate(a, b, c, v * factor);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1, c1), v1) in self.iter() {
            for ((a2, b2, c2), v2) in other.iter() {
                out.accumulate(a1 + a2, b1 + b2, c1 + c2, v1 * v2);
            }
        }
        out
    }

    /// Partial derivative with respect to one of `s`, `t`, `u`.
    pub fn derivative(&self, var: HylVar) -> Self {
        let mut out = Self::zero();
        for ((a, b, c), v) in self.iter() {
            let (e, rest) = match var {
                HylVar::S => (a, (a.wrapping_sub(1), b, c)),
                HylVar::T => (b, (a, b.wrapping_sub(1), c)),
                HylVar::U => (c, (a, b, c.wrapping_sub(1))),
            };
            if e > 0 {
                out.accumulate(rest.0, rest.1, rest.2, v * R::from_u32(e));
            }
        }
        out
    }

    /// Largest exponent of each variable over all stored monomials.
    pub fn max_exponents(&self) -> (u32, u32, u32) {
        let mut m = (0, 0, 0);
        for ((a, b, c), _) in self.iter() {
            m.0 = m.0.max(a);
            m.1 = m.1.max(b);
            m.2 = m.2.max(c);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_zero_is_the_constant_term() {
        let terms = generate_terms(0, Parity::Even);
        assert_eq!(terms, alloc::vec![BasisTerm { n: 0, m: 0, p: 0 }]);
        assert!(generate_terms(0, Parity::Odd).is_empty());
    }

    #[test]
    fn omega_two_even_has_seven_terms() {
        // Direct enumeration: degree 0 -> (000); degree 1 -> (100),(001);
        // degree 2 -> (200),(101),(002),(020).
        let terms = generate_terms(2, Parity::Even);
        assert_eq!(terms.len(), 7);
        assert!(terms.iter().all(|t| t.m % 2 == 0 && t.degree() <= 2));
    }

    #[test]
    fn omega_fourteen_even_has_372_terms() {
        assert_eq!(generate_terms(14, Parity::Even).len(), 372);
    }

    #[test]
    fn closed_form_counts_match_enumeration() {
        // For even parity, sum over even m of the triangular count
        // (Ω−m+1)(Ω−m+2)/2.
        for omega in 0..=20u32 {
            let expected: u32 = (0..=omega)
                .filter(|m| m % 2 == 0)
                .map(|m| (omega - m + 1) * (omega - m + 2) / 2)
                .sum();
            assert_eq!(
                generate_terms(omega, Parity::Even).len(),
                expected as usize,
                "omega = {omega}"
            );
        }
    }

    #[test]
    fn term_order_is_degree_then_n_then_m() {
        let terms = generate_terms(9, Parity::Odd);
        let keys: Vec<_> = terms.iter().map(|t| (t.degree(), t.n, t.m)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let unique: std::collections::HashSet<_> = keys.iter().collect();
        assert_eq!(unique.len(), keys.len(), "terms must be unique");
    }

    #[test]
    fn derivative_of_s2t_is_s2_wrt_t() {
        // d/dt (s² t) = s²
        let p = TriPoly::<f64>::monomial(2, 1, 0, 1.0);
        let d = p.derivative(HylVar::T);
        assert_eq!(d.coeff(2, 0, 0), 1.0);
        assert_eq!(d.num_terms(), 1);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let p = TriPoly::<f64>::monomial(0, 0, 0, 3.5);
        assert!(p.derivative(HylVar::U).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        // (s + u)(s − u) = s² − u²
        let sum = TriPoly::<f64>::from_monomials(&[(1, 0, 0, 1.0), (0, 0, 1, 1.0)]);
        let diff = TriPoly::<f64>::from_monomials(&[(1, 0, 0, 1.0), (0, 0, 1, -1.0)]);
        let prod = sum.mul(&diff);
        assert_eq!(prod.coeff(2, 0, 0), 1.0);
        assert_eq!(prod.coeff(0, 0, 2), -1.0);
        assert_eq!(prod.num_terms(), 2, "cross terms must cancel exactly");
    }

    #[test]
    fn cancellation_removes_stored_zeros() {
        let p = TriPoly::<f64>::monomial(1, 2, 3, 2.0);
        let q = p.scale(-1.0);
        assert!(p.add(&q).is_zero());
    }

    #[test]
    fn bad_mu_is_rejected() {
        assert!(BasisSet::new(4, Parity::Even, 0.0).is_err());
        assert!(BasisSet::new(4, Parity::Even, -1.0).is_err());
        assert!(BasisSet::new(4, Parity::Even, f64::NAN).is_err());
    }
}
