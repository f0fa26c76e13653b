//! Scalar abstraction: the numerical core is generic over [`Real`], with two
//! implementations — native `f64` and the double-double type [`Dd`].
//!
//! Double-double arithmetic represents a value as an unevaluated sum of two
//! doubles `hi + lo` with `|lo| ≤ ulp(hi)/2`, giving ~106 bits (~31 decimal
//! digits) of significand at `f64`'s exponent range. That head-room is what
//! lets the generalized eigensolver survive Hylleraas overlap matrices whose
//! condition number exceeds `1/ε_f64 ≈ 4.5e15`: basis orders `Ω ≥ 12` push
//! `cond(S)` beyond `1e18`, where plain double-precision Cholesky fails.
//!
//! Only the operations the pipeline actually needs are provided: field
//! arithmetic, comparisons, absolute value and square root. All of them are
//! exact-rounding-style compensated algorithms (Dekker/Knuth two-sum,
//! FMA-based two-product), so no external arbitrary-precision dependency is
//! required and the type stays `Copy` and allocation-free.

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Floating-point scalar usable by every solver in this crate.
///
/// Implementors must behave like a subset of IEEE arithmetic: total order on
/// the values actually produced (no NaN expected in well-posed runs),
/// round-to-nearest products/sums, and an exact zero/one.
pub trait Real:
    Copy
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    /// Relative rounding unit: `f64::EPSILON` for doubles, `2⁻¹⁰⁴` for [`Dd`].
    const EPSILON: Self;

    fn from_f64(x: f64) -> Self;
    /// Exact conversion of small integers (counts, exponents, quadrature sizes).
    fn from_u32(n: u32) -> Self;
    /// Round to the nearest `f64` (the head word for [`Dd`]).
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;

    fn max_by_val(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_by_val(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `sqrt(a² + b²)` without intermediate overflow; used by the QL/QR sweeps.
    fn hypot(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::ZERO {
            return Self::ZERO;
        }
        let r = small / big;
        big * (Self::ONE + r * r).sqrt()
    }
}

impl Real for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EPSILON: Self = f64::EPSILON;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn from_u32(n: u32) -> Self {
        n as f64
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn abs(self) -> Self {
        libm::fabs(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }
}

/// Double-double: an unevaluated sum `hi + lo` of two `f64`s.
///
/// Invariant: `hi` is the round-to-nearest double of the represented value,
/// so `|lo| ≤ ulp(hi)/2`. The derived lexicographic comparison on `(hi, lo)`
/// is then the correct value ordering.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Sum of `a + b` and its exact rounding error (Knuth's TwoSum).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// TwoSum specialization valid when `|a| ≥ |b|` or `a == 0`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Product of `a·b` and its exact rounding error, via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = libm::fma(a, b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Renormalize a raw `(hi, lo)` pair into canonical form.
    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Head word is accurate to f64 precision; callers needing all ~31
        // digits should format hi and lo separately.
        fmt::Display::fmt(&(self.hi + self.lo), f)
    }
}

impl Add for Dd {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::renorm(s1, s2 + t2)
    }
}

impl Sub for Dd {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::renorm(p1, p2)
    }
}

impl Div for Dd {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        // Three-term long division (Bailey): each correction is the head
        // quotient of the running remainder.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Self::renorm(s, e + q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl Real for Dd {
    const ZERO: Self = Dd::ZERO;
    const ONE: Self = Dd::ONE;
    // 2⁻¹⁰⁴: squared f64 epsilon halved, the conventional dd rounding unit.
    const EPSILON: Self = Dd {
        hi: 4.930380657631324e-32,
        lo: 0.0,
    };

    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }

    #[inline]
    fn from_u32(n: u32) -> Self {
        Dd::from_f64(n as f64)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ZERO;
        }
        // Karp-Markstein: one Newton correction on the f64 seed doubles the
        // number of correct digits, which is exactly what dd needs.
        let x = 1.0 / libm::sqrt(self.hi);
        let ax = self.hi * x;
        let axs = Self::from_f64(ax);
        let err = (self - axs * axs).hi;
        Self::renorm(ax, err * (x * 0.5))
    }
}
