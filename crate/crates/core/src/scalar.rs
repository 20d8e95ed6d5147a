//! Scalar types the chain algebra and the simplex solver are generic over.
//!
//! [`Rational`] (arbitrary precision) is the canonical choice: every
//! certificate this crate emits is computed with it. `f64` is supported for
//! quick exploratory runs; its comparisons go through a fixed tolerance.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision exact rational.
pub type Rational = BigRational;

/// Field elements usable by the chain algebra and the LP engine.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact and comparisons need no tolerance.
    const EXACT: bool;

    /// Zero test; exact for rationals, tolerance-based for floats.
    fn is_negligible(&self) -> bool;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn to_f64(&self) -> f64;

    /// Canonical text form used in reports: `p/q` for rationals.
    fn render(&self) -> String;

    /// Inverse of [`Scalar::render`].
    fn parse_rendered(text: &str) -> Option<Self>;

    /// Decimal rendering for LP interchange files (approximate when the
    /// value has no terminating expansion).
    fn to_decimal(&self) -> String;

    fn is_strictly_positive(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    fn is_strictly_negative(&self) -> bool {
        !self.is_negligible() && *self < Self::zero()
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

const FLOAT_TOLERANCE: f64 = 1e-9;

impl Scalar for Rational {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_rendered(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).ok()?;
                let q = BigInt::from_str(q.trim()).ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(Rational::new(p, q))
                }
            }
            None => BigInt::from_str(text).ok().map(Rational::from_integer),
        }
    }

    fn to_decimal(&self) -> String {
        rational_to_decimal(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_TOLERANCE
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }

    fn parse_rendered(text: &str) -> Option<Self> {
        text.trim().parse().ok()
    }

    fn to_decimal(&self) -> String {
        format!("{self:?}")
    }
}

/// Exact decimal expansion when the denominator has only factors 2 and 5,
/// otherwise 20 significant fractional digits.
fn rational_to_decimal(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let int_part = abs.trunc();
    let mut frac = abs - &int_part;
    let ten = Rational::from_integer(BigInt::from(10));
    let mut digits = String::new();
    for _ in 0..40 {
        if frac.is_zero() {
            break;
        }
        frac = frac * &ten;
        let d = frac.trunc();
        digits.push_str(&d.numer().to_string());
        frac = frac - d;
    }
    format!(
        "{}{}.{}",
        if negative { "-" } else { "" },
        int_part.numer(),
        digits
    )
}

/// Shorthand for an exact rational `num / den`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Shorthand for an exact integer.
pub fn qi(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Value of an optimization that may diverge: `+∞` is reported when a
/// truncation admits no finite optimum (infeasible filling, unbounded ratio).
#[derive(Clone, Debug, PartialEq)]
pub enum Extended<S> {
    Finite(S),
    PosInfinity,
}

impl<S: Scalar> Extended<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::PosInfinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn render(&self) -> String {
        match self {
            Extended::Finite(v) => v.render(),
            Extended::PosInfinity => "inf".to_string(),
        }
    }

    /// Total order with `+∞` on top.
    pub fn le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, Extended::PosInfinity) => true,
            (Extended::PosInfinity, Extended::Finite(_)) => false,
            (Extended::Finite(a), Extended::Finite(b)) => a <= b,
        }
    }
}

impl<S: Scalar> Display for Extended<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_decimal_free() {
        assert_eq!(qi(9).render(), "9/1");
        assert_eq!(q(-3, 6).render(), "-1/2");
        assert_eq!(Rational::parse_rendered("-1/2"), Some(q(-1, 2)));
        assert_eq!(Rational::parse_rendered("7"), Some(qi(7)));
        assert_eq!(Rational::parse_rendered("1/0"), None);
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(q(3, 8).to_decimal(), "0.375");
        assert_eq!(q(-5, 2).to_decimal(), "-2.5");
        assert_eq!(qi(4).to_decimal(), "4");
    }

    #[test]
    fn extended_order() {
        let a = Extended::Finite(q(1, 2));
        assert!(a.le(&Extended::PosInfinity));
        assert!(!Extended::<Rational>::PosInfinity.le(&a));
        assert_eq!(Extended::<Rational>::PosInfinity.render(), "inf");
    }

    #[test]
    fn float_tolerance() {
        assert!(1e-12f64.is_negligible());
        assert!(!1e-3f64.is_negligible());
        assert!(!Rational::from_ratio(1, 1_000_000_000_000).is_negligible());
    }
}
