//! Extended reals: a finite `f64` or `+∞`.
//!
//! Only the `inf` constant (and operations whose result is genuinely
//! unbounded, such as `ln(inf)`) produce [`ExtReal::PosInf`]. An `f64`
//! overflow on finite inputs saturates at `±f64::MAX` instead, so that
//! "overflowed" and "infinite by definition" stay distinguishable. Checks that
//! only care about size treat anything at or above [`OVERFLOW_THRESHOLD`] as
//! infinite.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EvalError;

/// Magnitude at or above which a finite value counts as infinite in limit
/// and membership checks.
pub const OVERFLOW_THRESHOLD: f64 = 1e300;

/// A finite real or `+∞`. Never NaN, never `-∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

use ExtReal::{Finite, PosInf};

impl ExtReal {
    pub const ZERO: ExtReal = Finite(0.0);
    pub const ONE: ExtReal = Finite(1.0);

    /// Wraps the result of an `f64` operation on finite operands.
    ///
    /// NaN is a domain error; infinities saturate at `±f64::MAX`.
    pub(crate) fn from_op(x: f64, op: &'static str) -> Result<Self, EvalError> {
        if x.is_nan() {
            Err(EvalError::domain(op, "result is undefined"))
        } else if x == f64::INFINITY {
            Ok(Finite(f64::MAX))
        } else if x == f64::NEG_INFINITY {
            Ok(Finite(-f64::MAX))
        } else {
            Ok(Finite(x))
        }
    }

    /// Converts an `f64`, mapping `f64::INFINITY` to `+∞`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if x.is_nan() || x == f64::NEG_INFINITY {
            None
        } else if x == f64::INFINITY {
            Some(PosInf)
        } else {
            Some(Finite(x))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PosInf)
    }

    /// `+∞`, or a finite value whose magnitude reached [`OVERFLOW_THRESHOLD`].
    pub fn is_effectively_infinite(self) -> bool {
        match self {
            PosInf => true,
            Finite(x) => x >= OVERFLOW_THRESHOLD,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(x) => Some(x),
            PosInf => None,
        }
    }

    /// `f64` view, with `+∞` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Finite(x) => x,
            PosInf => f64::INFINITY,
        }
    }

    pub fn add(self, rhs: Self) -> Result<Self, EvalError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Self::from_op(a + b, "+"),
            _ => Ok(PosInf),
        }
    }

    pub fn sub(self, rhs: Self) -> Result<Self, EvalError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Self::from_op(a - b, "-"),
            (PosInf, Finite(_)) => Ok(PosInf),
            (Finite(_), PosInf) => Err(EvalError::domain("-", "finite - inf is -inf")),
            (PosInf, PosInf) => Err(EvalError::domain("-", "inf - inf")),
        }
    }

    /// Multiplication with the measure-theory convention `0 · ∞ = 0`.
    pub fn mul(self, rhs: Self) -> Result<Self, EvalError> {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Self::from_op(a * b, "*"),
            (Finite(c), PosInf) | (PosInf, Finite(c)) => {
                if c > 0.0 {
                    Ok(PosInf)
                } else if c == 0.0 {
                    Ok(Self::ZERO)
                } else {
                    Err(EvalError::domain("*", "negative * inf is -inf"))
                }
            }
            (PosInf, PosInf) => Ok(PosInf),
        }
    }

    pub fn div(self, rhs: Self) -> Result<Self, EvalError> {
        match (self, rhs) {
            (_, Finite(b)) if b == 0.0 => Err(EvalError::domain("/", "division by zero")),
            (Finite(a), Finite(b)) => Self::from_op(a / b, "/"),
            (Finite(_), PosInf) => Ok(Self::ZERO),
            (PosInf, Finite(c)) => {
                if c > 0.0 {
                    Ok(PosInf)
                } else {
                    Err(EvalError::domain("/", "inf / negative is -inf"))
                }
            }
            (PosInf, PosInf) => Err(EvalError::domain("/", "inf / inf")),
        }
    }

    /// Real power. `0^0 = 1`; a negative base needs an integer exponent.
    pub fn pow(self, exponent: Self) -> Result<Self, EvalError> {
        match (self, exponent) {
            (Finite(b), Finite(e)) => {
                if e == 0.0 {
                    Ok(Self::ONE)
                } else if b == 0.0 && e < 0.0 {
                    Err(EvalError::domain("^", "zero raised to a negative power"))
                } else if b < 0.0 && e.fract() != 0.0 {
                    Err(EvalError::domain(
                        "^",
                        "negative base with non-integer exponent",
                    ))
                } else {
                    Self::from_op(b.powf(e), "^")
                }
            }
            (PosInf, Finite(e)) => Ok(if e > 0.0 {
                PosInf
            } else if e == 0.0 {
                Self::ONE
            } else {
                Self::ZERO
            }),
            (Finite(b), PosInf) => {
                if b < 0.0 {
                    Err(EvalError::domain("^", "negative base with infinite exponent"))
                } else if b > 1.0 {
                    Ok(PosInf)
                } else if b == 1.0 {
                    Ok(Self::ONE)
                } else {
                    Ok(Self::ZERO)
                }
            }
            (PosInf, PosInf) => Ok(PosInf),
        }
    }

    pub fn neg(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) => Ok(Finite(-x)),
            PosInf => Err(EvalError::domain("-", "negation of inf is -inf")),
        }
    }

    pub fn abs(self) -> Self {
        match self {
            Finite(x) => Finite(x.abs()),
            PosInf => PosInf,
        }
    }

    pub fn exp(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) => Self::from_op(x.exp(), "exp"),
            PosInf => Ok(PosInf),
        }
    }

    /// `exp(x) - 1` without cancellation near zero.
    pub fn exp_m1(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) => Self::from_op(x.exp_m1(), "exp"),
            PosInf => Ok(PosInf),
        }
    }

    pub fn ln(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) if x <= 0.0 => Err(EvalError::domain("ln", "argument must be positive")),
            Finite(x) => Self::from_op(x.ln(), "ln"),
            PosInf => Ok(PosInf),
        }
    }

    /// `ln(1 + x)` without cancellation near zero.
    pub fn ln_1p(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) if x <= -1.0 => Err(EvalError::domain("ln", "argument must be positive")),
            Finite(x) => Self::from_op(x.ln_1p(), "ln"),
            PosInf => Ok(PosInf),
        }
    }

    pub fn cosh(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) => Self::from_op(x.cosh(), "cosh"),
            PosInf => Ok(PosInf),
        }
    }

    /// `cosh(x) - 1`, evaluated as `2 sinh²(x/2)`.
    pub fn cosh_m1(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) => {
                let s = (0.5 * x).sinh();
                Self::from_op(2.0 * s * s, "cosh")
            }
            PosInf => Ok(PosInf),
        }
    }

    pub fn sqrt(self) -> Result<Self, EvalError> {
        match self {
            Finite(x) if x < 0.0 => Err(EvalError::domain("sqrt", "argument must be nonnegative")),
            Finite(x) => Ok(Finite(x.sqrt())),
            PosInf => Ok(PosInf),
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            // no NaN by construction
            (Finite(a), Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
            (Finite(_), PosInf) => Ordering::Less,
            (PosInf, Finite(_)) => Ordering::Greater,
            (PosInf, PosInf) => Ordering::Equal,
        }
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN or `-∞`; use [`ExtReal::from_f64`] for untrusted input.
    fn from(x: f64) -> Self {
        ExtReal::from_f64(x).expect("ExtReal cannot hold NaN or -inf")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(x) => write!(f, "{x:?}"),
            PosInf => f.write_str("inf"),
        }
    }
}

/// Finite values serialize as JSON numbers, `+∞` as the string `"inf"`.
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(x) => serializer.serialize_f64(*x),
            PosInf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => ExtReal::from_f64(x)
                .ok_or_else(|| serde::de::Error::custom("expected a finite number or \"inf\"")),
            Repr::Text(s) if s == "inf" => Ok(PosInf),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", found \"{s}\""
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_finite_addition() {
        for (a, b) in [(-5.0, 3.0), (0.0, 1e300), (-1e300, 2.5)] {
            assert_eq!(Finite(a).add(PosInf).unwrap(), PosInf);
            assert_eq!(Finite(b).add(PosInf).unwrap(), PosInf);
            assert_eq!(PosInf.add(Finite(a)).unwrap(), PosInf);
        }
        assert_eq!(PosInf.add(PosInf).unwrap(), PosInf);
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(Finite(0.0).mul(PosInf).unwrap(), ExtReal::ZERO);
        assert_eq!(PosInf.mul(Finite(0.0)).unwrap(), ExtReal::ZERO);
        assert_eq!(Finite(2.0).mul(PosInf).unwrap(), PosInf);
        assert!(Finite(-2.0).mul(PosInf).is_err());
    }

    #[test]
    fn undefined_forms_are_errors() {
        assert!(PosInf.sub(PosInf).is_err());
        assert!(Finite(1.0).sub(PosInf).is_err());
        assert!(Finite(0.0).div(Finite(0.0)).is_err());
        assert!(Finite(1.0).div(Finite(0.0)).is_err());
        assert!(Finite(0.0).ln().is_err());
        assert!(Finite(-1.0).ln().is_err());
        assert!(Finite(-8.0).pow(Finite(1.0 / 3.0)).is_err());
        assert!(Finite(0.0).pow(Finite(-1.0)).is_err());
        assert!(PosInf.neg().is_err());
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(Finite(0.0).pow(Finite(0.0)).unwrap(), ExtReal::ONE);
        assert_eq!(Finite(-2.0).pow(Finite(3.0)).unwrap(), Finite(-8.0));
    }

    #[test]
    fn finite_overflow_saturates() {
        assert_eq!(Finite(1000.0).exp().unwrap(), Finite(f64::MAX));
        assert_eq!(Finite(f64::MAX).add(Finite(f64::MAX)).unwrap(), Finite(f64::MAX));
        assert_eq!(Finite(-f64::MAX).sub(Finite(f64::MAX)).unwrap(), Finite(-f64::MAX));
        assert!(Finite(f64::MAX).is_effectively_infinite());
        assert!(!Finite(f64::MAX).is_infinite());
    }

    #[test]
    fn total_order_puts_infinity_on_top() {
        let mut xs = vec![PosInf, Finite(3.0), Finite(-1.0), Finite(f64::MAX)];
        xs.sort();
        assert_eq!(xs, vec![Finite(-1.0), Finite(3.0), Finite(f64::MAX), PosInf]);
    }

    #[test]
    fn json_encoding() {
        assert_eq!(serde_json::to_string(&PosInf).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Finite(2.5)).unwrap(), "2.5");
        let back: ExtReal = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, PosInf);
    }
}
