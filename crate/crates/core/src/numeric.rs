//! Precision-parametric real scalars.
//!
//! Every number in the crate is a [`Scalar`]: a binary floating-point value
//! (MPFR underneath) whose mantissa width is chosen from a
//! [`PrecisionContext`] expressed in decimal digits. Decimal text is the only
//! interchange format; [`parse_scalar`] rounds correctly into the working
//! precision and [`format_scalar`] renders the exact binary value with
//! round-half-even to a fixed number of fractional digits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Special};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

/// Smallest supported working precision (plain double precision).
pub const MIN_DECIMAL_DIGITS: u32 = 15;
/// Largest supported working precision.
pub const MAX_DECIMAL_DIGITS: u32 = 10_000;
/// Working precision used when reproducing 18-digit iterate tables.
pub const DEFAULT_DECIMAL_DIGITS: u32 = 30;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("malformed number {text:?}: unexpected {found} at position {position}")]
    Parse {
        text: String,
        /// Zero-based character index of the first offending character.
        position: usize,
        found: String,
    },
    #[error("precision of {0} decimal digits is outside the supported range 15..=10000")]
    Precision(u32),
    #[error("cannot format {requested} fractional digits under a {available}-digit context")]
    DigitsExceedPrecision { requested: u32, available: u32 },
    #[error("cannot format a non-finite value")]
    NonFinite,
}

/// Working precision, in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self, NumericError> {
        if !(MIN_DECIMAL_DIGITS..=MAX_DECIMAL_DIGITS).contains(&decimal_digits) {
            return Err(NumericError::Precision(decimal_digits));
        }
        Ok(Self { decimal_digits })
    }

    /// The fast mode: 15 digits, i.e. IEEE double mantissa width.
    pub fn double() -> Self {
        Self {
            decimal_digits: MIN_DECIMAL_DIGITS,
        }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Mantissa width in bits; never below the 53 bits of a double.
    pub fn bits(&self) -> u32 {
        ((self.decimal_digits as f64 * LOG2_10).ceil() as u32).max(53)
    }

    /// Unit roundoff `2^(1 - bits)`.
    pub fn epsilon(&self) -> Scalar {
        Scalar(Float::with_val(self.bits(), 1) >> (self.bits() - 1))
    }

    /// `10^exponent` at this precision.
    pub fn pow10(&self, exponent: i32) -> Scalar {
        let ten = Float::with_val(self.bits(), 10);
        Scalar(ten.pow(exponent))
    }

    pub fn zero(&self) -> Scalar {
        Scalar(Float::with_val(self.bits(), Special::Zero))
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, value: i64) -> Scalar {
        Scalar(Float::with_val(self.bits(), value))
    }

    /// Exact conversion of a binary double; rounds only if the context is
    /// narrower than 53 bits, which never happens.
    pub fn from_f64(&self, value: f64) -> Scalar {
        Scalar(Float::with_val(self.bits(), value))
    }

    pub fn pi(&self) -> Scalar {
        Scalar(Float::with_val(self.bits(), Constant::Pi))
    }

    /// Parses with this context; shorthand for [`parse_scalar`].
    pub fn parse(&self, text: &str) -> Result<Scalar, NumericError> {
        parse_scalar(text, self)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            decimal_digits: DEFAULT_DECIMAL_DIGITS,
        }
    }
}

/// A real number carried at a fixed binary precision.
///
/// Binary operations produce a result at the wider of the two operand
/// precisions, so mixing contexts never silently loses digits.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Scalar(Float);

impl Scalar {
    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.clone().abs())
    }

    pub fn recip(&self) -> Scalar {
        Scalar(self.0.clone().recip())
    }

    pub fn sqrt(&self) -> Scalar {
        Scalar(self.0.clone().sqrt())
    }

    pub fn sin(&self) -> Scalar {
        Scalar(self.0.clone().sin())
    }

    pub fn cos(&self) -> Scalar {
        Scalar(self.0.clone().cos())
    }

    pub fn cot(&self) -> Scalar {
        Scalar(self.0.clone().cot())
    }

    pub fn sinh(&self) -> Scalar {
        Scalar(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Scalar {
        Scalar(self.0.clone().cosh())
    }

    pub fn coth(&self) -> Scalar {
        Scalar(self.0.clone().coth())
    }

    pub fn exp(&self) -> Scalar {
        Scalar(self.0.clone().exp())
    }

    pub fn ln(&self) -> Scalar {
        Scalar(self.0.clone().ln())
    }

    pub fn powi(&self, exponent: i32) -> Scalar {
        Scalar(self.0.clone().pow(exponent))
    }

    pub fn half(&self) -> Scalar {
        Scalar(self.0.clone() >> 1u32)
    }

    pub fn mul_int(&self, factor: i64) -> Scalar {
        Scalar(self.0.clone() * factor)
    }

    pub fn max<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min<'a>(&'a self, other: &'a Scalar) -> &'a Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Total order for finite values; NaN compares as equal to everything.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// An integer carried at this value's precision.
    pub fn int_like(&self, value: i64) -> Scalar {
        Scalar(Float::with_val(self.0.prec(), value))
    }

    /// Pi at this value's precision.
    pub fn pi_like(&self) -> Scalar {
        Scalar(Float::with_val(self.0.prec(), Constant::Pi))
    }

    /// `10^exponent` at this value's precision.
    pub fn pow10_like(&self, exponent: i32) -> Scalar {
        Scalar(Float::with_val(self.0.prec(), 10).pow(exponent))
    }

    /// Decimal digits represented by this value's mantissa width.
    pub fn decimal_digits(&self) -> u32 {
        (self.0.prec() as f64 / LOG2_10).floor() as u32
    }

    /// Re-rounds the value to a given context.
    pub fn with_context(&self, ctx: &PrecisionContext) -> Scalar {
        Scalar(Float::with_val(ctx.bits(), &self.0))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, None))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.0.prec() as f64) / LOG2_10).floor() as usize;
        write!(f, "{}", self.0.to_string_radix(10, Some(digits.max(1))))
    }
}

fn wider(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(Float::with_val(wider(&self.0, &rhs.0), &self.0 $op &rhs.0))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);
binary_op!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0.clone())
    }
}

/// Parses an optionally signed decimal numeral with an optional exponent,
/// correctly rounded to the context precision.
pub fn parse_scalar(text: &str, ctx: &PrecisionContext) -> Result<Scalar, NumericError> {
    validate_numeral(text)?;
    let parsed = Float::parse(text).map_err(|_| NumericError::Parse {
        text: text.to_string(),
        position: 0,
        found: "unparseable numeral".to_string(),
    })?;
    Ok(Scalar(Float::with_val(ctx.bits(), parsed)))
}

fn validate_numeral(text: &str) -> Result<(), NumericError> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Start,
        Sign,
        Int,
        Dot,
        Frac,
        Exp,
        ExpSign,
        ExpDigits,
    }
    let fail = |position: usize, found: String| NumericError::Parse {
        text: text.to_string(),
        position,
        found,
    };
    let mut state = State::Start;
    let mut seen_mantissa_digit = false;
    let mut count = 0;
    for (position, ch) in text.chars().enumerate() {
        count = position + 1;
        state = match (state, ch) {
            (State::Start, '+' | '-') => State::Sign,
            (State::Start | State::Sign | State::Int, '0'..='9') => {
                seen_mantissa_digit = true;
                State::Int
            }
            (State::Start | State::Sign | State::Int, '.') => State::Dot,
            (State::Dot | State::Frac, '0'..='9') => {
                seen_mantissa_digit = true;
                State::Frac
            }
            (State::Int | State::Dot | State::Frac, 'e' | 'E') if seen_mantissa_digit => State::Exp,
            (State::Exp, '+' | '-') => State::ExpSign,
            (State::Exp | State::ExpSign | State::ExpDigits, '0'..='9') => State::ExpDigits,
            _ => return Err(fail(position, format!("character {ch:?}"))),
        };
    }
    match state {
        State::Int | State::Frac | State::ExpDigits => Ok(()),
        State::Dot if seen_mantissa_digit => Ok(()),
        _ => Err(fail(count, "end of input".to_string())),
    }
}

/// Fixed-point rendering with exactly `digits` fractional digits.
///
/// The exact binary value is rounded half-to-even; a result that rounds to
/// zero is printed without a sign.
pub fn format_scalar(
    x: &Scalar,
    digits: u32,
    ctx: &PrecisionContext,
) -> Result<String, NumericError> {
    if digits > ctx.decimal_digits() {
        return Err(NumericError::DigitsExceedPrecision {
            requested: digits,
            available: ctx.decimal_digits(),
        });
    }
    format_fixed(x, digits)
}

/// Like [`format_scalar`] without the context bound on `digits`.
pub(crate) fn format_fixed(x: &Scalar, digits: u32) -> Result<String, NumericError> {
    let exact = x.0.to_rational().ok_or(NumericError::NonFinite)?;
    let scaled = exact * Rational::from(Integer::from(Integer::u_pow_u(10, digits)));
    let (fract, floor) = scaled.fract_floor(Integer::new());
    let half = Rational::from((1, 2));
    let rounded = match fract.cmp(&half) {
        Ordering::Greater => floor + 1,
        Ordering::Less => floor,
        Ordering::Equal if floor.is_odd() => floor + 1,
        Ordering::Equal => floor,
    };
    let negative = rounded < 0;
    let mut body = rounded.abs().to_string();
    let width = digits as usize + 1;
    if body.len() < width {
        body = format!("{}{}", "0".repeat(width - body.len()), body);
    }
    let split = body.len() - digits as usize;
    let mut out = String::with_capacity(body.len() + 2);
    if negative {
        out.push('-');
    }
    out.push_str(&body[..split]);
    if digits > 0 {
        out.push('.');
        out.push_str(&body[split..]);
    }
    Ok(out)
}

/// Fixed-point rendering with trailing fractional zeros removed
/// (`"-6.000"` becomes `"-6"`, `"-0.500"` becomes `"-0.5"`).
pub fn format_trimmed(x: &Scalar, digits: u32) -> Result<String, NumericError> {
    let full = format_fixed(x, digits)?;
    if !full.contains('.') {
        return Ok(full);
    }
    let trimmed = full.trim_end_matches('0').trim_end_matches('.');
    Ok(match trimmed {
        "-0" => "0".to_string(),
        other => other.to_string(),
    })
}
