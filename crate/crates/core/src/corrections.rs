//! Single-coordinate correction kernels.
//!
//! For approximation `x_i` with multiplicity `alpha_i` the update is
//!
//! ```text
//! x_i' = x_i - alpha_i * f(x_i) / (f'(x_i) - f(x_i) * S_i)
//! ```
//!
//! where `S_i = Q_i'(x_i) / Q_i(x_i)` is the logarithmic derivative of the
//! product over the other approximations. Only `S_i` is ever formed; the
//! products themselves are never evaluated.

use thiserror::Error;

use crate::numeric::{PrecisionContext, Scalar};
use crate::polynomials::{AlgebraicPoly, Family, RootFunction};

/// Indices in errors are zero-based positions in the state vector.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrectionError {
    #[error("approximations {i} and {j} collided (gap {gap})")]
    Collision { i: usize, j: usize, gap: Scalar },
    #[error("correction denominator for approximation {i} underflowed ({denominator})")]
    DenominatorUnderflow { i: usize, denominator: Scalar },
    #[error("index {index} out of range for {len} approximations")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{values} approximations supplied for a polynomial of degree {degree}")]
    CountMismatch { values: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("{values} approximations but {multiplicities} multiplicities")]
    LengthMismatch {
        values: usize,
        multiplicities: usize,
    },
    #[error("a state needs at least one approximation")]
    Empty,
    #[error("multiplicity of approximation {0} must be >= 1")]
    ZeroMultiplicity(usize),
}

/// Current approximations paired with their fixed multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct RootState {
    values: Vec<Scalar>,
    multiplicities: Vec<u32>,
}

impl RootState {
    pub fn new(values: Vec<Scalar>, multiplicities: Vec<u32>) -> Result<Self, StateError> {
        if values.len() != multiplicities.len() {
            return Err(StateError::LengthMismatch {
                values: values.len(),
                multiplicities: multiplicities.len(),
            });
        }
        if values.is_empty() {
            return Err(StateError::Empty);
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(StateError::ZeroMultiplicity(i));
        }
        Ok(Self {
            values,
            multiplicities,
        })
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn with_values(&self, values: Vec<Scalar>) -> RootState {
        RootState {
            values,
            multiplicities: self.multiplicities.clone(),
        }
    }
}

/// Thresholds that turn near-singular steps into errors.
///
/// `collision` is absolute: two approximations closer than it collide (for
/// the trigonometric family the test is on `2 sin(gap/2)`, so gaps near a
/// nonzero multiple of `2 pi` collide too). `denominator` is relative to
/// `max(|f'|, |f S|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Floors {
    pub collision: Scalar,
    pub denominator: Scalar,
}

impl Floors {
    /// `10^(10 - digits)` for both thresholds.
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        let floor = ctx.pow10(10 - ctx.decimal_digits() as i32);
        Self {
            collision: floor.clone(),
            denominator: floor,
        }
    }
}

fn check_index(i: usize, len: usize) -> Result<(), CorrectionError> {
    if i >= len {
        return Err(CorrectionError::IndexOutOfRange { index: i, len });
    }
    Ok(())
}

fn collides(family: Family, gap: &Scalar, floor: &Scalar) -> bool {
    if gap.is_zero() {
        return true;
    }
    let separation = match family {
        Family::Trigonometric => gap.half().sin().mul_int(2).abs(),
        Family::Algebraic | Family::Exponential => gap.abs(),
    };
    separation < *floor
}

/// `Q_i'(x_i) / Q_i(x_i)` for the deflation product of the given family:
/// `sum alpha_j / (x_i - x_j)`, `(1/2) sum alpha_j cot((x_i - x_j)/2)` or
/// `(1/2) sum alpha_j coth((x_i - x_j)/2)`, over `j != i`.
pub fn log_deriv_q(
    family: Family,
    i: usize,
    state: &RootState,
    collision_floor: &Scalar,
) -> Result<Scalar, CorrectionError> {
    check_index(i, state.len())?;
    let xi = &state.values[i];
    let mut sum = xi.int_like(0);
    for (j, (xj, &alpha)) in state.values.iter().zip(&state.multiplicities).enumerate() {
        if j == i {
            continue;
        }
        let gap = xi - xj;
        if collides(family, &gap, collision_floor) {
            let (i, j) = (i.min(j), i.max(j));
            return Err(CorrectionError::Collision { i, j, gap });
        }
        let term = match family {
            Family::Algebraic => gap.recip(),
            Family::Trigonometric => gap.half().cot(),
            Family::Exponential => gap.half().coth(),
        };
        sum = &sum + &term.mul_int(alpha as i64);
    }
    Ok(match family {
        Family::Algebraic => sum,
        Family::Trigonometric | Family::Exponential => sum.half(),
    })
}

/// Result of one correction: the new approximation and `f(x_i)` at the old one.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Step {
    pub next: Scalar,
    pub value: Scalar,
}

fn guarded_quotient(
    i: usize,
    value: &Scalar,
    derivative: &Scalar,
    log_deriv: &Scalar,
    floor: &Scalar,
) -> Result<Scalar, CorrectionError> {
    let deflation = value * log_deriv;
    let denominator = derivative - &deflation;
    let scale = derivative.abs().max(&deflation.abs()).clone();
    if denominator.is_zero() || denominator.abs() < floor * &scale || !denominator.is_finite() {
        return Err(CorrectionError::DenominatorUnderflow { i, denominator });
    }
    Ok(value / &denominator)
}

pub(crate) fn step_with_value<F: RootFunction + ?Sized>(
    poly: &F,
    i: usize,
    state: &RootState,
    floors: &Floors,
) -> Result<Step, CorrectionError> {
    let log_deriv = log_deriv_q(poly.family(), i, state, &floors.collision)?;
    let xi = &state.values[i];
    let (value, derivative) = poly.eval_with_derivative(xi);
    if value.is_zero() {
        return Ok(Step {
            next: xi.clone(),
            value,
        });
    }
    let quotient = guarded_quotient(i, &value, &derivative, &log_deriv, &floors.denominator)?;
    let alpha = state.multiplicities[i] as i64;
    Ok(Step {
        next: xi - &quotient.mul_int(alpha),
        value,
    })
}

/// One multiplicity-aware update of coordinate `i`; the family is taken from
/// `poly`. An exact zero of `poly` at `x_i` is returned unchanged.
pub fn step_general<F: RootFunction + ?Sized>(
    poly: &F,
    i: usize,
    state: &RootState,
    floors: &Floors,
) -> Result<Scalar, CorrectionError> {
    step_with_value(poly, i, state, floors).map(|s| s.next)
}

/// The classic Ehrlich update of coordinate `i`, treating every root as
/// simple: `x_i - A(x_i) / (A'(x_i) - A(x_i) sum_{j != i} 1/(x_i - x_j))`.
pub fn ehrlich_step_simple(
    poly: &AlgebraicPoly,
    i: usize,
    values: &[Scalar],
    floors: &Floors,
) -> Result<Scalar, CorrectionError> {
    if values.len() != poly.degree() {
        return Err(CorrectionError::CountMismatch {
            values: values.len(),
            degree: poly.degree(),
        });
    }
    check_index(i, values.len())?;
    let xi = &values[i];
    let mut sum = xi.int_like(0);
    for (j, xj) in values.iter().enumerate() {
        if j == i {
            continue;
        }
        let gap = xi - xj;
        if collides(Family::Algebraic, &gap, &floors.collision) {
            let (i, j) = (i.min(j), i.max(j));
            return Err(CorrectionError::Collision { i, j, gap });
        }
        sum = &sum + &gap.recip();
    }
    let (value, derivative) = poly.eval_with_derivative(xi);
    if value.is_zero() {
        return Ok(xi.clone());
    }
    let quotient = guarded_quotient(i, &value, &derivative, &sum, &floors.denominator)?;
    Ok(xi - &quotient)
}
