//! Total-step (Jacobi) driver for the simultaneous iteration.
//!
//! Every sweep computes all corrections from the current vector before any
//! coordinate is replaced. Iteration stops once the largest correction
//! computed at an iterate is within the tolerance; that iterate is the
//! answer and the last row of the trace.

use serde::Serialize;
use thiserror::Error;

use crate::corrections::{step_with_value, CorrectionError, Floors, RootState, StateError, Step};
use crate::numeric::{PrecisionContext, Scalar};
use crate::polynomials::RootFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Convergence is declared when the largest correction is `<=` this.
    pub tolerance: Scalar,
    pub max_iterations: usize,
    pub precision: PrecisionContext,
    /// Relative threshold on the correction denominator.
    pub denominator_floor: Scalar,
    /// Absolute threshold on the gap between two approximations.
    pub collision_floor: Scalar,
    /// Abort once any `|x_i|` exceeds this; `None` means
    /// `10^6 * (1 + max |x_i^[0]|)`.
    pub divergence_bound: Option<Scalar>,
}

impl SolveConfig {
    /// Tolerance and both floors at `10^(10 - digits)`, 50 iterations.
    pub fn new(precision: PrecisionContext) -> Self {
        let floors = Floors::for_context(&precision);
        Self {
            tolerance: floors.collision.clone(),
            max_iterations: 50,
            precision,
            denominator_floor: floors.denominator,
            collision_floor: floors.collision,
            divergence_bound: None,
        }
    }

    pub fn with_tolerance(mut self, tolerance: Scalar) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn floors(&self) -> Floors {
        Floors {
            collision: self.collision_floor.with_context(&self.precision),
            denominator: self.denominator_floor.with_context(&self.precision),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("multiplicities sum to {total} but the polynomial has {expected} roots")]
    MultiplicityMismatch { total: usize, expected: usize },
    #[error("invalid solver configuration: {0}")]
    Config(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterationsReached,
    Collision,
    DenominatorUnderflow,
    Diverged,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterationsReached => "max_iterations_reached",
            SolveStatus::Collision => "collision",
            SolveStatus::DenominatorUnderflow => "denominator_underflow",
            SolveStatus::Diverged => "diverged",
        }
    }
}

/// Why a solve stopped early; indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveFailure {
    Correction(CorrectionError),
    Diverged { index: usize, value: Scalar },
}

impl SolveFailure {
    /// The coordinate that triggered the failure.
    pub fn index(&self) -> usize {
        match self {
            SolveFailure::Correction(CorrectionError::Collision { i, .. })
            | SolveFailure::Correction(CorrectionError::DenominatorUnderflow { i, .. }) => *i,
            SolveFailure::Correction(CorrectionError::IndexOutOfRange { index, .. }) => *index,
            SolveFailure::Correction(CorrectionError::CountMismatch { .. }) => 0,
            SolveFailure::Diverged { index, .. } => *index,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRow {
    pub k: usize,
    pub values: Vec<Scalar>,
    /// Largest correction computed from this row; `None` when the sweep
    /// from this row failed.
    pub max_delta: Option<Scalar>,
    /// `|f(x_i)|` at this row.
    pub residuals: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTrace {
    pub rows: Vec<IterationRow>,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&IterationRow> {
        self.rows.last()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub roots: Vec<Scalar>,
    pub iterations_used: usize,
    pub trace: IterationTrace,
    pub order_estimate: Option<Scalar>,
    pub failure: Option<SolveFailure>,
}

fn sweep<F: RootFunction + ?Sized>(
    poly: &F,
    state: &RootState,
    floors: &Floors,
) -> Result<Vec<Step>, CorrectionError> {
    (0..state.len())
        .map(|i| step_with_value(poly, i, state, floors))
        .collect()
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a Scalar>, zero: Scalar) -> Scalar {
    values
        .into_iter()
        .fold(zero, |acc, v| acc.max(&v.abs()).clone())
}

/// Refines all approximations simultaneously.
///
/// Structural problems (multiplicity total not matching the polynomial,
/// bad configuration) are errors; numerical breakdowns during iteration are
/// reported through [`SolveResult::status`] with the trace up to that point.
pub fn solve<F: RootFunction + ?Sized>(
    poly: &F,
    multiplicities: &[u32],
    initial: &[Scalar],
    config: &SolveConfig,
) -> Result<SolveResult, SolveError> {
    let ctx = &config.precision;
    let values: Vec<Scalar> = initial.iter().map(|v| v.with_context(ctx)).collect();
    let mut state = RootState::new(values, multiplicities.to_vec())?;
    let total: usize = multiplicities.iter().map(|&m| m as usize).sum();
    if total != poly.root_count() {
        return Err(SolveError::MultiplicityMismatch {
            total,
            expected: poly.root_count(),
        });
    }
    if config.tolerance.is_sign_negative() || config.tolerance.is_zero() {
        return Err(SolveError::Config("tolerance must be positive"));
    }
    if config.max_iterations == 0 {
        return Err(SolveError::Config("max_iterations must be at least 1"));
    }
    let largest_start = max_abs(state.values(), ctx.zero());
    let bound = match &config.divergence_bound {
        Some(b) => b.with_context(ctx),
        None => (&ctx.one() + &largest_start).mul_int(1_000_000),
    };
    if bound <= largest_start {
        return Err(SolveError::Config(
            "divergence bound must exceed every initial magnitude",
        ));
    }
    let floors = config.floors();
    let tolerance = config.tolerance.with_context(ctx);

    let mut trace = IterationTrace::default();
    let mut k = 0;
    let (status, failure) = loop {
        let steps = match sweep(poly, &state, &floors) {
            Ok(steps) => steps,
            Err(err) => {
                let residuals = state
                    .values()
                    .iter()
                    .map(|x| poly.eval_with_derivative(x).0.abs())
                    .collect();
                trace.rows.push(IterationRow {
                    k,
                    values: state.values().to_vec(),
                    max_delta: None,
                    residuals,
                });
                let status = match err {
                    CorrectionError::Collision { .. } => SolveStatus::Collision,
                    _ => SolveStatus::DenominatorUnderflow,
                };
                break (status, Some(SolveFailure::Correction(err)));
            }
        };
        let deltas: Vec<Scalar> = steps
            .iter()
            .zip(state.values())
            .map(|(s, x)| &s.next - x)
            .collect();
        let max_delta = max_abs(&deltas, ctx.zero());
        let converged = max_delta <= tolerance;
        trace.rows.push(IterationRow {
            k,
            values: state.values().to_vec(),
            max_delta: Some(max_delta),
            residuals: steps.iter().map(|s| s.value.abs()).collect(),
        });
        if converged {
            break (SolveStatus::Converged, None);
        }
        if k == config.max_iterations {
            break (SolveStatus::MaxIterationsReached, None);
        }
        let next: Vec<Scalar> = steps.into_iter().map(|s| s.next).collect();
        if let Some(index) = next.iter().position(|v| !v.is_finite() || v.abs() > bound) {
            let value = next[index].clone();
            break (
                SolveStatus::Diverged,
                Some(SolveFailure::Diverged { index, value }),
            );
        }
        state = state.with_values(next);
        k += 1;
    };

    let roots = state.values().to_vec();
    let order_estimate = match status {
        SolveStatus::Converged => estimate_order(&trace, None).ok(),
        _ => None,
    };
    Ok(SolveResult {
        status,
        roots,
        iterations_used: k,
        trace,
        order_estimate,
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("only {usable} usable error pairs; at least 2 are needed")]
    InsufficientData { usable: usize },
    #[error("reference has {reference} roots but the trace rows have {values}")]
    LengthMismatch { reference: usize, values: usize },
}

/// Least-squares slope of `ln e_{k+1}` against `ln e_k`.
///
/// `e_k` is the largest distance of row `k` from `exact_roots`, or from the
/// last row when no exact roots are given. Only consecutive pairs that
/// strictly decrease and stay above ten times the rounding floor are used.
pub fn estimate_order(
    trace: &IterationTrace,
    exact_roots: Option<&[Scalar]>,
) -> Result<Scalar, OrderError> {
    let Some(last) = trace.last() else {
        return Err(OrderError::InsufficientData { usable: 0 });
    };
    let reference = exact_roots.unwrap_or(&last.values);
    let zero = reference
        .first()
        .map(|r| r.int_like(0))
        .ok_or(OrderError::InsufficientData { usable: 0 })?;
    let mut errors = Vec::with_capacity(trace.rows.len());
    for row in &trace.rows {
        if row.values.len() != reference.len() {
            return Err(OrderError::LengthMismatch {
                reference: reference.len(),
                values: row.values.len(),
            });
        }
        let e = row
            .values
            .iter()
            .zip(reference)
            .fold(zero.clone(), |acc, (x, r)| acc.max(&(x - r).abs()).clone());
        errors.push(e);
    }
    let bits = reference
        .iter()
        .map(|r| r.precision_bits())
        .max()
        .unwrap_or(53);
    let magnitude = max_abs(reference, zero.int_like(1));
    let floor = &zero.int_like(2).powi(1 - bits as i32).mul_int(10) * &magnitude;

    let pairs: Vec<(Scalar, Scalar)> = errors
        .windows(2)
        .filter(|w| w[0] > floor && w[1] > floor && w[1] < w[0])
        .map(|w| (w[0].ln(), w[1].ln()))
        .collect();
    if pairs.len() < 2 {
        return Err(OrderError::InsufficientData {
            usable: pairs.len(),
        });
    }
    let count = zero.int_like(pairs.len() as i64);
    let mean_x = &pairs.iter().fold(zero.clone(), |acc, (x, _)| &acc + x) / &count;
    let mean_y = &pairs.iter().fold(zero.clone(), |acc, (_, y)| &acc + y) / &count;
    let (mut sxy, mut sxx) = (zero.clone(), zero.clone());
    for (x, y) in &pairs {
        let dx = x - &mean_x;
        sxy = &sxy + &(&dx * &(y - &mean_y));
        sxx = &sxx + &(&dx * &dx);
    }
    if sxx.is_zero() {
        return Err(OrderError::InsufficientData {
            usable: pairs.len(),
        });
    }
    Ok(&sxy / &sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{AlgebraicPoly, FactoredSpec, Family};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    fn parse_all(ctx: &PrecisionContext, v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|s| ctx.parse(s).unwrap()).collect()
    }

    fn trace_from(errors: &[Scalar], root: &Scalar) -> IterationTrace {
        IterationTrace {
            rows: errors
                .iter()
                .enumerate()
                .map(|(k, e)| IterationRow {
                    k,
                    values: vec![root + e],
                    max_delta: None,
                    residuals: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn synthetic_cubic_sequence_has_order_three() {
        let ctx = ctx();
        let root = ctx.zero();
        let errors: Vec<Scalar> = (0..4).map(|k| ctx.pow10(-2 * 3i32.pow(k))).collect();
        let slope = estimate_order(
            &trace_from(&errors, &root),
            Some(std::slice::from_ref(&root)),
        )
        .unwrap();
        assert!((slope.to_f64() - 3.0).abs() < 1e-20);
    }

    #[test]
    fn constant_error_is_insufficient() {
        let ctx = ctx();
        let root = ctx.zero();
        let errors = vec![ctx.pow10(-3); 5];
        assert_eq!(
            estimate_order(
                &trace_from(&errors, &root),
                Some(std::slice::from_ref(&root))
            ),
            Err(OrderError::InsufficientData { usable: 0 })
        );
    }

    #[test]
    fn example_one_coefficient_form_matches_table_above_noise_floor() {
        // expanded coefficients leave a noise floor of roughly
        // 10^((2 - digits)/3) around the triple root at 3, so only rows whose
        // error sits above it are meaningful
        let ctx = ctx();
        let poly = AlgebraicPoly::new(parse_all(
            &ctx,
            &["1", "-6", "0", "50", "-45", "-108", "108"],
        ))
        .unwrap();
        let config = SolveConfig::new(ctx).with_max_iterations(3);
        let result = solve(
            &poly,
            &[2, 1, 3],
            &parse_all(&ctx, &["-3", "0.1", "4"]),
            &config,
        )
        .unwrap();
        assert_eq!(result.status, SolveStatus::MaxIterationsReached);
        let table = [
            [
                "-1.99942363112391931",
                "1.03532819268537456",
                "3.03985932004689332",
            ],
            [
                "-2.00000000143304088",
                "0.999961906975802837",
                "2.99999539984403290",
            ],
            [
                "-2.000000000000000000",
                "1.00000000000000501",
                "3.00000000000000007",
            ],
        ];
        for (row, expected) in result.trace.rows[1..].iter().zip(&table) {
            for (a, b) in row.values.iter().zip(parse_all(&ctx, expected)) {
                assert!((a - &b).abs() < ctx.pow10(-17).mul_int(5), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn exact_start_converges_immediately() {
        let ctx = ctx();
        let roots = parse_all(&ctx, &["-2", "3"]);
        let spec =
            FactoredSpec::new(Family::Exponential, roots.clone(), vec![2, 2], ctx.one()).unwrap();
        let result = solve(&spec, &[2, 2], &roots, &SolveConfig::new(ctx)).unwrap();
        assert_eq!(result.status, SolveStatus::Converged);
        assert_eq!(result.iterations_used, 0);
        assert!(result.trace.rows[0].max_delta.as_ref().unwrap().is_zero());
        assert_eq!(result.roots, roots);
    }

    #[test]
    fn structural_errors() {
        let ctx = ctx();
        let spec = FactoredSpec::new(
            Family::Algebraic,
            parse_all(&ctx, &["1", "2"]),
            vec![1, 2],
            ctx.one(),
        )
        .unwrap();
        let init = parse_all(&ctx, &["0", "3"]);
        assert_eq!(
            solve(&spec, &[1, 1], &init, &SolveConfig::new(ctx)),
            Err(SolveError::MultiplicityMismatch {
                total: 2,
                expected: 3
            })
        );
        assert!(matches!(
            solve(&spec, &[1, 2], &init[..1], &SolveConfig::new(ctx)),
            Err(SolveError::State(_))
        ));
        let bad = SolveConfig::new(ctx).with_max_iterations(0);
        assert!(matches!(
            solve(&spec, &[1, 2], &init, &bad),
            Err(SolveError::Config(_))
        ));
        let mut tight = SolveConfig::new(ctx);
        tight.divergence_bound = Some(ctx.int(2));
        assert!(matches!(
            solve(&spec, &[1, 2], &init, &tight),
            Err(SolveError::Config(_))
        ));
    }

    #[test]
    fn divergence_is_detected() {
        let ctx = ctx();
        // x^2 + 1 has no real roots; the iterate is thrown far out
        let poly = AlgebraicPoly::new(parse_all(&ctx, &["1", "0", "1"])).unwrap();
        let mut config = SolveConfig::new(ctx);
        config.divergence_bound = Some(ctx.int(10));
        let result = solve(&poly, &[2], &parse_all(&ctx, &["0.01"]), &config).unwrap();
        assert_eq!(result.status, SolveStatus::Diverged);
        assert!(matches!(
            result.failure,
            Some(SolveFailure::Diverged { index: 0, .. })
        ));
        assert_eq!(result.trace.rows.len(), 1);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let ctx = ctx();
        let spec = FactoredSpec::new(
            Family::Algebraic,
            parse_all(&ctx, &["-2", "1", "3"]),
            vec![2, 1, 3],
            ctx.one(),
        )
        .unwrap();
        let config = SolveConfig::new(ctx).with_max_iterations(2);
        let result = solve(
            &spec,
            &[2, 1, 3],
            &parse_all(&ctx, &["-3", "0.1", "4"]),
            &config,
        )
        .unwrap();
        assert_eq!(result.status, SolveStatus::MaxIterationsReached);
        assert_eq!(result.iterations_used, 2);
        assert_eq!(result.trace.rows.len(), 3);
        assert!(result.order_estimate.is_none());
    }
}
