//! Simultaneous refinement of all roots of algebraic, trigonometric and
//! exponential polynomials whose root multiplicities are known.
//!
//! The iteration is the multiplicity-aware Obreshkoff–Ehrlich scheme:
//! every root approximation receives a Newton-like correction scaled by its
//! multiplicity and deflated by the logarithmic derivative of the product
//! over all other approximations. Convergence is cubic.
//!
//! ```
//! use multiroots::{solve, FactoredSpec, Family, PrecisionContext, SolveConfig, SolveStatus};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let ctx = PrecisionContext::new(30)?;
//! let roots = vec![ctx.int(-2), ctx.int(3)];
//! let spec = FactoredSpec::new(Family::Exponential, roots, vec![2, 2], ctx.one())?;
//! let start = vec![ctx.parse("-1")?, ctx.parse("4")?];
//! let config = SolveConfig::new(ctx).with_tolerance(ctx.parse("1e-20")?);
//! let result = solve(&spec, &[2, 2], &start, &config)?;
//! assert_eq!(result.status, SolveStatus::Converged);
//! assert_eq!(result.iterations_used, 4);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod conditions;
pub mod corrections;
pub mod numeric;
pub mod polynomials;
pub mod solver;

pub use conditions::{
    check, check_theorem1, check_theorem2, check_theorem3, find_constants, min_gap,
    verify_initial_ball, Constants, InequalityRow, Theorem, TheoremReport,
};
pub use corrections::{
    ehrlich_step_simple, log_deriv_q, step_general, CorrectionError, Floors, RootState, StateError,
};
pub use numeric::{format_scalar, parse_scalar, NumericError, PrecisionContext, Scalar};
pub use polynomials::{
    eval_factored, expand_factored, AlgebraicPoly, ExpPoly, FactoredSpec, Family, PolyError,
    Polynomial, RootFunction, TrigPoly,
};
pub use solver::{
    estimate_order, solve, IterationRow, IterationTrace, OrderError, SolveConfig, SolveError,
    SolveFailure, SolveResult, SolveStatus,
};
