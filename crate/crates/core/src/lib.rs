//! Symbolic verification and construction of entire solutions to quadratic
//! trinomial Fermat-type functional equations
//!
//! ```text
//! (L1(f))^2 + 2*omega*L1(f)*L2(f) + (L2(f))^2 = e^{2g}
//! ```
//!
//! where `L1`, `L2` combine a function with its second derivative and either
//! a shifted argument `f(z + c)` or a rescaled argument `f(q z)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`] — complex scalars and the process-wide tolerance policy;
//! * [`poly`] — dense univariate polynomials;
//! * [`expalg`] — canonical exponential polynomials `sum P_j(z) e^{Q_j(z)}`,
//!   the algebra everything else computes on;
//! * [`exprparse`] — text input/output for expressions and constants;
//! * [`equation`] — problem specifications, operators, derived minors,
//!   hypothesis checks, classification, and the residual certificate;
//! * [`solver`] — the linear-ODE engine and the closed-form family
//!   constructors for every classified case.
//!
//! A candidate `f` solves an equation exactly when
//! [`equation::ProblemSpec::residual`] returns an empty residual; that
//! substitution check is the certificate this library trusts, and the
//! constructors report their scalar consistency conditions rather than
//! assuming them.

pub mod equation;
pub mod expalg;
pub mod exprparse;
pub mod poly;
pub mod scalar;
pub mod solver;

pub use equation::{
    decompose_targets, elimination_lhs, elimination_rhs, is_resonant, quadratic_form, CaseId,
    CaseTag, Classification, DerivedQuantities, EliminationId, FermatError, HypothesisViolation,
    OperatorMode, OutsideReason, ProblemSpec, Residual, Resonance, Theorem, DEFAULT_N_MAX,
};
pub use expalg::{ExpError, ExpPoly, ExpTerm};
pub use exprparse::{format_complex, format_expr, format_poly, parse_complex, parse_expr,
    parse_poly, ParseError};
pub use poly::Poly;
pub use scalar::{principal_sqrt, scalar_eq, scalar_is_zero, set_tolerance, tolerance, Scalar,
    Tolerance};
pub use solver::{
    construct, construct_case1, construct_t1_case2, construct_t1_case3, construct_t1_case4,
    construct_t2_case2, construct_t2_case3, solve_linear_ode, Case1Branch, Condition, FreeParams,
    SolutionFamily, SolverError,
};
