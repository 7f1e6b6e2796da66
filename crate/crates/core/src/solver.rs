//! Closed-form solution families, built on a second-order linear ODE engine
//! with undetermined coefficients.
//!
//! Every constructor produces a candidate that satisfies its defining linear
//! identity (the `A3 f + A2 f''` elimination equation, or its degenerate
//! forms) exactly; the full quadratic residual of the original equation is
//! always reported by the caller, never assumed. Free parameters are caller
//! supplied: the solver does not search for values that close the residual.
//!
//! Resonance handling is generic: a forcing frequency whose distance to a
//! root of `A2 s^2 + A3` is below the routing threshold gets its trial
//! polynomial degree lifted by the root multiplicity. The degenerate branches
//! listed per case (`alpha = ±A`, `k = ±mu`, both at once) all fall out of
//! this one mechanism.

use std::fmt;

use thiserror::Error;

use crate::equation::{
    elimination_rhs_with, resonance_route_threshold, resonance_warn_threshold, CaseId, CaseTag,
    Classification, DerivedQuantities, EliminationId, FermatError, OutsideReason, ProblemSpec,
    Theorem, DEFAULT_N_MAX,
};
use crate::expalg::{ExpError, ExpPoly};
use crate::exprparse::format_poly;
use crate::poly::Poly;
use crate::scalar::{re, scalar_is_zero, Scalar};

/// Errors from the solution-family layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolverError {
    #[error("right-hand side has a nonlinear frequency; only deg <= 1 exponents are supported")]
    NonlinearFrequency,
    #[error("A2 = A3 = 0 leaves no operator to invert")]
    DegenerateOperator,
    #[error("branch unavailable: {0}")]
    BranchUnavailable(String),
    #[error("no case-4 family: {0}")]
    NoCase4Family(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("problem does not match this constructor: expected {expected}, classified as {found}")]
    WrongCase {
        expected: &'static str,
        found: String,
    },
    #[error("{0}")]
    OutsideFamilies(OutsideReason),
    #[error(transparent)]
    Fermat(#[from] FermatError),
    #[error(transparent)]
    Algebra(#[from] ExpError),
}

/// Which pair of constants parameterizes the case-1 candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case1Branch {
    /// Constants divided by the minor `A3`.
    ViaA3,
    /// Constants divided by the minor `A1`.
    ViaA1,
}

impl fmt::Display for Case1Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case1Branch::ViaA3 => write!(f, "viaA3"),
            Case1Branch::ViaA1 => write!(f, "viaA1"),
        }
    }
}

/// Caller-supplied free parameters of a family: the auxiliary exponent
/// `p = p_linear * z + p_const` and the homogeneous constants the case admits.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeParams {
    /// Linear coefficient `A` of the auxiliary exponent.
    pub p_linear: Scalar,
    /// Constant coefficient `B` of the auxiliary exponent.
    pub p_const: Scalar,
    /// Homogeneous constants, in the case's basis order.
    pub extra: Vec<Scalar>,
    /// Case-1 constant branch; default picks `viaA3` when `A3 != 0`.
    pub branch: Option<Case1Branch>,
    /// Use the other square-root branch for the quadratic-form roots
    /// (exchanges the two roots). Constructions are covariant under this swap
    /// combined with negating `p`.
    pub swap_roots: bool,
}

impl Default for FreeParams {
    fn default() -> Self {
        FreeParams {
            p_linear: Scalar::new(0.0, 0.0),
            p_const: Scalar::new(0.0, 0.0),
            extra: Vec::new(),
            branch: None,
            swap_roots: false,
        }
    }
}

/// One scalar consistency check attached to a constructed family.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub description: String,
    pub value: Scalar,
}

impl Condition {
    fn new(description: impl Into<String>, value: Scalar) -> Self {
        Condition {
            description: description.into(),
            value,
        }
    }

    pub fn is_satisfied(&self) -> bool {
        scalar_is_zero(self.value)
    }
}

/// A constructed candidate with its case tag, the parameters used, the
/// scalar conditions the construction rests on, and any numerical warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFamily {
    pub tag: CaseTag,
    pub params: FreeParams,
    pub candidate: ExpPoly,
    pub conditions: Vec<Condition>,
    pub warnings: Vec<String>,
}

/// Multiplicity of `k` as a root of `A2 s^2 + A3` (with `A2 != 0`), under
/// the resonance routing threshold.
fn root_multiplicity(k: Scalar, a3: Scalar, a2: Scalar) -> usize {
    if scalar_is_zero(a3) {
        let scale = k.norm();
        if k.norm() < resonance_route_threshold(scale) {
            2
        } else {
            0
        }
    } else {
        let mu = crate::scalar::principal_sqrt(-a3 / a2);
        let scale = k.norm().max(mu.norm());
        let dist = (k - mu).norm().min((k + mu).norm());
        if dist < resonance_route_threshold(scale) {
            1
        } else {
            0
        }
    }
}

fn resonance_warning(k: Scalar, a3: Scalar, a2: Scalar, label: &str) -> Option<String> {
    let (dist, scale) = if scalar_is_zero(a3) {
        (k.norm(), k.norm())
    } else {
        let mu = crate::scalar::principal_sqrt(-a3 / a2);
        (
            (k - mu).norm().min((k + mu).norm()),
            k.norm().max(mu.norm()),
        )
    };
    if dist >= resonance_route_threshold(scale) && dist < resonance_warn_threshold(scale) {
        Some(format!(
            "ill-conditioned: {label} lies within {dist:.3e} of a homogeneous root; coefficients are large"
        ))
    } else {
        None
    }
}

/// Solve `A3 y + A2 y'' = rhs` exactly.
///
/// * `A2 = 0`: `y = rhs / A3`, no homogeneous part (any rhs shape).
/// * `A2 != 0`: every rhs frequency must be linear (`deg Q <= 1`). Particular
///   terms come from undetermined coefficients with the trial degree lifted
///   by the multiplicity of the forcing frequency as a root of `A2 s^2 + A3`.
///   The homogeneous part added from `homo` is, in order:
///   weights of `e^{mu z}`, `e^{-mu z}` with `mu = sqrt(-A3/A2)` when
///   `A3 != 0`, or weights of `z`, `1` when `A3 = 0`.
pub fn solve_linear_ode(
    a3: Scalar,
    a2: Scalar,
    rhs: &ExpPoly,
    homo: &[Scalar],
) -> Result<ExpPoly, SolverError> {
    let a2_zero = scalar_is_zero(a2);
    let a3_zero = scalar_is_zero(a3);
    if a2_zero && a3_zero {
        return Err(SolverError::DegenerateOperator);
    }
    if a2_zero {
        return Ok(rhs.scale(a3.inv()));
    }

    let mut raw: Vec<(Poly, Poly)> = Vec::new();
    for term in rhs.terms() {
        let freq = term.freq();
        if freq.degree().is_some_and(|d| d > 1) {
            return Err(SolverError::NonlinearFrequency);
        }
        let k = freq.coeff(1);
        let particular = undetermined_coefficients(term.coeff(), k, a3, a2);
        raw.push((particular, Poly::linear(Scalar::new(0.0, 0.0), k)));
    }

    if a3_zero {
        // homogeneous basis: z, 1
        let homo_poly = Poly::linear(
            homo.get(1).copied().unwrap_or(Scalar::new(0.0, 0.0)),
            homo.first().copied().unwrap_or(Scalar::new(0.0, 0.0)),
        );
        raw.push((homo_poly, Poly::zero()));
    } else {
        let mu = crate::scalar::principal_sqrt(-a3 / a2);
        if let Some(&c1) = homo.first() {
            raw.push((Poly::constant(c1), Poly::linear(Scalar::new(0.0, 0.0), mu)));
        }
        if let Some(&c2) = homo.get(1) {
            raw.push((Poly::constant(c2), Poly::linear(Scalar::new(0.0, 0.0), -mu)));
        }
    }

    Ok(ExpPoly::from_raw_terms(raw)?)
}

/// Particular solution `S(z)` with `A2 S'' + 2 A2 k S' + (A2 k^2 + A3) S = P`,
/// returned as the coefficient polynomial of `S e^{kz}`. The trial degree is
/// `deg P` plus the multiplicity of `k` as a root of `A2 s^2 + A3`; at
/// positive multiplicity the operator is applied in its exact resonant form.
fn undetermined_coefficients(p: &Poly, k: Scalar, a3: Scalar, a2: Scalar) -> Poly {
    let n = match p.degree() {
        Some(n) => n,
        None => return Poly::zero(),
    };
    let m = root_multiplicity(k, a3, a2);
    let zero = Scalar::new(0.0, 0.0);
    let mut s = vec![zero; n + m + 1];
    match m {
        0 => {
            let c = a2 * k * k + a3;
            for j in (0..=n).rev() {
                let mut acc = p.coeff(j);
                if j + 1 < s.len() {
                    acc -= a2 * k * re(2.0 * (j + 1) as f64) * s[j + 1];
                }
                if j + 2 < s.len() {
                    acc -= a2 * re(((j + 2) * (j + 1)) as f64) * s[j + 2];
                }
                s[j] = acc / c;
            }
        }
        1 => {
            // A2 S'' + 2 A2 k S' = P, constant term of S absorbed by the
            // homogeneous e^{kz} solution.
            for j in (0..=n).rev() {
                let mut acc = p.coeff(j);
                if j + 2 < s.len() {
                    acc -= a2 * re(((j + 2) * (j + 1)) as f64) * s[j + 2];
                }
                s[j + 1] = acc / (a2 * k * re(2.0 * (j + 1) as f64));
            }
        }
        _ => {
            // A2 S'' = P; the z and 1 coefficients belong to the homogeneous
            // part.
            for j in (0..=n).rev() {
                s[j + 2] = p.coeff(j) / (a2 * re(((j + 2) * (j + 1)) as f64));
            }
        }
    }
    Poly::new(s)
}

fn classified_tag(
    spec: &ProblemSpec,
    p_linear: Scalar,
    expected: CaseId,
    expected_name: &'static str,
) -> Result<CaseTag, SolverError> {
    match spec.classify_with(p_linear, DEFAULT_N_MAX)? {
        Classification::Family(tag) if tag.case_id == expected => Ok(tag),
        Classification::Family(tag) => Err(SolverError::WrongCase {
            expected: expected_name,
            found: tag.to_string(),
        }),
        Classification::Outside(reason) => Err(SolverError::OutsideFamilies(reason)),
    }
}

fn derived_for(spec: &ProblemSpec, params: &FreeParams) -> DerivedQuantities {
    let d = spec.derived();
    if params.swap_roots {
        d.swap_roots()
    } else {
        d
    }
}

fn linear_exponent_parts(spec: &ProblemSpec) -> (Scalar, Scalar) {
    (spec.g().coeff(1), spec.g().coeff(0))
}

fn exp_scalar(x: Scalar) -> Result<Scalar, SolverError> {
    let v = x.exp();
    if crate::scalar::scalar_is_finite(v) {
        Ok(v)
    } else {
        Err(SolverError::Algebra(ExpError::Overflow))
    }
}

/// Append one condition per non-vanishing residual coefficient of `diff`;
/// when `diff` is identically zero a single satisfied marker is recorded.
fn push_conditions(out: &mut Vec<Condition>, label: &str, diff: &ExpPoly) {
    if diff.is_zero() {
        out.push(Condition::new(
            format!("{label}: satisfied"),
            Scalar::new(0.0, 0.0),
        ));
        return;
    }
    for term in diff.terms() {
        for (j, &coef) in term.coeff().coeffs().iter().enumerate() {
            if coef == Scalar::new(0.0, 0.0) {
                continue;
            }
            out.push(Condition::new(
                format!(
                    "{label}: coefficient of z^{j} * exp({})",
                    format_poly(term.freq())
                ),
                coef,
            ));
        }
    }
}

/// Case-1 family (`A2 = 0`, linear `g`), valid in both operator modes:
/// `f = C1 e^{(A+alpha) z} + C2 e^{(alpha-A) z}` with the constants of the
/// selected branch. Conditions record how the candidate deviates from the
/// decomposition targets through both operators.
pub fn construct_case1(
    spec: &ProblemSpec,
    params: &FreeParams,
) -> Result<SolutionFamily, SolverError> {
    let tag = classified_tag(spec, params.p_linear, CaseId::C1, "C1")?;
    let d = derived_for(spec, params);
    let (alpha, beta) = linear_exponent_parts(spec);
    let gap = d.root_gap();
    let [_, a1c, a2c] = spec.a();
    let [_, b1c, b2c] = spec.b();

    let branch = params.branch.unwrap_or(if !scalar_is_zero(d.a3) {
        Case1Branch::ViaA3
    } else {
        Case1Branch::ViaA1
    });
    let (num1, num2, denom) = match branch {
        Case1Branch::ViaA3 => (b2c * d.omega2 - a2c, a2c - b2c * d.omega1, d.a3),
        Case1Branch::ViaA1 => (b1c * d.omega2 - a1c, a1c - b1c * d.omega1, d.a1),
    };
    if scalar_is_zero(denom) {
        return Err(SolverError::BranchUnavailable(format!(
            "the {branch} constants divide by a vanishing minor"
        )));
    }

    let c1 = num1 * exp_scalar(params.p_const + beta)? / (gap * denom);
    let c2 = num2 * exp_scalar(-params.p_const + beta)? / (gap * denom);
    let k1 = params.p_linear + alpha;
    let k2 = -params.p_linear + alpha;
    let candidate = ExpPoly::from_raw_terms(vec![
        (Poly::constant(c1), Poly::linear(Scalar::new(0.0, 0.0), k1)),
        (Poly::constant(c2), Poly::linear(Scalar::new(0.0, 0.0), k2)),
    ])
    .map_err(SolverError::Algebra)?;

    let p = Poly::linear(params.p_const, params.p_linear);
    let (t1, t2) = crate::equation::decompose_targets_with(spec, &d, &p)?;
    let mut conditions = Vec::new();
    push_conditions(
        &mut conditions,
        "op1 minus decomposition target",
        &spec.op1(&candidate)?.sub(&t1)?,
    );
    push_conditions(
        &mut conditions,
        "op2 minus decomposition target",
        &spec.op2(&candidate)?.sub(&t2)?,
    );

    Ok(SolutionFamily {
        tag,
        params: params.clone(),
        candidate,
        conditions,
        warnings: Vec::new(),
    })
}

/// Shared engine for the `A2 != 0` cases: solve the elimination identity
/// `A3 f + A2 f'' = rhs(E25)` with the auxiliary exponent `p = A z + B` and
/// attach the case's homogeneous constants.
fn construct_from_elimination(
    spec: &ProblemSpec,
    params: &FreeParams,
    tag: CaseTag,
    a3_for_ode: Scalar,
) -> Result<SolutionFamily, SolverError> {
    let d = derived_for(spec, params);
    let p = Poly::linear(params.p_const, params.p_linear);
    let rhs = elimination_rhs_with(spec, &d, &p, EliminationId::E25)?;
    let candidate = solve_linear_ode(a3_for_ode, d.a2, &rhs, &params.extra)?;

    let mut conditions = Vec::new();
    let check = candidate
        .scale(a3_for_ode)
        .add(&candidate.diff2().scale(d.a2))?
        .sub(&rhs)?;
    push_conditions(&mut conditions, "elimination identity A3*f + A2*f''", &check);

    let (alpha, _) = linear_exponent_parts(spec);
    let mut warnings = Vec::new();
    for (k, label) in [
        (alpha + params.p_linear, "k1 = alpha + A"),
        (alpha - params.p_linear, "k2 = alpha - A"),
    ] {
        if let Some(w) = resonance_warning(k, a3_for_ode, d.a2, label) {
            warnings.push(w);
        }
    }

    Ok(SolutionFamily {
        tag,
        params: params.clone(),
        candidate,
        conditions,
        warnings,
    })
}

/// Case 2 of the shift-mode theorem (`A2 != 0`, `A3 = 0`, linear `g`).
/// The `alpha = ±A` degenerations produce the `z^2` branch automatically.
pub fn construct_t1_case2(
    spec: &ProblemSpec,
    params: &FreeParams,
) -> Result<SolutionFamily, SolverError> {
    let tag = classified_tag(spec, params.p_linear, CaseId::C2, "T1/C2")?;
    if tag.theorem != Theorem::T1 {
        return Err(SolverError::WrongCase {
            expected: "T1/C2",
            found: tag.to_string(),
        });
    }
    construct_from_elimination(spec, params, tag, Scalar::new(0.0, 0.0))
}

/// Case 3 of the shift-mode theorem (`A2 != 0`, `A3 != 0`, linear `g`),
/// including single and double resonance `k = ±mu`.
pub fn construct_t1_case3(
    spec: &ProblemSpec,
    params: &FreeParams,
) -> Result<SolutionFamily, SolverError> {
    let tag = classified_tag(spec, params.p_linear, CaseId::C3, "T1/C3")?;
    if tag.theorem != Theorem::T1 {
        return Err(SolverError::WrongCase {
            expected: "T1/C3",
            found: tag.to_string(),
        });
    }
    let d = derived_for(spec, params);
    construct_from_elimination(spec, params, tag, d.a3)
}

/// Case 4 of the shift-mode theorem: `deg g > 1`, `A1 = A2 = 0`, `A3 != 0`.
///
/// Selects the `e^{g-p}` or `e^{g+p}` branch by which set of four row
/// scalars vanishes, pins the constant term of `p` through the remaining
/// scalar condition (principal logarithm; the full solution set adds
/// `i*pi*Z`), and solves `p(z) + p(z+c) = ±(g(z+c) - g(z)) + b` for the
/// polynomial `p` of degree `deg g - 1`.
pub fn construct_t1_case4(spec: &ProblemSpec) -> Result<SolutionFamily, SolverError> {
    let zero = Scalar::new(0.0, 0.0);
    let tag = classified_tag(spec, zero, CaseId::C4, "T1/C4")?;
    let d = spec.derived();
    let gap = d.root_gap();
    let [a0, a1c, a2c] = spec.a();
    let [b0, b1c, b2c] = spec.b();
    let c = spec.param();
    let g = spec.g();

    let minus_set = [
        ("a0 - b0*omega1", a0 - b0 * d.omega1),
        ("a1 - b1*omega1", a1c - b1c * d.omega1),
        ("b1*omega2 - a1", b1c * d.omega2 - a1c),
        ("b2*omega2 - a2", b2c * d.omega2 - a2c),
    ];
    let plus_set = [
        ("a2 - b2*omega1", a2c - b2c * d.omega1),
        ("a1 - b1*omega1", a1c - b1c * d.omega1),
        ("b0*omega2 - a0", b0 * d.omega2 - a0),
        ("b1*omega2 - a1", b1c * d.omega2 - a1c),
    ];
    let all_zero = |set: &[(&str, Scalar); 4]| set.iter().all(|(_, v)| scalar_is_zero(*v));

    let (set, towards_plus) = if all_zero(&minus_set) {
        (minus_set, false)
    } else if all_zero(&plus_set) {
        (plus_set, true)
    } else {
        let fmt_set = |set: &[(&str, Scalar); 4]| {
            set.iter()
                .map(|(n, v)| format!("{n} = {}", crate::exprparse::format_complex(*v)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        return Err(SolverError::NoCase4Family(format!(
            "neither branch's scalar conditions vanish ({}; {})",
            fmt_set(&minus_set),
            fmt_set(&plus_set)
        )));
    };

    // Scalar pin for the constant b: B1 e^b + B4 = 0 on the e^{g-p} branch,
    // B2 e^b + B3 = 0 on the e^{g+p} branch.
    let (pin_lhs, pin_rhs, pin_label) = if towards_plus {
        (a0 - b0 * d.omega1, b2c * d.omega2 - a2c, "B2*e^b + B3")
    } else {
        (b0 * d.omega2 - a0, a2c - b2c * d.omega1, "B1*e^b + B4")
    };
    if scalar_is_zero(pin_lhs) || scalar_is_zero(pin_rhs) {
        return Err(SolverError::NoCase4Family(
            "the constant-pinning scalars vanish; the branch conditions are degenerate".into(),
        ));
    }
    let exp_b = -pin_rhs / pin_lhs;
    let b_const = exp_b.ln();

    // p + p(.+c) = (g_c - g) + b on the e^{g-p} branch,
    // p + p(.+c) = (g - g_c) - b on the e^{g+p} branch.
    let g_diff = g.compose_shift(c).sub(g);
    let target = if towards_plus {
        g_diff.neg().sub(&Poly::constant(b_const))
    } else {
        g_diff.add(&Poly::constant(b_const))
    };
    let p = solve_shift_mean(&target, c);

    let exponent = if towards_plus { g.add(&p) } else { g.sub(&p) };
    let numerator = if towards_plus {
        b2c * d.omega2 - a2c
    } else {
        a2c - b2c * d.omega1
    };
    let candidate = ExpPoly::exponential(&exponent)
        .map_err(SolverError::Algebra)?
        .scale(numerator / (d.a3 * gap));

    let mut conditions: Vec<Condition> = set
        .iter()
        .map(|(name, v)| Condition::new(format!("branch scalar {name}"), *v))
        .collect();
    conditions.push(Condition::new(pin_label, pin_lhs * exp_b + pin_rhs));

    Ok(SolutionFamily {
        tag,
        params: FreeParams {
            p_linear: p.coeff(1),
            p_const: p.coeff(0),
            ..FreeParams::default()
        },
        candidate,
        conditions,
        warnings: Vec::new(),
    })
}

/// Solve `p(z) + p(z + c) = h(z)` for the polynomial `p` (`deg p = deg h`);
/// the map is upper triangular with diagonal 2, hence uniquely solvable.
fn solve_shift_mean(h: &Poly, c: Scalar) -> Poly {
    let m = match h.degree() {
        Some(m) => m,
        None => return Poly::zero(),
    };
    let mut coeffs = vec![Scalar::new(0.0, 0.0); m + 1];
    for j in (0..=m).rev() {
        let mut acc = h.coeff(j);
        #[allow(clippy::needless_range_loop)] // k is the power, not just an index
        for k in (j + 1)..=m {
            acc -= re(binomial(k, j)) * c.powu((k - j) as u32) * coeffs[k];
        }
        coeffs[j] = acc / re(2.0);
    }
    Poly::new(coeffs)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Which exponential the q-difference case-2 candidate keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum T2Case2Branch {
    /// `e^{(alpha + A) z}`, coupled by `alpha - A = q (alpha + A)`.
    PlusA,
    /// `e^{(alpha - A) z}`, coupled by `q (alpha - A) = alpha + A`.
    MinusA,
}

/// Case 2 of the q-difference theorem (`A2 != 0`, `A3 = 0`, linear `g`):
/// a single exponential plus `C1 z + C2`. The branch whose vanishing row
/// scalar is smaller is selected; its q-coupling constraint and vanishing
/// scalar are recorded as conditions.
pub fn construct_t2_case2(
    spec: &ProblemSpec,
    params: &FreeParams,
) -> Result<SolutionFamily, SolverError> {
    let tag = classified_tag(spec, params.p_linear, CaseId::C2, "T2/C2")?;
    if tag.theorem != Theorem::T2 {
        return Err(SolverError::WrongCase {
            expected: "T2/C2",
            found: tag.to_string(),
        });
    }
    let d = derived_for(spec, params);
    let gap = d.root_gap();
    let (alpha, beta) = linear_exponent_parts(spec);
    let q = spec.param();
    let a_lin = params.p_linear;
    let [_, _, a2c] = spec.a();
    let [_, _, b2c] = spec.b();

    let vanish_plus = a2c - b2c * d.omega1; // must vanish on the PlusA branch
    let vanish_minus = b2c * d.omega2 - a2c; // must vanish on the MinusA branch
    let branch = if vanish_plus.norm() <= vanish_minus.norm() {
        T2Case2Branch::PlusA
    } else {
        T2Case2Branch::MinusA
    };

    let (k, numerator, exp_arg, vanish, vanish_name, coupling, coupling_name) = match branch {
        T2Case2Branch::PlusA => (
            alpha + a_lin,
            b2c * d.omega2 - a2c,
            beta + params.p_const,
            vanish_plus,
            "a2 - b2*omega1",
            (alpha - a_lin) - q * (alpha + a_lin),
            "(alpha - A) - q*(alpha + A)",
        ),
        T2Case2Branch::MinusA => (
            alpha - a_lin,
            a2c - b2c * d.omega1,
            beta - params.p_const,
            vanish_minus,
            "b2*omega2 - a2",
            q * (alpha - a_lin) - (alpha + a_lin),
            "q*(alpha - A) - (alpha + A)",
        ),
    };
    if k.norm() < resonance_route_threshold(k.norm().max(alpha.norm())) {
        return Err(SolverError::InvalidParameter(
            "alpha = ±A degenerates the candidate denominator in the q-difference case 2".into(),
        ));
    }

    let rhs = ExpPoly::from_raw_terms(vec![(
        Poly::constant(numerator * exp_scalar(exp_arg)? / gap),
        Poly::linear(Scalar::new(0.0, 0.0), k),
    )])
    .map_err(SolverError::Algebra)?;
    let candidate = solve_linear_ode(Scalar::new(0.0, 0.0), d.a2, &rhs, &params.extra)?;

    let mut conditions = vec![
        Condition::new(format!("vanishing row scalar {vanish_name}"), vanish),
        Condition::new(format!("q-coupling {coupling_name}"), coupling),
    ];
    let check = candidate.diff2().scale(d.a2).sub(&rhs)?;
    push_conditions(&mut conditions, "elimination identity A2*f''", &check);

    let mut warnings = Vec::new();
    if let Some(w) = resonance_warning(k, Scalar::new(0.0, 0.0), d.a2, "forcing frequency") {
        warnings.push(w);
    }

    Ok(SolutionFamily {
        tag,
        params: params.clone(),
        candidate,
        conditions,
        warnings,
    })
}

/// Case 3 of the q-difference theorem: structurally the same construction as
/// the shift-mode case 3 (the elimination right-hand side is identical); the
/// full residual decides whether the q-mode consistency holds.
pub fn construct_t2_case3(
    spec: &ProblemSpec,
    params: &FreeParams,
) -> Result<SolutionFamily, SolverError> {
    let tag = classified_tag(spec, params.p_linear, CaseId::C3, "T2/C3")?;
    if tag.theorem != Theorem::T2 {
        return Err(SolverError::WrongCase {
            expected: "T2/C3",
            found: tag.to_string(),
        });
    }
    let d = derived_for(spec, params);
    construct_from_elimination(spec, params, tag, d.a3)
}

/// Classify and dispatch to the matching constructor.
pub fn construct(spec: &ProblemSpec, params: &FreeParams) -> Result<SolutionFamily, SolverError> {
    match spec.classify_with(params.p_linear, DEFAULT_N_MAX)? {
        Classification::Outside(reason) => Err(SolverError::OutsideFamilies(reason)),
        Classification::Family(tag) => match (tag.theorem, tag.case_id) {
            (_, CaseId::C1) => construct_case1(spec, params),
            (Theorem::T1, CaseId::C2) => construct_t1_case2(spec, params),
            (Theorem::T2, CaseId::C2) => construct_t2_case2(spec, params),
            (Theorem::T1, CaseId::C3) => construct_t1_case3(spec, params),
            (Theorem::T2, CaseId::C3) => construct_t2_case3(spec, params),
            (Theorem::T1, CaseId::C4) => construct_t1_case4(spec),
            (Theorem::T2, CaseId::C4) => unreachable!("C4 never classifies in q-scale mode"),
        },
    }
}
