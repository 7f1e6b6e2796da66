//! The equation layer: the two linear operators built from a coefficient
//! matrix, the derived minors and quadratic-form roots, hypothesis checks,
//! case classification, decomposition targets, elimination right-hand sides,
//! and the residual certificate.
//!
//! The equation under study is
//!
//! ```text
//! (L1(f))^2 + 2*omega*L1(f)*L2(f) + (L2(f))^2 = e^{2g}
//! ```
//!
//! with `L1(f) = a0 f + a1 f'' + a2 f(z+c)` (shift mode) or
//! `a2 f(qz)` (q-scale mode), and `L2` likewise from the `b` row.

use std::fmt;

use thiserror::Error;

use crate::expalg::{ExpError, ExpPoly};
use crate::poly::Poly;
use crate::scalar::{re, scalar_eq, scalar_is_finite, scalar_is_zero, tolerance, Scalar};

/// Default upper bound for the `q^n != ±1` scan.
pub const DEFAULT_N_MAX: u32 = 64;

/// Which argument transform the third operator column applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMode {
    /// `f(z + c)`
    Shift,
    /// `f(q z)`
    QScale,
}

/// Errors from the equation layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FermatError {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("hypothesis violation: {}", format_violations(.0))]
    HypothesisViolated(Vec<HypothesisViolation>),
    #[error(transparent)]
    Algebra(#[from] ExpError),
}

fn format_violations(v: &[HypothesisViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A failed standing hypothesis, reported by [`ProblemSpec::check_hypotheses`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisViolation {
    OmegaZero,
    OmegaOne,
    OmegaMinusOne,
    RankDeficient(u8),
    /// `q^n = ±1` for some `1 <= n <= n_max`; `negative` marks the `-1` case.
    QRootOfUnity {
        n: u32,
        negative: bool,
    },
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisViolation::OmegaZero => write!(f, "omega = 0"),
            HypothesisViolation::OmegaOne => write!(f, "omega = 1"),
            HypothesisViolation::OmegaMinusOne => write!(f, "omega = -1"),
            HypothesisViolation::RankDeficient(r) => write!(f, "rank(A) = {r} (need 2)"),
            HypothesisViolation::QRootOfUnity { n, negative } => {
                write!(f, "q^{n} = {}", if *negative { "-1" } else { "1" })
            }
        }
    }
}

/// The problem instance: coefficient rows, quadratic-form parameter, operator
/// mode with its shift/scale parameter, and the exponent polynomial `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    a: [Scalar; 3],
    b: [Scalar; 3],
    omega: Scalar,
    mode: OperatorMode,
    param: Scalar,
    g: Poly,
}

/// The three 2x2 minors of the coefficient matrix, the two roots factoring
/// the quadratic form, and the tolerance rank of the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// `a0*b1 - a1*b0`
    pub a1: Scalar,
    /// `a1*b2 - a2*b1`
    pub a2: Scalar,
    /// `a0*b2 - a2*b0`
    pub a3: Scalar,
    /// `-omega + sqrt(omega^2 - 1)` (principal square root).
    pub omega1: Scalar,
    /// `-omega - sqrt(omega^2 - 1)`.
    pub omega2: Scalar,
    pub rank: u8,
}

impl DerivedQuantities {
    /// `omega2 - omega1`, the denominator of the decomposition.
    pub fn root_gap(&self) -> Scalar {
        self.omega2 - self.omega1
    }

    /// Same quantities with the two roots exchanged (the other square-root
    /// branch). Constructors are covariant under this swap paired with
    /// negating the auxiliary exponent.
    pub fn swap_roots(&self) -> DerivedQuantities {
        DerivedQuantities {
            omega1: self.omega2,
            omega2: self.omega1,
            ..*self
        }
    }
}

/// Theorem family: differential-difference (shift) or q-difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    T1,
    T2,
}

/// Case within a theorem, driven by the minors and `deg g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    /// `A2 = 0` (linear `g`).
    C1,
    /// `A2 != 0`, `A3 = 0` (linear `g`).
    C2,
    /// `A2 != 0`, `A3 != 0` (linear `g`).
    C3,
    /// `deg g > 1`, `A1 = A2 = 0` (shift mode only).
    C4,
}

/// Which forcing frequencies coincide with roots of `A2 s^2 + A3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    None,
    K1,
    K2,
    Double,
}

/// Classification outcome for a problem that matches a solution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseTag {
    pub theorem: Theorem,
    pub case_id: CaseId,
    pub resonance: Resonance,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.theorem {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
        };
        let c = match self.case_id {
            CaseId::C1 => "C1",
            CaseId::C2 => "C2",
            CaseId::C3 => "C3",
            CaseId::C4 => "C4",
        };
        write!(f, "{t}/{c}")
    }
}

/// Why a valid problem falls outside the classified solution families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutsideReason {
    /// q-scale mode with `deg g > 1`: no entire solution family exists, the
    /// exponent must be linear.
    NonlinearExponentQScale,
    /// Shift mode with `deg g > 1` but `A1`, `A2` not both zero: outside the
    /// classified families (the tool does not claim non-existence).
    NonlinearExponentUnmatchedMinors,
}

impl fmt::Display for OutsideReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutsideReason::NonlinearExponentQScale => write!(
                f,
                "no entire solution family exists: q-difference problems require a linear exponent g = alpha*z + beta"
            ),
            OutsideReason::NonlinearExponentUnmatchedMinors => write!(
                f,
                "outside classified families: deg g > 1 requires the minors A1 and A2 to vanish"
            ),
        }
    }
}

/// Result of classification: a family tag, or a documented reason why the
/// problem lies outside every family.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Family(CaseTag),
    Outside(OutsideReason),
}

/// Left-minus-right of the full equation in canonical form. Empty value
/// certifies a solution by substitution.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub value: ExpPoly,
    /// Largest coefficient magnitude over all residual terms; 0 when empty.
    pub max_coeff_norm: f64,
}

impl Residual {
    pub fn is_empty(&self) -> bool {
        self.value.is_zero()
    }
}

/// Selects one of the three elimination identities relating the operators to
/// the decomposition exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationId {
    /// `-A1 f'' - A3 f_shift` from the `(b0, a0)` combination.
    E23,
    /// `A1 f - A2 f_shift` from the `(b1, a1)` combination.
    E24,
    /// `A3 f + A2 f''` from the `(b2, a2)` combination.
    E25,
}

impl ProblemSpec {
    /// Validate and build a problem. Rejects non-finite data, a constant
    /// exponent `g`, and a zero shift/scale parameter. Soft hypotheses
    /// (omega not in {0, ±1}, rank 2, `q^n != ±1`) are left to
    /// [`check_hypotheses`](Self::check_hypotheses) so that counterexample
    /// instances can still be built and verified.
    pub fn new(
        a: [Scalar; 3],
        b: [Scalar; 3],
        omega: Scalar,
        mode: OperatorMode,
        param: Scalar,
        g: Poly,
    ) -> Result<Self, FermatError> {
        for &x in a.iter().chain(b.iter()).chain([&omega, &param]) {
            if !scalar_is_finite(x) {
                return Err(FermatError::InvalidSpec(
                    "coefficients must be finite".into(),
                ));
            }
        }
        if g.is_constant() {
            return Err(FermatError::InvalidSpec(
                "exponent g must be a non-constant polynomial".into(),
            ));
        }
        if scalar_is_zero(param) {
            let name = match mode {
                OperatorMode::Shift => "shift c",
                OperatorMode::QScale => "scale q",
            };
            return Err(FermatError::InvalidSpec(format!("{name} must be non-zero")));
        }
        Ok(ProblemSpec {
            a,
            b,
            omega,
            mode,
            param,
            g,
        })
    }

    pub fn a(&self) -> [Scalar; 3] {
        self.a
    }

    pub fn b(&self) -> [Scalar; 3] {
        self.b
    }

    pub fn omega(&self) -> Scalar {
        self.omega
    }

    pub fn mode(&self) -> OperatorMode {
        self.mode
    }

    /// The shift `c` or scale `q`, depending on mode.
    pub fn param(&self) -> Scalar {
        self.param
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    /// The minors, quadratic-form roots and tolerance rank.
    pub fn derived(&self) -> DerivedQuantities {
        let [a0, a1c, a2c] = self.a;
        let [b0, b1c, b2c] = self.b;
        let a1 = a0 * b1c - a1c * b0;
        let a2 = a1c * b2c - a2c * b1c;
        let a3 = a0 * b2c - a2c * b0;
        let s = crate::scalar::principal_sqrt(self.omega * self.omega - re(1.0));
        let omega1 = -self.omega + s;
        let omega2 = -self.omega - s;

        let tol = tolerance();
        let row_norm = |r: &[Scalar; 3]| r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let scale_sq = row_norm(&self.a).max(row_norm(&self.b)).powi(2);
        let minor_max = a1.norm().max(a2.norm()).max(a3.norm());
        let rank = if minor_max > tol.abs.max(tol.rel * scale_sq.max(1.0)) {
            2
        } else if self
            .a
            .iter()
            .chain(self.b.iter())
            .any(|&x| !scalar_is_zero(x))
        {
            1
        } else {
            0
        };

        DerivedQuantities {
            a1,
            a2,
            a3,
            omega1,
            omega2,
            rank,
        }
    }

    /// Check the standing hypotheses: `omega` not in `{0, 1, -1}`, rank 2,
    /// and in q-scale mode `q^n != ±1` for `1 <= n <= n_max`. Returns every
    /// violation found (empty means all hypotheses hold).
    pub fn check_hypotheses(&self, n_max: u32) -> Vec<HypothesisViolation> {
        let mut violations = Vec::new();
        if scalar_is_zero(self.omega) {
            violations.push(HypothesisViolation::OmegaZero);
        }
        if scalar_eq(self.omega, re(1.0)) {
            violations.push(HypothesisViolation::OmegaOne);
        }
        if scalar_eq(self.omega, re(-1.0)) {
            violations.push(HypothesisViolation::OmegaMinusOne);
        }
        let derived = self.derived();
        if derived.rank != 2 {
            violations.push(HypothesisViolation::RankDeficient(derived.rank));
        }
        if self.mode == OperatorMode::QScale {
            let mut power = Scalar::new(1.0, 0.0);
            for n in 1..=n_max {
                power *= self.param;
                if !scalar_is_finite(power) {
                    break;
                }
                if scalar_eq(power, re(1.0)) {
                    violations.push(HypothesisViolation::QRootOfUnity { n, negative: false });
                    break;
                }
                if scalar_eq(power, re(-1.0)) {
                    violations.push(HypothesisViolation::QRootOfUnity { n, negative: true });
                    break;
                }
            }
        }
        violations
    }

    fn transform(&self, f: &ExpPoly) -> Result<ExpPoly, ExpError> {
        match self.mode {
            OperatorMode::Shift => f.shift(self.param),
            OperatorMode::QScale => f.qscale(self.param),
        }
    }

    /// First operator: `a0 f + a1 f'' + a2 f(z+c)` (or `f(qz)`).
    pub fn op1(&self, f: &ExpPoly) -> Result<ExpPoly, FermatError> {
        self.apply_row(self.a, f)
    }

    /// Second operator, from the `b` row.
    pub fn op2(&self, f: &ExpPoly) -> Result<ExpPoly, FermatError> {
        self.apply_row(self.b, f)
    }

    fn apply_row(&self, row: [Scalar; 3], f: &ExpPoly) -> Result<ExpPoly, FermatError> {
        let direct = f.scale(row[0]);
        let second = f.diff2().scale(row[1]);
        let moved = self.transform(f)?.scale(row[2]);
        Ok(direct.add(&second)?.add(&moved)?)
    }

    /// The equation right-hand side `e^{2g}`.
    pub fn rhs(&self) -> Result<ExpPoly, FermatError> {
        Ok(ExpPoly::exponential(&self.g.scale(re(2.0)))?)
    }

    /// Substitute `f` into the full equation and return left minus right.
    pub fn residual(&self, f: &ExpPoly) -> Result<Residual, FermatError> {
        let u = self.op1(f)?;
        let v = self.op2(f)?;
        let lhs = quadratic_form(&u, &v, self.omega)?;
        let value = lhs.sub(&self.rhs()?)?;
        let max_coeff_norm = value.max_coeff_norm();
        Ok(Residual {
            value,
            max_coeff_norm,
        })
    }

    /// Classify with auxiliary linear coefficient `A = 0` (resonance flags
    /// are evaluated at the default parameter choice).
    pub fn classify(&self) -> Result<Classification, FermatError> {
        self.classify_with(Scalar::new(0.0, 0.0), DEFAULT_N_MAX)
    }

    /// Classify the problem; `p_linear` is the auxiliary exponent's linear
    /// coefficient used only to evaluate resonance sub-flags.
    pub fn classify_with(
        &self,
        p_linear: Scalar,
        n_max: u32,
    ) -> Result<Classification, FermatError> {
        let violations = self.check_hypotheses(n_max);
        if !violations.is_empty() {
            return Err(FermatError::HypothesisViolated(violations));
        }
        let derived = self.derived();
        let theorem = match self.mode {
            OperatorMode::Shift => Theorem::T1,
            OperatorMode::QScale => Theorem::T2,
        };
        let deg_g = self.g.degree().expect("g is non-constant");

        if deg_g > 1 {
            if self.mode == OperatorMode::QScale {
                return Ok(Classification::Outside(
                    OutsideReason::NonlinearExponentQScale,
                ));
            }
            if scalar_is_zero(derived.a1) && scalar_is_zero(derived.a2) {
                return Ok(Classification::Family(CaseTag {
                    theorem,
                    case_id: CaseId::C4,
                    resonance: Resonance::None,
                }));
            }
            return Ok(Classification::Outside(
                OutsideReason::NonlinearExponentUnmatchedMinors,
            ));
        }

        let case_id = if scalar_is_zero(derived.a2) {
            CaseId::C1
        } else if scalar_is_zero(derived.a3) {
            CaseId::C2
        } else {
            CaseId::C3
        };
        let resonance = if case_id == CaseId::C1 {
            Resonance::None
        } else {
            let alpha = self.g.coeff(1);
            let mu = crate::scalar::principal_sqrt(-derived.a3 / derived.a2);
            let k1 = alpha + p_linear;
            let k2 = alpha - p_linear;
            match (is_resonant(k1, mu), is_resonant(k2, mu)) {
                (true, true) => Resonance::Double,
                (true, false) => Resonance::K1,
                (false, true) => Resonance::K2,
                (false, false) => Resonance::None,
            }
        };
        Ok(Classification::Family(CaseTag {
            theorem,
            case_id,
            resonance,
        }))
    }
}

/// Distance threshold that routes a forcing frequency onto a degenerate
/// (resonant) branch: 1000x the relative tolerance at the local scale.
pub(crate) fn resonance_route_threshold(scale: f64) -> f64 {
    1e3 * tolerance().rel * scale.max(1.0)
}

/// Distance below which a non-degenerate construction is flagged as
/// ill-conditioned: 10^6 times the relative tolerance at the local scale.
pub(crate) fn resonance_warn_threshold(scale: f64) -> f64 {
    1e6 * tolerance().rel * scale.max(1.0)
}

/// True when `k` coincides (under the routing threshold) with `mu` or `-mu`.
pub fn is_resonant(k: Scalar, mu: Scalar) -> bool {
    let scale = k.norm().max(mu.norm());
    let dist = (k - mu).norm().min((k + mu).norm());
    dist < resonance_route_threshold(scale)
}

/// `u^2 + 2*omega*u*v + v^2` in canonical form.
pub fn quadratic_form(u: &ExpPoly, v: &ExpPoly, omega: Scalar) -> Result<ExpPoly, ExpError> {
    let uu = u.mul(u)?;
    let uv = u.mul(v)?.scale(omega * re(2.0));
    let vv = v.mul(v)?;
    uu.add(&uv)?.add(&vv)
}

/// The pair of operator targets induced by the auxiliary exponent `p`:
///
/// ```text
/// t1 = (omega2 e^{g+p} - omega1 e^{g-p}) / (omega2 - omega1)
/// t2 = (e^{g+p} - e^{g-p}) / (omega2 - omega1)
/// ```
///
/// Their quadratic form is identically `e^{2g}`.
pub fn decompose_targets(
    spec: &ProblemSpec,
    p: &Poly,
) -> Result<(ExpPoly, ExpPoly), FermatError> {
    decompose_targets_with(spec, &spec.derived(), p)
}

/// Same as [`decompose_targets`], with the quadratic-form roots supplied by
/// the caller (used to exercise the other square-root branch).
pub(crate) fn decompose_targets_with(
    spec: &ProblemSpec,
    derived: &DerivedQuantities,
    p: &Poly,
) -> Result<(ExpPoly, ExpPoly), FermatError> {
    let gap = derived.root_gap();
    if scalar_is_zero(gap) {
        return Err(FermatError::InvalidSpec(
            "omega = ±1 makes the quadratic-form roots coincide".into(),
        ));
    }
    let e_plus = ExpPoly::exponential(&spec.g().add(p))?;
    let e_minus = ExpPoly::exponential(&spec.g().sub(p))?;
    let t1 = e_plus
        .scale(derived.omega2 / gap)
        .add(&e_minus.scale(-derived.omega1 / gap))?;
    let t2 = e_plus
        .scale(gap.inv())
        .add(&e_minus.scale(-gap.inv()))?;
    Ok((t1, t2))
}

/// Right-hand side of the selected elimination identity:
/// `[(b_i omega2 - a_i) e^{g+p} + (a_i - b_i omega1) e^{g-p}] / (omega2 - omega1)`
/// with `i = 0, 1, 2` for [`EliminationId::E23`], [`E24`](EliminationId::E24)
/// and [`E25`](EliminationId::E25) respectively.
pub fn elimination_rhs(
    spec: &ProblemSpec,
    p: &Poly,
    which: EliminationId,
) -> Result<ExpPoly, FermatError> {
    elimination_rhs_with(spec, &spec.derived(), p, which)
}

/// Same as [`elimination_rhs`], with caller-supplied roots.
pub(crate) fn elimination_rhs_with(
    spec: &ProblemSpec,
    derived: &DerivedQuantities,
    p: &Poly,
    which: EliminationId,
) -> Result<ExpPoly, FermatError> {
    let gap = derived.root_gap();
    if scalar_is_zero(gap) {
        return Err(FermatError::InvalidSpec(
            "omega = ±1 makes the quadratic-form roots coincide".into(),
        ));
    }
    let i = match which {
        EliminationId::E23 => 0,
        EliminationId::E24 => 1,
        EliminationId::E25 => 2,
    };
    let (ai, bi) = (spec.a()[i], spec.b()[i]);
    let e_plus = ExpPoly::exponential(&spec.g().add(p))?;
    let e_minus = ExpPoly::exponential(&spec.g().sub(p))?;
    Ok(e_plus
        .scale((bi * derived.omega2 - ai) / gap)
        .add(&e_minus.scale((ai - bi * derived.omega1) / gap))?)
}

/// Operator-side combination of the same elimination identity:
/// `b_i op1(f) - a_i op2(f)`, which algebraically equals, per identity,
/// `-A1 f'' - A3 f_moved`, `A1 f - A2 f_moved`, or `A3 f + A2 f''`.
pub fn elimination_lhs(
    spec: &ProblemSpec,
    f: &ExpPoly,
    which: EliminationId,
) -> Result<ExpPoly, FermatError> {
    let derived = spec.derived();
    let moved = match spec.mode() {
        OperatorMode::Shift => f.shift(spec.param())?,
        OperatorMode::QScale => f.qscale(spec.param())?,
    };
    let out = match which {
        EliminationId::E23 => f
            .diff2()
            .scale(-derived.a1)
            .add(&moved.scale(-derived.a3))?,
        EliminationId::E24 => f.scale(derived.a1).add(&moved.scale(-derived.a2))?,
        EliminationId::E25 => f.scale(derived.a3).add(&f.diff2().scale(derived.a2))?,
    };
    Ok(out)
}
