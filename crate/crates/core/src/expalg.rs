//! Exponential polynomials: canonical finite sums of `P(z) * exp(Q(z))` with
//! polynomial `P`, `Q`.
//!
//! Canonical form
//! --------------
//! * every frequency `Q` has zero constant term — the constant part of an
//!   exponent is folded into the coefficient as the scalar `exp(Q(0))`, so
//!   `e^{z + ln 2}` and `2 e^z` are the same value;
//! * frequencies are pairwise distinct under the crate tolerance and sorted by
//!   a fixed total order (degree, then coefficients by increasing power, real
//!   part before imaginary part), so equal values have equal representations;
//! * a merged coefficient that becomes zero drops its term; the zero function
//!   is the empty sum.
//!
//! Two frequencies that are closer than ten times the merge tolerance but not
//! close enough to merge are rejected as ambiguous instead of being silently
//! combined; see [`ExpError::AmbiguousFrequencies`].
//!
//! All values are immutable and all operations are pure functions.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::poly::Poly;
use crate::scalar::{scalar_is_finite, tolerance, Scalar};

/// Errors from exponential-polynomial construction and evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExpError {
    /// Two frequencies fell into the gray zone between "equal" and
    /// "distinct" (within 10x the merge tolerance); merging would be a guess.
    #[error("ambiguous frequencies: distance {distance:e} is within 10x the merge tolerance")]
    AmbiguousFrequencies { distance: f64 },
    /// A parameter outside an operation's domain (for example `q = 0`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// `exp` overflowed or produced a non-finite value.
    #[error("evaluation overflow in complex exponential")]
    Overflow,
}

/// One canonical term `coeff(z) * exp(freq(z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    coeff: Poly,
    freq: Poly,
}

impl ExpTerm {
    pub fn coeff(&self) -> &Poly {
        &self.coeff
    }

    /// Frequency polynomial; constant term is always zero.
    pub fn freq(&self) -> &Poly {
        &self.freq
    }
}

/// Canonical exponential polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    terms: Vec<ExpTerm>,
}

/// Total order on frequency polynomials: degree first, then coefficients by
/// increasing power, real part before imaginary part. Exact on the floats;
/// tolerance handling happens in the merge pass, not here.
fn freq_cmp(a: &Poly, b: &Poly) -> Ordering {
    match a.coeffs().len().cmp(&b.coeffs().len()) {
        Ordering::Equal => {}
        other => return other,
    }
    for (ca, cb) in a.coeffs().iter().zip(b.coeffs().iter()) {
        match ca.re.total_cmp(&cb.re) {
            Ordering::Equal => {}
            other => return other,
        }
        match ca.im.total_cmp(&cb.im) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Sup distance between coefficient vectors, padded with zeros.
fn freq_distance(a: &Poly, b: &Poly) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n)
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max)
}

fn freq_scale(a: &Poly, b: &Poly) -> f64 {
    1.0_f64.max(a.max_coeff_norm()).max(b.max_coeff_norm())
}

impl ExpPoly {
    /// The zero function.
    pub fn zero() -> Self {
        ExpPoly { terms: Vec::new() }
    }

    /// A constant function.
    pub fn constant(value: Scalar) -> Self {
        ExpPoly::polynomial(&Poly::constant(value))
    }

    pub fn one() -> Self {
        ExpPoly::constant(Scalar::new(1.0, 0.0))
    }

    /// A polynomial promoted to an exponential polynomial (frequency zero).
    pub fn polynomial(p: &Poly) -> Self {
        if p.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: vec![ExpTerm {
                coeff: p.clone(),
                freq: Poly::zero(),
            }],
        }
    }

    /// `exp(q)` for a polynomial exponent `q`; the constant part of `q` folds
    /// into the coefficient.
    pub fn exponential(q: &Poly) -> Result<Self, ExpError> {
        ExpPoly::from_raw_terms(vec![(Poly::constant(Scalar::new(1.0, 0.0)), q.clone())])
    }

    /// Canonicalize a list of `(coefficient, exponent)` pairs. Exponents may
    /// carry constant parts; they are folded here. This is the single entry
    /// point that establishes every canonical-form invariant.
    pub fn from_raw_terms(raw: Vec<(Poly, Poly)>) -> Result<Self, ExpError> {
        let mut folded: Vec<ExpTerm> = Vec::with_capacity(raw.len());
        for (coeff, exponent) in raw {
            if coeff.is_zero() {
                continue;
            }
            let constant = exponent.constant_term();
            let freq = exponent.without_constant_term();
            let multiplier = constant.exp();
            if !scalar_is_finite(multiplier) {
                return Err(ExpError::Overflow);
            }
            let coeff = coeff.scale(multiplier);
            if coeff.is_zero() {
                continue;
            }
            folded.push(ExpTerm { coeff, freq });
        }
        Self::canonicalize(folded)
    }

    fn canonicalize(mut terms: Vec<ExpTerm>) -> Result<Self, ExpError> {
        let tol = tolerance();
        terms.sort_by(|a, b| freq_cmp(&a.freq, &b.freq));
        let mut merged: Vec<ExpTerm> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last) => {
                    let dist = freq_distance(&last.freq, &term.freq);
                    let thresh = tol.abs.max(tol.rel * freq_scale(&last.freq, &term.freq));
                    if dist <= thresh {
                        last.coeff = last.coeff.add(&term.coeff);
                    } else if dist <= 10.0 * thresh {
                        return Err(ExpError::AmbiguousFrequencies { distance: dist });
                    } else {
                        merged.push(term);
                    }
                }
                None => merged.push(term),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Ok(ExpPoly { terms: merged })
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the value is a plain polynomial (single zero-frequency term
    /// or zero).
    pub fn is_polynomial(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [t] => t.freq.is_zero(),
            _ => false,
        }
    }

    /// Extract the polynomial when [`is_polynomial`](Self::is_polynomial).
    pub fn as_polynomial(&self) -> Option<Poly> {
        match self.terms.as_slice() {
            [] => Some(Poly::zero()),
            [t] if t.freq.is_zero() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// Extract a constant value when the whole function is one scalar.
    pub fn as_constant(&self) -> Option<Scalar> {
        let p = self.as_polynomial()?;
        if p.is_constant() {
            Some(p.constant_term())
        } else {
            None
        }
    }

    /// Largest coefficient magnitude over all terms (0 for the zero function).
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.max_coeff_norm())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, rhs: &ExpPoly) -> Result<ExpPoly, ExpError> {
        let terms = self.terms.iter().chain(rhs.terms.iter()).cloned().collect();
        Self::canonicalize(terms)
    }

    pub fn sub(&self, rhs: &ExpPoly) -> Result<ExpPoly, ExpError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        self.scale(Scalar::new(-1.0, 0.0))
    }

    /// Multiply every coefficient by `k`; `k = 0` gives the zero function.
    pub fn scale(&self, k: Scalar) -> ExpPoly {
        let mut terms: Vec<ExpTerm> = self
            .terms
            .iter()
            .map(|t| ExpTerm {
                coeff: t.coeff.scale(k),
                freq: t.freq.clone(),
            })
            .collect();
        terms.retain(|t| !t.coeff.is_zero());
        ExpPoly { terms }
    }

    /// Distributed product: coefficients multiply, frequencies add.
    pub fn mul(&self, rhs: &ExpPoly) -> Result<ExpPoly, ExpError> {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(ExpTerm {
                    coeff: a.coeff.mul(&b.coeff),
                    freq: a.freq.add(&b.freq),
                });
            }
        }
        Self::canonicalize(terms)
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Result<ExpPoly, ExpError> {
        let mut acc = ExpPoly::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Termwise derivative: `(P' + P Q') exp(Q)`. Frequencies are unchanged,
    /// so canonical order is preserved.
    pub fn diff(&self) -> ExpPoly {
        let mut terms: Vec<ExpTerm> = self
            .terms
            .iter()
            .map(|t| ExpTerm {
                coeff: t.coeff.derivative().add(&t.coeff.mul(&t.freq.derivative())),
                freq: t.freq.clone(),
            })
            .collect();
        terms.retain(|t| !t.coeff.is_zero());
        ExpPoly { terms }
    }

    /// Second derivative.
    pub fn diff2(&self) -> ExpPoly {
        self.diff().diff()
    }

    /// Argument shift `z -> z + c`: termwise `P(z+c) exp(Q(z+c))`, with the
    /// new constant part of the exponent folded back into the coefficient.
    pub fn shift(&self, c: Scalar) -> Result<ExpPoly, ExpError> {
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff.compose_shift(c), t.freq.compose_shift(c)))
            .collect();
        Self::from_raw_terms(raw)
    }

    /// Argument rescale `z -> q z` with `q != 0`. Frequencies keep a zero
    /// constant term, so only coefficient substitution happens.
    pub fn qscale(&self, q: Scalar) -> Result<ExpPoly, ExpError> {
        if crate::scalar::scalar_is_zero(q) {
            return Err(ExpError::InvalidParameter(
                "q must be non-zero for argument rescaling".into(),
            ));
        }
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff.compose_scale(q), t.freq.compose_scale(q)))
            .collect();
        Self::from_raw_terms(raw)
    }

    /// Numeric evaluation at `z0`.
    pub fn eval(&self, z0: Scalar) -> Result<Scalar, ExpError> {
        let mut acc = Scalar::new(0.0, 0.0);
        for t in &self.terms {
            let factor = t.freq.eval(z0).exp();
            if !scalar_is_finite(factor) {
                return Err(ExpError::Overflow);
            }
            acc += t.coeff.eval(z0) * factor;
        }
        if !scalar_is_finite(acc) {
            return Err(ExpError::Overflow);
        }
        Ok(acc)
    }

    /// Equality in the sense of "`self - rhs` is zero under the tolerance":
    /// matched frequencies must carry tolerance-equal coefficients, and a
    /// term present on one side only must be negligible relative to the
    /// overall coefficient scale of the two operands. The relative scale
    /// matters for identities whose intermediates are large — cancellation
    /// can leave rounding terms far above the absolute tolerance but far
    /// below anything significant.
    pub fn approx_eq(&self, rhs: &ExpPoly) -> bool {
        let tol = tolerance();
        let scale = 1.0_f64
            .max(self.max_coeff_norm())
            .max(rhs.max_coeff_norm());
        let negligible = |p: &Poly| {
            p.coeffs()
                .iter()
                .all(|c| c.norm() <= tol.abs.max(tol.rel * scale))
        };
        let freq_eq = |a: &Poly, b: &Poly| {
            freq_distance(a, b) <= tol.abs.max(tol.rel * freq_scale(a, b))
        };

        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < rhs.terms.len() {
            let a = &self.terms[i];
            let b = &rhs.terms[j];
            if freq_eq(&a.freq, &b.freq) {
                if !a.coeff.approx_eq(&b.coeff) {
                    return false;
                }
                i += 1;
                j += 1;
            } else if freq_cmp(&a.freq, &b.freq) == Ordering::Less {
                if !negligible(&a.coeff) {
                    return false;
                }
                i += 1;
            } else {
                if !negligible(&b.coeff) {
                    return false;
                }
                j += 1;
            }
        }
        self.terms[i..].iter().all(|t| negligible(&t.coeff))
            && rhs.terms[j..].iter().all(|t| negligible(&t.coeff))
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::format_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, re, scalar_eq};

    fn exp_z() -> ExpPoly {
        ExpPoly::exponential(&Poly::z()).unwrap()
    }

    #[test]
    fn like_frequencies_merge() {
        let two_ez = exp_z().add(&exp_z()).unwrap();
        assert_eq!(two_ez.terms().len(), 1);
        assert!(two_ez.terms()[0].coeff().approx_eq(&Poly::constant(re(2.0))));
    }

    #[test]
    fn cancellation_yields_zero() {
        let diff = exp_z().sub(&exp_z()).unwrap();
        assert!(diff.is_zero());
    }

    #[test]
    fn mixed_sum_is_canonical_with_lower_frequency_first() {
        // z * e^z + e^{2z}: the e^z term sorts first.
        let z_ez = ExpPoly::from_raw_terms(vec![(Poly::z(), Poly::z())]).unwrap();
        let e2z = ExpPoly::exponential(&Poly::linear(re(0.0), re(2.0))).unwrap();
        let sum = z_ez.add(&e2z).unwrap();
        assert_eq!(sum.terms().len(), 2);
        assert!(sum.terms()[0].freq().approx_eq(&Poly::z()));
        // Evaluation oracle at a few points.
        for z0 in [re(0.0), re(1.0), c(0.0, 1.0)] {
            let got = sum.eval(z0).unwrap();
            let want = z0 * z0.exp() + (re(2.0) * z0).exp();
            assert!(scalar_eq(got, want), "at {z0}: {got} vs {want}");
        }
    }

    #[test]
    fn product_adds_exponents() {
        let e2z = exp_z().mul(&exp_z()).unwrap();
        assert_eq!(e2z.terms().len(), 1);
        assert!(e2z.terms()[0]
            .freq()
            .approx_eq(&Poly::linear(re(0.0), re(2.0))));
    }

    #[test]
    fn difference_of_squares() {
        // (e^z - e^{-z})(e^z + e^{-z}) = e^{2z} - e^{-2z}
        let em = ExpPoly::exponential(&Poly::linear(re(0.0), re(-1.0))).unwrap();
        let lhs = exp_z().sub(&em).unwrap().mul(&exp_z().add(&em).unwrap()).unwrap();
        let e2 = ExpPoly::exponential(&Poly::linear(re(0.0), re(2.0))).unwrap();
        let em2 = ExpPoly::exponential(&Poly::linear(re(0.0), re(-2.0))).unwrap();
        assert!(lhs.approx_eq(&e2.sub(&em2).unwrap()));
    }

    #[test]
    fn zero_annihilates_products() {
        let prod = exp_z().scale(re(2.0)).mul(&ExpPoly::zero()).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn derivative_applies_product_and_chain_rules() {
        // d/dz (z e^z) = (z + 1) e^z
        let z_ez = ExpPoly::from_raw_terms(vec![(Poly::z(), Poly::z())]).unwrap();
        let d = z_ez.diff();
        assert_eq!(d.terms().len(), 1);
        assert!(d.terms()[0].coeff().approx_eq(&Poly::linear(re(1.0), re(1.0))));

        // d/dz e^{z^2} = 2z e^{z^2}
        let zsq = Poly::new(vec![re(0.0), re(0.0), re(1.0)]);
        let d2 = ExpPoly::exponential(&zsq).unwrap().diff();
        assert!(d2.terms()[0].coeff().approx_eq(&Poly::linear(re(0.0), re(2.0))));

        // d^2/dz^2 e^{2z} = 4 e^{2z}, frozen from the two-application oracle
        let e2z = ExpPoly::exponential(&Poly::linear(re(0.0), re(2.0))).unwrap();
        assert!(e2z.diff2().approx_eq(&e2z.scale(re(4.0))));
    }

    #[test]
    fn shift_folds_exponent_constants() {
        // shift(e^{z^2}, c) = e^{c^2} e^{z^2 + 2cz}
        let zsq = Poly::new(vec![re(0.0), re(0.0), re(1.0)]);
        let shifted = ExpPoly::exponential(&zsq).unwrap().shift(re(1.5)).unwrap();
        assert_eq!(shifted.terms().len(), 1);
        let t = &shifted.terms()[0];
        assert!(t.freq().approx_eq(&Poly::new(vec![re(0.0), re(3.0), re(1.0)])));
        assert!(t.coeff().approx_eq(&Poly::constant(re((2.25_f64).exp()))));
    }

    #[test]
    fn shift_by_two_pi_i_fixes_exp_z() {
        let shifted = exp_z().shift(c(0.0, 2.0 * std::f64::consts::PI)).unwrap();
        assert!(shifted.approx_eq(&exp_z()));
    }

    #[test]
    fn shift_of_plain_polynomial() {
        let p = ExpPoly::polynomial(&Poly::z());
        let moved = p.shift(c(2.0, 1.0)).unwrap();
        assert!(moved
            .as_polynomial()
            .unwrap()
            .approx_eq(&Poly::linear(c(2.0, 1.0), re(1.0))));
    }

    #[test]
    fn qscale_rejects_zero_and_rescales_cubic_frequency() {
        assert!(matches!(
            exp_z().qscale(re(0.0)),
            Err(ExpError::InvalidParameter(_))
        ));

        // qscale(e^{z^3/2}, q) with q a primitive cube root of unity is a fixed point.
        let half_cubed = Poly::new(vec![re(0.0), re(0.0), re(0.0), re(0.5)]);
        let f = ExpPoly::exponential(&half_cubed).unwrap();
        let q = c(-0.5, 0.5 * 3.0_f64.sqrt());
        assert!(f.qscale(q).unwrap().approx_eq(&f));

        // qscale(z^2, 2) = 4 z^2
        let zsq = ExpPoly::polynomial(&Poly::new(vec![re(0.0), re(0.0), re(1.0)]));
        let scaled = zsq.qscale(re(2.0)).unwrap();
        assert!(scaled
            .as_polynomial()
            .unwrap()
            .approx_eq(&Poly::new(vec![re(0.0), re(0.0), re(4.0)])));

        // qscale(e^{2z}, q) = e^{2qz}, checked by evaluation
        let e2z = ExpPoly::exponential(&Poly::linear(re(0.0), re(2.0))).unwrap();
        let q = c(0.3, -1.1);
        let scaled = e2z.qscale(q).unwrap();
        for z0 in [re(0.4), c(-0.2, 0.7)] {
            assert!(scalar_eq(
                scaled.eval(z0).unwrap(),
                e2z.eval(q * z0).unwrap()
            ));
        }
    }

    #[test]
    fn scalar_multiples() {
        let three = exp_z().scale(re(3.0));
        assert!(three.terms()[0].coeff().approx_eq(&Poly::constant(re(3.0))));
        let zero = exp_z().scale(re(0.0));
        assert!(zero.is_zero());
        // 1/sqrt(6) ~ 0.40825
        let k = re(1.0 / 6.0_f64.sqrt());
        let scaled = exp_z().scale(k);
        assert!((scaled.terms()[0].coeff().constant_term().re - 0.408_248_290_463_863).abs() < 1e-12);
    }

    #[test]
    fn folded_exponent_constant_equals_scalar_multiple() {
        // e^{z + ln 2} == 2 e^z
        let q = Poly::linear(re(2.0_f64.ln()), re(1.0));
        let folded = ExpPoly::exponential(&q).unwrap();
        assert!(folded.approx_eq(&exp_z().scale(re(2.0))));
        // e^z != e^{-z}
        let em = ExpPoly::exponential(&Poly::linear(re(0.0), re(-1.0))).unwrap();
        assert!(!exp_z().approx_eq(&em));
    }

    #[test]
    fn eval_known_values() {
        assert!(scalar_eq(exp_z().eval(re(0.0)).unwrap(), re(1.0)));
        let z_ez = ExpPoly::from_raw_terms(vec![(Poly::z(), Poly::z())]).unwrap();
        assert!(scalar_eq(z_ez.eval(re(1.0)).unwrap(), re(std::f64::consts::E)));

        // -(sqrt(3)/6) e^{z^2 - cz} at z = 0 is -sqrt(3)/6 ~ -0.28868, c = 2
        let exponent = Poly::new(vec![re(0.0), re(-2.0), re(1.0)]);
        let f = ExpPoly::exponential(&exponent)
            .unwrap()
            .scale(re(-3.0_f64.sqrt() / 6.0));
        let at0 = f.eval(re(0.0)).unwrap();
        assert!((at0.re + 0.288_675_134_594_812_9).abs() < 1e-12 && at0.im.abs() < 1e-15);
    }

    #[test]
    fn eval_overflow_is_reported() {
        let f = ExpPoly::exponential(&Poly::linear(re(0.0), re(1.0))).unwrap();
        assert_eq!(f.eval(re(1e6)), Err(ExpError::Overflow));
    }

    #[test]
    fn near_collision_is_ambiguous() {
        let f1 = Poly::linear(re(0.0), re(1.0));
        let f2 = Poly::linear(re(0.0), re(1.0 + 5e-9));
        let err = ExpPoly::from_raw_terms(vec![
            (Poly::constant(re(1.0)), f1),
            (Poly::constant(re(1.0)), f2),
        ]);
        assert!(matches!(err, Err(ExpError::AmbiguousFrequencies { .. })));
    }

    #[test]
    fn equality_ignores_rounding_terms_below_the_operand_scale() {
        let big = ExpPoly::from_raw_terms(vec![(
            Poly::constant(re(3e6)),
            Poly::linear(re(0.0), re(1.0)),
        )])
        .unwrap();
        let junk = ExpPoly::from_raw_terms(vec![(
            Poly::constant(re(1.2e-9)),
            Poly::linear(re(0.0), re(-1.0)),
        )])
        .unwrap();
        let noisy = big.add(&junk).unwrap();
        assert_eq!(noisy.terms().len(), 2); // the junk survives canonicalization
        assert!(noisy.approx_eq(&big)); // but is negligible at the operand scale
        assert!(big.approx_eq(&noisy));

        // at unit scale the same term is significant
        let unit = ExpPoly::exponential(&Poly::z()).unwrap();
        let perturbed = unit.add(&junk).unwrap();
        assert!(!perturbed.approx_eq(&unit));
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ExpPoly>();
        assert_send_sync::<crate::poly::Poly>();
        assert_send_sync::<crate::equation::ProblemSpec>();
        assert_send_sync::<crate::solver::SolutionFamily>();

        let f = exp_z();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let f = f.clone();
                std::thread::spawn(move || f.mul(&f).unwrap().eval(re(0.5)).unwrap())
            })
            .collect();
        let values: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn normalization_is_idempotent() {
        let x = ExpPoly::from_raw_terms(vec![
            (Poly::z(), Poly::linear(re(0.3), re(2.0))),
            (Poly::constant(c(0.0, 1.0)), Poly::z()),
        ])
        .unwrap();
        let renorm =
            ExpPoly::from_raw_terms(x.terms().iter().map(|t| (t.coeff().clone(), t.freq().clone())).collect())
                .unwrap();
        assert_eq!(x, renorm);
    }
}
