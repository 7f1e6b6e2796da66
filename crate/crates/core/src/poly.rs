//! Dense univariate polynomials over complex scalars.
//!
//! Coefficients are stored by increasing power of `z`. The canonical form
//! keeps the highest-index coefficient non-zero under the crate tolerance;
//! the zero polynomial is the empty list and has no degree.

use std::fmt;

use crate::scalar::{scalar_is_zero, Scalar};

/// A polynomial in `z`; `coeffs[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    /// Build from coefficients by increasing power, trimming trailing zeros.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(value: Scalar) -> Self {
        Poly::new(vec![value])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Poly::new(vec![Scalar::new(0.0, 0.0), Scalar::new(1.0, 0.0)])
    }

    /// `a0 + a1 * z`.
    pub fn linear(a0: Scalar, a1: Scalar) -> Self {
        Poly::new(vec![a0, a1])
    }

    fn trim(&mut self) {
        while let Some(&last) = self.coeffs.last() {
            if scalar_is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `z^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Scalar::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    /// Same polynomial with the constant term replaced by zero.
    pub fn without_constant_term(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if let Some(first) = coeffs.first_mut() {
            *first = Scalar::new(0.0, 0.0);
        }
        Poly::new(coeffs)
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation at `z0`.
    pub fn eval(&self, z0: Scalar) -> Scalar {
        let mut acc = Scalar::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z0 + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * Scalar::new(k as f64, 0.0))
            .collect();
        Poly::new(coeffs)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, k: Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Composition `p(z + c)`, by Horner over the factor `(z + c)`.
    pub fn compose_shift(&self, c: Scalar) -> Poly {
        let mut acc = Poly::zero();
        for &coef in self.coeffs.iter().rev() {
            // acc = acc * (z + c) + coef
            let shifted = acc.mul(&Poly::linear(c, Scalar::new(1.0, 0.0)));
            acc = shifted.add(&Poly::constant(coef));
        }
        acc
    }

    /// Composition `p(q * z)`: coefficient `k` picks up `q^k`.
    pub fn compose_scale(&self, q: Scalar) -> Poly {
        let mut factor = Scalar::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let scaled = c * factor;
                factor *= q;
                scaled
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Coefficient-wise tolerance equality.
    pub fn approx_eq(&self, rhs: &Poly) -> bool {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n).all(|k| crate::scalar::scalar_eq(self.coeff(k), rhs.coeff(k)))
    }

    /// True when every coefficient is tolerance-zero.
    pub fn approx_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| scalar_is_zero(c))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::format_poly(self))
    }
}
