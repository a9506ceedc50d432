//! Generalized power series: finite sums of c·x^µ with real exponents.
//!
//! This is the carrier for every polynomial-like object in the crate —
//! ordinary polynomials, truncated Mittag-Leffler/Wright expansions, and
//! the images of all of them under the term-wise Riemann-Liouville
//! fractional derivative D^α x^µ = Γ(µ+1)/Γ(µ+1-α) x^{µ-α}.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::{Dd, SeriesSum};
use crate::error::{Error, Result};
use crate::gamma::{gamma_dd, ln_gamma_dd, recip_gamma_dd};

/// One c·x^µ term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub exponent: f64,
}

/// Exponents are considered equal when they differ by at most this relative
/// tolerance; they arise from arithmetic on α and exact comparison would
/// fragment terms.
const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// Coefficients at or below this magnitude are true underflow and dropped.
/// Nothing is pruned by relative size: identity checks must see genuine
/// cancellations.
const COEFF_PRUNE: f64 = 1e-300;

#[inline]
fn exponents_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_MERGE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// A normalized finite series Σ c_i x^{µ_i} in a named variable.
///
/// Invariants after construction: exponents strictly increasing, no merged
/// duplicates, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GenPowerSeries {
    var: String,
    terms: Vec<Term>,
}

impl GenPowerSeries {
    /// Build a normalized series from raw (coefficient, exponent) pairs.
    pub fn new(var: impl Into<String>, terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut raw: Vec<Term> = terms
            .into_iter()
            .map(|(coeff, exponent)| Term { coeff, exponent })
            .collect();
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut terms: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if exponents_equal(last.exponent, t.exponent) => {
                    last.coeff += t.coeff;
                }
                _ => terms.push(t),
            }
        }
        terms.retain(|t| t.coeff.abs() > COEFF_PRUNE);
        GenPowerSeries { var: var.into(), terms }
    }

    pub fn zero(var: impl Into<String>) -> Self {
        GenPowerSeries { var: var.into(), terms: Vec::new() }
    }

    /// The constant c as a series (empty when c underflows).
    pub fn constant(var: impl Into<String>, c: f64) -> Self {
        Self::new(var, [(c, 0.0)])
    }

    /// The monomial c·x^µ.
    pub fn monomial(var: impl Into<String>, coeff: f64, exponent: f64) -> Self {
        Self::new(var, [(coeff, exponent)])
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of x^µ (0 when no matching term).
    pub fn coeff_of(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| exponents_equal(t.exponent, exponent))
            .map_or(0.0, |t| t.coeff)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    fn check_same_var(&self, other: &GenPowerSeries) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                left: self.var.clone(),
                right: other.var.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GenPowerSeries) -> Result<GenPowerSeries> {
        self.check_same_var(other)?;
        let all = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.coeff, t.exponent));
        Ok(GenPowerSeries::new(self.var.clone(), all))
    }

    pub fn sub(&self, other: &GenPowerSeries) -> Result<GenPowerSeries> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> GenPowerSeries {
        GenPowerSeries::new(
            self.var.clone(),
            self.terms.iter().map(|t| (t.coeff * c, t.exponent)),
        )
    }

    /// Product of two series; exponent collisions merge by coefficient
    /// addition.
    pub fn multiply(&self, other: &GenPowerSeries) -> Result<GenPowerSeries> {
        self.check_same_var(other)?;
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                prods.push((a.coeff * b.coeff, a.exponent + b.exponent));
            }
        }
        Ok(GenPowerSeries::new(self.var.clone(), prods))
    }

    /// Shift every exponent by delta (multiplication by x^delta).
    pub fn shift_exponents(&self, delta: f64) -> GenPowerSeries {
        GenPowerSeries::new(
            self.var.clone(),
            self.terms.iter().map(|t| (t.coeff, t.exponent + delta)),
        )
    }

    /// Term-wise d/dx: (c, µ) -> (c µ, µ-1); terms with µ = 0 vanish.
    pub fn diff(&self) -> GenPowerSeries {
        GenPowerSeries::new(
            self.var.clone(),
            self.terms
                .iter()
                .filter(|t| t.exponent != 0.0)
                .map(|t| (t.coeff * t.exponent, t.exponent - 1.0)),
        )
    }

    /// Term-wise Riemann-Liouville derivative of order α ∈ (0,1]:
    /// (c, µ) -> (c Γ(µ+1)/Γ(µ+1-α), µ-α). Terms where µ+1-α is a
    /// nonpositive integer vanish through the reciprocal gamma. At α = 1
    /// this reduces to the ordinary derivative.
    ///
    /// Every exponent must satisfy µ > -1.
    pub fn frac_diff_rl(&self, alpha: f64) -> Result<GenPowerSeries> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::DomainError {
                message: format!("fractional order must lie in (0,1], got {alpha}"),
            });
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exponent <= -1.0 {
                return Err(Error::ExponentOutOfRange {
                    exponent: t.exponent,
                });
            }
            let ratio = rl_gamma_ratio(t.exponent, alpha);
            out.push((t.coeff * ratio, t.exponent - alpha));
        }
        Ok(GenPowerSeries::new(self.var.clone(), out))
    }

    /// Compensated evaluation at x.
    ///
    /// x must be positive when any exponent is negative or non-integer.
    pub fn eval(&self, x: f64) -> Result<EvalResult> {
        let needs_positive = self
            .terms
            .iter()
            .any(|t| t.exponent < 0.0 || t.exponent != t.exponent.round());
        if needs_positive && x <= 0.0 && !self.terms.is_empty() {
            return Err(Error::DomainError {
                message: format!(
                    "cannot evaluate fractional/negative powers of the non-positive point {x}"
                ),
            });
        }
        let mut acc = SeriesSum::new();
        for t in &self.terms {
            let p = pow_term(x, t.exponent);
            acc.push(Dd::from_f64(t.coeff).mul_f64(p));
        }
        Ok(EvalResult {
            value: acc.value(),
            // powf contributes ~1-2 ulp per term; dd accumulation is far below
            abs_error_estimate: 4e-16 * acc.sum_abs,
            cancellation_condition: acc.condition(),
        })
    }
}

/// x^µ with exact handling of integer exponents.
fn pow_term(x: f64, mu: f64) -> f64 {
    if mu == 0.0 {
        1.0
    } else if mu == mu.round() && mu.abs() <= i32::MAX as f64 {
        x.powi(mu as i32)
    } else {
        x.powf(mu)
    }
}

/// Γ(µ+1)/Γ(µ+1-α) in double-double. Zero when µ+1-α hits a nonpositive
/// integer; ln-space when the plain gamma would overflow.
fn rl_gamma_ratio(mu: f64, alpha: f64) -> f64 {
    let num = Dd::from_f64(mu).add_f64(1.0);
    let den = num.sub_f64(alpha);
    if den.hi > 0.5 {
        if num.hi <= 160.0 {
            gamma_dd(num).mul(recip_gamma_dd(den)).to_f64()
        } else {
            crate::dd::exp_dd(ln_gamma_dd(num).sub(ln_gamma_dd(den))).to_f64()
        }
    } else {
        gamma_dd(num).mul(recip_gamma_dd(den)).to_f64()
    }
}

/// Result of a compensated series evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Bound on |value - exact sum of the represented terms|.
    pub abs_error_estimate: f64,
    /// Σ|terms| / max(|value|, tiny), always >= 1. Large values flag
    /// cancellation-dominated sums.
    pub cancellation_condition: f64,
}

impl Serialize for GenPowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            var: &'a str,
            terms: Vec<[f64; 2]>,
        }
        Wire {
            var: &self.var,
            terms: self.terms.iter().map(|t| [t.coeff, t.exponent]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GenPowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            var: String,
            terms: Vec<[f64; 2]>,
        }
        let w = Wire::deserialize(deserializer)?;
        for t in &w.terms {
            if !t[0].is_finite() || !t[1].is_finite() {
                return Err(D::Error::custom("non-finite coefficient or exponent"));
            }
        }
        Ok(GenPowerSeries::new(
            w.var,
            w.terms.into_iter().map(|[c, mu]| (c, mu)),
        ))
    }
}
