//! Fractional heat polynomials.
//!
//! The degree-n fractional heat polynomial of order α is
//!
//! ```text
//!   H_n(x, y) = n! Σ_{m=0}^{[n/2]} x^{n-2m} y^m / ((n-2m)! Γ(1+αm))
//! ```
//!
//! At α = 1 these are the classical heat polynomials. They form an Appell
//! sequence in x, their exponential generating function is E_α(ξ²y) e^{ξx},
//! and in the time variable t (with y = t^α) they satisfy the fractional
//! evolution equation checked by `appell_recurrence_y`.

use serde::Serialize;

use crate::dd::{Dd, SeriesSum};
use crate::error::{Error, Result};
use crate::gamma::{gamma_dd, recip_gamma_dd};
use crate::mlf::{mlf, MlfParams};
use crate::residual::TermResidual;
use crate::series::EvalResult;

/// Largest supported degree; n! stays below the f64 overflow threshold.
pub const MAX_DEGREE: u32 = 170;

/// A materialized fractional heat polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct HeatPoly {
    n: u32,
    alpha: f64,
    /// coeffs[m] multiplies x^{n-2m} y^m.
    coeffs: Vec<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::DomainError {
            message: format!("heat polynomial order must lie in (0,1], got {alpha}"),
        });
    }
    Ok(())
}

/// Build the coefficient table of H_n for order α.
pub fn heat_poly(n: u32, alpha: f64) -> Result<HeatPoly> {
    check_alpha(alpha)?;
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { n });
    }
    let mut coeffs = Vec::with_capacity(n as usize / 2 + 1);
    // falling factorial n!/(n-2m)! carried in double-double
    let mut ff = Dd::ONE;
    for m in 0..=(n / 2) {
        if m > 0 {
            let a = (n - 2 * m + 2) as f64;
            let b = (n - 2 * m + 1) as f64;
            ff = ff.mul_f64(a).mul_f64(b);
        }
        let arg = 1.0 + alpha * m as f64;
        coeffs.push(ff.mul(recip_gamma_dd(Dd::from_f64(arg))).to_f64());
    }
    Ok(HeatPoly { n, alpha, coeffs })
}

impl HeatPoly {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// coeffs()[m] is the coefficient of x^{n-2m} y^m.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Compensated evaluation at (x, y).
    pub fn eval(&self, x: f64, y: f64) -> EvalResult {
        let mut acc = SeriesSum::new();
        for (m, &c) in self.coeffs.iter().enumerate() {
            let xp = x.powi((self.n - 2 * m as u32) as i32);
            let yp = y.powi(m as i32);
            acc.push(Dd::from_f64(c).mul_f64(xp).mul_f64(yp));
        }
        EvalResult {
            value: acc.value(),
            abs_error_estimate: 4e-16 * acc.sum_abs,
            cancellation_condition: acc.condition(),
        }
    }

    /// Σ |c_m| |x|^{n-2m} |y|^m, the envelope used for tail bounds.
    pub fn eval_abs(&self, x: f64, y: f64) -> f64 {
        let (x, y) = (x.abs(), y.abs());
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| c.abs() * x.powi((self.n - 2 * m as u32) as i32) * y.powi(m as i32))
            .sum()
    }

    /// JSON dump of the table: {"n":…, "alpha":…, "coeffs":[[m, c_m], …]}.
    pub fn to_json(&self) -> String {
        let rows: Vec<(usize, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, &c)| (m, c))
            .collect();
        serde_json::json!({ "n": self.n, "alpha": self.alpha, "coeffs": rows }).to_string()
    }
}

/// Both sides of the generating-function identity
/// Σ_{n<=N} ξⁿ/n! H_n(x,y) = E_α(ξ²y) e^{ξx}, returned for assertion by the
/// caller. Errors with `TailNotNegligible` when the N-term truncation of the
/// left side cannot reach `tol`.
pub fn heat_gen_function_check(
    alpha: f64,
    xi: f64,
    x: f64,
    y: f64,
    n_terms: u32,
    tol: f64,
) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if n_terms == 0 || n_terms > MAX_DEGREE {
        return Err(Error::DomainError {
            message: format!("generating-function order must be 1..={MAX_DEGREE}"),
        });
    }
    let mut acc = SeriesSum::new();
    let mut xi_pow = Dd::ONE; // ξⁿ/n!
    let mut last_env = 0.0f64;
    let mut prev_env = 0.0f64;
    for n in 0..=n_terms {
        if n > 0 {
            xi_pow = xi_pow.mul_f64(xi).div_f64(n as f64);
        }
        let h = heat_poly(n, alpha)?;
        acc.push(xi_pow.mul_f64(h.eval(x, y).value));
        prev_env = last_env;
        last_env = xi_pow.to_f64().abs() * h.eval_abs(x, y);
    }
    // geometric tail estimate from the last two term envelopes
    let ratio = if prev_env > 0.0 { last_env / prev_env } else { 0.0 };
    let tail = if ratio < 0.9 {
        last_env * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let lhs = acc.value();
    if !(tail <= tol * lhs.abs().max(1.0)) {
        return Err(Error::TailNotNegligible { estimate: tail });
    }
    let p = MlfParams::new(alpha)?.with_series_tol(tol.min(1e-12));
    let rhs = mlf(&p, xi * xi * y)?.value * (xi * x).exp();
    Ok((lhs, rhs))
}

/// Residual of the Appell x-recurrence ∂_x H_n - n H_{n-1}; its coefficients
/// must vanish relative to the largest coefficient of H_n.
pub fn appell_recurrence_x(h: &HeatPoly) -> Result<TermResidual> {
    if h.n < 1 {
        return Err(Error::DomainError {
            message: "x-recurrence needs degree >= 1".into(),
        });
    }
    let lower = heat_poly(h.n - 1, h.alpha)?;
    let n = h.n;
    let mut raw = Vec::new();
    for (m, &c) in h.coeffs.iter().enumerate() {
        let p = n - 2 * m as u32; // x-power before differentiation
        if p >= 1 {
            raw.push(((p - 1) as f64, m as f64, c * p as f64));
        }
    }
    for (m, &c) in lower.coeffs.iter().enumerate() {
        raw.push((
            (n - 1 - 2 * m as u32) as f64,
            m as f64,
            -(n as f64) * c,
        ));
    }
    let scale = h.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    Ok(TermResidual::assemble(raw, scale))
}

/// Residual of the fractional evolution recurrence in the time variable
/// (y = t^α): ∂_t^α H_n(x, t^α) - n(n-1) H_{n-2}(x, t^α) - t^{-α}/Γ(1-α) xⁿ,
/// expanded over x-power/t-exponent monomials.
pub fn appell_recurrence_y(h: &HeatPoly) -> Result<TermResidual> {
    let alpha = h.alpha;
    if alpha >= 1.0 {
        return Err(Error::DomainError {
            message: "time recurrence needs fractional order in (0,1)".into(),
        });
    }
    let n = h.n;
    let mut raw = Vec::new();
    // ∂_t^α of c_m x^{n-2m} t^{αm}: coefficient picks up Γ(1+αm)/Γ(1+α(m-1))
    for (m, &c) in h.coeffs.iter().enumerate() {
        let num = 1.0 + alpha * m as f64;
        let den = 1.0 + alpha * (m as f64 - 1.0);
        let ratio = gamma_dd(Dd::from_f64(num))
            .mul(recip_gamma_dd(Dd::from_f64(den)))
            .to_f64();
        raw.push((
            (n - 2 * m as u32) as f64,
            alpha * (m as f64 - 1.0),
            c * ratio,
        ));
    }
    // - n(n-1) H_{n-2}
    if n >= 2 {
        let lower = heat_poly(n - 2, alpha)?;
        for (m, &c) in lower.coeffs.iter().enumerate() {
            raw.push((
                (n - 2 - 2 * m as u32) as f64,
                alpha * m as f64,
                -(n as f64) * (n as f64 - 1.0) * c,
            ));
        }
    }
    // - t^{-α}/Γ(1-α) xⁿ, the Riemann-Liouville image of the constant term
    raw.push((
        n as f64,
        -alpha,
        -recip_gamma_dd(Dd::from_f64(1.0 - alpha)).to_f64(),
    ));
    let scale = h.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    Ok(TermResidual::assemble(raw, scale))
}

/// Σ_{n<N} a_n H_n(x, y) by compensated summation.
pub fn expand_in_heat_basis(
    a: &[f64],
    alpha: f64,
    x: f64,
    y: f64,
    n_take: usize,
) -> Result<EvalResult> {
    check_alpha(alpha)?;
    if n_take > a.len() {
        return Err(Error::DomainError {
            message: format!(
                "requested {n_take} expansion terms but only {} coefficients given",
                a.len()
            ),
        });
    }
    let mut acc = SeriesSum::new();
    for (n, &an) in a.iter().take(n_take).enumerate() {
        if an == 0.0 {
            continue;
        }
        let h = heat_poly(n as u32, alpha)?;
        acc.push(Dd::from_f64(an).mul_f64(h.eval(x, y).value));
    }
    Ok(EvalResult {
        value: acc.value(),
        abs_error_estimate: 4e-16 * acc.sum_abs,
        cancellation_condition: acc.condition(),
    })
}
