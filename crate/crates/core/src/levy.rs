//! One-sided Lévy stable densities and the subordination kernel linking
//! ordinary to fractional heat polynomials.
//!
//! The density g_α (Laplace transform e^{-p^α}, 0 < α < 1) is evaluated by
//! the convergent series
//!
//! ```text
//!   g_α(u) = Σ_{k>=1} (-1)^{k-1} sin(πkα) Γ(kα+1) / (π k!) · u^{-kα-1}
//! ```
//!
//! valid for every u > 0, with heavy cancellation as u → 0. The kernel
//!
//! ```text
//!   n_α(s,t) = (1/α) (t/s^{1+1/α}) g_α(t s^{-1/α})
//! ```
//!
//! is the same series reorganized as a power series in s,
//! n_α(s,t) = t^{-α} M_α(s t^{-α}) with M_α(z) = Σ_j (-z)^j/(j! Γ(1-α(1+j)))
//! (the two forms agree term by term; unit tests check it numerically).
//! The M form is what the quadrature paths use: it is entire in s and its
//! cancellation guard trips exactly where the kernel has decayed to ~1e-13
//! of its peak, so guarded nodes can be treated as zero by integrators.

use crate::dd::{exp_dd, ln_dd, Dd, SeriesSum};
use crate::error::{Error, Result};
use crate::gamma::{ln_gamma_dd, recip_gamma_dd, sinpi_dd};
use crate::heat::heat_poly;
use crate::quad::{integrate, Interval, QuadResult, QuadratureSpec};
use crate::series::EvalResult;

/// Relative accuracy of one double-double series term.
pub(crate) const DD_TERM_EPS: f64 = 1e-30;
/// Refuse results carrying fewer than ~4 significant digits.
pub(crate) const REFUSE_REL: f64 = 1e-4;
/// Terms this small relative to the running maximum cannot affect the sum.
pub(crate) const TERM_CUTOFF: f64 = 1e-33;
/// Consecutive negligible terms required before truncation (coefficients may
/// have isolated exact zeros from reciprocal-gamma poles).
pub(crate) const CONSEC_STOP: usize = 4;

fn check_alpha_open(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError {
            message: format!("stability index must lie strictly in (0,1), got {alpha}"),
        });
    }
    Ok(())
}

/// Coefficient-table length that comfortably covers the evaluable band for
/// the given α; beyond the band the cancellation guard refuses anyway.
fn table_len(alpha: f64, max_terms: usize) -> usize {
    let suggested = (640.0 / (1.0 - alpha)).ceil() as usize;
    suggested.clamp(256, max_terms.max(256))
}

/// One-sided stable density parameters plus the precomputed series
/// coefficients sin(πkα) Γ(kα+1)/(π k!).
#[derive(Clone, Debug)]
pub struct LevyDensity {
    alpha: f64,
    series_tol: f64,
    max_terms: usize,
    coeffs: Vec<Dd>,
}

impl LevyDensity {
    pub fn new(alpha: f64, series_tol: f64, max_terms: usize) -> Result<Self> {
        check_alpha_open(alpha)?;
        if !(series_tol > 0.0 && series_tol < 1.0) {
            return Err(Error::DomainError {
                message: format!("series tolerance must lie in (0,1), got {series_tol}"),
            });
        }
        if max_terms == 0 || max_terms > 100_000 {
            return Err(Error::DomainError {
                message: format!("max_terms must be 1..=100000, got {max_terms}"),
            });
        }
        let len = table_len(alpha, max_terms.min(100_000)).min(max_terms.max(256));
        let a = Dd::from_f64(alpha);
        let mut coeffs = Vec::with_capacity(len);
        // ln k! carried incrementally in double-double
        let mut ln_fact = Dd::ZERO;
        for k in 1..=len {
            ln_fact = ln_fact.add(ln_dd(Dd::from_f64(k as f64)));
            let ka = a.mul_f64(k as f64);
            let c = sinpi_dd(ka)
                .mul(exp_dd(ln_gamma_dd(ka.add_f64(1.0)).sub(ln_fact)))
                .div(crate::dd::PI);
            coeffs.push(if k % 2 == 1 { c } else { c.neg() });
        }
        Ok(LevyDensity {
            alpha,
            series_tol,
            max_terms,
            coeffs,
        })
    }

    /// Defaults: tolerance 1e-12, 20000-term safety stop.
    pub fn with_defaults(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1e-12, 20_000)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn series_tol(&self) -> f64 {
        self.series_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// g_α(u) for u > 0.
    ///
    /// Small u trips `CancellationLoss` once the alternating series exceeds
    /// the double-double budget; at that point the true density is below
    /// ~1e-13 of its peak, which is what quadrature wrappers rely on when
    /// they map refusals to zero.
    pub fn pdf(&self, u: f64) -> Result<EvalResult> {
        if !(u > 0.0) {
            return Err(Error::NonPositiveArgument { mu: u });
        }
        // powers of u^{-α} iterated in double-double
        let step = exp_dd(ln_dd(Dd::from_f64(u)).mul_f64(-self.alpha));
        let u_inv = Dd::from_f64(u).recip();
        let mut p = u_inv; // u^{-kα-1} at k=0 times the step below
        let mut acc = SeriesSum::new();
        let mut consec = 0usize;
        let mut used = 0usize;
        for (k, &c) in self.coeffs.iter().enumerate() {
            p = p.mul(step);
            let term = c.mul(p);
            if !term.hi.is_finite() || term.hi.abs() > 1e290 {
                return Err(Error::CancellationLoss {
                    condition: f64::INFINITY,
                });
            }
            acc.push(term);
            used = k + 1;
            if used > 4 && term.to_f64().abs() < TERM_CUTOFF * acc.max_abs {
                consec += 1;
                if consec >= CONSEC_STOP {
                    break;
                }
            } else {
                consec = 0;
            }
        }
        if consec < CONSEC_STOP {
            if used >= self.max_terms {
                return Err(Error::MaxTermsExceeded {
                    max_terms: self.max_terms,
                });
            }
            // table ended first: only happens deep in the refused band
            return Err(Error::CancellationLoss {
                condition: acc.condition(),
            });
        }
        let value = acc.value();
        let err = DD_TERM_EPS * acc.sum_abs;
        if err > REFUSE_REL * value.abs() {
            return Err(Error::CancellationLoss {
                condition: acc.condition(),
            });
        }
        Ok(EvalResult {
            value,
            abs_error_estimate: err,
            cancellation_condition: acc.condition(),
        })
    }
}

/// The M-Wright series Σ_j (-z)^j / (j! Γ(1-α(1+j))) with precomputed
/// coefficients; `n_α(s,t) = t^{-α} M_α(s t^{-α})`.
#[derive(Clone, Debug)]
pub(crate) struct MKernel {
    pub alpha: f64,
    coeffs: Vec<Dd>,
}

impl MKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha_open(alpha)?;
        let len = table_len(alpha, 20_000);
        let a = Dd::from_f64(alpha);
        let mut coeffs = Vec::with_capacity(len);
        let mut inv_fact = Dd::ONE;
        for j in 0..len {
            if j > 0 {
                inv_fact = inv_fact.div_f64(j as f64);
            }
            let arg = Dd::ONE.sub(a.mul_f64(j as f64 + 1.0));
            coeffs.push(recip_gamma_dd(arg).mul(inv_fact));
        }
        Ok(MKernel { alpha, coeffs })
    }

    /// M_α(z) for z >= 0. Refuses in the deep-tail cancellation band.
    pub fn eval(&self, z: f64) -> Result<(f64, f64)> {
        if z < 0.0 {
            return Err(Error::DomainError {
                message: format!("M-Wright argument must be nonnegative, got {z}"),
            });
        }
        let mut p = Dd::ONE;
        let mut acc = SeriesSum::new();
        let mut consec = 0usize;
        let mut used = 0usize;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = c.mul(p);
            if !term.hi.is_finite() || term.hi.abs() > 1e290 {
                return Err(Error::CancellationLoss {
                    condition: f64::INFINITY,
                });
            }
            acc.push(term);
            p = p.mul_f64(-z);
            used = j + 1;
            if used > 4 && term.to_f64().abs() < TERM_CUTOFF * acc.max_abs {
                consec += 1;
                if consec >= CONSEC_STOP {
                    break;
                }
            } else {
                consec = 0;
            }
        }
        if consec < CONSEC_STOP {
            return Err(Error::CancellationLoss {
                condition: acc.condition(),
            });
        }
        let value = acc.value();
        let err = DD_TERM_EPS * acc.sum_abs;
        if err > REFUSE_REL * value.abs() {
            return Err(Error::CancellationLoss {
                condition: acc.condition(),
            });
        }
        Ok((value, err))
    }

    /// Quadrature-facing evaluation: refusals become 0 (the kernel there is
    /// below ~1e-13 of its peak), other failures become NaN so the
    /// integrator reports them.
    pub fn eval_or_zero(&self, z: f64) -> f64 {
        match self.eval(z) {
            Ok((v, _)) => v,
            Err(Error::CancellationLoss { .. }) => 0.0,
            Err(_) => f64::NAN,
        }
    }
}

/// The subordination kernel n_α(·, t) for fixed stability index and time.
#[derive(Clone, Debug)]
pub struct SubordinationKernel {
    alpha: f64,
    t: f64,
    kernel: MKernel,
    /// t^{-α}
    t_scale: f64,
}

impl SubordinationKernel {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        check_alpha_open(alpha)?;
        if !(t > 0.0) {
            return Err(Error::NonPositiveArgument { mu: t });
        }
        Ok(SubordinationKernel {
            alpha,
            t,
            kernel: MKernel::new(alpha)?,
            t_scale: t.powf(-alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// n_α(s, t) = (1/α) t s^{-1-1/α} g_α(t s^{-1/α}) for s > 0, evaluated
    /// through the equivalent entire series in s.
    pub fn density(&self, s: f64) -> Result<EvalResult> {
        if !(s > 0.0) {
            return Err(Error::NonPositiveArgument { mu: s });
        }
        let (m, err) = self.kernel.eval(s * self.t_scale)?;
        Ok(EvalResult {
            value: self.t_scale * m,
            abs_error_estimate: self.t_scale * err,
            cancellation_condition: 1.0_f64.max(err / DD_TERM_EPS / m.abs().max(1e-300)),
        })
    }

    fn density_or_zero(&self, s: f64) -> f64 {
        self.t_scale * self.kernel.eval_or_zero(s * self.t_scale)
    }
}

/// Quadrature of n_α(s,t)·H_n(x,s) over s ∈ (0,∞), where H_n is the
/// classical (α=1) heat polynomial. The result must match the fractional
/// heat polynomial at (x, t^α).
pub fn subordinate_heat_poly(alpha: f64, n: u32, x: f64, t: f64) -> Result<QuadResult> {
    if n > 20 {
        return Err(Error::DegreeTooLarge { n });
    }
    let kernel = SubordinationKernel::new(alpha, t)?;
    let h = heat_poly(n, 1.0)?;
    let spec = QuadratureSpec::new(Interval::SemiInfinite(0.0))
        .with_tols(1e-11, 1e-280)
        .with_max_level(11);
    integrate(
        |s| kernel.density_or_zero(s) * h.eval(x, s).value,
        &spec,
    )
}

/// F(x) = ∫_0^∞ n_α(s, y^{1/α}) G(x, s) ds: subordination of a function
/// given through its classical heat-side representation G.
pub fn subordinate_function<G: Fn(f64, f64) -> f64>(
    g: G,
    alpha: f64,
    x: f64,
    y: f64,
) -> Result<QuadResult> {
    if !(y > 0.0) {
        return Err(Error::NonPositiveArgument { mu: y });
    }
    check_alpha_open(alpha)?;
    let t = y.powf(1.0 / alpha);
    let kernel = SubordinationKernel::new(alpha, t)?;
    let spec = QuadratureSpec::new(Interval::SemiInfinite(0.0))
        .with_tols(1e-11, 1e-280)
        .with_max_level(11);
    integrate(|s| kernel.density_or_zero(s) * g(x, s), &spec)
}

/// ∫_0^∞ g_α(u) du, used by the normalization checks. Nodes in the refused
/// small-u band (density below ~1e-13 of peak) contribute zero.
pub fn levy_normalization(d: &LevyDensity) -> Result<QuadResult> {
    let spec = QuadratureSpec::new(Interval::SemiInfinite(0.0))
        .with_tols(1e-9, 1e-280)
        .with_max_level(11);
    integrate(
        |u| match d.pdf(u) {
            Ok(r) => r.value,
            Err(Error::CancellationLoss { .. }) => 0.0,
            Err(_) => f64::NAN,
        },
        &spec,
    )
}

/// ∫_0^∞ n_α(s,t) ds, the kernel-side normalization.
pub fn kernel_normalization(k: &SubordinationKernel) -> Result<QuadResult> {
    let spec = QuadratureSpec::new(Interval::SemiInfinite(0.0))
        .with_tols(1e-9, 1e-280)
        .with_max_level(11);
    integrate(|s| k.density_or_zero(s), &spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn g_half_closed(u: f64) -> f64 {
        u.powf(-1.5) * (-1.0 / (4.0 * u)).exp() / (2.0 * std::f64::consts::PI.sqrt())
    }

    #[test]
    fn alpha_half_closed_form() {
        let d = LevyDensity::with_defaults(0.5).unwrap();
        assert_relative_eq!(
            d.pdf(1.0).unwrap().value,
            0.2196956447338612,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            d.pdf(4.0).unwrap().value,
            0.03312544154300357,
            max_relative = 1e-13
        );
        let mut u = 0.1;
        while u <= 10.0 {
            assert_relative_eq!(d.pdf(u).unwrap().value, g_half_closed(u), max_relative = 1e-10);
            u *= 1.37;
        }
    }

    #[test]
    fn density_oracles() {
        let d3 = LevyDensity::with_defaults(0.3).unwrap();
        assert_relative_eq!(d3.pdf(0.8).unwrap().value, 0.14844023976004062, max_relative = 1e-12);
        let d7 = LevyDensity::with_defaults(0.7).unwrap();
        assert_relative_eq!(d7.pdf(2.0).unwrap().value, 0.10768834487433714, max_relative = 1e-12);
    }

    #[test]
    fn positivity_where_evaluable() {
        for alpha in [0.3, 0.5, 0.7] {
            let d = LevyDensity::with_defaults(alpha).unwrap();
            let mut u = 0.05f64;
            while u <= 50.0 {
                match d.pdf(u) {
                    Ok(r) => assert!(
                        r.value >= 0.0,
                        "negative density α={alpha} u={u}: {}",
                        r.value
                    ),
                    Err(Error::CancellationLoss { .. }) => {
                        // only the far-left tail may refuse, and only for
                        // the larger α where cancellation sets in earlier
                        assert!(
                            u < 0.2 && alpha > 0.5,
                            "unexpected refusal at α={alpha} u={u}"
                        );
                    }
                    Err(e) => panic!("unexpected error: {e}"),
                }
                u *= 1.31;
            }
        }
    }

    #[test]
    fn pdf_rejects_bad_arguments() {
        let d = LevyDensity::with_defaults(0.5).unwrap();
        assert!(matches!(
            d.pdf(0.0),
            Err(Error::NonPositiveArgument { .. })
        ));
        assert!(LevyDensity::new(1.0, 1e-12, 100).is_err());
        assert!(LevyDensity::new(0.5, 2.0, 100).is_err());
    }

    #[test]
    fn m_kernel_oracles() {
        let cases = [
            (0.3, 2.5, 0.10502855072317223),
            (0.7, 1.2, 0.5442838705333689),
            (0.9, 1.5, 0.4557525105706382),
            (0.25, 5.0, 0.007289297072506667),
            (0.5, 0.8, 0.4807706494196539),
        ];
        for (alpha, z, want) in cases {
            let k = MKernel::new(alpha).unwrap();
            let (v, _) = k.eval(z).unwrap();
            assert_relative_eq!(v, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn kernel_forms_agree() {
        // (1/α) t s^{-1-1/α} g_α(t s^{-1/α}) versus t^{-α} M_α(s t^{-α})
        for (alpha, t) in [(0.3, 2.0), (0.5, 1.0), (0.7, 0.5)] {
            let d = LevyDensity::with_defaults(alpha).unwrap();
            let k = SubordinationKernel::new(alpha, t).unwrap();
            for s in [0.4, 1.0, 2.3] {
                let via_g = (1.0 / alpha)
                    * t
                    * s.powf(-1.0 - 1.0 / alpha)
                    * d.pdf(t * s.powf(-1.0 / alpha)).unwrap().value;
                let via_m = k.density(s).unwrap().value;
                assert_relative_eq!(via_g, via_m, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn kernel_alpha_half_is_gaussian() {
        // n_{1/2}(s,t) = e^{-s²/(4t)} / √(πt)
        let k = SubordinationKernel::new(0.5, 1.0).unwrap();
        assert_relative_eq!(
            k.density(1.0).unwrap().value,
            (-0.25f64).exp() / std::f64::consts::PI.sqrt(),
            max_relative = 1e-12
        );
        // stretched decay: tiny by s = 20√t
        assert!(k.density_or_zero(20.0) < 1e-12);
    }

    #[test]
    fn normalizations() {
        for alpha in [0.3, 0.5, 0.7] {
            let d = LevyDensity::with_defaults(alpha).unwrap();
            let r = levy_normalization(&d).unwrap();
            assert!(r.converged);
            assert_relative_eq!(r.value, 1.0, max_relative = 1e-7);
        }
        for t in [0.5, 1.0, 2.0] {
            let k = SubordinationKernel::new(0.5, t).unwrap();
            let r = kernel_normalization(&k).unwrap();
            assert_relative_eq!(r.value, 1.0, max_relative = 1e-7);
        }
    }

    #[test]
    fn subordination_reproduces_fractional_heat_poly() {
        // worked case: n=2, α=1/2, x=1, t=1 → 1 + 4/√π
        let r = subordinate_heat_poly(0.5, 2, 1.0, 1.0).unwrap();
        assert!(r.converged);
        assert_relative_eq!(
            r.value,
            1.0 + 4.0 / std::f64::consts::PI.sqrt(),
            max_relative = 1e-8
        );
        // n=0: kernel normalization; n=1: odd moment absent
        assert_relative_eq!(
            subordinate_heat_poly(0.5, 0, 3.0, 2.0).unwrap().value,
            1.0,
            max_relative = 1e-8
        );
        assert_relative_eq!(
            subordinate_heat_poly(0.5, 1, -1.7, 0.5).unwrap().value,
            -1.7,
            max_relative = 1e-8
        );
    }

    #[test]
    fn subordinate_function_matches_poly_route() {
        let h3 = heat_poly(3, 1.0).unwrap();
        let direct = subordinate_heat_poly(0.5, 3, 1.5, 1.0).unwrap();
        let via_g = subordinate_function(|x, s| h3.eval(x, s).value, 0.5, 1.5, 1.0).unwrap();
        assert_relative_eq!(direct.value, via_g.value, max_relative = 1e-9);
        // G ≡ 1 integrates to 1
        assert_relative_eq!(
            subordinate_function(|_, _| 1.0, 0.7, 0.0, 1.3)
                .unwrap()
                .value,
            1.0,
            max_relative = 1e-7
        );
    }
}
