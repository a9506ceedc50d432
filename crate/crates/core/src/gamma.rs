//! Gamma-function kernels: Γ, ln Γ and the entire reciprocal 1/Γ.
//!
//! The reciprocal is the workhorse: every series coefficient in this crate
//! is built from 1/Γ(µ), and the exact zeros of 1/Γ at nonpositive integers
//! implement the "term vanishes" semantics those series rely on.
//!
//! Internally everything is computed in double-double via Stirling's series
//! with argument raising and sin(πx) reflection, so the f64 results are
//! correct to ~1 ulp and the crate-private `*_dd` variants keep ~31 digits
//! for the cancellation-heavy series summations.

use crate::dd::{exp_dd, ln_dd, sinpi_dd, Dd, LN_SQRT_2PI, PI};
use crate::error::{Error, Result};

/// n! for n = 0..=20, all exactly representable in f64.
pub(crate) const FACTORIAL: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

/// B_2k / ((2k)(2k-1)) for k = 1..=13, the Stirling-series coefficients.
const STIRLING: [Dd; 13] = [
    Dd::new(0.08333333333333333, 4.625929269271485e-18),
    Dd::new(-0.002777777777777778, 1.0601087908747154e-19),
    Dd::new(0.0007936507936507937, 6.883823317368282e-22),
    Dd::new(-0.0005952380952380953, 5.36938218754726e-20),
    Dd::new(0.0008417508417508417, 3.6870174889237694e-20),
    Dd::new(-0.0019175269175269176, 1.0675702776872475e-19),
    Dd::new(0.00641025641025641, 2.2240044563805217e-19),
    Dd::new(-0.029550653594771242, 4.861760957508855e-19),
    Dd::new(0.17964437236883057, -6.401600482710946e-19),
    Dd::new(-1.3924322169059011, 1.5837056989230303e-17),
    Dd::new(13.402864044168393, -6.154114101993966e-16),
    Dd::new(-156.84828462600203, 9.391823141715389e-15),
    Dd::new(2193.1033333333335, -1.3339255626002948e-13),
];

/// Stirling series is used at or above this argument; smaller arguments are
/// raised by the recurrence ln Γ(x) = ln Γ(x+1) - ln x.
const STIRLING_MIN: f64 = 30.0;

/// ln Γ(x) for positive double-double x, accurate to ~1e-30 relative.
pub(crate) fn ln_gamma_dd(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0, "ln_gamma_dd needs a positive argument");
    let mut z = x;
    let mut shift = Dd::ZERO;
    while z.hi < STIRLING_MIN {
        shift = shift.add(ln_dd(z));
        z = z.add_f64(1.0);
    }
    let lz = ln_dd(z);
    let mut acc = z.sub_f64(0.5).mul(lz).sub(z).add(LN_SQRT_2PI);
    let w = z.recip();
    let w2 = w.sqr();
    let mut p = w;
    for c in STIRLING {
        acc = acc.add(c.mul(p));
        p = p.mul(w2);
    }
    acc.sub(shift)
}

/// True when the double-double value is exactly a nonpositive integer.
#[inline]
fn is_nonpositive_integer_dd(x: Dd) -> bool {
    x.hi <= 0.0 && x.lo == 0.0 && x.hi == x.hi.round()
}

/// 1/Γ(x) for double-double x; total on the reals, with exact zeros at
/// nonpositive integers. Overflows of 1/Γ near large-negative arguments
/// saturate to ±infinity.
pub(crate) fn recip_gamma_dd(x: Dd) -> Dd {
    if is_nonpositive_integer_dd(x) {
        return Dd::ZERO;
    }
    if x.hi >= 0.5 {
        exp_dd(ln_gamma_dd(x).neg())
    } else {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let s = sinpi_dd(x);
        if s.hi == 0.0 && s.lo == 0.0 {
            return Dd::ZERO;
        }
        let lg = ln_gamma_dd(Dd::ONE.sub(x));
        if lg.hi > 709.0 {
            // Γ(1-x) overflows f64: 1/Γ(x) is ±inf with the sign of sin(πx).
            return Dd::new(f64::INFINITY.copysign(s.hi), 0.0);
        }
        s.mul(exp_dd(lg)).div(PI)
    }
}

/// Γ(x) for double-double x away from poles.
pub(crate) fn gamma_dd(x: Dd) -> Dd {
    if x.hi >= 0.5 {
        exp_dd(ln_gamma_dd(x))
    } else {
        // Γ(x) = π / (sin(πx) Γ(1-x))
        PI.div(sinpi_dd(x).mul(exp_dd(ln_gamma_dd(Dd::ONE.sub(x)))))
    }
}

#[inline]
fn is_pole(mu: f64) -> bool {
    if mu > 0.0 {
        return false;
    }
    let r = mu.round();
    // "within 1 ulp" of a nonpositive integer
    mu == r || (mu - r).abs() <= f64::EPSILON * mu.abs()
}

/// Gamma function Γ(µ).
///
/// Relative error stays within ~2 ulp over [-170, 170] away from poles;
/// positive integer arguments up to 21 return the exact factorial.
pub fn gamma(mu: f64) -> Result<f64> {
    if !mu.is_finite() {
        return Err(Error::DomainError {
            message: format!("gamma of non-finite argument {mu}"),
        });
    }
    if is_pole(mu) {
        return Err(Error::PoleArgument { mu });
    }
    if mu > 0.0 && mu == mu.round() && mu <= 21.0 {
        return Ok(FACTORIAL[(mu as usize) - 1]);
    }
    Ok(gamma_dd(Dd::from_f64(mu)).to_f64())
}

/// The entire function 1/Γ(µ): zero exactly at µ = 0, -1, -2, ...
pub fn recip_gamma(mu: f64) -> f64 {
    if !mu.is_finite() {
        return if mu == f64::INFINITY { 0.0 } else { f64::NAN };
    }
    if mu <= 0.0 && mu == mu.round() {
        return 0.0;
    }
    if mu > 0.0 && mu == mu.round() && mu <= 21.0 {
        return 1.0 / FACTORIAL[(mu as usize) - 1];
    }
    recip_gamma_dd(Dd::from_f64(mu)).to_f64()
}

/// ln Γ(µ) for µ > 0.
pub fn ln_gamma(mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::NonPositiveArgument { mu });
    }
    if mu == mu.round() && mu <= 21.0 {
        return Ok(FACTORIAL[(mu as usize) - 1].ln());
    }
    Ok(ln_gamma_dd(Dd::from_f64(mu)).to_f64())
}

/// sin(πx) with exact zeros at integer x.
pub(crate) fn sinpi(x: f64) -> f64 {
    sinpi_dd(Dd::from_f64(x)).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Oracle values computed with 45-digit arithmetic.
    const LN_GAMMA_ORACLE: [(f64, f64, f64); 12] = [
        (0.07, 2.6227537606032154, -1.7298276854111078e-17),
        (0.5, 0.5723649429247001, 5.132975581353913e-18),
        (1.5, -0.12078223763524522, -4.1797047492946264e-18),
        (2.5, 0.2846828704729192, -2.0938630583071727e-17),
        (3.75, 1.486815578593417, 1.0227253469213974e-16),
        (7.3, 7.147892523022248, 3.798448773389085e-16),
        (12.0, 17.502307845873887, -7.099828843090002e-16),
        (26.0, 58.00360522298052, 2.0311680775630077e-15),
        (30.5, 72.9534711841694, 6.415290528095157e-15),
        (55.5, 166.32150615984037, 1.2412807574244776e-15),
        (123.4, 469.3360974421906, 7.772450604511947e-15),
        (170.25, 702.7206616776805, -1.7196064619388693e-14),
    ];

    const RECIP_GAMMA_ORACLE: [(f64, f64, f64); 11] = [
        (-0.5, -0.28209479177387814, -3.83386490329147e-18),
        (-5.5, 91.63673001529573, 2.5759399582527995e-15),
        (-20.25, -1.166992867485008e18, 67.03612008084949),
        (-33.9, 2.0383401709674054e37, 9.358705230525771e20),
        (0.5, 0.5641895835477563, 7.66772980658294e-18),
        (2.5, 0.7522527780636751, -2.6783794412061297e-17),
        (10.0, 2.7557319223985893e-06, -1.858393274046472e-22),
        (41.7, 9.130963742059654e-50, 3.0277765097069514e-66),
        (150.2, 9.642982401729659e-262, 2.281745506462583e-278),
        (-0.999999, -9.999995772431874e-07, -4.578504241448123e-23),
        (-170.4, -1.7168488613927093e307, -9.930667628567618e290),
    ];

    #[test]
    fn ln_gamma_dd_oracles() {
        for &(x, hi, lo) in &LN_GAMMA_ORACLE {
            let got = ln_gamma_dd(Dd::from_f64(x));
            let want = Dd::new(hi, lo);
            let rel = got.sub(want).to_f64().abs() / want.to_f64().abs().max(1e-30);
            assert!(rel <= 1e-28, "ln_gamma_dd({x}): rel err {rel:e}");
        }
    }

    #[test]
    fn recip_gamma_dd_oracles() {
        for &(x, hi, lo) in &RECIP_GAMMA_ORACLE {
            let got = recip_gamma_dd(Dd::from_f64(x));
            let want = Dd::new(hi, lo);
            let rel = got.sub(want).to_f64().abs() / want.to_f64().abs();
            assert!(rel <= 1e-27, "recip_gamma_dd({x}): rel err {rel:e}");
        }
    }

    #[test]
    fn gamma_classic_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_eq!(gamma(21.0).unwrap(), FACTORIAL[20]);
        assert_relative_eq!(
            gamma(0.5).unwrap(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(gamma(std::f64::consts::PI).unwrap(), 2.2880377953400326, max_relative = 1e-14);
        assert_relative_eq!(gamma(-4.8).unwrap(), -0.06242336135475955, max_relative = 1e-13);
        assert_relative_eq!(gamma(-0.5).unwrap(), -3.544907701811032, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.1).unwrap(), 9.513507698668732, max_relative = 1e-14);
        assert_relative_eq!(gamma(150.0).unwrap(), 3.80892263763057e260, max_relative = 1e-13);
        assert_relative_eq!(gamma(-150.5).unwrap(), -4.478447658150641e-264, max_relative = 1e-13);
    }

    #[test]
    fn gamma_rejects_poles() {
        for mu in [0.0, -1.0, -2.0, -37.0] {
            assert!(matches!(gamma(mu), Err(Error::PoleArgument { .. })));
        }
        // within one ulp of -3
        let near = -3.0_f64 + f64::EPSILON * 3.0 * 0.5;
        assert!(matches!(gamma(near), Err(Error::PoleArgument { .. })));
        assert!(gamma(-3.0001).is_ok());
    }

    #[test]
    fn recip_gamma_zeros_and_values() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert_eq!(recip_gamma(-170.0), 0.0);
        assert_relative_eq!(recip_gamma(2.5), 0.7522527780636751, max_relative = 1e-14);
        assert_eq!(recip_gamma(1.0), 1.0);
        assert_eq!(recip_gamma(4.0), 1.0 / 6.0);
    }

    #[test]
    fn recip_gamma_integer_consistency() {
        // recip_gamma(n+1) * n! = 1 to <= 1e-14 for 0 <= n <= 20
        for n in 0..=20usize {
            let v = recip_gamma(n as f64 + 1.0) * FACTORIAL[n];
            assert!((v - 1.0).abs() <= 1e-14, "n = {n}: {v}");
        }
    }

    #[test]
    fn recip_gamma_continuity_near_poles() {
        // 1/Γ has slope ±k! at -k, so |1/Γ(-k ± δ)| ≈ k! δ.
        for k in 0..=10usize {
            for sign in [-1.0, 1.0] {
                let x = -(k as f64) + sign * 1e-8;
                let v = recip_gamma(x).abs();
                let bound = 1.05 * FACTORIAL[k] * 1e-8;
                assert!(v <= bound, "k={k} sign={sign}: |1/Γ| = {v:e} > {bound:e}");
                assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn ln_gamma_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(10.0).unwrap(), 12.801827480081469, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(0.1).unwrap(), 2.252712651734206, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(170.25).unwrap(), 702.7206616776805, max_relative = 1e-14);
        assert!(matches!(
            ln_gamma(0.0),
            Err(Error::NonPositiveArgument { .. })
        ));
        assert!(matches!(
            ln_gamma(-1.5),
            Err(Error::NonPositiveArgument { .. })
        ));
    }

    #[test]
    fn reflection_identity() {
        // Γ(µ)Γ(1-µ) sin(πµ)/π = 1 on (0,1)
        for i in 1..100 {
            let mu = i as f64 / 100.0;
            let lhs = gamma(mu).unwrap() * gamma(1.0 - mu).unwrap() * sinpi(mu)
                / std::f64::consts::PI;
            assert!((lhs - 1.0).abs() <= 1e-12, "mu={mu}: {lhs}");
        }
    }

    #[test]
    fn recurrence_identity() {
        // Γ(µ+1) = µ Γ(µ) on [0.1, 50]
        let mut mu = 0.1;
        while mu <= 50.0 {
            let lhs = gamma(mu + 1.0).unwrap();
            let rhs = mu * gamma(mu).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() <= 1e-13,
                "mu={mu}: {lhs} vs {rhs}"
            );
            mu += 0.37;
        }
    }
}
