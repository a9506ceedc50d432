//! Double-double arithmetic: an unevaluated sum of two f64 giving ~31
//! significant digits.
//!
//! The long alternating series in this crate (Mittag-Leffler, Wright,
//! one-sided stable densities) lose digits to cancellation proportionally
//! to the ratio of the largest term to the sum. Carrying terms and partial
//! sums as double-doubles pushes the usable range of those series far past
//! what plain f64 accumulation allows.
//!
//! Algorithms follow the classic QD library (Hida, Li, Bailey): error-free
//! two_sum/two_prod primitives plus Taylor kernels for exp/ln/sin.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd::new(-self.hi, -self.lo)
    }

    #[inline]
    pub fn add(self, other: Dd) -> Self {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd::new(s1, s2)
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, other);
        let (s1, s2) = quick_two_sum(s1, s2 + self.lo);
        Dd::new(s1, s2)
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Self {
        self.add(other.neg())
    }

    #[inline]
    pub fn sub_f64(self, other: f64) -> Self {
        self.add_f64(-other)
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Self {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd::new(s1, s2)
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, other);
        let (s1, s2) = quick_two_sum(p1, p2 + self.lo * other);
        Dd::new(s1, s2)
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn mul_pwr2(self, k: f64) -> Self {
        Dd::new(self.hi * k, self.lo * k)
    }

    pub fn div(self, other: Dd) -> Self {
        let q1 = self.hi / other.hi;
        if !q1.is_finite() {
            return Dd::new(q1, 0.0);
        }
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd::new(s1, s2).add_f64(q3)
    }

    #[inline]
    pub fn div_f64(self, other: f64) -> Self {
        self.div(Dd::from_f64(other))
    }

    pub fn recip(self) -> Self {
        Dd::ONE.div(self)
    }

    pub fn sqr(self) -> Self {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * self.hi * self.lo;
        let (s1, s2) = quick_two_sum(p1, p2);
        Dd::new(s1, s2)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
}

pub const PI: Dd = Dd::new(3.141592653589793, 1.2246467991473532e-16);
pub const LN2: Dd = Dd::new(0.6931471805599453, 2.3190468138462996e-17);
pub const LN_SQRT_2PI: Dd = Dd::new(0.9189385332046728, -3.8782941580672414e-17);

/// 1/k! for k = 0..=31.
pub const INV_FACT: [Dd; 32] = [
    Dd::new(1.0, 0.0),
    Dd::new(1.0, 0.0),
    Dd::new(0.5, 0.0),
    Dd::new(0.16666666666666666, 9.25185853854297e-18),
    Dd::new(0.041666666666666664, 2.3129646346357427e-18),
    Dd::new(0.008333333333333333, 1.1564823173178714e-19),
    Dd::new(0.001388888888888889, -5.300543954373577e-20),
    Dd::new(0.0001984126984126984, 1.7209558293420705e-22),
    Dd::new(2.48015873015873e-05, 2.1511947866775882e-23),
    Dd::new(2.7557319223985893e-06, -1.858393274046472e-22),
    Dd::new(2.755731922398589e-07, 2.3767714622250297e-23),
    Dd::new(2.505210838544172e-08, -1.448814070935912e-24),
    Dd::new(2.08767569878681e-09, -1.20734505911326e-25),
    Dd::new(1.6059043836821613e-10, 1.2585294588752098e-26),
    Dd::new(1.1470745597729725e-11, 2.0655512752830745e-28),
    Dd::new(7.647163731819816e-13, 7.03872877733453e-30),
    Dd::new(4.779477332387385e-14, 4.399205485834081e-31),
    Dd::new(2.8114572543455206e-15, 1.6508842730861433e-31),
    Dd::new(1.5619206968586225e-16, 1.1910679660273754e-32),
    Dd::new(8.22063524662433e-18, 2.2141894119604265e-34),
    Dd::new(4.110317623312165e-19, 1.4412973378659527e-36),
    Dd::new(1.9572941063391263e-20, -1.3643503830087908e-36),
    Dd::new(8.896791392450574e-22, -7.911402614872376e-38),
    Dd::new(3.868170170630684e-23, -8.843177655482344e-40),
    Dd::new(1.6117375710961184e-24, -3.6846573564509766e-41),
    Dd::new(6.446950284384474e-26, -1.9330404233703465e-42),
    Dd::new(2.4795962632247976e-27, -1.2953730964765229e-43),
    Dd::new(9.183689863795546e-29, 1.4303150396787322e-45),
    Dd::new(3.279889237069838e-30, 1.5117542744029879e-46),
    Dd::new(1.1309962886447716e-31, 1.0498015412959506e-47),
    Dd::new(3.7699876288159054e-33, 2.5870347832750324e-49),
    Dd::new(1.216125041553518e-34, 5.586290567888806e-51),
];

/// e^a to double-double accuracy.
pub fn exp_dd(a: Dd) -> Dd {
    if a.hi <= -709.0 {
        return Dd::ZERO;
    }
    if a.hi >= 709.0 {
        return Dd::new(f64::INFINITY, 0.0);
    }
    if a.hi == 0.0 && a.lo == 0.0 {
        return Dd::ONE;
    }

    // e^a = 2^m * (e^r)^512 with r = (a - m ln2)/512 small.
    const K_INV: f64 = 1.0 / 512.0;
    let m = (a.hi / LN2.hi + 0.5).floor();
    let r = a.sub(LN2.mul_f64(m)).mul_pwr2(K_INV);

    // Taylor for e^r - 1.
    let mut p = r.sqr();
    let mut s = r.add(p.mul_pwr2(0.5));
    p = p.mul(r);
    let mut t = p.mul(INV_FACT[3]);
    let mut i = 4usize;
    loop {
        s = s.add(t);
        p = p.mul(r);
        t = p.mul(INV_FACT[i]);
        i += 1;
        if t.hi.abs() <= K_INV * 1e-35 || i >= INV_FACT.len() {
            break;
        }
    }
    s = s.add(t);

    // Undo the /512 scaling: (1+s)^512 - 1 by repeated squaring of e^r - 1.
    for _ in 0..9 {
        s = s.mul_pwr2(2.0).add(s.sqr());
    }
    let s = s.add_f64(1.0);
    // scale by 2^m
    let scale = f64::powi(2.0, m as i32);
    Dd::new(s.hi * scale, s.lo * scale)
}

/// ln a to double-double accuracy; a must be positive.
pub fn ln_dd(a: Dd) -> Dd {
    if a.hi == 1.0 && a.lo == 0.0 {
        return Dd::ZERO;
    }
    debug_assert!(a.hi > 0.0, "ln_dd of non-positive value");
    // Newton refinement of the f64 logarithm: x <- x + a e^{-x} - 1.
    let x = Dd::from_f64(a.hi.ln());
    let e = exp_dd(x.neg());
    x.add(a.mul(e)).sub_f64(1.0)
}

fn sin_taylor(w: Dd) -> Dd {
    // |w| <= pi/4
    if w.hi == 0.0 {
        return Dd::ZERO;
    }
    let x2 = w.sqr().neg();
    let mut p = w;
    let mut s = w;
    let mut k = 3usize;
    loop {
        p = p.mul(x2);
        let t = p.mul(INV_FACT[k]);
        s = s.add(t);
        k += 2;
        if t.hi.abs() < 1e-35 || k >= INV_FACT.len() {
            break;
        }
    }
    s
}

fn cos_taylor(w: Dd) -> Dd {
    if w.hi == 0.0 {
        return Dd::ONE;
    }
    let x2 = w.sqr().neg();
    let mut p = x2;
    let mut s = Dd::ONE.add(x2.mul_pwr2(0.5));
    let mut k = 4usize;
    loop {
        p = p.mul(x2);
        let t = p.mul(INV_FACT[k]);
        s = s.add(t);
        k += 2;
        if t.hi.abs() < 1e-35 || k >= INV_FACT.len() {
            break;
        }
    }
    s
}

/// sin(pi x) to double-double accuracy, exact zeros at integer x.
///
/// The reduction x mod 2 is exact for |x| < 2^51, far beyond any gamma
/// argument this crate produces.
pub fn sinpi_dd(x: Dd) -> Dd {
    // r = x mod 2 in [-1, 1]
    let k = (x.hi * 0.5).round();
    let r = x.sub_f64(2.0 * k);
    // quadrant q in {-2,-1,0,1,2}: u = r - q/2 in [-1/4, 1/4]
    let q = (2.0 * r.hi).round();
    let u = r.sub_f64(0.5 * q);
    if u.hi == 0.0 && u.lo == 0.0 && (q as i64) % 2 == 0 {
        return Dd::ZERO;
    }
    let w = PI.mul(u);
    match q as i64 {
        0 => sin_taylor(w),
        1 => cos_taylor(w),
        -1 => cos_taylor(w).neg(),
        2 | -2 => sin_taylor(w).neg(),
        _ => unreachable!("quadrant out of range"),
    }
}

/// Compensated accumulator used by every series in the crate: double-double
/// partial sum plus the f64 tallies needed for condition estimates.
#[derive(Clone, Copy, Debug)]
pub struct SeriesSum {
    sum: Dd,
    pub sum_abs: f64,
    pub max_abs: f64,
}

impl SeriesSum {
    pub fn new() -> Self {
        SeriesSum {
            sum: Dd::ZERO,
            sum_abs: 0.0,
            max_abs: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, term: Dd) {
        self.sum = self.sum.add(term);
        let a = term.to_f64().abs();
        self.sum_abs += a;
        if a > self.max_abs {
            self.max_abs = a;
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum.to_f64()
    }

    pub fn value_dd(&self) -> Dd {
        self.sum
    }

    /// sum|terms| / max(|sum|, tiny), clamped to >= 1.
    pub fn condition(&self) -> f64 {
        let v = self.value().abs().max(1e-300);
        (self.sum_abs / v).max(1.0)
    }
}

impl Default for SeriesSum {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_dd_close(got: Dd, hi: f64, lo: f64, tol: f64) {
        let diff = got.sub(Dd::new(hi, lo)).to_f64().abs();
        let scale = (hi.abs() + lo.abs()).max(1e-300);
        assert!(
            diff <= tol * scale,
            "dd mismatch: got ({:e}, {:e}) want ({:e}, {:e}), rel diff {:e}",
            got.hi,
            got.lo,
            hi,
            lo,
            diff / scale
        );
    }

    #[test]
    fn add_mul_roundtrip() {
        let a = Dd::from_f64(0.1).add(Dd::from_f64(0.2));
        // 0.1 + 0.2 as exact doubles: hi = 0.30000000000000004
        assert_eq!(a.hi, 0.30000000000000004);
        let b = Dd::from_f64(3.0).mul(Dd::from_f64(1.0 / 3.0));
        assert!((b.to_f64() - 1.0).abs() < 1e-16);
    }

    #[test]
    fn div_recovers_product() {
        let a = Dd::new(1.2345678901234567, 1.1e-17);
        let b = Dd::new(9.87654321e5, -3.2e-12);
        let q = a.mul(b).div(b);
        assert_dd_close(q, a.hi, a.lo, 1e-30);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[1e-8, 0.1, 0.5, 1.0, 2.5, 10.0, 100.0, 650.0, -3.0, -40.0] {
            let e = exp_dd(Dd::from_f64(x));
            if x.abs() < 700.0 {
                let back = ln_dd(e);
                assert!(
                    (back.to_f64() - x).abs() <= 1e-28 * x.abs().max(1.0),
                    "exp/ln roundtrip failed at {x}: got {}",
                    back.to_f64()
                );
            }
        }
        // e^1 against the known double-double expansion of e
        assert_dd_close(
            exp_dd(Dd::ONE),
            2.718281828459045,
            1.4456468917292502e-16,
            1e-31,
        );
    }

    #[test]
    fn exp_extremes() {
        assert_eq!(exp_dd(Dd::from_f64(-800.0)).to_f64(), 0.0);
        assert!(exp_dd(Dd::from_f64(800.0)).to_f64().is_infinite());
    }

    #[test]
    fn sinpi_values() {
        // exact zeros at integers
        for k in -5..=5 {
            assert_eq!(sinpi_dd(Dd::from_f64(k as f64)).to_f64(), 0.0);
        }
        // sin(pi/2) = 1, sin(pi/4) = sqrt(2)/2, sin(pi*3/2)=-1
        assert_dd_close(sinpi_dd(Dd::from_f64(0.5)), 1.0, 0.0, 1e-31);
        assert_dd_close(
            sinpi_dd(Dd::from_f64(0.25)),
            0.7071067811865476,
            -4.833646656726457e-17,
            1e-30,
        );
        assert_dd_close(sinpi_dd(Dd::from_f64(1.5)), -1.0, 0.0, 1e-31);
        // large argument reduction: sin(pi * 390.7) = sin(0.7 pi)
        let big = sinpi_dd(Dd::from_f64(390.7));
        let small = sinpi_dd(Dd::from_f64(0.7));
        assert!((big.to_f64() - small.to_f64()).abs() < 1e-13 * small.to_f64().abs());
    }

    #[test]
    fn series_sum_condition() {
        let mut s = SeriesSum::new();
        // 1 - 1 + 0.5 => value 0.5, sum_abs 2.5, condition 5
        s.push(Dd::ONE);
        s.push(Dd::ONE.neg());
        s.push(Dd::from_f64(0.5));
        assert_eq!(s.value(), 0.5);
        assert!((s.condition() - 5.0).abs() < 1e-12);
    }
}
