//! Closed rational intervals with outward rounding.
//!
//! Every operation returns an interval that contains the exact result for
//! every choice of inputs in the operand intervals. Transcendental
//! functions carry explicit truncation bounds.

use std::cmp::Ordering;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub lo: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub hi: BigRational,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

fn dyadic(n: BigInt, k: u32) -> BigRational {
    BigRational::new(n, pow2(k))
}

/// Floor of `x * 2^k`.
fn floor_scaled(x: &BigRational, k: u32) -> BigInt {
    (x * BigRational::from_integer(pow2(k))).floor().to_integer()
}

fn ceil_scaled(x: &BigRational, k: u32) -> BigInt {
    (x * BigRational::from_integer(pow2(k))).ceil().to_integer()
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(n.into()))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// Width is at most `2^-bits`.
    pub fn narrower_than(&self, bits: u32) -> bool {
        self.width() <= dyadic(BigInt::one(), bits)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Outward rounding of both endpoints to multiples of `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Self {
        if self.lo.denom().bits() <= bits as u64 && self.hi.denom().bits() <= bits as u64 {
            return self.clone();
        }
        Interval {
            lo: dyadic(floor_scaled(&self.lo, bits), bits),
            hi: dyadic(ceil_scaled(&self.hi, bits), bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Interval { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `None` when the interval straddles zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Interval::point(BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max_abs(&self) -> BigRational {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    /// Upper end strictly below the lower end of `o`.
    pub fn strictly_below(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    pub fn cmp_strict(&self, o: &Self) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && o.is_point() && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn hull(&self, o: &Self) -> Self {
        Interval {
            lo: std::cmp::min(&self.lo, &o.lo).clone(),
            hi: std::cmp::max(&self.hi, &o.hi).clone(),
        }
    }

    /// `n`-th root of a non-negative interval, endpoints exact when possible.
    pub fn nth_root(&self, n: u32, bits: u32) -> Self {
        assert!(!self.lo.is_negative(), "root of negative interval");
        let lo = rational_root(&self.lo, n, bits).lo;
        let hi = rational_root(&self.hi, n, bits).hi;
        Interval { lo, hi }
    }

    pub fn ln(&self, bits: u32) -> Self {
        assert!(self.lo.is_positive(), "log of non-positive interval");
        let lo = ln_point(&self.lo, bits).lo;
        let hi = ln_point(&self.hi, bits).hi;
        Interval { lo, hi }
    }

    pub fn exp(&self, bits: u32) -> Self {
        let lo = exp_point(&self.lo, bits).lo;
        let hi = exp_point(&self.hi, bits).hi;
        Interval { lo, hi }
    }

    /// `self^e` for a positive base through `exp(e ln self)`.
    pub fn pow(&self, e: &Self, bits: u32) -> Self {
        let guard = bits + 24 + e.max_abs().ceil().to_integer().bits() as u32;
        let l = self.ln(guard);
        e.mul(&l).round_out(guard).exp(bits)
    }
}

/// Enclosure of `x^(1/n)` for rational `x >= 0`, exact for perfect powers.
pub fn rational_root(x: &BigRational, n: u32, bits: u32) -> Interval {
    assert!(!x.is_negative());
    if n == 1 || x.is_zero() || x.is_one() {
        return Interval::point(x.clone());
    }
    let num = x.numer();
    let den = x.denom();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if rn.pow(n) == *num && rd.pow(n) == *den {
        return Interval::point(BigRational::new(rn, rd));
    }
    // x^(1/n) = (num * den^(n-1))^(1/n) / den
    let k = bits + 2;
    let big = num * den.pow(n - 1) << (n as usize * k as usize);
    let r = big.nth_root(n);
    let scale = den * pow2(k);
    let lo = BigRational::new(r.clone(), scale.clone());
    let hi = BigRational::new(r + 1, scale);
    Interval { lo, hi }
}

/// `atanh(z)` for `0 <= z <= 1/3`, working precision `w` bits.
fn atanh_small(z: &BigRational, w: u32) -> Interval {
    let zi = Interval::point(z.clone()).round_out(w + 4);
    let z2 = zi.mul(&zi).round_out(w + 4);
    let mut term = zi.clone();
    let mut sum = Interval::point(BigRational::zero());
    let tiny = dyadic(BigInt::one(), w);
    let mut j: u64 = 0;
    loop {
        let div = BigRational::from_integer((2 * j + 1).into());
        sum = sum.add(&Interval::new(&term.lo / &div, &term.hi / &div).round_out(w + 4));
        term = term.mul(&z2).round_out(w + 4);
        j += 1;
        if term.hi <= tiny {
            break;
        }
    }
    // tail: sum_{i>=j} z^(2i+1)/(2i+1) <= term / ((2j+1)(1 - z^2)) <= term * 9/8
    let tail = &term.hi * BigRational::new(9.into(), 8.into());
    Interval { lo: sum.lo, hi: sum.hi + tail }
}

fn ln2_cache() -> &'static RwLock<Option<(u32, Interval)>> {
    static CACHE: OnceLock<RwLock<Option<(u32, Interval)>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(None))
}

/// Enclosure of `ln 2` of width below `2^-bits`.
pub fn ln2(bits: u32) -> Interval {
    if let Some((b, v)) = ln2_cache().read().unwrap().as_ref() {
        if *b >= bits {
            return v.clone();
        }
    }
    let w = bits + 8;
    let a = atanh_small(&BigRational::new(1.into(), 3.into()), w);
    let v = Interval { lo: a.lo * BigRational::from_integer(2.into()), hi: a.hi * BigRational::from_integer(2.into()) };
    *ln2_cache().write().unwrap() = Some((bits, v.clone()));
    v
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln_point(x: &BigRational, bits: u32) -> Interval {
    assert!(x.is_positive());
    if x.is_one() {
        return Interval::point(BigRational::zero());
    }
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = BigRational::from_integer(2.into());
    let mut y = if k >= 0 {
        x / BigRational::from_integer(pow2(k as u32))
    } else {
        x * BigRational::from_integer(pow2((-k) as u32))
    };
    while y < BigRational::one() {
        y *= &two;
        k -= 1;
    }
    while y >= two {
        y /= &two;
        k += 1;
    }
    let one = BigRational::one();
    let z = (&y - &one) / (&y + &one);
    let w = bits + 8;
    let a = atanh_small(&z, w);
    let mut r = Interval { lo: &a.lo * &two, hi: &a.hi * &two };
    if k != 0 {
        let kb = 64 - k.unsigned_abs().leading_zeros();
        let l2 = ln2(w + kb + 2);
        r = r.add(&l2.scale(&BigRational::from_integer(k.into())));
    }
    r.round_out(bits + 4)
}

/// Enclosure of `e^x` for rational `x`.
pub fn exp_point(x: &BigRational, bits: u32) -> Interval {
    if x.is_zero() {
        return Interval::point(BigRational::one());
    }
    let xf = x.to_f64().unwrap_or(0.0);
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let kb = 64 - k.unsigned_abs().leading_zeros();
    let w = bits + 16 + kb + if k > 0 { k as u32 } else { 0 };
    let l2 = ln2(w + kb + 2);
    let r = Interval::point(x.clone()).sub(&l2.scale(&BigRational::from_integer(k.into()))).round_out(w);
    let rmax = r.max_abs();
    let mut term = Interval::point(BigRational::one());
    let mut sum = term.clone();
    let tiny = dyadic(BigInt::one(), w - 4);
    let mut j: u64 = 1;
    loop {
        let jr = BigRational::from_integer(j.into());
        term = term.mul(&r).round_out(w);
        term = Interval::new(&term.lo / &jr, &term.hi / &jr).round_out(w);
        sum = sum.add(&term);
        j += 1;
        let jr_next = BigRational::from_integer(j.into());
        if term.max_abs() <= tiny && rmax < jr_next {
            break;
        }
    }
    // next term bound, geometric tail with ratio <= 1/2
    let jr = BigRational::from_integer(j.into());
    let tail = term.max_abs() * &rmax / jr * BigRational::from_integer(2.into()) + dyadic(BigInt::one(), w);
    let s = Interval { lo: sum.lo - &tail, hi: sum.hi + &tail };
    let s = if s.lo.is_negative() { Interval { lo: BigRational::zero(), hi: s.hi } } else { s };
    if k >= 0 {
        s.scale(&BigRational::from_integer(pow2(k as u32)))
    } else {
        s.scale(&BigRational::new(BigInt::one(), pow2((-k) as u32)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ln2_brackets() {
        let l = ln2(100);
        assert!(l.lo_f64() <= std::f64::consts::LN_2 + 1e-16);
        assert!(l.hi_f64() >= std::f64::consts::LN_2 - 1e-16);
        assert!(l.narrower_than(99));
    }

    #[test]
    fn ln_and_exp_agree_with_f64() {
        for &(n, d) in &[(3i64, 1i64), (1, 7), (1000, 3), (5, 4), (1, 1_000_000)] {
            let x = r(n, d);
            let l = ln_point(&x, 80);
            let f = (n as f64 / d as f64).ln();
            assert!(l.lo_f64() <= f + 1e-12 && l.hi_f64() >= f - 1e-12, "ln {n}/{d}");
            let e = exp_point(&x, 80);
            let g = (n as f64 / d as f64).exp();
            assert!(e.lo_f64() <= g * (1.0 + 1e-12) && e.hi_f64() >= g * (1.0 - 1e-12), "exp {n}/{d}");
        }
        let e = exp_point(&r(-50, 1), 120);
        assert!(e.lo_f64() > 0.0);
        assert!((e.mid_f64() / (-50f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots_exact_for_perfect_powers() {
        assert_eq!(rational_root(&r(9, 4), 2, 10), Interval::point(r(3, 2)));
        assert_eq!(rational_root(&r(64, 1), 3, 10), Interval::point(r(4, 1)));
        let s2 = rational_root(&r(2, 1), 2, 64);
        assert!(s2.narrower_than(63));
        assert!(s2.lo_f64() <= 2f64.sqrt() && s2.hi_f64() >= 2f64.sqrt() - 1e-15);
    }

    #[test]
    fn pow_surd_like_exponent() {
        // 2^(-1/sqrt 2) enclosed through exp/ln
        let e = Interval::new(r(-7072, 10000), r(-7071, 10000));
        let p = Interval::point(r(2, 1)).pow(&e, 60);
        let f = 2f64.powf(-std::f64::consts::FRAC_1_SQRT_2);
        assert!(p.lo_f64() <= f && p.hi_f64() >= f);
    }
}
