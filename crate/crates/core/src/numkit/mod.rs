//! Exact arithmetic substrate: rationals, quadratic surds, interval
//! enclosures, continued fractions and digit streams.

pub mod interval;
pub mod real;
pub mod serde_dec;
pub mod surd;
pub mod tokens;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use interval::Interval;
pub use real::{cmp_rational_real, cmp_real, Real, DEFAULT_BUDGET_BITS};
pub use surd::QuadSurd;
pub use tokens::{fmt_real, parse_real};

use crate::error::{invalid, Error, Result};

/// Exact rational; `num-rational` keeps it reduced with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Distance to the nearest integer, `||x||`.
pub fn dist_to_nearest_int(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let g = BigRational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// `lcm(1, ..., b-1)`.
pub fn lcm_upto(b: u64) -> Result<BigInt> {
    if b < 2 {
        return invalid(format!("lcm_upto needs b >= 2, got {b}"));
    }
    let mut acc = BigInt::one();
    for k in 1..b {
        acc = acc.lcm(&BigInt::from(k));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CfInput {
    Rational(#[serde(with = "crate::numkit::serde_dec::rat")] BigRational),
    Surd(QuadSurd),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfExpansion {
    #[serde(with = "crate::numkit::serde_dec::vec_int")]
    pub partial_quotients: Vec<BigInt>,
    /// Convergents `r_k / s_k`.
    #[serde(with = "crate::numkit::serde_dec::vec_int_pair")]
    pub convergents: Vec<(BigInt, BigInt)>,
    /// True when a rational input terminated before `depth`.
    pub terminated: bool,
}

/// Continued fraction expansion up to `depth` partial quotients.
pub fn cf_expand(x: &CfInput, depth: usize) -> Result<CfExpansion> {
    let mut pq = Vec::new();
    let mut terminated = false;
    match x {
        CfInput::Rational(r) => {
            let mut n = r.numer().clone();
            let mut d = r.denom().clone();
            while pq.len() < depth {
                let (a, rem) = n.div_mod_floor(&d);
                pq.push(a);
                if rem.is_zero() {
                    terminated = true;
                    break;
                }
                n = d;
                d = rem;
            }
        }
        CfInput::Surd(s) => {
            if s.is_rational() {
                return invalid("surd with a perfect-square radicand");
            }
            // x = (p + q sqrt d) / r, every step stays in this form
            let (mut p, mut q, d, mut r) = s.integer_form();
            while pq.len() < depth {
                let cur = QuadSurd::new(p.clone(), q.clone(), d.clone(), r.clone())?;
                let a = cur.floor();
                pq.push(a.clone());
                // 1 / ((p - a r + q sqrt d) / r) = r (P - q sqrt d) / (P^2 - q^2 d)
                let pp = &p - &a * &r;
                let den = &pp * &pp - &q * &q * &d;
                let np = &r * &pp;
                let nq = -(&r * &q);
                let g = np.gcd(&nq).gcd(&den);
                let sgn = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
                p = np / &g * &sgn;
                q = nq / &g * &sgn;
                r = den / &g * &sgn;
            }
        }
    }
    let convergents = convergents_of(&pq);
    Ok(CfExpansion { partial_quotients: pq, convergents, terminated })
}

pub fn convergents_of(pq: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(pq.len());
    let (mut r0, mut s0) = (BigInt::one(), BigInt::zero());
    let (mut r1, mut s1) = (BigInt::zero(), BigInt::one());
    for a in pq {
        let r = a * &r0 + &r1;
        let s = a * &s0 + &s1;
        r1 = std::mem::replace(&mut r0, r.clone());
        s1 = std::mem::replace(&mut s0, s.clone());
        out.push((r, s));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UvCheck {
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub value: BigRational,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub numerator: BigInt,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub denominator: BigInt,
    pub reduced: bool,
}

/// The fraction `(u L^M v^((m-1)M-1) + 1) / (L^M v^((m-1)M))` and whether
/// it is already in lowest terms.
pub fn prop_uv_check(u: &BigInt, v: &BigInt, l: &BigInt, big_m: u32, m: u32) -> Result<UvCheck> {
    if !v.is_positive() || !l.is_positive() {
        return invalid("v and L must be positive");
    }
    if big_m < 2 || m < 2 {
        return invalid("need M >= 2 and m >= 2");
    }
    if !u.gcd(v).is_one() {
        return Err(Error::Precondition(format!("gcd({u}, {v}) != 1")));
    }
    let e = (m - 1) * big_m;
    let lm = num_traits::pow(l.clone(), big_m as usize);
    let numerator: BigInt = u * &lm * num_traits::pow(v.clone(), (e - 1) as usize) + BigInt::one();
    let denominator = lm * num_traits::pow(v.clone(), e as usize);
    let reduced = numerator.gcd(&denominator).is_one();
    Ok(UvCheck {
        value: BigRational::new(numerator.clone(), denominator.clone()),
        numerator,
        denominator,
        reduced,
    })
}

/// Finite base-`b` digit string; digit `j` (1-based from `offset + 1`)
/// carries weight `b^-j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitStream {
    pub base: u32,
    pub digits: Vec<u32>,
    pub offset: usize,
}

impl DigitStream {
    pub fn new(base: u32, digits: Vec<u32>, offset: usize) -> Result<Self> {
        if base < 2 {
            return invalid("digit base must be >= 2");
        }
        if digits.iter().any(|&d| d >= base) {
            return invalid("digit out of range for base");
        }
        Ok(DigitStream { base, digits, offset })
    }

    /// First `depth` digits of a rational in `[0, 1)`.
    pub fn of_rational(x: &BigRational, base: u32, depth: usize) -> Result<Self> {
        if x.is_negative() || x >= &BigRational::one() {
            return invalid("digit expansion needs 0 <= x < 1");
        }
        let b = BigInt::from(base);
        let den = x.denom().clone();
        let mut rem = x.numer().clone();
        let mut digits = Vec::with_capacity(depth);
        for _ in 0..depth {
            rem *= &b;
            let (q, r) = rem.div_rem(&den);
            digits.push(q.to_u32().expect("digit fits"));
            rem = r;
        }
        DigitStream::new(base, digits, 0)
    }

    /// Digit at 1-based position `j`, zero outside the stored window.
    pub fn digit(&self, j: usize) -> u32 {
        if j <= self.offset {
            return 0;
        }
        self.digits.get(j - self.offset - 1).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.offset + self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Exact value of the stored digits.
    pub fn value(&self) -> BigRational {
        let b = BigInt::from(self.base);
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * &b + d;
        }
        let den = num_traits::pow(b, self.len());
        BigRational::new(num, den)
    }

    pub fn all_in(&self, allowed: &[u32]) -> Option<usize> {
        self.digits.iter().position(|d| !allowed.contains(d)).map(|i| i + self.offset + 1)
    }
}

/// Parse `a`, `a/b`, decimals like `0.3` and `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigRational = parse_rational(n)?;
        let d: BigRational = parse_rational(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut v = BigRational::from_integer(n);
    if scale >= 0 {
        v *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_examples() {
        assert_eq!(dist_to_nearest_int(&rat(5, 7)), rat(2, 7));
        assert_eq!(dist_to_nearest_int(&rat(3, 2)), rat(1, 2));
        assert_eq!(dist_to_nearest_int(&rat(22, 7)), rat(1, 7));
        assert_eq!(dist_to_nearest_int(&rat(-1, 3)), rat(1, 3));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_upto(2).unwrap(), BigInt::from(1));
        assert_eq!(lcm_upto(5).unwrap(), BigInt::from(12));
        assert_eq!(lcm_upto(10).unwrap(), BigInt::from(2520));
        assert!(lcm_upto(1).is_err());
    }

    #[test]
    fn cf_examples() {
        let e = cf_expand(&CfInput::Rational(rat(22, 7)), 10).unwrap();
        assert_eq!(e.partial_quotients, vec![BigInt::from(3), BigInt::from(7)]);
        assert_eq!(e.convergents, vec![(3.into(), 1.into()), (22.into(), 7.into())]);
        let s2 = QuadSurd::new(0.into(), 1.into(), 2.into(), 1.into()).unwrap();
        let e = cf_expand(&CfInput::Surd(s2), 4).unwrap();
        let want: Vec<BigInt> = [1, 2, 2, 2].iter().map(|&k| k.into()).collect();
        assert_eq!(e.partial_quotients, want);
        let g = QuadSurd::new(1.into(), 1.into(), 5.into(), 2.into()).unwrap();
        let e = cf_expand(&CfInput::Surd(g), 5).unwrap();
        assert!(e.partial_quotients.iter().all(|a| a == &BigInt::one()));
        assert_eq!(e.partial_quotients.len(), 5);
    }

    #[test]
    fn uv_examples() {
        let c = |u: i64, v: i64, l: i64, bm, m| prop_uv_check(&u.into(), &v.into(), &l.into(), bm, m).unwrap();
        assert_eq!(c(1, 2, 1, 2, 2).value, rat(3, 4));
        assert_eq!(c(1, 3, 2, 2, 2).value, rat(13, 36));
        assert_eq!(c(0, 1, 5, 3, 4).value, rat(1, 125));
        assert!(c(1, 3, 2, 2, 2).reduced);
        assert!(prop_uv_check(&2.into(), &4.into(), &1.into(), 2, 2).is_err());
        assert!(prop_uv_check(&1.into(), &2.into(), &1.into(), 1, 2).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("9/10").unwrap(), rat(9, 10));
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-2.5").unwrap(), rat(-5, 2));
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn digit_stream_roundtrip() {
        let d = DigitStream::of_rational(&rat(1, 4), 2, 4).unwrap();
        assert_eq!(d.digits, vec![0, 1, 0, 0]);
        assert_eq!(d.value(), rat(1, 4));
        let d = DigitStream::of_rational(&rat(1, 2), 3, 6).unwrap();
        assert_eq!(d.digits, vec![1; 6]);
    }
}
