use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::{invalid, Result};

/// Element `a + b*sqrt(d)` of a real quadratic field.
///
/// `d` is kept squarefree when it is small enough to factor; `b == 0`
/// means the value is rational and `d` is then irrelevant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSurd {
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub a: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub b: BigRational,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub d: BigInt,
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Split `n = f^2 * core`, factoring only small primes.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    loop {
        let p2 = &p * &p;
        if p2 > core || p > limit {
            break;
        }
        while (&core % &p2).is_zero() {
            core /= &p2;
            f *= &p;
        }
        p += 1u32;
    }
    if is_square(&core) {
        let r = core.sqrt();
        f *= r;
        core = BigInt::one();
    }
    (f, core)
}

impl QuadSurd {
    /// `(p + q*sqrt(d)) / r`; a perfect-square `d` is rejected.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<Self> {
        if r.is_zero() {
            return invalid("surd denominator is zero");
        }
        if d <= BigInt::zero() {
            return invalid("surd radicand must be positive");
        }
        if is_square(&d) {
            return invalid(format!("radicand {d} is a perfect square"));
        }
        let rr = BigRational::from_integer(r);
        let (f, core) = square_split(&d);
        Ok(Self::normalize(
            BigRational::from_integer(p) / &rr,
            BigRational::from_integer(q * f) / rr,
            core,
        ))
    }

    pub fn from_rational(x: BigRational) -> Self {
        QuadSurd { a: x, b: BigRational::zero(), d: BigInt::one() }
    }

    /// `sqrt(n)` for a positive integer `n`, collapsing to a rational when `n` is square.
    pub fn sqrt_of(n: &BigInt) -> Result<Self> {
        if n.is_negative() {
            return invalid("square root of a negative integer");
        }
        let (f, core) = square_split(n);
        Ok(Self::normalize(BigRational::zero(), BigRational::from_integer(f), core))
    }

    fn normalize(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() || d.is_one() {
            let a = if d.is_one() { a + b } else { a };
            return QuadSurd { a, b: BigRational::zero(), d: BigInt::one() };
        }
        QuadSurd { a, b, d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn field(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(BigInt::one()),
            (true, false) => Ok(other.d.clone()),
            (false, true) => Ok(self.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => invalid(format!("surds live in different fields: sqrt({}) vs sqrt({})", self.d, other.d)),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let d = self.field(o)?;
        Ok(Self::normalize(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QuadSurd { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let d = self.field(o)?;
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::normalize(a, b, d))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::normalize(&self.a * k, &self.b * k, self.d.clone())
    }

    /// Conjugate norm `a^2 - b^2 d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("reciprocal of zero");
        }
        let n = self.norm();
        Ok(Self::normalize(&self.a / &n, -&self.b / &n, self.d.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.recip()?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b sqrt(d)`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_exact(&self, o: &Self) -> Result<Ordering> {
        let s = self.sub(o)?.signum();
        Ok(s.cmp(&0))
    }

    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        self.sub(&Self::from_rational(x.clone())).expect("rational shares any field").signum().cmp(&0)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // common denominator form (p + q sqrt d) / r with r > 0
        let r = self.a.denom().lcm(self.b.denom());
        let p = (&self.a * BigRational::from_integer(r.clone())).to_integer();
        let q = (&self.b * BigRational::from_integer(r.clone())).to_integer();
        let n = &q * &q * &self.d;
        let root = n.sqrt();
        let s = if q.is_positive() { root } else { -root - 1 };
        (p + s).div_floor(&r)
    }

    /// Enclosure with absolute width at most about `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Interval {
        if self.is_rational() {
            return Interval::point(self.a.clone());
        }
        let extra = self.b.numer().bits() as u32 + self.b.denom().bits() as u32 + 4;
        let k = bits + extra;
        let scaled: BigInt = &self.d << (2 * k as usize);
        let s = scaled.sqrt();
        let den = BigRational::from_integer(BigInt::one() << k as usize);
        let lo = BigRational::from_integer(s.clone()) / &den;
        let hi = BigRational::from_integer(s + 1) / &den;
        let root = Interval::new(lo, hi);
        Interval::point(self.a.clone()).add(&root.scale(&self.b))
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }

    /// The "p + q*sqrt(d)" over "r" integer form with `r > 0`.
    pub fn integer_form(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let r = self.a.denom().lcm(self.b.denom());
        let rr = BigRational::from_integer(r.clone());
        let p = (&self.a * &rr).to_integer();
        let q = (&self.b * &rr).to_integer();
        (p, q, self.d.clone(), r)
    }
}

fn sign_of(x: &BigRational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, d: i64, r: i64) -> QuadSurd {
        QuadSurd::new(p.into(), q.into(), d.into(), r.into()).unwrap()
    }

    #[test]
    fn square_radicand_rejected() {
        assert!(QuadSurd::new(0.into(), 1.into(), 9.into(), 1.into()).is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(s(0, 1, 2, 1).floor(), BigInt::from(1));
        assert_eq!(s(0, -1, 2, 1).floor(), BigInt::from(-2));
        assert_eq!(s(1, 1, 5, 2).floor(), BigInt::from(1));
        assert_eq!(s(0, 7, 2, 1).floor(), BigInt::from(9));
    }

    #[test]
    fn field_ops() {
        let g = s(1, 1, 5, 2);
        // golden ratio satisfies g^2 = g + 1
        let lhs = g.mul(&g).unwrap();
        let rhs = g.add(&QuadSurd::from_rational(BigRational::one())).unwrap();
        assert_eq!(lhs, rhs);
        let r = g.recip().unwrap();
        assert_eq!(g.mul(&r).unwrap(), QuadSurd::from_rational(BigRational::one()));
    }

    #[test]
    fn sign_tests() {
        assert_eq!(s(3, -2, 2, 1).signum(), 1);
        assert_eq!(s(2, -2, 2, 1).signum(), -1);
        assert_eq!(s(-3, 2, 2, 1).signum(), -1);
    }

    #[test]
    fn square_factor_extracted() {
        let x = QuadSurd::sqrt_of(&BigInt::from(8)).unwrap();
        assert_eq!(x.d, BigInt::from(2));
        assert_eq!(x.b, BigRational::from_integer(2.into()));
        assert!(QuadSurd::sqrt_of(&BigInt::from(49)).unwrap().is_rational());
    }

    #[test]
    fn enclosure_brackets_value() {
        let x = s(0, 1, 2, 1);
        let e = x.enclose(60);
        use num_traits::ToPrimitive;
        assert!(e.lo.to_f64().unwrap() <= 2f64.sqrt() + 1e-15);
        assert!(e.hi.to_f64().unwrap() >= 2f64.sqrt() - 1e-15);
        assert!(e.width() < BigRational::new(1.into(), BigInt::one() << 59));
    }
}
