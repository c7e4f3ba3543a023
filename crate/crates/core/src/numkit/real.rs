//! Small expression language for the real constants that appear in
//! approximation functions, certificates and formulas. Each node can be
//! enclosed to any requested width and compared with adaptive refinement.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{ln_point, rational_root, Interval};
use super::surd::QuadSurd;
use crate::error::{Error, Result};

/// Default refinement budget in bits for adaptive comparisons.
pub const DEFAULT_BUDGET_BITS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Rat(BigRational),
    Surd(QuadSurd),
    /// `base^exp` with a positive base.
    Pow(Box<Real>, Box<Real>),
    Mul(Box<Real>, Box<Real>),
    Div(Box<Real>, Box<Real>),
    Add(Box<Real>, Box<Real>),
    Neg(Box<Real>),
    /// Natural logarithm of a positive value.
    Ln(Box<Real>),
}

impl Real {
    pub fn rat(n: i64, d: i64) -> Real {
        Real::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn int(n: i64) -> Real {
        Real::Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_big(n: &BigInt) -> Real {
        Real::Rat(BigRational::from_integer(n.clone()))
    }

    pub fn sqrt_int(n: i64) -> Real {
        let s = QuadSurd::sqrt_of(&BigInt::from(n)).expect("non-negative");
        Real::Surd(s).simplify()
    }

    pub fn pow(self, e: Real) -> Real {
        Real::Pow(Box::new(self), Box::new(e))
    }

    pub fn mul(self, o: Real) -> Real {
        Real::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Real) -> Real {
        Real::Div(Box::new(self), Box::new(o))
    }

    pub fn add(self, o: Real) -> Real {
        Real::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Real) -> Real {
        Real::Add(Box::new(self), Box::new(Real::Neg(Box::new(o))))
    }

    pub fn neg(self) -> Real {
        Real::Neg(Box::new(self))
    }

    pub fn ln(self) -> Real {
        Real::Ln(Box::new(self))
    }

    fn simplify(self) -> Real {
        match self {
            Real::Surd(s) if s.is_rational() => Real::Rat(s.a),
            other => other,
        }
    }

    /// Exact rational value when one is available without approximation.
    pub fn exact(&self) -> Option<BigRational> {
        match self {
            Real::Rat(x) => Some(x.clone()),
            Real::Surd(s) => s.as_rational().cloned(),
            Real::Pow(b, e) => {
                let b = b.exact()?;
                let e = e.exact()?;
                exact_pow(&b, &e)
            }
            Real::Mul(a, b) => Some(a.exact()? * b.exact()?),
            Real::Div(a, b) => {
                let d = b.exact()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.exact()? / d)
                }
            }
            Real::Add(a, b) => Some(a.exact()? + b.exact()?),
            Real::Neg(a) => Some(-a.exact()?),
            Real::Ln(a) => {
                let v = a.exact()?;
                if v.is_one() {
                    Some(BigRational::zero())
                } else {
                    None
                }
            }
        }
    }

    /// Quadratic-field value when the expression stays inside one field.
    pub fn as_surd(&self) -> Option<QuadSurd> {
        match self {
            Real::Rat(x) => Some(QuadSurd::from_rational(x.clone())),
            Real::Surd(s) => Some(s.clone()),
            Real::Mul(a, b) => a.as_surd()?.mul(&b.as_surd()?).ok(),
            Real::Div(a, b) => a.as_surd()?.div(&b.as_surd()?).ok(),
            Real::Add(a, b) => a.as_surd()?.add(&b.as_surd()?).ok(),
            Real::Neg(a) => Some(a.as_surd()?.neg()),
            Real::Pow(..) | Real::Ln(..) => self.exact().map(QuadSurd::from_rational),
        }
    }

    /// Enclosure at working precision `w`; the width is not guaranteed.
    pub fn raw(&self, w: u32) -> Interval {
        match self {
            Real::Rat(x) => Interval::point(x.clone()),
            Real::Surd(s) => s.enclose(w),
            Real::Pow(b, e) => pow_raw(b, e, w),
            Real::Mul(a, b) => a.raw(w).mul(&b.raw(w)).round_out(w + 8),
            Real::Div(a, b) => {
                let d = b.raw(w);
                match a.raw(w).div(&d) {
                    Some(q) => q.round_out(w + 8),
                    None => wide(),
                }
            }
            Real::Add(a, b) => a.raw(w).add(&b.raw(w)),
            Real::Neg(a) => a.raw(w).neg(),
            Real::Ln(a) => {
                let v = a.raw(w);
                if !v.lo.is_positive() {
                    return wide();
                }
                v.ln(w)
            }
        }
    }

    /// Enclosure of width at most `2^-bits`, refining up to the default budget.
    pub fn enclose(&self, bits: u32) -> Result<Interval> {
        self.enclose_budget(bits, DEFAULT_BUDGET_BITS.max(bits + 64))
    }

    pub fn enclose_budget(&self, bits: u32, budget: u32) -> Result<Interval> {
        if let Some(x) = self.exact() {
            return Ok(Interval::point(x));
        }
        let mut w = bits + 16;
        loop {
            let v = self.raw(w);
            if v.narrower_than(bits) {
                return Ok(v);
            }
            if w >= budget {
                return Err(Error::Budget(format!("enclosure of {self} did not reach 2^-{bits} within {budget} bits")));
            }
            w = (w * 2).min(budget);
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(x) = self.exact() {
            return x.to_f64().unwrap_or(f64::NAN);
        }
        self.raw(64).mid_f64()
    }

    pub fn is_positive_certain(&self) -> bool {
        matches!(cmp_real(self, &Real::int(0), DEFAULT_BUDGET_BITS), Ok(Ordering::Greater))
    }
}

fn wide() -> Interval {
    let big = BigRational::from_integer(BigInt::one() << 4096usize);
    Interval::new(-big.clone(), big)
}

fn exact_pow(b: &BigRational, e: &BigRational) -> Option<BigRational> {
    if e.is_zero() {
        return Some(BigRational::one());
    }
    if b.is_zero() {
        return if e.is_positive() { Some(BigRational::zero()) } else { None };
    }
    let p = e.numer().to_i64()?;
    let q = e.denom().to_u32()?;
    if p.unsigned_abs() > 1 << 20 || q > 1 << 12 {
        return None;
    }
    if b.is_negative() {
        return None;
    }
    let root = rational_root(b, q, 8);
    if !root.is_point() {
        return None;
    }
    let r = root.lo;
    let v = num_traits::pow(r, p.unsigned_abs() as usize);
    Some(if p < 0 { v.recip() } else { v })
}

fn pow_raw(b: &Real, e: &Real, w: u32) -> Interval {
    if let (Some(bx), Some(ex)) = (b.exact(), e.exact()) {
        if let Some(v) = exact_pow(&bx, &ex) {
            return Interval::point(v);
        }
        // rational base, small rational exponent: integer roots are exact enough
        if let (Some(p), Some(q)) = (ex.numer().to_i64(), ex.denom().to_u32()) {
            if bx.is_positive() && p.unsigned_abs() <= 4096 && q <= 256 {
                let y = num_traits::pow(bx.clone(), p.unsigned_abs() as usize);
                let extra = if p < 0 { 2 * (y.denom().bits() as u32 + 2) } else { 0 };
                let r = rational_root(&y, q, w + extra);
                return if p < 0 { r.recip().unwrap_or_else(wide) } else { r };
            }
        }
    }
    let bi = b.raw(w);
    if !bi.lo.is_positive() {
        return wide();
    }
    let ei = e.raw(w + 16);
    let scale = (ei.max_abs().ceil().to_integer().bits() as u32) + (bi.hi.numer().bits() as u32);
    let lb = if bi.is_point() { ln_point(&bi.lo, w + scale + 16) } else { bi.ln(w + scale + 16) };
    ei.mul(&lb).round_out(w + scale + 16).exp(w)
}

/// Three-way comparison with adaptive refinement; equality is only
/// reported when both sides are exact (or structurally identical).
pub fn cmp_real(a: &Real, b: &Real, budget: u32) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if let (Some(x), Some(y)) = (a.exact(), b.exact()) {
        return Ok(x.cmp(&y));
    }
    if let (Some(x), Some(y)) = (a.as_surd(), b.as_surd()) {
        if let Ok(o) = x.cmp_exact(&y) {
            return Ok(o);
        }
    }
    if let Some(o) = same_base_powers(a, b) {
        return Ok(o);
    }
    let mut w = 48;
    loop {
        let ia = a.raw(w);
        let ib = b.raw(w);
        if ia.hi < ib.lo {
            return Ok(Ordering::Less);
        }
        if ia.lo > ib.hi {
            return Ok(Ordering::Greater);
        }
        if w >= budget {
            return Err(Error::Indeterminate(format!("{a} vs {b} undecided at {budget} bits")));
        }
        w = (w * 2).min(budget);
    }
}

/// `g^x` vs `g^y` with a shared exact base: compare the exponents.
fn same_base_powers(a: &Real, b: &Real) -> Option<Ordering> {
    let (Real::Pow(ba, ea), Real::Pow(bb, eb)) = (a, b) else { return None };
    let g = ba.exact()?;
    if bb.exact()? != g || !g.is_positive() {
        return None;
    }
    let o = ea.as_surd()?.cmp_exact(&eb.as_surd()?).ok()?;
    Some(match g.cmp(&BigRational::one()) {
        Ordering::Greater => o,
        Ordering::Less => o.reverse(),
        Ordering::Equal => Ordering::Equal,
    })
}

/// Compare a rational against a real with adaptive refinement.
pub fn cmp_rational_real(x: &BigRational, b: &Real, budget: u32) -> Result<Ordering> {
    if let Some(y) = b.exact() {
        return Ok(x.cmp(&y));
    }
    if let Some(s) = b.as_surd() {
        return Ok(s.cmp_rational(x).reverse());
    }
    let mut w = 48;
    loop {
        let ib = b.raw(w);
        if x < &ib.lo {
            return Ok(Ordering::Less);
        }
        if x > &ib.hi {
            return Ok(Ordering::Greater);
        }
        if w >= budget {
            return Err(Error::Indeterminate(format!("{x} vs {b} undecided at {budget} bits")));
        }
        w = (w * 2).min(budget);
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rat(x) => write!(f, "{x}"),
            Real::Surd(s) => write!(f, "({s})"),
            Real::Pow(b, e) => write!(f, "{b}^({e})"),
            Real::Mul(a, b) => write!(f, "({a}*{b})"),
            Real::Div(a, b) => write!(f, "({a}/{b})"),
            Real::Add(a, b) => write!(f, "({a}+{b})"),
            Real::Neg(a) => write!(f, "-({a})"),
            Real::Ln(a) => write!(f, "ln({a})"),
        }
    }
}

impl From<BigRational> for Real {
    fn from(x: BigRational) -> Self {
        Real::Rat(x)
    }
}

impl From<QuadSurd> for Real {
    fn from(s: QuadSurd) -> Self {
        Real::Surd(s).simplify()
    }
}
