//! Sequence construction `a_1 | a_2 | ...` with per-level certificates,
//! vector assembly, the Cantor lift and the digit-set families.

pub mod digits;
pub mod vector;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::{cmp_real, dist_to_nearest_int, Real, DEFAULT_BUDGET_BITS};
use crate::phi::{certify, ApproxFn, Property};

pub use vector::{assemble_vector, cantor_lift, verify_lift_digits, ConstructedVector, LiftInfo};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `m >= 3`: `a_{mn+k} = a_{mn+1}^k`, `a_{mn+m} = L_n a_{mn+m-1}`.
    General,
    /// `m = 2`: `a_{2n+2} = L~_n a_{2n+1}`.
    M2,
    /// `m >= 2`: every quotient inside a level equals `L~_n`.
    Uniform,
    /// Every `a_j` a power of `b`; `a_{mn+1} = b^k a_{mn}`.
    Cantor { b: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    /// Smallest exponent per level whose certificate passes.
    MinimalCertified,
    /// Fixed exponents `M_1, M_2, ...`; a missing closing exponent is searched.
    Explicit(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub m: usize,
    pub f: ApproxFn,
    pub mode: Mode,
    pub growth: Growth,
    pub depth: usize,
    /// Fraction of the main term the next-level error may occupy.
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub margin: BigRational,
    /// Largest exponent tried per level.
    pub max_exponent: u32,
}

impl ConstructionPlan {
    pub fn new(m: usize, f: ApproxFn, mode: Mode, depth: usize) -> Self {
        ConstructionPlan {
            m,
            f,
            mode,
            growth: Growth::MinimalCertified,
            depth,
            margin: BigRational::new(1.into(), 1000.into()),
            max_exponent: 64,
        }
    }

    fn uniform_like(&self) -> bool {
        match self.mode {
            Mode::M2 | Mode::Uniform => true,
            Mode::General => false,
            Mode::Cantor { .. } => self.m == 2,
        }
    }

    pub fn mode_tag(&self) -> String {
        match &self.mode {
            Mode::General => "general".into(),
            Mode::M2 => "m2".into(),
            Mode::Uniform => "uniform".into(),
            Mode::Cantor { b } => format!("cantor(b={b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub level: usize,
    pub checks: Vec<CheckResult>,
}

impl LevelCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub m: usize,
    pub mode: String,
    pub phi: String,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub h: BigInt,
    /// `a_1 .. a_{m(depth+1)}`.
    #[serde(with = "crate::numkit::serde_dec::vec_int")]
    pub a: Vec<BigInt>,
    /// `M_1 .. M_depth` (for Cantor mode the power of `b` multiplying `a_{mn}`).
    pub big_m: Vec<u32>,
    /// `L_n` or `L~_n` for `n = 1 .. depth`.
    #[serde(with = "crate::numkit::serde_dec::vec_int")]
    pub l: Vec<BigInt>,
    /// Exponent fixing `a_{m(depth+1)+1}`, which bounds the tail.
    pub closing_exponent: u32,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub next_a: BigInt,
    pub depth: usize,
    pub certificates: Vec<LevelCertificate>,
}

impl SequenceRecord {
    /// 1-based access.
    pub fn a_at(&self, j: usize) -> Option<&BigInt> {
        if j == 0 {
            return None;
        }
        if j <= self.a.len() {
            Some(&self.a[j - 1])
        } else if j == self.a.len() + 1 {
            Some(&self.next_a)
        } else {
            None
        }
    }

    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.passed())
    }
}

/// Working state for one construction; 0-based storage of `a_1, a_2, ...`.
struct Builder<'p> {
    plan: &'p ConstructionPlan,
    a: Vec<BigInt>,
    big_m: Vec<u32>,
    l: Vec<BigInt>,
}

fn pow_big(x: &BigInt, e: u32) -> BigInt {
    num_traits::pow(x.clone(), e as usize)
}

fn ratio(n: &BigInt, d: &BigInt) -> BigRational {
    BigRational::new(n.clone(), d.clone())
}

/// `||q x||` enclosure upper end for a truncated component with tail `t`.
fn dist_upper(q: &BigInt, x: &BigRational, t: &BigRational) -> BigRational {
    let qr = BigRational::from_integer(q.clone());
    let v = dist_to_nearest_int(&(&qr * x)) + qr * t;
    let half = BigRational::new(1.into(), 2.into());
    if v > half {
        half
    } else {
        v
    }
}

impl<'p> Builder<'p> {
    fn m(&self) -> usize {
        self.plan.m
    }

    fn at(&self, j: usize) -> &BigInt {
        &self.a[j - 1]
    }

    fn base(&self) -> Option<BigInt> {
        match self.plan.mode {
            Mode::Cantor { b } => Some(BigInt::from(b)),
            _ => None,
        }
    }

    /// Smallest value the next level start `a_{m(n+1)+1}` can take.
    fn next_min(&self) -> BigInt {
        let last = self.a.last().unwrap();
        match self.base() {
            Some(b) => last * b,
            None => last * last,
        }
    }

    fn level_start(&self, n: usize, e: u32) -> BigInt {
        let prev = self.at(self.m() * n);
        match self.base() {
            Some(b) => prev * pow_big(&b, e),
            None => pow_big(prev, e),
        }
    }

    fn components(&self, levels: usize) -> Vec<BigRational> {
        let m = self.m();
        (1..=m)
            .map(|i| {
                let mut s = BigRational::zero();
                for n in 0..=levels {
                    let j = m * n + i;
                    if j <= self.a.len() {
                        s += ratio(&BigInt::one(), self.at(j));
                    }
                }
                s
            })
            .collect()
    }

    /// Upper end of the max-norm `|q xi|` with the given tail.
    fn norm_upper(&self, q: &BigInt, comps: &[BigRational], tail: &BigRational) -> BigRational {
        comps.iter().map(|x| dist_upper(q, x, tail)).max().unwrap()
    }

    fn level_quotient(&self, n: usize, d: &BigInt, prev: &BigInt) -> Result<BigInt> {
        let f = &self.plan.f;
        if self.plan.uniform_like() {
            l_tilde(f, d, self.m() as u32 - 1, self.base().as_ref())
        } else {
            let z = l_general(f, d, prev)?;
            let _ = n;
            match self.base() {
                Some(b) => {
                    let mut p = BigInt::one();
                    while &p * &b <= z {
                        p *= &b;
                    }
                    Ok(p)
                }
                None => Ok(z),
            }
        }
    }

    /// Push level `n` with exponent `e`.
    fn push_level(&mut self, n: usize, e: u32) -> Result<()> {
        let m = self.m();
        let d = self.level_start(n, e);
        let mut terms = vec![d.clone()];
        let lq;
        if self.plan.uniform_like() {
            lq = self.level_quotient(n, &d, &d)?;
            for _ in 1..m {
                let next = terms.last().unwrap() * &lq;
                terms.push(next);
            }
        } else {
            for k in 2..m {
                terms.push(match self.base() {
                    Some(_) => pow_big(&d, k as u32),
                    None => pow_big(&d, k as u32),
                });
            }
            let prev = terms.last().unwrap().clone();
            lq = self.level_quotient(n, &d, &prev)?;
            if lq.is_zero() {
                return Err(Error::ConstructionInfeasible(format!("L_{n} = 0: 1/d_n already exceeds Phi")));
            }
            terms.push(prev * &lq);
        }
        self.a.extend(terms);
        self.big_m.push(e);
        self.l.push(lq);
        Ok(())
    }

    fn pop_level(&mut self) {
        let m = self.m();
        self.a.truncate(self.a.len() - m);
        self.big_m.pop();
        self.l.pop();
    }

    /// Checks (a)-(c) for level `n` and (d), (e) when `next` (the next
    /// level start) is supplied.
    fn certify_level(&self, n: usize, next: Option<&BigInt>, tail: &BigRational) -> Result<LevelCertificate> {
        let m = self.m();
        let f = &self.plan.f;
        let mut checks = Vec::new();
        let upto = m * (n + 1);
        let div_ok = (1..upto).all(|j| (self.at(j + 1) % self.at(j)).is_zero() && self.at(j + 1) > self.at(j));
        checks.push(CheckResult {
            name: "divisibility".into(),
            passed: div_ok,
            detail: format!("a_j | a_(j+1) and increasing for j < {upto}"),
        });
        let d = self.at(m * n + 1);
        let lq = &self.l[n - 1];
        let (b_ok, b_detail) = if self.plan.uniform_like() {
            (lq > d, format!("L~_{n} = {lq} > a_(mn+1) = {d}"))
        } else {
            (lq <= d, format!("L_{n} = {lq} <= a_(mn+1) = {d}"))
        };
        checks.push(CheckResult { name: "quotient-size".into(), passed: b_ok, detail: b_detail });

        let levels = self.a.len() / m - 1;
        let comps = self.components(levels);
        let q1 = self.at(m * n).clone();
        let lhs = self.norm_upper(&q1, &comps, tail);
        let big_q = d - 1;
        let ok = decide_exceeds(f, &big_q, &lhs)?;
        checks.push(CheckResult {
            name: "case1-margin".into(),
            passed: ok,
            detail: format!("|a_mn xi| <= {:.6e} vs Phi({big_q})", approx(&lhs)),
        });
        if let Some(next) = next {
            let lhs = self.norm_upper(d, &comps, tail);
            let qf = self.at(m * (n + 1)) - 1;
            let ok = decide_exceeds(f, &qf, &lhs)?;
            checks.push(CheckResult {
                name: "case2-margin".into(),
                passed: ok,
                detail: format!("|d_n xi| <= {:.6e} vs Phi({qf})", approx(&lhs)),
            });
            let main = if self.plan.uniform_like() { ratio(&BigInt::one(), lq) } else { ratio(&BigInt::one(), d) };
            let err = BigRational::from_integer(qf.clone()) * ratio(&BigInt::from(2), next);
            let bound = &self.plan.margin * &main;
            checks.push(CheckResult {
                name: "error-domination".into(),
                passed: err < bound,
                detail: format!("Q_n * 2/d_(n+1) = {:.3e} vs margin * main = {:.3e}", approx(&err), approx(&bound)),
            });
        }
        Ok(LevelCertificate { level: n, checks })
    }

    fn provisional_tail(&self) -> BigRational {
        ratio(&BigInt::from(2), &self.next_min())
    }
}

fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn decide_exceeds(f: &ApproxFn, q: &BigInt, x: &BigRational) -> Result<bool> {
    match f.exceeds(&BigRational::from_integer(q.clone()), x) {
        Ok(v) => Ok(v),
        Err(Error::Indeterminate(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Cantor levels multiply by `b^k`, so `k` scales with the size of the terms.
fn exponent_cap(plan: &ConstructionPlan, last: &BigInt) -> u32 {
    match plan.mode {
        Mode::Cantor { .. } => plan.max_exponent.saturating_mul(last.bits().max(1) as u32),
        _ => plan.max_exponent,
    }
}

/// Smallest `e` in `first..=cap` with `pred(e)`.  Galloping assumes the
/// predicate is monotone in `e`; the final certificates are recomputed anyway.
fn search_exponent(first: u32, cap: u32, gallop: bool, mut pred: impl FnMut(u32) -> Result<bool>) -> Result<Option<u32>> {
    if !gallop {
        for e in first..=cap {
            if pred(e)? {
                return Ok(Some(e));
            }
        }
        return Ok(None);
    }
    let mut below = first - 1;
    let mut e = first;
    loop {
        if pred(e)? {
            break;
        }
        if e >= cap {
            return Ok(None);
        }
        below = e;
        e = e.saturating_mul(2).min(cap);
    }
    while e - below > 1 {
        let mid = below + (e - below) / 2;
        if pred(mid)? {
            e = mid;
        } else {
            below = mid;
        }
    }
    Ok(Some(e))
}

/// `max { z : 1/d < Phi(Q) for all 1 <= Q <= z * prev }`.
pub fn l_general(f: &ApproxFn, d: &BigInt, prev: &BigInt) -> Result<BigInt> {
    let x = ratio(&BigInt::one(), d);
    let pred = |z: &BigInt| -> Result<bool> {
        match f.exceeds_on_prefix(&(z * prev), &x) {
            Err(Error::Indeterminate(_)) => Ok(false),
            other => other,
        }
    };
    if !pred(&BigInt::one())? {
        return Ok(BigInt::zero());
    }
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    let cap = d * 4 + 4u32;
    while pred(&hi)? {
        if hi >= cap {
            return Ok(cap);
        }
        lo = hi.clone();
        hi = (&hi * 2u32).min(cap.clone());
    }
    // pred(lo) true, pred(hi) false
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if pred(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `min { z : 1/z < Phi(Q) for all 1 <= Q <= z^k * d }`, restricted to
/// powers of `base` when one is given.
pub fn l_tilde(f: &ApproxFn, d: &BigInt, k: u32, base: Option<&BigInt>) -> Result<BigInt> {
    let pred = |z: &BigInt| -> Result<bool> {
        let n = pow_big(z, k) * d;
        match f.exceeds_on_prefix(&n, &ratio(&BigInt::one(), z)) {
            Err(Error::Indeterminate(_)) => Ok(false),
            other => other,
        }
    };
    let limit_bits = d.bits() * 4 + 64;
    if let Some(b) = base {
        let mut z = b.clone();
        while z.bits() <= limit_bits {
            if pred(&z)? {
                return Ok(z);
            }
            z *= b;
        }
        return Err(Error::ConstructionInfeasible("no power of b satisfies the L~ condition".into()));
    }
    if !f.is_power() {
        // no monotonicity guarantee: scan
        let mut z = BigInt::one();
        let stop = f.domain_max().map(|t| t.ceil().to_integer()).unwrap_or_else(|| d * 16);
        while z <= stop {
            if pred(&z)? {
                return Ok(z);
            }
            z += 1;
        }
        return Err(Error::ConstructionInfeasible("L~ scan left the tabulated range".into()));
    }
    let mut hi = BigInt::one();
    while !pred(&hi)? {
        hi *= 2;
        if hi.bits() > limit_bits {
            return Err(Error::ConstructionInfeasible("L~ search exceeded its range".into()));
        }
    }
    let mut lo: BigInt = &hi >> 1;
    if lo.is_zero() {
        return Ok(hi);
    }
    // pred(lo) false, pred(hi) true
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if pred(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest integer `H >= 2` with `Phi(Q) > Q^(-1/(m-1))` for every `Q >= H`.
pub fn minimal_h(f: &ApproxFn, m: usize) -> Result<BigInt> {
    let e = Real::rat(-1, m as i64 - 1);
    let holds = |q: &BigInt| -> Result<bool> {
        let qr = BigRational::from_integer(q.clone());
        let rhs = Real::Rat(qr.clone()).pow(e.clone());
        match f {
            ApproxFn::Power { .. } => {
                let lhs = f.expr_at(&qr).unwrap();
                Ok(matches!(cmp_real(&lhs, &rhs, DEFAULT_BUDGET_BITS), Ok(Ordering::Greater)))
            }
            ApproxFn::Tabulated { .. } => {
                let re = rhs.enclose(64)?;
                Ok(f.exceeds(&qr, &re.hi).unwrap_or(false))
            }
        }
    };
    match f {
        ApproxFn::Power { .. } => {
            // t^(1/(m-1)) Phi(t) is increasing, so the predicate is monotone
            let mut hi = BigInt::from(2);
            while !holds(&hi)? {
                hi *= 2;
                if hi.bits() > 4096 {
                    return Err(Error::ConstructionInfeasible("H search exceeded 2^4096".into()));
                }
            }
            let mut lo = &hi >> 1;
            if lo < BigInt::from(2) {
                return Ok(hi);
            }
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi) >> 1;
                if holds(&mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi.max(BigInt::from(2)))
        }
        ApproxFn::Tabulated { knots, .. } => {
            let top = knots.last().unwrap().0.floor().to_integer();
            let bottom = knots[0].0.ceil().to_integer().max(BigInt::one());
            let mut q = top.clone();
            while q >= bottom {
                if !holds(&q)? {
                    return Ok((q + 1u32).max(BigInt::from(2)));
                }
                q -= 1;
            }
            Ok(bottom.max(BigInt::from(2)))
        }
    }
}

/// Build `a_1 .. a_{m(depth+1)}` together with the closing exponent.
pub fn build_sequence(plan: &ConstructionPlan) -> Result<SequenceRecord> {
    let m = plan.m;
    match plan.mode {
        Mode::General if m < 3 => return invalid("general mode needs m >= 3"),
        Mode::M2 if m != 2 => return invalid("m2 mode needs m = 2"),
        Mode::Uniform | Mode::Cantor { .. } if m < 2 => return invalid("needs m >= 2"),
        Mode::Cantor { b } if b < 2 => return invalid("Cantor base must be >= 2"),
        _ => {}
    }
    if plan.depth < 1 {
        return invalid("depth must be >= 1");
    }
    for p in [Property::D1, Property::D2] {
        let c = certify(&plan.f, &p, m as u32)?;
        if !c.verdict.passed() {
            return Err(Error::ConstructionInfeasible(format!("{} fails for {}: {}", c.property, plan.f.descriptor(), c.detail)));
        }
    }
    let mut h = minimal_h(&plan.f, m)?;
    if let Mode::Cantor { b } = plan.mode {
        let b = BigInt::from(b);
        let mut p = b.clone();
        while p < h {
            p *= &b;
        }
        h = p;
    }
    let mut bld = Builder { plan, a: (1..=m).map(|j| pow_big(&h, j as u32)).collect(), big_m: vec![], l: vec![] };
    let first_e = if matches!(plan.mode, Mode::Cantor { .. }) { 1 } else { 2 };

    let gallop = matches!(plan.mode, Mode::Cantor { .. });
    for n in 1..=plan.depth {
        let explicit = match &plan.growth {
            Growth::Explicit(v) => Some(*v.get(n - 1).ok_or_else(|| Error::InvalidArgument(format!("explicit growth lacks M_{n}")))?),
            Growth::MinimalCertified => None,
        };
        let cap = exponent_cap(plan, bld.a.last().unwrap());
        let chosen = match explicit {
            Some(e) => Some(e),
            None => search_exponent(first_e, cap, gallop, |e| {
                bld.push_level(n, e)?;
                let tail = bld.provisional_tail();
                let mut ok = bld.certify_level(n, None, &tail)?.passed();
                if ok && n >= 2 {
                    let dn = bld.at(m * n + 1).clone();
                    ok = bld.certify_level(n - 1, Some(&dn), &tail)?.passed();
                }
                bld.pop_level();
                Ok(ok)
            })?,
        };
        let Some(e) = chosen else {
            return Err(Error::ConstructionInfeasible(format!("no exponent up to {cap} certifies level {n}")));
        };
        bld.push_level(n, e)?;
    }

    // closing exponent: certify the last level against the next start and
    // make the checkpoint Q_depth verifiable at the 2^-30 resolution
    let depth = plan.depth;
    let q_last = BigRational::from_integer(bld.at(m * (depth + 1)) - 1u32);
    let resolution = BigRational::new(1.into(), BigInt::one() << 30);
    let explicit_closing = match &plan.growth {
        Growth::Explicit(v) => v.get(depth).copied(),
        Growth::MinimalCertified => None,
    };
    let cap = exponent_cap(plan, bld.a.last().unwrap());
    let closing_exponent = match explicit_closing {
        Some(e) => e,
        None => {
            let valid = |e: u32| &q_last * &ratio(&BigInt::from(2), &bld.level_start(depth + 1, e)) < resolution;
            let found = search_exponent(first_e, cap, gallop, |e| {
                let next = bld.level_start(depth + 1, e);
                let tail = ratio(&BigInt::from(2), &next);
                Ok(valid(e) && bld.certify_level(depth, Some(&next), &tail)?.passed())
            })?;
            match (found, &plan.growth) {
                (Some(e), _) => e,
                // prescribed exponents: keep the record so the failing checks are reported
                (None, Growth::Explicit(_)) => search_exponent(first_e, cap, gallop, |e| Ok(valid(e)))?
                    .ok_or_else(|| Error::ConstructionInfeasible(format!("no closing exponent up to {cap} reaches the resolution")))?,
                (None, Growth::MinimalCertified) => {
                    return Err(Error::ConstructionInfeasible(format!("no closing exponent up to {cap} certifies level {depth}")))
                }
            }
        }
    };
    let next_a = bld.level_start(depth + 1, closing_exponent);

    let tail = ratio(&BigInt::from(2), &next_a);
    let mut certificates = Vec::with_capacity(depth);
    for n in 1..=depth {
        let next = if n == depth { next_a.clone() } else { bld.at(m * (n + 1) + 1).clone() };
        certificates.push(bld.certify_level(n, Some(&next), &tail)?);
    }
    Ok(SequenceRecord {
        m,
        mode: plan.mode_tag(),
        phi: plan.f.descriptor(),
        h,
        a: bld.a,
        big_m: bld.big_m,
        l: bld.l,
        closing_exponent,
        next_a,
        depth,
        certificates,
    })
}

/// Closed form `floor((ceil(c^m d^m) - 1) / a')` of `L_n` for `Phi = c t^(-1/m)`
/// with rational `c`.
pub fn l_closed_form(c: &BigRational, m: u32, d: &BigInt, prev: &BigInt) -> BigInt {
    let v = num_traits::pow(c.clone(), m as usize) * BigRational::from_integer(pow_big(d, m));
    let top: BigInt = v.ceil().to_integer() - 1;
    if top.is_negative() {
        return BigInt::zero();
    }
    top.div_floor(prev)
}
