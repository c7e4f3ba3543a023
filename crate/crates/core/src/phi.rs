//! Approximation functions, their admissibility certificates and the pair
//! solvers used by the Cantor-set variants.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::{
    cf_expand, cmp_rational_real, cmp_real, fmt_real, parse_rational, parse_real, CfInput, Interval, Real,
    DEFAULT_BUDGET_BITS,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproxFn {
    /// `c * t^(-tau)`.
    Power { c: Real, tau: Real, #[serde(with = "crate::numkit::serde_dec::rat")] t0: BigRational },
    /// Knots `(t, value)`; between knots the function is assumed monotone,
    /// so its value lies between the neighbouring knot values.
    Tabulated {
        #[serde(with = "crate::numkit::serde_dec::vec_rat_pair")]
        knots: Vec<(BigRational, BigRational)>,
        #[serde(with = "crate::numkit::serde_dec::rat")] t0: BigRational,
    },
}

impl ApproxFn {
    pub fn power(c: Real, tau: Real) -> Result<Self> {
        if !c.is_positive_certain() {
            return invalid(format!("power family needs c > 0, got {c}"));
        }
        if !tau.is_positive_certain() {
            return invalid(format!("power family needs tau > 0, got {tau}"));
        }
        Ok(ApproxFn::Power { c, tau, t0: BigRational::one() })
    }

    pub fn tabulated(mut knots: Vec<(BigRational, BigRational)>, t0: BigRational) -> Result<Self> {
        if knots.is_empty() {
            return invalid("empty table");
        }
        knots.sort_by(|a, b| a.0.cmp(&b.0));
        if knots.windows(2).any(|w| w[0].0 == w[1].0) {
            return invalid("duplicate knot");
        }
        if knots.iter().any(|(t, v)| !t.is_positive() || !v.is_positive()) {
            return invalid("knots and values must be positive");
        }
        Ok(ApproxFn::Tabulated { knots, t0 })
    }

    /// `{"t0": "1", "knots": [["1", "9/10"], ["2", "0.63"], ...]}`
    pub fn tabulated_from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Table {
            #[serde(default)]
            t0: Option<String>,
            knots: Vec<(String, String)>,
        }
        let t: Table = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let knots = t
            .knots
            .iter()
            .map(|(a, b)| Ok((parse_rational(a)?, parse_rational(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let t0 = match t.t0 {
            Some(s) => parse_rational(&s)?,
            None => knots.iter().map(|k| k.0.clone()).min().unwrap_or_else(BigRational::one),
        };
        Self::tabulated(knots, t0)
    }

    /// `power:c=<real>,tau=<real>[,t0=<rat>]`
    pub fn parse_descriptor(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("power:")
            .ok_or_else(|| Error::Parse(format!("unknown approximation function descriptor {s:?}")))?;
        let mut c = None;
        let mut tau = None;
        let mut t0 = None;
        for part in body.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {part:?}")))?;
            match k.trim() {
                "c" => c = Some(parse_real(v)?),
                "tau" => tau = Some(parse_real(v)?),
                "t0" => t0 = Some(parse_rational(v)?),
                other => return Err(Error::Parse(format!("unknown field {other:?}"))),
            }
        }
        let c = c.ok_or_else(|| Error::Parse("missing c".into()))?;
        let tau = tau.ok_or_else(|| Error::Parse("missing tau".into()))?;
        let mut f = Self::power(c, tau)?;
        if let (Some(t), ApproxFn::Power { t0: slot, .. }) = (t0, &mut f) {
            *slot = t;
        }
        Ok(f)
    }

    /// `k * Phi`.
    pub fn scaled(&self, k: &Real) -> Result<ApproxFn> {
        if !k.is_positive_certain() {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        match self {
            ApproxFn::Power { c, tau, t0 } => {
                let c = match (c.exact(), k.exact()) {
                    (Some(a), Some(b)) => Real::Rat(a * b),
                    _ => c.clone().mul(k.clone()),
                };
                Ok(ApproxFn::Power { c, tau: tau.clone(), t0: t0.clone() })
            }
            ApproxFn::Tabulated { knots, t0 } => {
                let k = k.exact().ok_or_else(|| Error::Unsupported("tables scale by rationals only".into()))?;
                let knots = knots.iter().map(|(t, v)| (t.clone(), v * &k)).collect();
                Ok(ApproxFn::Tabulated { knots, t0: t0.clone() })
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ApproxFn::Power { c, tau, t0 } => {
                let mut s = format!("power:c={},tau={}", fmt_real(c), fmt_real(tau));
                if !t0.is_one() {
                    s.push_str(&format!(",t0={}", fmt_real(&Real::Rat(t0.clone()))));
                }
                s
            }
            ApproxFn::Tabulated { knots, t0 } => {
                let mut s = format!("table:t0={}", fmt_real(&Real::Rat(t0.clone())));
                for (t, v) in knots {
                    s.push_str(&format!(";{}={}", fmt_real(&Real::Rat(t.clone())), fmt_real(&Real::Rat(v.clone()))));
                }
                s
            }
        }
    }

    pub fn t0(&self) -> &BigRational {
        match self {
            ApproxFn::Power { t0, .. } | ApproxFn::Tabulated { t0, .. } => t0,
        }
    }

    /// Largest argument at which the function is defined, when bounded.
    pub fn domain_max(&self) -> Option<&BigRational> {
        match self {
            ApproxFn::Power { .. } => None,
            ApproxFn::Tabulated { knots, .. } => knots.last().map(|k| &k.0),
        }
    }

    pub fn is_power(&self) -> bool {
        matches!(self, ApproxFn::Power { .. })
    }

    /// Non-increasing on its whole domain.
    pub fn is_non_increasing(&self) -> bool {
        match self {
            ApproxFn::Power { .. } => true,
            ApproxFn::Tabulated { knots, .. } => knots.windows(2).all(|w| w[1].1 <= w[0].1),
        }
    }

    /// Expression for the value at `t` (power family only).
    pub fn expr_at(&self, t: &BigRational) -> Option<Real> {
        match self {
            ApproxFn::Power { c, tau, .. } => {
                let neg = match tau.as_surd() {
                    Some(s) => Real::from(s.neg()),
                    None => tau.clone().neg(),
                };
                Some(c.clone().mul(Real::Rat(t.clone()).pow(neg)))
            }
            ApproxFn::Tabulated { .. } => None,
        }
    }

    fn table_enclosure(knots: &[(BigRational, BigRational)], t: &BigRational) -> Result<Interval> {
        let i = knots.partition_point(|k| &k.0 < t);
        if i < knots.len() && &knots[i].0 == t {
            return Ok(Interval::point(knots[i].1.clone()));
        }
        if i == 0 || i == knots.len() {
            return Err(Error::Domain(format!("t = {t} outside tabulated range")));
        }
        let a = &knots[i - 1].1;
        let b = &knots[i].1;
        Ok(Interval::new(std::cmp::min(a, b).clone(), std::cmp::max(a, b).clone()))
    }

    /// Decide `x < Phi(t)`.
    pub fn exceeds(&self, t: &BigRational, x: &BigRational) -> Result<bool> {
        match self {
            ApproxFn::Power { .. } => {
                let e = self.expr_at(t).expect("power");
                Ok(cmp_rational_real(x, &e, DEFAULT_BUDGET_BITS)? == Ordering::Less)
            }
            ApproxFn::Tabulated { knots, .. } => {
                let v = Self::table_enclosure(knots, t)?;
                if x < &v.lo {
                    Ok(true)
                } else if x >= &v.hi {
                    Ok(false)
                } else {
                    Err(Error::Indeterminate(format!("{x} inside table enclosure at t = {t}")))
                }
            }
        }
    }

    /// Decide `x < min_{1 <= Q <= n} Phi(Q)` over integers.
    pub fn exceeds_on_prefix(&self, n: &BigInt, x: &BigRational) -> Result<bool> {
        if n < &BigInt::one() {
            return Ok(true);
        }
        let nr = BigRational::from_integer(n.clone());
        if self.is_non_increasing() {
            return self.exceeds(&nr, x);
        }
        let ApproxFn::Tabulated { knots, .. } = self else { unreachable!() };
        for (t, v) in knots.iter().filter(|k| k.0 <= nr && k.0 >= BigRational::one()) {
            let _ = t;
            if x >= v {
                return Ok(false);
            }
        }
        self.exceeds(&nr, x)
    }
}

/// Enclosure of `Phi(t)` of width at most `2^-precision`; exact when
/// `t^tau` is rational.
pub fn phi_eval(f: &ApproxFn, t: &BigRational, precision: u32) -> Result<Interval> {
    if t < &BigRational::one() {
        return Err(Error::Domain(format!("Phi is defined on t >= 1, got {t}")));
    }
    match f {
        ApproxFn::Power { .. } => f.expr_at(t).expect("power").enclose(precision),
        ApproxFn::Tabulated { knots, .. } => ApproxFn::table_enclosure(knots, t),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    /// `Phi(t) < t^(-1/m)` eventually.
    D1,
    /// `t^(1/(m-1)) Phi(t)` increases to infinity.
    D2,
    /// No fast decay on short intervals.
    D3,
    /// `Phi(t) > eta t^(-gamma)` for some `eta > 0`.
    D4 { gamma: Real },
    /// `Phi(b t) >= R Phi(t)`.
    D3Prime { b: u32, r: Real },
    /// Existence of pairs `(A, B)` with `b^-A ~ Phi(b^B)`.
    DB { b: u32 },
}

impl Property {
    fn key(&self) -> String {
        match self {
            Property::D1 => "d1".into(),
            Property::D2 => "d2".into(),
            Property::D3 => "d3".into(),
            Property::D4 { gamma } => format!("d4({})", fmt_real(gamma)),
            Property::D3Prime { b, r } => format!("d3prime({b},{})", fmt_real(r)),
            Property::DB { b } => format!("db({b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AnalyticPass,
    AnalyticFail,
    SampledPass,
    SampledFail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::AnalyticPass | Verdict::SampledPass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: String,
    pub m: u32,
    pub verdict: Verdict,
    /// Validity threshold `t_0`.
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub t0: BigRational,
    /// Lower-bound constant for D4.
    pub eta: Option<String>,
    pub detail: String,
}

fn cert_cache() -> &'static RwLock<HashMap<String, Certificate>> {
    static C: OnceLock<RwLock<HashMap<String, Certificate>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn neg_real(x: &Real) -> Real {
    match x.as_surd() {
        Some(s) => Real::from(s.neg()),
        None => x.clone().neg(),
    }
}

/// Certify one admissibility property; analytic for the power family,
/// sampled on the knots for tabulated functions.
pub fn certify(f: &ApproxFn, prop: &Property, m: u32) -> Result<Certificate> {
    if m < 1 {
        return invalid("m must be positive");
    }
    let key = format!("{}|{}|{m}", f.descriptor(), prop.key());
    if let Some(c) = cert_cache().read().unwrap().get(&key) {
        return Ok(c.clone());
    }
    let cert = match f {
        ApproxFn::Power { c, tau, t0 } => certify_power(c, tau, t0, prop, m)?,
        ApproxFn::Tabulated { knots, t0 } => {
            let ts: Vec<BigRational> = knots.iter().map(|k| k.0.clone()).filter(|t| t >= t0).collect();
            let (ok, detail) = sampled_check(f, prop, m, &ts)?;
            Certificate {
                property: prop.key(),
                m,
                verdict: if ok { Verdict::SampledPass } else { Verdict::SampledFail },
                t0: t0.clone(),
                eta: None,
                detail,
            }
        }
    };
    cert_cache().write().unwrap().insert(key, cert.clone());
    Ok(cert)
}

fn certify_power(c: &Real, tau: &Real, t0: &BigRational, prop: &Property, m: u32) -> Result<Certificate> {
    let b = DEFAULT_BUDGET_BITS;
    let one = Real::int(1);
    let (pass, detail, eta) = match prop {
        Property::D1 => {
            let inv_m = Real::rat(1, m as i64);
            match cmp_real(tau, &inv_m, b)? {
                Ordering::Greater => (true, "tau > 1/m".to_string(), None),
                Ordering::Equal => {
                    let ok = cmp_real(c, &one, b)? == Ordering::Less;
                    (ok, format!("tau = 1/m, c {} 1", if ok { "<" } else { ">=" }), None)
                }
                Ordering::Less => (false, "tau < 1/m".to_string(), None),
            }
        }
        Property::D2 => {
            if m < 2 {
                return invalid("d2 needs m >= 2");
            }
            let ok = cmp_real(tau, &Real::rat(1, m as i64 - 1), b)? == Ordering::Less;
            (ok, format!("tau {} 1/(m-1)", if ok { "<" } else { ">=" }), None)
        }
        Property::D3 => (true, "Phi(t+1)/Phi(t) -> 1 for every power".to_string(), None),
        Property::D4 { gamma } => {
            let ok = cmp_real(tau, gamma, b)? != Ordering::Greater;
            let eta = c.as_surd().map(|s| fmt_real(&Real::from(s.scale(&BigRational::new(1.into(), 2.into())))));
            (ok, format!("tau {} gamma", if ok { "<=" } else { ">" }), if ok { eta.or(Some(format!("{c}/2"))) } else { None })
        }
        Property::D3Prime { b: base, r } => {
            if *base < 2 {
                return invalid("d3prime needs b >= 2");
            }
            let rhs = Real::int(*base as i64).pow(neg_real(tau));
            let ok = cmp_real(r, &rhs, b)? != Ordering::Greater;
            (ok, format!("R {} b^(-tau)", if ok { "<=" } else { ">" }), None)
        }
        Property::DB { b: base } => {
            if *base < 2 {
                return invalid("db needs b >= 2");
            }
            let irrational = tau.exact().is_none();
            (irrational, format!("tau {}", if irrational { "irrational" } else { "rational" }), None)
        }
    };
    Ok(Certificate {
        property: prop.key(),
        m,
        verdict: if pass { Verdict::AnalyticPass } else { Verdict::AnalyticFail },
        t0: t0.clone(),
        eta,
        detail,
    })
}

/// Check the defining inequality of `prop` at the sample points `ts`.
pub fn sampled_check(f: &ApproxFn, prop: &Property, m: u32, ts: &[BigRational]) -> Result<(bool, String)> {
    let prec = 96;
    let val = |t: &BigRational| phi_eval(f, t, prec);
    match prop {
        Property::D1 => {
            for t in ts {
                let bound = Real::Rat(t.clone()).pow(Real::rat(-1, m as i64)).enclose(prec)?;
                if !val(t)?.strictly_below(&bound) {
                    return Ok((false, format!("Phi({t}) >= t^(-1/m)")));
                }
            }
            Ok((true, format!("Phi(t) < t^(-1/m) at {} samples", ts.len())))
        }
        Property::D2 => {
            if m < 2 {
                return invalid("d2 needs m >= 2");
            }
            let g = |t: &BigRational| -> Result<Interval> {
                Ok(val(t)?.mul(&Real::Rat(t.clone()).pow(Real::rat(1, m as i64 - 1)).enclose(prec)?))
            };
            for w in ts.windows(2) {
                if g(&w[1])?.hi < g(&w[0])?.lo {
                    return Ok((false, format!("t^(1/(m-1)) Phi(t) decreases between {} and {}", w[0], w[1])));
                }
            }
            Ok((true, format!("t^(1/(m-1)) Phi(t) non-decreasing at {} samples", ts.len())))
        }
        Property::D3 => {
            for w in ts.windows(2) {
                let lhs = val(&w[1])?;
                let rhs = val(&w[0])?.scale(&(&w[0] / &w[1]));
                if lhs.hi < rhs.lo {
                    return Ok((false, format!("decay faster than 1/t between {} and {}", w[0], w[1])));
                }
            }
            Ok((true, format!("decay no faster than 1/t at {} samples", ts.len())))
        }
        Property::D4 { gamma } => {
            let mut eta: Option<BigRational> = None;
            for t in ts {
                let r = val(t)?.mul(&Real::Rat(t.clone()).pow(gamma.clone()).enclose(prec)?);
                eta = Some(match eta {
                    Some(e) if e <= r.lo => e,
                    _ => r.lo.clone(),
                });
            }
            match eta {
                Some(e) if e.is_positive() => Ok((true, format!("eta = {}", e / BigRational::from_integer(2.into())))),
                _ => Ok((false, "no positive eta on samples".into())),
            }
        }
        Property::D3Prime { b, r } => {
            let re = r.enclose(prec)?;
            let bb = BigRational::from_integer((*b).into());
            for t in ts {
                let bt = t * &bb;
                let lhs = match val(&bt) {
                    Ok(v) => v,
                    Err(Error::Domain(_)) => continue,
                    Err(e) => return Err(e),
                };
                let rhs = val(t)?.mul(&re);
                if lhs.hi < rhs.lo {
                    return Ok((false, format!("Phi(b t) < R Phi(t) at t = {t}")));
                }
            }
            Ok((true, format!("Phi(b t) >= R Phi(t) at {} samples", ts.len())))
        }
        Property::DB { .. } => Err(Error::Unsupported("property D(b) has no sampled check".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSolution {
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub a: BigInt,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub b: BigInt,
    /// Both defining inequalities re-checked after the search.
    pub verified: bool,
}

/// Pair for `Phi = c t^(-1/m)` and base `b`: `A >= a_min` and the largest
/// `B` with `b^-A < c b^(-B/m)`; then also `c b^(-B/m) b^(-1/m) <= b^-A`.
pub fn solve_pair_lemuren(c: &BigRational, m: u32, b: u32, a_min: i64) -> Result<PairSolution> {
    if !c.is_positive() || c > &BigRational::one() {
        return invalid("needs 0 < c <= 1");
    }
    if m < 1 || b < 2 {
        return invalid("needs m >= 1 and b >= 2");
    }
    let bb = BigInt::from(b);
    let cn = num_traits::pow(c.numer().clone(), m as usize);
    let cd = num_traits::pow(c.denom().clone(), m as usize);
    let mut a = a_min.max(1);
    loop {
        // b^-A < c b^(-B/m)  <=>  b^B cd < cn b^(mA)
        let x = &cn * num_traits::pow(bb.clone(), (m as i64 * a) as usize);
        let mut big_b: i64 = -1;
        let mut pw = BigInt::one();
        loop {
            if &pw * &cd < x {
                big_b += 1;
                pw *= &bb;
            } else {
                break;
            }
        }
        if big_b >= 1 {
            let pb = num_traits::pow(bb.clone(), big_b as usize);
            let lower_ok = &pb * &cd < x;
            let upper_ok = &pb * &bb * &cd >= x;
            return Ok(PairSolution { a: a.into(), b: big_b.into(), verified: lower_ok && upper_ok });
        }
        a += 1;
    }
}

/// Pair for `Phi = c t^(-tau)` with irrational `tau`:
/// `(1 - eps) c b^(-B tau) < b^-A <= c b^(-B tau)` and `A, B >= size_min`.
/// Returns the pair with the smallest such `B`.
pub fn solve_pair_lemur(c: &Real, tau: &Real, b: u32, eps: &BigRational, size_min: i64) -> Result<PairSolution> {
    if tau.exact().is_some() {
        return invalid("tau must be irrational");
    }
    let surd = tau.as_surd().ok_or_else(|| Error::InvalidArgument("tau must be a quadratic surd".into()))?;
    if !eps.is_positive() || eps >= &BigRational::one() {
        return invalid("needs 0 < eps < 1");
    }
    if b < 2 {
        return invalid("needs b >= 2");
    }
    if !c.is_positive_certain() {
        return invalid("needs c > 0");
    }
    let ln_b = Real::int(b as i64).ln();
    // X_B = B tau - log_b c; A = ceil(X_B); need A - X_B < delta
    let log_b_c = c.clone().ln().div(ln_b.clone());
    let delta = Real::Rat(BigRational::one() - eps).ln().neg().div(ln_b);
    let delta_f = delta.to_f64();

    // three-gap bound: once ||q_{k-1} tau|| < delta, any q_k + q_{k-1} consecutive B contain a hit
    let cf = cf_expand(&CfInput::Surd(surd), 64)?;
    let tf = tau.to_f64();
    let mut window: i64 = 1 << 40;
    for w in cf.convergents.windows(2) {
        let (p, q) = (w[0].0.to_f64().unwrap_or(f64::MAX), w[0].1.to_f64().unwrap_or(f64::MAX));
        if (q * tf - p).abs() < delta_f / 2.0 {
            window = (w[1].1.to_i64().unwrap_or(i64::MAX / 4) + w[0].1.to_i64().unwrap_or(i64::MAX / 4)).max(1);
            break;
        }
    }
    let start = size_min.max(1);
    let limit = start.saturating_add(window.saturating_mul(2)).saturating_add(64);
    let mut big_b = start;
    while big_b <= limit {
        let x = Real::int(big_b).mul(tau.clone()).sub(log_b_c.clone());
        let a = ceil_real(&x)?;
        if a >= BigInt::from(size_min) {
            let gap = Real::from_big(&a).sub(x);
            if cmp_real(&gap, &delta, DEFAULT_BUDGET_BITS)? == Ordering::Less {
                let verified = verify_lemur(c, tau, b, eps, &a, big_b)?;
                return Ok(PairSolution { a, b: big_b.into(), verified });
            }
        }
        big_b += 1;
    }
    Err(Error::Budget(format!("no pair found for B in [{start}, {limit}]")))
}

fn ceil_real(x: &Real) -> Result<BigInt> {
    let mut w = 64;
    loop {
        let e = x.raw(w);
        let lo = e.lo.ceil().to_integer();
        let hi = e.hi.ceil().to_integer();
        if lo == hi && !e.lo.denom().is_one() {
            return Ok(lo);
        }
        if w > DEFAULT_BUDGET_BITS {
            return Err(Error::Indeterminate(format!("ceiling of {x}")));
        }
        w *= 2;
    }
}

fn verify_lemur(c: &Real, tau: &Real, b: u32, eps: &BigRational, a: &BigInt, big_b: i64) -> Result<bool> {
    let bb = Real::int(b as i64);
    let target = c.clone().mul(bb.clone().pow(Real::int(-big_b).mul(tau.clone())));
    let lhs = bb.pow(Real::Rat(BigRational::from_integer(-a)));
    let upper = cmp_real(&lhs, &target, DEFAULT_BUDGET_BITS)? != Ordering::Greater;
    let lower = cmp_real(&Real::Rat(BigRational::one() - eps).mul(target), &lhs, DEFAULT_BUDGET_BITS)? == Ordering::Less;
    Ok(upper && lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    fn desk() -> ApproxFn {
        ApproxFn::parse_descriptor("power:c=9/10,tau=1/2").unwrap()
    }

    #[test]
    fn eval_exact_points() {
        assert_eq!(phi_eval(&desk(), &rat(4, 1), 30).unwrap(), Interval::point(rat(9, 20)));
        assert_eq!(phi_eval(&desk(), &rat(64, 1), 30).unwrap(), Interval::point(rat(9, 80)));
        let f = ApproxFn::parse_descriptor("power:c=1/2,tau=sqrt(2)/2").unwrap();
        let e = phi_eval(&f, &rat(2, 1), 40).unwrap();
        let oracle = 0.5 * 2f64.powf(-std::f64::consts::FRAC_1_SQRT_2);
        assert!(e.lo_f64() <= oracle + 1e-15 && e.hi_f64() >= oracle - 1e-15);
        assert!(e.narrower_than(40));
        assert!(phi_eval(&desk(), &rat(1, 2), 30).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let f = ApproxFn::parse_descriptor("power:c=1/2,tau=sqrt(2)/2").unwrap();
        assert_eq!(ApproxFn::parse_descriptor(&f.descriptor()).unwrap(), f);
        assert!(ApproxFn::parse_descriptor("power:c=-1,tau=1/2").is_err());
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(certify(&desk(), &Property::D1, 2).unwrap().verdict, Verdict::AnalyticPass);
        let f = ApproxFn::parse_descriptor("power:c=1/2,tau=1/3").unwrap();
        let p = Property::D3Prime { b: 3, r: parse_real("3^(-1/3)").unwrap() };
        assert_eq!(certify(&f, &p, 3).unwrap().verdict, Verdict::AnalyticPass);
        let g = ApproxFn::parse_descriptor("power:c=1,tau=1").unwrap();
        assert_eq!(certify(&g, &Property::D2, 2).unwrap().verdict, Verdict::AnalyticFail);
        assert_eq!(certify(&g, &Property::D1, 2).unwrap().verdict, Verdict::AnalyticPass);
        let h = ApproxFn::parse_descriptor("power:c=1,tau=1/2").unwrap();
        assert_eq!(certify(&h, &Property::D1, 2).unwrap().verdict, Verdict::AnalyticFail);
    }

    #[test]
    fn lemuren_example() {
        let s = solve_pair_lemuren(&rat(1, 2), 2, 3, 3).unwrap();
        assert_eq!((s.a, s.b), (BigInt::from(3), BigInt::from(4)));
        assert!(s.verified);
        let s = solve_pair_lemuren(&rat(1, 1), 1, 2, 5).unwrap();
        assert_eq!((s.a.clone(), s.b.clone()), (BigInt::from(5), BigInt::from(4)));
        assert!(s.verified);
    }

    #[test]
    fn lemur_examples() {
        let tau = parse_real("sqrt(2)/2").unwrap();
        let s = solve_pair_lemur(&Real::rat(1, 2), &tau, 2, &rat(1, 5), 1).unwrap();
        assert!(s.verified);
        assert_eq!((s.a.clone(), s.b.clone()), (BigInt::from(2), BigInt::from(1)));
        assert!(verify_lemur(&Real::rat(1, 2), &tau, 2, &rat(1, 5), &BigInt::from(6), 7).unwrap());
        let s = solve_pair_lemur(&Real::rat(1, 2), &tau, 2, &rat(1, 100), 5).unwrap();
        assert!(s.verified && s.b >= BigInt::from(5));
        assert!(solve_pair_lemur(&Real::rat(1, 2), &Real::rat(1, 2), 2, &rat(1, 5), 1).is_err());
    }

    #[test]
    fn tabulated_basics() {
        let f = ApproxFn::tabulated_from_json(r#"{"knots": [["1","9/10"],["4","9/20"],["16","9/40"]]}"#).unwrap();
        assert_eq!(phi_eval(&f, &rat(4, 1), 10).unwrap(), Interval::point(rat(9, 20)));
        let e = phi_eval(&f, &rat(5, 1), 10).unwrap();
        assert_eq!((e.lo, e.hi), (rat(9, 40), rat(9, 20)));
        assert!(phi_eval(&f, &rat(17, 1), 10).is_err());
        let c = certify(&f, &Property::D3, 2).unwrap();
        assert_eq!(c.verdict, Verdict::SampledPass);
    }
}
