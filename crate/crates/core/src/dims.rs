//! Dimension bounds: the Falconer evaluator and the closed-form bounds.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::digits::FreeBlock;
use crate::error::{invalid, Error, Result};
use crate::numkit::interval::{ln2, ln_point};
use crate::numkit::{fmt_real, lcm_upto, Interval, QuadSurd, Real};
use crate::par::{map_chunks, Exec};

const BITS: u32 = 64;

/// One level of an interval construction: `log2 P_n` and `log2 eps_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalconerLevel {
    pub log2_p: Interval,
    pub log2_eps: Interval,
}

fn log2_of(x: &BigRational) -> Interval {
    let l = ln_point(x, BITS);
    let d = ln2(BITS);
    l.div(&d).expect("ln 2 > 0")
}

impl FalconerLevel {
    pub fn from_exact(p: &BigInt, eps: &BigRational) -> Result<Self> {
        if !p.is_positive() || !eps.is_positive() {
            return invalid("P_n and eps_n must be positive");
        }
        Ok(FalconerLevel { log2_p: log2_of(&BigRational::from_integer(p.clone())), log2_eps: log2_of(eps) })
    }

    pub fn from_log2(log2_p: BigRational, log2_eps: BigRational) -> Self {
        FalconerLevel { log2_p: Interval::point(log2_p), log2_eps: Interval::point(log2_eps) }
    }

    /// `P = 2^(hi-lo+1)`, `eps = 2^-hi - 2^-p` for a free digit block.
    pub fn from_block(b: &FreeBlock) -> Result<Self> {
        if b.p <= b.hi || b.hi < b.lo {
            return invalid("free block must be followed by at least one fixed digit");
        }
        let k = b.p - b.hi;
        let one = BigRational::one();
        let frac = &one - BigRational::new(one.numer().clone(), BigInt::one() << k as usize);
        let tail = log2_of(&frac);
        let hi = BigRational::from_integer(BigInt::from(b.hi));
        Ok(FalconerLevel {
            log2_p: Interval::point(BigRational::from_integer(BigInt::from(b.hi - b.lo + 1))),
            log2_eps: Interval::point(-hi).add(&tail),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalconerReport {
    /// Minimum over the tail window: the finite-depth stand-in for the liminf.
    pub value: Interval,
    /// Minimum over all `n >= 2`.
    pub global_min: Interval,
    /// Ratio at `n = 2, 3, ..`.
    pub trace: Vec<Interval>,
    pub window: usize,
    /// Window values spread by less than `10^-3`.
    pub tail_stable: bool,
}

pub const TAIL_WINDOW: usize = 10;

fn imin(a: Interval, b: &Interval) -> Interval {
    Interval::new(a.lo.min(b.lo.clone()), a.hi.min(b.hi.clone()))
}

/// `log(P_1 .. P_{n-1}) / -log(P_n eps_n)` along the construction.
pub fn falconer_lower_bound(levels: &[FalconerLevel]) -> Result<FalconerReport> {
    if levels.len() < 2 {
        return invalid("need at least two levels");
    }
    for (n, l) in levels.iter().enumerate() {
        if l.log2_p.lo.is_negative() {
            return invalid(format!("P_{} < 1", n + 1));
        }
        let s = l.log2_p.add(&l.log2_eps);
        if !s.hi.is_negative() {
            return invalid(format!("P_{0} eps_{0} >= 1 (or undecided)", n + 1));
        }
    }
    for (n, w) in levels.windows(2).enumerate() {
        if w[1].log2_eps.hi >= w[0].log2_eps.lo {
            return invalid(format!("eps not strictly decreasing at n = {}", n + 2));
        }
    }
    let mut acc = Interval::point(BigRational::zero());
    let mut trace = Vec::with_capacity(levels.len() - 1);
    for n in 1..levels.len() {
        acc = acc.add(&levels[n - 1].log2_p);
        let den = levels[n].log2_p.add(&levels[n].log2_eps).neg();
        trace.push(acc.div(&den).expect("positive denominator"));
    }
    let window = TAIL_WINDOW.min(trace.len());
    let tail = &trace[trace.len() - window..];
    let value = tail[1..].iter().fold(tail[0].clone(), imin);
    let global_min = trace[1..].iter().fold(trace[0].clone(), imin);
    let hi = tail.iter().map(|x| x.hi.clone()).max().unwrap();
    let spread = &hi - &value.lo;
    Ok(FalconerReport { value, global_min, trace, window, tail_stable: spread < BigRational::new(1.into(), 1000.into()) })
}

/// Exact `(P_n, eps_n)` input.
pub fn falconer_exact(p: &[BigInt], eps: &[BigRational]) -> Result<FalconerReport> {
    if p.len() != eps.len() {
        return invalid("P and eps lengths differ");
    }
    let levels = p.iter().zip(eps).map(|(p, e)| FalconerLevel::from_exact(p, e)).collect::<Result<Vec<_>>>()?;
    falconer_lower_bound(&levels)
}

/// `log2 P_n = (g2 - g1) h_n`, `log2 eps_n = -g2 h_n`, `h_n = (g2 m)^(n-1)`.
pub fn gs0_levels(m: usize, g1: &BigRational, g2: &BigRational, depth: usize) -> Vec<FalconerLevel> {
    let growth = g2 * BigRational::from_integer(m.into());
    let mut h = BigRational::one();
    let mut out = Vec::with_capacity(depth);
    for _ in 0..depth {
        out.push(FalconerLevel::from_log2((g2 - g1) * &h, -(g2 * &h)));
        h *= &growth;
    }
    out
}

// ----- closed forms over Q(sqrt d) -----

fn s_rat(x: BigRational) -> QuadSurd {
    QuadSurd::from_rational(x)
}

fn s_int(n: i64) -> QuadSurd {
    s_rat(BigRational::from_integer(n.into()))
}

fn smin(a: QuadSurd, b: QuadSurd) -> Result<QuadSurd> {
    Ok(if a.cmp_exact(&b)? == Ordering::Greater { b } else { a })
}

/// `eq01`: `2(g2-g1)/(g1(g2 m-1)) + sum_{i=3}^m min{(m(g2-g1)+i-2)/(2(m g2-1)), ((i-1)g2-g1)/(g1(m g2-1))}`,
/// and `eq02 = m(g2-g1)/(g1(g2 m-1))`.
pub fn ohlele_surd(m: usize, g1: &QuadSurd, g2: &QuadSurd) -> Result<(QuadSurd, QuadSurd)> {
    if m < 2 {
        return invalid("m must be >= 2");
    }
    if g1.cmp_rational(&BigRational::one()) != Ordering::Greater {
        return invalid("gamma1 > 1 violated");
    }
    if g2.cmp_exact(g1)? == Ordering::Less {
        return invalid("gamma2 >= gamma1 violated");
    }
    let mm = s_int(m as i64);
    let diff = g2.sub(g1)?;
    let mg2m1 = mm.mul(g2)?.sub(&s_int(1))?;
    let den = g1.mul(&mg2m1)?;
    let base = diff.div(&den)?;
    let mut eq01 = base.scale(&BigRational::from_integer(2.into()));
    for i in 3..=m as i64 {
        let a = mm.mul(&diff)?.add(&s_int(i - 2))?.div(&mg2m1.scale(&BigRational::from_integer(2.into())))?;
        let b = s_int(i - 1).mul(g2)?.sub(g1)?.div(&den)?;
        eq01 = eq01.add(&smin(a, b)?)?;
    }
    let eq02 = base.scale(&BigRational::from_integer(m.into()));
    Ok((eq01, eq02))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OhleleReport {
    pub m: usize,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub gamma1: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub gamma2: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub eq01: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub eq02: BigRational,
}

pub fn ohlele_bounds(m: usize, g1: &BigRational, g2: &BigRational) -> Result<OhleleReport> {
    let (a, b) = ohlele_surd(m, &s_rat(g1.clone()), &s_rat(g2.clone()))?;
    Ok(OhleleReport {
        m,
        gamma1: g1.clone(),
        gamma2: g2.clone(),
        eq01: a.as_rational().expect("rational inputs").clone(),
        eq02: b.as_rational().expect("rational inputs").clone(),
    })
}

fn eq01_f64(m: usize, g1: f64, g2: f64) -> f64 {
    let mf = m as f64;
    let den = g1 * (mf * g2 - 1.0);
    let mut s = 2.0 * (g2 - g1) / den;
    for i in 3..=m {
        let i = i as f64;
        let a = (mf * (g2 - g1) + i - 2.0) / (2.0 * (mf * g2 - 1.0));
        let b = ((i - 1.0) * g2 - g1) / den;
        s += a.min(b);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HddReport {
    pub m: usize,
    pub gamma2_opt: QuadSurd,
    pub gamma2_enclosure: Interval,
    pub bound: QuadSurd,
    pub bound_enclosure: Interval,
    /// `(m-1)x^2 - 2mx + m(1-m)` at the optimum, exactly.
    pub residual: QuadSurd,
    pub grid_argmax: f64,
    pub grid_max: f64,
}

fn hdd_objective(m: usize, x: f64) -> f64 {
    let mf = m as f64;
    ((mf - 1.0) * x - mf) / (x * x + (mf - 1.0 / mf) * x - 1.0)
}

/// Golden-section refinement of a unimodal `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..iters {
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    (a + b) / 2.0
}

/// Grid argmax on `(lo, hi)` with `n` interior points, smallest argument on ties.
fn grid_max(f: impl Fn(f64) -> f64 + Sync + Send, lo: f64, hi: f64, n: u64) -> (f64, f64) {
    let step = (hi - lo) / (n + 1) as f64;
    let parts = map_chunks(1, n, 1024, Exec::default(), |a, b| {
        let mut best = (f64::NEG_INFINITY, 0u64);
        for k in a..=b {
            let v = f(lo + step * k as f64);
            if v > best.0 {
                best = (v, k);
            }
        }
        best
    });
    let (_, k) = parts.into_iter().fold((f64::NEG_INFINITY, 0u64), |acc, x| if x.0 > acc.0 { x } else { acc });
    let a = lo + step * (k.max(1) - 1) as f64;
    let b = (lo + step * (k + 1) as f64).min(hi);
    let x = golden_max(&f, a.max(lo), b, 80);
    (x, f(x))
}

pub const GRID_POINTS: u64 = 10_000;

/// `gamma2 = (m + sqrt(m(m^2-m+1)))/(m-1)` and the bound it gives.
pub fn hdd_bound(m: usize) -> Result<HddReport> {
    if m < 2 {
        return invalid("m must be >= 2");
    }
    let mi = m as i64;
    let s = QuadSurd::sqrt_of(&BigInt::from(mi * (mi * mi - mi + 1)))?;
    let g = s.add(&s_int(mi))?.scale(&BigRational::new(1.into(), (mi - 1).into()));
    let coef = s_rat(BigRational::from_integer(mi.into()) - BigRational::new(1.into(), mi.into()));
    let den = g.mul(&g)?.add(&coef.mul(&g)?)?.sub(&s_int(1))?;
    let bound = s.div(&den)?;
    let residual = s_int(mi - 1).mul(&g.mul(&g)?)?.sub(&s_int(2 * mi).mul(&g)?)?.add(&s_int(mi * (1 - mi)))?;
    let lo = m as f64 / (m as f64 - 1.0);
    let (gx, gv) = grid_max(|x| hdd_objective(m, x), lo, 8.0 * (m as f64 + 1.0), GRID_POINTS);
    Ok(HddReport {
        m,
        gamma2_enclosure: g.enclose(BITS),
        bound_enclosure: bound.enclose(BITS),
        gamma2_opt: g,
        bound,
        residual,
        grid_argmax: gx,
        grid_max: gv,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosinusReport {
    pub m: usize,
    pub gamma1: QuadSurd,
    pub gamma2: QuadSurd,
    pub value: Interval,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub reference: BigRational,
    pub ratio: Interval,
}

/// `eq01` at `gamma2 = sqrt m`, `gamma1 = gamma2/m + 1 + 10^-6`, against `3m/8`.
pub fn cosinus_check(m: usize) -> Result<CosinusReport> {
    if m < 8 {
        return invalid("cosinus check needs m >= 8");
    }
    let g2 = QuadSurd::sqrt_of(&BigInt::from(m))?;
    let g1 = g2
        .scale(&BigRational::new(1.into(), m.into()))
        .add(&s_rat(BigRational::one() + BigRational::new(1.into(), 1_000_000.into())))?;
    let (eq01, _) = ohlele_surd(m, &g1, &g2)?;
    let value = eq01.enclose(BITS);
    let reference = BigRational::new((3 * m).into(), 8.into());
    let ratio = value.scale(&reference.recip());
    Ok(CosinusReport { m, gamma1: g1, gamma2: g2, value, reference, ratio })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeidesReport {
    pub m: usize,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub lambda: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub gamma1: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub gamma2: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub bound: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub reference: BigRational,
}

/// `gamma1 = lambda + 1`, best `eq01` over `gamma2` in `(lambda+1, min{m lambda, lambda^2})`.
pub fn beides_bound(m: usize, lambda: &BigRational) -> Result<BeidesReport> {
    if m < 2 {
        return invalid("m must be >= 2");
    }
    let phi = QuadSurd::new(1.into(), 1.into(), 5.into(), 2.into())?;
    if phi.cmp_rational(lambda) != Ordering::Less {
        return Err(Error::Unsupported(format!("lambda = {lambda} is not above the golden ratio")));
    }
    let g1 = lambda + BigRational::one();
    let top = (lambda * BigRational::from_integer(m.into())).min(lambda * lambda);
    if top <= g1 {
        return Err(Error::Unsupported(format!("empty gamma2 range for m = {m}, lambda = {lambda}")));
    }
    let (lo, hi) = (g1.to_f64().unwrap(), top.to_f64().unwrap());
    let g1f = lo;
    let (x, _) = grid_max(|x| eq01_f64(m, g1f, x), lo, hi, GRID_POINTS);
    // snap to a dyadic rational strictly inside the range and evaluate exactly
    let scale = BigInt::one() << 40;
    let mut g2 = BigRational::new(BigRational::from_float(x).unwrap().numer() * &scale / BigRational::from_float(x).unwrap().denom(), scale);
    if g2 <= g1 {
        g2 = (&g1 * BigRational::from_integer(3.into()) + &top) / BigRational::from_integer(4.into());
    }
    if g2 >= top {
        g2 = (&g1 + &top * BigRational::from_integer(3.into())) / BigRational::from_integer(4.into());
    }
    let rep = ohlele_bounds(m, &g1, &g2)?;
    Ok(BeidesReport {
        m,
        lambda: lambda.clone(),
        gamma1: g1,
        gamma2: g2,
        bound: rep.eq01,
        reference: BigRational::from_integer(m.into()) / (lambda * BigRational::from_integer(2.into())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimBoundReport {
    pub formula: String,
    pub inputs: Vec<(String, String)>,
    pub value: Interval,
    pub exact: Option<String>,
}

fn report(formula: &str, inputs: Vec<(&str, String)>, e: Real) -> Result<DimBoundReport> {
    let value = e.enclose(40)?;
    Ok(DimBoundReport {
        formula: formula.into(),
        inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        value,
        exact: Some(fmt_real(&e)),
    })
}

/// `sigma(m, b)`: `b^(-1/m)` for good digit sets, else `b^(-(b+2)/m) (b-1)^-3 Gamma_b^-1`.
pub fn sigma(m: usize, b: u32, good: bool) -> Result<DimBoundReport> {
    if m < 1 || b < 2 {
        return invalid("need m >= 1 and b >= 2");
    }
    let base = Real::int(b as i64);
    let inputs = vec![("m", m.to_string()), ("b", b.to_string()), ("good", good.to_string())];
    if good {
        return report("sigma", inputs, base.pow(Real::rat(-1, m as i64)));
    }
    let k = num_traits::pow(BigInt::from(b - 1), 3) * lcm_upto(b as u64)?;
    let e = base.pow(Real::rat(-(b as i64 + 2), m as i64)).mul(Real::Rat(BigRational::new(1.into(), k)));
    report("sigma", inputs, e)
}

/// `Omega(b, R)`: `R` for good digit sets, else `R^(b+2) (b-1)^-3 Gamma_b^-1`.
pub fn omega_cantor(b: u32, r: &Real, good: bool) -> Result<DimBoundReport> {
    if b < 2 {
        return invalid("b must be >= 2");
    }
    if !r.is_positive_certain() {
        return invalid("R must be positive");
    }
    let inputs = vec![("b", b.to_string()), ("R", fmt_real(r)), ("good", good.to_string())];
    if good {
        return report("omega", inputs, r.clone());
    }
    let k = num_traits::pow(BigInt::from(b - 1), 3) * lcm_upto(b as u64)?;
    let e = r.clone().pow(Real::int(b as i64 + 2)).mul(Real::Rat(BigRational::new(1.into(), k)));
    report("omega", inputs, e)
}

/// `m / (tau + 1)`.
pub fn lemma_rem(m: usize, tau: &BigRational) -> Result<DimBoundReport> {
    if !tau.is_positive() {
        return invalid("tau must be positive");
    }
    let v = BigRational::from_integer(m.into()) / (tau + BigRational::one());
    report("rem", vec![("m", m.to_string()), ("tau", tau.to_string())], Real::Rat(v))
}

/// `m (1 - gamma)`.
pub fn packing(m: usize, gamma: &BigRational) -> Result<DimBoundReport> {
    if !gamma.is_positive() || gamma >= &BigRational::one() {
        return invalid("gamma must lie in (0, 1)");
    }
    let v = BigRational::from_integer(m.into()) * (BigRational::one() - gamma);
    report("packing", vec![("m", m.to_string()), ("gamma", gamma.to_string())], Real::Rat(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    #[test]
    fn falconer_constant_two() {
        let levels: Vec<_> = (1..=40).map(|n| FalconerLevel::from_log2(rat(1, 1), rat(-2 * n, 1))).collect();
        let r = falconer_lower_bound(&levels).unwrap();
        // closed form (n-1)/(2n-1)
        assert_eq!(r.trace[0], Interval::point(rat(1, 3)));
        assert_eq!(r.value, Interval::point(rat(30, 61)));
        assert!((r.value.mid_f64() - 0.5).abs() < 1e-2);
    }

    #[test]
    fn falconer_gs0() {
        let r = falconer_lower_bound(&gs0_levels(3, &rat(16, 5), &rat(4, 1), 40)).unwrap();
        assert!((r.value.mid_f64() - 0.8 / 35.2).abs() < 1e-3);
        assert!(r.tail_stable);
    }

    #[test]
    fn falconer_no_branching() {
        let levels: Vec<_> = (1..=5).map(|n| FalconerLevel::from_log2(rat(0, 1), rat(-n, 1))).collect();
        assert_eq!(falconer_lower_bound(&levels).unwrap().value, Interval::point(rat(0, 1)));
        let bad = vec![FalconerLevel::from_log2(rat(2, 1), rat(-1, 1)); 2];
        assert!(falconer_lower_bound(&bad).is_err());
    }

    #[test]
    fn falconer_exact_matches_log_form() {
        let p: Vec<BigInt> = (0..12).map(|_| BigInt::from(2)).collect();
        let e: Vec<BigRational> = (1..=12).map(|n| BigRational::new(1.into(), BigInt::one() << (2 * n))).collect();
        let r = falconer_exact(&p, &e).unwrap();
        assert!(r.value.contains(&rat(2, 5)) && r.value.width().to_f64().unwrap() < 1e-12);
    }

    #[test]
    fn ohlele_examples() {
        let r = ohlele_bounds(3, &rat(16, 5), &rat(4, 1)).unwrap();
        assert_eq!(r.eq02, rat(15, 220));
        assert_eq!(r.eq01, rat(2, 11));
        let r = ohlele_bounds(2, &rat(2, 1), &rat(4, 1)).unwrap();
        assert_eq!((r.eq01.clone(), r.eq02), (rat(2, 7), rat(2, 7)));
        assert_eq!(ohlele_bounds(3, &rat(2, 1), &rat(2, 1)).unwrap().eq02, rat(0, 1));
        assert!(ohlele_bounds(3, &rat(1, 1), &rat(2, 1)).is_err());
    }

    fn hdd_oracle(m: f64) -> (f64, f64) {
        let s = (m * (m * m - m + 1.0)).sqrt();
        let g = (m + s) / (m - 1.0);
        (g, s / (g * g + (m - 1.0 / m) * g - 1.0))
    }

    #[test]
    fn hdd_values() {
        for m in [2usize, 3, 7] {
            let r = hdd_bound(m).unwrap();
            let (g, b) = hdd_oracle(m as f64);
            assert!((r.gamma2_enclosure.mid_f64() - g).abs() < 1e-9);
            assert!((r.bound_enclosure.mid_f64() - b).abs() < 1e-9);
            assert!(r.residual.is_zero());
            assert!((r.grid_argmax - g).abs() < 1e-4, "{} vs {g}", r.grid_argmax);
        }
        assert!((hdd_bound(2).unwrap().gamma2_enclosure.mid_f64() - (2.0 + 6f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn cosinus_bands() {
        assert!(cosinus_check(8).unwrap().value.lo.is_positive());
        let r = cosinus_check(50).unwrap().ratio.mid_f64();
        assert!((0.6..=1.1).contains(&r), "{r}");
        let r = cosinus_check(200).unwrap().ratio.mid_f64();
        assert!((0.75..=1.05).contains(&r), "{r}");
    }

    #[test]
    fn beides_examples() {
        let r = beides_bound(10, &rat(10, 1)).unwrap();
        assert!((r.bound.to_f64().unwrap() - 0.409).abs() < 2e-3, "{}", r.bound.to_f64().unwrap());
        assert_eq!(r.reference, rat(1, 2));
        assert!(beides_bound(2, &rat(2, 1)).unwrap().bound.is_positive());
        assert!(matches!(beides_bound(2, &rat(8, 5)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn constants() {
        let s = sigma(2, 3, true).unwrap();
        assert!((s.value.mid_f64() - 3f64.powf(-0.5)).abs() < 1e-9);
        let r = crate::numkit::parse_real("3^(-1/2)").unwrap();
        let o = omega_cantor(3, &r, false).unwrap();
        assert!((o.value.mid_f64() - 3f64.powf(-2.5) / 16.0).abs() < 1e-9);
        assert_eq!(lemma_rem(2, &rat(3, 1)).unwrap().value, Interval::point(rat(1, 2)));
        assert_eq!(packing(3, &rat(1, 3)).unwrap().value, Interval::point(rat(2, 1)));
    }
}
