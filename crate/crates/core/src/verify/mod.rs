//! Brute-force verification of `psi_x(Q) = min_{q <= Q} |q x|` and the
//! claims built on it.

mod kernel;
pub mod norm;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::vector::resolution;
use crate::construct::ConstructedVector;
use crate::error::{invalid, Error, Result};
use crate::numkit::interval::{ln_point, rational_root};
use crate::numkit::{dist_to_nearest_int, Interval};
use crate::par::{map_chunks, Exec, DEFAULT_CHUNK};
use crate::phi::{phi_eval, ApproxFn};

use kernel::Kernel;
pub use norm::Norm;

pub const DEFAULT_Q_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub exec: Exec,
    pub chunk: u64,
    pub q_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { exec: Exec::default(), chunk: DEFAULT_CHUNK, q_budget: DEFAULT_Q_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiResult {
    pub q: u64,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub lower: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub upper: BigRational,
    pub argmin_q: u64,
    pub exact: bool,
}

impl PsiResult {
    pub fn enclosure(&self) -> Interval {
        Interval::new(self.lower.clone(), self.upper.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub q: u64,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub lower: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub upper: BigRational,
    pub argmin_q: u64,
}

fn guard(vec: &ConstructedVector, q: u64, opts: &VerifyOptions) -> Result<()> {
    if q == 0 {
        return invalid("Q must be positive");
    }
    if q > opts.q_budget {
        return Err(Error::Budget(format!("Q = {q} exceeds q_budget = {}", opts.q_budget)));
    }
    vec.ensure_valid(&BigInt::from(q))
}

fn is_exact(lo: &BigRational, hi: &BigRational) -> bool {
    hi - lo < resolution()
}

#[derive(Clone)]
struct Best {
    key_u: BigUint,
    q_u: u64,
    key_l: BigUint,
}

fn better(a: Best, b: Best) -> Best {
    let (key_u, q_u) = if b.key_u < a.key_u || (b.key_u == a.key_u && b.q_u < a.q_u) { (b.key_u, b.q_u) } else { (a.key_u, a.q_u) };
    Best { key_u, q_u, key_l: a.key_l.min(b.key_l) }
}

fn best_on(k: &Kernel, lo: u64, hi: u64) -> Best {
    let mut st = k.state_at(lo);
    let (u, l) = k.keys(&st);
    let mut best = Best { key_u: u, q_u: lo, key_l: l };
    for _ in lo..hi {
        k.advance(&mut st);
        let (u, l) = k.keys(&st);
        if u < best.key_u {
            best.key_u = u;
            best.q_u = st.q;
        }
        if l < best.key_l {
            best.key_l = l;
        }
    }
    best
}

/// `psi(Q)` under `norm`, tail-widened, with the smallest minimising `q`.
pub fn psi(vec: &ConstructedVector, q: u64, norm: &Norm, opts: &VerifyOptions) -> Result<PsiResult> {
    guard(vec, q, opts)?;
    let k = Kernel::new(vec, norm)?;
    let parts = map_chunks(1, q, opts.chunk, opts.exec, |a, b| best_on(&k, a, b));
    let best = parts.into_iter().reduce(better).unwrap();
    let (lower, upper) = k.value(&best.key_u, &best.key_l);
    Ok(PsiResult { q, exact: is_exact(&lower, &upper), lower, upper, argmin_q: best.q_u })
}

/// `(q, key_u, key_l, argmin)` at each change of either running minimum.
fn sweep_keys(k: &Kernel, qmax: u64, opts: &VerifyOptions) -> Vec<(u64, BigUint, BigUint, u64)> {
    let parts = map_chunks(1, qmax, opts.chunk, opts.exec, |a, b| {
        let mut out: Vec<(u64, BigUint, BigUint)> = Vec::new();
        let mut st = k.state_at(a);
        let mut best: Option<(BigUint, BigUint)> = None;
        loop {
            let (u, l) = k.keys(&st);
            let improved = match &best {
                None => true,
                Some((bu, bl)) => &u < bu || &l < bl,
            };
            if improved {
                let (nu, nl) = match best.take() {
                    None => (u.clone(), l.clone()),
                    Some((bu, bl)) => (bu.min(u.clone()), bl.min(l.clone())),
                };
                best = Some((nu, nl));
                out.push((st.q, u, l));
            }
            if st.q == b {
                break;
            }
            k.advance(&mut st);
        }
        out
    });
    let mut res = Vec::new();
    let mut cur: Option<(BigUint, BigUint, u64)> = None;
    for (q, u, l) in parts.into_iter().flatten() {
        match &mut cur {
            None => {
                res.push((q, u.clone(), l.clone(), q));
                cur = Some((u, l, q));
            }
            Some((bu, bl, arg)) => {
                let mut changed = false;
                if u < *bu {
                    *bu = u;
                    *arg = q;
                    changed = true;
                }
                if l < *bl {
                    *bl = l;
                    changed = true;
                }
                if changed {
                    res.push((q, bu.clone(), bl.clone(), *arg));
                }
            }
        }
    }
    res
}

/// Full piecewise-constant profile of `psi` on `[1, qmax]`.
pub fn psi_sweep(vec: &ConstructedVector, qmax: u64, norm: &Norm, opts: &VerifyOptions) -> Result<Vec<SweepPoint>> {
    guard(vec, qmax, opts)?;
    let k = Kernel::new(vec, norm)?;
    Ok(sweep_keys(&k, qmax, opts)
        .into_iter()
        .map(|(q, u, l, arg)| {
            let (lower, upper) = k.value(&u, &l);
            SweepPoint { q, lower, upper, argmin_q: arg }
        })
        .collect())
}

/// Value of the sweep profile at `q`.
pub fn sweep_at(points: &[SweepPoint], q: u64) -> Option<&SweepPoint> {
    let i = points.partition_point(|p| p.q <= q);
    if i == 0 {
        None
    } else {
        Some(&points[i - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Violation {
    pub q: u64,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub psi_upper: BigRational,
    pub indeterminate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C1Report {
    pub q_from: u64,
    pub q_to: u64,
    /// First entries only; see the counts for totals.
    pub violations: Vec<C1Violation>,
    pub violation_count: u64,
    pub indeterminate_count: u64,
    /// Smallest `Q_0 >= q_from` with no failure on `[Q_0, q_to]`.
    pub observed_q0: u64,
}

impl C1Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.indeterminate_count == 0
    }
}

const MAX_LISTED: usize = 1000;

/// `psi(Q).upper < Phi(Q)` for every integer `Q` in `[q_from, q_to]`.
pub fn check_c1(
    vec: &ConstructedVector,
    f: &ApproxFn,
    q_from: u64,
    q_to: u64,
    norm: &Norm,
    opts: &VerifyOptions,
) -> Result<C1Report> {
    if q_from == 0 || q_from > q_to {
        return invalid("need 1 <= Q_from <= Q_to");
    }
    guard(vec, q_to, opts)?;
    let k = Kernel::new(vec, norm)?;
    let pts = sweep_keys(&k, q_to, opts);
    // segments of constant upper value
    let mut segs: Vec<(u64, u64, BigRational)> = Vec::new();
    for (i, (q, u, l, _)) in pts.iter().enumerate() {
        let upper = k.value(u, l).1;
        let end = pts.get(i + 1).map(|p| p.0 - 1).unwrap_or(q_to);
        match segs.last_mut() {
            Some(s) if s.2 == upper => s.1 = end,
            _ => segs.push((*q, end, upper)),
        }
    }
    let decide = |q: u64, x: &BigRational| -> Option<C1Violation> {
        match f.exceeds(&BigRational::from_integer(q.into()), x) {
            Ok(true) => None,
            Ok(false) => Some(C1Violation { q, psi_upper: x.clone(), indeterminate: false }),
            Err(_) => Some(C1Violation { q, psi_upper: x.clone(), indeterminate: true }),
        }
    };
    let monotone = f.is_non_increasing();
    let mut bad: Vec<C1Violation> = Vec::new();
    let mut n_bad = 0u64;
    let mut n_ind = 0u64;
    let mut last_bad = None;
    for (a, b, x) in segs {
        let (a, b) = (a.max(q_from), b.min(q_to));
        if a > b {
            continue;
        }
        // psi is constant and Phi non-increasing on the segment: its right end decides
        if monotone && decide(b, &x).is_none() {
            continue;
        }
        let found = map_chunks(a, b, opts.chunk, opts.exec, |lo, hi| (lo..=hi).filter_map(|q| decide(q, &x)).collect::<Vec<_>>());
        for v in found.into_iter().flatten() {
            if v.indeterminate {
                n_ind += 1;
            } else {
                n_bad += 1;
            }
            last_bad = Some(v.q);
            if bad.len() < MAX_LISTED {
                bad.push(v);
            }
        }
    }
    Ok(C1Report {
        q_from,
        q_to,
        violations: bad,
        violation_count: n_bad,
        indeterminate_count: n_ind,
        observed_q0: last_bad.map(|q| q + 1).unwrap_or(q_from),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub f: usize,
    pub q_f: u64,
    pub psi: PsiResult,
    pub phi_at_qf: Interval,
    pub ratio: Interval,
    pub dirichlet_product: Interval,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub tolerance: BigRational,
    pub passed: bool,
}

/// `Q^(1/m) * x` enclosure.
pub fn dirichlet_product(q: u64, m: usize, x: &Interval) -> Interval {
    let r = rational_root(&BigRational::from_integer(q.into()), m as u32, 96);
    let lo = &r.lo * &x.lo;
    let hi = &r.hi * &x.hi;
    Interval::new(lo, hi)
}

/// `psi(Q_f)` against `Phi(Q_f)` at `Q_f = a_{m(f+1)} - 1`.
pub fn checkpoint_c2(
    vec: &ConstructedVector,
    f: &ApproxFn,
    level: usize,
    tolerance: &BigRational,
    opts: &VerifyOptions,
) -> Result<CheckpointReport> {
    let qf = vec.checkpoint(level).ok_or_else(|| Error::Precondition(format!("sequence does not reach checkpoint {level}")))?;
    vec.ensure_valid(&qf)?;
    let q = qf.to_u64().ok_or_else(|| Error::Budget(format!("Q_{level} = {qf} exceeds u64")))?;
    let p = psi(vec, q, &Norm::Max, opts)?;
    let phi = phi_eval(f, &BigRational::from_integer(qf.clone()), 96)?;
    let ps = p.enclosure();
    let ratio = Interval::new(&ps.lo / &phi.hi, &ps.hi / &phi.lo);
    let passed = ratio.hi < BigRational::one() && ratio.lo >= BigRational::one() - tolerance;
    Ok(CheckpointReport {
        f: level,
        q_f: q,
        dirichlet_product: dirichlet_product(q, vec.m, &ps),
        psi: p,
        phi_at_qf: phi,
        ratio,
        tolerance: tolerance.clone(),
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3Level {
    pub n: usize,
    #[serde(with = "crate::numkit::serde_dec::int")]
    pub q: BigInt,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub upper: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub bound: BigRational,
    pub passed: bool,
    /// `log(1/|q x|) / log q`; `None` when `|q x|` may vanish.
    pub exponent: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum C3Verdict {
    Attained,
    NeedDeeperLevel,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3Report {
    pub target: u32,
    pub levels: Vec<C3Level>,
    pub verdict: C3Verdict,
}

fn log_ratio(num: &BigRational, q: &BigInt) -> Interval {
    let a = ln_point(num, 64);
    let b = ln_point(&BigRational::from_integer(q.clone()), 64);
    let lo = &a.lo / &b.hi;
    let hi = &a.hi / &b.lo;
    if a.lo.is_negative() {
        Interval::new(&a.lo / &b.lo, hi)
    } else {
        Interval::new(lo, hi)
    }
}

/// Max-norm `|q x|` enclosure at a single `q`.
pub fn norm_at(vec: &ConstructedVector, q: &BigInt) -> Interval {
    let qr = BigRational::from_integer(q.clone());
    let w = &qr * &vec.tail_bound;
    let half = BigRational::new(1.into(), 2.into());
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for x in &vec.components {
        let c = dist_to_nearest_int(&(&qr * x));
        let u = (&c + &w).min(half.clone());
        let l = if c > w { &c - &w } else { BigRational::zero() };
        hi = hi.max(u);
        lo = lo.max(l);
    }
    Interval::new(lo, hi)
}

/// At `q = a_{mn}`: `|q x| <= 2 a_{mn}/a_{mn+1}`, and the realised exponent against `target`.
pub fn check_c3(vec: &ConstructedVector, target: u32, levels: usize) -> Result<C3Report> {
    let m = vec.m;
    let mut out = Vec::new();
    for n in 1..=levels {
        let (Some(q), Some(next)) = (vec.a_at(m * n), vec.a_at(m * n + 1)) else {
            return Err(Error::Precondition(format!("sequence does not reach level {n}")));
        };
        vec.ensure_valid(q)?;
        let v = norm_at(vec, q);
        let bound = BigRational::new(BigInt::from(2) * q, next.clone());
        let exponent = if v.lo.is_positive() {
            let up = log_ratio(&v.lo.recip(), q);
            let lo = log_ratio(&v.hi.recip(), q);
            Some(Interval::new(lo.lo, up.hi))
        } else {
            None
        };
        out.push(C3Level { n, q: q.clone(), passed: v.hi <= bound, upper: v.hi, bound, exponent });
    }
    let verdict = if out.iter().any(|l| !l.passed) {
        C3Verdict::Fail
    } else if out.iter().any(|l| match &l.exponent {
        Some(e) => e.lo >= BigRational::from_integer(target.into()),
        None => true,
    }) {
        C3Verdict::Attained
    } else {
        C3Verdict::NeedDeeperLevel
    };
    Ok(C3Report { target, levels: out, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub f: usize,
    pub q_f: u64,
    pub psi: PsiResult,
    pub product: Interval,
    /// 1-based coordinate dominating the norm at the minimiser.
    pub argmin_component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub norm: String,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub chi: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub omega: BigRational,
    pub checkpoints: Vec<ThetaPoint>,
    /// Largest checkpoint product (the limsup proxy).
    pub estimate: Interval,
}

/// Dirichlet products `Q_f^(1/m) psi(Q_f)` at every reachable checkpoint.
pub fn theta_estimate(vec: &ConstructedVector, norm: &Norm, opts: &VerifyOptions) -> Result<ThetaReport> {
    let (ok, detail) = norm.expanding(vec.m);
    if !ok {
        return Err(Error::Precondition(format!("norm is not expanding: {detail}")));
    }
    let k = Kernel::new(vec, norm)?;
    let mut pts = Vec::new();
    let mut f = 1;
    while let Some(qf) = vec.checkpoint(f) {
        let Some(q) = qf.to_u64() else { break };
        if q > opts.q_budget || vec.ensure_valid(&qf).is_err() {
            break;
        }
        let p = psi(vec, q, norm, opts)?;
        let comp = k.dominant_component(&k.state_at(p.argmin_q)) + 1;
        pts.push(ThetaPoint { f, q_f: q, product: dirichlet_product(q, vec.m, &p.enclosure()), psi: p, argmin_component: comp });
        f += 1;
    }
    if pts.is_empty() {
        return Err(Error::Precondition("no feasible checkpoint".into()));
    }
    let estimate = pts.iter().map(|p| p.product.clone()).reduce(|a, b| Interval::new(a.lo.max(b.lo), a.hi.max(b.hi))).unwrap();
    Ok(ThetaReport { norm: norm.descriptor(), chi: norm.chi(vec.m), omega: norm.omega(vec.m), checkpoints: pts, estimate })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaPoint {
    pub q: u64,
    pub psi: Interval,
    /// `None` is the `+inf` flag: the enclosure reaches 0.
    pub exponent: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub points: Vec<LambdaPoint>,
    /// Running maximum of the exponent lower bounds.
    #[serde(with = "crate::numkit::serde_dec::opt_rat")]
    pub running_max: Option<BigRational>,
    pub infinite: bool,
}

/// `log(1/psi)/log q` at each drop point of the max-norm sweep.
pub fn lambda_estimate(vec: &ConstructedVector, qmax: u64, opts: &VerifyOptions) -> Result<LambdaReport> {
    let pts = psi_sweep(vec, qmax, &Norm::Max, opts)?;
    let mut out = Vec::new();
    let mut best: Option<BigRational> = None;
    let mut infinite = false;
    for p in pts.iter().filter(|p| p.q >= 2 && p.argmin_q == p.q) {
        let q = BigInt::from(p.q);
        let exponent = if p.lower.is_positive() {
            let lo = log_ratio(&p.upper.recip(), &q);
            let hi = log_ratio(&p.lower.recip(), &q);
            Some(Interval::new(lo.lo, hi.hi))
        } else {
            infinite = true;
            None
        };
        if let Some(e) = &exponent {
            if best.as_ref().map_or(true, |b| &e.lo > b) {
                best = Some(e.lo.clone());
            }
        }
        out.push(LambdaPoint { q: p.q, psi: Interval::new(p.lower.clone(), p.upper.clone()), exponent });
    }
    Ok(LambdaReport { points: out, running_max: best, infinite })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFormResult {
    pub q_star: u64,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub lower: BigRational,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub upper: BigRational,
    pub y: Vec<i64>,
    pub exact: bool,
}

fn canonical(y: &[i64]) -> bool {
    y.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

type LinKey = (BigUint, u64, usize, Vec<i64>);

fn lin_rank(y: &[i64], key: BigUint) -> LinKey {
    let inf = y.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let neg = y.iter().filter(|&&v| v < 0).count();
    (key, inf, neg, y.to_vec())
}

/// `min ||<y, x>||` over nonzero integer `y` with `|y|_inf <= q_star`.
///
/// Ties prefer smaller `|y|_inf`, then fewer negative entries, then the
/// lexicographically smaller `y`.
pub fn psi_linear_form(vec: &ConstructedVector, q_star: u64, opts: &VerifyOptions) -> Result<LinearFormResult> {
    if q_star == 0 {
        return invalid("Q* must be positive");
    }
    let m = vec.m as u32;
    let side = 2 * q_star as u128 + 1;
    let total = side.checked_pow(m).ok_or_else(|| Error::Budget("search box overflows".into()))?;
    let count = (total - 1) / 2;
    if count > opts.q_budget as u128 {
        return Err(Error::Budget(format!("{count} integer vectors exceed q_budget = {}", opts.q_budget)));
    }
    vec.ensure_valid(&(BigInt::from(q_star) * vec.m))?;
    let k = Kernel::new(vec, &Norm::Max)?;
    let total = total as u64;
    let parts = map_chunks(0, total - 1, opts.chunk, opts.exec, |a, b| {
        let mut best: Option<(LinKey, BigUint)> = None;
        let mut y = vec![0i64; vec.m];
        for idx in a..=b {
            let mut r = idx;
            for yi in y.iter_mut().rev() {
                *yi = (r % side as u64) as i64 - q_star as i64;
                r /= side as u64;
            }
            if !canonical(&y) {
                continue;
            }
            let (u, l) = k.linear_keys(&y);
            let rank = lin_rank(&y, u);
            if best.as_ref().map_or(true, |(b, _)| &rank < b) {
                best = Some((rank, l));
            }
        }
        best
    });
    let mut best: Option<(LinKey, BigUint)> = None;
    for p in parts.into_iter().flatten() {
        if best.as_ref().map_or(true, |(b, _)| p.0 < *b) {
            best = Some(p);
        }
    }
    // the lower end of the minimum is the minimum of all lower ends, which
    // the per-chunk winners do not carry
    let ((key_u, _, _, y), _) = best.expect("box contains a canonical vector");
    let key_l = if vec.is_exact() {
        key_u.clone()
    } else {
        let lows = map_chunks(0, total - 1, opts.chunk, opts.exec, |a, b| {
            let mut y = vec![0i64; vec.m];
            let mut lo: Option<BigUint> = None;
            for idx in a..=b {
                let mut r = idx;
                for yi in y.iter_mut().rev() {
                    *yi = (r % side as u64) as i64 - q_star as i64;
                    r /= side as u64;
                }
                if canonical(&y) {
                    let l = k.linear_keys(&y).1;
                    lo = Some(lo.map_or(l.clone(), |x: BigUint| x.min(l)));
                }
            }
            lo
        });
        lows.into_iter().flatten().min().unwrap()
    };
    let (lower, upper) = k.linear_value(&key_u, &key_l);
    Ok(LinearFormResult { q_star, exact: is_exact(&lower, &upper), lower, upper, y })
}

/// Decimal rendering with exactly `digits` fractional digits (round half up).
pub fn fmt_decimal(x: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let neg = x.is_negative();
    let v = (x.abs() * BigRational::from_integer(scale.clone()) + BigRational::new(1.into(), 2.into())).floor().to_integer();
    let int = &v / &scale;
    let frac = (&v % &scale).to_string();
    let pad = "0".repeat(digits as usize - frac.len());
    format!("{}{int}.{pad}{frac}", if neg && !v.is_zero() { "-" } else { "" })
}

/// Midpoint of the Dirichlet product enclosure, 12 digits.
pub fn dirichlet_product_decimal(q: u64, m: usize, psi_upper: &BigRational) -> String {
    let e = dirichlet_product(q, m, &Interval::point(psi_upper.clone()));
    fmt_decimal(&e.mid(), 12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    fn exact(v: &[(i64, i64)]) -> ConstructedVector {
        ConstructedVector::from_rationals(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn psi_small_examples() {
        let o = VerifyOptions::default();
        let r = psi(&exact(&[(5, 7), (2, 7)]), 3, &Norm::Max, &o).unwrap();
        assert_eq!((r.upper.clone(), r.argmin_q, r.exact), (rat(1, 7), 3, true));
        let r = psi(&exact(&[(1, 2), (1, 2)]), 2, &Norm::Max, &o).unwrap();
        assert_eq!((r.upper, r.argmin_q), (rat(0, 1), 2));
    }

    #[test]
    fn sweep_small_examples() {
        let o = VerifyOptions::default();
        let s = psi_sweep(&exact(&[(5, 7), (2, 7)]), 7, &Norm::Max, &o).unwrap();
        let got: Vec<_> = s.iter().map(|p| (p.q, p.upper.clone())).collect();
        assert_eq!(got, vec![(1, rat(2, 7)), (3, rat(1, 7)), (7, rat(0, 1))]);
        let s = psi_sweep(&exact(&[(1, 3), (1, 3)]), 3, &Norm::Max, &o).unwrap();
        assert_eq!(s.iter().map(|p| p.q).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn tiny_chunks_agree() {
        let v = exact(&[(355, 1131), (22, 97), (5, 13)]);
        let a = psi_sweep(&v, 500, &Norm::Max, &VerifyOptions::default()).unwrap();
        let b = psi_sweep(&v, 500, &Norm::Max, &VerifyOptions { chunk: 7, exec: Exec::Sequential, ..Default::default() }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_form_examples() {
        let o = VerifyOptions::default();
        let r = psi_linear_form(&exact(&[(5, 7), (2, 7)]), 2, &o).unwrap();
        assert_eq!((r.upper, r.y), (rat(0, 1), vec![1, 1]));
        let r = psi_linear_form(&exact(&[(1, 2), (1, 3)]), 1, &o).unwrap();
        assert_eq!((r.upper, r.y), (rat(1, 6), vec![1, 1]));
    }

    #[test]
    fn c1_trivial() {
        let f = ApproxFn::parse_descriptor("power:c=1/2,tau=1/2").unwrap();
        let r = check_c1(&exact(&[(1, 2), (1, 2)]), &f, 2, 4, &Norm::Max, &VerifyOptions::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.observed_q0, 2);
    }

    #[test]
    fn decimals() {
        assert_eq!(fmt_decimal(&rat(1, 8), 2), "0.13");
        assert_eq!(fmt_decimal(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(fmt_decimal(&rat(7, 1), 3), "7.000");
    }
}
