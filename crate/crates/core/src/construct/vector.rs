use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::SequenceRecord;
use crate::error::{invalid, Error, Result};
use crate::numkit::{parse_rational, DigitStream};

/// Cantor digit sets: coordinate `i` uses digits `{lo_i, hi_i}` in base `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftInfo {
    pub b: u32,
    pub digits: Vec<(u32, u32)>,
}

/// A truncated vector `xi~` with `|xi_i - xi~_i| <= tail_bound` in every coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedVector {
    pub m: usize,
    pub mode: String,
    /// Whole known sequence `a_1 .. a_{m(depth+1)}`; empty for plain vectors.
    pub a: Vec<BigInt>,
    pub components: Vec<BigRational>,
    pub truncation_level: usize,
    pub tail_bound: BigRational,
    /// `None` when the vector is exact.
    pub q_max_valid: Option<BigInt>,
    pub phi: Option<String>,
    pub big_m: Vec<u32>,
    pub l: Vec<BigInt>,
    pub next_a: Option<BigInt>,
    pub lift: Option<LiftInfo>,
}

/// `Q * tail` has to stay below this for values at `Q` to be reported.
pub fn resolution() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 30)
}

fn q_max_for(tail: &BigRational) -> Option<BigInt> {
    if tail.is_zero() {
        return None;
    }
    let v: BigInt = (resolution() / tail).ceil().to_integer() - 1;
    Some(if v.is_negative() { BigInt::zero() } else { v })
}

impl ConstructedVector {
    /// Exact rational vector.
    pub fn from_rationals(components: Vec<BigRational>) -> Result<Self> {
        if components.is_empty() {
            return invalid("vector needs at least one component");
        }
        Ok(ConstructedVector {
            m: components.len(),
            mode: "exact".into(),
            a: vec![],
            components,
            truncation_level: 0,
            tail_bound: BigRational::zero(),
            q_max_valid: None,
            phi: None,
            big_m: vec![],
            l: vec![],
            next_a: None,
            lift: None,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.tail_bound.is_zero()
    }

    pub fn a_at(&self, j: usize) -> Option<&BigInt> {
        if j == 0 {
            None
        } else if j <= self.a.len() {
            Some(&self.a[j - 1])
        } else if j == self.a.len() + 1 {
            self.next_a.as_ref()
        } else {
            None
        }
    }

    /// Checkpoint `Q_f = a_{m(f+1)} - 1`.
    pub fn checkpoint(&self, f: usize) -> Option<BigInt> {
        self.a_at(self.m * (f + 1)).map(|a| a - 1)
    }

    /// Error unless values at `q` are resolvable at this truncation.
    pub fn ensure_valid(&self, q: &BigInt) -> Result<()> {
        let Some(qmax) = &self.q_max_valid else { return Ok(()) };
        if q <= qmax {
            return Ok(());
        }
        Err(Error::TruncationInsufficient {
            q: q.try_into().unwrap_or(u64::MAX),
            q_max_valid: qmax.to_string(),
            required_level: self.required_level(q),
        })
    }

    /// Smallest truncation level that makes `q` valid (or one past the known depth).
    pub fn required_level(&self, q: &BigInt) -> usize {
        let scale = BigRational::from_integer(self.lift.as_ref().map(|l| lift_scale(l)).unwrap_or_else(BigInt::one));
        let qr = BigRational::from_integer(q.clone());
        let mut t = self.truncation_level + 1;
        loop {
            match self.a_at(self.m * (t + 1) + 1) {
                Some(next) => {
                    let tail = BigRational::new(BigInt::from(2), next.clone()) * &scale;
                    if &qr * tail < resolution() {
                        return t;
                    }
                }
                None => return t,
            }
            t += 1;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        serde_json::json!({
            "m": self.m,
            "mode": self.mode,
            "a": s(&self.a),
            "components": self.components.iter().map(|c| serde_json::json!({
                "num": c.numer().to_string(),
                "den": c.denom().to_string(),
            })).collect::<Vec<_>>(),
            "truncation_level": self.truncation_level,
            "tail_bound": self.tail_bound.to_string(),
            "q_max_valid": self.q_max_valid.as_ref().map(|q| q.to_string()),
            "phi": self.phi,
            "M": self.big_m,
            "L": s(&self.l),
            "next_a": self.next_a.as_ref().map(|q| q.to_string()),
            "lift": self.lift,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let perr = |what: &str| Error::Parse(format!("vector JSON: bad or missing `{what}`"));
        let big = |x: &serde_json::Value, what: &str| -> Result<BigInt> {
            match x {
                serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|_| perr(what)),
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| perr(what)),
                _ => Err(perr(what)),
            }
        };
        let list = |key: &str| -> Result<Vec<BigInt>> {
            match v.get(key) {
                None | Some(serde_json::Value::Null) => Ok(vec![]),
                Some(serde_json::Value::Array(xs)) => xs.iter().map(|x| big(x, key)).collect(),
                _ => Err(perr(key)),
            }
        };
        let comps = v.get("components").and_then(|c| c.as_array()).ok_or_else(|| perr("components"))?;
        let mut components = Vec::with_capacity(comps.len());
        for c in comps {
            let r = match c {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Object(_) => {
                    let n = big(c.get("num").ok_or_else(|| perr("num"))?, "num")?;
                    let d = big(c.get("den").ok_or_else(|| perr("den"))?, "den")?;
                    if d.is_zero() {
                        return Err(perr("den"));
                    }
                    BigRational::new(n, d)
                }
                _ => return Err(perr("components")),
            };
            components.push(r);
        }
        let m = match v.get("m") {
            Some(x) => x.as_u64().ok_or_else(|| perr("m"))? as usize,
            None => components.len(),
        };
        if m != components.len() || m == 0 {
            return Err(perr("m"));
        }
        let tail_bound = match v.get("tail_bound") {
            None | Some(serde_json::Value::Null) => BigRational::zero(),
            Some(serde_json::Value::String(s)) => parse_rational(s)?,
            Some(x) => parse_rational(&x.to_string())?,
        };
        if tail_bound.is_negative() {
            return invalid("tail_bound must be non-negative");
        }
        let q_max_valid = match v.get("q_max_valid") {
            None | Some(serde_json::Value::Null) => q_max_for(&tail_bound),
            Some(x) => Some(big(x, "q_max_valid")?),
        };
        let next_a = match v.get("next_a") {
            None | Some(serde_json::Value::Null) => None,
            Some(x) => Some(big(x, "next_a")?),
        };
        let lift = match v.get("lift") {
            None | Some(serde_json::Value::Null) => None,
            Some(x) => Some(serde_json::from_value(x.clone()).map_err(|_| perr("lift"))?),
        };
        let big_m = match v.get("M") {
            None | Some(serde_json::Value::Null) => vec![],
            Some(x) => serde_json::from_value(x.clone()).map_err(|_| perr("M"))?,
        };
        Ok(ConstructedVector {
            m,
            mode: v.get("mode").and_then(|x| x.as_str()).unwrap_or("exact").to_string(),
            a: list("a")?,
            components,
            truncation_level: v.get("truncation_level").and_then(|x| x.as_u64()).unwrap_or(0) as usize,
            tail_bound,
            q_max_valid,
            phi: v.get("phi").and_then(|x| x.as_str()).map(String::from),
            big_m,
            l: list("L")?,
            next_a,
            lift,
        })
    }
}

fn lift_scale(l: &LiftInfo) -> BigInt {
    l.digits.iter().map(|d| BigInt::from(d.1 - d.0)).max().unwrap_or_else(BigInt::one)
}

/// `xi~_i = sum_{n <= T} 1/a_{mn+i}` with `tail_bound = 2/a_{m(T+1)+1}`.
pub fn assemble_vector(seq: &SequenceRecord, truncation: usize) -> Result<ConstructedVector> {
    if truncation > seq.depth {
        return invalid(format!("truncation {truncation} exceeds depth {}", seq.depth));
    }
    let m = seq.m;
    let components = (1..=m)
        .map(|i| {
            (0..=truncation)
                .map(|n| BigRational::new(BigInt::one(), seq.a[m * n + i - 1].clone()))
                .fold(BigRational::zero(), |s, x| s + x)
        })
        .collect();
    let next = seq.a_at(m * (truncation + 1) + 1).expect("sequence covers its closing term");
    let tail_bound = BigRational::new(BigInt::from(2), next.clone());
    Ok(ConstructedVector {
        m,
        mode: seq.mode.clone(),
        a: seq.a.clone(),
        components,
        truncation_level: truncation,
        q_max_valid: q_max_for(&tail_bound),
        tail_bound,
        phi: Some(seq.phi.clone()),
        big_m: seq.big_m.clone(),
        l: seq.l.clone(),
        next_a: Some(seq.next_a.clone()),
        lift: None,
    })
}

/// `xi_i = w1_i theta_i + w2_i/(b-1)` where `W_i = {w2_i, w1_i + w2_i}`.
pub fn cantor_lift(theta: &ConstructedVector, b: u32, digits: &[(u32, u32)]) -> Result<ConstructedVector> {
    if b < 2 {
        return invalid("base must be >= 2");
    }
    if digits.len() != theta.m {
        return Err(Error::Unsupported(format!("need one digit pair per coordinate, got {}", digits.len())));
    }
    for &(lo, hi) in digits {
        if lo >= hi || hi >= b {
            return Err(Error::Unsupported(format!("digit set {{{lo},{hi}}} must be two distinct digits below {b}")));
        }
    }
    let bm1 = BigRational::from_integer(BigInt::from(b - 1));
    let components = theta
        .components
        .iter()
        .zip(digits)
        .map(|(t, &(lo, hi))| t * BigRational::from_integer(BigInt::from(hi - lo)) + BigRational::from_integer(lo.into()) / &bm1)
        .collect();
    let info = LiftInfo { b, digits: digits.to_vec() };
    let tail_bound = &theta.tail_bound * BigRational::from_integer(lift_scale(&info));
    Ok(ConstructedVector {
        components,
        q_max_valid: q_max_for(&tail_bound),
        tail_bound,
        mode: format!("{}+lift", theta.mode),
        lift: Some(info),
        ..theta.clone()
    })
}

/// First `(coordinate, digit position)` whose base-`b` digit leaves `W_i`, if any.
pub fn verify_lift_digits(xi: &ConstructedVector, depth: usize) -> Result<Option<(usize, usize)>> {
    let Some(info) = &xi.lift else { return invalid("vector carries no lift data") };
    for (i, (x, &(lo, hi))) in xi.components.iter().zip(&info.digits).enumerate() {
        let frac = x - x.floor();
        let ds = DigitStream::of_rational(&frac, info.b, depth)?;
        if let Some(pos) = ds.all_in(&[lo, hi]) {
            return Ok(Some((i + 1, pos)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_sequence, ConstructionPlan, Mode};
    use crate::phi::ApproxFn;

    #[test]
    fn m2_components_and_tail() {
        let f = ApproxFn::parse_descriptor("power:c=9/10,tau=1/2").unwrap();
        let seq = build_sequence(&ConstructionPlan::new(2, f, Mode::M2, 1)).unwrap();
        let v = assemble_vector(&seq, 1).unwrap();
        assert_eq!(v.components[0], BigRational::new(33.into(), 64.into()));
        assert_eq!(v.components[1], BigRational::new(1281.into(), 5120.into()));
        assert_eq!(v.tail_bound, BigRational::new(2.into(), seq.next_a.clone()));
        assert!(v.q_max_valid.as_ref().unwrap() >= &BigInt::from(5119));
        let back = ConstructedVector::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn insufficient_truncation_reports_level() {
        let f = ApproxFn::parse_descriptor("power:c=9/10,tau=1/2").unwrap();
        let seq = build_sequence(&ConstructionPlan::new(2, f, Mode::M2, 2)).unwrap();
        let v = assemble_vector(&seq, 0).unwrap();
        let q = seq.a[3].clone() - 1;
        match v.ensure_valid(&q) {
            Err(Error::TruncationInsufficient { required_level, .. }) => {
                assert!(required_level >= 1);
                assert!(assemble_vector(&seq, required_level).unwrap().ensure_valid(&q).is_ok());
                assert!(assemble_vector(&seq, required_level - 1).unwrap().ensure_valid(&q).is_err());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lift_digits_stay_in_sets() {
        let f = ApproxFn::parse_descriptor("power:c=9/10,tau=1/2").unwrap();
        let seq = build_sequence(&ConstructionPlan::new(2, f, Mode::Cantor { b: 3 }, 1)).unwrap();
        let theta = assemble_vector(&seq, 1).unwrap();
        for w in [[(0, 2), (0, 2)], [(1, 2), (0, 2)], [(0, 2), (1, 2)], [(1, 2), (1, 2)]] {
            let xi = cantor_lift(&theta, 3, &w).unwrap();
            assert_eq!(verify_lift_digits(&xi, 2000).unwrap(), None);
        }
        assert!(matches!(cantor_lift(&theta, 3, &[(0, 1)]), Err(Error::Unsupported(_))));
    }
}
