use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::parse_rational;

/// Norms on `R^m` used for `psi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    Max,
    /// `(sum |x_i|^p)^(1/p)` for an integer `p >= 1`.
    P(u32),
    /// `max w_i |x_i|`.
    WeightedMax(Vec<BigRational>),
}

impl Default for Norm {
    fn default() -> Self {
        Norm::Max
    }
}

impl Norm {
    /// `max`, `p:<int>` (also `euclid`), `weighted:<w1>,<w2>,..`.
    pub fn parse(s: &str) -> Result<Norm> {
        let s = s.trim();
        if s == "max" || s == "inf" {
            return Ok(Norm::Max);
        }
        if s == "euclid" || s == "euclidean" {
            return Ok(Norm::P(2));
        }
        if let Some(p) = s.strip_prefix("p:").or_else(|| s.strip_prefix("p=")) {
            let v = parse_rational(p)?;
            if !v.is_integer() {
                return Err(Error::Unsupported(format!("only integer p supported, got {v}")));
            }
            let p = v.to_integer().to_u32().filter(|&p| p >= 1).ok_or_else(|| Error::InvalidArgument(format!("p must be >= 1, got {v}")))?;
            return Ok(Norm::P(p));
        }
        if let Some(ws) = s.strip_prefix("weighted:").or_else(|| s.strip_prefix("weighted-max:")) {
            let w = ws.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            return Ok(Norm::WeightedMax(w));
        }
        Err(Error::Parse(format!("unknown norm {s:?}")))
    }

    pub fn descriptor(&self) -> String {
        match self {
            Norm::Max => "max".into(),
            Norm::P(p) => format!("p:{p}"),
            Norm::WeightedMax(w) => format!("weighted:{}", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            Norm::Max => Ok(()),
            Norm::P(p) if *p >= 1 => Ok(()),
            Norm::P(_) => invalid("p must be >= 1"),
            Norm::WeightedMax(w) => {
                if w.len() != m {
                    return invalid(format!("{} weights for m = {m}", w.len()));
                }
                if w.iter().any(|x| !x.is_positive()) {
                    return invalid("weights must be positive");
                }
                Ok(())
            }
        }
    }

    /// `|e_i|` for each unit vector.
    pub fn axis_lengths(&self, m: usize) -> Vec<BigRational> {
        match self {
            Norm::Max | Norm::P(_) => vec![BigRational::one(); m],
            Norm::WeightedMax(w) => w.clone(),
        }
    }

    /// `chi = min_i |e_i|`.
    pub fn chi(&self, m: usize) -> BigRational {
        self.axis_lengths(m).into_iter().min().unwrap()
    }

    /// `max_i |e_i|`.
    pub fn omega(&self, m: usize) -> BigRational {
        self.axis_lengths(m).into_iter().max().unwrap()
    }

    /// Whether `|x| >= |pi_j(x)|` for every coordinate projection `pi_j`.
    ///
    /// Every norm of this family is monotone in each `|x_i|`, which is
    /// exactly the expanding property.
    pub fn expanding(&self, m: usize) -> (bool, String) {
        match self.validate(m) {
            Err(e) => (false, e.to_string()),
            Ok(()) => (
                true,
                match self {
                    Norm::Max => "max norm: monotone in every |x_i|".into(),
                    Norm::P(p) => format!("p = {p}: monotone in every |x_i|"),
                    Norm::WeightedMax(_) => "weighted max with positive weights: monotone in every |x_i|".into(),
                },
            ),
        }
    }

    /// Float evaluation, for oracles.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Norm::Max => x.iter().fold(0.0f64, |a, v| a.max(v.abs())),
            Norm::P(p) => x.iter().map(|v| v.abs().powi(*p as i32)).sum::<f64>().powf(1.0 / *p as f64),
            Norm::WeightedMax(w) => x.iter().zip(w).fold(0.0f64, |a, (v, w)| a.max(w.to_f64().unwrap() * v.abs())),
        }
    }

    /// Weights over a common denominator.
    pub(crate) fn integer_weights(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let Norm::WeightedMax(w) = self else { return None };
        let den = w.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let nums = w.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        Some((nums, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    #[test]
    fn parse_and_constants() {
        let n = Norm::parse("weighted:1,1/2").unwrap();
        assert_eq!(n.chi(2), rat(1, 2));
        assert_eq!(n.omega(2), rat(1, 1));
        assert!(n.expanding(2).0);
        assert_eq!(Norm::parse("p:2").unwrap(), Norm::P(2));
        assert!(matches!(Norm::parse("p:3/2"), Err(Error::Unsupported(_))));
        assert!(!Norm::parse("weighted:1,-1").unwrap().expanding(2).0);
        assert_eq!(Norm::parse(&n.descriptor()).unwrap(), n);
    }
}
