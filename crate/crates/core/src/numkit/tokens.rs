//! Textual forms for real constants: `9/10`, `0.3`, `sqrt(2)/2`,
//! `(1+sqrt(5))/2`, `-3*sqrt(7)/4`, `3^(-1/3)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{parse_rational, QuadSurd, Real};
use crate::error::{Error, Result};

fn perr(s: &str) -> Error {
    Error::Parse(format!("cannot read real constant {s:?}"))
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| perr(s))
}

/// `[-][k*]sqrt(d)[/r]` with no rational part.
fn parse_pure_surd(s: &str) -> Result<(BigInt, BigInt, BigInt)> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let i = body.find("sqrt(").ok_or_else(|| perr(s))?;
    let k = if i == 0 {
        BigInt::one()
    } else {
        let pre = body[..i].strip_suffix('*').ok_or_else(|| perr(s))?;
        parse_int(pre)?
    };
    let rest = &body[i + 5..];
    let j = rest.find(')').ok_or_else(|| perr(s))?;
    let d = parse_int(&rest[..j])?;
    let tail = &rest[j + 1..];
    let r = if tail.is_empty() {
        BigInt::one()
    } else {
        parse_int(tail.strip_prefix('/').ok_or_else(|| perr(s))?)?
    };
    Ok((if neg { -k } else { k }, d, r))
}

pub fn parse_real(s: &str) -> Result<Real> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.as_str();
    if s.is_empty() {
        return Err(perr(s));
    }
    if let Some(inner) = s.strip_prefix('(') {
        // (p +/- k*sqrt(d))/r
        let close = inner.rfind(')').ok_or_else(|| perr(s))?;
        let body = &inner[..close];
        let r = match inner[close + 1..].strip_prefix('/') {
            Some(t) => parse_int(t)?,
            None if inner[close + 1..].is_empty() => BigInt::one(),
            None => return Err(perr(s)),
        };
        let split = body[1..].find(['+', '-']).map(|i| i + 1).ok_or_else(|| perr(s))?;
        let p = parse_int(&body[..split])?;
        let mut surd = &body[split..];
        if let Some(x) = surd.strip_prefix('+') {
            surd = x;
        }
        let (k, d, r2) = parse_pure_surd(surd)?;
        if !r2.is_one() {
            return Err(perr(s));
        }
        return Ok(Real::from(QuadSurd::new(p, k, d, r)?));
    }
    if s.contains("sqrt(") {
        let (k, d, r) = parse_pure_surd(s)?;
        return Ok(Real::from(QuadSurd::new(BigInt::zero(), k, d, r)?));
    }
    if let Some(i) = s.find("^(") {
        let base = parse_rational(&s[..i])?;
        let e = s[i + 2..].strip_suffix(')').ok_or_else(|| perr(s))?;
        if !base.is_positive() {
            return Err(perr(s));
        }
        return Ok(Real::Rat(base).pow(parse_real(e)?));
    }
    Ok(Real::Rat(parse_rational(s)?))
}

fn fmt_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Canonical token; round-trips through [`parse_real`] for rationals,
/// surds and rational powers.
pub fn fmt_real(x: &Real) -> String {
    match x {
        Real::Rat(r) => fmt_rat(r),
        Real::Surd(s) => {
            let (p, q, d, r) = s.integer_form();
            let qs = if q.is_one() {
                format!("sqrt({d})")
            } else if q == -BigInt::one() {
                format!("-sqrt({d})")
            } else {
                format!("{q}*sqrt({d})")
            };
            if p.is_zero() {
                if r.is_one() {
                    qs
                } else {
                    format!("{qs}/{r}")
                }
            } else {
                let sign = if q.is_negative() { "" } else { "+" };
                format!("({p}{sign}{qs})/{r}")
            }
        }
        Real::Pow(b, e) => format!("{}^({})", fmt_real(b), fmt_real(e)),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        for s in ["9/10", "sqrt(2)/2", "(1+sqrt(5))/2", "-3*sqrt(7)/4", "3^(-1/3)", "7"] {
            let v = parse_real(s).unwrap();
            assert_eq!(fmt_real(&v), s, "{s}");
        }
        let v = parse_real("0.5").unwrap();
        assert_eq!(fmt_real(&v), "1/2");
        assert!(parse_real("sqrt(4)").is_err());
        let t = parse_real("sqrt(2)/2").unwrap();
        assert!((t.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
