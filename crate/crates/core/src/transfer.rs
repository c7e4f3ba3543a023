//! Transference between simultaneous approximation and linear forms, and
//! the constant chain it induces.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::ConstructedVector;
use crate::error::{invalid, Error, Result};
use crate::numkit::{fmt_real, Interval, Real};
use crate::verify::{psi_linear_form, VerifyOptions};

const BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    SimToLin,
    LinToSim,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim-to-lin" => Ok(Direction::SimToLin),
            "lin-to-sim" => Ok(Direction::LinToSim),
            _ => Err(Error::Parse(format!("unknown direction {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferParams {
    pub m: usize,
    pub direction: Direction,
    pub x: String,
    pub u: String,
    /// `Y` (or `Y'`) and `V` (or `V'`).
    pub y: Interval,
    pub v: Interval,
    pub y_expr: String,
    pub v_expr: String,
}

fn m_root(m: usize) -> Real {
    // (m+1)^(1/(2m))
    Real::int(m as i64 + 1).pow(Real::rat(1, 2 * m as i64))
}

fn exponent_inv_m_minus_1(m: usize) -> Real {
    Real::rat(1 - m as i64, m as i64)
}

/// Box sizes produced by the transference theorem.
pub fn german_map(m: usize, direction: Direction, x: &Real, u: &Real) -> Result<TransferParams> {
    if m < 1 {
        return invalid("m must be >= 1");
    }
    if !x.is_positive_certain() || !u.is_positive_certain() {
        return invalid("X and U must be positive");
    }
    let k = m_root(m);
    let (y, v) = match direction {
        Direction::SimToLin => (
            k.clone().mul(x.clone().pow(Real::rat(1, m as i64))),
            k.mul(x.clone().pow(exponent_inv_m_minus_1(m))).mul(u.clone()),
        ),
        Direction::LinToSim => (
            k.clone().mul(x.clone()).mul(u.clone().pow(exponent_inv_m_minus_1(m))),
            k.mul(u.clone().pow(Real::rat(1, m as i64))),
        ),
    };
    Ok(TransferParams {
        m,
        direction,
        x: fmt_real(x),
        u: fmt_real(u),
        y: y.enclose(BITS)?,
        v: v.enclose(BITS)?,
        y_expr: fmt_real(&y),
        v_expr: fmt_real(&v),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrChain {
    pub m: usize,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub c: BigRational,
    /// `c (m+1)^(1/2 + 1/(2m))`.
    pub c_star: Interval,
    /// `(m+1)^(-m^2-m) c_star^(m^2)`, the smallest admissible `c~`.
    pub omega: Interval,
    pub c_star_le_one: bool,
    pub flags: Vec<String>,
}

fn chain_exp(m: usize) -> Real {
    Real::rat(m as i64 + 1, 2 * m as i64)
}

pub fn c_star_expr(m: usize, c: &BigRational) -> Real {
    Real::Rat(c.clone()).mul(Real::int(m as i64 + 1).pow(chain_exp(m)))
}

pub fn fr_chain(m: usize, c: &BigRational) -> Result<FrChain> {
    if m < 1 {
        return invalid("m must be >= 1");
    }
    if !c.is_positive() || c > &BigRational::one() {
        return invalid("c must lie in (0, 1]");
    }
    let cs = c_star_expr(m, c);
    let c_star = cs.enclose(BITS)?;
    let mm = (m * m) as i64;
    let omega = Real::int(m as i64 + 1)
        .pow(Real::int(-mm - m as i64))
        .mul(cs.pow(Real::int(mm)))
        .enclose(BITS)?;
    let one = BigRational::one();
    let mut flags = Vec::new();
    let c_star_le_one = c_star.hi <= one;
    if !c_star_le_one {
        flags.push(if c_star.lo > one { "c_star > 1: chain not valid".into() } else { "c_star = 1 undecided".into() });
    }
    Ok(FrChain { m, c: c.clone(), c_star, omega, c_star_le_one, flags })
}

/// `omega(m, c_star)` for a given `c_star`.
pub fn omega_of(m: usize, c_star: &Real) -> Result<Interval> {
    let mm = (m * m) as i64;
    Real::int(m as i64 + 1).pow(Real::int(-mm - m as i64)).mul(c_star.clone().pow(Real::int(mm))).enclose(BITS)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseConstant {
    pub m: usize,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub c_tilde: BigRational,
    /// `(m+1)^(1/2+1/(2m)) c~^(1/m^2)`.
    pub big_c: Interval,
    /// `V' Y'^(1/m)` from the box sizes themselves: `(m+1)^((m+1)/(2m^2)) c~^(1/m^2)`.
    pub bookkeeping: Interval,
    pub above_one: bool,
}

pub fn inverse_constant(m: usize, c_tilde: &BigRational) -> Result<InverseConstant> {
    if m < 1 || !c_tilde.is_positive() {
        return invalid("need m >= 1 and c~ > 0");
    }
    let mi = m as i64;
    let ct = Real::Rat(c_tilde.clone()).pow(Real::rat(1, mi * mi));
    let big_c = Real::int(mi + 1).pow(chain_exp(m)).mul(ct.clone()).enclose(BITS)?;
    let bookkeeping = Real::int(mi + 1).pow(Real::rat(mi + 1, 2 * mi * mi)).mul(ct).enclose(BITS)?;
    let above_one = big_c.lo > BigRational::one();
    Ok(InverseConstant { m, c_tilde: c_tilde.clone(), big_c, bookkeeping, above_one })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub m: usize,
    /// `V Y^m` after sim-to-lin with `U = c X^(-1/m)`; equals `c_star`.
    pub forward: Interval,
    pub c_star: Interval,
    /// `V' Y'^(1/m)` after lin-to-sim with `U = c~ X^(-m)`.
    pub backward: Interval,
    pub big_c: Interval,
    pub consistent: bool,
}

/// Exponent bookkeeping of both transference steps at a sample `X`.
pub fn round_trip(m: usize, c: &BigRational, c_tilde: &BigRational, x: &BigRational) -> Result<RoundTrip> {
    if !x.is_positive() {
        return invalid("X must be positive");
    }
    let mi = m as i64;
    let xr = Real::Rat(x.clone());
    let u = Real::Rat(c.clone()).mul(xr.clone().pow(Real::rat(-1, mi)));
    let f = german_map(m, Direction::SimToLin, &xr, &u)?;
    let fy = Real::int(m as i64 + 1).pow(Real::rat(1, 2 * mi)).mul(xr.clone().pow(Real::rat(1, mi)));
    let fv = Real::int(m as i64 + 1).pow(Real::rat(1, 2 * mi)).mul(xr.clone().pow(exponent_inv_m_minus_1(m))).mul(u);
    let forward = fv.mul(fy.pow(Real::int(mi))).enclose(BITS)?;
    let c_star = c_star_expr(m, c).enclose(BITS)?;
    debug_assert!(f.y.lo.is_positive());

    let u2 = Real::Rat(c_tilde.clone()).mul(xr.clone().pow(Real::int(-mi)));
    let k = Real::int(mi + 1).pow(Real::rat(1, 2 * mi));
    let by = k.clone().mul(xr).mul(u2.clone().pow(exponent_inv_m_minus_1(m)));
    let bv = k.mul(u2.pow(Real::rat(1, mi)));
    let backward = bv.mul(by.pow(Real::rat(1, mi))).enclose(BITS)?;
    let inv = inverse_constant(m, c_tilde)?;
    let consistent = forward.overlaps(&c_star) && inv.bookkeeping.overlaps(&backward) && backward.lo <= inv.big_c.hi;
    Ok(RoundTrip { m, forward, c_star, backward, big_c: inv.big_c, consistent })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaReport {
    pub m: usize,
    /// `log kappa_m = -20 (m+1)^3 (m+10)`.
    pub log_kappa: i64,
    pub log_omega: Option<Interval>,
    /// `log omega > log kappa_m`.
    pub fr_stronger: Option<bool>,
}

/// Compare `kappa_m` with `omega(m, c_star)`, given `log c_star`.
pub fn kappa_bt(m: usize, log_c_star: Option<&Interval>) -> Result<KappaReport> {
    if m < 2 {
        return invalid("m must be >= 2");
    }
    let mi = m as i64;
    let log_kappa = -20 * (mi + 1).pow(3) * (mi + 10);
    let (log_omega, fr_stronger) = match log_c_star {
        None => (None, None),
        Some(l) => {
            let lm = Real::int(mi + 1).ln().enclose(BITS)?;
            let lo = lm.scale(&BigRational::from_integer((-mi * mi - mi).into())).add(&l.scale(&BigRational::from_integer((mi * mi).into())));
            let k = BigRational::from_integer(log_kappa.into());
            let s = if lo.lo > k {
                Some(true)
            } else if lo.hi < k {
                Some(false)
            } else {
                None
            };
            (Some(lo), s)
        }
    };
    Ok(KappaReport { m, log_kappa, log_omega, fr_stronger })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferPoint {
    pub q_star: u64,
    #[serde(with = "crate::numkit::serde_dec::opt_rat_pair")]
    pub psi_star: Option<(BigRational, BigRational)>,
    pub witness: Option<Vec<i64>>,
    /// `c_star Q*^(-m)`.
    pub bound: Interval,
    pub margin: Option<f64>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub m: usize,
    #[serde(with = "crate::numkit::serde_dec::rat")]
    pub c: BigRational,
    pub c_star: Interval,
    pub points: Vec<TransferPoint>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| matches!(p.verdict, Verdict::Pass | Verdict::Skipped))
    }
}

/// Brute-force `psi*(Q*) <= c_star Q*^(-m)` for a vector meeting the simultaneous constant `c`.
pub fn transfer_verify(vec: &ConstructedVector, c: &BigRational, q_stars: &[u64], opts: &VerifyOptions) -> Result<TransferReport> {
    let m = vec.m;
    let cs = c_star_expr(m, c);
    let c_star = cs.enclose(BITS)?;
    let mut points = Vec::with_capacity(q_stars.len());
    for &q in q_stars {
        let qm = num_traits::pow(BigRational::from_integer(q.into()), m);
        let bound = c_star.scale(&qm.recip());
        match psi_linear_form(vec, q, opts) {
            Err(Error::Budget(msg)) => points.push(TransferPoint {
                q_star: q,
                psi_star: None,
                witness: None,
                bound,
                margin: None,
                verdict: Verdict::Skipped,
                note: Some(msg),
            }),
            Err(e) => return Err(e),
            Ok(r) => {
                let verdict = if r.upper <= bound.lo {
                    Verdict::Pass
                } else if r.lower > bound.hi {
                    Verdict::Fail
                } else {
                    Verdict::Indeterminate
                };
                let margin = if r.upper.is_zero() { None } else { (&bound.lo / &r.upper).to_f64() };
                points.push(TransferPoint {
                    q_star: q,
                    psi_star: Some((r.lower, r.upper)),
                    witness: Some(r.y),
                    bound,
                    margin,
                    verdict,
                    note: None,
                });
            }
        }
    }
    Ok(TransferReport { m, c: c.clone(), c_star, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    fn close(i: &Interval, x: f64, tol: f64) -> bool {
        (i.mid_f64() - x).abs() < tol
    }

    #[test]
    fn german_examples() {
        let k = 3f64.powf(0.25);
        let r = german_map(2, Direction::SimToLin, &Real::int(49), &Real::rat(1, 10)).unwrap();
        assert!(close(&r.y, 7.0 * k, 1e-9) && close(&r.v, k / 70.0, 1e-12));
        let r = german_map(2, Direction::LinToSim, &Real::int(10), &Real::rat(1, 100)).unwrap();
        assert!(close(&r.y, 100.0 * k, 1e-9) && close(&r.v, k / 10.0, 1e-12));
        let r = german_map(1, Direction::SimToLin, &Real::int(1), &Real::int(1)).unwrap();
        assert!(close(&r.y, 2f64.sqrt(), 1e-12) && close(&r.v, 2f64.sqrt(), 1e-12));
        assert!(german_map(2, Direction::SimToLin, &Real::int(0), &Real::int(1)).is_err());
    }

    #[test]
    fn chain_examples() {
        let f = fr_chain(2, &rat(3, 10)).unwrap();
        assert!(close(&f.c_star, 0.3 * 3f64.powf(0.75), 1e-12));
        assert!(close(&f.omega, (0.3 * 3f64.powf(0.75)).powi(4) / 729.0, 1e-12));
        assert!(f.c_star_le_one);
        let w = omega_of(2, &Real::int(1)).unwrap();
        assert_eq!(w, Interval::point(rat(1, 729)));
        let inv = inverse_constant(2, &rat(1, 1)).unwrap();
        assert!(close(&inv.big_c, 3f64.powf(0.75), 1e-12) && inv.above_one);
        assert!(!fr_chain(2, &rat(1, 1)).unwrap().c_star_le_one);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_bt(2, None).unwrap().log_kappa, -6480);
        let r = kappa_bt(2, Some(&Interval::point(rat(0, 1)))).unwrap();
        assert!(close(r.log_omega.as_ref().unwrap(), -6.0 * 3f64.ln(), 1e-12));
        assert_eq!(r.fr_stronger, Some(true));
        let r = kappa_bt(2, Some(&Interval::point(rat(-2000, 1)))).unwrap();
        assert_eq!(r.fr_stronger, Some(false));
    }

    #[test]
    fn round_trip_bookkeeping() {
        for m in 1..5 {
            let r = round_trip(m, &rat(1, 2), &rat(1, 3), &rat(1000, 1)).unwrap();
            assert!(r.consistent, "{m}: {r:?}");
        }
    }
}
