//! Integer kernel for `psi`: residues `q N_i mod D` are stepped by addition.
//!
//! With tail `T = t_num / t_den`, every `||q xi_i||` is bracketed in the
//! unit `U = 2 D t_den` by
//! `l_i = max(2 s_i t_den - 2 q t_num D, 0)` and
//! `u_i = min(2 s_i t_den + 2 q t_num D, D t_den)`, where `s_i` is the
//! distance of `r_i` to `{0, D}`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::norm::Norm;
use crate::construct::ConstructedVector;
use crate::error::Result;
use crate::numkit::interval::rational_root;

#[derive(Clone, Debug)]
enum Combine {
    Max,
    Weighted(Vec<BigUint>),
    Power(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    pub m: usize,
    d: BigUint,
    nums: Vec<BigUint>,
    t_den2: BigUint,
    step: BigUint,
    half: BigUint,
    /// Denominator turning a key into a value (`U`, `U * wden` or `U^p`).
    key_den: BigUint,
    unit: BigUint,
    combine: Combine,
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub q: u64,
    r: Vec<BigUint>,
    width: BigUint,
}

fn to_uint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("non-negative")
}

impl Kernel {
    pub fn new(vec: &ConstructedVector, norm: &Norm) -> Result<Self> {
        norm.validate(vec.m)?;
        let d = vec.components.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums = vec
            .components
            .iter()
            .map(|x| {
                let frac = x.numer().mod_floor(x.denom());
                to_uint(&(frac * (&d / x.denom())))
            })
            .collect();
        let t = &vec.tail_bound;
        let d = to_uint(&d);
        let t_num = to_uint(t.numer());
        let t_den = to_uint(t.denom());
        let unit = BigUint::from(2u32) * &d * &t_den;
        let (combine, key_den) = match norm {
            Norm::Max => (Combine::Max, unit.clone()),
            Norm::WeightedMax(_) => {
                let (wn, wd) = norm.integer_weights().unwrap();
                (Combine::Weighted(wn.iter().map(to_uint).collect()), &unit * to_uint(&wd))
            }
            Norm::P(p) => (Combine::Power(*p), num_traits::pow(unit.clone(), *p as usize)),
        };
        Ok(Kernel {
            m: vec.m,
            half: &d * &t_den,
            step: BigUint::from(2u32) * &t_num * &d,
            t_den2: BigUint::from(2u32) * t_den,
            d,
            nums,
            key_den,
            unit,
            combine,
        })
    }

    pub fn state_at(&self, q: u64) -> State {
        let qb = BigUint::from(q);
        State { q, r: self.nums.iter().map(|n| (&qb * n) % &self.d).collect(), width: &qb * &self.step }
    }

    pub fn advance(&self, st: &mut State) {
        st.q += 1;
        for (r, n) in st.r.iter_mut().zip(&self.nums) {
            *r += n;
            if *r >= self.d {
                *r -= &self.d;
            }
        }
        st.width += &self.step;
    }

    /// Per-component `(upper, lower)` in unit `U`.
    pub fn bounds(&self, st: &State) -> Vec<(BigUint, BigUint)> {
        st.r
            .iter()
            .map(|r| {
                let other = &self.d - r;
                let s = if *r <= other { r } else { &other };
                let center = s * &self.t_den2;
                let up = &center + &st.width;
                let up = if up > self.half { self.half.clone() } else { up };
                let lo = if center > st.width { center - &st.width } else { BigUint::zero() };
                (up, lo)
            })
            .collect()
    }

    /// `(upper key, lower key)`; keys order like norm values.
    pub fn keys(&self, st: &State) -> (BigUint, BigUint) {
        let b = self.bounds(st);
        self.combine(&b)
    }

    pub fn combine(&self, b: &[(BigUint, BigUint)]) -> (BigUint, BigUint) {
        match &self.combine {
            Combine::Max => (
                b.iter().map(|x| &x.0).max().unwrap().clone(),
                b.iter().map(|x| &x.1).max().unwrap().clone(),
            ),
            Combine::Weighted(w) => (
                b.iter().zip(w).map(|(x, w)| &x.0 * w).max().unwrap(),
                b.iter().zip(w).map(|(x, w)| &x.1 * w).max().unwrap(),
            ),
            Combine::Power(p) => (
                b.iter().map(|x| num_traits::pow(x.0.clone(), *p as usize)).sum(),
                b.iter().map(|x| num_traits::pow(x.1.clone(), *p as usize)).sum(),
            ),
        }
    }

    /// Index of the component carrying the upper key.
    pub fn dominant_component(&self, st: &State) -> usize {
        let b = self.bounds(st);
        let score = |i: usize| match &self.combine {
            Combine::Weighted(w) => &b[i].0 * &w[i],
            _ => b[i].0.clone(),
        };
        (0..self.m).max_by(|&i, &j| score(i).cmp(&score(j)).then(j.cmp(&i))).unwrap()
    }

    /// Rational enclosure `[lower, upper]` of the norm value for a key pair.
    pub fn value(&self, key_u: &BigUint, key_l: &BigUint) -> (BigRational, BigRational) {
        let den = BigInt::from(self.key_den.clone());
        match self.combine {
            Combine::Power(p) if p > 1 => {
                let unit = BigRational::from_integer(BigInt::from(self.unit.clone()));
                let hi = rational_root(&BigRational::from_integer(BigInt::from(key_u.clone())), p, 80).hi / &unit;
                let lo = rational_root(&BigRational::from_integer(BigInt::from(key_l.clone())), p, 80).lo / unit;
                let lo = if lo.is_negative() { BigRational::zero() } else { lo };
                (lo, hi)
            }
            _ => (
                BigRational::new(BigInt::from(key_l.clone()), den.clone()),
                BigRational::new(BigInt::from(key_u.clone()), den),
            ),
        }
    }

    /// Residues of an integer combination `sum y_i xi_i`: `(upper, lower)` keys in unit `U`.
    pub fn linear_keys(&self, y: &[i64]) -> (BigUint, BigUint) {
        let d = BigInt::from(self.d.clone());
        let mut s = BigInt::zero();
        let mut l1 = 0u64;
        for (yi, n) in y.iter().zip(&self.nums) {
            s += BigInt::from(*yi) * BigInt::from(n.clone());
            l1 += yi.unsigned_abs();
        }
        let r = to_uint(&s.mod_floor(&d));
        let st = State { q: 0, r: vec![r], width: BigUint::from(l1) * &self.step };
        let other = &self.d - &st.r[0];
        let s = if st.r[0] <= other { st.r[0].clone() } else { other };
        let center = s * &self.t_den2;
        let up = &center + &st.width;
        let up = if up > self.half { self.half.clone() } else { up };
        let lo = if center > st.width { center - &st.width } else { BigUint::zero() };
        (up, lo)
    }

    pub fn linear_value(&self, key_u: &BigUint, key_l: &BigUint) -> (BigRational, BigRational) {
        let den = BigInt::from(self.unit.clone());
        (
            BigRational::new(BigInt::from(key_l.clone()), den.clone()),
            BigRational::new(BigInt::from(key_u.clone()), den),
        )
    }
}
