//! Binary digit-set families built on `a_n = 2^{c_n}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numkit::DigitStream;
use crate::phi::{phi_eval, ApproxFn};

/// Longest digit string a sampled member may carry.
pub const MAX_SAMPLE_POSITIONS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Free digits on `[floor(c_{mn+1}(gamma+eps))+1, c_{mn+1}-1]`, every coordinate.
    S { #[serde(with = "crate::numkit::serde_dec::rat")] gamma: BigRational, #[serde(with = "crate::numkit::serde_dec::rat")] eps: BigRational },
    Q { #[serde(with = "crate::numkit::serde_dec::rat")] gamma1: BigRational, #[serde(with = "crate::numkit::serde_dec::rat")] gamma2: BigRational },
    /// `Q` with coordinate 1 forced to digit 1 at `floor(gamma1 h_n)`.
    Q1Star { #[serde(with = "crate::numkit::serde_dec::rat")] gamma1: BigRational, #[serde(with = "crate::numkit::serde_dec::rat")] gamma2: BigRational },
    /// `Q`-type layout with per-level `gamma1(n)` and digits on `J_n` copied from `Psi(H_n)/H_n`.
    J { psi: ApproxFn },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordLayout {
    /// Inclusive, sorted, disjoint.
    pub free: Vec<(u64, u64)>,
    /// Digits prescribed away from the base pattern.
    pub fixed: BTreeMap<u64, u8>,
}

/// A maximal run of free digits and the position `p` up to which the digits
/// following it are fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeBlock {
    pub lo: u64,
    pub hi: u64,
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSetFamily {
    pub m: usize,
    pub kind: FamilyKind,
    pub exponents: Vec<u64>,
    pub levels: usize,
    pub coords: Vec<CoordLayout>,
}

/// `c_j = j s` for `j <= m`; then `c_{mn+1} = ceil(gamma2 h_n)`, `c_{mn+i} = i c_{mn+1}`
/// and `h_{n+1} = c_{m(n+1)}`.
pub fn tor_exponents(m: usize, gamma2: &BigRational, s: u64, levels: usize) -> Result<Vec<u64>> {
    if m < 2 || s == 0 {
        return invalid("need m >= 2 and s >= 1");
    }
    if gamma2 <= &BigRational::one() {
        return invalid("gamma2 must exceed 1");
    }
    let mut c: Vec<u64> = (1..=m as u64).map(|j| j * s).collect();
    for _ in 1..=levels {
        let h = BigRational::from_integer(BigInt::from(*c.last().unwrap()));
        let first = (gamma2 * h).ceil().to_integer().to_u64().ok_or_else(|| Error::Budget("exponent overflow".into()))?;
        for i in 1..=m as u64 {
            c.push(first.checked_mul(i).ok_or_else(|| Error::Budget("exponent overflow".into()))?);
        }
    }
    Ok(c)
}

fn ceil_mul(g: &BigRational, h: u64) -> u64 {
    (g * BigRational::from_integer(h.into())).ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

fn floor_mul(g: &BigRational, h: u64) -> u64 {
    (g * BigRational::from_integer(h.into())).floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

fn check_q_params(m: usize, g1: &BigRational, g2: &BigRational, star: bool) -> Result<()> {
    let one = BigRational::one();
    let mr = BigRational::from_integer(m.into());
    if g1 <= &(&one + &one / &mr) {
        return invalid(format!("gamma1 > 1 + 1/m violated: gamma1 = {g1}"));
    }
    if g2 < g1 {
        return invalid(format!("gamma2 >= gamma1 violated: {g2} < {g1}"));
    }
    if &mr * (g1 - &one) <= *g2 {
        return invalid(format!("m(gamma1 - 1) > gamma2 violated: gamma2 = {g2}"));
    }
    if star && (g1 - &one) * (g1 - &one) <= *g2 {
        return invalid(format!("(gamma1 - 1)^2 > gamma2 violated: gamma2 = {g2}"));
    }
    Ok(())
}

/// Binary digits at positions `lo..=hi` of `x` in `[0, 1)`, from the lower end
/// of an enclosure.
fn digits_of(x: &BigRational, lo: u64, hi: u64) -> Vec<u8> {
    let scaled = (x * BigRational::from_integer(BigInt::one() << hi as usize)).floor().to_integer();
    (lo..=hi).map(|j| if scaled.bit(hi - j) { 1 } else { 0 }).collect()
}

impl DigitSetFamily {
    /// Digit of the base vector `xi_i` (1-based `i`, position `j`).
    pub fn base_digit(&self, i: usize, j: u64) -> u8 {
        let m = self.m;
        let mut k = i;
        while k <= self.exponents.len() {
            let c = self.exponents[k - 1];
            if c == j {
                return 1;
            }
            if c > j {
                break;
            }
            k += m;
        }
        0
    }

    /// `None` when position `j` of coordinate `i` is free.
    pub fn fixed_digit(&self, i: usize, j: u64) -> Option<u8> {
        let lay = &self.coords[i - 1];
        let idx = lay.free.partition_point(|b| b.1 < j);
        if idx < lay.free.len() && lay.free[idx].0 <= j {
            return None;
        }
        Some(lay.fixed.get(&j).copied().unwrap_or_else(|| self.base_digit(i, j)))
    }

    /// Last position influenced by the layout.
    pub fn max_position(&self) -> u64 {
        let f = self.coords.iter().filter_map(|c| c.free.last().map(|b| b.1)).max().unwrap_or(0);
        let x = self.coords.iter().filter_map(|c| c.fixed.keys().next_back().copied()).max().unwrap_or(0);
        f.max(x).max(*self.exponents.last().unwrap_or(&0))
    }

    /// Seeded uniform member; one digit stream per coordinate.
    pub fn sample(&self, seed: u64) -> Result<Vec<DigitStream>> {
        let n = self.max_position();
        if n > MAX_SAMPLE_POSITIONS {
            return Err(Error::Budget(format!("member needs {n} digits, limit {MAX_SAMPLE_POSITIONS}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(self.m);
        for i in 1..=self.m {
            let mut d = vec![0u32; n as usize];
            let mut k = i;
            while k <= self.exponents.len() {
                d[self.exponents[k - 1] as usize - 1] = 1;
                k += self.m;
            }
            for (&j, &v) in &self.coords[i - 1].fixed {
                d[j as usize - 1] = v as u32;
            }
            for &(lo, hi) in &self.coords[i - 1].free {
                for j in lo..=hi {
                    d[j as usize - 1] = rng.gen_range(0..2);
                }
            }
            out.push(DigitStream::new(2, d, 0)?);
        }
        Ok(out)
    }

    /// Maximal free runs of coordinate `i`, each paired with the end of the
    /// fixed stretch after it.  The last run has no known successor and is dropped.
    pub fn free_blocks(&self, i: usize) -> Vec<FreeBlock> {
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for &(lo, hi) in &self.coords[i - 1].free {
            match runs.last_mut() {
                Some(r) if r.1 + 1 == lo => r.1 = hi,
                _ => runs.push((lo, hi)),
            }
        }
        runs.windows(2).map(|w| FreeBlock { lo: w[0].0, hi: w[0].1, p: w[1].0 - 1 }).collect()
    }
}

/// Layout for `kind` over the exponents `c_1, c_2, ...`; levels `n >= 1`
/// are used while `c_{m(n+1)}` is known.
pub fn build_digit_family(kind: &FamilyKind, exponents: &[u64], m: usize) -> Result<DigitSetFamily> {
    if m < 2 {
        return invalid("digit families need m >= 2");
    }
    if exponents.len() < 2 * m {
        return invalid(format!("need at least {} exponents", 2 * m));
    }
    if exponents.windows(2).any(|w| w[0] >= w[1]) || exponents[0] == 0 {
        return invalid("exponents must be positive and strictly increasing");
    }
    let c = |j: usize| exponents[j - 1];
    let levels = exponents.len() / m - 1;
    let mut coords = vec![CoordLayout::default(); m];
    match kind {
        FamilyKind::S { gamma, eps } => {
            let g = gamma + eps;
            if gamma <= &BigRational::zero() || gamma >= &BigRational::one() || eps <= &BigRational::zero() {
                return invalid("S family needs 0 < gamma < 1 and eps > 0");
            }
            if g >= BigRational::one() {
                return invalid("gamma + eps < 1 violated");
            }
            for n in 0..=levels {
                let top = c(m * n + 1);
                let lo = floor_mul(&g, top) + 1;
                if lo < top {
                    for lay in coords.iter_mut() {
                        lay.free.push((lo, top - 1));
                    }
                }
            }
        }
        FamilyKind::Q { gamma1, gamma2 } | FamilyKind::Q1Star { gamma1, gamma2 } => {
            let star = matches!(kind, FamilyKind::Q1Star { .. });
            check_q_params(m, gamma1, gamma2, star)?;
            for n in 1..levels {
                let h = c(m * n);
                let first = c(m * n + 1);
                q_level(&mut coords, m, ceil_mul(gamma1, h), first, c(m * (n + 1)));
                if star {
                    let j = floor_mul(gamma1, h);
                    let lay = &mut coords[0];
                    lay.fixed.insert(j, 1);
                    remove_position(&mut lay.free, j);
                }
            }
        }
        FamilyKind::J { psi } => {
            for n in 1..levels {
                let h = c(m * n);
                let first = c(m * n + 1);
                let hb = BigInt::one() << h as usize;
                let val = phi_eval(psi, &BigRational::from_integer(hb.clone()), (h as u32).saturating_mul(4) + 64)?;
                // gamma1(n) = floor(-log Psi(H_n) / log H_n) + 1
                let lg = -val.mid().to_f64().unwrap_or(0.0).log2() / h as f64;
                let g1 = lg.floor() as i64 + 1;
                if g1 < 2 {
                    return invalid(format!("Psi decays too slowly at level {n}"));
                }
                let start = (g1 as u64) * h;
                let stop = start + n as u64;
                if stop >= first {
                    return invalid(format!("J_{n} reaches c_(mn+1) = {first}"));
                }
                let target = val.lo / BigRational::from_integer(hb);
                let ds = digits_of(&target, start, stop);
                q_level(&mut coords, m, stop + 1, first, c(m * (n + 1)));
                for lay in coords.iter_mut() {
                    for (k, &d) in ds.iter().enumerate() {
                        lay.fixed.insert(start + k as u64, d);
                    }
                }
            }
        }
    }
    let fam = DigitSetFamily { m, kind: kind.clone(), exponents: exponents.to_vec(), levels, coords };
    for i in 1..=m {
        for &(lo, hi) in &fam.coords[i - 1].free {
            if lo > hi {
                return invalid("empty free interval");
            }
            let mut k = i;
            while k <= exponents.len() {
                let e = exponents[k - 1];
                if e >= lo && e <= hi {
                    return invalid(format!("free interval [{lo}, {hi}] of coordinate {i} covers base digit at {e}"));
                }
                k += m;
            }
        }
    }
    Ok(fam)
}

/// Item (i) for every coordinate, (ii) for `3 <= i <= m-1`, (iii) for `i = m`.
fn q_level(coords: &mut [CoordLayout], m: usize, lo1: u64, first: u64, next_h: u64) {
    for (idx, lay) in coords.iter_mut().enumerate() {
        let i = idx as u64 + 1;
        if lo1 < first {
            lay.free.push((lo1, first - 1));
        }
        let lo = 2 * first + 1;
        let hi = if i as usize == m { next_h.saturating_sub(1) } else if i >= 3 { i * first - 1 } else { 0 };
        if i >= 3 && lo <= hi {
            lay.free.push((lo, hi));
        }
    }
}

fn remove_position(free: &mut Vec<(u64, u64)>, j: u64) {
    let mut out = Vec::with_capacity(free.len() + 1);
    for &(lo, hi) in free.iter() {
        if j < lo || j > hi {
            out.push((lo, hi));
            continue;
        }
        if lo < j {
            out.push((lo, j - 1));
        }
        if j < hi {
            out.push((j + 1, hi));
        }
    }
    *free = out;
}
