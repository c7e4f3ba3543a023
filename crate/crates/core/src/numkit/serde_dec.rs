//! Serde adapters writing big numbers as decimal strings (`"123"`, `"-7/12"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn parse_int<E: serde::de::Error>(s: &str) -> Result<BigInt, E> {
    s.trim().parse::<BigInt>().map_err(|e| E::custom(format!("bad integer {s:?}: {e}")))
}

fn parse_rat<E: serde::de::Error>(s: &str) -> Result<BigRational, E> {
    super::parse_rational(s).map_err(E::custom)
}

/// Accept both `"12"` and a bare JSON number.
#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    S(String),
    I(i64),
}

impl Num {
    fn text(self) -> String {
        match self {
            Num::S(s) => s,
            Num::I(i) => i.to_string(),
        }
    }
}

pub mod int {
    use super::*;
    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        parse_int(&Num::deserialize(d)?.text())
    }
}

pub mod rat {
    use super::*;
    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        parse_rat(&Num::deserialize(d)?.text())
    }
}

pub mod vec_int {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Num>::deserialize(d)?.into_iter().map(|n| parse_int(&n.text())).collect()
    }
}

pub mod vec_rat {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<Num>::deserialize(d)?.into_iter().map(|n| parse_rat(&n.text())).collect()
    }
}

pub mod opt_int {
    use super::*;
    pub fn serialize<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|v| v.to_string()).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<Num>::deserialize(d)?.map(|n| parse_int(&n.text())).transpose()
    }
}

pub mod opt_rat {
    use super::*;
    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|v| v.to_string()).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<Num>::deserialize(d)?.map(|n| parse_rat(&n.text())).transpose()
    }
}

pub mod vec_int_pair {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[(BigInt, BigInt)], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, BigInt)>, D::Error> {
        Vec::<(String, String)>::deserialize(d)?.into_iter().map(|(a, b)| Ok((parse_int(&a)?, parse_int(&b)?))).collect()
    }
}

pub mod vec_rat_pair {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[(BigRational, BigRational)], s: S) -> Result<S::Ok, S::Error> {
        x.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigRational, BigRational)>, D::Error> {
        Vec::<(Num, Num)>::deserialize(d)?
            .into_iter()
            .map(|(a, b)| Ok((parse_rat(&a.text())?, parse_rat(&b.text())?)))
            .collect()
    }
}

pub mod opt_rat_pair {
    use super::*;
    pub fn serialize<S: Serializer>(x: &Option<(BigRational, BigRational)>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|(a, b)| (a.to_string(), b.to_string())).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(BigRational, BigRational)>, D::Error> {
        match Option::<(String, String)>::deserialize(d)? {
            None => Ok(None),
            Some((a, b)) => Ok(Some((parse_rat(&a)?, parse_rat(&b)?))),
        }
    }
}

/// `Real` as its textual descriptor when that reads back, else as a tree.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RealTree {
    Pow(Box<RealRepr>, Box<RealRepr>),
    Mul(Box<RealRepr>, Box<RealRepr>),
    Div(Box<RealRepr>, Box<RealRepr>),
    Add(Box<RealRepr>, Box<RealRepr>),
    Neg(Box<RealRepr>),
    Ln(Box<RealRepr>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RealRepr {
    Text(String),
    Int(i64),
    Tree(RealTree),
}

fn to_repr(x: &super::Real) -> RealRepr {
    use super::Real as R;
    let text = super::fmt_real(x);
    if super::parse_real(&text).ok().as_ref() == Some(x) {
        return RealRepr::Text(text);
    }
    let b = |r: &R| Box::new(to_repr(r));
    RealRepr::Tree(match x {
        R::Pow(a, e) => RealTree::Pow(b(a), b(e)),
        R::Mul(a, c) => RealTree::Mul(b(a), b(c)),
        R::Div(a, c) => RealTree::Div(b(a), b(c)),
        R::Add(a, c) => RealTree::Add(b(a), b(c)),
        R::Neg(a) => RealTree::Neg(b(a)),
        R::Ln(a) => RealTree::Ln(b(a)),
        R::Rat(_) | R::Surd(_) => return RealRepr::Text(text),
    })
}

fn from_repr(r: RealRepr) -> crate::error::Result<super::Real> {
    use super::Real as R;
    let b = |r: Box<RealRepr>| from_repr(*r).map(Box::new);
    Ok(match r {
        RealRepr::Text(t) => super::parse_real(&t)?,
        RealRepr::Int(i) => R::int(i),
        RealRepr::Tree(t) => match t {
            RealTree::Pow(a, e) => R::Pow(b(a)?, b(e)?),
            RealTree::Mul(a, c) => R::Mul(b(a)?, b(c)?),
            RealTree::Div(a, c) => R::Div(b(a)?, b(c)?),
            RealTree::Add(a, c) => R::Add(b(a)?, b(c)?),
            RealTree::Neg(a) => R::Neg(b(a)?),
            RealTree::Ln(a) => R::Ln(b(a)?),
        },
    })
}

impl Serialize for super::Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_repr(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for super::Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        from_repr(RealRepr::deserialize(d)?).map_err(D::Error::custom)
    }
}
