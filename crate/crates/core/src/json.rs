//! JSON forms of the algebraic types.
//!
//! A rational function is `{"num": [[a, b, "c"], ...], "den": [[a, b, m], ...]}`
//! meaning `Σ c q^a t^b / Π (1 - q^a t^b)^m`, terms in canonical order and
//! coefficients as decimal strings. An expansion is
//! `{"n": n, "terms": [[[e_1, ..., e_n], coefficient], ...]}`.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::qtalg::{Denominator, Mono, QTPoly, QTRational, XExpansion};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalJson {
    num: Vec<(u32, u32, String)>,
    den: Vec<(u32, u32, u32)>,
}

impl Serialize for QTRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalJson {
            num: self.numerator().terms().map(|(m, c)| (m.q, m.t, c.to_string())).collect(),
            den: self.denominator().iter().map(|(&(a, b), &m)| (a, b, m)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QTRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = RationalJson::deserialize(d)?;
        let mut num = QTPoly::zero();
        for (a, b, c) in j.num {
            let c: BigInt = c.parse().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            num.add_term(Mono::new(a, b), c);
        }
        let mut den = Denominator::new();
        for (a, b, m) in j.den {
            let slot = den.entry((a, b)).or_insert(0);
            *slot = slot.checked_add(m).ok_or_else(|| D::Error::custom("multiplicity overflow"))?;
        }
        if den.values().sum::<u32>() > 4096 || den.keys().any(|&(a, b)| a > 4096 || b > 4096) {
            return Err(D::Error::custom("denominator too large"));
        }
        QTRational::new(num, den).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionJson {
    n: usize,
    terms: Vec<(Vec<u32>, QTRational)>,
}

impl Serialize for XExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExpansionJson { n: self.n(), terms: self.terms().map(|(e, c)| (e.clone(), c.clone())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for XExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ExpansionJson::deserialize(d)?;
        let mut out = XExpansion::new(j.n);
        for (e, c) in j.terms {
            if e.len() != j.n {
                return Err(D::Error::custom(format!("exponent vector of length {} in {} variables", e.len(), j.n)));
            }
            out.add_term(e, &c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QTRational {
        let num = QTPoly::from_terms([(0, 0, 1), (1, 0, 1)]);
        QTRational::with_factors(&num * &QTPoly::one_minus(0, 1), &[(1, 1)])
    }

    #[test]
    fn rational_round_trip() {
        let r = sample();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":[[0,0,"1"],[0,1,"-1"],[1,0,"1"],[1,1,"-1"]],"den":[[1,1,1]]}"#);
        let back: QTRational = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn rational_is_normalized_on_read() {
        let r: QTRational = serde_json::from_str(r#"{"num":[[0,0,"1"],[1,1,"-1"]],"den":[[1,1,1]]}"#).unwrap();
        assert!(r.equals(&QTRational::one()));
        assert!(r.is_polynomial());
        assert!(serde_json::from_str::<QTRational>(r#"{"num":[],"den":[[0,0,1]]}"#).is_err());
        assert!(serde_json::from_str::<QTRational>(r#"{"num":[[0,0,"x"]],"den":[]}"#).is_err());
    }

    #[test]
    fn expansion_round_trip() {
        let mut e = XExpansion::new(2);
        e.add_term(vec![1, 0], &sample());
        e.add_term(vec![0, 1], &QTRational::from_int(-3));
        let s = serde_json::to_string(&e).unwrap();
        let back: XExpansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(serde_json::from_str::<XExpansion>(r#"{"n":2,"terms":[[[1],{"num":[],"den":[]}]]}"#).is_err());
    }
}
