//! Exact rational helpers shared by every module.
//!
//! Rationals cross serialization boundaries as `"p/q"` strings, never as
//! floats. Parsing also accepts bare integers (`"3"`, `3`).

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Always renders the explicit denominator, e.g. `3/1`, `-7/2`.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Least common multiple of the denominators; used to clear a row to integers.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        let d = v.denom();
        let g = num::integer::gcd(acc.clone(), d.clone());
        acc = acc * d / g;
    }
    acc
}

pub fn is_binary(r: &Rational) -> bool {
    r.is_zero() || r.is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&to_pq(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let v = serde_json::Value::deserialize(d)?;
    from_json(&v).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {v}")))
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub fn from_json(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => n.as_i64().map(int),
        _ => None,
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_pq(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        v.iter()
            .map(|x| {
                from_json(x).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {x}")))
            })
            .collect()
    }
}

/// `Vec<(K, Rational)>` as a list of `[key, "p/q"]` pairs.
pub mod terms {
    use super::*;
    use serde::de::DeserializeOwned;
    use serde::ser::SerializeSeq;
    use serde::Serialize;

    pub fn serialize<K: Serialize, S: Serializer>(
        v: &[(K, Rational)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (k, r) in v {
            seq.serialize_element(&(k, to_pq(r)))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, K: DeserializeOwned, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(K, Rational)>, D::Error> {
        let v = Vec::<(K, serde_json::Value)>::deserialize(d)?;
        v.into_iter()
            .map(|(k, x)| {
                from_json(&x)
                    .map(|r| (k, r))
                    .ok_or_else(|| serde::de::Error::custom(format!("not a rational: {x}")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_roundtrip() {
        for r in [ratio(7, 2), int(-3), ratio(-1, 6), int(0)] {
            assert_eq!(parse_rational(&to_pq(&r)), Some(r));
        }
        assert_eq!(to_pq(&int(3)), "3/1");
        assert_eq!(parse_rational("4"), Some(int(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [ratio(1, 4), ratio(1, 6), int(2)];
        assert_eq!(denominator_lcm(&v), BigInt::from(12));
    }
}
