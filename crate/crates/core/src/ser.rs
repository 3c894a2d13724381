//! Serde helpers: exact rationals and big integers travel as strings.

use num_bigint::BigInt;
use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::Enclosure;
use crate::poly::Q;

fn parse_q<E: Error>(s: &str) -> Result<Q, E> {
    s.trim().parse::<Q>().map_err(|_| E::custom(format!("not a rational: {s:?}")))
}

pub mod q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        parse_q(&String::deserialize(d)?)
    }
}

pub mod q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| parse_q(s)).collect()
    }
}

pub mod q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        Raw { lo: self.lo.to_string(), hi: self.hi.to_string() }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct W {
        #[serde(with = "q")]
        x: Q,
        #[serde(with = "q_vec")]
        v: Vec<Q>,
    }

    #[test]
    fn round_trip() {
        let w = W { x: Q::new(2.into(), 3.into()), v: vec![Q::from_integer((-5).into())] };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"x":"2/3","v":["-5"]}"#);
        assert_eq!(serde_json::from_str::<W>(&s).unwrap(), w);
        assert!(serde_json::from_str::<W>(r#"{"x":"a","v":[]}"#).is_err());
        let e = serde_json::to_value(Enclosure::int(3)).unwrap();
        assert_eq!(e, serde_json::json!({"lo": "3", "hi": "3"}));
    }
}
