//! Serde adapters for exact rational matrices (`"p/q"` strings).

pub mod qmat {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

pub mod qmats {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(ms: &[Vec<Vec<Rational>>], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<Vec<String>>> =
            ms.iter().map(|m| m.iter().map(|r| r.iter().map(format_rational).collect()).collect()).collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<Rational>>>, D::Error> {
        let raw = Vec::<Vec<Vec<String>>>::deserialize(d)?;
        raw.iter()
            .map(|m| {
                m.iter()
                    .map(|r| r.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect())
                    .collect()
            })
            .collect()
    }
}
