//! Serde adapters: polynomials are stored as strings in fixed variable names.

use serde::{Deserialize, Deserializer, Serializer};

use crate::algebra::{MPoly, UPoly};
use crate::parser::parse_polynomial_in;

fn ser_poly<S: Serializer>(p: &MPoly, names: &[&str], s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&p.display(names))
}

fn de_poly<'de, D: Deserializer<'de>>(names: &[&str], d: D) -> Result<MPoly, D::Error> {
    let text = String::deserialize(d)?;
    let owned: Vec<String> = names.iter().map(|n| n.to_string()).collect();
    parse_polynomial_in(&text, &owned).map_err(serde::de::Error::custom)
}

/// Local chart coordinates `u, v`.
pub mod uv {
    use super::*;

    pub fn serialize<S: Serializer>(p: &MPoly, s: S) -> Result<S::Ok, S::Error> {
        ser_poly(p, &["u", "v"], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MPoly, D::Error> {
        de_poly(&["u", "v"], d)
    }
}

/// Plane coordinates `x, y`.
pub mod xy {
    use super::*;

    pub fn serialize<S: Serializer>(p: &MPoly, s: S) -> Result<S::Ok, S::Error> {
        ser_poly(p, &["x", "y"], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MPoly, D::Error> {
        de_poly(&["x", "y"], d)
    }
}

/// Optional polynomial in `x, y`.
pub mod opt_xy {
    use super::*;

    pub fn serialize<S: Serializer>(p: &Option<MPoly>, s: S) -> Result<S::Ok, S::Error> {
        match p {
            Some(p) => ser_poly(p, &["x", "y"], s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<MPoly>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| {
            parse_polynomial_in(&t, &["x".to_string(), "y".to_string()]).map_err(serde::de::Error::custom)
        })
        .transpose()
    }
}

/// Univariate polynomial in `t`.
pub mod upoly_t {
    use super::*;

    pub fn serialize<S: Serializer>(p: &UPoly, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&p.display("t"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UPoly, D::Error> {
        let text = String::deserialize(d)?;
        let p = parse_polynomial_in(&text, &["t".to_string()]).map_err(serde::de::Error::custom)?;
        Ok(p.to_upoly(0).expect("single variable"))
    }
}
