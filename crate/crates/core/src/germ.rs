//! Meromorphic germs `f/g`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{gcd, MPoly};
use crate::parser::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the numerator is zero")]
    ZeroNumerator,
    #[error("the denominator is zero")]
    ZeroDenominator,
    #[error("numerator and denominator use different variable counts")]
    VariableMismatch,
}

/// A reduced pair `(f, g)` representing `f/g`.
///
/// Common factors are cancelled and `g` is scaled to leading coefficient one,
/// so equal germs have equal representatives.
#[derive(Clone, PartialEq, Eq)]
pub struct MeromorphicGerm {
    f: MPoly,
    g: MPoly,
    vars: Vec<String>,
}

impl MeromorphicGerm {
    pub fn new(f: MPoly, g: MPoly, vars: Vec<String>) -> Result<MeromorphicGerm, GermError> {
        if f.nvars() != g.nvars() || f.nvars() != vars.len() {
            return Err(GermError::VariableMismatch);
        }
        if f.is_zero() {
            return Err(GermError::ZeroNumerator);
        }
        if g.is_zero() {
            return Err(GermError::ZeroDenominator);
        }
        let c = gcd(&f, &g);
        let f = f.div_exact(&c).expect("gcd divides");
        let g = g.div_exact(&c).expect("gcd divides");
        let lc = g.leading_coeff().recip();
        Ok(MeromorphicGerm {
            f: f.scale(&lc),
            g: g.scale(&lc),
            vars,
        })
    }

    /// A germ in the plane variables `x, y`.
    pub fn plane(f: MPoly, g: MPoly) -> Result<MeromorphicGerm, GermError> {
        MeromorphicGerm::new(f, g, vec!["x".into(), "y".into()])
    }

    pub fn f(&self) -> &MPoly {
        &self.f
    }

    pub fn g(&self) -> &MPoly {
        &self.g
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// True for the plane variables `x, y`.
    pub fn is_plane(&self) -> bool {
        self.vars == ["x", "y"]
    }

    /// `f/g` is a constant (both sides constant after reduction).
    pub fn is_constant(&self) -> bool {
        self.f.is_constant() && self.g.is_constant()
    }

    /// `g/f`.
    pub fn reciprocal(&self) -> MeromorphicGerm {
        MeromorphicGerm::new(self.g.clone(), self.f.clone(), self.vars.clone()).expect("nonzero sides")
    }

    pub fn f_text(&self) -> String {
        self.f.display(&self.var_refs()).to_string()
    }

    pub fn g_text(&self) -> String {
        self.g.display(&self.var_refs()).to_string()
    }
}

/// Parse `f` or `f/g` (any rational expression) into a reduced germ.
pub fn parse_germ(text: &str) -> Result<MeromorphicGerm, GermError> {
    let (num, den, vars) = parser::parse_fraction(text)?;
    if num.is_zero() {
        return Err(GermError::ZeroNumerator);
    }
    MeromorphicGerm::new(num, den, vars)
}

impl fmt::Display for MeromorphicGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.g.is_one() {
            write!(f, "{}", self.f_text())
        } else {
            write!(f, "({})/({})", self.f_text(), self.g_text())
        }
    }
}

impl fmt::Debug for MeromorphicGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeromorphicGerm({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct GermRepr {
    vars: Vec<String>,
    f: String,
    g: String,
}

impl Serialize for MeromorphicGerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GermRepr {
            vars: self.vars.clone(),
            f: self.f_text(),
            g: self.g_text(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeromorphicGerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<MeromorphicGerm, D::Error> {
        use serde::de::Error;
        let r = GermRepr::deserialize(d)?;
        let f = parser::parse_polynomial_in(&r.f, &r.vars).map_err(D::Error::custom)?;
        let g = parser::parse_polynomial_in(&r.g, &r.vars).map_err(D::Error::custom)?;
        MeromorphicGerm::new(f, g, r.vars).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let germ = parse_germ("(y^3 + x^5)/x").unwrap();
        assert_eq!(germ.f_text(), "x^5 + y^3");
        assert_eq!(germ.g_text(), "x");
        let germ = parse_germ("x^2*y^3").unwrap();
        assert!(germ.g().is_one());
        let germ = parse_germ("(x*y)/(x)").unwrap();
        assert_eq!(germ.f_text(), "y");
        assert!(germ.g().is_one());
    }

    #[test]
    fn normalization() {
        let germ = parse_germ("(2*x)/(4*y)").unwrap();
        assert_eq!(germ.to_string(), "(1/2*x)/(y)");
        assert_eq!(parse_germ(&germ.to_string()).unwrap(), germ);
        assert!(matches!(parse_germ("0/x"), Err(GermError::ZeroNumerator)));
        assert!(matches!(parse_germ("x/(y-y)"), Err(GermError::Parse(_))));
        assert!(parse_germ("(x*y)/(x*y)").unwrap().is_constant());
    }

    #[test]
    fn serde_round_trip() {
        let germ = parse_germ("(y^2+x^4)/(x^2+y^4)").unwrap();
        let json = serde_json::to_string(&germ).unwrap();
        let back: MeromorphicGerm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, germ);
    }
}
