//! Normally ordered differential operators with coefficients in `Q[x, s]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{MPoly, Mono, Rat};

/// A finite sum of terms `c(x, s) * d^B`, with all derivatives to the right.
///
/// Coefficients live in `nvars + 1` variables; the last one is `s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    nvars: usize,
    terms: BTreeMap<Mono, MPoly>,
}

impl DiffOperator {
    pub fn zero(nvars: usize) -> DiffOperator {
        DiffOperator {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(nvars: usize) -> DiffOperator {
        DiffOperator::coefficient(MPoly::one(nvars + 1))
    }

    /// Multiplication by a coefficient in `Q[x, s]`.
    pub fn coefficient(c: MPoly) -> DiffOperator {
        let nvars = c.nvars() - 1;
        let mut op = DiffOperator::zero(nvars);
        op.add_term(Mono::one(nvars), c);
        op
    }

    /// `d/dx_i`.
    pub fn partial(nvars: usize, i: usize) -> DiffOperator {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut op = DiffOperator::zero(nvars);
        op.add_term(Mono(e), MPoly::one(nvars + 1));
        op
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms `(B, c)` in ascending order of the derivative multi-index.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &MPoly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, b: Mono, c: MPoly) {
        assert_eq!(b.0.len(), self.nvars);
        assert_eq!(c.nvars(), self.nvars + 1);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b.clone()).or_insert_with(|| MPoly::zero(self.nvars + 1));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> DiffOperator {
        let mut out = DiffOperator::zero(self.nvars);
        for (b, p) in &self.terms {
            out.add_term(b.clone(), p.scale(c));
        }
        out
    }

    /// True when no coefficient involves an `x` variable.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|c| {
            c.terms()
                .all(|(m, _)| m.0[..self.nvars].iter().all(|&e| e == 0))
        })
    }

    /// True when no term carries a derivative.
    pub fn is_multiplication(&self) -> bool {
        self.terms.keys().all(|b| b.degree() == 0)
    }

    /// Product `self * other` where either `self` is a pure multiplication
    /// operator or `other` has coefficients free of `x`; in both cases the
    /// normally ordered product needs no commutation.
    pub fn compose_ordered(&self, other: &DiffOperator) -> Option<DiffOperator> {
        if !(self.is_multiplication() || other.has_constant_coefficients()) {
            return None;
        }
        let mut out = DiffOperator::zero(self.nvars);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                out.add_term(b1.mul(b2), c1 * c2);
            }
        }
        Some(out)
    }

    /// Text form in the operator grammar, with `names` for the `x`
    /// variables and `dnames` for the matching derivative symbols.
    pub fn display<'a>(&'a self, names: &'a [&'a str], dnames: &'a [&'a str]) -> OperatorDisplay<'a> {
        OperatorDisplay {
            op: self,
            names,
            dnames,
        }
    }
}

pub struct OperatorDisplay<'a> {
    op: &'a DiffOperator,
    names: &'a [&'a str],
    dnames: &'a [&'a str],
}

impl fmt::Display for OperatorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return write!(f, "0");
        }
        let mut cnames: Vec<&str> = self.names.to_vec();
        cnames.push("s");
        for (idx, (b, c)) in self.op.terms.iter().enumerate() {
            let dpart: Vec<String> = b
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.dnames[i].to_string()
                    } else {
                        format!("{}^{}", self.dnames[i], e)
                    }
                })
                .collect();
            let single = c.len() == 1;
            let neg = single && c.leading_coeff().is_negative();
            let shown = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff = shown.display(&cnames).to_string();
            if dpart.is_empty() {
                if single {
                    write!(f, "{coeff}")?;
                } else {
                    write!(f, "({coeff})")?;
                }
            } else if shown.is_one() {
                write!(f, "{}", dpart.join("*"))?;
            } else if single {
                write!(f, "{}*{}", coeff, dpart.join("*"))?;
            } else {
                write!(f, "({})*{}", coeff, dpart.join("*"))?;
            }
        }
        Ok(())
    }
}
