//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::Rat;
use super::upoly::UPoly;
use super::AlgebraError;

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with the first variable largest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Mono {
        Mono(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `nvars` variables of total degree at most `degree`, in
/// ascending graded-lexicographic order.
pub fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut layer = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut layer, &mut cur, 0, d);
        layer.sort();
        out.extend(layer);
    }
    out
}

fn fill_degree(out: &mut Vec<Mono>, cur: &mut Vec<u32>, idx: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Mono(Vec::new()));
        }
        return;
    }
    if idx == cur.len() - 1 {
        cur[idx] = left;
        out.push(Mono(cur.clone()));
        cur[idx] = 0;
        return;
    }
    for e in 0..=left {
        cur[idx] = e;
        fill_degree(out, cur, idx + 1, left - e);
    }
    cur[idx] = 0;
}

/// A polynomial in a fixed number of variables. Zero coefficients are never
/// stored. Variable names are not part of the value; they are supplied when
/// printing or parsing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> MPoly {
        let mut p = MPoly::zero(nvars);
        p.add_term(Mono::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(Mono(e), Rat::one())
    }

    pub fn monomial(m: Mono, c: Rat) -> MPoly {
        let mut p = MPoly::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, Rat)>) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Mono::one(self.nvars))
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, Rat)> {
        self.terms.into_iter()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.nvars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Largest term in the graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    /// Lowest total degree of a term, i.e. the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(Mono::degree)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// The lowest-degree homogeneous part.
    pub fn initial_form(&self) -> MPoly {
        match self.order() {
            None => self.clone(),
            Some(d) => MPoly {
                nvars: self.nvars,
                terms: self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.degree() == d)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            },
        }
    }

    /// Homogeneous part of degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MPoly {
        let mut result = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Leading coefficient normalized to one (zero stays zero).
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[var] -= 1;
            out.add_term(nm, c * &Rat::from(e));
        }
        out
    }

    /// Replace every variable `i` by `images[i]`; all images must share one
    /// variable count, which becomes the variable count of the result.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "substitution needs one image per variable");
        let target = images.first().map_or(0, MPoly::nvars);
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(p.nvars)]).collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = out + term;
        }
        out
    }

    /// Evaluate a single variable at a rational value; the variable count is
    /// kept.
    pub fn eval_var(&self, var: usize, value: &Rat) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut nm = m.clone();
            nm.0[var] = 0;
            out.add_term(nm, c * &value.pow(e));
        }
        out
    }

    /// Evaluate all variables.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, v)| acc * v.pow(e))
            })
            .sum()
    }

    /// `p(.., x_var + shift, ..)`.
    pub fn translate(&self, var: usize, shift: &Rat) -> MPoly {
        if shift.is_zero() {
            return self.clone();
        }
        let mut images: Vec<MPoly> = (0..self.nvars).map(|i| MPoly::var(self.nvars, i)).collect();
        images[var] = &images[var] + &MPoly::constant(self.nvars, shift.clone());
        self.substitute(&images)
    }

    /// Largest `k` such that `x_var^k` divides `self`.
    pub fn valuation(&self, var: usize) -> Result<u32, AlgebraError> {
        self.terms
            .keys()
            .map(|m| m.0[var])
            .min()
            .ok_or(AlgebraError::ZeroValuation)
    }

    /// Divide by `x_var^k`; every term must be divisible.
    pub fn div_var_power(&self, var: usize, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut nm = m.clone();
                    assert!(nm.0[var] >= k, "monomial not divisible");
                    nm.0[var] -= k;
                    (nm, c.clone())
                })
                .collect(),
        }
    }

    /// Drop all terms whose exponent in `var` is at least `bound`.
    pub fn truncate_var(&self, var: usize, bound: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated modulo `x_var^bound`.
    pub fn mul_truncated(&self, other: &MPoly, var: usize, bound: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            if ma.0[var] >= bound {
                continue;
            }
            for (mb, cb) in &other.terms {
                if ma.0[var] + mb.0[var] >= bound {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `x_var^k`, as a polynomial free of `x_var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut nm = m.clone();
            nm.0[var] = 0;
            out[e].add_term(nm, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut nm = m.clone();
                nm.0[var] += k as u32;
                out.add_term(nm, a.clone());
            }
        }
        out
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = &c / &lc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Maximal `e` with `divisor^e | self`, together with the cofactor.
    ///
    /// `divisor` must be non-constant and `self` nonzero.
    pub fn divide_out(&self, divisor: &MPoly) -> Result<(MPoly, u32), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroValuation);
        }
        if divisor.is_constant() {
            return Err(AlgebraError::ConstantDivisor);
        }
        let mut cur = self.clone();
        let mut e = 0;
        while let Some(next) = cur.div_exact(divisor) {
            cur = next;
            e += 1;
        }
        Ok((cur, e))
    }

    /// Same polynomial viewed in `nvars >= self.nvars` variables; the new
    /// variables are appended.
    pub fn extend_vars(&self, nvars: usize) -> MPoly {
        assert!(nvars >= self.nvars);
        MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Mono(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drop trailing variables that do not occur.
    pub fn restrict_vars(&self, nvars: usize) -> Option<MPoly> {
        let mut out = MPoly::zero(nvars);
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|&e| e != 0) {
                return None;
            }
            out.add_term(Mono(m.0[..nvars].to_vec()), c.clone());
        }
        Some(out)
    }

    /// The variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// View as a univariate polynomial in `var`; fails if another variable
    /// occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut coeffs = vec![Rat::zero(); self.degree_in(var).map_or(0, |d| d as usize + 1)];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e != 0) {
                return None;
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(nvars: usize, var: usize, u: &UPoly) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (k, c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display(&refs))
    }
}

/// Canonical text form: terms in descending graded-lexicographic order,
/// coefficient first, `*` between factors and `^` for powers.
pub struct PolyDisplay<'a> {
    poly: &'a MPoly,
    names: &'a [&'a str],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].to_string()),
                    _ => factors.push(format!("{}^{}", self.names[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;

    fn x() -> MPoly {
        MPoly::var(2, 0)
    }
    fn y() -> MPoly {
        MPoly::var(2, 1)
    }

    #[test]
    fn blowup_chart_substitution() {
        let f = &y().pow(3) + &x().pow(5);
        let chart = [x(), &x() * &y()];
        let pulled = f.substitute(&chart);
        let expected = &(&x().pow(3) * &y().pow(3)) + &x().pow(5);
        assert_eq!(pulled, expected);
        assert_eq!(y().substitute(&chart), &x() * &y());
        assert_eq!(x().substitute(&[x(), y()]), x());
    }

    #[test]
    fn valuations() {
        let p = &(&x().pow(3) * &y().pow(3)) + &x().pow(5);
        assert_eq!(p.valuation(0).unwrap(), 3);
        assert_eq!(MPoly::one(2).valuation(0).unwrap(), 0);
        assert_eq!((&x().pow(2) * &y()).valuation(1).unwrap(), 1);
        assert!(MPoly::zero(2).valuation(0).is_err());
    }

    #[test]
    fn divide_out_strict_transform() {
        let p = &(&x().pow(3) * &y().pow(3)) + &x().pow(5);
        let (cof, e) = p.divide_out(&x()).unwrap();
        assert_eq!(e, 3);
        assert_eq!(cof, &y().pow(3) + &x().pow(2));
        assert!(p.div_exact(&y()).is_none());
    }

    #[test]
    fn display_is_descending_grlex() {
        let p = &(&y().pow(3) + &x().pow(5)) - &x().scale(&q(3, 2));
        assert_eq!(p.display(&["x", "y"]).to_string(), "x^5 + y^3 - 3/2*x");
        assert_eq!(MPoly::zero(2).display(&["x", "y"]).to_string(), "0");
        assert_eq!((-&MPoly::one(2)).display(&["x", "y"]).to_string(), "-1");
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_up_to(2, 2);
        let shown: Vec<Vec<u32>> = ms.iter().map(|m| m.0.clone()).collect();
        assert_eq!(
            shown,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(monomials_up_to(3, 4).len(), 35);
    }
}
