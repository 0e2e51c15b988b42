//! Twisted modules `M^alpha_{f/g}[s]` and Bernstein-Sato functional
//! equations.
//!
//! An element `h(s) / (f^a g^b) * f^s / g^(s + alpha)` is stored as the
//! triple `(h, a, b)`, with `h` a polynomial in the germ variables and `s`
//! (the last variable). The symbol `f^s / g^(s + alpha)` itself is never
//! expanded; `alpha` only enters through the derivation rule.

mod operator;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{MPoly, Mono, Rat, SPoly, UPoly};

pub use operator::{DiffOperator, OperatorDisplay};

/// The data `(f, g, alpha)` shared by all elements of one module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedModule {
    nvars: usize,
    f: MPoly,
    g: MPoly,
    alpha: Rat,
    fs: MPoly,
    gs: MPoly,
    df: Vec<MPoly>,
    dg: Vec<MPoly>,
}

impl TwistedModule {
    /// `f` and `g` are nonzero polynomials in the same variables.
    pub fn new(f: MPoly, g: MPoly, alpha: Rat) -> Arc<TwistedModule> {
        assert_eq!(f.nvars(), g.nvars(), "f and g must share their variables");
        assert!(!f.is_zero() && !g.is_zero(), "f and g must be nonzero");
        let n = f.nvars();
        let fs = f.extend_vars(n + 1);
        let gs = g.extend_vars(n + 1);
        let df = (0..n).map(|i| fs.derivative(i)).collect();
        let dg = (0..n).map(|i| gs.derivative(i)).collect();
        Arc::new(TwistedModule {
            nvars: n,
            f,
            g,
            alpha,
            fs,
            gs,
            df,
            dg,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn f(&self) -> &MPoly {
        &self.f
    }

    pub fn g(&self) -> &MPoly {
        &self.g
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    /// The variable `s` inside `Q[x, s]`.
    pub fn s(&self) -> MPoly {
        MPoly::var(self.nvars + 1, self.nvars)
    }

    /// Embed a polynomial in `x` into `Q[x, s]`.
    pub fn lift(&self, p: &MPoly) -> MPoly {
        p.extend_vars(self.nvars + 1)
    }

    /// Embed a polynomial in `s` into `Q[x, s]`.
    pub fn lift_s(&self, b: &SPoly) -> MPoly {
        MPoly::from_upoly(self.nvars + 1, self.nvars, b)
    }
}

/// `h(s) / (f^a g^b) * f^s / g^(s + alpha)`.
#[derive(Clone)]
pub struct TwistedElement {
    module: Arc<TwistedModule>,
    h: MPoly,
    a: u32,
    b: u32,
}

impl TwistedElement {
    /// Build and cancel factors of `f` and `g` dividing `h`.
    pub fn new(module: &Arc<TwistedModule>, h: MPoly, a: u32, b: u32) -> TwistedElement {
        assert_eq!(h.nvars(), module.nvars + 1, "h lives in Q[x, s]");
        let mut e = TwistedElement {
            module: Arc::clone(module),
            h,
            a,
            b,
        };
        e.canonicalize();
        e
    }

    /// The generator `f^s / g^(s + alpha)`.
    pub fn generator(module: &Arc<TwistedModule>) -> TwistedElement {
        TwistedElement::new(module, MPoly::one(module.nvars + 1), 0, 0)
    }

    pub fn module(&self) -> &Arc<TwistedModule> {
        &self.module
    }

    pub fn h(&self) -> &MPoly {
        &self.h
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.h.is_zero() {
            self.a = 0;
            self.b = 0;
            return;
        }
        while self.a > 0 {
            match self.h.div_exact(&self.module.fs) {
                Some(q) => {
                    self.h = q;
                    self.a -= 1;
                }
                None => break,
            }
        }
        while self.b > 0 {
            match self.h.div_exact(&self.module.gs) {
                Some(q) => {
                    self.h = q;
                    self.b -= 1;
                }
                None => break,
            }
        }
    }

    /// Numerator over the denominator `f^a g^b` with `a >= self.a`,
    /// `b >= self.b`.
    fn numerator_over(&self, a: u32, b: u32) -> MPoly {
        let m = &self.module;
        &(&self.h * &m.fs.pow(a - self.a)) * &m.gs.pow(b - self.b)
    }

    pub fn add(&self, other: &TwistedElement) -> TwistedElement {
        assert!(Arc::ptr_eq(&self.module, &other.module) || self.module == other.module);
        let a = self.a.max(other.a);
        let b = self.b.max(other.b);
        let h = &self.numerator_over(a, b) + &other.numerator_over(a, b);
        TwistedElement::new(&self.module, h, a, b)
    }

    pub fn sub(&self, other: &TwistedElement) -> TwistedElement {
        self.add(&other.scale_poly(&MPoly::constant(self.module.nvars + 1, Rat::from(-1))))
    }

    /// Multiply by a coefficient in `Q[x, s]`.
    pub fn scale_poly(&self, c: &MPoly) -> TwistedElement {
        TwistedElement::new(&self.module, &self.h * c, self.a, self.b)
    }

    /// Substitute `s -> s + m` in `h`.
    fn shift_s(&self, h: &MPoly, m: &Rat) -> MPoly {
        h.translate(self.module.nvars, m)
    }

    /// Print with the germ variable names.
    pub fn display(&self, names: &[&str]) -> String {
        let mut all: Vec<&str> = names.to_vec();
        all.push("s");
        let h = self.h.display(&all).to_string();
        let mut den = Vec::new();
        if self.a > 0 {
            den.push(if self.a == 1 { "f".to_string() } else { format!("f^{}", self.a) });
        }
        if self.b > 0 {
            den.push(if self.b == 1 { "g".to_string() } else { format!("g^{}", self.b) });
        }
        if den.is_empty() {
            format!("({h}) F")
        } else {
            format!("({h})/({}) F", den.join("*"))
        }
    }
}

impl PartialEq for TwistedElement {
    /// Cross-multiplication: `h1 f^a2 g^b2 = h2 f^a1 g^b1`.
    fn eq(&self, other: &TwistedElement) -> bool {
        if self.module != other.module {
            return false;
        }
        let a = self.a.max(other.a);
        let b = self.b.max(other.b);
        self.numerator_over(a, b) == other.numerator_over(a, b)
    }
}

impl fmt::Debug for TwistedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.module.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.display(&refs))
    }
}

/// `d/dx_i` acting on an element.
pub fn apply_derivation(i: usize, e: &TwistedElement) -> TwistedElement {
    let m = &e.module;
    let (f, g) = (&m.fs, &m.gs);
    let (df, dg) = (&m.df[i], &m.dg[i]);
    let h = &e.h;
    let n = m.nvars + 1;
    let s = m.s();
    let s_alpha = &s + &MPoly::constant(n, m.alpha.clone());
    let a = MPoly::constant(n, Rat::from(e.a));
    let b = MPoly::constant(n, Rat::from(e.b));
    let fg = f * g;
    let mut num = &h.derivative(i) * &fg;
    num = &num - &(&(&(&a * h) * df) * g);
    num = &num - &(&(&(&b * h) * f) * dg);
    num = &num + &(&(&(&s * df) * h) * g);
    num = &num - &(&(&(&s_alpha * h) * dg) * f);
    TwistedElement::new(m, num, e.a + 1, e.b + 1)
}

/// Apply a normally ordered operator: derivatives first, then coefficients.
pub fn apply_operator(op: &DiffOperator, e: &TwistedElement) -> TwistedElement {
    assert_eq!(op.nvars(), e.module.nvars, "operator and module variables differ");
    let mut cache: std::collections::BTreeMap<Vec<u32>, TwistedElement> = std::collections::BTreeMap::new();
    cache.insert(vec![0; op.nvars()], e.clone());
    let mut out = TwistedElement::new(&e.module, MPoly::zero(e.module.nvars + 1), 0, 0);
    for (b, c) in op.terms() {
        let d = derivative_of(&mut cache, &b.0);
        out = out.add(&d.scale_poly(c));
    }
    out
}

fn derivative_of(
    cache: &mut std::collections::BTreeMap<Vec<u32>, TwistedElement>,
    idx: &[u32],
) -> TwistedElement {
    if let Some(e) = cache.get(idx) {
        return e.clone();
    }
    let i = idx.iter().rposition(|&k| k > 0).expect("nonzero index cached at the root");
    let mut prev = idx.to_vec();
    prev[i] -= 1;
    let base = derivative_of(cache, &prev);
    let out = apply_derivation(i, &base);
    cache.insert(idx.to_vec(), out.clone());
    out
}

/// `t`: `h(s) -> h(s + 1) * f`.
pub fn act_t(e: &TwistedElement) -> TwistedElement {
    let h = &e.shift_s(&e.h, &Rat::one()) * &e.module.fs;
    TwistedElement::new(&e.module, h, e.a, e.b)
}

/// `d/dt`: `h(s) -> -s * h(s - 1)` with one more power of `f` below.
pub fn act_dt(e: &TwistedElement) -> TwistedElement {
    let minus_s = -&e.module.s();
    let h = &minus_s * &e.shift_s(&e.h, &Rat::from(-1));
    TwistedElement::new(&e.module, h, e.a + 1, e.b)
}

/// The module isomorphism `p(s) -> p(s - m)` moving `m` powers from `g` to
/// `f` in the denominator. Negative exponents are absorbed into `h`.
pub fn shift(e: &TwistedElement, m: i64) -> TwistedElement {
    let h = e.shift_s(&e.h, &Rat::from(-m));
    let mut a = e.a as i64 + m;
    let mut b = e.b as i64 - m;
    let mut h = h;
    if a < 0 {
        h = &h * &e.module.fs.pow((-a) as u32);
        a = 0;
    }
    if b < 0 {
        h = &h * &e.module.gs.pow((-b) as u32);
        b = 0;
    }
    TwistedElement::new(&e.module, h, a as u32, b as u32)
}

/// Which functional equation to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeqMode {
    /// `delta(s) f F = b(s) F`
    Numerator,
    /// `delta(s) (f/g) F = b(s) F`
    Quotient,
}

/// Outcome of checking a functional equation.
#[derive(Debug, Clone)]
pub struct Verification {
    pub holds: bool,
    pub lhs: TwistedElement,
    pub rhs: TwistedElement,
    /// `lhs - rhs`, zero when the equation holds.
    pub difference: TwistedElement,
}

/// The element the operator is applied to in each mode.
pub fn feq_source(module: &Arc<TwistedModule>, mode: FeqMode) -> TwistedElement {
    let f = module.fs.clone();
    match mode {
        FeqMode::Numerator => TwistedElement::new(module, f, 0, 0),
        FeqMode::Quotient => TwistedElement::new(module, f, 0, 1),
    }
}

/// Check `delta(s) f F = b(s) F` (or the quotient version) exactly.
pub fn verify_functional_equation(
    op: &DiffOperator,
    b: &SPoly,
    module: &Arc<TwistedModule>,
    mode: FeqMode,
) -> Verification {
    let lhs = apply_operator(op, &feq_source(module, mode));
    let rhs = TwistedElement::new(module, module.lift_s(b), 0, 0);
    let difference = lhs.sub(&rhs);
    Verification {
        holds: difference.is_zero(),
        lhs,
        rhs,
        difference,
    }
}

/// `prod_i prod_{j=1}^{m_i} (s + j/m_i)` over the numerator exponents.
///
/// Denominator exponents do not contribute; they are accepted so callers can
/// pass a whole monomial germ.
pub fn monomial_bs(num_exponents: &[u32], _den_exponents: &[u32]) -> SPoly {
    let mut b = UPoly::one();
    for &m in num_exponents {
        for j in 1..=m {
            b = &b * &UPoly::linear(&Rat::new(-(j as i64), m as i64));
        }
    }
    b
}

/// `prod_i m_i^(-m_i) d_i^(m_i)` on the numerator variables, which come
/// first; the denominator variables follow.
pub fn monomial_bs_operator(num_exponents: &[u32], den_exponents: &[u32]) -> DiffOperator {
    let n = num_exponents.len() + den_exponents.len();
    let mut exps = vec![0; n];
    let mut c = Rat::one();
    for (i, &m) in num_exponents.iter().enumerate() {
        exps[i] = m;
        c = c * Rat::from(m as i64).pow(m).recip();
    }
    let mut op = DiffOperator::zero(n);
    op.add_term(Mono(exps), MPoly::constant(n + 1, c));
    op
}

/// `x_1^m_1 ... x_k^m_k` and `x_(k+1)^m_(k+1) ...` in `n = k + l` variables.
pub fn monomial_germ(num_exponents: &[u32], den_exponents: &[u32]) -> (MPoly, MPoly) {
    let n = num_exponents.len() + den_exponents.len();
    let mut fe = vec![0; n];
    let mut ge = vec![0; n];
    fe[..num_exponents.len()].copy_from_slice(num_exponents);
    ge[num_exponents.len()..].copy_from_slice(den_exponents);
    (
        MPoly::monomial(Mono(fe), Rat::one()),
        MPoly::monomial(Mono(ge), Rat::one()),
    )
}

/// An element with `s` set to a number: `u / (f^a g^b) * f^s0 / g^(s0 + alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub s0: Rat,
    pub u: MPoly,
    pub a: u32,
    pub b: u32,
}

impl Specialization {
    /// Equality of the formal fractions `u1 / (f^a1 g^b1)` and `u2 / ...`.
    pub fn same_as(&self, other: &Specialization, f: &MPoly, g: &MPoly) -> bool {
        let a = self.a.max(other.a);
        let b = self.b.max(other.b);
        let lhs = &(&self.u * &f.pow(a - self.a)) * &g.pow(b - self.b);
        let rhs = &(&other.u * &f.pow(a - other.a)) * &g.pow(b - other.b);
        self.s0 == other.s0 && lhs == rhs
    }
}

pub fn specialize(e: &TwistedElement, s0: &Rat) -> Specialization {
    let n = e.module.nvars;
    let u = e.h.eval_var(n, s0).restrict_vars(n).expect("s eliminated");
    Specialization {
        s0: s0.clone(),
        u,
        a: e.a,
        b: e.b,
    }
}

/// Both sides of a functional equation at `s = s0`.
#[derive(Debug, Clone)]
pub struct SpecializedEquation {
    pub lhs: Specialization,
    pub rhs: Specialization,
    /// `b(s0)`.
    pub b_value: Rat,
    pub holds: bool,
}

/// Specialize `delta(s) f F = b(s) F` at `s = s0`. When `b(s0) = 0` the
/// left side must vanish.
pub fn specialize_equation(
    op: &DiffOperator,
    b: &SPoly,
    module: &Arc<TwistedModule>,
    mode: FeqMode,
    s0: &Rat,
) -> SpecializedEquation {
    let lhs = specialize(&apply_operator(op, &feq_source(module, mode)), s0);
    let b_value = b.eval(s0);
    let rhs = Specialization {
        s0: s0.clone(),
        u: MPoly::constant(module.nvars, b_value.clone()),
        a: 0,
        b: 0,
    };
    let holds = lhs.same_as(&rhs, &module.f, &module.g);
    SpecializedEquation {
        lhs,
        rhs,
        b_value,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn xy() -> (MPoly, MPoly) {
        (MPoly::var(2, 0), MPoly::var(2, 1))
    }

    #[test]
    fn derivation_examples() {
        let (x, y) = xy();
        let m = TwistedModule::new(x.clone(), MPoly::one(2), Rat::zero());
        let d = apply_derivation(0, &TwistedElement::generator(&m));
        assert_eq!(d, TwistedElement::new(&m, m.s(), 1, 0));
        assert_eq!((d.a(), d.b()), (1, 0));

        let m = TwistedModule::new(x.clone(), y.clone(), Rat::zero());
        let d = apply_derivation(0, &TwistedElement::generator(&m));
        assert_eq!(d, TwistedElement::new(&m, m.s(), 1, 0));

        let m = TwistedModule::new(x, &y * &y, q(1, 2));
        let d = apply_derivation(1, &TwistedElement::generator(&m));
        let s_alpha = &m.s() + &MPoly::constant(3, q(1, 2));
        let dg = m.lift(&y.scale(&Rat::from(2)));
        assert_eq!(d, TwistedElement::new(&m, &(-&s_alpha) * &dg, 0, 1));
    }

    #[test]
    fn t_and_dt() {
        let (x, y) = xy();
        let m = TwistedModule::new(x.clone(), y, Rat::zero());
        let e = TwistedElement::generator(&m);
        assert_eq!(act_t(&e), TwistedElement::new(&m, m.lift(&x), 0, 0));
        let e = TwistedElement::new(&m, &m.s() + &m.lift(&MPoly::var(2, 1)), 1, 2);
        let commutator = act_dt(&act_t(&e)).sub(&act_t(&act_dt(&e)));
        assert_eq!(commutator, e);
        assert_eq!(act_dt(&act_t(&e)).scale_poly(&MPoly::constant(3, Rat::from(-1))), e.scale_poly(&m.s()));
    }

    #[test]
    fn monomial_equations() {
        let b = monomial_bs(&[2], &[3]);
        assert_eq!(b, &UPoly::linear(&q(-1, 2)) * &UPoly::linear(&Rat::from(-1)));
        assert_eq!(monomial_bs(&[], &[4]), UPoly::one());
        assert_eq!(monomial_bs(&[1, 1], &[1]), UPoly::linear(&Rat::from(-1)).pow(2));
        let (f, g) = monomial_germ(&[2], &[3]);
        for alpha in [Rat::zero(), q(1, 2), Rat::one()] {
            let m = TwistedModule::new(f.clone(), g.clone(), alpha);
            let v = verify_functional_equation(&monomial_bs_operator(&[2], &[3]), &b, &m, FeqMode::Numerator);
            assert!(v.holds, "{:?}", v.difference);
        }
    }

    #[test]
    fn shift_round_trip() {
        let (x, y) = xy();
        let m = TwistedModule::new(&x * &x, y.clone(), q(1, 3));
        let e = TwistedElement::new(&m, &m.s() + &m.lift(&x), 0, 1);
        let once = shift(&e, 1);
        assert_eq!((once.a(), once.b()), (1, 0));
        assert_eq!(shift(&once, -1), e);
        let lhs = shift(&apply_derivation(0, &e), 2);
        let rhs = apply_derivation(0, &shift(&e, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn specialization_at_minus_one() {
        let x = MPoly::var(1, 0);
        let m = TwistedModule::new(x, MPoly::one(1), Rat::zero());
        let eq = specialize_equation(
            &DiffOperator::partial(1, 0),
            &UPoly::linear(&Rat::from(-1)),
            &m,
            FeqMode::Numerator,
            &Rat::from(-1),
        );
        assert!(eq.holds);
        assert!(eq.b_value.is_zero());
        assert!(eq.lhs.u.is_zero());
        let s = m.s();
        let e = TwistedElement::new(&m, &(&s * &s) + &s, 0, 0);
        assert!(specialize(&e, &Rat::zero()).u.is_zero());
    }
}
