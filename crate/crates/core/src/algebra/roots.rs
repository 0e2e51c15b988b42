//! Rational roots of univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;
use super::upoly::UPoly;

/// Rational roots with multiplicities plus the rootless cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSplit {
    /// Distinct rational roots in ascending order.
    pub roots: Vec<(Rat, u32)>,
    /// Monic factor without rational roots (`1` if there is none).
    pub residual: UPoly,
}

impl RootSplit {
    pub fn residual_degree(&self) -> usize {
        self.residual.degree().unwrap_or(0)
    }
}

/// Split `u` into linear factors over Q and a residual without rational
/// roots.
///
/// Panics on the zero polynomial.
pub fn rational_roots(u: &UPoly) -> RootSplit {
    assert!(!u.is_zero(), "rational roots of the zero polynomial");
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    let mut residual = UPoly::one();
    for (factor, mult) in u.squarefree_decomposition() {
        let mut rest = factor;
        for r in squarefree_rational_roots(&rest) {
            rest = rest.div_exact(&UPoly::linear(&r)).expect("root divides");
            roots.push((r, mult));
        }
        residual = &residual * &rest.pow(mult);
    }
    roots.sort();
    RootSplit {
        roots,
        residual: residual.monic(),
    }
}

fn squarefree_rational_roots(p: &UPoly) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut p = p.clone();
    if p.coeff(0).is_zero() {
        out.push(Rat::zero());
        p = p.div_exact(&UPoly::var()).expect("t divides");
    }
    if p.is_constant() {
        return out;
    }
    let ints = integer_coefficients(&p);
    let a0 = ints.first().cloned().unwrap();
    let an = ints.last().cloned().unwrap();
    let nums = divisors(&a0.abs());
    let dens = divisors(&an.abs());
    let mut remaining = p.degree().unwrap();
    'outer: for d in &dens {
        for n in &nums {
            for sign in [1i32, -1] {
                let cand = Rat::new(n * BigInt::from(sign), d.clone());
                if p.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                    remaining -= 1;
                    if remaining == 0 {
                        break 'outer;
                    }
                }
            }
        }
    }
    out
}

fn integer_coefficients(p: &UPoly) -> Vec<BigInt> {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (Rat::from(l.clone()) * c).numer().clone())
        .collect()
}

/// Positive divisors of a positive integer, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    assert!(n.is_positive());
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            primes.push((p.clone(), e));
        }
        p += 1;
        // Past this bound trial division is hopeless; treat the rest as prime.
        if p.to_u64().map_or(true, |v| v > 10_000_000) {
            break;
        }
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;

    #[test]
    fn examples() {
        let t = UPoly::var();
        let p = &t.pow(2) * &UPoly::from_ints(&[-1, 1]);
        let split = rational_roots(&p);
        assert_eq!(split.roots, vec![(Rat::zero(), 2), (Rat::one(), 1)]);
        assert_eq!(split.residual_degree(), 0);

        let split = rational_roots(&UPoly::from_ints(&[1, 0, 1]));
        assert!(split.roots.is_empty());
        assert_eq!(split.residual_degree(), 2);

        let split = rational_roots(&UPoly::from_ints(&[-3, 2]));
        assert_eq!(split.roots, vec![(q(3, 2), 1)]);
        assert_eq!(split.residual_degree(), 0);
    }

    #[test]
    fn rational_coefficients() {
        // (t - 2/3)(t + 5/4)(t^2 - 2)
        let p = &(&UPoly::linear(&q(2, 3)) * &UPoly::linear(&q(-5, 4))) * &UPoly::from_ints(&[-2, 0, 1]);
        let split = rational_roots(&p);
        assert_eq!(split.roots, vec![(q(-5, 4), 1), (q(2, 3), 1)]);
        assert_eq!(split.residual, UPoly::from_ints(&[-2, 0, 1]));
    }
}
