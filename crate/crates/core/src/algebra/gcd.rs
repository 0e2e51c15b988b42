//! Multivariate gcd and squarefree decomposition over the rationals.
//!
//! The gcd is computed recursively on the highest occurring variable with a
//! primitive pseudo-remainder sequence, which keeps coefficient growth in
//! check for the small inputs this crate works with.

use super::mpoly::MPoly;
use super::AlgebraError;

fn main_var(p: &MPoly) -> Option<usize> {
    p.support_vars().last().copied()
}

/// Monic greatest common divisor. `gcd(0, 0)` is zero.
pub fn gcd(p: &MPoly, q: &MPoly) -> MPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let v = match (main_var(p), main_var(q)) {
        (None, _) | (_, None) => return MPoly::one(p.nvars()),
        (Some(a), Some(b)) => a.max(b),
    };
    let in_p = p.degree_in(v).unwrap_or(0) > 0;
    let in_q = q.degree_in(v).unwrap_or(0) > 0;
    if !in_p {
        return gcd_with_coeffs(p, q, v);
    }
    if !in_q {
        return gcd_with_coeffs(q, p, v);
    }
    let cp = content(p, v);
    let cq = content(q, v);
    let c = gcd(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides");
    let pq = q.div_exact(&cq).expect("content divides");
    let g = primitive_prs(pp, pq, v);
    (&c * &g).monic()
}

/// gcd of `free` (which does not involve `v`) with every coefficient of
/// `other` in `v`.
fn gcd_with_coeffs(free: &MPoly, other: &MPoly, v: usize) -> MPoly {
    let mut g = free.clone();
    for c in other.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one(free.nvars());
        }
    }
    g.monic()
}

/// Content with respect to `v`: gcd of the coefficients in `v`.
pub fn content(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one(p.nvars());
        }
    }
    g
}

fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_rem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v).unwrap_or(0);
    let cb = b.coeffs_in(v);
    let lb = cb.last().cloned().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v).unwrap_or(0) >= db {
        let dr = r.degree_in(v).unwrap();
        let lr = r.coeffs_in(v).pop().unwrap();
        let shift = MPoly::var(a.nvars(), v).pow(dr - db);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    r
}

fn primitive_prs(mut a: MPoly, mut b: MPoly, v: usize) -> MPoly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v).monic();
        }
        if r.degree_in(v).unwrap_or(0) == 0 {
            return MPoly::one(a.nvars());
        }
        a = b;
        b = primitive_part(&r, v);
    }
}

/// Squarefree decomposition: monic, squarefree, pairwise coprime `(a_i, i)`
/// with `p = c * prod a_i^i` for a rational constant `c`. Sorted by
/// multiplicity; constant inputs give an empty list.
pub fn squarefree_decomposition(p: &MPoly) -> Result<Vec<(MPoly, u32)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut acc: Vec<(MPoly, u32)> = Vec::new();
    decompose(p, &mut acc);
    acc.sort_by_key(|(_, e)| *e);
    Ok(acc)
}

fn push_factor(acc: &mut Vec<(MPoly, u32)>, a: MPoly, e: u32) {
    if a.is_constant() {
        return;
    }
    if let Some(slot) = acc.iter_mut().find(|(_, m)| *m == e) {
        slot.0 = (&slot.0 * &a).monic();
    } else {
        acc.push((a.monic(), e));
    }
}

fn decompose(p: &MPoly, acc: &mut Vec<(MPoly, u32)>) {
    let Some(v) = main_var(p) else {
        return;
    };
    let cont = content(p, v);
    let prim = p.div_exact(&cont).expect("content divides");
    decompose(&cont, acc);
    // Yun's algorithm in the variable v; every factor of a primitive
    // polynomial involves v, so the derivative in v sees all of them.
    let df = prim.derivative(v);
    let a0 = gcd(&prim, &df);
    let mut b = prim.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    loop {
        let a = gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        let next_c = d.div_exact(&a).expect("gcd divides");
        push_factor(acc, a, i);
        if b.is_constant() {
            break;
        }
        c = next_c;
        d = &c - &b.derivative(v);
        i += 1;
    }
}

/// Product of the distinct monic squarefree factors.
pub fn squarefree_part(p: &MPoly) -> Result<MPoly, AlgebraError> {
    Ok(squarefree_decomposition(p)?
        .into_iter()
        .fold(MPoly::one(p.nvars()), |acc, (a, _)| &acc * &a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(2, 0)
    }
    fn y() -> MPoly {
        MPoly::var(2, 1)
    }

    #[test]
    fn gcd_common_factor() {
        let f = &y().pow(3) + &x().pow(5);
        let g = &y() + &x().pow(2);
        assert_eq!(gcd(&(&x() * &f), &(&x() * &g)), x());
        assert_eq!(gcd(&f, &g), MPoly::one(2));
        let h = &(&f * &g) * &g;
        assert_eq!(gcd(&h, &(&g * &x())), g.monic());
    }

    #[test]
    fn squarefree() {
        let p = &x().pow(2) * &y();
        assert_eq!(squarefree_part(&p).unwrap(), &x() * &y());
        let f = &y().pow(2) - &x().pow(3);
        let q = &(&f.pow(2) * &x().pow(3)) * &(&y() + &MPoly::one(2));
        let dec = squarefree_decomposition(&q).unwrap();
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], ((&y() + &MPoly::one(2)).monic(), 1));
        assert_eq!(dec[1], (f.monic(), 2));
        assert_eq!(dec[2], (x(), 3));
    }
}
