//! Power-series parametrizations of strict-transform branches and the
//! search for the irreducible plane curve containing a branch.
//!
//! Coefficients live in `K = Q[theta]/(modulus)`; when the modulus is
//! reducible `K` is a product of fields, which is harmless here because a
//! rational polynomial vanishes on the branch iff it vanishes on every
//! conjugate.

use crate::algebra::linalg::kernel;
use crate::algebra::{monomials_up_to, MPoly, Rat, UPoly};

use super::Branch;

struct Field {
    modulus: UPoly,
}

impl Field {
    fn reduce(&self, a: &UPoly) -> UPoly {
        a.rem(&self.modulus)
    }

    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.reduce(&(a * b))
    }

    fn dim(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }
}

type Series = Vec<UPoly>;

fn ser_mul(k: &Field, a: &Series, b: &Series, prec: usize) -> Series {
    let mut out = vec![UPoly::zero(); prec];
    for (i, ai) in a.iter().enumerate().take(prec) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(prec - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out.iter().map(|c| k.reduce(c)).collect()
}

fn ser_inv(k: &Field, a: &Series, prec: usize) -> Option<Series> {
    let a0inv = a.first()?.inverse_mod(&k.modulus)?;
    let mut out = vec![UPoly::zero(); prec];
    out[0] = a0inv.clone();
    for n in 1..prec {
        let mut s = UPoly::zero();
        for i in 1..=n.min(a.len() - 1) {
            s = &s + &(&a[i] * &out[n - i]);
        }
        out[n] = k.mul(&(-&k.reduce(&s)), &a0inv);
    }
    Some(out)
}

/// Evaluate a polynomial at series arguments, truncated at `prec`.
fn eval_at(k: &Field, p: &MPoly, args: &[Series], prec: usize) -> Series {
    let mut powers: Vec<Vec<Series>> = args
        .iter()
        .map(|_| {
            let mut one = vec![UPoly::zero(); prec];
            one[0] = UPoly::one();
            vec![one]
        })
        .collect();
    let mut out = vec![UPoly::zero(); prec];
    for (m, c) in p.terms() {
        let mut term: Option<Series> = None;
        for (i, &e) in m.0.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = ser_mul(k, powers[i].last().unwrap(), &args[i], prec);
                powers[i].push(next);
            }
            let pw = &powers[i][e as usize];
            term = Some(match term {
                None => pw.clone(),
                Some(t) => ser_mul(k, &t, pw, prec),
            });
        }
        let term = term.unwrap_or_else(|| {
            let mut one = vec![UPoly::zero(); prec];
            one[0] = UPoly::one();
            one
        });
        let cpoly = UPoly::constant(c.clone());
        for (o, t) in out.iter_mut().zip(&term) {
            *o = &*o + &(&cpoly * t);
        }
    }
    out
}

fn param_series(prec: usize) -> Series {
    let mut t = vec![UPoly::zero(); prec];
    if prec > 1 {
        t[1] = UPoly::one();
    }
    t
}

/// The non-parameter coordinate of the branch as a series `theta + ...`.
fn lift(k: &Field, b: &Branch, prec: usize) -> Series {
    let theta = k.reduce(&UPoly::var());
    let other = 1 - b.param_axis;
    let dq = b.equation.derivative(other);
    let mut w = vec![UPoly::zero(); prec];
    w[0] = theta;
    let t = param_series(prec);
    let args_for = |w: &Series| -> Vec<Series> {
        if b.param_axis == 0 {
            vec![t.clone(), w.clone()]
        } else {
            vec![w.clone(), t.clone()]
        }
    };
    let mut have = 1;
    while have < prec {
        let next = (2 * have).min(prec);
        let args = args_for(&w);
        let val = eval_at(k, &b.equation, &args, next);
        let der = eval_at(k, &dq, &args, next);
        let inv = ser_inv(k, &der, next).expect("branch is smooth and transverse");
        let corr = ser_mul(k, &val, &inv, next);
        for i in 0..next {
            w[i] = k.reduce(&(&w[i] - &corr[i]));
        }
        have = next;
    }
    w
}

/// Images of `x` and `y` along the branch, truncated at `prec`.
fn plane_image(b: &Branch, prec: usize) -> (Field, Series, Series) {
    let k = Field {
        modulus: b.modulus.clone(),
    };
    let w = lift(&k, b, prec);
    let t = param_series(prec);
    let args = if b.param_axis == 0 { vec![t, w] } else { vec![w, t] };
    let x = eval_at(&k, &b.chart.x, &args, prec);
    let y = eval_at(&k, &b.chart.y, &args, prec);
    (k, x, y)
}

/// Irreducible polynomial of least degree (at most `max_degree`) whose zero
/// set contains the branch, normalized to leading coefficient one.
///
/// `max_degree` must bound the degree of a plane curve known to contain the
/// branch; this bound also controls the truncation, since a curve of degree
/// `d` not containing the branch meets it with multiplicity at most
/// `d * max_degree`.
pub(crate) fn find_component(b: &Branch, max_degree: u32) -> Option<MPoly> {
    let prec = (max_degree * max_degree + 2) as usize;
    let (k, x, y) = plane_image(b, prec);
    let dim = k.dim().max(1);
    let mut xp = vec![{
        let mut one = vec![UPoly::zero(); prec];
        one[0] = UPoly::one();
        one
    }];
    let mut yp = xp.clone();
    for _ in 0..max_degree {
        let nx = ser_mul(&k, xp.last().unwrap(), &x, prec);
        xp.push(nx);
        let ny = ser_mul(&k, yp.last().unwrap(), &y, prec);
        yp.push(ny);
    }
    for d in 1..=max_degree {
        let rows_needed = (d * max_degree + 1) as usize;
        let monos = monomials_up_to(2, d);
        let cols: Vec<Series> = monos
            .iter()
            .map(|m| ser_mul(&k, &xp[m.0[0] as usize], &yp[m.0[1] as usize], rows_needed))
            .collect();
        let mut rows = Vec::with_capacity(rows_needed * dim);
        for i in 0..rows_needed {
            for j in 0..dim {
                rows.push(cols.iter().map(|c| c[i].coeff(j)).collect::<Vec<Rat>>());
            }
        }
        if let Some(v) = kernel(&rows, monos.len()).into_iter().next() {
            let p = MPoly::from_terms(2, monos.into_iter().zip(v));
            return Some(p.monic());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rat;
    use crate::resolution::Chart;

    #[test]
    fn nodal_cubic_branch() {
        // y^2 - x^2 - x^3 has the branch y = x*sqrt(1 + x) at the origin,
        // rational tangent, irreducible cubic.
        let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let cubic = &(&y.pow(2) - &x.pow(2)) - &x.pow(3);
        let chart = Chart::identity().then_a(&Rat::one());
        let eq = chart.pull(&cubic).div_var_power(0, 2);
        let b = Branch {
            chart,
            equation: eq,
            param_axis: 0,
            modulus: UPoly::var(),
        };
        assert_eq!(find_component(&b, 3), Some(cubic.monic()));
    }

    #[test]
    fn conjugate_branches() {
        // y^2 + x^4 after two blow-ups: v^2 + 1 = 0 on the second divisor.
        let (x, y) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let f = &y.pow(2) + &x.pow(4);
        let chart = Chart::identity().then_a(&Rat::zero()).then_a(&Rat::zero());
        let eq = chart.pull(&f).div_var_power(0, 4);
        let b = Branch {
            chart,
            equation: eq,
            param_axis: 0,
            modulus: UPoly::from_ints(&[1, 0, 1]),
        };
        assert_eq!(find_component(&b, 4), Some(f.monic()));
    }
}
