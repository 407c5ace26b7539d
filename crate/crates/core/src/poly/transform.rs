//! The three variable substitutions the positivity prover is built from.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{rational::fmt_rational, MultiPoly};
use crate::error::PolyError;

/// `p(x_0 + offsets[0], ..., x_{n-1} + offsets[n-1])`, expanded.
pub fn shift(p: &MultiPoly, offsets: &[BigRational]) -> Result<MultiPoly, PolyError> {
    if offsets.len() != p.nvars() {
        return Err(PolyError::PointLength {
            expected: p.nvars(),
            got: offsets.len(),
        });
    }
    let mut out = p.clone();
    for (i, mu) in offsets.iter().enumerate() {
        out = shift_var(&out, i, mu);
    }
    Ok(out)
}

pub(crate) fn shift_var(p: &MultiPoly, var: usize, mu: &BigRational) -> MultiPoly {
    if mu.is_zero() {
        return p.clone();
    }
    let deg = p.degree_in(var).unwrap() as usize;
    // mu_pows[k] = mu^k and binom row cache
    let mut mu_pows = vec![BigRational::one()];
    for k in 1..=deg {
        let next = &mu_pows[k - 1] * mu;
        mu_pows.push(next);
    }
    let binom = pascal(deg);
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let e = m[var] as usize;
        for j in 0..=e {
            let mut nm = m.clone();
            nm[var] = j as u32;
            let coeff = c * &mu_pows[e - j] * BigRational::from_integer(binom[e][j].clone());
            terms.push((nm, coeff));
        }
    }
    MultiPoly::from_terms(p.nvars(), terms)
}

fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// `p(.., 1/x_var, ..) * x_var^d` with `d` the current degree of `x_var`.
/// The zero polynomial maps to zero.
pub fn invert_var(p: &MultiPoly, var: usize) -> Result<MultiPoly, PolyError> {
    let d = p.degree_in(var)?;
    Ok(MultiPoly::from_terms(
        p.nvars(),
        p.terms().map(|(m, c)| {
            let mut nm = m.clone();
            nm[var] = d - m[var];
            (nm, c.clone())
        }),
    ))
}

/// Maps the box `prod (a_i, b_i]` onto the positive orthant: per axis,
/// `x -> 1/(x + 1/(b-a)) + a`, clearing the denominator with
/// `(x + 1/(b-a))^d` where `d` is the degree at that stage.
pub fn box_map(p: &MultiPoly, bounds: &[(BigRational, BigRational)]) -> Result<MultiPoly, PolyError> {
    if bounds.len() != p.nvars() {
        return Err(PolyError::PointLength {
            expected: p.nvars(),
            got: bounds.len(),
        });
    }
    for (axis, (a, b)) in bounds.iter().enumerate() {
        if a.is_negative() {
            return Err(PolyError::NegativeBound(fmt_rational(a)));
        }
        if a >= b {
            return Err(PolyError::DegenerateBox {
                axis,
                lo: fmt_rational(a),
                hi: fmt_rational(b),
            });
        }
    }
    let mut out = p.clone();
    for (i, (a, b)) in bounds.iter().enumerate() {
        out = shift_var(&out, i, a);
        out = invert_var(&out, i)?;
        out = shift_var(&out, i, &(b - a).recip());
    }
    Ok(out)
}
