//! Linearized stability at the equilibrium, decided exactly.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::univariate::UniPoly;
use crate::recurrence::{Equilibrium, RecurrenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LasOutcome {
    /// Every characteristic root lies strictly inside the unit disk.
    Las,
    /// Some root lies strictly outside.
    Unstable,
    /// No root outside, at least one on the unit circle.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LasVerdict {
    pub outcome: LasOutcome,
    /// `c_i = dR/dx_i` at the equilibrium.
    pub partials: Vec<BigRational>,
    /// `z^{k+1} - sum c_i z^{k-i}`.
    pub charpoly: UniPoly,
    /// Schur-Cohn reductions, starting with the characteristic polynomial.
    pub table: Vec<UniPoly>,
}

/// Partial derivatives of `R` at the equilibrium.
pub fn partials_at(spec: &RecurrenceSpec, eq: &Equilibrium) -> Vec<BigRational> {
    let r = spec.r();
    let x = &eq.vector;
    let n = r.num().evaluate(x).expect("equilibrium has the right length");
    let d = r.den().evaluate(x).expect("equilibrium has the right length");
    (0..spec.order())
        .map(|i| {
            let ni = r.num().derivative(i).unwrap().evaluate(x).unwrap();
            let di = r.den().derivative(i).unwrap().evaluate(x).unwrap();
            (ni * &d - &n * di) / (&d * &d)
        })
        .collect()
}

pub fn characteristic_poly(partials: &[BigRational]) -> UniPoly {
    let k1 = partials.len();
    let mut coeffs = vec![BigRational::zero(); k1 + 1];
    coeffs[k1] = BigRational::one();
    for (i, c) in partials.iter().enumerate() {
        coeffs[k1 - 1 - i] = -c;
    }
    UniPoly::new(coeffs)
}

/// Schur-Cohn: all roots strictly inside the unit disk iff `|a_0| < |a_n|`
/// and the reduced polynomial `(a_n p - a_0 p*)/z` has the same property.
/// Returns the verdict and the sequence of reduced polynomials.
pub fn schur_cohn(p: &UniPoly) -> (bool, Vec<UniPoly>) {
    let mut table = vec![p.clone()];
    let mut cur = p.clone();
    while cur.degree() > 0 {
        let a0 = cur.coeffs()[0].clone();
        let an = cur.lead();
        if a0.abs() >= an.abs() {
            return (false, table);
        }
        let t = cur.scale(&an).sub(&cur.reversed().scale(&a0));
        // constant term cancels; divide by z
        let next = UniPoly::new(t.coeffs()[1..].to_vec());
        table.push(next.clone());
        cur = next;
    }
    (!cur.is_zero(), table)
}

/// Divides out every factor `z - 1` and `z + 1`.
fn strip_unit_real_roots(p: &UniPoly) -> UniPoly {
    let mut cur = p.clone();
    for r in [BigRational::one(), -BigRational::one()] {
        let f = UniPoly::new(vec![-r.clone(), BigRational::one()]);
        while cur.degree() > 0 && cur.eval(&r).is_zero() {
            cur = cur.divrem(&f).0;
        }
    }
    cur
}

/// Whether every root of `g` lies on the unit circle. `g` must be
/// self-reciprocal up to sign.
fn all_roots_on_unit_circle(g: &UniPoly) -> bool {
    let h = strip_unit_real_roots(g);
    if h.degree() == 0 {
        return true;
    }
    if h.degree() % 2 == 1 {
        return false;
    }
    let b = h.coeffs();
    let deg = h.degree();
    if (0..=deg).any(|k| b[k] != b[deg - k]) {
        return false;
    }
    // z^-m h(z) = b_m + sum b_{m+j} (z^j + z^-j) = G(z + 1/z)
    let m = deg / 2;
    let two = BigRational::from_integer(2.into());
    let w = UniPoly::new(vec![BigRational::zero(), BigRational::one()]);
    let mut d_prev = UniPoly::new(vec![two]);
    let mut d_cur = w.clone();
    let mut g_w = UniPoly::new(vec![b[m].clone()]);
    for j in 1..=m {
        g_w = g_w.add(&d_cur.scale(&b[m + j]));
        let d_next = w.mul(&d_cur).sub(&d_prev);
        d_prev = d_cur;
        d_cur = d_next;
    }
    // roots on the circle correspond to real w in [-2, 2]
    let sf = g_w.squarefree();
    let lo = BigRational::from_integer((-2).into());
    let hi = BigRational::from_integer(2.into());
    let inside = sf.count_roots(&lo, Some(&hi)) + usize::from(sf.eval(&lo).is_zero());
    inside == sf.degree()
}

/// Schur-Cohn first; when it fails, the reciprocal-pair part
/// `gcd(p, p*)` is peeled off repeatedly and checked to lie on the unit
/// circle, and what remains must be strictly stable.
pub fn classify(charpoly: &UniPoly) -> (LasOutcome, Vec<UniPoly>) {
    let (stable, table) = schur_cohn(charpoly);
    if stable {
        return (LasOutcome::Las, table);
    }
    let mut rest = charpoly.clone();
    loop {
        let g = rest.gcd(&rest.reversed());
        if g.degree() == 0 {
            break;
        }
        if !all_roots_on_unit_circle(&g) {
            return (LasOutcome::Unstable, table);
        }
        rest = rest.divrem(&g).0;
    }
    let outcome = if schur_cohn(&rest).0 {
        LasOutcome::Inconclusive
    } else {
        LasOutcome::Unstable
    };
    (outcome, table)
}

pub fn las_check(spec: &RecurrenceSpec, eq: &Equilibrium) -> LasVerdict {
    let partials = partials_at(spec, eq);
    let charpoly = characteristic_poly(&partials);
    let (outcome, table) = classify(&charpoly);
    LasVerdict {
        outcome,
        partials,
        charpoly,
        table,
    }
}
