//! Quadratic parts and exact positive-definiteness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::MultiPoly;

/// Degree-2 part of `p` as the symmetric matrix `A` with `p_2(x) = x^T A x`.
pub fn quadratic_matrix(p: &MultiPoly) -> Vec<Vec<BigRational>> {
    let n = p.nvars();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut a = vec![vec![BigRational::zero(); n]; n];
    for (m, c) in p.terms() {
        if m.iter().sum::<u32>() != 2 {
            continue;
        }
        let vars: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
        match vars.as_slice() {
            [i] => a[*i][*i] = c.clone(),
            [i, j] => {
                a[*i][*j] = c * &half;
                a[*j][*i] = c * &half;
            }
            _ => unreachable!("degree-2 monomial touches one or two variables"),
        }
    }
    a
}

pub fn quadratic_part(p: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(m, _)| m.iter().sum::<u32>() == 2)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Determinant by Gaussian elimination with row pivoting.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &a[col][c] * &f;
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Leading principal minors `det A[..k, ..k]` for `k = 1..=n`.
pub fn leading_minors(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    (1..=a.len())
        .map(|k| {
            let sub: Vec<Vec<BigRational>> = a[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Sylvester's criterion.
pub fn is_positive_definite(a: &[Vec<BigRational>]) -> bool {
    !a.is_empty() && leading_minors(a).iter().all(|d| d.is_positive())
}
