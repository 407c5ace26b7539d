//! Exact multivariate polynomials over the rationals.
//!
//! A [`MultiPoly`] is a sparse map from exponent vectors to nonzero
//! [`BigRational`] coefficients. Equality is equality of the term maps; the
//! graded-lexicographic order (with `x0 > x1 > ...`) is used only for
//! printing and for picking "leading" terms.

mod parse;
mod ratfun;
pub mod rational;
mod transform;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::PolyError;

pub use parse::{parse_expr, parse_poly, RationalExpr};
pub use ratfun::RatFun;
pub(crate) use ratfun::{homogenize as ratfun_homogenize, primitive_scale as ratfun_primitive_scale};
pub use transform::{box_map, invert_var, shift};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Graded lexicographic comparison: total degree first, then lexicographic
/// with `x0` most significant.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The polynomial `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable x{index} out of range");
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(nvars, exps, BigRational::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(m, c)| (m.to_vec(), BigRational::from_integer(BigInt::from(*c)))),
        )
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lex order.
    pub fn terms_grlex(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Highest exponent of `var` over all terms; 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Result<u32, PolyError> {
        self.check_var(var)?;
        Ok(self.terms.keys().map(|m| m[var]).max().unwrap_or(0))
    }

    pub(crate) fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var >= self.nvars {
            Err(PolyError::VarOutOfRange {
                index: var,
                nvars: self.nvars,
            })
        } else {
            Ok(())
        }
    }

    fn check_same(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            Err(PolyError::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    pub fn arith(&self, other: &MultiPoly, op: ArithOp) -> Result<MultiPoly, PolyError> {
        self.check_same(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, false),
            ArithOp::Sub => self.add_unchecked(other, true),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), if negate { -c } else { c.clone() });
        }
        out
    }

    fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
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

    /// Exact value at `point`.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        // powers[i][e] = point[i]^e, filled lazily up to the max exponent
        let mut powers: Vec<Vec<BigRational>> = point.iter().map(|v| vec![BigRational::one(), v.clone()]).collect();
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t *= &pw[e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Result<MultiPoly, PolyError> {
        self.check_var(var)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[var] -= 1;
            out.add_term(nm, c * BigRational::from_integer(BigInt::from(m[var])));
        }
        Ok(out)
    }

    /// Sets every variable in `vars` to zero.
    pub fn zero_vars(&self, vars: &[usize]) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes the same value for every variable and returns the
    /// resulting univariate polynomial (as dense ascending coefficients).
    pub fn diagonal(&self) -> univariate::UniPoly {
        let deg = self.total_degree() as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (m, c) in &self.terms {
            let d: u32 = m.iter().sum();
            coeffs[d as usize] += c;
        }
        univariate::UniPoly::new(coeffs)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        if divisor.is_zero() {
            return None;
        }
        let (lead_m, lead_c) = divisor.leading_term_lex()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term_lex() {
            if rm.iter().zip(lead_m.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(lead_m.iter()).map(|(a, b)| a - b).collect();
            let qc = &rc / &lead_c;
            let qterm = MultiPoly::monomial(self.nvars, qm, qc);
            rem = &rem - &(&qterm * divisor);
            quot = &quot + &qterm;
        }
        Some(quot)
    }

    fn leading_term_lex(&self) -> Option<(Monomial, BigRational)> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn all_coeffs_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Lowest common denominator of the coefficients.
    pub fn coeff_denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn digest(&self) -> String {
        let text = format!("n={};{}", self.nvars, self);
        let hash = Sha256::digest(text.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Reinterprets the polynomial in a larger variable set; new variables
    /// are appended and do not occur.
    pub fn extend_vars(&self, nvars: usize) -> MultiPoly {
        assert!(nvars >= self.nvars);
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut nm = m.clone();
                    nm.resize(nvars, 0);
                    (nm, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::one(target), s.clone()])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &subs[i];
                    pw.push(next);
                }
                if e > 0 {
                    t = &t * &pw[e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &MultiPoly, b: &MultiPoly| a.add_unchecked(b, false));
binop!(Sub, sub, |a: &MultiPoly, b: &MultiPoly| a.add_unchecked(b, true));
binop!(Mul, mul, |a: &MultiPoly, b: &MultiPoly| a.mul_unchecked(b));

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms_grlex().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", rational::fmt_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", rational::fmt_rational(&abs))?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    fn p(text: &str, n: usize) -> MultiPoly {
        parse_poly(text, Some(n)).unwrap()
    }

    #[test]
    fn arith_examples() {
        let a = p("x0+1", 1);
        let b = p("x0-1", 1);
        assert_eq!(a.arith(&b, ArithOp::Add).unwrap(), p("2*x0", 1));
        let a = p("x0-x1", 2);
        let b = p("x0+x1", 2);
        assert_eq!(a.arith(&b, ArithOp::Mul).unwrap(), p("x0^2-x1^2", 2));
        let q = p("x0^2-x0*x1+x1^2", 2);
        assert_eq!(q.arith(&MultiPoly::zero(2), ArithOp::Add).unwrap(), q);
    }

    #[test]
    fn arith_rejects_mismatch() {
        let err = p("x0", 1).arith(&p("x1", 2), ArithOp::Add).unwrap_err();
        assert_eq!(err, PolyError::VarCountMismatch { left: 1, right: 2 });
    }

    #[test]
    fn cancellation_prunes_terms() {
        let a = p("x0*x1 + 3", 2);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn evaluate_examples() {
        let q = p("x0^2-x0*x1+x1^2", 2);
        assert_eq!(q.evaluate(&[rat(1, 1), rat(1, 1)]).unwrap(), rat(1, 1));
        assert_eq!(q.evaluate(&[rat(0, 1), rat(0, 1)]).unwrap(), rat(0, 1));
        assert!(matches!(
            q.evaluate(&[rat(1, 1)]),
            Err(PolyError::PointLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn degree_examples() {
        let q = p("x0^4*x1-5*x0^3*x1+10*x0^2*x1+x0+x1", 2);
        assert_eq!(q.degree_in(0).unwrap(), 4);
        assert_eq!(q.degree_in(1).unwrap(), 1);
        assert_eq!(p("7", 2).degree_in(0).unwrap(), 0);
        assert_eq!(MultiPoly::zero(2).degree_in(1).unwrap(), 0);
        assert!(q.degree_in(2).is_err());
    }

    #[test]
    fn display_is_grlex() {
        let q = p("1 + x1 + x0 + x0*x1 - 25/32*x0^4*x1", 2);
        assert_eq!(q.to_string(), "-25/32*x0^4*x1 + x0*x1 + x0 + x1 + 1");
    }

    #[test]
    fn exact_division() {
        let a = p("x0+x1+5", 2);
        let b = p("x0*x1+2*x0+5*x1+9", 2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(prod.div_exact(&p("x0+1", 2)).is_none());
    }

    #[test]
    fn derivative_and_zero_vars() {
        let q = p("x0^2*x1 + 3*x1 + x0", 2);
        assert_eq!(q.derivative(0).unwrap(), p("2*x0*x1 + 1", 2));
        assert_eq!(q.zero_vars(&[0]), p("3*x1", 2));
    }

    #[test]
    fn compose_substitutes() {
        let q = p("x0*x1 + x0", 2);
        let subs = [p("x0+1", 2), p("x1^2", 2)];
        assert_eq!(q.compose(&subs), p("(x0+1)*x1^2 + x0 + 1", 2));
    }
}
