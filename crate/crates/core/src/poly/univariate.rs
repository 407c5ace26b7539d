//! Dense univariate polynomials over the rationals with Sturm-sequence root
//! counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::fmt_rational;

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| self.get(i) + other.get(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| self.get(i) - other.get(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    fn get(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.lead();
        if self.coeffs.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// `z^deg p(1/z)`.
    pub fn reversed(&self) -> UniPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        UniPoly::new(c)
    }

    /// Sturm chain of `self` (which should be square-free).
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone()];
        if self.is_zero() {
            return chain;
        }
        let mut next = self.derivative();
        while !next.is_zero() {
            let (_, r) = chain.last().unwrap().divrem(&next);
            chain.push(next);
            next = r.scale(&-BigRational::one());
        }
        chain
    }

    /// Number of distinct real roots in `(lo, hi]`, or in `(lo, +inf)` when
    /// `hi` is `None`.
    pub fn count_roots(&self, lo: &BigRational, hi: Option<&BigRational>) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.squarefree().sturm_chain();
        let at = |x: &BigRational| sign_changes(chain.iter().map(|p| sign(&p.eval(x))));
        let v_lo = at(lo);
        let v_hi = match hi {
            Some(h) => at(h),
            None => sign_changes(chain.iter().map(|p| sign(&p.lead()))),
        };
        v_lo.saturating_sub(v_hi)
    }

    /// Number of distinct real roots in `(-inf, hi]`.
    pub fn count_roots_below(&self, hi: &BigRational) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.squarefree().sturm_chain();
        let neg_inf = sign_changes(chain.iter().map(|p| {
            let s = sign(&p.lead());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }));
        let at_hi = sign_changes(chain.iter().map(|p| sign(&p.eval(hi))));
        neg_inf.saturating_sub(at_hi)
    }

    /// Cauchy bound: every real root has absolute value below it.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    /// Finds the unique root in `(lo, hi]` exactly if it is rational.
    ///
    /// The caller guarantees exactly one distinct root lies in the interval.
    /// A rational root `p/q` of the primitive integer form has `q | lead`, so
    /// once the bracket is narrower than `1/(2 lead^2)` it is the simplest
    /// fraction inside. Returns `None` when the root is irrational.
    pub fn rational_root_in(&self, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
        let sf = self.squarefree();
        if sf.eval(hi).is_zero() {
            return Some(hi.clone());
        }
        let ints = sf.integer_coeffs();
        let lead = BigRational::from_integer(ints.last().unwrap().abs());
        let width_target = (BigRational::from_integer(BigInt::from(2)) * &lead * &lead).recip();
        let (mut a, mut b) = (lo.clone(), hi.clone());
        let two = BigRational::from_integer(BigInt::from(2));
        let sb = sign(&sf.eval(&b));
        while &b - &a >= width_target {
            let mid = (&a + &b) / &two;
            let sm = sign(&sf.eval(&mid));
            if sm == 0 {
                return Some(mid);
            }
            if sm == sb {
                b = mid;
            } else {
                a = mid;
            }
        }
        let cand = simplest_between(&a, &b);
        (cand > *lo && cand <= *hi && sf.eval(&cand).is_zero()).then_some(cand)
    }

    /// Coefficients scaled to coprime integers (positive scale).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|v| v / &g).collect()
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// All positive divisors of `n` by trial division; `None` if `n` is too
/// large to factor this way.
/// Fraction with the smallest denominator in `[a, b]`, for `0 <= a <= b`.
fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    let up = &fl + BigRational::one();
    if &up <= b {
        return up;
    }
    let rest = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + rest.recip()
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{}", fmt_rational(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", fmt_rational(&a))?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]); // z^2 - 1
        let b = UniPoly::from_ints(&[1, 1]); // z + 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, UniPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = UniPoly::from_ints(&[1, 2, 1]);
        assert_eq!(a.gcd(&c), b);
    }

    #[test]
    fn sturm_counts() {
        // (z-1)(z-2)(z+3)
        let p = UniPoly::from_ints(&[1, -1]).mul(&UniPoly::from_ints(&[-2, 1])).mul(&UniPoly::from_ints(&[3, 1]));
        let p = p.scale(&int(-1)).scale(&int(-1));
        assert_eq!(p.count_roots(&int(0), None), 2);
        assert_eq!(p.count_roots(&int(-10), Some(&int(10))), 3);
        assert_eq!(p.count_roots(&int(1), Some(&int(2))), 1);
        assert_eq!(p.count_roots_below(&int(0)), 1);
        // repeated root counted once
        let sq = UniPoly::from_ints(&[-1, 1]).mul(&UniPoly::from_ints(&[-1, 1]));
        assert_eq!(sq.count_roots(&int(0), None), 1);
    }

    #[test]
    fn rational_roots() {
        let p = UniPoly::from_ints(&[-4, 0, 1]); // z^2 - 4
        assert_eq!(p.rational_root_in(&int(0), &int(10)), Some(int(2)));
        let p = UniPoly::from_ints(&[-3, 0, 4]); // 4z^2 - 3
        assert_eq!(p.rational_root_in(&int(0), &int(2)), None);
        let p = UniPoly::from_ints(&[-1, 0, 0, 27]); // 27z^3 - 1
        assert_eq!(p.rational_root_in(&int(0), &int(1)), Some(rat(1, 3)));
        // leading coefficient far beyond divisor enumeration
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 40) + BigInt::from(1);
        let r = BigRational::new(BigInt::from(7), big.clone());
        let p = UniPoly::new(vec![-BigRational::from_integer(BigInt::from(7)), BigRational::from_integer(big)]);
        assert_eq!(p.rational_root_in(&int(0), &int(1)), Some(r));
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(1, 2), &rat(3, 2)), int(1));
        assert_eq!(simplest_between(&rat(7, 5), &rat(7, 5)), rat(7, 5));
        assert_eq!(simplest_between(&rat(0, 1), &rat(1, 5)), int(0));
    }
}
