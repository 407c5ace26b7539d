use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, RationalExpr};
use crate::error::PolyError;

/// Quotient `num / den` whose denominator has only positive coefficients,
/// so it is strictly positive on the open positive orthant.
///
/// The pair is scaled so that `den` has coprime integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, PolyError> {
        if num.nvars() != den.nvars() {
            return Err(PolyError::VarCountMismatch {
                left: num.nvars(),
                right: den.nvars(),
            });
        }
        if den.is_zero() {
            return Err(PolyError::BadDenominator);
        }
        let (num, den) = if den.terms().all(|(_, c)| c.is_negative()) {
            (-&num, -&den)
        } else {
            (num, den)
        };
        if !den.all_coeffs_positive() {
            return Err(PolyError::BadDenominator);
        }
        let content = primitive_scale(&den);
        Ok(RatFun {
            num: num.scale(&content),
            den: den.scale(&content),
        })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        RatFun {
            num: p,
            den: MultiPoly::one(n),
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    /// Substitutes `subs[i]` for variable `i`.
    ///
    /// Each polynomial part is homogenized per variable: with `u_i = a_i/b_i`
    /// and `d_i` the degree of the part in `u_i`, `p(u) = p̃ / prod b_i^{d_i}`.
    /// The common `b_i` powers between numerator and denominator are cancelled
    /// before multiplying out.
    pub fn compose(&self, subs: &[RatFun]) -> Result<RatFun, PolyError> {
        if subs.len() != self.nvars() {
            return Err(PolyError::PointLength {
                expected: self.nvars(),
                got: subs.len(),
            });
        }
        let nums: Vec<&MultiPoly> = subs.iter().map(|s| &s.num).collect();
        let dens: Vec<&MultiPoly> = subs.iter().map(|s| &s.den).collect();
        let (n_hom, n_deg) = homogenize(&self.num, &nums, &dens);
        let (d_hom, d_deg) = homogenize(&self.den, &nums, &dens);
        let mut num = n_hom;
        let mut den = d_hom;
        for (i, s) in subs.iter().enumerate() {
            if d_deg[i] > n_deg[i] {
                num = &num * &s.den.pow(d_deg[i] - n_deg[i]);
            } else if n_deg[i] > d_deg[i] {
                den = &den * &s.den.pow(n_deg[i] - d_deg[i]);
            }
        }
        if let Some(q) = num.div_exact(&den) {
            let n = q.nvars();
            return RatFun::new(q, MultiPoly::one(n));
        }
        RatFun::new(num, den)
    }
}

/// Returns `sum c_m prod a_i^{m_i} b_i^{d_i - m_i}` and the per-variable
/// degrees `d_i` of `p`.
pub(crate) fn homogenize(p: &MultiPoly, nums: &[&MultiPoly], dens: &[&MultiPoly]) -> (MultiPoly, Vec<u32>) {
    let degs: Vec<u32> = (0..p.nvars()).map(|i| p.degree_in(i).unwrap()).collect();
    let target = nums[0].nvars();
    let mut out = MultiPoly::zero(target);
    let mut num_pow: Vec<Vec<MultiPoly>> = nums.iter().map(|_| vec![MultiPoly::one(target)]).collect();
    let mut den_pow = num_pow.clone();
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(target, c.clone());
        for (i, &e) in m.iter().enumerate() {
            let a = cached_pow(&mut num_pow[i], nums[i], e);
            let b = cached_pow(&mut den_pow[i], dens[i], degs[i] - e);
            if e > 0 {
                t = &t * &a;
            }
            if degs[i] - e > 0 {
                t = &t * &b;
            }
        }
        out = &out + &t;
    }
    (out, degs)
}

fn cached_pow(cache: &mut Vec<MultiPoly>, base: &MultiPoly, e: u32) -> MultiPoly {
    while cache.len() <= e as usize {
        let next = cache.last().unwrap() * base;
        cache.push(next);
    }
    cache[e as usize].clone()
}

/// Positive factor that turns `p` into a primitive integer polynomial.
pub(crate) fn primitive_scale(p: &MultiPoly) -> BigRational {
    let lcm = p.coeff_denominator_lcm();
    let gcd = p
        .terms()
        .map(|(_, c)| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .fold(BigInt::zero(), |g, v| g.gcd(&v));
    if gcd.is_zero() {
        return BigRational::one();
    }
    BigRational::new(lcm, gcd.abs())
}

impl TryFrom<RationalExpr> for RatFun {
    type Error = PolyError;
    fn try_from(e: RationalExpr) -> Result<Self, PolyError> {
        RatFun::new(e.num, e.den)
    }
}
