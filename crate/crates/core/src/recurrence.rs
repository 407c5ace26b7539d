//! Rational difference equations `x_{n+1} = R(x_n, ..., x_{n-k})`, their
//! equilibria, the lifted vector map `Q` and the contraction polynomial
//! `numerator(|X - X̄|^2 - |Q^K(X) - X̄|^2)`.
//!
//! Variable `x_i` stands for `x_{n-i}`.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RecurrenceError;
use crate::poly::rational::fmt_rational;
use crate::poly::{parse_expr, MultiPoly, RatFun};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `[0, inf)`
    Closed,
    /// `(0, inf)`
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    order: usize,
    r: RatFun,
    domain: Domain,
}

impl RecurrenceSpec {
    /// Validates `r` (non-negative coefficients throughout) and derives the
    /// order and domain.
    pub fn new(r: RatFun) -> Result<Self, RecurrenceError> {
        if r.num().is_zero() || r.den().is_zero() {
            return Err(RecurrenceError::Degenerate);
        }
        for (part, p) in [("numerator", r.num()), ("denominator", r.den())] {
            if let Some((_, c)) = p.terms().find(|(_, c)| c.is_negative()) {
                return Err(RecurrenceError::NegativeCoefficient {
                    part,
                    coeff: fmt_rational(c),
                });
            }
        }
        let domain = if r.den().constant_term().is_positive() {
            Domain::Closed
        } else {
            Domain::Open
        };
        Ok(RecurrenceSpec {
            order: r.nvars(),
            r,
            domain,
        })
    }

    /// Order `k+1` of the recurrence.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn r(&self) -> &RatFun {
        &self.r
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.is_polynomial() {
            write!(f, "{}", self.r.num())
        } else {
            write!(f, "({})/({})", self.r.num(), self.r.den())
        }
    }
}

/// Parses `R` written in `x0..xk`; the order is one more than the highest
/// index used.
pub fn parse_rde(text: &str) -> Result<RecurrenceSpec, RecurrenceError> {
    parse_rde_with(text, &HashMap::new())
}

/// [`parse_rde`] with named parameters bound to rational values.
pub fn parse_rde_with(
    text: &str,
    params: &HashMap<String, BigRational>,
) -> Result<RecurrenceSpec, RecurrenceError> {
    let e = parse_expr(text, None, params)?;
    let nvars = e.num.nvars();
    let (num, den) = if e.den.terms().all(|(_, c)| c.is_negative()) {
        (-&e.num, -&e.den)
    } else {
        (e.num, e.den)
    };
    for (part, p) in [("numerator", &num), ("denominator", &den)] {
        if let Some((_, c)) = p.terms().find(|(_, c)| c.is_negative()) {
            return Err(RecurrenceError::NegativeCoefficient {
                part,
                coeff: fmt_rational(c),
            });
        }
    }
    if num.is_zero() {
        return Err(RecurrenceError::Degenerate);
    }
    let r = RatFun::new(num, den).map_err(|_| RecurrenceError::Degenerate)?;
    debug_assert_eq!(r.nvars(), nvars);
    RecurrenceSpec::new(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equilibrium {
    #[serde(with = "crate::poly::rational::serde_rational")]
    pub value: BigRational,
    #[serde(with = "crate::poly::rational::serde_rational_vec")]
    pub vector: Vec<BigRational>,
    /// Domain on which the fixed point is unique. This is the open orthant
    /// when the declared domain is closed but `0` is a second fixed point.
    pub domain: Domain,
}

/// Solves `x = R(x, ..., x)` exactly on the domain interval.
pub fn find_equilibrium(spec: &RecurrenceSpec) -> Result<Equilibrium, RecurrenceError> {
    let num = spec.r.num().diagonal();
    let den = spec.r.den().diagonal();
    let z = crate::poly::univariate::UniPoly::from_ints(&[0, 1]);
    let e = z.mul(&den).sub(&num);
    if e.is_zero() {
        return Err(RecurrenceError::DegenerateEquilibrium);
    }
    let zero = BigRational::zero();
    let positive = e.count_roots(&zero, None);
    let at_zero = e.eval(&zero).is_zero();
    let (domain, zero_root) = match spec.domain {
        Domain::Open => (Domain::Open, false),
        Domain::Closed if at_zero && positive == 1 => (Domain::Open, false),
        Domain::Closed => (Domain::Closed, at_zero),
    };
    let count = positive + usize::from(zero_root);
    if count == 0 {
        return Err(RecurrenceError::NoEquilibrium);
    }
    if count > 1 {
        return Err(RecurrenceError::NonUniqueEquilibrium { count });
    }
    let value = if zero_root {
        zero
    } else {
        let hi = e.root_bound();
        e.rational_root_in(&zero, &hi)
            .ok_or_else(|| RecurrenceError::IrrationalEquilibrium(e.to_string()))?
    };
    Ok(Equilibrium {
        vector: vec![value.clone(); spec.order],
        value,
        domain,
    })
}

/// `num / prod f^e` with the denominator kept as a list of distinct factors,
/// each a primitive integer polynomial with positive coefficients.
#[derive(Debug, Clone)]
struct Factored {
    num: MultiPoly,
    factors: Vec<(MultiPoly, u32)>,
}

impl Factored {
    fn poly(p: MultiPoly) -> Self {
        Factored {
            num: p,
            factors: Vec::new(),
        }
    }

    fn den(&self) -> MultiPoly {
        let n = self.num.nvars();
        self.factors
            .iter()
            .fold(MultiPoly::one(n), |acc, (f, e)| &acc * &f.pow(*e))
    }

    fn push_factor(&mut self, f: MultiPoly, e: u32) {
        if e == 0 {
            return;
        }
        if f.is_constant() {
            let c = f.constant_term();
            let mut s = BigRational::one();
            for _ in 0..e {
                s *= &c;
            }
            self.num = self.num.scale(&s.recip());
            return;
        }
        let scale = crate::poly::ratfun_primitive_scale(&f);
        let f = f.scale(&scale);
        // den gains (f/scale)^e, so num is multiplied by scale^e
        let mut s = BigRational::one();
        for _ in 0..e {
            s *= &scale;
        }
        self.num = self.num.scale(&s);
        match self.factors.iter_mut().find(|(g, _)| *g == f) {
            Some((_, k)) => *k += e,
            None => self.factors.push((f, e)),
        }
    }

    /// Divides out every denominator factor that divides the numerator.
    fn cancel(&mut self) {
        for (f, e) in self.factors.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|(_, e)| *e > 0);
    }

    fn to_ratfun(&self) -> RatFun {
        RatFun::new(self.num.clone(), self.den()).expect("factors have positive coefficients")
    }
}

/// `R(u_0, ..., u_k)` for factored components `u_i`.
fn compose_factored(r: &RatFun, comps: &[Factored]) -> Factored {
    let dens: Vec<MultiPoly> = comps.iter().map(Factored::den).collect();
    let nums: Vec<&MultiPoly> = comps.iter().map(|c| &c.num).collect();
    let den_refs: Vec<&MultiPoly> = dens.iter().collect();
    let (n_hom, n_deg) = crate::poly::ratfun_homogenize(r.num(), &nums, &den_refs);
    let (d_hom, d_deg) = crate::poly::ratfun_homogenize(r.den(), &nums, &den_refs);
    let mut out = Factored::poly(n_hom);
    for i in 0..comps.len() {
        if d_deg[i] > n_deg[i] {
            out.num = &out.num * &dens[i].pow(d_deg[i] - n_deg[i]);
        }
    }
    out.push_factor(d_hom, 1);
    for (i, c) in comps.iter().enumerate() {
        if n_deg[i] > d_deg[i] {
            for (f, e) in &c.factors {
                out.push_factor(f.clone(), e * (n_deg[i] - d_deg[i]));
            }
        }
    }
    out.cancel();
    out
}

fn q_power_factored(spec: &RecurrenceSpec, k: u32) -> Result<Vec<Factored>, RecurrenceError> {
    if k == 0 {
        return Err(RecurrenceError::ZeroK);
    }
    let n = spec.order;
    let mut comps: Vec<Factored> = (0..n).map(|i| Factored::poly(MultiPoly::var(n, i))).collect();
    for _ in 0..k {
        let head = compose_factored(&spec.r, &comps);
        let mut next = Vec::with_capacity(n);
        next.push(head);
        next.extend(comps.into_iter().take(n - 1));
        comps = next;
    }
    Ok(comps)
}

/// Components of `Q^K` as rational functions of `x_0..x_k`.
pub fn q_power(spec: &RecurrenceSpec, k: u32) -> Result<Vec<RatFun>, RecurrenceError> {
    let comps = q_power_factored(spec, k)?;
    Ok(comps.iter().map(Factored::to_ratfun).collect())
}

/// `numerator(|X - X̄|^2 - |Q^K(X) - X̄|^2)`.
///
/// The cleared denominator is the least common multiple of the squared
/// component denominators, computed on their factor lists, and any of its
/// factors that divide the result are cancelled. It is a product of
/// positive-coefficient polynomials, so the sign of the result matches the
/// sign of the norm difference on the domain.
pub fn build_contraction_poly(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    k: u32,
) -> Result<MultiPoly, RecurrenceError> {
    let comps = q_power_factored(spec, k)?;
    let n = spec.order;
    let mut lcm: Vec<(MultiPoly, u32)> = Vec::new();
    for c in &comps {
        for (f, e) in &c.factors {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k = (*k).max(2 * e),
                None => lcm.push((f.clone(), 2 * e)),
            }
        }
    }
    let xbar = MultiPoly::constant(n, eq.value.clone());
    let l_poly = lcm
        .iter()
        .fold(MultiPoly::one(n), |acc, (f, e)| &acc * &f.pow(*e));
    let mut dist = MultiPoly::zero(n);
    for i in 0..n {
        let d = &MultiPoly::var(n, i) - &xbar;
        dist = &dist + &(&d * &d);
    }
    let mut p = &dist * &l_poly;
    for c in &comps {
        let b = c.den();
        let diff = &c.num - &(&b * &xbar);
        let cofactor = lcm.iter().fold(MultiPoly::one(n), |acc, (f, e)| {
            let own = c
                .factors
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, k)| 2 * k)
                .unwrap_or(0);
            &acc * &f.pow(e - own)
        });
        p = &p - &(&(&diff * &diff) * &cofactor);
    }
    for (f, e) in &lcm {
        for _ in 0..*e {
            match p.div_exact(f) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    Ok(p)
}

/// Exact value of `|v - X̄|^2 - |Q^K(v) - X̄|^2`, computed by iterating the
/// recurrence directly.
pub fn norm_difference(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    k: u32,
    v: &[BigRational],
) -> Option<BigRational> {
    let mut state = v.to_vec();
    for _ in 0..k {
        let next = spec.r.evaluate(&state).ok()?;
        state.rotate_right(1);
        state[0] = next;
    }
    let sq = |a: &[BigRational]| {
        a.iter()
            .map(|x| {
                let d = x - &eq.value;
                &d * &d
            })
            .fold(BigRational::zero(), |acc, t| acc + t)
    };
    Some(sq(v) - sq(&state))
}

/// Parameters are written as `name=value` pairs.
pub fn parse_params(pairs: &[(String, String)]) -> Result<HashMap<String, BigRational>, RecurrenceError> {
    pairs
        .iter()
        .map(|(k, v)| Ok((k.clone(), crate::poly::rational::parse_rational(v)?)))
        .collect()
}
