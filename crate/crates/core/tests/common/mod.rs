//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use gasproof::poly::rational::{int, rat};
use gasproof::positivity::{ProofCertificate, Verdict};
use gasproof::recurrence::{norm_difference, Equilibrium, RecurrenceSpec};
use gasproof::{BigRational, MultiPoly};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-negative rational with denominator in `1..=16`.
pub fn point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| rat(rng.gen_range(0..=64), rng.gen_range(1..=16)))
        .collect()
}

/// Random polynomial whose coefficients are mostly positive.
pub fn poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, terms: usize, neg_chance: f64) -> MultiPoly {
    let mut p = MultiPoly::zero(n);
    for _ in 0..terms {
        let mut m = vec![0u32; n];
        let mut budget = rng.gen_range(0..=max_deg);
        for e in m.iter_mut() {
            let k = rng.gen_range(0..=budget);
            *e = k;
            budget -= k;
        }
        let mag = rng.gen_range(1..=9);
        let c = if rng.gen_bool(neg_chance) { -mag } else { mag };
        p = &p + &MultiPoly::monomial(n, m, int(c));
    }
    p
}

/// Evaluates with `x_i` replaced by `1/x_i`, times `x_i^d`.
pub fn eval_inverted(p: &MultiPoly, var: usize, y: &[BigRational]) -> BigRational {
    let d = p.degree_in(var).unwrap();
    let mut x = y.to_vec();
    x[var] = y[var].recip();
    p.evaluate(&x).unwrap() * pow(&y[var], d)
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Positive definiteness by exact symmetric Gaussian elimination: every
/// pivot must be positive. Independent of the minors route.
pub fn ldl_positive_definite(a: &[Vec<BigRational>]) -> bool {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    true
}

/// First grid point `eps * (i_0, ..., i_{n-1})`, `from <= i < size`, where
/// `p` is negative, or zero away from the split point. The prover covers the
/// open orthant when `xbar > 0`, so callers then start at `from = 1`.
pub fn grid_counterexample(
    p: &MultiPoly,
    xbar: &BigRational,
    eps: &BigRational,
    from: u32,
    size: u32,
) -> Option<Vec<BigRational>> {
    let n = p.nvars();
    let mut idx = vec![from; n];
    loop {
        let x: Vec<BigRational> = idx.iter().map(|&i| eps * int(i as i64)).collect();
        let v = p.evaluate(&x).unwrap();
        if v.is_negative() || (v.is_zero() && x.iter().any(|c| c != xbar)) {
            return Some(x);
        }
        let mut j = 0;
        loop {
            if j == n {
                return None;
            }
            idx[j] += 1;
            if idx[j] < size {
                break;
            }
            idx[j] = from;
            j += 1;
        }
    }
}

/// Checks a certificate's verdict against the grid: Proven must see no
/// counterexample; witnesses must be exact.
pub fn consistent_with_grid(p: &MultiPoly, cert: &ProofCertificate, grid: Option<&Vec<BigRational>>) -> Result<(), String> {
    match &cert.verdict {
        Verdict::Proven => match grid {
            Some(x) => Err(format!("proven but grid point {x:?} is a counterexample")),
            None => Ok(()),
        },
        Verdict::Disproven { witness, value, .. } => {
            let v = p.evaluate(witness).unwrap();
            if v.is_negative() && &v == value && witness.iter().all(|w| !w.is_negative()) {
                Ok(())
            } else {
                Err(format!("bad witness {witness:?}"))
            }
        }
        Verdict::NotStrict { witness, .. } => {
            let v = p.evaluate(witness).unwrap();
            let at_split = witness.iter().all(|w| w == &cert.xbar);
            if v.is_zero() && !at_split {
                Ok(())
            } else {
                Err(format!("bad zero witness {witness:?}"))
            }
        }
        Verdict::Fail { .. } => Ok(()),
    }
}

/// Random point of the recurrence's domain, away from the equilibrium
/// vector.
pub fn domain_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| rat(rng.gen_range(1..=60), rng.gen_range(1..=12))).collect()
}

/// Sign of the direct norm difference at `v`.
pub fn direct_sign(spec: &RecurrenceSpec, eq: &Equilibrium, k: u32, v: &[BigRational]) -> Option<i8> {
    let d = norm_difference(spec, eq, k, v)?;
    Some(if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    })
}

pub fn sign(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Smallest direct norm difference over the mesh `eps * {from..=size}^n`,
/// for cross-checking a contraction exponent without building any
/// polynomial.
pub fn min_norm_difference(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    k: u32,
    eps: &BigRational,
    from: u32,
    size: u32,
) -> Option<(Vec<BigRational>, BigRational)> {
    let n = spec.order();
    let mut idx = vec![from; n];
    let mut best: Option<(Vec<BigRational>, BigRational)> = None;
    loop {
        let x: Vec<BigRational> = idx.iter().map(|&i| eps * int(i as i64)).collect();
        if x != eq.vector {
            if let Some(d) = norm_difference(spec, eq, k, &x) {
                if best.as_ref().is_none_or(|(_, b)| d < *b) {
                    best = Some((x, d));
                }
            }
        }
        let mut j = 0;
        loop {
            if j == n {
                return best;
            }
            idx[j] += 1;
            if idx[j] <= size {
                break;
            }
            idx[j] = from;
            j += 1;
        }
    }
}

pub fn zero() -> BigRational {
    BigRational::zero()
}
