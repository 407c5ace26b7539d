//! Mesh search for the smallest `K` whose contraction polynomial looks
//! non-negative.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::RecurrenceError;
use crate::poly::rational::rat;
use crate::poly::MultiPoly;
use crate::recurrence::{build_contraction_poly, Equilibrium, RecurrenceSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshParams {
    /// Mesh step.
    pub eps: BigRational,
    /// Points per axis; the mesh is `{eps, 2 eps, ..., n eps}^dim`.
    pub n: u32,
    pub restarts: usize,
    pub max_k: u32,
    pub seed: u64,
}

impl Default for MeshParams {
    fn default() -> Self {
        MeshParams {
            eps: rat(1, 10),
            n: 100,
            restarts: 200,
            max_k: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshMinimum {
    pub point: Vec<BigRational>,
    pub value: BigRational,
}

/// `P(eps * i)` as an integer polynomial in the mesh index `i`, scaled by a
/// positive constant.
struct ScaledPoly {
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl ScaledPoly {
    fn new(p: &MultiPoly, eps: &BigRational) -> Self {
        let scaled: Vec<(Vec<u32>, BigRational)> = p
            .terms()
            .map(|(m, c)| {
                let d: u32 = m.iter().sum();
                let mut e = BigRational::one();
                for _ in 0..d {
                    e *= eps;
                }
                (m.clone(), c * e)
            })
            .collect();
        let lcm = scaled.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let terms = scaled
            .into_iter()
            .map(|(m, c)| (m, (c * BigRational::from_integer(lcm.clone())).to_integer()))
            .collect();
        ScaledPoly { terms }
    }

    fn eval(&self, idx: &[u32]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, &i) in m.iter().zip(idx) {
                if e > 0 {
                    t *= BigInt::from(i).pow(e);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Stratified starting indices: each axis is cut into `restarts` strata
/// visited in an independent random order.
fn starts(dim: usize, params: &MeshParams) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let r = params.restarts.max(1);
    let n = params.n as u64;
    let perms: Vec<Vec<usize>> = (0..dim)
        .map(|_| {
            let mut v: Vec<usize> = (0..r).collect();
            v.shuffle(&mut rng);
            v
        })
        .collect();
    (0..r)
        .map(|k| {
            (0..dim)
                .map(|j| {
                    let offset = rng.gen_range(0..n);
                    1 + ((perms[j][k] as u64 * n + offset) / r as u64) as u32
                })
                .collect()
        })
        .collect()
}

fn descend(p: &ScaledPoly, start: Vec<u32>, n: u32) -> (Vec<u32>, BigInt) {
    let mut memo: HashMap<Vec<u32>, BigInt> = HashMap::new();
    let mut eval = |idx: &Vec<u32>| memo.entry(idx.clone()).or_insert_with(|| p.eval(idx)).clone();
    let mut cur = start;
    let mut val = eval(&cur);
    loop {
        let mut best: Option<(Vec<u32>, BigInt)> = None;
        for j in 0..cur.len() {
            for step in [-1i64, 1] {
                let v = cur[j] as i64 + step;
                if v < 1 || v > n as i64 {
                    continue;
                }
                let mut nb = cur.clone();
                nb[j] = v as u32;
                let nv = eval(&nb);
                if nv < val && best.as_ref().is_none_or(|(_, bv)| nv < *bv) {
                    best = Some((nb, nv));
                }
            }
        }
        match best {
            Some((nb, nv)) => {
                cur = nb;
                val = nv;
            }
            None => return (cur, val),
        }
    }
}

/// Multi-start steepest descent on the mesh graph. Returns the distinct
/// local minima found, each with its exact value, sorted by point.
pub fn mesh_minimize(p: &MultiPoly, params: &MeshParams) -> Vec<MeshMinimum> {
    let dim = p.nvars();
    let scaled = ScaledPoly::new(p, &params.eps);
    let found: Vec<(Vec<u32>, BigInt)> = starts(dim, params)
        .into_par_iter()
        .map(|s| descend(&scaled, s, params.n))
        .collect();
    let distinct: BTreeMap<Vec<u32>, ()> = found.into_iter().map(|(i, _)| (i, ())).collect();
    distinct
        .into_keys()
        .map(|idx| {
            let point: Vec<BigRational> = idx
                .iter()
                .map(|&i| &params.eps * BigRational::from_integer(BigInt::from(i)))
                .collect();
            let value = p.evaluate(&point).expect("mesh point has the right length");
            MeshMinimum { point, value }
        })
        .collect()
}

/// Whether the mesh search finds no negative value.
pub fn mesh_nonnegative(p: &MultiPoly, params: &MeshParams) -> bool {
    !p.is_zero() && mesh_minimize(p, params).iter().all(|m| !m.value.is_negative())
}

/// First `K` in `1..=max_k` whose contraction polynomial passes the mesh
/// search.
pub fn conjecture_k(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    params: &MeshParams,
) -> Result<Option<u32>, RecurrenceError> {
    conjecture_k_from(spec, eq, params, 1)
}

/// [`conjecture_k`] starting the scan at `start`.
pub fn conjecture_k_from(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    params: &MeshParams,
    start: u32,
) -> Result<Option<u32>, RecurrenceError> {
    for k in start.max(1)..=params.max_k {
        let p = build_contraction_poly(spec, eq, k)?;
        let ok = mesh_nonnegative(&p, params);
        log::debug!("K = {k}: mesh {}", if ok { "non-negative" } else { "negative" });
        if ok {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
