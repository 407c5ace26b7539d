use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::las::{las_check, LasOutcome, LasVerdict};
use crate::conjecture::{conjecture_k_from, MeshParams};
use crate::error::RecurrenceError;
use crate::poly::rational::fmt_rational;
use crate::poly::MultiPoly;
use crate::positivity::{prove_nonneg_with, ProofCertificate, ProverOptions, Verdict};
use crate::recurrence::{build_contraction_poly, find_equilibrium, Domain, Equilibrium, RecurrenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineVerdict {
    /// The equilibrium is GAS.
    True,
    /// Not LAS, or the requested `K` has an exact counterexample.
    False,
    Fail,
}

impl PipelineVerdict {
    pub fn exit_code(self) -> i32 {
        match self {
            PipelineVerdict::True => 0,
            PipelineVerdict::False => 1,
            PipelineVerdict::Fail => 2,
        }
    }
}

impl fmt::Display for PipelineVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PipelineVerdict::True => "true",
            PipelineVerdict::False => "false",
            PipelineVerdict::Fail => "FAIL",
        })
    }
}

/// Positivity of `P` restricted to the face where the variables in
/// `zero_vars` vanish. Only needed on a closed domain with `xbar > 0`: the
/// region transforms reach the boundary only in the limit.
#[derive(Debug, Clone)]
pub struct FaceCheck {
    pub zero_vars: Vec<usize>,
    /// The restriction, written in the remaining variables renumbered from 0.
    pub poly: MultiPoly,
    /// Value of the restriction at `(xbar, ..., xbar)`.
    pub value_at_split: BigRational,
    /// Absent when the face is a single point or the split value already
    /// decides it.
    pub certificate: Option<ProofCertificate>,
    pub verdict: PipelineVerdict,
}

#[derive(Debug, Clone, Default)]
pub struct Timings {
    pub las: Duration,
    pub conjecture: Duration,
    pub proof: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attempt {
    pub k: u32,
    pub outcome: String,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub spec: String,
    pub equilibrium: Equilibrium,
    pub las: Option<LasVerdict>,
    pub verdict: PipelineVerdict,
    pub k: Option<u32>,
    /// Certificate of the last `K` tried.
    pub certificate: Option<ProofCertificate>,
    pub faces: Vec<FaceCheck>,
    pub attempts: Vec<Attempt>,
    pub reason: Option<String>,
    /// Wall-clock only; never part of any report.
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct ProveOptions {
    pub max_k: u32,
    pub mesh: MeshParams,
    pub prover: ProverOptions,
    /// Skip the mesh search and run the prover on every `K` in turn.
    pub prove_each_k: bool,
}

impl Default for ProveOptions {
    fn default() -> Self {
        let mesh = MeshParams::default();
        ProveOptions {
            max_k: mesh.max_k,
            mesh,
            prover: ProverOptions::default(),
            prove_each_k: false,
        }
    }
}

fn restrict_face(p: &MultiPoly, mask: usize) -> (Vec<usize>, MultiPoly) {
    let n = p.nvars();
    let zero: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
    let q = MultiPoly::from_terms(
        keep.len(),
        p.terms()
            .filter(|(m, _)| zero.iter().all(|&i| m[i] == 0))
            .map(|(m, c)| (keep.iter().map(|&i| m[i]).collect(), c.clone())),
    );
    (zero, q)
}

fn lift(zero: &[usize], n: usize, w: &[BigRational]) -> Vec<BigRational> {
    let mut it = w.iter();
    (0..n)
        .map(|i| {
            if zero.contains(&i) {
                BigRational::zero()
            } else {
                it.next().cloned().unwrap_or_else(BigRational::zero)
            }
        })
        .collect()
}

fn fmt_point(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

/// Checks every boundary face of the closed orthant. Stops at the first
/// face that is not proven; its reason is returned.
fn check_faces(p: &MultiPoly, xbar: &BigRational, opts: &ProverOptions) -> (Vec<FaceCheck>, Option<String>) {
    let n = p.nvars();
    let mut out = Vec::new();
    for mask in 1..(1usize << n) {
        let (zero, q) = restrict_face(p, mask);
        let split = vec![xbar.clone(); q.nvars()];
        let value = q.evaluate(&split).expect("split point has the right length");
        let mut face = FaceCheck {
            zero_vars: zero.clone(),
            poly: q.clone(),
            value_at_split: value.clone(),
            certificate: None,
            verdict: PipelineVerdict::True,
        };
        let mut reason = None;
        if !value.is_positive() {
            face.verdict = PipelineVerdict::False;
            let at = fmt_point(&lift(&zero, n, &split));
            reason = Some(if value.is_zero() {
                format!("P vanishes at {at}")
            } else {
                format!("P = {} at {at}", fmt_rational(&value))
            });
        } else if q.nvars() > 0 {
            let cert = prove_nonneg_with(&q, xbar, opts);
            match &cert.verdict {
                Verdict::Proven => {}
                Verdict::Disproven { witness, value, .. } => {
                    face.verdict = PipelineVerdict::False;
                    reason = Some(format!(
                        "P = {} at {}",
                        fmt_rational(value),
                        fmt_point(&lift(&zero, n, witness))
                    ));
                }
                Verdict::NotStrict { witness, .. } => {
                    face.verdict = PipelineVerdict::False;
                    reason = Some(format!("P vanishes at {}", fmt_point(&lift(&zero, n, witness))));
                }
                Verdict::Fail { reason: r } => {
                    face.verdict = PipelineVerdict::Fail;
                    let names: Vec<String> = zero.iter().map(|i| format!("x{i} = 0")).collect();
                    reason = Some(format!("face {}: {r}", names.join(", ")));
                }
            }
            face.certificate = Some(cert);
        }
        out.push(face);
        if reason.is_some() {
            return (out, reason);
        }
    }
    (out, None)
}

struct KOutcome {
    verdict: PipelineVerdict,
    certificate: ProofCertificate,
    faces: Vec<FaceCheck>,
    reason: Option<String>,
}

fn attempt_k(
    spec: &RecurrenceSpec,
    eq: &Equilibrium,
    k: u32,
    opts: &ProverOptions,
) -> Result<KOutcome, RecurrenceError> {
    let p = build_contraction_poly(spec, eq, k)?;
    let cert = prove_nonneg_with(&p, &eq.value, opts);
    let (verdict, reason) = match &cert.verdict {
        Verdict::Proven => (PipelineVerdict::True, None),
        Verdict::Disproven { witness, value, .. } => (
            PipelineVerdict::False,
            Some(format!("P = {} at {}", fmt_rational(value), fmt_point(witness))),
        ),
        Verdict::NotStrict { reason, .. } => (PipelineVerdict::False, Some(format!("not strictly positive: {reason}"))),
        Verdict::Fail { reason } => (PipelineVerdict::Fail, Some(reason.clone())),
    };
    let mut out = KOutcome {
        verdict,
        certificate: cert,
        faces: Vec::new(),
        reason,
    };
    if out.verdict == PipelineVerdict::True && eq.domain == Domain::Closed && eq.value.is_positive() {
        let (faces, reason) = check_faces(&p, &eq.value, opts);
        if let Some(r) = reason {
            out.verdict = faces.last().map(|f| f.verdict).unwrap_or(PipelineVerdict::Fail);
            out.reason = Some(r);
        }
        out.faces = faces;
    }
    Ok(out)
}

/// Proves that the given `K` works. Equilibrium problems are returned as
/// errors.
pub fn prove_k(spec: &RecurrenceSpec, k: u32, opts: &ProverOptions) -> Result<PipelineResult, RecurrenceError> {
    if k == 0 {
        return Err(RecurrenceError::ZeroK);
    }
    let eq = find_equilibrium(spec)?;
    let start = Instant::now();
    let out = attempt_k(spec, &eq, k, opts)?;
    let timings = Timings {
        proof: start.elapsed(),
        ..Timings::default()
    };
    Ok(PipelineResult {
        spec: spec.to_string(),
        equilibrium: eq,
        las: None,
        verdict: out.verdict,
        k: Some(k),
        certificate: Some(out.certificate),
        faces: out.faces,
        attempts: vec![Attempt {
            k,
            outcome: out.verdict.to_string(),
        }],
        reason: out.reason,
        timings,
    })
}

/// LAS check, then alternate mesh conjecture and proof for increasing `K`
/// up to `opts.max_k`.
pub fn prove(spec: &RecurrenceSpec, opts: &ProveOptions) -> Result<PipelineResult, RecurrenceError> {
    let eq = find_equilibrium(spec)?;
    let mut timings = Timings::default();
    let t = Instant::now();
    let las = las_check(spec, &eq);
    timings.las = t.elapsed();
    let mut result = PipelineResult {
        spec: spec.to_string(),
        equilibrium: eq.clone(),
        las: Some(las.clone()),
        verdict: PipelineVerdict::Fail,
        k: None,
        certificate: None,
        faces: Vec::new(),
        attempts: Vec::new(),
        reason: None,
        timings,
    };
    match las.outcome {
        LasOutcome::Las => {}
        LasOutcome::Unstable => {
            result.verdict = PipelineVerdict::False;
            result.reason = Some("not LAS: a characteristic root lies outside the unit circle".into());
            return Ok(result);
        }
        LasOutcome::Inconclusive => {
            result.reason = Some("LAS inconclusive: a characteristic root lies on the unit circle".into());
            return Ok(result);
        }
    }
    let mesh = MeshParams {
        max_k: opts.max_k,
        ..opts.mesh.clone()
    };
    let mut next = 1;
    while next <= opts.max_k {
        let k = if opts.prove_each_k {
            next
        } else {
            let t = Instant::now();
            let found = conjecture_k_from(spec, &eq, &mesh, next)?;
            result.timings.conjecture += t.elapsed();
            match found {
                Some(k) => k,
                None => break,
            }
        };
        let t = Instant::now();
        let out = attempt_k(spec, &eq, k, &opts.prover)?;
        result.timings.proof += t.elapsed();
        log::info!("K = {k}: {}", out.verdict);
        result.attempts.push(Attempt {
            k,
            outcome: match &out.reason {
                Some(r) => format!("{}: {r}", out.verdict),
                None => out.verdict.to_string(),
            },
        });
        result.k = Some(k);
        result.certificate = Some(out.certificate);
        result.faces = out.faces;
        if out.verdict == PipelineVerdict::True {
            result.verdict = PipelineVerdict::True;
            result.reason = None;
            return Ok(result);
        }
        next = k + 1;
    }
    result.reason = Some(format!("no K up to {} was proven", opts.max_k));
    Ok(result)
}
