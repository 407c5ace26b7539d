//! Non-negativity of a polynomial on the positive orthant, with zeros
//! allowed only at the split point `(xbar, ..., xbar)`.
//!
//! The orthant is split at `xbar` into `2^n` regions, each mapped back onto
//! the orthant. Regions that no coefficient test settles are finitized and
//! halved recursively; every sub-box is again mapped onto the orthant and
//! tested. The tree is processed level by level so the certificate and the
//! reported witness do not depend on thread scheduling.
//!
//! With `xbar > 0` a low variable `x_i in (0, xbar]` is reached as
//! `1/(y_i + 1/xbar)`, so the faces `x_i = 0` are only approached, never
//! tested: a proof covers the open orthant. With `xbar = 0` the single region
//! is the closed orthant itself. Callers that need the closed faces check
//! the restrictions `p|_{x_S = 0}` separately.

mod certificate;
pub mod criteria;
pub mod quadform;
pub mod region;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use certificate::{NodeRecord, NodeResult, ProofCertificate, Transform, Verdict};
pub use criteria::{
    test_const, test_lcoeff, test_poscoeffs, test_subpoly_n, zero_only_at_origin, Detail, QuadFormDetail, TestKind,
    TestOutcome, TestResult,
};
pub use region::{box_poly, finitize, orthant_split, region_poly, BoxSpec, RegionSpec, Side};

use crate::error::PositivityError;
use crate::poly::rational::fmt_rational;
use crate::poly::MultiPoly;

pub const DEFAULT_DEPTH: u32 = 12;
pub const DEFAULT_MAX_NODES: usize = 100_000;

/// Steps tried by witness searches, `2^-m` or `2^m` for `m` up to this.
const WITNESS_STEPS: u32 = 256;

#[derive(Debug, Clone)]
pub struct ProverOptions {
    /// Maximum number of box halvings below a region.
    pub depth_limit: u32,
    /// Tested nodes allowed before giving up.
    pub max_nodes: usize,
    /// Store every node polynomial in the certificate.
    pub keep_polys: bool,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            depth_limit: DEFAULT_DEPTH,
            max_nodes: DEFAULT_MAX_NODES,
            keep_polys: false,
        }
    }
}

/// What the tests conclude about one node polynomial.
#[derive(Debug, Clone)]
pub(crate) enum Decision {
    Pass(TestOutcome),
    /// Zero constant term at a corner other than the split point.
    ZeroCorner,
    /// Non-negative with a zero face through the origin.
    ZeroFace(TestOutcome, Vec<usize>),
    Refute(TestOutcome),
    Undecided(TestOutcome),
}

pub(crate) fn decide(q: &MultiPoly, origin_is_xbar: bool) -> Decision {
    if !origin_is_xbar && q.constant_term().is_zero() {
        return Decision::ZeroCorner;
    }
    let pc = test_poscoeffs(q);
    if pc.passed() {
        return Decision::Pass(pc);
    }
    if let Detail::ZeroSubset { vars } = &pc.detail {
        let vars = vars.clone();
        return Decision::ZeroFace(pc, vars);
    }
    let sp = test_subpoly_n(q);
    if sp.passed() {
        return Decision::Pass(sp);
    }
    let lc = test_lcoeff(q);
    if lc.refuted() {
        return Decision::Refute(lc);
    }
    let cc = test_const(q);
    if cc.refuted() {
        return Decision::Refute(cc);
    }
    Decision::Undecided(sp)
}

/// Where a node sits: a whole region, or a sub-box of its finitized form.
#[derive(Debug, Clone)]
pub(crate) enum Place<'a> {
    Region(&'a RegionSpec),
    Box {
        region: &'a RegionSpec,
        finite: &'a MultiPoly,
        root: &'a BoxSpec,
        sub: &'a BoxSpec,
    },
}

impl Place<'_> {
    fn poly(&self, p: &MultiPoly) -> Result<MultiPoly, PositivityError> {
        match self {
            Place::Region(r) => region_poly(p, r),
            Place::Box { finite, sub, .. } => box_poly(finite, sub),
        }
    }

    fn origin_is_xbar(&self) -> bool {
        match self {
            Place::Region(_) => true,
            Place::Box { root, sub, .. } => root.upper_corner() == sub.upper_corner(),
        }
    }

    /// Original point for node coordinates `y >= 0`.
    fn to_original(&self, y: &[BigRational]) -> Vec<BigRational> {
        match self {
            Place::Region(r) => r.to_original(y),
            Place::Box { region, sub, .. } => region.finite_to_original(&sub.from_orthant(y)),
        }
    }
}

/// Result of testing one node, before its place in the tree is known.
#[derive(Debug, Clone)]
pub(crate) struct NodeEval {
    pub digest: String,
    pub poly: MultiPoly,
    pub kind: EvalKind,
}

#[derive(Debug, Clone)]
pub(crate) enum EvalKind {
    Pass(TestOutcome),
    Refute {
        outcome: TestOutcome,
        witness: Vec<BigRational>,
        value: BigRational,
    },
    NotStrict {
        outcome: Option<TestOutcome>,
        witness: Vec<BigRational>,
        reason: String,
    },
    Undecided(TestOutcome),
}

fn ones(n: usize, t: &BigRational) -> Vec<BigRational> {
    vec![t.clone(); n]
}

fn pow2(m: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << m as usize)
}

/// Walks the node coordinates along `(t, ..., t)` until the original
/// polynomial is negative.
fn search_negative(p: &MultiPoly, place: &Place, test: TestKind) -> Option<(Vec<BigRational>, BigRational)> {
    let n = p.nvars();
    let candidates: Box<dyn Iterator<Item = BigRational>> = match test {
        TestKind::LCoeff => Box::new((0..=WITNESS_STEPS).map(pow2)),
        _ => Box::new(std::iter::once(BigRational::zero()).chain((1..=WITNESS_STEPS).map(|m| pow2(m).recip()))),
    };
    for t in candidates {
        let x = place.to_original(&ones(n, &t));
        let v = p.evaluate(&x).expect("point length matches");
        if v.is_negative() {
            return Some((x, v));
        }
    }
    None
}

pub(crate) fn eval_node(p: &MultiPoly, place: &Place) -> Result<NodeEval, PositivityError> {
    let q = place.poly(p)?;
    let n = p.nvars();
    let kind = match decide(&q, place.origin_is_xbar()) {
        Decision::Pass(o) => EvalKind::Pass(o),
        Decision::ZeroCorner => {
            let witness = place.to_original(&ones(n, &BigRational::zero()));
            EvalKind::NotStrict {
                outcome: None,
                reason: format!("zero at {} away from the split point", fmt_point(&witness)),
                witness,
            }
        }
        Decision::ZeroFace(o, vars) => {
            let y: Vec<BigRational> = (0..n)
                .map(|i| {
                    if vars.contains(&i) {
                        BigRational::zero()
                    } else {
                        BigRational::one()
                    }
                })
                .collect();
            let witness = place.to_original(&y);
            EvalKind::NotStrict {
                outcome: Some(o),
                reason: format!("zero at {} away from the split point", fmt_point(&witness)),
                witness,
            }
        }
        Decision::Refute(o) => match search_negative(p, place, o.test) {
            Some((witness, value)) => EvalKind::Refute {
                outcome: o,
                witness,
                value,
            },
            None => EvalKind::Undecided(o),
        },
        Decision::Undecided(o) => EvalKind::Undecided(o),
    };
    Ok(NodeEval {
        digest: q.digest(),
        poly: q,
        kind,
    })
}

pub(crate) fn fmt_point(x: &[BigRational]) -> String {
    let parts: Vec<String> = x.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

struct Task {
    path: String,
    depth: u32,
    region: usize,
    sub: Option<BoxSpec>,
}

/// [`prove_nonneg_with`] using default options and the given depth limit.
pub fn prove_nonneg(p: &MultiPoly, xbar: &BigRational, depth_limit: u32) -> ProofCertificate {
    prove_nonneg_with(
        p,
        xbar,
        &ProverOptions {
            depth_limit,
            ..ProverOptions::default()
        },
    )
}

/// Tries to show `p > 0` on the orthant except at `(xbar, ..., xbar)`.
pub fn prove_nonneg_with(p: &MultiPoly, xbar: &BigRational, opts: &ProverOptions) -> ProofCertificate {
    let mut cert = ProofCertificate::empty(p, xbar, opts.depth_limit);
    if xbar.is_negative() {
        cert.verdict = Verdict::Fail {
            reason: PositivityError::NegativeSplit(fmt_rational(xbar)).to_string(),
        };
        return cert;
    }
    if p.is_zero() {
        let witness = vec![xbar + BigRational::one(); p.nvars()];
        cert.verdict = Verdict::NotStrict {
            witness,
            reason: "identically zero".into(),
            path: String::new(),
        };
        return cert;
    }
    let regions = RegionSpec::enumerate(p.nvars(), xbar);
    let mut finite: Vec<Option<(MultiPoly, BoxSpec)>> = vec![None; regions.len()];
    let mut level: Vec<Task> = regions
        .iter()
        .enumerate()
        .map(|(i, r)| Task {
            path: r.to_string(),
            depth: 0,
            region: i,
            sub: None,
        })
        .collect();
    let mut failure: Option<String> = None;

    while !level.is_empty() {
        if cert.tree.len() + level.len() > opts.max_nodes {
            failure.get_or_insert_with(|| format!("node budget of {} exhausted", opts.max_nodes));
            break;
        }
        let evals: Vec<Result<NodeEval, PositivityError>> = level
            .par_iter()
            .map(|t| {
                let place = match &t.sub {
                    None => Place::Region(&regions[t.region]),
                    Some(b) => {
                        let (fp, root) = finite[t.region].as_ref().expect("finitized before subdividing");
                        Place::Box {
                            region: &regions[t.region],
                            finite: fp,
                            root,
                            sub: b,
                        }
                    }
                };
                eval_node(p, &place)
            })
            .collect();

        let mut next = Vec::new();
        let mut refuted = false;
        for (task, ev) in level.into_iter().zip(evals) {
            let region = &regions[task.region];
            let transform = match &task.sub {
                None => Transform::Region { region: region.label() },
                Some(b) => Transform::Box {
                    region: region.label(),
                    bounds: b.clone(),
                },
            };
            let ev = match ev {
                Ok(ev) => ev,
                Err(e) => {
                    failure.get_or_insert_with(|| format!("{}: {e}", task.path));
                    continue;
                }
            };
            let mut record = NodeRecord::new(task.path.clone(), transform, task.depth, &ev, opts.keep_polys);
            match ev.kind {
                EvalKind::Pass(_) => {}
                EvalKind::Refute {
                    outcome,
                    witness,
                    value,
                } => {
                    if !refuted && !cert.verdict.is_negative() {
                        cert.verdict = Verdict::Disproven {
                            witness,
                            value,
                            test: outcome.test,
                            path: task.path.clone(),
                        };
                    }
                    refuted = true;
                }
                EvalKind::NotStrict { witness, reason, .. } => {
                    if !refuted && !cert.verdict.is_negative() {
                        cert.verdict = Verdict::NotStrict {
                            witness,
                            reason,
                            path: task.path.clone(),
                        };
                    }
                    refuted = true;
                }
                EvalKind::Undecided(_) => {
                    let children = if task.depth >= opts.depth_limit {
                        record.result = NodeResult::DepthLimit;
                        failure.get_or_insert_with(|| format!("depth limit {} reached at {}", opts.depth_limit, task.path));
                        None
                    } else {
                        match &task.sub {
                            Some(b) => Some(b.halve()),
                            None => {
                                if finite[task.region].is_none() {
                                    match finitize(p, region) {
                                        Ok(f) => finite[task.region] = Some(f),
                                        Err(e) => {
                                            record.result = NodeResult::Stuck;
                                            failure.get_or_insert_with(|| format!("{}: {e}", task.path));
                                        }
                                    }
                                }
                                finite[task.region].as_ref().map(|(_, root)| root.halve())
                            }
                        }
                    };
                    if let Some(children) = children {
                        record.result = NodeResult::Subdivided;
                        for (i, c) in children.into_iter().enumerate() {
                            next.push(Task {
                                path: format!("{}/{}", task.path, i + 1),
                                depth: task.depth + 1,
                                region: task.region,
                                sub: Some(c),
                            });
                        }
                    }
                }
            }
            cert.tree.push(record);
        }
        if refuted {
            return cert;
        }
        level = next;
    }
    if let Some(reason) = failure {
        cert.verdict = Verdict::Fail { reason };
    } else {
        cert.verdict = Verdict::Proven;
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::poly::rational::{int, rat};

    fn p2(s: &str) -> MultiPoly {
        parse_poly(s, Some(2)).unwrap()
    }

    #[test]
    fn example_one_without_subdivision() {
        let cert = prove_nonneg(&p2("x0^2 - x0*x1 + x1^2"), &int(1), 10);
        assert_eq!(cert.verdict, Verdict::Proven);
        assert_eq!(cert.tree.len(), 4);
        cert.replay().unwrap();
    }

    #[test]
    fn example_two_one_level() {
        let p = p2("x0^4*x1 - 5*x0^3*x1 + 10*x0^2*x1 + x0^2 + x1");
        let cert = prove_nonneg(&p, &int(1), 10);
        assert_eq!(cert.verdict, Verdict::Proven);
        assert_eq!(cert.subdivided_paths(), vec!["NE", "SE"]);
        assert_eq!(cert.tree.len(), 12);
        cert.replay().unwrap();
    }

    #[test]
    fn negative_somewhere() {
        let p = p2("x0 + x1 - 1");
        let cert = prove_nonneg(&p, &int(1), 10);
        match &cert.verdict {
            Verdict::Disproven { witness, value, .. } => {
                assert!(value.is_negative());
                assert_eq!(&p.evaluate(witness).unwrap(), value);
                assert!(witness.iter().all(|w| w.is_positive()));
            }
            v => panic!("unexpected verdict {v:?}"),
        }
        cert.replay().unwrap();
    }

    #[test]
    fn zero_away_from_split_point() {
        // vanishes on the whole x1 = 0 axis
        let cert = prove_nonneg(&p2("x1^2"), &int(0), 4);
        assert!(matches!(cert.verdict, Verdict::NotStrict { .. }));
        let cert = prove_nonneg(&MultiPoly::zero(1), &int(1), 4);
        assert!(matches!(cert.verdict, Verdict::NotStrict { .. }));
    }

    #[test]
    fn depth_limit_fails() {
        // (x0 - 1)^2 (x0 - 2)^2 + 1/1000 is positive but needs fine boxes near 2
        let p = parse_poly("(x0-1)^2*(x0-3/2)^2", Some(1)).unwrap();
        let cert = prove_nonneg(&p, &int(1), 3);
        assert!(matches!(cert.verdict, Verdict::Fail { .. } | Verdict::NotStrict { .. }));
        let cert = prove_nonneg(&p, &rat(1, 2), 3);
        assert!(!cert.is_proven());
    }

    #[test]
    fn zero_split_point_cannot_finitize() {
        let cert = prove_nonneg(&p2("x0^2 - x0*x1 + x1^2 - x0 + 1"), &int(0), 4);
        assert!(matches!(cert.verdict, Verdict::Fail { .. }));
    }
}
