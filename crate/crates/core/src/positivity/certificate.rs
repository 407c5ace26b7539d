use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::criteria::{Detail, TestKind};
use super::region::{BoxSpec, RegionSpec};
use super::{eval_node, EvalKind, NodeEval, Place};
use crate::error::ReplayError;
use crate::poly::rational::{serde_rational, serde_rational_vec};
use crate::poly::{parse_poly, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Proven,
    /// The original polynomial is negative at `witness`.
    Disproven {
        #[serde(with = "serde_rational_vec")]
        witness: Vec<BigRational>,
        #[serde(with = "serde_rational")]
        value: BigRational,
        test: TestKind,
        path: String,
    },
    /// The original polynomial vanishes at `witness`, which is not the
    /// split point, so positivity there is not strict.
    NotStrict {
        #[serde(with = "serde_rational_vec")]
        witness: Vec<BigRational>,
        reason: String,
        path: String,
    },
    Fail {
        reason: String,
    },
}

impl Verdict {
    pub fn is_negative(&self) -> bool {
        matches!(self, Verdict::Disproven { .. } | Verdict::NotStrict { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    Region { region: String },
    Box { region: String, bounds: BoxSpec },
}

impl Transform {
    pub fn region_label(&self) -> &str {
        match self {
            Transform::Region { region } | Transform::Box { region, .. } => region,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeResult {
    Pass,
    Refute,
    NotStrict,
    Subdivided,
    DepthLimit,
    /// Undecided and impossible to finitize.
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub path: String,
    pub depth: u32,
    pub transform: Transform,
    pub digest: String,
    pub test: Option<TestKind>,
    pub result: NodeResult,
    pub detail: Detail,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

impl NodeRecord {
    pub(crate) fn new(path: String, transform: Transform, depth: u32, ev: &NodeEval, keep_poly: bool) -> Self {
        let (test, result, detail) = match &ev.kind {
            EvalKind::Pass(o) => (Some(o.test), NodeResult::Pass, o.detail.clone()),
            EvalKind::Refute { outcome, .. } => (Some(outcome.test), NodeResult::Refute, outcome.detail.clone()),
            EvalKind::NotStrict { outcome, reason, .. } => (
                outcome.as_ref().map(|o| o.test),
                NodeResult::NotStrict,
                Detail::Reason { text: reason.clone() },
            ),
            // the caller decides between subdividing and giving up
            EvalKind::Undecided(o) => (Some(o.test), NodeResult::Subdivided, o.detail.clone()),
        };
        NodeRecord {
            path,
            depth,
            transform,
            digest: ev.digest.clone(),
            test,
            result,
            detail,
            poly: keep_poly.then(|| ev.poly.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub input: String,
    pub input_digest: String,
    pub nvars: usize,
    #[serde(with = "serde_rational")]
    pub xbar: BigRational,
    pub depth_limit: u32,
    pub verdict: Verdict,
    pub tree: Vec<NodeRecord>,
}

impl ProofCertificate {
    pub(crate) fn empty(p: &MultiPoly, xbar: &BigRational, depth_limit: u32) -> Self {
        ProofCertificate {
            input: p.to_string(),
            input_digest: p.digest(),
            nvars: p.nvars(),
            xbar: xbar.clone(),
            depth_limit,
            verdict: Verdict::Fail {
                reason: "not run".into(),
            },
            tree: Vec::new(),
        }
    }

    pub fn is_proven(&self) -> bool {
        self.verdict == Verdict::Proven
    }

    pub fn node(&self, path: &str) -> Option<&NodeRecord> {
        self.tree.iter().find(|n| n.path == path)
    }

    pub fn subdivided_paths(&self) -> Vec<&str> {
        self.tree
            .iter()
            .filter(|n| n.result == NodeResult::Subdivided)
            .map(|n| n.path.as_str())
            .collect()
    }

    pub fn max_depth(&self) -> u32 {
        self.tree.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReplayError> {
        serde_json::from_str(text).map_err(|e| ReplayError::Malformed(e.to_string()))
    }

    pub fn input_poly(&self) -> Result<MultiPoly, ReplayError> {
        parse_poly(&self.input, Some(self.nvars)).map_err(|e| ReplayError::Malformed(e.to_string()))
    }

    /// Recomputes every node from the input polynomial and checks digests,
    /// outcomes, tree completeness and the verdict.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let p = self.input_poly()?;
        if p.digest() != self.input_digest {
            return Err(ReplayError::InputDigest);
        }
        if p.is_zero() {
            return match &self.verdict {
                Verdict::NotStrict { .. } if self.tree.is_empty() => Ok(()),
                _ => Err(ReplayError::Verdict),
            };
        }
        let regions = RegionSpec::enumerate(self.nvars, &self.xbar);
        let mut finite = Vec::with_capacity(regions.len());
        for r in &regions {
            finite.push(super::finitize(&p, r).ok());
        }
        for node in &self.tree {
            let idx = regions
                .iter()
                .position(|r| r.label() == node.transform.region_label())
                .ok_or_else(|| ReplayError::Malformed(format!("unknown region in {}", node.path)))?;
            let place = match &node.transform {
                Transform::Region { .. } => Place::Region(&regions[idx]),
                Transform::Box { bounds, .. } => {
                    let (fp, root) = finite[idx]
                        .as_ref()
                        .ok_or_else(|| ReplayError::Malformed(format!("{} cannot be finitized", node.path)))?;
                    Place::Box {
                        region: &regions[idx],
                        finite: fp,
                        root,
                        sub: bounds,
                    }
                }
            };
            let ev = eval_node(&p, &place)?;
            if ev.digest != node.digest {
                return Err(ReplayError::NodeDigest {
                    path: node.path.clone(),
                });
            }
            let mut replayed = NodeRecord::new(node.path.clone(), node.transform.clone(), node.depth, &ev, false);
            if matches!(ev.kind, EvalKind::Undecided(_))
                && matches!(node.result, NodeResult::DepthLimit | NodeResult::Stuck)
            {
                replayed.result = node.result;
            }
            if (replayed.test, replayed.result, &replayed.detail) != (node.test, node.result, &node.detail) {
                return Err(ReplayError::NodeOutcome {
                    path: node.path.clone(),
                    recorded: format!("{:?}/{:?}", node.test, node.result),
                    replayed: format!("{:?}/{:?}", replayed.test, replayed.result),
                });
            }
        }
        self.check_structure()?;
        self.check_verdict(&p)
    }

    fn check_structure(&self) -> Result<(), ReplayError> {
        let paths: HashSet<&str> = self.tree.iter().map(|n| n.path.as_str()).collect();
        let ended_early = self.verdict.is_negative() || matches!(self.verdict, Verdict::Fail { .. });
        for node in &self.tree {
            if node.result != NodeResult::Subdivided || ended_early {
                continue;
            }
            let kids = 1usize << self.nvars;
            if (1..=kids).any(|i| !paths.contains(format!("{}/{}", node.path, i).as_str())) {
                return Err(ReplayError::MissingChildren(node.path.clone()));
            }
        }
        let regions = RegionSpec::enumerate(self.nvars, &self.xbar);
        let top = self.tree.iter().filter(|n| n.depth == 0).count();
        if top != regions.len() {
            return Err(ReplayError::Malformed(format!("{top} top-level regions, expected {}", regions.len())));
        }
        Ok(())
    }

    fn check_verdict(&self, p: &MultiPoly) -> Result<(), ReplayError> {
        match &self.verdict {
            Verdict::Proven => {
                let all_leaves_pass = self
                    .tree
                    .iter()
                    .all(|n| matches!(n.result, NodeResult::Pass | NodeResult::Subdivided));
                if all_leaves_pass {
                    Ok(())
                } else {
                    Err(ReplayError::Verdict)
                }
            }
            Verdict::Disproven { witness, value, .. } => {
                let v = p.evaluate(witness).map_err(|_| ReplayError::Witness)?;
                if &v == value && v.is_negative() && witness.iter().all(|w| !w.is_negative()) {
                    Ok(())
                } else {
                    Err(ReplayError::Witness)
                }
            }
            Verdict::NotStrict { witness, .. } => {
                let v = p.evaluate(witness).map_err(|_| ReplayError::Witness)?;
                let at_split = witness.iter().all(|w| w == &self.xbar);
                if v.is_zero() && !at_split && witness.iter().all(|w| !w.is_negative()) {
                    Ok(())
                } else {
                    Err(ReplayError::Witness)
                }
            }
            Verdict::Fail { .. } => Ok(()),
        }
    }
}
