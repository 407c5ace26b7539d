//! Coefficient tests applied to a region or box polynomial on `[0, inf)^n`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::quadform::{is_positive_definite, leading_minors, quadratic_matrix, quadratic_part};
use crate::poly::rational::{serde_rational_matrix, serde_rational_opt, serde_rational_vec};
use crate::poly::{grlex_cmp, Monomial, MultiPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestKind {
    PosCoeffs,
    SubPolyN,
    LCoeff,
    Const,
    ZeroOnlyAtOrigin,
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TestKind::PosCoeffs => "PosCoeffs",
            TestKind::SubPolyN => "SubPolyN",
            TestKind::LCoeff => "LCoeff",
            TestKind::Const => "Const",
            TestKind::ZeroOnlyAtOrigin => "ZeroOnlyAtOrigin",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestResult {
    Pass,
    Fail,
    Refute,
}

/// Quadratic-form data reported by SubPoly-n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadFormDetail {
    pub form: String,
    #[serde(with = "serde_rational_matrix")]
    pub matrix: Vec<Vec<BigRational>>,
    #[serde(with = "serde_rational_vec")]
    pub minors: Vec<BigRational>,
    /// `4ac - b^2` for two variables.
    #[serde(with = "serde_rational_opt", default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detail {
    None,
    Reason { text: String },
    QuadForm(QuadFormDetail),
    /// Variables whose simultaneous vanishing zeroes the polynomial.
    ZeroSubset { vars: Vec<usize> },
    Monomial {
        exps: Monomial,
        #[serde(with = "crate::poly::rational::serde_rational")]
        coeff: BigRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test: TestKind,
    pub result: TestResult,
    pub detail: Detail,
}

impl TestOutcome {
    fn new(test: TestKind, result: TestResult, detail: Detail) -> Self {
        TestOutcome { test, result, detail }
    }

    fn reason(test: TestKind, result: TestResult, text: impl Into<String>) -> Self {
        Self::new(test, result, Detail::Reason { text: text.into() })
    }

    pub fn passed(&self) -> bool {
        self.result == TestResult::Pass
    }

    pub fn refuted(&self) -> bool {
        self.result == TestResult::Refute
    }

    /// Discriminant reported by a two-variable SubPoly-n run.
    pub fn discriminant(&self) -> Option<&BigRational> {
        match &self.detail {
            Detail::QuadForm(q) => q.discriminant.as_ref(),
            _ => None,
        }
    }
}

fn first_negative(p: &MultiPoly) -> Option<(&Monomial, &BigRational)> {
    p.terms_grlex().into_iter().find(|(_, c)| c.is_negative())
}

/// All coefficients non-negative and a positive constant term. A zero
/// constant defers to [`zero_only_at_origin`].
pub fn test_poscoeffs(p: &MultiPoly) -> TestOutcome {
    if let Some((m, c)) = first_negative(p) {
        return TestOutcome::new(
            TestKind::PosCoeffs,
            TestResult::Fail,
            Detail::Monomial {
                exps: m.clone(),
                coeff: c.clone(),
            },
        );
    }
    if p.constant_term().is_positive() {
        return TestOutcome::new(TestKind::PosCoeffs, TestResult::Pass, Detail::None);
    }
    zero_only_at_origin(p)
}

/// For non-negative `p` with zero constant term: passes iff no nonempty
/// proper subset of the variables zeroes `p` when set to 0, i.e. `p > 0`
/// on the orthant away from the origin.
pub fn zero_only_at_origin(p: &MultiPoly) -> TestOutcome {
    let kind = TestKind::ZeroOnlyAtOrigin;
    if !p.all_coeffs_nonneg() || !p.constant_term().is_zero() {
        return TestOutcome::reason(kind, TestResult::Fail, "requires non-negative coefficients and zero constant");
    }
    if p.is_zero() {
        return TestOutcome::new(kind, TestResult::Fail, Detail::ZeroSubset { vars: Vec::new() });
    }
    let n = p.nvars();
    // supports of the terms as bit masks; S zeroes p iff every term meets S
    let supports: Vec<u64> = p
        .terms()
        .map(|(m, _)| m.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for s in 1..full {
        if supports.iter().all(|t| t & s != 0) {
            let vars = (0..n).filter(|i| s & (1 << i) != 0).collect();
            return TestOutcome::new(kind, TestResult::Fail, Detail::ZeroSubset { vars });
        }
    }
    TestOutcome::new(kind, TestResult::Pass, Detail::None)
}

/// SubPoly-n: every negative coefficient sits on some `x_r x_s` with
/// `r != s`, and the full quadratic part is positive definite.
pub fn test_subpoly_n(p: &MultiPoly) -> TestOutcome {
    let kind = TestKind::SubPolyN;
    for (m, c) in p.terms_grlex() {
        if !c.is_negative() {
            continue;
        }
        let cross = m.iter().sum::<u32>() == 2 && m.iter().all(|&e| e <= 1);
        if !cross {
            return TestOutcome::new(
                kind,
                TestResult::Fail,
                Detail::Monomial {
                    exps: m.clone(),
                    coeff: c.clone(),
                },
            );
        }
    }
    let matrix = quadratic_matrix(p);
    let minors = leading_minors(&matrix);
    let discriminant = (p.nvars() == 2).then(|| &minors[1] * BigRational::from_integer(BigInt::from(4)));
    let result = if is_positive_definite(&matrix) {
        TestResult::Pass
    } else {
        TestResult::Fail
    };
    TestOutcome::new(
        kind,
        result,
        Detail::QuadForm(QuadFormDetail {
            form: quadratic_part(p).to_string(),
            matrix,
            minors,
            discriminant,
        }),
    )
}

/// Refutes when every term of maximal total degree is negative, so `p`
/// tends to `-inf` along the ray `(t, ..., t)`.
pub fn test_lcoeff(p: &MultiPoly) -> TestOutcome {
    let kind = TestKind::LCoeff;
    let d = p.total_degree();
    if p.is_zero() || d == 0 {
        return TestOutcome::reason(kind, TestResult::Fail, "constant polynomial");
    }
    let top: Vec<_> = p.terms().filter(|(m, _)| m.iter().sum::<u32>() == d).collect();
    if top.iter().all(|(_, c)| c.is_negative()) {
        let (m, c) = top.into_iter().max_by(|a, b| grlex_cmp(a.0, b.0)).unwrap();
        TestOutcome::new(
            kind,
            TestResult::Refute,
            Detail::Monomial {
                exps: m.clone(),
                coeff: c.clone(),
            },
        )
    } else {
        TestOutcome::reason(kind, TestResult::Fail, "top-degree terms are not all negative")
    }
}

/// Refutes when the constant term is negative.
pub fn test_const(p: &MultiPoly) -> TestOutcome {
    let c = p.constant_term();
    let detail = Detail::Monomial {
        exps: vec![0; p.nvars()],
        coeff: c.clone(),
    };
    let result = if c.is_negative() {
        TestResult::Refute
    } else {
        TestResult::Fail
    };
    TestOutcome::new(TestKind::Const, result, detail)
}
