use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::pipeline::{prove, ProveOptions};
use crate::error::{RecurrenceError, WebbookError};
use crate::poly::rational::{fmt_rational, parse_rational};
use crate::recurrence::parse_rde_with;

/// Largest sampled denominator.
pub const MAX_DENOM: i64 = 64;

/// Parameter `name` drawn from the half-open interval `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamRange {
    pub name: String,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl ParamRange {
    /// Parses `NAME=LO..HI`.
    pub fn parse(text: &str) -> Result<Self, WebbookError> {
        let bad = || WebbookError::BadRange(text.to_string());
        let (name, rest) = text.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = rest.split_once("..").ok_or_else(bad)?;
        let name = name.trim();
        if name.is_empty() {
            return Err(bad());
        }
        let lo = parse_rational(lo.trim()).map_err(|_| bad())?;
        let hi = parse_rational(hi.trim()).map_err(|_| bad())?;
        ParamRange::new(name, lo, hi)
    }

    pub fn new(name: &str, lo: BigRational, hi: BigRational) -> Result<Self, WebbookError> {
        if lo.is_negative() || hi <= lo {
            return Err(WebbookError::EmptyRange {
                name: name.to_string(),
                lo: fmt_rational(&lo),
                hi: fmt_rational(&hi),
            });
        }
        Ok(ParamRange {
            name: name.to_string(),
            lo,
            hi,
        })
    }

    /// Numerators `n` with `lo < n/q <= hi`.
    fn numerators(&self, q: i64) -> (BigInt, BigInt) {
        let q = BigRational::from_integer(q.into());
        ((&self.lo * &q).floor().to_integer() + 1, (&self.hi * &q).floor().to_integer())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<BigRational, WebbookError> {
        let dens: Vec<i64> = (1..=MAX_DENOM)
            .filter(|&q| {
                let (a, b) = self.numerators(q);
                a <= b
            })
            .collect();
        if dens.is_empty() {
            return Err(WebbookError::NoSample(self.name.clone()));
        }
        let q = dens[rng.gen_range(0..dens.len())];
        let (a, b) = self.numerators(q);
        let span = (&b - &a).to_u64().expect("span fits: range width times 64");
        let n = a + BigInt::from(rng.gen_range(0..=span));
        Ok(BigRational::new(n, q.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebbookRow {
    pub params: Vec<(String, BigRational)>,
    pub equilibrium: Option<BigRational>,
    pub k: Option<u32>,
    /// `true`, `false`, `FAIL` or `unsupported`.
    pub verdict: String,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WebbookReport {
    pub template: String,
    pub rows: Vec<WebbookRow>,
    /// Samples dropped because an instantiated coefficient was negative.
    pub skipped: Vec<Vec<(String, BigRational)>>,
}

impl WebbookReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self
            .rows
            .first()
            .map(|r| r.params.iter().map(|(n, _)| n.as_str()).collect())
            .unwrap_or_default();
        writeln!(out, "# {}", self.template).unwrap();
        let mut header: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        header.extend(["xbar".into(), "K".into(), "verdict".into()]);
        writeln!(out, "{}", header.join("\t")).unwrap();
        for r in &self.rows {
            let mut cells: Vec<String> = r.params.iter().map(|(_, v)| fmt_rational(v)).collect();
            cells.push(r.equilibrium.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into()));
            cells.push(r.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into()));
            cells.push(r.verdict.clone());
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        if !self.skipped.is_empty() {
            writeln!(out, "# skipped {} samples with negative coefficients", self.skipped.len()).unwrap();
        }
        out
    }
}

fn run_row(template: &str, params: &[(String, BigRational)], opts: &ProveOptions) -> Result<WebbookRow, ()> {
    let bound: HashMap<String, BigRational> = params.iter().cloned().collect();
    let mut row = WebbookRow {
        params: params.to_vec(),
        equilibrium: None,
        k: None,
        verdict: "unsupported".into(),
        reason: None,
    };
    let spec = match parse_rde_with(template, &bound) {
        Ok(s) => s,
        Err(RecurrenceError::NegativeCoefficient { .. }) => return Err(()),
        Err(e) => {
            row.reason = Some(e.to_string());
            return Ok(row);
        }
    };
    match prove(&spec, opts) {
        Ok(r) => {
            row.equilibrium = Some(r.equilibrium.value.clone());
            row.k = r.k.filter(|_| r.verdict == super::PipelineVerdict::True);
            row.verdict = r.verdict.to_string();
            row.reason = r.reason;
        }
        Err(e) => row.reason = Some(e.to_string()),
    }
    Ok(row)
}

/// Samples `count` parameter vectors with a seeded generator and runs
/// [`prove`] on each instantiation. Rows keep sampling order.
pub fn webbook(
    template: &str,
    ranges: &[ParamRange],
    count: usize,
    seed: u64,
    opts: &ProveOptions,
) -> Result<WebbookReport, WebbookError> {
    if count == 0 {
        return Err(WebbookError::ZeroCount);
    }
    for (i, r) in ranges.iter().enumerate() {
        if ranges[..i].iter().any(|s| s.name == r.name) {
            return Err(WebbookError::DuplicateParam(r.name.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let mut v = Vec::with_capacity(ranges.len());
        for r in ranges {
            v.push((r.name.clone(), r.sample(&mut rng)?));
        }
        samples.push(v);
    }
    let results: Vec<Result<WebbookRow, ()>> = samples.par_iter().map(|s| run_row(template, s, opts)).collect();
    let mut report = WebbookReport {
        template: template.to_string(),
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for (s, r) in samples.into_iter().zip(results) {
        match r {
            Ok(row) => report.rows.push(row),
            Err(()) => {
                let shown: Vec<String> = s.iter().map(|(n, v)| format!("{n}={}", fmt_rational(v))).collect();
                log::warn!("skipping {}: negative coefficient", shown.join(", "));
                report.skipped.push(s);
            }
        }
    }
    Ok(report)
}
