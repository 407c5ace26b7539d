//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see them.

mod common;

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use gasproof::conjecture::{mesh_minimize, MeshParams};
use gasproof::driver::{las_check, prove, prove_k, LasOutcome, PipelineVerdict, ProveOptions};
use gasproof::poly::rational::{int, parse_rational, rat};
use gasproof::poly::{box_map, parse_poly};
use gasproof::positivity::quadform::quadratic_part;
use gasproof::positivity::{
    box_poly, finitize, orthant_split, prove_nonneg, prove_nonneg_with, region_poly, test_subpoly_n, ProverOptions,
    RegionSpec, Verdict,
};
use gasproof::recurrence::{build_contraction_poly, find_equilibrium, parse_rde, Domain};
use gasproof::{BigRational, MultiPoly};
use num_traits::{Signed, Zero};

/// Exact criteria allow no numeric slack at all.
const EXACT_TOLERANCE: i64 = 0;
const GOLDEN_RUNTIME: Duration = Duration::from_secs(60);
const TABLE_RUNTIME: Duration = Duration::from_secs(300);
const MAX_K: u32 = 10;
const MAX_DEPTH: u32 = 12;

/// Sub-checks that cannot pass; see the README.
const KNOWN_RED: &[&str] = &["3: finitize(NE) equals reference P'_NE"];

const K5: &str = include_str!("data/k5_contraction.txt");

struct Criterion {
    id: u32,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u32) -> Self {
        Criterion { id, checks: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push((format!("{}: {name}", self.id), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn p2(s: &str) -> MultiPoly {
    parse_poly(s, Some(2)).unwrap()
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gasproof")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn by_compass(parts: &[(RegionSpec, MultiPoly)], name: &str) -> MultiPoly {
    parts.iter().find(|(r, _)| r.compass() == Some(name)).unwrap().1.clone()
}

fn region(label: &str, xbar: &BigRational) -> RegionSpec {
    RegionSpec::from_label(label, xbar.clone()).unwrap()
}

fn golden_k5() -> Criterion {
    let mut c = Criterion::new(1);
    let start = Instant::now();
    let (code, out) = cli(&["prove-k", "--rde", "(4+x0)/(1+x1)", "--k", "5"]);
    c.check("prove-k exits 0 with verdict true", code == 0 && out.contains("verdict: true"));
    c.check("runtime under 60 s", start.elapsed() < GOLDEN_RUNTIME);

    let spec = parse_rde("(4+x0)/(1+x1)").unwrap();
    let eq = find_equilibrium(&spec).unwrap();
    let p = build_contraction_poly(&spec, &eq, 5).unwrap();
    let reference = p2(&K5.replace('\n', " "));
    c.check("contraction polynomial equals the reference", p == reference && p.len() == 78);
    // reference x_1^a x_2^b is x0^b x1^a here
    c.check("coefficient 25 on x0^4 x1^8", p.coeff(&[4, 8]) == int(25));
    c.check("coefficient 3060 on x0 x1^8", p.coeff(&[1, 8]) == int(3060));
    c.check("constant 3488704", p.constant_term() == int(3488704));
    c.check("coefficient -148969 on x1^4", p.coeff(&[0, 4]) == int(-148969));

    let two = int(2);
    let ne = region_poly(&p, &region("HH", &two)).unwrap();
    let form = p2("349366689*x1^2 - 6980904*x0*x1 + 318700575*x0^2");
    c.check("NE quadratic form", quadratic_part(&ne) == form);
    let ne_test = test_subpoly_n(&ne);
    c.check(
        "NE discriminant 445324725659927484",
        ne_test.passed() && ne_test.discriminant() == Some(&q("445324725659927484")),
    );
    let sw_test = test_subpoly_n(&region_poly(&p, &region("LL", &two)).unwrap());
    c.check(
        "SW discriminant 111331181414981871/67108864",
        sw_test.passed() && sw_test.discriminant() == Some(&q("111331181414981871/67108864")),
    );
    let cert = prove_nonneg(&p, &two, MAX_DEPTH);
    c.check("proof has 4 regions and no subdivision", cert.is_proven() && cert.tree.len() == 4 && cert.max_depth() == 0);
    c
}

fn example_one() -> Criterion {
    let mut c = Criterion::new(2);
    let p = p2("x0^2 - x0*x1 + x1^2");
    let parts = orthant_split(&p, &int(1)).unwrap();
    let diag = p2("x0^2 - x0*x1 + x1^2 + x0 + x1 + 1");
    let mixed = p2("x0^2*x1^2 + 2*x0^2*x1 + 2*x0*x1^2 + x0^2 + 3*x0*x1 + x1^2 + x0 + x1 + 1");
    c.check("P_NE", by_compass(&parts, "NE") == diag);
    c.check("P_SW", by_compass(&parts, "SW") == diag);
    c.check("P_NW", by_compass(&parts, "NW") == mixed);
    c.check("P_SE", by_compass(&parts, "SE") == mixed);
    let d = test_subpoly_n(&diag);
    c.check("SubPoly d = 3", d.passed() && d.discriminant() == Some(&int(3)));
    let cert = prove_nonneg(&p, &int(1), MAX_DEPTH);
    c.check("proven without subdivision", cert.is_proven() && cert.tree.len() == 4);
    c
}

fn example_two() -> Criterion {
    let mut c = Criterion::new(3);
    // the reference polynomial has x where its region polynomials need x^2
    let p = p2("x0^4*x1 - 5*x0^3*x1 + 10*x0^2*x1 + x0^2 + x1");
    let one = int(1);
    let parts = orthant_split(&p, &one).unwrap();
    c.check(
        "P_NE",
        by_compass(&parts, "NE") == p2("x0^4*x1 + x0^4 - x0^3*x1 - x0^3 + x0^2*x1 + 2*x0^2 + 9*x0*x1 + 11*x0 + 7*x1 + 8"),
    );
    c.check(
        "P_SW",
        by_compass(&parts, "SW") == p2("x0^4 + 4*x0^3 + x0^2*x1 + 17*x0^2 + 2*x0*x1 + 21*x0 + x1 + 8"),
    );
    c.check(
        "P_NW",
        by_compass(&parts, "NW")
            == p2("x0^4*x1 + x0^4 + 4*x0^3*x1 + 4*x0^3 + 16*x0^2*x1 + 17*x0^2 + 19*x0*x1 + 21*x0 + 7*x1 + 8"),
    );
    c.check(
        "P_SE",
        by_compass(&parts, "SE") == p2("x0^4 - x0^3 + x0^2*x1 + 2*x0^2 + 2*x0*x1 + 11*x0 + x1 + 8"),
    );

    let (se, se_box) = finitize(&p, &region("HL", &one)).unwrap();
    c.check("finitize(SE) equals reference P'_SE", se == p2("x0^4*x1 + 10*x0^2*x1 + x0^2 - 5*x0*x1 + x1"));
    let reference_ne = p2("8*x0^4*x1 + 7*x0^4 + 11*x0^3*x1 + 9*x0^3 + 2*x0^2*x1 + x0^2 - x0*x1 - x0 + x1 + 1");
    let (ne, ne_box) = finitize(&p, &region("HH", &one)).unwrap();
    c.check("finitize(NE) equals reference P'_NE", ne == reference_ne);
    // the reference P'_NE is the inversion of the shifted P_NE instead
    let shifted_inverse = {
        let pne = by_compass(&parts, "NE");
        let a = gasproof::poly::invert_var(&pne, 0).unwrap();
        gasproof::poly::invert_var(&a, 1).unwrap()
    };
    c.check("reference P'_NE is the inversion of P_NE", shifted_inverse == reference_ne);

    let se_kids: Vec<MultiPoly> = se_box.halve().iter().map(|b| box_poly(&se, b).unwrap()).collect();
    let se_reference = [
        "x0^4 + 3*x0^3 + x0^2*x1 + 6*x0^2 + 4*x0*x1 + 20*x0 + 4*x1 + 25",
        "1/2*x0^4*x1 + 2*x0^4 + 3/2*x0^3*x1 + 6*x0^3 + 3*x0^2*x1 + 10*x0^2 + 10*x0*x1 + 32*x0 + 25/2*x1 + 42",
        "1/4*x0^4*x1 + 25/16*x0^4 + 3*x0^3*x1 + 20*x0^3 + 13*x0^2*x1 + 96*x0^2 + 24*x0*x1 + 196*x0 + 16*x1 + 144",
        "25/32*x0^4*x1 + 21/8*x0^4 + 10*x0^3*x1 + 34*x0^3 + 48*x0^2*x1 + 166*x0^2 + 98*x0*x1 + 344*x0 + 72*x1 + 256",
    ];
    for (i, text) in se_reference.iter().enumerate() {
        c.check(&format!("SE S{}", i + 1), se_kids[i] == p2(text));
    }
    let ne_reference = [
        "x0^4*x1 + 3*x0^4 + 7*x0^3*x1 + 21*x0^3 + 19*x0^2*x1 + 58*x0^2 + 33*x0*x1 + 105*x0 + 37*x1 + 120",
        "3/2*x0^4*x1 + 4*x0^4 + 21/2*x0^3*x1 + 28*x0^3 + 29*x0^2*x1 + 78*x0^2 + 105/2*x0*x1 + 144*x0 + 60*x1 + 166",
        "37/16*x0^4*x1 + 15/2*x0^4 + 115/4*x0^3*x1 + 375/4*x0^3 + 142*x0^2*x1 + 463*x0^2 + 320*x0*x1 + 1040*x0 + 272*x1 + 880",
        "15/4*x0^4*x1 + 83/8*x0^4 + 375/8*x0^3*x1 + 130*x0^3 + 463/2*x0^2*x1 + 642*x0^2 + 520*x0*x1 + 1440*x0 + 440*x1 + 1216",
    ];
    for (i, (b, text)) in ne_box.halve().iter().zip(ne_reference).enumerate() {
        let got = box_map(&reference_ne, b.bounds()).unwrap();
        c.check(&format!("NE S{} from reference P'_NE", i + 1), got == p2(text));
    }
    let cert = prove_nonneg(&p, &one, MAX_DEPTH);
    c.check("verdict Proven", cert.is_proven());
    c.check("NE and SE subdivided once", cert.subdivided_paths() == vec!["NE", "SE"] && cert.max_depth() == 1);
    c
}

/// Golden `K` with a mesh cross-check on the direct norm difference:
/// positive at `K` everywhere on the mesh, not positive somewhere at `K - 1`.
fn table_row(c: &mut Criterion, name: &str, rde: &str, xbar: BigRational, golden_k: u32) {
    let spec = parse_rde(rde).unwrap();
    let start = Instant::now();
    let opts = ProveOptions {
        max_k: MAX_K,
        prover: ProverOptions {
            depth_limit: MAX_DEPTH,
            ..ProverOptions::default()
        },
        ..ProveOptions::default()
    };
    let r = prove(&spec, &opts).unwrap();
    let elapsed = start.elapsed();
    c.check(&format!("{name} proven GAS"), r.verdict == PipelineVerdict::True);
    c.check(&format!("{name} xbar = {xbar}"), r.equilibrium.value == xbar);
    c.check(&format!("{name} K = {golden_k}"), r.k == Some(golden_k));
    c.check(&format!("{name} within 5 min"), elapsed < TABLE_RUNTIME);
    let eq = r.equilibrium.clone();
    let from = u32::from(eq.domain == Domain::Open);
    let eps = rat(1, 4);
    let at_k = common::min_norm_difference(&spec, &eq, golden_k, &eps, from, 16).unwrap();
    c.check(&format!("{name} mesh positive at K"), at_k.1.is_positive());
    if golden_k > 1 {
        let below = common::min_norm_difference(&spec, &eq, golden_k - 1, &eps, from, 16).unwrap();
        c.check(&format!("{name} mesh not positive at K - 1"), !below.1.is_positive());
    }
}

fn table() -> Criterion {
    let mut c = Criterion::new(4);
    table_row(&mut c, "row 23 beta=2", "2*x0/(1+x0)", int(1), 1);
    table_row(&mut c, "row 30 A=2", "x1/(2+x1)", int(0), 2);
    table_row(&mut c, "row 41 alpha=1 beta=1/2", "1 + x0/2", int(2), 1);
    table_row(&mut c, "row 109 A=2 B=1", "x1/(2+x0+x1)", int(0), 2);
    let spec = parse_rde("2*x0").unwrap();
    let r = prove(&spec, &ProveOptions::default()).unwrap();
    let las = las_check(&spec, &r.equilibrium);
    c.check(
        "row 5 beta=2 false via unstable LAS",
        r.verdict == PipelineVerdict::False && las.outcome == LasOutcome::Unstable,
    );
    c
}

fn properties() -> Criterion {
    let mut c = Criterion::new(5);
    let mut rng = common::rng(5);

    let mut ok = true;
    for _ in 0..100 {
        let p = common::poly(&mut rng, 2, 5, 6, 0.4);
        let y = common::point(&mut rng, 2);
        let mu = common::point(&mut rng, 2);
        let moved: Vec<BigRational> = y.iter().zip(&mu).map(|(a, b)| a + b).collect();
        ok &= gasproof::poly::shift(&p, &mu).unwrap().evaluate(&y).unwrap() == p.evaluate(&moved).unwrap();
    }
    c.check("shift identity at 100 points", ok);

    let mut ok = true;
    for i in 0..100 {
        let p = common::poly(&mut rng, 2, 5, 6, 0.4);
        let mut y = common::point(&mut rng, 2);
        let var = i % 2;
        if y[var].is_zero() {
            y[var] = int(3);
        }
        ok &= gasproof::poly::invert_var(&p, var).unwrap().evaluate(&y).unwrap() == common::eval_inverted(&p, var, &y);
    }
    c.check("invert identity at 100 points", ok);

    let mut ok = true;
    for _ in 0..100 {
        let p = common::poly(&mut rng, 2, 5, 6, 0.4);
        let y = common::point(&mut rng, 2);
        let lo = common::point(&mut rng, 2);
        let bounds: Vec<(BigRational, BigRational)> = lo.iter().map(|a| (a.clone(), a + rat(3, 7))).collect();
        let mut x = Vec::new();
        let mut factor = int(1);
        for (i, ((a, b), v)) in bounds.iter().zip(&y).enumerate() {
            let t = v + (b - a).recip();
            x.push(t.recip() + a);
            factor *= common::pow(&t, p.degree_in(i).unwrap());
        }
        ok &= box_map(&p, &bounds).unwrap().evaluate(&y).unwrap() == p.evaluate(&x).unwrap() * factor;
    }
    c.check("box_map identity at 100 points", ok);

    let opts = ProverOptions {
        depth_limit: 8,
        max_nodes: 5000,
        keep_polys: false,
    };
    let (mut sound, mut witnesses_ok) = (true, true);
    let (mut proven, mut refuted) = (0, 0);
    for i in 0..50 {
        let p = common::poly(&mut rng, 2, 4, 5, 0.25);
        let xbar = if i % 5 == 0 { int(0) } else { rat(1 + i % 3, 1 + i % 2) };
        let cert = prove_nonneg_with(&p, &xbar, &opts);
        let from = u32::from(xbar.is_positive());
        let grid = common::grid_counterexample(&p, &xbar, &rat(1, 10), from, 50);
        sound &= common::consistent_with_grid(&p, &cert, grid.as_ref()).is_ok();
        match &cert.verdict {
            Verdict::Proven => proven += 1,
            Verdict::Disproven { witness, value, .. } => {
                refuted += 1;
                witnesses_ok &= value.is_negative() && p.evaluate(witness).unwrap() == *value;
            }
            _ => {}
        }
    }
    say(&format!("  random polynomials: {proven} proven, {refuted} disproven of 50"));
    c.check("prover agrees with the 50^n grid on 50 polynomials", sound && proven > 0 && refuted > 0);
    c.check("disproven witnesses are exactly negative", witnesses_ok);

    let mut ok = true;
    for i in 0..200 {
        let n = 1 + i % 5;
        let b: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..n).map(|_| int(rand::Rng::gen_range(&mut rng, -4..=4))).collect())
            .collect();
        let shift = int(rand::Rng::gen_range(&mut rng, -2..=6));
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        let mut v = (0..n).fold(BigRational::zero(), |acc, k| acc + &b[k][r] * &b[k][s]);
                        if r == s {
                            v += &shift;
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        ok &= gasproof::positivity::quadform::is_positive_definite(&a) == common::ldl_positive_definite(&a);
    }
    c.check("Sylvester agrees with elimination on 200 matrices up to 5x5", ok);

    let mut ok = true;
    for rde in ["(4+x0)/(1+x1)", "x1/(2+x0+x1)", "(9+x0)/(1+x1)"] {
        let spec = parse_rde(rde).unwrap();
        let eq = find_equilibrium(&spec).unwrap();
        for k in 1..=3 {
            let p = build_contraction_poly(&spec, &eq, k).unwrap();
            for _ in 0..100 {
                let v = common::domain_point(&mut rng, 2);
                ok &= Some(common::sign(&p.evaluate(&v).unwrap())) == common::direct_sign(&spec, &eq, k, &v);
            }
        }
    }
    c.check("contraction polynomial sign matches the norm difference", ok);
    c
}

fn degenerate() -> Criterion {
    let mut c = Criterion::new(6);
    let spec = parse_rde("1/x0").unwrap();
    let eq = find_equilibrium(&spec).unwrap();
    for k in [2, 4] {
        let r = prove_k(&spec, k, &ProverOptions::default()).unwrap();
        let strictness = matches!(
            r.certificate.as_ref().map(|c| &c.verdict),
            Some(Verdict::NotStrict { reason, .. }) if reason == "identically zero"
        );
        c.check(&format!("K = {k} not strict"), strictness && r.verdict == PipelineVerdict::False);
    }
    let params = MeshParams {
        n: 40,
        restarts: 40,
        ..MeshParams::default()
    };
    for k in [1, 3] {
        let p = build_contraction_poly(&spec, &eq, k).unwrap();
        let negative = mesh_minimize(&p, &params).iter().any(|m| m.value.is_negative());
        c.check(&format!("K = {k} mesh negative"), negative);
    }
    let r = prove(&spec, &ProveOptions::default()).unwrap();
    c.check("prove gives FAIL", r.verdict == PipelineVerdict::Fail);
    let (code, _) = cli(&["prove", "--rde", "1/x0", "--max-k", "4"]);
    c.check("CLI exits 2", code == 2);
    let (code, _) = cli(&["prove", "--rde", "(1+x0)/(1+2*x0)", "--max-k", "4"]);
    c.check("irrational equilibrium exits 3", code == 3);
    c
}

/// Writes past the test harness's output capture so the criterion lines
/// show up in a plain `cargo test` log.
fn say(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    assert_eq!(EXACT_TOLERANCE, 0);
    let criteria = [golden_k5(), example_one(), example_two(), table(), properties(), degenerate()];
    let mut unexpected = Vec::new();
    for c in &criteria {
        let failed: Vec<&str> = c.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect();
        if c.passed() {
            say(&format!("criterion {}: PASS ({} checks)", c.id, c.checks.len()));
        } else {
            say(&format!("criterion {}: FAIL [{}]", c.id, failed.join("; ")));
        }
        unexpected.extend(failed.into_iter().filter(|n| !KNOWN_RED.contains(n)));
    }
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
