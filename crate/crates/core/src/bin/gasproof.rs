use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gasproof::conjecture::MeshParams;
use gasproof::driver::{prove, prove_k, webbook, ParamRange, PipelineResult, ProveOptions};
use gasproof::poly::rational::{fmt_rational, parse_rational};
use gasproof::poly::{parse_poly, MultiPoly};
use gasproof::positivity::{orthant_split, prove_nonneg_with, ProofCertificate, ProverOptions, Verdict, DEFAULT_DEPTH};
use gasproof::recurrence::{build_contraction_poly, parse_rde};
use gasproof::BigRational;

const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "gasproof", version, about = "Global asymptotic stability proofs for rational difference equations")]
struct Cli {
    /// Print region polynomials and timings.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a contraction exponent K and prove it.
    Prove(ProveArgs),
    /// Prove that a given K works.
    ProveK(ProveKArgs),
    /// Decide positivity of a polynomial on the orthant.
    Positivity(PositivityArgs),
    /// Run `prove` on random parameter instantiations.
    Webbook(WebbookArgs),
    /// Re-check a certificate written by `--cert`.
    Replay {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Args)]
struct MeshArgs {
    #[arg(long, default_value = "1/10", value_parser = rational)]
    eps: BigRational,
    #[arg(long, default_value_t = 100)]
    mesh_n: u32,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    mesh_seed: u64,
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    rde: String,
    #[arg(long)]
    max_k: u32,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[command(flatten)]
    mesh: MeshArgs,
    #[arg(long)]
    prove_each_k: bool,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct ProveKArgs {
    #[arg(long)]
    rde: String,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct PositivityArgs {
    #[arg(long, conflicts_with = "poly_file", required_unless_present = "poly_file")]
    poly: Option<String>,
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Variable count; defaults to one more than the highest index used.
    #[arg(long)]
    nvars: Option<usize>,
    #[arg(long, value_parser = rational)]
    xbar: BigRational,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct WebbookArgs {
    #[arg(long)]
    template: String,
    /// `NAME=LO..HI`, sampled from `(LO, HI]`.
    #[arg(long = "range", required = true, value_parser = param_range)]
    ranges: Vec<ParamRange>,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    max_k: u32,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    #[command(flatten)]
    mesh: MeshArgs,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn param_range(s: &str) -> Result<ParamRange, String> {
    ParamRange::parse(s).map_err(|e| e.to_string())
}

fn prover(depth: u32) -> ProverOptions {
    ProverOptions {
        depth_limit: depth,
        ..ProverOptions::default()
    }
}

fn mesh_params(m: &MeshArgs, max_k: u32) -> MeshParams {
    MeshParams {
        eps: m.eps.clone(),
        n: m.mesh_n,
        restarts: m.restarts,
        max_k,
        seed: m.mesh_seed,
    }
}

fn unsupported(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("unsupported: {msg}");
    ExitCode::from(EXIT_UNSUPPORTED)
}

fn print_regions(p: &MultiPoly, xbar: &BigRational) {
    match orthant_split(p, xbar) {
        Ok(parts) => {
            for (r, q) in parts {
                println!("  {r}: {q}");
            }
        }
        Err(e) => println!("  regions unavailable: {e}"),
    }
}

fn write_json(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_certs(path: &Path, r: &PipelineResult) -> Result<(), String> {
    if let Some(c) = &r.certificate {
        write_json(path, &c.to_json())?;
    }
    for f in &r.faces {
        if let Some(c) = &f.certificate {
            let vars: Vec<String> = f.zero_vars.iter().map(|i| format!("x{i}")).collect();
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("cert");
            let face = path.with_file_name(format!("{stem}.face-{}.json", vars.join("-")));
            write_json(&face, &c.to_json())?;
        }
    }
    Ok(())
}

fn report(r: &PipelineResult, verbose: bool) {
    println!("rde: {}", r.spec);
    println!("equilibrium: {} ({:?})", fmt_rational(&r.equilibrium.value), r.equilibrium.domain);
    if let Some(l) = &r.las {
        println!("las: {:?}, characteristic polynomial {}", l.outcome, l.charpoly);
    }
    for a in &r.attempts {
        println!("K = {}: {}", a.k, a.outcome);
    }
    if let Some(c) = &r.certificate {
        println!("certificate: {} nodes, depth {}", c.tree.len(), c.max_depth());
    }
    if !r.faces.is_empty() {
        println!("boundary faces checked: {}", r.faces.len());
    }
    if let Some(k) = r.k {
        println!("K: {k}");
    }
    if let Some(reason) = &r.reason {
        println!("reason: {reason}");
    }
    println!("verdict: {}", r.verdict);
    if verbose {
        eprintln!(
            "timings: las {:?}, conjecture {:?}, proof {:?}",
            r.timings.las, r.timings.conjecture, r.timings.proof
        );
    }
}

fn finish(r: PipelineResult, cert: Option<&Path>, verbose: bool) -> ExitCode {
    if verbose {
        if let (Some(k), Ok(spec)) = (r.k, parse_rde(&r.spec)) {
            if let Ok(p) = build_contraction_poly(&spec, &r.equilibrium, k) {
                println!("region polynomials for K = {k}:");
                print_regions(&p, &r.equilibrium.value);
            }
        }
    }
    report(&r, verbose);
    if let Some(path) = cert {
        if let Err(e) = write_certs(path, &r) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_UNSUPPORTED);
        }
    }
    ExitCode::from(r.verdict.exit_code() as u8)
}

fn run_positivity(a: PositivityArgs, verbose: bool) -> ExitCode {
    let text = match (&a.poly, &a.poly_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(t) => t.replace('\n', " "),
            Err(e) => return unsupported(format!("{}: {e}", path.display())),
        },
        (None, None) => unreachable!("clap requires one input"),
    };
    let p = match parse_poly(&text, a.nvars) {
        Ok(p) => p,
        Err(e) => return unsupported(e),
    };
    if verbose {
        println!("region polynomials:");
        print_regions(&p, &a.xbar);
    }
    let cert = prove_nonneg_with(&p, &a.xbar, &prover(a.depth));
    println!("nodes: {}, depth {}", cert.tree.len(), cert.max_depth());
    let code = match &cert.verdict {
        Verdict::Proven => {
            println!("verdict: proven");
            0
        }
        Verdict::Disproven { witness, value, path, .. } => {
            let w: Vec<String> = witness.iter().map(fmt_rational).collect();
            println!("verdict: disproven at ({}) in {path}, value {}", w.join(", "), fmt_rational(value));
            1
        }
        Verdict::NotStrict { witness, reason, .. } => {
            let w: Vec<String> = witness.iter().map(fmt_rational).collect();
            println!("verdict: not strict, {reason}, zero at ({})", w.join(", "));
            1
        }
        Verdict::Fail { reason } => {
            println!("verdict: FAIL, {reason}");
            2
        }
    };
    if let Some(path) = &a.cert {
        if let Err(e) = write_json(path, &cert.to_json()) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_UNSUPPORTED);
        }
    }
    ExitCode::from(code)
}

fn run(cli: Cli) -> ExitCode {
    let verbose = cli.verbose;
    match cli.cmd {
        Cmd::Prove(a) => {
            let spec = match parse_rde(&a.rde) {
                Ok(s) => s,
                Err(e) => return unsupported(e),
            };
            let opts = ProveOptions {
                max_k: a.max_k,
                mesh: mesh_params(&a.mesh, a.max_k),
                prover: prover(a.depth),
                prove_each_k: a.prove_each_k,
            };
            match prove(&spec, &opts) {
                Ok(r) => finish(r, a.cert.as_deref(), verbose),
                Err(e) => unsupported(e),
            }
        }
        Cmd::ProveK(a) => {
            let spec = match parse_rde(&a.rde) {
                Ok(s) => s,
                Err(e) => return unsupported(e),
            };
            match prove_k(&spec, a.k, &prover(a.depth)) {
                Ok(r) => finish(r, a.cert.as_deref(), verbose),
                Err(e) => unsupported(e),
            }
        }
        Cmd::Positivity(a) => run_positivity(a, verbose),
        Cmd::Webbook(a) => {
            let opts = ProveOptions {
                max_k: a.max_k,
                mesh: mesh_params(&a.mesh, a.max_k),
                prover: prover(a.depth),
                prove_each_k: false,
            };
            match webbook(&a.template, &a.ranges, a.count, a.seed, &opts) {
                Ok(rep) => {
                    print!("{}", rep.to_table());
                    ExitCode::SUCCESS
                }
                Err(e) => unsupported(e),
            }
        }
        Cmd::Replay { cert } => {
            let text = match std::fs::read_to_string(&cert) {
                Ok(t) => t,
                Err(e) => return unsupported(format!("{}: {e}", cert.display())),
            };
            match ProofCertificate::from_json(&text).and_then(|c| c.replay().map(|_| c)) {
                Ok(c) => {
                    println!("replay ok: {} nodes, verdict {:?}", c.tree.len(), c.verdict);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("replay failed: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_UNSUPPORTED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
