use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gasproof")).args(args).output().unwrap();
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.code().unwrap_or(-1), text)
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["prove", "--rde", "2*x0/(1+x0)", "--max-k", "3"]).0, 0);
    assert_eq!(run(&["prove", "--rde", "2*x0", "--max-k", "3"]).0, 1);
    assert_eq!(run(&["prove", "--rde", "1/x0", "--max-k", "3"]).0, 2);
    assert_eq!(run(&["prove", "--rde", "(1+x0)/(1+2*x0)", "--max-k", "3"]).0, 3);
    assert_eq!(run(&["prove", "--rde", "x0 - 1", "--max-k", "3"]).0, 3);
    assert_eq!(run(&["prove", "--rde", "x0/2", "--max-k", "oops"]).0, 3);
    assert_eq!(run(&["prove-k", "--rde", "1/x0", "--k", "2"]).0, 1);
}

#[test]
fn prove_k_writes_a_replayable_certificate() {
    let dir = std::env::temp_dir().join(format!("gasproof-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("k5.json");
    let cert_s = cert.to_str().unwrap();
    let (code, out) = run(&["prove-k", "--rde", "(4+x0)/(1+x1)", "--k", "5", "--cert", cert_s]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("certificate: 4 nodes, depth 0"));
    let (code, out) = run(&["replay", "--cert", cert_s]);
    assert_eq!(code, 0, "{out}");
    // face certificates sit next to the main one
    assert!(dir.join("k5.face-x0.json").exists());
    let text = std::fs::read_to_string(&cert).unwrap().replace("\"pass\"", "\"refute\"");
    std::fs::write(&cert, text).unwrap();
    assert_eq!(run(&["replay", "--cert", cert_s]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn positivity_verb() {
    let (code, out) = run(&["positivity", "--poly", "x0^2 - x0*x1 + x1^2", "--xbar", "1", "--verbose"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("NE: x0^2 - x0*x1 + x1^2 + x0 + x1 + 1"), "{out}");
    let (code, out) = run(&["positivity", "--poly", "x0 + x1 - 1", "--xbar", "1/2"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("disproven"));
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/k5_contraction.txt");
    let (code, out) = run(&["positivity", "--poly-file", file, "--xbar", "2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(run(&["positivity", "--poly", "x0", "--poly-file", file, "--xbar", "2"]).0, 3);
}

#[test]
fn verbose_prints_regions_in_graded_order() {
    let (code, out) = run(&["prove-k", "--rde", "(4+x0)/(1+x1)", "--k", "5", "--verbose"]);
    assert_eq!(code, 0);
    let ne = out.lines().find(|l| l.trim_start().starts_with("NE:")).unwrap();
    let degrees: Vec<u32> = ne
        .trim_start()
        .trim_start_matches("NE:")
        .trim()
        .split(" + ")
        .flat_map(|t| t.split(" - "))
        .map(|t| {
            t.split('*')
                .filter(|f| f.starts_with('x'))
                .map(|f| f.split_once('^').map_or(1, |(_, e)| e.trim().parse::<u32>().unwrap()))
                .sum()
        })
        .collect();
    assert!(degrees.windows(2).all(|w| w[0] >= w[1]), "{ne}");
    assert!(ne.trim_end().ends_with("318700575*x0^2 - 6980904*x0*x1 + 349366689*x1^2"), "{ne}");
}

#[test]
fn webbook_report_is_deterministic() {
    let args = [
        "webbook",
        "--template",
        "b*x0/(1+x0)",
        "--range",
        "b=1..5",
        "--count",
        "10",
        "--seed",
        "7",
    ];
    let (code, first) = run(&args);
    assert_eq!(code, 0, "{first}");
    let rows: Vec<&str> = first.lines().filter(|l| !l.starts_with('#') && !l.starts_with("b\t")).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with("\ttrue")), "{first}");
    assert_eq!(run(&args).1, first);
    assert_eq!(run(&["webbook", "--template", "b*x0", "--range", "b=1..2", "--count", "0", "--seed", "1"]).0, 3);
}
