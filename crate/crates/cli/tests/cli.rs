use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bottindex::generators::{generate, Generated, PairKind, PairSpec};
use bottindex_cli::{index_report, Cli, IndexArgs, Input};
use clap::Parser;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bottindex"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bottindex-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn generate_files(dir: &Path, kind: &str, n: &str, extra: &[&str]) -> PathBuf {
    let prefix = dir.join(kind);
    let mut args = vec!["generate", "--kind", kind, "--n", n, "--out", prefix.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    prefix
}

fn index_args(extra: &[&str]) -> IndexArgs {
    let mut argv = vec!["bottindex", "index"];
    argv.extend_from_slice(extra);
    match Cli::parse_from(argv).command {
        bottindex_cli::Command::Index(a) => a,
        _ => unreachable!(),
    }
}

#[test]
fn cyclic_shift_31_files() {
    let dir = scratch("shift");
    let p = generate_files(&dir, "cyclic_shift", "31", &[]);
    let o = run(&["index", &format!("{}_U.txt", p.display()), &format!("{}_V.txt", p.display())]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(value(&text, "omega"), "-1");
    assert_eq!(value(&text, "kappa"), "-1");
    assert_eq!(value(&text, "kappa_certified"), "true");
    let lower: f64 = value(&text, "distance_omega").parse().unwrap();
    assert!(lower > 1.99);
}

#[test]
fn round_trip_matches_in_memory() {
    let dir = scratch("roundtrip");
    for (kind, n, noise) in [("perturbed", 40usize, 0.05), ("selfdual_commuting", 6, 0.0), ("direct_sum", 33, 0.0)] {
        let p = generate_files(&dir, kind, &n.to_string(), &["--seed", "11", "--noise", &noise.to_string()]);
        let spec = PairSpec {
            seed: 11,
            noise,
            ..PairSpec::new(kind.parse::<PairKind>().unwrap(), n)
        };
        let (input, args) = match generate(&spec).unwrap() {
            Generated::Plain(pair) => (Input::Plain(pair), index_args(&["--method", "trig"])),
            Generated::SelfDual(sd) => (Input::SelfDual(sd), index_args(&["--method", "both"])),
        };
        let memory = index_report(&input, &args).unwrap().text();
        let o = match &input {
            Input::Plain(_) => run(&[
                "index",
                &format!("{}_U.txt", p.display()),
                &format!("{}_V.txt", p.display()),
            ]),
            Input::SelfDual(_) => run(&["index", "--method", "both", "--pair", &format!("{}.pair", p.display())]),
        };
        assert_eq!(stdout(&o), memory, "{kind}");
    }
}

#[test]
fn commuting_self_dual_gives_plus_one() {
    let dir = scratch("sdcomm");
    let p = generate_files(&dir, "selfdual_commuting", "5", &["--seed", "3"]);
    let o = run(&["index", "--method", "both", "--pair", &format!("{}.pair", p.display())]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(value(&text, "kappa2"), "1");
    assert_eq!(value(&text, "kappa2_log"), "1");
    // the same matrices as plain files with --self-dual
    let o = run(&[
        "index",
        "--self-dual",
        &format!("{}_U.txt", p.display()),
        &format!("{}_V.txt", p.display()),
    ]);
    assert_eq!(value(&stdout(&o), "kappa2"), "1");
}

#[test]
fn uncertified_pair_exits_two() {
    let dir = scratch("uncert");
    // 2 sin(π/13) ≈ 0.479
    let p = generate_files(&dir, "cyclic_shift", "13", &[]);
    let o = run(&["index", &format!("{}_U.txt", p.display()), &format!("{}_V.txt", p.display())]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(2), "{text}");
    assert_eq!(value(&text, "kappa_certified"), "false");
    assert!(value(&text, "kappa").parse::<i64>().is_ok());
    assert_eq!(value(&text, "omega"), "-1");
}

#[test]
fn errors_exit_one() {
    let dir = scratch("errors");
    let missing = dir.join("missing.txt");
    let o = run(&["index", missing.to_str().unwrap(), missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "2\n1 0\n0 oops\n").unwrap();
    let o = run(&["index", bad.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 3"), "{}", stdout(&o));

    let scaled = dir.join("scaled.txt");
    std::fs::write(&scaled, "2\n2 0\n0 1\n").unwrap();
    let o = run(&["index", scaled.to_str().unwrap(), scaled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["index", "--polar", scaled.to_str().unwrap(), scaled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // cyclic shift of size 4 is not self-dual for N = 2
    let p = generate_files(&dir, "cyclic_shift", "4", &[]);
    let o = run(&[
        "index",
        "--self-dual",
        &format!("{}_U.txt", p.display()),
        &format!("{}_V.txt", p.display()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not self-dual (defect"), "{}", stdout(&o));

    let o = run(&["generate", "--kind", "no_such_kind", "--n", "4", "--out", dir.join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pair_file_header_is_checked() {
    let dir = scratch("pairfile");
    let p = generate_files(&dir, "selfdual_doubling", "4", &[]);
    let path = format!("{}.pair", p.display());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("N 4\n"));
    let wrong = dir.join("wrong.pair");
    std::fs::write(&wrong, text.replacen("N 4", "N 3", 1)).unwrap();
    let o = run(&["index", "--pair", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn batch_directory_csv() {
    let dir = scratch("batch");
    generate_files(&dir, "cyclic_shift", "40", &[]);
    generate_files(&dir, "selfdual_commuting", "4", &[]);
    generate_files(&dir, "commuting_random", "6", &["--seed", "2"]);
    let o = run(&["index", "--batch", dir.to_str().unwrap(), "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("name,delta,omega"));
    let row = |name: &str| lines.iter().find(|l| l.starts_with(&format!("{name},"))).unwrap().split(',').collect::<Vec<_>>();
    assert_eq!(row("cyclic_shift")[2], "-1");
    assert_eq!(row("commuting_random")[4], "0");
    assert_eq!(row("selfdual_commuting")[6], "1");
}

#[test]
fn fourier_csv() {
    let o = run(&["fourier"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let expect = [0.202047, 0.179940, 0.125655, 0.066010, 0.023445, 0.003886];
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for (n, row) in rows.iter().enumerate() {
        assert!((row[3] - expect[n]).abs() <= 1e-6);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((row[2] - sign * row[3]).abs() <= 1e-6);
    }
}

#[test]
fn gap_curve_respects_guarantee() {
    let o = run(&["bounds", "--curve", "gap", "--max", "0.21"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = 0;
    for l in text.lines().skip(1) {
        let c: Vec<&str> = l.split(',').collect();
        let measured: f64 = c[2].parse().unwrap();
        for bound in [c[3], c[4]] {
            if let Ok(b) = bound.parse::<f64>() {
                assert!(measured >= b, "{l}");
            }
        }
        rows += 1;
    }
    assert!(rows > 20);
}
