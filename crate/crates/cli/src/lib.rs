//! Command implementations behind the `bottindex` binary.
//!
//! Every command writes to the supplied writer and returns its exit code:
//! 0 on success, 2 when a result is only available uncertified, 1 on error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use bottindex::bott::{
    bott_index_with, fourier_coefficients_h, kappa_distance_formula, BottOptions, FourierTable, KAPPA_THRESHOLD,
};
use bottindex::bounds::{
    beta_curve, default_mesh, evaluate_log_path, guaranteed_gap, linspace, threshold_root,
    BoundTables, CertificationReport,
};
use bottindex::generators::{generate, Generated, PairKind, PairSpec};
use bottindex::linalg::{format_matrix, parse_matrix, read_matrix, unitary_part, write_matrix, UnitaryPair, UNITARY_TOL};
use bottindex::logmethod::{kappa2_log_with, LOG_THRESHOLD};
use bottindex::selfdual::{pfaffian_bott_index_with, kappa2_commuting_distance_formula, DualStructure, Kappa2Options, SelfDualPair};
use bottindex::winding::{commuting_distance_formula, winding_number, DELTA_LIMIT};
use bottindex::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bottindex", version, about = "Indices of almost commuting unitary matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute ω, κ and (with --self-dual) κ₂ for a pair of matrix files.
    ///
    /// Text output is one `key=value` per line; `--format csv` prints a header
    /// and one row per pair with columns name,delta,omega,omega_valid,kappa,
    /// kappa_certified,kappa2,kappa2_log,log_certified,gap_measured,
    /// gap_guaranteed,gap_coarse,distance_omega,distance_kappa,distance_kappa2.
    /// Exit code 0, 2 if some index is outside its certified range, 1 on error.
    Index(IndexArgs),
    /// Write a generated pair as `<out>_U.txt` and `<out>_V.txt` (and
    /// `<out>.pair` for self-dual kinds).
    Generate(GenerateArgs),
    /// Print a bound curve as CSV; the β = 1 root is reported on stderr.
    ///
    /// beta: delta,beta,gap_guaranteed,gap_coarse.
    /// eta-f / eta-h: delta, one column per table row, envelope.
    /// gap: n,delta,gap_measured,gap_guaranteed,gap_coarse for the cyclic-shift family.
    Bounds(BoundsArgs),
    /// Check the log-method homotopy bound along a mesh.
    ///
    /// CSV columns: s,stage,t,g_norm,eta_h,eta_h2,eta_q,bound,step.
    CertifyLog(CertifyArgs),
    /// Fourier coefficients of the standard triple as CSV: n,a_n_imag,b_n,c_n.
    Fourier(FourierArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Trig,
    Log,
    Both,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Matrix file for U.
    pub u: Option<PathBuf>,
    /// Matrix file for V.
    pub v: Option<PathBuf>,
    /// Self-dual pair file (header `N <n>`, then U, then V).
    #[arg(long, conflicts_with_all = ["u", "v", "batch"])]
    pub pair: Option<PathBuf>,
    /// Directory of `<name>_U.txt`/`<name>_V.txt` pairs and `<name>.pair` files.
    #[arg(long, conflicts_with_all = ["u", "v"])]
    pub batch: Option<PathBuf>,
    /// Method for κ₂: trig (default), log, or both.
    #[arg(long, value_enum, default_value = "trig")]
    pub method: MethodArg,
    /// Use the degree-5 trigonometric polynomials instead of exact f, g, h.
    #[arg(long)]
    pub trigpoly: bool,
    /// Treat the pair as self-dual (N = d/2) and compute κ₂.
    #[arg(long)]
    pub self_dual: bool,
    /// Replace the inputs by their unitary parts first.
    #[arg(long)]
    pub polar: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Unitarity tolerance on ‖X*X − I‖.
    #[arg(long, default_value_t = UNITARY_TOL)]
    pub unitary_tol: f64,
    /// Eigenvalues of B below this count as a closed gap (default 1e-8·dim).
    #[arg(long)]
    pub gap_tol: Option<f64>,
    /// Recompute the root of β(δ) = 1 and compare it with the κ threshold.
    #[arg(long)]
    pub check_threshold: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// cyclic_shift, powered, commuting_random, perturbed, direct_sum,
    /// selfdual_doubling or selfdual_commuting.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturbation distance ‖U − U₁‖ + ‖V − V₁‖.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Winding number for `powered`.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub k: i64,
    /// Output prefix.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    Beta,
    EtaF,
    EtaH,
    Gap,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub curve: Curve,
    /// Largest δ on the grid.
    #[arg(long, default_value_t = 0.3)]
    pub max: f64,
    /// Number of grid intervals.
    #[arg(long, default_value_t = 300)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 0.125)]
    pub delta: f64,
    /// Points per stage before refinement.
    #[arg(long, default_value_t = 64)]
    pub mesh: usize,
    /// Also write the per-point CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// Largest n.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Terms of the binomial series.
    #[arg(long, default_value_t = bottindex::bott::DEFAULT_SERIES_K)]
    pub series_k: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Index(a) => cmd_index(&a, out),
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Bounds(a) => cmd_bounds(&a, out),
        Command::CertifyLog(a) => cmd_certify_log(&a, out),
        Command::Fourier(a) => cmd_fourier(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn put(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

/// Everything `index` reports for one pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IndexReport {
    pub name: String,
    pub delta: f64,
    pub omega: Option<i64>,
    pub omega_valid: bool,
    pub kappa: Option<i64>,
    pub kappa_certified: bool,
    pub kappa2: Option<i8>,
    pub kappa2_log: Option<i8>,
    pub log_certified: bool,
    pub gap_measured: f64,
    pub gap_guaranteed: Option<f64>,
    pub gap_coarse: Option<f64>,
    /// Lower bounds on the distance to a commuting pair, one per certified
    /// nonzero index.
    pub distance_omega: Option<f64>,
    pub distance_kappa: Option<f64>,
    pub distance_kappa2: Option<f64>,
    /// Problems that did not stop the report.
    pub notes: Vec<String>,
}

impl IndexReport {
    /// Some requested index is reported outside its certified range.
    pub fn uncertified(&self, self_dual: bool, log: bool) -> bool {
        !self.omega_valid || !self.kappa_certified || (self_dual && log && !self.log_certified)
    }

    pub fn csv_header() -> &'static str {
        "name,delta,omega,omega_valid,kappa,kappa_certified,kappa2,kappa2_log,log_certified,gap_measured,gap_guaranteed,gap_coarse,distance_omega,distance_kappa,distance_kappa2"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.delta,
            opt(self.omega),
            self.omega_valid,
            opt(self.kappa),
            self.kappa_certified,
            opt(self.kappa2),
            opt(self.kappa2_log),
            self.log_certified,
            self.gap_measured,
            opt(self.gap_guaranteed),
            opt(self.gap_coarse),
            opt(self.distance_omega),
            opt(self.distance_kappa),
            opt(self.distance_kappa2),
        )
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        if !self.name.is_empty() {
            kv("name", self.name.clone());
        }
        kv("delta", self.delta.to_string());
        kv("omega", opt(self.omega));
        kv("omega_valid", self.omega_valid.to_string());
        kv("kappa", opt(self.kappa));
        kv("kappa_certified", self.kappa_certified.to_string());
        if self.kappa2.is_some() || self.kappa2_log.is_some() {
            kv("kappa2", opt(self.kappa2));
            kv("kappa2_log", opt(self.kappa2_log));
        }
        kv("log_certified", self.log_certified.to_string());
        kv("gap_measured", self.gap_measured.to_string());
        kv("gap_guaranteed", opt(self.gap_guaranteed));
        kv("gap_coarse", opt(self.gap_coarse));
        kv("distance_omega", opt(self.distance_omega));
        kv("distance_kappa", opt(self.distance_kappa));
        kv("distance_kappa2", opt(self.distance_kappa2));
        for n in &self.notes {
            kv("note", n.clone());
        }
        s
    }
}

/// A loaded input: a plain pair or a self-dual one.
#[derive(Debug, Clone)]
pub enum Input {
    Plain(UnitaryPair),
    SelfDual(SelfDualPair),
}

fn make_pair(u: bottindex::linalg::ComplexMatrix, v: bottindex::linalg::ComplexMatrix, polar: bool, tol: f64) -> Result<UnitaryPair> {
    if polar {
        UnitaryPair::with_tol(unitary_part(&u)?, unitary_part(&v)?, tol)
    } else {
        UnitaryPair::with_tol(u, v, tol)
    }
}

/// Self-dual pair file: a header line `N <n>`, then the matrix text of `U`
/// and of `V`.
pub fn format_pair_file(sd: &SelfDualPair) -> String {
    format!(
        "N {}\n{}{}",
        sd.structure().n(),
        format_matrix(sd.pair().u()),
        format_matrix(sd.pair().v())
    )
}

/// Splits a pair file into `(N, U text, V text)`.
fn split_pair_file(text: &str) -> Result<(usize, String, String)> {
    let content: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let parse_err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };
    let (line, header) = *content.first().ok_or_else(|| parse_err(1, "empty pair file"))?;
    let n: usize = header
        .strip_prefix('N')
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(line, "expected header `N <n>`"))?;
    let d = 2 * n;
    if content.len() != 1 + 2 * (d + 1) {
        return Err(parse_err(line, &format!("expected two {d}x{d} matrices after the header")));
    }
    let block = |from: usize| -> String {
        // keep line numbers meaningful by padding with blank lines
        let first = content[from].0;
        let mut s = "\n".repeat(first - 1);
        for (_, l) in &content[from..from + d + 1] {
            s.push_str(l);
            s.push('\n');
        }
        s
    };
    Ok((n, block(1), block(2 + d)))
}

pub fn read_pair_file(path: &Path, polar: bool, tol: f64) -> Result<SelfDualPair> {
    let (n, u, v) = split_pair_file(&std::fs::read_to_string(path)?)?;
    let pair = make_pair(parse_matrix(&u)?, parse_matrix(&v)?, polar, tol)?;
    if pair.dim() != 2 * n {
        return Err(Error::DimensionMismatch(format!("header N = {n} but matrices are {}x{}", pair.dim(), pair.dim())));
    }
    SelfDualPair::new(pair, DualStructure::new(n))
}

pub fn load_input(u: &Path, v: &Path, self_dual: bool, polar: bool, tol: f64) -> Result<Input> {
    let pair = make_pair(read_matrix(u)?, read_matrix(v)?, polar, tol)?;
    if self_dual {
        Ok(Input::SelfDual(SelfDualPair::from_pair(pair)?))
    } else {
        Ok(Input::Plain(pair))
    }
}

/// Computes the report; errors inside the certified range are returned,
/// those outside it become notes.
pub fn index_report(input: &Input, args: &IndexArgs) -> Result<IndexReport> {
    let pair = match input {
        Input::Plain(p) => p,
        Input::SelfDual(sd) => sd.pair(),
    };
    let delta = pair.delta();
    let mut r = IndexReport {
        delta,
        omega_valid: delta <= DELTA_LIMIT,
        kappa_certified: delta <= KAPPA_THRESHOLD,
        log_certified: delta <= LOG_THRESHOLD,
        ..Default::default()
    };
    if r.omega_valid {
        r.omega = Some(winding_number(pair)?.omega);
    }
    let opts = BottOptions {
        use_trigpoly: args.trigpoly,
        allow_uncertified: true,
        gap_tol: args.gap_tol,
    };
    match bott_index_with(pair, &opts) {
        Ok(k) => {
            r.kappa = Some(k.kappa);
            r.gap_measured = k.gap;
        }
        Err(e) if !r.kappa_certified => r.notes.push(format!("kappa: {e}")),
        Err(e) => return Err(e),
    }
    if let Ok(g) = guaranteed_gap(delta) {
        r.gap_guaranteed = Some(g.gap);
        r.gap_coarse = g.coarse;
    }
    if let Input::SelfDual(sd) = input {
        let kopts = Kappa2Options {
            use_trigpoly: args.trigpoly,
            allow_uncertified: true,
        };
        if args.method != MethodArg::Log {
            match pfaffian_bott_index_with(sd, &kopts) {
                Ok(k) => {
                    r.kappa2 = Some(k.sign);
                    if k.ill_conditioned {
                        r.notes.push("kappa2: Pfaffian below the gap floor".into());
                    }
                }
                Err(e) if !r.kappa_certified => r.notes.push(format!("kappa2: {e}")),
                Err(e) => return Err(e),
            }
        }
        if args.method != MethodArg::Trig {
            match kappa2_log_with(sd, &kopts) {
                Ok(k) => r.kappa2_log = Some(k.sign),
                Err(e) if !r.log_certified => r.notes.push(format!("kappa2_log: {e}")),
                Err(e) => return Err(e),
            }
        }
        if let (Some(a), Some(b)) = (r.kappa2, r.kappa2_log) {
            if a != b {
                r.notes.push("trig and log methods disagree".into());
            }
        }
    }
    r.distance_omega = r.omega.filter(|&w| w != 0).map(|_| commuting_distance_formula(delta));
    if r.kappa_certified {
        r.distance_kappa = r.kappa.filter(|&k| k != 0).map(|_| kappa_distance_formula(delta, 0.0));
    }
    let kappa2_certified = match args.method {
        MethodArg::Trig => r.kappa_certified,
        MethodArg::Log => r.log_certified,
        MethodArg::Both => r.kappa_certified || r.log_certified,
    };
    if kappa2_certified && (r.kappa2 == Some(-1) || r.kappa2_log == Some(-1)) {
        r.distance_kappa2 = Some(kappa2_commuting_distance_formula(delta));
    }
    Ok(r)
}

fn batch_inputs(dir: &Path, args: &IndexArgs) -> Result<Vec<(String, Result<Input>)>> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    names.sort();
    let mut inputs = Vec::new();
    for path in names {
        let file = path.file_name().and_then(|f| f.to_str()).unwrap_or_default().to_string();
        if let Some(stem) = file.strip_suffix(".pair") {
            inputs.push((stem.to_string(), read_pair_file(&path, args.polar, args.unitary_tol).map(Input::SelfDual)));
        } else if let Some(stem) = file.strip_suffix("_U.txt") {
            let v = dir.join(format!("{stem}_V.txt"));
            if dir.join(format!("{stem}.pair")).exists() {
                continue;
            }
            inputs.push((stem.to_string(), load_input(&path, &v, args.self_dual, args.polar, args.unitary_tol)));
        }
    }
    Ok(inputs)
}

pub fn cmd_index(args: &IndexArgs, out: &mut dyn Write) -> Result<i32> {
    let inputs: Vec<(String, Result<Input>)> = if let Some(dir) = &args.batch {
        batch_inputs(dir, args)?
    } else if let Some(p) = &args.pair {
        vec![(String::new(), read_pair_file(p, args.polar, args.unitary_tol).map(Input::SelfDual))]
    } else {
        let (Some(u), Some(v)) = (&args.u, &args.v) else {
            return Err(Error::InvalidMatrix("index needs U and V files, --pair or --batch".into()));
        };
        vec![(String::new(), load_input(u, v, args.self_dual, args.polar, args.unitary_tol))]
    };
    let log = args.method != MethodArg::Trig;
    let mut code = EXIT_OK;
    if args.check_threshold {
        let (root, ok) = threshold_check()?;
        put(out, &format!("threshold_root={root}\nthreshold_consistent={ok}\n"))?;
    }
    if args.format == Format::Csv {
        put(out, &format!("{}\n", IndexReport::csv_header()))?;
    }
    for (name, input) in inputs {
        let report = input.and_then(|i| {
            let self_dual = matches!(i, Input::SelfDual(_));
            index_report(&i, args).map(|r| (r, self_dual))
        });
        match report {
            Ok((mut r, self_dual)) => {
                r.name = name;
                if r.uncertified(self_dual, log) {
                    code = code.max(EXIT_UNCERTIFIED);
                }
                match args.format {
                    Format::Text => put(out, &r.text())?,
                    Format::Csv => put(out, &format!("{}\n", r.csv_row()))?,
                }
            }
            Err(e) if args.batch.is_some() => {
                code = EXIT_ERROR;
                put(out, &format!("error: {name}: {e}\n"))?;
            }
            Err(e) => return Err(e),
        }
        if args.format == Format::Text && args.batch.is_some() {
            put(out, "\n")?;
        }
    }
    Ok(code)
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = PairSpec {
        kind: args.kind.parse::<PairKind>()?,
        n: args.n,
        seed: args.seed,
        noise: args.noise,
        k: args.k,
    };
    let generated = generate(&spec)?;
    let prefix = args.out.to_string_lossy().to_string();
    let u_path = PathBuf::from(format!("{prefix}_U.txt"));
    let v_path = PathBuf::from(format!("{prefix}_V.txt"));
    write_matrix(&u_path, generated.pair().u())?;
    write_matrix(&v_path, generated.pair().v())?;
    put(out, &format!("U={}\nV={}\n", u_path.display(), v_path.display()))?;
    if let Generated::SelfDual(sd) = &generated {
        let pair_path = PathBuf::from(format!("{prefix}.pair"));
        std::fs::write(&pair_path, format_pair_file(sd))?;
        put(out, &format!("pair={}\nN={}\n", pair_path.display(), sd.structure().n()))?;
    }
    put(out, &format!("dim={}\ndelta={}\n", generated.pair().dim(), generated.pair().delta()))?;
    Ok(EXIT_OK)
}

pub fn cmd_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<i32> {
    if args.curve != Curve::Gap {
        let (root, ok) = threshold_check()?;
        eprintln!("threshold_root={root} threshold_consistent={ok} kappa_threshold={KAPPA_THRESHOLD}");
    }
    let deltas = linspace(args.max, args.points.max(1));
    let mut s = String::new();
    match args.curve {
        Curve::Beta => {
            s.push_str("delta,beta,gap_guaranteed,gap_coarse\n");
            for p in beta_curve(&deltas)? {
                let _ = writeln!(s, "{},{},{},{}", p.delta, p.beta, opt(p.gap), opt(p.coarse));
            }
        }
        Curve::EtaF | Curve::EtaH => {
            let t = BoundTables::shared()?;
            let (rows, env) = if args.curve == Curve::EtaF { (&t.f_rows, &t.eta_f) } else { (&t.h_rows, &t.eta_h) };
            s.push_str("delta");
            for r in rows {
                let _ = write!(s, ",row_{}", r.label);
            }
            s.push_str(",envelope\n");
            for &d in &deltas {
                let _ = write!(s, "{d}");
                for r in rows {
                    let _ = write!(s, ",{}", r.line.eval(d));
                }
                let _ = writeln!(s, ",{}", env.eval(d));
            }
        }
        Curve::Gap => {
            s.push_str("n,delta,gap_measured,gap_guaranteed,gap_coarse\n");
            let opts = BottOptions {
                allow_uncertified: true,
                ..Default::default()
            };
            for n in (8..=128).step_by(4) {
                let pair = bottindex::generators::cyclic_shift_pair(n)?;
                if pair.delta() > args.max {
                    continue;
                }
                let k = bott_index_with(&pair, &opts)?;
                let g = guaranteed_gap(pair.delta()).ok();
                let _ = writeln!(
                    s,
                    "{n},{},{},{},{}",
                    pair.delta(),
                    k.gap,
                    opt(g.map(|g| g.gap)),
                    opt(bottindex::bounds::coarse_gap_bound(pair.delta()))
                );
            }
        }
    }
    put(out, &s)?;
    Ok(EXIT_OK)
}

pub fn report_csv(report: &CertificationReport) -> String {
    let mut s = String::from("s,stage,t,g_norm,eta_h,eta_h2,eta_q,bound,step\n");
    for p in &report.points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            p.s, p.stage, p.t, p.g_norm, p.eta_h, p.eta_h2, p.eta_q, p.bound, p.step
        );
    }
    s
}

pub fn cmd_certify_log(args: &CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mesh = default_mesh(args.mesh);
    let report = evaluate_log_path(args.delta, &mesh)?;
    if let Some(path) = &args.out {
        std::fs::write(path, report_csv(&report))?;
    }
    if args.format == Format::Csv {
        put(out, &report_csv(&report))?;
    }
    match report.check() {
        Ok(()) => {
            let r = &report;
            put(
                out,
                &format!(
                    "PASS delta={} max_bound={:.6} max_step={:.6} points={}\n",
                    r.delta,
                    r.max_bound,
                    r.max_step,
                    r.points.len()
                ),
            )?;
            Ok(EXIT_OK)
        }
        Err(e @ Error::CertificationFailed { .. }) => {
            put(
                out,
                &format!(
                    "FAIL CertificationFailed delta={} max_bound={:.6}: {e}\n",
                    report.delta, report.max_bound
                ),
            )?;
            Ok(EXIT_ERROR)
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_fourier(args: &FourierArgs, out: &mut dyn Write) -> Result<i32> {
    let table = fourier_coefficients_h(args.n, args.series_k)?;
    let b = table.b();
    let mut s = String::from("n,a_n_imag,b_n,c_n\n");
    for (n, c) in table.c.iter().enumerate() {
        let _ = writeln!(s, "{n},{},{:.6},{:.6}", FourierTable::a_imag(n), b[n], c);
    }
    put(out, &s)?;
    Ok(EXIT_OK)
}

/// `(root of β = 1, inside [0.2060, 0.2061])`, for display.
pub fn threshold_check() -> Result<(f64, bool)> {
    let root = threshold_root()?;
    Ok((root, (0.2060..=0.2061).contains(&root)))
}
