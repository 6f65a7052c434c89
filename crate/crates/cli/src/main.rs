use clap::{Args, Parser, Subcommand, ValueEnum};
use lancom::sparse::{format_matrix_market, write_matrix_market, RandomSparse};
use lancom_cli::compare::{compare, reference_spectrum, ReferenceMethod};
use lancom_cli::config::{memory_cap_from_env, GeneratorSpec, MatrixSource, Method, RunConfig, MEMORY_ENV};
use lancom_cli::history::{write_csv_file, HistoryDoc};
use lancom_cli::{CliError, CliResult};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lancom", version, about = "Smallest eigenpairs of sparse symmetric matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a test matrix in Matrix Market format.
    Gen(GenArgs),
    /// Run one solver and emit its convergence history as JSON.
    Solve(SolveArgs),
    /// Run Lanczos with compression and Krylov–Schur side by side.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    LaplacianL,
    Random,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    /// Grid width for laplacian-l (even).
    #[arg(long)]
    nx: Option<usize>,
    /// Order for random.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    per_row: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Large diagonal values added at random rows (repeatable).
    #[arg(long)]
    outlier: Vec<f64>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix Market file.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    matrix: Option<PathBuf>,
    /// Built-in matrix, e.g. `laplacian-l:nx=300` or `random:n=500,per-row=3,seed=1`.
    #[arg(long)]
    generate: Option<String>,
}

impl MatrixArgs {
    fn source(&self) -> CliResult<MatrixSource> {
        match (&self.matrix, &self.generate) {
            (Some(p), _) => Ok(MatrixSource::Path(p.clone())),
            (None, Some(g)) => Ok(MatrixSource::Generator(g.parse()?)),
            (None, None) => Err(CliError::Usage("give --matrix or --generate".into())),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "lc")]
    method: Method,
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 60)]
    m: usize,
    /// Restart size for ks; defaults to m/2.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol_res: f64,
    /// Filter tolerance for lc; defaults to 1e-6 for k <= 4, else 1e-7.
    #[arg(long)]
    tol_ra: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_matvecs: usize,
    #[arg(long, value_enum, default_value = "on")]
    fill_in: OnOff,
    /// JSON history file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the checkpoints as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 60)]
    m: usize,
    /// Krylov–Schur restart size; defaults to m/2.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tol_res: f64,
    #[arg(long)]
    tol_ra: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    max_matvecs: usize,
    #[arg(long, value_enum, default_value = "auto")]
    reference: ReferenceMethod,
    /// JSON report file.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn write_or_print(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn gen(args: &GenArgs) -> CliResult<ExitCode> {
    let spec = match args.kind {
        GenKind::LaplacianL => {
            let nx = args.nx.ok_or_else(|| CliError::Usage("laplacian-l needs --nx".into()))?;
            if nx == 0 || nx % 2 != 0 {
                return Err(CliError::Usage(format!("--nx must be even and positive, got {nx}")));
            }
            GeneratorSpec::LaplacianL { nx }
        }
        GenKind::Random => {
            let n = args.n.filter(|&n| n > 0).ok_or_else(|| CliError::Usage("random needs --n > 0".into()))?;
            let mut p = RandomSparse::new(n, args.per_row, args.seed);
            p.diag_shift = args.shift;
            p.outliers = args.outlier.clone();
            GeneratorSpec::Random(p)
        }
    };
    let a = spec.build()?;
    match &args.output {
        Some(path) => write_matrix_market(&a, path)?,
        None => format_matrix_market(&a, std::io::stdout().lock())?,
    }
    eprintln!("{spec}: n = {}, nnz = {}", a.n(), a.nnz());
    Ok(ExitCode::SUCCESS)
}

fn memory_cap() -> CliResult<Option<usize>> {
    memory_cap_from_env(std::env::var(MEMORY_ENV).ok().as_deref())
}

fn solve(args: &SolveArgs) -> CliResult<ExitCode> {
    let mut cfg = RunConfig::new(args.method, args.matrix.source()?, args.k, args.m);
    cfg.ell = args.ell;
    cfg.tol_res = args.tol_res;
    cfg.tol_ra = args.tol_ra;
    cfg.seed = args.seed;
    cfg.max_matvecs = args.max_matvecs;
    cfg.fill_in = args.fill_in == OnOff::On;
    cfg.output = args.output.clone();
    cfg.csv = args.csv.clone();
    cfg.memory_cap = memory_cap()?;

    let a = cfg.source.load()?;
    cfg.validate(a.n())?;
    let out = cfg.run(&a)?;
    let doc = HistoryDoc::new(&cfg, &a, &out);
    write_or_print(cfg.output.as_deref(), &doc.to_json()?)?;
    if let Some(path) = &cfg.csv {
        write_csv_file(&out, cfg.k, path)?;
    }
    let r = &out.result;
    eprintln!(
        "{}: {} after {} matvecs, residual estimate {:.3e}",
        cfg.method.name(),
        if r.converged { "converged" } else { "not converged" },
        r.matvecs,
        r.residual_estimate
    );
    Ok(if r.converged { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn compare_cmd(args: &CompareArgs) -> CliResult<ExitCode> {
    let source = args.matrix.source()?;
    let mut lc = RunConfig::new(Method::Lc, source.clone(), args.k, args.m);
    lc.tol_res = args.tol_res;
    lc.tol_ra = args.tol_ra;
    lc.seed = args.seed;
    lc.max_matvecs = args.max_matvecs;
    lc.memory_cap = memory_cap()?;
    let mut ks = lc.clone();
    ks.method = Method::Ks;
    ks.ell = args.ell;

    let a = source.load()?;
    lc.validate(a.n())?;
    ks.validate(a.n())?;
    let reference = reference_spectrum(&a, args.k, args.seed, args.reference, 2 * args.m)?;
    let report = compare(&a, &lc, &ks, &reference)?;
    print!("{}", report.table());
    if let Some(path) = &args.output {
        write_or_print(Some(path), &report.to_json()?)?;
    }
    let done = report.lc.converged && report.ks.converged;
    Ok(if done { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Compare(a) => compare_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
