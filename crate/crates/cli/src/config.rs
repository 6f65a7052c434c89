use crate::error::{usage, CliError, CliResult};
use lancom::krylov_schur::ks_solve;
use lancom::lanczos::{default_tol_ra, lanczos_solve, lc_solve, SolveOptions, SolveOutput};
use lancom::sparse::{gen_laplacian_l, random_sparse_symmetric, read_matrix_market, RandomSparse, SparseMatrixCsr};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Environment variable holding the basis storage cap in MiB.
pub const MEMORY_ENV: &str = "LANCOM_MAX_MEMORY_MB";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Lc,
    Ks,
    Lanczos,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Lc => "lc",
            Method::Ks => "ks",
            Method::Lanczos => "lanczos",
        }
    }
}

/// A built-in test matrix, written `laplacian-l:nx=300` or
/// `random:n=500,per-row=3,seed=1,shift=0.5,outliers=1e3;1e4`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    LaplacianL { nx: usize },
    Random(RandomSparse),
}

impl GeneratorSpec {
    pub fn build(&self) -> CliResult<SparseMatrixCsr> {
        Ok(match self {
            GeneratorSpec::LaplacianL { nx } => gen_laplacian_l(*nx)?,
            GeneratorSpec::Random(p) => random_sparse_symmetric(p)?,
        })
    }
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value.parse().map_err(|_| CliError::Usage(format!("bad value {value:?} for {key}")))
}

impl FromStr for GeneratorSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut fields = Vec::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => fields.push((k.trim(), v.trim())),
                None => return usage(format!("expected key=value in generator spec, got {part:?}")),
            }
        }
        match kind {
            "laplacian-l" => {
                let mut nx = None;
                for (k, v) in fields {
                    match k {
                        "nx" => nx = Some(parse_field(k, v)?),
                        _ => return usage(format!("unknown laplacian-l field {k:?}")),
                    }
                }
                let nx = nx.ok_or_else(|| CliError::Usage("laplacian-l needs nx".into()))?;
                Ok(GeneratorSpec::LaplacianL { nx })
            }
            "random" => {
                let mut p = RandomSparse::new(0, 3, 0);
                for (k, v) in fields {
                    match k {
                        "n" => p.n = parse_field(k, v)?,
                        "per-row" => p.per_row = parse_field(k, v)?,
                        "seed" => p.seed = parse_field(k, v)?,
                        "shift" => p.diag_shift = parse_field(k, v)?,
                        "outliers" => {
                            p.outliers =
                                v.split(';').filter(|x| !x.is_empty()).map(|x| parse_field(k, x)).collect::<CliResult<_>>()?
                        }
                        _ => return usage(format!("unknown random field {k:?}")),
                    }
                }
                if p.n == 0 {
                    return usage("random needs n > 0");
                }
                Ok(GeneratorSpec::Random(p))
            }
            _ => usage(format!("unknown generator {kind:?}; expected laplacian-l or random")),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::LaplacianL { nx } => write!(f, "laplacian-l:nx={nx}"),
            GeneratorSpec::Random(p) => {
                write!(f, "random:n={},per-row={},seed={},shift={}", p.n, p.per_row, p.seed, p.diag_shift)?;
                if !p.outliers.is_empty() {
                    let o: Vec<String> = p.outliers.iter().map(|x| x.to_string()).collect();
                    write!(f, ",outliers={}", o.join(";"))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    Path(PathBuf),
    Generator(GeneratorSpec),
}

impl MatrixSource {
    pub fn load(&self) -> CliResult<SparseMatrixCsr> {
        match self {
            MatrixSource::Path(p) => Ok(read_matrix_market(p)?),
            MatrixSource::Generator(g) => g.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub k: usize,
    pub m: usize,
    pub ell: Option<usize>,
    pub tol_res: f64,
    /// `None` picks the default for `k`.
    pub tol_ra: Option<f64>,
    pub seed: u64,
    pub max_matvecs: usize,
    pub source: MatrixSource,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub fill_in: bool,
    pub memory_cap: Option<usize>,
}

impl RunConfig {
    pub fn new(method: Method, source: MatrixSource, k: usize, m: usize) -> Self {
        Self {
            method,
            k,
            m,
            ell: None,
            tol_res: 1e-8,
            tol_ra: None,
            seed: 0,
            max_matvecs: 100_000,
            source,
            output: None,
            csv: None,
            fill_in: true,
            memory_cap: None,
        }
    }

    pub fn tol_ra(&self) -> f64 {
        self.tol_ra.unwrap_or_else(|| default_tol_ra(self.k))
    }

    /// Restart size actually used by Krylov–Schur.
    pub fn ks_ell(&self) -> usize {
        self.ell.unwrap_or(self.m / 2)
    }

    /// Checks the preconditions of the chosen method for a matrix of order `n`.
    pub fn validate(&self, n: usize) -> CliResult<()> {
        let (k, m) = (self.k, self.m);
        if k == 0 {
            return usage("--k must be at least 1");
        }
        if k > n {
            return usage(format!("--k {k} exceeds the matrix order {n}"));
        }
        match self.method {
            Method::Lc => {
                if !(k < m && m <= n) {
                    return usage(format!("lc needs k < m <= n, got k={k}, m={m}, n={n}"));
                }
                if self.ell.is_some() {
                    return usage("--ell applies to ks only");
                }
            }
            Method::Ks => {
                let ell = self.ks_ell();
                if !(k <= ell && ell < m && m <= n) {
                    return usage(format!("ks needs k <= ell < m <= n, got k={k}, ell={ell}, m={m}, n={n}"));
                }
            }
            Method::Lanczos => {
                if self.ell.is_some() {
                    return usage("--ell applies to ks only");
                }
            }
        }
        for (name, v) in [("--tol-res", self.tol_res), ("--tol-ra", self.tol_ra())] {
            if !(v > 0.0 && v < 1.0) {
                return usage(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if self.max_matvecs == 0 {
            return usage("--max-matvecs must be positive");
        }
        Ok(())
    }

    pub fn options(&self) -> SolveOptions {
        let mut o = SolveOptions::new(self.k, self.m);
        o.ell = if self.method == Method::Ks { Some(self.ks_ell()) } else { None };
        o.tol_res = self.tol_res;
        o.tol_ra = self.tol_ra();
        o.seed = self.seed;
        o.max_matvecs = self.max_matvecs;
        o.fill_in = self.fill_in;
        o.memory_cap = self.memory_cap;
        o
    }

    /// Validates against `a` and runs the configured method.
    pub fn run(&self, a: &SparseMatrixCsr) -> CliResult<SolveOutput> {
        self.validate(a.n())?;
        let opts = self.options();
        Ok(match self.method {
            Method::Lc => lc_solve(a, &opts)?,
            Method::Ks => ks_solve(a, &opts)?,
            Method::Lanczos => lanczos_solve(a, &opts)?,
        })
    }
}

/// Basis storage cap in bytes from the value of [`MEMORY_ENV`].
pub fn memory_cap_from_env(value: Option<&str>) -> CliResult<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(mb) if mb > 0 => Ok(Some(mb.saturating_mul(1024 * 1024))),
            _ => usage(format!("{MEMORY_ENV} must be a positive integer, got {v:?}")),
        },
    }
}
