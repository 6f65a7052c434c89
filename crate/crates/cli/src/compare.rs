//! Side-by-side comparison of Lanczos with compression and Krylov–Schur.

use crate::config::{Method, RunConfig};
use crate::error::{CliError, CliResult};
use crate::history::Num;
use lancom::krylov_schur::ks_solve;
use lancom::lanczos::{lanczos_solve, SolveOptions, SolveOutput};
use lancom::linalg::sym_eigvals;
use lancom::metrics::{improvement, matvecs_to_tolerance, relative_ritz_error};
use lancom::sparse::SparseMatrixCsr;
use serde::{Serialize, Serializer};
use std::fmt::Write as _;

/// Relative Ritz error targets at which matvec counts are reported.
pub const TOLERANCE_GRID: [f64; 5] = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
/// Orders up to which the reference comes from a dense eigensolver.
pub const DENSE_LIMIT: usize = 2000;
/// Residual tolerance of iterative reference runs.
pub const REFERENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReferenceMethod {
    /// Dense up to [`DENSE_LIMIT`], Krylov–Schur above.
    Auto,
    Dense,
    Lanczos,
    Ks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub values: Vec<f64>,
    pub method: &'static str,
}

/// The `k` smallest eigenvalues of `a` to high accuracy. `m` sizes the
/// Krylov–Schur basis (twice the comparison basis is a good choice).
pub fn reference_spectrum(
    a: &SparseMatrixCsr,
    k: usize,
    seed: u64,
    how: ReferenceMethod,
    m: usize,
) -> CliResult<Reference> {
    let n = a.n();
    let how = match how {
        ReferenceMethod::Auto if n <= DENSE_LIMIT => ReferenceMethod::Dense,
        ReferenceMethod::Auto => ReferenceMethod::Ks,
        other => other,
    };
    let iterative = |out: SolveOutput, method| {
        if out.result.converged {
            Ok(Reference { values: out.result.values, method })
        } else {
            Err(CliError::Reference(format!("{method} run did not reach {REFERENCE_TOL:e}")))
        }
    };
    match how {
        ReferenceMethod::Dense => {
            let mut v = sym_eigvals(&a.to_dense())?;
            v.truncate(k);
            Ok(Reference { values: v, method: "dense" })
        }
        ReferenceMethod::Lanczos => {
            let mut o = SolveOptions::new(k, 0);
            o.tol_res = REFERENCE_TOL;
            o.seed = seed;
            o.ritz_every_step = false;
            o.max_matvecs = n;
            iterative(lanczos_solve(a, &o)?, "lanczos")
        }
        ReferenceMethod::Ks | ReferenceMethod::Auto => {
            let m = m.max(2 * k + 20).min(n);
            let mut o = SolveOptions::new(k, m);
            o.ell = Some(m / 2);
            o.tol_res = REFERENCE_TOL;
            o.seed = seed;
            o.ritz_every_step = false;
            o.max_matvecs = 1_000_000;
            iterative(ks_solve(a, &o)?, "ks")
        }
    }
}

fn ser_nums<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    v.iter().copied().map(Num).collect::<Vec<_>>().serialize(s)
}

fn ser_opt_nums<S: Serializer>(v: &[Option<f64>], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|x| x.map(Num)).collect::<Vec<_>>().serialize(s)
}

fn ser_series<S: Serializer>(v: &[(usize, f64)], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|&(i, e)| (i, Num(e))).collect::<Vec<_>>().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRun {
    pub method: &'static str,
    pub m: usize,
    pub ell: Option<usize>,
    pub converged: bool,
    pub total_matvecs: usize,
    /// First matvec count reaching each grid tolerance, if reached.
    pub matvecs_to_tol: Vec<Option<usize>>,
    /// `(matvecs, relative Ritz error)` at every recorded checkpoint.
    #[serde(serialize_with = "ser_series")]
    pub error_series: Vec<(usize, f64)>,
}

impl MethodRun {
    pub fn new(cfg: &RunConfig, out: &SolveOutput, reference: &[f64], tolerances: &[f64]) -> Self {
        let k = reference.len();
        Self {
            method: cfg.method.name(),
            m: cfg.m,
            ell: (cfg.method == Method::Ks).then(|| cfg.ks_ell()),
            converged: out.result.converged,
            total_matvecs: out.result.matvecs,
            matvecs_to_tol: tolerances.iter().map(|&t| matvecs_to_tolerance(&out.history, reference, t)).collect(),
            error_series: out
                .history
                .checkpoints
                .iter()
                .filter(|c| c.ritz.len() >= k)
                .map(|c| (c.matvecs, relative_ritz_error(&c.ritz, reference)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_nums")]
    pub tolerances: Vec<f64>,
    pub reference_method: &'static str,
    #[serde(serialize_with = "ser_nums")]
    pub reference: Vec<f64>,
    pub lc: MethodRun,
    pub ks: MethodRun,
    /// `1 − lc/ks` per tolerance, when both reached it.
    #[serde(serialize_with = "ser_opt_nums")]
    pub improvement: Vec<Option<f64>>,
}

impl ComparisonReport {
    pub fn new(n: usize, seed: u64, reference: &Reference, lc: MethodRun, ks: MethodRun, tolerances: &[f64]) -> Self {
        let improvement = lc
            .matvecs_to_tol
            .iter()
            .zip(&ks.matvecs_to_tol)
            .map(|(l, k)| match (l, k) {
                (Some(l), Some(k)) => Some(improvement(*l, *k)),
                _ => None,
            })
            .collect();
        Self {
            n,
            k: reference.values.len(),
            seed,
            tolerances: tolerances.to_vec(),
            reference_method: reference.method,
            reference: reference.values.clone(),
            lc,
            ks,
            improvement,
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Plain-text table of matvec counts and improvements.
    pub fn table(&self) -> String {
        let count = |x: &Option<usize>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, k = {}, seed = {}, reference: {}", self.n, self.k, self.seed, self.reference_method);
        let _ = writeln!(s, "{:>10} {:>8} {:>8} {:>12}", "tolerance", "lc", "ks", "improvement");
        for (i, t) in self.tolerances.iter().enumerate() {
            let imp = self.improvement[i].map_or_else(|| "-".to_string(), |v| format!("{:.1}%", 100.0 * v));
            let _ = writeln!(
                s,
                "{:>10.0e} {:>8} {:>8} {:>12}",
                t,
                count(&self.lc.matvecs_to_tol[i]),
                count(&self.ks.matvecs_to_tol[i]),
                imp
            );
        }
        s
    }
}

/// Runs both solvers with a shared matrix, `k` and seed, then measures them
/// against `reference`.
pub fn compare(
    a: &SparseMatrixCsr,
    lc_cfg: &RunConfig,
    ks_cfg: &RunConfig,
    reference: &Reference,
) -> CliResult<ComparisonReport> {
    if lc_cfg.method != Method::Lc || ks_cfg.method != Method::Ks {
        return Err(CliError::Usage("compare needs an lc and a ks configuration".into()));
    }
    if lc_cfg.k != ks_cfg.k || lc_cfg.seed != ks_cfg.seed || lc_cfg.source != ks_cfg.source {
        return Err(CliError::Usage("compared runs must share matrix, k and seed".into()));
    }
    if reference.values.len() != lc_cfg.k {
        return Err(CliError::Reference(format!("{} reference values for k = {}", reference.values.len(), lc_cfg.k)));
    }
    let lc = lc_cfg.run(a)?;
    let ks = ks_cfg.run(a)?;
    let grid = &TOLERANCE_GRID;
    Ok(ComparisonReport::new(
        a.n(),
        lc_cfg.seed,
        reference,
        MethodRun::new(lc_cfg, &lc, &reference.values, grid),
        MethodRun::new(ks_cfg, &ks, &reference.values, grid),
        grid,
    ))
}
