//! Machine-readable convergence histories.
//!
//! Every floating-point value is written with 17 significant digits so a
//! history round-trips bit for bit; non-finite values become `null`.

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use lancom::lanczos::{Checkpoint, Event, SolveOutput};
use lancom::sparse::SparseMatrixCsr;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::io::Write;
use std::path::Path;

/// An `f64` serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

/// `x` with 17 significant digits, or `null` when not finite.
pub fn format_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Debug, Serialize)]
pub struct CheckpointDoc {
    pub matvecs: usize,
    pub ritz: Vec<Num>,
    pub residual_estimate: Option<Num>,
    pub event: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_hat: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl From<&Checkpoint> for CheckpointDoc {
    fn from(c: &Checkpoint) -> Self {
        let (mut ell, mut k_hat, mut p, mut m) = (None, None, None, None);
        match c.event {
            Event::Compress { ell: l, k_hat: kh, p: pp } => {
                ell = Some(l);
                k_hat = Some(kh);
                p = Some(pp);
            }
            Event::Restart { ell: l } => ell = Some(l),
            Event::Grow { m: mm } => m = Some(mm),
            _ => {}
        }
        Self {
            matvecs: c.matvecs,
            ritz: nums(&c.ritz),
            residual_estimate: c.residual_estimate.map(Num),
            event: c.event.name(),
            ell,
            k_hat,
            p,
            m,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FinalDoc {
    pub values: Vec<Num>,
    pub residual_estimate: Num,
    pub residual_true: Num,
}

#[derive(Debug, Serialize)]
pub struct HistoryDoc {
    pub method: &'static str,
    pub n: usize,
    pub k: usize,
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    pub tol_res: Num,
    pub tol_ra: Num,
    pub seed: u64,
    pub fill_in: bool,
    pub checkpoints: Vec<CheckpointDoc>,
    pub converged: bool,
    pub stagnated: bool,
    pub matvecs: usize,
    pub compressions: usize,
    #[serde(rename = "final")]
    pub final_: FinalDoc,
}

impl HistoryDoc {
    pub fn new(cfg: &RunConfig, a: &SparseMatrixCsr, out: &SolveOutput) -> Self {
        use crate::config::Method;
        let r = &out.result;
        Self {
            method: cfg.method.name(),
            n: a.n(),
            k: cfg.k,
            m: (cfg.method != Method::Lanczos).then_some(cfg.m),
            ell: (cfg.method == Method::Ks).then(|| cfg.ks_ell()),
            tol_res: Num(cfg.tol_res),
            tol_ra: Num(cfg.tol_ra()),
            seed: cfg.seed,
            fill_in: cfg.fill_in,
            checkpoints: out.history.checkpoints.iter().map(CheckpointDoc::from).collect(),
            converged: r.converged,
            stagnated: out.history.stagnated,
            matvecs: r.matvecs,
            compressions: out.state.compressions(),
            final_: FinalDoc {
                values: nums(&r.values),
                residual_estimate: Num(r.residual_estimate),
                residual_true: Num(r.true_residual(a)),
            },
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub(crate) fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// One row per checkpoint: matvecs, event, residual estimate, then the Ritz
/// values. Missing values are left empty.
pub fn write_csv<W: Write>(out: &SolveOutput, k: usize, w: W) -> CliResult<()> {
    let mut wr = csv::Writer::from_writer(w);
    let mut header = vec!["matvecs".to_string(), "event".into(), "residual_estimate".into()];
    header.extend((1..=k).map(|i| format!("ritz_{i}")));
    wr.write_record(&header)?;
    let cell = |x: Option<f64>| x.filter(|v| v.is_finite()).map(format_num).unwrap_or_default();
    for c in &out.history.checkpoints {
        let mut row = vec![c.matvecs.to_string(), c.event.name().to_string(), cell(c.residual_estimate)];
        row.extend((0..k).map(|i| cell(c.ritz.get(i).copied())));
        wr.write_record(&row)?;
    }
    wr.flush().map_err(|source| CliError::Io { path: "<csv>".into(), source })?;
    Ok(())
}

pub fn write_csv_file(out: &SolveOutput, k: usize, path: &Path) -> CliResult<()> {
    let mut buf = Vec::new();
    write_csv(out, k, &mut buf)?;
    write_file(path, &buf)
}
