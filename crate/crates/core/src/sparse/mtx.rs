//! Matrix Market `coordinate real` reader and writer.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::csr::SparseMatrixCsr;
use crate::error::{Error, Result};

/// Relative asymmetry accepted in `general` storage.
pub const INGEST_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Storage {
    Symmetric,
    General,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Result<Storage> {
    let tokens: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix coordinate real <symmetry>'"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported object/format '{} {}'", tokens[1], tokens[2])));
    }
    if tokens[3] != "real" {
        return Err(parse_err(1, format!("unsupported field '{}', only 'real' is accepted", tokens[3])));
    }
    match tokens[4].as_str() {
        "symmetric" => Ok(Storage::Symmetric),
        "general" => Ok(Storage::General),
        other => Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    }
}

/// Parses a Matrix Market stream into a symmetric CSR matrix.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparseMatrixCsr> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l?,
        None => return Err(parse_err(1, "empty input")),
    };
    let storage = parse_header(&header)?;

    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "size line must have three integers"));
                }
                let nums: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse().map_err(|_| parse_err(lineno, format!("bad integer '{f}'"))))
                    .collect::<Result<_>>()?;
                if nums[0] != nums[1] {
                    return Err(parse_err(lineno, format!("matrix is {}x{}, not square", nums[0], nums[1])));
                }
                size = Some((nums[0], nums[2]));
                triplets.reserve(if storage == Storage::Symmetric { 2 * nums[2] } else { nums[2] });
            }
            Some((n, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "entry line must be 'row col value'"));
                }
                let i: usize = fields[0].parse().map_err(|_| parse_err(lineno, "bad row index"))?;
                let j: usize = fields[1].parse().map_err(|_| parse_err(lineno, "bad column index"))?;
                let v: f64 = fields[2].parse().map_err(|_| parse_err(lineno, format!("bad value '{}'", fields[2])))?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
                }
                triplets.push((i - 1, j - 1, v));
                if storage == Storage::Symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let stored = match storage {
        Storage::Symmetric => triplets.iter().filter(|t| t.0 >= t.1).count(),
        Storage::General => triplets.len(),
    };
    if stored != nnz {
        return Err(parse_err(0, format!("header declares {nnz} entries, found {stored}")));
    }
    SparseMatrixCsr::from_triplets(n, &triplets, INGEST_SYMMETRY_TOL)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrixCsr> {
    let f = File::open(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_matrix_market(BufReader::new(f))
}

/// Writes the lower triangle in `symmetric` storage. Values carry 17
/// significant digits, enough to round-trip every `f64`.
pub fn format_matrix_market<W: Write>(a: &SparseMatrixCsr, mut out: W) -> Result<()> {
    let lower: usize = (0..a.n()).map(|i| a.row(i).filter(|&(j, _)| j <= i).count()).sum();
    writeln!(out, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(out, "{} {} {}", a.n(), a.n(), lower)?;
    for j in 0..a.n() {
        // Column-major order over the lower triangle: entry (i, j) with i ≥ j
        // equals (j, i), which is row j's upper part.
        for (i, v) in a.row(j).filter(|&(i, _)| i >= j) {
            writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_matrix_market(a: &SparseMatrixCsr, path: impl AsRef<Path>) -> Result<()> {
    let f = File::create(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    format_matrix_market(a, BufWriter::new(f))
}
