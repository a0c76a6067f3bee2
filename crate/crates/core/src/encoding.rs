//! The n×k encoding container shared by every scheme, with CSV and sidecar
//! metadata I/O.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::sylvester::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Gape,
    Lape,
    Rw,
    PprDiag,
    Pprp,
    Sinusoidal,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Gape => "gape",
            Scheme::Lape => "lape",
            Scheme::Rw => "rw",
            Scheme::PprDiag => "ppr_diag",
            Scheme::Pprp => "pprp",
            Scheme::Sinusoidal => "sinusoidal",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gape" => Ok(Scheme::Gape),
            "lape" => Ok(Scheme::Lape),
            "rw" => Ok(Scheme::Rw),
            "ppr_diag" | "ppr-diag" | "ppr" => Ok(Scheme::PprDiag),
            "pprp" => Ok(Scheme::Pprp),
            "sinusoidal" => Ok(Scheme::Sinusoidal),
            other => Err(Error::Parse(format!("unknown encoding scheme `{other}`"))),
        }
    }
}

/// Parameters an encoding was produced with. Fields that do not apply to a
/// scheme stay `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EncodingMeta {
    pub k_enc: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolveReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodingMatrix {
    pub scheme: Scheme,
    /// One row per node.
    pub values: DenseMatrix,
    pub meta: EncodingMeta,
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    scheme: Scheme,
    nodes: usize,
    #[serde(flatten)]
    meta: EncodingMeta,
}

impl EncodingMatrix {
    pub fn new(scheme: Scheme, values: DenseMatrix) -> Result<Self> {
        if let Some(idx) = values.data().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / values.cols(),
                col: idx % values.cols(),
            });
        }
        let meta = EncodingMeta {
            k_enc: values.cols(),
            ..EncodingMeta::default()
        };
        Ok(EncodingMatrix { scheme, values, meta })
    }

    pub fn with_meta(mut self, f: impl FnOnce(&mut EncodingMeta)) -> Self {
        f(&mut self.meta);
        self
    }

    pub fn nodes(&self) -> usize {
        self.values.rows()
    }

    pub fn dim(&self) -> usize {
        self.values.cols()
    }

    /// Encoding of node `v` (0-indexed).
    pub fn row(&self, v: usize) -> &[f64] {
        self.values.row(v)
    }

    /// `node,dim_1,…,dim_k` header, 1-indexed node column, shortest
    /// round-trip decimals.
    pub fn to_csv(&self) -> String {
        write_csv(&self.values)
    }

    pub fn write(&self, csv_path: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let csv_path = csv_path.as_ref();
        std::fs::write(csv_path, self.to_csv())?;
        let meta_path = sidecar_path(csv_path);
        let sidecar = Sidecar {
            scheme: self.scheme,
            nodes: self.nodes(),
            meta: self.meta.clone(),
        };
        std::fs::write(&meta_path, serde_json::to_string_pretty(&sidecar)? + "\n")?;
        Ok(vec![csv_path.to_path_buf(), meta_path])
    }

    /// Reads a CSV and, when present, its metadata sidecar. Without a sidecar
    /// the scheme defaults to `fallback`.
    pub fn read(csv_path: impl AsRef<Path>, fallback: Scheme) -> Result<Self> {
        let csv_path = csv_path.as_ref();
        let text = std::fs::read_to_string(csv_path).map_err(|e| reading(csv_path, e.into()))?;
        let values = read_csv(&text).map_err(|e| reading(csv_path, e))?;
        let meta_path = sidecar_path(csv_path);
        if meta_path.exists() {
            let sidecar: Sidecar = std::fs::read_to_string(&meta_path)
                .map_err(Error::from)
                .and_then(|t| Ok(serde_json::from_str(&t)?))
                .map_err(|e| reading(&meta_path, e))?;
            Ok(EncodingMatrix {
                scheme: sidecar.scheme,
                values,
                meta: sidecar.meta,
            })
        } else {
            EncodingMatrix::new(fallback, values)
        }
    }
}

fn reading(path: &Path, e: Error) -> Error {
    e.context(format!("reading {}", path.display()))
}

/// `enc.csv` → `enc.meta.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

pub fn write_csv(m: &DenseMatrix) -> String {
    let mut buf = ryu::Buffer::new();
    let mut out = String::from("node");
    for j in 1..=m.cols() {
        out.push_str(&format!(",dim_{j}"));
    }
    out.push('\n');
    for i in 0..m.rows() {
        out.push_str(&(i + 1).to_string());
        for &x in m.row(i) {
            out.push(',');
            out.push_str(buf.format_finite(x));
        }
        out.push('\n');
    }
    out
}

pub fn read_csv(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let cols = header.split(',').count().saturating_sub(1);
    let mut data = Vec::new();
    let mut rows = 0;
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols + 1 {
            return Err(Error::Parse(format!(
                "line {}: {} fields, header has {}",
                idx + 2,
                fields.len(),
                cols + 1
            )));
        }
        for f in &fields[1..] {
            let x: f64 = f
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number `{f}`", idx + 2)))?;
            data.push(x);
        }
        rows += 1;
    }
    DenseMatrix::from_vec(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = DenseMatrix::from_fn(3, 2, |i, j| (i as f64 + 0.1).powi(j as i32 + 3) / 7.0 - 1e-300);
        let csv = write_csv(&m);
        assert!(csv.starts_with("node,dim_1,dim_2\n1,"));
        let back = read_csv(&csv).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_ragged_and_non_numeric() {
        assert!(read_csv("node,dim_1\n1,2,3\n").is_err());
        assert!(read_csv("node,dim_1\n1,abc\n").is_err());
        assert!(read_csv("").is_err());
    }

    #[test]
    fn non_finite_values_rejected() {
        let mut m = DenseMatrix::zeros(2, 2);
        m[(1, 0)] = f64::NAN;
        assert!(matches!(
            EncodingMatrix::new(Scheme::Rw, m),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("enc.csv");
        let enc = EncodingMatrix::new(Scheme::Pprp, DenseMatrix::identity(3))
            .unwrap()
            .with_meta(|m| m.beta = Some(0.15));
        let written = enc.write(&path).unwrap();
        assert_eq!(written[1], dir.path().join("enc.meta.json"));
        assert_eq!(EncodingMatrix::read(&path, Scheme::Gape).unwrap(), enc);
    }

    #[test]
    fn scheme_names() {
        for s in [Scheme::Gape, Scheme::Lape, Scheme::Rw, Scheme::PprDiag, Scheme::Pprp, Scheme::Sinusoidal] {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
    }
}
