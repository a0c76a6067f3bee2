//! Agreement statistics between two encodings of the same graph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Pearson correlation, or `None` when either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson length mismatch");
    let n = x.len() as f64;
    if x.is_empty() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Correlation of column j of `a` with column j of `b`, for every j.
pub fn per_column_pearson(a: &DenseMatrix, b: &DenseMatrix) -> Vec<Option<f64>> {
    (0..a.cols()).map(|j| pearson(&a.col(j), &b.col(j))).collect()
}

/// Correlation of row v of `a` with row v of `b`, for every node v.
pub fn per_node_pearson(a: &DenseMatrix, b: &DenseMatrix) -> Vec<Option<f64>> {
    (0..a.rows()).map(|v| pearson(a.row(v), b.row(v))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub nodes: usize,
    pub dims: usize,
    pub max_abs_diff: f64,
    pub mse: f64,
    /// `None` where a column is constant in either input.
    pub per_column_pearson: Vec<Option<f64>>,
    pub per_node_pearson: Vec<Option<f64>>,
}

impl Comparison {
    pub fn min_column_pearson(&self) -> Option<f64> {
        min_defined(&self.per_column_pearson)
    }

    pub fn min_node_pearson(&self) -> Option<f64> {
        min_defined(&self.per_node_pearson)
    }
}

fn min_defined(xs: &[Option<f64>]) -> Option<f64> {
    xs.iter().flatten().copied().reduce(f64::min)
}

pub fn compare(a: &DenseMatrix, b: &DenseMatrix) -> Result<Comparison> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let diff = a.sub(b);
    let count = (a.rows() * a.cols()).max(1) as f64;
    Ok(Comparison {
        nodes: a.rows(),
        dims: a.cols(),
        max_abs_diff: diff.max_abs(),
        mse: diff.data().iter().map(|x| x * x).sum::<f64>() / count,
        per_column_pearson: per_column_pearson(a, b),
        per_node_pearson: per_node_pearson(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_values() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 1.0]), None);
        assert_eq!(pearson(&[], &[]), None);
    }

    #[test]
    fn self_comparison() {
        let m = DenseMatrix::from_fn(4, 3, |i, j| (i * j) as f64 + (i as f64).sin());
        let c = compare(&m, &m).unwrap();
        assert_eq!((c.max_abs_diff, c.mse), (0.0, 0.0));
        assert!((c.min_column_pearson().unwrap() - 1.0).abs() < 1e-12);
        assert!(compare(&m, &DenseMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn constant_offset_mse() {
        let m = DenseMatrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64);
        let c = compare(&m, &m.map(|x| x + 0.5)).unwrap();
        assert_eq!(c.mse, 0.25);
        assert_eq!(c.max_abs_diff, 0.5);
    }
}
