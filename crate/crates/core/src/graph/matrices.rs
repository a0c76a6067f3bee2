use super::LabeledGraph;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Entrywise max(A, Aᵀ).
pub fn symmetrize(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].max(a[(j, i)]))
}

/// Diagonal of row sums of the symmetrized adjacency.
pub fn degree_matrix(g: &LabeledGraph) -> DenseMatrix {
    DenseMatrix::from_diag(&degrees(g))
}

pub(crate) fn degrees(g: &LabeledGraph) -> Vec<f64> {
    let a = symmetrize(g.adjacency());
    (0..g.n()).map(|i| a.row(i).iter().sum()).collect()
}

/// L = D − A on the symmetrized graph.
pub fn laplacian(g: &LabeledGraph) -> DenseMatrix {
    let a = symmetrize(g.adjacency());
    let d = degrees(g);
    DenseMatrix::from_fn(g.n(), g.n(), |i, j| {
        if i == j {
            d[i] - a[(i, j)]
        } else {
            -a[(i, j)]
        }
    })
}

/// Column-stochastic random-walk matrix W = A·D⁻¹ on the symmetrized graph.
pub fn walk_matrix(g: &LabeledGraph) -> Result<DenseMatrix> {
    let a = symmetrize(g.adjacency());
    let d = degrees(g);
    if let Some(v) = d.iter().position(|&x| x == 0.0) {
        return Err(Error::IsolatedNode { node: v + 1 });
    }
    Ok(DenseMatrix::from_fn(g.n(), g.n(), |i, j| a[(i, j)] / d[j]))
}

/// One-hot label matrix ℓ ∈ {0,1}^{m×n}: column v has its 1 in row label(v).
pub fn label_matrix(g: &LabeledGraph, m: usize) -> Result<DenseMatrix> {
    let mut out = DenseMatrix::zeros(m, g.n());
    for (v, &label) in g.labels().iter().enumerate() {
        if label == 0 || label > m {
            return Err(Error::LabelOutOfRange {
                node: v + 1,
                label,
                labels: m,
            });
        }
        out[(label - 1, v)] = 1.0;
    }
    Ok(out)
}
