//! Node-labeled graphs, the canonical families used by the encodings, and the
//! matrices derived from them.
//!
//! Nodes are 0-indexed in memory and 1-indexed in every external format.
//! Labels are 1-based (`1..=m`) everywhere.

mod generators;
mod matrices;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use generators::{csl_graph, cycle_graph, erdos_renyi, string_graph};
pub use matrices::{degree_matrix, label_matrix, laplacian, symmetrize, walk_matrix};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    labels: Vec<usize>,
    adjacency: DenseMatrix,
    directed: bool,
}

/// On-disk graph layout: `{"n", "directed", "labels", "edges"}` with 1-indexed nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub directed: bool,
    pub labels: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

impl LabeledGraph {
    /// Builds a graph from 0-indexed edges. Undirected graphs get both orientations.
    pub fn new(n: usize, labels: Vec<usize>, edges: &[(usize, usize)], directed: bool) -> Result<Self> {
        let mut adjacency = DenseMatrix::zeros(n, n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) references a node outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            adjacency[(u, v)] = 1.0;
            if !directed {
                adjacency[(v, u)] = 1.0;
            }
        }
        Self::from_adjacency(adjacency, labels, directed)
    }

    pub fn from_adjacency(adjacency: DenseMatrix, labels: Vec<usize>, directed: bool) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::InvalidGraph(format!(
                "adjacency is {}x{}",
                adjacency.rows(),
                adjacency.cols()
            )));
        }
        let n = adjacency.rows();
        if labels.len() != n {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {n} nodes",
                labels.len()
            )));
        }
        if let Some(v) = labels.iter().position(|&l| l == 0) {
            return Err(Error::InvalidGraph(format!(
                "node {} has label 0; labels start at 1",
                v + 1
            )));
        }
        if adjacency.data().iter().any(|&x| x != 0.0 && x != 1.0) {
            return Err(Error::InvalidGraph("adjacency entries must be 0 or 1".into()));
        }
        if !directed && adjacency.asymmetry() != 0.0 {
            return Err(Error::InvalidGraph(
                "undirected graph with asymmetric adjacency".into(),
            ));
        }
        Ok(LabeledGraph {
            labels,
            adjacency,
            directed,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Label of node `v` (0-indexed node, 1-based label).
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    /// Largest label in use, i.e. the smallest alphabet size that fits.
    pub fn label_count(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(1)
    }

    pub fn adjacency(&self) -> &DenseMatrix {
        &self.adjacency
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[(u, v)] != 0.0
    }

    /// 0-indexed edge list; undirected edges are listed once with `u <= v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            let start = if self.directed { 0 } else { u };
            for v in start..n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn with_labels(self, labels: Vec<usize>) -> Result<Self> {
        Self::from_adjacency(self.adjacency, labels, self.directed)
    }

    /// Same graph with every node carrying its own label (`label(v) = v + 1`).
    pub fn with_unique_labels(&self) -> Self {
        LabeledGraph {
            labels: (1..=self.n()).collect(),
            adjacency: self.adjacency.clone(),
            directed: self.directed,
        }
    }

    /// Undirected view with adjacency max(A, Aᵀ).
    pub fn symmetrized(&self) -> Self {
        LabeledGraph {
            labels: self.labels.clone(),
            adjacency: symmetrize(&self.adjacency),
            directed: false,
        }
    }

    /// Relabels nodes so that old node `v` becomes node `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidParameter("not a permutation of the nodes".into()));
        }
        let mut labels = vec![0; n];
        let mut adjacency = DenseMatrix::zeros(n, n);
        for u in 0..n {
            labels[perm[u]] = self.labels[u];
            for v in 0..n {
                adjacency[(perm[u], perm[v])] = self.adjacency[(u, v)];
            }
        }
        Ok(LabeledGraph {
            labels,
            adjacency,
            directed: self.directed,
        })
    }

    /// Number of weakly connected components.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let sym = symmetrize(&self.adjacency);
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if sym[(u, v)] != 0.0 && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            directed: self.directed,
            labels: self.labels.clone(),
            edges: self.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let mut edges = Vec::with_capacity(file.edges.len());
        for &[u, v] in &file.edges {
            if u == 0 || v == 0 || u > file.n || v > file.n {
                return Err(Error::InvalidGraph(format!(
                    "edge [{u}, {v}] outside nodes 1..={}",
                    file.n
                )));
            }
            edges.push((u - 1, v - 1));
        }
        Self::new(file.n, file.labels.clone(), &edges, file.directed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let ctx = |e: Error| e.context(format!("loading {}", path.display()));
        let text = std::fs::read_to_string(path).map_err(|e| ctx(e.into()))?;
        Self::from_json(&text).map_err(ctx)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
