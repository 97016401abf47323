//! Simple graphs, Erdős–Rényi sampling and Laplacians.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rng::trial_rng;

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        Graph { n, edges: (1..n).map(|v| (v - 1, v)).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.edges.push((0, n - 1));
            g.edges.sort_unstable();
        }
        g
    }

    /// Rejects loops and out-of-range endpoints; orients and deduplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidArgument("graph has a loop"));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument("edge endpoint out of range"));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Graph { n, edges: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        // union-find with path halving
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.n;
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                components -= 1;
            }
        }
        components == 1
    }

    /// `Deg - Adj`.
    pub fn laplacian(&self) -> IntMatrix {
        let mut deg = alloc::vec![0i64; self.n];
        let mut l = IntMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
            l[(u, v)] = BigInt::from(-1);
            l[(v, u)] = BigInt::from(-1);
        }
        for (i, d) in deg.into_iter().enumerate() {
            l[(i, i)] = BigInt::from(d);
        }
        l
    }

    /// Laplacian with row and column `delete_vertex` removed.
    pub fn reduced_laplacian(&self, delete_vertex: usize) -> Result<IntMatrix> {
        if delete_vertex >= self.n {
            return Err(Error::InvalidArgument("deleted vertex out of range"));
        }
        Ok(self.laplacian().delete_row_col(delete_vertex))
    }

    /// Reduced Laplacian deleting the last vertex.
    pub fn default_reduced_laplacian(&self) -> IntMatrix {
        assert!(self.n >= 1, "graph has no vertices");
        self.laplacian().delete_row_col(self.n - 1)
    }
}

/// Parameters of `G(n, q)`.
///
/// `q` is held as a 53-bit dyadic rational `q_num / 2^53`; an edge is kept
/// when a uniform 64-bit draw `x` satisfies `x >> 11 < q_num`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSampleConfig {
    pub n: usize,
    q_num: u64,
    pub seed: u64,
    pub connected_only: bool,
}

const Q_BITS: u32 = 53;

impl GraphSampleConfig {
    pub fn new(n: usize, q: f64, seed: u64, connected_only: bool) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidArgument("edge probability must lie in (0, 1)"));
        }
        let scaled = q * (1u64 << Q_BITS) as f64;
        // round half up without std float intrinsics
        let q_num = (scaled + 0.5) as u64;
        let q_num = q_num.clamp(1, (1u64 << Q_BITS) - 1);
        Ok(GraphSampleConfig { n, q_num, seed, connected_only })
    }

    /// The probability actually used, `q_num / 2^53`.
    pub fn q(&self) -> f64 {
        self.q_num as f64 / (1u64 << Q_BITS) as f64
    }

    pub fn q_numerator(&self) -> u64 {
        self.q_num
    }
}

/// One `G(n, q)` draw from an arbitrary bit source.
pub fn sample_edges_with<R: RngCore + ?Sized>(n: usize, q_num: u64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_u64() >> (64 - Q_BITS) < q_num {
                edges.push((u, v));
            }
        }
    }
    Graph { n, edges }
}

/// A sampled graph together with the number of rejected disconnected draws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledGraph {
    pub graph: Graph,
    pub discarded: u64,
}

/// Samples from `G(n, q)` with an explicit bit source, resampling until
/// connected when `connected_only` is set.
pub fn sample_gnq_with<R: RngCore + ?Sized>(cfg: &GraphSampleConfig, rng: &mut R) -> SampledGraph {
    let mut discarded = 0;
    loop {
        let graph = sample_edges_with(cfg.n, cfg.q_num, rng);
        if !cfg.connected_only || graph.is_connected() {
            return SampledGraph { graph, discarded };
        }
        discarded += 1;
    }
}

/// Trial `trial_index` of the experiment configured by `cfg`.
pub fn sample_gnq(cfg: &GraphSampleConfig, trial_index: u64) -> SampledGraph {
    let mut rng = trial_rng(cfg.seed, trial_index);
    sample_gnq_with(cfg, &mut rng)
}
