//! Explicit graphs and brute-force k-matching enumeration.
//!
//! This is the ground truth the matrix identities are checked against, so it
//! deliberately works on edge lists and never touches a permanent or hafnian.

use std::collections::HashSet;

use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::{Error, ExactNumber, Result};

/// An undirected graph on vertices `1..=vertex_count` with positive edge
/// weights. Edges are stored with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, ExactNumber)>,
}

impl WeightedGraph {
    /// Endpoints may be given in either order. Rejects self-loops, endpoints
    /// out of range, duplicate edges and non-positive weights.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize, ExactNumber)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::Argument(format!("self-loop at vertex {u}")));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if u == 0 || v > vertex_count {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) outside vertices 1..={vertex_count}"
                )));
            }
            if !w.is_positive() {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::Argument(format!("duplicate edge ({u}, {v})")));
            }
            out.push((u, v, w));
        }
        Ok(WeightedGraph {
            vertex_count,
            edges: out,
        })
    }

    /// Unit weights.
    pub fn unweighted(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        WeightedGraph::new(
            vertex_count,
            edges
                .iter()
                .map(|&(u, v)| (u, v, ExactNumber::one()))
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, ExactNumber)] {
        &self.edges
    }

    /// The weighted adjacency matrix.
    pub fn to_symmetric(&self) -> SymZeroDiagMatrix {
        let mut a = SymZeroDiagMatrix::zeros(self.vertex_count);
        for (u, v, w) in &self.edges {
            a.set(u - 1, v - 1, w.clone());
        }
        a
    }

    /// Same graph with every weight replaced by one.
    pub fn support(&self) -> WeightedGraph {
        WeightedGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|(u, v, _)| (*u, *v, ExactNumber::one()))
                .collect(),
        }
    }
}

/// A bipartite graph with left vertices `1..=m` and right vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize, ExactNumber)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize, ExactNumber)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, j, w) in &edges {
            if *i == 0 || *i > left || *j == 0 || *j > right {
                return Err(Error::Argument(format!(
                    "edge ({i}, {j}) outside {left}x{right}"
                )));
            }
            if !w.is_positive() {
                return Err(Error::Argument(format!(
                    "edge ({i}, {j}) has non-positive weight {w}"
                )));
            }
            if !seen.insert((*i, *j)) {
                return Err(Error::Argument(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &[(usize, usize, ExactNumber)] {
        &self.edges
    }

    /// The biadjacency matrix.
    pub fn to_matrix(&self) -> NonnegMatrix {
        let mut entries = vec![ExactNumber::zero(); self.left * self.right];
        for (i, j, w) in &self.edges {
            entries[(i - 1) * self.right + (j - 1)] = w.clone();
        }
        NonnegMatrix::new(self.left, self.right, entries).expect("weights are positive")
    }

    /// The same graph as a general graph: left vertex `i` becomes `i`, right
    /// vertex `j` becomes `m + j`.
    pub fn to_general(&self) -> WeightedGraph {
        WeightedGraph {
            vertex_count: self.left + self.right,
            edges: self
                .edges
                .iter()
                .map(|(i, j, w)| (*i, self.left + j, w.clone()))
                .collect(),
        }
    }
}

/// `G(B)`: an edge `(i, j)` of weight `b_ij` for every positive entry.
pub fn graph_from_matrix(b: &NonnegMatrix) -> BipartiteGraph {
    let mut edges = Vec::new();
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let w = b.get(i, j);
            if w.is_positive() {
                edges.push((i + 1, j + 1, w.clone()));
            }
        }
    }
    BipartiteGraph {
        left: b.rows(),
        right: b.cols(),
        edges,
    }
}

/// `G(A)`: an edge `{i, j}` of weight `a_ij` for every positive entry.
pub fn graph_from_symmetric(a: &SymZeroDiagMatrix) -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..a.order() {
        for j in i + 1..a.order() {
            let w = a.get(i, j);
            if w.is_positive() {
                edges.push((i + 1, j + 1, w.clone()));
            }
        }
    }
    WeightedGraph {
        vertex_count: a.order(),
        edges,
    }
}

/// Anything whose k-matchings can be enumerated.
pub trait MatchingGraph {
    /// As a general graph on `1..=V`.
    fn as_general(&self) -> std::borrow::Cow<'_, WeightedGraph>;
}

impl MatchingGraph for WeightedGraph {
    fn as_general(&self) -> std::borrow::Cow<'_, WeightedGraph> {
        std::borrow::Cow::Borrowed(self)
    }
}

impl MatchingGraph for BipartiteGraph {
    fn as_general(&self) -> std::borrow::Cow<'_, WeightedGraph> {
        std::borrow::Cow::Owned(self.to_general())
    }
}

struct Search<F> {
    // 0-based forward neighbours: adj[u] holds (v, edge index) with v > u
    adj: Vec<Vec<(usize, usize)>>,
    matched: Vec<bool>,
    chosen: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&[usize])> Search<F> {
    /// Branch on the lowest vertex `v` not yet decided: leave it unmatched, or
    /// match it to a higher undecided neighbour. Each matching is reached by
    /// exactly one path.
    fn run(&mut self, v: usize, need: usize) {
        if need == 0 {
            (self.visit)(&self.chosen);
            return;
        }
        let n = self.matched.len();
        let mut v = v;
        while v < n && self.matched[v] {
            v += 1;
        }
        let free = (v..n).filter(|&u| !self.matched[u]).count();
        if free < 2 * need {
            return;
        }
        self.matched[v] = true;
        for idx in 0..self.adj[v].len() {
            let (u, e) = self.adj[v][idx];
            if !self.matched[u] {
                self.matched[u] = true;
                self.chosen.push(e);
                self.run(v + 1, need - 1);
                self.chosen.pop();
                self.matched[u] = false;
            }
        }
        // v left unmatched; it stays marked so later levels skip past it
        self.run(v + 1, need);
        self.matched[v] = false;
    }
}

/// Calls `visit` once per k-matching with the indices (into
/// `g.as_general().edges()`) of its edges.
pub fn for_each_k_matching<G: MatchingGraph + ?Sized>(
    g: &G,
    k: usize,
    visit: impl FnMut(&[usize]),
) {
    let g = g.as_general();
    let n = g.vertex_count();
    if 2 * k > n {
        return;
    }
    let mut adj = vec![Vec::new(); n];
    for (e, (u, v, _)) in g.edges().iter().enumerate() {
        adj[u - 1].push((v - 1, e));
    }
    let mut s = Search {
        adj,
        matched: vec![false; n],
        chosen: Vec::with_capacity(k),
        visit,
    };
    s.run(0, k);
}

/// Number of k-matchings, ignoring weights. One for `k = 0`, zero once
/// `k > V/2`.
pub fn count_k_matchings<G: MatchingGraph + ?Sized>(g: &G, k: usize) -> ExactNumber {
    let mut count: u128 = 0;
    for_each_k_matching(g, k, |_| count += 1);
    ExactNumber::from(count)
}

/// Total weight of k-matchings: `Σ_M Π_{e ∈ M} w_e`.
pub fn weighted_matching_sum<G: MatchingGraph + ?Sized>(g: &G, k: usize) -> ExactNumber {
    let general = g.as_general();
    let edges = general.edges();
    let mut total = ExactNumber::zero();
    for_each_k_matching(general.as_ref(), k, |m| {
        total += m.iter().map(|&e| &edges[e].2).product::<ExactNumber>();
    });
    total
}
