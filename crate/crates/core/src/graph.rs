//! Simple undirected graphs on dense vertex identifiers `0..n`.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Immutable simple undirected graph.
///
/// Adjacency is stored as one bitset row per vertex, so membership tests are
/// constant time. Rows are symmetric and carry no self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![FixedBitSet::with_capacity(n); n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Attaches one label per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(invalid(format!(
                "{} labels for a graph on {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|row| row.count_ones(..)).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].ones()
    }

    pub fn neighbor_set(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, u: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[u].as_str())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// `s` induces a complete subgraph.
    pub fn is_clique(&self, s: &[usize]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &u)| s[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, s: &[usize]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &u)| s[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn complement(&self) -> Graph {
        let mut out = Graph::empty(self.n);
        for u in 0..self.n {
            let mut row = self.adj[u].clone();
            row.toggle_range(..);
            row.set(u, false);
            out.adj[u] = row;
        }
        out.labels = self.labels.clone();
        out
    }

    /// Subgraph induced by `s`, relabeled `0..|s|` in the order of `s`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        s.check_range(self.n)?;
        let members = s.as_slice();
        let mut out = Graph::empty(members.len());
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    out.add_edge(i, j);
                }
            }
        }
        out.labels = self
            .labels
            .as_ref()
            .map(|l| members.iter().map(|&u| l[u].clone()).collect());
        Ok(out)
    }

    /// Relabels vertex `order[i]` as `i`. `order` must be a permutation.
    pub(crate) fn permuted(&self, order: &[usize]) -> Graph {
        debug_assert_eq!(order.len(), self.n);
        let mut pos = vec![0; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut out = Graph::empty(self.n);
        for (u, v) in self.edges() {
            out.add_edge(pos[u], pos[v]);
        }
        out
    }

    /// Maximal connected pieces, each sorted, listed by minimum member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for root in 0..self.n {
            if seen.contains(root) {
                continue;
            }
            seen.insert(root);
            stack.push(root);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for w in self.adj[u].ones() {
                    if !seen.contains(w) {
                        seen.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

/// Canonical vertex subset: strictly increasing identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Sorts and removes duplicates.
    pub fn from_unsorted(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    /// Full vertex set `0..n`.
    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        VertexSet::from_unsorted(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
