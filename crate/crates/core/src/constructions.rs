//! Constructors for the graph families the gp formulas speak about.
//!
//! Every constructor fixes a canonical vertex order:
//!
//! * `kneser(n, k)`: k-subsets of `{1..n}` in lexicographic order, so vertex 0
//!   is `{1..k}`.
//! * `cartesian_product(g, h)`: pair `(a, b)` is vertex `a * n(h) + b`.
//! * `join(g, h)`, `disjoint_union(g, h)`: vertices of `g`, then those of `h`
//!   shifted by `n(g)`.
//! * `corona(g, h)`: the `n(g)` centers first, then one block of `n(h)`
//!   vertices per center, in center order.
//! * `line_graph(g)`: edges `(u, v)`, `u < v`, in lexicographic order.

use std::fmt;

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Sorted k-subset of `{1..n}`; the label of a Kneser vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KSubset(Vec<u32>);

impl KSubset {
    pub fn new(mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) || elements.first() == Some(&0) {
            return Err(invalid(format!("not a subset of positive integers: {elements:?}")));
        }
        Ok(KSubset(elements))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    fn mask(&self) -> u128 {
        self.0.iter().fold(0u128, |m, &e| m | 1u128 << (e - 1))
    }

    pub fn is_disjoint(&self, other: &KSubset) -> bool {
        self.mask() & other.mask() == 0
    }
}

impl fmt::Display for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All k-subsets of `{1..n}` in lexicographic order.
pub fn k_subsets(n: u32, k: u32) -> Vec<KSubset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let k = k as usize;
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(KSubset(cur.clone()));
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - (k - 1 - i) as u32) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Position of `s` in the lexicographic order of `k_subsets(n, |s|)`.
pub fn k_subset_index(n: u32, s: &KSubset) -> usize {
    use num_integer::binomial;
    let k = s.0.len() as u64;
    let n = n as u64;
    let mut idx = 0u64;
    let mut prev = 0u64;
    for (i, &e) in s.0.iter().enumerate() {
        let i = i as u64;
        for skipped in prev + 1..e as u64 {
            idx += binomial(n - skipped, k - i - 1);
        }
        prev = e as u64;
    }
    idx as usize
}

pub fn edgeless(n: usize) -> Graph {
    Graph::empty(n)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("complete graph needs n >= 1"));
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("path needs n >= 1"));
    }
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid("cycle needs n >= 3"));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Kneser graph: k-subsets of `{1..n}`, adjacent when disjoint. Labeled by
/// the subsets.
pub fn kneser(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || k > n {
        return Err(invalid(format!("kneser({n},{k}) needs n >= k >= 1")));
    }
    if n > 128 {
        return Err(invalid("kneser graphs are limited to n <= 128"));
    }
    let subsets = k_subsets(n as u32, k as u32);
    if subsets.len() > 1 << 16 {
        return Err(invalid(format!("kneser({n},{k}) has more than 65536 vertices")));
    }
    let masks: Vec<u128> = subsets.iter().map(KSubset::mask).collect();
    let mut g = Graph::empty(subsets.len());
    for u in 0..masks.len() {
        for v in u + 1..masks.len() {
            if masks[u] & masks[v] == 0 {
                g.add_edge(u, v);
            }
        }
    }
    g.with_labels(subsets.iter().map(ToString::to_string).collect())
}

pub fn petersen() -> Graph {
    kneser(5, 2).expect("valid parameters")
}

/// Cartesian product; `(a, b)` is vertex `a * n(h) + b`, labeled `"(a,b)"`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let (gn, hn) = (g.n(), h.n());
    let mut out = Graph::empty(gn * hn);
    for a in 0..gn {
        for (b1, b2) in h.edges() {
            out.add_edge(a * hn + b1, a * hn + b2);
        }
    }
    for (a1, a2) in g.edges() {
        for b in 0..hn {
            out.add_edge(a1 * hn + b, a2 * hn + b);
        }
    }
    let labels = (0..gn)
        .flat_map(|a| (0..hn).map(move |b| format!("({a},{b})")))
        .collect();
    out.with_labels(labels).expect("label count matches")
}

/// `K_{n_1} □ ... □ K_{n_k}`, built left to right. Coordinates are row-major
/// with the first factor most significant.
pub fn hamming(ns: &[usize]) -> Result<Graph> {
    let (&first, rest) = ns
        .split_first()
        .ok_or_else(|| invalid("hamming graph needs at least one factor"))?;
    let mut g = complete(first)?;
    for &m in rest {
        g = cartesian_product(&g, &complete(m)?);
    }
    Ok(g.without_labels())
}

fn concat_labels(g: &Graph, h: &Graph) -> Option<Vec<String>> {
    match (g.labels(), h.labels()) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
        _ => None,
    }
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    let mut out = Graph::empty(g.n() + h.n());
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.add_edge(off + u, off + v);
    }
    match concat_labels(g, h) {
        Some(l) => out.with_labels(l).expect("label count matches"),
        None => out,
    }
}

/// Disjoint union plus every edge between `g` and `h`.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let mut out = disjoint_union(g, h);
    for u in 0..g.n() {
        for v in 0..h.n() {
            out.add_edge(u, g.n() + v);
        }
    }
    out
}

/// Corona `g ∘ h`: center `i` is joined to every vertex of block `i`, which
/// occupies `n(g) + i*n(h) .. n(g) + (i+1)*n(h)`.
pub fn corona(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.n() == 0 {
        return Err(invalid("corona needs a nonempty center graph"));
    }
    let (gn, hn) = (g.n(), h.n());
    let mut out = Graph::empty(gn * (1 + hn));
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for i in 0..gn {
        let base = gn + i * hn;
        for (u, v) in h.edges() {
            out.add_edge(base + u, base + v);
        }
        for u in 0..hn {
            out.add_edge(i, base + u);
        }
    }
    Ok(out)
}

/// First vertex of the copy of `h` hung under center `i` in `corona(g, h)`.
pub fn corona_block_start(g_n: usize, h_n: usize, i: usize) -> usize {
    g_n + i * h_n
}

/// Line graph, labeled `"{u,v}"` by the underlying edge.
pub fn line_graph(g: &Graph) -> Graph {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut out = Graph::empty(edges.len());
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        for (j, &(c, d)) in edges.iter().enumerate().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                out.add_edge(i, j);
            }
        }
    }
    let labels = edges.iter().map(|(u, v)| format!("{{{u},{v}}}")).collect();
    out.with_labels(labels).expect("label count matches")
}

/// Vertex of `line_graph(complete(n))` standing for the edge `{u, v}` of
/// `K_n` (0-based endpoints).
pub fn line_complete_vertex(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    // edges (a, *) for a < u come first: sum_{a<u} (n-1-a)
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}
