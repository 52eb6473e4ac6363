//! Maximum-subset search for hereditary vertex-set properties.
//!
//! A property is hereditary when every subset of a valid set is valid; it is
//! additionally "conflict-monotone" when a vertex that cannot extend `S`
//! cannot extend any superset of `S` either. Cliques, induced cluster
//! subgraphs and general position sets all qualify, which makes forward
//! checking exact: after each extension the candidate set is filtered down to
//! vertices that individually extend the new set.
//!
//! The driver is a Russian-doll search: vertices are processed from the back
//! of a fixed order, and the optimum inside the suffix starting at position
//! `i` bounds every branch whose remaining candidates lie in that
//! suffix.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

/// Node-count and wall-clock limits; `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            max_nodes: Some(n),
            max_time: None,
        }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(Duration::from_millis(ms)),
        }
    }

    pub fn with_nodes(mut self, n: Option<u64>) -> Self {
        self.max_nodes = n;
        self
    }

    pub fn with_millis(mut self, ms: Option<u64>) -> Self {
        self.max_time = ms.map(Duration::from_millis);
        self
    }
}

/// Whether a search ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Exact,
    LowerBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower-bound",
        }
    }

    pub fn and(self, other: Status) -> Status {
        if self == Status::Exact && other == Status::Exact {
            Status::Exact
        } else {
            Status::LowerBound
        }
    }
}

/// Tracks node count and elapsed time against a [`Budget`].
#[derive(Debug)]
pub(crate) struct Meter {
    budget: Budget,
    start: Instant,
    pub nodes: u64,
    pub exhausted: bool,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Meter {
            budget,
            start: Instant::now(),
            nodes: 0,
            exhausted: false,
        }
    }

    /// Counts one node; returns false once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|m| self.nodes > m) {
            self.exhausted = true;
        } else if self.nodes & 0x3ff == 0 {
            if let Some(t) = self.budget.max_time {
                if self.start.elapsed() >= t {
                    self.exhausted = true;
                }
            }
        }
        !self.exhausted
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// A conflict-monotone hereditary property over positions `0..n`.
pub(crate) trait Property {
    fn n(&self) -> usize;

    /// `cand` holds vertices that each extend `chosen \ {added}`. Shrink it to
    /// those that extend `chosen`, which already contains `added`.
    fn restrict(&self, chosen: &FixedBitSet, added: usize, cand: &mut FixedBitSet);

    /// Upper bound on how many of `cand` can join the current set.
    fn bound(&self, cand: &FixedBitSet) -> usize {
        cand.count_ones(..)
    }
}

/// Result of a search, in the caller's vertex identifiers.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub best: VertexSet,
    pub status: Status,
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Doll<'a, P: Property> {
    prop: &'a P,
    meter: Meter,
    /// `suffix_best[i]`: optimum within positions `i..n` (upper bound while
    /// the search for position `i` is running).
    suffix_best: Vec<usize>,
    best: Vec<usize>,
    target: usize,
    found_target: bool,
}

impl<P: Property> Doll<'_, P> {
    fn expand(&mut self, chosen: &mut Vec<usize>, chosen_bits: &mut FixedBitSet, mut cand: FixedBitSet) {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
            if self.best.len() >= self.target {
                self.found_target = true;
                return;
            }
        }
        let mut remaining = cand.count_ones(..);
        if remaining == 0 || chosen.len() + self.prop.bound(&cand) <= self.best.len() {
            return;
        }
        while let Some(v) = cand.minimum() {
            if chosen.len() + remaining <= self.best.len() || chosen.len() + self.suffix_best[v] <= self.best.len() {
                return;
            }
            if !self.meter.tick() {
                return;
            }
            cand.set(v, false);
            remaining -= 1;
            let mut next = cand.clone();
            chosen.push(v);
            chosen_bits.insert(v);
            self.prop.restrict(chosen_bits, v, &mut next);
            self.expand(chosen, chosen_bits, next);
            chosen_bits.set(v, false);
            chosen.pop();
            if self.found_target || self.meter.exhausted {
                return;
            }
        }
    }
}

/// Maximum valid subset of positions `0..n` under `prop`.
///
/// `seed`, when given, must itself be valid. It is returned if the budget runs
/// out before anything larger is found; it does not take part in pruning,
/// which would spoil the suffix optima.
pub(crate) fn maximum_set<P: Property>(
    prop: &P,
    budget: Budget,
    seed: Option<&[usize]>,
) -> (Vec<usize>, Status, u64, Duration) {
    let n = prop.n();
    let mut doll = Doll {
        prop,
        meter: Meter::new(budget),
        suffix_best: vec![0; n + 1],
        best: Vec::new(),
        target: usize::MAX,
        found_target: false,
    };
    let mut chosen = Vec::new();
    let mut chosen_bits = FixedBitSet::with_capacity(n);
    for i in (0..n).rev() {
        // the optimum in suffix i is at most one more than in suffix i+1
        let cap = doll.suffix_best[i + 1] + 1;
        doll.suffix_best[i] = cap;
        doll.target = cap;
        doll.found_target = false;
        if !doll.meter.tick() {
            break;
        }
        let mut cand = FixedBitSet::with_capacity(n);
        cand.insert_range(i + 1..n);
        chosen.push(i);
        chosen_bits.insert(i);
        prop.restrict(&chosen_bits, i, &mut cand);
        doll.expand(&mut chosen, &mut chosen_bits, cand);
        chosen_bits.set(i, false);
        chosen.pop();
        if doll.meter.exhausted {
            break;
        }
        doll.suffix_best[i] = doll.best.len();
    }
    let status = if doll.meter.exhausted {
        Status::LowerBound
    } else {
        Status::Exact
    };
    let elapsed = doll.meter.elapsed();
    let mut best = doll.best;
    if let Some(s) = seed {
        if s.len() > best.len() {
            best = s.to_vec();
        }
    }
    (best, status, doll.meter.nodes, elapsed)
}

/// Search order: descending degree, ties by vertex id.
pub(crate) fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// Runs `maximum_set` on `g` relabeled by [`degree_order`] and maps the
/// witness back. `make` builds the property on the relabeled graph.
pub(crate) fn solve_on_graph<P, F>(g: &Graph, budget: Budget, seed: Option<&VertexSet>, make: F) -> Outcome
where
    P: Property,
    F: FnOnce(&Graph) -> P,
{
    let order = degree_order(g);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let relabeled = g.permuted(&order);
    let prop = make(&relabeled);
    let seed: Option<Vec<usize>> = seed.map(|s| s.iter().map(|v| pos[v]).collect());
    let (best, status, nodes, elapsed) = maximum_set(&prop, budget, seed.as_deref());
    Outcome {
        best: best.into_iter().map(|p| order[p]).collect(),
        status,
        nodes,
        elapsed,
    }
}

/// Cliques: candidates must be adjacent to everything chosen. The bound is a
/// greedy coloring of the candidates.
pub(crate) struct Clique {
    pub g: Graph,
}

impl Property for Clique {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn restrict(&self, _chosen: &FixedBitSet, added: usize, cand: &mut FixedBitSet) {
        cand.intersect_with(self.g.neighbor_set(added));
    }

    fn bound(&self, cand: &FixedBitSet) -> usize {
        let mut uncolored = cand.clone();
        let mut colors = 0;
        while !uncolored.is_clear() {
            colors += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.minimum() {
                uncolored.set(v, false);
                avail.set(v, false);
                avail.difference_with(self.g.neighbor_set(v));
            }
        }
        colors
    }
}

/// Induced cluster subgraphs (disjoint unions of cliques, i.e. `P_3`-free).
pub(crate) struct Cluster {
    pub g: Graph,
}

impl Cluster {
    /// `chosen ∪ {x}` still induces a cluster graph, given that `chosen` does:
    /// the neighbors of `x` inside `chosen` are empty or exactly one component.
    pub fn extends(&self, chosen: &FixedBitSet, x: usize) -> bool {
        let nx = self.g.neighbor_set(x).as_slice();
        let s = chosen.as_slice();
        let Some(t) = nx.iter().zip(s).enumerate().find_map(|(i, (a, b))| {
            let w = a & b;
            (w != 0).then(|| i * usize::BITS as usize + w.trailing_zeros() as usize)
        }) else {
            return true;
        };
        let nt = self.g.neighbor_set(t).as_slice();
        let (tb, tw) = (t / usize::BITS as usize, 1usize << (t % usize::BITS as usize));
        nx.iter().zip(nt).zip(s).enumerate().all(|(i, ((a, b), c))| {
            let own = if i == tb { tw } else { 0 };
            a & c == (b & c) | own
        })
    }
}

impl Property for Cluster {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn restrict(&self, chosen: &FixedBitSet, _added: usize, cand: &mut FixedBitSet) {
        let drop: Vec<usize> = cand.ones().filter(|&x| !self.extends(chosen, x)).collect();
        for x in drop {
            cand.set(x, false);
        }
    }
}
