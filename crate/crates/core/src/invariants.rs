//! Exact clique number ω, independence number α, and the two cluster-type
//! invariants η and ρ.
//!
//! * ρ(G): largest `S` such that `G[S]` is a disjoint union of cliques. Two
//!   vertices in different components of `G[S]` are non-adjacent, so the
//!   cliques are automatically pairwise independent (distance ≥ 2).
//! * η(G): largest `S` such that the complement of `G`, restricted to `S`, is
//!   complete multipartite with at least two parts. In `G` this means `G[S]`
//!   is a disjoint union of at least two cliques. A single vertex counts as
//!   the degenerate case, so η(G) = 1 for every nonempty complete graph.
//!
//! Hence ρ(G) = max{ω(G), η(G)}, and η can be strictly smaller than ρ (the
//! octahedron has ρ = 3 but η = 2).

use std::time::Duration;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::graph::{Graph, VertexSet};
use crate::search::{degree_order, solve_on_graph, Budget, Clique, Cluster, Meter, Outcome, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariant {
    Omega,
    Alpha,
    Eta,
    Rho,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Omega => "omega",
            Invariant::Alpha => "alpha",
            Invariant::Eta => "eta",
            Invariant::Rho => "rho",
        }
    }
}

impl std::str::FromStr for Invariant {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "omega" => Ok(Invariant::Omega),
            "alpha" => Ok(Invariant::Alpha),
            "eta" => Ok(Invariant::Eta),
            "rho" => Ok(Invariant::Rho),
            other => Err(crate::error::invalid(format!("unknown invariant '{other}'"))),
        }
    }
}

/// Value, certifying witness, and search statistics of an invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub which: Invariant,
    pub value: usize,
    pub witness: VertexSet,
    pub status: Status,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
    #[serde(rename = "ms", serialize_with = "ser_ms")]
    pub elapsed: Duration,
}

fn ser_ms<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl InvariantResult {
    fn from_outcome(which: Invariant, out: Outcome) -> Self {
        InvariantResult {
            which,
            value: out.best.len(),
            witness: out.best,
            status: out.status,
            nodes_explored: out.nodes,
            elapsed: out.elapsed,
        }
    }
}

pub fn omega(g: &Graph, budget: Budget) -> InvariantResult {
    InvariantResult::from_outcome(
        Invariant::Omega,
        solve_on_graph(g, budget, None, |h| Clique { g: h.clone() }),
    )
}

/// α(G) = ω(complement of G).
pub fn alpha(g: &Graph, budget: Budget) -> InvariantResult {
    let co = g.complement();
    InvariantResult::from_outcome(
        Invariant::Alpha,
        solve_on_graph(&co, budget, None, |h| Clique { g: h.clone() }),
    )
}

pub fn rho(g: &Graph, budget: Budget) -> InvariantResult {
    rho_seeded(g, budget, None)
}

/// ρ with a known cluster set as the starting incumbent.
pub fn rho_seeded(g: &Graph, budget: Budget, seed: Option<&VertexSet>) -> InvariantResult {
    InvariantResult::from_outcome(
        Invariant::Rho,
        solve_on_graph(g, budget, seed, |h| Cluster { g: h.clone() }),
    )
}

/// Plain branch and bound: the "at least two components" goal is not
/// hereditary, so suffix bounds from the ρ search do not apply here.
pub fn eta(g: &Graph, budget: Budget) -> InvariantResult {
    let order = degree_order(g);
    let h = g.permuted(&order);
    let n = h.n();
    let mut search = EtaSearch {
        cluster: Cluster { g: h },
        meter: Meter::new(budget),
        best: Vec::new(),
    };
    let mut cand = FixedBitSet::with_capacity(n);
    cand.insert_range(..);
    let mut chosen_bits = FixedBitSet::with_capacity(n);
    search.expand(&mut Vec::new(), &mut chosen_bits, 0, cand);
    let mut best = search.best;
    if best.is_empty() && n > 0 {
        best.push(0);
    }
    InvariantResult {
        which: Invariant::Eta,
        value: best.len(),
        witness: best.into_iter().map(|p| order[p]).collect(),
        status: if search.meter.exhausted {
            Status::LowerBound
        } else {
            Status::Exact
        },
        nodes_explored: search.meter.nodes,
        elapsed: search.meter.elapsed(),
    }
}

struct EtaSearch {
    cluster: Cluster,
    meter: Meter,
    best: Vec<usize>,
}

impl EtaSearch {
    fn expand(&mut self, chosen: &mut Vec<usize>, bits: &mut FixedBitSet, comps: usize, mut cand: FixedBitSet) {
        if comps >= 2 && chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        let mut remaining = cand.count_ones(..);
        while let Some(v) = cand.minimum() {
            if chosen.len() + remaining <= self.best.len() || !self.meter.tick() {
                return;
            }
            cand.set(v, false);
            remaining -= 1;
            let isolated = self.cluster.g.neighbor_set(v).is_disjoint(bits);
            chosen.push(v);
            bits.insert(v);
            let mut next = cand.clone();
            crate::search::Property::restrict(&self.cluster, bits, v, &mut next);
            self.expand(chosen, bits, comps + usize::from(isolated), next);
            bits.set(v, false);
            chosen.pop();
        }
    }
}

pub fn compute(which: Invariant, g: &Graph, budget: Budget) -> InvariantResult {
    match which {
        Invariant::Omega => omega(g, budget),
        Invariant::Alpha => alpha(g, budget),
        Invariant::Eta => eta(g, budget),
        Invariant::Rho => rho(g, budget),
    }
}

/// `G[s]` is a disjoint union of cliques: the neighbors of each member
/// inside `s` are pairwise adjacent.
pub fn is_cluster_set(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|a| {
        let inside: Vec<usize> = s.iter().filter(|&b| g.has_edge(a, b)).collect();
        g.is_clique(&inside)
    })
}

/// Number of connected components of `G[s]`.
pub fn component_count(g: &Graph, s: &VertexSet) -> usize {
    g.induced_subgraph(s)
        .map(|h| h.connected_components().len())
        .unwrap_or(0)
}
