//! General position sets: two independent membership checks and the exact
//! gp-number solvers.
//!
//! `S` is in general position when no member lies on a geodesic between two
//! other members: for pairwise distinct `u, v, w ∈ S` with all three
//! distances finite, `d(u,v) ≠ d(u,w) + d(w,v)`. Triples that span two
//! components never violate, so general position sets combine freely across
//! components and gp(3K_2) = 6.

use std::time::Duration;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::distance::{Distance, DistanceMatrix};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::invariants::{self, InvariantResult};
use crate::search::{solve_on_graph, Budget, Outcome, Property, Status};

/// Which solver produced a [`GpResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Diam2,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Diam2 => "diam2",
        }
    }
}

/// max{ω, η} recomputed next to ρ on diameter-2 inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub omega: usize,
    pub eta: usize,
    pub status: Status,
    /// `max{omega, eta} == value`; only meaningful when `status` is exact.
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpResult {
    pub value: usize,
    pub witness: VertexSet,
    pub status: Status,
    #[serde(rename = "nodes")]
    pub nodes_explored: u64,
    #[serde(rename = "ms", serialize_with = "ser_ms")]
    pub elapsed: Duration,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

fn ser_ms<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl GpResult {
    fn from_outcome(out: Outcome, method: Method) -> Self {
        GpResult {
            value: out.best.len(),
            witness: out.best,
            status: out.status,
            nodes_explored: out.nodes,
            elapsed: out.elapsed,
            method,
            cross_check: None,
        }
    }
}

/// Definition check over all unordered triples, trying each member in the
/// middle role.
pub fn is_general_position(dm: &DistanceMatrix, s: &VertexSet) -> Result<bool> {
    s.check_range(dm.n())?;
    let v = s.as_slice();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                if dm.collinear(v[i], v[j], v[k]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// First collinear triple `(u, w, v)` with `w` between `u` and `v`, if any.
pub fn find_between_triple(dm: &DistanceMatrix, s: &VertexSet) -> Option<(usize, usize, usize)> {
    let v = s.as_slice();
    for &a in v {
        for &b in v {
            for &c in v {
                if a < c && b != a && b != c && dm.is_between(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Components of `G[S]`, each a clique, with the constant distances between
/// them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliquePartition {
    pub parts: Vec<VertexSet>,
    pub part_distances: Vec<Vec<u32>>,
}

/// Why a set fails the clique-partition characterization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    /// A component of `G[S]` is not complete: `u`, `v` in `part` are not adjacent.
    NotClique { part: VertexSet, u: usize, v: usize },
    /// Parts `i`, `j` are at distance `d1` via `(a, b)` but `d2` via `(c, d)`.
    NotDistanceConstant {
        parts: (usize, usize),
        first: (usize, usize, u32),
        second: (usize, usize, u32),
    },
    /// `d(S_i, S_k) = d(S_i, S_j) + d(S_j, S_k)`.
    Transitive {
        i: usize,
        j: usize,
        k: usize,
        ij: u32,
        jk: u32,
        ik: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "result")]
pub enum Characterization {
    Valid(CliquePartition),
    Invalid(Violation),
}

impl Characterization {
    pub fn is_valid(&self) -> bool {
        matches!(self, Characterization::Valid(_))
    }
}

/// Structural test on a connected graph: the components of `G[S]` are
/// cliques forming a distance-constant, in-transitive partition of `S`.
pub fn characterization_check(g: &Graph, dm: &DistanceMatrix, s: &VertexSet) -> Result<Characterization> {
    s.check_range(g.n())?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let sub = g.induced_subgraph(s)?;
    let members = s.as_slice();
    let parts: Vec<VertexSet> = sub
        .connected_components()
        .into_iter()
        .map(|c| c.iter().map(|i| members[i]).collect())
        .collect();

    for part in &parts {
        let p = part.as_slice();
        for (i, &u) in p.iter().enumerate() {
            if let Some(&v) = p[i + 1..].iter().find(|&&v| !g.has_edge(u, v)) {
                return Ok(Characterization::Invalid(Violation::NotClique {
                    part: part.clone(),
                    u,
                    v,
                }));
            }
        }
    }

    let finite = |d: Distance| d.finite().expect("connected graph");
    let k = parts.len();
    let mut pd = vec![vec![0u32; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let a = parts[i].as_slice()[0];
            let b = parts[j].as_slice()[0];
            let d = finite(dm.get(a, b));
            for c in parts[i].iter() {
                for e in parts[j].iter() {
                    let d2 = finite(dm.get(c, e));
                    if d2 != d {
                        return Ok(Characterization::Invalid(Violation::NotDistanceConstant {
                            parts: (i, j),
                            first: (a, b, d),
                            second: (c, e, d2),
                        }));
                    }
                }
            }
            pd[i][j] = d;
            pd[j][i] = d;
        }
    }

    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if i != j && j != l && i != l && pd[i][l] == pd[i][j] + pd[j][l] {
                    return Ok(Characterization::Invalid(Violation::Transitive {
                        i,
                        j,
                        k: l,
                        ij: pd[i][j],
                        jk: pd[j][l],
                        ik: pd[i][l],
                    }));
                }
            }
        }
    }

    Ok(Characterization::Valid(CliquePartition {
        parts,
        part_distances: pd,
    }))
}

/// Above this order the per-pair conflict table is not precomputed.
const CONFLICT_TABLE_MAX_N: usize = 400;

/// General position as a search property. For a chosen pair `(a, b)`,
/// `conflicts[a*n + b]` holds every `x` making `{a, b, x}` collinear.
struct GeneralPosition {
    dm: DistanceMatrix,
    conflicts: Option<Vec<FixedBitSet>>,
}

impl GeneralPosition {
    fn new(g: &Graph) -> Self {
        let dm = DistanceMatrix::new(g);
        let n = g.n();
        let conflicts = (n <= CONFLICT_TABLE_MAX_N).then(|| {
            let mut t = vec![FixedBitSet::with_capacity(n); n * n];
            for a in 0..n {
                for b in a + 1..n {
                    let mut row = FixedBitSet::with_capacity(n);
                    for x in 0..n {
                        if x != a && x != b && dm.collinear(a, b, x) {
                            row.insert(x);
                        }
                    }
                    t[b * n + a] = row.clone();
                    t[a * n + b] = row;
                }
            }
            t
        });
        GeneralPosition { dm, conflicts }
    }
}

impl Property for GeneralPosition {
    fn n(&self) -> usize {
        self.dm.n()
    }

    fn restrict(&self, chosen: &FixedBitSet, added: usize, cand: &mut FixedBitSet) {
        let n = self.dm.n();
        for a in chosen.ones().filter(|&a| a != added) {
            match &self.conflicts {
                Some(t) => cand.difference_with(&t[added * n + a]),
                None => {
                    let drop: Vec<usize> = cand.ones().filter(|&x| self.dm.collinear(added, a, x)).collect();
                    for x in drop {
                        cand.set(x, false);
                    }
                }
            }
        }
    }
}

/// Greedy general position set in descending-degree order.
fn greedy_seed(g: &Graph, dm: &DistanceMatrix) -> VertexSet {
    let mut s: Vec<usize> = Vec::new();
    for v in crate::search::degree_order(g) {
        let ok = (0..s.len()).all(|i| (i + 1..s.len()).all(|j| !dm.collinear(s[i], s[j], v)));
        if ok {
            s.push(v);
        }
    }
    s.into_iter().collect()
}

/// Exact maximum general position set by branch and bound. Works on
/// disconnected graphs through the definition alone.
pub fn gp_exact(g: &Graph, budget: Budget) -> GpResult {
    gp_exact_seeded(g, budget, None).expect("no seed to validate")
}

/// [`gp_exact`] starting from a known general position set, e.g. a witness
/// supplied by a formula. Fails if the seed is not in general position.
pub fn gp_exact_seeded(g: &Graph, budget: Budget, seed: Option<&VertexSet>) -> Result<GpResult> {
    let dm = DistanceMatrix::new(g);
    let mut start = greedy_seed(g, &dm);
    if let Some(s) = seed {
        if !is_general_position(&dm, s)? {
            return Err(crate::error::invalid("seed is not a general position set"));
        }
        if s.len() > start.len() {
            start = s.clone();
        }
    }
    let out = solve_on_graph(g, budget, Some(&start), GeneralPosition::new);
    Ok(GpResult::from_outcome(out, Method::Exact))
}

/// Above this order [`gp_diam2`] skips the max{ω, η} cross-check.
pub const CROSS_CHECK_MAX_N: usize = 64;

/// gp on a diameter-2 graph as ρ(G), with the ρ witness.
///
/// For graphs up to [`CROSS_CHECK_MAX_N`] vertices, max{ω(G), η(G)} is also
/// computed and recorded in `cross_check`.
pub fn gp_diam2(g: &Graph, budget: Budget) -> Result<GpResult> {
    gp_diam2_with(g, budget, g.n() <= CROSS_CHECK_MAX_N, None)
}

pub fn gp_diam2_with(g: &Graph, budget: Budget, cross_check: bool, seed: Option<&VertexSet>) -> Result<GpResult> {
    let diam = crate::distance::diameter(g);
    if diam != Distance::Finite(2) {
        return Err(Error::DiameterNotTwo(diam));
    }
    if let Some(s) = seed {
        s.check_range(g.n())?;
        if !invariants::is_cluster_set(g, s) {
            return Err(crate::error::invalid(
                "seed does not induce a disjoint union of cliques",
            ));
        }
    }
    let rho = invariants::rho_seeded(g, budget, seed);
    let mut res = GpResult {
        value: rho.value,
        witness: rho.witness,
        status: rho.status,
        nodes_explored: rho.nodes_explored,
        elapsed: rho.elapsed,
        method: Method::Diam2,
        cross_check: None,
    };
    if cross_check {
        let om: InvariantResult = invariants::omega(g, budget);
        let et = invariants::eta(g, budget);
        let status = om.status.and(et.status);
        res.elapsed += om.elapsed + et.elapsed;
        res.cross_check = Some(CrossCheck {
            omega: om.value,
            eta: et.value,
            status,
            agrees: om.value.max(et.value) == res.value,
        });
    }
    Ok(res)
}

/// Diameter 2 goes through ρ, everything else through [`gp_exact`].
pub fn gp_auto(g: &Graph, budget: Budget) -> GpResult {
    gp_auto_seeded(g, budget, None).expect("no seed to validate")
}

/// [`gp_auto`] with a general position set as the starting incumbent.
pub fn gp_auto_seeded(g: &Graph, budget: Budget, seed: Option<&VertexSet>) -> Result<GpResult> {
    if crate::distance::diameter(g) == Distance::Finite(2) {
        // in diameter 2 a general position set is a cluster set
        gp_diam2_with(g, budget, g.n() <= CROSS_CHECK_MAX_N, seed)
    } else {
        gp_exact_seeded(g, budget, seed)
    }
}
