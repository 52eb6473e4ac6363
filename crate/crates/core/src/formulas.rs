//! Closed-form gp values and explicit witness sets for the graph families
//! covered by the toolkit. Nothing here calls a solver; the verification
//! harness compares these predictions against search results.
//!
//! Witnesses use the canonical vertex order of the matching constructor in
//! [`crate::constructions`].

use std::collections::BTreeMap;

use num_integer::binomial;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::constructions::{corona_block_start, k_subset_index, k_subsets, line_complete_vertex, KSubset};
use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexSet};

/// An exact value, or an interval when only bounds are known. An interval
/// without an upper end is unbounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicted {
    Exact(u64),
    Interval { lower: u64, upper: Option<u64> },
}

impl Predicted {
    pub fn lower(self) -> u64 {
        match self {
            Predicted::Exact(v) => v,
            Predicted::Interval { lower, .. } => lower,
        }
    }

    pub fn contains(self, v: u64) -> bool {
        match self {
            Predicted::Exact(x) => x == v,
            Predicted::Interval { lower, upper } => v >= lower && upper.is_none_or(|u| v <= u),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Predicted::Exact(_))
    }
}

impl std::fmt::Display for Predicted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Predicted::Exact(v) => write!(f, "{v}"),
            Predicted::Interval { lower, upper: Some(u) } => write!(f, "[{lower};{u}]"),
            Predicted::Interval { lower, upper: None } => write!(f, "[{lower};inf]"),
        }
    }
}

impl Serialize for Predicted {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Predicted::Exact(v) => s.serialize_u64(*v),
            Predicted::Interval { lower, upper } => (lower, upper).serialize(s),
        }
    }
}

/// The right-hand side of one formula at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub theorem: String,
    pub params: BTreeMap<String, Value>,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub value_or_interval: Option<Predicted>,
    pub witness: Option<VertexSet>,
    /// Second closed form of the same quantity, where two are known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternate_form: Option<u64>,
}

impl Prediction {
    fn new(theorem: &str, params: &[(&str, Value)]) -> Self {
        Prediction {
            theorem: theorem.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            applicable: true,
            reason: None,
            value_or_interval: None,
            witness: None,
            alternate_form: None,
        }
    }

    fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.applicable = false;
        self.reason = Some(reason.into());
        self
    }

    fn exact(mut self, v: u64) -> Self {
        self.value_or_interval = Some(Predicted::Exact(v));
        self
    }

    fn interval(mut self, lower: u64, upper: Option<u64>) -> Self {
        self.value_or_interval = Some(Predicted::Interval { lower, upper });
        self
    }

    fn witness(mut self, w: VertexSet) -> Self {
        self.witness = Some(w);
        self
    }
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        0
    } else {
        binomial(n, k)
    }
}

/// Kneser vertices `{1, j}` for `j` in `2..=n`, as indices of `kneser(n, 2)`.
fn star_k2(n: usize) -> VertexSet {
    // {1,j} is the (j-2)-th subset in lexicographic order
    (0..n - 1).collect()
}

/// All k-subsets containing 1: the first C(n-1, k-1) Kneser vertices.
pub fn kneser_star(n: usize, k: usize) -> VertexSet {
    (0..choose(n as u64 - 1, k as u64 - 1) as usize).collect()
}

/// gp(K(n,2)): 6 for 4 ≤ n ≤ 6 and n − 1 for n ≥ 7.
pub fn gp_kneser2(n: usize) -> Prediction {
    let p = Prediction::new("thm2.2", &[("n", n.into())]);
    if n < 4 {
        return p.not_applicable("needs n >= 4");
    }
    if n <= 6 {
        // the six 2-subsets of {1,2,3,4}: three pairwise independent edges
        let w = k_subsets(4, 2).iter().map(|s| k_subset_index(n as u32, s)).collect();
        p.exact(6).witness(w)
    } else {
        p.exact(n as u64 - 1).witness(star_k2(n))
    }
}

/// gp(K(n,3)): 20 for n = 6 and C(n − 1, 2) for n ≥ 7.
pub fn gp_kneser3(n: usize) -> Prediction {
    let p = Prediction::new("thm2.4", &[("n", n.into())]);
    match n {
        0..=5 => p.not_applicable("needs n >= 6"),
        // K(6,3) = 10 K_2: every vertex
        6 => p.exact(20).witness(VertexSet::all(20)),
        _ => p.exact(choose(n as u64 - 1, 2)).witness(kneser_star(n, 3)),
    }
}

/// Sufficient condition for gp(K(n,k)) = C(n − 1, k − 1): n ≥ 3k − 1 and
/// `k^t C(n−t, k−t) + t ≤ C(n−1, k−1)` for every `2 ≤ t ≤ k`.
pub fn kneser_condition(n: usize, k: usize) -> Prediction {
    let p = Prediction::new("thm2.3", &[("n", n.into()), ("k", k.into())]);
    if k < 2 {
        return p.not_applicable("needs k >= 2");
    }
    if n < 3 * k - 1 {
        return p.not_applicable(format!("needs n >= 3k-1 = {}", 3 * k - 1));
    }
    let target = choose(n as u64 - 1, k as u64 - 1) as u128;
    for t in 2..=k {
        let lhs = (k as u128)
            .checked_pow(t as u32)
            .and_then(|kt| kt.checked_mul(choose((n - t) as u64, (k - t) as u64) as u128))
            .and_then(|x| x.checked_add(t as u128));
        match lhs {
            Some(l) if l <= target => {}
            Some(l) => {
                return p.not_applicable(format!("fails at t={t}: {l} > {target}"));
            }
            None => return p.not_applicable(format!("fails at t={t}: overflow")),
        }
    }
    p.exact(target as u64).witness(kneser_star(n, k))
}

/// Erdős–Ko–Rado: α(K(n,k)) ≤ C(n − 1, k − 1) for n ≥ 2k, attained by the
/// star of subsets containing 1.
pub fn ekr_bound(n: usize, k: usize) -> Prediction {
    let p = Prediction::new("ekr", &[("n", n.into()), ("k", k.into())]);
    if k == 0 || n < 2 * k {
        return p.not_applicable("needs n >= 2k, k >= 1");
    }
    p.exact(choose(n as u64 - 1, k as u64 - 1)).witness(kneser_star(n, k))
}

/// gp(G □ H) ≥ gp(G) + gp(H) − 2 for connected factors; the order of the
/// product caps it from above.
pub fn gp_cartesian_lower(gp_g: usize, gp_h: usize, n_g: usize, n_h: usize) -> Prediction {
    let p = Prediction::new(
        "thm3.1",
        &[
            ("gp_g", gp_g.into()),
            ("gp_h", gp_h.into()),
            ("n_g", n_g.into()),
            ("n_h", n_h.into()),
        ],
    );
    p.interval((gp_g + gp_h).saturating_sub(2) as u64, Some((n_g * n_h) as u64))
}

/// The cross `((S_G × {h}) ∪ ({g} × S_H)) \ {(g, h)}` in product coordinates
/// `(x, y) ↦ x * n(H) + y`.
pub fn cartesian_witness(
    g: &Graph,
    s_g: &VertexSet,
    h: &Graph,
    s_h: &VertexSet,
    anchor_g: usize,
    anchor_h: usize,
) -> Result<VertexSet> {
    s_g.check_range(g.n())?;
    s_h.check_range(h.n())?;
    if !s_g.contains(anchor_g) {
        return Err(invalid(format!(
            "anchor {anchor_g} is not in the set for the first factor"
        )));
    }
    if !s_h.contains(anchor_h) {
        return Err(invalid(format!(
            "anchor {anchor_h} is not in the set for the second factor"
        )));
    }
    let hn = h.n();
    let layer_g = s_g.iter().filter(|&x| x != anchor_g).map(|x| x * hn + anchor_h);
    let layer_h = s_h.iter().filter(|&y| y != anchor_h).map(|y| anchor_g * hn + y);
    Ok(layer_g.chain(layer_h).collect())
}

fn check_hamming(ns: &[usize]) -> std::result::Result<(), String> {
    if ns.len() < 2 {
        return Err("needs at least two factors".into());
    }
    if let Some(&m) = ns.iter().find(|&&m| m < 2) {
        return Err(format!("factor K_{m} is too small; every n_i must be >= 2"));
    }
    Ok(())
}

/// Union of the axis sets `X_i = {(0,..,j,..,0) : 1 ≤ j < n_i}` (0-based
/// coordinates) in `hamming(ns)`.
pub fn hamming_witness(ns: &[usize]) -> Result<VertexSet> {
    check_hamming(ns).map_err(invalid)?;
    let mut stride = vec![1usize; ns.len()];
    for i in (0..ns.len() - 1).rev() {
        stride[i] = stride[i + 1] * ns[i + 1];
    }
    Ok(ns
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| {
            let step = stride[i];
            (1..m).map(move |j| j * step)
        })
        .collect::<Vec<usize>>()
        .into())
}

/// gp(K_{n_1} □ ... □ K_{n_k}) ≥ Σ n_i − k, with equality for two factors.
pub fn hamming_lower(ns: &[usize]) -> Prediction {
    let p = Prediction::new("thm3.2", &[("ns", ns.into())]);
    if let Err(reason) = check_hamming(ns) {
        return p.not_applicable(reason);
    }
    let bound = (ns.iter().sum::<usize>() - ns.len()) as u64;
    let p = if ns.len() == 2 {
        p.exact(bound)
    } else {
        p.interval(bound, Some(ns.iter().product::<usize>() as u64))
    };
    p.witness(hamming_witness(ns).expect("checked"))
}

/// Factor invariants consumed by [`gp_join`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinInputs {
    pub omega_g: usize,
    pub omega_h: usize,
    pub eta_g: usize,
    pub eta_h: usize,
    pub rho_g: usize,
    pub rho_h: usize,
    pub both_complete: bool,
    pub n_g: usize,
    pub n_h: usize,
}

/// gp(G) = max{ω(G), η(G)} for diameter-2 graphs; ρ(G) is the second
/// form of the same value.
pub fn gp_diameter_two(omega: usize, eta: usize, rho: usize) -> Prediction {
    let p = Prediction::new(
        "thm4.1",
        &[("omega", omega.into()), ("eta", eta.into()), ("rho", rho.into())],
    );
    let mut p = p.exact(omega.max(eta) as u64);
    p.alternate_form = Some(rho as u64);
    p
}

/// gp(G + H): n(G) + n(H) when both factors are complete, otherwise
/// max{ω(G) + ω(H), ρ(G), ρ(H)}. The η form max{ω(G) + ω(H), η(G), η(H)}
/// goes to `alternate_form`; the two must agree.
pub fn gp_join(x: JoinInputs) -> Prediction {
    let p = Prediction::new(
        "prop4.2",
        &[
            ("omega_g", x.omega_g.into()),
            ("omega_h", x.omega_h.into()),
            ("eta_g", x.eta_g.into()),
            ("eta_h", x.eta_h.into()),
            ("rho_g", x.rho_g.into()),
            ("rho_h", x.rho_h.into()),
            ("both_complete", x.both_complete.into()),
            ("n_g", x.n_g.into()),
            ("n_h", x.n_h.into()),
        ],
    );
    if x.both_complete {
        let n = (x.n_g + x.n_h) as u64;
        return p.exact(n).witness(VertexSet::all(x.n_g + x.n_h));
    }
    let omega_sum = x.omega_g + x.omega_h;
    let rho_form = omega_sum.max(x.rho_g).max(x.rho_h) as u64;
    let eta_form = omega_sum.max(x.eta_g).max(x.eta_h) as u64;
    let mut p = p.exact(rho_form);
    p.alternate_form = Some(eta_form);
    p
}

/// gp(G ∘ H) = n(G) ρ(H) for n(G) ≥ 2.
pub fn gp_corona(n_g: usize, rho_h: usize) -> Prediction {
    let p = Prediction::new("thm4.3", &[("n_g", n_g.into()), ("rho_h", rho_h.into())]);
    if n_g < 2 {
        return p.not_applicable("needs n(G) >= 2");
    }
    p.exact((n_g * rho_h) as u64)
}

/// A ρ witness of `H` copied into every block of `corona(G, H)`.
pub fn corona_witness(n_g: usize, h: &Graph, rho_witness_h: &VertexSet) -> Result<VertexSet> {
    rho_witness_h.check_range(h.n())?;
    Ok((0..n_g)
        .flat_map(|i| {
            let base = corona_block_start(n_g, h.n(), i);
            rho_witness_h.iter().map(move |v| base + v)
        })
        .collect())
}

/// gp(L(K_n)): n when 3 divides n, else n − 1.
pub fn gp_line_complete(n: usize) -> Prediction {
    let p = Prediction::new("thm4.4", &[("n", n.into())]);
    if n < 3 {
        return p.not_applicable("needs n >= 3");
    }
    if n.is_multiple_of(3) {
        // the edges of the triangles {3i, 3i+1, 3i+2}
        let w = (0..n / 3)
            .flat_map(|i| {
                let b = 3 * i;
                [(b, b + 1), (b, b + 2), (b + 1, b + 2)]
            })
            .map(|(u, v)| line_complete_vertex(n, u, v))
            .collect();
        p.exact(n as u64).witness(w)
    } else {
        // every edge at vertex 0: a maximum clique
        let w = (1..n).map(|v| line_complete_vertex(n, 0, v)).collect();
        p.exact(n as u64 - 1).witness(w)
    }
}

/// Vertex of `kneser(n, subset.len())` labeled by `subset`.
pub fn kneser_vertex(n: usize, subset: &[u32]) -> Result<usize> {
    let s = KSubset::new(subset.to_vec())?;
    if s.elements().last().is_some_and(|&e| e as usize > n) {
        return Err(invalid(format!("{s} is not a subset of [{n}]")));
    }
    Ok(k_subset_index(n as u32, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cartesian_product, complete, corona, hamming, kneser, line_graph, path};
    use crate::distance::DistanceMatrix;
    use crate::gp::is_general_position;

    fn val(p: &Prediction) -> u64 {
        match p.value_or_interval {
            Some(Predicted::Exact(v)) => v,
            other => panic!("not exact: {other:?}"),
        }
    }

    fn assert_gp(g: &Graph, w: &VertexSet) {
        assert!(is_general_position(&DistanceMatrix::new(g), w).unwrap(), "{w:?}");
    }

    #[test]
    fn kneser2_values() {
        assert_eq!(val(&gp_kneser2(5)), 6);
        assert_eq!(val(&gp_kneser2(7)), 6);
        assert_eq!(val(&gp_kneser2(9)), 8);
        assert!(!gp_kneser2(3).applicable);
        for n in 4..=10 {
            let p = gp_kneser2(n);
            let w = p.witness.as_ref().unwrap();
            assert_eq!(w.len() as u64, val(&p));
            assert_gp(&kneser(n, 2).unwrap(), w);
        }
        let labels = kneser(8, 2).unwrap();
        let w = gp_kneser2(8).witness.unwrap();
        assert!(w.iter().all(|v| labels.label(v).unwrap().starts_with("{1,")));
    }

    #[test]
    fn kneser3_values() {
        assert_eq!(val(&gp_kneser3(6)), 20);
        assert_eq!(val(&gp_kneser3(7)), 15);
        assert_eq!(val(&gp_kneser3(8)), 21);
        assert!(!gp_kneser3(5).applicable);
        for n in 6..=9 {
            let p = gp_kneser3(n);
            assert_gp(&kneser(n, 3).unwrap(), p.witness.as_ref().unwrap());
        }
    }

    #[test]
    fn kneser_condition_points() {
        let p = kneser_condition(20, 3);
        assert!(p.applicable);
        assert_eq!(val(&p), 171);
        let p = kneser_condition(9, 3);
        assert!(!p.applicable);
        assert_eq!(p.reason.as_deref(), Some("fails at t=2: 65 > 28"));
        let p = kneser_condition(7, 2);
        assert!(p.applicable);
        assert_eq!(val(&p), 6);
        assert!(!kneser_condition(4, 2).applicable);
        // the boundary of the k = 3 family: n = 19 fails, n = 20 holds
        assert!(!kneser_condition(19, 3).applicable);
    }

    #[test]
    fn ekr_values() {
        assert_eq!(val(&ekr_bound(5, 2)), 4);
        assert_eq!(val(&ekr_bound(4, 2)), 3);
        assert_eq!(val(&ekr_bound(8, 3)), 21);
        assert!(!ekr_bound(5, 3).applicable);
        let g = kneser(8, 3).unwrap();
        assert!(g.is_independent(ekr_bound(8, 3).witness.unwrap().as_slice()));
    }

    #[test]
    fn cartesian_bounds() {
        assert_eq!(gp_cartesian_lower(2, 2, 3, 3).value_or_interval.unwrap().lower(), 2);
        assert_eq!(gp_cartesian_lower(3, 3, 3, 3).value_or_interval.unwrap().lower(), 4);
        assert_eq!(gp_cartesian_lower(6, 6, 10, 10).value_or_interval.unwrap().lower(), 10);
    }

    #[test]
    fn cartesian_witnesses() {
        let k3 = complete(3).unwrap();
        let all = VertexSet::all(3);
        let w = cartesian_witness(&k3, &all, &k3, &all, 0, 0).unwrap();
        assert_eq!(w.len(), 4);
        assert_gp(&cartesian_product(&k3, &k3), &w);

        let p3 = path(3).unwrap();
        let ends: VertexSet = vec![0, 2].into();
        let w = cartesian_witness(&p3, &ends, &p3, &ends, 0, 0).unwrap();
        assert_eq!(w.len(), 2);
        assert_gp(&cartesian_product(&p3, &p3), &w);

        let (k4, k2) = (complete(4).unwrap(), complete(2).unwrap());
        let w = cartesian_witness(&k4, &VertexSet::all(4), &k2, &VertexSet::all(2), 1, 1).unwrap();
        assert_eq!(w.len(), 4);
        assert_gp(&cartesian_product(&k4, &k2), &w);

        assert!(cartesian_witness(&p3, &ends, &p3, &ends, 1, 0).is_err());
    }

    #[test]
    fn hamming_values() {
        assert_eq!(val(&hamming_lower(&[3, 4])), 5);
        assert_eq!(val(&hamming_lower(&[2, 2])), 2);
        let p = hamming_lower(&[2, 2, 2]);
        assert_eq!(
            p.value_or_interval,
            Some(Predicted::Interval {
                lower: 3,
                upper: Some(8)
            })
        );
        assert!(!hamming_lower(&[1, 3]).applicable);
        assert!(!hamming_lower(&[4]).applicable);
        for ns in [vec![2, 2], vec![3, 4], vec![2, 3, 4], vec![3, 3, 3], vec![2, 2, 2, 2]] {
            let w = hamming_witness(&ns).unwrap();
            assert_eq!(w.len(), ns.iter().sum::<usize>() - ns.len());
            assert_gp(&hamming(&ns).unwrap(), &w);
        }
    }

    #[test]
    fn join_forms() {
        let both = JoinInputs {
            omega_g: 2,
            omega_h: 2,
            eta_g: 1,
            eta_h: 1,
            rho_g: 2,
            rho_h: 2,
            both_complete: true,
            n_g: 2,
            n_h: 2,
        };
        assert_eq!(val(&gp_join(both)), 4);
        let e3 = JoinInputs {
            omega_g: 1,
            omega_h: 1,
            eta_g: 3,
            eta_h: 3,
            rho_g: 3,
            rho_h: 3,
            both_complete: false,
            n_g: 3,
            n_h: 3,
        };
        let p = gp_join(e3);
        assert_eq!(val(&p), 3);
        assert_eq!(p.alternate_form, Some(3));
        let fan = JoinInputs {
            omega_g: 2,
            omega_h: 1,
            eta_g: 2,
            eta_h: 1,
            rho_g: 2,
            rho_h: 1,
            both_complete: false,
            n_g: 3,
            n_h: 1,
        };
        assert_eq!(val(&gp_join(fan)), 3);
    }

    #[test]
    fn corona_values_and_witness() {
        assert_eq!(val(&gp_corona(2, 1)), 2);
        assert_eq!(val(&gp_corona(3, 2)), 6);
        assert_eq!(val(&gp_corona(2, 2)), 4);
        assert!(!gp_corona(1, 3).applicable);
        let (g, h) = (path(3).unwrap(), complete(2).unwrap());
        let w = corona_witness(3, &h, &VertexSet::all(2)).unwrap();
        assert_eq!(w.as_slice(), &[3, 4, 5, 6, 7, 8]);
        assert_gp(&corona(&g, &h).unwrap(), &w);
    }

    #[test]
    fn line_complete_values() {
        assert_eq!(val(&gp_line_complete(3)), 3);
        assert_eq!(val(&gp_line_complete(4)), 3);
        assert_eq!(val(&gp_line_complete(6)), 6);
        assert!(!gp_line_complete(2).applicable);
        for n in 3..=9 {
            let p = gp_line_complete(n);
            let w = p.witness.as_ref().unwrap();
            assert_eq!(w.len() as u64, val(&p));
            assert_gp(&line_graph(&complete(n).unwrap()), w);
        }
    }

    #[test]
    fn kneser_vertex_lookup() {
        let g = kneser(6, 2).unwrap();
        let v = kneser_vertex(6, &[3, 4]).unwrap();
        assert_eq!(g.label(v), Some("{3,4}"));
        assert!(kneser_vertex(4, &[2, 5]).is_err());
    }

    #[test]
    fn prediction_json() {
        let v = serde_json::to_value(gp_kneser2(7)).unwrap();
        assert_eq!(v["theorem"], "thm2.2");
        assert_eq!(v["params"]["n"], 7);
        assert_eq!(v["applicable"], true);
        assert_eq!(v["value_or_interval"], 6);
        assert_eq!(v["witness"].as_array().unwrap().len(), 6);
        let v = serde_json::to_value(hamming_lower(&[2, 2, 2])).unwrap();
        assert_eq!(v["value_or_interval"], serde_json::json!([3, 8]));
    }
}
