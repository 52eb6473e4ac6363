//! Brute-force oracles shared by the integration tests. They only use the
//! graph's adjacency and enumerate everything, so they share no code with
//! the searches under test.

#![allow(dead_code, clippy::needless_range_loop)]

use gp_core::constructions as c;
use gp_core::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

pub fn adjacency_masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 32);
    (0..g.n())
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect()
}

/// All-pairs distances by Floyd–Warshall; `INF` for unreachable pairs.
pub fn floyd(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in g.neighbors(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Distances from boolean powers of `A + I`: d(u,v) is the least `k` with
/// `(A + I)^k[u][v] = 1`.
pub fn matrix_power_distances(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let a: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u == v || g.has_edge(u, v)).collect())
        .collect();
    let mut d = vec![vec![INF; n]; n];
    let mut power: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u == v).collect()).collect();
    for k in 0..n as u32 {
        for u in 0..n {
            for v in 0..n {
                if power[u][v] && d[u][v] == INF {
                    d[u][v] = k;
                }
            }
        }
        power = (0..n)
            .map(|u| (0..n).map(|v| (0..n).any(|w| power[u][w] && a[w][v])).collect())
            .collect();
    }
    d
}

/// `{a, b, c}` has one member on a geodesic between the other two, all
/// distances finite.
pub fn collinear(d: &[Vec<u32>], a: usize, b: usize, c: usize) -> bool {
    let between = |x: usize, m: usize, y: usize| {
        d[x][m] != INF && d[m][y] != INF && d[x][y] != INF && d[x][y] == d[x][m] + d[m][y]
    };
    between(a, b, c) || between(b, a, c) || between(a, c, b)
}

pub fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Subset test straight from the definition.
pub fn is_gp_mask(d: &[Vec<u32>], mask: u32) -> bool {
    let s: Vec<usize> = members(mask).collect();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                if collinear(d, s[i], s[j], s[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// For every subset, whether it is in general position. Built by adding the
/// top vertex to an already-valid subset and checking only the new triples.
pub fn gp_table(g: &Graph) -> Vec<bool> {
    let n = g.n();
    assert!(n <= 20);
    let d = floyd(g);
    // bad[a][c] = vertices b with {a, b, c} collinear
    let mut bad = vec![vec![0u32; n]; n];
    for a in 0..n {
        for c in 0..n {
            for b in 0..n {
                if a != b && b != c && a != c && collinear(&d, a, b, c) {
                    bad[a][c] |= 1 << b;
                }
            }
        }
    }
    let mut good = vec![false; 1 << n];
    good[0] = true;
    for mask in 1u32..(1 << n) {
        let top = 31 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        good[mask as usize] = good[rest as usize] && members(rest).all(|a| bad[a][top] & rest == 0);
    }
    good
}

/// gp(G) by full enumeration of the 2^n subsets.
pub fn oracle_gp(g: &Graph) -> usize {
    gp_table(g)
        .iter()
        .enumerate()
        .filter(|(_, ok)| **ok)
        .map(|(m, _)| (m as u32).count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn is_clique_mask(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| mask & !(1 << v) & !adj[v] == 0)
}

pub fn is_independent_mask(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| adj[v] & mask == 0)
}

/// `G[mask]` has no induced P_3.
pub fn is_cluster_mask(adj: &[u32], mask: u32) -> bool {
    members(mask).all(|v| is_clique_mask(adj, adj[v] & mask))
}

pub fn components_mask(adj: &[u32], mask: u32) -> usize {
    let mut left = mask;
    let mut count = 0;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            let grown = members(comp).fold(comp, |m, v| m | (adj[v] & mask));
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        count += 1;
    }
    count
}

fn max_over(g: &Graph, ok: impl Fn(&[u32], u32) -> bool) -> usize {
    let adj = adjacency_masks(g);
    (0u32..(1 << g.n()))
        .filter(|&m| ok(&adj, m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn oracle_omega(g: &Graph) -> usize {
    max_over(g, is_clique_mask)
}

pub fn oracle_alpha(g: &Graph) -> usize {
    max_over(g, is_independent_mask)
}

pub fn oracle_rho(g: &Graph) -> usize {
    max_over(g, is_cluster_mask)
}

/// Largest induced complete multipartite subgraph of the complement with at
/// least two parts; 1 when only single vertices qualify.
pub fn oracle_eta(g: &Graph) -> usize {
    let best = max_over(g, |adj, m| is_cluster_mask(adj, m) && components_mask(adj, m) >= 2);
    if best == 0 && g.n() > 0 {
        1
    } else {
        best
    }
}

pub fn oracle_diameter(g: &Graph) -> u32 {
    floyd(g).iter().flatten().copied().max().unwrap_or(0)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph on `n` vertices, resampled until connected.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.25..0.85);
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

/// Named constructions with at most `max_n` vertices.
pub fn named_graphs(max_n: usize) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 1..=max_n {
        out.push((format!("K{n}"), c::complete(n).unwrap()));
        out.push((format!("P{n}"), c::path(n).unwrap()));
        out.push((format!("E{n}"), c::edgeless(n)));
        if n >= 3 {
            out.push((format!("C{n}"), c::cycle(n).unwrap()));
        }
    }
    let k = |n| c::complete(n).unwrap();
    let p = |n| c::path(n).unwrap();
    let e = c::edgeless;
    let extra = [
        ("kneser(4,2)", c::kneser(4, 2).unwrap()),
        ("kneser(5,2)", c::kneser(5, 2).unwrap()),
        ("kneser(6,3)", c::kneser(6, 3).unwrap()),
        ("line(K4)", c::line_graph(&k(4))),
        ("line(K5)", c::line_graph(&k(5))),
        ("line(P5)", c::line_graph(&p(5))),
        ("cartesian(K2,K2)", c::cartesian_product(&k(2), &k(2))),
        ("cartesian(K2,K3)", c::cartesian_product(&k(2), &k(3))),
        ("cartesian(K2,P3)", c::cartesian_product(&k(2), &p(3))),
        ("cartesian(K3,K3)", c::cartesian_product(&k(3), &k(3))),
        ("cartesian(P2,C4)", c::cartesian_product(&p(2), &c::cycle(4).unwrap())),
        ("hamming(2,2,2)", c::hamming(&[2, 2, 2]).unwrap()),
        ("join(E3,E3)", c::join(&e(3), &e(3))),
        ("join(P3,K1)", c::join(&p(3), &k(1))),
        ("join(P4,E2)", c::join(&p(4), &e(2))),
        ("join(C4,K2)", c::join(&c::cycle(4).unwrap(), &k(2))),
        ("corona(K2,K2)", c::corona(&k(2), &k(2)).unwrap()),
        ("corona(P3,K1)", c::corona(&p(3), &k(1)).unwrap()),
        ("corona(K2,P3)", c::corona(&k(2), &p(3)).unwrap()),
        ("corona(K3,K1)", c::corona(&k(3), &k(1)).unwrap()),
        ("union(K3,P3)", c::disjoint_union(&k(3), &p(3))),
        ("complement(C6)", c::cycle(6).unwrap().complement()),
        ("complement(C7)", c::cycle(7).unwrap().complement()),
    ];
    out.extend(
        extra
            .into_iter()
            .filter(|(_, g)| g.n() <= max_n)
            .map(|(s, g)| (s.to_string(), g)),
    );
    out
}
