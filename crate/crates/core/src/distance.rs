//! Unweighted shortest-path distances with an explicit unreachable value.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::graph::Graph;

/// A graph distance. `Infinite` marks pairs in different components.
///
/// Addition absorbs `Infinite`, and the derived order places `Infinite`
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u32(*d),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// All-pairs distance matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Distance>,
}

impl DistanceMatrix {
    /// One breadth-first search per source.
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut d = vec![Distance::Infinite; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for src in 0..n {
            let row = &mut d[src * n..(src + 1) * n];
            row[src] = Distance::Finite(0);
            queue.clear();
            queue.push_back(src);
            while let Some(u) = queue.pop_front() {
                let next = match row[u] {
                    Distance::Finite(du) => Distance::Finite(du + 1),
                    Distance::Infinite => unreachable!(),
                };
                for w in g.neighbors(u) {
                    if row[w] == Distance::Infinite {
                        row[w] = next;
                        queue.push_back(w);
                    }
                }
            }
        }
        DistanceMatrix { n, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Distance {
        self.d[u * self.n + v]
    }

    /// `w` lies on a geodesic between `u` and `v`: all three distances are
    /// finite and `d(u,v) = d(u,w) + d(w,v)`.
    #[inline]
    pub fn is_between(&self, u: usize, w: usize, v: usize) -> bool {
        let uv = self.get(u, v);
        uv.is_finite() && uv == self.get(u, w) + self.get(w, v)
    }

    /// Some member of `{a, b, c}` lies between the other two.
    #[inline]
    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        self.is_between(a, c, b) || self.is_between(b, a, c) || self.is_between(a, b, c)
    }

    /// Largest entry; `Infinite` when the graph is disconnected.
    pub fn diameter(&self) -> Distance {
        self.d.iter().copied().max().unwrap_or(Distance::Finite(0))
    }
}

pub fn distances(g: &Graph) -> DistanceMatrix {
    DistanceMatrix::new(g)
}

pub fn diameter(g: &Graph) -> Distance {
    DistanceMatrix::new(g).diameter()
}
