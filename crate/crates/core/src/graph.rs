//! Undirected simple graphs on labelled vertices `1..=n`.
//!
//! Adjacency is stored as one `u64` bitset per vertex (bit `j - 1` set when
//! vertex `j` is a neighbour), so graphs hold at most [`MAX_VERTICES`] vertices.
//! Graphs are immutable once built.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count a [`Graph`] can hold.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("graph needs at least one vertex"));
        }
        if n > MAX_VERTICES {
            return Err(Error::capacity(format!(
                "graph has {n} vertices, at most {MAX_VERTICES} are supported"
            )));
        }
        Ok(Graph { adj: vec![0; n] })
    }

    /// Builds a graph from 1-based edge pairs. Self-loops are rejected,
    /// repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            g.check_vertex(i)?;
            g.check_vertex(j)?;
            if i == j {
                return Err(Error::domain(format!("self-loop at vertex {i}")));
            }
            g.link(i - 1, j - 1);
        }
        Ok(g)
    }

    pub(crate) fn link(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    /// Complete graph `K_n`, `n >= 3`.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("complete graph needs n >= 3, got {n}")));
        }
        let mut g = Graph::empty(n)?;
        for a in 0..n {
            for b in a + 1..n {
                g.link(a, b);
            }
        }
        Ok(g)
    }

    /// Cycle `C_n`, `n >= 3`, with edges `{i, i+1}` and `{n, 1}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("cycle needs n >= 3, got {n}")));
        }
        let mut g = Graph::empty(n)?;
        for a in 0..n {
            g.link(a, (a + 1) % n);
        }
        Ok(g)
    }

    /// Wheel `W_l`, `l >= 4`: hub vertex 1 joined to every vertex of the
    /// cycle `2, 3, ..., l`.
    pub fn wheel(l: usize) -> Result<Self> {
        if l < 4 {
            return Err(Error::domain(format!("wheel needs l >= 4, got {l}")));
        }
        let mut g = Graph::empty(l)?;
        let rim = l - 1;
        for k in 0..rim {
            let a = 1 + k;
            let b = 1 + (k + 1) % rim;
            g.link(a, b);
            g.link(0, a);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as sorted 1-based pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.order() {
            for b in bits(self.adj[a]) {
                if a < b {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> Result<bool> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        Ok(self.adj[i - 1] >> (j - 1) & 1 == 1)
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        self.check_vertex(i)?;
        Ok(self.adj[i - 1].count_ones() as usize)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|m| m.count_ones() as usize).collect()
    }

    pub fn check_vertex(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.order() {
            Err(Error::InvalidVertex {
                vertex: i,
                n: self.order(),
            })
        } else {
            Ok(())
        }
    }

    /// Neighbour bitset of the 0-based vertex `idx`.
    #[inline]
    pub(crate) fn nbr_mask(&self, idx: usize) -> u64 {
        self.adj[idx]
    }

    /// BFS distances from the 0-based vertex `idx`; `None` when unreachable.
    pub(crate) fn distances_from(&self, idx: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[idx] = Some(0);
        let mut queue = VecDeque::from([idx]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for w in bits(self.adj[v]) {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Bitset of `N_{<=r}` around the 0-based vertex `idx`.
    pub(crate) fn ball_mask(&self, idx: usize, r: usize) -> u64 {
        let mut ball = 1u64 << idx;
        let mut frontier = ball;
        for _ in 0..r {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !ball;
            if frontier == 0 {
                break;
            }
            ball |= frontier;
        }
        ball
    }

    /// `N_k(i)`: vertices at graph distance exactly `k` from `i`, sorted.
    pub fn neighbors_exact(&self, i: usize, k: usize) -> Result<Vec<usize>> {
        self.check_vertex(i)?;
        Ok(self
            .distances_from(i - 1)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d == Some(k))
            .map(|(v, _)| v + 1)
            .collect())
    }

    /// `N_{<=1}(i) = {i} ∪ N_1(i)`, sorted.
    pub fn closed_neighborhood(&self, i: usize) -> Result<Vec<usize>> {
        self.check_vertex(i)?;
        let m = self.adj[i - 1] | 1 << (i - 1);
        Ok(bits(m).map(|v| v + 1).collect())
    }

    /// `N_{<=k}(i)`, sorted.
    pub fn ball(&self, i: usize, k: usize) -> Result<Vec<usize>> {
        self.check_vertex(i)?;
        Ok(bits(self.ball_mask(i - 1, k)).map(|v| v + 1).collect())
    }

    /// Returns `Some(k)` when every vertex has degree `k`.
    pub fn is_k_regular(&self) -> Option<usize> {
        let first = self.adj[0].count_ones();
        self.adj
            .iter()
            .all(|m| m.count_ones() == first)
            .then_some(first as usize)
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.adj.contains(&0)
    }

    /// Whether the 1-based permutation `perm` (vertex `v` maps to `perm[v-1]`)
    /// preserves adjacency.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.order();
        if perm.len() != n {
            return false;
        }
        let mut seen = 0u64;
        for &p in perm {
            if p == 0 || p > n || seen >> (p - 1) & 1 == 1 {
                return false;
            }
            seen |= 1 << (p - 1);
        }
        self.edges().into_iter().all(|(i, j)| {
            let (a, b) = (perm[i - 1] - 1, perm[j - 1] - 1);
            self.adj[a] >> b & 1 == 1
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.order())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Bitset with the lowest `n` bits set.
#[inline]
pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the indices of set bits, lowest first.
#[inline]
pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}
