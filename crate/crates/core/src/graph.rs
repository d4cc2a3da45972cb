//! Immutable bipartite graph with sorted adjacency.
//!
//! Vertices carry global 1-based ids: `U = 1..=u_count` and
//! `V = u_count+1 ..= u_count+v_count`. Every public surface uses these ids;
//! only the storage is 0-based.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// One of the two vertex classes of a bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    u_count: usize,
    v_count: usize,
    adjacency: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl BipartiteGraph {
    /// Builds a graph from `(u, v)` pairs in global ids. Duplicates are
    /// rejected, not merged.
    pub fn build(u_count: usize, v_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let n = u_count + v_count;
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == 0 || u > u_count {
                return Err(Error::InvalidVertex(u));
            }
            if v <= u_count || v > n {
                return Err(Error::InvalidVertex(v));
            }
            adjacency[u - 1].push(v);
            adjacency[v - 1].push(u);
        }
        for (idx, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (idx + 1, w[0]);
                return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
            }
        }
        Ok(BipartiteGraph {
            u_count,
            v_count,
            adjacency,
            edge_count: edges.len(),
        })
    }

    pub fn empty() -> Self {
        BipartiteGraph {
            u_count: 0,
            v_count: 0,
            adjacency: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn v_count(&self) -> usize {
        self.v_count
    }

    pub fn vertex_count(&self) -> usize {
        self.u_count + self.v_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::U => self.u_count,
            Side::V => self.v_count,
        }
    }

    pub fn u_vertices(&self) -> RangeInclusive<Vertex> {
        1..=self.u_count
    }

    pub fn v_vertices(&self) -> RangeInclusive<Vertex> {
        self.u_count + 1..=self.u_count + self.v_count
    }

    pub fn vertices(&self) -> RangeInclusive<Vertex> {
        1..=self.vertex_count()
    }

    pub fn side_vertices(&self, side: Side) -> RangeInclusive<Vertex> {
        match side {
            Side::U => self.u_vertices(),
            Side::V => self.v_vertices(),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.vertex_count()
    }

    /// Side of a valid vertex id.
    pub fn side_of(&self, v: Vertex) -> Side {
        debug_assert!(self.contains(v));
        if v <= self.u_count {
            Side::U
        } else {
            Side::V
        }
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Sorted neighbor ids of `v`. Panics on an invalid id.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v - 1]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v - 1].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        // search the shorter list
        let (x, y) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// All edges as `(u, v)` with `u ∈ U`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.u_vertices()
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Pairs of `U × V` that are not edges, in row-major order.
    pub fn non_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.u_count * self.v_count - self.edge_count);
        for u in self.u_vertices() {
            let mut adj = self.neighbors(u).iter().peekable();
            for v in self.v_vertices() {
                if adj.peek() == Some(&&v) {
                    adj.next();
                } else {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True iff `c` is balanced and every pair of `A × B` is an edge.
    pub fn verify_balanced_biclique(&self, c: &Biclique) -> Result<bool> {
        for &a in &c.side_a {
            if a == 0 || a > self.u_count {
                return Err(Error::InvalidVertex(a));
            }
        }
        for &b in &c.side_b {
            if b <= self.u_count || b > self.vertex_count() {
                return Err(Error::InvalidVertex(b));
            }
        }
        if c.side_a.len() != c.side_b.len() {
            return Ok(false);
        }
        let complete = c.side_a.iter().all(|&a| {
            c.side_b
                .iter()
                .all(|&b| self.neighbors(a).binary_search(&b).is_ok())
        });
        Ok(complete)
    }

    /// The same graph with the roles of `U` and `V` exchanged. Old `V` vertex
    /// `u_count + j` becomes `j`; old `U` vertex `i` becomes `v_count + i`.
    pub fn transposed(&self) -> BipartiteGraph {
        let edges: Vec<_> = self
            .edges()
            .map(|(u, v)| (self.to_transposed(v), self.to_transposed(u)))
            .collect();
        BipartiteGraph::build(self.v_count, self.u_count, &edges)
            .expect("transposing a valid graph yields a valid graph")
    }

    /// Maps an id of `self` to the corresponding id of `self.transposed()`.
    pub fn to_transposed(&self, v: Vertex) -> Vertex {
        if v <= self.u_count {
            self.v_count + v
        } else {
            v - self.u_count
        }
    }
}

/// A pair `(A, B)` with `A ⊆ U` and `B ⊆ V`. Completeness is not implied by
/// the type; see [`BipartiteGraph::verify_balanced_biclique`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Biclique {
    pub side_a: Vec<Vertex>,
    pub side_b: Vec<Vertex>,
}

impl Biclique {
    pub fn new(mut side_a: Vec<Vertex>, mut side_b: Vec<Vertex>) -> Self {
        side_a.sort_unstable();
        side_b.sort_unstable();
        Biclique { side_a, side_b }
    }

    pub fn is_balanced(&self) -> bool {
        self.side_a.len() == self.side_b.len()
    }

    pub fn half_size(&self) -> usize {
        self.side_a.len().min(self.side_b.len())
    }

    pub fn is_empty(&self) -> bool {
        self.side_a.is_empty() && self.side_b.is_empty()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const SAMPLE_EDGES: [(Vertex, Vertex); 13] = [
        (1, 6),
        (1, 7),
        (2, 7),
        (2, 8),
        (2, 9),
        (3, 7),
        (3, 8),
        (3, 9),
        (4, 6),
        (4, 9),
        (4, 10),
        (5, 8),
        (5, 10),
    ];

    pub fn sample() -> BipartiteGraph {
        BipartiteGraph::build(5, 5, &SAMPLE_EDGES).unwrap()
    }

    pub fn complete(a: usize, b: usize) -> BipartiteGraph {
        let edges: Vec<_> = (1..=a)
            .flat_map(|u| (a + 1..=a + b).map(move |v| (u, v)))
            .collect();
        BipartiteGraph::build(a, b, &edges).unwrap()
    }
}
