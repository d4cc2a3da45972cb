//! Upper bound propagation.
//!
//! Computes, for every vertex `v`, an upper bound `ub_v` on the half-size of
//! any balanced biclique containing `v`. Three rules are combined:
//!
//! 1. `deg(v)` bounds the half-size;
//! 2. with `w_vu = |N(v) ∩ N(u)|` over the side of `v` (including `u = v`),
//!    the h-index of `{w_vu}` bounds the half-size;
//! 3. the h-index of `{ub_u : u ∈ N(v)}` bounds the half-size, which is
//!    iterated to a fixed point.

use std::time::{Duration, Instant};

use crate::graph::{BipartiteGraph, Side, Vertex};

/// Sides at or above this size skip the common-neighbor refinement.
pub const DEFAULT_THRESHOLD: usize = 30_000;

/// Sides up to this size use a dense `|side|²` counter table.
const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBounds {
    /// `ub[v - 1]` is the bound of vertex `v`.
    pub ub: Vec<usize>,
    /// Propagation sweeps executed, including the final confirming sweep.
    pub iterations: usize,
    pub elapsed: Duration,
}

impl UpperBounds {
    #[inline]
    pub fn get(&self, v: Vertex) -> usize {
        self.ub[v - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ub
    }

    /// Largest bound over one side, 0 for an empty side.
    pub fn max_on(&self, g: &BipartiteGraph, side: Side) -> usize {
        g.side_vertices(side)
            .map(|v| self.get(v))
            .max()
            .unwrap_or(0)
    }

    pub fn side_values(&self, g: &BipartiteGraph, side: Side) -> Vec<usize> {
        g.side_vertices(side).map(|v| self.get(v)).collect()
    }

    /// Re-indexes bounds computed on `g` for `g.transposed()`.
    pub fn transposed(&self, g: &BipartiteGraph) -> UpperBounds {
        let mut ub = vec![0; self.ub.len()];
        for v in g.vertices() {
            ub[g.to_transposed(v) - 1] = self.get(v);
        }
        UpperBounds {
            ub,
            iterations: self.iterations,
            elapsed: self.elapsed,
        }
    }
}

/// Largest `x` such that at least `x` of the values are `>= x`.
pub fn h_index(values: &[usize]) -> usize {
    let mut work = values.to_vec();
    h_index_in_place(&mut work)
}

/// Sorts `values` descending, then bisects on `values[i] > i`, which holds
/// on a prefix of the sorted slice. The prefix length is the h-index.
fn h_index_in_place(values: &mut [usize]) -> usize {
    values.sort_unstable_by(|a, b| b.cmp(a));
    let (mut lo, mut hi) = (0, values.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if values[mid] > mid {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn initial_bounds(g: &BipartiteGraph) -> UpperBounds {
    UpperBounds {
        ub: g.vertices().map(|v| g.degree(v)).collect(),
        iterations: 0,
        elapsed: Duration::ZERO,
    }
}

/// Tightens `ub_v` for every `v` on `side` to the h-index of its
/// common-neighbor counts.
pub fn common_neighbor_refine(g: &BipartiteGraph, ub: &UpperBounds, side: Side) -> UpperBounds {
    let mut out = ub.clone();
    let n = g.side_len(side);
    if n == 0 {
        return out;
    }
    let first = *g.side_vertices(side).start();
    let y = if n <= DENSE_LIMIT {
        dense_common_neighbor_hindex(g, side, first, n)
    } else {
        sparse_common_neighbor_hindex(g, side, first, n)
    };
    for (offset, &yv) in y.iter().enumerate() {
        let slot = &mut out.ub[first + offset - 1];
        if yv < *slot {
            *slot = yv;
        }
    }
    out
}

fn dense_common_neighbor_hindex(
    g: &BipartiteGraph,
    side: Side,
    first: Vertex,
    n: usize,
) -> Vec<usize> {
    let mut w = vec![0u32; n * n];
    for k in g.side_vertices(side.opposite()) {
        let nk = g.neighbors(k);
        for &v in nk {
            let row = (v - first) * n;
            for &u in nk {
                w[row + u - first] += 1;
            }
        }
    }
    let mut scratch = vec![0usize; n];
    (0..n)
        .map(|i| {
            for (dst, &c) in scratch.iter_mut().zip(&w[i * n..(i + 1) * n]) {
                *dst = c as usize;
            }
            h_index_in_place(&mut scratch)
        })
        .collect()
}

/// Same values as the dense table, one row at a time. Zero counts never
/// raise an h-index, so only touched entries are collected.
fn sparse_common_neighbor_hindex(
    g: &BipartiteGraph,
    side: Side,
    first: Vertex,
    n: usize,
) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut row: Vec<usize> = Vec::new();
    g.side_vertices(side)
        .map(|v| {
            for &k in g.neighbors(v) {
                for &u in g.neighbors(k) {
                    let idx = u - first;
                    if counts[idx] == 0 {
                        touched.push(idx);
                    }
                    counts[idx] += 1;
                }
            }
            row.clear();
            for &idx in &touched {
                row.push(counts[idx]);
                counts[idx] = 0;
            }
            touched.clear();
            h_index_in_place(&mut row)
        })
        .collect()
}

/// Gauss–Seidel sweeps in ascending id order until a sweep changes nothing.
pub fn propagate(g: &BipartiteGraph, ub: &UpperBounds) -> UpperBounds {
    let mut bounds = ub.ub.clone();
    let mut scratch = Vec::new();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut stable = true;
        for v in g.vertices() {
            scratch.clear();
            scratch.extend(g.neighbors(v).iter().map(|&u| bounds[u - 1]));
            let z = h_index_in_place(&mut scratch);
            if z < bounds[v - 1] {
                bounds[v - 1] = z;
                stable = false;
            }
        }
        if stable {
            break;
        }
    }
    UpperBounds {
        ub: bounds,
        iterations: sweeps,
        elapsed: ub.elapsed,
    }
}

/// Full preprocessing: degree bounds, common-neighbor refinement of each side
/// smaller than `threshold`, then propagation.
pub fn run_ubp(g: &BipartiteGraph, threshold: usize) -> UpperBounds {
    let start = Instant::now();
    let mut bounds = initial_bounds(g);
    for side in [Side::U, Side::V] {
        if g.side_len(side) < threshold {
            bounds = common_neighbor_refine(g, &bounds, side);
        }
    }
    let mut bounds = propagate(g, &bounds);
    bounds.elapsed = start.elapsed();
    bounds
}
