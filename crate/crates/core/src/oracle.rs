//! Brute-force ground truth for small instances.
//!
//! Plain subset enumeration over the smaller side with no pruning at all, so
//! that agreement with the branch-and-bound solvers means something.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Biclique, BipartiteGraph, Side, Vertex};

/// Largest smaller-side size the oracle will enumerate (2^25 subsets).
pub const MAX_ENUMERATED_SIDE: usize = 25;

/// Bitset over the vertices of one side, indexed by offset within that side.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (len % 64)) - 1;
            }
        }
        Bits(words)
    }

    fn from_offsets(len: usize, offsets: impl Iterator<Item = usize>) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in offsets {
            words[i / 64] |= 1 << (i % 64);
        }
        Bits(words)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn offsets(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

/// The smaller side (`small`), the other side (`large`), and neighborhoods of
/// small-side vertices as bitsets over `large`.
pub(crate) struct Layout {
    small: Side,
    small_first: Vertex,
    large_first: Vertex,
    small_len: usize,
    large_len: usize,
    nbr: Vec<Bits>,
}

impl Layout {
    pub(crate) fn new(g: &BipartiteGraph) -> Result<Self> {
        let small = if g.u_count() <= g.v_count() {
            Side::U
        } else {
            Side::V
        };
        let small_len = g.side_len(small);
        if small_len > MAX_ENUMERATED_SIDE {
            return Err(Error::BudgetExceeded(format!(
                "smaller side has {small_len} vertices, limit is {MAX_ENUMERATED_SIDE}"
            )));
        }
        let large_len = g.side_len(small.opposite());
        let small_first = *g.side_vertices(small).start();
        let large_first = *g.side_vertices(small.opposite()).start();
        let nbr = g
            .side_vertices(small)
            .map(|v| Bits::from_offsets(large_len, g.neighbors(v).iter().map(|&x| x - large_first)))
            .collect();
        Ok(Layout {
            small,
            small_first,
            large_first,
            small_len,
            large_len,
            nbr,
        })
    }

    /// Calls `visit(A, ⋂_{a∈A} N(a))` for every subset `A` of the smaller
    /// side, ids in ascending order. Stops early when `visit` returns false.
    fn for_each_subset(&self, mut visit: impl FnMut(&[Vertex], &[Vertex]) -> bool) {
        let mut chosen = Vec::with_capacity(self.small_len);
        self.walk(0, &mut chosen, Bits::full(self.large_len), &mut visit);
    }

    fn walk(
        &self,
        i: usize,
        chosen: &mut Vec<Vertex>,
        common: Bits,
        visit: &mut dyn FnMut(&[Vertex], &[Vertex]) -> bool,
    ) -> bool {
        if i == self.small_len {
            let c: Vec<Vertex> = common.offsets().map(|o| o + self.large_first).collect();
            return visit(chosen, &c);
        }
        if !self.walk(i + 1, chosen, common.clone(), visit) {
            return false;
        }
        chosen.push(self.small_first + i);
        let keep_going = self.walk(i + 1, chosen, common.and(&self.nbr[i]), visit);
        chosen.pop();
        keep_going
    }

    fn orient(&self, small: Vec<Vertex>, large: Vec<Vertex>) -> Biclique {
        match self.small {
            Side::U => Biclique::new(small, large),
            Side::V => Biclique::new(large, small),
        }
    }
}

pub(crate) struct OracleRun {
    pub half_size: usize,
    pub witness: Biclique,
    pub subsets: u64,
    pub expired: bool,
}

/// Enumeration with an optional deadline, checked every 1024 subsets.
pub(crate) fn search(g: &BipartiteGraph, deadline: Option<Instant>) -> Result<OracleRun> {
    let layout = Layout::new(g)?;
    let mut best = 0;
    let mut witness = Biclique::default();
    let mut subsets = 0u64;
    let mut expired = false;
    layout.for_each_subset(|a, c| {
        if subsets.is_multiple_of(1024) {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    expired = true;
                    return false;
                }
            }
        }
        subsets += 1;
        let k = a.len().min(c.len());
        if k > best {
            best = k;
            witness = layout.orient(a[..k].to_vec(), c[..k].to_vec());
        }
        true
    });
    Ok(OracleRun {
        half_size: best,
        witness,
        subsets,
        expired,
    })
}

/// Maximum half-size with a witness of smallest ids.
pub fn brute_force_max_balanced(g: &BipartiteGraph) -> Result<(usize, Biclique)> {
    let run = search(g, None)?;
    Ok((run.half_size, run.witness))
}

/// Maximum half-size over balanced bicliques that contain `v`.
pub fn vertex_bound(g: &BipartiteGraph, v: Vertex) -> Result<usize> {
    g.check_vertex(v)?;
    let layout = Layout::new(g)?;
    let on_small = g.side_of(v) == layout.small;
    let mut best = 0;
    layout.for_each_subset(|a, c| {
        let hit = if on_small {
            a.contains(&v)
        } else {
            c.contains(&v)
        };
        if hit {
            best = best.max(a.len().min(c.len()));
        }
        true
    });
    Ok(best)
}

/// Every balanced biclique of `g`, the empty one included.
pub fn balanced_bicliques(g: &BipartiteGraph) -> Result<Vec<Biclique>> {
    let layout = Layout::new(g)?;
    let mut out = Vec::new();
    layout.for_each_subset(|a, c| {
        if a.len() <= c.len() {
            for_each_combination(c, a.len(), |b| {
                out.push(layout.orient(a.to_vec(), b.to_vec()));
            });
        }
        true
    });
    Ok(out)
}

fn for_each_combination(items: &[Vertex], k: usize, mut f: impl FnMut(&[Vertex])) {
    fn rec(
        items: &[Vertex],
        k: usize,
        start: usize,
        cur: &mut Vec<Vertex>,
        f: &mut dyn FnMut(&[Vertex]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for i in start..=items.len() - need {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut f);
}

#[cfg(test)]
impl Layout {
    pub(crate) fn nbr_contains(&self, small_offset: usize, large_offset: usize) -> bool {
        let bits = &self.nbr[small_offset].0;
        bits[large_offset / 64] >> (large_offset % 64) & 1 == 1
    }
}
