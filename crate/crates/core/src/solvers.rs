//! Exact branch-and-bound solvers.
//!
//! * [`solve_bbclq`] without bounds is the two-sided BBClq search: it grows
//!   `A` and `B` alternately, branching on the minimum-degree candidate.
//! * [`solve_bbclq`] with bounds is ExtBBClq: same search, but a branch on `v`
//!   is also cut when the precomputed `ub_v` does not beat the incumbent.
//! * [`solve_ext_uni_bbclq`] enumerates only subsets `A ⊆ U` and keeps
//!   `B = ⋂ N(a)` restricted to vertices whose bound beats the incumbent.
//!
//! Every solver counts one node per invocation of its recursive procedure.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{Biclique, BipartiteGraph, Side, Vertex};
use crate::oracle;
use crate::ubp::{self, UpperBounds};

/// Nodes between two deadline checks.
const POLL_INTERVAL: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    TimeLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::TimeLimit => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Wall time including preprocessing.
    pub elapsed: Duration,
    pub status: Status,
    /// Best half-size found.
    pub lb: usize,
    pub ubp_iterations: usize,
    pub ubp_elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub best: Biclique,
    pub half_size: usize,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    BbClq,
    ExtBbClq,
    ExtUniBbClq,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::BbClq,
        Algorithm::ExtBbClq,
        Algorithm::ExtUniBbClq,
        Algorithm::Oracle,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::BbClq => "bbclq",
            Algorithm::ExtBbClq => "extbbclq",
            Algorithm::ExtUniBbClq => "extunibbclq",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn uses_ubp(self) -> bool {
        matches!(self, Algorithm::ExtBbClq | Algorithm::ExtUniBbClq)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Observer for search internals. All methods default to no-ops.
///
/// For the two-sided search `a` is the set being grown at this node and `b`
/// the other one; for the one-sided search `b` is the current common
/// neighborhood.
pub trait SearchHook {
    fn on_node(&mut self, _a: &[Vertex], _b: &[Vertex]) {}
    /// `candidates` still contains `v`.
    fn on_branch(&mut self, _v: Vertex, _candidates: &[Vertex]) {}
    fn on_improve(&mut self, _a: &[Vertex], _b: &[Vertex]) {}
}

impl SearchHook for () {}

/// Minimum-degree candidate, ties broken by smallest id.
pub fn branch_vertex_min_degree(g: &BipartiteGraph, candidates: &[Vertex]) -> Result<Vertex> {
    candidates
        .iter()
        .copied()
        .min_by_key(|&v| (g.degree(v), v))
        .ok_or(Error::EmptyCandidates)
}

/// Trims the larger side to the size of the smaller one, dropping the
/// largest ids.
pub fn make_balance(a: &[Vertex], b: &[Vertex]) -> Biclique {
    let k = a.len().min(b.len());
    let mut c = Biclique::new(a.to_vec(), b.to_vec());
    c.side_a.truncate(k);
    c.side_b.truncate(k);
    c
}

struct Clock {
    deadline: Option<Instant>,
    expired: bool,
}

impl Clock {
    fn new(start: Instant, limit: Option<Duration>) -> Self {
        Clock {
            deadline: limit.map(|l| start + l),
            expired: false,
        }
    }

    #[inline]
    fn poll(&mut self, nodes: u64) -> bool {
        if !self.expired && nodes % POLL_INTERVAL == 1 {
            if let Some(d) = self.deadline {
                self.expired = Instant::now() >= d;
            }
        }
        self.expired
    }
}

struct Incumbent {
    lb: usize,
    side_u: Vec<Vertex>,
    side_v: Vec<Vertex>,
}

impl Incumbent {
    fn new() -> Self {
        Incumbent {
            lb: 0,
            side_u: Vec::new(),
            side_v: Vec::new(),
        }
    }

    /// Stores `(a, b)` oriented as `(U-part, V-part)`.
    fn record(&mut self, g: &BipartiteGraph, a: &[Vertex], b: &[Vertex]) {
        let a_on_u = a.first().is_none_or(|&x| g.side_of(x) == Side::U);
        let (u, v) = if a_on_u { (a, b) } else { (b, a) };
        self.side_u = u.to_vec();
        self.side_v = v.to_vec();
    }
}

fn finish(
    g: &BipartiteGraph,
    inc: Incumbent,
    nodes: u64,
    expired: bool,
    start: Instant,
) -> SolveResult {
    let best = make_balance(&inc.side_u, &inc.side_v);
    debug_assert!(g.verify_balanced_biclique(&best).unwrap_or(false));
    debug_assert_eq!(best.side_a.len(), inc.lb);
    SolveResult {
        half_size: best.side_a.len(),
        best,
        stats: SearchStats {
            nodes,
            elapsed: start.elapsed(),
            status: if expired {
                Status::TimeLimit
            } else {
                Status::Optimal
            },
            lb: inc.lb,
            ubp_iterations: 0,
            ubp_elapsed: Duration::ZERO,
        },
    }
}

/// Largest vertex count for which a dense adjacency matrix is built.
const MATRIX_LIMIT: usize = 4096;

/// Edge membership: a bit matrix on small graphs, binary search otherwise.
struct Adjacency<'a> {
    g: &'a BipartiteGraph,
    words: usize,
    bits: Vec<u64>,
}

impl<'a> Adjacency<'a> {
    fn new(g: &'a BipartiteGraph) -> Self {
        let n = g.vertex_count();
        if n > MATRIX_LIMIT {
            return Adjacency {
                g,
                words: 0,
                bits: Vec::new(),
            };
        }
        let words = (n + 1).div_ceil(64);
        let mut bits = vec![0u64; (n + 1) * words];
        for (u, v) in g.edges() {
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        Adjacency { g, words, bits }
    }

    #[inline]
    fn has(&self, v: Vertex, x: Vertex) -> bool {
        if self.words == 0 {
            self.g.neighbors(v).binary_search(&x).is_ok()
        } else {
            self.bits[v * self.words + x / 64] >> (x % 64) & 1 == 1
        }
    }
}

struct TwoSided<'a, H> {
    g: &'a BipartiteGraph,
    adj: Adjacency<'a>,
    bounds: Option<&'a UpperBounds>,
    inc: Incumbent,
    nodes: u64,
    clock: Clock,
    hook: &'a mut H,
    /// Spare candidate buffers, reused across branches.
    pool: Vec<Vec<Vertex>>,
}

impl<H: SearchHook> TwoSided<'_, H> {
    /// `ca` and `cb` are ordered by (degree, id), so the branch vertex is
    /// always the first remaining element of `ca`.
    fn expand(&mut self, a: &mut Vec<Vertex>, b: &mut Vec<Vertex>, ca: &[Vertex], cb: &[Vertex]) {
        self.nodes += 1;
        if self.clock.poll(self.nodes) {
            return;
        }
        self.hook.on_node(a, b);
        if a.len() > self.inc.lb {
            self.inc.lb = a.len();
            self.inc.record(self.g, a, b);
            self.hook.on_improve(a, b);
        }
        for (i, &v) in ca.iter().enumerate() {
            if a.len() + ca.len() - i <= self.inc.lb {
                return;
            }
            self.hook.on_branch(v, &ca[i..]);
            let rest = &ca[i + 1..];
            if let Some(ub) = self.bounds {
                if ub.get(v) <= self.inc.lb {
                    continue;
                }
            }
            let mut filtered = self.pool.pop().unwrap_or_default();
            filtered.clear();
            filtered.extend(cb.iter().copied().filter(|&x| self.adj.has(v, x)));
            let structural = (a.len() + 1 + rest.len()).min(b.len() + filtered.len());
            if structural > self.inc.lb {
                a.push(v);
                self.expand(b, a, &filtered, rest);
                a.pop();
            }
            self.pool.push(filtered);
            if self.clock.expired {
                return;
            }
        }
    }
}

/// BBClq, or ExtBBClq when `bounds` is given.
pub fn solve_bbclq(
    g: &BipartiteGraph,
    bounds: Option<&UpperBounds>,
    time_limit: Option<Duration>,
) -> SolveResult {
    solve_bbclq_with_hook(g, bounds, time_limit, &mut ())
}

pub fn solve_bbclq_with_hook<H: SearchHook>(
    g: &BipartiteGraph,
    bounds: Option<&UpperBounds>,
    time_limit: Option<Duration>,
    hook: &mut H,
) -> SolveResult {
    two_sided(g, bounds, Instant::now(), time_limit, hook)
}

fn two_sided<H: SearchHook>(
    g: &BipartiteGraph,
    bounds: Option<&UpperBounds>,
    start: Instant,
    time_limit: Option<Duration>,
    hook: &mut H,
) -> SolveResult {
    let by_degree = |range: std::ops::RangeInclusive<Vertex>| {
        let mut vs: Vec<Vertex> = range.collect();
        vs.sort_by_key(|&v| (g.degree(v), v));
        vs
    };
    let ca = by_degree(g.u_vertices());
    let cb = by_degree(g.v_vertices());
    let mut search = TwoSided {
        g,
        adj: Adjacency::new(g),
        bounds,
        inc: Incumbent::new(),
        nodes: 0,
        clock: Clock::new(start, time_limit),
        hook,
        pool: Vec::new(),
    };
    search.expand(&mut Vec::new(), &mut Vec::new(), &ca, &cb);
    let (inc, nodes, expired) = (search.inc, search.nodes, search.clock.expired);
    finish(g, inc, nodes, expired, start)
}

struct OneSided<'a, H> {
    g: &'a BipartiteGraph,
    ub: &'a UpperBounds,
    inc: Incumbent,
    nodes: u64,
    clock: Clock,
    hook: &'a mut H,
}

impl<H: SearchHook> OneSided<'_, H> {
    /// `ca` is ordered by ascending bound, so the branch vertex (largest
    /// bound) is the last remaining element. `b` is sorted by id.
    fn expand(&mut self, a: &mut Vec<Vertex>, ca: &[Vertex], b: &[Vertex]) {
        self.nodes += 1;
        if self.clock.poll(self.nodes) {
            return;
        }
        self.hook.on_node(a, b);
        if a.len() <= b.len() && a.len() > self.inc.lb {
            self.inc.lb = a.len();
            self.inc.record(self.g, a, b);
            self.hook.on_improve(a, b);
        }
        if a.len() >= b.len() || b.len() <= self.inc.lb {
            return;
        }
        for end in (0..ca.len()).rev() {
            if a.len() + end < self.inc.lb {
                return;
            }
            let v = ca[end];
            self.hook.on_branch(v, &ca[..=end]);
            if self.ub.get(v) <= self.inc.lb {
                return;
            }
            let filtered = self.restrict(b, v);
            a.push(v);
            self.expand(a, &ca[..end], &filtered);
            a.pop();
            if self.clock.expired {
                return;
            }
        }
    }

    /// `b ∩ {u ∈ N(v) : ub_u > lb}` by a linear merge of two sorted lists.
    fn restrict(&self, b: &[Vertex], v: Vertex) -> Vec<Vertex> {
        let nv = self.g.neighbors(v);
        let lb = self.inc.lb;
        let mut out = Vec::with_capacity(b.len().min(nv.len()));
        let (mut i, mut j) = (0, 0);
        while i < b.len() && j < nv.len() {
            match b[i].cmp(&nv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if self.ub.get(b[i]) > lb {
                        out.push(b[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

/// Initial candidate array of the one-sided search: `U` sorted by ascending
/// bound, ties by descending id, so the last element has the largest bound
/// and, among equal bounds, the smallest id.
pub fn ext_uni_candidate_order(g: &BipartiteGraph, bounds: &UpperBounds) -> Vec<Vertex> {
    let mut ca: Vec<Vertex> = g.u_vertices().collect();
    ca.sort_by_key(|&v| (bounds.get(v), std::cmp::Reverse(v)));
    ca
}

/// ExtUniBBClq. `bounds` must come from [`ubp::run_ubp`] on `g`. When
/// `|U| > |V|` the search runs on the transposed graph and the witness is
/// mapped back.
pub fn solve_ext_uni_bbclq(
    g: &BipartiteGraph,
    bounds: &UpperBounds,
    time_limit: Option<Duration>,
) -> SolveResult {
    solve_ext_uni_bbclq_with_hook(g, bounds, time_limit, &mut ())
}

pub fn solve_ext_uni_bbclq_with_hook<H: SearchHook>(
    g: &BipartiteGraph,
    bounds: &UpperBounds,
    time_limit: Option<Duration>,
    hook: &mut H,
) -> SolveResult {
    one_sided(g, bounds, Instant::now(), time_limit, hook)
}

fn one_sided<H: SearchHook>(
    g: &BipartiteGraph,
    bounds: &UpperBounds,
    start: Instant,
    time_limit: Option<Duration>,
    hook: &mut H,
) -> SolveResult {
    if g.u_count() > g.v_count() {
        let t = g.transposed();
        let tb = bounds.transposed(g);
        let mut res = one_sided(&t, &tb, start, time_limit, hook);
        let back = |xs: &[Vertex]| xs.iter().map(|&x| t.to_transposed(x)).collect::<Vec<_>>();
        res.best = Biclique::new(back(&res.best.side_b), back(&res.best.side_a));
        return res;
    }
    let ca = ext_uni_candidate_order(g, bounds);
    let b: Vec<Vertex> = g.v_vertices().collect();
    let mut search = OneSided {
        g,
        ub: bounds,
        inc: Incumbent::new(),
        nodes: 0,
        clock: Clock::new(start, time_limit),
        hook,
    };
    search.expand(&mut Vec::new(), &ca, &b);
    let (inc, nodes, expired) = (search.inc, search.nodes, search.clock.expired);
    finish(g, inc, nodes, expired, start)
}

/// Runs `algo` on `g`. Preprocessing time counts against `time_limit` and is
/// included in the reported elapsed time.
pub fn solve(
    g: &BipartiteGraph,
    algo: Algorithm,
    time_limit: Option<Duration>,
) -> Result<SolveResult> {
    let start = Instant::now();
    let with_ubp = |res: SolveResult, b: &UpperBounds| SolveResult {
        stats: SearchStats {
            ubp_iterations: b.iterations,
            ubp_elapsed: b.elapsed,
            ..res.stats
        },
        ..res
    };
    match algo {
        Algorithm::BbClq => Ok(two_sided(g, None, start, time_limit, &mut ())),
        Algorithm::ExtBbClq => {
            let b = ubp::run_ubp(g, ubp::DEFAULT_THRESHOLD);
            let res = two_sided(g, Some(&b), start, time_limit, &mut ());
            Ok(with_ubp(res, &b))
        }
        Algorithm::ExtUniBbClq => {
            let b = ubp::run_ubp(g, ubp::DEFAULT_THRESHOLD);
            let res = one_sided(g, &b, start, time_limit, &mut ());
            Ok(with_ubp(res, &b))
        }
        Algorithm::Oracle => {
            let deadline = time_limit.map(|l| start + l);
            let run = oracle::search(g, deadline)?;
            Ok(SolveResult {
                half_size: run.half_size,
                best: run.witness,
                stats: SearchStats {
                    nodes: run.subsets,
                    elapsed: start.elapsed(),
                    status: if run.expired {
                        Status::TimeLimit
                    } else {
                        Status::Optimal
                    },
                    lb: run.half_size,
                    ubp_iterations: 0,
                    ubp_elapsed: Duration::ZERO,
                },
            })
        }
    }
}
