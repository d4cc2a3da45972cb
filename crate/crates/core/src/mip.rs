//! Integer programming model of the problem and its tightening.
//!
//! The base model has one binary `x_i` per vertex, maximizes `Σ_{i∈U} x_i`,
//! forbids selecting both ends of a non-edge (`x_u + x_v <= 1`) and balances
//! the two sides (`Σ_U x - Σ_V x = 0`).
//!
//! The tightened model adds, per side with `ℓ = max ub`, one lifted
//! inequality for every seed `u` with `ub_u <= ℓ - 1`:
//!
//! ```text
//! Σ_{i∈T_u} (ℓ - ub_i + 1) x_i + Σ_{i∈side∖T_u} x_i <= ℓ
//! ```
//!
//! where `T_u` is a maximal set of such low-bound vertices containing `u`
//! whose neighborhoods are pairwise disjoint.

use std::io::Write;
use std::path::Path;
use std::process::Command;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Side, Vertex};
use crate::oracle;
use crate::ubp::UpperBounds;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    /// Descriptive label. LP rows are numbered `c1, c2, …` instead.
    pub name: String,
    /// `(vertex id, coefficient)`, ascending ids, no zero coefficients.
    pub terms: Vec<(Vertex, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn lhs(&self, selected: impl Fn(Vertex) -> bool) -> i64 {
        self.terms
            .iter()
            .filter(|&&(v, _)| selected(v))
            .map(|&(_, c)| c)
            .sum()
    }

    pub fn holds(&self, lhs: i64) -> bool {
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MipModel {
    /// `x1 ..= x(|U|+|V|)`, all binary.
    pub variables: Vec<String>,
    /// Maximized.
    pub objective: Vec<(Vertex, i64)>,
    pub constraints: Vec<Constraint>,
    /// `ℓ` used for the lifted inequalities of each side, when tightened.
    pub ell_u: Option<usize>,
    pub ell_v: Option<usize>,
}

impl MipModel {
    pub fn equality_count(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.sense == Sense::Eq)
            .count()
    }
}

pub fn build_original(g: &BipartiteGraph) -> MipModel {
    let variables = g.vertices().map(|v| format!("x{v}")).collect();
    let objective = g.u_vertices().map(|v| (v, 1)).collect();
    let mut constraints: Vec<Constraint> = g
        .non_edges()
        .into_iter()
        .map(|(u, v)| Constraint {
            name: format!("conflict_{u}_{v}"),
            terms: vec![(u, 1), (v, 1)],
            sense: Sense::Le,
            rhs: 1,
        })
        .collect();
    constraints.push(Constraint {
        name: "balance".to_string(),
        terms: g
            .u_vertices()
            .map(|v| (v, 1))
            .chain(g.v_vertices().map(|v| (v, -1)))
            .collect(),
        sense: Sense::Eq,
        rhs: 0,
    });
    MipModel {
        variables,
        objective,
        constraints,
        ell_u: None,
        ell_v: None,
    }
}

/// `S^level`: vertices of `side` with `ub <= level`, ascending.
pub fn compute_s(
    g: &BipartiteGraph,
    bounds: &UpperBounds,
    side: Side,
    level: usize,
) -> Vec<Vertex> {
    g.side_vertices(side)
        .filter(|&v| bounds.get(v) <= level)
        .collect()
}

fn disjoint(a: &[Vertex], b: &[Vertex]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Greedy maximal `T ⊆ s` with `seed ∈ T` and pairwise disjoint
/// neighborhoods; `s` is scanned in ascending id order.
pub fn build_t_set(g: &BipartiteGraph, s: &[Vertex], seed: Vertex) -> Result<Vec<Vertex>> {
    if !s.contains(&seed) {
        return Err(Error::InvalidSeed(seed));
    }
    let mut scan = s.to_vec();
    scan.sort_unstable();
    let mut t = vec![seed];
    for &i in &scan {
        if i != seed && t.iter().all(|&j| disjoint(g.neighbors(i), g.neighbors(j))) {
            t.push(i);
        }
    }
    t.sort_unstable();
    Ok(t)
}

/// Lifted inequalities of both sides, `U` first, each side by seed id, exact
/// duplicates dropped.
pub fn tightened_inequalities(g: &BipartiteGraph, bounds: &UpperBounds) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::new();
    for side in [Side::U, Side::V] {
        let ell = bounds.max_on(g, side);
        if ell == 0 {
            continue;
        }
        let low = compute_s(g, bounds, side, ell - 1);
        for &seed in &low {
            let t = build_t_set(g, &low, seed).expect("seed drawn from the set");
            let terms: Vec<(Vertex, i64)> = g
                .side_vertices(side)
                .map(|i| {
                    let coef = if t.binary_search(&i).is_ok() {
                        (ell - bounds.get(i) + 1) as i64
                    } else {
                        1
                    };
                    (i, coef)
                })
                .collect();
            let dup = out.iter().any(|c| c.terms == terms && c.rhs == ell as i64);
            if !dup {
                out.push(Constraint {
                    name: format!("lift_{seed}"),
                    terms,
                    sense: Sense::Le,
                    rhs: ell as i64,
                });
            }
        }
    }
    out
}

/// Base model plus the lifted inequalities.
pub fn build_tightened(g: &BipartiteGraph, bounds: &UpperBounds) -> MipModel {
    let mut model = build_original(g);
    model.constraints.extend(tightened_inequalities(g, bounds));
    let ell = |side| Some(bounds.max_on(g, side)).filter(|&l| l > 0);
    model.ell_u = ell(Side::U);
    model.ell_v = ell(Side::V);
    model
}

/// True iff the indicator vector of every balanced biclique of `g` satisfies
/// every constraint of `model`.
pub fn check_inequalities(g: &BipartiteGraph, model: &MipModel) -> Result<bool> {
    let mut selected = vec![false; g.vertex_count() + 1];
    for c in oracle::balanced_bicliques(g)? {
        for &v in c.side_a.iter().chain(&c.side_b) {
            selected[v] = true;
        }
        let ok = model
            .constraints
            .iter()
            .all(|k| k.holds(k.lhs(|v| selected[v])));
        for &v in c.side_a.iter().chain(&c.side_b) {
            selected[v] = false;
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest model [`feasible_points`] will enumerate.
pub const MAX_ENUMERATED_VARIABLES: usize = 26;

/// Every 0/1 point satisfying all constraints, as bitmasks with bit `k - 1`
/// standing for `x_k`, in Gray-code visiting order.
pub fn feasible_points(model: &MipModel) -> Result<Vec<u64>> {
    let n = model.variables.len();
    if n > MAX_ENUMERATED_VARIABLES {
        return Err(Error::BudgetExceeded(format!(
            "{n} variables, limit is {MAX_ENUMERATED_VARIABLES}"
        )));
    }
    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (ci, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            columns[v - 1].push((ci, coef));
        }
    }
    let mut lhs = vec![0i64; model.constraints.len()];
    let mut violated = model.constraints.iter().filter(|c| !c.holds(0)).count();
    let mut x = 0u64;
    let mut out = Vec::new();
    if violated == 0 {
        out.push(x);
    }
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        let sign = if x >> bit & 1 == 1 { -1 } else { 1 };
        x ^= 1 << bit;
        for &(ci, coef) in &columns[bit] {
            let c = &model.constraints[ci];
            let before = c.holds(lhs[ci]);
            lhs[ci] += sign * coef;
            let after = c.holds(lhs[ci]);
            match (before, after) {
                (true, false) => violated += 1,
                (false, true) => violated -= 1,
                _ => {}
            }
        }
        if violated == 0 {
            out.push(x);
        }
    }
    Ok(out)
}

fn write_expr<W: Write>(sink: &mut W, terms: &[(Vertex, i64)]) -> std::io::Result<()> {
    if terms.is_empty() {
        return write!(sink, " 0");
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        let sign = match (k, c < 0) {
            (0, false) => "",
            (0, true) => " -",
            (_, false) => " +",
            (_, true) => " -",
        };
        write!(sink, "{sign}")?;
        match c.unsigned_abs() {
            1 => write!(sink, " x{v}")?,
            a => write!(sink, " {a} x{v}")?,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrality {
    Binary,
    /// Drop integrality and bound each variable to `[0, 1]`.
    Relaxed,
}

/// Deterministic LP-format export. Output is byte-identical for equal models.
pub fn write_lp<W: Write>(model: &MipModel, sink: &mut W) -> Result<()> {
    write_lp_with(model, sink, Integrality::Binary)
}

pub fn write_lp_with<W: Write>(model: &MipModel, sink: &mut W, kind: Integrality) -> Result<()> {
    writeln!(sink, "\\ mbbp model")?;
    writeln!(sink, "Maximize")?;
    write!(sink, " obj:")?;
    if !model.objective.is_empty() {
        write_expr(sink, &model.objective)?;
    }
    writeln!(sink)?;
    writeln!(sink, "Subject To")?;
    for (k, c) in model.constraints.iter().enumerate() {
        write!(sink, " c{}:", k + 1)?;
        write_expr(sink, &c.terms)?;
        writeln!(sink, " {} {}", c.sense.symbol(), c.rhs)?;
    }
    match kind {
        Integrality::Binary => {
            writeln!(sink, "Binaries")?;
            for name in &model.variables {
                writeln!(sink, " {name}")?;
            }
        }
        Integrality::Relaxed => {
            writeln!(sink, "Bounds")?;
            for name in &model.variables {
                writeln!(sink, " 0 <= {name} <= 1")?;
            }
        }
    }
    writeln!(sink, "End")?;
    Ok(())
}

/// Optional bridge to an external LP/MIP solver.
///
/// The command template is split on whitespace; every `{}` token is
/// replaced by the LP file path. The solver's standard output must contain a
/// line `objective: <decimal>`.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    template: String,
}

impl ExternalSolver {
    pub const ENV_VAR: &'static str = "MBBP_LP_SOLVER";

    pub fn new(template: impl Into<String>) -> Self {
        ExternalSolver {
            template: template.into(),
        }
    }

    /// `None` when no solver is configured.
    pub fn from_env() -> Option<Self> {
        std::env::var(Self::ENV_VAR)
            .ok()
            .filter(|t| !t.trim().is_empty())
            .map(Self::new)
    }

    pub fn objective(&self, lp_path: &Path) -> Result<f64> {
        let path = lp_path.to_string_lossy();
        let mut parts = self
            .template
            .split_whitespace()
            .map(|p| p.replace("{}", &path));
        let program = parts
            .next()
            .ok_or_else(|| Error::Solver("empty command".into()))?;
        let output = Command::new(program).args(parts).output()?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(Error::Solver(format!(
                "{}: {}",
                output.status,
                stderr.trim()
            )));
        }
        let stdout = String::from_utf8_lossy(&output.stdout);
        parse_objective(&stdout)
    }
}

fn parse_objective(text: &str) -> Result<f64> {
    for (idx, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim().strip_prefix("objective:") {
            return rest.trim().parse::<f64>().map_err(|_| {
                Error::parse(idx + 1, format!("bad objective value `{}`", rest.trim()))
            });
        }
    }
    Err(Error::Solver("output has no `objective:` line".into()))
}
