//! Exhaustive search for "good" edge colorings (no forbidden monochromatic
//! pattern, optionally no rainbow path) and the Ramsey-type numbers built on
//! it.
//!
//! Edges are colored in canonical order. With interchangeable colors the
//! coloring is a restricted growth string (a new color index only after all
//! smaller ones), which visits each coloring once up to renaming colors.
//! After every assignment only patterns through the newest edge are checked.
//! Host vertex symmetry is not broken.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bits::{self, VSet};
use crate::colored::{find_mono_copy, find_rainbow_path, ColoredHost, Shape};
use crate::graph::{partite_profile, GraphError, PatternPlan, SimpleGraph};

/// Edge-count limit for unbounded budgets and budgets of four or more colors.
pub const EDGE_LIMIT_MANY: usize = 36;
/// Edge-count limit for budgets of at most three colors.
pub const EDGE_LIMIT_FEW: usize = 45;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    Finite(usize),
    Unbounded,
}

impl std::fmt::Display for Budget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Budget::Finite(k) => write!(f, "{k}"),
            Budget::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl std::str::FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("unbounded") {
            return Ok(Budget::Unbounded);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Budget::Finite(k)),
            _ => Err(format!("budget must be a positive integer or \"unbounded\", got {s:?}")),
        }
    }
}

impl Serialize for Budget {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Budget::Finite(k) => s.serialize_u64(*k as u64),
            Budget::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Budget {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(k) if k >= 1 => Ok(Budget::Finite(k)),
            Raw::Num(_) => Err(serde::de::Error::custom("budget must be positive")),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchProblem {
    #[serde(flatten)]
    pub shape: Shape,
    pub budget: Budget,
    pub forbid_mono: SimpleGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbid_rainbow: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads for root-level splitting (1 = sequential).
    pub jobs: usize,
    pub time_limit: Option<Duration>,
    /// Lift the documented edge-count limits.
    pub allow_large: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { jobs: 1, time_limit: None, allow_large: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Witness,
    Exhausted,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ColoredHost>,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{edges} edges exceed the search limit of {limit} for this budget")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("the forbidden monochromatic pattern must have at least one edge")]
    EmptyPattern,
    #[error("rainbow path order must be 4 or 5, got {0}")]
    BadRainbow(usize),
    #[error("bipartite searches need equal sides")]
    UnequalSides,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The search kernel: which colors forbid which patterns.
struct Kernel {
    shape: Shape,
    vc: usize,
    edges: Vec<(usize, usize)>,
    max_colors: usize,
    /// interchangeable colors: restricted growth strings and one family
    symmetric: bool,
    /// `families[0]` for symmetric kernels, otherwise `families[c - 1]`
    families: Vec<Vec<SimpleGraph>>,
    plans: Vec<Vec<PatternPlan>>,
    rainbow: Option<usize>,
}

impl Kernel {
    fn new(
        shape: Shape,
        max_colors: usize,
        symmetric: bool,
        families: Vec<Vec<SimpleGraph>>,
        rainbow: Option<usize>,
    ) -> Kernel {
        let plans = families
            .iter()
            .map(|fam| fam.iter().map(PatternPlan::new).collect())
            .collect();
        let edges = shape.edges();
        Kernel {
            shape,
            vc: shape.vertex_count(),
            // a role-bound color may be needed even when fewer edges exist
            max_colors: if symmetric { max_colors.min(edges.len().max(1)) } else { max_colors },
            edges,
            symmetric,
            families,
            plans,
            rainbow,
        }
    }

    fn family(&self, c: u32) -> &[SimpleGraph] {
        let i = if self.symmetric { 0 } else { c as usize - 1 };
        self.families.get(i).map(|f| f.as_slice()).unwrap_or(&[])
    }

    fn plans(&self, c: u32) -> &[PatternPlan] {
        let i = if self.symmetric { 0 } else { c as usize - 1 };
        self.plans.get(i).map(|f| f.as_slice()).unwrap_or(&[])
    }

    /// Full re-verification of a finished coloring with the public detectors.
    fn is_good(&self, host: &ColoredHost) -> bool {
        for c in 1..=host.k() as u32 {
            let role = if self.symmetric { 1 } else { host.relabel()[c as usize - 1] as u32 };
            for pattern in self.family(role) {
                if find_mono_copy(host, pattern, Some(c)).is_some() {
                    return false;
                }
            }
        }
        match self.rainbow {
            Some(t) => find_rainbow_path(host, t).is_none(),
            None => true,
        }
    }

    fn host_from(&self, colors: &[u32]) -> ColoredHost {
        let raw: Vec<i64> = colors.iter().map(|&c| c as i64).collect();
        ColoredHost::build(self.shape, &raw).expect("complete coloring")
    }
}

/// Is there a path on `t` vertices through the edge `uv` whose edges carry
/// pairwise distinct colors? `col` is the `vc * vc` color matrix (0 =
/// uncolored) and `any[x]` the colored neighbourhood of `x`.
pub fn rainbow_path_through(col: &[u32], vc: usize, any: &[VSet], u: usize, v: usize, t: usize) -> bool {
    let c0 = col[u * vc + v];
    let mut used = [0u32; 8];
    used[0] = c0;
    let on = bits::bit(u) | bits::bit(v);
    (0..=t - 2).any(|left| extend(col, vc, any, u, left, on, &mut used, 1, Some((v, t - 2 - left))))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    col: &[u32],
    vc: usize,
    any: &[VSet],
    end: usize,
    steps: usize,
    on: VSet,
    used: &mut [u32; 8],
    n_used: usize,
    then: Option<(usize, usize)>,
) -> bool {
    if steps == 0 {
        return match then {
            Some((w, r)) => extend(col, vc, any, w, r, on, used, n_used, None),
            None => true,
        };
    }
    for w in bits::members(any[end] & !on) {
        let c = col[end * vc + w];
        if used[..n_used].contains(&c) {
            continue;
        }
        used[n_used] = c;
        if extend(col, vc, any, w, steps - 1, on | bits::bit(w), used, n_used + 1, then) {
            return true;
        }
    }
    false
}

enum Flow {
    Found,
    Continue,
    Abort,
}

struct Control<'a> {
    deadline: Option<Instant>,
    timed_out: &'a AtomicBool,
    /// lowest task index that has found a witness
    best: &'a AtomicUsize,
    task: usize,
}

impl Control<'_> {
    fn should_stop(&self) -> bool {
        if self.best.load(Ordering::Relaxed) < self.task || self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }
}

struct State<'k> {
    k: &'k Kernel,
    colors: Vec<u32>,
    col: Vec<u32>,
    /// `adj[c]` for colors `1..=max_colors` (index 0 unused)
    adj: Vec<Vec<VSet>>,
    any: Vec<VSet>,
    count: Vec<usize>,
    used: usize,
    nodes: u64,
    leaves: u64,
    count_only: bool,
    prune: bool,
}

impl<'k> State<'k> {
    fn new(k: &'k Kernel, count_only: bool, prune: bool) -> Self {
        State {
            k,
            colors: Vec::with_capacity(k.edges.len()),
            col: vec![0; k.vc * k.vc],
            adj: vec![vec![0; k.vc]; k.max_colors + 1],
            any: vec![0; k.vc],
            count: vec![0; k.max_colors + 1],
            used: 0,
            nodes: 0,
            leaves: 0,
            count_only,
            prune,
        }
    }

    fn view(&self) -> PartialColoring<'_> {
        PartialColoring {
            shape: self.k.shape,
            edges: &self.k.edges,
            colors: &self.colors,
            matrix: &self.col,
            any: &self.any,
            used: self.used,
        }
    }

    fn assign(&mut self, c: u32) {
        let (u, v) = self.k.edges[self.colors.len()];
        let vc = self.k.vc;
        self.colors.push(c);
        self.col[u * vc + v] = c;
        self.col[v * vc + u] = c;
        let adj = &mut self.adj[c as usize];
        adj[u] |= bits::bit(v);
        adj[v] |= bits::bit(u);
        self.any[u] |= bits::bit(v);
        self.any[v] |= bits::bit(u);
        self.count[c as usize] += 1;
        self.used = self.used.max(c as usize);
    }

    fn unassign(&mut self) {
        let c = self.colors.pop().unwrap();
        let (u, v) = self.k.edges[self.colors.len()];
        let vc = self.k.vc;
        self.col[u * vc + v] = 0;
        self.col[v * vc + u] = 0;
        let adj = &mut self.adj[c as usize];
        adj[u] &= !bits::bit(v);
        adj[v] &= !bits::bit(u);
        self.any[u] &= !bits::bit(v);
        self.any[v] &= !bits::bit(u);
        self.count[c as usize] -= 1;
        if self.count[c as usize] == 0 && c as usize == self.used {
            self.used -= 1;
        }
    }

    fn choices(&self) -> usize {
        if self.k.symmetric {
            (self.used + 1).min(self.k.max_colors)
        } else {
            self.k.max_colors
        }
    }

    /// Whether the newest edge completes a forbidden pattern.
    fn violates(&self) -> bool {
        if !self.prune {
            return false;
        }
        let (u, v) = self.k.edges[self.colors.len() - 1];
        let c = *self.colors.last().unwrap();
        let all = bits::full(self.k.vc);
        let adj = &self.adj[c as usize];
        if self.k.plans(c).iter().any(|p| p.exists_through_edge(adj, all, u, v)) {
            return true;
        }
        match self.k.rainbow {
            Some(t) => self.used + 1 >= t && rainbow_path_through(&self.col, self.k.vc, &self.any, u, v, t),
            None => false,
        }
    }

    fn dfs(&mut self, ctl: &Control) -> Flow {
        if self.colors.len() == self.k.edges.len() {
            self.leaves += 1;
            return if self.count_only { Flow::Continue } else { Flow::Found };
        }
        for c in 1..=self.choices() as u32 {
            self.nodes += 1;
            if self.nodes & 0x3ff == 0 && ctl.should_stop() {
                return Flow::Abort;
            }
            self.assign(c);
            if !self.violates() {
                match self.dfs(ctl) {
                    Flow::Found => return Flow::Found,
                    Flow::Abort => {
                        self.unassign();
                        return Flow::Abort;
                    }
                    Flow::Continue => {}
                }
            }
            self.unassign();
        }
        Flow::Continue
    }

    /// All pruned prefixes of length `depth`, in canonical order.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<u32>>) {
        if self.colors.len() == depth {
            out.push(self.colors.clone());
            return;
        }
        for c in 1..=self.choices() as u32 {
            self.nodes += 1;
            self.assign(c);
            if !self.violates() {
                self.prefixes(depth, out);
            }
            self.unassign();
        }
    }
}

struct RunResult {
    status: SearchStatus,
    witness: Option<Vec<u32>>,
    nodes: u64,
    leaves: u64,
}

fn run_kernel(
    kernel: &Kernel,
    jobs: usize,
    deadline: Option<Instant>,
    count_only: bool,
    prune: bool,
) -> RunResult {
    let timed_out = AtomicBool::new(false);
    let best = AtomicUsize::new(usize::MAX);
    let total = kernel.edges.len();

    // root-level split into canonical-order tasks
    let mut root = State::new(kernel, count_only, prune);
    let mut depth = 0;
    let mut tasks: Vec<Vec<u32>> = vec![Vec::new()];
    if jobs > 1 {
        while depth < total && tasks.len() < 8 * jobs {
            depth += 1;
            tasks.clear();
            root.prefixes(depth, &mut tasks);
        }
    }
    let prefix_nodes = root.nodes;

    let run_task = |(i, prefix): (usize, &Vec<u32>)| {
        let ctl = Control { deadline, timed_out: &timed_out, best: &best, task: i };
        let mut st = State::new(kernel, count_only, prune);
        if ctl.should_stop() {
            return (None, st.nodes, st.leaves);
        }
        for &c in prefix {
            st.assign(c);
        }
        match st.dfs(&ctl) {
            Flow::Found => {
                best.fetch_min(i, Ordering::Relaxed);
                (Some(st.colors.clone()), st.nodes, st.leaves)
            }
            _ => (None, st.nodes, st.leaves),
        }
    };
    let results: Vec<(Option<Vec<u32>>, u64, u64)> = if jobs > 1 && tasks.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| tasks.par_iter().enumerate().map(run_task).collect())
    } else {
        let mut out = Vec::with_capacity(tasks.len());
        for t in tasks.iter().enumerate() {
            let r = run_task(t);
            let found = r.0.is_some();
            out.push(r);
            if found {
                break;
            }
        }
        out
    };

    let nodes = prefix_nodes + results.iter().map(|r| r.1).sum::<u64>();
    let leaves = results.iter().map(|r| r.2).sum();
    let witness = results.into_iter().find_map(|r| r.0);
    let status = if witness.is_some() {
        SearchStatus::Witness
    } else if timed_out.load(Ordering::Relaxed) {
        SearchStatus::Timeout
    } else {
        SearchStatus::Exhausted
    };
    RunResult { status, witness, nodes, leaves }
}

fn check_rainbow(t: Option<usize>) -> Result<(), SearchError> {
    match t {
        Some(t) if t != 4 && t != 5 => Err(SearchError::BadRainbow(t)),
        _ => Ok(()),
    }
}

fn edge_limit(budget: Budget) -> usize {
    match budget {
        Budget::Finite(k) if k <= 3 => EDGE_LIMIT_FEW,
        _ => EDGE_LIMIT_MANY,
    }
}

fn check_edges(shape: Shape, limit: usize, opts: &SearchOptions) -> Result<(), SearchError> {
    let edges = shape.edge_count();
    if edges > limit && !opts.allow_large {
        return Err(SearchError::TooManyEdges { edges, limit });
    }
    Ok(())
}

fn finish(kernel: &Kernel, r: RunResult, started: Instant) -> SearchOutcome {
    let witness = r.witness.map(|colors| {
        let host = kernel.host_from(&colors);
        assert!(kernel.is_good(&host), "search returned a coloring that fails re-verification");
        host
    });
    SearchOutcome {
        status: r.status,
        witness,
        nodes_explored: r.nodes,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }
}

fn deadline_of(opts: &SearchOptions) -> Option<Instant> {
    opts.time_limit.map(|d| Instant::now() + d)
}

/// Decides whether some coloring of the host avoids a monochromatic copy of
/// the pattern (and a rainbow path, if requested).
pub fn exists_good_coloring(p: &SearchProblem, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    exists_good_coloring_until(p, opts, deadline_of(opts))
}

fn exists_good_coloring_until(
    p: &SearchProblem,
    opts: &SearchOptions,
    deadline: Option<Instant>,
) -> Result<SearchOutcome, SearchError> {
    if !p.forbid_mono.is_nonempty() {
        return Err(SearchError::EmptyPattern);
    }
    check_rainbow(p.forbid_rainbow)?;
    check_edges(p.shape, edge_limit(p.budget), opts)?;
    let started = Instant::now();
    let max_colors = match p.budget {
        Budget::Finite(k) => k,
        Budget::Unbounded => p.shape.edge_count(),
    };
    let kernel = Kernel::new(p.shape, max_colors, true, vec![vec![p.forbid_mono.clone()]], p.forbid_rainbow);
    let r = run_kernel(&kernel, opts.jobs.max(1), deadline, false, true);
    Ok(finish(&kernel, r, started))
}

/// Two-coloring with fixed roles: color 1 must avoid every graph of
/// `color1`, color 2 every graph of `color2`. A witness keeps the role labels
/// 1 and 2 as its original colors (see [`ColoredHost::relabel`]).
pub fn exists_good_two_coloring(
    shape: Shape,
    color1: &[SimpleGraph],
    color2: &[SimpleGraph],
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    exists_good_two_coloring_until(shape, color1, color2, opts, deadline_of(opts))
}

fn exists_good_two_coloring_until(
    shape: Shape,
    color1: &[SimpleGraph],
    color2: &[SimpleGraph],
    opts: &SearchOptions,
    deadline: Option<Instant>,
) -> Result<SearchOutcome, SearchError> {
    if color1.iter().chain(color2).any(|g| !g.is_nonempty()) {
        return Err(SearchError::EmptyPattern);
    }
    check_edges(shape, EDGE_LIMIT_FEW, opts)?;
    let started = Instant::now();
    let kernel = Kernel::new(shape, 2, false, vec![color1.to_vec(), color2.to_vec()], None);
    let r = run_kernel(&kernel, opts.jobs.max(1), deadline, false, true);
    Ok(finish(&kernel, r, started))
}

/// Number of colorings the canonical enumerator visits with all pruning
/// disabled (one per color-renaming class).
pub fn count_canonical_colorings(shape: Shape, budget: Budget, jobs: usize) -> u64 {
    let max_colors = match budget {
        Budget::Finite(k) => k,
        Budget::Unbounded => shape.edge_count(),
    };
    let kernel = Kernel::new(shape, max_colors, true, vec![], None);
    run_kernel(&kernel, jobs.max(1), None, true, false).leaves
}

// ---------------------------------------------------------------------------
// Canonical enumeration with caller-controlled pruning

/// A partial coloring seen by [`enumerate_colorings`]: the first
/// `colors.len()` canonical edges are colored.
pub struct PartialColoring<'a> {
    pub shape: Shape,
    pub edges: &'a [(usize, usize)],
    pub colors: &'a [u32],
    /// `vc * vc` color matrix, 0 for uncolored pairs
    pub matrix: &'a [u32],
    /// colored neighbourhoods
    pub any: &'a [VSet],
    /// number of distinct colors so far
    pub used: usize,
}

impl PartialColoring<'_> {
    pub fn newest_edge(&self) -> (usize, usize) {
        self.edges[self.colors.len() - 1]
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.vertex_count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Skip,
}

/// Walks every canonical coloring (restricted growth strings, at most
/// `max_colors` colors). `visit` sees each partial coloring right after an
/// edge is colored and may skip its subtree; `leaf` sees complete colorings.
pub fn enumerate_colorings(
    shape: Shape,
    max_colors: usize,
    mut visit: impl FnMut(&PartialColoring) -> Visit,
    mut leaf: impl FnMut(&PartialColoring),
) {
    let kernel = Kernel::new(shape, max_colors, true, vec![], None);
    let mut st = State::new(&kernel, true, false);
    fn rec(
        st: &mut State,
        visit: &mut dyn FnMut(&PartialColoring) -> Visit,
        leaf: &mut dyn FnMut(&PartialColoring),
    ) {
        if st.colors.len() == st.k.edges.len() {
            leaf(&st.view());
            return;
        }
        for c in 1..=st.choices() as u32 {
            st.assign(c);
            if visit(&st.view()) == Visit::Descend {
                rec(st, visit, leaf);
            }
            st.unassign();
        }
    }
    rec(&mut st, &mut visit, &mut leaf);
}

// ---------------------------------------------------------------------------
// Number sweeps

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepStep {
    pub n: usize,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NumberStatus {
    Exact,
    LowerBound,
    Timeout,
}

/// Result of an ascending sweep over host sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberOutcome {
    pub quantity: String,
    pub status: NumberStatus,
    /// the exact value when `status` is EXACT
    pub value: Option<usize>,
    /// the number is at least this
    pub lower_bound: usize,
    /// a good coloring on `lower_bound - 1` vertices (per side)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ColoredHost>,
    pub steps: Vec<SweepStep>,
}

fn sweep(
    quantity: String,
    start: usize,
    n_max: usize,
    trivial: impl Fn(usize) -> Option<ColoredHost>,
    mut step: impl FnMut(usize) -> Result<SearchOutcome, SearchError>,
) -> Result<NumberOutcome, SearchError> {
    let mut witness = if start >= 1 { trivial(start - 1) } else { None };
    let mut steps = Vec::new();
    for n in start..=n_max {
        let out = step(n)?;
        steps.push(SweepStep {
            n,
            status: out.status,
            nodes_explored: out.nodes_explored,
            wall_time_ms: out.wall_time_ms,
        });
        match out.status {
            SearchStatus::Witness => witness = out.witness,
            SearchStatus::Exhausted => {
                return Ok(NumberOutcome {
                    quantity,
                    status: NumberStatus::Exact,
                    value: Some(n),
                    lower_bound: n,
                    witness,
                    steps,
                })
            }
            SearchStatus::Timeout => {
                return Ok(NumberOutcome {
                    quantity,
                    status: NumberStatus::Timeout,
                    value: None,
                    lower_bound: n,
                    witness,
                    steps,
                })
            }
        }
    }
    Ok(NumberOutcome {
        quantity,
        status: NumberStatus::LowerBound,
        value: None,
        lower_bound: n_max.max(start.saturating_sub(1)) + 1,
        witness,
        steps,
    })
}

fn complete_shape(n: usize) -> Shape {
    Shape::Complete { n }
}

fn monochrome(shape: Shape, label: u32) -> Option<ColoredHost> {
    if shape.edge_count() == 0 {
        return None;
    }
    Some(ColoredHost::from_fn(shape, |_, _| label))
}

/// `R_k(h)`: the least `n <= n_max` such that every `k`-coloring of `K_n`
/// has a monochromatic `h`.
pub fn ramsey_k(h: &SimpleGraph, k: usize, n_max: usize, opts: &SearchOptions) -> Result<NumberOutcome, SearchError> {
    let deadline = deadline_of(opts);
    let budget = Budget::Finite(k.max(1));
    sweep(
        format!("R_{k}({})", h.to_graph6()),
        h.order().max(2),
        n_max,
        |n| monochrome(complete_shape(n), 1),
        |n| {
            let p = SearchProblem { shape: complete_shape(n), budget, forbid_mono: h.clone(), forbid_rainbow: None };
            exists_good_coloring_until(&p, opts, deadline)
        },
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstrainedOutcome {
    pub constrained: NumberOutcome,
    /// `R_{t-2}(h)`, the trivial lower bound
    pub ramsey: NumberOutcome,
    /// `f(h, P_t) >= R_{t-2}(h)`, when both are exact
    pub lower_bound_holds: Option<bool>,
}

/// `f(h, P_t)`: the least `n` such that every coloring of `K_n` (any number
/// of colors) has a monochromatic `h` or a rainbow `P_t`. The number of
/// colors is bounded by the number of edges.
pub fn constrained_ramsey(h: &SimpleGraph, t: usize, n_max: usize, opts: &SearchOptions) -> Result<ConstrainedOutcome, SearchError> {
    check_rainbow(Some(t))?;
    let deadline = deadline_of(opts);
    let constrained = sweep(
        format!("f({},P_{t})", h.to_graph6()),
        h.order().max(2),
        n_max,
        |n| monochrome(complete_shape(n), 1),
        |n| {
            let p = SearchProblem {
                shape: complete_shape(n),
                budget: Budget::Unbounded,
                forbid_mono: h.clone(),
                forbid_rainbow: Some(t),
            };
            exists_good_coloring_until(&p, opts, deadline)
        },
    )?;
    let ramsey = ramsey_k(h, t - 2, n_max, opts)?;
    let lower_bound_holds = match (constrained.value, ramsey.value) {
        (Some(f), Some(r)) => Some(f >= r),
        _ => None,
    };
    Ok(ConstrainedOutcome { constrained, ramsey, lower_bound_holds })
}

/// `R(g1, g2)` with fixed color roles.
pub fn two_color_ramsey(g1: &SimpleGraph, g2: &SimpleGraph, n_max: usize, opts: &SearchOptions) -> Result<NumberOutcome, SearchError> {
    let quantity = format!("R({},{})", g1.to_graph6(), g2.to_graph6());
    two_color_ramsey_families(quantity, std::slice::from_ref(g1), std::slice::from_ref(g2), n_max, opts)
}

/// `R(F1, F2)` for families: the least `n` such that every 2-coloring of
/// `K_n` has a color-1 member of `F1` or a color-2 member of `F2`.
pub fn two_color_ramsey_families(
    quantity: String,
    color1: &[SimpleGraph],
    color2: &[SimpleGraph],
    n_max: usize,
    opts: &SearchOptions,
) -> Result<NumberOutcome, SearchError> {
    let deadline = deadline_of(opts);
    let min1 = color1.iter().map(|g| g.order()).min().unwrap_or(0);
    let min2 = color2.iter().map(|g| g.order()).min().unwrap_or(0);
    // below max(min1, min2) one color alone avoids its whole family
    let start = min1.max(min2).max(2);
    let label = if min1 >= min2 { 1 } else { 2 };
    sweep(
        quantity,
        start,
        n_max,
        |n| monochrome(complete_shape(n), label),
        |n| exists_good_two_coloring_until(complete_shape(n), color1, color2, opts, deadline),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteOutcome {
    #[serde(flatten)]
    pub number: NumberOutcome,
    /// `k (t(h) - 1) + 1` for connected `h` (finite budgets only)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_lower_bound: Option<usize>,
}

fn bipartite_start(h: &SimpleGraph) -> Result<usize, SearchError> {
    Ok(partite_profile(h)?.t_star.max(1))
}

/// `BR_k(h)`: the least `n` such that every `k`-coloring of `K_{n,n}` has a
/// monochromatic `h`.
pub fn bipartite_ramsey_k(h: &SimpleGraph, k: usize, n_max: usize, opts: &SearchOptions) -> Result<BipartiteOutcome, SearchError> {
    let number = bipartite_sweep(h, None, Budget::Finite(k.max(1)), n_max, opts, format!("BR_{k}({})", h.to_graph6()))?;
    let blowup_lower_bound = if h.is_connected() {
        Some(k * (partite_profile(h)?.t - 1) + 1)
    } else {
        None
    };
    Ok(BipartiteOutcome { number, blowup_lower_bound })
}

/// `h_k(h, P_t)` (or `h(h, P_t)` for an unbounded budget) on `K_{n,n}`.
pub fn bipartite_constrained(
    h: &SimpleGraph,
    t: usize,
    budget: Budget,
    n_max: usize,
    opts: &SearchOptions,
) -> Result<BipartiteOutcome, SearchError> {
    check_rainbow(Some(t))?;
    let quantity = match budget {
        Budget::Finite(k) => format!("h_{k}({},P_{t})", h.to_graph6()),
        Budget::Unbounded => format!("h({},P_{t})", h.to_graph6()),
    };
    let number = bipartite_sweep(h, Some(t), budget, n_max, opts, quantity)?;
    Ok(BipartiteOutcome { number, blowup_lower_bound: None })
}

fn bipartite_sweep(
    h: &SimpleGraph,
    t: Option<usize>,
    budget: Budget,
    n_max: usize,
    opts: &SearchOptions,
    quantity: String,
) -> Result<NumberOutcome, SearchError> {
    let start = bipartite_start(h)?;
    let deadline = deadline_of(opts);
    sweep(
        quantity,
        start,
        n_max,
        |n| monochrome(Shape::Bipartite { m: n, n }, 1),
        |n| {
            let p = SearchProblem {
                shape: Shape::Bipartite { m: n, n },
                budget,
                forbid_mono: h.clone(),
                forbid_rainbow: t,
            };
            exists_good_coloring_until(&p, opts, deadline)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn pentagon_is_the_largest_triangle_free_two_coloring() {
        let k3 = SimpleGraph::complete(3);
        let p5 = SearchProblem { shape: complete_shape(5), budget: Budget::Finite(2), forbid_mono: k3.clone(), forbid_rainbow: None };
        let out = exists_good_coloring(&p5, &seq()).unwrap();
        assert_eq!(out.status, SearchStatus::Witness);
        let w = out.witness.unwrap();
        assert!(find_mono_copy(&w, &k3, None).is_none());
        let p6 = SearchProblem { shape: complete_shape(6), ..p5 };
        assert_eq!(exists_good_coloring(&p6, &seq()).unwrap().status, SearchStatus::Exhausted);
    }

    #[test]
    fn role_bound_colors_are_available_on_a_single_edge() {
        // the only good coloring of K_2 uses color 2 alone
        let out = exists_good_two_coloring(
            complete_shape(2),
            &[SimpleGraph::complete(2)],
            &[SimpleGraph::path(3)],
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(out.status, SearchStatus::Witness);
        assert_eq!(out.witness.unwrap().relabel(), vec![2]);
    }

    #[test]
    fn canonical_counts_are_bell_and_stirling_sums() {
        // Bell(6) = 203; S(6,1) + S(6,2) = 32; Bell(9) = 21147
        assert_eq!(count_canonical_colorings(complete_shape(4), Budget::Unbounded, 1), 203);
        assert_eq!(count_canonical_colorings(complete_shape(4), Budget::Finite(2), 1), 32);
        assert_eq!(count_canonical_colorings(Shape::Bipartite { m: 3, n: 3 }, Budget::Unbounded, 1), 21147);
    }

    #[test]
    fn rainbow_through_edge_matches_full_detector() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let n = rng.gen_range(4..=7);
            let k = rng.gen_range(2..=6);
            let host = ColoredHost::from_fn(complete_shape(n), |_, _| rng.gen_range(1..=k));
            let vc = n;
            let mut col = vec![0u32; vc * vc];
            let mut any = vec![0u128; vc];
            for (&(u, v), &c) in host.edges().iter().zip(host.colors()) {
                col[u * vc + v] = c;
                col[v * vc + u] = c;
                any[u] |= bits::bit(v);
                any[v] |= bits::bit(u);
            }
            for t in [4, 5] {
                let through_some = host.edges().iter().any(|&(u, v)| rainbow_path_through(&col, vc, &any, u, v, t));
                assert_eq!(through_some, find_rainbow_path(&host, t).is_some());
            }
        }
    }

    #[test]
    fn small_numbers() {
        let p3 = SimpleGraph::path(3);
        assert_eq!(ramsey_k(&p3, 2, 6, &seq()).unwrap().value, Some(3));
        assert_eq!(ramsey_k(&p3, 3, 6, &seq()).unwrap().value, Some(5));
        let k2 = SimpleGraph::complete(2);
        assert_eq!(two_color_ramsey(&k2, &SimpleGraph::complete(3), 4, &seq()).unwrap().value, Some(3));
        assert_eq!(two_color_ramsey(&p3, &p3, 5, &seq()).unwrap().value, Some(3));
        let k12 = SimpleGraph::star(2);
        assert_eq!(bipartite_ramsey_k(&k12, 2, 4, &seq()).unwrap().number.value, Some(3));
        let m2 = k2.copies(2);
        assert_eq!(bipartite_ramsey_k(&m2, 1, 3, &seq()).unwrap().number.value, Some(2));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let k3 = SimpleGraph::complete(3);
        let p = SearchProblem { shape: complete_shape(5), budget: Budget::Finite(2), forbid_mono: k3, forbid_rainbow: None };
        let a = exists_good_coloring(&p, &seq()).unwrap();
        let b = exists_good_coloring(&p, &SearchOptions { jobs: 3, ..seq() }).unwrap();
        assert_eq!((a.status, a.witness), (b.status, b.witness));
    }

    #[test]
    fn limits_and_budget_parsing() {
        let p = SearchProblem { shape: complete_shape(10), budget: Budget::Unbounded, forbid_mono: SimpleGraph::path(3), forbid_rainbow: Some(5) };
        assert_eq!(exists_good_coloring(&p, &seq()), Err(SearchError::TooManyEdges { edges: 45, limit: 36 }));
        assert_eq!("unbounded".parse::<Budget>(), Ok(Budget::Unbounded));
        assert_eq!("3".parse::<Budget>(), Ok(Budget::Finite(3)));
        assert!("0".parse::<Budget>().is_err());
        assert_eq!(serde_json::to_string(&Budget::Unbounded).unwrap(), "\"unbounded\"");
    }
}
