//! Edge-colored complete and complete-bipartite hosts, and the two pattern
//! queries: monochromatic copy of a graph, rainbow path.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bits::{self, VSet, MAX_VERTICES};
use crate::graph::{PatternPlan, SimpleGraph};

/// Host shape. Bipartite hosts put the left side on `0..m` and the right
/// side on `m..m+n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Complete { n: usize },
    Bipartite { m: usize, n: usize },
}

impl Shape {
    pub fn vertex_count(&self) -> usize {
        match *self {
            Shape::Complete { n } => n,
            Shape::Bipartite { m, n } => m + n,
        }
    }

    pub fn edge_count(&self) -> usize {
        match *self {
            Shape::Complete { n } => n * n.saturating_sub(1) / 2,
            Shape::Bipartite { m, n } => m * n,
        }
    }

    /// Edges in canonical order: lexicographic pairs for complete hosts,
    /// row-major (left, right) for bipartite ones.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            Shape::Complete { n } => {
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
            }
            Shape::Bipartite { m, n } => {
                (0..m).flat_map(|u| (m..m + n).map(move |v| (u, v))).collect()
            }
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::Complete { n } => write!(f, "K_{n}"),
            Shape::Bipartite { m, n } => write!(f, "K_{{{m},{n}}}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HostError {
    #[error("{shape} has {expected} edges but {found} colors were given")]
    LengthMismatch { shape: Shape, expected: usize, found: usize },
    #[error("edge {index} has color {value}; colors must be positive")]
    NonPositiveColor { index: usize, value: i64 },
    #[error("host has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooLarge(usize),
}

/// An edge-colored host. Colors are stored normalized to `1..=k` in order of
/// first occurrence along the canonical edge order.
#[derive(Clone)]
pub struct ColoredHost {
    shape: Shape,
    colors: Vec<u32>,
    original: Vec<i64>,
    edges: Vec<(usize, usize)>,
    /// `matrix[u * v_count + v]`, 0 when `uv` is not an edge
    matrix: Vec<u32>,
    /// per color (index `c - 1`), adjacency over all host vertices
    color_adj: Vec<Vec<VSet>>,
}

/// First-occurrence relabelling; returns normalized colors and the original
/// label of each normalized color.
pub fn normalize_colors(colors: &[i64]) -> (Vec<u32>, Vec<i64>) {
    let mut labels: Vec<i64> = Vec::new();
    let mut index: BTreeMap<i64, u32> = BTreeMap::new();
    let out = colors
        .iter()
        .map(|&c| {
            *index.entry(c).or_insert_with(|| {
                labels.push(c);
                labels.len() as u32
            })
        })
        .collect();
    (out, labels)
}

impl ColoredHost {
    pub fn build(shape: Shape, colors: &[i64]) -> Result<ColoredHost, HostError> {
        let vc = shape.vertex_count();
        if vc > MAX_VERTICES {
            return Err(HostError::TooLarge(vc));
        }
        let expected = shape.edge_count();
        if colors.len() != expected {
            return Err(HostError::LengthMismatch { shape, expected, found: colors.len() });
        }
        if let Some((index, &value)) = colors.iter().enumerate().find(|(_, &c)| c <= 0) {
            return Err(HostError::NonPositiveColor { index, value });
        }
        let (normalized, original) = normalize_colors(colors);
        Ok(Self::assemble(shape, normalized, original))
    }

    /// Builds a host by asking `color(u, v)` for every canonical edge.
    pub fn from_fn(shape: Shape, mut color: impl FnMut(usize, usize) -> u32) -> ColoredHost {
        let raw: Vec<i64> = shape.edges().into_iter().map(|(u, v)| color(u, v) as i64).collect();
        Self::build(shape, &raw).expect("generated colors are positive and complete")
    }

    fn assemble(shape: Shape, colors: Vec<u32>, original: Vec<i64>) -> ColoredHost {
        let vc = shape.vertex_count();
        let edges = shape.edges();
        let k = original.len();
        let mut matrix = vec![0u32; vc * vc];
        let mut color_adj = vec![vec![0u128; vc]; k];
        for (&(u, v), &c) in edges.iter().zip(&colors) {
            matrix[u * vc + v] = c;
            matrix[v * vc + u] = c;
            let adj = &mut color_adj[c as usize - 1];
            adj[u] |= bits::bit(v);
            adj[v] |= bits::bit(u);
        }
        ColoredHost { shape, colors, original, edges, matrix, color_adj }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.vertex_count()
    }

    /// Number of distinct colors.
    pub fn k(&self) -> usize {
        self.original.len()
    }

    /// Normalized colors in canonical edge order.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Original label of each normalized color (`relabel()[c - 1]`).
    pub fn relabel(&self) -> &[i64] {
        &self.original
    }

    /// Normalized color of the original label, if used.
    pub fn normalized_color(&self, original: i64) -> Option<u32> {
        self.original.iter().position(|&c| c == original).map(|i| i as u32 + 1)
    }

    /// Color of edge `uv` or `None` if it is not a host edge.
    pub fn color(&self, u: usize, v: usize) -> Option<u32> {
        let vc = self.vertex_count();
        if u >= vc || v >= vc {
            return None;
        }
        match self.matrix[u * vc + v] {
            0 => None,
            c => Some(c),
        }
    }

    /// Adjacency of one color class (`1..=k`).
    pub fn color_adjacency(&self, c: u32) -> &[VSet] {
        &self.color_adj[c as usize - 1]
    }

    /// Adjacency of the underlying uncolored host.
    pub fn host_adjacency(&self) -> Vec<VSet> {
        let vc = self.vertex_count();
        (0..vc)
            .map(|u| self.color_adj.iter().fold(0u128, |s, adj| s | adj[u]))
            .collect()
    }

    /// The graph formed by the edges of one color.
    pub fn color_graph(&self, c: u32) -> SimpleGraph {
        SimpleGraph::from_adjacency(self.color_adjacency(c).to_vec())
    }

    /// A copy with edge `uv` recolored to the (original-label) color `c`,
    /// renormalized.
    pub fn recolored(&self, u: usize, v: usize, c: i64) -> ColoredHost {
        let mut raw = self.original_colors();
        let idx = self
            .edges
            .iter()
            .position(|&e| e == (u.min(v), u.max(v)) || e == (u, v) || e == (v, u))
            .expect("edge exists");
        raw[idx] = c;
        Self::build(self.shape, &raw).expect("valid recoloring")
    }

    /// Colors in canonical order using the original labels.
    pub fn original_colors(&self) -> Vec<i64> {
        self.colors.iter().map(|&c| self.original[c as usize - 1]).collect()
    }

    /// Colors of the edges among `verts` (a set of host vertices).
    pub fn colors_within(&self, verts: VSet) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .edges
            .iter()
            .zip(&self.colors)
            .filter(|((u, v), _)| bits::contains(verts, *u) && bits::contains(verts, *v))
            .map(|(_, &c)| c)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl PartialEq for ColoredHost {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.colors == other.colors
    }
}

impl Eq for ColoredHost {}

impl std::fmt::Debug for ColoredHost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ColoredHost({}, k={}, {:?})", self.shape, self.k(), self.colors)
    }
}

#[derive(Serialize, Deserialize)]
struct HostRepr {
    #[serde(flatten)]
    shape: Shape,
    colors: Vec<i64>,
}

impl Serialize for ColoredHost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HostRepr { shape: self.shape, colors: self.colors.iter().map(|&c| c as i64).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredHost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = HostRepr::deserialize(d)?;
        ColoredHost::build(repr.shape, &repr.colors).map_err(serde::de::Error::custom)
    }
}

/// Pattern vertex -> host vertex, plus the color(s) used: one entry for a
/// monochromatic copy, the edge colors along the path for a rainbow path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub host_vertices: Vec<usize>,
    pub colors: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCensus {
    pub color_count: usize,
    pub per_color_edge_count: BTreeMap<u32, usize>,
    /// components of the graph formed by the edges of each color
    pub per_color_components: BTreeMap<u32, usize>,
}

pub fn color_census(host: &ColoredHost) -> ColorCensus {
    let mut per_color_edge_count = BTreeMap::new();
    let mut per_color_components = BTreeMap::new();
    for c in 1..=host.k() as u32 {
        let adj = host.color_adjacency(c);
        let touched = adj
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0)
            .fold(0u128, |s, (v, _)| s | bits::bit(v));
        let edges = adj.iter().map(|a| bits::count(*a)).sum::<usize>() / 2;
        per_color_edge_count.insert(c, edges);
        per_color_components.insert(c, bits::components_within(adj, touched).len());
    }
    ColorCensus { color_count: host.k(), per_color_edge_count, per_color_components }
}

/// A reusable monochromatic-copy detector for one pattern.
#[derive(Clone, Debug)]
pub struct MonoDetector {
    pattern: SimpleGraph,
    plan: PatternPlan,
}

impl MonoDetector {
    pub fn new(pattern: &SimpleGraph) -> MonoDetector {
        MonoDetector { pattern: pattern.clone(), plan: PatternPlan::new(pattern) }
    }

    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    /// Searches one color class (or each color in increasing order).
    pub fn find(&self, host: &ColoredHost, color: Option<u32>) -> Option<Embedding> {
        let all = bits::full(host.vertex_count());
        if self.pattern.order() > host.vertex_count() {
            return None;
        }
        let colors: Vec<u32> = match color {
            Some(c) if c >= 1 && c as usize <= host.k() => vec![c],
            Some(_) => return None,
            None => (1..=host.k() as u32).collect(),
        };
        if self.pattern.edge_count() == 0 {
            let c = colors.first().copied().unwrap_or(1);
            return Some(Embedding { host_vertices: (0..self.pattern.order()).collect(), colors: vec![c] });
        }
        for c in colors {
            let adj = host.color_adjacency(c);
            let edges = adj.iter().map(|a| bits::count(*a)).sum::<usize>() / 2;
            if edges < self.plan.edge_count() {
                continue;
            }
            // counting cut: too few vertices touched by color c
            let touched = adj.iter().filter(|a| **a != 0).count();
            if touched < self.pattern.order() - self.pattern.isolated_vertices().len() {
                continue;
            }
            if let Some(map) = self.plan.find(adj, all) {
                return Some(Embedding { host_vertices: map, colors: vec![c] });
            }
        }
        None
    }
}

/// Monochromatic copy of `pattern`, in `color` if given (normalized color).
pub fn find_mono_copy(host: &ColoredHost, pattern: &SimpleGraph, color: Option<u32>) -> Option<Embedding> {
    MonoDetector::new(pattern).find(host, color)
}

/// A path on `t` vertices whose edges have pairwise distinct colors.
/// Dedicated path DFS; the first path in (start vertex, neighbour) order is
/// returned.
pub fn find_rainbow_path(host: &ColoredHost, t: usize) -> Option<Embedding> {
    assert!(t >= 2, "rainbow paths need at least two vertices");
    let vc = host.vertex_count();
    if t > vc || host.k() < t - 1 {
        return None;
    }
    let adj = host.host_adjacency();
    let mut path = Vec::with_capacity(t);
    let mut used = Vec::with_capacity(t);
    for s in 0..vc {
        path.push(s);
        if extend_rainbow(host, &adj, t, &mut path, &mut used, bits::bit(s)) {
            return Some(Embedding { host_vertices: path, colors: used });
        }
        path.pop();
    }
    None
}

fn extend_rainbow(
    host: &ColoredHost,
    adj: &[VSet],
    t: usize,
    path: &mut Vec<usize>,
    used: &mut Vec<u32>,
    on_path: VSet,
) -> bool {
    if path.len() == t {
        return true;
    }
    let end = *path.last().unwrap();
    for w in bits::members(adj[end] & !on_path) {
        let c = host.color(end, w).unwrap();
        if used.contains(&c) {
            continue;
        }
        path.push(w);
        used.push(c);
        if extend_rainbow(host, adj, t, path, used, on_path | bits::bit(w)) {
            return true;
        }
        path.pop();
        used.pop();
    }
    false
}

/// Rainbow copy of an arbitrary pattern (all pattern edges pairwise
/// distinctly colored). Generic backtracking over pattern vertices.
pub fn find_rainbow_copy(host: &ColoredHost, pattern: &SimpleGraph) -> Option<Embedding> {
    let n = pattern.order();
    let vc = host.vertex_count();
    if n > vc || pattern.edge_count() > host.k() {
        return None;
    }
    // BFS-like order so that each vertex after the first of a component has
    // an earlier neighbour
    let mut seq = Vec::with_capacity(n);
    let mut placed: VSet = 0;
    while seq.len() < n {
        let next = (0..n)
            .filter(|&v| !bits::contains(placed, v))
            .max_by_key(|&v| (bits::count(pattern.neighbors(v) & placed), std::cmp::Reverse(v)))
            .unwrap();
        seq.push(next);
        placed |= bits::bit(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = Vec::new();
    fn rec(
        host: &ColoredHost,
        pattern: &SimpleGraph,
        seq: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut Vec<u32>,
        taken: VSet,
    ) -> bool {
        if i == seq.len() {
            return true;
        }
        let p = seq[i];
        let earlier: Vec<usize> = seq[..i]
            .iter()
            .copied()
            .filter(|&q| pattern.has_edge(p, q))
            .collect();
        'host: for h in 0..host.vertex_count() {
            if bits::contains(taken, h) {
                continue;
            }
            let mut added = 0;
            for &q in &earlier {
                match host.color(h, map[q]) {
                    Some(c) if !used.contains(&c) => {
                        used.push(c);
                        added += 1;
                    }
                    _ => {
                        used.truncate(used.len() - added);
                        continue 'host;
                    }
                }
            }
            map[p] = h;
            if rec(host, pattern, seq, i + 1, map, used, taken | bits::bit(h)) {
                return true;
            }
            used.truncate(used.len() - added);
        }
        false
    }
    if rec(host, pattern, &seq, 0, &mut map, &mut used, 0) {
        let colors = pattern.edges().iter().map(|&(a, b)| host.color(map[a], map[b]).unwrap()).collect();
        Some(Embedding { host_vertices: map, colors })
    } else {
        None
    }
}

/// Checks that `e` is a monochromatic copy of `pattern`.
pub fn is_mono_embedding(host: &ColoredHost, pattern: &SimpleGraph, e: &Embedding) -> bool {
    injective_into(host, pattern.order(), &e.host_vertices)
        && e.colors.len() == 1
        && pattern
            .edges()
            .iter()
            .all(|&(a, b)| host.color(e.host_vertices[a], e.host_vertices[b]) == Some(e.colors[0]))
}

/// Checks that `e` is a rainbow path on `t` vertices.
pub fn is_rainbow_path(host: &ColoredHost, t: usize, e: &Embedding) -> bool {
    if !injective_into(host, t, &e.host_vertices) {
        return false;
    }
    let mut seen = Vec::new();
    for w in e.host_vertices.windows(2) {
        match host.color(w[0], w[1]) {
            Some(c) if !seen.contains(&c) => seen.push(c),
            _ => return false,
        }
    }
    true
}

fn injective_into(host: &ColoredHost, order: usize, map: &[usize]) -> bool {
    let mut seen: VSet = 0;
    map.len() == order
        && map.iter().all(|&h| {
            let fresh = h < host.vertex_count() && !bits::contains(seen, h);
            seen |= bits::bit(h.min(127));
            fresh
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_normalizes() {
        let h = ColoredHost::build(Shape::Complete { n: 3 }, &[1, 1, 1]).unwrap();
        assert_eq!(h.k(), 1);
        let h = ColoredHost::build(Shape::Complete { n: 3 }, &[5, 7, 5]).unwrap();
        assert_eq!((h.colors(), h.k(), h.relabel()), (&[1, 2, 1][..], 2, &[5, 7][..]));
        let h = ColoredHost::build(Shape::Bipartite { m: 2, n: 2 }, &[1, 2, 3, 4]).unwrap();
        assert_eq!(h.k(), 4);
        assert_eq!(h.color(1, 3), Some(4));
        assert_eq!(h.color(0, 1), None);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            ColoredHost::build(Shape::Complete { n: 3 }, &[1, 1]),
            Err(HostError::LengthMismatch { expected: 3, found: 2, .. })
        ));
        assert_eq!(
            ColoredHost::build(Shape::Complete { n: 3 }, &[1, 0, 1]),
            Err(HostError::NonPositiveColor { index: 1, value: 0 })
        );
    }

    #[test]
    fn json_shape() {
        let h = ColoredHost::build(Shape::Bipartite { m: 1, n: 2 }, &[3, 9]).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"shape":"bipartite","m":1,"n":2,"colors":[1,2]}"#);
        let back: ColoredHost = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let c: ColoredHost =
            serde_json::from_str(r#"{"shape":"complete","n":3,"colors":[2,2,4]}"#).unwrap();
        assert_eq!(c.colors(), &[1, 1, 2]);
        assert!(serde_json::from_str::<ColoredHost>(r#"{"shape":"complete","n":3,"colors":[2,-1,4]}"#).is_err());
    }

    #[test]
    fn census_examples() {
        let mono = ColoredHost::from_fn(Shape::Complete { n: 4 }, |_, _| 1);
        let c = color_census(&mono);
        assert_eq!((c.color_count, c.per_color_edge_count[&1]), (1, 6));
        // three perfect matchings of K4
        let proper = ColoredHost::from_fn(Shape::Complete { n: 4 }, |u, v| (u ^ v) as u32);
        let c = color_census(&proper);
        assert_eq!(c.color_count, 3);
        assert!(c.per_color_edge_count.values().all(|&x| x == 2));
        assert!(c.per_color_components.values().all(|&x| x == 2));
    }

    #[test]
    fn mono_examples() {
        let k3 = SimpleGraph::complete(3);
        let mono = ColoredHost::from_fn(Shape::Complete { n: 5 }, |_, _| 1);
        let e = find_mono_copy(&mono, &k3, None).unwrap();
        assert_eq!(e.colors, vec![1]);
        assert!(is_mono_embedding(&mono, &k3, &e));
        // pentagon / pentagram
        let pent = ColoredHost::from_fn(Shape::Complete { n: 5 }, |u, v| {
            if (v - u) % 5 == 1 || (v - u) % 5 == 4 { 1 } else { 2 }
        });
        assert!(find_mono_copy(&pent, &k3, None).is_none());
    }

    #[test]
    fn rainbow_examples() {
        // path 0-1-2-3-4 colored 1,2,3,4, everything else color 1
        let host = ColoredHost::from_fn(Shape::Complete { n: 5 }, |u, v| {
            if v == u + 1 { u as u32 + 1 } else { 1 }
        });
        let e = find_rainbow_path(&host, 5).unwrap();
        assert!(is_rainbow_path(&host, 5, &e));
        let three = ColoredHost::from_fn(Shape::Complete { n: 6 }, |u, v| ((u + v) % 3) as u32 + 1);
        assert!(find_rainbow_path(&three, 5).is_none());
        assert!(find_rainbow_copy(&three, &SimpleGraph::path(5)).is_none());
    }
}
