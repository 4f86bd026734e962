//! Test-side oracles and generators. Nothing here calls the detectors it is
//! used to check.
#![allow(dead_code)]

pub mod gen;

use std::collections::BTreeSet;

use rand::Rng;
use ramsey_forge::{ColoredHost, Shape, SimpleGraph};

/// All orderings of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sorted edge list under the relabelling that makes it lexicographically
/// smallest. Brute force; intended for at most 7 vertices.
pub fn canonical_form(g: &SimpleGraph) -> (usize, Vec<(usize, usize)>) {
    let edges = g.edges();
    let best = permutations(g.order())
        .into_iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default();
    (g.order(), best)
}

pub fn brute_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    a.order() == b.order() && a.edge_count() == b.edge_count() && canonical_form(a) == canonical_form(b)
}

/// Every graph on `n` vertices up to isomorphism, with at least
/// `min_edges` edges.
pub fn all_graphs(n: usize, min_edges: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if (mask.count_ones() as usize) < min_edges {
            continue;
        }
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = SimpleGraph::from_edges(n, &edges).unwrap();
        if seen.insert(canonical_form(&g)) {
            out.push(g);
        }
    }
    out
}

/// Color of the host edge `uv`, or `None` for a non-edge, read from the
/// canonical edge list.
pub fn edge_color(host: &ColoredHost, u: usize, v: usize) -> Option<u32> {
    let (a, b) = (u.min(v), u.max(v));
    host.edges().iter().position(|&e| e == (a, b)).map(|i| host.colors()[i])
}

fn color_table(host: &ColoredHost) -> Vec<Vec<Option<u32>>> {
    let n = host.vertex_count();
    let mut t = vec![vec![None; n]; n];
    for (&(u, v), &c) in host.edges().iter().zip(host.colors()) {
        t[u][v] = Some(c);
        t[v][u] = Some(c);
    }
    t
}

/// Injective maps of `k` pattern vertices into `n` host vertices.
fn injections(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                let hit = rec(n, k, cur, used, f);
                cur.pop();
                used[v] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    rec(n, k, &mut Vec::new(), &mut vec![false; n], &mut f)
}

/// Monochromatic copy of `pattern` by trying every injective placement.
pub fn naive_mono(host: &ColoredHost, pattern: &SimpleGraph) -> bool {
    let t = color_table(host);
    let edges = pattern.edges();
    if pattern.order() > host.vertex_count() {
        return false;
    }
    injections(host.vertex_count(), pattern.order(), |map| {
        let first = t[map[edges[0].0]][map[edges[0].1]];
        first.is_some() && edges.iter().all(|&(a, b)| t[map[a]][map[b]] == first)
    })
}

/// Rainbow path on `len` vertices by trying every vertex sequence.
pub fn naive_rainbow_path(host: &ColoredHost, len: usize) -> bool {
    let t = color_table(host);
    if len > host.vertex_count() {
        return false;
    }
    injections(host.vertex_count(), len, |seq| {
        let mut seen = Vec::new();
        for w in seq.windows(2) {
            match t[w[0]][w[1]] {
                Some(c) if !seen.contains(&c) => seen.push(c),
                _ => return false,
            }
        }
        true
    })
}

pub fn random_host<R: Rng>(rng: &mut R, max_vertices: usize) -> ColoredHost {
    let shape = if rng.gen_bool(0.7) {
        Shape::Complete { n: rng.gen_range(2..=max_vertices) }
    } else {
        let m = rng.gen_range(1..=max_vertices / 2);
        let n = rng.gen_range(1..=max_vertices - m);
        Shape::Bipartite { m, n }
    };
    let k = rng.gen_range(1..=6);
    let colors: Vec<i64> = (0..shape.edge_count()).map(|_| rng.gen_range(1..=k)).collect();
    ColoredHost::build(shape, &colors).unwrap()
}

/// Random graph on 2..=`max_order` vertices with at least one edge.
pub fn random_pattern<R: Rng>(rng: &mut R, max_order: usize) -> SimpleGraph {
    loop {
        let n = rng.gen_range(2..=max_order);
        let p = rng.gen_range(0.2..0.9);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        if !edges.is_empty() {
            return SimpleGraph::from_edges(n, &edges).unwrap();
        }
    }
}

/// Whether `h` embeds in the complete multipartite graph with one part
/// inducing `m` (plus spare vertices) and `others` large independent parts.
/// Brute force over vertex assignments.
fn covered_by(h: &SimpleGraph, others: usize) -> Vec<SimpleGraph> {
    // every assignment of H's vertices to part 0 (the special part) or to
    // one of `others` independent parts
    let n = h.order();
    let parts = others + 1;
    let mut out = Vec::new();
    let total = parts.pow(n as u32);
    for code in 0..total {
        let mut a = vec![0usize; n];
        let mut c = code;
        for x in a.iter_mut() {
            *x = c % parts;
            c /= parts;
        }
        let independent = h.edges().iter().all(|&(u, v)| a[u] == 0 || a[u] != a[v]);
        if !independent {
            continue;
        }
        let inside: Vec<(usize, usize)> = h.edges().into_iter().filter(|&(u, v)| a[u] == 0 && a[v] == 0).collect();
        if inside.is_empty() {
            continue;
        }
        // the graph formed by the inside edges, isolated vertices dropped
        let verts: BTreeSet<usize> = inside.iter().flat_map(|&(u, v)| [u, v]).collect();
        let idx: Vec<usize> = verts.into_iter().collect();
        let pos = |x: usize| idx.iter().position(|&y| y == x).unwrap();
        let e: Vec<(usize, usize)> = inside.iter().map(|&(u, v)| (pos(u), pos(v))).collect();
        out.push(SimpleGraph::from_edges(idx.len(), &e).unwrap());
    }
    out
}

/// Subgraph test by brute force over injections (no isolated vertices in
/// `small` are needed beyond its order).
pub fn brute_subgraph(small: &SimpleGraph, big: &SimpleGraph) -> bool {
    if small.order() > big.order() {
        return false;
    }
    let edges = small.edges();
    injections(big.order(), small.order(), |map| edges.iter().all(|&(a, b)| big.has_edge(map[a], map[b])))
}

/// Decomposition family of `h` with `others = chi(h) - index` large
/// independent parts: inclusion-minimal graphs, one per isomorphism class,
/// as canonical forms.
pub fn decomposition_family_oracle(h: &SimpleGraph, others: usize) -> BTreeSet<(usize, Vec<(usize, usize)>)> {
    let cands = covered_by(h, others);
    let mut reps: Vec<SimpleGraph> = Vec::new();
    for c in cands {
        if !reps.iter().any(|r| brute_isomorphic(r, &c)) {
            reps.push(c);
        }
    }
    let minimal: Vec<&SimpleGraph> = reps
        .iter()
        .filter(|m| !reps.iter().any(|o| !brute_isomorphic(o, m) && brute_subgraph(o, m)))
        .collect();
    minimal.into_iter().map(canonical_form).collect()
}
