//! Exact (not necessarily induced) subgraph search.
//!
//! A pattern is split into connected components (non-bipartite ones first,
//! then by decreasing order) which are matched one at a time by backtracking
//! over host bitsets. Before each component the free part of the host is
//! split into connected components;
//! a pattern component may only be rooted in a free host component that is
//! large enough and, for non-bipartite pattern components, itself
//! non-bipartite. Failed (component index, used set) states are memoized,
//! and consecutive isomorphic pattern components are matched with strictly
//! increasing root images. In whole-pattern searches host twins (same
//! neighbourhood apart from each other) are interchangeable, so of two twin
//! candidates only the smaller is tried; seeded searches skip this, as they
//! run on small hosts where the setup costs more than it saves.

use std::collections::HashSet;

use crate::bits::{self, VSet};

use super::SimpleGraph;

/// A precomputed matching plan for one pattern graph.
#[derive(Clone, Debug)]
pub struct PatternPlan {
    order: usize,
    isolated: Vec<usize>,
    comps: Vec<CompPlan>,
    /// (component, order starting with a fixed edge) for seeded searches
    seeds: Vec<(usize, CompOrder)>,
    edge_count: usize,
    max_degree: usize,
}

#[derive(Clone, Debug)]
struct CompPlan {
    graph: SimpleGraph,
    /// local vertex -> pattern vertex
    orig: Vec<usize>,
    bipartite: bool,
    class: usize,
    order: CompOrder,
}

#[derive(Clone, Debug)]
struct CompOrder {
    /// position -> local vertex
    seq: Vec<usize>,
    /// position -> earlier positions adjacent to it
    back: Vec<Vec<usize>>,
    /// position -> degree in the component
    deg: Vec<usize>,
}

impl CompOrder {
    fn new(g: &SimpleGraph, prefix: &[usize]) -> CompOrder {
        let n = g.order();
        let mut seq: Vec<usize> = prefix.to_vec();
        let mut placed: VSet = prefix.iter().fold(0, |s, &v| s | bits::bit(v));
        if seq.is_empty() && n > 0 {
            let start = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
            seq.push(start);
            placed |= bits::bit(start);
        }
        while seq.len() < n {
            let frontier: Vec<usize> = (0..n)
                .filter(|&v| !bits::contains(placed, v) && g.neighbors(v) & placed != 0)
                .collect();
            let pool = if frontier.is_empty() {
                (0..n).filter(|&v| !bits::contains(placed, v)).collect()
            } else {
                frontier
            };
            let next = *pool
                .iter()
                .max_by_key(|&&v| {
                    (
                        bits::count(g.neighbors(v) & placed),
                        g.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .unwrap();
            seq.push(next);
            placed |= bits::bit(next);
        }
        let pos_of: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, &v) in seq.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let back = seq
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                bits::members(g.neighbors(v))
                    .map(|w| pos_of[w])
                    .filter(|&p| p < i)
                    .collect()
            })
            .collect();
        let deg = seq.iter().map(|&v| g.degree(v)).collect();
        CompOrder { seq, back, deg }
    }
}

fn degree_sequence(g: &SimpleGraph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Isomorphism test for small graphs: equal order, size and degree sequence,
/// plus an embedding (which is then necessarily a bijection on edges).
pub fn isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && degree_sequence(a) == degree_sequence(b)
        && PatternPlan::new(a).find(b.adjacency(), bits::full(b.order())).is_some()
}

impl PatternPlan {
    pub fn new(pattern: &SimpleGraph) -> PatternPlan {
        let isolated = pattern.isolated_vertices();
        let mut raw: Vec<(SimpleGraph, Vec<usize>)> = pattern
            .components()
            .into_iter()
            .filter(|c| bits::count(*c) > 1)
            .map(|c| (pattern.induced(c), bits::members(c).collect()))
            .collect();
        // odd components first: they are the most constrained
        raw.sort_by_key(|(g, _)| {
            (g.is_bipartite(), std::cmp::Reverse((g.order(), g.edge_count(), degree_sequence(g))))
        });

        // isomorphism classes, first-appearance numbering
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = Vec::with_capacity(raw.len());
        for i in 0..raw.len() {
            let found = reps.iter().position(|&r| {
                let (a, b) = (&raw[r].0, &raw[i].0);
                a.order() == b.order()
                    && a.edge_count() == b.edge_count()
                    && single_component_embeds(a, b)
            });
            match found {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(reps.len());
                    reps.push(i);
                }
            }
        }
        let mut idx: Vec<usize> = (0..raw.len()).collect();
        idx.sort_by_key(|&i| {
            let g = &raw[i].0;
            (g.is_bipartite(), std::cmp::Reverse((g.order(), g.edge_count())), class_of[i])
        });
        let comps: Vec<CompPlan> = idx
            .into_iter()
            .map(|i| {
                let (g, orig) = raw[i].clone();
                let order = CompOrder::new(&g, &[]);
                CompPlan { bipartite: g.is_bipartite(), class: class_of[i], graph: g, orig, order }
            })
            .collect();
        let mut seeds = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            if comps[..ci].iter().any(|c| c.class == comp.class) {
                continue;
            }
            for (a, b) in comp.graph.edges() {
                for (x, y) in [(a, b), (b, a)] {
                    seeds.push((ci, CompOrder::new(&comp.graph, &[x, y])));
                }
            }
        }
        PatternPlan {
            order: pattern.order(),
            isolated,
            comps,
            seeds,
            edge_count: pattern.edge_count(),
            max_degree: (0..pattern.order()).map(|v| pattern.degree(v)).max().unwrap_or(0),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Finds an embedding of the pattern into the host restricted to
    /// `allowed`. Returns pattern vertex -> host vertex.
    pub fn find(&self, host: &[VSet], allowed: VSet) -> Option<Vec<usize>> {
        if bits::count(allowed) < self.order {
            return None;
        }
        let layout = self.comps.iter().enumerate().map(|(i, c)| (i, &c.order)).collect();
        let mut s = Searcher::new(self, host, allowed, layout);
        s.find_twins();
        if s.start(0, 0) {
            Some(s.finish())
        } else {
            None
        }
    }

    /// Finds an embedding in which the host edge `{u, v}` is the image of a
    /// pattern edge.
    pub fn find_through_edge(
        &self,
        host: &[VSet],
        allowed: VSet,
        u: usize,
        v: usize,
    ) -> Option<Vec<usize>> {
        self.through_edge(host, allowed, u, v, true)
    }

    /// Like [`find_through_edge`](Self::find_through_edge) but only answers
    /// whether such an embedding exists.
    pub fn exists_through_edge(&self, host: &[VSet], allowed: VSet, u: usize, v: usize) -> bool {
        self.through_edge(host, allowed, u, v, false).is_some()
    }

    fn through_edge(
        &self,
        host: &[VSet],
        allowed: VSet,
        u: usize,
        v: usize,
        want_map: bool,
    ) -> Option<Vec<usize>> {
        if bits::count(allowed) < self.order || !bits::contains(host[u], v) {
            return None;
        }
        for (ci, order) in &self.seeds {
            let mut layout = Vec::with_capacity(self.comps.len());
            layout.push((*ci, order));
            layout.extend(
                self.comps
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != ci)
                    .map(|(j, c)| (j, &c.order)),
            );
            let mut s = Searcher::new(self, host, allowed, layout);
            if s.seeded(u, v) {
                return Some(if want_map { s.finish() } else { Vec::new() });
            }
        }
        None
    }
}

fn single_component_embeds(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    let order = CompOrder::new(a, &[]);
    let plan = PatternPlan {
        order: a.order(),
        isolated: vec![],
        comps: vec![CompPlan {
            graph: a.clone(),
            orig: (0..a.order()).collect(),
            bipartite: a.is_bipartite(),
            class: 0,
            order,
        }],
        seeds: vec![],
        edge_count: a.edge_count(),
        max_degree: (0..a.order()).map(|v| a.degree(v)).max().unwrap_or(0),
    };
    plan.find(b.adjacency(), bits::full(b.order())).is_some()
}

const MEMO_CAP: usize = 1 << 21;

struct Searcher<'a> {
    plan: &'a PatternPlan,
    host: &'a [VSet],
    allowed: VSet,
    layout: Vec<(usize, &'a CompOrder)>,
    /// degmask[d] = allowed host vertices of degree >= d
    degmask: Vec<VSet>,
    /// twins[v] = allowed vertices with the same allowed neighbourhood as v,
    /// ignoring the pair itself
    twins: Vec<VSet>,
    /// images of all slots, slot `i` starting at `offset[i]`
    images: Vec<usize>,
    offset: Vec<usize>,
    failed: HashSet<(usize, VSet, usize)>,
    /// slot 0 is a seeded component, not ordered against its class
    seeded: bool,
}

impl<'a> Searcher<'a> {
    fn new(
        plan: &'a PatternPlan,
        host: &'a [VSet],
        allowed: VSet,
        layout: Vec<(usize, &'a CompOrder)>,
    ) -> Self {
        let maxd = plan.max_degree;
        let mut degmask = vec![0u128; maxd + 1];
        for v in bits::members(allowed) {
            let d = bits::count(host[v] & allowed).min(maxd);
            for m in degmask.iter_mut().take(d + 1) {
                *m |= bits::bit(v);
            }
        }
        let mut offset = Vec::with_capacity(layout.len());
        let mut total = 0;
        for (_, o) in &layout {
            offset.push(total);
            total += o.seq.len();
        }
        Searcher {
            plan,
            host,
            allowed,
            layout,
            degmask,
            twins: vec![0u128; host.len()],
            images: vec![usize::MAX; total],
            offset,
            failed: HashSet::new(),
            seeded: false,
        }
    }

    fn find_twins(&mut self) {
        let allowed = self.allowed;
        let members: Vec<usize> = bits::members(allowed).collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                let (bx, by) = (bits::bit(x), bits::bit(y));
                if self.host[x] & allowed & !by == self.host[y] & allowed & !bx {
                    self.twins[x] |= by;
                    self.twins[y] |= bx;
                }
            }
        }
    }

    fn comp(&self, slot: usize) -> &'a CompPlan {
        &self.plan.comps[self.layout[slot].0]
    }

    fn degmask(&self, d: usize) -> VSet {
        self.degmask.get(d).copied().unwrap_or(0)
    }

    fn seeded(&mut self, u: usize, v: usize) -> bool {
        let order = self.layout[0].1;
        let free = self.allowed;
        if !bits::contains(free & self.degmask(order.deg[0]), u)
            || !bits::contains(free & self.degmask(order.deg[1]), v)
        {
            return false;
        }
        self.seeded = true;
        self.images[0] = u;
        self.images[1] = v;
        self.place(0, 2, bits::bit(u) | bits::bit(v))
    }

    /// Lower bound on the root image of slot `slot` from symmetry breaking.
    fn root_floor(&self, slot: usize) -> usize {
        if slot > 0
            && !(self.seeded && slot == 1)
            && self.comp(slot - 1).class == self.comp(slot).class
        {
            self.images[self.offset[slot - 1]] + 1
        } else {
            0
        }
    }

    fn start(&mut self, slot: usize, used: VSet) -> bool {
        if slot == self.layout.len() {
            return bits::count(self.allowed & !used) >= self.plan.isolated.len();
        }
        let floor = self.root_floor(slot);
        let key = (slot, used, floor);
        if slot > 0 && self.failed.contains(&key) {
            return false;
        }
        let free = self.allowed & !used;
        let regions = bits::components_within(self.host, free);

        // feasibility of everything still to place
        let mut need_all = self.plan.isolated.len();
        let mut need_odd = 0usize;
        let mut min_all = usize::MAX;
        let mut min_odd = usize::MAX;
        for s in slot..self.layout.len() {
            let c = self.comp(s);
            let n = c.graph.order();
            need_all += n;
            min_all = min_all.min(n);
            if !c.bipartite {
                need_odd += n;
                min_odd = min_odd.min(n);
            }
        }
        let cap_all: usize = regions
            .iter()
            .map(|(r, _)| bits::count(*r))
            .filter(|&sz| sz >= min_all)
            .sum();
        let cap_odd: usize = regions
            .iter()
            .filter(|(r, b)| !b && bits::count(*r) >= min_odd)
            .map(|(r, _)| bits::count(*r))
            .sum();
        if need_all > bits::count(free)
            || (self.plan.isolated.is_empty() && need_all > cap_all)
            || need_odd > cap_odd
        {
            if slot > 0 {
                self.remember(key);
            }
            return false;
        }

        let comp = self.comp(slot);
        let (n, bip, d0) = (comp.graph.order(), comp.bipartite, self.layout[slot].1.deg[0]);
        let eligible = regions
            .iter()
            .filter(|(r, b)| bits::count(*r) >= n && (bip || !b))
            .fold(0u128, |s, (r, _)| s | r);
        let roots = eligible & self.degmask(d0) & !bits::full(floor);
        let base = self.offset[slot];
        for r in bits::members(roots) {
            if self.twins[r] & roots & bits::full(r) != 0 {
                continue;
            }
            self.images[base] = r;
            if self.place(slot, 1, used | bits::bit(r)) {
                return true;
            }
        }
        if slot > 0 {
            self.remember(key);
        }
        false
    }

    fn remember(&mut self, key: (usize, VSet, usize)) {
        if self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
    }

    fn place(&mut self, slot: usize, pos: usize, used: VSet) -> bool {
        let order = self.layout[slot].1;
        if pos == order.seq.len() {
            return self.start(slot + 1, used);
        }
        let base = self.offset[slot];
        let mut cand = self.allowed & !used & self.degmask(order.deg[pos]);
        for &q in &order.back[pos] {
            cand &= self.host[self.images[base + q]];
        }
        for h in bits::members(cand) {
            if self.twins[h] & cand & bits::full(h) != 0 {
                continue;
            }
            self.images[base + pos] = h;
            if self.place(slot, pos + 1, used | bits::bit(h)) {
                return true;
            }
        }
        false
    }

    fn finish(&self) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.plan.order];
        let mut used: VSet = 0;
        for (slot, (ci, order)) in self.layout.iter().enumerate() {
            let comp = &self.plan.comps[*ci];
            for (pos, &local) in order.seq.iter().enumerate() {
                let h = self.images[self.offset[slot] + pos];
                map[comp.orig[local]] = h;
                used |= bits::bit(h);
            }
        }
        let mut spare = bits::members(self.allowed & !used);
        for &iso in &self.plan.isolated {
            map[iso] = spare.next().expect("isolated capacity checked");
        }
        map
    }
}

/// Whether `pattern` is a (not necessarily induced) subgraph of `host`.
pub fn is_subgraph(pattern: &SimpleGraph, host: &SimpleGraph) -> bool {
    find_subgraph(pattern, host).is_some()
}

pub fn find_subgraph(pattern: &SimpleGraph, host: &SimpleGraph) -> Option<Vec<usize>> {
    if pattern.order() > host.order() || pattern.edge_count() > host.edge_count() {
        return None;
    }
    PatternPlan::new(pattern).find(host.adjacency(), bits::full(host.order()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_embedding(p: &SimpleGraph, h: &SimpleGraph, map: &[usize]) {
        let mut seen = std::collections::HashSet::new();
        for &m in map {
            assert!(seen.insert(m), "not injective");
        }
        for (a, b) in p.edges() {
            assert!(h.has_edge(map[a], map[b]));
        }
    }

    /// Brute force over all injective maps.
    fn naive(p: &SimpleGraph, h: &SimpleGraph) -> bool {
        fn rec(p: &SimpleGraph, h: &SimpleGraph, map: &mut Vec<usize>) -> bool {
            let i = map.len();
            if i == p.order() {
                return true;
            }
            for x in 0..h.order() {
                if map.contains(&x) {
                    continue;
                }
                if (0..i).all(|j| !p.has_edge(i, j) || h.has_edge(x, map[j])) {
                    map.push(x);
                    if rec(p, h, map) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        rec(p, h, &mut Vec::new())
    }

    #[test]
    fn basic_containment() {
        let c5 = SimpleGraph::cycle(5);
        assert!(!is_subgraph(&SimpleGraph::complete(3), &c5));
        assert!(is_subgraph(&SimpleGraph::path(5), &c5));
        let two_k3 = SimpleGraph::complete(3).copies(2);
        assert!(!is_subgraph(&two_k3, &SimpleGraph::complete(5)));
        let m = find_subgraph(&two_k3, &SimpleGraph::complete(6)).unwrap();
        check_embedding(&two_k3, &SimpleGraph::complete(6), &m);
        // odd cycles never fit in a bipartite host
        assert!(!is_subgraph(&c5.copies(2), &SimpleGraph::complete_bipartite(9, 9)));
    }

    #[test]
    fn isolated_pattern_vertices_need_room() {
        let p = SimpleGraph::complete(3).disjoint_union(&SimpleGraph::empty(2));
        assert!(!is_subgraph(&p, &SimpleGraph::complete(4)));
        assert!(is_subgraph(&p, &SimpleGraph::complete(5)));
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..600 {
            let pn = rng.gen_range(1..=5);
            let hn = rng.gen_range(1..=7);
            let rand_graph = |n: usize, p: f64, rng: &mut rand_chacha::ChaCha8Rng| {
                let mut g = SimpleGraph::empty(n);
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen_bool(p) {
                            g.add_edge(u, v);
                        }
                    }
                }
                g
            };
            let p = rand_graph(pn, 0.4, &mut rng);
            let h = rand_graph(hn, 0.6, &mut rng);
            let fast = PatternPlan::new(&p).find(h.adjacency(), bits::full(hn));
            assert_eq!(fast.is_some(), naive(&p, &h), "pattern {p:?} host {h:?}");
            if let Some(m) = fast {
                check_embedding(&p, &h, &m);
            }
        }
    }

    #[test]
    fn seeded_search_uses_the_edge() {
        let host = SimpleGraph::complete(3).disjoint_union(&SimpleGraph::complete(3));
        let plan = PatternPlan::new(&SimpleGraph::complete(3));
        let m = plan.find_through_edge(host.adjacency(), bits::full(6), 4, 5).unwrap();
        assert!(m.contains(&4) && m.contains(&5));
        let path = SimpleGraph::path(3).disjoint_union(&SimpleGraph::empty(1));
        assert!(PatternPlan::new(&SimpleGraph::complete(3))
            .find_through_edge(path.adjacency(), bits::full(4), 0, 1)
            .is_none());
    }

    #[test]
    fn seeded_search_agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let pool = [
            SimpleGraph::complete(2).copies(2),
            SimpleGraph::path(3).copies(2),
            SimpleGraph::complete(3).disjoint_union(&SimpleGraph::complete(2)),
            SimpleGraph::path(3).disjoint_union(&SimpleGraph::complete(2)).disjoint_union(&SimpleGraph::empty(1)),
            SimpleGraph::complete(2).copies(3),
            SimpleGraph::star(3),
        ];
        for _ in 0..400 {
            let p = &pool[rng.gen_range(0..pool.len())];
            let hn = rng.gen_range(4..=8);
            let mut h = SimpleGraph::empty(hn);
            for u in 0..hn {
                for v in u + 1..hn {
                    if rng.gen_bool(0.45) {
                        h.add_edge(u, v);
                    }
                }
            }
            let edges = h.edges();
            if edges.is_empty() {
                continue;
            }
            let (u, v) = edges[rng.gen_range(0..edges.len())];
            let pinned = seeded_naive(p, &h, u, v);
            let plan = PatternPlan::new(p);
            assert_eq!(plan.exists_through_edge(h.adjacency(), bits::full(hn), u, v), pinned, "{p:?} in {h:?}");
            if let Some(m) = plan.find_through_edge(h.adjacency(), bits::full(hn), u, v) {
                check_embedding(p, &h, &m);
                assert!(p.edges().iter().any(|&(a, b)| (m[a], m[b]) == (u, v) || (m[a], m[b]) == (v, u)));
            }
        }
    }

    /// Brute force over injective maps, requiring the edge `uv` to be used.
    fn seeded_naive(p: &SimpleGraph, h: &SimpleGraph, u: usize, v: usize) -> bool {
        fn rec(p: &SimpleGraph, h: &SimpleGraph, map: &mut Vec<usize>, u: usize, v: usize) -> bool {
            let i = map.len();
            if i == p.order() {
                return p.edges().iter().any(|&(a, b)| {
                    (map[a], map[b]) == (u, v) || (map[a], map[b]) == (v, u)
                });
            }
            for x in 0..h.order() {
                if map.contains(&x) {
                    continue;
                }
                if (0..i).all(|j| !p.has_edge(i, j) || h.has_edge(x, map[j])) {
                    map.push(x);
                    if rec(p, h, map, u, v) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        rec(p, h, &mut Vec::new(), u, v)
    }

    #[test]
    fn isomorphism_check() {
        assert!(isomorphic(&SimpleGraph::cycle(5), &SimpleGraph::cycle(5).complement()));
        assert!(!isomorphic(&SimpleGraph::path(4), &SimpleGraph::star(3)));
    }
}
