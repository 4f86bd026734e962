//! Random valid parameterizations for every construction kind.

use std::collections::HashMap;
use std::time::Duration;

use rand::seq::SliceRandom;
use rand::Rng;
use ramsey_forge::construct::{construct, ConstructionKind, ConstructionParams};
use ramsey_forge::graph::{chromatic_number, clique_number, decomposition_family, invariants, partite_profile};
use ramsey_forge::search::{two_color_ramsey, two_color_ramsey_families, NumberStatus};
use ramsey_forge::table::{key_family, key_pair};
use ramsey_forge::{ColoredHost, KnownValuesTable, SearchOptions, Shape, SimpleGraph};

pub const MAX_HOST: usize = 40;
/// Largest inner complete graph the constructions color by search.
const INNER_MAX: usize = 8;

fn g(order: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    SimpleGraph::from_edges(order, edges).unwrap()
}

pub fn paw() -> SimpleGraph {
    g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])
}

pub fn diamond() -> SimpleGraph {
    g(4, &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])
}

/// Wheel with a 5-cycle rim (chromatic number 4).
pub fn wheel5() -> SimpleGraph {
    g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)])
}

pub fn connected_pool() -> Vec<SimpleGraph> {
    vec![
        SimpleGraph::complete(2),
        SimpleGraph::path(3),
        SimpleGraph::complete(3),
        SimpleGraph::path(4),
        SimpleGraph::cycle(4),
        SimpleGraph::star(3),
        paw(),
        SimpleGraph::cycle(5),
        diamond(),
        SimpleGraph::complete(4),
    ]
}

pub fn three_chromatic_pool() -> Vec<SimpleGraph> {
    connected_pool().into_iter().filter(|g| chromatic_number(g) == 3).collect()
}

pub fn bipartite_connected_pool() -> Vec<SimpleGraph> {
    let mut v: Vec<SimpleGraph> = connected_pool().into_iter().filter(|g| chromatic_number(g) == 2).collect();
    v.push(SimpleGraph::path(5));
    v.push(SimpleGraph::complete_bipartite(2, 3));
    v
}

/// Graphs for the decomposition construction (connected, chi >= 3).
pub fn decomp_pool() -> Vec<SimpleGraph> {
    vec![SimpleGraph::complete(3), paw(), SimpleGraph::cycle(5), diamond(), SimpleGraph::complete(4), wheel5()]
}

/// `(graph, k)` for the exact-k construction.
pub fn exact_k_pool() -> Vec<(SimpleGraph, usize)> {
    let k4 = SimpleGraph::complete(4);
    let mut out = vec![
        (k4.clone(), 4),
        (k4.disjoint_union(&SimpleGraph::complete(2)), 4),
        (k4.disjoint_union(&SimpleGraph::complete(3)), 4),
        (k4.disjoint_union(&SimpleGraph::path(3)), 4),
        (wheel5(), 4),
        (SimpleGraph::complete(5), 5),
    ];
    out.push((SimpleGraph::complete(5).disjoint_union(&SimpleGraph::complete(2)), 5));
    out
}

fn opts(limit_secs: u64) -> SearchOptions {
    SearchOptions { jobs: 1, time_limit: Some(Duration::from_secs(limit_secs)), allow_large: false }
}

/// Ramsey values the randomized constructions need, computed by search.
/// Entries whose search does not finish within its limit are left out and
/// the generators avoid them.
pub fn build_table() -> KnownValuesTable {
    let mut t = KnownValuesTable::new();
    let pool = connected_pool();
    for (a_idx, a) in pool.iter().enumerate() {
        for b in &pool[a_idx..] {
            let out = two_color_ramsey(a, b, INNER_MAX + 1, &opts(20)).unwrap();
            if let (NumberStatus::Exact, Some(v)) = (out.status, out.value) {
                t.insert(key_pair(a, b), v as u64, "search").unwrap();
            }
        }
    }
    for h in decomp_pool() {
        add_family(&mut t, &h, 2);
    }
    for (h, k) in exact_k_pool() {
        add_family(&mut t, &h, chromatic_number(&h) - k + 2);
    }
    t
}

fn add_family(t: &mut KnownValuesTable, h: &SimpleGraph, index: usize) {
    let key = key_family(h, index);
    if t.get(&key).is_some() {
        return;
    }
    let fam = decomposition_family(h, index).unwrap().members;
    let out = two_color_ramsey_families(key.clone(), &fam, std::slice::from_ref(h), INNER_MAX + 1, &opts(20)).unwrap();
    if let (NumberStatus::Exact, Some(v)) = (out.status, out.value) {
        t.insert(key, v as u64, "search").unwrap();
    }
}

/// A uniformly relabelled copy of an inner 2-coloring whose colors are its
/// roles, so the construction reads the roles back from the labels.
fn permuted_inner<R: Rng>(rng: &mut R, host: &ColoredHost, roles: &[u32]) -> ColoredHost {
    let n = host.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    ColoredHost::from_fn(host.shape(), |u, v| roles[host.color(perm[u], perm[v]).unwrap() as usize - 1])
}

pub struct Generator {
    pub table: KnownValuesTable,
    inner_cache: HashMap<String, Option<(ColoredHost, Vec<u32>)>>,
}

pub struct Case {
    pub components: Vec<SimpleGraph>,
    pub params: ConstructionParams,
}

fn pick<R: Rng, T: Clone>(rng: &mut R, v: &[T]) -> T {
    v[rng.gen_range(0..v.len())].clone()
}

fn pick_some<R: Rng>(rng: &mut R, pool: &[SimpleGraph], max: usize) -> Vec<SimpleGraph> {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| pick(rng, pool)).collect()
}

fn sizes_summing_to<R: Rng>(rng: &mut R, total: usize, parts: usize, min: usize) -> Option<Vec<usize>> {
    if parts * min > total || parts == 0 {
        return None;
    }
    let mut s = vec![min; parts];
    for _ in 0..total - parts * min {
        let i = rng.gen_range(0..parts);
        s[i] += 1;
    }
    Some(s)
}

impl Generator {
    pub fn new(table: KnownValuesTable) -> Generator {
        Generator { table, inner_cache: HashMap::new() }
    }

    fn pair_value(&self, a: &SimpleGraph, b: &SimpleGraph) -> Option<usize> {
        self.table.pair(a, b).map(|v| v as usize)
    }

    /// Replaces the searched inner coloring with a random relabelling of it
    /// half of the time.
    fn maybe_permute<R: Rng>(&mut self, rng: &mut R, kind: ConstructionKind, case: Case) -> Case {
        if !rng.gen_bool(0.5) {
            return case;
        }
        let key = serde_json::to_string(&(kind, &case.components, &case.params)).unwrap();
        let table = &self.table;
        let inner = self
            .inner_cache
            .entry(key)
            .or_insert_with(|| {
                construct(kind, &case.components, &case.params, table)
                    .ok()
                    .and_then(|r| Some((r.parameters.sub_host?, r.parameters.sub_host_roles?)))
            })
            .clone();
        match inner {
            Some((host, roles)) if host.vertex_count() >= 2 => {
                let mut params = case.params;
                params.sub_host = Some(permuted_inner(rng, &host, &roles));
                Case { components: case.components, params }
            }
            _ => case,
        }
    }

    /// A valid parameterization of `kind`, or `None` when the random draw
    /// violates a size limit (callers redraw).
    pub fn case<R: Rng>(&mut self, rng: &mut R, kind: ConstructionKind) -> Option<Case> {
        use ConstructionKind::*;
        let none = ConstructionParams::default();
        match kind {
            R3I => {
                let comps = pick_some(rng, &connected_pool(), 3);
                let len = comps.len();
                let (i, j, l) = (rng.gen_range(0..len), rng.gen_range(0..len), rng.gen_range(0..len));
                let r = self.pair_value(&comps[j], &comps[l])?;
                if r - 1 > INNER_MAX {
                    return None;
                }
                let p = chromatic_number(&comps[i]);
                let sigma: usize = comps
                    .iter()
                    .filter(|g| chromatic_number(g) == p)
                    .map(|g| invariants(g).unwrap().chromatic_surplus)
                    .sum();
                if (p - 1) * (r - 1) + sigma - 1 > MAX_HOST {
                    return None;
                }
                let params = ConstructionParams { i: Some(i), j: Some(j), l: Some(l), ..none };
                Some(self.maybe_permute(rng, kind, Case { components: comps, params }))
            }
            R3II => {
                let comps = pick_some(rng, &connected_pool(), 3);
                let len = comps.len();
                let (i, j) = (rng.gen_range(0..len), rng.gen_range(0..len));
                let w = clique_number(&comps[i]);
                let r = self.table.clique_diagonal(w).map(|v| v as usize).or(if w == 2 { Some(2) } else { None })?;
                if r - 1 > INNER_MAX || (r - 1) * (comps[j].order() - 1) > MAX_HOST {
                    return None;
                }
                let params = ConstructionParams { i: Some(i), j: Some(j), ..none };
                Some(self.maybe_permute(rng, kind, Case { components: comps, params }))
            }
            R3III => {
                let comps = pick_some(rng, &three_chromatic_pool(), 3);
                let total: usize = comps.iter().map(|g| g.order()).sum();
                (3 * (total - 1) <= MAX_HOST).then_some(Case { components: comps, params: none })
            }
            R3IV => {
                let pool: Vec<SimpleGraph> = connected_pool().into_iter().filter(|g| chromatic_number(g) <= 3).collect();
                let mut comps = pick_some(rng, &pool, 3);
                if !comps.iter().any(|g| chromatic_number(g) == 3) {
                    comps.push(pick(rng, &three_chromatic_pool()));
                }
                comps.shuffle(rng);
                let total: usize = comps.iter().map(|g| g.order()).sum();
                let sigma3: usize = comps.iter().map(|g| invariants(g).unwrap().sigma3).sum();
                (2 * (total - 1) + sigma3 - 1 <= MAX_HOST).then_some(Case { components: comps, params: none })
            }
            Matching => {
                let comps = pick_some(rng, &connected_pool(), 3);
                let order: usize = comps.iter().map(|g| g.order()).sum();
                let m = rng.gen_range(1..=8);
                (m - 1 + order - 1 <= MAX_HOST)
                    .then_some(Case { components: comps, params: ConstructionParams { m: Some(m), ..none } })
            }
            Decomp => {
                let h = pick(rng, &decomp_pool());
                self.table.family(&h, 2)?;
                Some(self.maybe_permute(rng, kind, Case { components: vec![h], params: none }))
            }
            BipartiteBlowup => {
                let h = pick(rng, &bipartite_connected_pool());
                let t = partite_profile(&h).unwrap().t;
                if t < 2 {
                    return None;
                }
                let k = rng.gen_range(1..=5);
                (2 * k * (t - 1) <= MAX_HOST)
                    .then_some(Case { components: vec![h], params: ConstructionParams { k: Some(k), ..none } })
            }
            ExactK => {
                let (h, k) = pick(rng, &exact_k_pool());
                let index = chromatic_number(&h) - k + 2;
                let r = self.table.family(&h, index)? as usize;
                if r - 1 > INNER_MAX || (k - 2) * (h.order() - 1) + r - 1 > MAX_HOST {
                    return None;
                }
                let comps = h.component_graphs();
                let params = ConstructionParams { k: Some(k), ..none };
                Some(self.maybe_permute(rng, kind, Case { components: comps, params }))
            }
            BipartiteStarpart => {
                let pool = [
                    SimpleGraph::cycle(4),
                    SimpleGraph::complete_bipartite(3, 3),
                    SimpleGraph::cycle(6),
                    SimpleGraph::cycle(4).copies(2),
                    SimpleGraph::complete_bipartite(2, 4),
                    SimpleGraph::path(6),
                ];
                let h = pick(rng, &pool);
                let s = partite_profile(&h).unwrap().s;
                let parts = rng.gen_range(1..=6);
                let sizes: Vec<usize> = (0..parts).map(|_| rng.gen_range(1..=s - 1)).collect();
                let side: usize = sizes.iter().sum();
                let params = if rng.gen_bool(0.3) && sizes.iter().all(|&x| x == s - 1) {
                    ConstructionParams { k: Some(parts), ..none }
                } else {
                    ConstructionParams { part_sizes: Some(sizes), ..none }
                };
                (2 * side <= MAX_HOST).then_some(Case { components: h.component_graphs(), params })
            }
            NoRainbowP5Shape => {
                let parts = rng.gen_range(1..=5);
                let sizes: Vec<usize> = (0..parts).map(|_| rng.gen_range(2..=9)).collect();
                let params = ConstructionParams { part_sizes: Some(sizes.clone()), seed: Some(rng.gen()), ..none };
                (sizes.iter().sum::<usize>() <= MAX_HOST).then_some(Case { components: vec![], params })
            }
            BipartiteNoRainbowP4Shape => {
                let parts = rng.gen_range(1..=6);
                let sizes: Vec<usize> = (0..parts).map(|_| rng.gen_range(1..=5)).collect();
                (2 * sizes.iter().sum::<usize>() <= MAX_HOST)
                    .then_some(Case { components: vec![], params: ConstructionParams { u_sizes: Some(sizes), ..none } })
            }
            BipartiteNoRainbowP5A => {
                let side = rng.gen_range(2..=MAX_HOST / 2);
                let u1 = rng.gen_range(1..=side);
                let k = rng.gen_range(2..=side.min(6));
                // V_1 may be empty; V_2.. are not
                let v1 = rng.gen_range(0..=side - (k - 1));
                let mut v = vec![v1];
                v.extend(sizes_summing_to(rng, side - v1, k - 1, 1)?);
                let params = ConstructionParams { u_sizes: Some(vec![u1, side - u1]), v_sizes: Some(v), ..none };
                Some(Case { components: vec![], params })
            }
            BipartiteNoRainbowP5B => {
                let parts = rng.gen_range(1..=5);
                let side = rng.gen_range(parts..=MAX_HOST / 2);
                let u = sizes_summing_to(rng, side, parts, 1)?;
                let v = sizes_summing_to(rng, side, parts, 1)?;
                let params = ConstructionParams { u_sizes: Some(u), v_sizes: Some(v), seed: Some(rng.gen()), ..none };
                Some(Case { components: vec![], params })
            }
        }
    }
}

pub fn host_vertices(shape: Shape) -> usize {
    shape.vertex_count()
}
