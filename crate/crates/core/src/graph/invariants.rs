//! Chromatic number, clique number, chromatic surplus and the class-size
//! profiles of proper colorings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VSet};

use super::{GraphError, SimpleGraph};

/// Exact invariants are computed for graphs up to this order.
pub const EXACT_ORDER_LIMIT: usize = 16;
/// `is_homological` accepts graphs up to this order.
pub const HOMOLOGICAL_ORDER_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInvariants {
    pub order: usize,
    pub components: usize,
    pub component_orders: Vec<usize>,
    pub chromatic_number: usize,
    pub chromatic_surplus: usize,
    pub sigma3: usize,
    pub clique_number: usize,
    pub is_connected: bool,
    pub is_bipartite: bool,
    pub has_isolated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCritical {
    pub critical: bool,
    pub witness_edge: Option<(usize, usize)>,
}

fn check_limit(g: &SimpleGraph, limit: usize) -> Result<(), GraphError> {
    if g.order() > limit {
        Err(GraphError::TooLarge { order: g.order(), limit })
    } else {
        Ok(())
    }
}

/// Size of a largest clique (branch and bound on bitsets).
pub fn clique_number(g: &SimpleGraph) -> usize {
    fn grow(adj: &[VSet], size: usize, cand: VSet, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        let mut cand = cand;
        while cand != 0 {
            if size + bits::count(cand) <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !bits::bit(v);
            grow(adj, size + 1, cand & adj[v], best);
        }
    }
    let mut best = 0;
    grow(g.adjacency(), 0, bits::full(g.order()), &mut best);
    best
}

/// Exact chromatic number: DSATUR branch and bound seeded with the clique
/// lower bound.
pub fn chromatic_number(g: &SimpleGraph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    if !g.is_nonempty() {
        return 1;
    }
    let lower = clique_number(g);
    let mut best = greedy_colors(g);
    if best > lower {
        let mut color = vec![usize::MAX; n];
        let mut nb_colors = vec![0u128; n];
        dsatur(g, &mut color, &mut nb_colors, 0, 0, lower, &mut best);
    }
    best
}

fn greedy_colors(g: &SimpleGraph) -> usize {
    let n = g.order();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    for &v in &order {
        let taken: Vec<usize> = bits::members(g.neighbors(v)).map(|w| color[w]).collect();
        let c = (0..).find(|c| !taken.contains(c)).unwrap();
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// `nb_colors[v]` is the set of colors present on colored neighbours of `v`.
fn dsatur(
    g: &SimpleGraph,
    color: &mut [usize],
    nb_colors: &mut [u128],
    colored: usize,
    used: usize,
    lower: usize,
    best: &mut usize,
) {
    if *best <= lower {
        return;
    }
    let n = g.order();
    if colored == n {
        *best = used;
        return;
    }
    let v = (0..n)
        .filter(|&v| color[v] == usize::MAX)
        .max_by_key(|&v| {
            let uncolored_deg =
                bits::members(g.neighbors(v)).filter(|&w| color[w] == usize::MAX).count();
            (nb_colors[v].count_ones(), uncolored_deg, std::cmp::Reverse(v))
        })
        .unwrap();
    let limit = (used + 1).min(*best - 1);
    for c in 0..limit {
        if nb_colors[v] >> c & 1 == 1 {
            continue;
        }
        color[v] = c;
        let saved: Vec<(usize, u128)> =
            bits::members(g.neighbors(v)).map(|w| (w, nb_colors[w])).collect();
        for &(w, _) in &saved {
            nb_colors[w] |= 1 << c;
        }
        dsatur(g, color, nb_colors, colored + 1, used.max(c + 1), lower, best);
        for (w, m) in saved {
            nb_colors[w] = m;
        }
        color[v] = usize::MAX;
        if *best <= lower {
            return;
        }
    }
}

/// Sorted (descending) class-size vectors of one connected graph over all
/// proper colorings with at most `p` colors, padded with zeros to length `p`.
fn component_profiles(g: &SimpleGraph, p: usize) -> BTreeSet<Vec<usize>> {
    fn rec(
        g: &SimpleGraph,
        p: usize,
        v: usize,
        classes: &mut Vec<VSet>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if v == g.order() {
            let mut sizes: Vec<usize> = classes.iter().map(|c| bits::count(*c)).collect();
            sizes.resize(p, 0);
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(sizes);
            return;
        }
        let nb = g.neighbors(v);
        for c in 0..classes.len() {
            if classes[c] & nb == 0 {
                classes[c] |= bits::bit(v);
                rec(g, p, v + 1, classes, out);
                classes[c] &= !bits::bit(v);
            }
        }
        if classes.len() < p {
            classes.push(bits::bit(v));
            rec(g, p, v + 1, classes, out);
            classes.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(g, p, 0, &mut Vec::new(), &mut out);
    out
}

fn distinct_permutations(v: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// All multisets of class sizes (sorted descending, zero-padded to length
/// `p`) realized by proper colorings of `g` with at most `p` colors.
pub fn class_size_profiles(g: &SimpleGraph, p: usize) -> Result<BTreeSet<Vec<usize>>, GraphError> {
    check_limit(g, EXACT_ORDER_LIMIT)?;
    let mut acc: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0; p]]);
    for comp in g.component_graphs() {
        let profiles = component_profiles(&comp, p);
        let mut next = BTreeSet::new();
        for a in &profiles {
            for perm in distinct_permutations(a) {
                for b in &acc {
                    let mut s: Vec<usize> = b.iter().zip(&perm).map(|(x, y)| x + y).collect();
                    s.sort_unstable_by(|a, b| b.cmp(a));
                    next.insert(s);
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// A proper coloring whose class `j` has exactly `sizes[j]` vertices, as a
/// color index per vertex.
pub fn coloring_with_class_sizes(g: &SimpleGraph, sizes: &[usize]) -> Option<Vec<usize>> {
    fn rec(
        g: &SimpleGraph,
        v: usize,
        sizes: &[usize],
        fill: &mut [usize],
        classes: &mut [VSet],
        color: &mut [usize],
    ) -> bool {
        if v == g.order() {
            return true;
        }
        for c in 0..sizes.len() {
            if fill[c] == sizes[c] || classes[c] & g.neighbors(v) != 0 {
                continue;
            }
            // classes of equal target size that are still empty are interchangeable
            if fill[c] == 0 && (0..c).any(|d| fill[d] == 0 && sizes[d] == sizes[c]) {
                continue;
            }
            fill[c] += 1;
            classes[c] |= bits::bit(v);
            color[v] = c;
            if rec(g, v + 1, sizes, fill, classes, color) {
                return true;
            }
            fill[c] -= 1;
            classes[c] &= !bits::bit(v);
        }
        false
    }
    if sizes.iter().sum::<usize>() != g.order() {
        return None;
    }
    let mut fill = vec![0; sizes.len()];
    let mut classes = vec![0u128; sizes.len()];
    let mut color = vec![0; g.order()];
    rec(g, 0, sizes, &mut fill, &mut classes, &mut color).then_some(color)
}

/// Minimum class size over all proper `chi`-colorings (the order itself for
/// edgeless graphs).
fn chromatic_surplus(g: &SimpleGraph, chi: usize) -> Result<usize, GraphError> {
    if chi == 0 {
        return Ok(0);
    }
    Ok(class_size_profiles(g, chi)?
        .iter()
        .filter(|p| p[chi - 1] > 0)
        .map(|p| p[chi - 1])
        .min()
        .expect("a proper chi-coloring exists"))
}

pub fn invariants(g: &SimpleGraph) -> Result<GraphInvariants, GraphError> {
    check_limit(g, EXACT_ORDER_LIMIT)?;
    let chi = chromatic_number(g);
    let sigma = chromatic_surplus(g, chi)?;
    let mut component_orders: Vec<usize> =
        g.components().into_iter().map(bits::count).collect();
    component_orders.sort_unstable();
    Ok(GraphInvariants {
        order: g.order(),
        components: component_orders.len(),
        component_orders,
        chromatic_number: chi,
        chromatic_surplus: sigma,
        sigma3: if chi == 3 { sigma } else { 0 },
        clique_number: clique_number(g),
        is_connected: g.is_connected(),
        is_bipartite: chi <= 2,
        has_isolated: !g.isolated_vertices().is_empty(),
    })
}

/// True iff `chi(g) = r` and deleting some edge drops it to `r - 1`.
pub fn is_color_critical(g: &SimpleGraph, r: usize) -> Result<ColorCritical, GraphError> {
    check_limit(g, EXACT_ORDER_LIMIT)?;
    let no = ColorCritical { critical: false, witness_edge: None };
    if r == 0 || chromatic_number(g) != r {
        return Ok(no);
    }
    for (u, v) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, v);
        if chromatic_number(&h) == r - 1 {
            return Ok(ColorCritical { critical: true, witness_edge: Some((u, v)) });
        }
    }
    Ok(no)
}

/// A class-size vector `(s_1, ..., s_p)`, `p = max chi`, such that every graph
/// is a spanning subgraph of `K_{s_1,...,s_p}`; the lexicographically
/// greatest one when several exist.
pub fn is_homological(graphs: &[SimpleGraph]) -> Result<Option<Vec<usize>>, GraphError> {
    let orders: Vec<usize> = graphs.iter().map(|g| g.order()).collect();
    if orders.windows(2).any(|w| w[0] != w[1]) {
        return Err(GraphError::OrderMismatch(orders));
    }
    for g in graphs {
        check_limit(g, HOMOLOGICAL_ORDER_LIMIT)?;
        if !g.is_nonempty() {
            return Err(GraphError::Empty);
        }
    }
    let Some(p) = graphs.iter().map(chromatic_number).max() else {
        return Ok(None);
    };
    let mut common: Option<BTreeSet<Vec<usize>>> = None;
    for g in graphs {
        let mine: BTreeSet<Vec<usize>> = class_size_profiles(g, p)?
            .into_iter()
            .filter(|v| v.iter().all(|&s| s > 0))
            .collect();
        common = Some(match common {
            None => mine,
            Some(c) => c.intersection(&mine).cloned().collect(),
        });
    }
    Ok(common.and_then(|c| c.into_iter().next_back()))
}
