//! Structural certificates for colorings without rainbow paths, and the
//! tripartite embedding test for unions of 3-chromatic graphs.
//!
//! All colors here are normalized host colors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{self, VSet};
use crate::colored::{find_rainbow_path, ColoredHost, Shape};
use crate::construct::Verdict;
use crate::graph::{chromatic_number, class_size_profiles, find_subgraph, GraphError, SimpleGraph};

/// Largest `x + y + z` for which the exact subgraph search runs.
pub const TRIPARTITE_SEARCH_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("expected a complete host, got {0}")]
    NotComplete(Shape),
    #[error("expected a complete bipartite host, got {0}")]
    NotBipartite(Shape),
    #[error("sides differ: {0} and {1}")]
    SideMismatch(usize, usize),
    #[error("parts do not partition the host: {0}")]
    NotPartition(String),
    #[error("t must be 4 or 5, got {0}")]
    BadPathOrder(usize),
    #[error("{0} is not 3-chromatic")]
    NotThreeChromatic(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type SResult<T> = Result<T, StructureError>;

/// Partition of a complete host into parts `V_2..V_k`: inside `V_i` only
/// `color1` and the part's own color occur (the own color at least once),
/// and every edge between parts has `color1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P5Partition {
    pub color1: u32,
    pub parts: Vec<Vec<usize>>,
    /// own color of each part; inferred from the host when absent
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part_colors: Option<Vec<u32>>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeViolation {
    pub edge: (usize, usize),
    pub color: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub violations: Vec<EdgeViolation>,
    /// violations not tied to a single edge
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<String>,
}

impl CertificateReport {
    fn finish(violations: Vec<EdgeViolation>, issues: Vec<String>) -> CertificateReport {
        let verdict = if violations.is_empty() && issues.is_empty() { Verdict::Pass } else { Verdict::Fail };
        CertificateReport { verdict, violations, issues }
    }
}

fn require_complete(host: &ColoredHost) -> SResult<usize> {
    match host.shape() {
        Shape::Complete { n } => Ok(n),
        s => Err(StructureError::NotComplete(s)),
    }
}

/// Checks that `parts` are disjoint and cover `0..n`; returns the part index
/// of every vertex. Empty parts are allowed here and reported by callers.
fn part_index(parts: &[&[usize]], n: usize) -> SResult<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    for (p, part) in parts.iter().enumerate() {
        for &v in *part {
            if v >= n {
                return Err(StructureError::NotPartition(format!("vertex {v} is out of range 0..{n}")));
            }
            if owner[v] != usize::MAX {
                return Err(StructureError::NotPartition(format!("vertex {v} lies in two parts")));
            }
            owner[v] = p;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(StructureError::NotPartition(format!("vertex {v} lies in no part")));
    }
    Ok(owner)
}

fn colors_inside(host: &ColoredHost, part: &[usize]) -> Vec<u32> {
    let set = part.iter().fold(0 as VSet, |s, &v| s | bits::bit(v));
    host.colors_within(set)
}

/// Errors only on malformed input; every failed condition is reported.
pub fn verify_p5_partition(host: &ColoredHost, cert: &P5Partition) -> SResult<CertificateReport> {
    let n = require_complete(host)?;
    let slices: Vec<&[usize]> = cert.parts.iter().map(|p| p.as_slice()).collect();
    let owner = part_index(&slices, n)?;
    let mut issues = Vec::new();
    if let Some(p) = cert.parts.iter().position(|p| p.is_empty()) {
        issues.push(format!("part {p} is empty"));
    }
    if cert.k != cert.parts.len() + 1 {
        issues.push(format!("k = {} but there are {} parts; expected k - 1 parts", cert.k, cert.parts.len()));
    }
    if cert.k != host.k() {
        issues.push(format!("k = {} but the host uses {} colors", cert.k, host.k()));
    }
    let own: Vec<Option<u32>> = match &cert.part_colors {
        Some(pc) => {
            if pc.len() != cert.parts.len() {
                return Err(StructureError::NotPartition(format!(
                    "{} part colors for {} parts",
                    pc.len(),
                    cert.parts.len()
                )));
            }
            pc.iter().map(|&c| Some(c)).collect()
        }
        None => cert
            .parts
            .iter()
            .enumerate()
            .map(|(p, part)| {
                let others: Vec<u32> = colors_inside(host, part).into_iter().filter(|&c| c != cert.color1).collect();
                if others.len() > 1 {
                    issues.push(format!("part {p} contains several colors besides {}: {others:?}", cert.color1));
                }
                others.first().copied()
            })
            .collect(),
    };
    for (p, c) in own.iter().enumerate() {
        match c {
            None => issues.push(format!("part {p} contains no edge of its own color")),
            Some(c) if *c == cert.color1 => issues.push(format!("part {p} has the distinguished color as its own color")),
            Some(c) => {
                if !colors_inside(host, &cert.parts[p]).contains(c) {
                    issues.push(format!("part {p} contains no edge of its own color {c}"));
                }
                if own[..p].contains(&Some(*c)) {
                    issues.push(format!("color {c} is owned by more than one part"));
                }
            }
        }
    }
    let mut violations = Vec::new();
    for (&(u, v), &c) in host.edges().iter().zip(host.colors()) {
        let (pu, pv) = (owner[u], owner[v]);
        if pu != pv {
            if c != cert.color1 {
                violations.push(EdgeViolation {
                    edge: (u, v),
                    color: c,
                    reason: format!("edge between parts {pu} and {pv} must have color {}", cert.color1),
                });
            }
        } else if c != cert.color1 && Some(c) != own[pu] {
            violations.push(EdgeViolation {
                edge: (u, v),
                color: c,
                reason: format!("edge inside part {pu} has a color other than {} and the part's own color", cert.color1),
            });
        }
    }
    Ok(CertificateReport::finish(violations, issues))
}

/// Vertices with at least one neighbor in `adj`.
fn span(adj: &[VSet]) -> VSet {
    adj.iter().enumerate().filter(|(_, a)| **a != 0).fold(0, |s, (v, _)| s | bits::bit(v))
}

/// Smallest distinguished color whose complement colors have pairwise
/// disjoint spans covering every non-distinguished edge. Vertices in no span
/// join the largest part (lowest index on ties). Absent for one-color hosts.
pub fn recover_p5_partition(host: &ColoredHost) -> SResult<Option<P5Partition>> {
    let n = require_complete(host)?;
    let k = host.k();
    if k < 2 {
        return Ok(None);
    }
    'candidate: for c1 in 1..=k as u32 {
        let mut spans: Vec<(u32, VSet)> = Vec::new();
        let mut covered: VSet = 0;
        for c in (1..=k as u32).filter(|&c| c != c1) {
            let s = span(host.color_adjacency(c));
            if s & covered != 0 {
                continue 'candidate;
            }
            covered |= s;
            spans.push((c, s));
        }
        for &(c, s) in &spans {
            if host.colors_within(s).iter().any(|&x| x != c && x != c1) {
                continue 'candidate;
            }
        }
        let mut parts: Vec<Vec<usize>> = spans.iter().map(|&(_, s)| bits::members(s).collect()).collect();
        let leftovers: Vec<usize> = (0..n).filter(|&v| !bits::contains(covered, v)).collect();
        if !leftovers.is_empty() {
            let largest = (0..parts.len()).max_by_key(|&p| (parts[p].len(), std::cmp::Reverse(p))).expect("k >= 2");
            parts[largest].extend(leftovers);
            parts[largest].sort_unstable();
        }
        return Ok(Some(P5Partition {
            color1: c1,
            part_colors: Some(spans.iter().map(|&(c, _)| c).collect()),
            k,
            parts,
        }));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCondition {
    pub condition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<usize>,
    pub rhs: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeReport {
    pub sorted_sizes: Vec<usize>,
    pub conditions: Vec<SizeCondition>,
    pub all_pass: bool,
}

/// Size conditions on a partition forced by a monochromatic `h` after
/// merging all colors beyond the third: with parts sorted by size
/// `V_2 >= V_3 >= ...`, `|V_3|` is at least the largest component order,
/// `|V_4|` at least the smallest, and `V_3 u ... u V_k` holds `|V(h)|`
/// vertices. Fewer than three parts fail the last two.
pub fn check_extended_sizes(cert: &P5Partition, h: &SimpleGraph) -> SizeReport {
    let mut sizes: Vec<usize> = cert.parts.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let orders: Vec<usize> = h.component_graphs().iter().map(SimpleGraph::order).collect();
    let max_order = orders.iter().copied().max().unwrap_or(0);
    let min_order = orders.iter().copied().min().unwrap_or(0);
    let verdict = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
    let v3 = sizes.get(1).copied();
    let v4 = sizes.get(2).copied();
    let tail = (sizes.len() >= 3).then(|| sizes[1..].iter().sum::<usize>());
    let conditions = vec![
        SizeCondition {
            condition: "at least 3 parts".into(),
            lhs: Some(sizes.len()),
            rhs: 3,
            verdict: verdict(sizes.len() >= 3),
        },
        SizeCondition {
            condition: "|V_3| >= max component order".into(),
            lhs: v3,
            rhs: max_order,
            verdict: verdict(v3.is_some_and(|x| x >= max_order)),
        },
        SizeCondition {
            condition: "|V_4| >= min component order".into(),
            lhs: v4,
            rhs: min_order,
            verdict: verdict(v4.is_some_and(|x| x >= min_order)),
        },
        SizeCondition {
            condition: "|V_3 u ... u V_k| >= |V(H)|".into(),
            lhs: tail,
            rhs: h.order(),
            verdict: verdict(tail.is_some_and(|x| x >= h.order())),
        },
    ];
    let all_pass = conditions.iter().all(|c| c.verdict == Verdict::Pass);
    SizeReport { sorted_sizes: sizes, conditions, all_pass }
}

// ---------------------------------------------------------------------------
// Complete bipartite hosts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPart {
    pub color: u32,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedPart {
    pub color: u32,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

/// `U` is the side named by `u_side`; `V` is the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum BipartiteStructure {
    /// every vertex of `U` sees `V` in a single color
    #[serde(rename = "STAR_PARTITION")]
    StarPartition { u_side: Side, parts: Vec<ColoredPart> },
    /// `U_2` sees `V` in `color1`; each vertex of `V` sees `U_1` in one color
    A { u_side: Side, color1: u32, u1: Vec<usize>, u2: Vec<usize>, v_parts: Vec<ColoredPart> },
    /// `U_i x V_i` uses `color1` and color `i`; all other edges `color1`
    B { color1: u32, parts: Vec<PairedPart> },
    /// sides of 3 or 4 vertices, 4 colors, each a matching
    C { n: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub t: usize,
    pub n: usize,
    pub k: usize,
    pub structure: Option<BipartiteStructure>,
    pub rainbow_path_free: bool,
    /// the host meets the size and color-count hypotheses of the structure theorem
    pub hypotheses_hold: bool,
    /// no structure was found although the hypotheses hold and no rainbow path exists
    pub contradiction: bool,
}

fn bipartite_sides(host: &ColoredHost) -> SResult<(Vec<usize>, Vec<usize>)> {
    match host.shape() {
        Shape::Bipartite { m, n } if m == n => Ok(((0..m).collect(), (m..m + n).collect())),
        Shape::Bipartite { m, n } => Err(StructureError::SideMismatch(m, n)),
        s => Err(StructureError::NotBipartite(s)),
    }
}

fn oriented(host: &ColoredHost, side: Side) -> (Vec<usize>, Vec<usize>) {
    let (l, r) = bipartite_sides(host).expect("checked by caller");
    match side {
        Side::Left => (l, r),
        Side::Right => (r, l),
    }
}

fn color(host: &ColoredHost, u: usize, v: usize) -> u32 {
    host.color(u, v).expect("host edge")
}

/// The single color `u` sees on `targets`, if uniform.
fn uniform(host: &ColoredHost, u: usize, targets: &[usize]) -> Option<u32> {
    let first = color(host, u, *targets.first()?);
    targets.iter().all(|&v| color(host, u, v) == first).then_some(first)
}

fn group_by_color(items: impl IntoIterator<Item = (u32, usize)>) -> Vec<ColoredPart> {
    let mut parts: Vec<ColoredPart> = Vec::new();
    for (c, v) in items {
        match parts.iter_mut().find(|p| p.color == c) {
            Some(p) => p.vertices.push(v),
            None => parts.push(ColoredPart { color: c, vertices: vec![v] }),
        }
    }
    parts.sort_by_key(|p| p.color);
    parts
}

fn star_partition(host: &ColoredHost, side: Side) -> Option<BipartiteStructure> {
    let (us, vs) = oriented(host, side);
    let mut items = Vec::new();
    for &u in &us {
        items.push((uniform(host, u, &vs)?, u));
    }
    Some(BipartiteStructure::StarPartition { u_side: side, parts: group_by_color(items) })
}

fn case_a(host: &ColoredHost, side: Side) -> Option<BipartiteStructure> {
    let (us, vs) = oriented(host, side);
    for c1 in 1..=host.k() as u32 {
        let (u2, u1): (Vec<usize>, Vec<usize>) = us.iter().partition(|&&u| uniform(host, u, &vs) == Some(c1));
        if u1.is_empty() {
            continue;
        }
        let mut items = Vec::new();
        let ok = vs.iter().all(|&v| match uniform(host, v, &u1) {
            Some(c) => {
                items.push((c, v));
                true
            }
            None => false,
        });
        if ok {
            return Some(BipartiteStructure::A { u_side: side, color1: c1, u1, u2, v_parts: group_by_color(items) });
        }
    }
    None
}

fn case_b(host: &ColoredHost) -> Option<BipartiteStructure> {
    let (left, _) = bipartite_sides(host).ok()?;
    let m = left.len();
    let k = host.k() as u32;
    'candidate: for c1 in 1..=k {
        let mut spans: Vec<(u32, VSet)> = Vec::new();
        let mut covered: VSet = 0;
        for c in (1..=k).filter(|&c| c != c1) {
            let s = span(host.color_adjacency(c));
            if s & covered != 0 {
                continue 'candidate;
            }
            covered |= s;
            spans.push((c, s));
        }
        if spans.is_empty() {
            continue;
        }
        for &(c, s) in &spans {
            if host.colors_within(s).iter().any(|&x| x != c && x != c1) {
                continue 'candidate;
            }
        }
        let mut parts: Vec<PairedPart> = spans
            .iter()
            .map(|&(c, s)| {
                let (u, v) = bits::members(s).partition(|&x| x < m);
                PairedPart { color: c, u, v }
            })
            .collect();
        let leftovers: Vec<usize> = (0..host.vertex_count()).filter(|&v| !bits::contains(covered, v)).collect();
        if !leftovers.is_empty() {
            let largest = (0..parts.len())
                .max_by_key(|&p| (parts[p].u.len() + parts[p].v.len(), std::cmp::Reverse(p)))
                .expect("nonempty");
            for x in leftovers {
                if x < m {
                    parts[largest].u.push(x);
                } else {
                    parts[largest].v.push(x);
                }
            }
            parts[largest].u.sort_unstable();
            parts[largest].v.sort_unstable();
        }
        return Some(BipartiteStructure::B { color1: c1, parts });
    }
    None
}

fn all_matchings(host: &ColoredHost) -> bool {
    (1..=host.k() as u32).all(|c| host.color_adjacency(c).iter().all(|a| bits::count(*a) <= 1))
}

fn case_c(host: &ColoredHost, n: usize) -> Option<BipartiteStructure> {
    ((n == 3 || n == 4) && host.k() == 4 && all_matchings(host)).then_some(BipartiteStructure::C { n, k: 4 })
}

/// Finds a structure for a rainbow `P_t`-free coloring of `K_{n,n}`.
/// For `t = 4` this is a star partition of one side; for `t = 5` the first
/// of cases A, B, C that fits, trying the left side as `U` first.
pub fn classify_bipartite_structure(host: &ColoredHost, t: usize) -> SResult<ClassifyReport> {
    let (left, _) = bipartite_sides(host)?;
    let n = left.len();
    let k = host.k();
    let (structure, hypotheses_hold) = match t {
        4 => (star_partition(host, Side::Left).or_else(|| star_partition(host, Side::Right)), n >= 2 && k >= 3),
        5 => (
            case_a(host, Side::Left)
                .or_else(|| case_a(host, Side::Right))
                .or_else(|| case_b(host))
                .or_else(|| case_c(host, n)),
            n >= 3 && k >= 4,
        ),
        _ => return Err(StructureError::BadPathOrder(t)),
    };
    let rainbow_path_free = find_rainbow_path(host, t).is_none();
    let contradiction = structure.is_none() && hypotheses_hold && rainbow_path_free;
    Ok(ClassifyReport { t, n, k, structure, rainbow_path_free, hypotheses_hold, contradiction })
}

/// Re-checks a bipartite structure against the host.
pub fn verify_bipartite_structure(host: &ColoredHost, s: &BipartiteStructure) -> SResult<CertificateReport> {
    let (left, right) = bipartite_sides(host)?;
    let n = left.len();
    let mut violations = Vec::new();
    let mut issues = Vec::new();
    let mut expect = |u: usize, v: usize, allowed: &[u32], what: &str| {
        let c = color(host, u, v);
        if !allowed.contains(&c) {
            let edge = if u < v { (u, v) } else { (v, u) };
            violations.push(EdgeViolation { edge, color: c, reason: what.to_string() });
        }
    };
    let side_sets = |side: Side| match side {
        Side::Left => (left.clone(), right.clone()),
        Side::Right => (right.clone(), left.clone()),
    };
    match s {
        BipartiteStructure::StarPartition { u_side, parts } => {
            let (us, vs) = side_sets(*u_side);
            let slices: Vec<&[usize]> = parts.iter().map(|p| p.vertices.as_slice()).collect();
            check_cover(&slices, &us)?;
            for p in parts {
                for &u in &p.vertices {
                    for &v in &vs {
                        expect(u, v, &[p.color], &format!("part of color {} must see the other side in that color", p.color));
                    }
                }
            }
        }
        BipartiteStructure::A { u_side, color1, u1, u2, v_parts } => {
            let (us, vs) = side_sets(*u_side);
            check_cover(&[u1.as_slice(), u2.as_slice()], &us)?;
            let slices: Vec<&[usize]> = v_parts.iter().map(|p| p.vertices.as_slice()).collect();
            check_cover(&slices, &vs)?;
            if u1.is_empty() {
                issues.push("U_1 is empty".into());
            }
            for &u in u2 {
                for &v in &vs {
                    expect(u, v, &[*color1], "edge from U_2 must have the distinguished color");
                }
            }
            for p in v_parts {
                for &u in u1 {
                    for &v in &p.vertices {
                        expect(u, v, &[p.color], &format!("edge from U_1 to the part of color {} must have that color", p.color));
                    }
                }
            }
        }
        BipartiteStructure::B { color1, parts } => {
            let us: Vec<&[usize]> = parts.iter().map(|p| p.u.as_slice()).collect();
            let vs: Vec<&[usize]> = parts.iter().map(|p| p.v.as_slice()).collect();
            check_cover(&us, &left)?;
            check_cover(&vs, &right)?;
            for (i, p) in parts.iter().enumerate() {
                if p.u.is_empty() {
                    issues.push(format!("part {i} has no vertex in U"));
                }
                let present = p.u.iter().any(|&u| p.v.iter().any(|&v| color(host, u, v) == p.color));
                if !present {
                    issues.push(format!("part {i} contains no edge of its own color {}", p.color));
                }
                for (j, q) in parts.iter().enumerate() {
                    for &u in &p.u {
                        for &v in &q.v {
                            if i == j {
                                expect(u, v, &[*color1, p.color], "edge inside a part must have the distinguished or own color");
                            } else {
                                expect(u, v, &[*color1], "edge between parts must have the distinguished color");
                            }
                        }
                    }
                }
            }
        }
        BipartiteStructure::C { .. } => {
            if !(n == 3 || n == 4) {
                issues.push(format!("sides have {n} vertices; expected 3 or 4"));
            }
            if host.k() != 4 {
                issues.push(format!("host uses {} colors; expected 4", host.k()));
            }
            for c in 1..=host.k() as u32 {
                if host.color_adjacency(c).iter().any(|a| bits::count(*a) > 1) {
                    issues.push(format!("color {c} is not a matching"));
                }
            }
        }
    }
    Ok(CertificateReport::finish(violations, issues))
}

fn check_cover(parts: &[&[usize]], side: &[usize]) -> SResult<()> {
    let mut all: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    all.sort_unstable();
    let mut want = side.to_vec();
    want.sort_unstable();
    if all != want {
        return Err(StructureError::NotPartition("parts do not partition their side".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tripartite embeddings

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TripartiteRoute {
    /// classes paired crosswise: `x >= max(s1+t2, t1+s2)`, `y >= min(..)`, `z >= s3+t3`
    ConditionI,
    /// classes paired in order: `x >= s1+t1`, `y >= s2+t2`, `z >= s3+t3`
    ConditionIi,
    /// fewer vertices than the union needs
    Counting,
    ExactSearch,
    /// neither condition holds and the host is too large to search
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripartiteReport {
    /// `None` when undecided
    pub contains: Option<bool>,
    pub route: TripartiteRoute,
    /// class-size profiles (descending) that satisfied a condition
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<(Vec<usize>, Vec<usize>)>,
    /// part sizes in the order the condition used them
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<[usize; 3]>,
}

fn permutations3(p: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = p;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Whether `K_{x,y,z}` contains `g1 u g2` for 3-chromatic `g1`, `g2`.
/// Tries the two class-pairing conditions over every class-size profile of
/// both graphs and every ordering of the parts, then falls back to exact
/// search when `x + y + z` is at most [`TRIPARTITE_SEARCH_LIMIT`].
pub fn tripartite_contains_union(x: usize, y: usize, z: usize, g1: &SimpleGraph, g2: &SimpleGraph) -> SResult<TripartiteReport> {
    if chromatic_number(g1) != 3 {
        return Err(StructureError::NotThreeChromatic("g1"));
    }
    if chromatic_number(g2) != 3 {
        return Err(StructureError::NotThreeChromatic("g2"));
    }
    let p1 = class_size_profiles(g1, 3)?;
    let p2 = class_size_profiles(g2, 3)?;
    for route in [TripartiteRoute::ConditionIi, TripartiteRoute::ConditionI] {
        for s in &p1 {
            for t in &p2 {
                for [a, b, c] in permutations3([x, y, z]) {
                    let ok = match route {
                        TripartiteRoute::ConditionI => {
                            let (hi, lo) = ((s[0] + t[1]).max(t[0] + s[1]), (s[0] + t[1]).min(t[0] + s[1]));
                            a >= hi && b >= lo && c >= s[2] + t[2]
                        }
                        _ => a >= s[0] + t[0] && b >= s[1] + t[1] && c >= s[2] + t[2],
                    };
                    if ok {
                        return Ok(TripartiteReport {
                            contains: Some(true),
                            route,
                            profiles: Some((s.clone(), t.clone())),
                            order: Some([a, b, c]),
                        });
                    }
                }
            }
        }
    }
    let union = g1.disjoint_union(g2);
    let total = x + y + z;
    let none = |contains, route| TripartiteReport { contains, route, profiles: None, order: None };
    if total < union.order() {
        return Ok(none(Some(false), TripartiteRoute::Counting));
    }
    if total <= TRIPARTITE_SEARCH_LIMIT {
        let host = SimpleGraph::complete_multipartite(&[x, y, z]);
        return Ok(none(Some(find_subgraph(&union, &host).is_some()), TripartiteRoute::ExactSearch));
    }
    Ok(none(None, TripartiteRoute::Undecided))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, ConstructionKind, ConstructionParams};
    use crate::table::KnownValuesTable;

    fn k5_one_color() -> ColoredHost {
        ColoredHost::from_fn(Shape::Complete { n: 5 }, |_, _| 1)
    }

    #[test]
    fn monochrome_host_has_no_partition() {
        let host = k5_one_color();
        let cert = P5Partition { color1: 1, parts: vec![vec![0, 1, 2], vec![3, 4]], part_colors: None, k: 3 };
        let report = verify_p5_partition(&host, &cert).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.issues.iter().any(|i| i.contains("own color")));
        assert_eq!(recover_p5_partition(&host).unwrap(), None);
    }

    #[test]
    fn shape_round_trip_and_planted_violation() {
        let params = ConstructionParams { part_sizes: Some(vec![4, 3, 2]), ..Default::default() };
        let r = construct(ConstructionKind::NoRainbowP5Shape, &[], &params, &KnownValuesTable::new()).unwrap();
        let cert = recover_p5_partition(&r.host).unwrap().expect("certificate");
        assert_eq!(verify_p5_partition(&r.host, &cert).unwrap().verdict, Verdict::Pass);
        let mut sizes: Vec<usize> = cert.parts.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3, 4]);

        // a cross edge (0 in the first part, 8 in the last) takes the first
        // part's own color; edge (0, 1) keeps the color numbering unchanged
        let bad = r.host.recolored(0, 8, 2);
        assert_eq!(bad.colors()[0], r.host.colors()[0]);
        let report = verify_p5_partition(&bad, &cert).unwrap();
        assert_eq!(report.verdict, Verdict::Fail);
        assert_eq!(report.violations.iter().map(|v| v.edge).collect::<Vec<_>>(), vec![(0, 8)]);
    }

    #[test]
    fn extended_size_conditions() {
        let h = SimpleGraph::complete(3).copies(2);
        let cert = |sizes: &[usize]| {
            let mut next = 0;
            let parts = sizes
                .iter()
                .map(|&s| {
                    next += s;
                    (next - s..next).collect()
                })
                .collect::<Vec<Vec<usize>>>();
            P5Partition { color1: 1, k: parts.len() + 1, parts, part_colors: None }
        };
        let verdicts = |r: SizeReport| r.conditions.iter().map(|c| c.verdict).collect::<Vec<_>>();
        use Verdict::{Fail, Pass};
        assert_eq!(verdicts(check_extended_sizes(&cert(&[7, 6, 3]), &h)), vec![Pass, Pass, Pass, Pass]);
        assert_eq!(verdicts(check_extended_sizes(&cert(&[10, 2, 2]), &h))[1], Fail);
        let two = check_extended_sizes(&cert(&[6, 6]), &h);
        assert!(!two.all_pass);
        assert_eq!(two.conditions[3].verdict, Fail);
    }

    #[test]
    fn star_partition_round_trip() {
        let params = ConstructionParams { u_sizes: Some(vec![1, 1, 2]), ..Default::default() };
        let r = construct(ConstructionKind::BipartiteNoRainbowP4Shape, &[], &params, &KnownValuesTable::new()).unwrap();
        let report = classify_bipartite_structure(&r.host, 4).unwrap();
        let s = report.structure.expect("structure");
        match &s {
            BipartiteStructure::StarPartition { u_side, parts } => {
                assert_eq!(*u_side, Side::Left);
                assert_eq!(parts.iter().map(|p| p.vertices.len()).collect::<Vec<_>>(), vec![1, 1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(verify_bipartite_structure(&r.host, &s).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn case_b_round_trip() {
        let params = ConstructionParams {
            u_sizes: Some(vec![1, 2, 1]),
            v_sizes: Some(vec![2, 1, 1]),
            seed: Some(1),
            ..Default::default()
        };
        let r = construct(ConstructionKind::BipartiteNoRainbowP5B, &[], &params, &KnownValuesTable::new()).unwrap();
        let report = classify_bipartite_structure(&r.host, 5).unwrap();
        assert!(report.rainbow_path_free);
        let s = report.structure.expect("structure");
        assert_eq!(verify_bipartite_structure(&r.host, &s).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn matching_coloring_is_case_c() {
        // K_{3,3} split into three perfect matchings, one of them recolored
        // in two pieces: color sizes 3, 3, 2, 1
        let host = ColoredHost::from_fn(Shape::Bipartite { m: 3, n: 3 }, |u, v| {
            let c = ((v - 3) + 3 - u) % 3 + 1;
            if c == 3 && u == 2 {
                4
            } else {
                c as u32
            }
        });
        assert_eq!(host.k(), 4);
        let report = classify_bipartite_structure(&host, 5).unwrap();
        assert!(matches!(report.structure, Some(BipartiteStructure::C { n: 3, k: 4 })), "{report:?}");
    }

    #[test]
    fn tripartite_examples() {
        let k3 = SimpleGraph::complete(3);
        let r = tripartite_contains_union(2, 2, 2, &k3, &k3).unwrap();
        assert_eq!((r.contains, r.route), (Some(true), TripartiteRoute::ConditionIi));
        let r = tripartite_contains_union(2, 2, 1, &k3, &k3).unwrap();
        assert_eq!(r.contains, Some(false));
        let r = tripartite_contains_union(3, 3, 2, &SimpleGraph::cycle(5), &k3).unwrap();
        assert_eq!((r.contains, r.route), (Some(true), TripartiteRoute::ConditionIi));
        assert_eq!(r.profiles, Some((vec![2, 2, 1], vec![1, 1, 1])));
        assert!(tripartite_contains_union(3, 3, 3, &SimpleGraph::cycle(4), &k3).is_err());
    }
}
