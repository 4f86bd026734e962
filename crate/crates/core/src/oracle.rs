//! Closed-form bounds and theorem hypothesis checks for a graph `H`.
//!
//! Values that no formula yields (two-color Ramsey numbers of arbitrary
//! pairs, `R(H, M(H))`, ...) come from a [`KnownValuesTable`]; when one is
//! missing the affected entry is reported as unknown instead of failing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::graph::{
    chromatic_number, class_size_profiles, clique_number, coloring_with_class_sizes, invariants,
    is_color_critical, is_homological, is_subgraph, partite_profile, GraphError, SimpleGraph,
};
use crate::table::{key_connected_supergraphs, key_family, key_pair, key_single, KnownValuesTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Lower,
    Upper,
    Equal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntryStatus {
    Evaluated,
    /// a needed table value is missing
    Unknown,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub rule: String,
    pub target: String,
    pub direction: Direction,
    pub status: EntryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    pub expression: String,
    pub inputs: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph: String,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    /// Largest evaluated lower bound (or exact value) for `target`.
    pub fn best_lower(&self, target: &str) -> Option<u64> {
        self.entries
            .iter()
            .filter(|e| e.target == target && e.status == EntryStatus::Evaluated)
            .filter(|e| matches!(e.direction, Direction::Lower | Direction::Equal))
            .filter_map(|e| e.value)
            .max()
    }
}

fn g6(g: &SimpleGraph) -> String {
    g.to_graph6()
}

fn is_complete(g: &SimpleGraph) -> bool {
    let n = g.order();
    g.edge_count() == n * n.saturating_sub(1) / 2
}

fn is_tree(g: &SimpleGraph) -> bool {
    g.order() >= 1 && g.is_connected() && g.edge_count() + 1 == g.order()
}

/// `mK_2` for some `m >= 1`.
fn matching_size(g: &SimpleGraph) -> Option<usize> {
    (g.order() > 0 && (0..g.order()).all(|v| g.degree(v) == 1)).then(|| g.order() / 2)
}

/// Where a two-color Ramsey value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSource {
    Table,
    /// clique versus tree
    CliqueTree,
    /// matching versus a graph with at least as many components
    MatchingComponents,
}

impl PairSource {
    pub fn name(self) -> &'static str {
        match self {
            PairSource::Table => "table",
            PairSource::CliqueTree => "clique-tree",
            PairSource::MatchingComponents => "matching-components",
        }
    }
}

/// `R(a, b)` from the table or a closed form.
pub fn pair_value(a: &SimpleGraph, b: &SimpleGraph, table: &KnownValuesTable) -> Option<(u64, PairSource)> {
    if let Some(v) = table.pair(a, b) {
        return Some((v, PairSource::Table));
    }
    for (x, y) in [(a, b), (b, a)] {
        if is_complete(x) && x.order() >= 1 && is_tree(y) {
            let (m, t) = (x.order() as u64, y.order() as u64 - 1);
            return Some((t * (m - 1) + 1, PairSource::CliqueTree));
        }
        if let Some(m) = matching_size(x) {
            let c = y.component_graphs().len();
            if y.is_nonempty() && y.isolated_vertices().is_empty() && m <= c {
                return Some(((y.order() + m - 1) as u64, PairSource::MatchingComponents));
            }
        }
    }
    None
}

struct Ctx {
    h: SimpleGraph,
    comps: Vec<SimpleGraph>,
    entries: Vec<BoundEntry>,
}

impl Ctx {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        rule: &str,
        target: String,
        direction: Direction,
        value: Option<u64>,
        expression: &str,
        inputs: Value,
        note: Option<String>,
    ) {
        let status = if value.is_some() { EntryStatus::Evaluated } else { EntryStatus::Unknown };
        self.entries.push(BoundEntry {
            rule: rule.into(),
            target,
            direction,
            status,
            value,
            expression: expression.into(),
            inputs: into_map(inputs),
            note,
        });
    }

    fn not_applicable(&mut self, rule: &str, target: String, direction: Direction, expression: &str, reason: String) {
        self.entries.push(BoundEntry {
            rule: rule.into(),
            target,
            direction,
            status: EntryStatus::NotApplicable,
            value: None,
            expression: expression.into(),
            inputs: BTreeMap::new(),
            note: Some(reason),
        });
    }
}

fn into_map(v: Value) -> BTreeMap<String, Value> {
    match v {
        Value::Object(m) => m.into_iter().collect(),
        Value::Null => BTreeMap::new(),
        other => BTreeMap::from([("value".to_string(), other)]),
    }
}

fn sigma(g: &SimpleGraph) -> Result<usize, GraphError> {
    Ok(invariants(g)?.chromatic_surplus)
}

fn sigma3(g: &SimpleGraph) -> Result<usize, GraphError> {
    Ok(invariants(g)?.sigma3)
}

/// Every closed-form bound that applies to `h`. Three-color bounds use `h`
/// without isolated vertices, which only lowers them.
pub fn formula_bounds(h: &SimpleGraph, table: &KnownValuesTable) -> Result<BoundReport, GraphError> {
    let (core, isolated) = h.strip_isolated();
    let comps = core.component_graphs();
    let mut ctx = Ctx { h: h.clone(), comps, entries: Vec::new() };
    let name = g6(h);
    let r2 = format!("R_2({name})");
    let r3 = format!("R_3({name})");

    // two-color lower bound for connected graphs
    if h.is_connected() && h.is_nonempty() {
        let (chi, n, s) = (chromatic_number(h), h.order(), sigma(h)?);
        ctx.push(
            "burr",
            r2.clone(),
            Direction::Lower,
            Some(((chi - 1) * (n - 1) + s) as u64),
            "(chi-1)(|V|-1)+sigma",
            json!({"chi": chi, "order": n, "sigma": s}),
            None,
        );
    } else {
        ctx.not_applicable("burr", r2.clone(), Direction::Lower, "(chi-1)(|V|-1)+sigma", "H is not connected".into());
    }

    pair_formulas(&mut ctx, table)?;
    three_color_bounds(&mut ctx, table, isolated)?;
    decomposition_bounds(&mut ctx, table)?;
    bipartite_bounds(&mut ctx, table)?;

    // constrained numbers: f(H,P_t) >= R_{t-2}(H)
    let best_r3 = ctx.entries.iter().filter(|e| e.target == r3 && e.status == EntryStatus::Evaluated).filter_map(|e| e.value).max();
    let table_r3 = table.get(&key_single("R3", h));
    let (value, source) = match (table_r3, best_r3) {
        (Some(v), _) => (Some(v), "table value of R_3(H)"),
        (None, Some(v)) => (Some(v), "best lower bound on R_3(H) above"),
        (None, None) => (None, "no value for R_3(H)"),
    };
    ctx.push(
        "trivial-constrained",
        format!("f({name},P_5)"),
        Direction::Lower,
        value,
        "R_3(H)",
        json!({"R_3(H)": value}),
        Some(format!("three colors never form a rainbow P_5; {source}")),
    );
    if h.order() >= 1 {
        ctx.push(
            "trivial-constrained",
            format!("f({name},P_t)"),
            Direction::Lower,
            Some(h.order().max(2) as u64),
            "R_{t-2}(H) >= |V(H)|",
            json!({"order": h.order()}),
            None,
        );
    }

    exact_k_bounds(&mut ctx, table)?;
    Ok(BoundReport { graph: name, entries: ctx.entries })
}

/// Closed-form `R(G_j, G_l)` for component pairs.
fn pair_formulas(ctx: &mut Ctx, table: &KnownValuesTable) -> Result<(), GraphError> {
    let comps = ctx.comps.clone();
    let mut seen = Vec::new();
    for (j, a) in comps.iter().enumerate() {
        for b in &comps[j..] {
            let key = key_pair(a, b);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key.clone());
            match pair_value(a, b, table) {
                Some((v, PairSource::CliqueTree)) => {
                    let (k, t) = if is_complete(a) && is_tree(b) { (a, b) } else { (b, a) };
                    ctx.push(
                        "clique-tree",
                        key,
                        Direction::Equal,
                        Some(v),
                        "t(m-1)+1",
                        json!({"m": k.order(), "t": t.order() - 1}),
                        None,
                    );
                }
                Some((v, PairSource::MatchingComponents)) => {
                    let (m, y) = if matching_size(a).is_some() { (a, b) } else { (b, a) };
                    ctx.push(
                        "matching-components",
                        key,
                        Direction::Equal,
                        Some(v),
                        "|V(H)|+m-1",
                        json!({"m": m.order() / 2, "order": y.order(), "components": y.component_graphs().len()}),
                        None,
                    );
                }
                _ => {}
            }
        }
    }
    // R(mK_2, H) for the whole graph
    let h = ctx.h.clone();
    if h.is_nonempty() && h.isolated_vertices().is_empty() {
        let c = h.component_graphs().len();
        for m in 1..=c {
            let mk2 = SimpleGraph::complete(2).copies(m);
            ctx.push(
                "matching-components",
                key_pair(&mk2, &h),
                Direction::Equal,
                Some((h.order() + m - 1) as u64),
                "|V(H)|+m-1",
                json!({"m": m, "order": h.order(), "components": c}),
                None,
            );
        }
        // beyond the component count the general matching formula needs
        // K_c u K_ceil(c/2) in the complement, c the independence number
        let comp = h.complement();
        let alpha = clique_number(&comp);
        let pattern = SimpleGraph::complete(alpha).disjoint_union(&SimpleGraph::complete(alpha.div_ceil(2)));
        if is_subgraph(&pattern, &comp) {
            let m = c + 1;
            let v = (h.order() + 2 * m).saturating_sub(alpha + 1).max(h.order() + m - 1);
            ctx.push(
                "matching-independence",
                key_pair(&SimpleGraph::complete(2).copies(m), &h),
                Direction::Equal,
                Some(v as u64),
                "max{|V(H)|+2m-c-1, |V(H)|+m-1}",
                json!({"m": m, "order": h.order(), "independence": alpha}),
                None,
            );
        }
    }
    Ok(())
}

fn three_color_bounds(ctx: &mut Ctx, table: &KnownValuesTable, isolated: usize) -> Result<(), GraphError> {
    let name = g6(&ctx.h);
    let r3 = format!("R_3({name})");
    let comps = ctx.comps.clone();
    let note = (isolated > 0).then(|| format!("computed for H without its {isolated} isolated vertices"));
    if comps.is_empty() {
        return Ok(());
    }
    let chis: Vec<usize> = comps.iter().map(chromatic_number).collect();
    let sigmas: Vec<usize> = comps.iter().map(sigma).collect::<Result<_, _>>()?;
    let total: usize = comps.iter().map(SimpleGraph::order).sum();

    // R3_I: best over (i, j, l) with a known R(G_j, G_l)
    let mut best: Option<(u64, Value)> = None;
    let mut unresolved = Vec::new();
    for i in 0..comps.len() {
        let sig: usize = (0..comps.len()).filter(|&k| chis[k] == chis[i]).map(|k| sigmas[k]).sum();
        for j in 0..comps.len() {
            for l in 0..comps.len() {
                match pair_value(&comps[j], &comps[l], table) {
                    Some((r, src)) => {
                        let v = ((chis[i] - 1) as u64) * (r - 1) + sig as u64;
                        if best.as_ref().is_none_or(|(b, _)| v > *b) {
                            best = Some((
                                v,
                                json!({"i": i, "j": j, "l": l, "chi_i": chis[i], "R(G_j,G_l)": r,
                                       "R_source": src.name(), "sigma_sum": sig}),
                            ));
                        }
                    }
                    None => {
                        let key = key_pair(&comps[j], &comps[l]);
                        if !unresolved.contains(&key) {
                            unresolved.push(key);
                        }
                    }
                }
            }
        }
    }
    let expr_i = "max over i,j,l of (chi(G_i)-1)(R(G_j,G_l)-1)+sum of sigma over components with chi=chi(G_i)";
    let note_i = match (&note, unresolved.is_empty()) {
        (n, true) => n.clone(),
        (n, false) => Some(
            [n.clone(), Some(format!("pairs without a value: {}", unresolved.join(", ")))]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .join("; "),
        ),
    };
    match best {
        Some((v, inputs)) => ctx.push("union-partition", r3.clone(), Direction::Lower, Some(v), expr_i, inputs, note_i),
        None => ctx.push("union-partition", r3.clone(), Direction::Lower, None, expr_i, Value::Null, note_i),
    }

    // R3_II
    let mut best: Option<(u64, Value)> = None;
    let mut missing = Vec::new();
    for (i, gi) in comps.iter().enumerate() {
        let w = clique_number(gi);
        let kw = SimpleGraph::complete(w);
        let Some(rw) = table.clique_diagonal(w).or_else(|| pair_value(&kw, &kw, table).map(|p| p.0)) else {
            missing.push(key_pair(&kw, &kw));
            continue;
        };
        for (j, gj) in comps.iter().enumerate() {
            let v = (rw - 1) * (gj.order() as u64 - 1) + 1;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, json!({"i": i, "j": j, "omega": w, "R_2(K_omega)": rw, "order_j": gj.order()})));
            }
        }
    }
    missing.dedup();
    let expr_ii = "max over i,j of (R_2(K_omega(G_i))-1)(|V(G_j)|-1)+1";
    let note_ii = (!missing.is_empty()).then(|| format!("missing: {}", missing.join(", ")));
    match best {
        Some((v, inputs)) => ctx.push("clique-blowup", r3.clone(), Direction::Lower, Some(v), expr_ii, inputs, note_ii),
        None => ctx.push("clique-blowup", r3.clone(), Direction::Lower, None, expr_ii, Value::Null, note_ii),
    }

    // R3_III and R3_IV
    if chis.iter().all(|&c| c == 3) {
        ctx.push(
            "rotation",
            r3.clone(),
            Direction::Lower,
            Some((3 * total - 2) as u64),
            "3*sum|V(G_i)|-2",
            json!({"order_sum": total}),
            note.clone(),
        );
    } else {
        ctx.not_applicable("rotation", r3.clone(), Direction::Lower, "3*sum|V(G_i)|-2", "some component is not 3-chromatic".into());
    }
    if chis.iter().copied().max() == Some(3) {
        let s3: usize = comps.iter().map(sigma3).collect::<Result<Vec<_>, _>>()?.into_iter().sum();
        ctx.push(
            "two-cliques",
            r3.clone(),
            Direction::Lower,
            Some((2 * total + s3 - 2) as u64),
            "2*sum|V(G_i)|+sum sigma_3(G_i)-2",
            json!({"order_sum": total, "sigma3_sum": s3}),
            note,
        );
    } else {
        ctx.not_applicable(
            "two-cliques",
            r3.clone(),
            Direction::Lower,
            "2*sum|V(G_i)|+sum sigma_3(G_i)-2",
            "the largest chromatic number is not 3".into(),
        );
    }
    let n = ctx.h.order();
    ctx.push("trivial-order", r3, Direction::Lower, Some(n.max(2) as u64), "|V(H)|", json!({"order": n}), None);
    if let Some(v) = table.get(&key_single("R3", &ctx.h)) {
        ctx.push("table", format!("R_3({name})"), Direction::Equal, Some(v), "table entry", json!({"key": key_single("R3", &ctx.h)}), None);
    }
    Ok(())
}

fn decomposition_bounds(ctx: &mut Ctx, table: &KnownValuesTable) -> Result<(), GraphError> {
    let h = ctx.h.clone();
    let name = g6(&h);
    let expr = "R(H,M(H))+(chi-2)(|V|-1)";
    let target = format!("R_2({name})");
    let chi = chromatic_number(&h);
    if !h.is_connected() || chi < 3 {
        ctx.not_applicable("decomposition", target, Direction::Lower, expr, "needs a connected graph with chi >= 3".into());
    } else {
        let key = key_family(&h, 2);
        let v = table.family(&h, 2).map(|r| r + ((chi - 2) * (h.order() - 1)) as u64);
        let note = v.is_none().then(|| format!("missing {key}"));
        ctx.push("decomposition", target, Direction::Lower, v, expr, json!({"chi": chi, "order": h.order(), "key": key, "R(H,M(H))": table.family(&h, 2)}), note);
    }

    // R(G u K, M(K)) for H = G u K
    let comps = ctx.comps.clone();
    if comps.len() == 2 {
        for (g, k) in [(&comps[0], &comps[1]), (&comps[1], &comps[0])] {
            if chromatic_number(k) < 3 {
                continue;
            }
            let target = format!("R({name},M({}))", g6(k));
            let expr = "max{R(G,K), R(K,M(K))+|V(G)|}";
            let rgk = pair_value(g, k, table).map(|p| p.0);
            let rkm = table.family(k, 2);
            let v = rgk.zip(rkm).map(|(a, b)| a.max(b + g.order() as u64));
            let note = v.is_none().then(|| "needs R(G,K) and R(M(K),K)".to_string());
            ctx.push(
                "decomposition-union",
                target,
                Direction::Upper,
                v,
                expr,
                json!({"G": g6(g), "K": g6(k), "R(G,K)": rgk, "R(K,M(K))": rkm, "order_G": g.order()}),
                note,
            );
        }
    }
    Ok(())
}

fn bipartite_bounds(ctx: &mut Ctx, table: &KnownValuesTable) -> Result<(), GraphError> {
    let h = ctx.h.clone();
    let name = g6(&h);
    if !h.is_bipartite() || !h.is_nonempty() {
        ctx.not_applicable("bipartite-blowup", format!("BR_k({name})"), Direction::Lower, "k(t-1)+1", "H is not a nonempty bipartite graph".into());
        return Ok(());
    }
    let p = partite_profile(&h)?;
    let (s, t) = (p.s, p.t);
    let connected = h.is_connected();
    let blowup = |k: usize| (k * (t - 1) + 1) as u64;
    if connected {
        for k in 2..=3 {
            ctx.push("bipartite-blowup", format!("BR_{k}({name})"), Direction::Lower, Some(blowup(k)), "k(t-1)+1", json!({"k": k, "t": t}), None);
        }
    } else {
        ctx.not_applicable("bipartite-blowup", format!("BR_k({name})"), Direction::Lower, "k(t-1)+1", "H is not connected".into());
    }
    let br = |k: usize| table.get(&key_single(&format!("BR{k}"), &h));
    let br_lower = |k: usize| br(k).or_else(|| connected.then(|| blowup(k)));

    for k in 3..=5 {
        let star = (k * (s - 1) + 1) as u64;
        let target = format!("h_{k}({name},P_4)");
        let lower = br_lower(2).map_or(star, |b| b.max(star));
        ctx.push(
            "bipartite-p4",
            target.clone(),
            Direction::Lower,
            Some(lower),
            "max{BR_2(H), k(s-1)+1}",
            json!({"k": k, "s": s, "BR_2(H)": br_lower(2), "BR_2_source": if br(2).is_some() { "table" } else { "blowup bound" }}),
            None,
        );
        let holds = connected || (s >= 2 && k * (s - 1) >= t - 1);
        if holds {
            let v = br(2).map(|b| b.max(star));
            ctx.push(
                "bipartite-p4",
                target,
                Direction::Equal,
                v,
                "max{BR_2(H), k(s-1)+1}",
                json!({"k": k, "s": s, "t": t, "connected": connected, "BR_2(H)": br(2)}),
                v.is_none().then(|| format!("missing {}", key_single("BR2", &h))),
            );
        }
    }
    if h.order() >= 4 {
        for k in 4..=5 {
            let star = (k * (s - 1) + 1) as u64;
            let target = format!("h_{k}({name},P_5)");
            let lower = br_lower(3).map_or(star, |b| b.max(star));
            ctx.push(
                "bipartite-p5",
                target.clone(),
                Direction::Lower,
                Some(lower),
                "max{BR_3(H), k(s-1)+1}",
                json!({"k": k, "s": s, "BR_3(H)": br_lower(3), "BR_3_source": if br(3).is_some() { "table" } else { "blowup bound" }}),
                None,
            );
            let rhs = br(3).map(|b| b.max(star));
            let holds = if connected {
                Some(true)
            } else {
                br(2).zip(rhs).map(|(b2, r)| b2 + t as u64 - 1 <= r)
            };
            match holds {
                Some(true) => ctx.push(
                    "bipartite-p5",
                    target,
                    Direction::Equal,
                    rhs,
                    "max{BR_3(H), k(s-1)+1}",
                    json!({"k": k, "s": s, "t": t, "connected": connected, "BR_3(H)": br(3)}),
                    rhs.is_none().then(|| format!("missing {}", key_single("BR3", &h))),
                ),
                Some(false) => {}
                None => ctx.push(
                    "bipartite-p5",
                    target,
                    Direction::Equal,
                    None,
                    "max{BR_3(H), k(s-1)+1}",
                    json!({"k": k, "s": s, "t": t, "connected": false}),
                    Some("hypothesis needs BR_2(H) and BR_3(H)".into()),
                ),
            }
        }
    }
    Ok(())
}

fn exact_k_bounds(ctx: &mut Ctx, table: &KnownValuesTable) -> Result<(), GraphError> {
    let h = ctx.h.clone();
    let chi = chromatic_number(&h);
    for k in 4..=chi {
        let i = chi - k + 2;
        let key = key_family(&h, i);
        let v = table.family(&h, i).map(|r| ((k - 2) * (h.order() - 1)) as u64 + r);
        ctx.push(
            "exact-k",
            format!("f_exactly_{k}({},P_5)", g6(&h)),
            Direction::Lower,
            v,
            "(k-2)(|V|-1)+R(M_{chi-k+2}(H),H)",
            json!({"k": k, "chi": chi, "order": h.order(), "key": key, "R(M_i(H),H)": table.family(&h, i)}),
            v.is_none().then(|| format!("missing {key}")),
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Theorem hypotheses

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Applicability {
    Applies,
    Not,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub hypothesis: String,
    /// `None` when it could not be decided
    pub holds: Option<bool>,
    pub values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub id: String,
    pub verdict: Applicability,
    pub conclusion: String,
    /// `f(H,P_5) = R_3(H)` follows when the verdict is APPLIES
    pub certifies_equality: bool,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApplicabilityReport {
    pub graph: String,
    /// the graph the hypotheses were checked on (isolated vertices removed)
    pub reduced: String,
    pub verdicts: Vec<TheoremVerdict>,
    /// some applicable result certifies `f(H,P_5) = R_3(H)`
    pub certified: bool,
}

pub const EQUALITY: &str = "f(H,P_5) = R_3(H) certified";

struct Verdicts {
    out: Vec<TheoremVerdict>,
}

/// Builder for one theorem's trace; the first failing hypothesis decides.
struct Check {
    id: &'static str,
    conclusion: String,
    certifies: bool,
    trace: Vec<TraceStep>,
    state: Applicability,
}

impl Check {
    fn new(id: &'static str, conclusion: impl Into<String>, certifies: bool) -> Check {
        Check { id, conclusion: conclusion.into(), certifies, trace: Vec::new(), state: Applicability::Applies }
    }

    /// Records a hypothesis; later ones are skipped once one fails.
    fn require(&mut self, hypothesis: impl Into<String>, holds: Option<bool>, values: Value) -> bool {
        if self.state == Applicability::Not {
            return false;
        }
        self.trace.push(TraceStep { hypothesis: hypothesis.into(), holds, values: into_map(values) });
        match holds {
            Some(true) => true,
            Some(false) => {
                self.state = Applicability::Not;
                false
            }
            None => {
                self.state = Applicability::Unknown;
                false
            }
        }
    }

    fn live(&self) -> bool {
        self.state != Applicability::Not
    }

    fn finish(self, v: &mut Verdicts) {
        v.out.push(TheoremVerdict {
            id: self.id.into(),
            verdict: self.state,
            conclusion: self.conclusion,
            certifies_equality: self.certifies && self.state == Applicability::Applies,
            trace: self.trace,
        });
    }
}

fn g6s(gs: &[SimpleGraph]) -> Vec<String> {
    gs.iter().map(g6).collect()
}

/// Index of a component that contains every other component, if any.
fn host_component(comps: &[SimpleGraph]) -> Option<usize> {
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(comps[i].order()));
    order.into_iter().find(|&g| comps.iter().enumerate().all(|(i, c)| i == g || is_subgraph(c, &comps[g])))
}

/// Checks every theorem's hypotheses on `h` with isolated vertices removed.
pub fn applicability_report(h: &SimpleGraph, table: &KnownValuesTable) -> Result<ApplicabilityReport, GraphError> {
    let (core, isolated) = h.strip_isolated();
    let comps = core.component_graphs();
    let inv = invariants(&core)?;
    let chi = inv.chromatic_number;
    let mut v = Verdicts { out: Vec::new() };

    // connected or bipartite
    let mut c = Check::new("thm-connected-or-bipartite", EQUALITY, true);
    c.require("H is nonempty", Some(core.is_nonempty()), json!({"edges": core.edge_count()}));
    c.require(
        "H is connected or bipartite",
        Some(inv.is_connected || inv.is_bipartite),
        json!({"connected": inv.is_connected, "bipartite": inv.is_bipartite}),
    );
    c.finish(&mut v);

    // f <= R_{chi+1}
    let key = key_single(&format!("R{}", chi + 1), &core);
    let conclusion = match table.get(&key) {
        Some(r) => format!("f(H,P_5) <= R_{}(H) = {r}", chi + 1),
        None => format!("f(H,P_5) <= R_{}(H)", chi + 1),
    };
    let mut c = Check::new("thm-chromatic-upper", conclusion, chi < 3);
    c.require("H is nonempty", Some(core.is_nonempty()), json!({"chi": chi}));
    c.finish(&mut v);

    homological(&comps, &mut v)?;
    union_theorems(&comps, table, &mut v)?;

    // critical or bipartite components
    let mut c = Check::new("thm-critical", EQUALITY, true);
    c.require("H is nonempty", Some(core.is_nonempty()), Value::Null);
    for (i, g) in comps.iter().enumerate() {
        if !c.live() {
            break;
        }
        let crit = is_color_critical(g, 3)?;
        let bip = g.is_bipartite();
        c.require(
            format!("component {i} is 3-color-critical or bipartite"),
            Some(crit.critical || bip),
            json!({"component": g6(g), "critical_edge": crit.witness_edge, "bipartite": bip}),
        );
    }
    c.finish(&mut v);

    balanced(&comps, &mut v)?;

    // exactly one 3-chromatic component, components no smaller than sigma
    let mut c = Check::new("thm-one-3chromatic", EQUALITY, true);
    let chis: Vec<usize> = comps.iter().map(chromatic_number).collect();
    let three = chis.iter().filter(|&&x| x == 3).count();
    c.require("chi(H) = 3", Some(chi == 3), json!({"chi": chi}));
    c.require("exactly one component is 3-chromatic", Some(three == 1), json!({"component_chis": chis}));
    let min_order = comps.iter().map(SimpleGraph::order).min().unwrap_or(0);
    c.require(
        "every component has order >= sigma(H)",
        Some(min_order >= inv.chromatic_surplus),
        json!({"sigma": inv.chromatic_surplus, "min_component_order": min_order}),
    );
    c.finish(&mut v);

    let mut c = Check::new("cor-sigma-one", EQUALITY, true);
    c.require("chi(H) = 3", Some(chi == 3), json!({"chi": chi}));
    c.require("sigma(H) = 1", Some(inv.chromatic_surplus == 1), json!({"sigma": inv.chromatic_surplus}));
    c.finish(&mut v);

    // two components with chi(G_1) <= chi(G_2) = 3
    let mut c = Check::new("prop-g1g2", EQUALITY, true);
    if c.require("H has exactly two components", Some(comps.len() == 2), json!({"components": comps.len()})) {
        let (mut g1, mut g2) = (&comps[0], &comps[1]);
        if chromatic_number(g1) > chromatic_number(g2) {
            std::mem::swap(&mut g1, &mut g2);
        }
        let (x1, x2) = (chromatic_number(g1), chromatic_number(g2));
        c.require("chi(G_1) <= chi(G_2) = 3", Some(x2 == 3), json!({"chi_1": x1, "chi_2": x2}));
        let (s1, s2) = (sigma3(g1)?, sigma3(g2)?);
        let m = g1.order().min(g2.order());
        c.require(
            "min(|V(G_1)|, |V(G_2)|) >= sigma_3(G_1) + sigma_3(G_2)",
            Some(m >= s1 + s2),
            json!({"min_order": m, "sigma3_1": s1, "sigma3_2": s2}),
        );
    }
    c.finish(&mut v);

    // table-driven R_3(H) >= R_2(C(H))
    let mut c = Check::new("lemma-ch", EQUALITY, true);
    if c.require("H is disconnected", Some(!inv.is_connected), json!({"components": comps.len()})) {
        let (k3, kc) = (key_single("R3", &core), key_connected_supergraphs(&core));
        let (r3, rc) = (table.get(&k3), table.get(&kc));
        c.require(
            "R_3(H) >= R_2(C(H))",
            r3.zip(rc).map(|(a, b)| a >= b),
            json!({"R_3(H)": r3, "R_2(C(H))": rc, "keys": [k3, kc]}),
        );
    }
    c.finish(&mut v);

    // isolated vertices
    let mut c = Check::new(
        "prop-isolated",
        "conclusions for H without isolated vertices carry over to H".to_string(),
        false,
    );
    c.require("H has isolated vertices", Some(isolated > 0), json!({"isolated": isolated, "reduced": g6(&core)}));
    c.finish(&mut v);

    let certified = v.out.iter().any(|t| t.certifies_equality);
    Ok(ApplicabilityReport { graph: g6(h), reduced: g6(&core), verdicts: v.out, certified })
}

fn homological(comps: &[SimpleGraph], v: &mut Verdicts) -> Result<(), GraphError> {
    let cert = homological_certificate(comps);
    v.out.push(cert.verdict);
    Ok(())
}

fn union_theorems(comps: &[SimpleGraph], table: &KnownValuesTable, v: &mut Verdicts) -> Result<(), GraphError> {
    // G_1 subgraph of G_2
    let mut c = Check::new("thm-union-1", EQUALITY, true);
    if c.require("H has exactly two components", Some(comps.len() == 2), json!({"components": comps.len()})) {
        let (a, b) = (&comps[0], &comps[1]);
        let sub = is_subgraph(a, b) || is_subgraph(b, a);
        c.require("one component is a subgraph of the other", Some(sub), json!({"components": g6s(comps)}));
    }
    c.finish(v);

    // G containing t smaller components
    let host = host_component(comps);
    let mut c = Check::new("thm-union-2", EQUALITY, true);
    let mut d = Check::new("cor-union-chi", EQUALITY, true);
    let many = comps.len() >= 2;
    c.require("H has at least two components", Some(many), json!({"components": comps.len()}));
    d.require("H has at least two components", Some(many), json!({"components": comps.len()}));
    if many {
        let hv = json!({"components": g6s(comps), "host": host.map(|i| g6(&comps[i]))});
        c.require("some component G contains all the others", Some(host.is_some()), hv.clone());
        d.require("some component G contains all the others", Some(host.is_some()), hv);
    }
    if let (Some(gi), true) = (host, many) {
        let g = &comps[gi];
        let t = comps.len() - 1;
        let (chi, n, s) = (chromatic_number(g), g.order(), sigma(g)?);
        // t * chi * |V| <= (chi-2)(R_2(G)-1) + sigma - 1, monotone in R_2(G)
        let fits = |r2: u64| ((t * chi * n) as i64) < (chi as i64 - 2) * (r2 as i64 - 1) + s as i64;
        let burr = ((chi - 1) * (n - 1) + s) as u64;
        let tabled = pair_value(g, g, table).map(|p| p.0);
        let (holds, used, source) = match tabled {
            Some(r) => (Some(fits(r)), r, "table"),
            None if fits(burr) => (Some(true), burr, "lower bound (chi-1)(|V|-1)+sigma"),
            None => (None, burr, "lower bound only; table value missing"),
        };
        c.require(
            "t <= ((chi(G)-2)(R_2(G)-1)+sigma(G)-1) / (chi(G)|V(G)|)",
            holds,
            json!({"t": t, "chi": chi, "order": n, "sigma": s, "R_2(G)": used, "R_2_source": source,
                   "key": key_pair(g, g)}),
        );
        // chi >= (a + sqrt(a^2 - 12)) / 2 with a = t + 4
        let a = (t + 4) as i64;
        let lhs = 2 * chi as i64 - a;
        d.require(
            "chi(G) >= (t+4+sqrt((t+4)^2-12))/2",
            Some(lhs >= 0 && lhs * lhs >= a * a - 12),
            json!({"t": t, "chi": chi, "threshold": ((a as f64) + ((a * a - 12) as f64).sqrt()) / 2.0}),
        );
    }
    c.finish(v);
    d.finish(v);
    Ok(())
}

/// Per-component class sizes `a >= b >= c = sigma_3` with `a - b <= 1`
/// (`a = b`, `c = 0` for bipartite components) and
/// `b_i + c_i >= sum_{j != i} c_j`, backed by explicit colorings.
fn balanced(comps: &[SimpleGraph], v: &mut Verdicts) -> Result<(), GraphError> {
    let mut c = Check::new("thm-balanced", EQUALITY, true);
    let chis: Vec<usize> = comps.iter().map(chromatic_number).collect();
    c.require(
        "components are 3-chromatic or bipartite, at least one 3-chromatic",
        Some(!comps.is_empty() && chis.iter().all(|&x| x == 3 || x <= 2) && chis.contains(&3)),
        json!({"component_chis": chis}),
    );
    let mut sizes = Vec::new();
    for (i, g) in comps.iter().enumerate() {
        if !c.live() {
            break;
        }
        let cc = sigma3(g)?;
        let rest = g.order() - cc;
        let (a, b) = (rest.div_ceil(2), rest / 2);
        let wanted = vec![a, b, cc];
        let ok = if chis[i] == 3 {
            class_size_profiles(g, 3)?.contains(&wanted)
        } else {
            a == b && class_size_profiles(g, 2)?.contains(&vec![a, b])
        };
        let coloring = ok.then(|| coloring_with_class_sizes(g, &wanted)).flatten();
        c.require(
            format!("component {i} has a proper 3-coloring with classes (a,b,c), a-b <= 1{}", if chis[i] == 3 { "" } else { ", a = b" }),
            Some(ok && coloring.is_some()),
            json!({"component": g6(g), "sizes": wanted, "coloring": coloring}),
        );
        sizes.push((b, cc));
    }
    if c.live() {
        let total_c: usize = sizes.iter().map(|s| s.1).sum();
        for (i, &(b, cc)) in sizes.iter().enumerate() {
            let others = total_c - cc;
            c.require(
                format!("b_{i} + c_{i} >= sum of the other c_j"),
                Some(b + cc >= others),
                json!({"b": b, "c": cc, "others": others}),
            );
        }
    }
    c.finish(v);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologicalCertificate {
    pub verdict: TheoremVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

/// For connected graphs of equal order sharing a class-size vector, the
/// union satisfies `f <= R_k` with `k = max{t, p, 3}`; equality with `R_3`
/// when `k = 3`.
pub fn homological_certificate(graphs: &[SimpleGraph]) -> HomologicalCertificate {
    let mut c = Check::new("thm-homological", "", false);
    let t = graphs.len();
    let connected = !graphs.is_empty() && graphs.iter().all(|g| g.is_connected() && g.is_nonempty());
    let mut vector = None;
    let mut k = None;
    if c.require("graphs are nonempty and connected", Some(connected), json!({"graphs": g6s(graphs)})) {
        let orders: Vec<usize> = graphs.iter().map(SimpleGraph::order).collect();
        if c.require("graphs have equal order", Some(orders.windows(2).all(|w| w[0] == w[1])), json!({"orders": orders})) {
            match is_homological(graphs) {
                Ok(found) => {
                    let p = graphs.iter().map(chromatic_number).max().unwrap_or(0);
                    if c.require(
                        "graphs share a class-size vector",
                        Some(found.is_some()),
                        json!({"p": p, "vector": found}),
                    ) {
                        let kk = t.max(p).max(3);
                        c.certifies = kk == 3;
                        c.conclusion = if kk == 3 {
                            format!("f(H,P_5) <= R_3(H); {EQUALITY}")
                        } else {
                            format!("f(H,P_5) <= R_{kk}(H)")
                        };
                        c.trace.last_mut().expect("just pushed").values.insert("k".into(), json!(kk));
                        vector = found;
                        k = Some(kk);
                    }
                }
                Err(e) => {
                    c.require("sizes within exact limits", None, json!({"error": e.to_string()}));
                }
            }
        }
    }
    if c.conclusion.is_empty() {
        c.conclusion = "f(H,P_5) <= R_k(H) with k = max{t,p,3}".into();
    }
    let verdict = {
        let mut v = Verdicts { out: Vec::new() };
        c.finish(&mut v);
        v.out.pop().expect("one verdict")
    };
    HomologicalCertificate { verdict, vector, k }
}
