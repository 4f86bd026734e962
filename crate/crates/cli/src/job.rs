//! Self-contained job descriptions. Every emitted document embeds the job
//! that produced it so `verify` can re-run it.

use std::time::Duration;

use ramsey_forge::colored::{find_mono_copy, find_rainbow_path};
use ramsey_forge::construct::{construct, verify_construction, ConstructionKind, ConstructionParams, Verdict};
use ramsey_forge::graph::{decomposition_family, invariants, is_color_critical, parse_graph6, partite_profile};
use ramsey_forge::oracle::{applicability_report, formula_bounds, homological_certificate};
use ramsey_forge::search::{
    bipartite_constrained, bipartite_ramsey_k, constrained_ramsey, exists_good_coloring, ramsey_k, two_color_ramsey,
    NumberStatus,
};
use ramsey_forge::structure::{
    check_extended_sizes, classify_bipartite_structure, recover_p5_partition, tripartite_contains_union,
    verify_bipartite_structure, verify_p5_partition,
};
use ramsey_forge::{Budget, ColoredHost, KnownValuesTable, SearchOptions, SearchProblem, SearchStatus, Shape, SimpleGraph};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Job {
    Invariants {
        graph: String,
    },
    Construct {
        kind: ConstructionKind,
        components: Vec<String>,
        params: ConstructionParams,
        verify: bool,
    },
    Structure {
        host: ColoredHost,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forbid_rainbow: Option<usize>,
    },
    Tripartite {
        sizes: [usize; 3],
        components: [String; 2],
    },
    Search {
        problem: SearchProblem,
    },
    Ramsey {
        graph: String,
        colors: usize,
        nmax: usize,
    },
    TwoColorRamsey {
        components: [String; 2],
        nmax: usize,
    },
    Constrained {
        graph: String,
        forbid_rainbow: usize,
        nmax: usize,
    },
    BipartiteRamsey {
        graph: String,
        colors: usize,
        nmax: usize,
    },
    BipartiteConstrained {
        graph: String,
        forbid_rainbow: usize,
        budget: Budget,
        nmax: usize,
    },
    Oracle {
        graph: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        components: Vec<String>,
    },
    CheckHost {
        host: ColoredHost,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forbid_rainbow: Option<usize>,
    },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunOptions {
    pub jobs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<f64>,
    #[serde(default)]
    pub allow_large: bool,
}

impl RunOptions {
    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            jobs: self.jobs.max(1),
            time_limit: self.time_limit_secs.map(Duration::from_secs_f64),
            allow_large: self.allow_large,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Input {
    #[serde(flatten)]
    pub job: Job,
    pub options: RunOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<KnownValuesTable>,
}

/// Result body plus the exit code it implies.
pub struct Outcome {
    pub body: Value,
    pub code: i32,
}

impl Outcome {
    fn new(body: Value, ok: bool) -> Outcome {
        Outcome { body, code: if ok { 0 } else { 1 } }
    }
}

pub fn graph(text: &str) -> Result<SimpleGraph, String> {
    parse_graph6(text.trim()).map_err(|e| format!("graph6 {text:?}: {e}"))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn merge(mut body: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (body.as_object_mut(), extra) {
        b.extend(e);
    }
    body
}

/// Checks run before any computation: every graph parses and the host
/// shapes fit the command.
pub fn validate(input: &Input) -> Result<(), String> {
    let graphs: Vec<&String> = match &input.job {
        Job::Invariants { graph } | Job::Ramsey { graph, .. } | Job::Constrained { graph, .. } => vec![graph],
        Job::BipartiteRamsey { graph, .. } | Job::BipartiteConstrained { graph, .. } => vec![graph],
        Job::Oracle { graph, components } => std::iter::once(graph).chain(components).collect(),
        Job::Construct { components, .. } => components.iter().collect(),
        Job::Tripartite { components, .. } | Job::TwoColorRamsey { components, .. } => components.iter().collect(),
        Job::Structure { graph, .. } | Job::CheckHost { graph, .. } => graph.iter().collect(),
        Job::Search { .. } => vec![],
    };
    for g in graphs {
        graph(g)?;
    }
    let rainbow = match &input.job {
        Job::Constrained { forbid_rainbow, .. } | Job::BipartiteConstrained { forbid_rainbow, .. } => Some(*forbid_rainbow),
        Job::Structure { forbid_rainbow, .. } | Job::CheckHost { forbid_rainbow, .. } => *forbid_rainbow,
        Job::Search { problem } => problem.forbid_rainbow,
        _ => None,
    };
    if let Some(t) = rainbow {
        if !(4..=5).contains(&t) {
            return Err(format!("--forbid-rainbow must be 4 or 5, got {t}"));
        }
    }
    match &input.job {
        Job::Ramsey { colors, .. } | Job::BipartiteRamsey { colors, .. } if *colors == 0 => {
            Err("--colors must be at least 1".into())
        }
        Job::Structure { graph: Some(_), host, .. } if matches!(host.shape(), Shape::Bipartite { .. }) => {
            Err("--graph size checks apply to complete hosts only".into())
        }
        Job::Tripartite { sizes, .. } if sizes.contains(&0) => Err("tripartite part sizes must be positive".into()),
        _ => Ok(()),
    }
}

pub fn compute(input: &Input) -> Result<Outcome, String> {
    validate(input)?;
    let opts = input.options.search_options();
    let empty = KnownValuesTable::new();
    let table = input.table.as_ref().unwrap_or(&empty);
    match &input.job {
        Job::Invariants { graph: g6 } => {
            let g = graph(g6)?;
            let inv = invariants(&g).map_err(err)?;
            let mut body = json!({ "graph": g.to_graph6(), "invariants": inv });
            if inv.is_bipartite {
                body["partite_profile"] = to_value(&partite_profile(&g).map_err(err)?);
            }
            if inv.chromatic_number >= 2 {
                body["color_critical"] = to_value(&is_color_critical(&g, inv.chromatic_number).map_err(err)?);
            }
            if inv.chromatic_number >= 3 {
                // too-large graphs simply omit the family
                if let Ok(fam) = decomposition_family(&g, inv.chromatic_number - 1) {
                    body["decomposition_family"] = json!({
                        "index": fam.index,
                        "members": fam.members.iter().map(SimpleGraph::to_graph6).collect::<Vec<_>>(),
                    });
                }
            }
            let (reduced, removed) = g.strip_isolated();
            body["strip_isolated"] = json!({ "reduced": reduced.to_graph6(), "removed": removed });
            Ok(Outcome::new(body, true))
        }
        Job::Construct { kind, components, params, verify } => {
            let comps = components.iter().map(|c| graph(c)).collect::<Result<Vec<_>, _>>()?;
            let result = construct(*kind, &comps, params, table).map_err(err)?;
            let mut body = to_value(&result);
            let mut ok = true;
            if *verify {
                let report = verify_construction(&result);
                ok = report.all_pass;
                body["verification"] = to_value(&report);
            }
            Ok(Outcome::new(body, ok))
        }
        Job::Structure { host, graph: g6, forbid_rainbow } => match host.shape() {
            Shape::Complete { .. } => {
                let rainbow = find_rainbow_path(host, forbid_rainbow.unwrap_or(5));
                let partition = recover_p5_partition(host).map_err(err)?;
                let mut body = json!({
                    "k": host.k(),
                    "rainbow_path": rainbow,
                    "partition": partition,
                });
                if let Some(p) = &partition {
                    body["report"] = to_value(&verify_p5_partition(host, p).map_err(err)?);
                    if let Some(g6) = g6 {
                        body["extended_sizes"] = to_value(&check_extended_sizes(p, &graph(g6)?));
                    }
                }
                Ok(Outcome::new(body, partition.is_some()))
            }
            Shape::Bipartite { .. } => {
                let t = forbid_rainbow.unwrap_or(5);
                let report = classify_bipartite_structure(host, t).map_err(err)?;
                let mut body = to_value(&report);
                if let Some(s) = &report.structure {
                    body["report"] = to_value(&verify_bipartite_structure(host, s).map_err(err)?);
                }
                if report.contradiction {
                    eprintln!(
                        "CONTRADICTION: rainbow-P_{t}-free host meets the hypotheses but matches no structure case"
                    );
                }
                Ok(Outcome::new(body, report.structure.is_some() && !report.contradiction))
            }
        },
        Job::Tripartite { sizes, components } => {
            let [x, y, z] = *sizes;
            let report = tripartite_contains_union(x, y, z, &graph(&components[0])?, &graph(&components[1])?).map_err(err)?;
            let ok = report.contains == Some(true);
            Ok(Outcome::new(to_value(&report), ok))
        }
        Job::Search { problem } => {
            let out = exists_good_coloring(problem, &opts).map_err(err)?;
            let ok = out.status == SearchStatus::Witness;
            Ok(Outcome::new(merge(json!({ "problem": problem }), to_value(&out)), ok))
        }
        Job::Ramsey { graph: g6, colors, nmax } => {
            let out = ramsey_k(&graph(g6)?, *colors, *nmax, &opts).map_err(err)?;
            Ok(Outcome::new(to_value(&out), out.status == NumberStatus::Exact))
        }
        Job::TwoColorRamsey { components, nmax } => {
            let out = two_color_ramsey(&graph(&components[0])?, &graph(&components[1])?, *nmax, &opts).map_err(err)?;
            Ok(Outcome::new(to_value(&out), out.status == NumberStatus::Exact))
        }
        Job::Constrained { graph: g6, forbid_rainbow, nmax } => {
            let out = constrained_ramsey(&graph(g6)?, *forbid_rainbow, *nmax, &opts).map_err(err)?;
            let ok = out.constrained.status == NumberStatus::Exact;
            let head = json!({
                "quantity": out.constrained.quantity,
                "status": out.constrained.status,
                "value": out.constrained.value,
            });
            Ok(Outcome::new(merge(head, to_value(&out)), ok))
        }
        Job::BipartiteRamsey { graph: g6, colors, nmax } => {
            let out = bipartite_ramsey_k(&graph(g6)?, *colors, *nmax, &opts).map_err(err)?;
            Ok(Outcome::new(to_value(&out), out.number.status == NumberStatus::Exact))
        }
        Job::BipartiteConstrained { graph: g6, forbid_rainbow, budget, nmax } => {
            let out = bipartite_constrained(&graph(g6)?, *forbid_rainbow, *budget, *nmax, &opts).map_err(err)?;
            Ok(Outcome::new(to_value(&out), out.number.status == NumberStatus::Exact))
        }
        Job::Oracle { graph: g6, components } => {
            let g = graph(g6)?;
            let mut body = json!({
                "bounds": formula_bounds(&g, table).map_err(err)?,
                "applicability": applicability_report(&g, table).map_err(err)?,
            });
            if !components.is_empty() {
                let comps = components.iter().map(|c| graph(c)).collect::<Result<Vec<_>, _>>()?;
                body["homological"] = to_value(&homological_certificate(&comps));
            }
            Ok(Outcome::new(body, true))
        }
        Job::CheckHost { host, graph: g6, forbid_rainbow } => {
            let mut body = json!({ "k": host.k() });
            let mut found = false;
            if let Some(g6) = g6 {
                let hit = find_mono_copy(host, &graph(g6)?, None);
                found |= hit.is_some();
                body["monochromatic"] = json!({ "pattern": g6, "found": hit.is_some(), "embedding": hit });
            }
            if let Some(t) = forbid_rainbow {
                let hit = find_rainbow_path(host, *t);
                found |= hit.is_some();
                body["rainbow_path"] = json!({ "t": t, "found": hit.is_some(), "embedding": hit });
            }
            body["verdict"] = to_value(&if found { Verdict::Fail } else { Verdict::Pass });
            Ok(Outcome::new(body, !found))
        }
    }
}

/// Independent checks of a coloring a job reported as good: color budget,
/// no forbidden monochromatic copy, no forbidden rainbow path.
pub fn witness_issues(job: &Job, body: &Value) -> Result<Vec<String>, String> {
    let Some(w) = body.get("witness").filter(|w| !w.is_null()) else {
        return Ok(Vec::new());
    };
    let host: ColoredHost = serde_json::from_value(w.clone()).map_err(|e| format!("witness host: {e}"))?;
    let (pattern, budget, rainbow, shape) = match job {
        Job::Search { problem } => (problem.forbid_mono.clone(), problem.budget, problem.forbid_rainbow, Some(problem.shape)),
        Job::Ramsey { graph: g, colors, .. } => (graph(g)?, Budget::Finite(*colors), None, None),
        Job::Constrained { graph: g, forbid_rainbow, .. } => (graph(g)?, Budget::Unbounded, Some(*forbid_rainbow), None),
        Job::BipartiteRamsey { graph: g, colors, .. } => (graph(g)?, Budget::Finite(*colors), None, None),
        Job::BipartiteConstrained { graph: g, forbid_rainbow, budget, .. } => (graph(g)?, *budget, Some(*forbid_rainbow), None),
        // color roles are not recoverable from normalized colors
        _ => return Ok(Vec::new()),
    };
    let mut issues = Vec::new();
    if let Some(s) = shape {
        if host.shape() != s {
            issues.push(format!("witness shape {} differs from the problem shape {s}", host.shape()));
        }
    }
    let bipartite_job = matches!(job, Job::BipartiteRamsey { .. } | Job::BipartiteConstrained { .. });
    if bipartite_job && !matches!(host.shape(), Shape::Bipartite { .. }) {
        issues.push("witness of a bipartite number is not a bipartite host".into());
    }
    if let Budget::Finite(k) = budget {
        if host.k() > k {
            issues.push(format!("witness uses {} colors, budget is {k}", host.k()));
        }
    }
    if let Some(e) = find_mono_copy(&host, &pattern, None) {
        issues.push(format!("witness contains a monochromatic copy at {:?}", e.host_vertices));
    }
    if let Some(t) = rainbow {
        if let Some(e) = find_rainbow_path(&host, t) {
            issues.push(format!("witness contains a rainbow P_{t} at {:?}", e.host_vertices));
        }
    }
    Ok(issues)
}
