//! Re-verification of emitted documents.

use ramsey_forge::construct::{verify_construction, ConstructionResult, Verdict};
use ramsey_forge::structure::{verify_bipartite_structure, verify_p5_partition, BipartiteStructure, P5Partition};
use ramsey_forge::ColoredHost;
use serde_json::{json, Value};

use crate::job::{compute, witness_issues, Input, Job, Outcome};

/// Keys that legitimately differ between identical runs.
const VOLATILE: &[&str] = &["wall_time_ms", "nodes_explored", "meta"];

pub fn strip_keys(v: &mut Value, keys: &[&str]) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !keys.contains(&k.as_str()));
            map.values_mut().for_each(|x| strip_keys(x, keys));
        }
        Value::Array(items) => items.iter_mut().for_each(|x| strip_keys(x, keys)),
        _ => {}
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn verify_construction_doc(doc: &Value) -> Result<Outcome, String> {
    let result: ConstructionResult =
        serde_json::from_value(doc.clone()).map_err(|e| format!("not a construction certificate: {e}"))?;
    let report = verify_construction(&result);
    let recorded_matches = doc.get("verification").map(|rec| {
        let new = serde_json::to_value(&report).expect("report serializes");
        *rec == new
    });
    let body = json!({
        "document": "construction",
        "kind": result.kind,
        "verdict": verdict(report.all_pass),
        "report": report,
        "recorded_matches": recorded_matches,
    });
    // a recorded report that disagrees is itself a failure
    let ok = report.all_pass && recorded_matches != Some(false);
    Ok(Outcome { body, code: if ok { 0 } else { 1 } })
}

/// Independent check of a structure certificate carried in a `structure`
/// document.
fn structure_issues(input: &Input, doc: &Value) -> Result<Vec<String>, String> {
    let Job::Structure { host, .. } = &input.job else {
        return Ok(Vec::new());
    };
    let report = if let Some(p) = doc.get("partition").filter(|p| !p.is_null()) {
        let p: P5Partition = serde_json::from_value(p.clone()).map_err(|e| format!("partition: {e}"))?;
        Some(verify_p5_partition(host, &p).map_err(|e| e.to_string())?)
    } else if let Some(s) = doc.get("structure").filter(|s| !s.is_null()) {
        let s: BipartiteStructure = serde_json::from_value(s.clone()).map_err(|e| format!("structure: {e}"))?;
        Some(verify_bipartite_structure(host, &s).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(match report {
        Some(r) if r.verdict == Verdict::Fail => {
            vec![format!("certificate fails: {} edge violations, issues {:?}", r.violations.len(), r.issues)]
        }
        _ => Vec::new(),
    })
}

fn verify_rerun(doc: &Value) -> Result<Outcome, String> {
    let input_value = doc.get("input").ok_or("document has no \"input\" section and is not a construction")?;
    let input: Input = serde_json::from_value(input_value.clone()).map_err(|e| format!("input section: {e}"))?;

    let mut recorded = doc.clone();
    if let Some(map) = recorded.as_object_mut() {
        map.remove("input");
    }
    strip_keys(&mut recorded, VOLATILE);

    let rerun = compute(&input)?;
    let mut fresh = rerun.body;
    strip_keys(&mut fresh, VOLATILE);

    let mut issues = witness_issues(&input.job, doc)?;
    issues.extend(structure_issues(&input, doc)?);
    let matches = recorded == fresh;
    if !matches {
        issues.push("re-running the embedded input gives a different result".into());
    }
    let body = json!({
        "document": command_name(&input.job),
        "verdict": verdict(issues.is_empty()),
        "rerun_matches": matches,
        "rerun_exit_code": rerun.code,
        "issues": issues,
    });
    Ok(Outcome { body, code: if issues.is_empty() { 0 } else { 1 } })
}

pub fn command_name(job: &Job) -> String {
    serde_json::to_value(job).ok().and_then(|v| v["command"].as_str().map(String::from)).unwrap_or_default()
}

/// Verifies any document the CLI emits. Construction certificates are
/// checked by regenerating the host from their parameters; everything else
/// by re-running the embedded input and checking witnesses independently.
pub fn verify_document(doc: &Value) -> Result<Outcome, String> {
    let is_construction = doc.get("kind").is_some() && doc.get("claims").is_some();
    if is_construction {
        verify_construction_doc(doc)
    } else {
        verify_rerun(doc)
    }
}

pub fn parse_host(text: &str) -> Result<ColoredHost, String> {
    serde_json::from_str(text).map_err(|e| format!("host JSON: {e}"))
}
