//! Plain-text tables for `oracle --human`.

use std::fmt::Write;

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, headers.iter().map(|h| h.to_string()).collect());
    line(&mut out, widths.iter().map(|w| "-".repeat(*w)).collect());
    for r in rows {
        line(&mut out, r.clone());
    }
    out
}

pub fn oracle_tables(body: &Value) -> String {
    let mut out = String::new();
    let bounds = &body["bounds"];
    let _ = writeln!(out, "Bounds for {}\n", cell(&bounds["graph"]));
    let rows: Vec<Vec<String>> = bounds["entries"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| {
            ["rule", "target", "direction", "status", "value", "expression"]
                .iter()
                .map(|k| cell(&e[*k]))
                .collect()
        })
        .collect();
    out += &table(&["rule", "target", "dir", "status", "value", "expression"], &rows);

    let app = &body["applicability"];
    let _ = writeln!(out, "\nTheorem hypotheses for {} (reduced {})\n", cell(&app["graph"]), cell(&app["reduced"]));
    let rows: Vec<Vec<String>> = app["verdicts"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|v| {
            let failing = v["trace"]
                .as_array()
                .into_iter()
                .flatten()
                .find(|s| s["holds"] != Value::Bool(true))
                .map(|s| cell(&s["hypothesis"]))
                .unwrap_or_default();
            vec![cell(&v["id"]), cell(&v["verdict"]), cell(&v["conclusion"]), failing]
        })
        .collect();
    out += &table(&["id", "verdict", "conclusion", "first open hypothesis"], &rows);
    let _ = writeln!(out, "\nequality certified: {}", cell(&app["certified"]));
    if let Some(h) = body.get("homological") {
        let _ = writeln!(
            out,
            "homological: {} (vector {}, k {})",
            cell(&h["verdict"]["verdict"]),
            cell(&h["vector"]),
            cell(&h["k"])
        );
    }
    out
}
