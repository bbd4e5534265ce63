//! Deterministic report rendering.
//!
//! JSON output must be byte-identical across identical invocations, so
//! every float is rounded to 12 significant digits while the document
//! is built and the default serde_json map keeps keys sorted; the stock
//! printer is then already canonical. Tables and CSV are flat
//! projections of the same document.

use serde_json::{json, Value};

use parafock::catalog::PotentialSpec;
use parafock::error::Result;

/// Rounds to 12 significant digits so repeated runs print identically.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

pub fn num(x: f64) -> Value {
    json!(sig12(x))
}

/// Shortest decimal form of the rounded value, for tables and CSV.
pub fn fmt(x: f64) -> String {
    format!("{}", sig12(x))
}

/// Affine description of one family's energies over its p range.
fn family_formula(entries: &[(u32, f64)]) -> String {
    let (p0, e0) = entries[0];
    let (p1, e1) = entries[entries.len() - 1];
    if entries.len() == 1 {
        return format!("E = {} at p = {p0}", fmt(e0));
    }
    let step = (e1 - e0) / f64::from(p1 - p0);
    let base = e0 - step * f64::from(p0);
    let slope = if step >= 0.0 {
        format!("+ {} p", fmt(step))
    } else {
        format!("- {} p", fmt(-step))
    };
    format!("E = {} {slope} for p = {p0}..{p1}", fmt(base))
}

/// Representation-chain spectrum in the report schema: one family per
/// root pairing, one entry per chain length.
pub fn spectrum_value(spec: &PotentialSpec, p_max: u32) -> Result<Value> {
    let mut sols = spec.solutions(p_max)?;
    sols.sort_by(|a, b| a.family_id.cmp(&b.family_id).then(a.p.cmp(&b.p)));
    let mut families = Vec::new();
    let mut i = 0;
    while i < sols.len() {
        let fid = sols[i].family_id;
        let mut entries = Vec::new();
        let mut line = Vec::new();
        while i < sols.len() && sols[i].family_id == fid {
            let s = &sols[i];
            line.push((s.p, s.energy));
            entries.push(json!({
                "p": s.p,
                "E": num(s.energy),
                "degeneracy": s.dimension(),
                "unitary": s.unitary,
                "physical": s.physical,
            }));
            i += 1;
        }
        families.push(json!({
            "family_id": fid,
            "formula": family_formula(&line),
            "entries": entries,
        }));
    }
    Ok(json!({
        "potential": spec.id.as_str(),
        "params": spec.params,
        "families": families,
    }))
}

/// Catalogued closed-form families in the same schema, for potentials
/// without representation chains; `p` counts distinct levels up the
/// family and degeneracy counts the index pairs that land there.
pub fn reference_value(spec: &PotentialSpec, e_max: f64) -> Value {
    let mut families = Vec::new();
    for (idx, fam) in spec.reference_families().iter().enumerate() {
        // enumerate the family's own levels, not the merged spectrum
        let mut raw: Vec<f64> = Vec::new();
        let cap = fam.p_max.map_or(200, |c| c as i64);
        for k1 in 0..=cap {
            let e1 = fam.base + fam.step1 * k1 as f64;
            if e1 > e_max + 1e-9 {
                break;
            }
            if fam.level_degeneracy || fam.step2 == 0.0 {
                raw.push(e1);
            } else {
                for k2 in 0..=200 {
                    let e = e1 + fam.step2 * k2 as f64;
                    if e > e_max + 1e-9 {
                        break;
                    }
                    raw.push(e);
                }
            }
            if fam.step1 <= 0.0 {
                break;
            }
        }
        raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut entries = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let mut deg = if fam.level_degeneracy {
                // a level family already carries its multiplicity
                entries.len() as u32 + 1
            } else {
                1
            };
            while i + 1 < raw.len() && (raw[i + 1] - raw[i]).abs() < 1e-9 {
                deg += 1;
                i += 1;
            }
            entries.push(json!({
                "p": entries.len(),
                "E": num(raw[i]),
                "degeneracy": deg,
                "unitary": true,
                "physical": true,
            }));
            i += 1;
        }
        let formula = if fam.level_degeneracy {
            format!("{}: E = {} + {} p", fam.label, fmt(fam.base), fmt(fam.step1))
        } else {
            format!(
                "{}: E = {} + {} k1 + {} k2",
                fam.label,
                fmt(fam.base),
                fmt(fam.step1),
                fmt(fam.step2)
            )
        };
        if !entries.is_empty() {
            families.push(json!({
                "family_id": idx,
                "formula": formula,
                "entries": entries,
            }));
        }
    }
    json!({
        "potential": spec.id.as_str(),
        "params": spec.params,
        "families": families,
    })
}

/// Canonical JSON text: sorted keys, 12-significant-digit floats.
pub fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn params_line(doc: &Value) -> String {
    let Some(params) = doc.get("params").and_then(Value::as_object) else {
        return String::new();
    };
    let pieces: Vec<String> = params
        .iter()
        .map(|(k, v)| match v {
            Value::Number(n) => format!("{k} = {}", fmt(n.as_f64().unwrap())),
            other => format!("{k} = {other}"),
        })
        .collect();
    pieces.join(", ")
}

/// Aligned text table of a spectrum/verify document.
pub fn to_table(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(id) = doc.get("potential").and_then(Value::as_str) {
        out.push_str(&format!("potential {id}  ({})\n", params_line(doc)));
    }
    if let Some(families) = doc.get("families").and_then(Value::as_array) {
        for fam in families {
            out.push_str(&format!(
                "\nfamily {}  {}\n",
                fam["family_id"],
                fam["formula"].as_str().unwrap_or("")
            ));
            out.push_str(&format!(
                "  {:>3} {:>16} {:>11} {:>8} {:>8}\n",
                "p", "E", "degeneracy", "unitary", "physical"
            ));
            for e in fam["entries"].as_array().unwrap() {
                out.push_str(&format!(
                    "  {:>3} {:>16} {:>11} {:>8} {:>8}\n",
                    e["p"],
                    fmt(e["E"].as_f64().unwrap()),
                    e["degeneracy"],
                    e["unitary"],
                    e["physical"]
                ));
            }
        }
    }
    if let Some(v) = doc.get("verification") {
        out.push_str("\nverification\n");
        if let Some(rows) = v.get("numeric").and_then(Value::as_array) {
            if let Some(first) = rows.first().and_then(Value::as_object) {
                let cols: Vec<&String> = first.keys().collect();
                let header: Vec<String> = cols.iter().map(|c| format!("{c:>16}")).collect();
                out.push_str(&format!("  {}\n", header.join(" ")));
                for row in rows {
                    let cells: Vec<String> = cols
                        .iter()
                        .map(|c| match &row[c.as_str()] {
                            Value::Number(n) if n.is_f64() => {
                                format!("{:>16}", fmt(n.as_f64().unwrap()))
                            }
                            other => format!("{other:>16}"),
                        })
                        .collect();
                    out.push_str(&format!("  {}\n", cells.join(" ")));
                }
            }
        }
        if let Some(d) = v.get("max_abs_delta").and_then(Value::as_f64) {
            out.push_str(&format!("  max |dE| = {}\n", fmt(d)));
        }
    }
    out
}

/// One row per (family, p); verification rows appended when present.
pub fn to_csv(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(families) = doc.get("families").and_then(Value::as_array) {
        out.push_str("family_id,formula,p,energy,degeneracy,unitary,physical\n");
        for fam in families {
            for e in fam["entries"].as_array().unwrap() {
                out.push_str(&format!(
                    "{},\"{}\",{},{},{},{},{}\n",
                    fam["family_id"],
                    fam["formula"].as_str().unwrap_or(""),
                    e["p"],
                    fmt(e["E"].as_f64().unwrap()),
                    e["degeneracy"],
                    e["unitary"],
                    e["physical"]
                ));
            }
        }
    }
    if let Some(rows) = doc
        .get("verification")
        .and_then(|v| v.get("numeric"))
        .and_then(Value::as_array)
    {
        if let Some(first) = rows.first().and_then(Value::as_object) {
            let cols: Vec<&String> = first.keys().collect();
            out.push('\n');
            out.push_str(&cols.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
            out.push('\n');
            for row in rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| match &row[c.as_str()] {
                        Value::Number(n) if n.is_f64() => fmt(n.as_f64().unwrap()),
                        other => other.to_string(),
                    })
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
    }
    out
}

/// Generic table for documents that are a titled list of uniform rows.
pub fn rows_table(title: &str, rows: &[Value]) -> String {
    let mut out = format!("{title}\n");
    if let Some(first) = rows.first().and_then(Value::as_object) {
        let cols: Vec<&String> = first.keys().collect();
        let header: Vec<String> = cols.iter().map(|c| format!("{c:>18}")).collect();
        out.push_str(&format!("  {}\n", header.join(" ")));
        for row in rows {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| match &row[c.as_str()] {
                    Value::Number(n) if n.is_f64() => format!("{:>18}", fmt(n.as_f64().unwrap())),
                    Value::String(s) => format!("{s:>18}"),
                    other => format!("{other:>18}"),
                })
                .collect();
            out.push_str(&format!("  {}\n", cells.join(" ")));
        }
    }
    out
}

/// Generic CSV for the same titled row lists.
pub fn rows_csv(rows: &[Value]) -> String {
    let mut out = String::new();
    if let Some(first) = rows.first().and_then(Value::as_object) {
        let cols: Vec<&String> = first.keys().collect();
        out.push_str(&cols.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| match &row[c.as_str()] {
                    Value::Number(n) if n.is_f64() => fmt(n.as_f64().unwrap()),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    out
}
