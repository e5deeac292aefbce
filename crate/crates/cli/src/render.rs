//! Shared pieces of the text and JSON reports.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use gw_core::presentation::FamilyReport;
use gw_core::{AbelianGroupInfo, GwElement};

pub fn bigs(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn tuple(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `2<<3>> + <<5>>` style combination of basis labels.
pub fn combination(group: &AbelianGroupInfo, x: &GwElement) -> String {
    let mut out = String::new();
    for (c, label) in x.coords().iter().zip(group.labels()) {
        if c == &BigInt::from(0) {
            continue;
        }
        let neg = c < &BigInt::from(0);
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != BigInt::from(1) {
            out.push_str(&mag.to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn group_json(g: &AbelianGroupInfo) -> Value {
    let classes = g.classes();
    let mut gens = Map::new();
    for c in 0..classes.num_classes() {
        gens.insert(classes.format_class(c), bigs(g.generator_coords(c)));
    }
    json!({
        "group": g.describe(),
        "free_rank": g.free_rank(),
        "torsion": bigs(&g.torsion()),
        "invariant_factors": bigs(&g.invariant_factors()),
        "basis": g.labels(),
        "oriented": g.is_oriented(),
        "generators": gens,
    })
}

pub fn group_text(name: &str, g: &AbelianGroupInfo) -> String {
    let mut s = format!("{name}: {}\n  basis: ({})\n", g.describe(), g.labels().join(", "));
    let classes = g.classes();
    for c in 0..classes.num_classes() {
        s.push_str(&format!("  <{}> = {}\n", classes.format_class(c), tuple(g.generator_coords(c))));
    }
    s
}

pub fn family_json(r: &FamilyReport) -> Value {
    json!({
        "tuples_total": r.tuples_total.to_string(),
        "tuples_evaluated": r.tuples_evaluated.to_string(),
        "sampled": r.sampled,
    })
}
