//! Browser bindings. Every export takes plain numbers or strings and returns a
//! JSON document, or an error message the page shows verbatim.

use hyperinv::discriminant;
use hyperinv::localization::{self, FieldMode};
use hyperinv::presentations::{self, CatalogKey};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_INDEX: u32 = 60;

fn parse_primes(csv: &str) -> Result<Vec<u64>, String> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| format!("not a number: `{s}`")))
        .collect()
}

/// Class of the first discriminant stratum for `i = 1..=max_i` and its
/// divisibility by each prime in `primes` (comma separated).
#[wasm_bindgen]
pub fn disc_table(max_i: u32, primes: &str) -> Result<String, String> {
    if !(1..=MAX_INDEX).contains(&max_i) {
        return Err(format!("index must lie in 1..={MAX_INDEX}"));
    }
    let primes = parse_primes(primes)?;
    let mut rows = Vec::new();
    for i in 1..=max_i {
        let class = discriminant::delta1_class(i).map_err(|e| e.to_string())?;
        let mut divisible = Vec::new();
        for &p in &primes {
            divisible.push(discriminant::delta1_divisible_by(i, p).map_err(|e| e.to_string())?);
        }
        let gate = if i % 2 == 0 { Some(discriminant::gate(i).map_err(|e| e.to_string())?.kills) } else { None };
        rows.push(json!({
            "i": i,
            "class": class.to_string(),
            "divisible": divisible,
            "gate_kills": gate,
        }));
    }
    Ok(json!({ "primes": primes, "rows": rows }).to_string())
}

/// Invariants of the hyperelliptic stack of genus `g` mod `p`; `mode` is
/// `closed` or `general`.
#[wasm_bindgen]
pub fn invariants(g: u32, p: u32, mode: &str) -> Result<String, String> {
    let mode: FieldMode = mode.parse().map_err(|e: localization::LocalizationError| e.to_string())?;
    let report = localization::invariants_hg(g, u64::from(p), mode).map_err(|e| e.to_string())?;
    let mut v = report.to_json();
    v["degrees"] = json!(report.module.degrees());
    v["trivial"] = json!(report.module.is_trivial());
    Ok(v.to_string())
}

/// Normal form of `poly` in the catalog ring named by `group`, `space` and
/// `coeff`, e.g. `PGL2`, `Pn:8`, `H2`.
#[wasm_bindgen]
pub fn normal_form(group: &str, space: &str, coeff: &str, poly: &str) -> Result<String, String> {
    let key = CatalogKey::new(
        group.parse().map_err(|e: presentations::PresentationError| e.to_string())?,
        space.parse().map_err(|e: presentations::PresentationError| e.to_string())?,
        coeff.parse().map_err(|e: presentations::PresentationError| e.to_string())?,
    );
    let entry = presentations::catalog_ring(key).map_err(|e| e.to_string())?;
    let alg = &entry.algebra;
    let input = alg.parse(poly).map_err(|e| e.to_string())?;
    let reduced = alg.normal_form(&input).map_err(|e| e.to_string())?;
    Ok(json!({
        "ring": key.to_string(),
        "relations": alg.render_relations(Default::default()),
        "input": input.to_string(),
        "normal_form": reduced.to_string(),
        "zero": reduced.is_zero(),
    })
    .to_string())
}
