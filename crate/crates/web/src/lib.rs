//! Browser bindings: translate an ontology, list the rule base, answer a
//! meta-query. Each export has a plain Rust twin so it can be tested natively.

use metaql::owl::{normalize_ontology, parse_ontology};
use metaql::pipeline::{Reasoner, ReasonerOptions};
use metaql::rules::builtin_rules;
use metaql::sparql::parse_query;
use metaql::translate::translate_ontology;
use serde_json::json;
use wasm_bindgen::prelude::*;

pub fn translate_text(ontology: &str) -> Result<String, String> {
    let o = normalize_ontology(&parse_ontology(ontology).map_err(|e| e.to_string())?);
    let facts = translate_ontology(&o).map_err(|e| e.to_string())?;
    Ok(facts.to_dl())
}

pub fn rules_json() -> String {
    let cat = builtin_rules();
    let families: serde_json::Map<String, serde_json::Value> = cat
        .stats()
        .into_iter()
        .map(|(f, n)| (f.tag().to_string(), json!(n)))
        .collect();
    let rules: Vec<serde_json::Value> = cat
        .iter()
        .map(|(r, f)| json!({ "family": f.tag(), "rule": r.to_string() }))
        .collect();
    json!({ "total": cat.len(), "families": families, "rules": rules }).to_string()
}

pub fn answer_text(ontology: &str, query: &str, demand: bool) -> Result<String, String> {
    let q = parse_query(query).map_err(|e| e.to_string())?;
    let opts = ReasonerOptions {
        demand,
        check_consistency: true,
        ..ReasonerOptions::default()
    };
    let mut r = Reasoner::from_text(ontology, opts).map_err(|e| e.to_string())?;
    let consistent = r.consistent().map_err(|e| e.to_string())?;
    let out = r.answer(&q).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<&str>> = out
        .rows
        .iter()
        .map(|row| row.iter().map(|e| e.iri()).collect())
        .collect();
    let vars: Vec<&str> = q.answer_vars.iter().map(|v| &**v).collect();
    let t = r.timings;
    Ok(json!({
        "vars": vars,
        "rows": rows,
        "consistent": consistent,
        "rounds": out.stats.rounds,
        "derived": out.stats.total_derived(),
        "ms": { "load": t.load_ms, "translate": t.translate_ms, "saturate": t.saturate_ms, "answer": t.answer_ms },
    })
    .to_string())
}

/// Datalog facts for a functional-syntax ontology.
#[wasm_bindgen]
pub fn translate(ontology: &str) -> Result<String, JsError> {
    translate_text(ontology).map_err(|e| JsError::new(&e))
}

/// The rule catalogue as JSON.
#[wasm_bindgen]
pub fn rules() -> String {
    rules_json()
}

/// Answers a SPARQL query; the result is a JSON object with `vars` and `rows`.
#[wasm_bindgen]
pub fn answer(ontology: &str, query: &str, demand: bool) -> Result<String, JsError> {
    answer_text(ontology, query, demand).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZOO: &str = "Prefix(:=<http://example.org/zoo#>)\nOntology(\n\
                       SubClassOf(:GoldenEagle :Eagle)\n\
                       ClassAssertion(:GoldenEagle :Harry)\n\
                       ClassAssertion(:EndangeredSpecies :GoldenEagle)\n)";

    #[test]
    fn answers_as_json() {
        let q = "PREFIX : <http://example.org/zoo#> SELECT ?z ?y WHERE { ?y a :EndangeredSpecies . ?z a ?y }";
        for demand in [false, true] {
            let v: serde_json::Value =
                serde_json::from_str(&answer_text(ZOO, q, demand).unwrap()).unwrap();
            assert_eq!(v["vars"], json!(["z", "y"]));
            assert_eq!(
                v["rows"],
                json!([[
                    "http://example.org/zoo#Harry",
                    "http://example.org/zoo#GoldenEagle"
                ]])
            );
            assert_eq!(v["consistent"], json!(true));
        }
    }

    #[test]
    fn translate_and_errors() {
        assert!(translate_text(ZOO).unwrap().contains("isacCC("));
        assert!(translate_text("Ontology(SubClassOf(")
            .unwrap_err()
            .contains("line"));
        assert!(answer_text(ZOO, "SELECT WHERE", false).is_err());
    }

    #[test]
    fn rules_listing_counts_match() {
        let v: serde_json::Value = serde_json::from_str(&rules_json()).unwrap();
        assert_eq!(
            v["total"].as_u64().unwrap() as usize,
            v["rules"].as_array().unwrap().len()
        );
    }
}
