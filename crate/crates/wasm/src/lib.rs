//! Browser bindings: homology table, Kauffman bracket and the family list.
//!
//! Errors come back to JavaScript as plain strings.

use kh_core::budget::{estimate, MemoryBudget};
use kh_core::expr::parse_expr;
use kh_core::homology::{compute, KhResult};
use kh_core::polynomial::bracket as kauffman_bracket;
use kh_core::{families, ComputeOptions, Error, GradingMode};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

/// Browser memory cap for a single computation.
pub const DEMO_BUDGET_MB: u64 = 256;

fn mode(name: &str) -> Result<GradingMode, Error> {
    match name {
        "framed" => Ok(GradingMode::Framed),
        "classical" => Ok(GradingMode::Classical),
        other => Err(Error::Domain(format!("unknown grading mode {other:?}"))),
    }
}

/// Homology of the closure of a braid expression, as the JSON result schema.
#[wasm_bindgen]
pub fn homology(expr: &str, grading: &str) -> Result<String, String> {
    let run = || -> Result<String, Error> {
        let mode = mode(grading)?;
        let word = parse_expr(expr, None)?;
        let diagram = word.closure();
        let budget = MemoryBudget::from_megabytes(DEMO_BUDGET_MB);
        estimate(&diagram).check(&budget)?;
        let opts = ComputeOptions { memory_limit_bytes: budget.limit(), ..ComputeOptions::default() };
        let computation = compute(&diagram, &opts)?;
        Ok(KhResult::new(&word, &computation, mode)?.to_json())
    };
    run().map_err(|e| e.to_string())
}

/// Kauffman bracket of the closure, e.g. `A^7 + A^3 + A^-1 - A^-9`.
#[wasm_bindgen]
pub fn bracket(expr: &str) -> Result<String, String> {
    let run = || -> Result<String, Error> { Ok(kauffman_bracket(&parse_expr(expr, None)?.closure())?.to_string()) };
    run().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Listing {
    name: String,
    summary: String,
    strands: usize,
    crossings: usize,
    writhe: i64,
    components: usize,
}

/// The named braids as a JSON array.
#[wasm_bindgen]
pub fn family_list() -> String {
    let rows: Vec<Listing> = families::registry()
        .into_iter()
        .map(|f| Listing {
            strands: f.word.strands(),
            crossings: f.crossings(),
            writhe: f.writhe(),
            components: f.components(),
            name: f.name,
            summary: f.summary,
        })
        .collect();
    serde_json::to_string(&rows).expect("listing serializes")
}
