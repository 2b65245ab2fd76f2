//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON document; errors come back as plain strings.

use adlv_core::adlv::{emptiness_table, Decider, TableDoc, VerdictDoc};
use adlv_core::geom::ClosureDoc;
use adlv_core::{AffineWeylGroup, CartanType, Coweight};
use wasm_bindgen::prelude::*;

/// Largest rank the page accepts; keeps tables and posets small enough to draw.
pub const MAX_RANK: usize = 4;

fn group(kind: &str, rank: usize) -> Result<AffineWeylGroup, String> {
    if rank > MAX_RANK {
        return Err(format!("rank {rank} is above the demo limit {MAX_RANK}"));
    }
    let kind: CartanType = kind.parse().map_err(|e| format!("{e}"))?;
    AffineWeylGroup::from_type(kind, rank).map_err(|e| e.to_string())
}

pub fn decide(kind: &str, rank: usize, x: &str, y: &str, lambda: &str) -> Result<String, String> {
    let g = group(kind, rank)?;
    let fin = g.finite();
    let x = fin.parse_word(x).map_err(|e| e.to_string())?;
    let y = fin.parse_word(y).map_err(|e| e.to_string())?;
    let lambda = Coweight::parse(lambda).map_err(|e| e.to_string())?;
    let j = g.root_system().i_lambda(&lambda).map_err(|e| e.to_string())?;
    if !fin.is_min_coset_rep(&x, j) {
        return Err(format!("x = {} is not a minimal representative for W_{j}", fin.format(&x)));
    }
    let a = g.compose(&x, &lambda, &y).map_err(|e| e.to_string())?;
    let v = Decider::new(&g).decide(&a).map_err(|e| e.to_string())?;
    serde_json::to_string(&VerdictDoc::new(&g, &v)).map_err(|e| e.to_string())
}

pub fn table(kind: &str, rank: usize, lambda: &str) -> Result<String, String> {
    let g = group(kind, rank)?;
    let lambda = Coweight::parse(lambda).map_err(|e| e.to_string())?;
    let t = emptiness_table(&g, &lambda).map_err(|e| e.to_string())?;
    serde_json::to_string(&TableDoc::new(&g, &t)).map_err(|e| e.to_string())
}

pub fn closure(kind: &str, rank: usize) -> Result<String, String> {
    let g = group(kind, rank)?;
    let doc = ClosureDoc::new(g.finite()).map_err(|e| e.to_string())?;
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn decide_json(kind: &str, rank: usize, x: &str, y: &str, lambda: &str) -> Result<String, JsValue> {
    decide(kind, rank, x, y, lambda).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn emptiness_table_json(kind: &str, rank: usize, lambda: &str) -> Result<String, JsValue> {
    table(kind, rank, lambda).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn closure_json(kind: &str, rank: usize) -> Result<String, JsValue> {
    closure(kind, rank).map_err(|e| JsValue::from_str(&e))
}
