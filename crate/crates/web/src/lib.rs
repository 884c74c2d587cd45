//! Browser bindings: analyze a database group, compute α(n), and find `rd`
//! of a group written in the construction language.
//!
//! The `*_json` functions are plain Rust so they can be tested on the host;
//! the `#[wasm_bindgen]` wrappers only forward to them.

use std::sync::OnceLock;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use edlab::chartab::CharacterTable;
use edlab::db::{Database, COVERED_ORDER};
use edlab::dsl::{realize_str, GapId};
use edlab::ed::export::{explanation, trace_text};
use edlab::ed::{alpha_ratio, run_inference, Inference};
use edlab::repdim::representation_dimension;

/// Largest group accepted by [`rd_of_expression`].
pub const EXPRESSION_LIMIT: usize = 1000;

fn database() -> &'static Database {
    static DB: OnceLock<Database> = OnceLock::new();
    DB.get_or_init(Database::bundled)
}

fn inference() -> Result<&'static Inference, String> {
    static INF: OnceLock<Result<Inference, String>> = OnceLock::new();
    INF.get_or_init(|| run_inference(database()).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(Clone::clone)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupView {
    pub gap_id: String,
    pub structure: String,
    pub construction: String,
    pub degrees: Vec<usize>,
    pub rd: usize,
    pub ed_lo: usize,
    pub ed_hi: usize,
    pub explanation: String,
    pub trace: String,
}

#[derive(Debug, Serialize)]
pub struct AlphaView {
    pub summary: String,
    pub demonstration: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpressionView {
    pub order: usize,
    pub classes: usize,
    pub degrees: Vec<usize>,
    pub rd: usize,
    /// Database label, when the group is in the database.
    pub gap_id: Option<String>,
}

pub fn analyze_group(order: usize, index: usize) -> Result<GroupView, String> {
    let id = GapId::new(order, index);
    let record = database().get(id).ok_or_else(|| format!("unknown group {id}"))?;
    let fact = inference()?.get(id).ok_or_else(|| format!("no facts for {id}"))?;
    let analysis = record.analysis().map_err(|e| e.to_string())?;
    Ok(GroupView {
        gap_id: id.to_string(),
        structure: record.entry.structure.clone(),
        construction: record.entry.expr.clone(),
        degrees: analysis.table.degrees.clone(),
        rd: analysis.rd,
        ed_lo: fact.lo,
        ed_hi: fact.hi,
        explanation: explanation(fact),
        trace: trace_text(fact),
    })
}

pub fn alpha(n: usize) -> Result<AlphaView, String> {
    if !(2..=COVERED_ORDER).contains(&n) {
        return Err(format!("n must lie in 2..={COVERED_ORDER}"));
    }
    let report = alpha_ratio(database(), inference()?, n).ok_or("no groups in range")?;
    Ok(AlphaView {
        summary: report.to_string(),
        demonstration: report.demonstration(),
    })
}

pub fn rd_of_expression(text: &str) -> Result<ExpressionView, String> {
    let g = realize_str(text).map_err(|e| e.to_string())?;
    if g.order() > EXPRESSION_LIMIT {
        return Err(format!("order {} exceeds the demo limit {EXPRESSION_LIMIT}", g.order()));
    }
    let table = CharacterTable::compute(&g).map_err(|e| e.to_string())?;
    let (rd, _) = representation_dimension(&g, &table);
    Ok(ExpressionView {
        order: g.order(),
        classes: table.len(),
        degrees: table.degrees.clone(),
        rd,
        gap_id: database().identify(&g).map(|id| id.to_string()),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map(|v| serde_json::to_string(&v).expect("views serialize")).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyzeGroup)]
pub fn analyze_group_json(order: usize, index: usize) -> Result<String, JsError> {
    to_js(analyze_group(order, index))
}

#[wasm_bindgen(js_name = alpha)]
pub fn alpha_json(n: usize) -> Result<String, JsError> {
    to_js(alpha(n))
}

#[wasm_bindgen(js_name = rdOfExpression)]
pub fn rd_of_expression_json(text: &str) -> Result<String, JsError> {
    to_js(rd_of_expression(text))
}
