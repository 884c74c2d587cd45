//! Text and JSON renderings of the fact table.

use std::fmt::Write;

use super::{Bound, EdFact};

pub fn facts_to_json(facts: &[EdFact]) -> String {
    serde_json::to_string_pretty(facts).expect("facts serialize")
}

pub fn facts_from_json(text: &str) -> serde_json::Result<Vec<EdFact>> {
    serde_json::from_str(text)
}

/// Rules behind the final bounds, e.g. `R4/R2`, or a single rule when one
/// step set both.
pub fn explanation(f: &EdFact) -> String {
    let lower = f.last_step(true).map(|t| t.rule);
    let upper = f.last_step(false).map(|t| t.rule);
    match (lower, upper) {
        (Some(l), Some(u)) if l == u => l.to_string(),
        (Some(l), Some(u)) => format!("{l}/{u}"),
        (Some(r), None) | (None, Some(r)) => r.to_string(),
        (None, None) => String::new(),
    }
}

pub fn format_interval(lo: usize, hi: usize) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}-{hi}")
    }
}

/// Rule applications in firing order.
pub fn trace_text(f: &EdFact) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}  rd {}  ed [{}, {}]",
        f.id, f.structure, f.rd, f.lo, f.hi
    );
    for (k, t) in f.traces.iter().enumerate() {
        let side = match t.conclusion {
            Bound::Lower(_) => "lower",
            Bound::Upper(_) => "upper",
        };
        let _ = writeln!(out, "  {:>2}. {} {} ({side}): {}", k + 1, t.rule, t.rule.name(), t.conclusion);
        let _ = writeln!(out, "      by {}", t.anchor);
        for p in &t.premises {
            let _ = writeln!(out, "      - {p}");
        }
    }
    out
}
