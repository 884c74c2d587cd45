//! `α(n)`: the minimum of `ed(G)/rd(G)` over groups of order at most `n`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::engine::Inference;
use super::EdFact;
use crate::db::Database;
use crate::dsl::GapId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Exact,
    /// Only `edLo/rd` is known at the minimum.
    LowerBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaReport {
    pub n: usize,
    pub value: Ratio<usize>,
    pub attained_by: GapId,
    pub certainty: Certainty,
    /// `edLo` and `rd` of the attaining group.
    pub ed: usize,
    pub rd: usize,
}

impl AlphaReport {
    /// The ratio at the attaining group, e.g. `ed(42,1)/rd(42,1) = 2/6 = 1/3`.
    pub fn demonstration(&self) -> String {
        let ed = match self.certainty {
            Certainty::Exact => "ed",
            Certainty::LowerBoundOnly => "edLo",
        };
        let id = self.attained_by;
        format!("{ed}{id}/rd{id} = {}/{} = {}", self.ed, self.rd, self.value)
    }
}

impl fmt::Display for AlphaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.certainty {
            Certainty::Exact => "exact",
            Certainty::LowerBoundOnly => "lower bound only",
        };
        write!(f, "{} attained by {} [{tag}]", self.value, self.attained_by)
    }
}

/// Minimum of `edLo/rd` over database groups of order `2..=n` (auxiliary
/// overgroups excluded). Exact when some group at the minimum has
/// `edLo = edHi`, since no group can then go below it.
pub fn alpha_ratio(db: &Database, inference: &Inference, n: usize) -> Option<AlphaReport> {
    let facts: Vec<&EdFact> = db
        .records()
        .iter()
        .filter(|r| !r.entry.auxiliary && r.id().order <= n)
        .filter_map(|r| inference.get(r.id()))
        .collect();
    let ratio = |f: &EdFact| Ratio::new(f.lo, f.rd);
    let value = facts.iter().map(|f| ratio(f)).min()?;
    let at_min: Vec<&EdFact> = facts.into_iter().filter(|f| ratio(f) == value).collect();
    let (at, certainty) = match at_min.iter().find(|f| f.is_exact()) {
        Some(f) => (*f, Certainty::Exact),
        None => (at_min[0], Certainty::LowerBoundOnly),
    };
    Some(AlphaReport {
        n,
        value,
        attained_by: at.id,
        certainty,
        ed: at.lo,
        rd: at.rd,
    })
}
