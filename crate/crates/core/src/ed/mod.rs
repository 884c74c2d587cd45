//! Essential dimension bounds by fixed-point propagation over the
//! database, with every bound improvement recorded as a replayable trace.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chartab::ChartabError;
use crate::dsl::GapId;
use crate::group::morphism::EmbeddingWitness;
use crate::group::shape::recognize_shape;
use crate::group::GroupTable;

pub mod alpha;
pub mod duncan;
mod engine;
pub mod export;
mod replay;
pub mod structure;

pub use alpha::{alpha_ratio, AlphaReport, Certainty};
pub use duncan::{DuncanCase, DuncanChecker, DuncanFamily, DuncanWitness, ExclusionCertificate, ExclusionOutcome, UpperOutcome};
pub use engine::{run_inference, Engine, Inference};
pub use replay::{replay, ReplayError};
pub use structure::{CentralQuotientLink, GroupStructure, Order48Link, ProductLink, SubgroupLink, SubgroupRef};

/// The closed rule catalogue. No other mechanism sets bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
}

impl RuleId {
    pub const ALL: [RuleId; 14] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12,
        RuleId::R13,
        RuleId::R14,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "rd-upper",
            RuleId::R2 => "center-trivial-upper",
            RuleId::R3 => "abelian",
            RuleId::R4 => "subgroup-lower",
            RuleId::R5 => "index-upper",
            RuleId::R6 => "product-upper",
            RuleId::R7 => "lotscher",
            RuleId::R8 => "km-p-group",
            RuleId::R9 => "ed1-classification",
            RuleId::R10 => "duncan-upper",
            RuleId::R11 => "duncan-exclusion",
            RuleId::R12 => "center-nontrivial-lower",
            RuleId::R13 => "ledet",
            RuleId::R14 => "order48",
        }
    }

    /// The literature result the rule applies.
    pub fn anchor(self) -> &'static str {
        match self {
            RuleId::R1 => "a faithful representation V gives ed(G) ⩽ dim V, so 1 ⩽ ed(G) ⩽ rd(G) for G ≠ 1",
            RuleId::R2 => "Z(G) = 1: G acts faithfully on P(V), so ed(G) ⩽ rd(G) − 1",
            RuleId::R3 => "Buhler–Reichstein: for abelian G, ed(G) = rd(G) = rank(G)",
            RuleId::R4 => "monotonicity under subgroups: ed(H) ⩽ ed(G) for H ⩽ G",
            RuleId::R5 => "induction from a subgroup: ed(G) ⩽ [G:H] · ed(H)",
            RuleId::R6 => "products: ed(G₁ × G₂) ⩽ ed(G₁) + ed(G₂)",
            RuleId::R7 => "Lötscher central quotient formula: A ⩽ Z(G), A ∩ [G,G] = 1 ⇒ ed(G) = ed(G/A) − rank Z(G/A) + rank Z(G)",
            RuleId::R8 => "Karpenko–Merkurjev: for a p-group, ed(G) = rd(G)",
            RuleId::R9 => "Buhler–Reichstein ed=1: ed(G) = 1 exactly for cyclic groups and dihedral groups of order 2n, n odd",
            RuleId::R10 => "Duncan ed=2 classification: subgroups of GL₂(ℂ), of the four torus families T ⋊ 𝒢, of PSL₂(𝔽₇) and of S₅ have ed ⩽ 2",
            RuleId::R11 => "Duncan ed=2 classification: a group in none of the seven cases has ed ⩾ 3",
            RuleId::R12 => "nontrivial centre: ed(G) ⩽ 2 forces rd(G) ⩽ 2, so rd(G) ⩾ 3 gives ed(G) ⩾ 3",
            RuleId::R13 => "Ledet holomorph bound: ed(C_q ⋊ (ℤ/q)^×) ⩽ φ(p−1)·p^(n−1) for q = pⁿ",
            RuleId::R14 => "order 48 with normal Sylow 3-subgroup G₃: G ↪ G/G₃ × S₃, so ed(G) ⩽ ed(G/G₃) + 1",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "side", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Lower(usize),
    Upper(usize),
}

impl Bound {
    pub fn value(self) -> usize {
        match self {
            Bound::Lower(v) | Bound::Upper(v) => v,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lower(v) => write!(f, "ed ⩾ {v}"),
            Bound::Upper(v) => write!(f, "ed ⩽ {v}"),
        }
    }
}

/// One fact a rule application relies on. Group-level facts refer to the
/// group the step belongs to unless an id is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Premise {
    Rd { value: usize },
    CenterOrder { value: usize },
    AbelianRank { rank: usize },
    PGroup { p: u64 },
    Shape { cyclic: bool, odd_dihedral: bool },
    /// `edLo(id) ⩾ value` at the time of use.
    Lower { id: GapId, value: usize },
    /// `edHi(id) ⩽ value` at the time of use.
    Upper { id: GapId, value: usize },
    Subgroup { of: GapId, link: SubgroupLink },
    Embedding { source: GapId, target: GapId, witness: EmbeddingWitness },
    DirectProduct { of: GapId, link: ProductLink },
    CentralQuotient { of: GapId, link: CentralQuotientLink },
    Holomorph { q: u64 },
    NormalSylow3 { link: Order48Link },
    Exclusion { certificate: ExclusionCertificate },
    Duncan { witness: DuncanWitness },
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Premise::Rd { value } => write!(f, "rd = {value}"),
            Premise::CenterOrder { value } => write!(f, "|Z(G)| = {value}"),
            Premise::AbelianRank { rank } => write!(f, "abelian of rank {rank}"),
            Premise::PGroup { p } => write!(f, "{p}-group"),
            Premise::Shape { cyclic, odd_dihedral } => {
                if *cyclic {
                    write!(f, "cyclic")
                } else if *odd_dihedral {
                    write!(f, "dihedral of order 2n, n odd")
                } else {
                    write!(f, "neither cyclic nor odd dihedral")
                }
            }
            Premise::Lower { id, value } => write!(f, "edLo{id} = {value}"),
            Premise::Upper { id, value } => write!(f, "edHi{id} = {value}"),
            Premise::Subgroup { of, link } => match &link.subgroup {
                SubgroupRef::Database { id } => write!(f, "{id} ⩽ {of} of index {}", link.index),
                SubgroupRef::Abelian { order, rank } => {
                    write!(f, "abelian subgroup of order {order} and rank {rank} in {of}")
                }
            },
            Premise::Embedding { source, target, .. } => write!(f, "{source} ↪ {target}"),
            Premise::DirectProduct { of, link } => write!(f, "{of} = {} × {}", link.left, link.right),
            Premise::CentralQuotient { of, link } => write!(
                f,
                "{of}/A ≅ {} with |A| = {}, rank Z = {}, rank Z(G/A) = {}",
                link.quotient, link.kernel_order, link.center_rank, link.quotient_center_rank
            ),
            Premise::Holomorph { q } => write!(f, "G ≅ C_{q} ⋊ (ℤ/{q})^×"),
            Premise::NormalSylow3 { link } => write!(f, "G₃ normal, G/G₃ ≅ {}, G ↪ G/G₃ × S₃", link.quotient),
            Premise::Exclusion { certificate } => write!(f, "excluded from {} cases", certificate.cases.len()),
            Premise::Duncan { witness } => match witness.m {
                Some(m) => write!(f, "case {} with m = {m}", witness.case),
                None => write!(f, "case {}", witness.case),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    #[serde(rename = "citedAnchor")]
    pub anchor: String,
    pub premises: Vec<Premise>,
    pub conclusion: Bound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdFact {
    #[serde(rename = "gapId")]
    pub id: GapId,
    pub structure: String,
    pub rd: usize,
    #[serde(rename = "edLo")]
    pub lo: usize,
    #[serde(rename = "edHi")]
    pub hi: usize,
    pub traces: Vec<TraceStep>,
}

impl EdFact {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The step that set the current bound on one side.
    pub fn last_step(&self, lower: bool) -> Option<&TraceStep> {
        self.traces
            .iter()
            .rev()
            .find(|t| matches!(t.conclusion, Bound::Lower(_)) == lower)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdError {
    #[error("inconsistent bounds for {id}: {rule} gives {conclusion} against [{lo}, {hi}]")]
    InconsistentBounds {
        id: GapId,
        rule: RuleId,
        conclusion: Bound,
        lo: usize,
        hi: usize,
    },
    #[error("certificate failure for {id}: {detail}")]
    CertificateFailure { id: GapId, detail: String },
    #[error("character table of {id}: {source}")]
    CharacterTable { id: GapId, source: ChartabError },
}

/// The holomorph bound when `G ≅ C_q ⋊ (ℤ/q)^×`.
pub fn ledet_bound(g: &GroupTable) -> Option<u64> {
    recognize_shape(g).full_holomorph.map(structure::ledet_bound)
}

pub use structure::lotscher_reduction;
