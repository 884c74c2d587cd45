//! Independent re-verification of every trace step: structural premises are
//! recomputed from the groups, fact premises are checked against the final
//! table, and the rule formula is re-applied to the premises.

use rayon::prelude::*;
use thiserror::Error;

use super::duncan::{DuncanChecker, ExclusionOutcome};
use super::engine::Inference;
use super::structure::{center_rank, ledet_bound, times_s3, SubgroupRef};
use super::{Bound, EdFact, Premise, RuleId, TraceStep};
use crate::db::Database;
use crate::dsl::GapId;
use crate::group::morphism::is_isomorphic;
use crate::group::shape::recognize_shape;
use crate::group::{GroupTable, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("{id} step {step} ({rule}): {reason}")]
    Step {
        id: GapId,
        step: usize,
        rule: RuleId,
        reason: String,
    },
    #[error("{id}: {reason}")]
    Fact { id: GapId, reason: String },
}

/// Replays every trace; returns the number of steps verified.
pub fn replay(db: &Database, inference: &Inference, checker: &DuncanChecker) -> Result<usize, ReplayError> {
    let counts: Result<Vec<usize>, ReplayError> = inference
        .facts
        .par_iter()
        .map(|f| replay_fact(db, inference, checker, f))
        .collect();
    Ok(counts?.iter().sum())
}

fn replay_fact(db: &Database, inf: &Inference, checker: &DuncanChecker, f: &EdFact) -> Result<usize, ReplayError> {
    let fact_err = |reason: String| ReplayError::Fact { id: f.id, reason };
    let rec = db.get(f.id).ok_or_else(|| fact_err("not in the database".into()))?;
    if rec.rd() != f.rd {
        return Err(fact_err(format!("rd is {}, fact says {}", rec.rd(), f.rd)));
    }
    if !(1 <= f.lo && f.lo <= f.hi && f.hi <= f.rd) {
        return Err(fact_err(format!("bounds [{}, {}] out of range", f.lo, f.hi)));
    }
    let ctx = Ctx { db, inf, checker, owner: f.id };
    for (k, step) in f.traces.iter().enumerate() {
        ctx.step(step).map_err(|reason| ReplayError::Step {
            id: f.id,
            step: k + 1,
            rule: step.rule,
            reason,
        })?;
    }
    let best_lower = f.traces.iter().filter_map(|t| match t.conclusion {
        Bound::Lower(v) => Some(v),
        _ => None,
    });
    let best_upper = f.traces.iter().filter_map(|t| match t.conclusion {
        Bound::Upper(v) => Some(v),
        _ => None,
    });
    if best_lower.max() != Some(f.lo) || best_upper.min() != Some(f.hi) {
        return Err(fact_err("final bounds are not the best traced bounds".into()));
    }
    Ok(f.traces.len())
}

struct Ctx<'a> {
    db: &'a Database,
    inf: &'a Inference,
    checker: &'a DuncanChecker,
    owner: GapId,
}

type Check = Result<(), String>;

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

impl Ctx<'_> {
    fn group(&self, id: GapId) -> Result<&GroupTable, String> {
        self.db.get(id).map(|r| &r.group).ok_or_else(|| format!("{id} is not in the database"))
    }

    fn same_as(&self, g: &GroupTable, id: GapId) -> Check {
        let h = self.group(id)?;
        ensure(matches!(is_isomorphic(g, h), Ok(Some(_))), || format!("not isomorphic to {id}"))
    }

    fn step(&self, step: &TraceStep) -> Check {
        ensure(step.anchor == step.rule.anchor(), || "anchor does not match the catalogue".into())?;
        for p in &step.premises {
            self.premise(p).map_err(|e| format!("premise `{p}`: {e}"))?;
        }
        let derived = self.derive(step.rule, &step.premises)?;
        ensure(derived.contains(&step.conclusion), || {
            format!("premises give {derived:?}, trace says {}", step.conclusion)
        })
    }

    fn premise(&self, p: &Premise) -> Check {
        let g = self.group(self.owner)?;
        let rd = self.db.get(self.owner).map(|r| r.rd()).unwrap_or(0);
        match p {
            Premise::Rd { value } => ensure(*value == rd, || format!("rd is {rd}")),
            Premise::CenterOrder { value } => {
                let z = g.center().order();
                ensure(z == *value, || format!("|Z(G)| is {z}"))
            }
            Premise::AbelianRank { rank } => ensure(
                g.is_abelian() && g.invariants().rank() == Some(*rank),
                || "not abelian of that rank".into(),
            ),
            Premise::PGroup { p } => {
                let mut n = g.order();
                while n % *p as usize == 0 {
                    n /= *p as usize;
                }
                ensure(n == 1 && g.order() > 1, || format!("order {} is not a power of {p}", g.order()))
            }
            Premise::Shape { cyclic, odd_dihedral } => {
                let is_cyclic = (0..g.order()).any(|x| g.element_order(x) as usize == g.order());
                let shape = recognize_shape(g);
                ensure(is_cyclic == *cyclic && shape.odd_dihedral == *odd_dihedral, || {
                    "shape differs".into()
                })
            }
            Premise::Lower { id, value } => {
                let f = self.inf.get(*id).ok_or_else(|| format!("no fact for {id}"))?;
                ensure(f.lo >= *value, || format!("edLo{id} is {}", f.lo))
            }
            Premise::Upper { id, value } => {
                let f = self.inf.get(*id).ok_or_else(|| format!("no fact for {id}"))?;
                ensure(f.hi <= *value, || format!("edHi{id} is {}", f.hi))
            }
            Premise::Subgroup { of, link } => {
                let parent = self.group(*of)?;
                let members = parent.closure(link.generators.iter().copied());
                let h = parent.subgroup_table(&members);
                ensure(h.order() * link.index == parent.order(), || {
                    format!("generated subgroup has order {}", h.order())
                })?;
                match link.subgroup {
                    SubgroupRef::Database { id } => self.same_as(&h, id),
                    SubgroupRef::Abelian { order, rank } => ensure(
                        h.order() == order && h.is_abelian() && h.invariants().rank() == Some(rank),
                        || "not abelian of the stated rank".into(),
                    ),
                }
            }
            Premise::Embedding { source, target, witness } => {
                let (s, t) = (self.group(*source)?, self.group(*target)?);
                ensure(witness.verify(s, t), || "witness is not an injective homomorphism".into())
            }
            Premise::DirectProduct { of, link } => {
                let parent = self.group(*of)?;
                let a = Subgroup::from_members(parent.closure(link.left_generators.iter().copied()));
                let b = Subgroup::from_members(parent.closure(link.right_generators.iter().copied()));
                ensure(
                    a.is_normal_in(parent)
                        && b.is_normal_in(parent)
                        && a.intersection(&b).is_trivial()
                        && a.order() * b.order() == parent.order(),
                    || "not an internal direct product".into(),
                )?;
                self.same_as(&a.table(parent), link.left)?;
                self.same_as(&b.table(parent), link.right)
            }
            Premise::CentralQuotient { of, link } => {
                let parent = self.group(*of)?;
                let a = Subgroup::from_members(parent.closure(link.kernel_generators.iter().copied()));
                ensure(a.order() == link.kernel_order, || "kernel order differs".into())?;
                ensure(
                    a.is_subgroup_of(&parent.center()) && a.intersection(&parent.derived_subgroup()).is_trivial(),
                    || "kernel is not central or meets [G,G]".into(),
                )?;
                let q = parent.quotient(&a).map_err(|e| e.to_string())?;
                self.same_as(&q.table, link.quotient)?;
                ensure(
                    center_rank(parent) == link.center_rank
                        && center_rank(self.group(link.quotient)?) == link.quotient_center_rank,
                    || "centre ranks differ".into(),
                )
            }
            Premise::Holomorph { q } => ensure(recognize_shape(g).full_holomorph == Some(*q), || {
                format!("not the holomorph of C_{q}")
            }),
            Premise::NormalSylow3 { link } => {
                ensure(g.order() == 48, || "order is not 48".into())?;
                let sylow = g.sylow_subgroup(3).map_err(|e| e.to_string())?;
                ensure(sylow.is_normal_in(g), || "Sylow 3-subgroup is not normal".into())?;
                let q = g.quotient(&sylow).map_err(|e| e.to_string())?;
                self.same_as(&q.table, link.quotient)?;
                ensure(link.witness.verify(g, &times_s3(&q.table)), || {
                    "embedding into G/G3 x S3 does not verify".into()
                })
            }
            Premise::Exclusion { certificate } => match self.checker.exclusion(g, rd) {
                ExclusionOutcome::Excluded(c) => ensure(&c == certificate, || "certificate differs on rerun".into()),
                ExclusionOutcome::Inconclusive { case, detail } => Err(format!("rerun is inconclusive at {case}: {detail}")),
            },
            Premise::Duncan { witness } => ensure(self.checker.verify_upper(g, rd, witness), || {
                "membership witness does not verify".into()
            }),
        }
    }

    /// The bounds the rule yields from these premises.
    fn derive(&self, rule: RuleId, ps: &[Premise]) -> Result<Vec<Bound>, String> {
        let me = self.owner;
        let bad = || format!("premises do not fit {rule}");
        let out = match (rule, ps) {
            (RuleId::R1, [Premise::Rd { value }]) if *value >= 1 => vec![Bound::Lower(1), Bound::Upper(*value)],
            (RuleId::R2, [Premise::Rd { value }, Premise::CenterOrder { value: 1 }]) if *value >= 2 => {
                vec![Bound::Upper(value - 1)]
            }
            (RuleId::R3, [Premise::AbelianRank { rank }]) => vec![Bound::Lower(*rank), Bound::Upper(*rank)],
            (RuleId::R4, [Premise::Subgroup { of, link }, Premise::Lower { id, value }]) if *of == me => {
                match link.subgroup {
                    SubgroupRef::Database { id: h } if h == *id => vec![Bound::Lower(*value)],
                    _ => return Err(bad()),
                }
            }
            (RuleId::R4, [Premise::Subgroup { of, link }]) if *of == me => match link.subgroup {
                SubgroupRef::Abelian { rank, .. } => vec![Bound::Lower(rank)],
                _ => return Err(bad()),
            },
            (RuleId::R4, [Premise::Subgroup { of, link }, Premise::Upper { id, value }]) if id == of => {
                match link.subgroup {
                    SubgroupRef::Database { id: h } if h == me => vec![Bound::Upper(*value)],
                    _ => return Err(bad()),
                }
            }
            (RuleId::R4, [Premise::Embedding { source, target, .. }, Premise::Upper { id, value }])
                if *source == me && target == id =>
            {
                vec![Bound::Upper(*value)]
            }
            (RuleId::R5, [Premise::Subgroup { of, link }, Premise::Upper { id, value }]) if *of == me => {
                match link.subgroup {
                    SubgroupRef::Database { id: h } if h == *id => vec![Bound::Upper(link.index * value)],
                    _ => return Err(bad()),
                }
            }
            (RuleId::R5, [Premise::Subgroup { of, link }]) if *of == me => match link.subgroup {
                SubgroupRef::Abelian { rank, .. } => vec![Bound::Upper(link.index * rank)],
                _ => return Err(bad()),
            },
            (
                RuleId::R6,
                [Premise::DirectProduct { of, link }, Premise::Upper { id: l, value: a }, Premise::Upper { id: r, value: b }],
            ) if *of == me && *l == link.left && *r == link.right => vec![Bound::Upper(a + b)],
            (RuleId::R7, [Premise::CentralQuotient { of, link }, fact]) => {
                let (id, value, lower) = match fact {
                    Premise::Lower { id, value } => (*id, *value, true),
                    Premise::Upper { id, value } => (*id, *value, false),
                    _ => return Err(bad()),
                };
                let shift = if *of == me && id == link.quotient {
                    link.shift()
                } else if link.quotient == me && id == *of {
                    -link.shift()
                } else {
                    return Err(bad());
                };
                let v = value as i64 + shift;
                if v < 1 {
                    return Err(bad());
                }
                vec![if lower { Bound::Lower(v as usize) } else { Bound::Upper(v as usize) }]
            }
            (RuleId::R8, [Premise::PGroup { .. }, Premise::Rd { value }]) => vec![Bound::Lower(*value), Bound::Upper(*value)],
            (RuleId::R9, [Premise::Shape { cyclic, odd_dihedral }]) => {
                if *cyclic || *odd_dihedral {
                    vec![Bound::Upper(1)]
                } else {
                    vec![Bound::Lower(2)]
                }
            }
            (RuleId::R10, [Premise::Duncan { .. }]) => vec![Bound::Upper(2)],
            (RuleId::R11, [Premise::Exclusion { .. }, Premise::Rd { .. }]) => vec![Bound::Lower(3)],
            (RuleId::R12, [Premise::CenterOrder { value: z }, Premise::Rd { value }]) if *z > 1 && *value >= 3 => {
                vec![Bound::Lower(3)]
            }
            (RuleId::R13, [Premise::Holomorph { q }]) => vec![Bound::Upper(ledet_bound(*q) as usize)],
            (RuleId::R14, [Premise::NormalSylow3 { link }, Premise::Upper { id, value }]) if *id == link.quotient => {
                vec![Bound::Upper(value + 1)]
            }
            _ => return Err(bad()),
        };
        Ok(out)
    }
}
