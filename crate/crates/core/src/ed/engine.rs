use std::collections::HashMap;

use rayon::prelude::*;

use super::duncan::{DuncanChecker, ExclusionOutcome, UpperOutcome};
use super::structure::{ledet_bound, GroupStructure, SubgroupRef};
use super::{Bound, EdError, EdFact, Premise, RuleId, TraceStep};
use crate::db::Database;
use crate::dsl::GapId;
use crate::group::morphism::{find_monomorphism, EmbeddingWitness, SearchOutcome, DEFAULT_BUDGET};

/// Final facts, in database order.
#[derive(Debug, Clone)]
pub struct Inference {
    pub facts: Vec<EdFact>,
    by_id: HashMap<GapId, usize>,
}

impl Inference {
    pub fn new(facts: Vec<EdFact>) -> Inference {
        let by_id = facts.iter().enumerate().map(|(i, f)| (f.id, i)).collect();
        Inference { facts, by_id }
    }

    pub fn get(&self, id: GapId) -> Option<&EdFact> {
        self.by_id.get(&id).map(|&i| &self.facts[i])
    }
}

struct Candidate {
    rule: RuleId,
    bound: Bound,
    premises: Vec<Premise>,
}

#[derive(Debug, Clone, Copy)]
enum Query {
    Aux(usize, usize),
    Upper(usize),
    Exclusion(usize),
}

enum Answer {
    Aux(usize, usize, Option<EmbeddingWitness>),
    Upper(usize, UpperOutcome),
    Exclusion(usize, ExclusionOutcome),
}

/// Structural data for the whole database plus caches of the expensive
/// queries, which are evaluated in parallel between propagation passes.
#[derive(Debug)]
pub struct Engine<'a> {
    db: &'a Database,
    checker: DuncanChecker,
    structures: Vec<GroupStructure>,
    /// For each group, the `(parent, link)` pairs where it occurs as a subgroup.
    containing: Vec<Vec<(usize, usize)>>,
    /// For each group, the `(parent, link)` pairs where it is a central quotient.
    covering: Vec<Vec<(usize, usize)>>,
    aux: Vec<usize>,
    aux_embeddings: HashMap<(usize, usize), Option<EmbeddingWitness>>,
    duncan_upper: HashMap<usize, UpperOutcome>,
    duncan_exclusion: HashMap<usize, ExclusionOutcome>,
}

pub fn run_inference(db: &Database) -> Result<Inference, EdError> {
    Engine::new(db, DEFAULT_BUDGET)?.run()
}

impl<'a> Engine<'a> {
    pub fn new(db: &'a Database, budget: u64) -> Result<Engine<'a>, EdError> {
        db.analyze_all()
            .map_err(|(id, source)| EdError::CharacterTable { id, source })?;
        let structures: Vec<GroupStructure> = db
            .records()
            .par_iter()
            .map(|r| GroupStructure::compute(&r.group, db, budget))
            .collect();
        let n = db.len();
        let mut containing = vec![Vec::new(); n];
        let mut covering = vec![Vec::new(); n];
        for (g, s) in structures.iter().enumerate() {
            if let Some(detail) = &s.order48_failure {
                return Err(EdError::CertificateFailure {
                    id: db.records()[g].id(),
                    detail: detail.clone(),
                });
            }
            for (k, link) in s.subgroups.iter().enumerate() {
                if let SubgroupRef::Database { id } = link.subgroup {
                    containing[db.index_of(id).expect("identified")].push((g, k));
                }
            }
            for (k, link) in s.central_quotients.iter().enumerate() {
                covering[db.index_of(link.quotient).expect("identified")].push((g, k));
            }
        }
        let aux = (0..n).filter(|&i| db.records()[i].entry.auxiliary).collect();
        Ok(Engine {
            db,
            checker: DuncanChecker::new(budget),
            structures,
            containing,
            covering,
            aux,
            aux_embeddings: HashMap::new(),
            duncan_upper: HashMap::new(),
            duncan_exclusion: HashMap::new(),
        })
    }

    pub fn checker(&self) -> &DuncanChecker {
        &self.checker
    }

    pub fn structure(&self, id: GapId) -> Option<&GroupStructure> {
        self.db.index_of(id).map(|i| &self.structures[i])
    }

    /// Starting facts `[1, rd]`.
    pub fn initial_facts(&self) -> Vec<EdFact> {
        self.db
            .records()
            .iter()
            .map(|r| {
                let rd = r.rd();
                let step = |bound| TraceStep {
                    rule: RuleId::R1,
                    anchor: RuleId::R1.anchor().to_string(),
                    premises: vec![Premise::Rd { value: rd }],
                    conclusion: bound,
                };
                EdFact {
                    id: r.id(),
                    structure: r.entry.structure.clone(),
                    rd,
                    lo: 1,
                    hi: rd,
                    traces: vec![step(Bound::Lower(1)), step(Bound::Upper(rd))],
                }
            })
            .collect()
    }

    pub fn run(&mut self) -> Result<Inference, EdError> {
        let facts = self.initial_facts();
        self.resume(facts)
    }

    /// Continues propagation from existing facts (in database order).
    pub fn resume(&mut self, mut facts: Vec<EdFact>) -> Result<Inference, EdError> {
        loop {
            self.propagate(&mut facts)?;
            let pending = self.pending(&facts);
            if pending.is_empty() {
                break;
            }
            let answers: Vec<Answer> = pending.par_iter().map(|q| self.answer(*q)).collect();
            for a in answers {
                match a {
                    Answer::Aux(i, j, w) => {
                        self.aux_embeddings.insert((i, j), w);
                    }
                    Answer::Upper(i, o) => {
                        self.duncan_upper.insert(i, o);
                    }
                    Answer::Exclusion(i, o) => {
                        self.duncan_exclusion.insert(i, o);
                    }
                }
            }
        }
        Ok(Inference::new(facts))
    }

    fn propagate(&self, facts: &mut [EdFact]) -> Result<(), EdError> {
        loop {
            let mut changed = false;
            for i in 0..facts.len() {
                let cands = self.candidates(i, facts);
                let best_lower = cands
                    .iter()
                    .filter(|c| matches!(c.bound, Bound::Lower(_)))
                    .fold(None::<&Candidate>, |acc, c| match acc {
                        Some(a) if a.bound.value() >= c.bound.value() => Some(a),
                        _ => Some(c),
                    });
                let best_upper = cands
                    .iter()
                    .filter(|c| matches!(c.bound, Bound::Upper(_)))
                    .fold(None::<&Candidate>, |acc, c| match acc {
                        Some(a) if a.bound.value() <= c.bound.value() => Some(a),
                        _ => Some(c),
                    });
                for c in [best_lower, best_upper].into_iter().flatten() {
                    changed |= tighten(&mut facts[i], c)?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn pending(&self, facts: &[EdFact]) -> Vec<Query> {
        let mut out = Vec::new();
        for (i, f) in facts.iter().enumerate() {
            let open_at_two = f.lo <= 2 && f.hi > 2;
            if open_at_two {
                match self.duncan_upper.get(&i) {
                    None => out.push(Query::Upper(i)),
                    Some(UpperOutcome::NotFound) if !self.duncan_exclusion.contains_key(&i) => {
                        out.push(Query::Exclusion(i))
                    }
                    _ => {}
                }
            }
            if f.lo == f.hi || self.aux.contains(&i) {
                continue;
            }
            let order = f.id.order;
            for &a in &self.aux {
                let fa = &facts[a];
                if fa.id.order.is_multiple_of(order) && fa.hi < f.hi && !self.aux_embeddings.contains_key(&(i, a)) {
                    out.push(Query::Aux(i, a));
                }
            }
        }
        out
    }

    fn answer(&self, q: Query) -> Answer {
        let rec = |i: usize| &self.db.records()[i];
        match q {
            Query::Aux(i, a) => {
                let w = match find_monomorphism(&rec(i).group, &rec(a).group, self.checker.budget()) {
                    SearchOutcome::Found(w) => Some(w),
                    _ => None,
                };
                Answer::Aux(i, a, w)
            }
            Query::Upper(i) => Answer::Upper(i, self.checker.upper(&rec(i).group, rec(i).rd())),
            Query::Exclusion(i) => Answer::Exclusion(i, self.checker.exclusion(&rec(i).group, rec(i).rd())),
        }
    }

    /// Every bound the catalogue derives for group `i` from the current facts,
    /// in catalogue order.
    fn candidates(&self, i: usize, facts: &[EdFact]) -> Vec<Candidate> {
        let s = &self.structures[i];
        let f = &facts[i];
        let id = f.id;
        let rd = f.rd;
        let id_of = |j: usize| facts[j].id;
        let lower = |j: usize| Premise::Lower {
            id: facts[j].id,
            value: facts[j].lo,
        };
        let upper = |j: usize| Premise::Upper {
            id: facts[j].id,
            value: facts[j].hi,
        };
        let index = |gid: GapId| self.db.index_of(gid).expect("identified");
        let mut out = Vec::new();
        let mut push = |rule, bound, premises| out.push(Candidate { rule, bound, premises });

        if s.center_order == 1 && rd >= 2 {
            push(
                RuleId::R2,
                Bound::Upper(rd - 1),
                vec![Premise::Rd { value: rd }, Premise::CenterOrder { value: 1 }],
            );
        }
        if let Some(rank) = s.abelian_rank {
            for b in [Bound::Lower(rank), Bound::Upper(rank)] {
                push(RuleId::R3, b, vec![Premise::AbelianRank { rank }]);
            }
        }
        for link in &s.subgroups {
            let sub = Premise::Subgroup { of: id, link: link.clone() };
            match link.subgroup {
                SubgroupRef::Database { id: h } => {
                    let j = index(h);
                    push(RuleId::R4, Bound::Lower(facts[j].lo), vec![sub, lower(j)]);
                }
                SubgroupRef::Abelian { rank, .. } => push(RuleId::R4, Bound::Lower(rank), vec![sub]),
            }
        }
        for &(g, k) in &self.containing[i] {
            let link = self.structures[g].subgroups[k].clone();
            push(
                RuleId::R4,
                Bound::Upper(facts[g].hi),
                vec![Premise::Subgroup { of: id_of(g), link }, upper(g)],
            );
        }
        for &a in &self.aux {
            if let Some(Some(w)) = self.aux_embeddings.get(&(i, a)) {
                push(
                    RuleId::R4,
                    Bound::Upper(facts[a].hi),
                    vec![
                        Premise::Embedding {
                            source: id,
                            target: id_of(a),
                            witness: w.clone(),
                        },
                        upper(a),
                    ],
                );
            }
        }
        for link in &s.subgroups {
            let sub = Premise::Subgroup { of: id, link: link.clone() };
            match link.subgroup {
                SubgroupRef::Database { id: h } => {
                    let j = index(h);
                    push(RuleId::R5, Bound::Upper(link.index * facts[j].hi), vec![sub, upper(j)]);
                }
                SubgroupRef::Abelian { rank, .. } => push(RuleId::R5, Bound::Upper(link.index * rank), vec![sub]),
            }
        }
        for link in &s.products {
            let (l, r) = (index(link.left), index(link.right));
            push(
                RuleId::R6,
                Bound::Upper(facts[l].hi + facts[r].hi),
                vec![Premise::DirectProduct { of: id, link: link.clone() }, upper(l), upper(r)],
            );
        }
        for link in &s.central_quotients {
            let q = index(link.quotient);
            let cq = Premise::CentralQuotient { of: id, link: link.clone() };
            if let Some(v) = shifted(facts[q].lo, link.shift()) {
                push(RuleId::R7, Bound::Lower(v), vec![cq.clone(), lower(q)]);
            }
            if let Some(v) = shifted(facts[q].hi, link.shift()) {
                push(RuleId::R7, Bound::Upper(v), vec![cq, upper(q)]);
            }
        }
        for &(g, k) in &self.covering[i] {
            let link = &self.structures[g].central_quotients[k];
            let cq = Premise::CentralQuotient {
                of: id_of(g),
                link: link.clone(),
            };
            if let Some(v) = shifted(facts[g].lo, -link.shift()) {
                push(RuleId::R7, Bound::Lower(v), vec![cq.clone(), lower(g)]);
            }
            if let Some(v) = shifted(facts[g].hi, -link.shift()) {
                push(RuleId::R7, Bound::Upper(v), vec![cq, upper(g)]);
            }
        }
        if let Some(p) = s.p_group {
            for b in [Bound::Lower(rd), Bound::Upper(rd)] {
                push(RuleId::R8, b, vec![Premise::PGroup { p }, Premise::Rd { value: rd }]);
            }
        }
        let shape = Premise::Shape {
            cyclic: s.cyclic,
            odd_dihedral: s.odd_dihedral,
        };
        if s.cyclic || s.odd_dihedral {
            push(RuleId::R9, Bound::Upper(1), vec![shape]);
        } else {
            push(RuleId::R9, Bound::Lower(2), vec![shape]);
        }
        if let Some(UpperOutcome::Found(w)) = self.duncan_upper.get(&i) {
            push(RuleId::R10, Bound::Upper(2), vec![Premise::Duncan { witness: w.clone() }]);
        }
        if let Some(ExclusionOutcome::Excluded(cert)) = self.duncan_exclusion.get(&i) {
            push(
                RuleId::R11,
                Bound::Lower(3),
                vec![Premise::Exclusion { certificate: cert.clone() }, Premise::Rd { value: rd }],
            );
        }
        if s.center_order > 1 && rd >= 3 {
            push(
                RuleId::R12,
                Bound::Lower(3),
                vec![Premise::CenterOrder { value: s.center_order }, Premise::Rd { value: rd }],
            );
        }
        if let Some(q) = s.holomorph {
            push(RuleId::R13, Bound::Upper(ledet_bound(q) as usize), vec![Premise::Holomorph { q }]);
        }
        if let Some(link) = &s.order48 {
            let q = index(link.quotient);
            push(
                RuleId::R14,
                Bound::Upper(facts[q].hi + 1),
                vec![Premise::NormalSylow3 { link: link.clone() }, upper(q)],
            );
        }
        out
    }
}

fn shifted(v: usize, shift: i64) -> Option<usize> {
    let r = v as i64 + shift;
    (r >= 1).then_some(r as usize)
}

fn tighten(f: &mut EdFact, c: &Candidate) -> Result<bool, EdError> {
    let improves = match c.bound {
        Bound::Lower(v) => v > f.lo,
        Bound::Upper(v) => v < f.hi,
    };
    if !improves {
        return Ok(false);
    }
    let (lo, hi) = match c.bound {
        Bound::Lower(v) => (v, f.hi),
        Bound::Upper(v) => (f.lo, v),
    };
    if lo > hi || lo < 1 || hi > f.rd {
        return Err(EdError::InconsistentBounds {
            id: f.id,
            rule: c.rule,
            conclusion: c.bound,
            lo: f.lo,
            hi: f.hi,
        });
    }
    f.lo = lo;
    f.hi = hi;
    f.traces.push(TraceStep {
        rule: c.rule,
        anchor: c.rule.anchor().to_string(),
        premises: c.premises.clone(),
        conclusion: c.bound,
    });
    Ok(true)
}
