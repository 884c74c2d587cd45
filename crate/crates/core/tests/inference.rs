mod common;

use rayon::prelude::*;

use common::{database, inference};
use edlab::dsl::{realize_str, GapId};
use edlab::ed::duncan::torus_family_overgroup;
use edlab::ed::export::{facts_from_json, facts_to_json};
use edlab::ed::*;
use edlab::group::morphism::DEFAULT_BUDGET;

fn id(order: usize, index: usize) -> GapId {
    GapId::new(order, index)
}

fn fact(order: usize, index: usize) -> &'static EdFact {
    inference().1.get(id(order, index)).expect("fact")
}

#[test]
fn rerunning_on_the_output_changes_nothing() {
    let (_, inf) = inference();
    let mut engine = Engine::new(database(), DEFAULT_BUDGET).unwrap();
    let again = engine.resume(inf.facts.clone()).unwrap();
    assert_eq!(again.facts, inf.facts);
}

#[test]
fn every_trace_replays() {
    let (engine, inf) = inference();
    let steps = replay(database(), inf, engine.checker()).unwrap();
    assert!(steps >= 2 * inf.facts.len());
}

#[test]
fn replay_rejects_a_forged_step() {
    let (engine, inf) = inference();
    let mut facts = inf.facts.clone();
    let k = facts.iter().position(|f| f.id == id(55, 1)).unwrap();
    facts[k].lo = 4;
    facts[k].traces.push(TraceStep {
        rule: RuleId::R12,
        anchor: RuleId::R12.anchor().to_string(),
        premises: vec![Premise::CenterOrder { value: 11 }, Premise::Rd { value: 5 }],
        conclusion: Bound::Lower(4),
    });
    assert!(replay(database(), &Inference::new(facts), engine.checker()).is_err());
}

#[test]
fn bounds_stay_within_one_and_rd() {
    for f in &inference().1.facts {
        assert!(1 <= f.lo && f.lo <= f.hi && f.hi <= f.rd, "{}", f.id);
    }
}

#[test]
fn p_groups_are_exact_at_rd() {
    for r in database().records() {
        if r.group.invariants().p_group.is_some() {
            let f = fact(r.id().order, r.id().index);
            assert_eq!((f.lo, f.hi), (f.rd, f.rd), "{}", f.id);
        }
    }
}

#[test]
fn central_quotient_equation_holds_both_ways() {
    let (engine, inf) = inference();
    for f in &inf.facts {
        for link in &engine.structure(f.id).unwrap().central_quotients {
            let q = inf.get(link.quotient).unwrap();
            let s = link.shift();
            assert!(f.lo as i64 >= q.lo as i64 + s && f.hi as i64 <= q.hi as i64 + s, "{} over {}", f.id, q.id);
            assert!(q.lo as i64 >= f.lo as i64 - s && q.hi as i64 <= f.hi as i64 - s, "{} over {}", f.id, q.id);
        }
    }
}

#[test]
fn duncan_membership_and_exclusion_never_both_fire() {
    let checker = DuncanChecker::new(DEFAULT_BUDGET);
    let clashes: Vec<GapId> = database()
        .records()
        .par_iter()
        .filter(|r| r.rd() >= 3 && r.group.order() <= 63)
        .filter(|r| checker.exclusion(&r.group, r.rd()).is_excluded() && matches!(checker.upper(&r.group, r.rd()), UpperOutcome::Found(_)))
        .map(|r| r.id())
        .collect();
    assert!(clashes.is_empty(), "{clashes:?}");
}

#[test]
fn json_export_round_trips() {
    let facts = &inference().1.facts;
    assert_eq!(&facts_from_json(&facts_to_json(facts)).unwrap(), facts);
    let v: serde_json::Value = serde_json::from_str(&facts_to_json(&facts[..1])).unwrap();
    for key in ["gapId", "structure", "rd", "edLo", "edHi", "traces"] {
        assert!(v[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn small_examples() {
    assert_eq!((fact(6, 1).lo, fact(6, 1).hi), (1, 1));
    assert_eq!(fact(6, 1).last_step(false).unwrap().rule, RuleId::R2);
    assert_eq!(fact(4, 2).last_step(true).unwrap().rule, RuleId::R3);
    assert_eq!(fact(39, 1).last_step(true).unwrap().rule, RuleId::R9);
    let f = fact(54, 5);
    assert_eq!((f.lo, f.hi), (3, 5));
    assert_eq!(f.last_step(true).unwrap().rule, RuleId::R4);
    assert_eq!(f.last_step(false).unwrap().rule, RuleId::R2);
    let f = fact(54, 6);
    assert_eq!((f.lo, f.hi), (3, 3));
    assert!(f.traces.iter().any(|t| t.rule == RuleId::R5
        && t.conclusion == Bound::Upper(3)
        && t.premises.contains(&Premise::Upper { id: id(18, 1), value: 1 })));
    let f = fact(42, 1);
    assert_eq!((f.lo, f.hi), (2, 2));
    assert_eq!(f.last_step(false).unwrap().rule, RuleId::R13);
    let f = fact(55, 1);
    assert_eq!((f.lo, f.hi), (3, 4));
    assert_eq!(f.last_step(true).unwrap().rule, RuleId::R11);
}

#[test]
fn lotscher_examples() {
    let db = database();
    let links = lotscher_reduction(&db.get(id(36, 7)).unwrap().group, db);
    let l = links.iter().find(|l| l.kernel_order == 2).unwrap();
    assert_eq!((l.quotient, l.shift()), (id(18, 4), 1));
    assert_eq!(fact(36, 7).lo, 3);

    let links = lotscher_reduction(&db.get(id(48, 42)).unwrap().group, db);
    let l = links.iter().find(|l| l.kernel_order == 4).unwrap();
    assert_eq!((l.quotient, l.shift()), (id(12, 1), 2));
    assert_eq!((fact(48, 42).lo, fact(48, 42).hi), (4, 4));

    let s3 = realize_str("S(3)").unwrap();
    assert!(lotscher_reduction(&s3, db).is_empty());
}

#[test]
fn order48_examples() {
    let (engine, _) = inference();
    for (k, q) in [(15, id(16, 7)), (18, id(16, 9)), (39, id(16, 13))] {
        let link = engine.structure(id(48, k)).unwrap().order48.as_ref().unwrap();
        assert_eq!(link.quotient, q);
        assert_eq!(fact(48, k).hi, fact(q.order, q.index).hi + 1);
        assert_eq!(fact(48, k).hi, 3);
    }
}

#[test]
fn ledet_examples() {
    let db = database();
    assert_eq!(ledet_bound(&db.get(id(42, 1)).unwrap().group), Some(2));
    assert_eq!(ledet_bound(&db.get(id(20, 3)).unwrap().group), Some(2));
    assert_eq!(ledet_bound(&db.get(id(6, 1)).unwrap().group), Some(1));
    assert_eq!(ledet_bound(&db.get(id(21, 1)).unwrap().group), None);
}

#[test]
fn duncan_examples() {
    let db = database();
    let checker = DuncanChecker::new(DEFAULT_BUDGET);
    let g21 = &db.get(id(21, 1)).unwrap().group;
    match checker.upper(g21, 3) {
        UpperOutcome::Found(w) => {
            assert_eq!(w.case, DuncanCase::Psl27);
            assert!(checker.verify_upper(g21, 3, &w));
        }
        UpperOutcome::NotFound => panic!("(21,1) is in PSL2(F7)"),
    }
    let g39 = &db.get(id(39, 1)).unwrap().group;
    let over = torus_family_overgroup(DuncanFamily::Iv, 13).unwrap();
    let w = checker.torus_embedding(g39, &over).unwrap();
    assert_eq!(w.torus_intersection, Some(13));
    assert!(checker.verify_upper(g39, 3, &w));

    let g55 = &db.get(id(55, 1)).unwrap().group;
    assert_eq!(checker.upper(g55, 5), UpperOutcome::NotFound);
    assert!(checker.exclusion(g55, 5).is_excluded());
    let g60 = &db.get(id(60, 7)).unwrap().group;
    match checker.exclusion(g60, 4) {
        ExclusionOutcome::Excluded(cert) => {
            let iii = cert.cases.iter().find(|c| c.case == DuncanCase::Torus(DuncanFamily::Iii)).unwrap();
            assert!(iii.reason.contains("maps to −I"), "{}", iii.reason);
            assert!(iii.reason.contains("centralizes an element of order 3"), "{}", iii.reason);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn alpha_examples() {
    let (_, inf) = inference();
    let a = alpha_ratio(database(), inf, 63).unwrap();
    assert_eq!(a.to_string(), "1/3 attained by (42,1) [exact]");
    assert_eq!(a.demonstration(), "ed(42,1)/rd(42,1) = 2/6 = 1/3");
    let a = alpha_ratio(database(), inf, 12).unwrap();
    assert_eq!(a.to_string(), "1/2 attained by (6,1) [exact]");
    let a = alpha_ratio(database(), inf, 5).unwrap();
    assert_eq!(a.to_string(), "1 attained by (2,1) [exact]");
}
