mod common;

use proptest::prelude::*;

use common::{database, inference};
use edlab::chartab::CharacterTable;
use edlab::dsl::{parse_construction, ActionClause, AtomKind, Construction, Word};
use edlab::ed::{alpha_ratio, SubgroupRef};
use edlab::group::morphism::{find_monomorphism, SearchOutcome, DEFAULT_BUDGET};
use edlab::group::{GroupError, GroupTable, INVENTORY_SCOPE, MAX_ORDER};
use edlab::perm::Perm;
use edlab::repdim::representation_dimension;

fn atom() -> impl Strategy<Value = Construction> {
    prop_oneof![
        (prop::sample::select(vec![AtomKind::C, AtomKind::D, AtomKind::Q, AtomKind::QD, AtomKind::S, AtomKind::A]), 1u64..100)
            .prop_map(|(k, n)| Construction::atom(k, &[n])),
        (prop::sample::select(vec![AtomKind::SL, AtomKind::GL, AtomKind::PSL]), 1u64..6, 1u64..12)
            .prop_map(|(k, n, q)| Construction::atom(k, &[n, q])),
        prop::collection::vec(prop::collection::vec(prop::collection::vec(1usize..10, 1..4), 0..3), 1..4).prop_map(|generators| {
            let degree = generators.iter().flatten().flatten().copied().max().unwrap_or(1);
            Construction::Perms {
                degree,
                generators,
                span: Default::default(),
            }
        }),
    ]
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..6, prop_oneof![-5i64..0, 1i64..6]), 0..4).prop_map(Word)
}

fn clause() -> impl Strategy<Value = ActionClause> {
    prop_oneof![
        prop::collection::btree_map(0usize..6, word(), 0..3).prop_map(|m| ActionClause::Act(m.into_iter().collect())),
        (1usize..5)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-20i64..21, n), n))
            .prop_map(ActionClause::Mat),
    ]
}

fn construction() -> impl Strategy<Value = Construction> {
    atom().prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), 1u32..65).prop_map(|(b, e)| Construction::power(b, e)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Construction::direct),
            (inner.clone(), inner, prop::collection::vec(clause(), 1..3))
                .prop_map(|(n, a, c)| Construction::semidirect(n, a, c)),
        ]
    })
}

fn small_record() -> impl Strategy<Value = usize> {
    let n = database().records().iter().filter(|r| r.id().order <= 63).count();
    0..n
}

fn relabel(g: &GroupTable, sigma: &[u32]) -> GroupTable {
    let s = Perm::from_images(sigma.to_vec()).unwrap();
    let gens: Vec<Perm> = g.generator_perms().iter().map(|p| s.inverse().then(p).then(&s)).collect();
    GroupTable::generate(g.degree(), &gens, MAX_ORDER).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_the_identity(c in construction()) {
        let text = c.to_string();
        let back = parse_construction(&text);
        prop_assert_eq!(back.as_ref(), Ok(&c), "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_points_keeps_label_and_rd((k, sigma) in small_record().prop_flat_map(|k| {
        let d = database().records()[k].group.degree() as u32;
        (Just(k), Just((0..d).collect::<Vec<u32>>()).prop_shuffle())
    })) {
        let r = &database().records()[k];
        let h = relabel(&r.group, &sigma);
        prop_assert_eq!(database().identify(&h), Some(r.id()));
        let t = CharacterTable::compute(&h).unwrap();
        prop_assert_eq!(representation_dimension(&h, &t).0, r.rd());
    }

    #[test]
    fn generated_subgroups_embed_with_a_valid_witness(k in small_record(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let g = &database().records()[k].group;
        let members = g.closure([x.index(g.order()), y.index(g.order())]);
        let h = g.subgroup_table(&members);
        match find_monomorphism(&h, g, DEFAULT_BUDGET) {
            SearchOutcome::Found(w) => prop_assert!(w.verify(&h, g)),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn permutation_groups_obey_lagrange_and_class_equation(
        gens in prop::collection::vec(Just((0..6).collect::<Vec<u32>>()).prop_shuffle(), 1..3)
    ) {
        let perms: Vec<Perm> = gens.into_iter().map(|v| Perm::from_images(v).unwrap()).collect();
        let g = GroupTable::generate(6, &perms, MAX_ORDER).unwrap();
        prop_assert_eq!(720 % g.order(), 0);
        for x in 0..g.order() {
            prop_assert_eq!(g.order() % g.element_order(x) as usize, 0);
            prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        }
        let cc = g.conjugacy_classes();
        let total: usize = (0..cc.len()).map(|i| cc.size(i)).sum();
        prop_assert_eq!(total, g.order());
        for i in 0..cc.len() {
            prop_assert_eq!(cc.size(i) * g.centralizer_order(cc.representative(i)), g.order());
        }
        match g.subgroups_up_to_conjugacy() {
            Ok(classes) => {
                for h in classes {
                    prop_assert_eq!(g.order() % h.representative.order(), 0);
                }
            }
            Err(GroupError::ScopeExceeded { order, .. }) => prop_assert!(order > INVENTORY_SCOPE),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn bounds_are_monotone_along_subgroups(k in small_record()) {
        let (engine, inf) = inference();
        let r = &database().records()[k];
        let f = inf.get(r.id()).unwrap();
        for link in &engine.structure(r.id()).unwrap().subgroups {
            match link.subgroup {
                SubgroupRef::Database { id } => {
                    let h = inf.get(id).unwrap();
                    prop_assert!(h.lo <= f.lo && h.hi <= f.hi, "{} in {}", id, r.id());
                    prop_assert!(f.hi <= link.index * h.hi);
                }
                SubgroupRef::Abelian { rank, .. } => prop_assert!(rank <= f.lo),
            }
        }
    }

    #[test]
    fn alpha_does_not_increase_with_n(a in 2usize..64, b in 2usize..64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let inf = &inference().1;
        let x = alpha_ratio(database(), inf, lo).unwrap();
        let y = alpha_ratio(database(), inf, hi).unwrap();
        prop_assert!(y.value <= x.value);
    }
}
