mod common;

use rayon::prelude::*;

use common::{character_table_checks, database, kernel_by_averaging, rd_brute_force};
use edlab::repdim::abelian_rd_check;

#[test]
fn every_table_satisfies_orthogonality() {
    let failures: Vec<String> = database()
        .records()
        .par_iter()
        .filter_map(|r| {
            let a = r.analysis().ok()?;
            character_table_checks(&r.group, &a.table).err().map(|e| format!("{}: {e}", r.id()))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn kernels_agree_with_character_values() {
    let failures: Vec<String> = database()
        .records()
        .par_iter()
        .filter(|r| r.id().order <= 63)
        .flat_map_iter(|r| {
            let t = &r.analysis().unwrap().table;
            (0..t.len())
                .filter(|&i| kernel_by_averaging(&r.group, t, i) != t.kernels[i].elements().into_iter().collect())
                .map(|i| format!("{} character {i}", r.id()))
                .collect::<Vec<_>>()
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn rd_matches_brute_force_for_few_classes() {
    let mut checked = 0;
    for r in database().records() {
        let t = &r.analysis().unwrap().table;
        if t.len() <= 12 {
            assert_eq!(r.rd(), rd_brute_force(&r.group, t), "{}", r.id());
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} groups with at most 12 classes");
}

#[test]
fn rd_of_abelian_groups_is_the_rank() {
    for r in database().records().iter().filter(|r| r.group.is_abelian()) {
        abelian_rd_check(&r.group, &r.analysis().unwrap().table).unwrap();
    }
}

#[test]
fn rd_matches_the_manifest() {
    let wrong: Vec<String> = database()
        .records()
        .iter()
        .filter(|r| r.rd() != r.entry.rd)
        .map(|r| format!("{}: computed {} expected {}", r.id(), r.rd(), r.entry.rd))
        .collect();
    assert!(wrong.is_empty(), "{wrong:?}");
}
