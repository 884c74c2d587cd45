//! Oracles used by the property suites and the acceptance runner. They work
//! directly on multiplication tables and character values, without the
//! library's set-cover, inventory or kernel machinery.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use edlab::chartab::CharacterTable;
use edlab::db::Database;
use edlab::ed::{Engine, Inference};
use edlab::group::morphism::DEFAULT_BUDGET;
use edlab::group::GroupTable;

pub fn database() -> &'static Database {
    static DB: OnceLock<Database> = OnceLock::new();
    DB.get_or_init(Database::bundled)
}

/// Engine and final facts for the bundled database, computed once.
pub fn inference() -> &'static (Engine<'static>, Inference) {
    static INF: OnceLock<(Engine<'static>, Inference)> = OnceLock::new();
    INF.get_or_init(|| {
        let mut engine = Engine::new(database(), DEFAULT_BUDGET).expect("engine");
        let inf = engine.run().expect("inference");
        (engine, inf)
    })
}

fn class_of_inverse(g: &GroupTable, k: usize) -> usize {
    let cc = g.conjugacy_classes();
    cc.class_of(g.inv(cc.representative(k)))
}

/// `Σd² = |G|`, as many characters as classes, and both orthogonality
/// relations modulo the table's prime.
pub fn character_table_checks(g: &GroupTable, t: &CharacterTable) -> Result<(), String> {
    let p = t.prime.p as u128;
    let cc = g.conjugacy_classes();
    let r = cc.len();
    if t.len() != r {
        return Err(format!("{} characters for {r} classes", t.len()));
    }
    let sum_sq: usize = t.degrees.iter().map(|d| d * d).sum();
    if sum_sq != g.order() {
        return Err(format!("sum of squared degrees is {sum_sq}"));
    }
    let inv: Vec<usize> = (0..r).map(|k| class_of_inverse(g, k)).collect();
    let n = g.order() as u128;
    for i in 0..r {
        for j in 0..r {
            let s = (0..r).fold(0u128, |acc, k| {
                (acc + cc.size(k) as u128 * t.values[i][k] as u128 % p * t.values[j][inv[k]] as u128) % p
            });
            let expect = if i == j { n % p } else { 0 };
            if s != expect {
                return Err(format!("row orthogonality fails for characters {i}, {j}"));
            }
        }
    }
    for k in 0..r {
        for l in 0..r {
            let s = (0..r).fold(0u128, |acc, i| (acc + t.values[i][k] as u128 * t.values[i][inv[l]] as u128) % p);
            let expect = if k == l { (n / cc.size(k) as u128) % p } else { 0 };
            if s != expect {
                return Err(format!("column orthogonality fails for classes {k}, {l}"));
            }
        }
    }
    Ok(())
}

/// Elements acting trivially: the multiplicity of eigenvalue 1 of `x` is
/// the average of `χ(xᵏ)` over `⟨x⟩`, an integer in `[0, d]` with `d < p`,
/// so it is recovered exactly modulo `p`.
pub fn kernel_by_averaging(g: &GroupTable, t: &CharacterTable, i: usize) -> BTreeSet<usize> {
    let p = t.prime.p;
    let cc = g.conjugacy_classes();
    let pow_mod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    (0..g.order())
        .filter(|&x| {
            let m = g.element_order(x) as u64;
            let mut y = 0;
            let mut sum = 0;
            for _ in 0..m {
                sum = (sum + t.values[i][cc.class_of(y)]) % p;
                y = g.mul(y, x);
            }
            let ones = sum * pow_mod(m % p, p - 2) % p;
            ones == t.degrees[i] as u64
        })
        .collect()
}

/// `rd` by trying every subset of irreducible characters.
pub fn rd_brute_force(g: &GroupTable, t: &CharacterTable) -> usize {
    let r = t.len();
    assert!(r <= 16, "brute force is meant for few classes");
    let kernels: Vec<BTreeSet<usize>> = (0..r).map(|i| kernel_by_averaging(g, t, i)).collect();
    (1u32..1 << r)
        .filter(|mask| {
            let mut meet: BTreeSet<usize> = (0..g.order()).collect();
            for (i, k) in kernels.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    meet = meet.intersection(k).copied().collect();
                }
            }
            meet.len() == 1
        })
        .map(|mask| (0..r).filter(|i| mask & (1 << i) != 0).map(|i| t.degrees[i]).sum())
        .min()
        .expect("the sum of all irreducibles is faithful")
}

fn naive_closure(g: &GroupTable, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set = seed.clone();
    set.insert(0);
    loop {
        let products: Vec<usize> = set.iter().flat_map(|&a| set.iter().map(move |&b| g.mul(a, b))).collect();
        let before = set.len();
        set.extend(products);
        if set.len() == before {
            return set;
        }
    }
}

/// Every subgroup, grown one generator at a time from the trivial group.
pub fn subgroups_naive(g: &GroupTable) -> BTreeSet<BTreeSet<usize>> {
    let trivial: BTreeSet<usize> = [0].into();
    let mut found: BTreeSet<BTreeSet<usize>> = [trivial.clone()].into();
    let mut queue = vec![trivial];
    while let Some(h) = queue.pop() {
        for x in 0..g.order() {
            if h.contains(&x) {
                continue;
            }
            let mut seed = h.clone();
            seed.insert(x);
            let k = naive_closure(g, &seed);
            if found.insert(k.clone()) {
                queue.push(k);
            }
        }
    }
    found
}

/// Number of conjugacy classes of subgroups, from the naive list.
pub fn subgroup_classes_naive(g: &GroupTable, all: &BTreeSet<BTreeSet<usize>>) -> usize {
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut classes = 0;
    for h in all {
        if seen.contains(h) {
            continue;
        }
        classes += 1;
        for a in 0..g.order() {
            seen.insert(h.iter().map(|&x| g.conj(x, a)).collect());
        }
    }
    classes
}
