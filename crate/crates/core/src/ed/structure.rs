//! Structural data about one database group that the rules consume:
//! subgroups, direct decompositions, central quotients and the order-48
//! Sylow data. All of it is computed once, independently of the bounds.

use serde::{Deserialize, Serialize};

use crate::db::Database;
use crate::dsl::GapId;
use crate::group::morphism::{find_monomorphism, EmbeddingWitness, SearchOutcome};
use crate::group::shape::{euler_phi, recognize_shape};
use crate::group::{GroupTable, Subgroup, INVENTORY_SCOPE, MAX_ORDER};
use crate::perm::Perm;

/// A subgroup as the rules see it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupRef {
    Database { id: GapId },
    /// An abelian subgroup outside the database, known only by its rank.
    Abelian { order: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupLink {
    pub subgroup: SubgroupRef,
    pub index: usize,
    /// Element indices in the parent generating the subgroup.
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductLink {
    pub left: GapId,
    pub right: GapId,
    pub left_generators: Vec<usize>,
    pub right_generators: Vec<usize>,
}

/// A central subgroup `A` with `A ∩ [G,G] = 1`, and the quotient `G/A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralQuotientLink {
    pub kernel_generators: Vec<usize>,
    pub kernel_order: usize,
    pub quotient: GapId,
    pub center_rank: usize,
    pub quotient_center_rank: usize,
}

impl CentralQuotientLink {
    /// `ed(G) − ed(G/A)`.
    pub fn shift(&self) -> i64 {
        self.center_rank as i64 - self.quotient_center_rank as i64
    }
}

/// Normal Sylow 3-subgroup in a group of order 48, with the certificate
/// `G ↪ G/G₃ × S₃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order48Link {
    pub quotient: GapId,
    pub witness: EmbeddingWitness,
}

#[derive(Debug, Clone, Default)]
pub struct GroupStructure {
    pub center_order: usize,
    pub center_rank: usize,
    pub abelian_rank: Option<usize>,
    pub p_group: Option<u64>,
    pub cyclic: bool,
    pub odd_dihedral: bool,
    pub holomorph: Option<u64>,
    pub subgroups: Vec<SubgroupLink>,
    pub products: Vec<ProductLink>,
    pub central_quotients: Vec<CentralQuotientLink>,
    pub order48: Option<Order48Link>,
    /// Set when the order-48 certificate could not be found.
    pub order48_failure: Option<String>,
}

/// `φ(p−1)·p^(n−1)` for `q = pⁿ`.
pub fn ledet_bound(q: u64) -> u64 {
    let p = crate::group::prime_factors(q)[0];
    let mut pn1 = 1;
    let mut r = q / p;
    while r > 1 {
        pn1 *= p;
        r /= p;
    }
    euler_phi(p - 1) * pn1
}

pub fn center_rank(g: &GroupTable) -> usize {
    let z = g.center();
    z.table(g).invariants().rank().unwrap_or(0)
}

/// `G × S₃` on disjoint point sets.
pub fn times_s3(g: &GroupTable) -> GroupTable {
    let d = g.degree();
    let total = d + 3;
    let mut gens: Vec<Perm> = g.generator_perms().iter().map(|p| p.embed(0, total)).collect();
    gens.push(Perm::from_cycles(3, &[vec![0, 1]]).unwrap().embed(d, total));
    gens.push(Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap().embed(d, total));
    GroupTable::generate(total, &gens, MAX_ORDER).expect("small direct product")
}

impl GroupStructure {
    pub fn compute(g: &GroupTable, db: &Database, budget: u64) -> GroupStructure {
        let inv = g.invariants();
        let shape = recognize_shape(g);
        let mut s = GroupStructure {
            center_order: inv.center_order,
            center_rank: center_rank(g),
            abelian_rank: inv.rank(),
            p_group: inv.p_group,
            cyclic: shape.cyclic,
            odd_dihedral: shape.odd_dihedral,
            holomorph: shape.full_holomorph,
            ..Default::default()
        };
        if g.order() == 1 {
            return s;
        }
        s.subgroups = subgroup_links(g, db);
        if !inv.is_abelian() {
            s.products = product_links(g, db);
            s.central_quotients = lotscher_reduction(g, db);
        }
        if g.order() == 48 {
            match order48_link(g, db, budget) {
                Ok(link) => s.order48 = link,
                Err(e) => s.order48_failure = Some(e),
            }
        }
        s
    }
}

fn subgroup_links(g: &GroupTable, db: &Database) -> Vec<SubgroupLink> {
    if g.order() > INVENTORY_SCOPE {
        return elementary_abelian_links(g);
    }
    let classes = g.subgroups_up_to_conjugacy().expect("within inventory scope");
    classes
        .iter()
        .map(|c| &c.representative)
        .filter(|h| !h.is_trivial() && h.order() < g.order())
        .filter_map(|h| {
            let t = h.table(g);
            let subgroup = match db.identify(&t) {
                Some(id) => SubgroupRef::Database { id },
                None => SubgroupRef::Abelian {
                    order: t.order(),
                    rank: t.invariants().rank()?,
                },
            };
            Some(SubgroupLink {
                subgroup,
                index: g.order() / h.order(),
                generators: g.generating_set(h.members()),
            })
        })
        .collect()
}

/// For groups beyond the inventory scope: one elementary abelian
/// `p`-subgroup of maximal rank per prime.
fn elementary_abelian_links(g: &GroupTable) -> Vec<SubgroupLink> {
    let mut out = Vec::new();
    for p in crate::group::prime_factors(g.order() as u64) {
        let order_p: Vec<usize> = (1..g.order()).filter(|&x| g.element_order(x) as u64 == p).collect();
        let mut best: Vec<usize> = Vec::new();
        let mut chosen = Vec::new();
        fn rec(g: &GroupTable, pool: &[usize], start: usize, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
            if chosen.len() > best.len() {
                *best = chosen.clone();
            }
            let span = g.closure(chosen.iter().copied());
            for k in start..pool.len() {
                let x = pool[k];
                if span.contains(x) || chosen.iter().any(|&y| g.mul(x, y) != g.mul(y, x)) {
                    continue;
                }
                // remaining candidates cannot beat the best rank
                if chosen.len() + (pool.len() - k) <= best.len() {
                    return;
                }
                chosen.push(x);
                rec(g, pool, k + 1, chosen, best);
                chosen.pop();
            }
        }
        rec(g, &order_p, 0, &mut chosen, &mut best);
        if best.is_empty() {
            continue;
        }
        let order = (p as usize).pow(best.len() as u32);
        out.push(SubgroupLink {
            subgroup: SubgroupRef::Abelian {
                order,
                rank: best.len(),
            },
            index: g.order() / order,
            generators: best,
        });
    }
    out
}

fn product_links(g: &GroupTable, db: &Database) -> Vec<ProductLink> {
    let normals: Vec<Subgroup> = g
        .normal_subgroups()
        .into_iter()
        .map(|n| n.subgroup)
        .filter(|n| !n.is_trivial() && n.order() < g.order())
        .collect();
    let mut out = Vec::new();
    for (i, a) in normals.iter().enumerate() {
        for b in &normals[i..] {
            if a.order() * b.order() != g.order() || !a.intersection(b).is_trivial() {
                continue;
            }
            let (Some(left), Some(right)) = (db.identify(&a.table(g)), db.identify(&b.table(g))) else {
                continue;
            };
            out.push(ProductLink {
                left,
                right,
                left_generators: g.generating_set(a.members()),
                right_generators: g.generating_set(b.members()),
            });
        }
    }
    out
}

/// Central subgroups `A ≠ 1` with `A ∩ [G,G] = 1` whose quotient is in the database.
pub fn lotscher_reduction(g: &GroupTable, db: &Database) -> Vec<CentralQuotientLink> {
    let z = g.center();
    let derived = g.derived_subgroup();
    let zrank = center_rank(g);
    g.normal_subgroups()
        .into_iter()
        .map(|n| n.subgroup)
        .filter(|a| !a.is_trivial() && a.is_subgroup_of(&z) && a.intersection(&derived).is_trivial())
        .filter_map(|a| {
            let q = g.quotient(&a).expect("central subgroups are normal");
            let quotient = db.identify(&q.table)?;
            Some(CentralQuotientLink {
                kernel_generators: g.generating_set(a.members()),
                kernel_order: a.order(),
                quotient,
                center_rank: zrank,
                quotient_center_rank: center_rank(&q.table),
            })
        })
        .collect()
}

fn order48_link(g: &GroupTable, db: &Database, budget: u64) -> Result<Option<Order48Link>, String> {
    let sylow = g.sylow_subgroup(3).expect("3 divides 48");
    if !sylow.is_normal_in(g) {
        return Ok(None);
    }
    let q = g.quotient(&sylow).expect("normal");
    let Some(quotient) = db.identify(&q.table) else {
        return Ok(None);
    };
    match find_monomorphism(g, &times_s3(&q.table), budget) {
        SearchOutcome::Found(witness) => Ok(Some(Order48Link { quotient, witness })),
        other => Err(format!("no embedding into G/G3 x S3 ({other:?})")),
    }
}
