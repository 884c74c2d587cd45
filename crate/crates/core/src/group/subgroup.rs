use std::collections::{HashMap, HashSet};

use super::{ElementSet, GroupError, GroupTable};
use crate::perm::Perm;

/// Largest order for which the full subgroup inventory is computed.
pub const INVENTORY_SCOPE: usize = 63;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: ElementSet,
}

impl Subgroup {
    /// Wraps a member set; the caller guarantees closure.
    pub fn from_members(members: ElementSet) -> Self {
        Subgroup { members }
    }

    pub fn trivial(parent_order: usize) -> Self {
        Subgroup {
            members: ElementSet::from_indices(parent_order, [0]),
        }
    }

    pub fn whole(parent_order: usize) -> Self {
        Subgroup {
            members: ElementSet::full(parent_order),
        }
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.count()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.intersection(&other.members),
        }
    }

    pub fn is_normal_in(&self, g: &GroupTable) -> bool {
        g.generators()
            .iter()
            .all(|&a| self.members.iter().all(|x| self.contains(g.conj(x, a))))
    }

    /// Checks closure under multiplication and the Lagrange condition.
    pub fn is_closed_in(&self, g: &GroupTable) -> bool {
        let elems = self.elements();
        self.contains(0)
            && g.order().is_multiple_of(elems.len())
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| self.contains(g.mul(a, b))))
    }

    pub fn table(&self, g: &GroupTable) -> GroupTable {
        g.subgroup_table(&self.members)
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}: {:?})", self.order(), self.members)
    }
}

#[derive(Debug, Clone)]
pub struct NormalSubgroup {
    pub subgroup: Subgroup,
    pub minimal: bool,
}

/// A conjugacy class of subgroups: its canonical representative (the
/// conjugate with the lexicographically least member list) and class size.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub size: usize,
}

pub struct Quotient {
    pub table: GroupTable,
    /// Image of each element of the parent group.
    pub projection: Vec<usize>,
}

impl GroupTable {
    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(self.order())
    }

    pub fn subgroup(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        Subgroup::from_members(self.closure(gens))
    }

    pub fn center(&self) -> Subgroup {
        let members = ElementSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&x| {
                self.generators()
                    .iter()
                    .all(|&a| self.mul(x, a) == self.mul(a, x))
            }),
        );
        Subgroup::from_members(members)
    }

    pub fn centralizer(&self, x: usize) -> Subgroup {
        Subgroup::from_members(ElementSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&y| self.mul(x, y) == self.mul(y, x)),
        ))
    }

    pub fn normal_closure(&self, gens: impl IntoIterator<Item = usize>) -> Subgroup {
        let mut set = self.closure(gens);
        loop {
            let extra: Vec<usize> = set
                .iter()
                .flat_map(|x| self.generators().iter().map(move |&a| (x, a)))
                .map(|(x, a)| self.conj(x, a))
                .filter(|&y| !set.contains(y))
                .collect();
            if extra.is_empty() {
                return Subgroup::from_members(set);
            }
            set = self.join(&set, extra);
        }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let gens = self.generators();
        let comms: Vec<usize> = gens
            .iter()
            .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.normal_closure(comms)
    }

    /// A Sylow `p`-subgroup: a single pass over the elements in index order,
    /// keeping each element that extends the current `p`-subgroup.
    pub fn sylow_subgroup(&self, p: u64) -> Result<Subgroup, GroupError> {
        if p < 2 || !(self.order() as u64).is_multiple_of(p) {
            return Err(GroupError::NotADivisor {
                p,
                order: self.order(),
            });
        }
        let is_p_power = |mut n: u64| {
            while n.is_multiple_of(p) {
                n /= p;
            }
            n == 1
        };
        let mut current = self.closure([]);
        for x in 1..self.order() {
            if current.contains(x) || !is_p_power(self.element_order(x) as u64) {
                continue;
            }
            let next = self.join(&current, [x]);
            if is_p_power(next.count() as u64) {
                current = next;
            }
        }
        Ok(Subgroup::from_members(current))
    }

    /// All normal subgroups, sorted by (order, member list), with minimal
    /// ones flagged.
    pub fn normal_subgroups(&self) -> Vec<NormalSubgroup> {
        let cc = self.conjugacy_classes();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let mut all: Vec<ElementSet> = Vec::new();
        let mut push = |s: ElementSet, all: &mut Vec<ElementSet>| {
            if seen.insert(s.clone()) {
                all.push(s);
                true
            } else {
                false
            }
        };
        push(self.closure([]), &mut all);
        let closures: Vec<ElementSet> = (1..cc.len())
            .map(|i| self.normal_closure([cc.representative(i)]).members)
            .collect();
        for c in &closures {
            push(c.clone(), &mut all);
        }
        let mut head = 0;
        while head < all.len() {
            let base = all[head].clone();
            for c in &closures {
                if c.is_subset(&base) {
                    continue;
                }
                let extra: Vec<usize> = c.iter().filter(|&x| !base.contains(x)).collect();
                let joined = self.join(&base, extra);
                push(joined, &mut all);
            }
            head += 1;
        }
        all.sort_by_cached_key(|s| (s.count(), s.to_vec()));
        let minimal: Vec<bool> = all
            .iter()
            .map(|s| {
                s.count() > 1
                    && !all
                        .iter()
                        .any(|t| t.count() > 1 && t.count() < s.count() && t.is_subset(s))
            })
            .collect();
        all.into_iter()
            .zip(minimal)
            .map(|(members, minimal)| NormalSubgroup {
                subgroup: Subgroup::from_members(members),
                minimal,
            })
            .collect()
    }

    /// The quotient by a normal subgroup, acting on its cosets.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient, GroupError> {
        if !n.is_normal_in(self) {
            return Err(GroupError::NotNormal);
        }
        let order = self.order();
        let mut coset = vec![usize::MAX; order];
        let mut reps = Vec::new();
        let nelems = n.elements();
        for x in 0..order {
            if coset[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &m in &nelems {
                coset[self.mul(m, x)] = id;
            }
        }
        let k = reps.len();
        let gens: Vec<Perm> = self
            .generators()
            .iter()
            .map(|&g| {
                let images = reps.iter().map(|&r| coset[self.mul(r, g)] as u32).collect();
                Perm::from_images(images).expect("cosets are permuted")
            })
            .collect();
        let table = GroupTable::generate(k, &gens, super::MAX_ORDER)
            .expect("a quotient is never larger than its parent");
        let mut projection = vec![0usize; order];
        for x in 1..order {
            let (p, s) = self.bfs_parent(x);
            projection[x] = table.mul(projection[p], table.generators()[s]);
        }
        Ok(Quotient { table, projection })
    }

    /// Every subgroup, as member sets, sorted by (order, member list).
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if self.order() > INVENTORY_SCOPE {
            return Err(GroupError::ScopeExceeded {
                order: self.order(),
                limit: INVENTORY_SCOPE,
            });
        }
        // cyclic subgroups, each with a generator
        let mut cyclic: Vec<(usize, ElementSet)> = Vec::new();
        let mut seen: HashMap<ElementSet, Vec<usize>> = HashMap::new();
        for x in 0..self.order() {
            let c = self.closure([x]);
            if !seen.contains_key(&c) {
                seen.insert(c.clone(), if x == 0 { vec![] } else { vec![x] });
                cyclic.push((x, c));
            }
        }
        let mut layer: Vec<ElementSet> = cyclic.iter().map(|(_, c)| c.clone()).collect();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for s in &layer {
                let gens = seen[s].clone();
                for (x, c) in &cyclic {
                    if c.is_subset(s) {
                        continue;
                    }
                    let joined = self.join(s, [*x]);
                    if !seen.contains_key(&joined) {
                        let mut g = gens.clone();
                        g.push(*x);
                        seen.insert(joined.clone(), g);
                        next.push(joined);
                    }
                }
            }
            layer = next;
        }
        let mut all: Vec<ElementSet> = seen.into_keys().collect();
        all.sort_by_cached_key(|s| (s.count(), s.to_vec()));
        Ok(all.into_iter().map(Subgroup::from_members).collect())
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, a: usize) -> Subgroup {
        Subgroup::from_members(ElementSet::from_indices(
            self.order(),
            h.members.iter().map(|x| self.conj(x, a)),
        ))
    }

    /// One representative per conjugacy class of subgroups, sorted by
    /// (order, member list of the representative).
    pub fn subgroups_up_to_conjugacy(&self) -> Result<Vec<SubgroupClass>, GroupError> {
        let all = self.all_subgroups()?;
        let mut assigned: HashSet<ElementSet> = HashSet::new();
        let mut classes = Vec::new();
        for h in &all {
            if assigned.contains(&h.members) {
                continue;
            }
            // `all` is sorted, so the first unassigned member of a class is
            // its least conjugate.
            let mut orbit = vec![h.clone()];
            assigned.insert(h.members.clone());
            let mut head = 0;
            while head < orbit.len() {
                let cur = orbit[head].clone();
                for &a in self.generators() {
                    let c = self.conjugate_subgroup(&cur, a);
                    if assigned.insert(c.members.clone()) {
                        orbit.push(c);
                    }
                }
                head += 1;
            }
            classes.push(SubgroupClass {
                representative: h.clone(),
                size: orbit.len(),
            });
        }
        Ok(classes)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    /// Every subset closed under multiplication, by include/exclude search
    /// over elements in index order.
    pub(crate) fn brute_force_subgroup_count(g: &GroupTable) -> usize {
        fn rec(g: &GroupTable, x: usize, chosen: &mut ElementSet, excluded: &mut ElementSet, count: &mut usize) {
            if x == g.order() {
                *count += 1;
                return;
            }
            if chosen.contains(x) || excluded.contains(x) {
                rec(g, x + 1, chosen, excluded, count);
                return;
            }
            // include x: close and check that no excluded element appears
            let closed = g.join(chosen, [x]);
            if !closed.iter().any(|y| excluded.contains(y)) {
                let mut c2 = closed;
                rec(g, x + 1, &mut c2, excluded, count);
            }
            excluded.insert(x);
            rec(g, x + 1, chosen, excluded, count);
            excluded.remove(x);
        }
        let mut chosen = ElementSet::from_indices(g.order(), [0]);
        let mut excluded = ElementSet::new(g.order());
        let mut count = 0;
        rec(g, 1, &mut chosen, &mut excluded, &mut count);
        count
    }

    #[test]
    fn center_derived_sylow() {
        assert_eq!(quaternion8().center().order(), 2);
        assert_eq!(alternating4().derived_subgroup().order(), 4);
        let d8 = dihedral8();
        assert_eq!(d8.center().order(), 2);
        assert_eq!(d8.derived_subgroup().order(), 2);
        let s4 = symmetric(4);
        assert_eq!(s4.sylow_subgroup(2).unwrap().order(), 8);
        assert_eq!(s4.sylow_subgroup(3).unwrap().order(), 3);
        assert!(s4.sylow_subgroup(5).is_err());
    }

    #[test]
    fn normal_subgroup_lists() {
        let orders = |g: &GroupTable| -> Vec<usize> {
            g.normal_subgroups().iter().map(|n| n.subgroup.order()).collect()
        };
        assert_eq!(orders(&symmetric(3)), vec![1, 3, 6]);
        let q8 = quaternion8();
        let ns = q8.normal_subgroups();
        assert_eq!(ns.len(), 6);
        let minimal: Vec<usize> = ns.iter().filter(|n| n.minimal).map(|n| n.subgroup.order()).collect();
        assert_eq!(minimal, vec![2]);
        assert_eq!(orders(&symmetric(4)), vec![1, 4, 12, 24]);
    }

    #[test]
    fn normal_subgroups_match_union_of_classes() {
        for g in [symmetric(4), quaternion8(), dihedral8(), alternating4(), cyclic(12)] {
            let cc = g.conjugacy_classes();
            let k = cc.len();
            let mut brute = 0;
            for mask in 0u32..(1 << k) {
                if mask & 1 == 0 {
                    continue;
                }
                let set = ElementSet::from_indices(
                    g.order(),
                    (0..k).filter(|i| mask >> i & 1 == 1).flat_map(|i| cc.class(i).to_vec()),
                );
                if Subgroup::from_members(set).is_closed_in(&g) {
                    brute += 1;
                }
            }
            assert_eq!(g.normal_subgroups().len(), brute);
        }
    }

    #[test]
    fn quotient_is_homomorphism_with_kernel() {
        let s4 = symmetric(4);
        let v4 = s4
            .normal_subgroups()
            .into_iter()
            .find(|n| n.subgroup.order() == 4)
            .unwrap()
            .subgroup;
        let q = s4.quotient(&v4).unwrap();
        assert_eq!(q.table.order(), 6);
        for a in 0..s4.order() {
            assert_eq!(q.projection[a] == 0, v4.contains(a));
            for b in 0..s4.order() {
                assert_eq!(q.projection[s4.mul(a, b)], q.table.mul(q.projection[a], q.projection[b]));
            }
        }
        let c4 = cyclic(4);
        let c2 = c4.subgroup([c4.pow(c4.generators()[0], 2)]);
        assert_eq!(c4.quotient(&c2).unwrap().table.order(), 2);
        let not_normal = s4.subgroup([s4.generators()[1]]);
        assert!(matches!(s4.quotient(&not_normal), Err(GroupError::NotNormal)));
    }

    #[test]
    fn subgroup_inventory_counts() {
        let s3 = symmetric(3);
        let classes = s3.subgroups_up_to_conjugacy().unwrap();
        let orders: Vec<usize> = classes.iter().map(|c| c.representative.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        for g in [symmetric(3), quaternion8(), dihedral8(), alternating4(), symmetric(4), cyclic(12)] {
            let all = g.all_subgroups().unwrap();
            assert_eq!(all.len(), brute_force_subgroup_count(&g));
            let classes = g.subgroups_up_to_conjugacy().unwrap();
            assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), all.len());
        }
        assert_eq!(symmetric(4).all_subgroups().unwrap().len(), 30);
        assert_eq!(symmetric(4).subgroups_up_to_conjugacy().unwrap().len(), 11);
    }

    #[test]
    fn inventory_scope() {
        let s5 = symmetric(5);
        assert_eq!(
            s5.all_subgroups().unwrap_err(),
            GroupError::ScopeExceeded { order: 120, limit: 63 }
        );
    }
}
