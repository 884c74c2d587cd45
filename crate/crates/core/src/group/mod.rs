//! Dense finite permutation groups.
//!
//! A [`GroupTable`] materializes every element of a group generated by
//! permutations, together with a full multiplication table. Element `0`
//! is always the identity and elements are numbered breadth-first from
//! the identity using the generators in the order given.

mod elements;
mod invariants;
pub mod morphism;
pub mod shape;
mod subgroup;

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::perm::{lcm, Perm};

pub use elements::ElementSet;
pub(crate) use invariants::prime_factors;
pub use invariants::{abelian_rank, StructuralInvariants};
pub use subgroup::{NormalSubgroup, Quotient, Subgroup, SubgroupClass, INVENTORY_SCOPE};

/// Largest group order that may be materialized.
pub const MAX_ORDER: usize = 2500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeds {limit} elements")]
    ClosureBudgetExceeded { limit: usize },
    #[error("generators act on different point counts ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("{p} does not divide the group order {order}")]
    NotADivisor { p: u64, order: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {order} exceeds the inventory scope {limit}")]
    ScopeExceeded { order: usize, limit: usize },
}

pub struct GroupTable {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, u16>,
    generators: Vec<usize>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    orders: Vec<u32>,
    /// BFS tree: `(parent, generator position)`; the identity points at itself.
    parent: Vec<(u16, u16)>,
    classes: OnceLock<ConjugacyClasses>,
    invariants: OnceLock<StructuralInvariants>,
}

#[derive(Debug, Clone)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<u32>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter().map(Vec::as_slice)
    }

    /// Smallest element index of the class.
    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }
}

/// Closes `gens` under composition. `degree` fixes the point set when the
/// generator list is empty.
pub fn close_generators(degree: usize, gens: &[Perm]) -> Result<GroupTable, GroupError> {
    GroupTable::generate(degree, gens, MAX_ORDER)
}

impl GroupTable {
    pub fn generate(degree: usize, gens: &[Perm], limit: usize) -> Result<Self, GroupError> {
        let limit = limit.min(MAX_ORDER);
        for g in gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch(degree, g.degree()));
            }
        }
        let ngens = gens.len();
        let identity = Perm::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Perm, u16> = HashMap::new();
        index.insert(identity, 0);
        let mut parent = vec![(0u16, 0u16)];
        let mut right: Vec<u16> = Vec::new();

        let mut head = 0;
        while head < elements.len() {
            for (s, g) in gens.iter().enumerate() {
                let y = elements[head].then(g);
                let idx = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= limit {
                            return Err(GroupError::ClosureBudgetExceeded { limit });
                        }
                        index.insert(y.clone(), i as u16);
                        elements.push(y);
                        parent.push((head as u16, s as u16));
                        i as u16
                    }
                };
                right.push(idx);
            }
            head += 1;
        }

        let n = elements.len();
        let mut mul = vec![0u16; n * n];
        for x in 0..n {
            let row = x * n;
            mul[row] = x as u16;
            for y in 1..n {
                let (p, s) = parent[y];
                let xp = mul[row + p as usize] as usize;
                mul[row + y] = right[xp * ngens + s as usize];
            }
        }
        let inv: Vec<u16> = elements.iter().map(|e| index[&e.inverse()]).collect();

        let mut orders = vec![0u32; n];
        for x in 0..n {
            let mut k = 1;
            let mut y = x;
            while y != 0 {
                y = mul[y * n + x] as usize;
                k += 1;
            }
            orders[x] = k;
        }

        let generators = gens.iter().map(|g| index[g] as usize).collect();
        Ok(GroupTable {
            degree,
            elements,
            index,
            generators,
            mul,
            inv,
            orders,
            parent,
            classes: OnceLock::new(),
            invariants: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    /// Element indices of the generators, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Perm> {
        self.generators.iter().map(|&g| self.elements[g].clone()).collect()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    /// `a⁻¹ x a`.
    #[inline]
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(self.inv(a), x), a)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let k = k % self.orders[a] as u64;
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o as u64))
    }

    /// BFS parent of `x` as `(parent, generator position)`; `x = parent · gen`.
    pub fn bfs_parent(&self, x: usize) -> (usize, usize) {
        let (p, s) = self.parent[x];
        (p as usize, s as usize)
    }

    /// A word in the generators (positions into [`Self::generators`]) that
    /// evaluates to `x`.
    pub fn word(&self, mut x: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while x != 0 {
            let (p, s) = self.bfs_parent(x);
            w.push(s);
            x = p;
        }
        w.reverse();
        w
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ConjugacyClasses {
        let n = self.order();
        let mut class_of = vec![u32::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = raw.len() as u32;
            let mut members = vec![start];
            class_of[start] = id;
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                for &g in &self.generators {
                    let y = self.conj(x, g);
                    if class_of[y] == u32::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
                head += 1;
            }
            members.sort_unstable();
            raw.push(members);
        }
        raw.sort_by_key(|c| (self.orders[c[0]], c.len(), c[0]));
        for (i, c) in raw.iter().enumerate() {
            for &x in c {
                class_of[x] = i as u32;
            }
        }
        ConjugacyClasses {
            classes: raw,
            class_of,
        }
    }

    /// `|C_G(x)|`.
    pub fn centralizer_order(&self, x: usize) -> usize {
        let cc = self.conjugacy_classes();
        self.order() / cc.size(cc.class_of(x))
    }

    pub fn invariants(&self) -> &StructuralInvariants {
        self.invariants
            .get_or_init(|| StructuralInvariants::compute(self))
    }

    /// The subgroup generated by `gens`, as a membership set.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut set = ElementSet::new(self.order());
        set.insert(0);
        let mut members = vec![0usize];
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    members.push(y);
                }
            }
            head += 1;
        }
        set
    }

    /// Closure of an existing subgroup together with extra elements.
    pub fn join(&self, base: &ElementSet, extra: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut set = base.clone();
        let mut members: Vec<usize> = base.iter().collect();
        let extra: Vec<usize> = extra.into_iter().filter(|&x| !base.contains(x)).collect();
        if extra.is_empty() {
            return set;
        }
        let mut gens: Vec<usize> = members.clone();
        gens.extend(extra.iter().copied());
        for &x in &extra {
            if set.insert(x) {
                members.push(x);
            }
        }
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    members.push(y);
                }
            }
            head += 1;
        }
        set
    }

    /// Realizes the subgroup given by `members` as its own table, generated
    /// by a small generating set chosen greedily.
    pub fn subgroup_table(&self, members: &ElementSet) -> GroupTable {
        let gens = self.generating_set(members);
        let perms: Vec<Perm> = gens.iter().map(|&g| self.elements[g].clone()).collect();
        GroupTable::generate(self.degree, &perms, MAX_ORDER)
            .expect("a subgroup is never larger than its parent")
    }

    /// Greedy small generating set of the subgroup `members`: repeatedly add
    /// the element (largest order first, then smallest index) that enlarges
    /// the generated subgroup the most.
    pub fn generating_set(&self, members: &ElementSet) -> Vec<usize> {
        let target = members.count();
        let mut gens = Vec::new();
        let mut current = self.closure([]);
        let mut candidates: Vec<usize> = members.iter().filter(|&x| x != 0).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.orders[x]), x));
        while current.count() < target {
            let mut best: Option<(usize, ElementSet)> = None;
            for &x in &candidates {
                if current.contains(x) {
                    continue;
                }
                let next = self.join(&current, [x]);
                if best.as_ref().is_none_or(|(_, b)| next.count() > b.count()) {
                    let full = next.count() == target;
                    best = Some((x, next));
                    if full {
                        break;
                    }
                }
            }
            let (x, next) = best.expect("members must form a subgroup");
            gens.push(x);
            current = next;
        }
        gens
    }
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order())
            .field("degree", &self.degree)
            .field("generators", &self.generator_perms())
            .finish()
    }
}
