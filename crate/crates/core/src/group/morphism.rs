//! Injective homomorphisms between materialized groups.
//!
//! The search fixes a generating sequence of the source and backtracks over
//! generator images. After each choice the partial assignment is extended
//! to the subgroup generated so far and checked for consistency and
//! injectivity, so most branches die at depth two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::GroupTable;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// An injective homomorphism presented by generator images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    /// Element indices in the source group; they generate it.
    pub source_generators: Vec<usize>,
    /// Element indices in the target group.
    pub images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(EmbeddingWitness),
    NotFound,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&EmbeddingWitness> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("isomorphism search exhausted its budget of {0} nodes")]
    BudgetExhausted(u64),
}

impl EmbeddingWitness {
    /// Extends the generator images to the whole source group, or `None` if
    /// they do not define an injective homomorphism.
    pub fn extend(&self, g: &GroupTable, h: &GroupTable) -> Option<Vec<usize>> {
        let phi = extend_homomorphism(g, &self.source_generators, h, &self.images)?;
        let mut seen = vec![false; h.order()];
        for &y in &phi {
            if std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(phi)
    }

    /// Full relation check: the images define an injective homomorphism.
    pub fn verify(&self, g: &GroupTable, h: &GroupTable) -> bool {
        self.extend(g, h).is_some()
    }
}

/// Extends `gens[i] ↦ images[i]` to a homomorphism `g → h`. Returns `None`
/// if `gens` does not generate `g` or the assignment is inconsistent.
pub fn extend_homomorphism(
    g: &GroupTable,
    gens: &[usize],
    h: &GroupTable,
    images: &[usize],
) -> Option<Vec<usize>> {
    if gens.len() != images.len() {
        return None;
    }
    let n = g.order();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        for (s, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let img = h.mul(phi[x], images[s]);
            if phi[y] == usize::MAX {
                phi[y] = img;
                queue.push(y);
            } else if phi[y] != img {
                return None;
            }
        }
        head += 1;
    }
    (queue.len() == n).then_some(phi)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Mono,
    Iso,
}

struct Level {
    /// Elements of the prefix subgroup with their BFS tree `(parent, generator position)`.
    elements: Vec<(usize, usize, usize)>,
}

struct Search<'a> {
    accept: &'a mut dyn FnMut(&[usize]) -> bool,
    g: &'a GroupTable,
    h: &'a GroupTable,
    gens: Vec<usize>,
    levels: Vec<Level>,
    candidates: Vec<Vec<usize>>,
    images: Vec<usize>,
    phi: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn consistent(&mut self, depth: usize) -> bool {
        let level = &self.levels[depth];
        self.epoch += 1;
        let epoch = self.epoch;
        self.phi[0] = 0;
        self.stamp[0] = epoch;
        for &(x, p, s) in &level.elements[1..] {
            let y = self.h.mul(self.phi[p], self.images[s]);
            if self.stamp[y] == epoch {
                return false;
            }
            self.stamp[y] = epoch;
            self.phi[x] = y;
        }
        for &(x, _, _) in &level.elements {
            for s in 0..=depth {
                let xs = self.g.mul(x, self.gens[s]);
                if self.phi[xs] != self.h.mul(self.phi[x], self.images[s]) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> Option<bool> {
        if depth == self.gens.len() {
            return Some((self.accept)(&self.phi));
        }
        for k in 0..self.candidates[depth].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.images[depth] = self.candidates[depth][k];
            if self.consistent(depth) && self.run(depth + 1)? {
                return Some(true);
            }
        }
        Some(false)
    }
}

fn prefix_levels(g: &GroupTable, gens: &[usize]) -> Vec<Level> {
    (0..gens.len())
        .map(|depth| {
            let mut index = vec![usize::MAX; g.order()];
            index[0] = 0;
            let mut elements = vec![(0, 0, 0)];
            let mut head = 0;
            while head < elements.len() {
                let x = elements[head].0;
                for (s, &gen) in gens[..=depth].iter().enumerate() {
                    let y = g.mul(x, gen);
                    if index[y] == usize::MAX {
                        index[y] = elements.len();
                        elements.push((y, x, s));
                    }
                }
                head += 1;
            }
            Level { elements }
        })
        .collect()
}

fn search(
    g: &GroupTable,
    h: &GroupTable,
    budget: u64,
    mode: Mode,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> SearchOutcome {
    if !h.order().is_multiple_of(g.order()) || (mode == Mode::Iso && h.order() != g.order()) {
        return SearchOutcome::NotFound;
    }
    let gens = g.generating_set(&g.whole().members().clone());
    if gens.is_empty() && accept(&[0]) {
        return SearchOutcome::Found(EmbeddingWitness {
            source_generators: vec![],
            images: vec![],
        });
    }
    let hcc = h.conjugacy_classes();
    let admissible = |x: usize, y: usize| {
        if g.element_order(x) != h.element_order(y) {
            return false;
        }
        let cg = g.centralizer_order(x);
        let ch = h.centralizer_order(y);
        match mode {
            Mode::Mono => ch.is_multiple_of(cg),
            Mode::Iso => ch == cg,
        }
    };
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(depth, &x)| {
            if depth == 0 {
                // conjugating by the target fixes the first image up to class
                (0..hcc.len())
                    .map(|c| hcc.representative(c))
                    .filter(|&y| admissible(x, y))
                    .collect()
            } else {
                (0..h.order()).filter(|&y| admissible(x, y)).collect()
            }
        })
        .collect();
    let levels = prefix_levels(g, &gens);
    let mut s = Search {
        accept,
        g,
        h,
        images: vec![0; gens.len()],
        gens,
        levels,
        candidates,
        phi: vec![0; g.order()],
        stamp: vec![0; h.order()],
        epoch: 0,
        nodes: 0,
        budget,
    };
    match s.run(0) {
        Some(true) => SearchOutcome::Found(EmbeddingWitness {
            source_generators: s.gens.clone(),
            images: s.images.clone(),
        }),
        Some(false) => SearchOutcome::NotFound,
        None => SearchOutcome::BudgetExhausted,
    }
}

/// Searches for an injective homomorphism `g → h` within `budget` nodes.
pub fn find_monomorphism(g: &GroupTable, h: &GroupTable, budget: u64) -> SearchOutcome {
    search(g, h, budget, Mode::Mono, &mut |_| true)
}

/// Like [`find_monomorphism`], but only accepts embeddings whose full
/// element map `phi` satisfies `accept`.
pub fn find_monomorphism_where(
    g: &GroupTable,
    h: &GroupTable,
    budget: u64,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> SearchOutcome {
    search(g, h, budget, Mode::Mono, &mut accept)
}

pub fn find_isomorphism(g: &GroupTable, h: &GroupTable, budget: u64) -> SearchOutcome {
    if g.order() != h.order() || fingerprint(g) != fingerprint(h) {
        return SearchOutcome::NotFound;
    }
    search(g, h, budget, Mode::Iso, &mut |_| true)
}

pub fn is_isomorphic(
    g: &GroupTable,
    h: &GroupTable,
) -> Result<Option<EmbeddingWitness>, MorphismError> {
    match find_isomorphism(g, h, DEFAULT_BUDGET) {
        SearchOutcome::Found(w) => Ok(Some(w)),
        SearchOutcome::NotFound => Ok(None),
        SearchOutcome::BudgetExhausted => Err(MorphismError::BudgetExhausted(DEFAULT_BUDGET)),
    }
}

/// Isomorphism-invariant summary used to reject most non-isomorphic pairs
/// before searching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub invariants: super::StructuralInvariants,
    /// Sorted `(element order, class size, order of the class of the square)`.
    pub class_profile: Vec<(u32, usize, usize)>,
}

pub fn fingerprint(g: &GroupTable) -> Fingerprint {
    let cc = g.conjugacy_classes();
    let mut class_profile: Vec<(u32, usize, usize)> = (0..cc.len())
        .map(|i| {
            let r = cc.representative(i);
            let sq = g.mul(r, r);
            (g.element_order(r), cc.size(i), cc.size(cc.class_of(sq)))
        })
        .collect();
    class_profile.sort_unstable();
    Fingerprint {
        invariants: g.invariants().clone(),
        class_profile,
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn a4_embeds_in_s5() {
        let out = find_monomorphism(&alternating4(), &symmetric(5), DEFAULT_BUDGET);
        let w = out.witness().expect("A4 < S5");
        assert!(w.verify(&alternating4(), &symmetric(5)));
    }

    #[test]
    fn non_embeddings() {
        // Q8 has a unique involution, S4 has no such subgroup of order 8
        assert_eq!(find_monomorphism(&quaternion8(), &symmetric(4), DEFAULT_BUDGET), SearchOutcome::NotFound);
        assert_eq!(find_monomorphism(&cyclic(5), &symmetric(4), DEFAULT_BUDGET), SearchOutcome::NotFound);
        assert_eq!(find_monomorphism(&cyclic(6), &symmetric(4), DEFAULT_BUDGET), SearchOutcome::NotFound);
    }

    #[test]
    fn budget_is_distinct_from_not_found() {
        assert_eq!(
            find_monomorphism(&quaternion8(), &symmetric(4), 1),
            SearchOutcome::BudgetExhausted
        );
    }

    #[test]
    fn isomorphism_tests() {
        assert!(is_isomorphic(&symmetric(3), &symmetric(3)).unwrap().is_some());
        assert!(is_isomorphic(&cyclic(6), &symmetric(3)).unwrap().is_none());
        assert!(is_isomorphic(&dihedral8(), &quaternion8()).unwrap().is_none());
        // D8 on 4 points vs D8 as a subgroup of S4 generated differently
        let other = close_generators_d8_alt();
        let w = is_isomorphic(&dihedral8(), &other).unwrap().unwrap();
        assert!(w.verify(&dihedral8(), &other));
    }

    fn close_generators_d8_alt() -> GroupTable {
        super::super::close_generators(
            4,
            &[perm(4, &[&[0, 2]]), perm(4, &[&[0, 1], &[2, 3]])],
        )
        .unwrap()
    }

    #[test]
    fn witness_rejects_bad_images() {
        let s3 = symmetric(3);
        let w = EmbeddingWitness {
            source_generators: s3.generators().to_vec(),
            images: vec![0, 0],
        };
        assert!(!w.verify(&s3, &s3));
    }
}
