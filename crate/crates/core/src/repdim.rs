//! Minimal faithful representation dimension.
//!
//! A sum of irreducibles is faithful iff every minimal normal subgroup
//! escapes some kernel, so `rd(G)` is a weighted set cover of the minimal
//! normal subgroups by characters, weighted by degree.

use serde::Serialize;
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::group::{GroupTable, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepdimError {
    #[error("abelian rank {rank} differs from representation dimension {rd}")]
    RankMismatch { rank: usize, rd: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulWitness {
    /// Sorted character indices into the table.
    pub characters: Vec<usize>,
    pub total_degree: usize,
    pub kernel_intersection_order: usize,
}

struct Cover {
    degrees: Vec<usize>,
    masks: Vec<u128>,
    full: u128,
    best: usize,
    best_set: Option<Vec<usize>>,
}

impl Cover {
    fn lower_bound(&self, uncovered: u128) -> usize {
        let u = uncovered.count_ones() as usize;
        if u == 0 {
            return 0;
        }
        let mut bound = 0;
        let mut rest = uncovered;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let cheapest = (0..self.masks.len())
                .filter(|&c| self.masks[c] & bit != 0)
                .map(|c| self.degrees[c])
                .min()
                .unwrap_or(usize::MAX);
            bound = bound.max(cheapest);
        }
        // best coverage per unit of degree: ratio c/d maximal
        let (mut bc, mut bd) = (0usize, 1usize);
        for (m, &d) in self.masks.iter().zip(&self.degrees) {
            let c = (m & uncovered).count_ones() as usize;
            if c * bd > bc * d {
                bc = c;
                bd = d;
            }
        }
        if bc > 0 {
            bound = bound.max((u * bd).div_ceil(bc));
        }
        bound
    }

    fn search(&mut self, covered: u128, chosen: &mut Vec<usize>, cost: usize) {
        if covered == self.full {
            let mut set = chosen.clone();
            set.sort_unstable();
            let better = cost < self.best
                || (cost == self.best && self.best_set.as_ref().is_some_and(|b| set < *b));
            if better {
                self.best = cost;
                self.best_set = Some(set);
            }
            return;
        }
        let uncovered = self.full & !covered;
        if cost + self.lower_bound(uncovered) > self.best {
            return;
        }
        let target = uncovered & uncovered.wrapping_neg();
        for c in 0..self.masks.len() {
            if self.masks[c] & target == 0 {
                continue;
            }
            chosen.push(c);
            self.search(covered | self.masks[c], chosen, cost + self.degrees[c]);
            chosen.pop();
        }
    }
}

/// Minimal normal subgroups, in the order of [`GroupTable::normal_subgroups`].
pub fn minimal_normal_subgroups(g: &GroupTable) -> Vec<Subgroup> {
    g.normal_subgroups()
        .into_iter()
        .filter(|n| n.minimal)
        .map(|n| n.subgroup)
        .collect()
}

/// `rd(G)` with the lexicographically least optimal character set.
pub fn representation_dimension(g: &GroupTable, table: &CharacterTable) -> (usize, FaithfulWitness) {
    let minimal = minimal_normal_subgroups(g);
    assert!(minimal.len() <= 128, "too many minimal normal subgroups");
    let full: u128 = if minimal.is_empty() {
        0
    } else {
        u128::MAX >> (128 - minimal.len())
    };
    let masks: Vec<u128> = table
        .kernels
        .iter()
        .map(|k| {
            minimal
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_subgroup_of(k))
                .fold(0u128, |acc, (i, _)| acc | 1 << i)
        })
        .collect();
    let mut cover = Cover {
        degrees: table.degrees.clone(),
        masks,
        full,
        best: g.order() + 1,
        best_set: None,
    };
    cover.search(0, &mut Vec::new(), 0);
    let characters = cover.best_set.expect("the regular representation is faithful");
    let kernel = characters
        .iter()
        .fold(g.whole(), |acc, &c| acc.intersection(&table.kernels[c]));
    (
        cover.best,
        FaithfulWitness {
            total_degree: cover.best,
            kernel_intersection_order: kernel.order(),
            characters,
        },
    )
}

/// For abelian `G`, checks that `rd(G)` equals the rank.
pub fn abelian_rd_check(g: &GroupTable, table: &CharacterTable) -> Result<usize, RepdimError> {
    let rank = g.invariants().rank().expect("abelian group");
    let (rd, _) = representation_dimension(g, table);
    if rd == rank {
        Ok(rank)
    } else {
        Err(RepdimError::RankMismatch { rank, rd })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::realize_str;

    /// Exhaustive minimum over all character subsets, faithfulness decided
    /// by intersecting kernels elementwise.
    fn brute_force(g: &GroupTable, t: &CharacterTable) -> (usize, Vec<usize>) {
        let r = t.len();
        let mut best = (usize::MAX, vec![]);
        for mask in 1u32..(1 << r) {
            let set: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
            let deg: usize = set.iter().map(|&i| t.degrees[i]).sum();
            let faithful = (1..g.order()).all(|x| set.iter().any(|&i| !t.kernels[i].contains(x)));
            if faithful && (deg, &set) < (best.0, &best.1) {
                best = (deg, set);
            }
        }
        best
    }

    fn rd(text: &str) -> usize {
        let g = realize_str(text).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        representation_dimension(&g, &t).0
    }

    #[test]
    fn small_examples() {
        assert_eq!(rd("S(3)"), 2);
        assert_eq!(rd("Q(8)"), 2);
        assert_eq!(rd("C(2)^4"), 4);
        assert_eq!(rd("C(6)"), 1);
        assert_eq!(rd("C(4) x C(4)"), 2);
        assert_eq!(rd("A(4) x A(4)"), 6);
        assert_eq!(rd("S(5)"), 4);
        assert_eq!(rd("PSL(2,7)"), 3);
    }

    #[test]
    fn matches_brute_force() {
        for text in ["S(3)", "D(8)", "Q(8)", "A(4)", "S(4)", "C(3) : C(4) [act a -> a^-1]", "D(8) x C(2)", "C(2)^3", "S(3) x S(3)"] {
            let g = realize_str(text).unwrap();
            let t = CharacterTable::compute(&g).unwrap();
            let (value, witness) = representation_dimension(&g, &t);
            let (bv, bs) = brute_force(&g, &t);
            assert_eq!((value, &witness.characters), (bv, &bs), "{text}");
            assert_eq!(witness.kernel_intersection_order, 1);
        }
    }

    #[test]
    fn abelian_rank_agrees() {
        for text in ["C(2)^4", "C(6)", "C(4) x C(4)", "C(2) x C(6) x C(3)"] {
            let g = realize_str(text).unwrap();
            let t = CharacterTable::compute(&g).unwrap();
            let rank = g.invariants().rank().unwrap();
            assert_eq!(abelian_rd_check(&g, &t), Ok(rank));
        }
    }
}
