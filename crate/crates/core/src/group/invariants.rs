use std::collections::BTreeMap;

use super::GroupTable;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructuralInvariants {
    pub order: usize,
    pub exponent: u64,
    pub element_order_histogram: BTreeMap<u32, usize>,
    /// Sorted ascending.
    pub class_sizes: Vec<usize>,
    /// Prime-power cyclic factors, sorted ascending; empty unless abelian.
    pub abelian_invariants: Vec<u64>,
    pub center_order: usize,
    pub derived_order: usize,
    pub p_group: Option<u64>,
}

impl StructuralInvariants {
    pub(super) fn compute(g: &GroupTable) -> Self {
        let mut hist = BTreeMap::new();
        for x in 0..g.order() {
            *hist.entry(g.element_order(x)).or_insert(0) += 1;
        }
        let cc = g.conjugacy_classes();
        let mut class_sizes: Vec<usize> = cc.iter().map(<[usize]>::len).collect();
        class_sizes.sort_unstable();
        let derived_order = g.derived_subgroup().order();
        let abelian_invariants = if derived_order == 1 {
            abelian_invariants_from_orders(&hist)
        } else {
            Vec::new()
        };
        let primes = prime_factors(g.order() as u64);
        StructuralInvariants {
            order: g.order(),
            exponent: g.exponent(),
            element_order_histogram: hist,
            class_sizes,
            abelian_invariants,
            center_order: g.center().order(),
            derived_order,
            p_group: (primes.len() == 1).then(|| primes[0]),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.derived_order == 1
    }

    /// Minimal number of generators, for abelian groups.
    pub fn rank(&self) -> Option<usize> {
        self.is_abelian().then(|| abelian_rank(&self.abelian_invariants))
    }
}

/// Maximal number of prime-power factors sharing one prime.
pub fn abelian_rank(invariants: &[u64]) -> usize {
    let mut per_prime: BTreeMap<u64, usize> = BTreeMap::new();
    for &q in invariants {
        *per_prime.entry(prime_factors(q)[0]).or_insert(0) += 1;
    }
    per_prime.values().copied().max().unwrap_or(0)
}

/// Primary invariants of an abelian group from its element-order counts.
/// With `Ω_k` the elements of order dividing `p^k`, the number of cyclic
/// factors of order at least `p^k` is `log_p |Ω_k / Ω_{k-1}|`.
pub(crate) fn abelian_invariants_from_orders(hist: &BTreeMap<u32, usize>) -> Vec<u64> {
    let order: usize = hist.values().sum();
    let mut out = Vec::new();
    for p in prime_factors(order as u64) {
        let mut at_least = Vec::new();
        let mut prev = 1usize;
        let mut pk = p;
        loop {
            let omega: usize = hist
                .iter()
                .filter(|(&o, _)| pk % o as u64 == 0)
                .map(|(_, &c)| c)
                .sum();
            if omega == prev {
                break;
            }
            at_least.push(log_base(p, (omega / prev) as u64));
            prev = omega;
            pk *= p;
        }
        // at_least[k-1] = #factors of order ≥ p^k
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k] - next {
                out.push(p.pow(k as u32 + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

fn log_base(p: u64, mut n: u64) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::close_generators;

    #[test]
    fn abelian_ranks() {
        let c2cube = close_generators(
            6,
            &[perm(6, &[&[0, 1]]), perm(6, &[&[2, 3]]), perm(6, &[&[4, 5]])],
        )
        .unwrap();
        let inv = c2cube.invariants();
        assert_eq!(inv.abelian_invariants, vec![2, 2, 2]);
        assert_eq!(inv.rank(), Some(3));
        let c6 = cyclic(6);
        assert_eq!(c6.invariants().abelian_invariants, vec![2, 3]);
        assert_eq!(c6.invariants().rank(), Some(1));
        let c4c2 = close_generators(6, &[perm(6, &[&[0, 1, 2, 3]]), perm(6, &[&[4, 5]])]).unwrap();
        assert_eq!(c4c2.invariants().abelian_invariants, vec![2, 4]);
    }

    #[test]
    fn dihedral_invariants() {
        let inv = dihedral8().invariants().clone();
        assert_eq!(inv.center_order, 2);
        assert_eq!(inv.derived_order, 2);
        assert!(inv.abelian_invariants.is_empty());
        assert_eq!(inv.p_group, Some(2));
        assert_eq!(inv.class_sizes.iter().sum::<usize>(), 8);
        assert_eq!(inv.element_order_histogram.values().sum::<usize>(), 8);
        assert_eq!(symmetric(3).invariants().p_group, None);
    }
}
