//! Recognition of the structural families the inference rules key on.

use serde::Serialize;

use super::invariants::prime_factors;
use super::{GroupTable, Subgroup, INVENTORY_SCOPE};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ShapeTags {
    pub abelian: bool,
    pub cyclic: bool,
    /// `Some(2n)` for the dihedral group of order `2n`, `n ≥ 2`.
    pub dihedral: Option<usize>,
    pub odd_dihedral: bool,
    pub generalized_quaternion: bool,
    pub p_group: Option<u64>,
    /// `Some(q)` when `G ≅ C_q ⋊ (ℤ/q)^×` with the natural action.
    pub full_holomorph: Option<u64>,
}

impl ShapeTags {
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.abelian {
            out.push("abelian".to_string());
        }
        if self.cyclic {
            out.push("cyclic".to_string());
        }
        if let Some(n) = self.dihedral {
            out.push(format!("dihedral({n})"));
        }
        if self.odd_dihedral {
            out.push("odd-dihedral".to_string());
        }
        if self.generalized_quaternion {
            out.push("generalized-quaternion".to_string());
        }
        if let Some(p) = self.p_group {
            out.push(format!("p-group({p})"));
        }
        if let Some(q) = self.full_holomorph {
            out.push(format!("full-holomorph-of-C_q({q})"));
        }
        out
    }
}

pub fn recognize_shape(g: &GroupTable) -> ShapeTags {
    let inv = g.invariants();
    let order = g.order();
    let cyclic = inv.is_abelian() && inv.exponent == order as u64;
    let dihedral = (order >= 4 && order.is_multiple_of(2) && is_dihedral(g)).then_some(order);
    let generalized_quaternion = inv.p_group == Some(2)
        && order >= 8
        && !cyclic
        && inv.element_order_histogram.get(&2) == Some(&1);
    ShapeTags {
        abelian: inv.is_abelian(),
        cyclic,
        dihedral,
        odd_dihedral: dihedral.is_some_and(|d| d / 2 >= 3 && (d / 2) % 2 == 1),
        generalized_quaternion,
        p_group: inv.p_group,
        full_holomorph: holomorph_modulus(g),
    }
}

/// `⟨r, s | rⁿ, s², (rs)²⟩` with `|G| = 2n`.
fn is_dihedral(g: &GroupTable) -> bool {
    let n = g.order() / 2;
    let Some(r) = (0..g.order()).find(|&x| g.element_order(x) as usize == n) else {
        return false;
    };
    let rot = g.closure([r]);
    (0..g.order()).any(|s| {
        !rot.contains(s) && g.element_order(s) == 2 && g.element_order(g.mul(r, s)) == 2
    })
}

pub(crate) fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// The prime power `q` with `|G| = q·φ(q)` such that `G` has a cyclic,
/// self-centralizing normal subgroup of order `q` with a complement.
fn holomorph_modulus(g: &GroupTable) -> Option<u64> {
    let order = g.order() as u64;
    let q = (2..=order).find(|&q| prime_factors(q).len() == 1 && q * euler_phi(q) == order)?;
    let normals = g.normal_subgroups();
    let n = normals.iter().map(|ns| &ns.subgroup).find(|n| {
        n.order() as u64 == q
            && n.elements().iter().any(|&x| g.element_order(x) as u64 == q)
            && self_centralizing(g, n)
    })?;
    has_complement(g, n).then_some(q)
}

fn self_centralizing(g: &GroupTable, n: &Subgroup) -> bool {
    let elems = n.elements();
    (0..g.order())
        .filter(|&y| elems.iter().all(|&x| g.mul(x, y) == g.mul(y, x)))
        .all(|y| n.contains(y))
}

fn has_complement(g: &GroupTable, n: &Subgroup) -> bool {
    let k = g.order() / n.order();
    if g.order() <= INVENTORY_SCOPE {
        if let Ok(all) = g.all_subgroups() {
            return all
                .iter()
                .any(|h| h.order() == k && h.intersection(n).is_trivial());
        }
    }
    // complements of a cyclic self-centralizing subgroup are abelian of
    // rank at most two
    (0..g.order()).any(|x| {
        (x..g.order()).any(|y| {
            let h = Subgroup::from_members(g.closure([x, y]));
            h.order() == k && h.intersection(n).is_trivial()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;

    #[test]
    fn shapes_of_small_groups() {
        let s3 = recognize_shape(&symmetric(3));
        assert_eq!(s3.dihedral, Some(6));
        assert!(s3.odd_dihedral);
        assert_eq!(s3.full_holomorph, Some(3));

        let q8 = recognize_shape(&quaternion8());
        assert!(q8.generalized_quaternion);
        assert_eq!(q8.p_group, Some(2));
        assert_eq!(q8.dihedral, None);
        assert_eq!(q8.full_holomorph, None);

        let d8 = recognize_shape(&dihedral8());
        assert_eq!(d8.dihedral, Some(8));
        assert!(!d8.odd_dihedral);
        assert_eq!(d8.full_holomorph, Some(4));

        let c6 = recognize_shape(&cyclic(6));
        assert!(c6.cyclic && c6.abelian);
        assert_eq!(c6.dihedral, None);

        assert_eq!(recognize_shape(&alternating4()).labels(), Vec::<String>::new());

        // exponent 12 = order, but not cyclic
        let dic12 = crate::dsl::realize_str("C(3) : C(4) [act a -> a^-1]").unwrap();
        assert!(!recognize_shape(&dic12).cyclic);
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(1), 1);
    }
}
