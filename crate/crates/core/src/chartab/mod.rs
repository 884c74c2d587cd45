//! Irreducible characters by the Dixon–Schneider method over `𝔽_p`.
//!
//! Central characters `ωᵢ = |Cᵢ|·χ(gᵢ)/χ(1)` are the common eigenvectors of
//! the class matrices `(M_j)[i][k] = a[j][i][k]`. With `p ≡ 1 (mod exp G)`
//! every eigenvalue lies in `𝔽_p` and the eigenspaces split into lines.
//! Degrees come from `Σ_k ω_k ω_{k*} / |C_k| = |G| / χ(1)²`; eigenvalue
//! multiplicities come from a discrete Fourier inversion over `⟨g⟩`, which
//! lifts exactly because every multiplicity is smaller than `p`.

mod modp;

use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{GroupTable, Subgroup};

pub use modp::{is_prime, Fp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartabError {
    #[error("common eigenspaces do not split into lines modulo {p}")]
    SplittingFailure { p: u64 },
    #[error("eigenvalue multiplicities of character {character} at class {class} do not lift")]
    LiftInconsistency { character: usize, class: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DixonPrime {
    pub p: u64,
    /// Element of multiplicative order `root_order` modulo `p`.
    pub primitive_root: u64,
    pub root_order: u64,
}

/// Smallest prime `p ≡ 1 (mod exp G)` with `p > 2√|G|`.
pub fn dixon_prime(g: &GroupTable) -> DixonPrime {
    let e = g.exponent();
    let n = g.order() as u64;
    let p = (1..)
        .map(|k| k * e + 1)
        .find(|&p| p * p > 4 * n && is_prime(p))
        .expect("Dirichlet");
    let f = Fp { p };
    let root = f.pow(f.primitive_root(), (p - 1) / e);
    DixonPrime {
        p,
        primitive_root: root,
        root_order: e,
    }
}

/// `a[i][j][k] = #{(x, y) : x ∈ Cᵢ, y ∈ Cⱼ, xy = g_k}` with `g_k` the class
/// representative.
pub fn class_algebra_constants(g: &GroupTable) -> Vec<Vec<Vec<u64>>> {
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let gk = cc.representative(k);
        for x in 0..g.order() {
            let y = g.mul(g.inv(x), gk);
            a[cc.class_of(x)][cc.class_of(y)][k] += 1;
        }
    }
    a
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub prime: DixonPrime,
    pub class_sizes: Vec<usize>,
    /// Order of the class representatives.
    pub class_orders: Vec<u32>,
    /// `values[i][j] = χᵢ(gⱼ) mod p`.
    pub values: Vec<Vec<u64>>,
    pub degrees: Vec<usize>,
    /// `multiplicities[i][j][t]` counts eigenvalue `ζ^t` of `χᵢ(gⱼ)`, where `ζ`
    /// is the chosen root of unity of order `class_orders[j]`.
    pub multiplicities: Vec<Vec<Vec<usize>>>,
    /// Classes in the kernel of each character.
    pub kernel_classes: Vec<Vec<usize>>,
    pub kernels: Vec<Subgroup>,
}

impl CharacterTable {
    pub fn compute(g: &GroupTable) -> Result<CharacterTable, ChartabError> {
        let prime = dixon_prime(g);
        let values = irreducible_characters_mod_p(g, &prime)?;
        let degrees: Vec<usize> = values.iter().map(|row| row[0] as usize).collect();
        let cc = g.conjugacy_classes();
        let multiplicities = lift_eigenvalue_multiplicities(g, &prime, &values, &degrees)?;
        let kernel_classes: Vec<Vec<usize>> = multiplicities
            .iter()
            .zip(&degrees)
            .map(|(mu, &d)| (0..cc.len()).filter(|&j| mu[j][0] == d).collect())
            .collect();
        let kernels = kernel_classes
            .iter()
            .map(|cls| {
                let mut members = crate::group::ElementSet::new(g.order());
                for &j in cls {
                    for &x in cc.class(j) {
                        members.insert(x);
                    }
                }
                Subgroup::from_members(members)
            })
            .collect();
        Ok(CharacterTable {
            prime,
            class_sizes: (0..cc.len()).map(|j| cc.size(j)).collect(),
            class_orders: (0..cc.len()).map(|j| g.element_order(cc.representative(j))).collect(),
            values,
            degrees,
            multiplicities,
            kernel_classes,
            kernels,
        })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Degrees and kernel orders, one character per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# p={} classes={}", self.prime.p, self.len());
        for (i, (d, k)) in self.degrees.iter().zip(&self.kernels).enumerate() {
            let _ = writeln!(out, "chi{} degree={} kernel={}", i + 1, d, k.order());
        }
        out
    }
}

/// Splits `𝔽_p^r` into common eigenlines of the class matrices and
/// normalizes them to character values. Rows are sorted by degree, then by
/// the value vector.
pub fn irreducible_characters_mod_p(
    g: &GroupTable,
    prime: &DixonPrime,
) -> Result<Vec<Vec<u64>>, ChartabError> {
    let f = Fp { p: prime.p };
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let a = class_algebra_constants(g);
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|k| u64::from(i == k)).collect())
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split(f, &a[j], basis)?);
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(ChartabError::SplittingFailure { p: prime.p });
    }
    let n = g.order() as u64;
    let inverse_class: Vec<usize> = (0..r)
        .map(|k| cc.class_of(g.inv(cc.representative(k))))
        .collect();
    let mut rows = Vec::with_capacity(r);
    for space in spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(ChartabError::SplittingFailure { p: prime.p });
        }
        let s = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, s)).collect();
        let mut sum = 0;
        for k in 0..r {
            let term = f.mul(f.mul(omega[k], omega[inverse_class[k]]), f.inv(cc.size(k) as u64 % f.p));
            sum = f.add(sum, term);
        }
        if sum == 0 {
            return Err(ChartabError::SplittingFailure { p: prime.p });
        }
        let d2 = f.mul(n % f.p, f.inv(sum));
        let d = (1..)
            .take_while(|d: &u64| d * d <= n)
            .find(|&d| (d * d) % f.p == d2)
            .ok_or(ChartabError::SplittingFailure { p: prime.p })?;
        let row: Vec<u64> = (0..r)
            .map(|k| f.mul(f.mul(d, omega[k]), f.inv(cc.size(k) as u64 % f.p)))
            .collect();
        rows.push(row);
    }
    rows.sort();
    rows.sort_by_key(|row| row[0]);
    Ok(rows)
}

/// Splits an invariant subspace (basis in reduced echelon form) into the
/// eigenspaces of one class matrix.
fn split(f: Fp, a_j: &[Vec<u64>], basis: Vec<Vec<u64>>) -> Result<Vec<Vec<Vec<u64>>>, ChartabError> {
    let r = a_j.len();
    let d = basis.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).expect("nonzero basis vector"))
        .collect();
    // image of each basis vector under M_j, (M_j)[i][k] = a[j][i][k]
    let images: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| {
            (0..r)
                .map(|i| (0..r).fold(0, |acc, k| f.add(acc, f.mul(a_j[i][k] % f.p, b[k]))))
                .collect()
        })
        .collect();
    // restricted[s][t] = coordinate s of M_j b_t
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|s| (0..d).map(|t| images[t][pivots[s]]).collect())
        .collect();
    let mut out = Vec::new();
    let mut found = 0;
    for lambda in 0..f.p {
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|s| {
                (0..d)
                    .map(|t| if s == t { f.sub(restricted[s][t], lambda) } else { restricted[s][t] })
                    .collect()
            })
            .collect();
        let ns = f.null_space(&shifted);
        if ns.is_empty() {
            continue;
        }
        found += ns.len();
        let mut sub: Vec<Vec<u64>> = ns
            .iter()
            .map(|c| {
                (0..r)
                    .map(|k| (0..d).fold(0, |acc, t| f.add(acc, f.mul(c[t], basis[t][k]))))
                    .collect()
            })
            .collect();
        f.rref(&mut sub);
        out.push(sub);
        if found == d {
            break;
        }
    }
    if found != d {
        return Err(ChartabError::SplittingFailure { p: f.p });
    }
    Ok(out)
}

/// `μ_t = (1/m) Σ_s χ(g^s) ζ^{-st}` for each character and class.
pub fn lift_eigenvalue_multiplicities(
    g: &GroupTable,
    prime: &DixonPrime,
    values: &[Vec<u64>],
    degrees: &[usize],
) -> Result<Vec<Vec<Vec<usize>>>, ChartabError> {
    let f = Fp { p: prime.p };
    let cc = g.conjugacy_classes();
    let mut out = Vec::with_capacity(values.len());
    for (i, row) in values.iter().enumerate() {
        let mut per_class = Vec::with_capacity(cc.len());
        for j in 0..cc.len() {
            let x = cc.representative(j);
            let m = g.element_order(x) as u64;
            let zeta = f.pow(prime.primitive_root, prime.root_order / m);
            let zeta_inv = f.inv(zeta);
            let powers: Vec<u64> = {
                let mut acc = 0;
                (0..m)
                    .map(|_| {
                        let v = row[cc.class_of(acc)];
                        acc = g.mul(acc, x);
                        v
                    })
                    .collect()
            };
            let m_inv = f.inv(m % f.p);
            let mut mu = Vec::with_capacity(m as usize);
            for t in 0..m {
                let step = f.pow(zeta_inv, t);
                let mut sum = 0;
                let mut w = 1;
                for &v in &powers {
                    sum = f.add(sum, f.mul(v, w));
                    w = f.mul(w, step);
                }
                let val = f.mul(sum, m_inv);
                if val as usize > degrees[i] {
                    return Err(ChartabError::LiftInconsistency { character: i, class: j });
                }
                mu.push(val as usize);
            }
            if mu.iter().sum::<usize>() != degrees[i] {
                return Err(ChartabError::LiftInconsistency { character: i, class: j });
            }
            per_class.push(mu);
        }
        out.push(per_class);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::realize_str;

    fn table(text: &str) -> (GroupTable, CharacterTable) {
        let g = realize_str(text).unwrap();
        let t = CharacterTable::compute(&g).unwrap();
        (g, t)
    }

    #[test]
    fn dixon_primes() {
        assert_eq!(dixon_prime(&realize_str("S(3)").unwrap()).p, 7);
        assert_eq!(dixon_prime(&realize_str("Q(8)").unwrap()).p, 13);
        assert_eq!(dixon_prime(&realize_str("C(2)").unwrap()).p, 3);
        let dp = dixon_prime(&realize_str("C(1)").unwrap());
        assert_eq!(dp.p, 3);
    }

    #[test]
    fn class_constants_count() {
        let g = realize_str("S(3)").unwrap();
        let a = class_algebra_constants(&g);
        let cc = g.conjugacy_classes();
        // classes: identity, transpositions (order 2), 3-cycles
        assert_eq!(g.element_order(cc.representative(1)), 2);
        assert_eq!(a[1][1][0], 3);
        assert_eq!(a[1][1][2], 3);
        assert_eq!(a[1][1][1], 0);
        for i in 0..cc.len() {
            for j in 0..cc.len() {
                let total: u64 = (0..cc.len()).map(|k| a[i][j][k] * cc.size(k) as u64).sum();
                assert_eq!(total, (cc.size(i) * cc.size(j)) as u64);
            }
        }
        let trivial = realize_str("C(1)").unwrap();
        assert_eq!(class_algebra_constants(&trivial), vec![vec![vec![1]]]);
    }

    #[test]
    fn degrees_of_small_groups() {
        assert_eq!(table("S(3)").1.degrees, vec![1, 1, 2]);
        assert_eq!(table("Q(8)").1.degrees, vec![1, 1, 1, 1, 2]);
        assert_eq!(table("A(4)").1.degrees, vec![1, 1, 1, 3]);
        assert_eq!(table("S(5)").1.degrees, vec![1, 1, 4, 4, 5, 5, 6]);
        assert_eq!(table("PSL(2,7)").1.degrees, vec![1, 3, 3, 6, 7, 8]);
    }

    #[test]
    fn s3_multiplicities_and_kernels() {
        let (g, t) = table("S(3)");
        let cc = g.conjugacy_classes();
        let transposition = (0..cc.len()).find(|&j| t.class_orders[j] == 2).unwrap();
        let three_cycle = (0..cc.len()).find(|&j| t.class_orders[j] == 3).unwrap();
        // sign character: eigenvalue −1 at a transposition
        assert_eq!(t.multiplicities[1][transposition], vec![0, 1]);
        assert_eq!(t.kernels[1].order(), 3);
        // 2-dimensional character: both primitive cube roots at a 3-cycle
        assert_eq!(t.multiplicities[2][three_cycle], vec![0, 1, 1]);
        assert_eq!(t.kernels[2].order(), 1);
        assert_eq!(t.kernels[0].order(), 6);
    }

    #[test]
    fn q8_faithful_character() {
        let (_, t) = table("Q(8)");
        assert_eq!(t.kernels[4].order(), 1);
        assert_eq!(t.kernels[0].order(), 8);
        assert!(t.kernels[1..4].iter().all(|k| k.order() == 4));
    }

    #[test]
    fn dump_format() {
        let (_, t) = table("S(3)");
        assert_eq!(
            t.dump(),
            "# p=7 classes=3\nchi1 degree=1 kernel=6\nchi2 degree=1 kernel=3\nchi3 degree=2 kernel=1\n"
        );
    }
}
