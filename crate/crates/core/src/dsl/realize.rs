use super::ast::{ActionClause, ActionSpec, AtomKind, Construction, Span, Word};
use super::{parse_construction, DslError};
use crate::group::morphism::extend_homomorphism;
use crate::group::{close_generators, GroupTable};
use crate::perm::Perm;

pub fn realize_str(text: &str) -> Result<GroupTable, DslError> {
    realize_construction(&parse_construction(text)?)
}

pub fn realize_construction(c: &Construction) -> Result<GroupTable, DslError> {
    let (degree, gens) = generators(c)?;
    Ok(close_generators(degree, &gens)?)
}

fn semantic<T>(span: Span, message: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Semantic {
        span,
        message: message.into(),
    })
}

fn cycle_perm(degree: usize, cycles: &[Vec<usize>]) -> Perm {
    Perm::from_cycles(degree, cycles).expect("constructed cycles are disjoint")
}

fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Perm {
    Perm::from_images((0..degree).map(|i| f(i) as u32).collect()).expect("constructed map is a bijection")
}

/// Point count and generator list of a construction, in the generator
/// order that action blocks refer to.
fn generators(c: &Construction) -> Result<(usize, Vec<Perm>), DslError> {
    match c {
        Construction::Atom { kind, params, span } => atom(*kind, params, *span),
        Construction::Power { base, exponent, .. } => {
            let part = generators(base)?;
            Ok(disjoint(&vec![part; *exponent as usize]))
        }
        Construction::Direct { factors, .. } => {
            let parts = factors.iter().map(generators).collect::<Result<Vec<_>, _>>()?;
            Ok(disjoint(&parts))
        }
        Construction::Perms {
            degree, generators, ..
        } => {
            let gens = generators
                .iter()
                .map(|g| {
                    let cycles: Vec<Vec<usize>> =
                        g.iter().map(|c| c.iter().map(|p| p - 1).collect()).collect();
                    Perm::from_cycles(*degree, &cycles)
                })
                .collect::<Result<Vec<_>, _>>();
            match gens {
                Ok(gens) => Ok((*degree, gens)),
                Err(e) => semantic(c.span(), e.to_string()),
            }
        }
        Construction::Semidirect {
            normal,
            actor,
            action,
            ..
        } => semidirect(normal, actor, action),
    }
}

fn disjoint(parts: &[(usize, Vec<Perm>)]) -> (usize, Vec<Perm>) {
    let total: usize = parts.iter().map(|p| p.0).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for (degree, part) in parts {
        gens.extend(part.iter().map(|g| g.embed(offset, total)));
        offset += degree;
    }
    (total, gens)
}

fn atom(kind: AtomKind, params: &[u64], span: Span) -> Result<(usize, Vec<Perm>), DslError> {
    let n = params[0] as usize;
    match kind {
        AtomKind::C => Ok(if n == 1 {
            (1, vec![Perm::identity(1)])
        } else {
            (n, vec![cycle_perm(n, &[(0..n).collect()])])
        }),
        AtomKind::D => {
            if n % 2 == 1 {
                return semantic(span, "dihedral order must be even");
            }
            let k = n / 2;
            Ok(match k {
                1 => (2, vec![cycle_perm(2, &[vec![0, 1]])]),
                2 => (4, vec![cycle_perm(4, &[vec![0, 1]]), cycle_perm(4, &[vec![2, 3]])]),
                _ => (
                    k,
                    vec![cycle_perm(k, &[(0..k).collect()]), from_fn(k, |i| (k - i) % k)],
                ),
            })
        }
        AtomKind::Q => {
            if !n.is_multiple_of(4) {
                return semantic(span, "dicyclic order must be a multiple of 4");
            }
            // x^i y^j ↦ i + m j with x of order m = n/2, y² = x^{m/2}, y⁻¹xy = x⁻¹
            let m = n / 2;
            let x = from_fn(n, |e| {
                let (i, j) = (e % m, e / m);
                if j == 0 { (i + 1) % m } else { (i + m - 1) % m + m }
            });
            let y = from_fn(n, |e| {
                let (i, j) = (e % m, e / m);
                if j == 0 { i + m } else { (i + m / 2) % m }
            });
            Ok((n, vec![x, y]))
        }
        AtomKind::QD => {
            if n < 16 || !n.is_power_of_two() {
                return semantic(span, "quasidihedral order must be a power of 2, at least 16");
            }
            // y x y = x^{m/2 - 1}
            let m = n / 2;
            let x = from_fn(n, |e| {
                let (i, j) = (e % m, e / m);
                if j == 0 { (i + 1) % m } else { (i + m / 2 - 1) % m + m }
            });
            let y = from_fn(n, |e| (e + m) % n);
            Ok((n, vec![x, y]))
        }
        AtomKind::S => Ok(match n {
            1 => (1, vec![Perm::identity(1)]),
            2 => (2, vec![cycle_perm(2, &[vec![0, 1]])]),
            _ => (n, vec![cycle_perm(n, &[(0..n).collect()]), cycle_perm(n, &[vec![0, 1]])]),
        }),
        AtomKind::A => Ok(match n {
            1 | 2 => (n, vec![Perm::identity(n)]),
            3 => (3, vec![cycle_perm(3, &[vec![0, 1, 2]])]),
            _ => {
                let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
                (n, vec![cycle_perm(n, &[vec![0, 1, 2]]), cycle_perm(n, &[long])])
            }
        }),
        AtomKind::SL | AtomKind::GL | AtomKind::PSL => linear(kind, n, params[1], span),
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn primitive_root(q: u64) -> u64 {
    (1..q)
        .find(|&g| (1..q - 1).all(|k| pow_mod(g, k, q) != 1))
        .unwrap_or(1)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Linear groups over a prime field, acting on nonzero row vectors (or on
/// projective points for `PSL`).
fn linear(kind: AtomKind, n: usize, q: u64, span: Span) -> Result<(usize, Vec<Perm>), DslError> {
    if !is_prime(q) {
        return semantic(span, "only prime fields are supported");
    }
    if n > 4 || (q as usize).pow(n as u32) > 4096 {
        return semantic(span, "vector space too large");
    }
    let size = (q as usize).pow(n as u32);
    let decode = |mut v: usize| -> Vec<u64> {
        (0..n)
            .map(|_| {
                let c = v as u64 % q;
                v /= q as usize;
                c
            })
            .collect()
    };
    let encode = |c: &[u64]| -> usize { c.iter().rev().fold(0, |acc, &x| acc * q as usize + x as usize) };
    let apply = |v: &[u64], m: &[Vec<u64>]| -> Vec<u64> {
        (0..n)
            .map(|j| (0..n).map(|i| v[i] * m[i][j]).sum::<u64>() % q)
            .collect()
    };
    let identity = |i: usize, j: usize| u64::from(i == j);
    let mut mats: Vec<Vec<Vec<u64>>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mats.push((0..n).map(|r| (0..n).map(|c| identity(r, c) + u64::from(r == i && c == j)).collect()).collect());
            }
        }
    }
    if kind == AtomKind::GL && q > 2 {
        let w = primitive_root(q);
        mats.push((0..n).map(|r| (0..n).map(|c| if r == 0 && c == 0 { w } else { identity(r, c) }).collect()).collect());
    }
    // normalized representatives: first nonzero coordinate 1
    let points: Vec<usize> = (1..size)
        .filter(|&v| kind != AtomKind::PSL || decode(v).iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let mut where_is = vec![usize::MAX; size];
    for (k, &v) in points.iter().enumerate() {
        where_is[v] = k;
    }
    let normalize = |c: Vec<u64>| -> usize {
        if kind != AtomKind::PSL {
            return encode(&c);
        }
        let lead = *c.iter().find(|&&x| x != 0).expect("nonzero vector");
        let inv = pow_mod(lead, q - 2, q);
        encode(&c.iter().map(|x| x * inv % q).collect::<Vec<_>>())
    };
    let degree = points.len();
    let mut gens: Vec<Perm> = mats
        .iter()
        .map(|m| from_fn(degree, |k| where_is[normalize(apply(&decode(points[k]), m))]))
        .collect();
    if gens.is_empty() {
        gens.push(Perm::identity(degree));
    }
    Ok((degree, gens))
}

fn word_value(n: &GroupTable, word: &Word, span: Span) -> Result<usize, DslError> {
    let gens = n.generators();
    let mut acc = 0;
    for &(g, e) in &word.0 {
        let Some(&x) = gens.get(g) else {
            return semantic(span, format!("normal part has no generator {}", super::ast::generator_name(g)));
        };
        let k = e.rem_euclid(n.element_order(x) as i64) as u64;
        acc = n.mul(acc, n.pow(x, k));
    }
    Ok(acc)
}

fn clause_images(n: &GroupTable, clause: &ActionClause, span: Span) -> Result<Vec<usize>, DslError> {
    let ngens = n.generators().len();
    match clause {
        ActionClause::Act(maps) => {
            let mut images = n.generators().to_vec();
            for (g, w) in maps {
                if *g >= ngens {
                    return semantic(span, format!("normal part has no generator {}", super::ast::generator_name(*g)));
                }
                images[*g] = word_value(n, w, span)?;
            }
            Ok(images)
        }
        ActionClause::Mat(rows) => {
            if rows.len() != ngens {
                return semantic(
                    span,
                    format!("matrix has size {} but the normal part has {ngens} generators", rows.len()),
                );
            }
            rows.iter()
                .map(|row| word_value(n, &Word(row.iter().copied().enumerate().collect()), span))
                .collect()
        }
    }
}

fn semidirect(
    normal: &Construction,
    actor: &Construction,
    action: &ActionSpec,
) -> Result<(usize, Vec<Perm>), DslError> {
    let span = action.span;
    let n = realize_construction(normal)?;
    let (hdeg, hgens) = generators(actor)?;
    let h = close_generators(hdeg, &hgens)?;
    if action.clauses.len() != hgens.len() {
        return semantic(
            span,
            format!(
                "{} action clause(s) for an acting group with {} generator(s)",
                action.clauses.len(),
                hgens.len()
            ),
        );
    }
    let not_aut = |detail: String| DslError::ActionNotAutomorphism { span, detail };
    let order = n.order();
    let mut alphas = Vec::new();
    for (k, clause) in action.clauses.iter().enumerate() {
        let images = clause_images(&n, clause, span)?;
        let phi = extend_homomorphism(&n, n.generators(), &n, &images)
            .ok_or_else(|| not_aut(format!("clause {} does not define an endomorphism", k + 1)))?;
        let alpha = Perm::from_images(phi.iter().map(|&x| x as u32).collect())
            .map_err(|_| not_aut(format!("clause {} is not bijective", k + 1)))?;
        alphas.push(alpha);
    }
    let auts = close_generators(order, &alphas)?;
    let alpha_idx: Vec<usize> = alphas.iter().map(|a| auts.index_of(a).expect("generator")).collect();
    let hom = extend_homomorphism(&h, h.generators(), &auts, &alpha_idx)
        .ok_or_else(|| not_aut("generator images do not respect the acting group's relations".into()))?;
    let faithful = hom.iter().filter(|&&y| y == 0).count() == 1;

    let rho = n
        .generators()
        .iter()
        .map(|&g| from_fn(order, |x| n.mul(x, g)));
    if faithful {
        let mut gens: Vec<Perm> = rho.collect();
        gens.extend(alphas);
        Ok((order, gens))
    } else {
        let total = order + hdeg;
        let mut gens: Vec<Perm> = rho.map(|p| p.embed(0, total)).collect();
        for (a, hg) in alphas.iter().zip(&hgens) {
            let hx = hg.embed(order, total);
            let ax = a.embed(0, total);
            gens.push(ax.then(&hx));
        }
        Ok((total, gens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(text: &str) -> usize {
        realize_str(text).unwrap().order()
    }

    #[test]
    fn atom_orders() {
        assert_eq!(order("C(1)"), 1);
        assert_eq!(order("C(12)"), 12);
        assert_eq!(order("D(2)"), 2);
        assert_eq!(order("D(4)"), 4);
        assert_eq!(order("D(18)"), 18);
        assert_eq!(order("Q(8)"), 8);
        assert_eq!(order("Q(12)"), 12);
        assert_eq!(order("Q(32)"), 32);
        assert_eq!(order("QD(16)"), 16);
        assert_eq!(order("S(5)"), 120);
        assert_eq!(order("A(4)"), 12);
        assert_eq!(order("A(5)"), 60);
        assert_eq!(order("SL(2,3)"), 24);
        assert_eq!(order("GL(2,3)"), 48);
        assert_eq!(order("PSL(2,7)"), 168);
        assert_eq!(order("SL(2,5)"), 120);
    }

    #[test]
    fn quaternion_shapes() {
        let q8 = realize_str("Q(8)").unwrap();
        assert_eq!(q8.invariants().element_order_histogram.get(&2), Some(&1));
        let q12 = realize_str("Q(12)").unwrap();
        assert_eq!(q12.invariants().center_order, 2);
        let qd = realize_str("QD(16)").unwrap();
        assert_eq!(qd.invariants().element_order_histogram.get(&2), Some(&5));
    }

    #[test]
    fn products_multiply_orders() {
        assert_eq!(order("D(8) x S(3)"), 48);
        assert_eq!(order("C(2)^4"), 16);
        assert_eq!(order("(C(3) x C(3))^2"), 81);
    }

    #[test]
    fn semidirect_realizations() {
        assert_eq!(order("C(7) : C(3) [act a -> a^2]"), 21);
        assert_eq!(order("C(13) : C(3) [act a -> a^3]"), 39);
        assert_eq!(order("C(2)^4 : C(3) [mat 0100 1100 0001 0011]"), 48);
        assert_eq!(order("C(3) : C(4) [act a -> a^-1]"), 12);
        // trivial action: direct product, realized with the extra points
        let g = realize_str("C(3) : C(2) [act]").unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
    }

    #[test]
    fn rejects_non_automorphisms() {
        assert!(matches!(
            realize_str("C(6) : C(2) [act a -> a^2]"),
            Err(DslError::ActionNotAutomorphism { .. })
        ));
        // a -> a^2 has order 3 in Aut(C7), incompatible with C2
        assert!(matches!(
            realize_str("C(7) : C(2) [act a -> a^2]"),
            Err(DslError::ActionNotAutomorphism { .. })
        ));
        assert!(matches!(
            realize_str("C(7) : C(2) [act a -> a^-1; act]"),
            Err(DslError::Semantic { .. })
        ));
    }
}
