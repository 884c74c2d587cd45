//! Membership and exclusion checks against Duncan's classification of
//! finite groups of essential dimension two.
//!
//! The infinite torus `T = (ℂ*)²` is replaced by its `m`-torsion
//! `(ℤ/m)²`, so an overgroup is the affine group `(ℤ/m)² ⋊ 𝒢` acting on
//! row vectors `v ↦ v·A + b`. Exclusion never relies on search
//! exhaustion in these families; it only uses the necessary condition that
//! `N = G ∩ T` is a normal abelian subgroup of rank at most two on which
//! `G/N ↪ 𝒢` acts through the matrices.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::realize_str;
use crate::group::morphism::{extend_homomorphism, find_monomorphism, find_monomorphism_where, EmbeddingWitness, SearchOutcome};
use crate::group::{ElementSet, GroupError, GroupTable, Subgroup, MAX_ORDER};
use crate::perm::{gcd, Perm};

pub type Mat2 = [[i64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DuncanFamily {
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
    #[serde(rename = "iv")]
    Iv,
    #[serde(rename = "v")]
    V,
}

impl DuncanFamily {
    pub const ALL: [DuncanFamily; 4] = [DuncanFamily::Ii, DuncanFamily::Iii, DuncanFamily::Iv, DuncanFamily::V];

    pub fn label(self) -> &'static str {
        match self {
            DuncanFamily::Ii => "ii",
            DuncanFamily::Iii => "iii",
            DuncanFamily::Iv => "iv",
            DuncanFamily::V => "v",
        }
    }

    /// Generators of the actor group 𝒢₁ ≅ D₁₂, 𝒢₂ ≅ D₈, 𝒢₃ ≅ S₃, 𝒢₄ ≅ S₃.
    pub fn generators(self) -> [Mat2; 2] {
        match self {
            DuncanFamily::Ii => [[[1, -1], [1, 0]], [[0, 1], [1, 0]]],
            DuncanFamily::Iii => [[[-1, 0], [0, 1]], [[0, 1], [1, 0]]],
            DuncanFamily::Iv => [[[0, -1], [1, -1]], [[0, -1], [-1, 0]]],
            DuncanFamily::V => [[[0, -1], [1, -1]], [[0, 1], [1, 0]]],
        }
    }

    /// Primes that may not divide `|G ∩ T|`.
    pub fn forbidden_primes(self) -> &'static [u64] {
        match self {
            DuncanFamily::Ii => &[2, 3],
            DuncanFamily::Iii => &[2],
            DuncanFamily::Iv | DuncanFamily::V => &[3],
        }
    }

    pub fn allows(self, n: u64) -> bool {
        self.forbidden_primes().iter().all(|p| !n.is_multiple_of(*p))
    }

    /// All matrices of the actor group, identity first, in BFS order.
    pub fn matrices(self) -> Vec<Mat2> {
        let gens = self.generators();
        let mut out = vec![[[1, 0], [0, 1]]];
        let mut head = 0;
        while head < out.len() {
            for g in &gens {
                let y = mat_mul(&out[head], g);
                if !out.contains(&y) {
                    out.push(y);
                }
            }
            head += 1;
        }
        out
    }

    pub fn actor_order(self) -> usize {
        self.matrices().len()
    }
}

impl fmt::Display for DuncanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn row_times(v: [i64; 2], a: &Mat2, m: i64) -> [i64; 2] {
    [
        (v[0] * a[0][0] + v[1] * a[1][0]).rem_euclid(m),
        (v[0] * a[0][1] + v[1] * a[1][1]).rem_euclid(m),
    ]
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DuncanError {
    #[error("modulus {m} has a prime forbidden in family {family}")]
    ForbiddenModulus { family: DuncanFamily, m: u64 },
    #[error(transparent)]
    TooLarge(#[from] GroupError),
}

/// `(ℤ/m)² ⋊ 𝒢` for one family, with its translation subgroup.
#[derive(Debug)]
pub struct TorusOvergroup {
    pub family: DuncanFamily,
    pub m: u64,
    pub group: GroupTable,
    /// The translations `(ℤ/m)²`.
    pub torus: ElementSet,
}

pub fn torus_family_overgroup(family: DuncanFamily, m: u64) -> Result<TorusOvergroup, DuncanError> {
    if m == 0 || !family.allows(m) {
        return Err(DuncanError::ForbiddenModulus { family, m });
    }
    let mats = family.matrices();
    if (m * m) as usize * mats.len() > MAX_ORDER {
        return Err(GroupError::ClosureBudgetExceeded { limit: MAX_ORDER }.into());
    }
    let mi = m as i64;
    let points = (m * m) as usize;
    let point = |v: [i64; 2]| (v[0] * mi + v[1]) as usize;
    let reduce = |a: &Mat2| a.map(|row| row.map(|x| x.rem_euclid(mi)));
    let mut reduced: Vec<Mat2> = mats.iter().map(reduce).collect();
    reduced.sort_unstable();
    reduced.dedup();
    // the action on (ℤ/m)² forgets 𝒢 when m is tiny, so 𝒢 also acts on itself
    let extra = if reduced.len() < mats.len() { mats.len() } else { 0 };
    let degree = points + extra;
    let affine = |f: &dyn Fn([i64; 2]) -> [i64; 2], gen: Option<&Mat2>| -> Perm {
        let mut images: Vec<u32> = Vec::with_capacity(degree);
        for x in 0..mi {
            for y in 0..mi {
                images.push(point(f([x, y])) as u32);
            }
        }
        for (k, a) in mats.iter().enumerate().take(extra) {
            let image = match gen {
                Some(g) => mats.iter().position(|b| *b == mat_mul(a, g)).expect("closed"),
                None => k,
            };
            images.push((points + image) as u32);
        }
        Perm::from_images(images).expect("affine maps are bijections")
    };
    let t1 = affine(&|v| [(v[0] + 1) % mi, v[1]], None);
    let t2 = affine(&|v| [v[0], (v[1] + 1) % mi], None);
    let mut gens = vec![t1.clone(), t2.clone()];
    for g in family.generators() {
        gens.push(affine(&|v| row_times(v, &g, mi), Some(&g)));
    }
    let group = GroupTable::generate(degree, &gens, MAX_ORDER)?;
    let torus = group.closure([group.index_of(&t1).unwrap(), group.index_of(&t2).unwrap()]);
    Ok(TorusOvergroup {
        family,
        m,
        group,
        torus,
    })
}

/// The seven cases of the classification, in the order they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuncanCase {
    /// Subgroup of `GL₂(ℂ)`, i.e. `rd ≤ 2`.
    Gl2,
    Torus(DuncanFamily),
    Psl27,
    S5,
}

impl DuncanCase {
    pub fn label(&self) -> String {
        match self {
            DuncanCase::Gl2 => "i".into(),
            DuncanCase::Torus(f) => f.label().into(),
            DuncanCase::Psl27 => "vi".into(),
            DuncanCase::S5 => "vii".into(),
        }
    }
}

impl fmt::Display for DuncanCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DuncanCase::Gl2 => write!(f, "(i) GL2(C)"),
            DuncanCase::Torus(fam) => write!(f, "({fam}) torus family"),
            DuncanCase::Psl27 => write!(f, "(vi) PSL2(F7)"),
            DuncanCase::S5 => write!(f, "(vii) S5"),
        }
    }
}

/// A certified `ed ≤ 2` membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuncanWitness {
    pub case: DuncanCase,
    /// Torsion modulus for the torus families.
    pub m: Option<u64>,
    /// `None` only for case (i), which is certified by `rd ≤ 2`.
    pub embedding: Option<EmbeddingWitness>,
    /// `|image ∩ T|` for the torus families.
    pub torus_intersection: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpperOutcome {
    Found(DuncanWitness),
    NotFound,
}

/// Why one case of the classification cannot contain `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseExclusion {
    pub case: DuncanCase,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionCertificate {
    pub cases: Vec<CaseExclusion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExclusionOutcome {
    Excluded(ExclusionCertificate),
    Inconclusive { case: DuncanCase, detail: String },
}

impl ExclusionOutcome {
    pub fn is_excluded(&self) -> bool {
        matches!(self, ExclusionOutcome::Excluded(_))
    }
}

/// Holds the fixed targets and caches torus overgroups across queries.
pub struct DuncanChecker {
    budget: u64,
    s5: OnceLock<GroupTable>,
    psl: OnceLock<GroupTable>,
    actors: OnceLock<HashMap<DuncanFamily, (GroupTable, Vec<Mat2>)>>,
    overgroups: Mutex<HashMap<(DuncanFamily, u64), Arc<TorusOvergroup>>>,
}

impl fmt::Debug for DuncanChecker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DuncanChecker").field("budget", &self.budget).finish()
    }
}

impl DuncanChecker {
    pub fn new(budget: u64) -> Self {
        DuncanChecker {
            budget,
            s5: OnceLock::new(),
            psl: OnceLock::new(),
            actors: OnceLock::new(),
            overgroups: Mutex::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn s5(&self) -> &GroupTable {
        self.s5.get_or_init(|| realize_str("S(5)").expect("S5"))
    }

    pub fn psl27(&self) -> &GroupTable {
        self.psl.get_or_init(|| realize_str("PSL(2,7)").expect("PSL(2,7)"))
    }

    pub fn overgroup(&self, family: DuncanFamily, m: u64) -> Result<Arc<TorusOvergroup>, DuncanError> {
        if let Some(t) = self.overgroups.lock().unwrap().get(&(family, m)) {
            return Ok(t.clone());
        }
        let built = Arc::new(torus_family_overgroup(family, m)?);
        Ok(self
            .overgroups
            .lock()
            .unwrap()
            .entry((family, m))
            .or_insert(built)
            .clone())
    }

    /// The actor group as permutations of `(ℤ/5)²`, with the matrix of each element.
    fn actor(&self, family: DuncanFamily) -> &(GroupTable, Vec<Mat2>) {
        &self.actors.get_or_init(|| {
            DuncanFamily::ALL
                .iter()
                .map(|&f| {
                    let gens: Vec<Perm> = f
                        .generators()
                        .iter()
                        .map(|a| {
                            let images = (0..25)
                                .map(|k| {
                                    let v = row_times([k / 5, k % 5], a, 5);
                                    (v[0] * 5 + v[1]) as u32
                                })
                                .collect();
                            Perm::from_images(images).unwrap()
                        })
                        .collect();
                    let table = GroupTable::generate(25, &gens, MAX_ORDER).unwrap();
                    let lift = |x: i64| if x > 2 { x - 5 } else { x };
                    let mats = table
                        .elements()
                        .iter()
                        .map(|p| {
                            let r0 = p.apply(5) as i64;
                            let r1 = p.apply(1) as i64;
                            [[lift(r0 / 5), lift(r0 % 5)], [lift(r1 / 5), lift(r1 % 5)]]
                        })
                        .collect();
                    (f, (table, mats))
                })
                .collect()
        })[&family]
    }

    /// Moduli worth trying for a group of the given order: allowed, with
    /// `|G|` dividing the overgroup order, and admitting a torus part `d`
    /// with `|G|/d` dividing `|𝒢|`.
    pub fn candidate_moduli(family: DuncanFamily, order: usize) -> Vec<u64> {
        let actor = family.actor_order() as u64;
        let n = order as u64;
        let cap = ((MAX_ORDER as u64 / actor) as f64).sqrt() as u64;
        let cap = cap.min(12 * n);
        (1..=cap)
            .filter(|&m| family.allows(m) && (m * m * actor).is_multiple_of(n))
            .filter(|&m| {
                let g = gcd(n, m * m);
                (1..=g).any(|d| g.is_multiple_of(d) && family.allows(d) && actor.is_multiple_of(n / d) && n.is_multiple_of(d))
            })
            .collect()
    }

    /// Tries the cases in order (i), (vii), (vi), (ii)–(v).
    pub fn upper(&self, g: &GroupTable, rd: usize) -> UpperOutcome {
        if rd <= 2 {
            return UpperOutcome::Found(DuncanWitness {
                case: DuncanCase::Gl2,
                m: None,
                embedding: None,
                torus_intersection: None,
            });
        }
        for (case, target) in [(DuncanCase::S5, self.s5()), (DuncanCase::Psl27, self.psl27())] {
            if let SearchOutcome::Found(w) = find_monomorphism(g, target, self.budget) {
                return UpperOutcome::Found(DuncanWitness {
                    case,
                    m: None,
                    embedding: Some(w),
                    torus_intersection: None,
                });
            }
        }
        for family in DuncanFamily::ALL {
            for m in Self::candidate_moduli(family, g.order()) {
                let Ok(over) = self.overgroup(family, m) else { continue };
                if let Some(w) = self.torus_embedding(g, &over) {
                    return UpperOutcome::Found(w);
                }
            }
        }
        UpperOutcome::NotFound
    }

    /// An embedding into the overgroup whose intersection with the torus
    /// has order coprime to the forbidden primes.
    pub fn torus_embedding(&self, g: &GroupTable, over: &TorusOvergroup) -> Option<DuncanWitness> {
        let mut meet = 0;
        let outcome = find_monomorphism_where(g, &over.group, self.budget, |phi| {
            let k = phi.iter().filter(|&&y| over.torus.contains(y)).count();
            meet = k;
            over.family.allows(k as u64)
        });
        match outcome {
            SearchOutcome::Found(w) => Some(DuncanWitness {
                case: DuncanCase::Torus(over.family),
                m: Some(over.m),
                embedding: Some(w),
                torus_intersection: Some(meet),
            }),
            _ => None,
        }
    }

    /// Re-checks a membership witness from scratch.
    pub fn verify_upper(&self, g: &GroupTable, rd: usize, w: &DuncanWitness) -> bool {
        match (w.case, &w.embedding) {
            (DuncanCase::Gl2, _) => rd <= 2,
            (DuncanCase::S5, Some(e)) => e.verify(g, self.s5()),
            (DuncanCase::Psl27, Some(e)) => e.verify(g, self.psl27()),
            (DuncanCase::Torus(f), Some(e)) => {
                let Some(m) = w.m else { return false };
                let Ok(over) = self.overgroup(f, m) else { return false };
                match e.extend(g, &over.group) {
                    Some(phi) => {
                        let k = phi.iter().filter(|&&y| over.torus.contains(y)).count();
                        Some(k) == w.torus_intersection && f.allows(k as u64)
                    }
                    None => false,
                }
            }
            _ => false,
        }
    }

    /// Sound exclusion from all seven cases, or the first case that could
    /// not be ruled out.
    pub fn exclusion(&self, g: &GroupTable, rd: usize) -> ExclusionOutcome {
        let mut cases = Vec::new();
        if rd <= 2 {
            return ExclusionOutcome::Inconclusive {
                case: DuncanCase::Gl2,
                detail: format!("rd = {rd}"),
            };
        }
        cases.push(CaseExclusion {
            case: DuncanCase::Gl2,
            reason: format!("rd = {rd} > 2"),
        });
        for family in DuncanFamily::ALL {
            match self.exclude_family(g, family) {
                Ok(reason) => cases.push(CaseExclusion {
                    case: DuncanCase::Torus(family),
                    reason,
                }),
                Err(detail) => {
                    return ExclusionOutcome::Inconclusive {
                        case: DuncanCase::Torus(family),
                        detail,
                    }
                }
            }
        }
        for (case, target, name) in [
            (DuncanCase::Psl27, self.psl27(), "PSL2(F7)"),
            (DuncanCase::S5, self.s5(), "S5"),
        ] {
            let reason = if target.order() % g.order() != 0 {
                format!("{} is not divisible by {}", target.order(), g.order())
            } else {
                match find_monomorphism(g, target, self.budget) {
                    SearchOutcome::NotFound => format!("exhaustive search finds no embedding into {name}"),
                    SearchOutcome::Found(_) => {
                        return ExclusionOutcome::Inconclusive {
                            case,
                            detail: format!("embeds into {name}"),
                        }
                    }
                    SearchOutcome::BudgetExhausted => {
                        return ExclusionOutcome::Inconclusive {
                            case,
                            detail: format!("search budget of {} nodes exhausted", self.budget),
                        }
                    }
                }
            };
            cases.push(CaseExclusion { case, reason });
        }
        ExclusionOutcome::Excluded(ExclusionCertificate { cases })
    }

    /// `Ok(reason)` if no `(N, ψ, ι)` satisfies the necessary condition,
    /// otherwise `Err` describing a surviving triple.
    fn exclude_family(&self, g: &GroupTable, family: DuncanFamily) -> Result<String, String> {
        let (actor, mats) = self.actor(family);
        let mut notes = Vec::new();
        let candidates: Vec<Subgroup> = std::iter::once(Subgroup::trivial(g.order()))
            .chain(g.normal_subgroups().into_iter().map(|n| n.subgroup).filter(|n| !n.is_trivial()))
            .filter(|n| family.allows(n.order() as u64) && is_abelian_rank_two(g, n))
            .collect();
        for n in &candidates {
            let k = g.order() / n.order();
            if actor.order() % k != 0 {
                notes.push(format!("|G/N| = {k} for |N| = {}", n.order()));
                continue;
            }
            let q = g.quotient(n).expect("normal");
            let psis = injective_homs(&q.table, actor);
            if psis.is_empty() {
                notes.push(format!("G/N of order {k} does not embed for |N| = {}", n.order()));
                continue;
            }
            for psi in &psis {
                // ψ as a matrix for each element of G
                let mat_of = |x: usize| mats[psi[q.projection[x]]];
                if let Some(reason) = inversion_obstruction(g, n, &mat_of) {
                    notes.push(reason);
                    continue;
                }
                if equivariant_injection_exists(g, n, &mat_of) {
                    return Err(format!(
                        "normal subgroup of order {} with quotient embedding into the actor passes the torus condition",
                        n.order()
                    ));
                }
                notes.push(format!("no equivariant injection for |N| = {}", n.order()));
            }
        }
        notes.dedup();
        Ok(format!(
            "no normal abelian N of rank ≤ 2 with |N| coprime to {:?} fits: {}",
            family.forbidden_primes(),
            notes.join("; ")
        ))
    }
}

fn is_abelian_rank_two(g: &GroupTable, n: &Subgroup) -> bool {
    let elems = n.elements();
    let abelian = elems
        .iter()
        .all(|&x| elems.iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
    abelian && n.table(g).invariants().rank().is_some_and(|r| r <= 2)
}

/// All injective homomorphisms `q → target`, as element maps.
fn injective_homs(q: &GroupTable, target: &GroupTable) -> Vec<Vec<usize>> {
    let gens = q.generating_set(&q.whole().members().clone());
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    fn rec(
        q: &GroupTable,
        target: &GroupTable,
        gens: &[usize],
        images: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == gens.len() {
            if let Some(phi) = extend_homomorphism(q, gens, target, images) {
                let mut seen = vec![false; target.order()];
                if phi.iter().all(|&y| !std::mem::replace(&mut seen[y], true)) {
                    out.push(phi);
                }
            }
            return;
        }
        for y in 0..target.order() {
            if target.element_order(y) == q.element_order(gens[depth]) {
                images[depth] = y;
                rec(q, target, gens, images, depth + 1, out);
            }
        }
    }
    rec(q, target, &gens, &mut images, 0, &mut out);
    out
}

/// An element acting as `−I` must invert `N` elementwise.
fn inversion_obstruction(g: &GroupTable, n: &Subgroup, mat_of: &dyn Fn(usize) -> Mat2) -> Option<String> {
    let minus = [[-1, 0], [0, -1]];
    for x in 0..g.order() {
        if mat_of(x) != minus {
            continue;
        }
        let elems = n.elements();
        let centralized = elems
            .iter()
            .copied()
            .filter(|&y| y != 0 && g.conj(y, x) == y && g.inv(y) != y)
            .min_by_key(|&y| g.element_order(y));
        if let Some(y) = centralized {
            return Some(format!(
                "an element of order {} maps to −I, so it must invert N elementwise, but it centralizes an element of order {} in N",
                g.element_order(x),
                g.element_order(y)
            ));
        }
        if let Some(y) = elems.into_iter().find(|&y| g.conj(y, x) != g.inv(y)) {
            return Some(format!(
                "an element of order {} maps to −I but does not invert an element of order {} in N",
                g.element_order(x),
                g.element_order(y)
            ));
        }
    }
    None
}

/// Whether some injective `ι: N → (ℤ/e)²` satisfies `ι(n^g) = ι(n)·ψ(g)`.
fn equivariant_injection_exists(g: &GroupTable, n: &Subgroup, mat_of: &dyn Fn(usize) -> Mat2) -> bool {
    if n.is_trivial() {
        return true;
    }
    let elems = n.elements();
    let e = elems.iter().map(|&x| g.element_order(x) as i64).fold(1, |a, b| a / gcd(a as u64, b as u64) as i64 * b);
    // two generators of N
    let x1 = *elems.iter().max_by_key(|&&x| (g.element_order(x), std::cmp::Reverse(x))).unwrap();
    let c1 = g.closure([x1]);
    let ngens: Vec<usize> = if c1.count() == n.order() {
        vec![x1]
    } else {
        let x2 = elems
            .iter()
            .copied()
            .find(|&y| g.closure([x1, y]).count() == n.order())
            .expect("rank at most two");
        vec![x1, x2]
    };
    let vectors: Vec<[i64; 2]> = (0..e).flat_map(|a| (0..e).map(move |b| [a, b])).collect();
    let check = |imgs: &[[i64; 2]]| -> bool {
        // BFS over N
        let mut iota: HashMap<usize, [i64; 2]> = HashMap::new();
        iota.insert(0, [0, 0]);
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (k, &s) in ngens.iter().enumerate() {
                let y = g.mul(x, s);
                let v = iota[&x];
                let w = [(v[0] + imgs[k][0]) % e, (v[1] + imgs[k][1]) % e];
                match iota.get(&y) {
                    Some(&u) if u != w => return false,
                    Some(_) => {}
                    None => {
                        iota.insert(y, w);
                        queue.push(y);
                    }
                }
            }
        }
        let mut values: Vec<[i64; 2]> = iota.values().copied().collect();
        values.sort_unstable();
        values.dedup();
        if values.len() != n.order() {
            return false;
        }
        g.generators().iter().all(|&a| {
            let m = mat_of(a);
            ngens
                .iter()
                .zip(imgs)
                .all(|(&s, &v)| iota[&g.conj(s, a)] == row_times(v, &m, e))
        })
    };
    match ngens.len() {
        1 => vectors.iter().any(|&v| check(&[v])),
        _ => vectors
            .iter()
            .any(|&v| vectors.iter().any(|&w| check(&[v, w]))),
    }
}
