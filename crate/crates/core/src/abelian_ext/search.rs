//! Bounded search for abelian covers `L ⊇ Z` with prescribed relative local
//! degrees, and the height of cyclic fields.

use std::collections::{BTreeSet, HashSet};

use num_integer::Integer;

use super::group::{Decomposition, FiniteAbelianGroup};
use super::units::{self, mul_mod, pow_mod, split_prime, totient};
use super::{AbelianExtQ, QPlace};
use crate::finite;
use crate::qlattice::factorize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("no cover found with conductor at most {bound}")]
    NotFoundWithinBound { bound: u64 },
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not cyclic over Q")]
    NotCyclic(String),
}

/// A condition on `[L_w : Z_v]` for places `w | v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demand {
    Exactly(QPlace, u64),
    DivisibleBy(QPlace, u64),
}

impl Demand {
    fn place(&self) -> QPlace {
        match *self {
            Demand::Exactly(v, _) | Demand::DivisibleBy(v, _) => v,
        }
    }

    fn floor(&self) -> u64 {
        match *self {
            Demand::Exactly(_, d) | Demand::DivisibleBy(_, d) => d,
        }
    }

    fn holds(&self, rel: u64) -> bool {
        match *self {
            Demand::Exactly(_, d) => rel == d,
            Demand::DivisibleBy(_, d) => rel % d == 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub conductors_scanned: u64,
    pub conductors_prefiltered: u64,
    pub candidates: u64,
}

/// Deterministic minimal-conductor cover with `[L_w:Z_v] = d` for each demand.
pub fn cover_search(
    z: &AbelianExtQ,
    m: u64,
    demands: &[(QPlace, u64)],
    require_cyclic: bool,
    bound: u64,
) -> Result<AbelianExtQ, CoverError> {
    let d: Vec<Demand> = demands.iter().map(|&(v, k)| Demand::Exactly(v, k)).collect();
    first_cover(z, m, &d, require_cyclic, bound)
}

/// Minimal cover whose relative local degree at each `v` is a multiple of
/// the given value, i.e. a cover splitting local invariants of those orders.
pub fn splitting_cover_search(
    z: &AbelianExtQ,
    m: u64,
    requirements: &[(QPlace, u64)],
    require_cyclic: bool,
    bound: u64,
) -> Result<AbelianExtQ, CoverError> {
    let d: Vec<Demand> = requirements
        .iter()
        .map(|&(v, k)| Demand::DivisibleBy(v, k))
        .collect();
    first_cover(z, m, &d, require_cyclic, bound)
}

pub fn first_cover(
    z: &AbelianExtQ,
    m: u64,
    demands: &[Demand],
    require_cyclic: bool,
    bound: u64,
) -> Result<AbelianExtQ, CoverError> {
    let mut stats = SearchStats::default();
    let found = scan(z, m, demands, require_cyclic, bound, true, &mut stats)?;
    found
        .into_iter()
        .next()
        .ok_or(CoverError::NotFoundWithinBound { bound })
}

/// Every cover within the bound, ordered by conductor, then subgroup.
pub fn all_covers(
    z: &AbelianExtQ,
    m: u64,
    demands: &[Demand],
    require_cyclic: bool,
    bound: u64,
) -> Result<(Vec<AbelianExtQ>, SearchStats), CoverError> {
    let mut stats = SearchStats::default();
    let found = scan(z, m, demands, require_cyclic, bound, false, &mut stats)?;
    Ok((found, stats))
}

/// `[Q(ζ_n)_v : Q_v]`.
fn cyclotomic_local_degree(n: u64, v: QPlace) -> u64 {
    match v {
        QPlace::Infinite => {
            if n > 2 {
                2
            } else {
                1
            }
        }
        QPlace::Finite(p) => {
            let (a, rest) = split_prime(n, p);
            let e = if a == 0 { 1 } else { (p - 1) * p.pow(a - 1) };
            e * multiplicative_order(p % rest, rest)
        }
    }
}

pub(crate) fn multiplicative_order(x: u64, n: u64) -> u64 {
    if n <= 1 {
        return 1;
    }
    let mut k = 1;
    let mut y = x % n;
    while y != 1 {
        y = mul_mod(y, x, n);
        k += 1;
    }
    k
}

fn scan(
    z: &AbelianExtQ,
    m: u64,
    demands: &[Demand],
    require_cyclic: bool,
    bound: u64,
    stop_at_first: bool,
    stats: &mut SearchStats,
) -> Result<Vec<AbelianExtQ>, CoverError> {
    if m == 0 {
        return Err(CoverError::ZeroDegree);
    }
    let z_local: Vec<u64> = demands.iter().map(|d| z.local_degree(d.place())).collect();
    let z_cyclic = z.is_cyclic();
    let deg_z = z.degree();
    let mut out = Vec::new();
    let step = z.conductor();
    let mut n = step;
    while n <= bound {
        stats.conductors_scanned += 1;
        let ok = totient(n) % (m * deg_z) == 0
            && demands.iter().zip(&z_local).all(|(d, &fz)| {
                cyclotomic_local_degree(n, d.place()) % (fz * d.floor()) == 0
            })
            && !(require_cyclic && !z_cyclic);
        if ok {
            stats.conductors_prefiltered += 1;
            let mut here = covers_at(z, n, m, demands, &z_local, require_cyclic, stats);
            if !here.is_empty() {
                here.sort();
                if stop_at_first {
                    out.push(here.swap_remove(0));
                    return Ok(out);
                }
                out.extend(here);
            }
        }
        n += step;
    }
    Ok(out)
}

struct Frame {
    n: u64,
    elems: Vec<u64>,
    decomposition: Decomposition,
}

impl Frame {
    /// Value of the character `a` (coordinates in `⊕ Z/g_j`) at element `i`,
    /// as a residue mod `m`.
    fn value(&self, a: &[i64], gs: &[u64], m: u64, i: usize) -> u64 {
        let y = self.decomposition.coordinates(i);
        let mut s: u64 = 0;
        for ((&aj, &yj), &g) in a.iter().zip(y).zip(gs) {
            let t = (aj as u64 * (yj as u64 % g)) % g * (m / g);
            s = (s + t) % m;
        }
        s
    }
}

fn covers_at(
    z: &AbelianExtQ,
    n: u64,
    m: u64,
    demands: &[Demand],
    z_local: &[u64],
    require_cyclic: bool,
    stats: &mut SearchStats,
) -> Vec<AbelianExtQ> {
    let q = z.lifted(n);
    let elems = q.elements();
    let mut pos = vec![usize::MAX; n as usize];
    for (i, &u) in elems.iter().enumerate() {
        pos[u as usize] = i;
    }
    let idx: Vec<usize> = (0..elems.len()).collect();
    let op = |a: usize, b: usize| pos[mul_mod(elems[a], elems[b], n) as usize];
    let decomposition = Decomposition::compute(&idx, 0, &op);
    let factors = decomposition.factors().to_vec();
    let frame = Frame { n, elems, decomposition };
    let gs: Vec<u64> = factors.iter().map(|&d| d.gcd(&m)).collect();
    if gs.iter().product::<u64>() % m != 0 {
        return vec![];
    }

    // Frobenius elements at unramified demanded places, as indices in Q.
    let frob: Vec<Option<usize>> = demands
        .iter()
        .zip(z_local)
        .map(|(d, &fz)| match d.place() {
            QPlace::Finite(p) if n % p != 0 => Some(pos[pow_mod(p, fz, n) as usize]),
            QPlace::Infinite if n > 2 && z.is_real() => Some(pos[(n - 1) as usize]),
            _ => None,
        })
        .collect();
    let forced_cyclic = require_cyclic
        || units::is_prime(m)
        || demands
            .iter()
            .zip(&frob)
            .any(|(d, f)| f.is_some() && d.floor() == m);

    // kernels of reduction mod n/p; only those inside the lift of H_Z can
    // lie in a subgroup of it
    let conductor_kernels: Vec<Vec<usize>> = factorize(n)
        .iter()
        .filter_map(|&(p, _)| {
            let k = n / p;
            let ker: Vec<usize> = frame
                .elems
                .iter()
                .enumerate()
                .filter(|(_, &u)| u % k == 1 % k)
                .map(|(i, _)| i)
                .collect();
            (ker.len() as u64 == totient(n) / totient(k)).then_some(ker)
        })
        .collect();

    let unit_group = FiniteAbelianGroup::new(gs.clone());
    let mut out = Vec::new();
    let mut consider = |chars: &[Vec<i64>], out: &mut Vec<AbelianExtQ>| {
        // unramified demands from character values
        for ((d, f), _) in demands.iter().zip(&frob).zip(z_local) {
            if let Some(i) = *f {
                let ord = chars
                    .iter()
                    .map(|a| {
                        let v = frame.value(a, &gs, m, i);
                        m / v.gcd(&m)
                    })
                    .fold(1u64, |x, y| x.lcm(&y));
                if !d.holds(ord) {
                    return;
                }
            }
        }
        let kernel: Vec<usize> = (0..frame.elems.len())
            .filter(|&i| chars.iter().all(|a| frame.value(a, &gs, m, i) == 0))
            .collect();
        let kset: HashSet<usize> = kernel.iter().copied().collect();
        if conductor_kernels.iter().any(|ck| ck.iter().all(|i| kset.contains(i))) {
            return;
        }
        stats.candidates += 1;
        let sub: Vec<u64> = kernel.iter().map(|&i| frame.elems[i]).collect();
        let l = AbelianExtQ::from_minimal(frame.n, sub);
        for ((d, f), &fz) in demands.iter().zip(&frob).zip(z_local) {
            if f.is_none() && !d.holds(l.local_degree(d.place()) / fz) {
                return;
            }
        }
        if require_cyclic && !l.is_cyclic() {
            return;
        }
        out.push(l);
    };

    if forced_cyclic {
        let unit_mults: Vec<u64> = (1..m).filter(|u| u.gcd(&m) == 1).collect();
        for idx in 0..unit_group.order() as usize {
            let a = unit_group.element(idx);
            if unit_group.element_order(&a) != m {
                continue;
            }
            // one generator per cyclic subgroup: the least in its unit orbit
            let minimal = unit_mults.iter().all(|&u| {
                let b: Vec<i64> = a.iter().map(|&x| x * u as i64).collect();
                unit_group.index_of(&b) >= idx
            });
            if minimal {
                consider(&[a], &mut out);
            }
        }
    } else {
        let all: Vec<usize> = (0..unit_group.order() as usize).collect();
        let subs = finite::subgroups_of_order(&all, 0, &|a, b| unit_group.add(a, b), m as usize);
        for s in subs {
            let gens = generators_of(&s, &unit_group);
            let chars: Vec<Vec<i64>> = gens.iter().map(|&i| unit_group.element(i)).collect();
            consider(&chars, &mut out);
        }
    }
    out
}

fn generators_of(s: &BTreeSet<usize>, g: &FiniteAbelianGroup) -> Vec<usize> {
    let mut span = BTreeSet::from([0usize]);
    let mut gens = Vec::new();
    for &x in s {
        if !span.contains(&x) {
            span = finite::extend(&span, x, &|a, b| g.add(a, b));
            gens.push(x);
        }
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeightAnswer {
    Yes,
    No,
    UnknownBeyondBound { bound: u64 },
}

/// The answer, and per prime `p | [Z:Q]` the largest `k` for which a cyclic
/// cover of relative degree `p^k` exists (`None`: every `k`).
#[derive(Debug, Clone)]
pub struct HeightReport {
    pub answer: HeightAnswer,
    pub capacity: Vec<(u64, Option<u32>)>,
    pub notes: Vec<String>,
}

impl HeightReport {
    /// Least `k` such that no cyclic `p^k`-cover exists, for primes of finite height.
    pub fn obstruction_exponent(&self, p: u64) -> Option<u32> {
        self.capacity
            .iter()
            .find(|(q, _)| *q == p)
            .and_then(|(_, c)| c.map(|k| k + 1))
    }

    pub fn finite_primes(&self) -> Vec<u64> {
        self.capacity
            .iter()
            .filter(|(_, c)| c.is_some())
            .map(|(p, _)| *p)
            .collect()
    }
}

/// Height of a cyclic field. A cyclic `p`-part with character `χ = ∏ χ_q`
/// admits a cyclic `p^k`-cover iff every tamely ramified `q ≠ p` has
/// `v_p(q-1) ≥ v_p(e_q) + k`, and for `p = 2` additionally `χ_2(-1) = 1`
/// when `k ≥ 1`. The answer is cross-checked by bounded search for small `k`.
pub fn infinite_height(z: &AbelianExtQ, bound: u64) -> Result<HeightReport, CoverError> {
    if !z.is_cyclic() {
        return Err(CoverError::NotCyclic(z.to_string()));
    }
    let mut capacity = Vec::new();
    let mut notes = Vec::new();
    for (p, _) in factorize(z.degree()) {
        let zp = z.primary_part(p);
        let cap = embedding_capacity(&zp, p);
        capacity.push((p, cap));
        if p == 2 && zp.degree() == 2 {
            let d = quadratic_radicand(&zp);
            let sum_two_squares = d > 0
                && factorize(d as u64)
                    .iter()
                    .all(|&(q, _)| q == 2 || q % 4 == 1);
            let quartic = cap.map_or(true, |k| k >= 1);
            notes.push(format!(
                "2-part Q(sqrt({d})): sum of two squares = {sum_two_squares}, cyclic quartic embedding = {quartic}"
            ));
            if sum_two_squares != quartic {
                return Ok(HeightReport {
                    answer: HeightAnswer::UnknownBeyondBound { bound },
                    capacity,
                    notes,
                });
            }
        }
    }
    // Bounded confirmation for the first two steps at each prime.
    for &(p, cap) in &capacity {
        for k in 1..=2u32 {
            let m = p.pow(k);
            if m * z.degree() > 4096 {
                break;
            }
            let expect = cap.map_or(true, |c| k <= c);
            let found = cover_search(z, m, &[], true, bound);
            match (expect, found) {
                (true, Ok(l)) => notes.push(format!("cyclic {m}-cover found: {l}")),
                (true, Err(_)) => notes.push(format!("cyclic {m}-cover exists beyond conductor {bound}")),
                (false, Err(_)) => notes.push(format!("no cyclic {m}-cover up to conductor {bound}")),
                (false, Ok(l)) => {
                    notes.push(format!("unexpected cyclic {m}-cover {l}"));
                    return Ok(HeightReport {
                        answer: HeightAnswer::UnknownBeyondBound { bound },
                        capacity,
                        notes,
                    });
                }
            }
        }
    }
    let answer = if capacity.iter().all(|(_, c)| c.is_none()) {
        HeightAnswer::Yes
    } else {
        HeightAnswer::No
    };
    Ok(HeightReport { answer, capacity, notes })
}

/// Largest `k` with a cyclic `p^k`-cover of the cyclic `p`-power field `zp`.
fn embedding_capacity(zp: &AbelianExtQ, p: u64) -> Option<u32> {
    let n = zp.conductor();
    let mut cap: Option<u32> = None;
    let mut tighten = |c: u32| cap = Some(cap.map_or(c, |x: u32| x.min(c)));
    for (q, _) in factorize(n) {
        if q == p {
            if p == 2 {
                let (a, odd) = split_prime(n, 2);
                let minus_one = units::crt(1 % odd, odd, (1u64 << a) - 1, 1 << a);
                if !zp.subgroup_set().contains(minus_one) {
                    tighten(0);
                }
            }
            continue;
        }
        let e = zp.ramification_index(QPlace::Finite(q));
        let (b, _) = split_prime(e, p);
        let (v, _) = split_prime(q - 1, p);
        tighten(v.saturating_sub(b));
    }
    cap
}

/// Squarefree `d` with `Z = Q(√d)`.
fn quadratic_radicand(z: &AbelianExtQ) -> i64 {
    let f = z.conductor() as i64;
    let disc = if z.is_real() { f } else { -f };
    if disc % 4 == 0 {
        disc / 4
    } else {
        disc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: i64) -> AbelianExtQ {
        AbelianExtQ::quadratic(d).unwrap()
    }

    #[test]
    fn quadratic_covers_of_q() {
        let r = AbelianExtQ::rationals();
        let l = cover_search(
            &r,
            2,
            &[(QPlace::Finite(3), 2), (QPlace::Finite(5), 2), (QPlace::Infinite, 2)],
            false,
            2000,
        )
        .unwrap();
        // Q(√-3) already meets these demands and has the least conductor.
        assert_eq!(l, q(-3));
        let (all, _) = all_covers(
            &r,
            2,
            &[
                Demand::Exactly(QPlace::Finite(3), 2),
                Demand::Exactly(QPlace::Finite(5), 2),
                Demand::Exactly(QPlace::Infinite, 2),
            ],
            false,
            60,
        )
        .unwrap();
        assert!(all.contains(&q(-15)));
        assert_eq!(cover_search(&r, 1, &[(QPlace::Finite(7), 1)], false, 10).unwrap(), r);
    }

    #[test]
    fn covers_not_containing_the_conductor_kernel() {
        // Q(i) times the cubic field of conductor 7
        let l = cover_search(&q(-1), 3, &[], false, 100).unwrap();
        assert_eq!((l.conductor(), l.subgroup()), (28, &[1, 13][..]));
        let (all, _) = all_covers(&q(-1), 2, &[], false, 12).unwrap();
        assert_eq!(all.iter().map(|l| l.conductor()).collect::<Vec<_>>(), vec![8, 12]);
    }

    #[test]
    fn no_cyclic_quartic_over_qi() {
        let r = cover_search(&q(-1), 2, &[], true, 2000);
        assert_eq!(r, Err(CoverError::NotFoundWithinBound { bound: 2000 }));
        assert!(cover_search(&q(-1), 2, &[], false, 2000).is_ok());
    }

    #[test]
    fn heights() {
        let yes = infinite_height(&AbelianExtQ::rationals(), 2000).unwrap();
        assert_eq!(yes.answer, HeightAnswer::Yes);
        assert_eq!(infinite_height(&q(2), 2000).unwrap().answer, HeightAnswer::Yes);
        let qi = infinite_height(&q(-1), 2000).unwrap();
        assert_eq!(qi.answer, HeightAnswer::No);
        assert_eq!(qi.obstruction_exponent(2), Some(1));
        let q5 = infinite_height(&q(5), 2000).unwrap();
        assert_eq!(q5.answer, HeightAnswer::No);
        assert_eq!(q5.obstruction_exponent(2), Some(2));
        let cubic7 = AbelianExtQ::from_generators(7, &[6]).unwrap();
        assert_eq!(cubic7.degree(), 3);
        assert_eq!(infinite_height(&cubic7, 2000).unwrap().obstruction_exponent(3), Some(1));
        let cubic9 = AbelianExtQ::from_generators(9, &[8]).unwrap();
        assert_eq!(infinite_height(&cubic9, 2000).unwrap().answer, HeightAnswer::Yes);
        assert!(infinite_height(&AbelianExtQ::cyclotomic(8).unwrap(), 2000).is_err());
    }
}
