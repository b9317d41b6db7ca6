#![allow(dead_code)]
// Random skeletons, classes and fields shared by the property and
// acceptance suites.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use tamediv::abelian_ext::{AbelianExtQ, QPlace};
use tamediv::brauer_q::BrauerClass;
use tamediv::graded_skeleton::{validate, Center, DivAlgSkeleton, GaloisElement, ResidueAlgebra, ResidueKind};
use tamediv::oracle;
use tamediv::qlattice::GradeGroup;

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn pow_mod(b: u64, e: u64, n: u64) -> u64 {
    (0..e).fold(1 % n, |acc, _| acc * b % n)
}

/// A random abelian field of conductor at most `max_n`.
pub fn field<R: Rng>(rng: &mut R, max_n: u64) -> AbelianExtQ {
    let n = rng.gen_range(1..=max_n);
    let subs = oracle::subgroup_enumeration(n).unwrap();
    let h = subs.choose(rng).unwrap();
    AbelianExtQ::new(n, h).unwrap()
}

/// A class over `Q` supported on small places, summing to zero.
pub fn class_over_q<R: Rng>(rng: &mut R, denominators: &[i64]) -> BrauerClass {
    let primes = [2u64, 3, 5, 7, 11, 13];
    let k = rng.gen_range(0..=3usize);
    let mut places: Vec<QPlace> = primes.choose_multiple(rng, k).map(|&p| QPlace::Finite(p)).collect();
    places.sort();
    let mut entries: Vec<(QPlace, Q)> = Vec::new();
    let mut sum = q(0, 1);
    for &v in &places {
        let d = *denominators.choose(rng).unwrap();
        let x = q(rng.gen_range(0..d), d);
        sum += x;
        entries.push((v, x));
    }
    if rng.gen_bool(0.3) {
        entries.push((QPlace::Infinite, (q(1, 2))));
        sum += q(1, 2);
    }
    // balance at the next prime
    let rest = (-sum).reduced();
    let rest = rest - rest.floor();
    if rest != q(0, 1) {
        entries.push((QPlace::Finite(17), rest));
    }
    entries.retain(|e| e.1 != q(0, 1));
    BrauerClass::over_q(&entries).unwrap()
}

fn units_of(z: &AbelianExtQ) -> Vec<u64> {
    let n = z.conductor();
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

/// A θ value for a generator of order `ord` modulo `Γ_F`.
fn theta_value<R: Rng>(rng: &mut R, z: &AbelianExtQ, ord: u64) -> u64 {
    let n = z.conductor();
    let h = z.subgroup().iter().copied().collect::<std::collections::BTreeSet<u64>>();
    let ok: Vec<u64> =
        units_of(z).into_iter().filter(|&u| n == 1 || h.contains(&pow_mod(u, ord, n))).collect();
    *ok.choose(rng).unwrap()
}

fn order_mod_integral(v: &[Q]) -> u64 {
    v.iter().fold(1u64, |acc, x| {
        let d = *x.denom() as u64;
        acc / gcd(acc, d) * d
    })
}

/// A skeleton with `Γ_F = Z^r`, `|Γ_D : Γ_F| ≤ 16`, `Z₀` of conductor at
/// most 24 and `[D̄]` restricted from `Q`. Not necessarily valid.
pub fn raw_skeleton<R: Rng>(rng: &mut R) -> DivAlgSkeleton {
    let r = rng.gen_range(1..=2usize);
    let z = field(rng, 24);
    let gamma_d;
    let mut theta = Vec::new();
    if rng.gen_bool(0.5) {
        // diagonal family: independent generators e_i / a_i
        let a1 = rng.gen_range(1..=4i64);
        let a2 = if r == 2 { rng.gen_range(1..=(16 / a1).min(4)) } else { 1 };
        let a = if r == 2 { vec![a1 as u64, a2 as u64] } else { vec![a1 as u64] };
        gamma_d = GradeGroup::diagonal(&a.iter().map(|&x| x as i64).collect::<Vec<_>>());
        for (i, &ai) in a.iter().enumerate() {
            if ai > 1 {
                let mut v = vec![q(0, 1); r];
                v[i] = q(1, ai as i64);
                let u = theta_value(rng, &z, ai);
                theta.push((v, GaloisElement::Unit(u)));
            }
        }
    } else {
        // one or two extra vectors with small denominators
        let k = rng.gen_range(1..=2usize);
        let mut gens: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|j| q((i == j) as i64, 1)).collect()).collect();
        for _ in 0..k {
            let v: Vec<Q> = (0..r).map(|_| q(rng.gen_range(0..4), *[1, 2, 3, 4].choose(rng).unwrap())).collect();
            let ord = order_mod_integral(&v);
            let u = theta_value(rng, &z, ord);
            gens.push(v.clone());
            if ord > 1 {
                theta.push((v, GaloisElement::Unit(u)));
            }
        }
        gamma_d = GradeGroup::new(r, gens).unwrap();
    }
    let beta = class_over_q(rng, &[1, 2, 3, 4]).restrict_to(&z).unwrap();
    let mut d = DivAlgSkeleton {
        residue: ResidueKind::GlobalQ,
        gamma_f: GradeGroup::integral(r),
        gamma_d,
        center: Center::Abelian(z),
        theta,
        residue_algebra: ResidueAlgebra::Class(beta),
        pairing: None,
    };
    if r == 2 && rng.gen_bool(0.5) {
        for c in 1..=16 {
            let a = vec![vec![q(0, 1), q(c, 1)], vec![q(-c, 1), q(0, 1)]];
            let mut e = d.clone();
            e.pairing = Some(a);
            if validate(&e).is_ok() {
                d = e;
                break;
            }
        }
    }
    d
}

/// A valid skeleton, by rejection.
pub fn valid_skeleton<R: Rng>(rng: &mut R) -> DivAlgSkeleton {
    loop {
        let d = raw_skeleton(rng);
        if validate(&d).is_ok() {
            return d;
        }
    }
}

/// All lattices between `Γ_F` and `Γ_D`, from the oracle enumeration.
pub fn intermediate_lattices(d: &DivAlgSkeleton) -> Vec<GradeGroup> {
    let r = d.rank();
    oracle::intermediate_groups(&d.gamma_f, &d.gamma_d, 16)
        .into_iter()
        .map(|reps| {
            let mut gens: Vec<Vec<Q>> = d.gamma_f.basis().to_vec();
            gens.extend(reps);
            GradeGroup::new(r, gens).unwrap()
        })
        .collect()
}

/// Subfields of `(n, H)` as fields, via the oracle's subgroup lists.
pub fn subfields(l: &AbelianExtQ) -> Vec<AbelianExtQ> {
    let n = l.conductor();
    if n > oracle::DEFAULT_BOUND {
        return vec![l.clone()];
    }
    let h: std::collections::BTreeSet<u64> = l.subgroup().iter().copied().collect();
    let mut out: Vec<AbelianExtQ> = oracle::subgroup_enumeration(n)
        .unwrap()
        .into_iter()
        .filter(|s| h.iter().all(|x| s.contains(x)))
        .map(|s| AbelianExtQ::new(n, &s).unwrap())
        .collect();
    out.sort_by_key(|f| (f.conductor(), f.subgroup().to_vec()));
    out.dedup();
    out
}
