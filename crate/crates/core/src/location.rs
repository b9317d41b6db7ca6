//! Fibers of the tame Brauer group with residue field `Q`: where crossed
//! products live, explicit noncrossed witnesses, and exponent bounds.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian_ext::units::primes_up_to;
use crate::abelian_ext::{
    first_cover, infinite_height, splitting_cover_search, AbelianExtDoc, AbelianExtQ, Demand, HeightAnswer, QPlace,
    ZPlace,
};
use crate::brauer_q::{prescribe_class, BrauerClass, BrauerClassDoc, BrauerError};
use crate::config::Bounds;
use crate::qlattice::factorize;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocationError {
    #[error("the fiber class must live over Z")]
    BaseMismatch,
    #[error("ratio must be positive")]
    BadRatio,
    #[error("m must be at least {0}")]
    SmallM(u64),
    #[error("fewer than two primes found up to {0}")]
    ScanBound(u64),
    #[error("fiber consists of crossed products; no noncrossed witness exists")]
    AllCrossed,
    #[error("fiber classification undetermined: {0}")]
    Undetermined(String),
    #[error("{m} is not divisible by {p}^{n_p} and ind β₀ = {index}")]
    NotDivisible { m: u64, p: u64, n_p: u32, index: u64 },
    #[error("the bound for p = {0} does not apply: {1}")]
    NotApplicable(u64, String),
    #[error("no witness within support bound {support} and conductor bound {conductor}")]
    WitnessBound { support: usize, conductor: u64 },
    #[error(transparent)]
    Brauer(#[from] BrauerError),
    #[error("{0}")]
    Other(String),
}

/// A fiber, through its invariants: the common residue center `Z`, one
/// residue class `β₀`, and `ρ = ind c / ind c̄`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub z: AbelianExtQ,
    pub beta0: BrauerClass,
    pub ratio: u64,
}

impl Fiber {
    pub fn new(z: AbelianExtQ, beta0: BrauerClass, ratio: u64) -> Result<Self, LocationError> {
        if beta0.base() != &z {
            return Err(LocationError::BaseMismatch);
        }
        if ratio == 0 {
            return Err(LocationError::BadRatio);
        }
        Ok(Fiber { z, beta0, ratio })
    }

    pub fn trivial(z: &AbelianExtQ) -> Self {
        Fiber { z: z.clone(), beta0: BrauerClass::zero(z), ratio: 1 }
    }

    pub fn to_doc(&self) -> FiberDoc {
        FiberDoc { z: self.z.to_doc(), beta0: self.beta0.to_doc(), ratio: self.ratio }
    }

    pub fn from_doc(doc: &FiberDoc) -> Result<Self, LocationError> {
        let z = AbelianExtQ::from_doc(&doc.z).map_err(|e| LocationError::Other(e.to_string()))?;
        let beta0 = BrauerClass::from_doc(&doc.beta0)?;
        Fiber::new(z, beta0, doc.ratio)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDoc {
    #[serde(rename = "Z")]
    pub z: AbelianExtDoc,
    pub beta0: BrauerClassDoc,
    pub ratio: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub detail: String,
}

fn step(trace: &mut Vec<TraceStep>, name: &str, detail: impl Into<String>) {
    trace.push(TraceStep { step: name.to_string(), detail: detail.into() });
}

/// `d_v(m)`: `m` at finite places, `gcd(m, 2)` at the real place when `Z`
/// is real, `1` otherwise.
pub fn d_value(m: u64, v: QPlace, z: &AbelianExtQ) -> u64 {
    match v {
        QPlace::Finite(_) => m,
        QPlace::Infinite if z.is_real() => m.gcd(&2),
        QPlace::Infinite => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionB {
    Holds(AbelianExtQ),
    /// The search space was nonempty but had no such cover.
    FailsWithinBound { bound: u64 },
    /// No conductor up to the bound can carry a cover of this degree.
    Unknown { bound: u64 },
}

/// An `m`-cover of `Z` with full local degree `d_v(m)` at each `v ∈ S`.
pub fn condition_b(fiber: &Fiber, m: u64, s: &[QPlace], require_cyclic: bool, bound: u64) -> ConditionB {
    let demands: Vec<Demand> = s.iter().map(|&v| Demand::Exactly(v, d_value(m, v, &fiber.z))).collect();
    match first_cover(&fiber.z, m, &demands, require_cyclic, bound) {
        Ok(l) => ConditionB::Holds(l),
        Err(_) => {
            let deg = m * fiber.z.degree();
            let n0 = fiber.z.conductor();
            let room = (1..=bound / n0).any(|k| crate::abelian_ext::units::totient(k * n0) % deg == 0);
            if room {
                ConditionB::FailsWithinBound { bound }
            } else {
                ConditionB::Unknown { bound }
            }
        }
    }
}

/// Primes up to the scan bound (plus those dividing the conductor), stably
/// sorted by decreasing `v_p([Z_q : Q_q])`.
pub fn prime_enumeration(z: &AbelianExtQ, p: u64, scan: u64) -> Vec<u64> {
    let mut primes = primes_up_to(scan);
    for (q, _) in factorize(z.conductor()) {
        if q > scan {
            primes.push(q);
        }
    }
    let mut keyed: Vec<(u32, u64)> = primes
        .into_iter()
        .map(|q| (crate::abelian_ext::units::split_prime(z.local_degree(QPlace::Finite(q)), p).0, q))
        .collect();
    keyed.sort_by(|a, b| b.0.cmp(&a.0));
    keyed.into_iter().map(|(_, q)| q).collect()
}

/// The two leading primes of the enumeration for each `p | m`.
pub fn compute_t(fiber: &Fiber, m: u64, scan: u64) -> Result<Vec<QPlace>, LocationError> {
    if m < 2 {
        return Err(LocationError::SmallM(2));
    }
    let exponent = *fiber.z.galois_group().shape.invariant_factors.last().unwrap_or(&1);
    let mut t = BTreeSet::new();
    for (p, _) in factorize(m) {
        let e = prime_enumeration(&fiber.z, p, scan);
        if e.len() < 2 {
            return Err(LocationError::ScanBound(scan));
        }
        // unscanned unramified primes have p-part at most that of the exponent
        let second = crate::abelian_ext::units::split_prime(fiber.z.local_degree(QPlace::Finite(e[1])), p).0;
        if second < crate::abelian_ext::units::split_prime(exponent, p).0 {
            return Err(LocationError::ScanBound(scan));
        }
        t.insert(QPlace::Finite(e[0]));
        t.insert(QPlace::Finite(e[1]));
    }
    Ok(t.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NpCase {
    CyclicFiniteHeight { k_p: u32, s_p: u32 },
    NoncyclicOdd { s_p: u32 },
    NoncyclicTwo { r_2: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NpBound {
    pub p: u64,
    pub n_p: u32,
    pub case: NpCase,
}

fn sylow_cyclic(z: &AbelianExtQ, p: u64) -> bool {
    z.galois_group()
        .shape
        .invariant_factors
        .iter()
        .filter(|&&d| d % p == 0)
        .count()
        <= 1
}

pub fn np_bound(fiber: &Fiber, p: u64, bounds: &Bounds) -> Result<NpBound, LocationError> {
    let z = &fiber.z;
    if !sylow_cyclic(z, p) {
        let case = if p == 2 {
            NpCase::NoncyclicTwo { r_2: z.r2() }
        } else {
            NpCase::NoncyclicOdd { s_p: z.roots_of_unity_exponent(p) }
        };
        let n_p = match case {
            NpCase::NoncyclicTwo { r_2 } => 2 * (r_2 + 2) + 1,
            NpCase::NoncyclicOdd { s_p } => 2 * s_p + 1,
            _ => unreachable!(),
        };
        return Ok(NpBound { p, n_p, case });
    }
    if !z.is_cyclic() {
        return Err(LocationError::NotApplicable(p, "the p-Sylow subgroup is cyclic but Z is not".into()));
    }
    let h = infinite_height(z, bounds.conductor).map_err(|e| LocationError::Other(e.to_string()))?;
    if let HeightAnswer::UnknownBeyondBound { bound } = h.answer {
        return Err(LocationError::Undetermined(format!("height unknown beyond conductor {bound}")));
    }
    match h.obstruction_exponent(p) {
        Some(k_p) => {
            let s_p = z.roots_of_unity_exponent(p);
            Ok(NpBound { p, n_p: k_p + s_p + 2, case: NpCase::CyclicFiniteHeight { k_p, s_p } })
        }
        None => Err(LocationError::NotApplicable(p, "Z has cyclic p^k-covers for every k".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberStatus {
    AllCrossed,
    NoncrossedExist,
    Unknown { bound: u64 },
}

impl FiberStatus {
    pub fn name(&self) -> &'static str {
        match self {
            FiberStatus::AllCrossed => "AllCrossed",
            FiberStatus::NoncrossedExist => "NoncrossedExist",
            FiberStatus::Unknown { .. } => "Unknown",
        }
    }
}

/// Outcome of the bounded search for an abelian cover splitting `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub conductor_bound: u64,
    /// Some conductor up to the bound could carry a cover of degree `m`.
    pub nonvacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub m: u64,
    pub gamma: BrauerClass,
    pub alpha: BrauerClass,
    pub t: Vec<QPlace>,
    pub s: Vec<QPlace>,
    pub s_prime: Vec<QPlace>,
    pub refutation: Refutation,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberVerdict {
    pub status: FiberStatus,
    pub witness: Option<Witness>,
    pub bounds: BTreeMap<u64, NpBound>,
    pub trace: Vec<TraceStep>,
}

/// The prime `p` and exponent `n_p` certifying noncrossed products, or the
/// all-crossed verdict.
fn certificate(fiber: &Fiber, bounds: &Bounds, trace: &mut Vec<TraceStep>) -> Result<(FiberStatus, BTreeMap<u64, NpBound>), LocationError> {
    let z = &fiber.z;
    let g = z.galois_group();
    step(trace, "galois-group", format!("Gal(Z/Q) has invariant factors {:?}", g.shape.invariant_factors));
    let mut np = BTreeMap::new();
    if g.shape.is_cyclic() {
        let h = infinite_height(z, bounds.conductor).map_err(|e| LocationError::Other(e.to_string()))?;
        for n in &h.notes {
            step(trace, "height-evidence", n.clone());
        }
        match h.answer {
            HeightAnswer::Yes => {
                step(trace, "height", "cyclic of infinite height");
                return Ok((FiberStatus::AllCrossed, np));
            }
            HeightAnswer::UnknownBeyondBound { bound } => {
                step(trace, "height", format!("undetermined within conductor {bound}"));
                return Ok((FiberStatus::Unknown { bound }, np));
            }
            HeightAnswer::No => {
                step(trace, "height", format!("finite height at p ∈ {:?}", h.finite_primes()));
                for p in h.finite_primes() {
                    np.insert(p, np_bound(fiber, p, bounds)?);
                }
            }
        }
    } else {
        for (p, _) in factorize(g.order()) {
            if !sylow_cyclic(z, p) {
                np.insert(p, np_bound(fiber, p, bounds)?);
            }
        }
    }
    for b in np.values() {
        step(trace, "exponent-bound", format!("p = {}: n_p = {} from {:?}", b.p, b.n_p, b.case));
        if matches!(b.case, NpCase::CyclicFiniteHeight { .. }) {
            step(
                trace,
                "sharper-bound-note",
                format!("for non-exceptional Z an exponent one smaller may suffice; {} is used", b.n_p),
            );
        }
    }
    Ok((FiberStatus::NoncrossedExist, np))
}

pub fn classify(fiber: &Fiber, bounds: &Bounds) -> Result<FiberVerdict, LocationError> {
    let mut trace = Vec::new();
    let (status, np) = certificate(fiber, bounds, &mut trace)?;
    if status != FiberStatus::NoncrossedExist {
        return Ok(FiberVerdict { status, witness: None, bounds: np, trace });
    }
    let b = np.values().next().expect("a certifying prime");
    let m = fiber.beta0.index().lcm(&b.p.pow(b.n_p));
    step(&mut trace, "witness-index", format!("m = lcm(ind β₀, {}^{}) = {m}", b.p, b.n_p));
    match witness_noncrossed(fiber, m, bounds, &BTreeSet::new()) {
        Ok(w) => Ok(FiberVerdict { status, witness: Some(w), bounds: np, trace }),
        Err(e) => {
            step(&mut trace, "witness-failed", e.to_string());
            Ok(FiberVerdict { status: FiberStatus::Unknown { bound: bounds.conductor }, witness: None, bounds: np, trace })
        }
    }
}

/// `γ = α^Z + β₀` of index `m` with full local index on a set `S` of primes
/// outside `T ∪ exclude ∪ supp β₀`, for which no abelian splitting `m`-cover
/// exists up to the conductor bound.
pub fn witness_noncrossed(
    fiber: &Fiber,
    m: u64,
    bounds: &Bounds,
    exclude: &BTreeSet<QPlace>,
) -> Result<Witness, LocationError> {
    let mut trace = Vec::new();
    let (status, np) = certificate(fiber, bounds, &mut trace)?;
    match status {
        FiberStatus::AllCrossed => return Err(LocationError::AllCrossed),
        FiberStatus::Unknown { bound } => {
            return Err(LocationError::Undetermined(format!("height beyond conductor {bound}")))
        }
        FiberStatus::NoncrossedExist => {}
    }
    let index0 = fiber.beta0.index();
    let b = np
        .values()
        .find(|b| m % b.p.pow(b.n_p) == 0)
        .ok_or_else(|| {
            let b = np.values().next().expect("a certifying prime");
            LocationError::NotDivisible { m, p: b.p, n_p: b.n_p, index: index0 }
        })?;
    if m % index0 != 0 {
        return Err(LocationError::NotDivisible { m, p: b.p, n_p: b.n_p, index: index0 });
    }
    step(&mut trace, "certifying-prime", format!("{}^{} divides m = {m}", b.p, b.n_p));
    let z = &fiber.z;
    let t = compute_t(fiber, m, bounds.prime_scan)?;
    step(&mut trace, "T", format!("{t:?}"));
    let support0 = fiber.beta0.support_below();
    let order = prime_enumeration(z, b.p, bounds.prime_scan);
    let candidates: Vec<u64> = order
        .into_iter()
        .filter(|&q| {
            let v = QPlace::Finite(q);
            !t.contains(&v) && !exclude.contains(&v) && !support0.contains(&v)
        })
        .collect();
    for size in 2..=bounds.support.max(2) {
        if candidates.len() < size {
            return Err(LocationError::ScanBound(bounds.prime_scan));
        }
        let s: Vec<QPlace> = candidates[..size].iter().map(|&q| QPlace::Finite(q)).collect();
        let mut local = trace.clone();
        step(&mut local, "S", format!("{s:?}"));
        let s_prime: Vec<QPlace> = s
            .iter()
            .copied()
            .filter(|&v| z.places(v).iter().all(|&w| fiber.beta0.local_index(w) < d_value(m, v, z)))
            .collect();
        step(&mut local, "S'", format!("{s_prime:?}"));
        let mut avoid: BTreeSet<QPlace> = t.iter().copied().collect();
        avoid.extend(s.iter().filter(|v| !s_prime.contains(v)));
        avoid.extend(support0.iter().copied());
        avoid.extend(exclude.iter().copied());
        let targets: Vec<(ZPlace, u64)> = s_prime.iter().map(|&v| (ZPlace::over(v), d_value(m, v, z))).collect();
        let alpha = prescribe_class(z, m, &targets, &avoid, bounds.prime_scan)?;
        step(&mut local, "alpha", alpha.to_string());
        let gamma = alpha.restrict_to(z)?.add(&fiber.beta0)?;
        step(&mut local, "gamma", gamma.to_string());

        // re-verification
        if gamma.index() != m {
            return Err(LocationError::Other(format!("ind γ = {} ≠ {m}", gamma.index())));
        }
        for &v in &s_prime {
            for w in z.places(v) {
                if gamma.local_index(w) != d_value(m, v, z) {
                    return Err(LocationError::Other(format!("local index at {w} misses d_v(m)")));
                }
            }
        }
        if gamma.support_below().iter().any(|v| t.contains(v)) {
            return Err(LocationError::Other("γ is supported on T".into()));
        }
        step(&mut local, "verified", format!("ind γ = {m}, full local index on S', support disjoint from T"));

        let mut reqs: BTreeMap<QPlace, u64> = BTreeMap::new();
        for (w, _) in gamma.invariants() {
            let e = reqs.entry(w.base).or_insert(1);
            *e = e.lcm(&gamma.local_index(w));
        }
        let reqs: Vec<(QPlace, u64)> = reqs.into_iter().collect();
        match splitting_cover_search(z, m, &reqs, false, bounds.conductor) {
            Ok(l) => {
                step(&mut trace, "S-rejected", format!("S = {s:?}: abelian cover {l} splits γ; enlarging S"));
                continue;
            }
            Err(_) => {
                let deg = m * z.degree();
                let n0 = z.conductor();
                let nonvacuous =
                    (1..=bounds.conductor / n0).any(|k| crate::abelian_ext::units::totient(k * n0) % deg == 0);
                step(
                    &mut local,
                    "refutation",
                    format!(
                        "no abelian {m}-cover of Z splitting γ with conductor ≤ {}{}",
                        bounds.conductor,
                        if nonvacuous { "" } else { " (no conductor in range has room for one)" }
                    ),
                );
                return Ok(Witness {
                    m,
                    gamma,
                    alpha,
                    t,
                    s,
                    s_prime,
                    refutation: Refutation { conductor_bound: bounds.conductor, nonvacuous },
                    trace: local,
                });
            }
        }
    }
    Err(LocationError::WitnessBound { support: bounds.support, conductor: bounds.conductor })
}

/// Classes `α^Z + β₀` of index exactly `m`, with `α` running over classes
/// supported on small primes and `∞`, by support size, then support, then
/// invariants.
pub fn residue_classes_sample(fiber: &Fiber, m: u64, count: usize, bounds: &Bounds) -> Vec<BrauerClass> {
    let z = &fiber.z;
    let mut places: Vec<QPlace> = primes_up_to(bounds.prime_scan.min(23)).into_iter().map(QPlace::Finite).collect();
    places.push(QPlace::Infinite);
    let denom = |v: QPlace| -> u64 {
        match v {
            QPlace::Infinite => 2,
            QPlace::Finite(_) => m * z.local_degree(v),
        }
    };
    let mut out: Vec<BrauerClass> = Vec::new();
    let mut seen = BTreeSet::new();
    for size in 0..=bounds.support.min(places.len()) {
        for combo in combinations(places.len(), size) {
            let chosen: Vec<QPlace> = combo.iter().map(|&i| places[i]).collect();
            let dens: Vec<u64> = chosen.iter().map(|&v| denom(v)).collect();
            let mut nums = vec![1u64; size.saturating_sub(1)];
            loop {
                if let Some(alpha) = build_alpha(&chosen, &dens, &nums) {
                    if let Ok(g) = alpha.restrict_to(z).and_then(|r| r.add(&fiber.beta0)) {
                        if g.index() == m && seen.insert(g.clone()) {
                            out.push(g);
                            if out.len() >= count {
                                return out;
                            }
                        }
                    }
                }
                // next numerator vector (odometer, last digit fastest)
                let mut i = nums.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if nums[i] + 1 < dens[i] {
                        nums[i] += 1;
                        for x in nums.iter_mut().skip(i + 1) {
                            *x = 1;
                        }
                        break;
                    }
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if nums.is_empty() || i == usize::MAX {
                    break;
                }
            }
        }
    }
    out
}

fn build_alpha(places: &[QPlace], dens: &[u64], nums: &[u64]) -> Option<BrauerClass> {
    if places.is_empty() {
        return BrauerClass::over_q(&[]).ok();
    }
    let mut entries: Vec<(QPlace, Q)> = Vec::new();
    let mut sum = Q::from(0);
    for i in 0..nums.len() {
        let x = Q::new(nums[i] as i64, dens[i] as i64);
        sum += x;
        entries.push((places[i], x));
    }
    let last = crate::rational::frac(-sum);
    let k = places.len() - 1;
    if last == Q::from(0) || (dens[k] as i64) % last.denom() != 0 {
        return None;
    }
    entries.push((places[k], last));
    BrauerClass::over_q(&entries).ok()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> AbelianExtQ {
        AbelianExtQ::quadratic(-1).unwrap()
    }

    #[test]
    fn d_values() {
        assert_eq!(d_value(6, QPlace::Finite(7), &qi()), 6);
        assert_eq!(d_value(6, QPlace::Infinite, &AbelianExtQ::rationals()), 2);
        assert_eq!(d_value(6, QPlace::Infinite, &qi()), 1);
    }

    #[test]
    fn t_sets() {
        let f = |z: AbelianExtQ| compute_t(&Fiber::trivial(&z), 2, 500).unwrap();
        let two_three = vec![QPlace::Finite(2), QPlace::Finite(3)];
        assert_eq!(f(AbelianExtQ::rationals()), two_three);
        assert_eq!(f(qi()), two_three);
        assert_eq!(f(AbelianExtQ::cyclotomic(5).unwrap()), two_three);
    }

    #[test]
    fn np_bounds() {
        let b = Bounds::default();
        let n = np_bound(&Fiber::trivial(&qi()), 2, &b).unwrap();
        assert_eq!(n.n_p, 5);
        assert_eq!(n.case, NpCase::CyclicFiniteHeight { k_p: 1, s_p: 2 });
        let n = np_bound(&Fiber::trivial(&AbelianExtQ::cyclotomic(8).unwrap()), 2, &b).unwrap();
        assert_eq!((n.n_p, n.case), (11, NpCase::NoncyclicTwo { r_2: 3 }));
        let c7 = AbelianExtQ::from_generators(7, &[6]).unwrap();
        let c9 = AbelianExtQ::from_generators(9, &[8]).unwrap();
        let n = np_bound(&Fiber::trivial(&c7.compositum(&c9)), 3, &b).unwrap();
        assert_eq!((n.n_p, n.case), (1, NpCase::NoncyclicOdd { s_p: 0 }));
    }

    #[test]
    fn samples() {
        let b = Bounds::default();
        let r = AbelianExtQ::rationals();
        let s = residue_classes_sample(&Fiber::trivial(&r), 1, 3, &b);
        assert_eq!(s, vec![BrauerClass::zero(&r)]);
        let s = residue_classes_sample(&Fiber::trivial(&r), 2, 3, &b);
        let first = BrauerClass::over_q(&[(QPlace::Finite(2), Q::new(1, 2)), (QPlace::Finite(3), Q::new(1, 2))]).unwrap();
        assert_eq!(s[0], first);
        assert_eq!(s.len(), 3);
        let s = residue_classes_sample(&Fiber::trivial(&qi()), 2, 2, &b);
        assert!(s.iter().all(|g| g.index() == 2));
    }

    #[test]
    fn condition_b_examples() {
        let f = Fiber::trivial(&AbelianExtQ::rationals());
        let s = [QPlace::Finite(3), QPlace::Finite(5), QPlace::Infinite];
        assert_eq!(condition_b(&f, 2, &s, false, 2000), ConditionB::Holds(AbelianExtQ::quadratic(-3).unwrap()));
        assert_eq!(condition_b(&f, 1, &s, false, 2000), ConditionB::Holds(AbelianExtQ::rationals()));
        assert_eq!(
            condition_b(&Fiber::trivial(&qi()), 2, &[], true, 2000),
            ConditionB::FailsWithinBound { bound: 2000 }
        );
    }

    #[test]
    fn classification() {
        let b = Bounds::default();
        let v = classify(&Fiber::trivial(&AbelianExtQ::rationals()), &b).unwrap();
        assert_eq!(v.status, FiberStatus::AllCrossed);
        assert!(v.witness.is_none());
        let v = classify(&Fiber::trivial(&qi()), &b).unwrap();
        assert_eq!(v.status, FiberStatus::NoncrossedExist);
        assert_eq!(v.bounds[&2].n_p, 5);
        let w = v.witness.unwrap();
        assert_eq!(w.m, 32);
        assert_eq!(w.gamma.index(), 32);
        assert_eq!(w.s, vec![QPlace::Finite(7), QPlace::Finite(11)]);
        assert!(witness_noncrossed(&Fiber::trivial(&AbelianExtQ::rationals()), 4, &b, &BTreeSet::new()).is_err());
    }
}
