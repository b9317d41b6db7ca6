//! Brauer classes over abelian number fields, described by local invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abelian_ext::units::is_prime;
use crate::abelian_ext::{AbelianExtDoc, AbelianExtQ, ExtError, QPlace, ZPlace};
use crate::rational::{fmt_q, frac, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BrauerError {
    #[error(transparent)]
    Place(#[from] ExtError),
    #[error("invariants sum to {0}, not 0 mod 1")]
    SumNotZero(String),
    #[error("invariant {value} at real place {place} must be 0 or 1/2")]
    RealInvariant { place: ZPlace, value: String },
    #[error("complex place {0} cannot carry a nonzero invariant")]
    ComplexInvariant(ZPlace),
    #[error("place {0} listed twice")]
    DuplicatePlace(ZPlace),
    #[error("classes over different fields {0} and {1}")]
    BaseMismatch(String, String),
    #[error("infeasible at {place}: {reason}")]
    Infeasible { place: String, reason: String },
    #[error("bad invariant {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BrauerClass {
    base: AbelianExtQ,
    inv: BTreeMap<ZPlace, Q>,
}

impl BrauerClass {
    pub fn zero(base: &AbelianExtQ) -> Self {
        BrauerClass { base: base.clone(), inv: BTreeMap::new() }
    }

    pub fn new(base: &AbelianExtQ, entries: &[(ZPlace, Q)]) -> Result<Self, BrauerError> {
        let mut inv = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for &(w, x) in entries {
            base.check_place(w)?;
            if !seen.insert(w) {
                return Err(BrauerError::DuplicatePlace(w));
            }
            let x = frac(x);
            if w.base == QPlace::Infinite {
                if !base.is_real() && !x.is_zero() {
                    return Err(BrauerError::ComplexInvariant(w));
                }
                if !x.is_zero() && x != Q::new(1, 2) {
                    return Err(BrauerError::RealInvariant { place: w, value: fmt_q(&x) });
                }
            }
            if !x.is_zero() {
                inv.insert(w, x);
            }
        }
        let sum = frac(inv.values().fold(Q::zero(), |a, b| a + b));
        if !sum.is_zero() {
            return Err(BrauerError::SumNotZero(fmt_q(&sum)));
        }
        Ok(BrauerClass { base: base.clone(), inv })
    }

    /// A class over `Q` from `(place, invariant)` pairs.
    pub fn over_q(entries: &[(QPlace, Q)]) -> Result<Self, BrauerError> {
        let e: Vec<(ZPlace, Q)> = entries.iter().map(|&(v, x)| (ZPlace::over(v), x)).collect();
        Self::new(&AbelianExtQ::rationals(), &e)
    }

    pub fn base(&self) -> &AbelianExtQ {
        &self.base
    }

    pub fn invariant(&self, w: ZPlace) -> Q {
        self.inv.get(&w).copied().unwrap_or_else(Q::zero)
    }

    pub fn invariants(&self) -> impl Iterator<Item = (ZPlace, Q)> + '_ {
        self.inv.iter().map(|(w, x)| (*w, *x))
    }

    pub fn support(&self) -> BTreeSet<ZPlace> {
        self.inv.keys().copied().collect()
    }

    /// Places of `Q` below the support.
    pub fn support_below(&self) -> BTreeSet<QPlace> {
        self.inv.keys().map(|w| w.base).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.inv.is_empty()
    }

    pub fn local_index(&self, w: ZPlace) -> u64 {
        *self.invariant(w).denom() as u64
    }

    pub fn index(&self) -> u64 {
        self.inv.values().fold(1u64, |a, x| a.lcm(&(*x.denom() as u64)))
    }

    pub fn add(&self, other: &BrauerClass) -> Result<BrauerClass, BrauerError> {
        if self.base != other.base {
            return Err(BrauerError::BaseMismatch(self.base.to_string(), other.base.to_string()));
        }
        let mut inv = self.inv.clone();
        for (&w, &x) in &other.inv {
            let s = frac(inv.get(&w).copied().unwrap_or_else(Q::zero) + x);
            if s.is_zero() {
                inv.remove(&w);
            } else {
                inv.insert(w, s);
            }
        }
        Ok(BrauerClass { base: self.base.clone(), inv })
    }

    pub fn neg(&self) -> BrauerClass {
        let inv = self.inv.iter().map(|(&w, &x)| (w, frac(-x))).collect();
        BrauerClass { base: self.base.clone(), inv }
    }

    /// Restriction to an extension `big ⊇ base`: each place above `P` gets
    /// `[big_w : base_P] · inv_P`.
    pub fn restrict_to(&self, big: &AbelianExtQ) -> Result<BrauerClass, BrauerError> {
        let mut inv = BTreeMap::new();
        let mut by_base: BTreeMap<QPlace, Vec<(usize, Q)>> = BTreeMap::new();
        for (w, x) in self.invariants() {
            by_base.entry(w.base).or_default().push((w.index, x));
        }
        for (v, entries) in by_base {
            let map = self.base.place_map_from(big, v)?;
            let f = self.base.relative_local_degree(big, v)?;
            for (j, &below) in map.iter().enumerate() {
                if let Some(&(_, x)) = entries.iter().find(|(i, _)| *i == below) {
                    let y = frac(x * Q::from(f as i64));
                    if !y.is_zero() {
                        inv.insert(ZPlace { base: v, index: j }, y);
                    }
                }
            }
        }
        Ok(BrauerClass { base: big.clone(), inv })
    }

    /// `ind(β ⊗ big)`, computed from local degrees without listing places.
    pub fn restricted_index(&self, big: &AbelianExtQ) -> Result<u64, BrauerError> {
        let mut out = 1u64;
        for (w, x) in self.invariants() {
            let f = self.base.relative_local_degree(big, w.base)?;
            let d = *x.denom() as u64;
            out = out.lcm(&(d / d.gcd(&f)));
        }
        Ok(out)
    }

    /// Each local index divides the relative local degree of `big / base`.
    pub fn is_split_by(&self, big: &AbelianExtQ) -> Result<bool, BrauerError> {
        for (w, x) in self.invariants() {
            let f = self.base.relative_local_degree(big, w.base)?;
            if f % (*x.denom() as u64) != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_doc(&self) -> BrauerClassDoc {
        let q = self.base.is_rationals();
        BrauerClassDoc {
            base: self.base.to_doc(),
            inv: self
                .inv
                .iter()
                .map(|(w, x)| {
                    let p = if q { PlaceDoc::Q(w.base) } else { PlaceDoc::Z(*w) };
                    (p, fmt_q(x))
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &BrauerClassDoc) -> Result<Self, BrauerError> {
        let base = AbelianExtQ::from_doc(&doc.base)?;
        let mut entries = Vec::new();
        for (p, s) in &doc.inv {
            let x = parse_q(s).map_err(|_| BrauerError::Parse(s.clone()))?;
            let w = match *p {
                PlaceDoc::Q(v) => ZPlace::over(v),
                PlaceDoc::Z(w) => w,
            };
            entries.push((w, x));
        }
        Self::new(&base, &entries)
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.base.is_rationals();
        let parts: Vec<String> = self
            .inv
            .iter()
            .map(|(w, x)| if q { format!("{}:{}", w.base, fmt_q(x)) } else { format!("{w}:{}", fmt_q(x)) })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceDoc {
    Q(QPlace),
    Z(ZPlace),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerClassDoc {
    pub base: AbelianExtDoc,
    pub inv: Vec<(PlaceDoc, String)>,
}

/// A class `α` over `Q` whose restriction to `z` has index `m`, local index
/// `t` above each targeted place, and no support on `avoid`. Auxiliary
/// primes are the least eligible ones up to `prime_scan_bound`.
pub fn prescribe_class(
    z: &AbelianExtQ,
    m: u64,
    targets: &[(ZPlace, u64)],
    avoid: &BTreeSet<QPlace>,
    prime_scan_bound: u64,
) -> Result<BrauerClass, BrauerError> {
    let infeasible = |place: String, reason: &str| BrauerError::Infeasible { place, reason: reason.to_string() };
    if m == 0 {
        return Err(infeasible("-".into(), "index must be positive"));
    }
    let mut per_base: BTreeMap<QPlace, u64> = BTreeMap::new();
    for &(w, t) in targets {
        z.check_place(w)?;
        if avoid.contains(&w.base) {
            return Err(infeasible(w.to_string(), "targeted place is in the avoid set"));
        }
        if t == 0 || m % t != 0 {
            return Err(infeasible(w.to_string(), "target local index must divide m"));
        }
        if let Some(&old) = per_base.get(&w.base) {
            if old != t {
                return Err(infeasible(w.to_string(), "places over one prime need equal targets"));
            }
        }
        per_base.insert(w.base, t);
    }
    let mut inv: BTreeMap<QPlace, Q> = BTreeMap::new();
    for (&v, &t) in &per_base {
        if t == 1 {
            continue;
        }
        match v {
            QPlace::Infinite => {
                if t != 2 || !z.is_real() {
                    return Err(infeasible(v.to_string(), "a real place only admits index 2, and only if it stays real"));
                }
                inv.insert(v, Q::new(1, 2));
            }
            QPlace::Finite(_) => {
                let f = z.local_degree(v);
                inv.insert(v, Q::new(1, (t * f) as i64));
            }
        }
    }
    let reached = per_base.values().fold(1u64, |a, t| a.lcm(t));
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let eligible = |q: u64, used: &BTreeSet<u64>| {
        !avoid.contains(&QPlace::Finite(q)) && !per_base.contains_key(&QPlace::Finite(q)) && !used.contains(&q)
    };
    if reached < m {
        let q = (2..=prime_scan_bound)
            .find(|&q| is_prime(q) && eligible(q, &used))
            .ok_or_else(|| infeasible("auxiliary".into(), "no free prime within the scan bound"))?;
        used.insert(q);
        let f = z.local_degree(QPlace::Finite(q));
        inv.insert(QPlace::Finite(q), Q::new(1, (m * f) as i64));
    }
    let sigma = frac(inv.values().fold(Q::zero(), |a, b| a + b));
    if !sigma.is_zero() {
        let q = (2..=prime_scan_bound)
            .find(|&q| {
                if !is_prime(q) || !eligible(q, &used) {
                    return false;
                }
                let f = z.local_degree(QPlace::Finite(q));
                let r = frac(sigma * Q::from(f as i64));
                m % (*r.denom() as u64) == 0
            })
            .ok_or_else(|| infeasible("auxiliary".into(), "no prime within the scan bound balances the sum"))?;
        inv.insert(QPlace::Finite(q), frac(-sigma));
    }
    let entries: Vec<(QPlace, Q)> = inv.into_iter().collect();
    let alpha = BrauerClass::over_q(&entries)?;

    // independent re-check through restriction
    let rz = alpha.restrict_to(z)?;
    for (&v, &t) in &per_base {
        for w in z.places(v) {
            if rz.local_index(w) != t {
                return Err(infeasible(w.to_string(), "restricted local index misses its target"));
            }
        }
    }
    if rz.index() != m {
        return Err(infeasible("global".into(), "restricted index differs from m"));
    }
    if alpha.support_below().iter().any(|v| avoid.contains(v)) {
        return Err(infeasible("avoid".into(), "support meets the avoid set"));
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> QPlace {
        QPlace::Finite(p)
    }

    fn cls(e: &[(QPlace, i64, i64)]) -> BrauerClass {
        let v: Vec<(QPlace, Q)> = e.iter().map(|&(p, a, b)| (p, Q::new(a, b))).collect();
        BrauerClass::over_q(&v).unwrap()
    }

    #[test]
    fn validation() {
        assert!(BrauerClass::over_q(&[(f(3), Q::new(1, 2))]).is_err());
        assert!(BrauerClass::over_q(&[(f(3), Q::new(1, 3)), (QPlace::Infinite, Q::new(2, 3))]).is_err());
        assert!(BrauerClass::over_q(&[(f(4), Q::new(1, 2)), (f(3), Q::new(1, 2))]).is_err());
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        let e = [(ZPlace::over(QPlace::Infinite), Q::new(1, 2)), (ZPlace::over(f(3)), Q::new(1, 2))];
        assert_eq!(BrauerClass::new(&qi, &e), Err(BrauerError::ComplexInvariant(ZPlace::over(QPlace::Infinite))));
    }

    #[test]
    fn restriction() {
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        let a = cls(&[(f(3), 1, 2), (QPlace::Infinite, 1, 2)]);
        assert!(a.restrict_to(&qi).unwrap().is_zero());
        let b = cls(&[(f(5), 1, 2), (QPlace::Infinite, 1, 2)]);
        let r = b.restrict_to(&qi).unwrap();
        assert_eq!(r.invariant(ZPlace { base: f(5), index: 0 }), Q::new(1, 2));
        assert_eq!(r.invariant(ZPlace { base: f(5), index: 1 }), Q::new(1, 2));
        assert_eq!(r.support().len(), 2);
    }

    #[test]
    fn arithmetic() {
        let a = cls(&[(f(2), 1, 2), (f(3), 1, 2)]);
        assert!(a.add(&a).unwrap().is_zero());
        assert_eq!(a.index(), 2);
        let b = cls(&[(f(2), 1, 3), (f(7), 2, 3)]);
        assert_eq!(b.add(&b).unwrap(), cls(&[(f(2), 2, 3), (f(7), 1, 3)]));
        assert_eq!(b.index(), 3);
        assert_eq!(BrauerClass::zero(&AbelianExtQ::rationals()).index(), 1);
    }

    #[test]
    fn splitting() {
        let a = cls(&[(f(3), 1, 2), (QPlace::Infinite, 1, 2)]);
        assert!(a.is_split_by(&AbelianExtQ::quadratic(-15).unwrap()).unwrap());
        let b = cls(&[(f(3), 1, 2), (f(5), 1, 2)]);
        assert!(!b.is_split_by(&AbelianExtQ::quadratic(-1).unwrap()).unwrap());
    }

    #[test]
    fn prescribed() {
        let r = AbelianExtQ::rationals();
        let a = prescribe_class(&r, 2, &[(ZPlace::over(f(3)), 2)], &BTreeSet::new(), 100).unwrap();
        assert_eq!(a, cls(&[(f(2), 1, 2), (f(3), 1, 2)]));
        assert!(prescribe_class(&r, 1, &[], &BTreeSet::new(), 100).unwrap().is_zero());
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        let a = prescribe_class(&qi, 2, &[(ZPlace::over(f(3)), 2)], &BTreeSet::new(), 100).unwrap();
        assert_eq!(a.invariant(ZPlace::over(f(3))), Q::new(1, 4));
        assert_eq!(a.restrict_to(&qi).unwrap().index(), 2);
        let err = prescribe_class(&qi, 2, &[(ZPlace::over(QPlace::Infinite), 2)], &BTreeSet::new(), 100);
        assert!(matches!(err, Err(BrauerError::Infeasible { .. })));
    }

    #[test]
    fn doc_round_trip() {
        let a = cls(&[(f(2), 1, 3), (f(7), 2, 3)]);
        let s = serde_json::to_string(&a.to_doc()).unwrap();
        assert_eq!(s, r#"{"base":{"conductor":1,"subgroup":[0]},"inv":[["2","1/3"],["7","2/3"]]}"#);
        let back: BrauerClassDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(BrauerClass::from_doc(&back).unwrap(), a);
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        let r = cls(&[(f(5), 1, 2), (QPlace::Infinite, 1, 2)]).restrict_to(&qi).unwrap();
        let s = serde_json::to_string(&r.to_doc()).unwrap();
        let back: BrauerClassDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(BrauerClass::from_doc(&back).unwrap(), r);
    }
}
