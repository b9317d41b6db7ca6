//! Finite abelian extensions of `Q`, described by a conductor `n` and the
//! subgroup `H ≤ (Z/n)^×` fixing the field inside `Q(ζ_n)`.

mod group;
mod search;
pub mod units;

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use group::{primary_complement, Complement, Decomposition, FiniteAbelianGroup, GroupError};
pub use search::{
    all_covers, cover_search, first_cover, infinite_height, splitting_cover_search, CoverError, Demand, HeightAnswer, HeightReport,
    SearchStats,
};

use crate::qlattice::{factorize, QuotientShape};
use units::{mul_mod, pow_mod, split_prime, subgroup_generated, totient, ResidueSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("{0} is not a unit mod {1}")]
    NotAUnit(u64, u64),
    #[error("the given residues mod {0} are not closed under multiplication")]
    NotASubgroup(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a squarefree integer other than 0 and 1")]
    BadQuadratic(i64),
    #[error("{sub} is not a subfield of {sup}")]
    NotSubfield { sub: String, sup: String },
    #[error("no place with index {index} above {base} (there are {count})")]
    NoSuchPlace { base: QPlace, index: usize, count: usize },
    #[error("malformed place {0:?}")]
    BadPlace(String),
}

/// A place of `Q`: a prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QPlace {
    Finite(u64),
    Infinite,
}

impl fmt::Display for QPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QPlace::Finite(p) => write!(f, "{p}"),
            QPlace::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for QPlace {
    type Err = ExtError;
    fn from_str(s: &str) -> Result<Self, ExtError> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(QPlace::Infinite);
        }
        let p: u64 = s.parse().map_err(|_| ExtError::BadPlace(s.to_string()))?;
        if !units::is_prime(p) {
            return Err(ExtError::NotPrime(p));
        }
        Ok(QPlace::Finite(p))
    }
}

impl Serialize for QPlace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QPlace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A place of an abelian field `Z`: the place of `Q` below it and the index
/// of the corresponding coset of the decomposition group in `Gal(Z/Q)`,
/// cosets being ordered by their least unit representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZPlace {
    pub base: QPlace,
    pub index: usize,
}

impl ZPlace {
    pub fn over(base: QPlace) -> Self {
        ZPlace { base, index: 0 }
    }
}

impl fmt::Display for ZPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.base, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianExtQ {
    conductor: u64,
    subgroup: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianExtDoc {
    pub conductor: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u64>>,
}

/// `Gal(Z/Q) = U_n / H`, cosets listed by least representative.
#[derive(Debug, Clone)]
pub struct GaloisGroup {
    pub shape: QuotientShape,
    pub cosets: Vec<u64>,
    decomposition: Decomposition,
    coset_of: Vec<usize>,
    basis_units: Vec<u64>,
    conductor: u64,
}

impl GaloisGroup {
    pub fn order(&self) -> u64 {
        self.shape.order()
    }

    /// Coordinates of the class of the unit `u` in the invariant-factor basis.
    pub fn coordinates(&self, u: u64) -> Vec<i64> {
        let c = self.coset_of[(u % self.conductor) as usize];
        self.decomposition.coordinates(c).to_vec()
    }

    /// A unit in the class with the given coordinates.
    pub fn unit(&self, coords: &[i64]) -> u64 {
        let n = self.conductor;
        let mut u = 1 % n;
        for ((&b, &c), &d) in self.basis_units.iter().zip(coords).zip(self.shape.invariant_factors.iter()) {
            u = mul_mod(u, pow_mod(b, c.rem_euclid(d as i64) as u64, n), n);
        }
        u
    }

    pub fn basis_units(&self) -> &[u64] {
        &self.basis_units
    }
}

impl AbelianExtQ {
    pub fn rationals() -> Self {
        AbelianExtQ { conductor: 1, subgroup: vec![0] }
    }

    pub fn cyclotomic(n: u64) -> Result<Self, ExtError> {
        Self::from_generators(n, &[])
    }

    /// `Q(√d)` for squarefree `d ∉ {0, 1}`.
    pub fn quadratic(d: i64) -> Result<Self, ExtError> {
        if d == 0 || d == 1 || factorize(d.unsigned_abs()).iter().any(|&(_, a)| a > 1) {
            return Err(ExtError::BadQuadratic(d));
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let n = disc.unsigned_abs();
        let h: Vec<u64> = units::units(n)
            .into_iter()
            .filter(|&u| {
                let odd = if u % 2 == 1 { u } else { u + n };
                jacobi(disc, odd) == 1
            })
            .collect();
        Self::new(n, &h)
    }

    /// The field fixed by `H`, given as an explicit list of residues.
    pub fn new(n: u64, subgroup: &[u64]) -> Result<Self, ExtError> {
        if n == 0 {
            return Err(ExtError::ZeroConductor);
        }
        for &u in subgroup {
            if u >= n.max(1) || u.gcd(&n) != 1 {
                return Err(ExtError::NotAUnit(u, n));
            }
        }
        let set = ResidueSet::from_elements(n, subgroup);
        if !set.contains(1 % n) {
            return Err(ExtError::NotASubgroup(n));
        }
        let elems = set.elements();
        for &a in &elems {
            for &b in &elems {
                if !set.contains(mul_mod(a, b, n)) {
                    return Err(ExtError::NotASubgroup(n));
                }
            }
        }
        Ok(Self::canonical(n, set))
    }

    pub fn from_generators(n: u64, gens: &[u64]) -> Result<Self, ExtError> {
        if n == 0 {
            return Err(ExtError::ZeroConductor);
        }
        for &u in gens {
            if u.gcd(&n) != 1 {
                return Err(ExtError::NotAUnit(u, n));
            }
        }
        Ok(Self::canonical(n, subgroup_generated(n, gens.iter().map(|g| g % n))))
    }

    /// Trusted constructor: `h` is a subgroup of `U_n`.
    pub(crate) fn canonical(mut n: u64, mut h: ResidueSet) -> Self {
        'outer: loop {
            for (q, _) in factorize(n) {
                let m = n / q;
                // kernel of U_n -> U_m must lie in H
                let inside = units::units(n)
                    .into_iter()
                    .filter(|u| u % m == 1 % m)
                    .all(|u| h.contains(u));
                if inside {
                    let image: Vec<u64> = h.elements().into_iter().map(|u| u % m).collect();
                    h = ResidueSet::from_elements(m, &image);
                    n = m;
                    continue 'outer;
                }
            }
            break;
        }
        AbelianExtQ { conductor: n, subgroup: h.elements() }
    }

    /// With the conductor already known to be minimal.
    pub(crate) fn from_minimal(n: u64, subgroup: Vec<u64>) -> Self {
        AbelianExtQ { conductor: n, subgroup }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    pub fn degree(&self) -> u64 {
        totient(self.conductor) / self.subgroup.len() as u64
    }

    pub fn is_rationals(&self) -> bool {
        self.conductor == 1
    }

    pub fn is_real(&self) -> bool {
        let n = self.conductor;
        n <= 2 || self.subgroup.binary_search(&(n - 1)).is_ok()
    }

    pub(crate) fn subgroup_set(&self) -> ResidueSet {
        ResidueSet::from_elements(self.conductor, &self.subgroup)
    }

    /// `H` lifted to the units mod a multiple `big` of the conductor.
    pub(crate) fn lifted(&self, big: u64) -> ResidueSet {
        units::lift(&self.subgroup_set(), self.conductor, big)
    }

    pub fn galois_group(&self) -> GaloisGroup {
        let n = self.conductor;
        let h = self.subgroup_set();
        let mut coset_of = vec![usize::MAX; n as usize];
        let mut cosets = Vec::new();
        for u in units::units(n) {
            if coset_of[u as usize] != usize::MAX {
                continue;
            }
            let id = cosets.len();
            cosets.push(u);
            for &x in &self.subgroup {
                coset_of[mul_mod(u, x, n) as usize] = id;
            }
        }
        debug_assert_eq!(cosets.len() as u64 * h.len() as u64, totient(n));
        let ids: Vec<usize> = (0..cosets.len()).collect();
        let op = |a: usize, b: usize| coset_of[mul_mod(cosets[a], cosets[b], n) as usize];
        let decomposition = Decomposition::compute(&ids, 0, &op);
        let basis_units = decomposition.basis.iter().map(|&i| cosets[i]).collect();
        GaloisGroup {
            shape: decomposition.shape.clone(),
            cosets,
            decomposition,
            coset_of,
            basis_units,
            conductor: n,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.galois_group().shape.is_cyclic()
    }

    /// `self ⊆ other`.
    pub fn is_subfield_of(&self, other: &AbelianExtQ) -> bool {
        if other.conductor % self.conductor != 0 {
            return false;
        }
        let (n, m) = (other.conductor, self.conductor);
        let h = self.subgroup_set();
        other.subgroup.iter().all(|&u| h.contains(u % m)) && n % m == 0
    }

    pub fn compositum(&self, other: &AbelianExtQ) -> AbelianExtQ {
        let big = self.conductor.lcm(&other.conductor);
        let (a, b) = (self.lifted(big), other.lifted(big));
        let both: Vec<u64> = a.elements().into_iter().filter(|&u| b.contains(u)).collect();
        Self::canonical(big, ResidueSet::from_elements(big, &both))
    }

    pub fn intersection(&self, other: &AbelianExtQ) -> AbelianExtQ {
        let big = self.conductor.lcm(&other.conductor);
        let mut s = self.lifted(big);
        for u in other.lifted(big).elements() {
            s.extend(u);
        }
        Self::canonical(big, s)
    }

    /// Decomposition group at `v`, as a subgroup of `U_n` containing `H`.
    fn decomposition_group(&self, v: QPlace) -> ResidueSet {
        let n = self.conductor;
        let mut d = self.subgroup_set();
        match v {
            QPlace::Infinite => {
                if n > 2 {
                    d.extend(n - 1);
                }
            }
            QPlace::Finite(p) => {
                let (a, m) = split_prime(n, p);
                if a == 0 {
                    d.extend(p % n);
                } else {
                    let pa = n / m;
                    // inertia: units that are 1 mod the prime-to-p part
                    for u in units::units(n) {
                        if u % m == 1 % m {
                            d.extend(u);
                        }
                    }
                    d.extend(units::crt(p % m, m, 1 % pa, pa));
                }
            }
        }
        d
    }

    /// `[Z_v : Q_v]`.
    pub fn local_degree(&self, v: QPlace) -> u64 {
        (self.decomposition_group(v).len() / self.subgroup.len()) as u64
    }

    /// Ramification index at `p` (1 at the real place for real fields).
    pub fn ramification_index(&self, v: QPlace) -> u64 {
        let n = self.conductor;
        let mut d = self.subgroup_set();
        match v {
            QPlace::Infinite => {
                if n > 2 {
                    d.extend(n - 1);
                }
            }
            QPlace::Finite(p) => {
                let (_, m) = split_prime(n, p);
                for u in units::units(n) {
                    if u % m == 1 % m {
                        d.extend(u);
                    }
                }
            }
        }
        (d.len() / self.subgroup.len()) as u64
    }

    pub fn number_of_places_above(&self, v: QPlace) -> usize {
        (self.degree() / self.local_degree(v)) as usize
    }

    /// The places above `v`, each as the coset (sorted units mod `n`) of the
    /// decomposition group it corresponds to.
    pub fn places_above(&self, v: QPlace) -> Vec<Vec<u64>> {
        let n = self.conductor;
        let d = self.decomposition_group(v).elements();
        let mut seen = vec![false; n as usize];
        let mut out = Vec::new();
        for u in units::units(n) {
            if seen[u as usize] {
                continue;
            }
            let mut coset: Vec<u64> = d.iter().map(|&x| mul_mod(u, x, n)).collect();
            coset.sort_unstable();
            for &c in &coset {
                seen[c as usize] = true;
            }
            out.push(coset);
        }
        out
    }

    pub fn places(&self, v: QPlace) -> Vec<ZPlace> {
        (0..self.number_of_places_above(v))
            .map(|index| ZPlace { base: v, index })
            .collect()
    }

    pub fn check_place(&self, w: ZPlace) -> Result<(), ExtError> {
        if let QPlace::Finite(p) = w.base {
            if !units::is_prime(p) {
                return Err(ExtError::NotPrime(p));
            }
        }
        let count = self.number_of_places_above(w.base);
        if w.index >= count {
            return Err(ExtError::NoSuchPlace { base: w.base, index: w.index, count });
        }
        Ok(())
    }

    /// For `self ⊆ big`, sends each place of `big` above `v` to the index of
    /// the place of `self` below it.
    pub fn place_map_from(&self, big: &AbelianExtQ, v: QPlace) -> Result<Vec<usize>, ExtError> {
        if !self.is_subfield_of(big) {
            return Err(ExtError::NotSubfield { sub: self.to_string(), sup: big.to_string() });
        }
        let small = self.places_above(v);
        let mut lookup = BTreeMap::new();
        for (i, c) in small.iter().enumerate() {
            for &u in c {
                lookup.insert(u, i);
            }
        }
        let m = self.conductor;
        Ok(big
            .places_above(v)
            .iter()
            .map(|c| lookup[&(c[0] % m)])
            .collect())
    }

    /// `[L_w : Z_v]` for `self = Z ⊆ L`.
    pub fn relative_local_degree(&self, big: &AbelianExtQ, v: QPlace) -> Result<u64, ExtError> {
        if !self.is_subfield_of(big) {
            return Err(ExtError::NotSubfield { sub: self.to_string(), sup: big.to_string() });
        }
        Ok(big.local_degree(v) / self.local_degree(v))
    }

    /// Largest `k` with `Q(ζ_{p^k}) ⊆ self`.
    pub fn roots_of_unity_exponent(&self, p: u64) -> u32 {
        let mut k = 0;
        loop {
            let next = Self::cyclotomic(p.pow(k + 1)).expect("prime power");
            if !next.is_subfield_of(self) {
                return k;
            }
            k += 1;
        }
    }

    /// The exponent of 2 for `self(i)`.
    pub fn r2(&self) -> u32 {
        self.compositum(&Self::cyclotomic(4).expect("4"))
            .roots_of_unity_exponent(2)
    }

    /// The subfield fixed by the elements of order prime to `p` in the Galois
    /// group, i.e. the maximal subfield of `p`-power degree.
    pub fn primary_part(&self, p: u64) -> AbelianExtQ {
        let n = self.conductor;
        let g = self.galois_group();
        let mut h = self.subgroup_set();
        for &c in &g.cosets {
            // c^(p-part of its order) is the prime-to-p component
            let mut ord = 1u64;
            let mut y = c;
            while !h.contains(y) {
                y = mul_mod(y, c, n);
                ord += 1;
            }
            let (a, _) = split_prime(ord, p);
            let x = pow_mod(c, p.pow(a), n);
            h.extend(x);
        }
        Self::canonical(n, h)
    }

    pub fn to_doc(&self) -> AbelianExtDoc {
        AbelianExtDoc {
            conductor: self.conductor,
            subgroup: Some(self.subgroup.clone()),
            generators: None,
        }
    }

    pub fn from_doc(doc: &AbelianExtDoc) -> Result<Self, ExtError> {
        match (&doc.subgroup, &doc.generators) {
            (Some(s), _) => Self::new(doc.conductor, s),
            (None, Some(g)) => Self::from_generators(doc.conductor, g),
            (None, None) => Self::cyclotomic(doc.conductor),
        }
    }
}

impl fmt::Display for AbelianExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subgroup.len() <= 8 {
            write!(f, "(n={}, H={:?})", self.conductor, self.subgroup)
        } else {
            write!(f, "(n={}, |H|={})", self.conductor, self.subgroup.len())
        }
    }
}

/// Jacobi symbol `(a/m)` for odd positive `m`.
pub fn jacobi(a: i64, m: u64) -> i32 {
    debug_assert!(m % 2 == 1);
    let mut a = a.rem_euclid(m as i64) as u64;
    let mut m = m;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: i64) -> AbelianExtQ {
        AbelianExtQ::quadratic(d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(AbelianExtQ::cyclotomic(1).unwrap(), AbelianExtQ::rationals());
        assert_eq!(AbelianExtQ::cyclotomic(2).unwrap(), AbelianExtQ::rationals());
        assert_eq!(AbelianExtQ::new(12, &[1, 5, 7, 11]).unwrap(), AbelianExtQ::rationals());
        let qi = AbelianExtQ::new(12, &[1, 5]).unwrap();
        assert_eq!(qi.conductor(), 4);
        assert_eq!(qi, AbelianExtQ::cyclotomic(4).unwrap());
        assert_eq!(q(-1), qi);
        assert_eq!(q(-3).conductor(), 3);
        assert_eq!(q(2).conductor(), 8);
        assert_eq!(q(2).subgroup(), &[1, 7]);
        assert_eq!(q(5).subgroup(), &[1, 4]);
        assert!(AbelianExtQ::new(8, &[3]).is_err());
        assert!(AbelianExtQ::new(8, &[1, 3, 5]).is_err());
    }

    #[test]
    fn galois_groups() {
        let g = AbelianExtQ::cyclotomic(5).unwrap().galois_group();
        assert_eq!(g.shape.invariant_factors, vec![4]);
        let g = AbelianExtQ::cyclotomic(8).unwrap().galois_group();
        assert_eq!(g.shape.invariant_factors, vec![2, 2]);
        let g = AbelianExtQ::cyclotomic(35).unwrap().galois_group();
        assert_eq!(g.shape.invariant_factors, vec![2, 12]);
        for u in units::units(35) {
            assert_eq!(g.unit(&g.coordinates(u)), u);
        }
    }

    #[test]
    fn local_degrees() {
        let z5 = AbelianExtQ::cyclotomic(5).unwrap();
        assert_eq!(z5.local_degree(QPlace::Finite(2)), 4);
        assert_eq!(z5.local_degree(QPlace::Finite(11)), 1);
        assert_eq!(z5.local_degree(QPlace::Finite(5)), 4);
        assert_eq!(z5.local_degree(QPlace::Infinite), 2);
        let qi = q(-1);
        assert_eq!(qi.local_degree(QPlace::Finite(3)), 2);
        assert_eq!(qi.local_degree(QPlace::Finite(5)), 1);
        assert_eq!(qi.local_degree(QPlace::Finite(2)), 2);
        assert_eq!(qi.number_of_places_above(QPlace::Finite(5)), 2);
        assert_eq!(qi.places_above(QPlace::Finite(5)), vec![vec![1], vec![3]]);
        assert_eq!(q(-15).local_degree(QPlace::Finite(2)), 1);
    }

    #[test]
    fn subfields() {
        let z8 = AbelianExtQ::cyclotomic(8).unwrap();
        assert!(q(2).is_subfield_of(&z8));
        assert!(q(-2).is_subfield_of(&z8));
        assert!(!q(3).is_subfield_of(&z8));
        assert_eq!(q(-1).compositum(&q(2)), z8);
        assert_eq!(q(-1).intersection(&q(2)), AbelianExtQ::rationals());
        assert_eq!(q(-1).compositum(&q(3)).intersection(&z8.compositum(&q(-3))), q(-1).compositum(&q(3)));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(AbelianExtQ::rationals().roots_of_unity_exponent(2), 1);
        assert_eq!(q(-1).roots_of_unity_exponent(2), 2);
        assert_eq!(AbelianExtQ::cyclotomic(8).unwrap().roots_of_unity_exponent(2), 3);
        assert_eq!(q(-3).roots_of_unity_exponent(3), 1);
        assert_eq!(q(2).r2(), 3);
        assert_eq!(AbelianExtQ::rationals().r2(), 2);
    }

    #[test]
    fn primary_parts() {
        let z7 = AbelianExtQ::cyclotomic(7).unwrap();
        assert_eq!(z7.primary_part(2), q(-7));
        assert_eq!(z7.primary_part(3).degree(), 3);
        assert_eq!(q(5).primary_part(3), AbelianExtQ::rationals());
    }
}
