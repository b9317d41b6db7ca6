//! Finitely generated full-rank subgroups of `Q^r` (value groups).
//!
//! A [`GradeGroup`] is stored as its canonical Hermite basis: rows are upper
//! triangular with positive diagonal and every entry above a diagonal entry
//! reduced into `[0, diagonal)`. Two generator sets describe the same group
//! exactly when their canonical bases agree.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::finite;
use crate::intmat::{self, Matrix};
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generators do not span a rank-{0} group")]
    NotFullRank(usize),
    #[error("generator of length {found} in ambient rank {rank}")]
    BadVector { rank: usize, found: usize },
    #[error("subgroup is not contained in the supergroup")]
    NotContained,
    #[error("{0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradeGroup {
    rank: usize,
    basis: Vec<Vec<Q>>,
}

/// Invariant factors `d_1 | d_2 | ... | d_k`, each `> 1`, of a finite quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientShape {
    pub invariant_factors: Vec<u64>,
}

impl QuotientShape {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Builds a shape from arbitrary positive diagonal entries (e.g. a Smith
    /// diagonal), dropping units and regrouping into a divisibility chain.
    pub fn from_diagonal(entries: &[u64]) -> Self {
        let mut prime_powers: HashMap<u64, Vec<u64>> = HashMap::new();
        for &e in entries {
            for (p, k) in factorize(e) {
                prime_powers.entry(p).or_default().push(p.pow(k));
            }
        }
        let len = prime_powers.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for mut powers in prime_powers.into_values() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.into_iter().enumerate() {
                factors[len - 1 - i] *= q;
            }
        }
        QuotientShape {
            invariant_factors: factors.into_iter().filter(|&d| d > 1).collect(),
        }
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn lcm_denominators<'a>(rows: impl IntoIterator<Item = &'a Vec<Q>>) -> i64 {
    rows.into_iter()
        .flatten()
        .fold(1i64, |acc, q| acc.lcm(q.denom()))
}

impl GradeGroup {
    /// The group generated by `generators` inside `Q^rank`.
    pub fn new(rank: usize, generators: Vec<Vec<Q>>) -> Result<Self, LatticeError> {
        if let Some(v) = generators.iter().find(|v| v.len() != rank) {
            return Err(LatticeError::BadVector { rank, found: v.len() });
        }
        let den = lcm_denominators(&generators);
        let ints: Matrix = generators
            .iter()
            .map(|v| v.iter().map(|q| (q * den).to_integer()).collect())
            .collect();
        Self::from_integer_rows(rank, den, &ints)
    }

    /// `Z^rank`.
    pub fn integral(rank: usize) -> Self {
        let basis = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        GradeGroup { rank, basis }
    }

    /// `(1/d_1)Z + ... + (1/d_r)Z`.
    pub fn diagonal(denominators: &[i64]) -> Self {
        let rank = denominators.len();
        let gens = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { Q::new(1, denominators[i]) } else { Q::zero() })
                    .collect()
            })
            .collect();
        Self::new(rank, gens).expect("diagonal group has full rank")
    }

    /// Group spanned by the rows `rows / den`.
    fn from_integer_rows(rank: usize, den: i64, rows: &Matrix) -> Result<Self, LatticeError> {
        let (h, _) = intmat::hnf(rows);
        let basis: Vec<Vec<Q>> = h
            .into_iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| r.into_iter().map(|x| Q::new(x, den)).collect())
            .collect();
        if basis.len() != rank {
            return Err(LatticeError::NotFullRank(rank));
        }
        Ok(GradeGroup { rank, basis })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical Hermite basis.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    fn scaled(&self, den: i64) -> Matrix {
        self.basis
            .iter()
            .map(|v| v.iter().map(|q| (q * den).to_integer()).collect())
            .collect()
    }

    fn check_rank(&self, other: &Self) -> Result<(), LatticeError> {
        if self.rank != other.rank {
            return Err(LatticeError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    /// Covolume: the product of the Hermite diagonal.
    pub fn covolume(&self) -> Q {
        (0..self.rank).map(|i| self.basis[i][i]).product()
    }

    /// Canonical coset representative of `v` modulo this group: the unique
    /// `v - g` with every coordinate `j` in `[0, basis[j][j])`.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let mut x = v.to_vec();
        for j in 0..self.rank {
            let q = (x[j] / self.basis[j][j]).floor();
            if !q.is_zero() {
                for (xi, bi) in x.iter_mut().zip(&self.basis[j]) {
                    *xi -= q * bi;
                }
            }
        }
        x
    }

    pub fn contains_vector(&self, v: &[Q]) -> bool {
        v.len() == self.rank && self.reduce(v).iter().all(Zero::is_zero)
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &GradeGroup) -> bool {
        self.rank == other.rank && other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Integer coordinates of `v` in the canonical basis.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<i64>> {
        let mut x = v.to_vec();
        let mut coords = vec![0i64; self.rank];
        for j in 0..self.rank {
            let q = x[j] / self.basis[j][j];
            if !q.is_integer() {
                return None;
            }
            coords[j] = q.to_integer();
            for (xi, bi) in x.iter_mut().zip(&self.basis[j]) {
                *xi -= q * bi;
            }
        }
        Some(coords)
    }

    pub fn combination(&self, coords: &[i64]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.rank];
        for (c, row) in coords.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += b * c;
            }
        }
        out
    }

    pub fn to_doc(&self) -> GradeGroupDoc {
        GradeGroupDoc {
            rank: self.rank,
            generators: self
                .basis
                .iter()
                .map(|v| v.iter().map(fmt_q).collect())
                .collect(),
        }
    }

    pub fn from_doc(doc: &GradeGroupDoc) -> Result<Self, LatticeError> {
        let gens = doc
            .generators
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| parse_q(s).map_err(|e| LatticeError::Parse(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.rank, gens)
    }
}

impl fmt::Debug for GradeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, ">")
    }
}

impl PartialOrd for GradeGroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the canonical basis; used for deterministic choices.
impl Ord for GradeGroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeGroupDoc {
    pub rank: usize,
    pub generators: Vec<Vec<String>>,
}

pub fn lattice_sum(a: &GradeGroup, b: &GradeGroup) -> Result<GradeGroup, LatticeError> {
    a.check_rank(b)?;
    let den = lcm_denominators(a.basis.iter().chain(&b.basis));
    let mut rows = a.scaled(den);
    rows.extend(b.scaled(den));
    GradeGroup::from_integer_rows(a.rank, den, &rows)
}

pub fn lattice_intersect(a: &GradeGroup, b: &GradeGroup) -> Result<GradeGroup, LatticeError> {
    a.check_rank(b)?;
    let r = a.rank;
    let den = lcm_denominators(a.basis.iter().chain(&b.basis));
    let (sa, sb) = (a.scaled(den), b.scaled(den));
    // Row space of [[A | A], [B | 0]]; rows with vanishing left half carry A ∩ B.
    let mut stacked: Matrix = sa
        .iter()
        .map(|row| row.iter().chain(row).copied().collect())
        .collect();
    stacked.extend(
        sb.iter()
            .map(|row| row.iter().copied().chain(std::iter::repeat(0).take(r)).collect()),
    );
    let (h, _) = intmat::hnf(&stacked);
    let rows: Matrix = h
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0) && row[r..].iter().any(|&x| x != 0))
        .map(|row| row[r..].to_vec())
        .collect();
    GradeGroup::from_integer_rows(r, den, &rows)
}

/// `|sup : sub|`.
pub fn lattice_index(sub: &GradeGroup, sup: &GradeGroup) -> Result<u64, LatticeError> {
    sub.check_rank(sup)?;
    if !sup.contains(sub) {
        return Err(LatticeError::NotContained);
    }
    let ratio = sub.covolume() / sup.covolume();
    debug_assert!(ratio.is_integer());
    Ok(ratio.to_integer() as u64)
}

/// Invariant factors of `sup / sub`.
pub fn quotient_invariants(sub: &GradeGroup, sup: &GradeGroup) -> Result<QuotientShape, LatticeError> {
    sub.check_rank(sup)?;
    let coeffs: Matrix = sub
        .basis
        .iter()
        .map(|v| sup.coordinates(v).ok_or(LatticeError::NotContained))
        .collect::<Result<_, _>>()?;
    let snf = intmat::smith(&coeffs);
    let diag: Vec<u64> = snf.diagonal.iter().map(|&d| d.unsigned_abs()).collect();
    Ok(QuotientShape::from_diagonal(&diag))
}

/// The finite group `sup / sub` with elements as canonical representatives.
#[derive(Debug, Clone)]
pub struct LatticeQuotient {
    pub sub: GradeGroup,
    pub sup: GradeGroup,
    pub elements: Vec<Vec<Q>>,
    lookup: HashMap<Vec<Q>, usize>,
}

impl LatticeQuotient {
    pub fn new(sub: &GradeGroup, sup: &GradeGroup) -> Result<Self, LatticeError> {
        let index = lattice_index(sub, sup)? as usize;
        let zero = vec![Q::zero(); sub.rank];
        let mut elements = vec![zero.clone()];
        let mut lookup = HashMap::from([(zero, 0usize)]);
        let mut i = 0;
        while i < elements.len() {
            for g in &sup.basis {
                let v: Vec<Q> = elements[i].iter().zip(g).map(|(a, b)| a + b).collect();
                let v = sub.reduce(&v);
                if !lookup.contains_key(&v) {
                    lookup.insert(v.clone(), elements.len());
                    elements.push(v);
                }
            }
            i += 1;
        }
        debug_assert_eq!(elements.len(), index);
        Ok(LatticeQuotient {
            sub: sub.clone(),
            sup: sup.clone(),
            elements,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, v: &[Q]) -> Option<usize> {
        self.lookup.get(&self.sub.reduce(v)).copied()
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let v: Vec<Q> = self.elements[i]
            .iter()
            .zip(&self.elements[j])
            .map(|(a, b)| a + b)
            .collect();
        self.lookup[&self.sub.reduce(&v)]
    }

    /// Lattice `sub + <elements in s>`.
    pub fn lattice_of(&self, s: &BTreeSet<usize>) -> GradeGroup {
        let mut gens: Vec<Vec<Q>> = self.sub.basis.clone();
        gens.extend(s.iter().map(|&i| self.elements[i].clone()));
        GradeGroup::new(self.sub.rank, gens).expect("contains a full-rank group")
    }

    /// All lattices `L` with `sub ⊆ L ⊆ sup` and `|L : sub| = order`, in
    /// canonical basis order.
    pub fn intermediate(&self, order: usize) -> Vec<GradeGroup> {
        let op = |a, b| self.add(a, b);
        let all: Vec<usize> = (0..self.len()).collect();
        let mut out: Vec<GradeGroup> = finite::subgroups_of_order(&all, 0, &op, order)
            .iter()
            .map(|s| self.lattice_of(s))
            .collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn gg(rows: &[&[(i64, i64)]]) -> GradeGroup {
        let rank = rows[0].len();
        GradeGroup::new(
            rank,
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| q(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sum_examples() {
        let z2 = GradeGroup::integral(2);
        assert_eq!(lattice_sum(&z2, &z2).unwrap(), z2);
        let a = gg(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]);
        let b = gg(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 3)]]);
        assert_eq!(lattice_sum(&a, &b).unwrap(), GradeGroup::diagonal(&[2, 3]));
        let c = gg(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]);
        let s = lattice_sum(&c, &z2).unwrap();
        assert_eq!(s, c);
        assert_eq!(lattice_index(&z2, &s).unwrap(), 2);
    }

    #[test]
    fn intersect_examples() {
        let z = GradeGroup::integral(1);
        let half = GradeGroup::diagonal(&[2]);
        let third = GradeGroup::diagonal(&[3]);
        assert_eq!(lattice_intersect(&z, &half).unwrap(), z);
        assert_eq!(lattice_intersect(&half, &third).unwrap(), z);
        assert_eq!(lattice_intersect(&half, &half).unwrap(), half);
    }

    #[test]
    fn index_examples() {
        let z2 = GradeGroup::integral(2);
        assert_eq!(lattice_index(&z2, &GradeGroup::diagonal(&[2, 1])).unwrap(), 2);
        assert_eq!(
            lattice_index(&GradeGroup::integral(1), &GradeGroup::diagonal(&[6])).unwrap(),
            6
        );
        let c = gg(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 1)]]);
        assert_eq!(lattice_index(&z2, &c).unwrap(), 2);
        assert_eq!(
            lattice_index(&GradeGroup::diagonal(&[2, 1]), &z2),
            Err(LatticeError::NotContained)
        );
        assert_eq!(
            lattice_index(&GradeGroup::integral(1), &z2),
            Err(LatticeError::RankMismatch(1, 2))
        );
    }

    #[test]
    fn quotient_examples() {
        let z2 = GradeGroup::integral(2);
        let shape = |sub: &GradeGroup, sup: &GradeGroup| {
            quotient_invariants(sub, sup).unwrap().invariant_factors
        };
        assert_eq!(shape(&z2, &GradeGroup::diagonal(&[2, 2])), vec![2, 2]);
        assert_eq!(shape(&GradeGroup::integral(1), &GradeGroup::diagonal(&[4])), vec![4]);
        let sup = gg(&[&[(1, 2), (1, 4)], &[(0, 1), (1, 4)]]);
        assert_eq!(shape(&z2, &sup), vec![2, 4]);
    }

    #[test]
    fn canonical_form_is_generator_independent() {
        let a = gg(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]);
        let b = gg(&[&[(3, 2), (1, 1)], &[(1, 1), (1, 1)], &[(2, 1), (5, 1)]]);
        assert_eq!(a, b);
        assert_eq!(a.to_doc().generators[0], vec!["1/2", "0/1"]);
    }

    #[test]
    fn rank_deficient_generators_rejected() {
        let r = GradeGroup::new(2, vec![vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]]);
        assert_eq!(r, Err(LatticeError::NotFullRank(2)));
    }

    #[test]
    fn intermediate_lattices_of_klein_quotient() {
        let lq = LatticeQuotient::new(&GradeGroup::integral(2), &GradeGroup::diagonal(&[2, 2])).unwrap();
        let mids = lq.intermediate(2);
        assert_eq!(mids.len(), 3);
        assert_eq!(mids[0], GradeGroup::diagonal(&[2, 1]));
    }

    #[test]
    fn shape_regrouping() {
        assert_eq!(QuotientShape::from_diagonal(&[1, 6, 2]).invariant_factors, vec![2, 6]);
        assert_eq!(QuotientShape::from_diagonal(&[4, 3]).invariant_factors, vec![12]);
    }
}
