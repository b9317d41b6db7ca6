//! Structure of finite abelian groups: invariant-factor bases, discrete logs,
//! and coprime splittings.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;

use crate::finite;
use crate::intmat::{self, Matrix};
use crate::qlattice::QuotientShape;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("subgroup order {sub} is not coprime to its index {index}")]
    NotCoprime { sub: u64, index: u64 },
    #[error("element has {found} coordinates, group has {expected}")]
    BadElement { expected: usize, found: usize },
}

/// Invariant-factor decomposition of a finite abelian group whose elements
/// are indexed `0..len`: a basis `b_j` of order `d_j` (with `d_1 | d_2 | ...`)
/// and, for every element, its coordinates in that basis.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub shape: QuotientShape,
    pub basis: Vec<usize>,
    coords: Vec<Vec<i64>>,
}

impl Decomposition {
    /// `elements` lists the indices of the group (not necessarily `0..len`);
    /// `op` adds two indices.
    pub fn compute(elements: &[usize], zero: usize, op: &impl Fn(usize, usize) -> usize) -> Self {
        // Greedy generating set with the relation lattice of the generators.
        let mut gens: Vec<usize> = Vec::new();
        let mut span: HashMap<usize, Vec<i64>> = HashMap::from([(zero, Vec::new())]);
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for &x in elements {
            if span.contains_key(&x) {
                continue;
            }
            let i = gens.len();
            gens.push(x);
            for v in span.values_mut() {
                v.push(0);
            }
            for r in relations.iter_mut() {
                r.push(0);
            }
            let mut k = 1;
            let mut y = x;
            while !span.contains_key(&y) {
                y = op(y, x);
                k += 1;
            }
            let mut rel = span[&y].iter().map(|c| -c).collect::<Vec<_>>();
            rel[i] += k;
            relations.push(rel);
            let old: Vec<(usize, Vec<i64>)> = span.iter().map(|(a, b)| (*a, b.clone())).collect();
            let mut power = x;
            for j in 1..k {
                for (e, v) in &old {
                    let mut w = v.clone();
                    w[i] = j;
                    span.insert(op(*e, power), w);
                }
                power = op(power, x);
            }
        }
        let s = gens.len();
        if s == 0 {
            let mut coords = vec![Vec::new(); elements.iter().copied().max().unwrap_or(zero) + 1];
            coords[zero] = Vec::new();
            return Decomposition {
                shape: QuotientShape { invariant_factors: vec![] },
                basis: vec![],
                coords,
            };
        }
        let rel: Matrix = relations;
        let snf = intmat::smith(&rel);
        let keep: Vec<usize> = (0..s).filter(|&j| snf.diagonal[j] != 1).collect();
        let factors: Vec<u64> = keep.iter().map(|&j| snf.diagonal[j] as u64).collect();

        let orders: Vec<i64> = gens
            .iter()
            .map(|&g| finite::element_order(g, zero, op) as i64)
            .collect();
        let power_of = |g: usize, e: i64, ord: i64| -> usize {
            let e = e.rem_euclid(ord);
            let mut acc = zero;
            for _ in 0..e {
                acc = op(acc, g);
            }
            acc
        };
        let basis: Vec<usize> = keep
            .iter()
            .map(|&j| {
                let row = &snf.col_inv[j];
                (0..s).fold(zero, |acc, i| op(acc, power_of(gens[i], row[i], orders[i])))
            })
            .collect();

        let len = elements.iter().copied().max().unwrap_or(zero).max(zero) + 1;
        let mut coords = vec![Vec::new(); len];
        for (&e, x) in &span {
            let y = intmat::vec_mat(x, &snf.col);
            coords[e] = keep
                .iter()
                .zip(&factors)
                .map(|(&j, &d)| y[j].rem_euclid(d as i64))
                .collect();
        }
        Decomposition {
            shape: QuotientShape { invariant_factors: factors },
            basis,
            coords,
        }
    }

    pub fn order(&self) -> u64 {
        self.shape.order()
    }

    pub fn coordinates(&self, element: usize) -> &[i64] {
        &self.coords[element]
    }

    pub fn factors(&self) -> &[u64] {
        &self.shape.invariant_factors
    }
}

/// The group `Z/d_1 ⊕ ... ⊕ Z/d_k` with elements as coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    pub factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Self {
        FiniteAbelianGroup { factors }
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn index_of(&self, v: &[i64]) -> usize {
        let mut idx = 0usize;
        for (x, &d) in v.iter().zip(&self.factors) {
            idx = idx * d as usize + x.rem_euclid(d as i64) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.factors.len()];
        for (slot, &d) in v.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % d as usize) as i64;
            idx /= d as usize;
        }
        v
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<i64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        self.index_of(&s)
    }

    pub fn element_order(&self, v: &[i64]) -> u64 {
        v.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| d / (x.rem_euclid(d as i64) as u64).gcd(&d))
            .fold(1u64, |a, b| a.lcm(&b))
    }

    fn check(&self, v: &[i64]) -> Result<(), GroupError> {
        if v.len() != self.factors.len() {
            return Err(GroupError::BadElement {
                expected: self.factors.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Result<BTreeSet<usize>, GroupError> {
        for g in gens {
            self.check(g)?;
        }
        let idx: Vec<usize> = gens.iter().map(|g| self.index_of(g)).collect();
        Ok(finite::generated(&idx, 0, &|a, b| self.add(a, b)))
    }

    pub fn shape_of(&self, sub: &BTreeSet<usize>) -> QuotientShape {
        let elems: Vec<usize> = sub.iter().copied().collect();
        Decomposition::compute(&elems, 0, &|a, b| self.add(a, b)).shape
    }
}

/// The complement `A` of a subgroup `B` of coprime order and index: the
/// elements of order prime to `|B|`, so that `G = A ⊕ B`.
#[derive(Debug, Clone)]
pub struct Complement {
    pub elements: Vec<Vec<i64>>,
    pub shape: QuotientShape,
}

pub fn primary_complement(
    group: &FiniteAbelianGroup,
    b_generators: &[Vec<i64>],
) -> Result<Complement, GroupError> {
    let b = group.subgroup(b_generators)?;
    let b_order = b.len() as u64;
    let index = group.order() / b_order;
    if b_order.gcd(&index) != 1 {
        return Err(GroupError::NotCoprime { sub: b_order, index });
    }
    let a: BTreeSet<usize> = (0..group.order() as usize)
        .filter(|&i| group.element_order(&group.element(i)).gcd(&b_order) == 1)
        .collect();
    debug_assert_eq!(a.len() as u64 * b_order, group.order());
    debug_assert_eq!(a.intersection(&b).count(), 1);
    Ok(Complement {
        shape: group.shape_of(&a),
        elements: a.iter().map(|&i| group.element(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_of_z12_times_z2() {
        let g = FiniteAbelianGroup::new(vec![12, 2]);
        let all: Vec<usize> = (0..24).collect();
        let d = Decomposition::compute(&all, 0, &|a, b| g.add(a, b));
        assert_eq!(d.factors(), &[2, 12]);
        // coordinates are a homomorphism
        for a in 0..24 {
            for b in 0..24 {
                let s = g.add(a, b);
                let lhs = d.coordinates(s);
                for (j, &f) in d.factors().iter().enumerate() {
                    let f = f as i64;
                    assert_eq!(lhs[j], (d.coordinates(a)[j] + d.coordinates(b)[j]).rem_euclid(f));
                }
            }
        }
    }

    #[test]
    fn complement_examples() {
        let z6 = FiniteAbelianGroup::new(vec![6]);
        let a = primary_complement(&z6, &[vec![3]]).unwrap();
        assert_eq!(a.shape.invariant_factors, vec![3]);

        let g = FiniteAbelianGroup::new(vec![4, 3]);
        let a = primary_complement(&g, &[vec![0, 1]]).unwrap();
        assert_eq!(a.shape.invariant_factors, vec![4]);
        assert!(a.elements.iter().all(|v| v[1] == 0));

        let g = FiniteAbelianGroup::new(vec![12, 2]);
        let a = primary_complement(&g, &[vec![4, 0]]).unwrap();
        assert_eq!(a.elements.len(), 8);
        assert_eq!(a.shape.invariant_factors, vec![2, 4]);
    }

    #[test]
    fn complement_requires_coprimality() {
        let z4 = FiniteAbelianGroup::new(vec![4]);
        assert_eq!(
            primary_complement(&z4, &[vec![2]]).unwrap_err(),
            GroupError::NotCoprime { sub: 2, index: 2 }
        );
    }
}
