//! Brute-force helpers for small finite abelian groups given by an
//! addition rule on element indices.

use std::collections::{BTreeSet, HashSet, VecDeque};

/// Order of `x` under `op`, starting from `zero`.
pub fn element_order(x: usize, zero: usize, op: &impl Fn(usize, usize) -> usize) -> usize {
    let mut y = x;
    let mut k = 1;
    while y != zero {
        y = op(y, x);
        k += 1;
    }
    k
}

/// Subgroup generated by `base` (already a subgroup) and `x`.
pub fn extend(base: &BTreeSet<usize>, x: usize, op: &impl Fn(usize, usize) -> usize) -> BTreeSet<usize> {
    let mut out = base.clone();
    let mut y = x;
    while !base.contains(&y) {
        for &s in base {
            out.insert(op(s, y));
        }
        y = op(y, x);
    }
    out
}

pub fn generated(
    gens: &[usize],
    zero: usize,
    op: &impl Fn(usize, usize) -> usize,
) -> BTreeSet<usize> {
    let mut s = BTreeSet::from([zero]);
    for &g in gens {
        if !s.contains(&g) {
            s = extend(&s, g, op);
        }
    }
    s
}

/// All subgroups of exact order `target` among `elements`, each as a sorted
/// index set. Only elements whose order divides `target` can occur, so the
/// search runs inside that torsion part.
pub fn subgroups_of_order(
    elements: &[usize],
    zero: usize,
    op: &impl Fn(usize, usize) -> usize,
    target: usize,
) -> Vec<BTreeSet<usize>> {
    let candidates: Vec<usize> = elements
        .iter()
        .copied()
        .filter(|&x| target % element_order(x, zero, op) == 0)
        .collect();
    let start = BTreeSet::from([zero]);
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut found = Vec::new();
    while let Some(s) = queue.pop_front() {
        if s.len() == target {
            found.push(s);
            continue;
        }
        for &x in &candidates {
            if s.contains(&x) {
                continue;
            }
            let t = extend(&s, x, op);
            if target % t.len() == 0 && seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    found.sort();
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_four_has_three_subgroups_of_order_two() {
        // Z/2 x Z/2 encoded as 2-bit xor
        let op = |a: usize, b: usize| a ^ b;
        let subs = subgroups_of_order(&[0, 1, 2, 3], 0, &op, 2);
        assert_eq!(subs.len(), 3);
        assert_eq!(subgroups_of_order(&[0, 1, 2, 3], 0, &op, 4).len(), 1);
    }

    #[test]
    fn cyclic_twelve_has_one_subgroup_per_divisor() {
        let op = |a: usize, b: usize| (a + b) % 12;
        let elems: Vec<usize> = (0..12).collect();
        for d in [1, 2, 3, 4, 6, 12] {
            assert_eq!(subgroups_of_order(&elems, 0, &op, d).len(), 1, "order {d}");
        }
        assert_eq!(element_order(8, 0, &op), 3);
    }
}
