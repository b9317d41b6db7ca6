//! Slow, independent reference computations for cross-checking the
//! library. Nothing here calls into the other modules beyond reading plain
//! data (lattice bases, conductors, subgroup lists) out of their types.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::abelian_ext::{AbelianExtQ, QPlace};
use crate::qlattice::GradeGroup;

type R = Ratio<i64>;

pub const DEFAULT_BOUND: u64 = 512;
/// The cover enumeration prunes by index, so it tolerates larger conductors.
pub const MAX_COVER_BOUND: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{value} exceeds the oracle bound {bound}")]
    BoundExceeded { value: u64, bound: u64 },
    #[error("coset count changed from {small} to {large} when the box grew; box too small")]
    Unstable { small: u64, large: u64 },
    #[error("lattices of different rank")]
    Rank,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// lattices

/// Integer coordinates of `x` in the basis `rows`, if `x` lies in their span
/// with integral coefficients.
fn solve_integral(rows: &[Vec<R>], x: &[R]) -> Option<Vec<i64>> {
    let r = rows.len();
    // augmented system B^T c = x
    let mut m: Vec<Vec<R>> = (0..x.len())
        .map(|i| {
            let mut row: Vec<R> = (0..r).map(|j| rows[j][i]).collect();
            row.push(x[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = R::one() / m[row][col];
        for v in m[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col];
                for j in 0..=r {
                    let t = m[row][j] * f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|v| !v[r].is_zero()) {
        return None;
    }
    let mut c = vec![0i64; r];
    for (i, &col) in pivots.iter().enumerate() {
        let v = m[i][r];
        if !v.is_integer() {
            return None;
        }
        c[col] = v.to_integer();
    }
    Some(c)
}

pub fn member(g: &GradeGroup, x: &[R]) -> bool {
    solve_integral(g.basis(), x).is_some()
}

fn box_points(g: &GradeGroup, bx: i64) -> Vec<Vec<R>> {
    let r = g.rank();
    let mut out = Vec::new();
    let mut c = vec![-bx; r];
    loop {
        let mut p = vec![R::zero(); r];
        for (ci, b) in c.iter().zip(g.basis()) {
            for (pi, bi) in p.iter_mut().zip(b) {
                *pi += *bi * *ci;
            }
        }
        out.push(p);
        let mut i = 0;
        while i < r {
            if c[i] < bx {
                c[i] += 1;
                break;
            }
            c[i] = -bx;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    out
}

/// Distinct classes of `sup` modulo `sub` among points of `sup` whose
/// coordinates lie in `[-box, box]`.
fn coset_reps(sub: &GradeGroup, sup: &GradeGroup, bx: i64) -> Vec<Vec<R>> {
    let mut reps: Vec<Vec<R>> = Vec::new();
    for p in box_points(sup, bx) {
        let fresh = reps.iter().all(|q| {
            let d: Vec<R> = p.iter().zip(q).map(|(a, b)| *a - *b).collect();
            !member(sub, &d)
        });
        if fresh {
            reps.push(p);
        }
    }
    reps
}

pub fn coset_count(sub: &GradeGroup, sup: &GradeGroup, bx: u64) -> Result<u64, OracleError> {
    if sub.rank() != sup.rank() {
        return Err(OracleError::Rank);
    }
    let small = coset_reps(sub, sup, bx as i64).len() as u64;
    let large = coset_reps(sub, sup, 2 * bx as i64).len() as u64;
    if small != large {
        return Err(OracleError::Unstable { small, large });
    }
    Ok(small)
}

/// Orders of the elements of `sup / sub`, sorted.
pub fn quotient_element_orders(sub: &GradeGroup, sup: &GradeGroup, bx: u64) -> Vec<u64> {
    let mut out: Vec<u64> = coset_reps(sub, sup, bx as i64)
        .iter()
        .map(|p| {
            let mut k = 1i64;
            while !member(sub, &p.iter().map(|x| *x * k).collect::<Vec<_>>()) {
                k += 1;
            }
            k as u64
        })
        .collect();
    out.sort_unstable();
    out
}

/// Invariant factors of a finite abelian group given the orders of all its
/// elements.
pub fn shape_from_orders(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    let mut factors: Vec<u64> = Vec::new();
    let mut rest = n;
    let mut p = 2;
    let mut primes = Vec::new();
    while rest > 1 {
        if rest % p == 0 {
            primes.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    for p in primes {
        // c[k] = log_p #{x : x^{p^k} = 1}
        let mut counts = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let c = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let mut l = 0;
            let mut x = c;
            while x > 1 {
                x /= p;
                l += 1;
            }
            if l == *counts.last().unwrap() {
                break;
            }
            counts.push(l);
        }
        // number of cyclic factors of order >= p^k
        let at_least: Vec<u32> = counts.windows(2).map(|w| w[1] - w[0]).collect();
        let mut parts: Vec<u64> = Vec::new();
        for (k, &a) in at_least.iter().enumerate() {
            let more = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(a - more) {
                parts.push(p.pow(k as u32 + 1));
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in parts.into_iter().enumerate() {
            if i < factors.len() {
                let idx = factors.len() - 1 - i;
                factors[idx] *= q;
            } else {
                factors.insert(0, q);
            }
        }
    }
    factors
}

/// All intermediate groups `sub ⊆ L ⊆ sup`, as sets of coset
/// representatives taken from the box, sorted by size.
pub fn intermediate_groups(sub: &GradeGroup, sup: &GradeGroup, bx: u64) -> Vec<Vec<Vec<R>>> {
    let reps = coset_reps(sub, sup, bx as i64);
    let n = reps.len();
    let class_of = |x: &[R]| -> usize {
        (0..n)
            .find(|&i| {
                let d: Vec<R> = x.iter().zip(&reps[i]).map(|(a, b)| *a - *b).collect();
                member(sub, &d)
            })
            .expect("box covers the quotient")
    };
    let add: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| class_of(&reps[i].iter().zip(&reps[j]).map(|(a, b)| *a + *b).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    let zero = class_of(&vec![R::zero(); sub.rank()]);
    let closure = |start: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut s = start.clone();
        s.insert(zero);
        loop {
            let mut grown = s.clone();
            for &a in &s {
                for &b in &s {
                    grown.insert(add[a][b]);
                }
            }
            if grown.len() == s.len() {
                return s;
            }
            s = grown;
        }
    };
    let mut all: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier = vec![closure(&BTreeSet::new())];
    all.insert(frontier[0].clone());
    while let Some(s) = frontier.pop() {
        for g in 0..n {
            if !s.contains(&g) {
                let mut t = s.clone();
                t.insert(g);
                let t = closure(&t);
                if all.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    let mut out: Vec<Vec<Vec<R>>> =
        all.into_iter().map(|s| s.into_iter().map(|i| reps[i].clone()).collect()).collect();
    out.sort_by_key(|s| s.len());
    out
}

// ---------------------------------------------------------------------------
// unit groups

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitTable {
    pub n: u64,
    pub elements: Vec<u64>,
    /// `table[i][j]` is the index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
}

impl UnitTable {
    pub fn order_of(&self, i: usize) -> u64 {
        let one = self.elements.iter().position(|&e| e == 1 % self.n.max(1)).unwrap();
        let mut x = i;
        let mut k = 1;
        while x != one {
            x = self.table[x][i];
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.elements.len()).map(|i| self.order_of(i)).fold(1, |a, b| a / gcd(a, b) * b)
    }

    pub fn shape(&self) -> Vec<u64> {
        let orders: Vec<u64> = (0..self.elements.len()).map(|i| self.order_of(i)).collect();
        shape_from_orders(&orders)
    }
}

fn check_bound(n: u64, bound: u64) -> Result<(), OracleError> {
    if n > bound {
        Err(OracleError::BoundExceeded { value: n, bound })
    } else {
        Ok(())
    }
}

fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    r
}

fn unit_list(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

pub fn unit_group_table(n: u64) -> Result<UnitTable, OracleError> {
    check_bound(n, DEFAULT_BOUND)?;
    let elements = unit_list(n);
    let pos = |x: u64| elements.iter().position(|&e| e == x).unwrap();
    let table = elements
        .iter()
        .map(|&a| elements.iter().map(|&b| pos(a * b % n)).collect())
        .collect();
    Ok(UnitTable { n, elements, table })
}

fn close_mul(n: u64, set: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut s = set.clone();
    s.insert(1 % n);
    loop {
        let mut grown = s.clone();
        for &a in &s {
            for &b in &s {
                grown.insert(a * b % n);
            }
        }
        if grown.len() == s.len() {
            return s;
        }
        s = grown;
    }
}

/// Every subgroup of `(Z/n)^×` contained in `within`, containing `base`
/// and of size at most `cap`, sorted by size. Works in `within / ⟨base⟩`
/// with subgroups as bitsets.
fn subgroups_between(n: u64, base: &BTreeSet<u64>, within: &BTreeSet<u64>, cap: usize) -> Vec<BTreeSet<u64>> {
    let b = close_mul(n, base);
    if !b.is_subset(within) || b.len() > cap {
        return Vec::new();
    }
    // coset representative = least element of u·B
    let rep = |u: u64| b.iter().map(|&x| x * u % n).min().unwrap();
    let reps: Vec<u64> = within.iter().map(|&u| rep(u)).collect::<BTreeSet<_>>().into_iter().collect();
    let k = reps.len();
    let index = |u: u64| reps.binary_search(&rep(u)).unwrap();
    let mul: Vec<Vec<usize>> = reps.iter().map(|&a| reps.iter().map(|&c| index(a * c % n)).collect()).collect();
    let words = k.div_ceil(64);
    let has = |s: &[u64], i: usize| s[i / 64] >> (i % 64) & 1 == 1;
    let cap_q = cap / b.len();
    let one = index(1 % n);
    let join = |s: &Vec<u64>, g: usize| -> Vec<u64> {
        let mut t = s.clone();
        let mut frontier: Vec<usize> = (0..k).filter(|&i| has(s, i)).collect();
        while let Some(x) = frontier.pop() {
            let y = mul[x][g];
            if !has(&t, y) {
                t[y / 64] |= 1 << (y % 64);
                frontier.push(y);
            }
        }
        t
    };
    let size = |s: &Vec<u64>| s.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    let mut trivial = vec![0u64; words];
    trivial[one / 64] |= 1 << (one % 64);
    let mut all: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
    all.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(sg) = frontier.pop() {
        if size(&sg) * 2 > cap_q {
            continue;
        }
        for g in 0..k {
            if !has(&sg, g) {
                let t = join(&sg, g);
                if size(&t) <= cap_q && all.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
    }
    let mut out: Vec<BTreeSet<u64>> = all
        .into_iter()
        .map(|sg| within.iter().copied().filter(|&u| has(&sg, index(u))).collect())
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

pub fn subgroup_enumeration(n: u64) -> Result<Vec<Vec<u64>>, OracleError> {
    check_bound(n, DEFAULT_BOUND)?;
    let all: BTreeSet<u64> = unit_list(n).into_iter().collect();
    Ok(subgroups_between(n, &BTreeSet::new(), &all, all.len()).into_iter().map(|s| s.into_iter().collect()).collect())
}

// ---------------------------------------------------------------------------
// abelian fields as (n, H)

/// Lift of `H ⊆ (Z/n)^×` to `(Z/big)^×`.
pub fn lift(n: u64, h: &[u64], big: u64) -> BTreeSet<u64> {
    let hs: BTreeSet<u64> = h.iter().copied().collect();
    unit_list(big).into_iter().filter(|&u| hs.contains(&(u % n))).collect()
}

pub fn field_degree(n: u64, h: &[u64]) -> u64 {
    unit_list(n).len() as u64 / h.len() as u64
}

/// Smallest `d | n` with `ker((Z/n)^× → (Z/d)^×) ⊆ H`.
pub fn conductor(n: u64, h: &[u64]) -> u64 {
    let hs: BTreeSet<u64> = h.iter().copied().collect();
    (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| unit_list(n).into_iter().filter(|&u| u % d == 1 % d).all(|u| hs.contains(&u)))
        .unwrap()
}

pub fn is_subfield(small: (u64, &[u64]), big: (u64, &[u64])) -> bool {
    let l = small.0 / gcd(small.0, big.0) * big.0;
    lift(big.0, big.1, l).is_subset(&lift(small.0, small.1, l))
}

/// `[K_v : Q_v]` as `e · f` for the field cut out by `H`.
pub fn local_degree(n: u64, h: &[u64], v: QPlace) -> u64 {
    let hs: BTreeSet<u64> = h.iter().copied().collect();
    let p = match v {
        QPlace::Infinite => return if n <= 2 || hs.contains(&(n - 1)) { 1 } else { 2 },
        QPlace::Finite(p) => p,
    };
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
    }
    let units = unit_list(n);
    // inertia: units that are 1 mod the prime-to-p part
    let inertia: Vec<u64> = units.iter().copied().filter(|&u| u % rest == 1 % rest).collect();
    let e = inertia.len() as u64 / inertia.iter().filter(|u| hs.contains(u)).count() as u64;
    // residue degree: least f with p^f mod rest in the image of H
    let image: BTreeSet<u64> = hs.iter().map(|&u| u % rest).collect();
    let mut f = 1;
    let mut x = p % rest;
    while !image.contains(&x) {
        x = x * p % rest;
        f += 1;
    }
    e * f
}

fn is_cyclic_quotient(n: u64, h: &BTreeSet<u64>) -> bool {
    let index = unit_list(n).len() / h.len();
    unit_list(n).into_iter().any(|u| {
        let mut x = u % n;
        let mut k = 1;
        while !h.contains(&x) {
            x = x * u % n;
            k += 1;
        }
        k == index
    })
}

/// Every abelian `L ⊇ Z` of conductor at most `bound` with `[L:Z] = m` and
/// the exact local degrees `[L_v : Q_v] = d` for each `(v, d)`, as
/// `(conductor, subgroup)` in increasing order.
pub fn exhaustive_cover_check(
    z: &AbelianExtQ,
    m: u64,
    demands: &[(QPlace, u64)],
    require_cyclic: bool,
    bound: u64,
) -> Result<Vec<(u64, Vec<u64>)>, OracleError> {
    check_bound(bound, MAX_COVER_BOUND)?;
    let (nz, hz) = (z.conductor(), z.subgroup());
    let target = m * field_degree(nz, hz);
    let mut out = Vec::new();
    for n in 1..=bound {
        let units = unit_list(n).len() as u64;
        if n % nz != 0 || units % target != 0 {
            continue;
        }
        let within = lift(nz, hz, n);
        let order = (units / target) as usize;
        // a subgroup of index k contains every k-th power
        let powers: BTreeSet<u64> = unit_list(n).into_iter().map(|u| pow_mod(u, target, n)).collect();
        for h in subgroups_between(n, &powers, &within, order) {
            if h.len() != order {
                continue;
            }
            let hv: Vec<u64> = h.iter().copied().collect();
            if conductor(n, &hv) != n {
                continue;
            }
            if require_cyclic && !is_cyclic_quotient(n, &h) {
                continue;
            }
            if demands.iter().all(|&(v, d)| local_degree(n, &hv, v) == d) {
                out.push((n, hv));
            }
        }
    }
    Ok(out)
}

/// Conductors of quadratic fields by discriminant: `|D|` for fundamental
/// `D` with `0 < |D| <= bound`, split by sign.
pub fn quadratic_conductors(bound: u64) -> (Vec<u64>, Vec<u64>) {
    let squarefree = |d: u64| (2..).take_while(|k| k * k <= d).all(|k| d % (k * k) != 0);
    let (mut real, mut imag) = (Vec::new(), Vec::new());
    for a in 1..=bound {
        // D = a or -a
        for neg in [false, true] {
            let fundamental = if a % 4 == 0 {
                let b = a / 4;
                squarefree(b) && {
                    let r = if neg { (4 - b % 4) % 4 } else { b % 4 };
                    r == 2 || r == 3
                }
            } else {
                let r = if neg { (4 - a % 4) % 4 } else { a % 4 };
                squarefree(a) && r == 1 && a > 1
            };
            if fundamental {
                if neg {
                    imag.push(a);
                } else {
                    real.push(a);
                }
            }
        }
    }
    (real, imag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> R {
        R::new(n, d)
    }

    #[test]
    fn coset_counts() {
        let z1 = GradeGroup::integral(1);
        assert_eq!(coset_count(&z1, &GradeGroup::diagonal(&[6]), 12).unwrap(), 6);
        let z2 = GradeGroup::integral(2);
        assert_eq!(coset_count(&z2, &GradeGroup::diagonal(&[2, 2]), 4).unwrap(), 4);
        let g = GradeGroup::new(2, vec![vec![q(1, 2), q(1, 4)], vec![q(0, 1), q(1, 4)]]).unwrap();
        assert_eq!(coset_count(&z2, &g, 8).unwrap(), 8);
        assert_eq!(shape_from_orders(&quotient_element_orders(&z2, &g, 8)), vec![2, 4]);
        assert!(coset_count(&z1, &GradeGroup::diagonal(&[6]), 1).is_err());
    }

    #[test]
    fn unit_tables() {
        let t = unit_group_table(5).unwrap();
        assert_eq!(t.shape(), vec![4]);
        let t = unit_group_table(8).unwrap();
        assert_eq!(t.elements, vec![1, 3, 5, 7]);
        assert_eq!(t.shape(), vec![2, 2]);
        let t = unit_group_table(24).unwrap();
        assert_eq!((t.elements.len(), t.exponent()), (8, 2));
        assert!(unit_group_table(1000).is_err());
        assert_eq!(shape_from_orders(&[1, 2, 2, 2, 4, 4, 4, 4]), vec![2, 4]);
        // (Z/2)^3 has 16 subgroups
        assert_eq!(subgroup_enumeration(24).unwrap().len(), 16);
    }

    #[test]
    fn field_data() {
        assert_eq!(local_degree(5, &[1], QPlace::Finite(2)), 4);
        assert_eq!(local_degree(5, &[1], QPlace::Finite(11)), 1);
        assert_eq!(local_degree(5, &[1], QPlace::Finite(5)), 4);
        assert_eq!(local_degree(4, &[1], QPlace::Infinite), 2);
        assert_eq!(local_degree(8, &[1, 7], QPlace::Infinite), 1);
        assert_eq!(conductor(12, &[1, 5]), 4);
        assert_eq!(conductor(12, &[1, 7]), 3);
        assert!(is_subfield((4, &[1]), (8, &[1])));
        assert!(!is_subfield((8, &[1, 7]), (4, &[1])));
    }

    #[test]
    fn covers() {
        let r = AbelianExtQ::rationals();
        let imag = exhaustive_cover_check(&r, 2, &[(QPlace::Infinite, 2)], false, 60).unwrap();
        let (_, expected) = quadratic_conductors(60);
        assert_eq!(imag.iter().map(|c| c.0).collect::<Vec<_>>(), expected);
        assert!(exhaustive_cover_check(&r, 2, &[(QPlace::Infinite, 3)], false, 60).unwrap().is_empty());
        let qi = AbelianExtQ::quadratic(-1).unwrap();
        assert!(exhaustive_cover_check(&qi, 2, &[], true, 200).unwrap().is_empty());
        let all: Vec<u64> = exhaustive_cover_check(&qi, 2, &[], false, 40).unwrap().iter().map(|c| c.0).collect();
        // Q(i, √d) for d = 2, 3, 5, 6, 7, 10
        assert_eq!(all, vec![8, 12, 20, 24, 28, 40]);
    }
}
