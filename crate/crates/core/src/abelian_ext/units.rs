//! Residue arithmetic for `(Z/n)^×`.

use num_integer::Integer;

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    r
}

/// Units mod `n` in increasing order; `[0]` for `n = 1`.
pub fn units(n: u64) -> Vec<u64> {
    (0..n).filter(|u| u.gcd(&n) == 1).collect()
}

pub fn totient(n: u64) -> u64 {
    crate::qlattice::factorize(n)
        .iter()
        .map(|&(p, a)| (p - 1) * p.pow(a - 1))
        .product()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// `(p, a, m)` with `n = p^a m` and `p ∤ m`.
pub fn split_prime(n: u64, p: u64) -> (u32, u64) {
    let mut a = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    (a, m)
}

/// The unit `x` mod `a*b` (coprime moduli) with `x ≡ u mod a`, `x ≡ v mod b`.
pub fn crt(u: u64, a: u64, v: u64, b: u64) -> u64 {
    let n = a * b;
    if n == 1 {
        return 0;
    }
    let (_, s, _) = crate::intmat::ext_gcd(a as i64, b as i64);
    // x = u + a * ((v - u) * s mod b)
    let t = ((v as i64 - u as i64).rem_euclid(b as i64) as i128 * s as i128).rem_euclid(b as i128) as u64;
    (u + a * t) % n
}

/// Membership table for a subset of `Z/n`.
#[derive(Debug, Clone)]
pub struct ResidueSet {
    n: u64,
    bits: Vec<bool>,
    len: usize,
}

impl ResidueSet {
    pub fn from_elements(n: u64, elems: &[u64]) -> Self {
        let mut bits = vec![false; n as usize];
        for &e in elems {
            bits[(e % n) as usize] = true;
        }
        let len = bits.iter().filter(|b| **b).count();
        ResidueSet { n, bits, len }
    }

    pub fn contains(&self, u: u64) -> bool {
        self.bits[(u % self.n) as usize]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn elements(&self) -> Vec<u64> {
        (0..self.n).filter(|&u| self.bits[u as usize]).collect()
    }

    /// Subgroup generated by `self` (a subgroup) and `x`.
    pub fn extend(&mut self, x: u64) {
        let n = self.n;
        if self.contains(x) {
            return;
        }
        let base = self.elements();
        let mut y = x % n;
        while !self.contains_in(&base, y) {
            for &s in &base {
                let z = mul_mod(s, y, n);
                if !self.bits[z as usize] {
                    self.bits[z as usize] = true;
                    self.len += 1;
                }
            }
            y = mul_mod(y, x, n);
        }
    }

    fn contains_in(&self, base: &[u64], y: u64) -> bool {
        base.binary_search(&y).is_ok()
    }
}

/// Subgroup of `(Z/n)^×` generated by `gens`.
pub fn subgroup_generated(n: u64, gens: impl IntoIterator<Item = u64>) -> ResidueSet {
    let mut s = ResidueSet::from_elements(n, &[1 % n]);
    for g in gens {
        s.extend(g);
    }
    s
}

/// Preimage of `h` (a subset of units mod `n`) in the units mod `big`.
pub fn lift(h: &ResidueSet, n: u64, big: u64) -> ResidueSet {
    debug_assert_eq!(big % n, 0);
    let elems: Vec<u64> = units(big).into_iter().filter(|u| h.contains(u % n)).collect();
    ResidueSet::from_elements(big, &elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(units(1), vec![0]);
        assert_eq!(units(8), vec![1, 3, 5, 7]);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(100), 40);
        assert_eq!(crt(3, 4, 2, 5), 7);
        assert_eq!(split_prime(360, 2), (3, 45));
        let s = subgroup_generated(13, [4]);
        assert_eq!(s.elements(), vec![1, 3, 4, 9, 10, 12]);
    }
}
