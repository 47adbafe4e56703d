//! Submodules of `(Z/N)^n` in echelon (Howell) form.

use num_bigint::BigInt;

use super::modular::{ext_gcd, mod_mul, reduce_i128, vec_scale, vec_sub};
use crate::exact::{smith_normal_form, ZMatrix};

/// Row `i`, when present, has leading entry at column `i` dividing `N`.
/// Annihilator multiples of every row are folded back in, so the pivots
/// determine the order of the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModLattice {
    modulus: u64,
    rows: Vec<Option<Vec<u64>>>,
}

impl ModLattice {
    pub fn new(dim: usize, modulus: u64) -> Self {
        ModLattice {
            modulus,
            rows: vec![None; dim],
        }
    }

    pub fn generated_by(dim: usize, modulus: u64, gens: &[Vec<u64>]) -> Self {
        let mut l = Self::new(dim, modulus);
        for g in gens {
            l.insert(g);
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.rows.iter().flatten()
    }

    /// Leading entries, with `N` standing for a missing row.
    pub fn pivots(&self) -> Vec<u64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.as_ref().map_or(self.modulus, |r| r[i]))
            .collect()
    }

    pub fn insert(&mut self, v: &[u64]) {
        let n = self.modulus;
        let mut work = vec![v.iter().map(|x| x % n).collect::<Vec<_>>()];
        while let Some(mut v) = work.pop() {
            for i in 0..self.dim() {
                if v[i] == 0 {
                    continue;
                }
                match self.rows[i].take() {
                    None => {
                        let (g, s, _) = ext_gcd(v[i] as i128, n as i128);
                        let unit = reduce_i128(s, n);
                        // `s` need not be a unit, so `s v` alone may lose part of
                        // `<v>`; `(N/g) v` is the complementary generator.
                        let row = vec_scale(&v, unit, n);
                        debug_assert_eq!(row[i] as i128, g);
                        let ann = vec_scale(&v, n / g as u64, n);
                        self.rows[i] = Some(row);
                        if ann.iter().any(|&x| x != 0) {
                            work.push(ann);
                        }
                        v.iter_mut().for_each(|x| *x = 0);
                        break;
                    }
                    Some(row) => {
                        let (a, b) = (row[i] as i128, v[i] as i128);
                        let (g, s, t) = ext_gcd(a, b);
                        let combined: Vec<u64> = row
                            .iter()
                            .zip(&v)
                            .map(|(x, y)| {
                                let sx = mod_mul(*x, reduce_i128(s, n), n);
                                let ty = mod_mul(*y, reduce_i128(t, n), n);
                                (sx as u128 + ty as u128).rem_euclid(n as u128) as u64
                            })
                            .collect();
                        let rest = vec_sub(
                            &vec_scale(&v, (a / g) as u64, n),
                            &vec_scale(&row, (b / g) as u64, n),
                            n,
                        );
                        let ann = vec_scale(&combined, n / g as u64, n);
                        if ann.iter().any(|&x| x != 0) {
                            work.push(ann);
                        }
                        self.rows[i] = Some(combined);
                        v = rest;
                    }
                }
            }
        }
    }

    pub fn is_full(&self) -> bool {
        self.pivots().iter().all(|&p| p == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Option::is_none)
    }

    /// Number of elements.
    pub fn order(&self) -> BigInt {
        self.pivots()
            .iter()
            .map(|p| BigInt::from(self.modulus / p))
            .product()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let n = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|x| x % n).collect();
        for i in 0..self.dim() {
            if v[i] == 0 {
                continue;
            }
            let Some(row) = &self.rows[i] else { return false };
            if v[i] % row[i] != 0 {
                return false;
            }
            v = vec_sub(&v, &vec_scale(row, v[i] / row[i], n), n);
        }
        true
    }

    /// Invariant factors of the module: `Z/d_1 x ... x Z/d_s`, dropping trivial ones.
    pub fn invariants(&self) -> Vec<BigInt> {
        let n = self.dim();
        let mut cols: Vec<Vec<BigInt>> = self
            .rows()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..n {
            let mut e = vec![BigInt::from(0); n];
            e[i] = BigInt::from(self.modulus);
            cols.push(e);
        }
        let m = ZMatrix::from_columns(n, &cols);
        // Z^n / L has invariants d_i; L / N Z^n has invariants N / d_i.
        let modulus = BigInt::from(self.modulus);
        smith_normal_form(&m)
            .diagonal()
            .into_iter()
            .map(|d| &modulus / d)
            .filter(|x| *x > BigInt::from(1))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(n: u64, gens: &[Vec<u64>]) -> std::collections::BTreeSet<Vec<u64>> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0; gens[0].len()]);
        loop {
            let mut grown = set.clone();
            for x in &set {
                for g in gens {
                    grown.insert(x.iter().zip(g).map(|(a, b)| (a + b) % n).collect());
                }
            }
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    #[test]
    fn order_matches_enumeration() {
        let cases: Vec<(u64, Vec<Vec<u64>>)> = vec![
            (12, vec![vec![4, 6], vec![6, 0]]),
            (8, vec![vec![2, 4, 6]]),
            (6, vec![vec![2, 3], vec![3, 2]]),
            (5, vec![vec![1, 2], vec![2, 4]]),
            (9, vec![vec![3, 0, 1], vec![0, 3, 3]]),
        ];
        for (n, gens) in cases {
            let l = ModLattice::generated_by(gens[0].len(), n, &gens);
            let span = brute_span(n, &gens);
            assert_eq!(l.order(), BigInt::from(span.len()), "{n} {gens:?}");
            for v in &span {
                assert!(l.contains(v));
            }
            let inv: BigInt = l.invariants().iter().product();
            assert_eq!(inv, BigInt::from(span.len()));
        }
    }

    #[test]
    fn fullness() {
        assert!(ModLattice::generated_by(2, 6, &[vec![2, 3], vec![3, 2]]).is_full());
        assert!(!ModLattice::generated_by(2, 5, &[vec![1, 2], vec![2, 4]]).is_full());
        assert!(ModLattice::new(3, 7).is_zero());
    }
}
