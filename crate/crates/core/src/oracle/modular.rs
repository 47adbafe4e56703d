//! Arithmetic in `Z/N` and matrices over it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rational, ZMatrix};

pub fn check_modulus(n: u64) -> Result<()> {
    // products of two residues must fit in u128 with room for sums
    if n < 2 || n > (1 << 40) {
        return Err(Error::BadModulus(n));
    }
    Ok(())
}

pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn mod_add(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

pub fn mod_sub(a: u64, b: u64, n: u64) -> u64 {
    mod_add(a, n - b % n, n)
}

/// `(g, s, t)` with `g = gcd(a, b) = s a + t b`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn reduce_i128(a: i128, n: u64) -> u64 {
    a.rem_euclid(n as i128) as u64
}

pub fn mod_inv(a: u64, n: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd(a as i128, n as i128);
    (g == 1).then(|| reduce_i128(s, n))
}

pub fn reduce_big(a: &BigInt, n: u64) -> u64 {
    a.mod_floor(&BigInt::from(n)).to_u64().expect("residue fits")
}

/// Image of `q` in `Z/N`, defined when the denominator is a unit.
pub fn reduce_rational(q: &Rational, n: u64) -> Result<u64> {
    let d = reduce_big(q.denom(), n);
    let inv = mod_inv(d, n).ok_or_else(|| Error::NonInvertibleModulus {
        denominator: q.denom().abs().to_string(),
        modulus: n,
    })?;
    Ok(mod_mul(reduce_big(q.numer(), n), inv, n))
}

/// Square or rectangular matrix over `Z/N`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        ModMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn from_rational(m: &QMatrix, modulus: u64) -> Result<Self> {
        let data = m
            .entries()
            .iter()
            .map(|q| reduce_rational(q, modulus))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModMatrix {
            rows: m.rows(),
            cols: m.cols(),
            modulus,
            data,
        })
    }

    pub fn from_int(m: &ZMatrix, modulus: u64) -> Self {
        ModMatrix {
            rows: m.rows(),
            cols: m.cols(),
            modulus,
            data: m.entries().iter().map(|a| reduce_big(a, modulus)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let n = self.modulus;
        let mut out = Self::zeros(self.rows, o.cols, n);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = mod_add(out.data[idx], mod_mul(a, o.get(k, j), n), n);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let n = self.modulus as u128;
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let mut acc: u128 = 0;
                for (a, b) in row.iter().zip(v) {
                    acc = (acc + *a as u128 * *b as u128) % n;
                }
                acc as u64
            })
            .collect()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = mod_sub(*a, *b, self.modulus);
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = mod_mul(*a, c, self.modulus);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

pub fn vec_add(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| mod_add(*x, *y, n)).collect()
}

pub fn vec_sub(a: &[u64], b: &[u64], n: u64) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| mod_sub(*x, *y, n)).collect()
}

pub fn vec_scale(a: &[u64], c: u64, n: u64) -> Vec<u64> {
    a.iter().map(|x| mod_mul(*x, c, n)).collect()
}

/// Binomial coefficients `C(n, j) mod N` for `j = 0..=r`, by Pascal's rule.
pub fn binomials_mod(n: u64, r: usize, modulus: u64) -> Vec<u64> {
    let mut row = vec![0u64; r + 1];
    row[0] = 1 % modulus;
    for _ in 0..n {
        for j in (1..=r).rev() {
            row[j] = mod_add(row[j], row[j - 1], modulus);
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    #[test]
    fn inverses_and_rationals() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(reduce_rational(&frac(1, 2), 7).unwrap(), 4);
        assert_eq!(reduce_rational(&frac(-1, 3), 5).unwrap(), 3);
        assert!(reduce_rational(&frac(1, 2), 4).is_err());
        assert_eq!(ext_gcd(12, 18).0, 6);
    }

    #[test]
    fn binomial_rows() {
        assert_eq!(binomials_mod(5, 3, 1000), vec![1, 5, 10, 10]);
        assert_eq!(binomials_mod(5, 3, 7), vec![1, 5, 3, 3]);
    }

    #[test]
    fn matrix_power() {
        let j = ModMatrix::from_rational(&QMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]), 5).unwrap();
        assert_eq!(j.pow(7).data, vec![1, 2, 0, 1]);
        assert!(ModMatrix::identity(2, 5).sub(&j).mul(&ModMatrix::identity(2, 5).sub(&j)).is_zero());
    }
}
