//! Smith normal form over the integers with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{QMatrix, ZMatrix};
use super::rational::Rational;
use crate::error::{Error, Result};

/// `u * m * v == d`, `u` and `v` unimodular, `d` diagonal with `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ZMatrix,
    pub d: ZMatrix,
    pub v: ZMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn swap_rows(m: &mut ZMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut ZMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// row[dst] += c * row[src]
fn add_row(m: &mut ZMatrix, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.cols() {
        let x = &m[(src, j)] * c;
        m[(dst, j)] += x;
    }
}

fn add_col(m: &mut ZMatrix, dst: usize, src: usize, c: &BigInt) {
    for i in 0..m.rows() {
        let x = &m[(i, src)] * c;
        m[(i, dst)] += x;
    }
}

fn negate_row(m: &mut ZMatrix, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -m[(r, j)].clone();
    }
}

pub fn smith_normal_form(m: &ZMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = ZMatrix::identity(rows);
    let mut v = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                add_row(&mut d, i, t, &q);
                add_row(&mut u, i, t, &q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                add_col(&mut d, j, t, &q);
                add_col(&mut v, j, t, &q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_entry_cross(&d, t);
                swap_rows(&mut d, t, pi);
                swap_rows(&mut u, t, pi);
                swap_cols(&mut d, t, pj);
                swap_cols(&mut v, t, pj);
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((i, _)) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Smith { u, d, v }
}

fn smallest_entry(d: &ZMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` (the pivot itself included).
fn smallest_entry_cross(d: &ZMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cands = (t..d.rows())
        .map(|i| (i, t))
        .chain((t..d.cols()).map(|j| (t, j)));
    for (i, j) in cands {
        if !d[(i, j)].is_zero()
            && (d[best].is_zero() || d[(i, j)].abs() < d[best].abs())
        {
            best = (i, j);
        }
    }
    best
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(u: &ZMatrix) -> ZMatrix {
    QMatrix::from_int(u)
        .inverse()
        .and_then(|m| m.to_int())
        .expect("matrix is unimodular")
}

/// Scales a rational matrix to a primitive integral one column by column.
pub fn clear_column_denominators(m: &QMatrix) -> ZMatrix {
    let mut out = ZMatrix::zeros(m.rows(), m.cols());
    for j in 0..m.cols() {
        let col = m.column(j);
        let den = col
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        for (i, q) in col.iter().enumerate() {
            out[(i, j)] = (q * Rational::from_integer(den.clone())).to_integer();
        }
    }
    out
}

/// Integral basis (as columns) of `span(columns of m) ∩ Z^n`.
pub fn saturation(m: &QMatrix) -> ZMatrix {
    let z = clear_column_denominators(m);
    let s = smith_normal_form(&z);
    let r = s.rank();
    let uinv = unimodular_inverse(&s.u);
    uinv.block(0, 0, uinv.rows(), r)
}

/// Surjection `Z^n -> Z^{n-r}` whose kernel is the saturation of the column span of `m`.
pub fn saturated_quotient(m: &QMatrix) -> ZMatrix {
    let n = m.rows();
    if m.cols() == 0 {
        return ZMatrix::identity(n);
    }
    let s = smith_normal_form(&clear_column_denominators(m));
    let r = s.rank();
    s.u.block(r, 0, n - r, n)
}

/// Exponent of `Z^s / H` where `H` is spanned by the columns of `m`.
pub fn quotient_exponent(m: &ZMatrix) -> Result<BigInt> {
    let s = smith_normal_form(m);
    let rank = s.rank();
    if rank < m.rows() {
        return Err(Error::NotFiniteIndex {
            rank,
            expected: m.rows(),
        });
    }
    Ok(s.diagonal().last().cloned().unwrap_or_else(BigInt::one))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &ZMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn examples() {
        let to = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(check(&ZMatrix::from_i64_rows(&[&[2, 0], &[0, 2]])).diagonal(), to(&[2, 2]));
        assert_eq!(check(&ZMatrix::from_i64_rows(&[&[1, 1], &[1, 2]])).diagonal(), to(&[1, 1]));
        assert_eq!(check(&ZMatrix::from_i64_rows(&[&[2, 1], &[1, 2]])).diagonal(), to(&[1, 3]));
        assert_eq!(
            check(&ZMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(),
            to(&[2, 6, 12])
        );
        check(&ZMatrix::from_i64_rows(&[&[0, 0], &[0, 0], &[3, 0]]));
    }

    #[test]
    fn saturation_of_scaled_line() {
        let m = QMatrix::from_i64_rows(&[&[2], &[4]]);
        let s = saturation(&m);
        assert_eq!(s.cols(), 1);
        let col = s.column(0);
        assert!(col == vec![BigInt::from(1), BigInt::from(2)] || col == vec![BigInt::from(-1), BigInt::from(-2)]);
        let p = saturated_quotient(&m);
        assert_eq!(p.rows(), 1);
        assert!(p.mul(&s).is_zero());
    }

    #[test]
    fn exponent() {
        let m = ZMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]);
        assert_eq!(quotient_exponent(&m).unwrap(), BigInt::from(3));
        let m = ZMatrix::from_i64_rows(&[&[1, 2], &[1, 2]]);
        assert!(quotient_exponent(&m).is_err());
    }
}
