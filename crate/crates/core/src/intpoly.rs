//! Polynomials with rational coefficients, minimal polynomials of matrices,
//! cyclotomic divisors and the Bezout data at `t = 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, fmt_rational, int, rat, Rational};
use crate::exact::QMatrix;

/// Coefficients lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", fmt_rational(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `t - c`
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![-c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division over Q.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(q), Self::new(rem)))
    }

    pub fn divides(&self, f: &Self) -> Result<bool> {
        Ok(f.div_rem(self)?.1.is_zero())
    }

    /// `f(t + c)`
    pub fn shift(&self, c: &Rational) -> Self {
        let step = Self::new(vec![c.clone(), Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| acc.mul(&step).add(&Self::constant(a.clone())))
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &QMatrix) -> Result<QMatrix> {
        m.ensure_square()?;
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc[(i, i)] = &acc[(i, i)] + c;
            }
        }
        Ok(acc)
    }
}

/// Minimal polynomial by linear dependence among `I, M, M^2, ...`.
pub fn minimal_polynomial(m: &QMatrix) -> Result<IntPolynomial> {
    m.ensure_square()?;
    let n = m.rows();
    let mut powers: Vec<Vec<Rational>> = Vec::new();
    let mut cur = QMatrix::identity(n);
    loop {
        let flat = cur.entries().to_vec();
        if !powers.is_empty() {
            let basis = QMatrix::from_columns(n * n, &powers);
            if let Some(c) = basis.solve(&flat) {
                let mut coeffs: Vec<Rational> = c.into_iter().map(|x| -x).collect();
                coeffs.push(Rational::one());
                let f = IntPolynomial::new(coeffs);
                debug_assert!(f.eval_matrix(m)?.is_zero());
                return Ok(f);
            }
        } else if n == 0 {
            return Ok(IntPolynomial::one());
        }
        powers.push(flat);
        cur = cur.mul(m);
    }
}

/// Horner evaluation, the public face of [`IntPolynomial::eval_matrix`].
pub fn eval_at_endo(f: &IntPolynomial, m: &QMatrix) -> Result<QMatrix> {
    f.eval_matrix(m)
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut out = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// `Φ_1, ..., Φ_bound` via `t^m - 1 = Π_{d | m} Φ_d`.
pub fn cyclotomics_upto(bound: u64) -> Vec<IntPolynomial> {
    let mut out: Vec<IntPolynomial> = Vec::with_capacity(bound as usize);
    for m in 1..=bound {
        let mut coeffs = vec![Rational::zero(); m as usize + 1];
        coeffs[0] = rat(-1);
        coeffs[m as usize] = Rational::one();
        let mut f = IntPolynomial::new(coeffs);
        for d in 1..m {
            if m % d == 0 {
                f = f.div_rem(&out[d as usize - 1]).expect("nonzero divisor").0;
            }
        }
        out.push(f);
    }
    out
}

pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m >= 1);
    cyclotomics_upto(m).pop().expect("m >= 1")
}

/// All `m` with `Φ_m | f`, ascending.
pub fn cyclotomic_divisors(f: &IntPolynomial) -> Result<Vec<u64>> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)? as u64;
    // φ(m) >= sqrt(m / 2), so φ(m) <= deg forces m <= 2 deg^2.
    let bound = 2 * deg * deg + 2;
    let phis = cyclotomics_upto(bound);
    let mut out = Vec::new();
    for m in 1..=bound {
        if euler_phi(m) <= deg && phis[m as usize - 1].divides(f)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// `f = f1 * (t - 1)^r` with `f1(1) != 0`.
pub fn split_at_one(f: &IntPolynomial) -> Result<(IntPolynomial, usize)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let one = Rational::one();
    let lin = IntPolynomial::linear(one.clone());
    let mut f1 = f.clone();
    let mut r = 0;
    while f1.eval(&one).is_zero() {
        f1 = f1.div_rem(&lin)?.0;
        r += 1;
    }
    Ok((f1, r))
}

/// Bezout data at `t = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub g1: IntPolynomial,
    pub g2: IntPolynomial,
    pub k: BigInt,
}

/// Integral `g1, g2` and the least positive `k` with `f1 g1 + (t-1)^r g2 = k`.
///
/// Works in `s = t - 1`: `g1` is `k` times the inverse of `f1(s + 1)` modulo
/// `s^r`, and `k` clears its denominators.
pub fn bezout_at_one(f1: &IntPolynomial, r: usize) -> Result<Bezout> {
    if f1.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let one = Rational::one();
    let f1_at_1 = f1.eval(&one);
    if f1_at_1.is_zero() {
        return Err(Error::NotCoprime);
    }
    if r == 0 {
        return Ok(Bezout {
            g1: IntPolynomial::zero(),
            g2: IntPolynomial::one(),
            k: BigInt::one(),
        });
    }
    let h = f1.shift(&one);
    let h0 = h.coeff(0);
    let mut inv: Vec<Rational> = Vec::with_capacity(r);
    for j in 0..r {
        if j == 0 {
            inv.push(h0.recip());
            continue;
        }
        let s = (1..=j).fold(Rational::zero(), |acc, i| acc + h.coeff(i) * &inv[j - i]);
        inv.push(-s / &h0);
    }
    let k = denominator_lcm(&inv);
    let kq = int(&k);
    let g1_s = IntPolynomial::new(inv.iter().map(|c| c * &kq).collect());
    let g1 = g1_s.shift(&-one.clone());
    let t_minus_1_r = IntPolynomial::linear(one).pow(r);
    let (g2, rem) = IntPolynomial::constant(kq.clone())
        .sub(&f1.mul(&g1))
        .div_rem(&t_minus_1_r)?;
    assert!(rem.is_zero(), "Bezout remainder must vanish");
    assert!(g1.is_integral() && g2.is_integral(), "Bezout cofactors must be integral");
    debug_assert_eq!(
        f1.mul(&g1).add(&t_minus_1_r.mul(&g2)),
        IntPolynomial::constant(kq)
    );
    if f1.is_integral() {
        let bound = f1_at_1.abs().to_integer().pow(r as u32);
        assert!(bound.is_multiple_of(&k), "k must divide f1(1)^r");
    }
    Ok(Bezout { g1, g2, k })
}
