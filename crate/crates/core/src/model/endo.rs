//! Elements of `End(A) ⊗ Q = Π M_{k_i}(F_i)`.

use num_traits::{One, Zero};

use super::variety::AbelianVarietySpec;
use crate::error::{Error, Result};
use crate::exact::{FieldElement, QMatrix, Rational};
use crate::intpoly::{self, IntPolynomial};

/// One block per factor, stored after restriction of scalars: the block of
/// factor `i` is the `(e k) x (e k)` rational matrix of the `F`-linear map on
/// `F^k`, with entry `(a, b)` occupying the `e x e` sub-block at `(a e, b e)`
/// as its regular representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndoMatrix {
    blocks: Vec<QMatrix>,
}

impl EndoMatrix {
    pub fn identity(av: &AbelianVarietySpec) -> Self {
        EndoMatrix {
            blocks: av
                .factors()
                .iter()
                .map(|f| QMatrix::identity(f.field_space_dim()))
                .collect(),
        }
    }

    pub fn zero(av: &AbelianVarietySpec) -> Self {
        Self::scalar(av, Rational::zero())
    }

    pub fn scalar(av: &AbelianVarietySpec, c: Rational) -> Self {
        Self::identity(av).scale(&c)
    }

    /// From per-factor `k x k` arrays of field elements.
    pub fn from_entries(av: &AbelianVarietySpec, entries: &[Vec<Vec<FieldElement>>]) -> Result<Self> {
        if entries.len() != av.num_factors() {
            return Err(Error::DimensionMismatch {
                expected: av.num_factors(),
                found: entries.len(),
            });
        }
        let mut blocks = Vec::with_capacity(entries.len());
        for (f, rows) in av.factors().iter().zip(entries) {
            let (k, e) = (f.multiplicity, f.degree());
            if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: rows.len(),
                });
            }
            let mut m = QMatrix::zeros(k * e, k * e);
            for (a, row) in rows.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if x.coords.len() != e {
                        return Err(Error::DimensionMismatch {
                            expected: e,
                            found: x.coords.len(),
                        });
                    }
                    m.set_block(a * e, b * e, &f.ring.regular(x));
                }
            }
            blocks.push(m);
        }
        Ok(EndoMatrix { blocks })
    }

    /// From rational matrices on `F_i^{k_i}`; each must commute with the `F`-action.
    pub fn from_blocks(av: &AbelianVarietySpec, blocks: Vec<QMatrix>) -> Result<Self> {
        if blocks.len() != av.num_factors() {
            return Err(Error::DimensionMismatch {
                expected: av.num_factors(),
                found: blocks.len(),
            });
        }
        for (i, (f, b)) in av.factors().iter().zip(&blocks).enumerate() {
            let n = f.field_space_dim();
            if b.rows() != n || b.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.rows(),
                });
            }
            for s in field_action(av, i) {
                if s.mul(b) != b.mul(&s) {
                    return Err(Error::NotOrderStable(format!(
                        "block of factor `{}` is not linear over its field",
                        f.name
                    )));
                }
            }
        }
        Ok(EndoMatrix { blocks })
    }

    pub fn blocks(&self) -> &[QMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &QMatrix {
        &self.blocks[i]
    }

    pub fn entry(&self, av: &AbelianVarietySpec, factor: usize, a: usize, b: usize) -> FieldElement {
        let e = av.factor(factor).degree();
        FieldElement {
            coords: (0..e)
                .map(|c| self.blocks[factor][(a * e + c, b * e)].clone())
                .collect(),
        }
    }

    pub fn entries(&self, av: &AbelianVarietySpec) -> Vec<Vec<Vec<FieldElement>>> {
        av.factors()
            .iter()
            .enumerate()
            .map(|(i, f)| {
                (0..f.multiplicity)
                    .map(|a| (0..f.multiplicity).map(|b| self.entry(av, i, a, b)).collect())
                    .collect()
            })
            .collect()
    }

    fn zip(&self, o: &Self, op: impl Fn(&QMatrix, &QMatrix) -> QMatrix) -> Self {
        EndoMatrix {
            blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, QMatrix::mul)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, QMatrix::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, QMatrix::sub)
    }

    pub fn neg(&self) -> Self {
        EndoMatrix {
            blocks: self.blocks.iter().map(QMatrix::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EndoMatrix {
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// `self - id`
    pub fn minus_identity(&self) -> Self {
        EndoMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.sub_scalar_identity(&Rational::one()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        EndoMatrix {
            blocks: self.blocks.iter().map(|b| b.pow(e)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(QMatrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| *b == QMatrix::identity(b.rows()))
    }

    /// Entries lie in the declared orders.
    pub fn is_integral(&self, av: &AbelianVarietySpec) -> bool {
        self.entries(av).iter().flatten().flatten().all(FieldElement::is_integral)
    }

    pub fn commutes(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Block-diagonal Q-matrix on `Π F_i^{k_i}`.
    pub fn total_matrix(&self) -> QMatrix {
        QMatrix::block_diagonal(&self.blocks)
    }

    pub fn minimal_polynomial(&self) -> IntPolynomial {
        intpoly::minimal_polynomial(&self.total_matrix()).expect("square blocks")
    }

    pub fn det(&self) -> Rational {
        self.blocks
            .iter()
            .map(|b| b.det().expect("square block"))
            .fold(Rational::one(), |acc, d| acc * d)
    }

    /// Isogeny test: nonzero determinant.
    pub fn is_isogeny(&self) -> bool {
        !self.det().is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(QMatrix::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(EndoMatrix { blocks })
    }

    pub fn eval_poly(&self, f: &IntPolynomial) -> Self {
        EndoMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|b| f.eval_matrix(b).expect("square block"))
                .collect(),
        }
    }

    /// Action on `H_1(A, Q) = Q^{2g}`.
    pub fn rational_representation(&self, av: &AbelianVarietySpec) -> QMatrix {
        let n = av.lattice_rank();
        let mut out = QMatrix::zeros(n, n);
        for (i, f) in av.factors().iter().enumerate() {
            let off = av.lattice_offset(i);
            let s = 2 * f.dim;
            for a in 0..f.multiplicity {
                for b in 0..f.multiplicity {
                    let x = self.entry(av, i, a, b);
                    if x.is_zero() {
                        continue;
                    }
                    out.set_block(off + a * s, off + b * s, &f.ring.lattice(&x));
                }
            }
        }
        out
    }

    /// Largest denominator appearing in the lattice action.
    pub fn lattice_denominator(&self, av: &AbelianVarietySpec) -> num_bigint::BigInt {
        crate::exact::rational::denominator_lcm(self.rational_representation(av).entries())
    }
}

/// Matrices of multiplication by the basis of `F_i` on `F_i^{k_i}`.
pub fn field_action(av: &AbelianVarietySpec, i: usize) -> Vec<QMatrix> {
    let f = av.factor(i);
    let e = f.degree();
    (0..e)
        .map(|c| {
            let mut coords = vec![Rational::zero(); e];
            coords[c] = Rational::one();
            let l = f.ring.regular(&FieldElement { coords });
            QMatrix::block_diagonal(&vec![l; f.multiplicity])
        })
        .collect()
}

/// Z-basis of `End(A)`: elementary matrices times basis elements of the orders.
pub fn endomorphism_basis(av: &AbelianVarietySpec) -> Vec<EndoMatrix> {
    let mut out = Vec::new();
    for (i, f) in av.factors().iter().enumerate() {
        let e = f.degree();
        for a in 0..f.multiplicity {
            for b in 0..f.multiplicity {
                for c in 0..e {
                    let mut m = EndoMatrix::zero(av);
                    let mut coords = vec![Rational::zero(); e];
                    coords[c] = Rational::one();
                    m.blocks[i].set_block(a * e, b * e, &f.ring.regular(&FieldElement { coords }));
                    out.push(m);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn int_entries(av: &AbelianVarietySpec, rows: &[&[i64]]) -> EndoMatrix {
        let r = &av.factor(0).ring;
        let e = vec![rows
            .iter()
            .map(|row| row.iter().map(|&x| r.scalar(rat(x))).collect())
            .collect()];
        EndoMatrix::from_entries(av, &e).unwrap()
    }

    #[test]
    fn rational_representation_examples() {
        let av = AbelianVarietySpec::elliptic_power(2);
        let two = EndoMatrix::scalar(&av, rat(2));
        assert_eq!(two.rational_representation(&av), QMatrix::identity(4).scale(&rat(2)));
        let j = int_entries(&av, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            j.rational_representation(&av),
            QMatrix::from_i64_rows(&[&[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]])
        );
        assert_eq!(j.entry(&av, 0, 0, 1).coords, vec![rat(1)]);
    }

    #[test]
    fn from_blocks_rejects_non_linear() {
        let av = AbelianVarietySpec::elliptic_power(1);
        assert!(EndoMatrix::from_blocks(&av, vec![QMatrix::identity(1)]).is_ok());
        assert!(EndoMatrix::from_blocks(&av, vec![QMatrix::identity(2)]).is_err());
    }
}
