//! Subspaces of Q^n in a unique echelon form.

use num_traits::{One, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A subspace of `Q^ambient`.
///
/// The basis is the reduced column echelon form of any spanning set: the
/// basis vectors are the nonzero rows of the RREF of the transposed
/// spanning matrix. Two subspaces are equal iff their data is equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical basis of the span of `vectors`.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        if vectors.is_empty() || ambient == 0 {
            return Ok(Self::zero(ambient));
        }
        let m = QMatrix::from_rows(vectors.to_vec())?;
        let (r, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace {
            ambient,
            basis,
            pivots,
        })
    }

    /// Column space of `m`.
    pub fn column_space(m: &QMatrix) -> Self {
        Self::span(m.rows(), &m.columns()).expect("columns share the row count")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce against the echelon basis; pivot coordinates give the combination.
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (x, y) in w.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let bu = self.matrix();
        let bv = other.matrix();
        let kernel = bu.hstack(&bv.neg()).kernel_basis();
        let vs: Vec<_> = kernel
            .iter()
            .map(|k| bu.mul_vec(&k[..self.dim()]))
            .collect();
        Self::span(self.ambient, &vs)
    }

    /// Image of this subspace under `m`.
    pub fn image(&self, m: &QMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "image under mis-shaped matrix");
        let vs: Vec<_> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Self::span(m.rows(), &vs).expect("image vectors share the row count")
    }

    /// Kernel of `m` inside its domain.
    pub fn kernel_of(m: &QMatrix) -> Subspace {
        Self::span(m.cols(), &m.kernel_basis()).expect("kernel vectors share the column count")
    }

    /// A basis completion: standard vectors outside the pivot set.
    pub fn complement(&self) -> Subspace {
        let vs: Vec<_> = (0..self.ambient)
            .filter(|i| !self.pivots.contains(i))
            .map(|i| {
                let mut v = vec![Rational::zero(); self.ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Self::span(self.ambient, &vs).expect("unit vectors")
    }

    /// Projection onto `self` along `other`, which must be a complement.
    pub fn projection_along(&self, other: &Subspace) -> Result<QMatrix> {
        self.check_ambient(other)?;
        if self.dim() + other.dim() != self.ambient || !self.intersect(other)?.is_zero() {
            return Err(Error::Other(
                "projection requested along a non-complementary subspace".into(),
            ));
        }
        let joint = self.matrix().hstack(&other.matrix());
        let inv = joint.inverse().expect("complementary bases are independent");
        let first = inv.block(0, 0, self.dim(), self.ambient);
        Ok(self.matrix().mul(&first))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }
}

/// Kernel and image of a matrix, with rank-nullity asserted.
pub fn kernel_image(m: &QMatrix) -> (Subspace, Subspace) {
    let ker = Subspace::kernel_of(m);
    let im = Subspace::column_space(m);
    assert_eq!(ker.dim() + im.dim(), m.cols(), "rank-nullity");
    (ker, im)
}

/// Sum and intersection, with the Grassmann identity asserted.
pub fn sum_intersect(u: &Subspace, v: &Subspace) -> Result<(Subspace, Subspace)> {
    let s = u.sum(v)?;
    let i = u.intersect(v)?;
    assert_eq!(s.dim() + i.dim(), u.dim() + v.dim(), "Grassmann identity");
    Ok((s, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn canonical_examples() {
        let s = Subspace::span(2, &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert!(s.is_full());
        assert_eq!(Subspace::span(3, &[]).unwrap().dim(), 0);
        let l = Subspace::span(2, &[v(&[2, 4]), v(&[1, 2])]).unwrap();
        assert_eq!(l.basis(), &[v(&[1, 2])]);
        assert!(Subspace::span(2, &[v(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn kernel_image_examples() {
        let (k, i) = kernel_image(&QMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]));
        assert_eq!(k.basis(), &[v(&[1, 0])]);
        assert_eq!(i.basis(), &[v(&[1, 0])]);
        let (k, i) = kernel_image(&QMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]));
        assert_eq!(k, Subspace::span(2, &[v(&[1, -1])]).unwrap());
        assert_eq!(i, Subspace::span(2, &[v(&[1, 1])]).unwrap());
    }

    #[test]
    fn sum_intersect_examples() {
        let u = Subspace::span(3, &[v(&[1, 1, 0])]).unwrap();
        let w = Subspace::span(3, &[v(&[1, 1, 1]), v(&[0, 0, 1])]).unwrap();
        let (s, i) = sum_intersect(&u, &w).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(i, u);
        let (s, i) = sum_intersect(&u, &u).unwrap();
        assert_eq!((s, i), (u.clone(), u));
    }

    #[test]
    fn projection_is_idempotent() {
        let u = Subspace::span(2, &[v(&[1, 1])]).unwrap();
        let w = Subspace::span(2, &[v(&[1, -1])]).unwrap();
        let p = u.projection_along(&w).unwrap();
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.mul_vec(&v(&[2, 0])), v(&[1, 1]));
    }
}
