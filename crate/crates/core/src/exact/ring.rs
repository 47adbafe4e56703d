//! Commutative orders given by structure constants, with a lattice representation.

use num_traits::{One, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// An order `R` with Z-basis `b_0 = 1, b_1, ..., b_{e-1}`.
///
/// `mul_table[i][j]` holds the coordinates of `b_i * b_j`, and
/// `lattice_rep[i]` is the action of `b_i` on the first homology of the
/// simple factor (a `2d x 2d` integral matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    basis_names: Vec<String>,
    mul_table: Vec<Vec<Vec<Rational>>>,
    lattice_rep: Vec<QMatrix>,
}

/// Coordinates of an element of `F = R ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

impl RingSpec {
    pub fn new(
        basis_names: Vec<String>,
        mul_table: Vec<Vec<Vec<Rational>>>,
        lattice_rep: Vec<QMatrix>,
    ) -> Result<Self> {
        let ring = RingSpec {
            basis_names,
            mul_table,
            lattice_rep,
        };
        ring.validate()?;
        Ok(ring)
    }

    /// The order `Z` acting by scalars on a lattice of rank `2 * dim`.
    pub fn integers(dim: usize) -> Self {
        RingSpec {
            basis_names: vec!["1".into()],
            mul_table: vec![vec![vec![Rational::one()]]],
            lattice_rep: vec![QMatrix::identity(2 * dim)],
        }
    }

    pub fn degree(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn mul_table(&self) -> &[Vec<Vec<Rational>>] {
        &self.mul_table
    }

    pub fn lattice_reps(&self) -> &[QMatrix] {
        &self.lattice_rep
    }

    /// Size of the lattice representation, `2 * dim` of the factor.
    pub fn lattice_size(&self) -> usize {
        self.lattice_rep[0].rows()
    }

    fn validate(&self) -> Result<()> {
        let e = self.basis_names.len();
        let bad = |msg: String| Err(Error::InvalidRing(msg));
        if e == 0 {
            return bad("empty basis".into());
        }
        if self.mul_table.len() != e
            || self
                .mul_table
                .iter()
                .any(|row| row.len() != e || row.iter().any(|c| c.len() != e))
        {
            return bad(format!("mul_table must be {e}x{e} of length-{e} vectors"));
        }
        if self
            .mul_table
            .iter()
            .flatten()
            .flatten()
            .any(|c| !c.is_integer())
        {
            return bad("structure constants must be integers".into());
        }
        if self.lattice_rep.len() != e {
            return bad(format!("lattice_rep needs {e} matrices"));
        }
        let n = self.lattice_rep[0].rows();
        if n == 0 || n % 2 == 1 {
            return bad("lattice_rep matrices must have even positive size".into());
        }
        for (i, m) in self.lattice_rep.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return bad(format!("lattice_rep[{i}] is not {n}x{n}"));
            }
            if !m.is_integral() {
                return bad(format!("lattice_rep[{i}] is not integral"));
            }
        }
        if n % e != 0 {
            return bad(format!("degree {e} does not divide lattice rank {n}"));
        }
        for i in 0..e {
            let bi = self.unit_vec(i);
            if self.mul_table[0][i] != bi || self.mul_table[i][0] != bi {
                return bad(format!("first basis element is not a unit for b_{i}"));
            }
            for j in 0..e {
                if self.mul_table[i][j] != self.mul_table[j][i] {
                    return bad(format!("b_{i} b_{j} != b_{j} b_{i}"));
                }
                for k in 0..e {
                    let left = self.mul_coords(&self.mul_table[i][j], &self.unit_vec(k));
                    let right = self.mul_coords(&self.unit_vec(i), &self.mul_table[j][k]);
                    if left != right {
                        return bad(format!("(b_{i} b_{j}) b_{k} != b_{i} (b_{j} b_{k})"));
                    }
                }
            }
        }
        if self.lattice_rep[0] != QMatrix::identity(n) {
            return bad("lattice_rep of the unit is not the identity".into());
        }
        for i in 0..e {
            for j in 0..e {
                let lhs = self.lattice_rep[i].mul(&self.lattice_rep[j]);
                let rhs = self.lattice_of(&self.mul_table[i][j]);
                if lhs != rhs {
                    return bad(format!("lattice_rep is not multiplicative on b_{i} b_{j}"));
                }
            }
        }
        // Faithfulness: the representing matrices must be independent.
        let flat: Vec<Vec<Rational>> = self.lattice_rep.iter().map(|m| m.entries().to_vec()).collect();
        if QMatrix::from_rows(flat)?.rank() != e {
            return bad("lattice_rep is not faithful".into());
        }
        Ok(())
    }

    fn unit_vec(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.degree()];
        v[i] = Rational::one();
        v
    }

    fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let e = self.degree();
        let mut out = vec![Rational::zero(); e];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.mul_table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    fn lattice_of(&self, coords: &[Rational]) -> QMatrix {
        let n = self.lattice_size();
        coords
            .iter()
            .zip(&self.lattice_rep)
            .filter(|(c, _)| !c.is_zero())
            .fold(QMatrix::zeros(n, n), |acc, (c, m)| acc.add(&m.scale(c)))
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: coords.len(),
            });
        }
        Ok(FieldElement { coords })
    }

    pub fn scalar(&self, c: Rational) -> FieldElement {
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[0] = c;
        FieldElement { coords }
    }

    pub fn zero(&self) -> FieldElement {
        self.scalar(Rational::zero())
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(Rational::one())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement {
            coords: self.mul_coords(&a.coords, &b.coords),
        }
    }

    /// Matrix of multiplication by `x` on coordinates: column `c` is `x * b_c`.
    pub fn regular(&self, x: &FieldElement) -> QMatrix {
        let e = self.degree();
        let cols: Vec<Vec<Rational>> = (0..e)
            .map(|c| self.mul_coords(&x.coords, &self.unit_vec(c)))
            .collect();
        QMatrix::from_columns(e, &cols)
    }

    /// Action of `x` on the homology of the factor.
    pub fn lattice(&self, x: &FieldElement) -> QMatrix {
        self.lattice_of(&x.coords)
    }

    pub fn inverse(&self, x: &FieldElement) -> Option<FieldElement> {
        let sol = self.regular(x).solve(&self.unit_vec(0))?;
        Some(FieldElement { coords: sol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, rat};

    pub(crate) fn gaussian() -> RingSpec {
        let z = || rat(0);
        let o = || rat(1);
        RingSpec::new(
            vec!["1".into(), "i".into()],
            vec![
                vec![vec![o(), z()], vec![z(), o()]],
                vec![vec![z(), o()], vec![rat(-1), z()]],
            ],
            vec![
                QMatrix::identity(2),
                QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn gaussian_integers() {
        let r = gaussian();
        let i = r.element(vec![rat(0), rat(1)]).unwrap();
        assert_eq!(r.mul(&i, &i), r.scalar(rat(-1)));
        let x = r.element(vec![rat(1), rat(1)]).unwrap();
        let inv = r.inverse(&x).unwrap();
        assert_eq!(inv.coords, vec![frac(1, 2), frac(-1, 2)]);
        assert_eq!(r.mul(&x, &inv), r.one());
        assert_eq!(r.lattice(&i), QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn rejects_bad_rep() {
        let z = || rat(0);
        let o = || rat(1);
        let res = RingSpec::new(
            vec!["1".into(), "i".into()],
            vec![
                vec![vec![o(), z()], vec![z(), o()]],
                vec![vec![z(), o()], vec![rat(-1), z()]],
            ],
            vec![QMatrix::identity(2), QMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])],
        );
        assert!(matches!(res, Err(Error::InvalidRing(_))));
    }
}
