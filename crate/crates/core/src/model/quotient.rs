use super::subgroup::ConnectedSubgroup;
use super::variety::AbelianVarietySpec;
use num_traits::{One, Zero};

use crate::exact::{QMatrix, Rational, Subspace};

/// `A / C` described per factor by a complement of `C` and the projection
/// `F^k -> F^k / C` written in complement coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub complements: Vec<Subspace>,
    pub projections: Vec<QMatrix>,
}

impl QuotientData {
    /// Q-dimensions of the quotient per factor.
    pub fn dims(&self) -> Vec<usize> {
        self.projections.iter().map(QMatrix::rows).collect()
    }
}

pub fn quotient_data(av: &AbelianVarietySpec, c: &ConnectedSubgroup) -> QuotientData {
    let mut complements = Vec::new();
    let mut projections = Vec::new();
    for (i, f) in av.factors().iter().enumerate() {
        let part = c.part(i);
        let comp = field_complement(av, i, part);
        let n = f.field_space_dim();
        let joint = part.matrix().hstack(&comp.matrix());
        let inv = joint.inverse().expect("complement completes a basis");
        projections.push(inv.block(part.dim(), 0, n - part.dim(), n));
        complements.push(comp);
    }
    QuotientData {
        complements,
        projections,
    }
}

/// Completion of `part` by standard `F`-coordinate lines, keeping `F`-stability.
fn field_complement(av: &AbelianVarietySpec, i: usize, part: &Subspace) -> Subspace {
    let f = av.factor(i);
    let e = f.degree();
    let n = f.field_space_dim();
    let mut acc = part.clone();
    let mut comp = Subspace::zero(n);
    for a in 0..f.multiplicity {
        let line = Subspace::span(
            n,
            &(0..e)
                .map(|c| {
                    let mut v = vec![Rational::zero(); n];
                    v[a * e + c] = Rational::one();
                    v
                })
                .collect::<Vec<_>>(),
        )
        .expect("unit vectors");
        if acc.intersect(&line).expect("same ambient").is_zero() {
            acc = acc.sum(&line).expect("same ambient");
            comp = comp.sum(&line).expect("same ambient");
        }
    }
    debug_assert!(acc.is_full());
    comp
}
