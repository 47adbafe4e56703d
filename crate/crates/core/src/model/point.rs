//! Symbolic points: combinations of independent generic points plus torsion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::endo::EndoMatrix;
use super::subgroup::ConnectedSubgroup;
use super::variety::AbelianVarietySpec;
use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, frac_part};
use crate::exact::Rational;

/// Declared generic points and the abelian subvariety each one is generic in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointDecls {
    supports: BTreeMap<String, ConnectedSubgroup>,
}

impl PointDecls {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, support: ConnectedSubgroup) {
        self.supports.insert(name.into(), support);
    }

    pub fn with(mut self, name: impl Into<String>, support: ConnectedSubgroup) -> Self {
        self.declare(name, support);
        self
    }

    pub fn support(&self, name: &str) -> Result<&ConnectedSubgroup> {
        self.supports
            .get(name)
            .ok_or_else(|| Error::UndeclaredGenerator(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.supports.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ConnectedSubgroup)> {
        self.supports.iter()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.supports.contains_key(name)
    }
}

/// `Σ φ_j(p_j) + t` with `φ_j ∈ End(A) ⊗ Q`, `p_j` generic and `t` torsion.
///
/// The torsion part is a vector of `H_1(A, Q) / H_1(A, Z)`, kept reduced into
/// `[0, 1)`. Applying a non-integral endomorphism to it picks the preimage
/// given by the rational lattice action.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicPoint {
    terms: BTreeMap<String, EndoMatrix>,
    torsion: Vec<Rational>,
}

impl SymbolicPoint {
    pub fn zero(av: &AbelianVarietySpec) -> Self {
        SymbolicPoint {
            terms: BTreeMap::new(),
            torsion: vec![Rational::zero(); av.lattice_rank()],
        }
    }

    pub fn generic(av: &AbelianVarietySpec, name: &str) -> Self {
        Self::term(av, name, EndoMatrix::identity(av))
    }

    pub fn term(av: &AbelianVarietySpec, name: &str, coeff: EndoMatrix) -> Self {
        let mut p = Self::zero(av);
        if !coeff.is_zero() {
            p.terms.insert(name.to_string(), coeff);
        }
        p
    }

    /// Torsion point `vector / order` in lattice coordinates.
    pub fn torsion(av: &AbelianVarietySpec, order: &BigInt, vector: &[BigInt]) -> Result<Self> {
        if vector.len() != av.lattice_rank() {
            return Err(Error::DimensionMismatch {
                expected: av.lattice_rank(),
                found: vector.len(),
            });
        }
        if order <= &BigInt::zero() {
            return Err(Error::Other(format!("torsion order {order} must be positive")));
        }
        Ok(Self::from_torsion_vector(
            av,
            vector
                .iter()
                .map(|x| Rational::new(x.clone(), order.clone()))
                .collect(),
        ))
    }

    pub fn from_torsion_vector(av: &AbelianVarietySpec, t: Vec<Rational>) -> Self {
        assert_eq!(t.len(), av.lattice_rank());
        SymbolicPoint {
            terms: BTreeMap::new(),
            torsion: t.iter().map(frac_part).collect(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<String, EndoMatrix> {
        &self.terms
    }

    pub fn torsion_vector(&self) -> &[Rational] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.torsion.iter().all(Zero::is_zero)
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        denominator_lcm(&self.torsion)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (name, c) in &o.terms {
            let merged = match terms.get(name) {
                Some(a) => a.add(c),
                None => c.clone(),
            };
            if merged.is_zero() {
                terms.remove(name);
            } else {
                terms.insert(name.clone(), merged);
            }
        }
        SymbolicPoint {
            terms,
            torsion: self
                .torsion
                .iter()
                .zip(&o.torsion)
                .map(|(a, b)| frac_part(&(a + b)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SymbolicPoint {
            terms: self.terms.iter().map(|(n, c)| (n.clone(), c.neg())).collect(),
            torsion: self.torsion.iter().map(|t| frac_part(&-t.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `m(p)` for `m ∈ End(A) ⊗ Q`.
    pub fn apply(&self, av: &AbelianVarietySpec, m: &EndoMatrix) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| (n.clone(), m.mul(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let rep = m.rational_representation(av);
        SymbolicPoint {
            terms,
            torsion: rep.mul_vec(&self.torsion).iter().map(frac_part).collect(),
        }
    }

    pub fn scale(&self, av: &AbelianVarietySpec, c: &Rational) -> Self {
        self.apply(av, &EndoMatrix::scalar(av, c.clone()))
    }

    /// Names of the generic points involved.
    pub fn generators(&self) -> impl Iterator<Item = &String> {
        self.terms.keys()
    }

    pub fn check_declared(&self, decls: &PointDecls) -> Result<()> {
        for name in self.terms.keys() {
            decls.support(name)?;
        }
        Ok(())
    }
}

/// Connected closure and torsion exponent of the cyclic group generated by `p`.
pub fn point_closure(
    av: &AbelianVarietySpec,
    decls: &PointDecls,
    p: &SymbolicPoint,
) -> Result<(ConnectedSubgroup, BigInt)> {
    let mut acc = ConnectedSubgroup::zero(av);
    for (name, c) in p.terms() {
        acc = acc.sum(&decls.support(name)?.image(c));
    }
    Ok((acc, p.torsion_order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn closure_examples() {
        let av = AbelianVarietySpec::elliptic_power(1);
        let decls = PointDecls::new().with("p", ConnectedSubgroup::full(&av));
        let (c, m) = point_closure(&av, &decls, &SymbolicPoint::zero(&av)).unwrap();
        assert!(c.is_zero());
        assert_eq!(m, BigInt::from(1));
        let (c, _) = point_closure(&av, &decls, &SymbolicPoint::generic(&av, "p")).unwrap();
        assert!(c.is_full());
        let t = SymbolicPoint::torsion(&av, &BigInt::from(3), &[BigInt::from(1), BigInt::from(0)]).unwrap();
        let (c, m) = point_closure(&av, &decls, &t).unwrap();
        assert!(c.is_zero());
        assert_eq!(m, BigInt::from(3));
        let q = SymbolicPoint::generic(&av, "q");
        assert_eq!(
            point_closure(&av, &decls, &q),
            Err(Error::UndeclaredGenerator("q".into()))
        );
    }

    #[test]
    fn scaling_keeps_closure() {
        let av = AbelianVarietySpec::elliptic_power(2);
        let decls = PointDecls::new().with("p", ConnectedSubgroup::full(&av));
        let p = SymbolicPoint::generic(&av, "p");
        let base = point_closure(&av, &decls, &p).unwrap().0;
        for l in [-3, -1, 2, 5] {
            assert_eq!(point_closure(&av, &decls, &p.scale(&av, &rat(l))).unwrap().0, base);
        }
    }
}
