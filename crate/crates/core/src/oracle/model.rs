//! Reduction of a scenario to the torsion model `A[N] = (Z/N)^{2g}`.
//!
//! A point `u` of the model stands for `u / N` in lattice coordinates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modular::{check_modulus, reduce_rational, vec_add, ModMatrix};
use crate::error::{Error, Result};
use crate::exact::smith::saturation;
use crate::exact::Rational;
use crate::model::{AbelianVarietySpec, AffineEndo, PointDecls};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModAffine {
    pub matrix: ModMatrix,
    pub translation: Vec<u64>,
}

impl ModAffine {
    pub fn identity(rank: usize, modulus: u64) -> Self {
        ModAffine {
            matrix: ModMatrix::identity(rank, modulus),
            translation: vec![0; rank],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        vec_add(&self.matrix.mul_vec(x), &self.translation, self.modulus())
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        ModAffine {
            matrix: self.matrix.mul(&other.matrix),
            translation: self.apply(&other.translation),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.matrix.rows, self.modulus());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledPoint {
    pub name: String,
    pub vector: Vec<u64>,
}

#[derive(Clone, Debug)]
struct Template {
    matrix: ModMatrix,
    torsion: Vec<u64>,
    /// (index into `names`, action of the coefficient)
    terms: Vec<(usize, ModMatrix)>,
}

#[derive(Clone, Debug)]
pub struct FiniteModel {
    modulus: u64,
    rank: usize,
    names: Vec<String>,
    supports: Vec<ModMatrix>,
    templates: Vec<Template>,
    points: Vec<Vec<u64>>,
    gens: Vec<ModAffine>,
}

/// Image of a torsion vector with entries in `[0, 1)` in `(Z/N)^{2g}`.
fn reduce_torsion(t: &[Rational], modulus: u64) -> Result<Vec<u64>> {
    let n = Rational::from_integer(BigInt::from(modulus));
    t.iter()
        .map(|q| {
            let scaled = q * &n;
            if !scaled.is_integer() {
                let order = crate::exact::rational::denominator_lcm(t);
                return Err(Error::IncompatibleTorsion {
                    order: order.to_string(),
                    modulus,
                });
            }
            reduce_rational(&scaled, modulus)
        })
        .collect()
}

pub fn reduce_mod(
    av: &AbelianVarietySpec,
    decls: &PointDecls,
    gens: &[AffineEndo],
    modulus: u64,
    seed: u64,
) -> Result<FiniteModel> {
    check_modulus(modulus)?;
    let names: Vec<String> = gens
        .iter()
        .flat_map(|g| g.translation.generators().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let supports = names
        .iter()
        .map(|name| {
            let lat = decls.support(name)?.lattice_subspace(av);
            Ok(ModMatrix::from_int(&saturation(&lat.matrix()), modulus))
        })
        .collect::<Result<Vec<_>>>()?;
    let templates = gens
        .iter()
        .map(|g| {
            let terms = g
                .translation
                .terms()
                .iter()
                .map(|(name, c)| {
                    let idx = names.binary_search(name).expect("collected above");
                    Ok((idx, ModMatrix::from_rational(&c.rational_representation(av), modulus)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Template {
                matrix: ModMatrix::from_rational(&g.tau.rational_representation(av), modulus)?,
                torsion: reduce_torsion(g.translation.torsion_vector(), modulus)?,
                terms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut model = FiniteModel {
        modulus,
        rank: av.lattice_rank(),
        names,
        supports,
        templates,
        points: Vec::new(),
        gens: Vec::new(),
    };
    model.resample(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(model)
}

impl FiniteModel {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[ModAffine] {
        &self.gens
    }

    /// No generic point had to be sampled.
    pub fn is_exact(&self) -> bool {
        self.names.is_empty()
    }

    pub fn sampled(&self) -> Vec<SampledPoint> {
        self.names
            .iter()
            .zip(&self.points)
            .map(|(name, v)| SampledPoint {
                name: name.clone(),
                vector: v.clone(),
            })
            .collect()
    }

    /// Draws fresh values for the generic points and rebuilds the translations.
    pub fn resample<R: Rng>(&mut self, rng: &mut R) {
        let n = self.modulus;
        self.points = self
            .supports
            .iter()
            .map(|basis| {
                let coeffs: Vec<u64> = (0..basis.cols).map(|_| rng.random_range(0..n)).collect();
                basis.mul_vec(&coeffs)
            })
            .collect();
        self.rebuild();
    }

    fn rebuild(&mut self) {
        let n = self.modulus;
        self.gens = self
            .templates
            .iter()
            .map(|t| {
                let mut y = t.torsion.clone();
                for (idx, m) in &t.terms {
                    y = vec_add(&y, &m.mul_vec(&self.points[*idx]), n);
                }
                ModAffine {
                    matrix: t.matrix.clone(),
                    translation: y,
                }
            })
            .collect();
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.rank).map(|_| rng.random_range(0..self.modulus)).collect()
    }

    /// Map of an exponent word, composed in index order.
    pub fn word_map(&self, word: &[u64]) -> ModAffine {
        self.gens
            .iter()
            .zip(word)
            .fold(ModAffine::identity(self.rank, self.modulus), |acc, (g, &e)| {
                acc.compose(&g.pow(e))
            })
    }
}

/// `x, σ(x), ..., σ^steps(x)`
pub fn iterate_orbit(map: &ModAffine, x: &[u64], steps: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(x.to_vec());
    for _ in 0..steps {
        let next = map.apply(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Smallest modulus that is a multiple of `n` and of every torsion order.
pub fn compatible_modulus(n: u64, gens: &[AffineEndo]) -> Option<u64> {
    let order = gens.iter().fold(BigInt::one(), |acc, g| {
        crate::exact::rational::lcm_big(&acc, &g.translation.torsion_order())
    });
    let lifted = crate::exact::rational::lcm_big(&BigInt::from(n), &order);
    if lifted.is_zero() {
        return None;
    }
    u64::try_from(lifted).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::model::{ConnectedSubgroup, EndoMatrix, SymbolicPoint};

    #[test]
    fn reduction_examples() {
        let e = AbelianVarietySpec::elliptic_power(1);
        let decls = PointDecls::new();
        let two = AffineEndo::linear(&e, EndoMatrix::scalar(&e, rat(2)));
        let m = reduce_mod(&e, &decls, &[two], 5, 0).unwrap();
        assert_eq!(m.gens()[0].matrix.data, vec![2, 0, 0, 2]);
        assert_eq!(m.gens()[0].translation, vec![0, 0]);
        assert!(m.is_exact());

        let y = SymbolicPoint::torsion(&e, &BigInt::from(2), &[BigInt::from(1), BigInt::from(1)]).unwrap();
        let t = AffineEndo::new(EndoMatrix::identity(&e), y);
        let m = reduce_mod(&e, &decls, std::slice::from_ref(&t), 4, 0).unwrap();
        assert_eq!(m.gens()[0].translation, vec![2, 2]);
        assert!(matches!(
            reduce_mod(&e, &decls, std::slice::from_ref(&t), 5, 0),
            Err(Error::IncompatibleTorsion { .. })
        ));
        assert_eq!(compatible_modulus(5, &[t]), Some(10));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let e = AbelianVarietySpec::elliptic_power(1);
        let decls = PointDecls::new().with("p", ConnectedSubgroup::full(&e));
        let g = AffineEndo::new(EndoMatrix::identity(&e), SymbolicPoint::generic(&e, "p"));
        let a = reduce_mod(&e, &decls, std::slice::from_ref(&g), 101, 7).unwrap();
        let b = reduce_mod(&e, &decls, std::slice::from_ref(&g), 101, 7).unwrap();
        assert_eq!(a.sampled(), b.sampled());
        assert_eq!(a.sampled()[0].name, "p");
        assert_eq!(a.gens()[0].translation, a.sampled()[0].vector);
        assert!(!a.is_exact());
    }

    #[test]
    fn orbit_iteration() {
        let id = ModAffine::identity(2, 7);
        assert_eq!(iterate_orbit(&id, &[3, 4], 5), vec![vec![3, 4]; 6]);
        let t = ModAffine {
            matrix: ModMatrix::identity(2, 7),
            translation: vec![1, 2],
        };
        assert_eq!(
            iterate_orbit(&t, &[0, 0], 3),
            vec![vec![0, 0], vec![1, 2], vec![2, 4], vec![3, 6]]
        );
        let e2 = AbelianVarietySpec::elliptic_power(2);
        let r = &e2.factor(0).ring;
        let jordan = EndoMatrix::from_entries(
            &e2,
            &[vec![vec![r.one(), r.one()], vec![r.zero(), r.one()]]],
        )
        .unwrap();
        let m = reduce_mod(&e2, &PointDecls::new(), &[AffineEndo::linear(&e2, jordan)], 5, 0).unwrap();
        assert_eq!(
            iterate_orbit(&m.gens()[0], &[0, 0, 1, 0], 2),
            vec![vec![0, 0, 1, 0], vec![1, 0, 1, 0], vec![2, 0, 1, 0]]
        );
    }
}
