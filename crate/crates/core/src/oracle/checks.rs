//! Brute-force checks on a finite model.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::ModLattice;
use super::model::{FiniteModel, ModAffine};
use super::modular::{binomials_mod, reduce_big, vec_add, vec_scale, vec_sub, ModMatrix};
use crate::engine::FibrationCertificate;
use crate::exact::smith::{saturated_quotient, saturation};
use crate::exact::{QMatrix, Rational, ZMatrix};
use crate::model::{endomorphism_basis, AbelianVarietySpec};

pub const DEFAULT_EXHAUSTIVE_BOUND: u64 = 10_000_000;
pub const SAMPLED_POINTS: usize = 100_000;
pub const BFS_DEPTH: usize = 8;
pub const BFS_CAP: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// 1-based generator index.
    pub generator: usize,
    pub point: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationCheck {
    pub passed: bool,
    pub mode: CheckMode,
    pub points: u64,
    pub counterexample: Option<Counterexample>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseCheck {
    pub trials: usize,
    pub full: usize,
    pub full_rate: f64,
}

/// Subgroup generated by the differences `p_i - p_0`.
pub fn orbit_subgroup(modulus: u64, points: &[Vec<u64>]) -> ModLattice {
    let base = &points[0];
    let mut l = ModLattice::new(base.len(), modulus);
    for p in &points[1..] {
        l.insert(&vec_sub(p, base, modulus));
    }
    l
}

/// Integral basis of the matrices on `Z^{2g}` commuting with every endomorphism.
pub fn commutant_basis(av: &AbelianVarietySpec) -> Vec<ZMatrix> {
    let n = av.lattice_rank();
    let reps: Vec<QMatrix> = endomorphism_basis(av)
        .iter()
        .map(|b| b.rational_representation(av))
        .collect();
    let mut eqs = Vec::new();
    for r in &reps {
        for i in 0..n {
            for j in 0..n {
                // (X r - r X)_{ij}
                let mut row = vec![Rational::from_integer(BigInt::from(0)); n * n];
                for k in 0..n {
                    row[i * n + k] += &r[(k, j)];
                    row[k * n + j] -= &r[(i, k)];
                }
                eqs.push(row);
            }
        }
    }
    let sys = QMatrix::from_rows(eqs).expect("rectangular system");
    let kernel = sys.kernel_basis();
    let sat = saturation(&QMatrix::from_columns(n * n, &kernel));
    (0..sat.cols())
        .map(|c| {
            let col = sat.column(c);
            ZMatrix::from_rows(col.chunks(n).map(|r| r.to_vec()).collect()).expect("square")
        })
        .collect()
}

fn point_at(index: u64, rank: usize, modulus: u64) -> Vec<u64> {
    let mut idx = index;
    (0..rank)
        .map(|_| {
            let d = idx % modulus;
            idx /= modulus;
            d
        })
        .collect()
}

/// Checks `m·π(σ_i^n(x)) = m·π(x)` on `A[N]`, exhaustively when `N^{2g}` is
/// at most `bound`, otherwise on seeded random points.
pub fn verify_fibration(
    av: &AbelianVarietySpec,
    model: &FiniteModel,
    cert: &FibrationCertificate,
    bound: u64,
    seed: u64,
) -> FibrationCheck {
    let (n, rank) = (model.modulus(), model.rank());
    let total = (n as u128).checked_pow(rank as u32).unwrap_or(u128::MAX);
    let mode = if total <= bound as u128 {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled
    };
    if cert.c.is_full() {
        return FibrationCheck {
            passed: false,
            mode,
            points: 0,
            counterexample: None,
            message: Some("certificate names non-proper subgroup".into()),
        };
    }
    let p = ModMatrix::from_int(&saturated_quotient(&cert.c.lattice_subspace(av).matrix()), n)
        .scale(reduce_big(&cert.torsion_multiplier, n));
    let powered: Vec<ModAffine> = model
        .gens()
        .iter()
        .map(|g| g.pow(cert.powered_exponent))
        .collect();
    let check = |x: Vec<u64>| -> Option<Counterexample> {
        powered.iter().enumerate().find_map(|(i, g)| {
            let moved = p.mul_vec(&vec_sub(&g.apply(&x), &x, n));
            moved.iter().any(|&c| c != 0).then(|| Counterexample {
                generator: i + 1,
                point: x.clone(),
            })
        })
    };
    let (points, counterexample) = match mode {
        CheckMode::Exhaustive => {
            let total = total as u64;
            let found = (0..total)
                .into_par_iter()
                .find_map_first(|idx| check(point_at(idx, rank, n)));
            (total, found)
        }
        CheckMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vec<u64>> = (0..SAMPLED_POINTS).map(|_| model.random_point(&mut rng)).collect();
            let found = pts.into_par_iter().find_map_first(check);
            (SAMPLED_POINTS as u64, found)
        }
    };
    FibrationCheck {
        passed: counterexample.is_none(),
        mode,
        points,
        counterexample,
        message: None,
    }
}

/// Compares `σ^n(x)` with `x + Σ_{j=1}^{2g} C(n, j) β^{j-1}(β(x) + y)` for `n ≤ n_max`.
pub fn verify_closed_form(map: &ModAffine, x: &[u64], n_max: u64) -> bool {
    let modulus = map.modulus();
    let r = x.len();
    let beta = map.matrix.sub(&ModMatrix::identity(r, modulus));
    let mut terms = Vec::with_capacity(r);
    let mut w = vec_add(&beta.mul_vec(x), &map.translation, modulus);
    for _ in 0..r {
        terms.push(w.clone());
        w = beta.mul_vec(&w);
    }
    let mut direct = x.to_vec();
    for n in 0..=n_max {
        let binom = binomials_mod(n, r, modulus);
        let mut closed = x.to_vec();
        for j in 1..=r.min(n as usize) {
            closed = vec_add(&closed, &vec_scale(&terms[j - 1], binom[j], modulus), modulus);
        }
        if closed != direct {
            return false;
        }
        direct = map.apply(&direct);
    }
    true
}

/// Breadth-first orbit of `x` under `maps`, up to `depth` steps and `cap` points.
pub fn monoid_orbit(maps: &[ModAffine], x: &[u64], depth: usize, cap: usize) -> Vec<Vec<u64>> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(x.to_vec());
    let mut points = vec![x.to_vec()];
    let mut frontier = vec![x.to_vec()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &frontier {
            for g in maps {
                let q = g.apply(p);
                if seen.insert(q.clone()) {
                    points.push(q.clone());
                    next.push(q);
                    if points.len() >= cap {
                        return points;
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    points
}

/// Smallest submodule of `(Z/N)^{2g}` containing `h` and stable under `commutant`;
/// this is the `N`-torsion of the smallest abelian subvariety through `h`
/// whenever `N` avoids the finitely many bad primes of the model.
pub fn subvariety_hull(commutant: &[ModMatrix], h: &ModLattice) -> ModLattice {
    let mut hull = ModLattice::new(h.dim(), h.modulus());
    let gens: Vec<Vec<u64>> = h.rows().cloned().collect();
    for c in commutant {
        for g in &gens {
            hull.insert(&c.mul_vec(g));
            if hull.is_full() {
                return hull;
            }
        }
    }
    hull
}

/// Fraction of sampled points whose orbit under the `exponent`-th powers,
/// multiplied by `multiplier`, spans all of `A[N]` up to subvarieties.
pub fn dense_sampling_check<R: Rng>(
    model: &mut FiniteModel,
    commutant: &[ZMatrix],
    exponent: u64,
    multiplier: &BigInt,
    trials: usize,
    rng: &mut R,
) -> DenseCheck {
    let n = model.modulus();
    let comm: Vec<ModMatrix> = commutant.iter().map(|c| ModMatrix::from_int(c, n)).collect();
    let m = reduce_big(multiplier, n);
    let mut full = 0;
    for _ in 0..trials {
        if !model.is_exact() {
            model.resample(rng);
        }
        let maps: Vec<ModAffine> = model.gens().iter().map(|g| g.pow(exponent)).collect();
        let x = model.random_point(rng);
        let orbit = monoid_orbit(&maps, &x, BFS_DEPTH, BFS_CAP);
        let scaled: Vec<Vec<u64>> = orbit.iter().map(|p| vec_scale(p, m, n)).collect();
        if subvariety_hull(&comm, &orbit_subgroup(n, &scaled)).is_full() {
            full += 1;
        }
    }
    DenseCheck {
        trials,
        full,
        full_rate: if trials == 0 { 0.0 } else { full as f64 / trials as f64 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::model::{AffineEndo, ConnectedSubgroup, EndoMatrix, PointDecls, SymbolicPoint};
    use crate::oracle::reduce_mod;

    fn jordan(av: &AbelianVarietySpec) -> EndoMatrix {
        let r = &av.factor(0).ring;
        EndoMatrix::from_entries(av, &[vec![vec![r.one(), r.one()], vec![r.zero(), r.one()]]]).unwrap()
    }

    fn line(av: &AbelianVarietySpec, v: &[i64]) -> ConnectedSubgroup {
        ConnectedSubgroup::span_over_fields(av, &[vec![v.iter().map(|&x| rat(x)).collect()]]).unwrap()
    }

    #[test]
    fn orbit_subgroup_examples() {
        assert!(orbit_subgroup(5, &[vec![1, 2]]).is_zero());
        let t = ModAffine {
            matrix: ModMatrix::identity(2, 7),
            translation: vec![1, 3],
        };
        let pts = super::super::iterate_orbit(&t, &[0, 0], 10);
        let h = orbit_subgroup(7, &pts);
        assert_eq!(h.order(), BigInt::from(7));
        assert!(h.contains(&[1, 3]));
        let j = ModAffine {
            matrix: ModMatrix::from_int(&ZMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]), 5),
            translation: vec![0, 0],
        };
        let h = orbit_subgroup(5, &super::super::iterate_orbit(&j, &[0, 1], 6));
        assert_eq!(h.order(), BigInt::from(5));
        assert!(h.contains(&[1, 0]));
    }

    #[test]
    fn fibration_examples() {
        let e2 = AbelianVarietySpec::elliptic_power(2);
        let decls = PointDecls::new();
        let sigma = AffineEndo::linear(&e2, jordan(&e2));
        let model = reduce_mod(&e2, &decls, &[sigma], 7, 0).unwrap();
        let good = FibrationCertificate {
            c: line(&e2, &[1, 0]),
            torsion_multiplier: BigInt::from(1),
            powered_exponent: 1,
        };
        let res = verify_fibration(&e2, &model, &good, DEFAULT_EXHAUSTIVE_BOUND, 0);
        assert!(res.passed);
        assert_eq!((res.mode, res.points), (CheckMode::Exhaustive, 2401));
        let bad = FibrationCertificate {
            c: line(&e2, &[0, 1]),
            ..good.clone()
        };
        let res = verify_fibration(&e2, &model, &bad, DEFAULT_EXHAUSTIVE_BOUND, 0);
        assert!(!res.passed);
        let cx = res.counterexample.unwrap();
        assert_eq!(cx.generator, 1);
        assert_ne!(cx.point[2..], [0, 0]);
        let full = FibrationCertificate {
            c: ConnectedSubgroup::full(&e2),
            ..good
        };
        let res = verify_fibration(&e2, &model, &full, DEFAULT_EXHAUSTIVE_BOUND, 0);
        assert_eq!(res.message.as_deref(), Some("certificate names non-proper subgroup"));

        let e = AbelianVarietySpec::elliptic_power(1);
        let y = SymbolicPoint::torsion(&e, &BigInt::from(2), &[BigInt::from(1), BigInt::from(0)]).unwrap();
        let t = AffineEndo::new(EndoMatrix::identity(&e), y);
        let model = reduce_mod(&e, &decls, &[t], 4, 0).unwrap();
        let two = FibrationCertificate {
            c: ConnectedSubgroup::zero(&e),
            torsion_multiplier: BigInt::from(2),
            powered_exponent: 1,
        };
        assert!(verify_fibration(&e, &model, &two, DEFAULT_EXHAUSTIVE_BOUND, 0).passed);
        let one = FibrationCertificate {
            torsion_multiplier: BigInt::from(1),
            ..two
        };
        assert!(!verify_fibration(&e, &model, &one, DEFAULT_EXHAUSTIVE_BOUND, 0).passed);
    }

    #[test]
    fn closed_form_examples() {
        let id = ModAffine::identity(4, 101);
        assert!(verify_closed_form(&id, &[1, 2, 3, 4], 0));
        let t = ModAffine {
            matrix: ModMatrix::identity(2, 101),
            translation: vec![5, 9],
        };
        assert!(verify_closed_form(&t, &[1, 2], 20));
        let j = ModAffine {
            matrix: ModMatrix::from_int(
                &ZMatrix::from_i64_rows(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]),
                101,
            ),
            translation: vec![0; 4],
        };
        assert!(verify_closed_form(&j, &[3, 1, 4, 1], 50));
        let two = ModAffine {
            matrix: ModMatrix::identity(2, 101).scale(2),
            translation: vec![0, 0],
        };
        assert!(!verify_closed_form(&two, &[1, 0], 5));
    }

    #[test]
    fn dense_rates() {
        let e = AbelianVarietySpec::elliptic_power(1);
        let decls = PointDecls::new();
        let comm = commutant_basis(&e);
        assert_eq!(comm.len(), 4);
        let two = AffineEndo::linear(&e, EndoMatrix::scalar(&e, rat(2)));
        let mut model = reduce_mod(&e, &decls, &[two], 11, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let res = dense_sampling_check(&mut model, &comm, 1, &BigInt::from(1), 1000, &mut rng);
        assert!(res.full_rate > 0.95);

        let e2 = AbelianVarietySpec::elliptic_power(2);
        let mut model = reduce_mod(&e2, &decls, &[AffineEndo::linear(&e2, jordan(&e2))], 11, 0).unwrap();
        let res = dense_sampling_check(
            &mut model,
            &commutant_basis(&e2),
            1,
            &BigInt::from(1),
            200,
            &mut rng,
        );
        assert_eq!(res.full, 0);
    }

    #[test]
    fn order_two_translation_is_never_full() {
        let t = ModAffine {
            matrix: ModMatrix::identity(2, 2),
            translation: vec![1, 1],
        };
        let h = orbit_subgroup(2, &super::super::iterate_orbit(&t, &[0, 1], 4));
        assert_eq!(h.order(), BigInt::from(2));
        assert!(!h.is_full());
    }
}
