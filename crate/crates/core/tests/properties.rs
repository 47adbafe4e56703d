use std::collections::{BTreeSet, VecDeque};

use abdyn_core::engine::orbit_closed_form;
use abdyn_core::exact::{rat, smith_normal_form, QMatrix, Subspace, ZMatrix};
use abdyn_core::intpoly::{bezout_at_one, IntPolynomial};
use abdyn_core::oracle::{orbit_subgroup, reduce_mod, ModLattice};
use abdyn_core::{AbelianVarietySpec, AffineEndo, ConnectedSubgroup, EndoMatrix, PointDecls, Scenario, SymbolicPoint};
use num_bigint::BigInt;
use proptest::prelude::*;

fn qmatrix(n: usize, entries: &[i64]) -> QMatrix {
    QMatrix::from_vec(n, n, entries.iter().map(|&x| rat(x)).collect())
}

fn square(n: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, n * n)
}

fn vectors(count: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 0..=count)
}

fn span(dim: usize, vs: &[Vec<i64>]) -> Subspace {
    let vs: Vec<_> = vs.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect();
    Subspace::span(dim, &vs).unwrap()
}

/// Brute-force closure of `gens` under addition in `(Z/N)^dim`.
fn enumerate_span(dim: usize, modulus: u64, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::from([vec![0u64; dim]]);
    let mut queue = VecDeque::from([vec![0u64; dim]]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u64> = p.iter().zip(g).map(|(a, b)| (a + b) % modulus).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn det_is_multiplicative(a in square(3, 4), b in square(3, 4)) {
        let (a, b) = (qmatrix(3, &a), qmatrix(3, &b));
        prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(inv.mul(&a), QMatrix::identity(3));
        } else {
            prop_assert_eq!(a.det().unwrap(), rat(0));
        }
    }

    #[test]
    fn rank_nullity(a in prop::collection::vec(-3i64..=3, 12)) {
        let m = QMatrix::from_vec(3, 4, a.into_iter().map(rat).collect());
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), 4);
        for v in kernel {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn subspace_dimension_formula(u in vectors(4, 4), v in vectors(4, 4)) {
        let (u, v) = (span(4, &u), span(4, &v));
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&v));
        prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
    }

    #[test]
    fn smith_form_is_valid(rows in 1usize..=4, cols in 1usize..=4, seed in prop::collection::vec(-6i64..=6, 16)) {
        let m = ZMatrix::from_vec(rows, cols, seed[..rows * cols].iter().map(|&x| BigInt::from(x)).collect());
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.det().unwrap().magnitude().clone(), 1u32.into());
        prop_assert_eq!(s.v.det().unwrap().magnitude().clone(), 1u32.into());
        for i in 0..rows {
            for j in 0..cols {
                prop_assert!(i == j || s.d[(i, j)] == BigInt::from(0));
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= BigInt::from(0));
            let divides = if w[0] == BigInt::from(0) { w[1] == BigInt::from(0) } else { &w[1] % &w[0] == BigInt::from(0) };
            prop_assert!(divides);
        }
        let q = QMatrix::from_int(&m);
        prop_assert_eq!(s.rank(), q.rank());
    }

    #[test]
    fn bezout_identity(c in prop::collection::vec(-4i64..=4, 1..=5), r in 0usize..=4) {
        let f1 = IntPolynomial::from_i64(&c);
        prop_assume!(!f1.is_zero() && f1.eval(&rat(1)) != rat(0));
        let b = bezout_at_one(&f1, r).unwrap();
        let t1 = IntPolynomial::linear(rat(1)).pow(r);
        let lhs = f1.mul(&b.g1).add(&t1.mul(&b.g2));
        prop_assert_eq!(lhs, IntPolynomial::constant(b.k.clone().into()));
        prop_assert!(b.g1.is_integral() && b.g2.is_integral());
        let res: BigInt = f1.eval(&rat(1)).to_integer().pow(r as u32);
        prop_assert_eq!(&res % &b.k, BigInt::from(0));
    }

    #[test]
    fn mod_lattice_matches_enumeration(
        modulus in prop::sample::select(vec![2u64, 4, 6, 8, 9, 12]),
        dim in 1usize..=3,
        gens in prop::collection::vec(prop::collection::vec(0u64..12, 3), 0..=3),
    ) {
        let gens: Vec<Vec<u64>> = gens.into_iter().map(|g| g[..dim].iter().map(|x| x % modulus).collect()).collect();
        let lat = ModLattice::generated_by(dim, modulus, &gens);
        let brute = enumerate_span(dim, modulus, &gens);
        prop_assert_eq!(lat.order(), BigInt::from(brute.len()));
        prop_assert_eq!(lat.is_full(), brute.len() as u64 == modulus.pow(dim as u32));
        for p in &brute {
            prop_assert!(lat.contains(p));
        }
        for r in lat.rows() {
            prop_assert!(brute.contains(r));
        }
        let inv: BigInt = lat.invariants().iter().product();
        prop_assert_eq!(inv, lat.order());
    }

    #[test]
    fn orbit_subgroup_ignores_base_point(
        pts in prop::collection::vec(prop::collection::vec(0u64..10, 3), 1..=5),
        shift in prop::collection::vec(0u64..10, 3),
        rot in 0usize..5,
    ) {
        let n = 10;
        let a = orbit_subgroup(n, &pts);
        let shifted: Vec<Vec<u64>> = pts.iter().map(|p| p.iter().zip(&shift).map(|(x, s)| (x + s) % n).collect()).collect();
        let mut rotated = pts.clone();
        rotated.rotate_left(rot % pts.len());
        for other in [orbit_subgroup(n, &shifted), orbit_subgroup(n, &rotated)] {
            prop_assert_eq!(other.order(), a.order());
            prop_assert!(other.rows().all(|r| a.contains(r)));
        }
    }

    #[test]
    fn reduction_commutes_with_iteration(tau in square(2, 3), steps in 0u64..12, seed in any::<u64>()) {
        let av = AbelianVarietySpec::elliptic_power(2);
        let tau = EndoMatrix::from_blocks(&av, vec![qmatrix(2, &tau)]).unwrap();
        let decls = PointDecls::new().with("y", ConnectedSubgroup::full(&av));
        let sigma = AffineEndo::new(tau, SymbolicPoint::generic(&av, "y"));
        let one = reduce_mod(&av, &decls, std::slice::from_ref(&sigma), 97, seed).unwrap();
        let many = reduce_mod(&av, &decls, &[sigma.iterate(&av, steps)], 97, seed).unwrap();
        prop_assert_eq!(&one.gens()[0].pow(steps), &many.gens()[0]);
    }

    #[test]
    fn closed_form_matches_iteration(upper in prop::collection::vec(-5i64..=5, 3), n in 0u64..40) {
        let av = AbelianVarietySpec::elliptic_power(3);
        let m = qmatrix(3, &[1, upper[0], upper[1], 0, 1, upper[2], 0, 0, 1]);
        let tau = EndoMatrix::from_blocks(&av, vec![m]).unwrap();
        let y = SymbolicPoint::generic(&av, "y");
        let x = SymbolicPoint::generic(&av, "x");
        let direct = AffineEndo::new(tau.clone(), y.clone()).iterate(&av, n).apply(&av, &x);
        prop_assert_eq!(orbit_closed_form(&av, &tau, &y, &x, n).unwrap(), direct);
    }

    #[test]
    fn scenario_round_trip(k in 1usize..=3, entries in prop::collection::vec(-4i64..=4, 9), translate in any::<bool>()) {
        let rows: Vec<Vec<String>> = (0..k).map(|i| (0..k).map(|j| entries[i * 3 + j].to_string()).collect()).collect();
        let mut gen = serde_json::json!({ "tau": [rows] });
        if translate {
            gen["translation"] = serde_json::json!({ "terms": [{ "point": "p" }] });
        }
        let text = serde_json::json!({
            "factors": [{ "name": "E", "dim": 1, "multiplicity": k }],
            "declared_points": [{ "name": "p" }],
            "generators": [gen],
        })
        .to_string();
        let s = Scenario::parse(&text).unwrap();
        let again = Scenario::parse(&s.canonical_json()).unwrap();
        prop_assert_eq!(again.canonical_json(), s.canonical_json());
        prop_assert_eq!(again.digest(), s.digest());
        prop_assert_eq!(again.gens, s.gens);
    }
}
