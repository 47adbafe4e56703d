//! The decision procedures: one generator, several commuting generators, and
//! the closed-form orbit of a unipotent affine map.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{denominator_lcm, int, lcm_big};
use crate::exact::smith::{quotient_exponent, saturated_quotient, saturation};
use crate::exact::{QMatrix, Rational, ZMatrix};
use crate::intpoly::{bezout_at_one, split_at_one, IntPolynomial};
use crate::model::{
    point_closure, AbelianVarietySpec, AffineEndo, ConnectedSubgroup, EndoMatrix, PointDecls,
    SymbolicPoint,
};
use crate::reduction::{
    check_commuting, check_dominant, minimalize_generators, power_up, splitting_subgroups,
    unity_power, GeneratorSet, Minimalized, SplitData,
};

/// `x ↦ m · (x mod C)` is constant on orbits of the `powered_exponent`-th
/// powers of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationCertificate {
    pub c: ConnectedSubgroup,
    pub torsion_multiplier: BigInt,
    pub powered_exponent: u64,
}

/// Conditions under which a point has a dense orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseWitnessSpec {
    pub b1: ConnectedSubgroup,
    pub b2: ConnectedSubgroup,
    /// Per (reduced) generator, the closure its orbit must reach inside `B2`.
    pub targets: Vec<ConnectedSubgroup>,
    pub constraints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Fibration(FibrationCertificate),
    Dense(DenseWitnessSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub powered_exponent: u64,
    pub bezout_k: BigInt,
    pub log: Vec<String>,
    /// Reduced generators (1-based) that are dense on their own; informational.
    pub single_generator_dense: Vec<usize>,
}

impl Verdict {
    pub fn is_fibration(&self) -> bool {
        matches!(self.outcome, Outcome::Fibration(_))
    }

    pub fn branch(&self) -> &'static str {
        match self.outcome {
            Outcome::Fibration(_) => "fibration",
            Outcome::Dense(_) => "dense",
        }
    }

    pub fn certificate(&self) -> Option<&FibrationCertificate> {
        match &self.outcome {
            Outcome::Fibration(c) => Some(c),
            Outcome::Dense(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&DenseWitnessSpec> {
        match &self.outcome {
            Outcome::Dense(w) => Some(w),
            Outcome::Fibration(_) => None,
        }
    }
}

fn describe(av: &AbelianVarietySpec, c: &ConnectedSubgroup) -> String {
    let dims: Vec<String> = c.field_dims(av).iter().map(|d| d.to_string()).collect();
    format!("dim {} (per factor {})", c.dim(av), dims.join(","))
}

/// Integrality, declared points, commutativity and dominance.
pub fn validate(av: &AbelianVarietySpec, decls: &PointDecls, gens: &[AffineEndo]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::Other("no generators".into()));
    }
    for (i, g) in gens.iter().enumerate() {
        if !g.tau.is_integral(av) {
            return Err(Error::NotIntegral(format!("group part of generator {}", i + 1)));
        }
        g.translation.check_declared(decls)?;
    }
    check_commuting(gens)?;
    check_dominant(gens)
}

/// The reductions applied before the monoid test.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub unity_power: u64,
    pub powered: GeneratorSet,
    pub split: SplitData,
    pub minimal: Minimalized,
}

pub fn normalize(av: &AbelianVarietySpec, decls: &PointDecls, gens: &[AffineEndo]) -> Result<Normalization> {
    validate(av, decls, gens)?;
    let set = GeneratorSet::new(gens.to_vec())?;
    let n = unity_power(&set);
    let powered = power_up(av, &set, n);
    let split = splitting_subgroups(av, &powered)?;
    let minimal = minimalize_generators(av, &powered, &split)?;
    Ok(Normalization {
        unity_power: n,
        powered,
        split,
        minimal,
    })
}

/// One generator goes through the cyclic procedure, several through the monoid one.
pub fn analyze(av: &AbelianVarietySpec, decls: &PointDecls, gens: &[AffineEndo]) -> Result<Verdict> {
    if gens.len() == 1 {
        analyze_cyclic(av, decls, &gens[0])
    } else {
        analyze_monoid(av, decls, gens)
    }
}

/// Per factor: matrix of `M`, as an element of `End(A) ⊗ Q`, with
/// `M = ((id - τ)|_{A1})^{-1} ∘ (projection onto A1 along A2)`.
fn conjugator(
    av: &AbelianVarietySpec,
    tau: &EndoMatrix,
    a1: &ConnectedSubgroup,
    a2: &ConnectedSubgroup,
) -> Result<EndoMatrix> {
    let one_minus = EndoMatrix::identity(av).sub(tau);
    let restr = a1.restriction(&one_minus).ok_or(Error::SingularRestriction)?;
    let mut blocks = Vec::with_capacity(av.num_factors());
    for (i, r) in restr.iter().enumerate() {
        let n = av.factor(i).field_space_dim();
        let (p1, p2) = (a1.part(i), a2.part(i));
        if p1.is_zero() {
            blocks.push(QMatrix::zeros(n, n));
            continue;
        }
        let rinv = r.inverse().ok_or(Error::SingularRestriction)?;
        let joint = p1.matrix().hstack(&p2.matrix());
        let coords = joint
            .inverse()
            .ok_or_else(|| Error::Other("A1 and A2 are not complementary".into()))?
            .block(0, 0, p1.dim(), n);
        blocks.push(p1.matrix().mul(&rinv).mul(&coords));
    }
    EndoMatrix::from_blocks(av, blocks)
}

/// `T_{-y0} ∘ σ ∘ T_{y0}` removing the `A1`-component of the translation.
pub fn conjugate_reduction(
    av: &AbelianVarietySpec,
    sigma: &AffineEndo,
    a1: &ConnectedSubgroup,
    a2: &ConnectedSubgroup,
) -> Result<(AffineEndo, SymbolicPoint)> {
    let m = conjugator(av, &sigma.tau, a1, a2)?;
    let y0 = sigma.translation.apply(av, &m);
    Ok((sigma.conjugate_by_translation(av, &y0), y0))
}

/// Projection onto `u` along `v` as an element of `End(A) ⊗ Q`.
fn projection(av: &AbelianVarietySpec, u: &ConnectedSubgroup, v: &ConnectedSubgroup) -> Result<EndoMatrix> {
    let blocks = u
        .parts()
        .iter()
        .zip(v.parts())
        .map(|(a, b)| a.projection_along(b))
        .collect::<Result<Vec<_>>>()?;
    EndoMatrix::from_blocks(av, blocks)
}

/// Least `m` such that `m` kills the torsion of every translation modulo `C`.
pub fn torsion_multiplier(av: &AbelianVarietySpec, c: &ConnectedSubgroup, powered: &[AffineEndo]) -> BigInt {
    let p = QMatrix::from_int(&saturated_quotient(&c.lattice_subspace(av).matrix()));
    powered.iter().fold(BigInt::one(), |acc, g| {
        let image = p.mul_vec(g.translation.torsion_vector());
        lcm_big(&acc, &denominator_lcm(&image))
    })
}

/// Symbolic check of a certificate against the input generators.
pub fn check_certificate(
    av: &AbelianVarietySpec,
    decls: &PointDecls,
    gens: &[AffineEndo],
    cert: &FibrationCertificate,
) -> std::result::Result<(), String> {
    if cert.c.is_full() {
        return Err("certificate names non-proper subgroup".into());
    }
    if cert.powered_exponent == 0 || cert.torsion_multiplier <= BigInt::zero() {
        return Err("powered exponent and torsion multiplier must be positive".into());
    }
    let p = QMatrix::from_int(&saturated_quotient(&cert.c.lattice_subspace(av).matrix()));
    let m = int(&cert.torsion_multiplier);
    for (i, g) in gens.iter().enumerate() {
        let s = g.iterate(av, cert.powered_exponent);
        if !cert.c.contains(&ConnectedSubgroup::image_of(&s.tau.minus_identity())) {
            return Err(format!("g{}^n - id does not map into C", i + 1));
        }
        let (closure, _) = point_closure(av, decls, &s.translation).map_err(|e| e.to_string())?;
        if !cert.c.contains(&closure) {
            return Err(format!("translation of g{}^n leaves C", i + 1));
        }
        let image = p.mul_vec(s.translation.torsion_vector());
        if image.iter().any(|x| !(x * &m).is_integer()) {
            return Err(format!("torsion of g{}^n survives multiplication by m", i + 1));
        }
    }
    Ok(())
}

/// Exponent of `Z^{2g} / (Λ_{B1} + Λ_{B2})`, the lattice-level gap of a split.
fn split_gap(av: &AbelianVarietySpec, b1: &ConnectedSubgroup, b2: &ConnectedSubgroup) -> BigInt {
    let s1 = saturation(&b1.lattice_subspace(av).matrix());
    let s2 = saturation(&b2.lattice_subspace(av).matrix());
    let joint: ZMatrix = s1.hstack(&s2);
    if joint.cols() == 0 {
        return BigInt::one();
    }
    quotient_exponent(&joint).unwrap_or_else(|_| BigInt::zero())
}

fn witness_constraints(targets: usize) -> Vec<String> {
    vec![
        format!(
            "(a) x2 in B2 with closure<beta_i(x2) + y_i> = C_i for each of the {targets} reduced generator(s)"
        ),
        "(b) x1 in B1 generic over the module spanned by x2 and all translation components y_i, z_i".into(),
    ]
}

pub fn analyze_cyclic(av: &AbelianVarietySpec, decls: &PointDecls, sigma: &AffineEndo) -> Result<Verdict> {
    validate(av, decls, std::slice::from_ref(sigma))?;
    let mut log = Vec::new();
    let set = GeneratorSet::new(vec![sigma.clone()])?;
    let n = unity_power(&set);
    log.push(format!("unity power n = {n}"));
    let powered = power_up(av, &set, n).gens.remove(0);
    if n > 1 {
        log.push(format!("replaced g1 by g1^{n}"));
    }
    let tau = &powered.tau;
    let f = tau.minimal_polynomial();
    let (f1, r) = split_at_one(&f)?;
    log.push(format!("minimal polynomial f = {f}; f1 = {f1}, r = {r}"));
    let t_minus_1 = IntPolynomial::linear(Rational::one());
    let a1 = ConnectedSubgroup::image_of(&tau.eval_poly(&t_minus_1.pow(r)));
    let a2 = ConnectedSubgroup::image_of(&tau.eval_poly(&f1));
    assert!(a1.sum(&a2).is_full() && a1.intersect(&a2).is_zero(), "A = A1 ⊕ A2");
    let bezout = bezout_at_one(&f1, r)?;
    log.push(format!(
        "A1 {}; A2 {}; Bezout k = {}",
        describe(av, &a1),
        describe(av, &a2),
        bezout.k
    ));
    let (conj, y0) = conjugate_reduction(av, &powered, &a1, &a2)?;
    if !y0.is_zero() {
        log.push("conjugated by a translation to clear the A1-component of y".into());
    }
    let p2 = projection(av, &a2, &a1)?;
    let y2 = conj.translation.apply(av, &p2);
    let beta = tau.minus_identity();
    let (closure_y2, _) = point_closure(av, decls, &y2)?;
    let b = a2.image(&beta).sum(&closure_y2);
    log.push(format!("B = beta(A2) + closure(y2): {}", describe(av, &b)));
    let single = vec![1];
    if b != a2 {
        let c = a1.sum(&b);
        let m = torsion_multiplier(av, &c, std::slice::from_ref(&powered));
        log.push(format!("C = A1 + B: {}; torsion multiplier {m}", describe(av, &c)));
        Ok(Verdict {
            outcome: Outcome::Fibration(FibrationCertificate {
                c,
                torsion_multiplier: m,
                powered_exponent: n,
            }),
            powered_exponent: n,
            bezout_k: bezout.k,
            log,
            single_generator_dense: Vec::new(),
        })
    } else {
        log.push("B = A2: dense orbits exist".into());
        Ok(Verdict {
            outcome: Outcome::Dense(DenseWitnessSpec {
                b1: a1,
                b2: a2,
                targets: vec![b],
                constraints: witness_constraints(1),
            }),
            powered_exponent: n,
            bezout_k: bezout.k,
            log,
            single_generator_dense: single,
        })
    }
}

/// `closure(P2 y) + (τ - id)(B2)`
fn unipotent_target(
    av: &AbelianVarietySpec,
    decls: &PointDecls,
    g: &AffineEndo,
    p2: &EndoMatrix,
    b2: &ConnectedSubgroup,
) -> Result<ConnectedSubgroup> {
    let (cl, _) = point_closure(av, decls, &g.translation.apply(av, p2))?;
    Ok(cl.sum(&b2.image(&g.tau.minus_identity())))
}

pub fn analyze_monoid(av: &AbelianVarietySpec, decls: &PointDecls, gens: &[AffineEndo]) -> Result<Verdict> {
    let Normalization {
        unity_power: n,
        powered,
        split,
        minimal,
    } = normalize(av, decls, gens)?;
    let mut log = vec![format!("unity power n = {n}")];
    log.push(format!(
        "B1 {}; B2 {}",
        describe(av, &split.b1),
        describe(av, &split.b2)
    ));
    log.extend(minimal.log.iter().cloned());
    let p2 = projection(av, &split.b2, &split.b1)?;

    let targets = minimal
        .gens
        .iter()
        .map(|g| unipotent_target(av, decls, g, &p2, &split.b2))
        .collect::<Result<Vec<_>>>()?;
    let mut c_s = ConnectedSubgroup::zero(av);
    for t in &targets {
        c_s = c_s.sum(t);
    }
    // The powered inputs contribute nothing new when the reduced products
    // already see everything; including them keeps the certificate valid for
    // the inputs themselves.
    let mut c_all = c_s.clone();
    for g in &powered.gens {
        c_all = c_all.sum(&unipotent_target(av, decls, g, &p2, &split.b2)?);
    }
    if c_all != c_s {
        log.push("powered inputs enlarge C_S beyond the reduced products".into());
    }
    let total = split.b1.sum(&c_all);
    let bezout_k = split_gap(av, &split.b1, &split.b2);
    let single_generator_dense: Vec<usize> = targets
        .iter()
        .enumerate()
        .filter(|(_, t)| split.b1.sum(t).is_full())
        .map(|(i, _)| i + 1)
        .collect();
    log.push(format!("C_S + B1: {}", describe(av, &total)));
    if !total.is_full() {
        let m = torsion_multiplier(av, &total, &powered.gens);
        log.push(format!("torsion multiplier {m}"));
        Ok(Verdict {
            outcome: Outcome::Fibration(FibrationCertificate {
                c: total,
                torsion_multiplier: m,
                powered_exponent: n,
            }),
            powered_exponent: n,
            bezout_k,
            log,
            single_generator_dense,
        })
    } else {
        let k = targets.len();
        Ok(Verdict {
            outcome: Outcome::Dense(DenseWitnessSpec {
                b1: split.b1,
                b2: split.b2,
                targets,
                constraints: witness_constraints(k),
            }),
            powered_exponent: n,
            bezout_k,
            log,
            single_generator_dense,
        })
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn ensure_unipotent(av: &AbelianVarietySpec, tau: &EndoMatrix) -> Result<()> {
    if tau.minus_identity().pow(av.lattice_rank() as u64).is_zero() {
        Ok(())
    } else {
        Err(Error::NonUnipotent)
    }
}

/// `x + Σ_{j=1}^{2g} C(n, j) β^{j-1}(β(x) + y)` with `β = τ - id`.
pub fn orbit_closed_form(
    av: &AbelianVarietySpec,
    tau: &EndoMatrix,
    y: &SymbolicPoint,
    x: &SymbolicPoint,
    n: u64,
) -> Result<SymbolicPoint> {
    ensure_unipotent(av, tau)?;
    let beta = tau.minus_identity();
    let mut term = x.apply(av, &beta).add(y);
    let mut acc = x.clone();
    for j in 1..=(av.lattice_rank() as u64).min(n) {
        acc = acc.add(&term.scale(av, &int(&binomial(n, j))));
        term = term.apply(av, &beta);
    }
    Ok(acc)
}

/// Connected closure of the orbit of `x` and the coset representative `x`.
pub fn predicted_orbit_closure(
    av: &AbelianVarietySpec,
    decls: &PointDecls,
    sigma: &AffineEndo,
    x: &SymbolicPoint,
) -> Result<(ConnectedSubgroup, BigInt, SymbolicPoint)> {
    ensure_unipotent(av, &sigma.tau)?;
    let v = x.apply(av, &sigma.tau.minus_identity()).add(&sigma.translation);
    let (c, m) = point_closure(av, decls, &v)?;
    Ok((c, m, x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn endo(av: &AbelianVarietySpec, rows: &[&[i64]]) -> EndoMatrix {
        let r = &av.factor(0).ring;
        let e = rows
            .iter()
            .map(|row| row.iter().map(|&x| r.scalar(rat(x))).collect())
            .collect();
        EndoMatrix::from_entries(av, &[e]).unwrap()
    }

    fn line(av: &AbelianVarietySpec, v: &[i64]) -> ConnectedSubgroup {
        ConnectedSubgroup::span_over_fields(av, &[vec![v.iter().map(|&x| rat(x)).collect()]]).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let e = AbelianVarietySpec::elliptic_power(1);
        let decls = PointDecls::new();
        let v = analyze_cyclic(&e, &decls, &AffineEndo::identity(&e)).unwrap();
        let cert = v.certificate().unwrap();
        assert!(cert.c.is_zero());
        assert_eq!(cert.torsion_multiplier, BigInt::one());

        let e2 = AbelianVarietySpec::elliptic_power(2);
        let jordan = AffineEndo::linear(&e2, endo(&e2, &[&[1, 1], &[0, 1]]));
        let v = analyze_cyclic(&e2, &decls, &jordan).unwrap();
        assert_eq!(v.certificate().unwrap().c, line(&e2, &[1, 0]));

        let decls2 = PointDecls::new().with("p", line(&e2, &[0, 1]));
        let s = AffineEndo::new(jordan.tau.clone(), SymbolicPoint::generic(&e2, "p"));
        assert_eq!(analyze_cyclic(&e2, &decls2, &s).unwrap().branch(), "dense");

        let two = AffineEndo::linear(&e, EndoMatrix::scalar(&e, rat(2)));
        assert_eq!(analyze_cyclic(&e, &decls, &two).unwrap().branch(), "dense");
    }

    #[test]
    fn conjugation_examples() {
        let e2 = AbelianVarietySpec::elliptic_power(2);
        let tau = endo(&e2, &[&[2, 0], &[0, 1]]);
        let a1 = line(&e2, &[1, 0]);
        let a2 = line(&e2, &[0, 1]);
        let q = SymbolicPoint::generic(&e2, "q").apply(&e2, &endo(&e2, &[&[1, 0], &[0, 0]]));
        let (conj, y0) = conjugate_reduction(&e2, &AffineEndo::new(tau, q.clone()), &a1, &a2).unwrap();
        assert_eq!(y0, q.scale(&e2, &rat(-1)));
        assert!(conj.translation.is_zero());

        let tau = endo(&e2, &[&[3, 0], &[0, 1]]);
        let (_, y0) =
            conjugate_reduction(&e2, &AffineEndo::new(tau, q.scale(&e2, &rat(2))), &a1, &a2).unwrap();
        assert_eq!(y0, q.scale(&e2, &rat(-1)));
    }

    #[test]
    fn monoid_examples() {
        let e = AbelianVarietySpec::elliptic_power(1);
        let none = PointDecls::new();
        let gens = [
            AffineEndo::linear(&e, EndoMatrix::scalar(&e, rat(2))),
            AffineEndo::linear(&e, EndoMatrix::scalar(&e, rat(3))),
        ];
        assert_eq!(analyze_monoid(&e, &none, &gens).unwrap().branch(), "dense");

        let e2 = AbelianVarietySpec::elliptic_power(2);
        let gens = [
            AffineEndo::linear(&e2, endo(&e2, &[&[1, 0], &[0, 2]])),
            AffineEndo::linear(&e2, endo(&e2, &[&[1, 0], &[0, 3]])),
        ];
        let v = analyze_monoid(&e2, &none, &gens).unwrap();
        assert_eq!(v.certificate().unwrap().c, line(&e2, &[0, 1]));

        let decls = PointDecls::new().with("p", ConnectedSubgroup::full(&e2));
        let p_first = SymbolicPoint::generic(&e2, "p").apply(&e2, &endo(&e2, &[&[1, 0], &[0, 0]]));
        let gens = [AffineEndo::new(endo(&e2, &[&[1, 0], &[0, 2]]), p_first)];
        assert_eq!(analyze_monoid(&e2, &decls, &gens).unwrap().branch(), "dense");
    }

    #[test]
    fn closed_form_examples() {
        let e2 = AbelianVarietySpec::elliptic_power(2);
        let tau = endo(&e2, &[&[1, 1], &[0, 1]]);
        let y = SymbolicPoint::generic(&e2, "y");
        let x = SymbolicPoint::generic(&e2, "x");
        let sigma = AffineEndo::new(tau.clone(), y.clone());
        for n in 0..6 {
            assert_eq!(
                orbit_closed_form(&e2, &tau, &y, &x, n).unwrap(),
                sigma.iterate(&e2, n).apply(&e2, &x)
            );
        }
        let two = EndoMatrix::scalar(&e2, rat(2));
        assert_eq!(orbit_closed_form(&e2, &two, &y, &x, 1), Err(Error::NonUnipotent));
    }

    #[test]
    fn predicted_closure_example() {
        let e2 = AbelianVarietySpec::elliptic_power(2);
        let decls = PointDecls::new().with("p", line(&e2, &[0, 1]));
        let sigma = AffineEndo::linear(&e2, endo(&e2, &[&[1, 1], &[0, 1]]));
        let x = SymbolicPoint::generic(&e2, "p");
        let (c, _, _) = predicted_orbit_closure(&e2, &decls, &sigma, &x).unwrap();
        assert_eq!(c, line(&e2, &[1, 0]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(50, 25), BigInt::from(126_410_606_437_752u64));
    }
}
