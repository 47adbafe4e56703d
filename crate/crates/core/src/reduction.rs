//! Reductions applied before the decision: commutation and dominance checks,
//! the root-of-unity power-up, the unipotent / co-unipotent split, products
//! of generators with no eigenvalue 1 on the co-unipotent part, and the
//! exponent-lattice computations behind them.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::smith::{quotient_exponent, smith_normal_form};
use crate::exact::{QMatrix, ZMatrix};
use crate::intpoly::{cyclotomic_divisors, split_at_one};
use crate::model::{AbelianVarietySpec, AffineEndo, ConnectedSubgroup, EndoMatrix};

/// Generators with pairwise commuting group parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub gens: Vec<AffineEndo>,
    /// Every generator is the `powered_exponent`-th power of an input generator.
    pub powered_exponent: u64,
}

impl GeneratorSet {
    pub fn new(gens: Vec<AffineEndo>) -> Result<Self> {
        check_commuting(&gens)?;
        Ok(GeneratorSet {
            gens,
            powered_exponent: 1,
        })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

/// Pairwise commutation of group parts; the pair is reported 1-based.
pub fn check_commuting(gens: &[AffineEndo]) -> Result<()> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].tau.commutes(&gens[j].tau) {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    Ok(())
}

pub fn check_dominant(gens: &[AffineEndo]) -> Result<()> {
    match gens.iter().position(|g| !g.tau.is_isogeny()) {
        Some(i) => Err(Error::NotDominant(i + 1)),
        None => Ok(()),
    }
}

/// lcm of the orders of the roots of unity among the eigenvalues of `tau`.
pub fn unity_power_of(tau: &EndoMatrix) -> u64 {
    let f = tau.minimal_polynomial();
    cyclotomic_divisors(&f)
        .expect("minimal polynomial is nonzero")
        .into_iter()
        .fold(1, |acc, m| acc.lcm(&m))
}

pub fn unity_power(gens: &GeneratorSet) -> u64 {
    gens.gens
        .iter()
        .map(|g| unity_power_of(&g.tau))
        .fold(1, |acc, m| acc.lcm(&m))
}

pub fn power_up(av: &AbelianVarietySpec, gens: &GeneratorSet, n: u64) -> GeneratorSet {
    assert!(n >= 1, "power must be positive");
    GeneratorSet {
        gens: gens.gens.iter().map(|g| g.iterate(av, n)).collect(),
        powered_exponent: gens.powered_exponent * n,
    }
}

/// `(tau - id)^{2g}`
pub fn unipotent_defect_map(av: &AbelianVarietySpec, tau: &EndoMatrix) -> EndoMatrix {
    tau.minus_identity().pow(av.lattice_rank() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    /// Co-unipotent part `Σ im (τ_i - id)^{2g}`.
    pub b1: ConnectedSubgroup,
    /// Unipotent part `∩ ker (τ_i - id)^{2g}`.
    pub b2: ConnectedSubgroup,
    /// Per generator: restrictions of `τ` to `B1` and `B2` in their bases.
    pub restrictions: Vec<(Vec<QMatrix>, Vec<QMatrix>)>,
}

pub fn splitting_subgroups(av: &AbelianVarietySpec, gens: &GeneratorSet) -> Result<SplitData> {
    let mut b1 = ConnectedSubgroup::zero(av);
    let mut b2 = ConnectedSubgroup::full(av);
    for (i, g) in gens.gens.iter().enumerate() {
        let (f1, _) = split_at_one(&g.tau.minimal_polynomial())?;
        if !cyclotomic_divisors(&f1)?.is_empty() {
            return Err(Error::NormalizationNotApplied(i + 1));
        }
        let d = unipotent_defect_map(av, &g.tau);
        b1 = b1.sum(&ConnectedSubgroup::image_of(&d));
        b2 = b2.intersect(&ConnectedSubgroup::kernel_of(&d));
    }
    if !b1.sum(&b2).is_full() || !b1.intersect(&b2).is_zero() {
        return Err(Error::Other("unipotent and co-unipotent parts are not complementary".into()));
    }
    let mut restrictions = Vec::with_capacity(gens.len());
    for g in &gens.gens {
        let r1 = b1.restriction(&g.tau);
        let r2 = b2.restriction(&g.tau);
        match (r1, r2) {
            (Some(r1), Some(r2)) => restrictions.push((r1, r2)),
            _ => return Err(Error::Other("split is not invariant under a generator".into())),
        }
    }
    Ok(SplitData {
        b1,
        b2,
        restrictions,
    })
}

/// Q-dimension of the generalized 1-eigenspace of `tau` inside `b1`.
pub fn co_unipotent_defect(av: &AbelianVarietySpec, tau: &EndoMatrix, b1: &ConnectedSubgroup) -> usize {
    ConnectedSubgroup::kernel_of(&unipotent_defect_map(av, tau))
        .intersect(b1)
        .parts()
        .iter()
        .map(|p| p.dim())
        .sum()
}

/// `det(τ - id)` restricted to `b1`, which is `τ`-stable.
pub fn det_minus_identity_on(tau: &EndoMatrix, b1: &ConnectedSubgroup) -> Option<crate::exact::Rational> {
    let blocks = b1.restriction(tau)?;
    Some(
        blocks
            .iter()
            .map(|b| b.sub_scalar_identity(&One::one()).det().expect("square"))
            .fold(crate::exact::Rational::one(), |acc, d| acc * d),
    )
}

/// Group part of `σ_1^{w_1} ∘ ... ∘ σ_s^{w_s}`.
fn word_tau(gens: &[AffineEndo], w: &[u64]) -> EndoMatrix {
    gens.iter()
        .zip(w)
        .fold(None::<EndoMatrix>, |acc, (g, &e)| {
            let p = g.tau.pow(e);
            Some(match acc {
                Some(a) => a.mul(&p),
                None => p,
            })
        })
        .expect("at least one generator")
}

/// Affine map of an exponent word, composed in index order.
pub fn evaluate_word(av: &AbelianVarietySpec, gens: &[AffineEndo], w: &[u64]) -> AffineEndo {
    gens.iter()
        .zip(w)
        .fold(AffineEndo::identity(av), |acc, (g, &e)| acc.compose(av, &g.iterate(av, e)))
}

pub fn format_word(w: &[u64]) -> String {
    let mut s = String::new();
    for (i, &e) in w.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('·');
        }
        let _ = write!(s, "g{}", i + 1);
        if e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    if s.is_empty() {
        s.push_str("id");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimalized {
    /// One product per input generator, as exponent vectors.
    pub words: Vec<Vec<u64>>,
    /// Independent words whose exponent lattice has finite index.
    pub t0: Vec<Vec<u64>>,
    /// The affine maps of `t0`.
    pub gens: Vec<AffineEndo>,
    /// `n` with `n e_i` in the span of `t0` for all `i`.
    pub lattice_exponent: BigInt,
    pub log: Vec<String>,
}

/// Replaces each generator by a product with no eigenvalue 1 on `B1`.
///
/// Exponents are searched in `1..=2g+1`: a non-root-of-unity eigenvalue can
/// cancel a given eigenvalue for at most one exponent, so the range always
/// contains a choice that loses nothing.
pub fn minimalize_generators(
    av: &AbelianVarietySpec,
    gens: &GeneratorSet,
    split: &SplitData,
) -> Result<Minimalized> {
    let s = gens.len();
    let bound = av.lattice_rank() as u64 + 1;
    let nu = |w: &[u64]| co_unipotent_defect(av, &word_tau(&gens.gens, w), &split.b1);
    let mut log = Vec::new();
    let mut words = Vec::with_capacity(s);
    for i in 0..s {
        let mut w = vec![0u64; s];
        w[i] = 1;
        let mut cur = nu(&w);
        for j in (0..s).filter(|&j| j != i) {
            if cur == 0 {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for m in 1..=bound {
                let mut cand = w.clone();
                cand[j] += m;
                let v = nu(&cand);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, m));
                }
            }
            let (v, m) = best.expect("nonempty range");
            if v < cur {
                w[j] += m;
                cur = v;
            }
        }
        if cur != 0 {
            return Err(Error::SearchExhausted(i + 1));
        }
        log.push(format!("minimalized g{} -> {}", i + 1, format_word(&w)));
        words.push(w);
    }

    // Candidates: each word, and each word with extra copies of its own generator.
    let mut candidates = words.clone();
    for (i, w) in words.iter().enumerate() {
        let extra = (1..=bound).find_map(|c| {
            let mut cand = w.clone();
            cand[i] += c;
            (nu(&cand) == 0).then_some(cand)
        });
        candidates.push(extra.ok_or(Error::SearchExhausted(i + 1))?);
    }
    candidates.sort();
    candidates.dedup();
    let mut t0: Vec<Vec<u64>> = Vec::new();
    for c in &candidates {
        if t0.len() == s {
            break;
        }
        let mut trial = t0.clone();
        trial.push(c.clone());
        if exponent_matrix(&trial).rank() == trial.len() {
            t0 = trial;
        }
    }
    if t0.len() < s {
        return Err(Error::NotFiniteIndex {
            rank: t0.len(),
            expected: s,
        });
    }
    let n = lattice_exponent(&t0)?;
    let t0_names: Vec<String> = t0.iter().map(|w| format_word(w)).collect();
    log.push(format!("independent products T0 = {{{}}}", t0_names.join(", ")));
    log.push(format!("lattice exponent of T0 = {n}"));
    let n_u64 = u64::try_from(&n).ok();
    let covered = (0..s).all(|i| {
        let mut x = vec![0u64; s];
        x[i] = n_u64.unwrap_or(0);
        n_u64.is_some() && bar_membership(&x, &t0)
    });
    log.push(format!("every g_i^{n} lies in the bar-closure of T0: {covered}"));
    let min_gens = t0.iter().map(|w| evaluate_word(av, &gens.gens, w)).collect();
    Ok(Minimalized {
        words,
        t0,
        gens: min_gens,
        lattice_exponent: n,
        log,
    })
}

/// Tuples as the columns of an `s x |T|` rational matrix.
fn exponent_matrix(tuples: &[Vec<u64>]) -> QMatrix {
    let s = tuples.first().map_or(0, Vec::len);
    let cols: Vec<Vec<_>> = tuples
        .iter()
        .map(|t| t.iter().map(|&x| crate::exact::rat(x as i64)).collect())
        .collect();
    QMatrix::from_columns(s, &cols)
}

fn exponent_zmatrix(tuples: &[Vec<u64>], s: usize) -> ZMatrix {
    let mut m = ZMatrix::zeros(s, tuples.len());
    for (j, t) in tuples.iter().enumerate() {
        assert_eq!(t.len(), s, "tuples share a length");
        for (i, &x) in t.iter().enumerate() {
            m[(i, j)] = BigInt::from(x);
        }
    }
    m
}

/// Exponent of `Z^s / H` where `H` is spanned by `tuples`.
pub fn lattice_exponent(tuples: &[Vec<u64>]) -> Result<BigInt> {
    let s = tuples.first().map_or(0, Vec::len);
    if s == 0 {
        return Err(Error::NotFiniteIndex {
            rank: 0,
            expected: 0,
        });
    }
    quotient_exponent(&exponent_zmatrix(tuples, s))
}

/// Integer coefficients `a` with `x = Σ a_j t_j`, if any.
pub fn integer_combination(x: &[u64], tuples: &[Vec<u64>]) -> Option<Vec<BigInt>> {
    let s = x.len();
    if tuples.is_empty() {
        return x.iter().all(|&v| v == 0).then(Vec::new);
    }
    let m = exponent_zmatrix(tuples, s);
    let snf = smith_normal_form(&m);
    let xv: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let ux = snf.u.mul_vec(&xv);
    let diag = snf.diagonal();
    let mut w = vec![BigInt::zero(); tuples.len()];
    for (i, c) in ux.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        }
    }
    let a = snf.v.mul_vec(&w);
    debug_assert_eq!(m.mul_vec(&a), xv);
    Some(a)
}

/// `y, z ∈ N T` with `x + y = z`, if they exist.
///
/// Such a pair exists iff `x` is an integer combination of `T`: split the
/// coefficients into their negative and positive parts.
pub fn bar_witness(x: &[u64], tuples: &[Vec<u64>]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let a = integer_combination(x, tuples)?;
    let s = x.len();
    let mut y = vec![BigInt::zero(); s];
    let mut z = vec![BigInt::zero(); s];
    for (c, t) in a.iter().zip(tuples) {
        let target = if c.is_negative() { &mut y } else { &mut z };
        for (acc, &v) in target.iter_mut().zip(t) {
            *acc += c.abs() * BigInt::from(v);
        }
    }
    Some((y, z))
}

pub fn bar_membership(x: &[u64], tuples: &[Vec<u64>]) -> bool {
    bar_witness(x, tuples).is_some()
}
