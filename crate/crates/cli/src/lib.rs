//! Commands behind the `abdyn` binary: analyze a scenario, verify a
//! certificate on torsion models, print orbits and normalization data.

use std::fmt::Write as _;
use std::path::Path;

use abdyn_core::engine::{self, check_certificate, normalize, FibrationCertificate};
use abdyn_core::exact::{fmt_rational, Rational};
use abdyn_core::io::{CheckRecord, SkippedModulus};
use abdyn_core::oracle::{
    commutant_basis, compatible_modulus, dense_sampling_check, iterate_orbit, orbit_subgroup, reduce_mod,
    verify_closed_form, verify_fibration, CheckMode, FiniteModel, DEFAULT_EXHAUSTIVE_BOUND,
};
use abdyn_core::reduction::format_word;
use abdyn_core::{CertificateFile, Report, Scenario, VerificationFile};
use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_MODULI: [u64; 4] = [5, 7, 11, 101];
pub const DEFAULT_TRIALS: usize = 1000;
/// Minimum fraction of sampled points with full orbit hull.
pub const DENSE_THRESHOLD: f64 = 0.5;

pub fn load_scenario(path: &Path) -> anyhow::Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_certificate(path: &Path) -> anyhow::Result<CertificateFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CertificateFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn analyze(s: &Scenario) -> abdyn_core::Result<CertificateFile> {
    let v = engine::analyze(&s.av, &s.decls, &s.gens)?;
    Ok(CertificateFile::from_verdict(s, &v))
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub moduli: Vec<u64>,
    pub seed: u64,
    pub exhaustive_bound: u64,
    pub trials: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            moduli: DEFAULT_MODULI.to_vec(),
            seed: 0,
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
            trials: DEFAULT_TRIALS,
        }
    }
}

fn shares_factor(n: u64, k: &BigInt) -> bool {
    k.gcd(&BigInt::from(n)) != BigInt::from(1)
}

struct Checker<'a> {
    s: &'a Scenario,
    fibration: Option<&'a FibrationCertificate>,
    powered_exponent: u64,
    bezout_k: BigInt,
    commutant: Vec<abdyn_core::exact::ZMatrix>,
    opts: &'a VerifyOptions,
}

fn verify_at(cx: &Checker, requested: u64) -> Result<Report, SkippedModulus> {
    let s = cx.s;
    let skip = |reason: String| SkippedModulus {
        modulus: requested,
        reason,
    };
    let modulus = compatible_modulus(requested, &s.gens).ok_or_else(|| skip("modulus overflow".into()))?;
    let mut warnings = Vec::new();
    if modulus != requested {
        warnings.push(format!(
            "modulus {requested} lifted to {modulus} to hold the torsion of the translations"
        ));
    }
    if shares_factor(modulus, &cx.bezout_k) {
        warnings.push(format!(
            "modulus {modulus} shares a factor with the Bezout integer k = {}",
            cx.bezout_k
        ));
    }
    if let Some(cert) = cx.fibration {
        if shares_factor(modulus, &cert.torsion_multiplier) {
            warnings.push(format!(
                "modulus {modulus} shares a factor with the torsion multiplier {}",
                cert.torsion_multiplier
            ));
        }
    }
    let mut model: FiniteModel =
        reduce_mod(&s.av, &s.decls, &s.gens, modulus, cx.opts.seed).map_err(|e| skip(e.to_string()))?;
    let sampled_points = model.sampled();
    let exact = model.is_exact();
    let mut rng = ChaCha8Rng::seed_from_u64(cx.opts.seed ^ modulus.rotate_left(32));
    let mut checks = Vec::new();
    let mut counterexamples = Vec::new();
    let (mode, full_rate) = match cx.fibration {
        Some(cert) => {
            let res = verify_fibration(&s.av, &model, cert, cx.opts.exhaustive_bound, cx.opts.seed);
            let detail = match (&res.message, &res.counterexample) {
                (Some(m), _) => m.clone(),
                (None, Some(c)) => format!("g{} moves the point {:?} across fibres", c.generator, c.point),
                (None, None) => format!("{} points, m·π(σ^n(x)) = m·π(x) for every generator", res.points),
            };
            checks.push(CheckRecord {
                name: "fibration_invariant".into(),
                passed: res.passed,
                detail,
            });
            counterexamples.extend(res.counterexample);
            let dense = dense_sampling_check(
                &mut model,
                &cx.commutant,
                cert.powered_exponent,
                &cert.torsion_multiplier,
                cx.opts.trials,
                &mut rng,
            );
            checks.push(CheckRecord {
                name: "orbits_confined".into(),
                passed: dense.full == 0,
                detail: format!("{}/{} sampled orbits span A[N]", dense.full, dense.trials),
            });
            (res.mode, dense.full_rate)
        }
        None => {
            let dense = dense_sampling_check(
                &mut model,
                &cx.commutant,
                cx.powered_exponent,
                &BigInt::from(1),
                cx.opts.trials,
                &mut rng,
            );
            checks.push(CheckRecord {
                name: "dense_orbit_rate".into(),
                passed: dense.full_rate >= DENSE_THRESHOLD,
                detail: format!(
                    "{}/{} sampled orbits span A[N] (threshold {DENSE_THRESHOLD})",
                    dense.full, dense.trials
                ),
            });
            (CheckMode::Sampled, dense.full_rate)
        }
    };
    Ok(Report {
        modulus,
        requested_modulus: requested,
        mode,
        exact,
        sampled_points,
        checks,
        full_rate: Some(full_rate),
        counterexamples,
        warnings,
    })
}

/// Checks a certificate against its scenario: symbolically, then on `A[N]`
/// for each requested modulus. Errors mean the input itself is unusable.
pub fn verify(s: &Scenario, cert: &CertificateFile, opts: &VerifyOptions) -> abdyn_core::Result<VerificationFile> {
    let digest = s.digest();
    if cert.scenario_digest != digest {
        return Err(abdyn_core::Error::InvalidCertificate(format!(
            "scenario digest mismatch: certificate has {}, scenario is {digest}",
            cert.scenario_digest
        )));
    }
    engine::validate(&s.av, &s.decls, &s.gens)?;
    let fibration = cert.fibration(&s.av)?;
    let mut messages = Vec::new();
    let mut passed = true;
    if let Some(f) = &fibration {
        match check_certificate(&s.av, &s.decls, &s.gens, f) {
            Ok(()) => messages.push("symbolic check passed".to_string()),
            Err(m) => {
                passed = false;
                messages.push(m);
            }
        }
    }
    let cx = Checker {
        s,
        fibration: fibration.as_ref(),
        powered_exponent: cert.powered_exponent.max(1),
        bezout_k: cert.bezout_k()?,
        commutant: commutant_basis(&s.av),
        opts,
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &n in &opts.moduli {
        if n < 2 {
            skipped.push(SkippedModulus {
                modulus: n,
                reason: abdyn_core::Error::BadModulus(n).to_string(),
            });
            continue;
        }
        match verify_at(&cx, n) {
            Ok(r) => reports.push(r),
            Err(skip) => skipped.push(skip),
        }
    }
    if reports.is_empty() {
        passed = false;
        messages.push("no modulus could be checked".into());
    }
    passed &= reports.iter().all(Report::passed);
    Ok(VerificationFile {
        scenario_digest: digest,
        verdict: cert.verdict.clone(),
        passed,
        messages,
        reports,
        skipped,
    })
}

#[derive(Clone, Debug)]
pub struct OrbitOptions {
    pub point: String,
    pub steps: usize,
    pub modulus: u64,
    /// 1-based.
    pub generator: usize,
    pub seed: u64,
}

fn parse_point(s: &Scenario, model: &FiniteModel, spec: &str, seed: u64) -> anyhow::Result<Vec<u64>> {
    let n = model.modulus();
    let rank = s.av.lattice_rank();
    let spec = spec.trim();
    if spec == "0" {
        return Ok(vec![0; rank]);
    }
    if s.decls.contains(spec) {
        let decls = abdyn_core::PointDecls::new().with(spec, s.decls.support(spec)?.clone());
        let probe = abdyn_core::AffineEndo::new(
            abdyn_core::EndoMatrix::identity(&s.av),
            abdyn_core::SymbolicPoint::generic(&s.av, spec),
        );
        let m = reduce_mod(&s.av, &decls, &[probe], n, seed)?;
        return Ok(m.gens()[0].translation.clone());
    }
    let coords = spec
        .split(',')
        .map(|c| c.trim().parse::<i128>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| anyhow!("bad point `{spec}`: expected `0`, a declared point name or {rank} comma-separated integers"))?;
    if coords.len() != rank {
        bail!("bad point `{spec}`: expected {rank} coordinates, found {}", coords.len());
    }
    Ok(coords.iter().map(|&c| c.rem_euclid(n as i128) as u64).collect())
}

fn fmt_point(p: &[u64]) -> String {
    let parts: Vec<String> = p.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn orbit(s: &Scenario, opts: &OrbitOptions) -> anyhow::Result<String> {
    engine::validate(&s.av, &s.decls, &s.gens)?;
    if opts.generator == 0 || opts.generator > s.gens.len() {
        bail!("generator index {} out of range 1..={}", opts.generator, s.gens.len());
    }
    let modulus = compatible_modulus(opts.modulus, &s.gens).ok_or_else(|| anyhow!("modulus overflow"))?;
    let model = reduce_mod(&s.av, &s.decls, &s.gens, modulus, opts.seed)?;
    let x = parse_point(s, &model, &opts.point, opts.seed)?;
    let map = &model.gens()[opts.generator - 1];
    let pts = iterate_orbit(map, &x, opts.steps);

    let mut out = String::new();
    if modulus != opts.modulus {
        let _ = writeln!(out, "modulus {} lifted to {modulus}", opts.modulus);
    }
    let _ = writeln!(out, "modulus {modulus}, generator g{}", opts.generator);
    for sp in model.sampled() {
        let _ = writeln!(out, "sampled {} = {}", sp.name, fmt_point(&sp.vector));
    }
    for (i, p) in pts.iter().enumerate() {
        let _ = writeln!(out, "{i:>4}  {}", fmt_point(p));
    }
    let h = orbit_subgroup(modulus, &pts);
    let inv: Vec<String> = h.invariants().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "orbit subgroup: order {}, invariants [{}]", h.order(), inv.join(", "));
    let tau = &s.gens[opts.generator - 1].tau;
    if tau.minus_identity().pow(s.av.lattice_rank() as u64).is_zero() {
        let ok = verify_closed_form(map, &x, opts.steps as u64);
        let _ = writeln!(out, "closed-form match: {ok}");
    } else {
        let _ = writeln!(out, "closed-form match: not applicable (group part is not unipotent)");
    }
    Ok(out)
}

pub fn normalization_report(s: &Scenario) -> abdyn_core::Result<String> {
    let norm = normalize(&s.av, &s.decls, &s.gens)?;
    let av = &s.av;
    let per_factor = |c: &abdyn_core::ConnectedSubgroup| {
        let per: Vec<String> = c.field_dims(av).iter().map(ToString::to_string).collect();
        format!("[{}]", per.join(", "))
    };
    let mut out = String::new();
    if let Some(name) = &s.name {
        let _ = writeln!(out, "scenario: {name}");
    }
    let _ = writeln!(out, "generators: {}", s.gens.len());
    let _ = writeln!(out, "unity power n = {}", norm.unity_power);
    let (b1, b2) = (&norm.split.b1, &norm.split.b2);
    let _ = writeln!(out, "dim B2 = {}, dim B1 = {}", b2.dim(av), b1.dim(av));
    let _ = writeln!(out, "field dims per factor: B2 {}, B1 {}", per_factor(b2), per_factor(b1));
    for (i, w) in norm.minimal.words.iter().enumerate() {
        let _ = writeln!(out, "minimalized g{} -> {}", i + 1, format_word(w));
    }
    let t0: Vec<String> = norm.minimal.t0.iter().map(|w| format_word(w)).collect();
    let _ = writeln!(out, "T0 = {{{}}}", t0.join(", "));
    let _ = writeln!(out, "lattice exponent = {}", norm.minimal.lattice_exponent);
    for (i, g) in norm.minimal.gens.iter().enumerate() {
        let det = abdyn_core::reduction::det_minus_identity_on(&g.tau, &norm.split.b1)
            .map_or_else(|| "n/a".to_string(), |d: Rational| fmt_rational(&d));
        let _ = writeln!(out, "det(tau - id) on B1 for {}: {det}", t0[i]);
    }
    Ok(out)
}
