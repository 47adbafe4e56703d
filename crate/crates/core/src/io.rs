//! JSON formats for scenarios, certificates and verification reports.
//!
//! Every number is an integer or a string `"p"` / `"p/q"`. A ring element is
//! either a single number (a rational scalar) or its coordinate list in the
//! basis of the order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{FibrationCertificate, Outcome, Verdict};
use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rational, int, parse_rational};
use crate::exact::{FieldElement, QMatrix, Rational, RingSpec, Subspace};
use crate::model::{
    AbelianVarietySpec, AffineEndo, ConnectedSubgroup, EndoMatrix, Factor, PointDecls, SymbolicPoint,
};
use crate::oracle::{CheckMode, Counterexample, SampledPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn canonical(q: &Rational) -> Self {
        Num::Text(fmt_rational(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingElem {
    Scalar(Num),
    Coords(Vec<Num>),
}

/// An element of `End(A) ⊗ Q`: a rational scalar or one `k x k` matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndoSpec {
    Scalar(Num),
    Blocks(Vec<Vec<Vec<RingElem>>>),
}

/// Per factor, a list of vectors in `F^k`.
pub type SupportSpec = Vec<Vec<Vec<RingElem>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub basis: Vec<String>,
    pub mul_table: Vec<Vec<Vec<Num>>>,
    pub lattice_rep: Vec<Vec<Vec<Num>>>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorFile {
    pub name: String,
    pub dim: usize,
    #[serde(default = "one")]
    pub multiplicity: usize,
    /// Defaults to `Z` acting by scalars.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo_ring: Option<RingFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub name: String,
    /// Defaults to the whole variety.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    #[serde(alias = "generator")]
    pub point: String,
    /// Defaults to the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<EndoSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionFile {
    pub order: Num,
    pub vector: Vec<Num>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion_terms: Vec<TorsionFile>,
    /// Inline declarations of generic points used by `terms`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub supports: BTreeMap<String, SupportSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub tau: EndoSpec,
    #[serde(default)]
    pub translation: TranslationFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub factors: Vec<FactorFile>,
    #[serde(default)]
    pub declared_points: Vec<PointFile>,
    pub generators: Vec<GeneratorFile>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: Option<String>,
    pub av: AbelianVarietySpec,
    pub decls: PointDecls,
    pub gens: Vec<AffineEndo>,
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(key),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Deserializes `text`, reporting failures with a JSON-pointer path.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = pointer(e.path());
        Error::scenario(path, e.into_inner().to_string())
    })
}

fn num(n: &Num, path: &str) -> Result<Rational> {
    match n {
        Num::Int(i) => Ok(Rational::from_integer(BigInt::from(*i))),
        Num::Text(s) => parse_rational(s).map_err(|m| Error::scenario(path, m)),
    }
}

fn integer(n: &Num, path: &str) -> Result<BigInt> {
    let q = num(n, path)?;
    if !q.is_integer() {
        return Err(Error::scenario(path, "expected an integer"));
    }
    Ok(q.to_integer())
}

fn ring_elem(ring: &RingSpec, x: &RingElem, path: &str) -> Result<FieldElement> {
    match x {
        RingElem::Scalar(n) => Ok(ring.scalar(num(n, path)?)),
        RingElem::Coords(cs) => {
            if cs.len() != ring.degree() {
                return Err(Error::scenario(
                    path,
                    format!("expected {} coordinates, found {}", ring.degree(), cs.len()),
                ));
            }
            let coords = cs
                .iter()
                .enumerate()
                .map(|(i, c)| num(c, &format!("{path}/{i}")))
                .collect::<Result<Vec<_>>>()?;
            ring.element(coords).map_err(|e| Error::scenario(path, e.to_string()))
        }
    }
}

fn ring_from_file(r: &RingFile, path: &str) -> Result<RingSpec> {
    let mul_table = r
        .mul_table
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    v.iter()
                        .enumerate()
                        .map(|(c, x)| num(x, &format!("{path}/mul_table/{i}/{j}/{c}")))
                        .collect()
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<Rational>>>>>()?;
    let lattice_rep = r
        .lattice_rep
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let rows = m
                .iter()
                .enumerate()
                .map(|(a, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(b, x)| num(x, &format!("{path}/lattice_rep/{i}/{a}/{b}")))
                        .collect()
                })
                .collect::<Result<Vec<Vec<Rational>>>>()?;
            QMatrix::from_rows(rows).map_err(|e| Error::scenario(format!("{path}/lattice_rep/{i}"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    RingSpec::new(r.basis.clone(), mul_table, lattice_rep).map_err(|e| Error::scenario(path, e.to_string()))
}

fn endo_from_spec(av: &AbelianVarietySpec, spec: &EndoSpec, path: &str) -> Result<EndoMatrix> {
    match spec {
        EndoSpec::Scalar(n) => Ok(EndoMatrix::scalar(av, num(n, path)?)),
        EndoSpec::Blocks(blocks) => {
            if blocks.len() != av.num_factors() {
                return Err(Error::scenario(
                    path,
                    format!("expected {} factor blocks, found {}", av.num_factors(), blocks.len()),
                ));
            }
            let mut entries = Vec::with_capacity(blocks.len());
            for (i, (f, rows)) in av.factors().iter().zip(blocks).enumerate() {
                let k = f.multiplicity;
                if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                    return Err(Error::scenario(
                        format!("{path}/{i}"),
                        format!("factor `{}` needs a {k}x{k} matrix", f.name),
                    ));
                }
                let m = rows
                    .iter()
                    .enumerate()
                    .map(|(a, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(b, x)| ring_elem(&f.ring, x, &format!("{path}/{i}/{a}/{b}")))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<_>>>>()?;
                entries.push(m);
            }
            EndoMatrix::from_entries(av, &entries).map_err(|e| Error::scenario(path, e.to_string()))
        }
    }
}

fn support_from_spec(av: &AbelianVarietySpec, spec: &SupportSpec, path: &str) -> Result<ConnectedSubgroup> {
    if spec.len() != av.num_factors() {
        return Err(Error::scenario(
            path,
            format!("expected {} factor lists, found {}", av.num_factors(), spec.len()),
        ));
    }
    let mut vectors = Vec::with_capacity(spec.len());
    for (i, (f, vs)) in av.factors().iter().zip(spec).enumerate() {
        let mut part = Vec::with_capacity(vs.len());
        for (j, v) in vs.iter().enumerate() {
            if v.len() != f.multiplicity {
                return Err(Error::scenario(
                    format!("{path}/{i}/{j}"),
                    format!("vectors of factor `{}` have {} entries", f.name, f.multiplicity),
                ));
            }
            let mut coords = Vec::with_capacity(f.field_space_dim());
            for (a, x) in v.iter().enumerate() {
                coords.extend(ring_elem(&f.ring, x, &format!("{path}/{i}/{j}/{a}"))?.coords);
            }
            part.push(coords);
        }
        vectors.push(part);
    }
    ConnectedSubgroup::span_over_fields(av, &vectors).map_err(|e| Error::scenario(path, e.to_string()))
}

fn declare(decls: &mut PointDecls, name: &str, support: ConnectedSubgroup, path: &str) -> Result<()> {
    if let Ok(existing) = decls.support(name) {
        if *existing != support {
            return Err(Error::scenario(path, format!("point `{name}` declared twice with different supports")));
        }
    }
    decls.declare(name, support);
    Ok(())
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<Scenario> {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let path = format!("/factors/{i}");
                let ring = match &f.endo_ring {
                    Some(r) => ring_from_file(r, &format!("{path}/endo_ring"))?,
                    None => RingSpec::integers(f.dim),
                };
                Ok(Factor {
                    name: f.name.clone(),
                    dim: f.dim,
                    ring,
                    multiplicity: f.multiplicity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let av = AbelianVarietySpec::new(factors).map_err(|e| Error::scenario("/factors", e.to_string()))?;

        let mut decls = PointDecls::new();
        for (i, p) in self.declared_points.iter().enumerate() {
            let path = format!("/declared_points/{i}");
            let support = match &p.support {
                Some(s) => support_from_spec(&av, s, &format!("{path}/support"))?,
                None => ConnectedSubgroup::full(&av),
            };
            declare(&mut decls, &p.name, support, &path)?;
        }
        for (g, gen) in self.generators.iter().enumerate() {
            for (name, s) in &gen.translation.supports {
                let path = format!("/generators/{g}/translation/supports/{name}");
                let support = support_from_spec(&av, s, &path)?;
                declare(&mut decls, name, support, &path)?;
            }
        }

        if self.generators.is_empty() {
            return Err(Error::scenario("/generators", "at least one generator is required"));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (g, gen) in self.generators.iter().enumerate() {
            let path = format!("/generators/{g}");
            let tau = endo_from_spec(&av, &gen.tau, &format!("{path}/tau"))?;
            if !tau.is_integral(&av) {
                return Err(Error::scenario(
                    format!("{path}/tau"),
                    "group part must have entries in the declared orders",
                ));
            }
            let mut y = SymbolicPoint::zero(&av);
            for (t, term) in gen.translation.terms.iter().enumerate() {
                let tpath = format!("{path}/translation/terms/{t}");
                if !decls.contains(&term.point) {
                    return Err(Error::scenario(
                        format!("{tpath}/point"),
                        Error::UndeclaredGenerator(term.point.clone()).to_string(),
                    ));
                }
                let coeff = match &term.coeff {
                    Some(c) => endo_from_spec(&av, c, &format!("{tpath}/coeff"))?,
                    None => EndoMatrix::identity(&av),
                };
                y = y.add(&SymbolicPoint::term(&av, &term.point, coeff));
            }
            for (t, tors) in gen.translation.torsion_terms.iter().enumerate() {
                let tpath = format!("{path}/translation/torsion_terms/{t}");
                let order = integer(&tors.order, &format!("{tpath}/order"))?;
                let vector = tors
                    .vector
                    .iter()
                    .enumerate()
                    .map(|(c, x)| integer(x, &format!("{tpath}/vector/{c}")))
                    .collect::<Result<Vec<_>>>()?;
                let p = SymbolicPoint::torsion(&av, &order, &vector).map_err(|e| Error::scenario(&tpath, e.to_string()))?;
                y = y.add(&p);
            }
            gens.push(AffineEndo::new(tau, y));
        }
        Ok(Scenario {
            name: self.name.clone(),
            av,
            decls,
            gens,
        })
    }
}

fn elem_file(x: &FieldElement) -> RingElem {
    if x.coords.len() == 1 {
        RingElem::Scalar(Num::canonical(&x.coords[0]))
    } else {
        RingElem::Coords(x.coords.iter().map(Num::canonical).collect())
    }
}

fn endo_file(av: &AbelianVarietySpec, m: &EndoMatrix) -> EndoSpec {
    EndoSpec::Blocks(
        m.entries(av)
            .iter()
            .map(|rows| rows.iter().map(|row| row.iter().map(elem_file).collect()).collect())
            .collect(),
    )
}

/// A basis over the fields: the first rational basis vectors whose field span grows.
fn field_basis(av: &AbelianVarietySpec, c: &ConnectedSubgroup) -> Vec<Vec<Vec<Rational>>> {
    (0..av.num_factors())
        .map(|i| {
            let mut chosen: Vec<Vec<Rational>> = Vec::new();
            let mut reached = 0;
            for v in c.part(i).basis() {
                if reached == c.part(i).dim() {
                    break;
                }
                let mut trial = chosen.clone();
                trial.push(v.clone());
                let mut per_factor = vec![Vec::new(); av.num_factors()];
                per_factor[i] = trial.clone();
                let d = ConnectedSubgroup::span_over_fields(av, &per_factor)
                    .expect("vectors of the right length")
                    .part(i)
                    .dim();
                if d > reached {
                    chosen = trial;
                    reached = d;
                }
            }
            chosen
        })
        .collect()
}

fn support_file(av: &AbelianVarietySpec, c: &ConnectedSubgroup) -> SupportSpec {
    field_basis(av, c)
        .iter()
        .zip(av.factors())
        .map(|(vs, f)| {
            let e = f.degree();
            vs.iter()
                .map(|v| {
                    v.chunks(e)
                        .map(|chunk| elem_file(&FieldElement { coords: chunk.to_vec() }))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn ring_file(r: &RingSpec) -> RingFile {
    RingFile {
        basis: r.basis_names().to_vec(),
        mul_table: r
            .mul_table()
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(Num::canonical).collect()).collect())
            .collect(),
        lattice_rep: r
            .lattice_reps()
            .iter()
            .map(|m| m.to_rows().iter().map(|row| row.iter().map(Num::canonical).collect()).collect())
            .collect(),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        from_json::<ScenarioFile>(text)?.to_scenario()
    }

    /// Canonical file form: explicit rings, full matrices, one torsion term.
    pub fn to_file(&self) -> ScenarioFile {
        let av = &self.av;
        let factors = av
            .factors()
            .iter()
            .map(|f| FactorFile {
                name: f.name.clone(),
                dim: f.dim,
                multiplicity: f.multiplicity,
                endo_ring: Some(ring_file(&f.ring)),
            })
            .collect();
        let declared_points = self
            .decls
            .iter()
            .map(|(name, s)| PointFile {
                name: name.clone(),
                support: (!s.is_full()).then(|| support_file(av, s)),
            })
            .collect();
        let generators = self
            .gens
            .iter()
            .map(|g| {
                let terms = g
                    .translation
                    .terms()
                    .iter()
                    .map(|(name, c)| TermFile {
                        point: name.clone(),
                        coeff: (!c.is_identity()).then(|| endo_file(av, c)),
                    })
                    .collect();
                let order = g.translation.torsion_order();
                let torsion_terms = if order.is_one() {
                    Vec::new()
                } else {
                    let o = int(&order);
                    vec![TorsionFile {
                        order: Num::Text(order.to_string()),
                        vector: g
                            .translation
                            .torsion_vector()
                            .iter()
                            .map(|t| Num::canonical(&(t * &o)))
                            .collect(),
                    }]
                };
                GeneratorFile {
                    tau: endo_file(av, &g.tau),
                    translation: TranslationFile {
                        terms,
                        torsion_terms,
                        supports: BTreeMap::new(),
                    },
                }
            })
            .collect();
        ScenarioFile {
            name: self.name.clone(),
            factors,
            declared_points,
            generators,
        }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// Per factor, a rational basis in restriction-of-scalars coordinates.
pub type SubgroupFile = Vec<Vec<Vec<String>>>;

pub fn subgroup_file(c: &ConnectedSubgroup) -> SubgroupFile {
    c.parts()
        .iter()
        .map(|p| p.basis().iter().map(|v| v.iter().map(fmt_rational).collect()).collect())
        .collect()
}

pub fn subgroup_from_file(av: &AbelianVarietySpec, data: &SubgroupFile, path: &str) -> Result<ConnectedSubgroup> {
    let bad = |m: String| Error::InvalidCertificate(format!("{path}: {m}"));
    if data.len() != av.num_factors() {
        return Err(bad(format!("expected {} factor bases", av.num_factors())));
    }
    let parts = av
        .factors()
        .iter()
        .zip(data)
        .map(|(f, vs)| {
            let vectors = vs
                .iter()
                .map(|v| v.iter().map(|s| parse_rational(s).map_err(&bad)).collect())
                .collect::<Result<Vec<Vec<Rational>>>>()?;
            Subspace::span(f.field_space_dim(), &vectors).map_err(|e| bad(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    ConnectedSubgroup::from_parts(av, parts).map_err(|e| bad(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(rename = "B1")]
    pub b1: SubgroupFile,
    #[serde(rename = "B2")]
    pub b2: SubgroupFile,
    pub targets: Vec<SubgroupFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Informational {
    /// Reduced generators that are dense on their own (1-based).
    pub single_generator_dense: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub scenario_digest: String,
    pub verdict: String,
    #[serde(rename = "C")]
    pub c: Option<SubgroupFile>,
    pub torsion_multiplier: Option<String>,
    pub powered_exponent: u64,
    pub bezout_k: String,
    pub witness: Option<WitnessFile>,
    pub witness_constraints: Vec<String>,
    pub reduction_log: Vec<String>,
    #[serde(default)]
    pub informational: Informational,
}

impl CertificateFile {
    pub fn from_verdict(scenario: &Scenario, v: &Verdict) -> Self {
        let (c, m, witness, constraints) = match &v.outcome {
            Outcome::Fibration(cert) => (
                Some(subgroup_file(&cert.c)),
                Some(cert.torsion_multiplier.to_string()),
                None,
                Vec::new(),
            ),
            Outcome::Dense(w) => (
                None,
                None,
                Some(WitnessFile {
                    b1: subgroup_file(&w.b1),
                    b2: subgroup_file(&w.b2),
                    targets: w.targets.iter().map(subgroup_file).collect(),
                }),
                w.constraints.clone(),
            ),
        };
        CertificateFile {
            scenario_digest: scenario.digest(),
            verdict: v.branch().to_string(),
            c,
            torsion_multiplier: m,
            powered_exponent: v.powered_exponent,
            bezout_k: v.bezout_k.to_string(),
            witness,
            witness_constraints: constraints,
            reduction_log: v.log.clone(),
            informational: Informational {
                single_generator_dense: v.single_generator_dense.clone(),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        from_json(text).map_err(|e| match e {
            Error::InvalidScenario { path, message } => Error::InvalidCertificate(format!("{path}: {message}")),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn is_fibration(&self) -> bool {
        self.verdict == "fibration"
    }

    pub fn bezout_k(&self) -> Result<BigInt> {
        self.bezout_k
            .parse()
            .map_err(|_| Error::InvalidCertificate("/bezout_k: not an integer".into()))
    }

    /// The fibration data, or `None` for a dense verdict.
    pub fn fibration(&self, av: &AbelianVarietySpec) -> Result<Option<FibrationCertificate>> {
        match self.verdict.as_str() {
            "dense" => Ok(None),
            "fibration" => {
                let c = self
                    .c
                    .as_ref()
                    .ok_or_else(|| Error::InvalidCertificate("/C: missing".into()))?;
                let m: BigInt = self
                    .torsion_multiplier
                    .as_deref()
                    .ok_or_else(|| Error::InvalidCertificate("/torsion_multiplier: missing".into()))?
                    .parse()
                    .map_err(|_| Error::InvalidCertificate("/torsion_multiplier: not an integer".into()))?;
                if m <= BigInt::zero() || self.powered_exponent == 0 {
                    return Err(Error::InvalidCertificate(
                        "torsion multiplier and powered exponent must be positive".into(),
                    ));
                }
                Ok(Some(FibrationCertificate {
                    c: subgroup_from_file(av, c, "/C")?,
                    torsion_multiplier: m,
                    powered_exponent: self.powered_exponent,
                }))
            }
            other => Err(Error::InvalidCertificate(format!("/verdict: unknown verdict `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the oracle at one modulus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub modulus: u64,
    pub requested_modulus: u64,
    pub mode: CheckMode,
    /// No generic point was sampled.
    pub exact: bool,
    pub sampled_points: Vec<SampledPoint>,
    pub checks: Vec<CheckRecord>,
    pub full_rate: Option<f64>,
    pub counterexamples: Vec<Counterexample>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedModulus {
    pub modulus: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationFile {
    pub scenario_digest: String,
    pub verdict: String,
    pub passed: bool,
    pub messages: Vec<String>,
    pub reports: Vec<Report>,
    pub skipped: Vec<SkippedModulus>,
}

impl VerificationFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const JORDAN: &str = r#"{
        "factors": [{"name": "E", "dim": 1, "multiplicity": 2}],
        "declared_points": [{"name": "p", "support": [[["0", "1"]]]}],
        "generators": [{
            "tau": [[["1", "1"], ["0", 1]]],
            "translation": {"terms": [{"point": "p"}], "torsion_terms": [{"order": "3", "vector": [1, 0, 0, 2]}]}
        }]
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let s = Scenario::parse(JORDAN).unwrap();
        assert_eq!(s.av.lattice_rank(), 4);
        assert_eq!(s.gens[0].translation.torsion_order(), BigInt::from(3));
        let canon = s.canonical_json();
        let again = Scenario::parse(&canon).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.canonical_json(), canon);
        assert_eq!(again.digest(), s.digest());
        assert_eq!(s.digest().len(), 64);
    }

    #[test]
    fn errors_carry_pointers() {
        let bad = JORDAN.replace(r#""0", 1]"#, r#""0", "x"]"#);
        match Scenario::parse(&bad) {
            Err(Error::InvalidScenario { path, .. }) => assert_eq!(path, "/generators/0/tau/0/1/1"),
            other => panic!("{other:?}"),
        }
        let missing = JORDAN.replace(r#""point": "p""#, r#""point": "q""#);
        match Scenario::parse(&missing) {
            Err(Error::InvalidScenario { path, message }) => {
                assert_eq!(path, "/generators/0/translation/terms/0/point");
                assert!(message.contains("`q`"));
            }
            other => panic!("{other:?}"),
        }
        match Scenario::parse(r#"{"factors": [{"name": "E", "dim": "one"}], "generators": []}"#) {
            Err(Error::InvalidScenario { path, .. }) => assert_eq!(path, "/factors/0/dim"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificate_round_trip() {
        let s = Scenario::parse(JORDAN).unwrap();
        let v = crate::engine::analyze(&s.av, &s.decls, &s.gens).unwrap();
        let cert = CertificateFile::from_verdict(&s, &v);
        let back = CertificateFile::parse(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        if let Some(f) = back.fibration(&s.av).unwrap() {
            assert_eq!(Some(&f), v.certificate());
        }
    }
}
