//! Abelian subvarieties as tuples of `F_i`-subspaces of `F_i^{k_i}`.

use num_traits::Zero;

use super::endo::{field_action, EndoMatrix};
use super::variety::AbelianVarietySpec;
use crate::error::{Error, Result};
use crate::exact::{QMatrix, Rational, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectedSubgroup {
    parts: Vec<Subspace>,
}

impl ConnectedSubgroup {
    pub fn zero(av: &AbelianVarietySpec) -> Self {
        ConnectedSubgroup {
            parts: av
                .factors()
                .iter()
                .map(|f| Subspace::zero(f.field_space_dim()))
                .collect(),
        }
    }

    pub fn full(av: &AbelianVarietySpec) -> Self {
        ConnectedSubgroup {
            parts: av
                .factors()
                .iter()
                .map(|f| Subspace::full(f.field_space_dim()))
                .collect(),
        }
    }

    /// Checks shapes and stability under the orders.
    pub fn from_parts(av: &AbelianVarietySpec, parts: Vec<Subspace>) -> Result<Self> {
        if parts.len() != av.num_factors() {
            return Err(Error::DimensionMismatch {
                expected: av.num_factors(),
                found: parts.len(),
            });
        }
        for (i, (f, p)) in av.factors().iter().zip(&parts).enumerate() {
            if p.ambient() != f.field_space_dim() {
                return Err(Error::DimensionMismatch {
                    expected: f.field_space_dim(),
                    found: p.ambient(),
                });
            }
            for s in field_action(av, i) {
                if !p.contains_subspace(&p.image(&s)) {
                    return Err(Error::NotOrderStable(format!(
                        "subspace of factor `{}` is not a subspace over its field",
                        f.name
                    )));
                }
            }
        }
        Ok(ConnectedSubgroup { parts })
    }

    /// Span of `F`-vectors given in restriction-of-scalars coordinates,
    /// closed under the field action.
    pub fn span_over_fields(av: &AbelianVarietySpec, vectors: &[Vec<Vec<Rational>>]) -> Result<Self> {
        let mut parts = Vec::with_capacity(av.num_factors());
        for (i, f) in av.factors().iter().enumerate() {
            let vs = vectors.get(i).cloned().unwrap_or_default();
            let mut all = Vec::new();
            for s in field_action(av, i) {
                for v in &vs {
                    if v.len() != f.field_space_dim() {
                        return Err(Error::DimensionMismatch {
                            expected: f.field_space_dim(),
                            found: v.len(),
                        });
                    }
                    all.push(s.mul_vec(v));
                }
            }
            parts.push(Subspace::span(f.field_space_dim(), &all)?);
        }
        Ok(ConnectedSubgroup { parts })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Subspace {
        &self.parts[i]
    }

    /// Dimension as an abelian variety.
    pub fn dim(&self, av: &AbelianVarietySpec) -> usize {
        av.factors()
            .iter()
            .zip(&self.parts)
            .map(|(f, p)| p.dim() / f.degree() * f.dim)
            .sum()
    }

    /// Per-factor `F`-dimensions.
    pub fn field_dims(&self, av: &AbelianVarietySpec) -> Vec<usize> {
        av.factors()
            .iter()
            .zip(&self.parts)
            .map(|(f, p)| p.dim() / f.degree())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Subspace::is_zero)
    }

    pub fn is_full(&self) -> bool {
        self.parts.iter().all(Subspace::is_full)
    }

    fn zip(&self, o: &Self, op: impl Fn(&Subspace, &Subspace) -> Result<Subspace>) -> Self {
        ConnectedSubgroup {
            parts: self
                .parts
                .iter()
                .zip(&o.parts)
                .map(|(a, b)| op(a, b).expect("subgroups over the same variety"))
                .collect(),
        }
    }

    pub fn sum(&self, o: &Self) -> Self {
        self.zip(o, Subspace::sum)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.zip(o, Subspace::intersect)
    }

    pub fn contains(&self, o: &Self) -> bool {
        self.parts
            .iter()
            .zip(&o.parts)
            .all(|(a, b)| a.contains_subspace(b))
    }

    pub fn image(&self, m: &EndoMatrix) -> Self {
        ConnectedSubgroup {
            parts: self
                .parts
                .iter()
                .zip(m.blocks())
                .map(|(p, b)| p.image(b))
                .collect(),
        }
    }

    pub fn image_of(m: &EndoMatrix) -> Self {
        ConnectedSubgroup {
            parts: m.blocks().iter().map(Subspace::column_space).collect(),
        }
    }

    /// Connected component of the kernel.
    pub fn kernel_of(m: &EndoMatrix) -> Self {
        ConnectedSubgroup {
            parts: m.blocks().iter().map(Subspace::kernel_of).collect(),
        }
    }

    /// Matrices of `m` restricted to each part, in the part's basis.
    /// `None` when some part is not `m`-stable.
    pub fn restriction(&self, m: &EndoMatrix) -> Option<Vec<QMatrix>> {
        self.parts
            .iter()
            .zip(m.blocks())
            .map(|(p, b)| {
                let basis = p.matrix();
                let img = b.mul(&basis);
                let cols = (0..p.dim())
                    .map(|j| basis.solve(&img.column(j)))
                    .collect::<Option<Vec<_>>>()?;
                Some(QMatrix::from_columns(p.dim(), &cols))
            })
            .collect()
    }

    /// `H_1` of the subvariety inside `Q^{2g}`, as a subspace.
    pub fn lattice_subspace(&self, av: &AbelianVarietySpec) -> Subspace {
        let n = av.lattice_rank();
        let mut vecs = Vec::new();
        for (i, (f, p)) in av.factors().iter().zip(&self.parts).enumerate() {
            let off = av.lattice_offset(i);
            let (e, s) = (f.degree(), 2 * f.dim);
            for w in p.basis() {
                let acts: Vec<QMatrix> = (0..f.multiplicity)
                    .map(|a| {
                        let coords = w[a * e..(a + 1) * e].to_vec();
                        f.ring.lattice(&crate::exact::FieldElement { coords })
                    })
                    .collect();
                for u in 0..s {
                    let mut v = vec![Rational::zero(); n];
                    for (a, act) in acts.iter().enumerate() {
                        for r in 0..s {
                            v[off + a * s + r] = act[(r, u)].clone();
                        }
                    }
                    vecs.push(v);
                }
            }
        }
        Subspace::span(n, &vecs).expect("lattice vectors")
    }
}
