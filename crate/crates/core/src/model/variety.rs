use crate::error::{Error, Result};
use crate::exact::RingSpec;

/// A simple factor `C` of dimension `dim` with endomorphism order `ring`,
/// appearing `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub dim: usize,
    pub ring: RingSpec,
    pub multiplicity: usize,
}

impl Factor {
    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    /// Q-dimension of `F^k`, the space carrying subvarieties of `C^k`.
    pub fn field_space_dim(&self) -> usize {
        self.ring.degree() * self.multiplicity
    }

    /// Rank of the lattice of `C^k`.
    pub fn lattice_rank(&self) -> usize {
        2 * self.dim * self.multiplicity
    }
}

/// `A = Π C_i^{k_i}` together with the lattice model of each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianVarietySpec {
    factors: Vec<Factor>,
}

impl AbelianVarietySpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidVariety("no factors".into()));
        }
        for f in &factors {
            if f.dim == 0 || f.multiplicity == 0 {
                return Err(Error::InvalidVariety(format!(
                    "factor `{}` needs positive dim and multiplicity",
                    f.name
                )));
            }
            if f.ring.lattice_size() != 2 * f.dim {
                return Err(Error::InvalidVariety(format!(
                    "factor `{}`: lattice_rep has size {}, expected {}",
                    f.name,
                    f.ring.lattice_size(),
                    2 * f.dim
                )));
            }
        }
        Ok(AbelianVarietySpec { factors })
    }

    /// `E^k` for an elliptic curve without extra endomorphisms.
    pub fn elliptic_power(k: usize) -> Self {
        Self::new(vec![Factor {
            name: "E".into(),
            dim: 1,
            ring: RingSpec::integers(1),
            multiplicity: k,
        }])
        .expect("valid product")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Factor {
        &self.factors[i]
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// `g`
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim * f.multiplicity).sum()
    }

    /// `2g`
    pub fn lattice_rank(&self) -> usize {
        2 * self.dim()
    }

    /// Start of factor `i` inside the lattice coordinates.
    pub fn lattice_offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(Factor::lattice_rank).sum()
    }

    /// Total Q-dimension of `Π F_i^{k_i}`.
    pub fn field_space_dim(&self) -> usize {
        self.factors.iter().map(Factor::field_space_dim).sum()
    }
}
