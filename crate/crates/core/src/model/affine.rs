use super::endo::EndoMatrix;
use super::point::SymbolicPoint;
use super::variety::AbelianVarietySpec;

/// `σ = T_y ∘ τ`, i.e. `x ↦ τ(x) + y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineEndo {
    pub tau: EndoMatrix,
    pub translation: SymbolicPoint,
}

impl AffineEndo {
    pub fn new(tau: EndoMatrix, translation: SymbolicPoint) -> Self {
        AffineEndo { tau, translation }
    }

    pub fn identity(av: &AbelianVarietySpec) -> Self {
        AffineEndo {
            tau: EndoMatrix::identity(av),
            translation: SymbolicPoint::zero(av),
        }
    }

    pub fn linear(av: &AbelianVarietySpec, tau: EndoMatrix) -> Self {
        AffineEndo {
            tau,
            translation: SymbolicPoint::zero(av),
        }
    }

    pub fn apply(&self, av: &AbelianVarietySpec, p: &SymbolicPoint) -> SymbolicPoint {
        p.apply(av, &self.tau).add(&self.translation)
    }

    /// `self ∘ other`
    pub fn compose(&self, av: &AbelianVarietySpec, other: &AffineEndo) -> AffineEndo {
        AffineEndo {
            tau: self.tau.mul(&other.tau),
            translation: other.translation.apply(av, &self.tau).add(&self.translation),
        }
    }

    /// `σ^n = (τ^n, Σ_{i<n} τ^i(y))` by repeated squaring.
    pub fn iterate(&self, av: &AbelianVarietySpec, mut n: u64) -> AffineEndo {
        let mut acc = AffineEndo::identity(av);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(av, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(av, &base);
            }
        }
        acc
    }

    /// `T_{-w} ∘ σ ∘ T_w = (τ, y + τ(w) - w)`.
    pub fn conjugate_by_translation(&self, av: &AbelianVarietySpec, w: &SymbolicPoint) -> AffineEndo {
        AffineEndo {
            tau: self.tau.clone(),
            translation: self
                .translation
                .add(&w.apply(av, &self.tau))
                .sub(w),
        }
    }
}

pub fn apply_affine(av: &AbelianVarietySpec, sigma: &AffineEndo, p: &SymbolicPoint) -> SymbolicPoint {
    sigma.apply(av, p)
}

pub fn iterate_affine(av: &AbelianVarietySpec, sigma: &AffineEndo, n: u64) -> AffineEndo {
    sigma.iterate(av, n)
}
