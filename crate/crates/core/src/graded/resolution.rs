use serde::Serialize;

use super::{FPGradedModule, GradedFreeModule, GradedRing, TermMatrix};
use crate::field::Echelon;

/// A minimal graded free resolution `F_n → … → F_1 → F_0 (→ M → 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    ring: GradedRing,
    modules: Vec<GradedFreeModule>,
    /// `differentials[k]` is `d_{k+1}: F_{k+1} → F_k`.
    differentials: Vec<TermMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionSummary {
    pub betti: Vec<usize>,
    pub shifts: Vec<Vec<i64>>,
}

impl Resolution {
    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// `F_k`; zero past the computed length.
    pub fn module(&self, k: usize) -> GradedFreeModule {
        self.modules.get(k).cloned().unwrap_or_default()
    }

    /// `d_k: F_k → F_{k-1}` for `k >= 1`.
    pub fn differential(&self, k: usize) -> TermMatrix {
        assert!(k >= 1);
        self.differentials
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| TermMatrix::zero(self.ring.clone(), self.module(k), self.module(k - 1)))
    }

    /// `Ω^n M = coker(d_{n+1})`; needs `n + 1 <= length`.
    pub fn syzygy_module(&self, n: usize) -> FPGradedModule {
        assert!(n >= 1 && n < self.length(), "resolution too short for Ω^{n}");
        FPGradedModule::new_minimal(self.differential(n + 1))
    }

    pub fn betti(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    pub fn summary(&self) -> ResolutionSummary {
        ResolutionSummary {
            betti: self.betti(),
            shifts: self.modules.iter().map(|m| m.shifts().to_vec()).collect(),
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().all(|d| !d.has_unit_entries())
    }

    /// `d_k ∘ d_{k+1} = 0` for every consecutive pair.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[0].compose(&w[1]).map(|c| c.is_zero()).unwrap_or(false))
    }

    /// Exactness at `F_k` (`1 <= k < length`) in degree `d`: the image of
    /// `d_{k+1}` fills the kernel of `d_k`.
    pub fn exact_at(&self, k: usize, d: i64) -> bool {
        let out = self.differential(k).slice(d);
        let inc = self.differential(k + 1).slice(d);
        let kernel_dim = out.matrix.cols() - out.matrix.rank();
        let mut e = Echelon::new(self.ring.field(), inc.rows.len());
        for j in 0..inc.matrix.cols() {
            e.insert(inc.matrix.column(j));
        }
        let contained = out.matrix.mul(&inc.matrix).is_zero();
        contained && e.rank() == kernel_dim
    }

    /// Degrees over which exactness is meaningful for stage `k`.
    pub fn exactness_window(&self, k: usize) -> Option<(i64, i64)> {
        let shifts = self.differential(k).all_shifts().chain(self.differential(k + 1).all_shifts()).collect::<Vec<_>>();
        let lo = *shifts.iter().min()?;
        let hi = *shifts.iter().max()? + 2 * self.ring.stable_width();
        Some((lo, hi))
    }
}

impl FPGradedModule {
    /// Minimal graded free resolution through `F_n`.
    pub fn resolve(&self, n: usize) -> Resolution {
        let m = self.minimalize();
        let ring = m.ring().clone();
        let mut modules = vec![m.generators().clone()];
        let mut differentials = Vec::new();
        if n >= 1 {
            modules.push(m.relations().clone());
            differentials.push(m.presentation().clone());
        }
        for _ in 1..n {
            let next = differentials.last().unwrap().kernel();
            modules.push(next.source().clone());
            differentials.push(next);
        }
        Resolution { ring, modules, differentials }
    }

    /// `Ω^n M`, presented by `d_{n+1}: F_{n+1} → F_n`.
    pub fn syzygy(&self, n: usize) -> FPGradedModule {
        assert!(n >= 1, "syzygies are indexed from 1");
        self.resolve(n + 1).syzygy_module(n)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::PrimeField;
    use crate::fracideal::MonomialFractionalIdeal;
    use crate::graded::present;
    use crate::semigroup::NumericalSemigroup;

    fn ring(g: &[i64]) -> GradedRing {
        GradedRing::new(Arc::new(NumericalSemigroup::from_generators(g).unwrap()), PrimeField::default())
    }

    #[test]
    fn ring_resolves_trivially() {
        let r = ring(&[2, 3]);
        let res = FPGradedModule::free(r, GradedFreeModule::new(vec![0])).resolve(3);
        assert_eq!(res.betti(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn cusp_maximal_ideal_is_periodic() {
        let r = ring(&[2, 3]);
        let m = present(&r, &MonomialFractionalIdeal::new(r.semigroup().clone(), &[2, 3]).unwrap());
        let res = m.resolve(4);
        assert_eq!(res.betti(), vec![2, 2, 2, 2, 2]);
        assert!(res.is_minimal());
        assert!(res.is_complex());
        for k in 1..4 {
            let (lo, hi) = res.exactness_window(k).unwrap();
            assert!((lo..=hi).all(|d| res.exact_at(k, d)), "stage {k}");
        }
    }

    #[test]
    fn syzygy_examples() {
        let r = ring(&[2, 3]);
        let free = FPGradedModule::free(r.clone(), GradedFreeModule::new(vec![0, 1]));
        assert!(free.syzygy(1).is_zero());
        let m = present(&r, &MonomialFractionalIdeal::new(r.semigroup().clone(), &[2, 3]).unwrap());
        assert_eq!(m.syzygy(1).generators().shifts(), &[5, 6]);
        let k = FPGradedModule::residue_field(r.clone());
        let om = k.syzygy(1);
        assert_eq!(om.generators().shifts(), &[2, 3]);
        assert_eq!(om.hilbert_window(0, 12), m.hilbert_window(0, 12));
    }

    #[test]
    fn regular_ring_resolutions_are_short() {
        let r = ring(&[1]);
        let k = FPGradedModule::residue_field(r.clone());
        assert_eq!(k.resolve(3).betti(), vec![1, 1, 0, 0]);
    }
}
