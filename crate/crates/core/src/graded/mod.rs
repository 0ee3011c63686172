//! Graded free modules over `R = k[t^S]` and degree-preserving maps between them.
//!
//! Every graded piece `R_d` is at most one-dimensional (spanned by `t^d` when
//! `d ∈ S`), so a graded map `⊕ R(-a_j) → ⊕ R(-b_i)` is completely described by
//! one scalar per entry: entry `(i, j)` stands for `c_ij · t^(a_j - b_i)`.
//! Exponents are never stored; they are forced by the shifts.

mod module;
mod resolution;
mod split;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Echelon, FieldElement, PrimeField, ScalarMatrix};
use crate::semigroup::NumericalSemigroup;

pub use module::{present, ModuleSlice, FPGradedModule, SliceCache};
pub use resolution::Resolution;

/// The coefficient ring `k[t^S]` with `k = F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    semigroup: Arc<NumericalSemigroup>,
    field: PrimeField,
}

impl GradedRing {
    pub fn new(semigroup: Arc<NumericalSemigroup>, field: PrimeField) -> Self {
        GradedRing { semigroup, field }
    }

    pub fn semigroup(&self) -> &Arc<NumericalSemigroup> {
        &self.semigroup
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `conductor_threshold`, the width past which all slices are constant.
    pub fn stable_width(&self) -> i64 {
        self.semigroup.conductor_threshold()
    }
}

/// `⊕ R(-a_i)`; generator `i` lives in degree `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GradedFreeModule {
    shifts: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(shifts: Vec<i64>) -> Self {
        GradedFreeModule { shifts }
    }

    pub fn zero() -> Self {
        GradedFreeModule { shifts: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Indices `i` with `d - a_i ∈ S`, i.e. the basis of the degree-`d` slice.
    pub fn active(&self, s: &NumericalSemigroup, d: i64) -> Vec<usize> {
        (0..self.shifts.len()).filter(|&i| s.contains(d - self.shifts[i])).collect()
    }

    /// `Hom(F, R)`: shifts negated.
    pub fn dual(&self) -> Self {
        GradedFreeModule { shifts: self.shifts.iter().map(|a| -a).collect() }
    }

    /// Adds `a` to every generator degree.
    pub fn shifted(&self, a: i64) -> Self {
        GradedFreeModule { shifts: self.shifts.iter().map(|x| x + a).collect() }
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().min()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.shifts.iter().copied().max()
    }
}

/// Restriction of a term matrix to degree `d`.
#[derive(Debug, Clone)]
pub struct SliceMap {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: ScalarMatrix,
}

/// A degree-preserving map of graded free modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMatrix {
    ring: GradedRing,
    source: GradedFreeModule,
    target: GradedFreeModule,
    coeffs: ScalarMatrix,
}

/// JSON form of a term matrix, coefficients as symmetric residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermMatrixJson {
    pub source_shifts: Vec<i64>,
    pub target_shifts: Vec<i64>,
    pub coeffs: Vec<Vec<i64>>,
}

impl TermMatrix {
    pub fn new(
        ring: GradedRing,
        source: GradedFreeModule,
        target: GradedFreeModule,
        coeffs: ScalarMatrix,
    ) -> Result<Self> {
        if coeffs.rows() != target.rank() || coeffs.cols() != source.rank() {
            return Err(Error::ShiftMismatch(format!(
                "{}x{} coefficients for a map of rank {} to rank {}",
                coeffs.rows(),
                coeffs.cols(),
                source.rank(),
                target.rank()
            )));
        }
        let m = TermMatrix { ring, source, target, coeffs };
        for i in 0..m.target.rank() {
            for j in 0..m.source.rank() {
                if m.coeffs.get(i, j) != 0 && !m.ring.semigroup.contains(m.exponent(i, j)) {
                    return Err(Error::SupportViolation { row: i, col: j, exponent: m.exponent(i, j) });
                }
            }
        }
        Ok(m)
    }

    pub fn identity(ring: GradedRing, f: GradedFreeModule) -> Self {
        let coeffs = ScalarMatrix::identity(ring.field, f.rank());
        TermMatrix { ring, source: f.clone(), target: f, coeffs }
    }

    pub fn zero(ring: GradedRing, source: GradedFreeModule, target: GradedFreeModule) -> Self {
        let coeffs = ScalarMatrix::zeros(ring.field, target.rank(), source.rank());
        TermMatrix { ring, source, target, coeffs }
    }

    pub fn from_json(ring: GradedRing, json: &TermMatrixJson) -> Result<Self> {
        let source = GradedFreeModule::new(json.source_shifts.clone());
        let target = GradedFreeModule::new(json.target_shifts.clone());
        if json.coeffs.len() != target.rank() || json.coeffs.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Parse("coefficient matrix shape does not match shifts".into()));
        }
        let coeffs = ScalarMatrix::from_rows(ring.field, source.rank(), &json.coeffs);
        Self::new(ring, source, target, coeffs)
    }

    pub fn to_json(&self) -> TermMatrixJson {
        let f = self.ring.field;
        TermMatrixJson {
            source_shifts: self.source.shifts.clone(),
            target_shifts: self.target.shifts.clone(),
            coeffs: (0..self.coeffs.rows())
                .map(|r| self.coeffs.row(r).iter().map(|&x| f.to_signed(x)).collect())
                .collect(),
        }
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }
    pub fn source(&self) -> &GradedFreeModule {
        &self.source
    }
    pub fn target(&self) -> &GradedFreeModule {
        &self.target
    }
    pub fn coeffs(&self) -> &ScalarMatrix {
        &self.coeffs
    }

    /// The exponent of `t` carried by entry `(i, j)`.
    #[inline]
    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        self.source.shifts[j] - self.target.shifts[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Whether some nonzero entry is a unit, i.e. has exponent 0.
    pub fn has_unit_entries(&self) -> bool {
        self.unit_entry().is_some()
    }

    pub(crate) fn unit_entry(&self) -> Option<(usize, usize)> {
        for j in 0..self.source.rank() {
            for i in 0..self.target.rank() {
                if self.coeffs.get(i, j) != 0 && self.exponent(i, j) == 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Every shift of source and target.
    pub fn all_shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.source.shifts.iter().chain(&self.target.shifts).copied()
    }

    pub fn slice(&self, d: i64) -> SliceMap {
        let s = &self.ring.semigroup;
        let rows = self.target.active(s, d);
        let cols = self.source.active(s, d);
        let matrix = self.coeffs.submatrix(&rows, &cols);
        SliceMap { rows, cols, matrix }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &TermMatrix) -> Result<TermMatrix> {
        if g.target != self.source {
            return Err(Error::ShiftMismatch(format!(
                "cannot compose: target {:?} differs from source {:?}",
                g.target.shifts, self.source.shifts
            )));
        }
        TermMatrix::new(self.ring.clone(), g.source.clone(), self.target.clone(), self.coeffs.mul(&g.coeffs))
    }

    /// `Hom(-, R)` of this map: the transposed matrix between dual modules.
    pub fn dual(&self) -> TermMatrix {
        TermMatrix {
            ring: self.ring.clone(),
            source: self.target.dual(),
            target: self.source.dual(),
            coeffs: self.coeffs.transpose(),
        }
    }

    /// Keeps only the listed columns.
    pub fn select_columns(&self, cols: &[usize]) -> TermMatrix {
        let rows: Vec<usize> = (0..self.target.rank()).collect();
        TermMatrix {
            ring: self.ring.clone(),
            source: GradedFreeModule::new(cols.iter().map(|&j| self.source.shifts[j]).collect()),
            target: self.target.clone(),
            coeffs: self.coeffs.submatrix(&rows, cols),
        }
    }

    /// Highest degree scanned by [`TermMatrix::kernel`].
    pub fn kernel_scan_bound(&self) -> Option<i64> {
        let max = self.all_shifts().max()?;
        Some(max + 2 * self.ring.stable_width())
    }

    /// Minimal homogeneous generators of `ker(self)`, as the columns of a map
    /// `K → source`.
    ///
    /// Past `maxshift + c` all slices are constant and multiplication by
    /// `t^c` is the identity on coordinates, so no minimal generator lives at
    /// or above `maxshift + 2c`.
    pub fn kernel(&self) -> TermMatrix {
        match self.kernel_scan_bound() {
            Some(hi) => self.kernel_up_to(hi),
            None => TermMatrix::zero(self.ring.clone(), GradedFreeModule::zero(), self.source.clone()),
        }
    }

    /// Kernel generators found by scanning degrees up to `hi`.
    pub fn kernel_up_to(&self, hi: i64) -> TermMatrix {
        let Some(lo) = self.source.min_shift() else {
            return TermMatrix::zero(self.ring.clone(), GradedFreeModule::zero(), self.source.clone());
        };
        let gens = graded_kernel(&self.ring, &self.source, lo, hi, |d, cols| {
            let rows = self.target.active(&self.ring.semigroup, d);
            self.coeffs.submatrix(&rows, cols)
        });
        generators_to_matrix(&self.ring, &self.source, gens)
    }

    /// Re-scans to `maxshift + 3c` and reports whether the extra degrees
    /// contributed no new minimal generators.
    pub fn kernel_bound_certified(&self) -> bool {
        let Some(max) = self.all_shifts().max() else {
            return true;
        };
        let c = self.ring.stable_width();
        let extended = self.kernel_up_to(max + 3 * c.max(1));
        extended == self.kernel()
    }

    /// Whether the homogeneous vector `v` (full coordinates over the target,
    /// living in degree `d`) lies in the submodule generated by the columns.
    pub fn image_contains(&self, d: i64, v: &[FieldElement]) -> bool {
        let s = &self.ring.semigroup;
        let rows = self.target.active(s, d);
        if (0..self.target.rank()).any(|i| v[i] != 0 && !rows.contains(&i)) {
            return false;
        }
        let mut e = Echelon::new(self.ring.field, rows.len());
        for j in 0..self.source.rank() {
            if s.contains(d - self.source.shifts[j]) {
                e.insert(rows.iter().map(|&i| self.coeffs.get(i, j)).collect());
            }
        }
        e.contains(&rows.iter().map(|&i| v[i]).collect::<Vec<_>>())
    }

    /// Whether the two maps have the same image submodule.
    pub fn same_image(&self, other: &TermMatrix) -> bool {
        self.target == other.target
            && (0..other.source.rank())
                .all(|j| self.image_contains(other.source.shifts[j], &other.coeffs.column(j)))
            && (0..self.source.rank())
                .all(|j| other.image_contains(self.source.shifts[j], &self.coeffs.column(j)))
    }

    /// Indices of a minimal generating subset of the columns, chosen greedily
    /// in order of degree and then column index.
    pub fn minimal_columns(&self) -> Vec<usize> {
        let s = &self.ring.semigroup;
        let mut order: Vec<usize> = (0..self.source.rank()).collect();
        order.sort_by_key(|&j| (self.source.shifts[j], j));
        let mut kept: Vec<usize> = Vec::new();
        for &j in &order {
            let d = self.source.shifts[j];
            let rows = self.target.active(s, d);
            let mut e = Echelon::new(self.ring.field, rows.len());
            for &k in &kept {
                if s.contains(d - self.source.shifts[k]) {
                    e.insert(rows.iter().map(|&i| self.coeffs.get(i, k)).collect());
                }
            }
            let v: Vec<_> = rows.iter().map(|&i| self.coeffs.get(i, j)).collect();
            if !e.contains(&v) {
                kept.push(j);
            }
        }
        kept.sort_unstable();
        kept
    }
}

/// Degree-by-degree minimal generators of the kernel of a graded map out of
/// `source`. `slice(d, cols)` returns the degree-`d` matrix restricted to the
/// active source indices `cols`. Returns `(degree, full coordinate vector)`.
pub(crate) fn graded_kernel(
    ring: &GradedRing,
    source: &GradedFreeModule,
    lo: i64,
    hi: i64,
    mut slice: impl FnMut(i64, &[usize]) -> ScalarMatrix,
) -> Vec<(i64, Vec<FieldElement>)> {
    let s = &ring.semigroup;
    let n = source.rank();
    let mut gens: Vec<(i64, Vec<FieldElement>)> = Vec::new();
    for d in lo..=hi {
        let cols = source.active(s, d);
        if cols.is_empty() {
            continue;
        }
        let kb = slice(d, &cols).kernel_basis();
        if kb.cols() == 0 {
            continue;
        }
        let mut span = Echelon::new(ring.field, cols.len());
        for (deg, v) in &gens {
            if s.contains(d - deg) {
                span.insert(cols.iter().map(|&i| v[i]).collect());
            }
        }
        for k in 0..kb.cols() {
            if span.is_full() {
                break;
            }
            let local = kb.column(k);
            if span.insert(local.clone()) {
                let mut full = vec![0; n];
                for (pos, &i) in cols.iter().enumerate() {
                    full[i] = local[pos];
                }
                gens.push((d, full));
            }
        }
    }
    gens
}

pub(crate) fn generators_to_matrix(
    ring: &GradedRing,
    target: &GradedFreeModule,
    gens: Vec<(i64, Vec<FieldElement>)>,
) -> TermMatrix {
    let source = GradedFreeModule::new(gens.iter().map(|(d, _)| *d).collect());
    let cols: Vec<Vec<FieldElement>> = gens.into_iter().map(|(_, v)| v).collect();
    let coeffs = ScalarMatrix::from_columns(ring.field, target.rank(), &cols);
    TermMatrix { ring: ring.clone(), source, target: target.clone(), coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(g: &[i64]) -> GradedRing {
        GradedRing::new(Arc::new(NumericalSemigroup::from_generators(g).unwrap()), PrimeField::default())
    }

    #[test]
    fn free_slices() {
        let r = ring(&[2, 3]);
        let f = GradedFreeModule::new(vec![2, 3]);
        assert_eq!(f.active(r.semigroup(), 5), vec![0, 1]);
        assert_eq!(f.active(r.semigroup(), 3), vec![1]);
    }

    #[test]
    fn support_is_enforced() {
        let r = ring(&[2, 3]);
        let bad = TermMatrix::new(
            r.clone(),
            GradedFreeModule::new(vec![3]),
            GradedFreeModule::new(vec![2]),
            ScalarMatrix::identity(r.field(), 1),
        );
        assert!(matches!(bad, Err(Error::SupportViolation { exponent: 1, .. })));
    }

    #[test]
    fn compose_examples() {
        let r = ring(&[2, 3]);
        let f1 = ScalarMatrix::identity(r.field(), 1);
        let f = TermMatrix::new(r.clone(), GradedFreeModule::new(vec![5]), GradedFreeModule::new(vec![2]), f1.clone())
            .unwrap();
        let g = TermMatrix::new(r.clone(), GradedFreeModule::new(vec![7]), GradedFreeModule::new(vec![5]), f1)
            .unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.coeffs().get(0, 0), 1);
        assert_eq!(fg.exponent(0, 0), 5);
        let id = TermMatrix::identity(r.clone(), g.target().clone());
        assert_eq!(id.compose(&g).unwrap(), g);
        let z = TermMatrix::zero(r.clone(), GradedFreeModule::new(vec![9]), g.source().clone());
        assert!(g.compose(&z).unwrap().is_zero());
        assert!(g.compose(&f).is_err());
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let r = ring(&[2, 3]);
        let f = GradedFreeModule::new(vec![0, 4]);
        assert_eq!(TermMatrix::identity(r.clone(), f.clone()).kernel().source().rank(), 0);
        let z = TermMatrix::zero(r.clone(), f.clone(), GradedFreeModule::zero());
        let k = z.kernel();
        assert_eq!(k.source(), &f);
        assert_eq!(k.coeffs(), &ScalarMatrix::identity(r.field(), 2));
    }

    #[test]
    fn kernel_of_cusp_maximal_ideal_presentation() {
        // F0 = R(-2) ⊕ R(-3) → R sending both generators to t^2, t^3
        let r = ring(&[2, 3]);
        let m = TermMatrix::new(
            r.clone(),
            GradedFreeModule::new(vec![2, 3]),
            GradedFreeModule::new(vec![0]),
            ScalarMatrix::from_rows(r.field(), 2, &[vec![1, 1]]),
        )
        .unwrap();
        let k = m.kernel();
        assert_eq!(k.source().shifts(), &[5, 6]);
        assert!(m.compose(&k).unwrap().is_zero());
        assert!(m.kernel_bound_certified());
    }
}
