//! Monomial fractional ideals of `k[t^S]`.
//!
//! A monomial fractional ideal is a union of translates `e + S` inside the
//! integers, i.e. the module generated by `t^e` for finitely many exponents
//! `e`. Colon, product and trace are exact combinatorics on exponent sets,
//! which makes this module the reference against which the homological
//! computations are checked.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::semigroup::{join, NumericalSemigroup};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialFractionalIdeal {
    semigroup: Arc<NumericalSemigroup>,
    generators: Vec<i64>,
}

impl fmt::Debug for MonomialFractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.semigroup)
    }
}

impl fmt::Display for MonomialFractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gen{{{}}}", join(&self.generators))
    }
}

impl Serialize for MonomialFractionalIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MonomialFractionalIdeal", 2)?;
        st.serialize_field("semigroup", self.semigroup.generators())?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

/// Removes every exponent that lies in `e + S` for another listed exponent `e`.
fn minimalize(s: &NumericalSemigroup, gens: &[i64]) -> Vec<i64> {
    let mut g = gens.to_vec();
    g.sort_unstable();
    g.dedup();
    g.iter()
        .copied()
        .filter(|&b| !g.iter().any(|&a| a < b && s.contains(b - a)))
        .collect()
}

impl MonomialFractionalIdeal {
    pub fn new(semigroup: Arc<NumericalSemigroup>, generators: &[i64]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidIdeal("the zero module is not a regular fractional ideal".into()));
        }
        let generators = minimalize(&semigroup, generators);
        Ok(MonomialFractionalIdeal { semigroup, generators })
    }

    /// The ring itself, `gen{0}`.
    pub fn unit(semigroup: Arc<NumericalSemigroup>) -> Self {
        MonomialFractionalIdeal { semigroup, generators: vec![0] }
    }

    pub fn principal(semigroup: Arc<NumericalSemigroup>, e: i64) -> Self {
        MonomialFractionalIdeal { semigroup, generators: vec![e] }
    }

    /// The exponent set `{z : z >= lo, pred(z)} ∪ {z : z >= top}`, which must
    /// be closed under adding semigroup elements.
    pub fn from_exponent_set(
        semigroup: Arc<NumericalSemigroup>,
        lo: i64,
        top: i64,
        pred: impl Fn(i64) -> bool,
    ) -> Result<Self> {
        let member = |z: i64| z >= top || (z >= lo && pred(z));
        let m = semigroup.multiplicity();
        let hi = top.max(lo) + m;
        let gens: Vec<i64> = (lo..hi)
            .filter(|&z| member(z))
            .filter(|&z| !(lo..z).any(|w| semigroup.contains(z - w) && member(w)))
            .collect();
        Self::new(semigroup, &gens)
    }

    pub fn semigroup(&self) -> &Arc<NumericalSemigroup> {
        &self.semigroup
    }

    /// Minimal generator exponents in increasing order.
    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn min_exponent(&self) -> i64 {
        self.generators[0]
    }

    pub fn contains(&self, z: i64) -> bool {
        self.generators.iter().any(|&e| self.semigroup.contains(z - e))
    }

    /// Smallest `T` with every `z >= T` in the ideal.
    pub fn threshold(&self) -> i64 {
        let lo = self.min_exponent();
        let c = self.semigroup.conductor_threshold();
        (lo..lo + c).rev().find(|&z| !self.contains(z)).map_or(lo, |z| z + 1)
    }

    /// Whether every exponent is a semigroup element, i.e. this is an ideal of `R`.
    pub fn is_integral(&self) -> bool {
        self.generators.iter().all(|&e| self.semigroup.contains(e))
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.semigroup, other.semigroup, "fractional ideals over different semigroups");
    }

    /// `(self : m) = {z : z + m ⊆ self}`.
    pub fn colon(&self, m: &Self) -> Self {
        self.check_same(m);
        let shift = m.min_exponent();
        let lo = self.min_exponent() - shift;
        let top = self.threshold() - shift;
        Self::from_exponent_set(self.semigroup.clone(), lo, top, |z| {
            m.generators.iter().all(|&e| self.contains(z + e))
        })
        .expect("a colon of nonzero fractional ideals is nonzero")
    }

    pub fn product(&self, other: &Self) -> Self {
        self.check_same(other);
        let sums: Vec<i64> =
            self.generators.iter().flat_map(|a| other.generators.iter().map(move |b| a + b)).collect();
        Self::new(self.semigroup.clone(), &sums).unwrap()
    }

    /// `Tr(M) = (R : M) M`.
    pub fn trace_ideal(&self) -> Self {
        let r = Self::unit(self.semigroup.clone());
        r.colon(self).product(self)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_same(other);
        let lo = self.min_exponent().max(other.min_exponent());
        let top = self.threshold().max(other.threshold());
        Self::from_exponent_set(self.semigroup.clone(), lo, top, |z| self.contains(z) && other.contains(z))
            .unwrap()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same(other);
        self.generators.iter().all(|&e| other.contains(e))
    }

    /// The integral closure `k[t]`, exponent set all naturals.
    pub fn normalization_ideal(semigroup: Arc<NumericalSemigroup>) -> Self {
        Self::from_exponent_set(semigroup, 0, 0, |_| true).unwrap()
    }

    /// `C(R) = (R : R̄)`.
    pub fn conductor(semigroup: Arc<NumericalSemigroup>) -> Self {
        let rbar = Self::normalization_ideal(semigroup.clone());
        Self::unit(semigroup).colon(&rbar)
    }

    /// The graded maximal ideal, generated by the semigroup generators.
    pub fn maximal_ideal(semigroup: Arc<NumericalSemigroup>) -> Self {
        let gens = semigroup.generators().to_vec();
        Self::new(semigroup, &gens).unwrap()
    }

    pub fn shift(&self, a: i64) -> Self {
        MonomialFractionalIdeal {
            semigroup: self.semigroup.clone(),
            generators: self.generators.iter().map(|e| e + a).collect(),
        }
    }

    /// Shifts so the smallest generator is 0.
    pub fn normalize(&self) -> Self {
        self.shift(-self.min_exponent())
    }

    /// All monomial fractional ideals up to shift, as antichains in
    /// `{0} ∪ gaps` containing 0, ordered by size and then lexicographically.
    pub fn enumerate_ideals(semigroup: Arc<NumericalSemigroup>) -> Vec<Self> {
        let gaps = semigroup.gaps().to_vec();
        let mut out: Vec<Vec<i64>> = Vec::new();
        for mask in 0u64..(1u64 << gaps.len()) {
            let mut g = vec![0];
            g.extend(gaps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            let antichain =
                g.iter().all(|&a| g.iter().all(|&b| a >= b || !semigroup.contains(b - a)));
            if antichain {
                out.push(g);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out.into_iter()
            .map(|generators| MonomialFractionalIdeal { semigroup: semigroup.clone(), generators })
            .collect()
    }

    /// Minimality check used by tests: no generator lies in another's translate.
    pub fn is_minimal(&self) -> bool {
        self.generators == minimalize(&self.semigroup, &self.generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(g: &[i64]) -> Arc<NumericalSemigroup> {
        Arc::new(NumericalSemigroup::from_generators(g).unwrap())
    }
    fn id(s: &Arc<NumericalSemigroup>, g: &[i64]) -> MonomialFractionalIdeal {
        MonomialFractionalIdeal::new(s.clone(), g).unwrap()
    }

    #[test]
    fn membership() {
        let s = sg(&[2, 3]);
        assert!(!id(&s, &[0]).contains(1));
        assert!(id(&s, &[0]).contains(0));
        assert!(id(&s, &[2, 3]).contains(7));
    }

    #[test]
    fn colon_examples() {
        for g in [&[1][..], &[2, 3], &[3, 4, 5], &[4, 6, 7]] {
            let s = sg(g);
            let r = MonomialFractionalIdeal::unit(s.clone());
            assert_eq!(r.colon(&r), r);
        }
        let s = sg(&[2, 3]);
        let r = MonomialFractionalIdeal::unit(s.clone());
        assert_eq!(r.colon(&id(&s, &[2, 3])).generators(), &[0, 1]);
        assert_eq!(r.colon(&id(&s, &[0, 1])).generators(), &[2, 3]);
    }

    #[test]
    fn product_examples() {
        let s = sg(&[2, 3]);
        let m = id(&s, &[2, 3]);
        assert_eq!(MonomialFractionalIdeal::unit(s.clone()).product(&m), m);
        assert_eq!(id(&s, &[0, 1]).product(&m).generators(), &[2, 3]);
        assert_eq!(id(&s, &[0, 1]).product(&id(&s, &[0, 1])).generators(), &[0, 1]);
    }

    #[test]
    fn trace_examples() {
        let s = sg(&[2, 3]);
        assert_eq!(id(&s, &[5]).trace_ideal().generators(), &[0]);
        assert_eq!(id(&s, &[2, 3]).trace_ideal().generators(), &[2, 3]);
        let s = sg(&[3, 4, 5]);
        assert_eq!(id(&s, &[0, 1, 2]).trace_ideal().generators(), &[3, 4, 5]);
    }

    #[test]
    fn normalization_and_conductor() {
        let n = sg(&[1]);
        assert_eq!(MonomialFractionalIdeal::normalization_ideal(n.clone()).generators(), &[0]);
        assert_eq!(MonomialFractionalIdeal::conductor(n).generators(), &[0]);
        let s = sg(&[2, 3]);
        assert_eq!(MonomialFractionalIdeal::normalization_ideal(s.clone()).generators(), &[0, 1]);
        assert_eq!(MonomialFractionalIdeal::conductor(s).generators(), &[2, 3]);
        let s = sg(&[3, 4, 5]);
        assert_eq!(MonomialFractionalIdeal::normalization_ideal(s.clone()).generators(), &[0, 1, 2]);
        assert_eq!(MonomialFractionalIdeal::conductor(s).generators(), &[3, 4, 5]);
    }

    #[test]
    fn normalize_examples() {
        let s = sg(&[2, 3]);
        assert_eq!(id(&s, &[2, 3]).normalize().generators(), &[0, 1]);
        assert_eq!(id(&s, &[0]).normalize().generators(), &[0]);
        assert_eq!(id(&s, &[-1, 1]).normalize().generators(), &[0]);
        assert_eq!(id(&s, &[-3, -2]).normalize().generators(), &[0, 1]);
    }

    #[test]
    fn enumerate_examples() {
        let gens = |g: &[i64]| -> Vec<Vec<i64>> {
            MonomialFractionalIdeal::enumerate_ideals(sg(g)).iter().map(|m| m.generators().to_vec()).collect()
        };
        assert_eq!(gens(&[1]), vec![vec![0]]);
        assert_eq!(gens(&[2, 3]), vec![vec![0], vec![0, 1]]);
        assert_eq!(gens(&[3, 4, 5]), vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2]]);
        // 3 - 1 = 2 lies in <2,5>, so {0,1,3} is not an antichain
        assert_eq!(gens(&[2, 5]), vec![vec![0], vec![0, 1], vec![0, 3]]);
    }

    #[test]
    fn equality_is_on_minimal_generators() {
        let s = sg(&[2, 3]);
        assert_eq!(id(&s, &[2, 3]), id(&s, &[2, 3, 4]));
        assert_ne!(id(&s, &[0]), id(&s, &[0, 1]));
        assert_eq!(MonomialFractionalIdeal::conductor(s.clone()), id(&s, &[2, 3]).trace_ideal());
    }

    #[test]
    fn empty_ideal_rejected() {
        assert!(MonomialFractionalIdeal::new(sg(&[2, 3]), &[]).is_err());
    }

    #[test]
    fn intersection_and_threshold() {
        let s = sg(&[3, 4, 5]);
        let a = id(&s, &[0, 1]);
        let b = id(&s, &[2]);
        let i = a.intersection(&b);
        for z in -3..20 {
            assert_eq!(i.contains(z), a.contains(z) && b.contains(z), "z = {z}");
        }
        assert_eq!(id(&s, &[0]).threshold(), 3);
        assert_eq!(id(&s, &[0, 1, 2]).threshold(), 0);
    }
}
