//! Numerical semigroups: cofinite submonoids of the naturals.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    generators: Vec<i64>,
    frobenius: i64,
    gaps: Vec<i64>,
    // membership for 0 <= d < frobenius + 1
    table: Vec<bool>,
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", join(&self.generators))
    }
}

impl Serialize for NumericalSemigroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.generators.serialize(s)
    }
}

impl FromStr for NumericalSemigroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NumericalSemigroup::from_generators(&parse_int_list(s)?)
    }
}

pub(crate) fn join(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Parses the text form `a,b,c` (whitespace tolerated).
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty integer list".into()));
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl NumericalSemigroup {
    /// The semigroup of all naturals, i.e. the polynomial ring.
    pub fn naturals() -> Self {
        NumericalSemigroup { generators: vec![1], frobenius: -1, gaps: Vec::new(), table: Vec::new() }
    }

    /// Semigroup generated by `gens`; the generating set is minimalized.
    pub fn from_generators(gens: &[i64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidSemigroup("empty generator list".into()));
        }
        if let Some(&g) = gens.iter().find(|&&g| g <= 0) {
            return Err(Error::InvalidSemigroup(format!("generator {g} is not positive")));
        }
        let g = gens.iter().fold(0, |acc, &x| gcd(acc, x));
        if g != 1 {
            return Err(Error::InvalidSemigroup(format!("gcd of {} is {g}, not 1", join(gens))));
        }
        let max = *gens.iter().max().unwrap();
        let bound = (max * max).max(1) as usize;
        let mut member = vec![false; bound + 1];
        member[0] = true;
        for d in 1..=bound {
            member[d] = gens.iter().any(|&g| g as usize <= d && member[d - g as usize]);
        }
        let frobenius = (0..=bound).rev().find(|&d| !member[d]).map_or(-1, |d| d as i64);
        member.truncate((frobenius + 1) as usize);
        Ok(Self::from_table(member))
    }

    /// Semigroup with the given gap set; fails if the complement is not closed under addition.
    pub fn from_gaps(gaps: &[i64]) -> Result<Self> {
        let frobenius = gaps.iter().copied().max().unwrap_or(-1);
        if gaps.iter().any(|&g| g <= 0) {
            return Err(Error::InvalidSemigroup("gaps must be positive".into()));
        }
        let mut table = vec![true; (frobenius + 1) as usize];
        for &g in gaps {
            table[g as usize] = false;
        }
        for a in 1..table.len() {
            for b in a..table.len() - a {
                if table[a] && table[b] && !table[a + b] {
                    return Err(Error::InvalidSemigroup(format!(
                        "{a} + {b} = {} is listed as a gap",
                        a + b
                    )));
                }
            }
        }
        Ok(Self::from_table(table))
    }

    fn from_table(table: Vec<bool>) -> Self {
        let frobenius = table.len() as i64 - 1;
        let gaps: Vec<i64> = (1..table.len()).filter(|&d| !table[d]).map(|d| d as i64).collect();
        let mut s = NumericalSemigroup { generators: Vec::new(), frobenius, gaps, table };
        let m = (1..).find(|&d| s.contains(d)).unwrap();
        // minimal generators are at most frobenius + multiplicity
        let top = (frobenius + m).max(m);
        s.generators = (1..=top)
            .filter(|&d| s.contains(d) && !(1..d).any(|a| s.contains(a) && s.contains(d - a)))
            .collect();
        s
    }

    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    /// Smallest positive element.
    pub fn multiplicity(&self) -> i64 {
        self.generators[0]
    }

    /// Largest integer outside the semigroup, `-1` for the naturals.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    /// `frobenius + 1`: every degree from here on is a member.
    pub fn conductor_threshold(&self) -> i64 {
        self.frobenius + 1
    }

    pub fn gaps(&self) -> &[i64] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_naturals(&self) -> bool {
        self.frobenius < 0
    }

    #[inline]
    pub fn contains(&self, d: i64) -> bool {
        if d < 0 {
            false
        } else if d > self.frobenius {
            true
        } else {
            self.table[d as usize]
        }
    }

    /// Members in `[0, hi]`.
    pub fn elements_up_to(&self, hi: i64) -> Vec<i64> {
        (0..=hi).filter(|&d| self.contains(d)).collect()
    }

    /// For each residue class modulo `m`, the least member in that class.
    pub fn apery_set(&self, m: i64) -> Result<Vec<i64>> {
        if m <= 0 || !self.contains(m) {
            return Err(Error::NotAMember { value: m, set: self.to_string() });
        }
        let mut out = vec![-1i64; m as usize];
        let mut found = 0;
        let mut w = 0;
        while found < m {
            let r = (w % m) as usize;
            if out[r] < 0 && self.contains(w) {
                out[r] = w;
                found += 1;
            }
            w += 1;
        }
        Ok(out)
    }

    /// Symmetric semigroups are exactly those with Gorenstein semigroup ring.
    pub fn is_symmetric(&self) -> bool {
        2 * self.genus() as i64 == self.frobenius + 1
    }

    /// Minimal generators strictly above the Frobenius number; removing one
    /// of them yields a child in the semigroup tree.
    fn tree_children(&self) -> Vec<NumericalSemigroup> {
        self.generators
            .iter()
            .filter(|&&g| g > self.frobenius)
            .map(|&g| {
                let mut table: Vec<bool> = (0..=g).map(|d| self.contains(d)).collect();
                table[g as usize] = false;
                Self::from_table(table)
            })
            .collect()
    }

    /// Every numerical semigroup of genus at most `max_genus`, each exactly
    /// once, ordered by genus and then by position in the tree.
    pub fn enumerate_by_genus(max_genus: usize) -> Vec<NumericalSemigroup> {
        let mut out = Vec::new();
        let mut level = vec![Self::naturals()];
        for g in 0..=max_genus {
            if g < max_genus {
                let next: Vec<_> = level.iter().flat_map(|s| s.tree_children()).collect();
                out.append(&mut level);
                level = next;
            } else {
                out.append(&mut level);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(g: &[i64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn basic_invariants() {
        let n = sg(&[1]);
        assert_eq!(n, NumericalSemigroup::naturals());
        assert_eq!(n.frobenius(), -1);
        assert_eq!(n.conductor_threshold(), 0);
        assert!(n.gaps().is_empty());

        let s = sg(&[2, 3]);
        assert_eq!((s.frobenius(), s.gaps(), s.genus()), (1, &[1][..], 1));
        let s = sg(&[3, 4, 5]);
        assert_eq!((s.frobenius(), s.gaps(), s.genus()), (2, &[1, 2][..], 2));
    }

    #[test]
    fn generators_are_minimalized() {
        assert_eq!(sg(&[4, 2, 3, 6]).generators(), &[2, 3]);
        assert_eq!(sg(&[5, 3, 4, 7, 8]).generators(), &[3, 4, 5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(NumericalSemigroup::from_generators(&[2, 4]).is_err());
        assert!(NumericalSemigroup::from_generators(&[]).is_err());
        assert!(NumericalSemigroup::from_generators(&[0, 1]).is_err());
        assert!(NumericalSemigroup::from_gaps(&[2]).is_err());
        assert!("2,x".parse::<NumericalSemigroup>().is_err());
    }

    #[test]
    fn membership() {
        assert!(!sg(&[2, 3]).contains(1));
        assert!(sg(&[7, 9]).contains(0));
        assert!(sg(&[3, 4, 5]).contains(7));
        assert!(!sg(&[3, 4, 5]).contains(-3));
    }

    #[test]
    fn apery_sets() {
        assert_eq!(sg(&[2, 3]).apery_set(2).unwrap(), vec![0, 3]);
        assert_eq!(sg(&[1]).apery_set(1).unwrap(), vec![0]);
        assert_eq!(sg(&[3, 4, 5]).apery_set(3).unwrap(), vec![0, 4, 5]);
        assert!(sg(&[3, 4, 5]).apery_set(2).is_err());
    }

    #[test]
    fn symmetry() {
        assert!(sg(&[2, 3]).is_symmetric());
        assert!(!sg(&[3, 4, 5]).is_symmetric());
        let s = sg(&[3, 4]);
        assert_eq!(s.gaps(), &[1, 2, 5]);
        assert!(s.is_symmetric());
    }

    #[test]
    fn gap_set_construction_agrees() {
        assert_eq!(NumericalSemigroup::from_gaps(&[1, 2, 5]).unwrap(), sg(&[3, 4]));
        assert_eq!(NumericalSemigroup::from_gaps(&[]).unwrap(), sg(&[1]));
    }

    #[test]
    fn enumeration_small_genus() {
        let e0 = NumericalSemigroup::enumerate_by_genus(0);
        assert_eq!(e0, vec![sg(&[1])]);
        let e2 = NumericalSemigroup::enumerate_by_genus(2);
        assert_eq!(e2, vec![sg(&[1]), sg(&[2, 3]), sg(&[3, 4, 5]), sg(&[2, 5])]);
        let e4 = NumericalSemigroup::enumerate_by_genus(4);
        let counts: Vec<usize> = (0..=4).map(|g| e4.iter().filter(|s| s.genus() == g).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 7]);
    }
}
