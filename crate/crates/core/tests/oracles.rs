//! Brute-force oracles for the combinatorial layer and cross-checks between
//! independent homological routes.

use std::collections::BTreeSet;
use std::sync::Arc;

use semitrace::homology::{ext, stable_hom_between, stable_hom_dim, tor, HomologyTable};
use semitrace::theorems::SemigroupCorpus;
use semitrace::Error;
use semitrace::{present, FPGradedModule, GradedRing, MonomialFractionalIdeal, NumericalSemigroup, PrimeField};

const RANGE: i64 = 48;

fn ring(s: &NumericalSemigroup) -> GradedRing {
    GradedRing::new(Arc::new(s.clone()), PrimeField::default())
}

/// Every semigroup of genus `g`, found by scanning gap sets inside `[1, 2g-1]`.
fn semigroups_by_gap_search(g: usize) -> BTreeSet<Vec<i64>> {
    if g == 0 {
        return [vec![1]].into();
    }
    let top = 2 * g as i64 - 1;
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << top) {
        if mask.count_ones() as usize != g {
            continue;
        }
        let gap = |z: i64| z >= 1 && z <= top && mask >> (z - 1) & 1 == 1;
        let member = |z: i64| z >= 0 && !gap(z);
        let closed = (1..=top).all(|a| (1..=top).all(|b| !(member(a) && member(b)) || member(a + b)));
        if closed {
            let gaps: Vec<i64> = (1..=top).filter(|&z| gap(z)).collect();
            out.insert(NumericalSemigroup::from_gaps(&gaps).unwrap().generators().to_vec());
        }
    }
    out
}

#[test]
fn tree_enumeration_matches_gap_search() {
    let all = NumericalSemigroup::enumerate_by_genus(6);
    let mut counts = vec![0; 7];
    for s in &all {
        counts[s.genus()] += 1;
    }
    assert_eq!(counts, vec![1, 1, 2, 4, 7, 12, 23]);
    for g in 0..=6 {
        let tree: BTreeSet<Vec<i64>> =
            all.iter().filter(|s| s.genus() == g).map(|s| s.generators().to_vec()).collect();
        assert_eq!(tree, semigroups_by_gap_search(g), "genus {g}");
    }
}

#[test]
fn frobenius_of_two_generator_semigroups() {
    for a in 2..=12i64 {
        for b in a + 1..=25 {
            if num_gcd(a, b) != 1 {
                continue;
            }
            let s = NumericalSemigroup::from_generators(&[a, b]).unwrap();
            let scan = (0..a * b).rev().find(|&z| !(0..=z / a).any(|i| (z - i * a) % b == 0)).unwrap();
            assert_eq!(s.frobenius(), scan);
            assert_eq!(s.frobenius(), a * b - a - b);
            assert_eq!(s.genus() as i64, (a - 1) * (b - 1) / 2);
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

#[test]
fn apery_sets_by_residue_scan() {
    for s in NumericalSemigroup::enumerate_by_genus(5) {
        let m = s.multiplicity();
        let ap = s.apery_set(m).unwrap();
        let mut scan: Vec<i64> = (0..m).map(|r| (0..).map(|k| r + k * m).find(|&z| s.contains(z)).unwrap()).collect();
        scan.sort();
        let mut got = ap.clone();
        got.sort();
        assert_eq!(got, scan, "{s}");
    }
}

/// Membership in `⋃ (e_i + S)` straight from the definition.
fn in_ideal(s: &NumericalSemigroup, gens: &[i64], z: i64) -> bool {
    gens.iter().any(|&e| s.contains(z - e))
}

#[test]
fn colon_product_trace_against_sets() {
    for s in NumericalSemigroup::enumerate_by_genus(4) {
        let sa = Arc::new(s.clone());
        let ideals = MonomialFractionalIdeal::enumerate_ideals(sa.clone());
        for m in &ideals {
            for n in &ideals {
                let colon = n.colon(m);
                for x in -RANGE..RANGE {
                    let brute = m.generators().iter().all(|&e| in_ideal(&s, n.generators(), x + e));
                    assert_eq!(colon.contains(x), brute, "({n} : {m}) at {x} over {s}");
                }
                let prod = m.product(n);
                for z in -RANGE..RANGE {
                    let brute =
                        m.generators().iter().any(|&a| n.generators().iter().any(|&b| s.contains(z - a - b)));
                    assert_eq!(prod.contains(z), brute);
                }
            }
            let dual: Vec<i64> =
                (-RANGE..RANGE).filter(|&q| m.generators().iter().all(|&e| s.contains(q + e))).collect();
            let trace = m.trace_ideal();
            for z in -RANGE..RANGE {
                let brute = dual.iter().any(|&q| in_ideal(&s, m.generators(), z - q));
                assert_eq!(trace.contains(z), brute, "Tr({m}) at {z} over {s}");
            }
        }
    }
}

#[test]
fn conductor_is_all_exponents_past_frobenius() {
    for s in NumericalSemigroup::enumerate_by_genus(6) {
        let c = MonomialFractionalIdeal::conductor(Arc::new(s.clone()));
        for z in -5..RANGE {
            assert_eq!(c.contains(z), z > s.frobenius(), "{s}");
        }
    }
}

#[test]
fn antichain_counts_by_brute_force() {
    for s in NumericalSemigroup::enumerate_by_genus(4) {
        let gaps = s.gaps().to_vec();
        let mut exponent_sets = BTreeSet::new();
        for mask in 0u32..(1 << gaps.len()) {
            let mut g = vec![0];
            g.extend(gaps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            let set: Vec<bool> = (0..RANGE).map(|z| in_ideal(&s, &g, z)).collect();
            exponent_sets.insert(set);
        }
        let ideals = MonomialFractionalIdeal::enumerate_ideals(Arc::new(s.clone()));
        assert_eq!(ideals.len(), exponent_sets.len(), "{s}");
    }
}

#[test]
fn presented_ideals_have_indicator_hilbert_functions() {
    for s in NumericalSemigroup::enumerate_by_genus(4) {
        let r = ring(&s);
        for m in MonomialFractionalIdeal::enumerate_ideals(r.semigroup().clone()) {
            let p = present(&r, &m);
            for d in -4..30 {
                assert_eq!(p.hilbert(d), usize::from(m.contains(d)), "{m} over {s} at {d}");
            }
        }
    }
}

/// `Tor_i(k, k)` and `Ext^i(k, k)` both have dimension `β_i(k)`, since the
/// minimal resolution becomes a complex with zero maps after `⊗ k` or
/// `Hom(-, k)`.
#[test]
fn residue_field_betti_numbers_agree_with_tor_and_ext() {
    for gens in [&[2, 3][..], &[3, 4, 5], &[3, 5, 7], &[2, 5]] {
        let s = NumericalSemigroup::from_generators(gens).unwrap();
        let r = ring(&s);
        let k = FPGradedModule::residue_field(r.clone());
        let betti = k.resolve(4).betti();
        for i in 1..=3 {
            assert_eq!(tor(i, &k, &k).unwrap().total_dim(), betti[i], "Tor_{i} over {s}");
            assert_eq!(ext(i, &k, &k).unwrap().total_dim(), betti[i], "Ext^{i} over {s}");
        }
    }
}

/// For a fractional ideal, stable endomorphisms are `(M : M)` modulo the
/// trace ideal, so their dimension is a count of exponents.
#[test]
fn stable_endomorphisms_count_exponents() {
    for s in NumericalSemigroup::enumerate_by_genus(4) {
        let r = ring(&s);
        for m in MonomialFractionalIdeal::enumerate_ideals(r.semigroup().clone()) {
            let ends = m.colon(&m);
            let trace = m.trace_ideal();
            let count = (-RANGE..RANGE).filter(|&z| ends.contains(z) && !trace.contains(z)).count();
            let p = present(&r, &m);
            assert_eq!(stable_hom_dim(&p).unwrap(), count, "{m} over {s}");
            let t = tor(1, &p, &p.transpose()).unwrap();
            assert_eq!(t.total_dim(), count, "Tor side for {m} over {s}");
        }
    }
}

#[test]
fn minimal_number_of_generators_from_tor_with_residue_field() {
    for s in NumericalSemigroup::enumerate_by_genus(3) {
        let r = ring(&s);
        let k = FPGradedModule::residue_field(r.clone());
        for m in MonomialFractionalIdeal::enumerate_ideals(r.semigroup().clone()) {
            let p = present(&r, &m);
            let res = p.resolve(2);
            let t = tor(1, &p, &k).unwrap();
            assert_eq!(t.total_dim(), res.betti()[1], "{m} over {s}");
        }
    }
}

/// `Hom(X, Y)` modulo maps through projectives is `Tor_1(Tr X, Y)`.
#[test]
fn stable_hom_between_ideals_is_tor_with_the_transpose() {
    for s in NumericalSemigroup::enumerate_by_genus(3) {
        let r = ring(&s);
        let ideals = MonomialFractionalIdeal::enumerate_ideals(r.semigroup().clone());
        for x in &ideals {
            for y in &ideals {
                let (px, py) = (present(&r, x), present(&r, y));
                let hom = stable_hom_between(&px, &py).unwrap().total_dim();
                let t = tor(1, &px.transpose(), &py).unwrap().total_dim();
                assert_eq!(hom, t, "{x} -> {y} over {s}");
            }
        }
    }
}

/// The table's dimension shifting and summand splitting give the same
/// annihilators as resolving each source directly.
#[test]
fn table_route_matches_direct_computation() {
    for g in 0..=3 {
        for s in NumericalSemigroup::enumerate_by_genus(g) {
            let corpus = SemigroupCorpus::new(ring(&s));
            let depth = if g <= 2 { 3 } else { 2 };
            let table = corpus.table(depth);
            let sample = &corpus.sample;
            for (a, m) in sample.iter().enumerate() {
                assert!(table.complete(a) && table.certified(a));
                for (b, n) in sample.iter().enumerate() {
                    for i in 1..=table.depth_of(a) {
                        let e = ext(i, &m.module, &n.module).unwrap().annihilator();
                        let t = tor(i, &m.module, &n.module).unwrap().annihilator();
                        let at = || format!("i={i} {} {} over {s}", m.label, n.label);
                        assert_eq!(table.ext_ann(a, i, b).unwrap(), e, "Ext {}", at());
                        assert_eq!(table.tor_ann(a, i, b).unwrap(), t, "Tor {}", at());
                    }
                }
            }
        }
    }
}

fn hilbert_sum(parts: &[FPGradedModule], lo: i64, hi: i64) -> Vec<usize> {
    (lo..=hi).map(|d| parts.iter().map(|p| p.hilbert(d)).sum()).collect()
}

/// The finer splitting of syzygies keeps the Hilbert function of `ΩM`, and
/// finds summands that the block decomposition misses.
#[test]
fn syzygy_summands_decompose_the_syzygy() {
    let mut finer = 0;
    for gens in [&[3, 7, 11][..], &[4, 6, 9, 11], &[3, 4, 5], &[4, 5, 6, 7], &[5, 6, 7, 8, 9]] {
        let s = NumericalSemigroup::from_generators(gens).unwrap();
        let corpus = SemigroupCorpus::new(ring(&s));
        for m in &corpus.sample {
            let omega = m.module.syzygy(1);
            let parts = m.module.syzygy_summands();
            let (lo, hi) = (-5, 40);
            assert_eq!(hilbert_sum(&parts, lo, hi), omega.hilbert_window(lo, hi), "{} over {s}", m.label);
            let rank: usize = parts.iter().map(|p| p.generators().rank()).sum();
            assert_eq!(rank, omega.minimalize().generators().rank(), "{} over {s}", m.label);
            if parts.len() > omega.block_summands().len() {
                finer += 1;
            }
        }
    }
    assert!(finer > 0, "no syzygy needed more than the block splitting");
}

#[test]
fn capped_tables_report_missing_groups() {
    let s = NumericalSemigroup::from_generators(&[4, 5, 6, 7]).unwrap();
    let r = ring(&s);
    let k = FPGradedModule::residue_field(r.clone());
    let full = HomologyTable::new(&r, &[k.clone()], &[k.clone()], 3);
    assert!(full.complete(0));
    let capped = HomologyTable::with_cap(&r, &[k.clone()], &[k.clone()], 3, Some(3));
    assert!(!capped.complete(0));
    assert_eq!(capped.ext_ann(0, 1, 0).unwrap(), full.ext_ann(0, 1, 0).unwrap());
    assert!(matches!(capped.ext_ann(0, 3, 0), Err(Error::Incomplete(_))));
    assert!(capped.summands(0, 3).is_none() || matches!(capped.tor_ann(0, 3, 0), Err(Error::Incomplete(_))));
}
