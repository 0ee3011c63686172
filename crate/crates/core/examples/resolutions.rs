//! Minimal graded free resolutions: Betti numbers, shifts, syzygies and
//! their splitting into summands.
//!
//!     cargo run --example resolutions -- 3,4,5

use std::sync::Arc;

use semitrace::{present, FPGradedModule, GradedRing, MonomialFractionalIdeal, NumericalSemigroup, PrimeField};

fn main() {
    let gens: Vec<i64> = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "3,4,5".into())
        .split(',')
        .map(|x| x.trim().parse().expect("generators are integers"))
        .collect();
    let s = Arc::new(NumericalSemigroup::from_generators(&gens).unwrap());
    let ring = GradedRing::new(s.clone(), PrimeField::default());

    let modules = [
        ("R/m", FPGradedModule::residue_field(ring.clone())),
        ("R/C", FPGradedModule::cyclic_quotient(ring.clone(), &MonomialFractionalIdeal::conductor(s.clone()))),
        ("m", present(&ring, &MonomialFractionalIdeal::maximal_ideal(s.clone()))),
        ("R̄", present(&ring, &MonomialFractionalIdeal::normalization_ideal(s.clone()))),
    ];
    for (name, m) in &modules {
        let res = m.resolve(4);
        let summary = res.summary();
        println!("{name}: betti {:?}", summary.betti);
        for (k, shifts) in summary.shifts.iter().enumerate() {
            println!("  F_{k} shifts {shifts:?}");
        }
        println!("  minimal {}, complex {}", res.is_minimal(), res.is_complex());
        let omega = m.syzygy(1);
        let parts = omega.summands_up_to_twist();
        println!(
            "  Ω has {} generators; summands up to twist: {:?}",
            omega.generators().rank(),
            parts.iter().map(|(x, k)| (x.generators().rank(), *k)).collect::<Vec<_>>()
        );
    }
}
