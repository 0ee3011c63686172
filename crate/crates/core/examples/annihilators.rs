//! Ext and Tor as finite-length graded modules: Hilbert functions, the
//! action of the semigroup and annihilators.
//!
//!     cargo run --example annihilators

use std::sync::Arc;

use semitrace::{ext, present, tor, FPGradedModule, GradedRing, MonomialFractionalIdeal, NumericalSemigroup, PrimeField};

fn main() {
    let s = Arc::new(NumericalSemigroup::from_generators(&[3, 4, 5]).unwrap());
    let ring = GradedRing::new(s.clone(), PrimeField::default());
    let closure = present(&ring, &MonomialFractionalIdeal::normalization_ideal(s.clone()));
    let k = FPGradedModule::residue_field(ring.clone());
    let m = present(&ring, &MonomialFractionalIdeal::maximal_ideal(s.clone()));

    for i in 1..=3 {
        let e = ext(i, &closure, &m).unwrap();
        let t = tor(i, &closure, &k).unwrap();
        println!("Ext^{i}(R̄, m): window {:?} dims {:?} ann {}", e.window(), e.dims(), e.annihilator());
        println!("Tor_{i}(R̄, k): window {:?} dims {:?} ann {}", t.window(), t.dims(), t.annihilator());
    }

    let omega = closure.syzygy(1);
    let e = ext(1, &closure, &omega).unwrap();
    println!("\nann Ext¹(R̄, ΩR̄) = {}", e.annihilator());
    println!("ann Tor₁(R̄, transpose R̄) = {}", tor(1, &closure, &closure.transpose()).unwrap().annihilator());
    println!("conductor = {}", MonomialFractionalIdeal::conductor(s));
}
