//! Monomial fractional ideals of one semigroup: enumeration up to shift,
//! colons, products, traces and the conductor.
//!
//!     cargo run --example ideals -- 3,4,5

use std::sync::Arc;

use semitrace::{MonomialFractionalIdeal, NumericalSemigroup};

fn main() {
    let gens: Vec<i64> = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "3,4,5".into())
        .split(',')
        .map(|x| x.trim().parse().expect("generators are integers"))
        .collect();
    let s = Arc::new(NumericalSemigroup::from_generators(&gens).unwrap());
    let conductor = MonomialFractionalIdeal::conductor(s.clone());
    let closure = MonomialFractionalIdeal::normalization_ideal(s.clone());
    println!("S = {s}, conductor C = {conductor}, R̄ = {closure}");
    println!("(R : R̄) = {}", MonomialFractionalIdeal::unit(s.clone()).colon(&closure));

    let ideals = MonomialFractionalIdeal::enumerate_ideals(s.clone());
    println!("\n{} ideals up to shift:", ideals.len());
    for m in &ideals {
        let dual = MonomialFractionalIdeal::unit(s.clone()).colon(m);
        println!("  M = {m:<16} R:M = {dual:<16} Tr(M) = {}", m.trace_ideal());
    }

    let m = MonomialFractionalIdeal::maximal_ideal(s.clone());
    println!("\nm = {m}, m² = {}, m:m = {}", m.product(&m), m.colon(&m));
    println!("t^3·m = {}, normalized back: {}", m.shift(3), m.shift(3).normalize());
}
