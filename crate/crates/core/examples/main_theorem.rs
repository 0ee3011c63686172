//! The trace of a fractional ideal against `ann Ext¹(M, ΩM)` and
//! `ann Tor₁(M, transpose M)`, for every ideal of one semigroup.
//!
//!     cargo run --example main_theorem -- 4,6,9

use std::sync::Arc;

use semitrace::theorems::{check_main_theorem, factorization_witness};
use semitrace::{GradedRing, MonomialFractionalIdeal, NumericalSemigroup, PrimeField};

fn main() {
    let gens: Vec<i64> = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "4,6,9".into())
        .split(',')
        .map(|x| x.trim().parse().expect("generators are integers"))
        .collect();
    let s = Arc::new(NumericalSemigroup::from_generators(&gens).unwrap());
    let ring = GradedRing::new(s.clone(), PrimeField::default());
    for ideal in MonomialFractionalIdeal::enumerate_ideals(s.clone()) {
        let r = check_main_theorem(&ring, &ideal);
        println!(
            "{:<20} trace {:?} ext {:?} tor {:?} {}",
            r.module,
            r.trace,
            r.ext_ann,
            r.tor_ann,
            if r.pass { "ok" } else { "MISMATCH" }
        );
    }

    // t^{q+m} on M factors through R when q ∈ R:M and m ∈ M
    let m = MonomialFractionalIdeal::normalization_ideal(s.clone());
    let q = MonomialFractionalIdeal::unit(s.clone()).colon(&m).generators()[0];
    let (g, f) = factorization_witness(&ring, &m, q, 0).unwrap();
    println!(
        "\nM = {m}: t^{q} on M factors through R, as F{:?} → F{:?} → F{:?} on generators",
        g.source().shifts(),
        g.target().shifts(),
        f.target().shifts()
    );
}
