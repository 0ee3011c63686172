//! Enumerate numerical semigroups by genus and print their basic invariants.
//!
//!     cargo run --example semigroups -- 4

use semitrace::NumericalSemigroup;

fn main() {
    let max_genus: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let all = NumericalSemigroup::enumerate_by_genus(max_genus);
    for g in 0..=max_genus {
        let count = all.iter().filter(|s| s.genus() == g).count();
        println!("genus {g}: {count} semigroups");
    }
    println!();
    for s in &all {
        println!(
            "{s:<16} genus {} frobenius {:>2} multiplicity {} gaps {:?}{}",
            s.genus(),
            s.frobenius(),
            s.multiplicity(),
            s.gaps(),
            if s.is_symmetric() { "  symmetric" } else { "" }
        );
    }

    let s = NumericalSemigroup::from_generators(&[5, 7]).unwrap();
    println!("\n{s}: Apéry set w.r.t. 5 = {:?}", s.apery_set(5).unwrap());
}
