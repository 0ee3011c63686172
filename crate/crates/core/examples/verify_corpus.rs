//! Run the statement checks over every semigroup up to a genus and print
//! the aggregate, as the `verify` subcommand does.
//!
//!     cargo run --release --example verify_corpus -- 3

use semitrace::{run_corpus, Check, Config};

fn main() {
    let max_genus: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let config = Config { max_genus, i_max: 3, checks: Check::ALL.into_iter().collect(), ..Config::default() };
    let report = run_corpus(&config).unwrap();
    let mut by_statement = std::collections::BTreeMap::<&str, (usize, usize)>::new();
    for c in &report.cases {
        let e = by_statement.entry(c.statement.as_str()).or_default();
        e.0 += 1;
        e.1 += usize::from(c.pass);
    }
    for (statement, (total, passed)) in by_statement {
        println!("{statement:<20} {passed}/{total}");
    }
    println!("{}", report.summary_line());
}
