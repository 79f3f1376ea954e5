//! Candidate covers of a `P^n[4]`-unit, with the rule that decided each.

use std::env;

use pnk::enumerate::{enumerate_covers, Status, Verdict};
use pnk::geometry::DEFAULT_CAP;

fn main() {
    let n = env::args().nth(1).map(|a| a.parse().expect("integer n")).unwrap_or(3);
    let r = enumerate_covers(n, 4, DEFAULT_CAP).unwrap();
    println!("n + 1 = {}", r.prime_power);
    for e in &r.entries {
        let why = match e.status {
            Status::Eliminated => e
                .traces
                .iter()
                .find(|t| t.verdict == Verdict::Eliminated)
                .map(|t| format!("{} ({})", t.rule, t.citation))
                .unwrap_or_default(),
            Status::Constructible => e.witness.as_ref().map(|w| w.recipe.clone()).unwrap_or_default(),
            Status::Undetermined => String::new(),
        };
        println!("{:<28} {:<13} {why}", e.decomposition.to_string(), e.status.to_string());
    }
}
