//! The right dimensions are not enough: `CY(8) × CY(4)` has invariant
//! dimensions `1 + t^4 + t^8 + t^12` but `x^2 = 0`.

use pnk::constructions::make_nonexample_product;
use pnk::geometry::{validate, DEFAULT_CAP};

fn main() {
    let s = make_nonexample_product();
    let r = validate(&s, DEFAULT_CAP).unwrap();
    let inv = &r.invariants;
    println!("dimensions: {:?}", inv.hilbert);
    println!("candidate x: {}", inv.generator_x.as_ref().map(|x| x.to_string()).unwrap_or_default());
    match inv.failure {
        Some(f) => println!("classification: {} ({f})", inv.classification),
        None => println!("classification: {}", inv.classification),
    }
}
