//! `HK(n)^k` with the kernel of the sum map acting: a `P^n[2k]`-unit.

use std::env;

use pnk::constructions::make_product_cover;
use pnk::geometry::{validate, DEFAULT_CAP};

fn main() {
    let mut args = env::args().skip(1).map(|a| a.parse::<u32>().expect("integer argument"));
    let n = args.next().unwrap_or(2);
    let k = args.next().unwrap_or(3);
    let s = make_product_cover(n, k).unwrap();
    let r = validate(&s, DEFAULT_CAP).unwrap();
    println!("{}: |G| = {}, {}", s.name, r.group_order, r.invariants.classification);
    println!("invariant dimensions: {:?}", r.invariants.hilbert);
    if let Some(x) = &r.invariants.generator_x {
        println!("x = {x}");
        for (i, p) in r.invariants.witness_powers.iter().enumerate() {
            println!("x^{} = {p}", i + 1);
        }
    }
}
