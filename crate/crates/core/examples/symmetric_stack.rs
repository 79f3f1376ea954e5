//! Quotient stacks `[Z^n / S_n]`: `x = Σ z_i` and `x^n = n!·z_1⋯z_n`.

use pnk::constructions::make_symmetric_stack;
use pnk::geometry::{validate, DEFAULT_CAP};

fn main() {
    for (n, e) in [(2, 2), (3, 4), (4, 6)] {
        let s = make_symmetric_stack(n, e).unwrap();
        let r = validate(&s, DEFAULT_CAP).unwrap();
        let inv = &r.invariants;
        println!("{}: {}", s.name, inv.classification);
        if let (Some(x), Some(top)) = (&inv.generator_x, inv.witness_powers.last()) {
            println!("  x = {x}, x^{n} = {top}");
        }
    }
}
