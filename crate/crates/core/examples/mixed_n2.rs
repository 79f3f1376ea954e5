//! `HK(2) × Z × Z` with a mixed generator; the invariant of degree `2 + e`
//! generates a `P^2[2+e]`-unit.

use pnk::constructions::make_mixed_n2;
use pnk::geometry::{validate, DEFAULT_CAP};
use pnk::invariants::invariant_basis;

fn main() {
    for e in [2, 4, 6] {
        let s = make_mixed_n2(e).unwrap();
        let r = validate(&s, DEFAULT_CAP).unwrap();
        let g = s.group(DEFAULT_CAP).unwrap();
        let basis = invariant_basis(&g, 2 + e);
        println!("{}: {}", s.name, r.invariants.classification);
        for b in basis {
            println!("  degree {} invariant: {b}", 2 + e);
        }
    }
}
