//! The wreath construction: a `P^n[2n+4]`-unit from `HK(n)^{n+2}`.

use pnk::constructions::make_wreath;
use pnk::geometry::{validate, DEFAULT_CAP};

fn main() {
    for n in [1, 2, 3] {
        let s = make_wreath(n, 1).unwrap();
        let r = validate(&s, DEFAULT_CAP).unwrap();
        println!(
            "{}: {}, |G| = {}, χ(cover) = {} = {} · {}",
            s.name, r.invariants.classification, r.group_order, r.cover_euler, r.group_order, r.invariant_euler
        );
    }
}
