//! Enriques-type quotients of `HK(n)`: exceptional structure sheaf and a
//! canonical character of order `n + 1`.

use pnk::constructions::make_enriques;
use pnk::geometry::{validate, DEFAULT_CAP};
use pnk::invariants::character_eigenspaces;

fn main() {
    for n in 1..=4 {
        let s = make_enriques(n).unwrap();
        let r = validate(&s, DEFAULT_CAP).unwrap();
        println!("{}: {}, ω order {}", s.name, r.invariants.classification, r.omega_order);
        let g = s.group(DEFAULT_CAP).unwrap();
        for (k, dims) in character_eigenspaces(&g).unwrap() {
            println!("  eigenspace {k}: {dims:?}");
        }
    }
}
