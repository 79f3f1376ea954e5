//! Freeness bookkeeping: a free symplectic automorphism of `HK(2)` of
//! order 3 is rejected.

use pnk::action::Truth;
use pnk::algebra::RootOfUnity;
use pnk::geometry::{validate, BaseAutomorphism, Factor, FactorKind, GroupGenerator, Scenario, DEFAULT_CAP};

fn main() {
    let f = BaseAutomorphism::new("f", 3, RootOfUnity::ONE, Truth::True);
    let mut s = Scenario::new("free-order-3", vec![Factor::new("Y", FactorKind::Hk(2)).with_automorphism(f)]);
    s.generators.push(GroupGenerator::diagonal("f", vec![1]));
    let r = validate(&s, DEFAULT_CAP).unwrap();
    println!("acts freely: {}", r.freeness);
    for v in &r.violations {
        println!("violation: {v}");
    }
}
