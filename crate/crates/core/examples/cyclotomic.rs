//! Exact arithmetic in cyclotomic fields.

use pnk::algebra::{Cyclotomic, RootOfUnity};

fn main() {
    let i = RootOfUnity::new(1, 4);
    let zeta3 = RootOfUnity::primitive(3);
    println!("i·ζ_3 = {} (order {})", i * zeta3, (i * zeta3).order());

    let a = &Cyclotomic::one() + &i.to_cyclotomic();
    let b = zeta3.to_cyclotomic();
    let sum = &a + &b;
    println!("(1 + i) + ζ_3 = {sum}");
    println!("(1 + i)^4 = {}", a.pow(4));
    println!("(1 + i)·(1 + i)^-1 = {}", &a * &a.inv());

    // 1 + ζ_3 + ζ_3^2 = 0
    let z = &(&Cyclotomic::one() + &b) + &zeta3.pow(2).to_cyclotomic();
    println!("1 + ζ_3 + ζ_3^2 is zero: {}", z.is_zero());
}
