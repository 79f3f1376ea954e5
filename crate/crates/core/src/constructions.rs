//! Recipes for the known quotient constructions, each returning a
//! [`Scenario`] together with the classification it should have.

use thiserror::Error;

use crate::action::Truth;
use crate::algebra::RootOfUnity;
use crate::geometry::{BaseAutomorphism, Expected, Factor, FactorKind, GroupGenerator, Scenario};
use crate::invariants::UnitClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
    #[error("recipe `{recipe}` needs parameter --{param}")]
    MissingParam { recipe: &'static str, param: &'static str },
    #[error("bad parameter for `{recipe}`: {message}")]
    BadParam { recipe: &'static str, message: String },
}

/// Recipe names accepted by [`build`].
pub const RECIPES: &[&str] =
    &["enriques", "product-cover", "wreath", "mixed-n2", "k6", "symmetric-stack", "nonexample-product"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RecipeParams {
    pub n: Option<u32>,
    pub k: Option<u32>,
    pub e: Option<u32>,
}

/// Builds a recipe by name.
pub fn build(recipe: &str, p: RecipeParams) -> Result<Scenario, ConstructionError> {
    fn need(recipe: &'static str, param: &'static str, v: Option<u32>) -> Result<u32, ConstructionError> {
        v.ok_or(ConstructionError::MissingParam { recipe, param })
    }
    match recipe {
        "enriques" => make_enriques(need("enriques", "n", p.n)?),
        "product-cover" => make_product_cover(need("product-cover", "n", p.n)?, need("product-cover", "k", p.k)?),
        "wreath" => make_wreath(need("wreath", "n", p.n)?, need("wreath", "k", p.k)?),
        "mixed-n2" => make_mixed_n2(need("mixed-n2", "e", p.e)?),
        "k6" => make_k6(need("k6", "n", p.n)?),
        "symmetric-stack" => make_symmetric_stack(need("symmetric-stack", "n", p.n)?, need("symmetric-stack", "e", p.e)?),
        "nonexample-product" => Ok(make_nonexample_product()),
        other => Err(ConstructionError::UnknownRecipe(other.to_string())),
    }
}

/// Strict Enriques varieties are known for indices 2, 3 and 4 only.
fn known_index(m: u32) -> bool {
    (2..=4).contains(&m)
}

fn bad(recipe: &'static str, message: impl Into<String>) -> ConstructionError {
    ConstructionError::BadParam { recipe, message: message.into() }
}

fn check_n(recipe: &'static str, n: u32) -> Result<(), ConstructionError> {
    if n == 0 || n > 64 {
        return Err(bad(recipe, format!("n must be in 1..=64, got {n}")));
    }
    Ok(())
}

fn enriques_auto(name: &str, n: u32) -> BaseAutomorphism {
    BaseAutomorphism::new(name, n as u64 + 1, RootOfUnity::primitive(n as u64 + 1), Truth::True)
}

fn expect(c: UnitClass, omega: u64) -> Option<Expected> {
    Some(Expected { classification: c, omega_order: Some(omega) })
}

/// `Y ∈ HK(n)` with a purely non-symplectic `f` of order `n+1` acting freely.
pub fn make_enriques(n: u32) -> Result<Scenario, ConstructionError> {
    check_n("enriques", n)?;
    let m = n as u64 + 1;
    let mut s = Scenario::new(
        format!("enriques-{m}"),
        vec![Factor::new("Y", FactorKind::Hk(n)).with_automorphism(enriques_auto("f", n))],
    );
    s.generators.push(GroupGenerator::diagonal("f", vec![1]).declare(m, m, Truth::True));
    s.existence_unknown = !known_index(n + 1);
    s.expected = expect(UnitClass::Exceptional, m);
    Ok(s)
}

/// `Y_1 × … × Y_k` with the group `{f_1^{a_1} × … × f_k^{a_k} : Σ a_i ≡ 0}`.
pub fn make_product_cover(n: u32, k: u32) -> Result<Scenario, ConstructionError> {
    check_n("product-cover", n)?;
    if k == 0 || k > 16 {
        return Err(bad("product-cover", format!("k must be in 1..=16, got {k}")));
    }
    let m = n as u64 + 1;
    let factors = (1..=k)
        .map(|i| Factor::new(format!("Y{i}"), FactorKind::Hk(n)).with_automorphism(enriques_auto(&format!("f{i}"), n)))
        .collect();
    let mut s = Scenario::new(format!("product-cover-n{n}-k{k}"), factors);
    for i in 1..k as usize {
        let mut powers = vec![0; k as usize];
        powers[0] = 1;
        powers[i] = m - 1;
        s.generators.push(GroupGenerator::diagonal(format!("d{}", i + 1), powers).declare(m, m, Truth::True));
    }
    s.existence_unknown = !known_index(n + 1);
    s.expected = expect(UnitClass::from_params(n, 2 * k), 1);
    Ok(s)
}

/// `Y^{n+1} × Z_1 × … × Z_k` with the group generated by the cyclic
/// shift of the `Y` factors and the compensating scalar tuples.
///
/// For `k = 0` the admissible shifts are trivial and the group is the
/// diagonal part only.
pub fn make_wreath(n: u32, k: u32) -> Result<Scenario, ConstructionError> {
    check_n("wreath", n)?;
    if k > 8 {
        return Err(bad("wreath", format!("k must be at most 8, got {k}")));
    }
    let m = n as u64 + 1;
    let ny = n as usize + 1;
    let r = ny + k as usize;
    let mut factors: Vec<Factor> = (1..=ny)
        .map(|i| {
            Factor::new(format!("Y{i}"), FactorKind::Hk(n)).with_family("Y").with_automorphism(enriques_auto("f", n))
        })
        .collect();
    for j in 1..=k {
        factors.push(
            Factor::new(format!("Z{j}"), FactorKind::Hk(n)).with_automorphism(enriques_auto(&format!("g{j}"), n)),
        );
    }
    let mut s = Scenario::new(format!("wreath-n{n}-k{k}"), factors);
    for i in 1..ny {
        let mut powers = vec![0; r];
        powers[0] = 1;
        powers[i] = m - 1;
        s.generators.push(GroupGenerator::diagonal(format!("d{}", i + 1), powers).declare(m, m, Truth::True));
    }
    for j in 1..k as usize {
        let mut powers = vec![0; r];
        powers[ny] = 1;
        powers[ny + j] = m - 1;
        s.generators.push(GroupGenerator::diagonal(format!("c{}", j + 1), powers).declare(m, m, Truth::True));
    }
    if k >= 1 {
        // (f × id × … × id) ∘ σ on the Y factors, g_1^{-1} on Z_1
        let mut perm: Vec<usize> = (0..r).collect();
        perm[0] = ny - 1;
        for (j, p) in perm.iter_mut().enumerate().take(ny).skip(1) {
            *p = j - 1;
        }
        let mut powers = vec![0; r];
        powers[0] = 1;
        powers[ny] = m - 1;
        s.generators.push(GroupGenerator::permuting("s", perm, powers).declare(m * m, m, Truth::True));
    }
    s.existence_unknown = !known_index(n + 1);
    s.expected = expect(UnitClass::from_params(n, 2 * (n + 1 + k)), 1);
    Ok(s)
}

/// `Y × Z × Z` with `Y ∈ HK(2)`, `f` of order 4 scaling `y` by `i`, and
/// `Z` carrying a free involution `ι`; the group is generated by `f × g`
/// with `g(p_1, p_2) = (p_2, ι(p_1))`.
///
/// On cohomology `g` pulls back `z_1 ↦ z_2`, `z_2 ↦ -z_1`, and the degree
/// `2 + e` invariant is `y·z_1 + i·y·z_2`.
pub fn make_mixed_n2(e: u32) -> Result<Scenario, ConstructionError> {
    if e < 2 || e % 2 == 1 || e > 64 {
        return Err(bad("mixed-n2", format!("e must be even and at least 2, got {e}")));
    }
    let kind = if e == 2 { FactorKind::k3() } else { FactorKind::Cy(e) };
    let iota = BaseAutomorphism::new("iota", 2, RootOfUnity::MINUS_ONE, Truth::True);
    let f = BaseAutomorphism::new("f", 4, RootOfUnity::new(1, 4), Truth::False);
    let factors = vec![
        Factor::new("Y", FactorKind::Hk(2)).with_automorphism(f),
        Factor::new("Z1", kind).with_family("Z").with_automorphism(iota.clone()),
        Factor::new("Z2", kind).with_family("Z").with_automorphism(iota),
    ];
    let mut s = Scenario::new(format!("mixed-n2-e{e}"), factors);
    s.generators.push(GroupGenerator::permuting("fg", vec![0, 2, 1], vec![1, 0, 1]).declare(4, 4, Truth::True));
    s.expected = expect(UnitClass::from_params(2, 2 + e), 1);
    Ok(s)
}

/// `Y × Y'` with `Y ∈ HK(2n)`, `Y' ∈ HK(n)` and `G = ⟨f × f'^2⟩`, where
/// `f` is free of order `2n+1` and `f'` scales `y'` by `ρ_{Y,f}^{-1}`.
///
/// `f'` is taken of order `2n+1` as well, the least order compatible with
/// `ρ_{Y',f'} = ρ_{Y,f}^{-1}`. No such pair is known to exist.
pub fn make_k6(n: u32) -> Result<Scenario, ConstructionError> {
    check_n("k6", n)?;
    let m = 2 * n as u64 + 1;
    let rho = RootOfUnity::primitive(m);
    let factors = vec![
        Factor::new("Y", FactorKind::Hk(2 * n)).with_automorphism(BaseAutomorphism::new("f", m, rho, Truth::True)),
        Factor::new("Y'", FactorKind::Hk(n)).with_automorphism(BaseAutomorphism::new("f'", m, rho.inv(), Truth::False)),
    ];
    let mut s = Scenario::new(format!("k6-n{n}"), factors);
    s.generators.push(GroupGenerator::diagonal("g", vec![1, 2]).declare(m, m, Truth::True));
    s.existence_unknown = true;
    s.expected = expect(UnitClass::from_params(n, 6), 1);
    Ok(s)
}

/// The quotient stack `[Z^n / S_n]` for `Z` of even dimension `e`
/// (`e = 2` means a K3 surface).
pub fn make_symmetric_stack(n: u32, e: u32) -> Result<Scenario, ConstructionError> {
    if n == 0 || n > 12 {
        return Err(bad("symmetric-stack", format!("n must be in 1..=12, got {n}")));
    }
    if e < 2 || e % 2 == 1 || e > 64 {
        return Err(bad(
            "symmetric-stack",
            format!("e must be even and at least 2, got {e}; for odd e the canonical bundle of the stack is not trivial"),
        ));
    }
    let kind = if e == 2 { FactorKind::k3() } else { FactorKind::Cy(e) };
    let factors = (1..=n).map(|i| Factor::new(format!("Z{i}"), kind).with_family("Z")).collect();
    let mut s = Scenario::new(format!("symmetric-stack-n{n}-e{e}"), factors);
    for i in 0..n.saturating_sub(1) as usize {
        let mut perm: Vec<usize> = (0..n as usize).collect();
        perm.swap(i, i + 1);
        s.generators.push(
            GroupGenerator::permuting(format!("t{}", i + 1), perm, vec![0; n as usize]).declare(2, 1, Truth::False),
        );
    }
    s.stack_mode = true;
    s.expected = expect(UnitClass::from_params(n, e), 1);
    Ok(s)
}

/// `CY(8) × CY(4)` with the trivial group: the invariant dimensions look
/// like `C[x]/x^4` with `deg x = 4`, but `x^2 = 0`.
pub fn make_nonexample_product() -> Scenario {
    let mut s = Scenario::new(
        "nonexample-product",
        vec![Factor::new("Z", FactorKind::Cy(8)), Factor::new("W", FactorKind::Cy(4))],
    );
    s.expected = expect(UnitClass::None, 1);
    s
}
