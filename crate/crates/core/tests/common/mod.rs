//! Linear-algebra oracles shared by the integration tests.

use pnk::action::ActionGroup;
use pnk::algebra::{AlgebraElement, Cyclotomic, KunnethAlgebra};

pub fn coordinates(alg: &KunnethAlgebra, d: u32, a: &AlgebraElement) -> Vec<Cyclotomic> {
    alg.basis_of_degree(d).iter().map(|m| a.coefficient(m)).collect()
}

/// Rank over the cyclotomic field by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Cyclotomic>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        let pivot: Vec<Cyclotomic> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// `dim ⋂_s ker(s − 1)` on degree `d`, from the matrices of the generators.
pub fn fixed_space_dimension(g: &ActionGroup, d: u32) -> usize {
    let alg = g.algebra();
    let basis = alg.basis_of_degree(d);
    let n = basis.len();
    let mut rows = Vec::new();
    for s in g.generators() {
        // column j is s(basis_j) - basis_j; rows indexed by basis monomials
        let mut mat = vec![vec![Cyclotomic::zero(); n]; n];
        for (j, m) in basis.iter().enumerate() {
            let img = s.apply(&AlgebraElement::monomial(alg, m.clone(), Cyclotomic::one())).unwrap();
            for (i, mi) in basis.iter().enumerate() {
                mat[i][j] = img.coefficient(mi);
            }
            mat[j][j] = &mat[j][j] - &Cyclotomic::one();
        }
        rows.extend(mat);
    }
    n - rank(rows)
}
