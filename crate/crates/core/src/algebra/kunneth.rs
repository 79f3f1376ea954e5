use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::cyclotomic::Cyclotomic;
use super::AlgebraError;

/// One algebra generator: a class of the given cohomological degree with
/// `x^nilorder = 0`, belonging to a geometric factor (`block`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    pub nilorder: u32,
    pub block: usize,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32, nilorder: u32, block: usize) -> Self {
        GeneratorSpec { name: name.into(), degree, nilorder, block }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Tensor product of truncated polynomial algebras (even generators) and
/// exterior algebras (odd generators), with the monomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KunnethAlgebra {
    generators: Vec<GeneratorSpec>,
}

impl KunnethAlgebra {
    pub fn new(generators: Vec<GeneratorSpec>) -> Result<Self, AlgebraError> {
        for g in &generators {
            if g.degree == 0 {
                return Err(AlgebraError::InvalidGenerator(g.name.clone(), "degree must be positive"));
            }
            if g.nilorder < 2 || g.nilorder > 256 {
                return Err(AlgebraError::InvalidGenerator(g.name.clone(), "nilorder must lie in 2..=256"));
            }
            if g.is_odd() && g.nilorder != 2 {
                return Err(AlgebraError::InvalidGenerator(g.name.clone(), "odd generators square to zero"));
            }
        }
        Ok(KunnethAlgebra { generators })
    }

    /// `C[y]/y^nilorder` with `deg y = degree`, a single block.
    pub fn truncated(name: &str, degree: u32, nilorder: u32) -> Self {
        Self::new(vec![GeneratorSpec::new(name, degree, nilorder, 0)]).expect("valid generator")
    }

    /// Tensor product: generators of `other` are appended with shifted blocks.
    pub fn tensor(&self, other: &KunnethAlgebra) -> KunnethAlgebra {
        let shift = self.block_count();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().map(|g| GeneratorSpec {
            block: g.block + shift,
            ..g.clone()
        }));
        KunnethAlgebra { generators }
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.generators.iter().map(|g| g.block + 1).max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn top_degree(&self) -> u32 {
        self.generators.iter().map(|g| (g.nilorder - 1) * g.degree).sum()
    }

    /// The monomial spanning the top degree.
    pub fn top_monomial(&self) -> Monomial {
        Monomial(self.generators.iter().map(|g| (g.nilorder - 1) as u8).collect())
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial(vec![0; self.len()])
    }

    pub fn generator_monomial(&self, i: usize) -> Monomial {
        let mut e = vec![0u8; self.len()];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    /// All basis monomials in lexicographic exponent order.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for g in &self.generators {
            let mut next = Vec::with_capacity(out.len() * g.nilorder as usize);
            for prefix in &out {
                for e in 0..g.nilorder {
                    let mut m = prefix.clone();
                    m.push(e as u8);
                    next.push(m);
                }
            }
            out = next;
        }
        out.into_iter().map(Monomial).collect()
    }

    /// Basis monomials of degree `d`, in lexicographic exponent order.
    pub fn basis_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.len()];
        self.fill_degree(0, d, &mut cur, &mut out);
        out
    }

    fn fill_degree(&self, i: usize, rest: u32, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if i == self.len() {
            if rest == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &self.generators[i];
        for e in 0..g.nilorder {
            let used = e * g.degree;
            if used > rest {
                break;
            }
            cur[i] = e as u8;
            self.fill_degree(i + 1, rest - used, cur, out);
        }
        cur[i] = 0;
    }

    /// Graded dimensions `dim_d` for `d = 0..=top_degree`.
    pub fn hilbert_series(&self) -> Vec<u64> {
        let mut series = vec![1u64];
        for g in &self.generators {
            let mut next = vec![0u64; series.len() + ((g.nilorder - 1) * g.degree) as usize];
            for (d, &c) in series.iter().enumerate() {
                for e in 0..g.nilorder {
                    next[d + (e * g.degree) as usize] += c;
                }
            }
            series = next;
        }
        series
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.hilbert_series()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Product of two basis monomials: `None` when it vanishes, otherwise the
    /// monomial with its Koszul sign (`true` for a minus sign).
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(self.len());
        // sign: each odd generator of `a` passes over the odd generators of `b`
        // with a smaller index
        let mut odd_b_before = 0usize;
        let mut neg = false;
        for (i, g) in self.generators.iter().enumerate() {
            let e = a.0[i] as u32 + b.0[i] as u32;
            if e >= g.nilorder {
                return None;
            }
            if g.is_odd() {
                if a.0[i] == 1 && odd_b_before % 2 == 1 {
                    neg = !neg;
                }
                if b.0[i] == 1 {
                    odd_b_before += 1;
                }
            }
            out.push(e as u8);
        }
        Some((Monomial(out), neg))
    }
}

/// A basis monomial: exponents against the fixed generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn render(&self, alg: &KunnethAlgebra) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(alg.generators())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }
}

/// A finite combination of basis monomials with exact cyclotomic
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    alg: Arc<KunnethAlgebra>,
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(alg: &Arc<KunnethAlgebra>) -> Self {
        AlgebraElement { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alg: &Arc<KunnethAlgebra>) -> Self {
        Self::monomial(alg, alg.unit_monomial(), Cyclotomic::one())
    }

    pub fn monomial(alg: &Arc<KunnethAlgebra>, m: Monomial, c: Cyclotomic) -> Self {
        let mut e = Self::zero(alg);
        e.add_term(m, c);
        e
    }

    /// The generator with index `i`.
    pub fn generator(alg: &Arc<KunnethAlgebra>, i: usize) -> Self {
        Self::monomial(alg, alg.generator_monomial(i), Cyclotomic::one())
    }

    /// The generator with the given name.
    pub fn named(alg: &Arc<KunnethAlgebra>, name: &str) -> Result<Self, AlgebraError> {
        let i = alg
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator(alg, i))
    }

    pub fn from_terms(
        alg: &Arc<KunnethAlgebra>,
        terms: impl IntoIterator<Item = (Monomial, Cyclotomic)>,
    ) -> Self {
        let mut e = Self::zero(alg);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<KunnethAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclotomic> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> Cyclotomic {
        self.terms.get(m).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The common degree of all terms, or `None` for mixed degrees or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.alg.degree_of(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg {
            Ok(())
        } else {
            Err(AlgebraError::IncompatibleAlgebras)
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(&other.scale(&Cyclotomic::from_integer(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> AlgebraElement {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        AlgebraElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> AlgebraElement {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }

    /// Graded-commutative product with Koszul signs for odd generators.
    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = self.alg.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn power(&self, m: u32) -> AlgebraElement {
        let mut acc = Self::one(&self.alg);
        for _ in 0..m {
            if acc.is_zero() {
                break;
            }
            acc = acc.multiply(self).expect("same algebra");
        }
        acc
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mono = m.render(&self.alg);
            let coeff = c.to_string();
            let simple = !coeff.contains(' ');
            let (neg, body) = match coeff.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, coeff.clone()),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let body = if simple { body } else { format!("({body})") };
            match (body.as_str(), mono.as_str()) {
                ("1", m) => write!(f, "{m}")?,
                (b, "1") => write!(f, "{b}")?,
                (b, m) => write!(f, "{b}·{m}")?,
            }
        }
        Ok(())
    }
}
