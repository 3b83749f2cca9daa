use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use super::buchberger::{buchberger, reduce, OrderedPoly};
use super::monomial_ideal::MonomialIdeal;
use crate::algebra::{AmbientRing, Monomial, MonomialOrder, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_SPAIR_BUDGET: usize = 200_000;

/// A reduced Gröbner basis with respect to a fixed order.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<AmbientRing>,
    order: MonomialOrder,
    polys: Vec<OrderedPoly>,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Basis elements, monic, sorted by increasing leading monomial.
    pub fn elements(&self) -> Vec<Polynomial> {
        self.polys.iter().map(|p| p.to_polynomial(&self.ring)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.lm().clone()).collect()
    }

    pub fn leading_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.ring.dim(), self.leading_monomials())
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.lm().is_one())
    }

    /// Remainder of multivariate division by this basis.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if !(Arc::ptr_eq(p.ring(), &self.ring) || **p.ring() == *self.ring) {
            return Err(Error::RingMismatch);
        }
        let divisors: Vec<&OrderedPoly> = self.polys.iter().collect();
        Ok(reduce(&OrderedPoly::from_polynomial(p, self.order), &divisors, self.order)
            .to_polynomial(&self.ring))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Coordinates of the normal form of `p` against `basis` (a list of
    /// standard monomials of this basis).
    pub fn coordinates(&self, p: &Polynomial, basis: &StandardMonomialBasis) -> Result<Vec<Rational>> {
        let nf = self.normal_form(p)?;
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in nf.terms() {
            let idx = basis
                .index_of(m)
                .ok_or_else(|| Error::Invariant(format!("normal form term {m:?} is not standard")))?;
            v[idx] = c.clone();
        }
        Ok(v)
    }

    /// Whether every variable has a pure power among the leading terms.
    pub fn is_zero_dimensional(&self) -> bool {
        self.leading_ideal().is_artinian()
    }

    pub fn quotient_length(&self) -> Result<QuotientLength> {
        let lead = self.leading_ideal();
        if !lead.is_artinian() {
            return Ok(QuotientLength::Infinite);
        }
        Ok(QuotientLength::Finite(lead.quotient_dimension()?))
    }

    pub fn standard_monomials(&self) -> Result<StandardMonomialBasis> {
        let monomials = self.leading_ideal().standard_monomials()?;
        Ok(StandardMonomialBasis::new(monomials))
    }
}

/// Result of a length computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientLength {
    Finite(usize),
    Infinite,
}

impl QuotientLength {
    pub fn finite(self) -> Result<usize> {
        match self {
            QuotientLength::Finite(n) => Ok(n),
            QuotientLength::Infinite => Err(Error::InfiniteQuotient),
        }
    }
}

/// Standard monomials of a zero-dimensional ideal in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMonomialBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl StandardMonomialBasis {
    fn new(monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        StandardMonomialBasis { monomials, index }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// An ideal of a polynomial ring, with a per-order basis cache.
pub struct Ideal {
    ring: Arc<AmbientRing>,
    generators: Vec<Polynomial>,
    spair_budget: usize,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            spair_budget: self.spair_budget,
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl Ideal {
    pub fn new(ring: &Arc<AmbientRing>, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Validation {
                field: "ideal".into(),
                message: "an ideal needs at least one generator".into(),
            });
        }
        if generators.iter().any(|g| !(Arc::ptr_eq(g.ring(), ring) || **g.ring() == **ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators,
            spair_budget: DEFAULT_SPAIR_BUDGET,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn unit(ring: &Arc<AmbientRing>) -> Self {
        Ideal::new(ring, vec![Polynomial::one(ring)]).expect("unit ideal is valid")
    }

    pub fn with_spair_budget(mut self, budget: usize) -> Self {
        self.spair_budget = budget;
        self.cache = RwLock::new(HashMap::new());
        self
    }

    pub fn spair_budget(&self) -> usize {
        self.spair_budget
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Reduced Gröbner basis, computed once per order and cached.
    pub fn groebner_basis(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.cache.read().unwrap().get(&order) {
            return Ok(gb.clone());
        }
        let inputs = self.generators.iter().map(|g| OrderedPoly::from_polynomial(g, order)).collect();
        let polys = buchberger(inputs, order, self.spair_budget)?;
        let gb = Arc::new(GroebnerBasis { ring: self.ring.clone(), order, polys });
        let mut cache = self.cache.write().unwrap();
        Ok(cache.entry(order).or_insert(gb).clone())
    }

    pub fn grevlex_basis(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner_basis(MonomialOrder::GrevLex)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        self.grevlex_basis()?.contains(p)
    }

    pub fn quotient_length(&self) -> Result<QuotientLength> {
        self.grevlex_basis()?.quotient_length()
    }

    pub fn standard_monomials(&self) -> Result<StandardMonomialBasis> {
        self.grevlex_basis()?.standard_monomials()
    }

    pub fn is_zero_dimensional(&self) -> Result<bool> {
        Ok(self.grevlex_basis()?.is_zero_dimensional())
    }

    /// Whether both ideals have the same elements.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        let a = self.grevlex_basis()?;
        let b = other.grevlex_basis()?;
        for g in self.generators() {
            if !b.contains(g)? {
                return Ok(false);
            }
        }
        for g in other.generators() {
            if !a.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn derived(&self, generators: Vec<Polynomial>) -> Ideal {
        Ideal {
            ring: self.ring.clone(),
            generators,
            spair_budget: self.spair_budget,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Ideal generated by the pairwise products of the two generator lists.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.try_mul(b)?);
            }
        }
        Ok(self.derived(dedup(gens)))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if !(Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring) {
            return Err(Error::RingMismatch);
        }
        let gens = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(self.derived(dedup(gens)))
    }

    /// `I^n`, generated by all `n`-fold products of generators. `I^0` is the
    /// unit ideal.
    pub fn power(&self, n: usize) -> Ideal {
        if n == 0 {
            return self.derived(vec![Polynomial::one(&self.ring)]);
        }
        let gens = &self.generators;
        let mut products: Vec<Polynomial> = Vec::new();
        // multisets of generator indices, built in nondecreasing index order
        let mut stack: Vec<(usize, usize, Polynomial)> = vec![(0, 0, Polynomial::one(&self.ring))];
        while let Some((start, depth, acc)) = stack.pop() {
            if depth == n {
                products.push(acc);
                continue;
            }
            for k in (start..gens.len()).rev() {
                stack.push((k, depth + 1, &acc * &gens[k]));
            }
        }
        self.derived(dedup(products))
    }

    /// Dimension of the Zariski tangent space at a rational point.
    pub fn tangent_dimension(&self, point: &[Rational]) -> Result<usize> {
        if point.len() != self.dim() {
            return Err(Error::PointArity { expected: self.dim(), got: point.len() });
        }
        let mut rows = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            if !g.evaluate(point)?.is_zero() {
                return Err(Error::PointNotOnScheme(g.to_string()));
            }
            rows.push(
                (0..self.dim())
                    .map(|v| g.derivative(v).evaluate(point))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(self.dim() - linalg::rank(&rows, self.dim()))
    }
}

fn dedup(polys: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::with_capacity(polys.len());
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut zero = None;
    for p in polys {
        if p.is_zero() {
            zero = Some(p);
            continue;
        }
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    // the zero ideal still needs one generator
    if out.is_empty() {
        out.extend(zero);
    }
    out
}

/// Reduced Gröbner basis of `ideal` in `order`.
pub fn groebner_basis(ideal: &Ideal, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
    ideal.groebner_basis(order)
}

pub fn normal_form(p: &Polynomial, basis: &GroebnerBasis) -> Result<Polynomial> {
    basis.normal_form(p)
}

pub fn ideal_power(ideal: &Ideal, n: usize) -> Ideal {
    ideal.power(n)
}

pub fn quotient_length(ideal: &Ideal) -> Result<QuotientLength> {
    ideal.quotient_length()
}

pub fn standard_monomials(ideal: &Ideal) -> Result<StandardMonomialBasis> {
    ideal.standard_monomials()
}

pub fn tangent_dimension(ideal: &Ideal, point: &[Rational]) -> Result<usize> {
    ideal.tangent_dimension(point)
}
