use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{AmbientRing, Monomial, MonomialOrder, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted in decreasing grevlex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<AmbientRing>,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<AmbientRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<AmbientRing>, c: Rational) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.dim()), c)])
    }

    pub fn one(ring: &Arc<AmbientRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn variable(ring: &Arc<AmbientRing>, index: usize) -> Self {
        assert!(index < ring.dim(), "variable index out of range");
        Self::from_terms(ring, [(Monomial::var_power(ring.dim(), index, 1), Rational::one())])
    }

    pub fn monomial(ring: &Arc<AmbientRing>, m: Monomial, c: Rational) -> Self {
        Self::from_terms(ring, [(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        ring: &Arc<AmbientRing>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.dim(), "monomial arity does not match ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        &self.ring
    }

    /// Terms in decreasing grevlex order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Polynomial::from_terms(&self.ring, acc))
    }

    fn merge(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                MonomialOrder::GrevLex.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if subtract { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if subtract { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.ring.dim() {
            return Err(Error::PointArity { expected: self.ring.dim(), got: point.len() });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[var];
            if e == 0 {
                return None;
            }
            let mut m2 = m.clone();
            *m2.exponent_mut(var) = e - 1;
            Some((m2, c * Rational::from_integer(e.into())))
        });
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Substitution homomorphism: variable `i` goes to `images[i]`.
    ///
    /// All images must share one target ring. An empty `images` slice is
    /// only valid for constant polynomials, which then need `target`.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<AmbientRing>) -> Result<Polynomial> {
        if images.len() != self.ring.dim() {
            let missing = self.ring.variables().get(images.len()).cloned().unwrap_or_default();
            return Err(Error::MissingImage(missing));
        }
        if images.iter().any(|p| !(Arc::ptr_eq(p.ring(), target) || **p.ring() == **target)) {
            return Err(Error::RingMismatch);
        }
        let mut power_cache: Vec<Vec<Polynomial>> =
            images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut total = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (var, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut power_cache[var];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[var];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            total = &total + &term;
        }
        Ok(total)
    }

    /// Re-interprets this polynomial in a ring with extra trailing variables.
    pub fn extend_to(&self, target: &Arc<AmbientRing>) -> Polynomial {
        assert!(target.dim() >= self.ring.dim());
        let extra = target.dim() - self.ring.dim();
        assert_eq!(&target.variables()[..self.ring.dim()], self.ring.variables());
        Polynomial::from_terms(target, self.terms.iter().map(|(m, c)| (m.extend(extra), c.clone())))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Add for &Polynomial {
    type Output = Polynomial;
    /// Panics if the rings differ; use [`Polynomial::try_add`] to handle that.
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Exact product of two polynomials in the same ring.
pub fn poly_product(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.try_mul(q)
}

/// Applies the substitution given by a name-keyed map of images.
pub fn apply_ring_map(p: &Polynomial, images: &HashMap<String, Polynomial>) -> Result<Polynomial> {
    let mut ordered = Vec::with_capacity(p.ring().dim());
    for v in p.ring().variables() {
        match images.get(v) {
            Some(img) => ordered.push(img.clone()),
            None => return Err(Error::MissingImage(v.clone())),
        }
    }
    let target = match ordered.first() {
        Some(img) => img.ring().clone(),
        None => return Err(Error::MissingImage(String::new())),
    };
    p.substitute(&ordered, &target)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &AmbientRing, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in ring.variables().iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text form, e.g. `x^2 + 5/2*x*y - y + 3`. Parses back to the
/// same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn ring2() -> Arc<AmbientRing> {
        AmbientRing::new(["x", "y"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = ring2();
        let x = Polynomial::variable(&r, 0);
        let y = Polynomial::variable(&r, 1);
        let p = poly_product(&(&x + &y), &(&x - &y)).unwrap();
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert_eq!(p.to_string(), "x^2 - y^2");
    }

    #[test]
    fn product_with_zero() {
        let r = ring2();
        let x = Polynomial::variable(&r, 0);
        assert!(poly_product(&x, &Polynomial::zero(&r)).unwrap().is_zero());
    }

    #[test]
    fn rational_expansion() {
        let r = AmbientRing::new(["x"]).unwrap();
        let x = Polynomial::variable(&r, 0);
        let two = Polynomial::constant(&r, rational(2, 1));
        let half = Polynomial::constant(&r, rational(1, 2));
        let p = poly_product(&(&x.pow(2) + &(&two * &x)), &(&x + &half)).unwrap();
        assert_eq!(p.to_string(), "x^3 + 5/2*x^2 + x");
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Polynomial::variable(&ring2(), 0);
        let b = Polynomial::variable(&AmbientRing::new(["u", "v"]).unwrap(), 0);
        assert_eq!(poly_product(&a, &b).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn ring_maps() {
        let r = ring2();
        let x = Polynomial::variable(&r, 0);
        let y = Polynomial::variable(&r, 1);
        let sq = x.pow(2);
        let id: HashMap<_, _> = [("x".to_string(), x.clone()), ("y".to_string(), y.clone())].into();
        assert_eq!(apply_ring_map(&sq, &id).unwrap(), sq);

        let shear: HashMap<_, _> =
            [("x".to_string(), &x + &y), ("y".to_string(), y.clone())].into();
        assert_eq!(apply_ring_map(&sq, &shear).unwrap().to_string(), "x^2 + 2*x*y + y^2");

        let target = AmbientRing::new(["u"]).unwrap();
        let u = Polynomial::variable(&target, 0);
        let kill: HashMap<_, _> =
            [("x".to_string(), u), ("y".to_string(), Polynomial::zero(&target))].into();
        assert!(apply_ring_map(&(&x * &y), &kill).unwrap().is_zero());

        let partial: HashMap<_, _> = [("x".to_string(), x.clone())].into();
        assert_eq!(
            apply_ring_map(&sq, &partial).unwrap_err(),
            Error::MissingImage("y".into())
        );
    }

    #[test]
    fn mixed_target_rings_rejected() {
        let r = ring2();
        let s = AmbientRing::new(["u"]).unwrap();
        let images: HashMap<_, _> = [
            ("x".to_string(), Polynomial::variable(&s, 0)),
            ("y".to_string(), Polynomial::variable(&r, 0)),
        ]
        .into();
        let p = Polynomial::variable(&r, 0);
        assert_eq!(apply_ring_map(&p, &images).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn derivative_and_evaluation() {
        let r = ring2();
        let x = Polynomial::variable(&r, 0);
        let y = Polynomial::variable(&r, 1);
        let p = &(&x.pow(3) * &y) + &y;
        assert_eq!(p.derivative(0).to_string(), "3*x^2*y");
        assert_eq!(p.evaluate(&[rational(2, 1), rational(1, 3)]).unwrap(), rational(3, 1));
    }
}
