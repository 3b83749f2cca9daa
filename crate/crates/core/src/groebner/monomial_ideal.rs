use crate::algebra::{Monomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::kcharacter::{CharacterSeries, TPolynomial};

/// A monomial ideal given by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Monomial>) -> Self {
        let mut gens: Vec<Monomial> = generators.into_iter().collect();
        assert!(gens.iter().all(|g| g.nvars() == nvars), "monomial arity mismatch");
        gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| MonomialOrder::GrevLex.cmp(a, b)));
        gens.dedup();
        let mut minimal: Vec<Monomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !minimal.iter().any(|m| m.divides(&g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal { nvars, generators: minimal }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    /// Exponent of the pure power of each variable among the generators.
    pub fn pure_power_bounds(&self) -> Vec<Option<u32>> {
        let mut bounds = vec![None; self.nvars];
        for g in &self.generators {
            if let Some((v, e)) = g.as_pure_power() {
                bounds[v] = Some(bounds[v].map_or(e, |b: u32| b.min(e)));
            }
        }
        bounds
    }

    /// Whether the quotient by this ideal is finite-dimensional.
    pub fn is_artinian(&self) -> bool {
        self.generators.iter().any(Monomial::is_one)
            || self.pure_power_bounds().iter().all(Option::is_some)
    }

    /// Monomials outside the ideal, ascending by degree and decreasing
    /// grevlex within a degree.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        if !self.is_artinian() {
            return Err(Error::InfiniteQuotient);
        }
        let mut out = Vec::new();
        let mut current = Monomial::one(self.nvars);
        self.enumerate(0, &mut current, &mut out);
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| MonomialOrder::GrevLex.cmp(b, a)));
        Ok(out)
    }

    fn enumerate(&self, var: usize, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if var == self.nvars {
            out.push(current.clone());
            return;
        }
        // the standard set is closed under division, so stop at the first
        // exponent that lands in the ideal
        let mut e = 0;
        loop {
            *current.exponent_mut(var) = e;
            if self.contains(current) {
                break;
            }
            self.enumerate(var + 1, current, out);
            e += 1;
        }
        *current.exponent_mut(var) = 0;
    }

    /// Number of standard monomials.
    pub fn quotient_dimension(&self) -> Result<usize> {
        Ok(self.standard_monomials()?.len())
    }

    fn with_generator(&self, m: Monomial) -> MonomialIdeal {
        MonomialIdeal::new(self.nvars, self.generators.iter().cloned().chain([m]))
    }

    /// The colon ideal `(self : x_var)`.
    fn colon_var(&self, var: usize) -> MonomialIdeal {
        MonomialIdeal::new(
            self.nvars,
            self.generators.iter().map(|g| {
                let mut g = g.clone();
                let e = g.exponents()[var];
                if e > 0 {
                    *g.exponent_mut(var) = e - 1;
                }
                g
            }),
        )
    }
}

/// Weighted Hilbert series of the quotient by a monomial ideal.
///
/// Uses the splitting recursion `H(J) = H(J + x) + t^w(x) H(J : x)` on a
/// pivot variable: the most frequent variable among the minimal generators
/// that are not pure powers, ties broken by variable index. Recursion ends
/// when every generator is a pure power, where the series factors.
///
/// Weight-0 variables are allowed as long as they are bounded by a pure
/// power. A free variable must have weight 1 so that the result has a
/// `(1-t)^k` denominator.
pub fn monomial_hilbert_series(ideal: &MonomialIdeal, weights: &[u32]) -> Result<CharacterSeries> {
    assert_eq!(weights.len(), ideal.nvars(), "one weight per variable");
    if ideal.generators.iter().any(Monomial::is_one) {
        return Ok(CharacterSeries::zero());
    }
    let mixed: Vec<&Monomial> = ideal.generators.iter().filter(|g| g.support_size() > 1).collect();
    if mixed.is_empty() {
        return split_series(ideal, weights);
    }
    let mut counts = vec![0usize; ideal.nvars()];
    for g in &ideal.generators {
        for (v, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let pivot = (0..ideal.nvars())
        .filter(|&v| mixed.iter().any(|g| g.exponents()[v] > 0))
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
        .expect("a mixed generator has at least two variables");
    let killed = monomial_hilbert_series(
        &ideal.with_generator(Monomial::var_power(ideal.nvars(), pivot, 1)),
        weights,
    )?;
    let colon = monomial_hilbert_series(&ideal.colon_var(pivot), weights)?;
    Ok(killed.add(&colon.shift(weights[pivot] as usize)))
}

/// Base case: generators are pure powers of distinct variables.
fn split_series(ideal: &MonomialIdeal, weights: &[u32]) -> Result<CharacterSeries> {
    let bounds = ideal.pure_power_bounds();
    let mut series = CharacterSeries::one();
    for (v, bound) in bounds.into_iter().enumerate() {
        let w = weights[v] as usize;
        let factor = match bound {
            // 1 + t^w + ... + t^{(a-1)w}
            Some(a) => {
                let mut c = vec![0i64; (a as usize - 1) * w + 1];
                for k in 0..a as usize {
                    c[k * w] += 1;
                }
                CharacterSeries::polynomial(TPolynomial::new(c))
            }
            None if w == 1 => CharacterSeries::one_minus_t(-1),
            None if w == 0 => return Err(Error::InfiniteGradedPiece { weight: 0 }),
            None => return Err(Error::UnsupportedWeight(weights[v])),
        };
        series = series.mul(&factor);
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| mono(g)))
    }

    fn series(c: &[i64], k: i64) -> CharacterSeries {
        CharacterSeries::new(TPolynomial::new(c.to_vec()), k)
    }

    #[test]
    fn square_of_maximal_ideal() {
        let j = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        assert_eq!(monomial_hilbert_series(&j, &[1, 1]).unwrap(), series(&[1, 2], 0));
    }

    #[test]
    fn zero_ideal_is_free() {
        let j = ideal(1, &[]);
        assert_eq!(monomial_hilbert_series(&j, &[1]).unwrap(), series(&[1], 1));
    }

    #[test]
    fn single_mixed_generator() {
        let j = ideal(2, &[&[1, 1]]);
        let expect = series(&[1, 0, -1], 2);
        assert_eq!(monomial_hilbert_series(&j, &[1, 1]).unwrap(), expect);
        assert_eq!(expect, series(&[1, 1], 1));
    }

    #[test]
    fn weight_zero_variables() {
        // x bounded by x^2, y free of weight 1: (1 + 1) / (1-t)
        let j = ideal(2, &[&[2, 0]]);
        assert_eq!(monomial_hilbert_series(&j, &[0, 1]).unwrap(), series(&[2], 1));
        // a free weight-0 variable makes a graded piece infinite
        assert_eq!(
            monomial_hilbert_series(&ideal(2, &[&[0, 1]]), &[0, 1]).unwrap_err(),
            Error::InfiniteGradedPiece { weight: 0 }
        );
    }

    #[test]
    fn unit_ideal() {
        assert!(monomial_hilbert_series(&ideal(2, &[&[0, 0]]), &[1, 1]).unwrap().is_zero());
    }

    #[test]
    fn standard_monomials_of_a_box() {
        let j = ideal(2, &[&[2, 0], &[0, 3]]);
        let sm = j.standard_monomials().unwrap();
        let expect: Vec<Monomial> =
            [[0, 0], [1, 0], [0, 1], [1, 1], [0, 2], [1, 2]].iter().map(|e| mono(e)).collect();
        assert_eq!(sm, expect);
        assert!(ideal(2, &[&[0, 1]]).standard_monomials().is_err());
    }
}
