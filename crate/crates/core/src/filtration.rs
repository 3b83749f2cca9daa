//! The I-adic filtration of a zero-dimensional ideal: lengths of `R/I^i`,
//! the character of the associated graded ring, bases of the graded pieces
//! `I^i/I^{i+1}`, multiplication maps between them, and the dimensions of
//! the symmetric powers of the conormal module `I/I^2`.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{integer, AmbientRing, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::groebner::{monomial_hilbert_series, GroebnerBasis, Ideal, StandardMonomialBasis};
use crate::kcharacter::{CharacterSeries, TPolynomial};
use crate::linalg::{self, Rref};

/// Default number of vanishing finite differences demanded past the
/// candidate numerator degree.
pub fn default_window(dim: usize) -> usize {
    3.max(dim + 1)
}

/// Default last index of the truncated series `sum c_i t^i`.
pub fn default_truncation(dim: usize) -> usize {
    2 * dim + 4
}

/// `values[i] = dim R/I^i`, with `values[0] = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthSequence {
    pub values: Vec<u64>,
}

impl LengthSequence {
    /// Window size `K` (the last index).
    pub fn window(&self) -> usize {
        self.values.len() - 1
    }

    /// First differences `c_i = l_{i+1} - l_i = dim I^i/I^{i+1}`.
    pub fn differences(&self) -> Vec<u64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// How the associated graded character was certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub window: usize,
    pub truncation: usize,
    pub candidate_degree: usize,
    /// Every numerator coefficient with index in `(candidate_degree, verified_through]`
    /// was computed and found to be zero.
    pub verified_through: usize,
    pub length_terms: usize,
    pub status: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssocGradedCharacter {
    pub series: CharacterSeries,
    pub lengths: LengthSequence,
    pub certification: Certification,
}

/// Basis of the image of `I^i` in `R/I^{i+1}`.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub weight: usize,
    /// Coordinates on `R/I^{i+1}`.
    pub ambient: StandardMonomialBasis,
    /// Row-reduced spanning vectors, one per basis element.
    pub basis: Rref,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    fn vector_to_polynomial(&self, ring: &Arc<AmbientRing>, v: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.ambient.monomials().iter().cloned().zip(v.iter().cloned()),
        )
    }

    /// The basis vectors as polynomials (representatives in `I^i`).
    pub fn basis_polynomials(&self, ring: &Arc<AmbientRing>) -> Vec<Polynomial> {
        self.basis.rows.iter().map(|v| self.vector_to_polynomial(ring, v)).collect()
    }
}

/// Matrix of multiplication by `f` from weight `i` to weight `i+1`.
///
/// Row `k` holds the coordinates of `f * b_k` in the weight-`(i+1)` basis.
#[derive(Debug, Clone)]
pub struct MultiplicationMap {
    pub section: Polynomial,
    pub source_weight: usize,
    pub matrix: Vec<Vec<Rational>>,
    pub target_dim: usize,
}

/// Graded dimensions of `Sym^i(I/I^2)` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymPowers {
    pub dims: Vec<u64>,
    pub series: CharacterSeries,
}

/// Lazily computed powers of a zero-dimensional ideal.
pub struct Filtration {
    ideal: Ideal,
    powers: Vec<Arc<GroebnerBasis>>,
    standard: Vec<Option<StandardMonomialBasis>>,
}

impl Filtration {
    /// Fails with [`Error::InfiniteQuotient`] unless the ideal is zero-dimensional.
    pub fn new(ideal: &Ideal) -> Result<Self> {
        let gb = ideal.grevlex_basis()?;
        if !gb.is_zero_dimensional() {
            return Err(Error::InfiniteQuotient);
        }
        let unit = Ideal::unit(ideal.ring()).grevlex_basis()?;
        Ok(Filtration {
            ideal: ideal.clone(),
            powers: vec![unit, gb],
            standard: vec![None, None],
        })
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn dim(&self) -> usize {
        self.ideal.dim()
    }

    /// Reduced basis of `I^n`.
    ///
    /// `I^{n+1}` is generated by the products of the reduced basis of `I^n`
    /// with the generators of `I`.
    pub fn power_basis(&mut self, n: usize) -> Result<Arc<GroebnerBasis>> {
        while self.powers.len() <= n {
            let prev = self.powers.last().unwrap().clone();
            let mut gens = Vec::new();
            for g in prev.elements() {
                for h in self.ideal.generators() {
                    gens.push(&g * h);
                }
            }
            let next = Ideal::new(self.ideal.ring(), gens)?
                .with_spair_budget(self.ideal.spair_budget())
                .grevlex_basis()?;
            self.powers.push(next);
            self.standard.push(None);
        }
        Ok(self.powers[n].clone())
    }

    fn standard_basis(&mut self, n: usize) -> Result<StandardMonomialBasis> {
        self.power_basis(n)?;
        if self.standard[n].is_none() {
            self.standard[n] = Some(self.powers[n].standard_monomials()?);
        }
        Ok(self.standard[n].clone().unwrap())
    }

    /// `dim R/I^n`.
    pub fn length(&mut self, n: usize) -> Result<u64> {
        if n == 0 {
            return Ok(0);
        }
        Ok(self.standard_basis(n)?.len() as u64)
    }

    pub fn length_sequence(&mut self, window: usize) -> Result<LengthSequence> {
        let values = (0..=window).map(|i| self.length(i)).collect::<Result<Vec<_>>>()?;
        Ok(LengthSequence { values })
    }

    /// Character `p(t)/(1-t)^d` of the associated graded ring, certified by
    /// demanding that the `d`-fold differences of `c_i` vanish on `window`
    /// indices past the candidate degree.
    pub fn assoc_graded_character(&mut self, window: usize, truncation: usize) -> Result<AssocGradedCharacter> {
        let d = self.dim();
        let numerator_coeff = |c: &[i64], n: usize| -> i64 {
            // coefficient of t^n in (1-t)^d * sum c_i t^i
            let mut binom: i64 = 1;
            let mut acc: i64 = 0;
            for k in 0..=d.min(n) {
                let term = binom * c[n - k];
                acc += if k % 2 == 0 { term } else { -term };
                binom = binom * (d - k) as i64 / (k + 1) as i64;
            }
            acc
        };
        let mut lengths = self.length_sequence(truncation + 1)?;
        let mut c: Vec<i64> = lengths.differences().iter().map(|&x| x as i64).collect();
        let q: Vec<i64> = (0..=truncation).map(|n| numerator_coeff(&c, n)).collect();
        let candidate_degree = q.iter().rposition(|&x| x != 0).unwrap_or(0);
        let top = truncation.max(candidate_degree + window);
        if top > truncation {
            lengths = self.length_sequence(top + 1)?;
            c = lengths.differences().iter().map(|&x| x as i64).collect();
        }
        for n in candidate_degree + 1..=top {
            let value = numerator_coeff(&c, n);
            if value != 0 {
                return Err(Error::WindowFailure { index: n, value, degree: candidate_degree });
            }
        }
        let numerator = TPolynomial::new(q[..=candidate_degree].to_vec());
        Ok(AssocGradedCharacter {
            series: CharacterSeries::new(numerator, d as i64),
            certification: Certification {
                window,
                truncation,
                candidate_degree,
                verified_through: top,
                length_terms: lengths.values.len(),
                status: "window-certified",
            },
            lengths,
        })
    }

    /// Basis of `I^i / I^{i+1}` inside `R/I^{i+1}`.
    pub fn graded_piece(&mut self, i: usize) -> Result<GradedPiece> {
        let ambient = self.standard_basis(i + 1)?;
        let target = self.power_basis(i + 1)?;
        let quotient = self.standard_basis(1)?;
        let ring = self.ideal.ring().clone();
        let mut rows = Vec::new();
        for g in self.power_basis(i)?.elements() {
            for s in quotient.monomials() {
                let p = &g * &Polynomial::monomial(&ring, s.clone(), integer(1));
                let v = target.coordinates(&p, &ambient)?;
                rows.push(v);
            }
        }
        let basis = linalg::rref(rows, ambient.len());
        let expected = self.length(i + 1)? - self.length(i)?;
        if basis.rank() as u64 != expected {
            return Err(Error::Invariant(format!(
                "graded piece {i} has dimension {} but lengths give {expected}",
                basis.rank()
            )));
        }
        Ok(GradedPiece { weight: i, ambient, basis })
    }

    /// Matrix of multiplication by `f in I` from weight `i` to weight `i+1`.
    pub fn multiplication_map(&mut self, f: &Polynomial, i: usize) -> Result<MultiplicationMap> {
        let source = self.graded_piece(i)?;
        let target = self.graded_piece(i + 1)?;
        self.multiplication_between(f, &source, &target)
    }

    /// Same as [`Filtration::multiplication_map`] with precomputed pieces.
    pub fn multiplication_between(
        &mut self,
        f: &Polynomial,
        source: &GradedPiece,
        target: &GradedPiece,
    ) -> Result<MultiplicationMap> {
        assert_eq!(source.weight + 1, target.weight);
        if !self.powers[1].contains(f)? {
            return Err(Error::NotInIdeal(f.to_string()));
        }
        let ring = self.ideal.ring().clone();
        let reducer = self.power_basis(target.weight + 1)?;
        let mut matrix = Vec::with_capacity(source.dim());
        for b in source.basis_polynomials(&ring) {
            let v = reducer.coordinates(&(f * &b), &target.ambient)?;
            let coords = target.basis.coordinates(&v).ok_or_else(|| {
                Error::Invariant("product left the next graded piece".into())
            })?;
            matrix.push(coords);
        }
        Ok(MultiplicationMap {
            section: f.clone(),
            source_weight: source.weight,
            matrix,
            target_dim: target.dim(),
        })
    }

    /// Dimensions of `Sym^i(I/I^2)` for `i = 0..=max`.
    ///
    /// `I/I^2` is presented over `R/I` by the ideal generators modulo the
    /// kernel of the evaluation map, which is found by linear algebra in
    /// `R/I^2`. The symmetric algebra is then the quotient of `R[T_1..T_m]`
    /// by `I` and the linear relations, and its `T`-graded dimensions are
    /// read off the leading-term ideal.
    pub fn sym_power_dims(&mut self, max: usize) -> Result<SymPowers> {
        let ring = self.ideal.ring().clone();
        let gens: Vec<Polynomial> = self.ideal.generators().to_vec();
        let m = gens.len();
        let quotient = self.standard_basis(1)?;
        let square_basis = self.standard_basis(2)?;
        let square = self.power_basis(2)?;

        let mut rows = Vec::with_capacity(m * quotient.len());
        for g in &gens {
            for s in quotient.monomials() {
                let p = g * &Polynomial::monomial(&ring, s.clone(), integer(1));
                rows.push(square.coordinates(&p, &square_basis)?);
            }
        }
        let relations = linalg::left_kernel(&rows, square_basis.len());

        let mut names: Vec<String> = Vec::with_capacity(m);
        let mut aux = ring.clone();
        for j in 0..m {
            let name = aux.fresh_name(&format!("T{}", j + 1));
            aux = aux.extended(&[name.clone()])?;
            names.push(name);
        }
        let d = ring.dim();
        let mut aux_gens: Vec<Polynomial> =
            self.powers[1].elements().iter().map(|g| g.extend_to(&aux)).collect();
        for rel in relations {
            let terms = rel.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let (j, a) = (k / quotient.len(), k % quotient.len());
                let mut mono = quotient.monomials()[a].extend(m);
                *mono.exponent_mut(d + j) = 1;
                (mono, c)
            });
            aux_gens.push(Polynomial::from_terms(&aux, terms));
        }
        let aux_ideal = Ideal::new(&aux, aux_gens)?.with_spair_budget(self.ideal.spair_budget());
        let lead = aux_ideal.grevlex_basis()?.leading_ideal();
        let weights: Vec<u32> = (0..d + m).map(|v| u32::from(v >= d)).collect();
        let series = monomial_hilbert_series(&lead, &weights)?;
        let dims = series.expand(max).into_iter().map(|x| x as u64).collect();
        Ok(SymPowers { dims, series })
    }
}

pub fn length_sequence(ideal: &Ideal, window: usize) -> Result<LengthSequence> {
    Filtration::new(ideal)?.length_sequence(window)
}

pub fn assoc_graded_character(ideal: &Ideal, window: usize) -> Result<AssocGradedCharacter> {
    let d = ideal.dim();
    Filtration::new(ideal)?.assoc_graded_character(window, default_truncation(d))
}

pub fn graded_piece(ideal: &Ideal, i: usize) -> Result<GradedPiece> {
    Filtration::new(ideal)?.graded_piece(i)
}

pub fn multiplication_map(ideal: &Ideal, f: &Polynomial, i: usize) -> Result<MultiplicationMap> {
    Filtration::new(ideal)?.multiplication_map(f, i)
}

pub fn sym_power_dims(ideal: &Ideal, max: usize) -> Result<SymPowers> {
    Filtration::new(ideal)?.sym_power_dims(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_ideal, parse_polynomial};

    fn ideal(vars: &[&str], gens: &[&str]) -> Ideal {
        let ring = AmbientRing::new(vars.iter().copied()).unwrap();
        parse_ideal(&ring, gens).unwrap()
    }

    fn series(num: &[i64], k: i64) -> CharacterSeries {
        CharacterSeries::new(TPolynomial::new(num.to_vec()), k)
    }

    #[test]
    fn length_sequences() {
        let seq = length_sequence(&ideal(&["x"], &["x^2"]), 4).unwrap();
        assert_eq!(seq.values, vec![0, 2, 4, 6, 8]);
        assert_eq!(seq.window(), 4);
        let seq = length_sequence(&ideal(&["x", "y"], &["x", "y"]), 3).unwrap();
        assert_eq!(seq.values, vec![0, 1, 3, 6]);
        let seq = length_sequence(&ideal(&["x", "y"], &["x^2", "y"]), 3).unwrap();
        assert_eq!(seq.values, vec![0, 2, 6, 12]);
    }

    #[test]
    fn non_artinian_is_rejected() {
        let i = ideal(&["x", "y"], &["x*y"]);
        assert_eq!(Filtration::new(&i).err(), Some(Error::InfiniteQuotient));
    }

    #[test]
    fn associated_graded_characters() {
        let c = assoc_graded_character(&ideal(&["x"], &["x^2"]), 3).unwrap();
        assert_eq!(c.series, series(&[2], 1));
        let c = assoc_graded_character(&ideal(&["x", "y"], &["x", "y"]), 3).unwrap();
        assert_eq!(c.series, series(&[1], 2));
        let c = assoc_graded_character(&ideal(&["x", "y"], &["x^2", "x*y", "y^2"]), 3).unwrap();
        assert_eq!(c.series, series(&[3, 1], 2));
        assert_eq!(c.series.render(), "(3 + t) / (1-t)^2");
        assert_eq!(c.certification.candidate_degree, 1);
        assert!(c.certification.verified_through >= 1 + 3);
    }

    #[test]
    fn certification_extends_past_a_late_candidate() {
        let mut f = Filtration::new(&ideal(&["x", "y"], &["x^2", "y^3"])).unwrap();
        let c = f.assoc_graded_character(3, 1).unwrap();
        assert_eq!(c.certification.verified_through, c.certification.candidate_degree + 3);
        let full = f.assoc_graded_character(3, 8).unwrap();
        assert_eq!(c.series, full.series);
    }

    #[test]
    fn graded_pieces() {
        let x2 = ideal(&["x"], &["x^2"]);
        assert_eq!(graded_piece(&x2, 1).unwrap().dim(), 2);
        assert_eq!(graded_piece(&x2, 0).unwrap().dim(), 2);
        let m = ideal(&["x", "y"], &["x", "y"]);
        assert_eq!(graded_piece(&m, 2).unwrap().dim(), 3);
        let piece = graded_piece(&m, 1).unwrap();
        let ring = m.ring().clone();
        for b in piece.basis_polynomials(&ring) {
            assert!(m.contains(&b).unwrap());
        }
    }

    #[test]
    fn multiplication_maps() {
        let x = ideal(&["x"], &["x"]);
        let ring = x.ring().clone();
        let f = parse_polynomial("x", &ring).unwrap();
        assert_eq!(multiplication_map(&x, &f, 0).unwrap().matrix, vec![vec![integer(1)]]);
        let f = parse_polynomial("x^2", &ring).unwrap();
        let map = multiplication_map(&x, &f, 0).unwrap();
        assert!(map.matrix.iter().flatten().all(Zero::is_zero));

        let x2 = ideal(&["x"], &["x^2"]);
        let f = parse_polynomial("x^2", x2.ring()).unwrap();
        let map = multiplication_map(&x2, &f, 1).unwrap();
        assert_eq!(map.matrix.len(), 2);
        assert_eq!(linalg::rank(&map.matrix, map.target_dim), 2);

        let g = parse_polynomial("x + 1", x2.ring()).unwrap();
        assert!(matches!(multiplication_map(&x2, &g, 0), Err(Error::NotInIdeal(_))));
    }

    #[test]
    fn sym_power_dimensions() {
        let dims = sym_power_dims(&ideal(&["x"], &["x^2"]), 4).unwrap().dims;
        assert_eq!(dims, vec![2, 2, 2, 2, 2]);
        let dims = sym_power_dims(&ideal(&["x", "y"], &["x", "y"]), 4).unwrap().dims;
        assert_eq!(dims, vec![1, 2, 3, 4, 5]);
        let square = ideal(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let dims = sym_power_dims(&square, 2).unwrap().dims;
        assert_eq!(dims, vec![3, 7, 12]);
        let gr = length_sequence(&square, 3).unwrap().differences();
        assert_eq!(gr, vec![3, 7, 11]);
    }

    fn sample_ideals() -> Vec<Ideal> {
        vec![
            ideal(&["x"], &["x^3"]),
            ideal(&["x"], &["x^2 - x"]),
            ideal(&["x", "y"], &["x^2", "y^2"]),
            ideal(&["x", "y"], &["x^2", "x*y", "y^3"]),
            ideal(&["x", "y"], &["x^2 - y", "y^2"]),
        ]
    }

    #[test]
    fn lengths_telescope() {
        for i in sample_ideals() {
            let seq = length_sequence(&i, 5).unwrap();
            let total: u64 = seq.differences().iter().sum();
            assert_eq!(total, seq.values[5]);
            let mut f = Filtration::new(&i).unwrap();
            for k in 0..4 {
                assert_eq!(f.graded_piece(k).unwrap().dim() as u64, seq.differences()[k]);
            }
        }
    }

    #[test]
    fn multiplication_maps_commute() {
        let i = ideal(&["x", "y"], &["x^2", "x*y", "y^3"]);
        let ring = i.ring().clone();
        let mut f = Filtration::new(&i).unwrap();
        let a = parse_polynomial("x^2", &ring).unwrap();
        let b = parse_polynomial("y^3 + x*y", &ring).unwrap();
        let compose = |f: &mut Filtration, first: &Polynomial, second: &Polynomial| {
            let m1 = f.multiplication_map(first, 0).unwrap().matrix;
            let m2 = f.multiplication_map(second, 1).unwrap().matrix;
            let cols = m2.first().map_or(0, Vec::len);
            m1.iter()
                .map(|row| {
                    (0..cols)
                        .map(|c| row.iter().zip(&m2).map(|(r, m)| r * &m[c]).sum::<Rational>())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(compose(&mut f, &a, &b), compose(&mut f, &b, &a));
    }

    #[test]
    fn sym_dominates_the_graded_pieces() {
        for i in sample_ideals() {
            let sym = sym_power_dims(&i, 4).unwrap().dims;
            let gr = length_sequence(&i, 5).unwrap().differences();
            for (s, g) in sym.iter().zip(&gr) {
                assert!(s >= g, "{i}: {sym:?} vs {gr:?}");
            }
        }
    }
}
