//! Character series `p(t) / (1-t)^k` with integer numerators.
//!
//! These are the weight-space generating functions of graded vector spaces.
//! The only denominators are powers of `(1-t)`, which keeps equality
//! decidable: a series is stored in lowest terms, so two series are equal
//! exactly when their canonical forms are.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

fn add_i(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("character coefficient overflow")
}

fn mul_i(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("character coefficient overflow")
}

/// Integer polynomial in `t`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct TPolynomial {
    coeffs: Vec<i64>,
}

impl TPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        TPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        TPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        TPolynomial::new(vec![c])
    }

    /// `(1-t)^n`.
    pub fn one_minus_t_pow(n: u32) -> Self {
        let mut p = TPolynomial::constant(1);
        let base = TPolynomial::new(vec![1, -1]);
        for _ in 0..n {
            p = p.mul(&base);
        }
        p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, other: &TPolynomial) -> TPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        TPolynomial::new((0..n).map(|i| add_i(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> TPolynomial {
        TPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &TPolynomial) -> TPolynomial {
        if self.is_zero() || other.is_zero() {
            return TPolynomial::zero();
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_i(out[i + j], mul_i(*a, *b));
            }
        }
        TPolynomial::new(out)
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> TPolynomial {
        if self.is_zero() {
            return TPolynomial::zero();
        }
        let mut c = vec![0; n];
        c.extend_from_slice(&self.coeffs);
        TPolynomial::new(c)
    }

    pub fn evaluate_at_one(&self) -> i64 {
        self.coeffs.iter().fold(0, |acc, &c| add_i(acc, c))
    }

    /// Exact quotient over the integers.
    pub fn exact_div(&self, divisor: &TPolynomial) -> Result<TPolynomial> {
        if divisor.is_zero() {
            return Err(Error::NotDivisible);
        }
        if self.is_zero() {
            return Ok(TPolynomial::zero());
        }
        if self.degree() < divisor.degree() {
            return Err(Error::NotDivisible);
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.coeffs[dd];
        let mut quot = vec![0i64; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd];
            if top % lead != 0 {
                return Err(Error::NonIntegral(format!("{top}/{lead}")));
            }
            let q = top / lead;
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= mul_i(q, d);
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::NotDivisible);
        }
        Ok(TPolynomial::new(quot))
    }

    /// Divides by `(1-t)` as many times as possible (at most `limit`).
    fn strip_one_minus_t(mut self, limit: u32) -> (TPolynomial, u32) {
        let base = TPolynomial::new(vec![1, -1]);
        let mut stripped = 0;
        while stripped < limit && !self.is_zero() && self.evaluate_at_one() == 0 {
            self = self.exact_div(&base).expect("root at t=1 implies divisibility");
            stripped += 1;
        }
        (self, stripped)
    }
}

impl fmt::Display for TPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let abs = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs) {
                (0, _) => write!(f, "{abs}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{abs}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{abs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A character series `numerator / (1-t)^exponent` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterSeries {
    numerator: TPolynomial,
    exponent: u32,
}

impl CharacterSeries {
    /// Canonicalizes `numerator / (1-t)^exponent`. Negative exponents move
    /// into the numerator.
    pub fn new(numerator: TPolynomial, exponent: i64) -> Self {
        if numerator.is_zero() {
            return CharacterSeries::zero();
        }
        if exponent <= 0 {
            let lift = u32::try_from(-exponent).expect("denominator exponent out of range");
            return CharacterSeries {
                numerator: numerator.mul(&TPolynomial::one_minus_t_pow(lift)),
                exponent: 0,
            };
        }
        let exponent = u32::try_from(exponent).expect("denominator exponent out of range");
        let (numerator, stripped) = numerator.strip_one_minus_t(exponent);
        CharacterSeries { numerator, exponent: exponent - stripped }
    }

    pub fn zero() -> Self {
        CharacterSeries { numerator: TPolynomial::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        CharacterSeries::polynomial(TPolynomial::constant(1))
    }

    pub fn polynomial(p: TPolynomial) -> Self {
        CharacterSeries::new(p, 0)
    }

    /// `(1-t)^power`, for any integer power.
    pub fn one_minus_t(power: i64) -> Self {
        CharacterSeries::new(TPolynomial::constant(1), -power)
    }

    pub fn numerator(&self) -> &TPolynomial {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn mul(&self, other: &CharacterSeries) -> CharacterSeries {
        CharacterSeries::new(
            self.numerator.mul(&other.numerator),
            i64::from(self.exponent) + i64::from(other.exponent),
        )
    }

    pub fn add(&self, other: &CharacterSeries) -> CharacterSeries {
        let k = self.exponent.max(other.exponent);
        let a = self.numerator.mul(&TPolynomial::one_minus_t_pow(k - self.exponent));
        let b = other.numerator.mul(&TPolynomial::one_minus_t_pow(k - other.exponent));
        CharacterSeries::new(a.add(&b), i64::from(k))
    }

    pub fn neg(&self) -> CharacterSeries {
        CharacterSeries { numerator: self.numerator.neg(), exponent: self.exponent }
    }

    pub fn sub(&self, other: &CharacterSeries) -> CharacterSeries {
        self.add(&other.neg())
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> CharacterSeries {
        CharacterSeries { numerator: self.numerator.shift(n), exponent: self.exponent }
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &CharacterSeries) -> Result<CharacterSeries> {
        if divisor.is_zero() {
            return Err(Error::NotDivisible);
        }
        let num = self.numerator.exact_div(&divisor.numerator)?;
        Ok(CharacterSeries::new(
            num,
            i64::from(self.exponent) - i64::from(divisor.exponent),
        ))
    }

    /// The series as a polynomial, if its canonical denominator is trivial.
    pub fn extract_polynomial(&self) -> Result<TPolynomial> {
        if self.exponent > 0 {
            return Err(Error::NotPolynomial { denominator_exponent: self.exponent });
        }
        Ok(self.numerator.clone())
    }

    /// Power-series coefficients of `t^0 .. t^n`.
    pub fn expand(&self, n: usize) -> Vec<i64> {
        // 1/(1-t)^k = sum_i C(k-1+i, i) t^i
        let k = i64::from(self.exponent);
        let mut inv = vec![0i64; n + 1];
        if k == 0 {
            inv[0] = 1;
        } else {
            let mut c: i64 = 1;
            for (i, slot) in inv.iter_mut().enumerate() {
                *slot = c;
                let i = i as i64;
                c = mul_i(c, k + i) / (i + 1);
            }
        }
        (0..=n)
            .map(|i| {
                (0..=i).fold(0, |acc, j| add_i(acc, mul_i(self.numerator.coeff(j), inv[i - j])))
            })
            .collect()
    }

    /// Text form `p(t) / (1-t)^k`.
    pub fn render(&self) -> String {
        match self.exponent {
            0 => self.numerator.to_string(),
            k => format!("({}) / (1-t)^{}", self.numerator, k),
        }
    }
}

impl fmt::Display for CharacterSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// JSON form: rendered text plus the exact numerator coefficient list.
impl Serialize for CharacterSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CharacterSeries", 3)?;
        st.serialize_field("text", &self.render())?;
        st.serialize_field("numerator", &self.numerator)?;
        st.serialize_field("denominator_exponent", &self.exponent)?;
        st.end()
    }
}

pub fn char_mul(a: &CharacterSeries, b: &CharacterSeries) -> CharacterSeries {
    a.mul(b)
}

pub fn char_exact_div(a: &CharacterSeries, b: &CharacterSeries) -> Result<CharacterSeries> {
    a.exact_div(b)
}

pub fn extract_polynomial(a: &CharacterSeries) -> Result<TPolynomial> {
    a.extract_polynomial()
}

pub fn evaluate_at_one(p: &TPolynomial) -> i64 {
    p.evaluate_at_one()
}

/// Hilbert–Samuel multiplicity of a character `p(t)/(1-t)^d` coming from an
/// ideal with length sequence `lengths` (`lengths[i] = dim R/I^i`).
///
/// Returns `p(1)` after checking it against the `d`-th finite difference of
/// the length sequence at its last available index.
pub fn multiplicity(series: &CharacterSeries, dim: usize, lengths: &[u64]) -> Result<i64> {
    if series.exponent() as usize != dim {
        return Err(Error::Invariant(format!(
            "multiplicity needs denominator exponent {dim}, got {}",
            series.exponent()
        )));
    }
    let e = series.numerator().evaluate_at_one();
    if lengths.len() <= dim {
        return Err(Error::Invariant("length sequence too short for the cross-check".into()));
    }
    let mut diffs: Vec<i64> = lengths.iter().map(|&l| l as i64).collect();
    for _ in 0..dim {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let stabilized = *diffs.last().unwrap();
    if stabilized != e {
        return Err(Error::MultiplicityMismatch { series: e, differences: stabilized });
    }
    Ok(e)
}
