//! The K-theoretic Fulton class of a zero-dimensional scheme and the checks
//! built on it: independence of the embedding, the degree bound, and the
//! comparison with the symmetric algebra of the conormal module.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{integer, AmbientRing, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::filtration::{
    default_truncation, default_window, AssocGradedCharacter, Certification, Filtration,
};
use crate::groebner::Ideal;
use crate::kcharacter::{CharacterSeries, TPolynomial};
use crate::linalg;

/// A zero-dimensional affine scheme `Spec R/I`.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    pub label: String,
    pub ideal: Ideal,
    pub point: Option<Vec<Rational>>,
    pub claimed_embedding_dim: Option<usize>,
}

impl SchemeSpec {
    pub fn new(label: impl Into<String>, ideal: Ideal) -> Self {
        SchemeSpec { label: label.into(), ideal, point: None, claimed_embedding_dim: None }
    }

    /// Attaches a point, which must lie on the scheme.
    pub fn with_point(mut self, point: Vec<Rational>) -> Result<Self> {
        if point.len() != self.dim() {
            return Err(Error::PointArity { expected: self.dim(), got: point.len() });
        }
        for g in self.ideal.generators() {
            if !g.evaluate(&point)?.is_zero() {
                return Err(Error::PointNotOnScheme(g.to_string()));
            }
        }
        self.point = Some(point);
        Ok(self)
    }

    pub fn ring(&self) -> &Arc<AmbientRing> {
        self.ideal.ring()
    }

    pub fn dim(&self) -> usize {
        self.ideal.dim()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FultonOptions {
    pub window: Option<usize>,
    pub truncation: Option<usize>,
}

/// The class `sum (-1)^i chi(Lambda^i) t^i`, pushed to a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FultonClass {
    pub text: String,
    pub coeffs: TPolynomial,
    pub chi_lambda: Vec<i64>,
    pub degree: usize,
    pub d: usize,
    pub length: u64,
    pub gr_character: CharacterSeries,
    pub lengths: Vec<u64>,
    pub certification: Certification,
}

impl FultonClass {
    pub fn as_series(&self) -> CharacterSeries {
        CharacterSeries::polynomial(self.coeffs.clone())
    }

    /// Hilbert–Samuel multiplicity, cross-checked against the lengths.
    pub fn multiplicity(&self) -> Result<i64> {
        crate::kcharacter::multiplicity(&self.gr_character, self.d, &self.lengths)
    }
}

fn assemble(d: usize, agc: AssocGradedCharacter) -> Result<FultonClass> {
    let series = agc.series.mul(&CharacterSeries::one_minus_t(d as i64));
    let coeffs = series.extract_polynomial()?;
    let degree = coeffs.degree();
    if degree > d {
        return Err(Error::DegreeBound { degree, bound: d });
    }
    let length = agc.lengths.values[1];
    if coeffs.coeff(0) != length as i64 {
        return Err(Error::Invariant(format!(
            "constant term {} differs from the length {length}",
            coeffs.coeff(0)
        )));
    }
    let chi_lambda = coeffs
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 0 { c } else { -c })
        .collect();
    Ok(FultonClass {
        text: coeffs.to_string(),
        coeffs,
        chi_lambda,
        degree,
        d,
        length,
        gr_character: agc.series,
        lengths: agc.lengths.values,
        certification: agc.certification,
    })
}

/// Computes the Fulton class from the associated graded character.
pub fn fulton_class(spec: &SchemeSpec, options: FultonOptions) -> Result<FultonClass> {
    let mut filtration = Filtration::new(&spec.ideal)?;
    fulton_class_with(&mut filtration, options)
}

/// Same as [`fulton_class`], reusing an existing filtration.
pub fn fulton_class_with(filtration: &mut Filtration, options: FultonOptions) -> Result<FultonClass> {
    let d = filtration.dim();
    let window = options.window.unwrap_or_else(|| default_window(d));
    let truncation = options.truncation.unwrap_or_else(|| default_truncation(d));
    let agc = filtration.assoc_graded_character(window, truncation)?;
    assemble(d, agc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub first: String,
    pub second: String,
    pub first_dim: usize,
    pub second_dim: usize,
    pub first_coeffs: TPolynomial,
    pub second_coeffs: TPolynomial,
    pub verdict: &'static str,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

/// Compares the Fulton classes of two presentations of the same scheme.
pub fn embedding_independence_check(
    a: &SchemeSpec,
    b: &SchemeSpec,
    options: FultonOptions,
) -> Result<EmbeddingReport> {
    let la = a.ideal.quotient_length()?.finite()?;
    let lb = b.ideal.quotient_length()?.finite()?;
    if la != lb {
        return Err(Error::LengthMismatch(la, lb));
    }
    let fa = fulton_class(a, options)?;
    let fb = fulton_class(b, options)?;
    Ok(compare_classes(a, b, &fa, &fb))
}

pub fn compare_classes(a: &SchemeSpec, b: &SchemeSpec, fa: &FultonClass, fb: &FultonClass) -> EmbeddingReport {
    EmbeddingReport {
        first: a.label.clone(),
        second: b.label.clone(),
        first_dim: a.dim(),
        second_dim: b.dim(),
        first_coeffs: fa.coeffs.clone(),
        second_coeffs: fb.coeffs.clone(),
        verdict: if fa.coeffs == fb.coeffs { "PASS" } else { "FAIL" },
    }
}

/// How to produce a second embedding of the same scheme.
#[derive(Debug, Clone)]
pub enum ReembedMode {
    /// Add a variable `z` and the generator `z - g` (`g = 0` if absent).
    Slack { g: Option<Polynomial> },
    /// Apply an invertible integer change of variables drawn from `seed`.
    LinearAutomorphism { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReembedInfo {
    pub mode: String,
    pub seed: Option<u64>,
    /// Row `i` gives the image of variable `i` as integer coefficients.
    pub matrix: Option<Vec<Vec<i64>>>,
    pub draws: usize,
}

const MAX_AUTOMORPHISM_DRAWS: usize = 32;

/// Re-embeds a scheme; the result presents an isomorphic scheme.
pub fn reembed(spec: &SchemeSpec, mode: &ReembedMode) -> Result<(SchemeSpec, ReembedInfo)> {
    match mode {
        ReembedMode::Slack { g } => {
            let ring = spec.ring();
            let z = ring.fresh_name("z");
            let target = ring.extended(&[z])?;
            let zvar = Polynomial::variable(&target, ring.dim());
            let mut gens: Vec<Polynomial> =
                spec.ideal.generators().iter().map(|p| p.extend_to(&target)).collect();
            let (slack, z_value) = match g {
                Some(g) => {
                    if !g.same_ring(&Polynomial::zero(ring)) {
                        return Err(Error::RingMismatch);
                    }
                    let z_value = match &spec.point {
                        Some(p) => Some(g.evaluate(p)?),
                        None => None,
                    };
                    (&zvar - &g.extend_to(&target), z_value)
                }
                None => (zvar, Some(Rational::zero())),
            };
            gens.push(slack);
            let ideal = Ideal::new(&target, gens)?.with_spair_budget(spec.ideal.spair_budget());
            let suffix = if g.is_some() { "+slack(g)" } else { "+slack" };
            let point = match (&spec.point, z_value) {
                (Some(p), Some(zv)) => Some(p.iter().cloned().chain([zv]).collect()),
                _ => None,
            };
            let out = SchemeSpec {
                label: format!("{}{suffix}", spec.label),
                ideal,
                point,
                claimed_embedding_dim: None,
            };
            let info = ReembedInfo { mode: "slack".into(), seed: None, matrix: None, draws: 0 };
            Ok((out, info))
        }
        ReembedMode::LinearAutomorphism { seed } => {
            let n = spec.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for draw in 1..=MAX_AUTOMORPHISM_DRAWS {
                let matrix: Vec<Vec<i64>> =
                    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
                let rational: Vec<Vec<Rational>> =
                    matrix.iter().map(|r| r.iter().map(|&x| integer(x)).collect()).collect();
                let Some(inverse) = linalg::inverse(&rational) else {
                    continue;
                };
                let ring = spec.ring();
                // x_i -> sum_j A_ij x_j
                let images: Vec<Polynomial> = rational
                    .iter()
                    .map(|row| {
                        let terms = row.iter().enumerate().map(|(j, c)| {
                            (crate::algebra::Monomial::var_power(n, j, 1), c.clone())
                        });
                        Polynomial::from_terms(ring, terms)
                    })
                    .collect();
                let gens = spec
                    .ideal
                    .generators()
                    .iter()
                    .map(|p| p.substitute(&images, ring))
                    .collect::<Result<Vec<_>>>()?;
                let ideal = Ideal::new(ring, gens)?.with_spair_budget(spec.ideal.spair_budget());
                // the image point q satisfies A q = p
                let point = spec.point.as_ref().map(|p| {
                    inverse
                        .iter()
                        .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
                        .collect()
                });
                let out = SchemeSpec {
                    label: format!("{}+auto({seed})", spec.label),
                    ideal,
                    point,
                    claimed_embedding_dim: spec.claimed_embedding_dim,
                };
                let info = ReembedInfo {
                    mode: "linear-automorphism".into(),
                    seed: Some(*seed),
                    matrix: Some(matrix),
                    draws: draw,
                };
                return Ok((out, info));
            }
            Err(Error::NonInvertible(MAX_AUTOMORPHISM_DRAWS))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeBoundReport {
    pub degree: usize,
    pub ambient_dim: usize,
    pub bound_kind: &'static str,
    pub tangent_dim: Option<usize>,
    pub point: Option<Vec<String>>,
    pub claimed_embedding_dim: Option<usize>,
    /// `PASS`, `NEEDS-REVIEW` (tangent bound exceeded) or `FAIL`.
    pub status: &'static str,
}

/// Checks `deg P <= tangent dimension <= d` at the supplied point, or at the
/// origin when it lies on the scheme.
pub fn degree_bound_check(spec: &SchemeSpec, options: FultonOptions) -> Result<DegreeBoundReport> {
    let class = fulton_class(spec, options)?;
    degree_bound_report(spec, &class)
}

pub fn degree_bound_report(spec: &SchemeSpec, class: &FultonClass) -> Result<DegreeBoundReport> {
    let origin = vec![Rational::zero(); spec.dim()];
    let point = match &spec.point {
        Some(p) => Some(p.clone()),
        None => {
            let on_scheme = spec
                .ideal
                .generators()
                .iter()
                .map(|g| g.evaluate(&origin).map(|v| v.is_zero()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            on_scheme.then_some(origin)
        }
    };
    let tangent_dim = match &point {
        Some(p) => Some(spec.ideal.tangent_dimension(p)?),
        None => None,
    };
    let ambient_ok = class.degree <= spec.dim();
    let tangent_ok = tangent_dim.is_none_or(|t| class.degree <= t);
    let claimed_ok = spec.claimed_embedding_dim.is_none_or(|e| class.degree <= e);
    let status = if !ambient_ok {
        "FAIL"
    } else if !tangent_ok || !claimed_ok {
        "NEEDS-REVIEW"
    } else {
        "PASS"
    };
    Ok(DegreeBoundReport {
        degree: class.degree,
        ambient_dim: spec.dim(),
        bound_kind: "tangent-dimension bound",
        tangent_dim,
        point: point.map(|p| p.iter().map(ToString::to_string).collect()),
        claimed_embedding_dim: spec.claimed_embedding_dim,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LciReport {
    pub max_weight: usize,
    pub sym_dims: Vec<u64>,
    pub gr_dims: Vec<u64>,
    pub first_strict_weight: Option<usize>,
    /// `PASS-lci` when the dimensions agree up to `max_weight`.
    pub verdict: &'static str,
    pub complete_intersection: bool,
    /// `(1-t)^d * sum dim Sym^i t^i`, when the presentation is a complete
    /// intersection.
    pub lambda_ll: Option<TPolynomial>,
    pub identity_holds: Option<bool>,
}

impl LciReport {
    /// A complete intersection must pass, and the identity must hold.
    pub fn consistent(&self) -> bool {
        !self.complete_intersection
            || (self.verdict == "PASS-lci" && self.identity_holds == Some(true))
    }
}

pub fn lci_check(spec: &SchemeSpec, max_weight: usize, options: FultonOptions) -> Result<LciReport> {
    let mut filtration = Filtration::new(&spec.ideal)?;
    let class = fulton_class_with(&mut filtration, options)?;
    lci_report(&mut filtration, &class, max_weight)
}

pub fn lci_report(filtration: &mut Filtration, class: &FultonClass, max_weight: usize) -> Result<LciReport> {
    let sym = filtration.sym_power_dims(max_weight)?;
    let lengths = filtration.length_sequence(max_weight + 1)?;
    let gr_dims = lengths.differences();
    let mut first_strict = None;
    for (i, (s, g)) in sym.dims.iter().zip(&gr_dims).enumerate() {
        if s < g {
            return Err(Error::Invariant(format!(
                "Sym^{i} has dimension {s} below the graded piece dimension {g}"
            )));
        }
        if s > g && first_strict.is_none() {
            first_strict = Some(i);
        }
    }
    let d = filtration.dim();
    let complete_intersection = filtration.ideal().generators().len() == d;
    let (lambda_ll, identity_holds) = if complete_intersection {
        let ll = sym.series.mul(&CharacterSeries::one_minus_t(d as i64)).extract_polynomial()?;
        let holds = ll == class.coeffs;
        (Some(ll), Some(holds))
    } else {
        (None, None)
    };
    Ok(LciReport {
        max_weight,
        sym_dims: sym.dims,
        gr_dims,
        first_strict_weight: first_strict,
        verdict: if first_strict.is_none() { "PASS-lci" } else { "FAIL-lci" },
        complete_intersection,
        lambda_ll,
        identity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ideal;

    fn scheme(vars: &[&str], gens: &[&str]) -> SchemeSpec {
        let ring = AmbientRing::new(vars.iter().copied()).unwrap();
        SchemeSpec::new(gens.join(","), parse_ideal(&ring, gens).unwrap())
    }

    fn class(vars: &[&str], gens: &[&str]) -> FultonClass {
        fulton_class(&scheme(vars, gens), FultonOptions::default()).unwrap()
    }

    #[test]
    fn worked_classes() {
        assert_eq!(class(&["x", "y", "z"], &["x", "y", "z"]).coeffs, TPolynomial::constant(1));
        assert_eq!(class(&["x"], &["x^2"]).coeffs, TPolynomial::constant(2));
        let c = class(&["x", "y"], &["x^2", "x*y", "y^2"]);
        assert_eq!(c.coeffs, TPolynomial::new(vec![3, 1]));
        assert_eq!(c.chi_lambda, vec![3, -1]);
        assert_eq!(c.text, "3 + t");
        assert_eq!(c.length, 3);
        assert_eq!(class(&["x", "y"], &["x^2", "y"]).coeffs, TPolynomial::constant(2));
        assert_eq!(class(&["x"], &["x^3 - 3*x^2 + 2*x"]).coeffs, TPolynomial::constant(3));
    }

    #[test]
    fn constant_term_is_the_length() {
        for gens in [&["x^2", "y^3"][..], &["x^2", "x*y", "y^3"], &["x^3", "y^2 - x^2"]] {
            let spec = scheme(&["x", "y"], gens);
            let c = fulton_class(&spec, FultonOptions::default()).unwrap();
            let len = spec.ideal.quotient_length().unwrap().finite().unwrap();
            assert_eq!(c.coeffs.coeff(0), len as i64);
            assert!(c.degree <= 2);
        }
    }

    #[test]
    fn monomial_complete_intersections_multiply_exponents() {
        let c = class(&["x", "y"], &["x^2", "y^3"]);
        assert_eq!(c.coeffs.evaluate_at_one(), 6);
        assert_eq!(c.multiplicity().unwrap(), 6);
    }

    #[test]
    fn embedding_independence() {
        let opts = FultonOptions::default();
        let r = embedding_independence_check(
            &scheme(&["x"], &["x^2"]),
            &scheme(&["x", "y"], &["x^2", "y"]),
            opts,
        )
        .unwrap();
        assert!(r.passed());
        let r = embedding_independence_check(
            &scheme(&["x", "y"], &["x", "y"]),
            &scheme(&["x"], &["x"]),
            opts,
        )
        .unwrap();
        assert!(r.passed());
        let err = embedding_independence_check(
            &scheme(&["x"], &["x^2"]),
            &scheme(&["x"], &["x^3"]),
            opts,
        )
        .unwrap_err();
        assert_eq!(err, Error::LengthMismatch(2, 3));
    }

    #[test]
    fn slack_reembedding() {
        let spec = scheme(&["x"], &["x^2"]);
        let (out, _) = reembed(&spec, &ReembedMode::Slack { g: None }).unwrap();
        assert_eq!(out.ring().variables(), ["x", "z"]);
        assert_eq!(out.ideal.to_string(), "<x^2, z>");
        let g = crate::parse::parse_polynomial("x", spec.ring()).unwrap();
        let (out, _) = reembed(&spec, &ReembedMode::Slack { g: Some(g) }).unwrap();
        assert_eq!(out.ideal.generators()[1].to_string(), "-x + z");
        let a = fulton_class(&spec, FultonOptions::default()).unwrap();
        let b = fulton_class(&out, FultonOptions::default()).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn automorphisms_are_seeded_and_preserve_the_class() {
        let spec = scheme(&["x", "y"], &["x^2", "x*y", "y^3"])
            .with_point(vec![integer(0), integer(0)])
            .unwrap();
        let (a, ia) = reembed(&spec, &ReembedMode::LinearAutomorphism { seed: 7 }).unwrap();
        let (b, ib) = reembed(&spec, &ReembedMode::LinearAutomorphism { seed: 7 }).unwrap();
        assert_eq!(ia, ib);
        assert_eq!(a.ideal.generators(), b.ideal.generators());
        assert_eq!(a.point, Some(vec![integer(0), integer(0)]));
        let base = fulton_class(&spec, FultonOptions::default()).unwrap();
        for seed in 0..4 {
            let (img, _) = reembed(&spec, &ReembedMode::LinearAutomorphism { seed }).unwrap();
            let c = fulton_class(&img, FultonOptions::default()).unwrap();
            assert_eq!(c.coeffs, base.coeffs, "seed {seed}");
        }
    }

    #[test]
    fn automorphism_moves_the_point() {
        let spec = scheme(&["x", "y"], &["(x-1)^2", "y - 2"])
            .with_point(vec![integer(1), integer(2)])
            .unwrap();
        let (img, _) = reembed(&spec, &ReembedMode::LinearAutomorphism { seed: 3 }).unwrap();
        let p = img.point.clone().unwrap();
        for g in img.ideal.generators() {
            assert!(g.evaluate(&p).unwrap().is_zero());
        }
    }

    #[test]
    fn points_must_lie_on_the_scheme() {
        let spec = scheme(&["x"], &["x^2"]);
        assert!(matches!(
            spec.clone().with_point(vec![integer(1)]),
            Err(Error::PointNotOnScheme(_))
        ));
        assert!(matches!(spec.with_point(vec![]), Err(Error::PointArity { .. })));
    }

    #[test]
    fn degree_bounds() {
        let opts = FultonOptions::default();
        let r = degree_bound_check(&scheme(&["x", "y"], &["x^2", "y"]), opts).unwrap();
        assert_eq!((r.degree, r.tangent_dim, r.ambient_dim, r.status), (0, Some(1), 2, "PASS"));
        let r = degree_bound_check(&scheme(&["x", "y"], &["x^2", "x*y", "y^2"]), opts).unwrap();
        assert_eq!((r.degree, r.tangent_dim, r.status), (1, Some(2), "PASS"));
        let r = degree_bound_check(&scheme(&["x"], &["x"]), opts).unwrap();
        assert_eq!((r.degree, r.tangent_dim), (0, Some(0)));
        let r = degree_bound_check(&scheme(&["x"], &["x^2 - 1"]), opts).unwrap();
        assert_eq!(r.tangent_dim, None);
        assert_eq!(r.status, "PASS");
    }

    #[test]
    fn lci_reports() {
        let r = lci_check(&scheme(&["x"], &["x^2"]), 5, FultonOptions::default()).unwrap();
        assert_eq!(r.verdict, "PASS-lci");
        assert_eq!(r.sym_dims, vec![2; 6]);
        assert_eq!(r.lambda_ll, Some(TPolynomial::constant(2)));
        assert!(r.consistent());
        let r = lci_check(&scheme(&["x", "y"], &["x", "y"]), 5, FultonOptions::default()).unwrap();
        assert_eq!(r.verdict, "PASS-lci");
        assert_eq!(r.lambda_ll, Some(TPolynomial::constant(1)));
        let r = lci_check(&scheme(&["x", "y"], &["x^2", "x*y", "y^2"]), 5, FultonOptions::default())
            .unwrap();
        assert_eq!(r.verdict, "FAIL-lci");
        assert_eq!(r.first_strict_weight, Some(2));
        assert!(!r.complete_intersection);
        let r = lci_check(&scheme(&["x", "y"], &["x^2", "y^3"]), 5, FultonOptions::default()).unwrap();
        assert_eq!(r.verdict, "PASS-lci");
        assert_eq!(r.identity_holds, Some(true));
    }
}
