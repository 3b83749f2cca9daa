use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::algebra::{AmbientRing, Monomial, MonomialOrder, Polynomial, integer};
use crate::error::Error;
use crate::kcharacter::{CharacterSeries, TPolynomial};
use crate::parse::parse_polynomial;

fn ring(vars: &[&str]) -> Arc<AmbientRing> {
    AmbientRing::new(vars.iter().copied()).unwrap()
}

fn ideal(r: &Arc<AmbientRing>, gens: &[&str]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| parse_polynomial(g, r).unwrap()).collect()).unwrap()
}

fn basis_strings(gb: &GroebnerBasis) -> Vec<String> {
    gb.elements().iter().map(ToString::to_string).collect()
}

#[test]
fn basis_examples() {
    let r = ring(&["x", "y"]);
    let gb = ideal(&r, &["x^2", "x*y"]).grevlex_basis().unwrap();
    assert_eq!(basis_strings(&gb), vec!["x*y", "x^2"]);

    let gb = ideal(&r, &["x"]).groebner_basis(MonomialOrder::Lex).unwrap();
    assert_eq!(basis_strings(&gb), vec!["x"]);

    let gb = ideal(&r, &["x+y", "x-y"]).grevlex_basis().unwrap();
    assert_eq!(basis_strings(&gb), vec!["y", "x"]);
}

#[test]
fn normal_form_examples() {
    let r = ring(&["x", "y"]);
    let gb = ideal(&r, &["x^2", "x*y"]).grevlex_basis().unwrap();
    let nf = |s: &str| normal_form(&parse_polynomial(s, &r).unwrap(), &gb).unwrap().to_string();
    assert_eq!(nf("x^2"), "0");
    assert_eq!(nf("x^2*y + x"), "x");
    let gb = ideal(&r, &["x", "y"]).grevlex_basis().unwrap();
    assert_eq!(normal_form(&Polynomial::one(&r), &gb).unwrap().to_string(), "1");
}

#[test]
fn normal_form_rejects_foreign_ring() {
    let r = ring(&["x", "y"]);
    let gb = ideal(&r, &["x"]).grevlex_basis().unwrap();
    let other = Polynomial::variable(&ring(&["u"]), 0);
    assert_eq!(gb.normal_form(&other).unwrap_err(), Error::RingMismatch);
}

#[test]
fn power_examples() {
    let r = ring(&["x", "y"]);
    let sq = ideal_power(&ideal(&r, &["x", "y"]), 2);
    let gens: Vec<String> = sq.grevlex_basis().unwrap().elements().iter().map(ToString::to_string).collect();
    assert_eq!(gens, vec!["y^2", "x*y", "x^2"]);

    let zero = ideal_power(&ideal(&r, &["x", "y"]), 0);
    assert!(zero.grevlex_basis().unwrap().is_unit());

    let sq = ideal_power(&ideal(&r, &["x^2", "y"]), 2);
    let mut gens: Vec<String> = sq.generators().iter().map(ToString::to_string).collect();
    gens.sort();
    assert_eq!(gens, vec!["x^2*y", "x^4", "y^2"]);
}

#[test]
fn length_examples() {
    let r1 = ring(&["x"]);
    assert_eq!(quotient_length(&ideal(&r1, &["x^3"])).unwrap(), QuotientLength::Finite(3));
    let r = ring(&["x", "y"]);
    assert_eq!(quotient_length(&ideal(&r, &["x^2", "y"])).unwrap(), QuotientLength::Finite(2));
    assert_eq!(quotient_length(&ideal(&r, &["y"])).unwrap(), QuotientLength::Infinite);
}

#[test]
fn standard_monomial_examples() {
    let r = ring(&["x", "y"]);
    let show = |gens: &[&str]| -> Vec<String> {
        let i = ideal(&r, gens);
        standard_monomials(&i)
            .unwrap()
            .monomials()
            .iter()
            .map(|m| Polynomial::monomial(&r, m.clone(), integer(1)).to_string())
            .collect()
    };
    assert_eq!(show(&["x^2", "x*y", "y^2"]), vec!["1", "x", "y"]);
    assert_eq!(show(&["x", "y"]), vec!["1"]);
    assert_eq!(show(&["x^2", "y^3"]), vec!["1", "x", "y", "x*y", "y^2", "x*y^2"]);
    assert_eq!(standard_monomials(&ideal(&r, &["y"])).unwrap_err(), Error::InfiniteQuotient);
}

#[test]
fn hilbert_series_from_leading_terms() {
    let r = ring(&["x", "y"]);
    let lead = ideal(&r, &["x^2", "x*y", "y^2"]).grevlex_basis().unwrap().leading_ideal();
    assert_eq!(
        monomial_hilbert_series(&lead, &[1, 1]).unwrap(),
        CharacterSeries::polynomial(TPolynomial::new(vec![1, 2]))
    );
}

#[test]
fn tangent_dimension_examples() {
    let r = ring(&["x", "y"]);
    let origin = vec![integer(0), integer(0)];
    assert_eq!(tangent_dimension(&ideal(&r, &["x^2", "y"]), &origin).unwrap(), 1);
    assert_eq!(tangent_dimension(&ideal(&r, &["x", "y"]), &origin).unwrap(), 0);
    assert_eq!(tangent_dimension(&ideal(&r, &["x^2", "x*y", "y^2"]), &origin).unwrap(), 2);
    assert!(matches!(
        tangent_dimension(&ideal(&r, &["x - 1", "y"]), &origin),
        Err(Error::PointNotOnScheme(_))
    ));
}

#[test]
fn budget_is_enforced() {
    let r = ring(&["x", "y", "z"]);
    let i = ideal(&r, &["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"]).with_spair_budget(2);
    assert_eq!(i.grevlex_basis().unwrap_err(), Error::ResourceLimit { budget: 2 });
}

#[test]
fn cache_returns_same_basis() {
    let r = ring(&["x", "y"]);
    let i = ideal(&r, &["x^2 - y", "y^2 - x"]);
    let a = i.grevlex_basis().unwrap();
    let b = i.grevlex_basis().unwrap();
    assert!(Arc::ptr_eq(&a, &b));
    let c = i.clone();
    assert!(Arc::ptr_eq(&a, &c.grevlex_basis().unwrap()));
}

/// Every S-polynomial of a returned basis reduces to zero, every generator
/// reduces to zero, and the basis is auto-reduced.
fn assert_reduced_groebner(i: &Ideal, order: MonomialOrder) {
    let gb = i.groebner_basis(order).unwrap();
    let elems = gb.elements();
    for g in i.generators() {
        assert!(gb.normal_form(g).unwrap().is_zero(), "generator {g} does not reduce");
    }
    let lms = gb.leading_monomials();
    for (a, la) in lms.iter().enumerate() {
        for (b, lb) in lms.iter().enumerate() {
            if a != b {
                assert!(!la.divides(lb));
            }
        }
        // tails are fully reduced
        for (m, _) in elems[a].terms() {
            if m != la {
                assert!(lms.iter().all(|l| !l.divides(m)));
            }
        }
    }
    for a in 0..elems.len() {
        for b in a + 1..elems.len() {
            let lcm = lms[a].lcm(&lms[b]);
            let lead_coeff = |p: &Polynomial, lm: &Monomial| {
                p.terms().iter().find(|(m, _)| m == lm).unwrap().1.clone()
            };
            let fa = Polynomial::monomial(i.ring(), lms[a].quotient_of(&lcm).unwrap(), integer(1) / lead_coeff(&elems[a], &lms[a]));
            let fb = Polynomial::monomial(i.ring(), lms[b].quotient_of(&lcm).unwrap(), integer(1) / lead_coeff(&elems[b], &lms[b]));
            let s = &(&fa * &elems[a]) - &(&fb * &elems[b]);
            assert!(gb.normal_form(&s).unwrap().is_zero());
        }
    }
}

#[test]
fn buchberger_correctness_on_examples() {
    let r = ring(&["x", "y", "z"]);
    for gens in [
        &["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"][..],
        &["x*y - z", "y*z - x", "z*x - y"],
        &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
        &["(x+y+z)^2", "(x-y)^3", "z^4"],
    ] {
        let i = ideal(&r, gens);
        for order in [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::Block { split: 1 }] {
            assert_reduced_groebner(&i, order);
        }
    }
}

#[test]
fn power_product_consistency() {
    let r = ring(&["x", "y"]);
    let i = ideal(&r, &["x^2 - y", "x*y", "y^2"]);
    let prod = i.power(2).product(&i.power(1)).unwrap();
    assert_eq!(prod.quotient_length().unwrap(), i.power(3).quotient_length().unwrap());
}

fn arb_monomial_ideal() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1usize..=3).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(prop::collection::vec(0u32..4, n), 0..5))
    })
}

fn arb_binomial_ideal() -> impl Strategy<Value = Vec<(Vec<u32>, Vec<u32>, i64)>> {
    // pure powers guarantee zero-dimensionality; binomials add structure
    prop::collection::vec((prop::collection::vec(0u32..3, 2), prop::collection::vec(0u32..3, 2), -2i64..3), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hilbert_series_matches_counting((n, gens) in arb_monomial_ideal()) {
        let j = MonomialIdeal::new(n, gens.into_iter().map(Monomial::from_exponents));
        let series = monomial_hilbert_series(&j, &vec![1; n]).unwrap();
        let coeffs = series.expand(10);
        // count monomials of each degree outside the ideal
        let mut counts = vec![0i64; 11];
        let mut stack = vec![Vec::<u32>::new()];
        while let Some(e) = stack.pop() {
            if e.len() == n {
                let m = Monomial::from_exponents(e.clone());
                let d = m.degree() as usize;
                if d <= 10 && !j.contains(&m) {
                    counts[d] += 1;
                }
                continue;
            }
            let used: u32 = e.iter().sum();
            for k in 0..=(10 - used) {
                let mut e2 = e.clone();
                e2.push(k);
                stack.push(e2);
            }
        }
        prop_assert_eq!(coeffs, counts);
    }

    #[test]
    fn length_is_order_independent(extra in arb_binomial_ideal(), a in 1u32..4, b in 1u32..4) {
        let r = ring(&["x", "y"]);
        let mut gens = vec![parse_polynomial(&format!("x^{a}"), &r).unwrap(), parse_polynomial(&format!("y^{b}"), &r).unwrap()];
        for (m1, m2, c) in extra {
            gens.push(&Polynomial::monomial(&r, Monomial::from_exponents(m1), integer(1))
                + &Polynomial::monomial(&r, Monomial::from_exponents(m2), integer(c)));
        }
        let i = Ideal::new(&r, gens).unwrap();
        let grevlex = i.groebner_basis(MonomialOrder::GrevLex).unwrap();
        let lex = i.groebner_basis(MonomialOrder::Lex).unwrap();
        let lg = grevlex.quotient_length().unwrap();
        prop_assert_eq!(lg, lex.quotient_length().unwrap());
        if let QuotientLength::Finite(n) = lg {
            prop_assert_eq!(grevlex.standard_monomials().unwrap().len(), n);
        }
        assert_reduced_groebner(&i, MonomialOrder::GrevLex);
    }
}
