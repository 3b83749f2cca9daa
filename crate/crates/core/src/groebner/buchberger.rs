use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{AmbientRing, Monomial, MonomialOrder, Polynomial, Rational};
use crate::error::{Error, Result};

type Terms = Vec<(Monomial, Rational)>;

/// Polynomial with terms sorted decreasingly in a working order.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct OrderedPoly {
    pub(crate) terms: Terms,
}

impl OrderedPoly {
    pub(crate) fn from_polynomial(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms: Terms = p.terms().to_vec();
        if order != MonomialOrder::GrevLex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        OrderedPoly { terms }
    }

    pub(crate) fn to_polynomial(&self, ring: &Arc<AmbientRing>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self) {
        let lc = self.terms[0].1.clone();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            for (_, c) in self.terms.iter_mut() {
                *c *= &inv;
            }
        }
    }
}

/// `p - c * m * g`, where all inputs are sorted decreasingly.
fn sub_scaled(p: &[(Monomial, Rational)], c: &Rational, m: &Monomial, g: &[(Monomial, Rational)], order: MonomialOrder) -> Terms {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut shifted: Option<(Monomial, Rational)> = g.first().map(|(gm, gc)| (gm.mul(m), gc * c));
    while i < p.len() || shifted.is_some() {
        let ord = match (&shifted, p.get(i)) {
            (None, _) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some((sm, _)), Some((pm, _))) => order.cmp(pm, sm),
        };
        match ord {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (sm, sc) = shifted.take().unwrap();
                out.push((sm, -sc));
                j += 1;
                shifted = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
            }
            Ordering::Equal => {
                let (sm, sc) = shifted.take().unwrap();
                let v = &p[i].1 - sc;
                if !v.is_zero() {
                    out.push((sm, v));
                }
                i += 1;
                j += 1;
                shifted = g.get(j).map(|(gm, gc)| (gm.mul(m), gc * c));
            }
        }
    }
    out
}

/// Full reduction (leading and tail terms) against monic divisors.
pub(crate) fn reduce(f: &OrderedPoly, divisors: &[&OrderedPoly], order: MonomialOrder) -> OrderedPoly {
    let mut p: Terms = f.terms.clone();
    let mut start = 0;
    let mut rem: Terms = Vec::new();
    while start < p.len() {
        let (lm, lc) = &p[start];
        let divisor = divisors.iter().find(|g| g.lm().divides(lm));
        match divisor {
            Some(g) => {
                let q = g.lm().quotient_of(lm).unwrap();
                let c = lc.clone();
                p = sub_scaled(&p[start + 1..], &c, &q, &g.terms[1..], order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    OrderedPoly { terms: rem }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn s_polynomial(a: &OrderedPoly, b: &OrderedPoly, lcm: &Monomial, order: MonomialOrder) -> OrderedPoly {
    let ma = a.lm().quotient_of(lcm).unwrap();
    let mb = b.lm().quotient_of(lcm).unwrap();
    // both monic: S = ma*a - mb*b, leading terms cancel
    let shifted_a: Terms = a.terms[1..].iter().map(|(m, c)| (m.mul(&ma), c.clone())).collect();
    OrderedPoly { terms: sub_scaled(&shifted_a, &Rational::one(), &mb, &b.terms[1..], order) }
}

fn is_lcm(a: &Monomial, b: &Monomial, target: &Monomial) -> bool {
    a.exponents().iter().zip(b.exponents()).zip(target.exponents()).all(|((x, y), t)| x.max(y) == t)
}

fn pair_order(a: &Pair, b: &Pair, order: MonomialOrder) -> Ordering {
    order.cmp(&a.lcm, &b.lcm).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j))
}

/// Reduced Gröbner basis by Buchberger's algorithm with the Gebauer–Möller
/// installation of the coprime and chain criteria.
///
/// `budget` bounds the number of critical pairs that survive the criteria
/// and are queued for reduction.
pub(crate) fn buchberger(inputs: Vec<OrderedPoly>, order: MonomialOrder, budget: usize) -> Result<Vec<OrderedPoly>> {
    let mut inputs: Vec<OrderedPoly> = inputs.into_iter().filter(|p| !p.is_zero()).collect();
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    if inputs.iter().all(|p| p.terms.len() == 1) {
        return Ok(minimal_monomial_basis(inputs, order));
    }
    // process low leading terms first
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));

    let mut basis: Vec<OrderedPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut queued = 0usize;

    let mut install = |h: OrderedPoly,
                       basis: &mut Vec<OrderedPoly>,
                       active: &mut Vec<bool>,
                       pairs: &mut Vec<Pair>|
     -> Result<()> {
        let t = basis.len();
        let hl = h.lm().clone();
        let mut candidates: Vec<Pair> = (0..t)
            .filter(|&i| active[i])
            .map(|i| Pair { i, j: t, lcm: basis[i].lm().lcm(&hl) })
            .collect();
        // criterion M: drop a pair whose lcm is divisible by another new
        // pair's lcm; among equal lcms a coprime pair wins and is dropped
        candidates.sort_by_key(|p| (p.lcm.degree(), !basis[p.i].lm().is_coprime(&hl), p.i));
        let mut kept: Vec<(Pair, bool)> = Vec::new();
        for p in candidates {
            if kept.iter().any(|(q, _)| q.lcm.divides(&p.lcm)) {
                continue;
            }
            let coprime = basis[p.i].lm().is_coprime(&hl);
            kept.push((p, coprime));
        }
        let fresh: Vec<Pair> = kept.into_iter().filter(|(_, c)| !c).map(|(p, _)| p).collect();
        queued += fresh.len();
        if queued > budget {
            return Err(Error::ResourceLimit { budget });
        }
        pairs.retain(|p| {
            !(hl.divides(&p.lcm)
                && !is_lcm(basis[p.i].lm(), &hl, &p.lcm)
                && !is_lcm(basis[p.j].lm(), &hl, &p.lcm))
        });
        if !fresh.is_empty() {
            pairs.extend(fresh);
            // largest first, so the next pair is popped from the end
            pairs.sort_by(|a, b| pair_order(b, a, order));
        }
        for i in 0..t {
            if active[i] && hl.divides(basis[i].lm()) {
                active[i] = false;
            }
        }
        basis.push(h);
        active.push(true);
        Ok(())
    };

    for mut f in inputs {
        let current: Vec<&OrderedPoly> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(g, _)| g).collect();
        f = reduce(&f, &current, order);
        if f.is_zero() {
            continue;
        }
        f.make_monic();
        install(f, &mut basis, &mut active, &mut pairs)?;
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index for determinism
        let pair = pairs.pop().unwrap();
        let s = s_polynomial(&basis[pair.i], &basis[pair.j], &pair.lcm, order);
        let current: Vec<&OrderedPoly> = basis.iter().zip(&active).filter(|(_, a)| **a).map(|(g, _)| g).collect();
        let mut h = reduce(&s, &current, order);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        install(h, &mut basis, &mut active, &mut pairs)?;
    }

    let survivors: Vec<OrderedPoly> = basis
        .into_iter()
        .zip(active)
        .filter(|(_, a)| *a)
        .map(|(g, _)| g)
        .collect();
    Ok(interreduce(survivors, order))
}

/// Minimal generators of a monomial ideal, made monic and sorted.
fn minimal_monomial_basis(inputs: Vec<OrderedPoly>, order: MonomialOrder) -> Vec<OrderedPoly> {
    let mut monos: Vec<Monomial> = inputs.into_iter().map(|p| p.terms[0].0.clone()).collect();
    monos.sort_by(|a, b| order.cmp(a, b));
    monos.dedup();
    let mut minimal: Vec<Monomial> = Vec::new();
    for m in monos {
        if !minimal.iter().any(|g| g.divides(&m)) {
            minimal.push(m);
        }
    }
    minimal
        .into_iter()
        .map(|m| OrderedPoly { terms: vec![(m, Rational::one())] })
        .collect()
}

/// Turns a Gröbner basis into the reduced one.
fn interreduce(mut basis: Vec<OrderedPoly>, order: MonomialOrder) -> Vec<OrderedPoly> {
    basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<OrderedPoly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| h.lm().divides(g.lm())) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&OrderedPoly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| g).collect();
        let head = OrderedPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = OrderedPoly { terms: minimal[k].terms[1..].to_vec() };
        let mut tail = reduce(&tail, &others, order);
        let mut terms = head.terms;
        terms.append(&mut tail.terms);
        reduced.push(OrderedPoly { terms });
    }
    reduced
}
