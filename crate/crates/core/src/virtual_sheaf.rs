//! Virtual structure sheaves of obstruction theories given by `r` sections
//! cutting out a zero-dimensional scheme in affine `d`-space.
//!
//! The closed formula divides the Fulton class by the character of the
//! obstruction complex. The oracle instead computes the graded Koszul
//! homology of the associated graded ring over the section classes.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::filtration::{Filtration, GradedPiece};
use crate::fulton::{fulton_class_with, reembed, FultonClass, FultonOptions, ReembedMode, SchemeSpec};
use crate::groebner::Ideal;
use crate::kcharacter::{CharacterSeries, TPolynomial};
use crate::linalg;

pub const DEFAULT_WEIGHT_CAP: usize = 50;

/// A scheme together with an ordered list of sections generating its ideal.
#[derive(Debug, Clone)]
pub struct ObstructionData {
    pub spec: SchemeSpec,
    pub sections: Vec<Polynomial>,
}

impl ObstructionData {
    /// Checks that the sections and the ideal generate each other.
    pub fn new(spec: SchemeSpec, sections: Vec<Polynomial>) -> Result<Self> {
        let invalid = |message: String| Error::Validation { field: "sections".into(), message };
        if sections.is_empty() {
            return Err(invalid("at least one section is required".into()));
        }
        let ring = spec.ring().clone();
        if sections.iter().any(|s| !s.same_ring(&Polynomial::zero(&ring))) {
            return Err(Error::RingMismatch);
        }
        if sections.len() < spec.dim() {
            return Err(invalid(format!(
                "{} sections cannot cut out a zero-dimensional scheme in {} variables",
                sections.len(),
                spec.dim()
            )));
        }
        let generated =
            Ideal::new(&ring, sections.clone())?.with_spair_budget(spec.ideal.spair_budget());
        for s in &sections {
            if !spec.ideal.contains(s)? {
                return Err(invalid(format!("section {s} is not in the ideal")));
            }
        }
        for g in spec.ideal.generators() {
            if !generated.contains(g)? {
                return Err(invalid(format!(
                    "sections do not generate the ideal: {g} is not in their span"
                )));
            }
        }
        Ok(ObstructionData { spec, sections })
    }

    pub fn rank(&self) -> usize {
        self.sections.len()
    }

    /// `d - r`.
    pub fn virtual_dim(&self) -> i64 {
        self.spec.dim() as i64 - self.rank() as i64
    }
}

/// Character `(1-t)^{d-r}` of the two-term obstruction complex.
pub fn obstruction_character(d: usize, r: usize) -> CharacterSeries {
    CharacterSeries::one_minus_t(d as i64 - r as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualFormula {
    /// `Lambda_M / (1-t)^{d-r}`.
    pub quotient: TPolynomial,
    pub chi: i64,
}

pub fn virtual_chi_formula(data: &ObstructionData, class: &FultonClass) -> Result<VirtualFormula> {
    let divisor = obstruction_character(data.spec.dim(), data.rank());
    let quotient = class.as_series().exact_div(&divisor)?.extract_polynomial()?;
    Ok(VirtualFormula { chi: quotient.evaluate_at_one(), quotient })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    /// `h_table[w][j] = dim H_j` in weight `w`.
    pub h_table: Vec<Vec<u64>>,
    /// Alternating sums of the chain dimensions, per weight.
    pub euler: Vec<i64>,
    pub chi_t: TPolynomial,
    pub chi: i64,
    /// First weight of the final run of vanishing homology.
    pub stabilized_at: usize,
    pub last_weight: usize,
    pub zero_run: usize,
    /// Every computed Euler characteristic beyond this weight is zero.
    pub euler_vanishes_beyond: usize,
}

fn subsets(r: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for k in start..r {
            cur.push(k);
            go(k + 1, r, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, r, j, &mut Vec::new(), &mut out);
    out
}

struct Koszul<'a> {
    filtration: &'a mut Filtration,
    sections: &'a [Polynomial],
    pieces: Vec<GradedPiece>,
    /// `maps[i][k]`: section `k` from weight `i` to `i + 1`.
    maps: Vec<Vec<Vec<Vec<crate::algebra::Rational>>>>,
    subsets: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Koszul<'_> {
    fn piece_dim(&mut self, i: i64) -> Result<usize> {
        if i < 0 {
            return Ok(0);
        }
        let i = i as usize;
        while self.pieces.len() <= i {
            let next = self.filtration.graded_piece(self.pieces.len())?;
            self.pieces.push(next);
        }
        Ok(self.pieces[i].dim())
    }

    fn ensure_maps(&mut self, i: usize) -> Result<()> {
        self.piece_dim(i as i64 + 1)?;
        while self.maps.len() <= i {
            let w = self.maps.len();
            let mut row = Vec::with_capacity(self.sections.len());
            for f in self.sections {
                let map = self.filtration.multiplication_between(
                    f,
                    &self.pieces[w],
                    &self.pieces[w + 1],
                )?;
                row.push(map.matrix);
            }
            self.maps.push(row);
        }
        Ok(())
    }

    fn chain_dim(&mut self, j: usize, w: usize) -> Result<usize> {
        Ok(self.subsets[j].len() * self.piece_dim(w as i64 - j as i64)?)
    }

    /// Rank of the differential `C_j -> C_{j-1}` in weight `w`.
    fn differential_rank(&mut self, j: usize, w: usize) -> Result<usize> {
        let r = self.sections.len();
        if j == 0 || j > r || j > w {
            return Ok(0);
        }
        let src = w - j;
        let src_dim = self.piece_dim(src as i64)?;
        let dst_dim = self.piece_dim(src as i64 + 1)?;
        if src_dim == 0 || dst_dim == 0 {
            return Ok(0);
        }
        self.ensure_maps(src)?;
        let ncols = self.subsets[j - 1].len() * dst_dim;
        let mut rows = Vec::with_capacity(self.subsets[j].len() * src_dim);
        for subset in &self.subsets[j] {
            for k in 0..src_dim {
                let mut row = vec![crate::algebra::Rational::default(); ncols];
                for (a, &section) in subset.iter().enumerate() {
                    let mut face = subset.clone();
                    face.remove(a);
                    let offset = self.index[j - 1][&face] * dst_dim;
                    for (l, c) in self.maps[src][section][k].iter().enumerate() {
                        if a % 2 == 0 {
                            row[offset + l] += c;
                        } else {
                            row[offset + l] -= c;
                        }
                    }
                }
                rows.push(row);
            }
        }
        Ok(linalg::rank(&rows, ncols))
    }
}

fn render_partial(table: &[Vec<u64>]) -> String {
    table
        .iter()
        .enumerate()
        .map(|(w, h)| format!("w{w}:{h:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn koszul_homology(
    filtration: &mut Filtration,
    sections: &[Polynomial],
    lambda_degree: usize,
    weight_cap: usize,
) -> Result<KoszulReport> {
    let r = sections.len();
    let d = filtration.dim();
    let all_subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|j| subsets(r, j)).collect();
    let index = all_subsets
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect())
        .collect();
    let mut k = Koszul {
        filtration,
        sections,
        pieces: Vec::new(),
        maps: Vec::new(),
        subsets: all_subsets,
        index,
    };
    let w_stab = 3.max(lambda_degree + 1);
    let euler_bound = lambda_degree + r - d;
    let mut h_table = Vec::new();
    let mut euler = Vec::new();
    let mut zero_run = 0;
    for w in 0..=weight_cap {
        let ranks = (0..=r + 1).map(|j| k.differential_rank(j, w)).collect::<Result<Vec<_>>>()?;
        let mut h = Vec::with_capacity(r + 1);
        let mut chain_euler = 0i64;
        for j in 0..=r {
            let dim = k.chain_dim(j, w)?;
            let sign = if j % 2 == 0 { 1 } else { -1 };
            chain_euler += sign * dim as i64;
            h.push((dim - ranks[j] - ranks[j + 1]) as u64);
        }
        let homology_euler: i64 =
            h.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        if homology_euler != chain_euler {
            return Err(Error::Invariant(format!(
                "weight {w}: Euler characteristic {chain_euler} of the chains differs from {homology_euler} of the homology"
            )));
        }
        if w > euler_bound && chain_euler != 0 {
            return Err(Error::Invariant(format!(
                "weight {w}: Euler characteristic {chain_euler} does not vanish beyond weight {euler_bound}"
            )));
        }
        zero_run = if h.iter().all(|&x| x == 0) { zero_run + 1 } else { 0 };
        h_table.push(h);
        euler.push(chain_euler);
        if zero_run >= w_stab && w > euler_bound {
            let coeffs: Vec<i64> = h_table
                .iter()
                .map(|h| {
                    h.iter()
                        .enumerate()
                        .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
                        .sum()
                })
                .collect();
            let chi_t = TPolynomial::new(coeffs);
            return Ok(KoszulReport {
                chi: chi_t.evaluate_at_one(),
                chi_t,
                stabilized_at: w + 1 - zero_run,
                last_weight: w,
                zero_run,
                euler_vanishes_beyond: euler_bound,
                euler,
                h_table,
            });
        }
    }
    Err(Error::WeightCapReached { cap: weight_cap, partial: render_partial(&h_table) })
}

#[derive(Debug, Clone, Copy)]
pub struct VirtualOptions {
    pub fulton: FultonOptions,
    pub weight_cap: usize,
}

impl Default for VirtualOptions {
    fn default() -> Self {
        VirtualOptions { fulton: FultonOptions::default(), weight_cap: DEFAULT_WEIGHT_CAP }
    }
}

/// Graded Koszul homology of the associated graded ring over the classes
/// of the sections in `I/I^2`.
pub fn cone_restriction_oracle(data: &ObstructionData, options: VirtualOptions) -> Result<KoszulReport> {
    let mut filtration = Filtration::new(&data.spec.ideal)?;
    let class = fulton_class_with(&mut filtration, options.fulton)?;
    koszul_homology(&mut filtration, &data.sections, class.degree, options.weight_cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualReport {
    pub rank: usize,
    pub virtual_dim: i64,
    pub fulton: TPolynomial,
    pub formula: VirtualFormula,
    pub h_table: Vec<Vec<u64>>,
    pub chi_t: TPolynomial,
    pub chi: i64,
    pub stabilized_at: usize,
    pub koszul: KoszulReport,
    pub twisted: TwistedCharacter,
    pub clauses: Vec<Clause>,
    pub verdict: &'static str,
}

impl VirtualReport {
    pub fn passed(&self) -> bool {
        self.verdict == "PASS"
    }
}

struct Evaluation {
    class: FultonClass,
    formula: VirtualFormula,
    koszul: KoszulReport,
}

fn evaluate(data: &ObstructionData, options: VirtualOptions) -> Result<Evaluation> {
    let mut filtration = Filtration::new(&data.spec.ideal)?;
    let class = fulton_class_with(&mut filtration, options.fulton)?;
    let formula = virtual_chi_formula(data, &class)?;
    let koszul = koszul_homology(&mut filtration, &data.sections, class.degree, options.weight_cap)?;
    Ok(Evaluation { class, formula, koszul })
}

/// Appends a slack coordinate `z` to the ambient space, the ideal and the
/// sections, which adds a cancelling pair of trivial summands.
pub fn slack_augmented(data: &ObstructionData) -> Result<ObstructionData> {
    let (spec, _) = reembed(&data.spec, &ReembedMode::Slack { g: None })?;
    let ring = spec.ring().clone();
    let z = Polynomial::variable(&ring, ring.dim() - 1);
    let mut sections: Vec<Polynomial> = data.sections.iter().map(|s| s.extend_to(&ring)).collect();
    sections.push(z);
    ObstructionData::new(spec, sections)
}

/// Compares the formula with the oracle and checks the character identity,
/// the multiplicity shadow in virtual dimension zero, and invariance under a
/// cancelling slack summand.
pub fn verify_ksiebert(data: &ObstructionData, options: VirtualOptions) -> Result<VirtualReport> {
    let Evaluation { class, formula, koszul } = evaluate(data, options)?;
    let d = data.spec.dim();
    let r = data.rank();
    let vd = data.virtual_dim();
    let mut clauses = Vec::new();

    clauses.push(Clause {
        name: "formula-equals-oracle",
        pass: formula.chi == koszul.chi,
        detail: format!("formula {} vs oracle {}", formula.chi, koszul.chi),
    });

    let lhs = CharacterSeries::polynomial(koszul.chi_t.clone())
        .mul(&CharacterSeries::one_minus_t(d as i64))
        .mul(&CharacterSeries::one_minus_t(-(r as i64)));
    clauses.push(Clause {
        name: "character-identity",
        pass: lhs == class.as_series(),
        detail: format!("chi_t * (1-t)^{d} / (1-t)^{r} = {lhs}, Fulton class {}", class.coeffs),
    });

    if vd == 0 {
        let e = class.multiplicity()?;
        clauses.push(Clause {
            name: "multiplicity",
            pass: e == koszul.chi,
            detail: format!("chi {} vs multiplicity {e}", koszul.chi),
        });
    }

    let augmented = slack_augmented(data)?;
    let aug = evaluate(&augmented, options)?;
    clauses.push(Clause {
        name: "cancelling-summand",
        pass: aug.formula.chi == formula.chi && aug.koszul.chi == koszul.chi,
        detail: format!(
            "after slack augmentation: formula {}, oracle {}",
            aug.formula.chi, aug.koszul.chi
        ),
    });

    let twisted = twisted_from(vd, &formula);
    let verdict = if clauses.iter().all(|c| c.pass) { "PASS" } else { "FAIL" };
    Ok(VirtualReport {
        rank: r,
        virtual_dim: vd,
        fulton: class.coeffs,
        h_table: koszul.h_table.clone(),
        chi_t: koszul.chi_t.clone(),
        chi: koszul.chi,
        stabilized_at: koszul.stabilized_at,
        formula,
        koszul,
        twisted,
        clauses,
        verdict,
    })
}

/// `t^{shift/2} * body`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistedCharacter {
    pub text: String,
    pub half_shift: i64,
    pub body: TPolynomial,
    pub value_at_one: i64,
    pub matches_formula: bool,
}

fn twisted_from(vd: i64, formula: &VirtualFormula) -> TwistedCharacter {
    let half_shift = -vd;
    let body = formula.quotient.clone();
    let prefix = match half_shift {
        0 => String::new(),
        h if h % 2 == 0 => format!("t^{} * ", h / 2),
        h => format!("t^({h}/2) * "),
    };
    let text = if prefix.is_empty() { body.to_string() } else { format!("{prefix}({body})") };
    let value_at_one = body.evaluate_at_one();
    TwistedCharacter {
        text,
        half_shift,
        value_at_one,
        matches_formula: value_at_one == formula.chi,
        body,
    }
}

/// The class twisted by the square root of the determinant of the
/// obstruction complex, which has pure weight `vd`.
pub fn twisted_character(data: &ObstructionData, options: FultonOptions) -> Result<TwistedCharacter> {
    let class = crate::fulton::fulton_class(&data.spec, options)?;
    let formula = virtual_chi_formula(data, &class)?;
    Ok(twisted_from(data.virtual_dim(), &formula))
}
