//! The per-scheme pipeline, the corpus runner and the JSON run report.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Polynomial;
use crate::error::{Error, ErrorClass, Result};
use crate::filtration::{default_window, Filtration, LengthSequence};
use crate::fulton::{
    compare_classes, degree_bound_report, fulton_class, fulton_class_with, lci_report, reembed,
    DegreeBoundReport, EmbeddingReport, FultonClass, FultonOptions, LciReport, ReembedInfo,
    ReembedMode,
};
use crate::groebner::DEFAULT_SPAIR_BUDGET;
use crate::kcharacter::CharacterSeries;
use crate::specfile::{load_scheme_spec, LoadedSpec};
use crate::virtual_sheaf::{verify_ksiebert, VirtualOptions, VirtualReport, DEFAULT_WEIGHT_CAP};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_LCI_WEIGHT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunOptions {
    pub window: Option<usize>,
    pub weight_cap: usize,
    pub spair_budget: usize,
    pub seed: u64,
    pub lci_weight: usize,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            window: None,
            weight_cap: DEFAULT_WEIGHT_CAP,
            spair_budget: DEFAULT_SPAIR_BUDGET,
            seed: DEFAULT_SEED,
            lci_weight: DEFAULT_LCI_WEIGHT,
            parallel: true,
        }
    }
}

impl RunOptions {
    pub fn fulton(&self) -> FultonOptions {
        FultonOptions { window: self.window, truncation: None }
    }

    pub fn virtual_options(&self) -> VirtualOptions {
        VirtualOptions { fulton: self.fulton(), weight_cap: self.weight_cap }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub class: &'static str,
    pub exit_code: i32,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        let class = match e.class() {
            ErrorClass::PropertyViolation => "property-violation",
            ErrorClass::ResourceLimit => "resource-limit",
            ErrorClass::InputError => "input-error",
        };
        ErrorReport { class, exit_code: e.class().exit_code(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    pub reembedding: ReembedInfo,
    pub ideal: String,
    pub report: EmbeddingReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectationCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub file: String,
    pub label: String,
    pub variables: Vec<String>,
    pub ideal: Vec<String>,
    pub verdict: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fulton: Option<FultonClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<DegreeBoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lci: Option<LciReport>,
    pub embeddings: Vec<EmbeddingCheck>,
    #[serde(rename = "virtual", skip_serializing_if = "Option::is_none")]
    pub virtual_sheaf: Option<VirtualReport>,
    pub expectations: Vec<ExpectationCheck>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub options: RunOptions,
    pub schemes: Vec<SchemeReport>,
    pub verdict: &'static str,
    pub exit_code: i32,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Combines exit codes: input errors dominate resource limits, which
/// dominate property violations.
pub fn combine_exit_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        2 => 3,
        3 => 2,
        1 => 1,
        _ => 0,
    };
    codes.into_iter().max_by_key(|&c| rank(c)).unwrap_or(0)
}

fn verdict_for(code: i32) -> &'static str {
    match code {
        0 => "PASS",
        1 => "FAIL",
        _ => "ERROR",
    }
}

fn embedding_modes(loaded: &LoadedSpec, seed: u64) -> Vec<ReembedMode> {
    let ring = loaded.spec.ring();
    let first = Polynomial::variable(ring, 0);
    vec![
        ReembedMode::Slack { g: None },
        ReembedMode::Slack { g: Some(first) },
        ReembedMode::LinearAutomorphism { seed },
    ]
}

fn check_expectations(loaded: &LoadedSpec, report: &SchemeReport) -> Vec<ExpectationCheck> {
    let mut out = Vec::new();
    let e = &loaded.expected;
    if let (Some(want), Some(class)) = (&e.fulton, &report.fulton) {
        out.push(ExpectationCheck {
            name: "fulton",
            expected: format!("{want:?}"),
            actual: format!("{:?}", class.coeffs.coeffs()),
            pass: want.as_slice() == class.coeffs.coeffs(),
        });
    }
    if let Some(want) = e.virtual_chi {
        let actual = report.virtual_sheaf.as_ref().map(|v| v.chi);
        out.push(ExpectationCheck {
            name: "virtual_chi",
            expected: want.to_string(),
            actual: actual.map_or("missing".into(), |a| a.to_string()),
            pass: actual == Some(want),
        });
    }
    if let (Some(want), Some(lci)) = (e.lci, &report.lci) {
        let actual = lci.verdict == "PASS-lci";
        out.push(ExpectationCheck {
            name: "lci",
            expected: want.to_string(),
            actual: actual.to_string(),
            pass: actual == want,
        });
    }
    out
}

/// Runs every check on one loaded scheme. Returns the report and an exit
/// code, which is nonzero on the first error or on any failed check.
pub fn run_scheme(file: &str, loaded: &LoadedSpec, options: &RunOptions) -> SchemeReport {
    let start = Instant::now();
    let spec = &loaded.spec;
    let mut report = SchemeReport {
        file: file.to_string(),
        label: spec.label.clone(),
        variables: spec.ring().variables().to_vec(),
        ideal: spec.ideal.generators().iter().map(ToString::to_string).collect(),
        verdict: "PASS",
        exit_code: 0,
        error: None,
        fulton: None,
        degree_bound: None,
        lci: None,
        embeddings: Vec::new(),
        virtual_sheaf: None,
        expectations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let outcome = fill_report(loaded, options, &mut report);
    let mut code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            report.error = Some(ErrorReport::from(e));
            e.class().exit_code()
        }
    };
    if outcome.is_ok() {
        report.expectations = check_expectations(loaded, &report);
        let failed = report.degree_bound.as_ref().is_some_and(|d| d.status == "FAIL")
            || report.lci.as_ref().is_some_and(|l| !l.consistent())
            || report.embeddings.iter().any(|e| !e.report.passed())
            || report.virtual_sheaf.as_ref().is_some_and(|v| !v.passed())
            || report.expectations.iter().any(|e| !e.pass);
        if failed {
            code = 1;
        }
    }
    report.exit_code = code;
    report.verdict = verdict_for(code);
    report.elapsed = start.elapsed();
    report
}

fn fill_report(loaded: &LoadedSpec, options: &RunOptions, report: &mut SchemeReport) -> Result<()> {
    let spec = &loaded.spec;
    let mut filtration = Filtration::new(&spec.ideal)?;
    let class = fulton_class_with(&mut filtration, options.fulton())?;
    report.fulton = Some(class.clone());
    report.degree_bound = Some(degree_bound_report(spec, &class)?);
    report.lci = Some(lci_report(&mut filtration, &class, options.lci_weight)?);
    for mode in embedding_modes(loaded, options.seed) {
        let (other, info) = reembed(spec, &mode)?;
        let other_class = fulton_class(&other, options.fulton())?;
        report.embeddings.push(EmbeddingCheck {
            reembedding: info,
            ideal: other.ideal.to_string(),
            report: compare_classes(spec, &other, &class, &other_class),
        });
    }
    if let Some(data) = &loaded.obstruction {
        report.virtual_sheaf = Some(verify_ksiebert(data, options.virtual_options())?);
    }
    Ok(())
}

/// The `*.json` files of a directory, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_file(path: &Path, options: &RunOptions) -> SchemeReport {
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    match load_scheme_spec(path, options.spair_budget) {
        Ok(loaded) => run_scheme(&name, &loaded, options),
        Err(e) => {
            let code = e.class().exit_code();
            SchemeReport {
                file: name.clone(),
                label: path.file_stem().map_or(name, |s| s.to_string_lossy().into_owned()),
                variables: Vec::new(),
                ideal: Vec::new(),
                verdict: verdict_for(code),
                exit_code: code,
                error: Some(ErrorReport::from(&e)),
                fulton: None,
                degree_bound: None,
                lci: None,
                embeddings: Vec::new(),
                virtual_sheaf: None,
                expectations: Vec::new(),
                elapsed: Duration::ZERO,
            }
        }
    }
}

/// Runs the full pipeline on every scheme file in `dir`. Results keep the
/// sorted file order whether or not files are processed in parallel.
pub fn run_suite(dir: &Path, options: &RunOptions) -> Result<RunReport> {
    let files = corpus_files(dir)?;
    let schemes: Vec<SchemeReport> = if options.parallel {
        files.par_iter().map(|f| run_file(f, options)).collect()
    } else {
        files.iter().map(|f| run_file(f, options)).collect()
    };
    let exit_code = combine_exit_codes(schemes.iter().map(|s| s.exit_code));
    Ok(RunReport {
        tool: "kfulton",
        version: env!("CARGO_PKG_VERSION"),
        seed: options.seed,
        options: *options,
        verdict: verdict_for(exit_code),
        exit_code,
        schemes,
    })
}

/// Quotient data and the length function of a scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub label: String,
    pub length: usize,
    pub standard_monomials: Vec<String>,
    pub lengths: LengthSequence,
    pub gr_character: CharacterSeries,
    pub multiplicity: i64,
}

pub fn hilbert_report(loaded: &LoadedSpec, options: &RunOptions) -> Result<HilbertReport> {
    let spec = &loaded.spec;
    let ring = spec.ring();
    let mut filtration = Filtration::new(&spec.ideal)?;
    let class = fulton_class_with(&mut filtration, options.fulton())?;
    let standard = spec.ideal.standard_monomials()?;
    let one = crate::algebra::integer(1);
    let standard_monomials = standard
        .monomials()
        .iter()
        .map(|m| Polynomial::monomial(ring, m.clone(), one.clone()).to_string())
        .collect();
    let window = options.window.unwrap_or_else(|| default_window(spec.dim()));
    Ok(HilbertReport {
        label: spec.label.clone(),
        length: standard.len(),
        standard_monomials,
        lengths: filtration.length_sequence(window)?,
        multiplicity: class.multiplicity()?,
        gr_character: class.gr_character,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_precedence() {
        assert_eq!(combine_exit_codes([0, 1, 0]), 1);
        assert_eq!(combine_exit_codes([1, 3]), 3);
        assert_eq!(combine_exit_codes([3, 2, 1]), 2);
        assert_eq!(combine_exit_codes([]), 0);
    }

    #[test]
    fn scheme_pipeline_passes_on_a_fat_point() {
        let loaded = LoadedSpec::from_json(
            r#"{"variables":["x","y"],"ideal":["x^2","x*y","y^2"],"expected":{"fulton":[3,1],"lci":false}}"#,
        )
        .unwrap();
        let r = run_scheme("fat.json", &loaded, &RunOptions::default());
        assert_eq!(r.verdict, "PASS", "{r:?}");
        assert_eq!(r.embeddings.len(), 3);
        assert_eq!(r.lci.unwrap().first_strict_weight, Some(2));
    }

    #[test]
    fn wrong_expectation_is_a_violation() {
        let loaded = LoadedSpec::from_json(
            r#"{"variables":["x"],"ideal":["x^2"],"expected":{"fulton":[3]}}"#,
        )
        .unwrap();
        let r = run_scheme("x2.json", &loaded, &RunOptions::default());
        assert_eq!((r.verdict, r.exit_code), ("FAIL", 1));
    }

    #[test]
    fn budget_exhaustion_is_a_resource_limit() {
        let text = r#"{"variables":["x","y"],"ideal":["x^2 - y","y^2 - x*y"]}"#;
        let loaded = crate::specfile::parse_scheme_spec(text, "b", 10).unwrap();
        let r = run_scheme("b.json", &loaded, &RunOptions { spair_budget: 10, ..Default::default() });
        assert_eq!(r.exit_code, 3, "{r:?}");
    }
}
