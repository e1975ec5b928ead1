// SPDX-License-Identifier: Apache-2.0

//! Cross-checks between the closed-form pipeline and the Fock oracle.
//!
//! Every check returns [`CheckReport`]s; a report passes iff its maximum
//! absolute error is within its tolerance. Randomized checks take an explicit
//! seed, so a report's metadata reproduces it exactly. [`run_suite`] runs a
//! named group of checks and [`COVERAGE`] maps each identity of the theory to
//! the checks that exercise it.

mod checks;
mod states;

pub use checks::*;
pub use states::{GridSpec, StateSpec};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::{ChannelParams, Error, Result};

/// Outcome of one comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: serde_json::Value,
    /// `None` when the check could not be evaluated; serialized as `null`.
    pub max_abs_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str, params: serde_json::Value, max_abs_error: f64, tolerance: f64) -> CheckReport {
        let error = max_abs_error.is_finite().then_some(max_abs_error);
        CheckReport {
            name: name.to_string(),
            params,
            max_abs_error: error,
            tolerance,
            pass: error.is_some_and(|e| e <= tolerance),
            cutoff: None,
            steps: None,
            seed: None,
            error: None,
        }
    }

    /// A failed report for a check that raised `err`.
    pub fn failed(name: &str, params: serde_json::Value, tolerance: f64, err: &Error) -> CheckReport {
        CheckReport { error: Some(err.to_string()), ..CheckReport::new(name, params, f64::NAN, tolerance) }
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = Some(steps);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CUTOFF: usize = 30;
pub const TRANSPOSE_TRIALS: usize = 100;
pub const POSITIVITY_TRIALS: usize = 100;
/// Integration steps for the channel pipeline points.
pub const PIPELINE_STEPS: usize = 2000;
/// Cutoff cap for the reflection grids, which cost `O(levels⁴)` per point.
pub const REFLECTION_CUTOFF_CAP: usize = 16;
/// Cutoff cap for the covariance check.
pub const COVARIANCE_CUTOFF_CAP: usize = 20;

pub const SUITES: &[&str] = &["transpose", "squeezer", "reflections", "covariance", "channel", "negativity"];

/// Pure and decohered test states, one- and two-mode.
pub fn reflection_states() -> Vec<StateSpec> {
    vec![
        StateSpec::DisplacedSqueezed { r: 0.3, phi: 0.7, alpha: [0.3, -0.2] },
        StateSpec::SqueezedThermal { r: 0.25, phi: -0.4, nbar: 0.3 },
        StateSpec::DisplacedTmsv { r: 0.3, phi: 0.5, alpha1: [0.2, -0.1], alpha2: [-0.15, 0.25] },
        StateSpec::Decohered { r: 0.3, phi: 0.5, channel: decohering_channel(), steps: 400 },
    ]
}

/// Zero-mean test states for the covariance check.
pub fn covariance_states() -> Vec<StateSpec> {
    vec![
        StateSpec::DisplacedSqueezed { r: 0.3, phi: 0.7, alpha: [0.0, 0.0] },
        StateSpec::SqueezedThermal { r: 0.25, phi: -0.4, nbar: 0.3 },
        StateSpec::DisplacedTmsv { r: 0.4, phi: 0.9, alpha1: [0.0, 0.0], alpha2: [0.0, 0.0] },
        StateSpec::Decohered { r: 0.3, phi: 0.5, channel: decohering_channel(), steps: 400 },
    ]
}

fn decohering_channel() -> ChannelParams {
    ChannelParams { kappa1: 0.15, g1: 0.05, kappa2: 0.1, g2: 0.0, t: 1.0 }
}

pub const REFLECTION_GRID: GridSpec = GridSpec { half_width: 1.0, points: 5 };

/// Channel points of the default suite: symmetric loss, asymmetric loss,
/// gain with loss, the ideal state and the vacuum.
pub fn pipeline_channels() -> Vec<(f64, ChannelParams)> {
    vec![
        (0.5, ChannelParams { kappa1: 0.1, g1: 0.0, kappa2: 0.1, g2: 0.0, t: 1.0 }),
        (0.5, ChannelParams { kappa1: 0.15, g1: 0.0, kappa2: 0.05, g2: 0.0, t: 1.0 }),
        (0.5, ChannelParams { kappa1: 0.2, g1: 0.05, kappa2: 0.2, g2: 0.05, t: 1.0 }),
        (0.5, ChannelParams::identity()),
        (0.0, ChannelParams { kappa1: 0.2, g1: 0.0, kappa2: 0.2, g2: 0.0, t: 1.0 }),
    ]
}

fn negativity_points() -> Vec<(f64, ChannelParams)> {
    let mut points = pipeline_channels();
    points.push((1.0, ChannelParams { kappa1: 0.3, g1: 0.1, kappa2: 0.05, g2: 0.0, t: 2.0 }));
    points.push((0.5, ChannelParams { kappa1: 0.2, g1: 0.05, kappa2: 0.2, g2: 0.05, t: 3.0 }));
    points
}

const THRESHOLD_POINTS: [(f64, f64, f64); 3] = [(0.5, 0.2, 0.05), (0.3, 0.1, 0.1), (1.0, 0.05, 0.2)];

type Job = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

/// A scheduled check: the report names it produces and how to run it.
pub struct PlannedCheck {
    pub names: Vec<&'static str>,
    pub tolerances: Vec<f64>,
    pub params: serde_json::Value,
    job: Job,
}

impl PlannedCheck {
    fn single(name: &'static str, tolerance: f64, params: serde_json::Value, job: Job) -> Self {
        PlannedCheck { names: vec![name], tolerances: vec![tolerance], params, job }
    }

    /// Runs the check, converting a raised error into failed reports.
    pub fn run(&self) -> Vec<CheckReport> {
        match (self.job)() {
            Ok(reports) => reports,
            Err(err) => self
                .names
                .iter()
                .zip(&self.tolerances)
                .map(|(name, &tol)| CheckReport::failed(name, self.params.clone(), tol, &err))
                .collect(),
        }
    }
}

fn one(f: impl Fn() -> Result<CheckReport> + Send + Sync + 'static) -> Job {
    Box::new(move || Ok(vec![f()?]))
}

/// The checks of a suite, in output order.
pub fn plan(suite: &str, seed: u64, cutoff: usize) -> Result<Vec<PlannedCheck>> {
    if suite == "all" {
        let mut all = Vec::new();
        for s in SUITES {
            all.extend(plan(s, seed, cutoff)?);
        }
        return Ok(all);
    }
    let mut out = Vec::new();
    match suite {
        "transpose" => {
            out.push(PlannedCheck::single(
                "transpose_lemma",
                ALGEBRA_TOL,
                json!({ "trials": TRANSPOSE_TRIALS }),
                one(move || check_transpose_lemma(seed, TRANSPOSE_TRIALS, cutoff)),
            ));
            out.push(PlannedCheck::single(
                "operator_transposes",
                ALGEBRA_TOL,
                json!({}),
                one(move || check_operator_transposes(cutoff)),
            ));
            out.push(PlannedCheck::single(
                "transpose_positivity",
                ALGEBRA_TOL,
                json!({ "trials": POSITIVITY_TRIALS }),
                one(move || check_transpose_positivity(seed, POSITIVITY_TRIALS, cutoff)),
            ));
        }
        "squeezer" => {
            let r_values = [0.1, 0.3, 0.6];
            out.push(PlannedCheck::single(
                "pt_squeezer",
                SQUEEZER_TOL,
                json!({ "r": r_values }),
                one(move || check_pt_squeezer(&r_values, cutoff)),
            ));
        }
        "reflections" => {
            let cut = cutoff.min(REFLECTION_CUTOFF_CAP);
            out.push(PlannedCheck::single(
                "reflections",
                ALGEBRA_TOL,
                json!({ "states": reflection_states(), "grid": REFLECTION_GRID }),
                one(move || check_reflections(&reflection_states(), &REFLECTION_GRID, cut)),
            ));
        }
        "covariance" => {
            let cut = cutoff.min(COVARIANCE_CUTOFF_CAP);
            out.push(PlannedCheck::single(
                "covariance",
                ALGEBRA_TOL,
                json!({ "states": covariance_states() }),
                one(move || check_covariance(&covariance_states(), cut)),
            ));
        }
        "channel" => {
            for (r, ch) in pipeline_channels() {
                out.push(PlannedCheck {
                    names: vec!["channel_pipeline.density", "channel_pipeline.wigner", "channel_pipeline.negativity"],
                    tolerances: vec![DENSITY_TOL, WIGNER_TOL, NEGATIVITY_TOL],
                    params: json!({ "r": r, "channel": ch }),
                    job: Box::new(move || check_channel_pipeline(r, &ch, cutoff, PIPELINE_STEPS)),
                });
            }
            for (r, ch) in [pipeline_channels()[1], pipeline_channels()[2]] {
                out.push(PlannedCheck::single(
                    "wigner_kernel",
                    KERNEL_TOL,
                    json!({ "r": r, "channel": ch }),
                    one(move || check_wigner_kernel(r, &ch)),
                ));
            }
        }
        "negativity" => {
            out.push(PlannedCheck::single(
                "trace_norm_forms",
                ALGEBRA_TOL,
                json!({}),
                one(|| check_trace_norm_forms(&negativity_points())),
            ));
            out.push(PlannedCheck::single(
                "special_cases",
                SPECIAL_CASE_TOL,
                json!({}),
                one(|| check_special_cases(&[0.2, 0.5, 1.0], &[0.2, 0.5, 0.8, 1.0])),
            ));
            out.push(PlannedCheck::single(
                "threshold",
                THRESHOLD_TOL,
                json!({}),
                one(|| check_threshold(&THRESHOLD_POINTS)),
            ));
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown suite '{other}', expected one of: all, {}",
                SUITES.join(", ")
            )))
        }
    }
    Ok(out)
}

/// Runs a suite. Checks are evaluated in parallel; reports come back in plan
/// order.
pub fn run_suite(suite: &str, seed: u64, cutoff: usize) -> Result<Vec<CheckReport>> {
    let planned = plan(suite, seed, cutoff)?;
    let nested: Vec<Vec<CheckReport>> = planned.par_iter().map(PlannedCheck::run).collect();
    Ok(nested.into_iter().flatten().collect())
}

/// An identity of the theory and the checks that exercise it.
#[derive(Debug, Clone, Copy)]
pub struct Coverage {
    pub identity: &'static str,
    pub checks: &'static [&'static str],
}

pub const COVERAGE: &[Coverage] = &[
    Coverage { identity: "Fock-basis transpose", checks: &["transpose_lemma", "operator_transposes"] },
    Coverage { identity: "transpose of a normally ordered polynomial swaps exponents", checks: &["transpose_lemma"] },
    Coverage { identity: "transpose of displacement, single-mode squeezer and parity", checks: &["operator_transposes"] },
    Coverage { identity: "characteristic function reflection chi(q,p) -> chi(-q,p)", checks: &["reflections"] },
    Coverage { identity: "Wigner function reflection W(q,p) -> W(q,-p)", checks: &["reflections"] },
    Coverage { identity: "transposed state is a density operator", checks: &["transpose_positivity"] },
    Coverage { identity: "single-mode covariance under transpose", checks: &["covariance"] },
    Coverage { identity: "two-mode partial transpose", checks: &["transpose_lemma", "reflections", "pt_squeezer"] },
    Coverage { identity: "partial transpose of the two-mode squeezer is a scaled beam splitter", checks: &["pt_squeezer"] },
    Coverage { identity: "covariance under partial transpose", checks: &["covariance"] },
    Coverage { identity: "laser-channel master equation", checks: &["channel_pipeline.density"] },
    Coverage { identity: "Wigner evolution kernel", checks: &["wigner_kernel"] },
    Coverage { identity: "closed-form lambda and Gamma", checks: &["wigner_kernel", "channel_pipeline.wigner"] },
    Coverage { identity: "normally ordered density operator", checks: &["channel_pipeline.density"] },
    Coverage { identity: "trace norm from M, Lambda and Delta", checks: &["trace_norm_forms", "channel_pipeline.negativity"] },
    Coverage { identity: "logarithmic negativity of the decohered state", checks: &["channel_pipeline.negativity"] },
    Coverage { identity: "ideal two-mode squeezed vacuum", checks: &["special_cases", "channel_pipeline.negativity"] },
    Coverage { identity: "bi-symmetric photon loss", checks: &["special_cases", "channel_pipeline.negativity"] },
    Coverage { identity: "single-side photon loss", checks: &["special_cases"] },
    Coverage { identity: "gain and loss threshold time", checks: &["threshold"] },
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn report_pass_iff_within_tolerance() {
        assert!(CheckReport::new("x", serde_json::json!({}), 1e-11, 1e-10).pass);
        assert!(CheckReport::new("x", serde_json::json!({}), 1e-10, 1e-10).pass);
        assert!(!CheckReport::new("x", serde_json::json!({}), 2e-10, 1e-10).pass);
        let nan = CheckReport::new("x", serde_json::json!({}), f64::NAN, 1.0);
        assert!(!nan.pass);
        assert_eq!(nan.max_abs_error, None);
        assert!(nan.to_json_line().contains("\"max_abs_error\":null"));
    }

    #[test]
    fn json_line_is_single_line_with_metadata() {
        let rep = CheckReport::new("t", serde_json::json!({ "a": 1 }), 0.5, 1.0).with_cutoff(3).with_seed(9);
        let line = rep.to_json_line();
        assert!(!line.contains('\n'));
        let back: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(back["cutoff"], 3);
        assert_eq!(back["seed"], 9);
        assert_eq!(back["pass"], true);
        assert!(back.get("steps").is_none());
    }

    #[test]
    fn every_identity_is_checked_and_every_check_is_mapped() {
        let planned: BTreeSet<&str> =
            plan("all", DEFAULT_SEED, DEFAULT_CUTOFF).unwrap().iter().flat_map(|p| p.names.clone()).collect();
        let mut mapped = BTreeSet::new();
        for entry in COVERAGE {
            assert!(!entry.checks.is_empty(), "{} has no check", entry.identity);
            for check in entry.checks {
                assert!(planned.contains(check), "{} maps to unknown check {check}", entry.identity);
                mapped.insert(*check);
            }
        }
        assert_eq!(mapped, planned);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", 1, 10), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn raised_errors_become_failed_reports() {
        let reports = run_suite("transpose", 5, 8).unwrap();
        let lemma = &reports[0];
        assert_eq!(lemma.name, "transpose_lemma");
        assert!(!lemma.pass);
        assert!(lemma.error.as_deref().unwrap().contains("at least 12"));
    }

    #[test]
    fn negativity_suite_passes() {
        let reports = run_suite("negativity", DEFAULT_SEED, DEFAULT_CUTOFF).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");
    }

    #[test]
    fn transpose_suite_passes_from_its_minimum_cutoff() {
        for cutoff in [TRANSPOSE_MIN_CUTOFF, 20] {
            let reports = run_suite("transpose", DEFAULT_SEED, cutoff).unwrap();
            assert!(reports.iter().all(|r| r.pass), "cutoff {cutoff}: {reports:?}");
        }
    }
}
