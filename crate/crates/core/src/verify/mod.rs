//! Exact-versus-predicted checks: the ν-differential identity, polynomial
//! recurrences, Christoffel–Darboux, the integer-ν symmetry, convergence
//! orders of every asymptotic formula and the equilibrium-measure relations.
//!
//! Suites return [`CheckRecord`]s collected into a [`ComparisonReport`].

pub mod convergence;
pub mod identity;
pub mod recurrence;

use std::fmt;
use std::str::FromStr;

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{super_geometry, Quantity, Regime};
use crate::error::{GwwError, Result};
use crate::precision::PrecisionContext;
use crate::toeplitz::ModelParams;

pub use convergence::{
    convergence_studies, convergence_study, default_order_tolerance, dnu_log_det, least_squares_slope, ConvergenceStudy,
};
pub use identity::{
    check_differential_identity, default_step, differential_identity, step_scaling, DerivativeMethod, IdentityReport,
    StepScaling,
};
pub use recurrence::{
    cd_sample_points, check_recurrences_cd, check_symmetry, christoffel_darboux_residual, RecurrenceReport,
};

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    /// Residual, or fitted order for convergence studies.
    pub value: f64,
    /// Bound on `value` (or on `|value - claimed|` for studies).
    pub threshold: f64,
    pub detail: String,
}

impl CheckRecord {
    fn bound(suite: Suite, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            detail: String::new(),
        }
    }

    fn failed(suite: Suite, name: impl Into<String>, err: &GwwError) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            name: name.into(),
            passed: false,
            value: f64::NAN,
            threshold: f64::NAN,
            detail: err.to_string(),
        }
    }
}

/// Ordered list of check outcomes.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub bits: u32,
    pub checks: Vec<CheckRecord>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identity,
    Recurrence,
    Cd,
    Symmetry,
    Convergence,
    Equilibrium,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Identity,
        Suite::Recurrence,
        Suite::Cd,
        Suite::Symmetry,
        Suite::Convergence,
        Suite::Equilibrium,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Identity => "identity",
            Suite::Recurrence => "recurrence",
            Suite::Cd => "cd",
            Suite::Symmetry => "symmetry",
            Suite::Convergence => "convergence",
            Suite::Equilibrium => "equilibrium",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = GwwError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| GwwError::Parse(format!("unknown suite '{s}'")))
    }
}

/// Optional overrides for the default check points of each suite.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub tau: Option<f64>,
    pub nu: Option<(f64, f64)>,
    pub n_list: Option<Vec<usize>>,
    /// Quadrature nodes for the equilibrium checks (at least 200).
    pub nodes: Option<usize>,
}

/// Sizes used by the default convergence studies.
pub const DEFAULT_N_LIST: [usize; 5] = [16, 24, 32, 48, 64];

/// Points `(n, ν, t)` where the identity is checked by default.
pub const IDENTITY_POINTS: [(usize, f64, f64); 3] = [(2, 0.1, 0.5), (3, 0.35, 1.7), (5, 0.6, 3.0)];

fn identity_suite(cfg: &SuiteConfig, ctx: &PrecisionContext, out: &mut Vec<CheckRecord>) {
    let points: Vec<(usize, (f64, f64), f64)> = match (cfg.n, cfg.t, cfg.nu) {
        (Some(n), Some(t), nu) => vec![(n, nu.unwrap_or((0.0, 0.0)), t)],
        _ => IDENTITY_POINTS.iter().map(|&(n, nu, t)| (n, (nu, 0.0), t)).collect(),
    };
    let bound = 2f64.powi(-(ctx.bits as i32) / 3);
    for (n, (re, im), t) in points {
        let name = format!(
            "n={n} nu={re}{} t={t}",
            if im != 0.0 { format!("{im:+}i") } else { String::new() }
        );
        let run = || -> Result<(f64, StepScaling)> {
            let p = ModelParams::from_f64(n, re, im, t, ctx)?;
            let r = check_differential_identity(&p, ctx, &default_step(ctx))?;
            let coarse = Float::with_val(ctx.bits, 1u32) >> (ctx.bits / 8);
            Ok((r.to_f64(), step_scaling(&p, ctx, &coarse)?))
        };
        match run() {
            Ok((r, s)) => {
                out.push(CheckRecord::bound(
                    Suite::Identity,
                    format!("{name} richardson"),
                    r,
                    bound,
                ));
                let mut rec = CheckRecord::bound(
                    Suite::Identity,
                    format!("{name} h-halving ratio"),
                    (s.ratios[0] - 4.0).abs().max((s.ratios[1] - 4.0).abs()),
                    1.0,
                );
                rec.detail = format!("ratios {:.3}, {:.3}", s.ratios[0], s.ratios[1]);
                out.push(rec);
            }
            Err(e) => out.push(CheckRecord::failed(Suite::Identity, name, &e)),
        }
    }
}

fn recurrence_params(cfg: &SuiteConfig, ctx: &PrecisionContext) -> Result<ModelParams> {
    let (re, im) = cfg.nu.unwrap_or((0.3, 0.0));
    ModelParams::from_f64(cfg.n.unwrap_or(8), re, im, cfg.t.unwrap_or(2.0), ctx)
}

fn recurrence_suite(suite: Suite, cfg: &SuiteConfig, ctx: &PrecisionContext, out: &mut Vec<CheckRecord>) {
    let bound = ctx.tolerance(64).to_f64();
    match recurrence_params(cfg, ctx).and_then(|p| check_recurrences_cd(&p, ctx)) {
        Ok(r) => {
            if suite == Suite::Recurrence {
                out.push(CheckRecord::bound(suite, "three-term", r.three_term.to_f64(), bound));
                out.push(CheckRecord::bound(suite, "subleading", r.subleading.to_f64(), bound));
            } else {
                out.push(CheckRecord::bound(
                    suite,
                    "christoffel-darboux",
                    r.christoffel_darboux.to_f64(),
                    bound,
                ));
            }
        }
        Err(e) => out.push(CheckRecord::failed(suite, "setup", &e)),
    }
}

fn symmetry_suite(cfg: &SuiteConfig, ctx: &PrecisionContext, out: &mut Vec<CheckRecord>) {
    let ns: Vec<usize> = cfg.n.map(|n| vec![n]).unwrap_or_else(|| vec![5, 8]);
    let t = ctx.real(cfg.t.unwrap_or(2.0));
    let bound = ctx.tolerance(40).to_f64();
    for n in ns {
        for nu in 1..=3 {
            let name = format!("n={n} nu={nu}");
            match check_symmetry(n, &t, nu, ctx) {
                Ok(r) => out.push(CheckRecord::bound(Suite::Symmetry, name, r.to_f64(), bound)),
                Err(e) => out.push(CheckRecord::failed(Suite::Symmetry, name, &e)),
            }
        }
    }
}

/// Default study configurations: `(regime, ν, τ)`.
pub const STUDY_POINTS: [(Regime, f64, f64); 2] = [(Regime::Sub, 0.3, 0.5), (Regime::Super, 0.4, 2.0)];

fn study_record(s: &ConvergenceStudy) -> CheckRecord {
    CheckRecord {
        suite: Suite::Convergence.to_string(),
        name: format!(
            "{} {} nu={} tau={}",
            s.regime.name(),
            s.quantity.name(),
            s.nu.real().to_f64(),
            s.tau.to_f64()
        ),
        passed: s.passed(),
        value: s.fitted_order.unwrap_or(f64::NAN),
        threshold: s.order_tolerance,
        detail: s.verdict(),
    }
}

fn convergence_suite(cfg: &SuiteConfig, ctx: &PrecisionContext, out: &mut Vec<CheckRecord>) {
    let n_list = cfg.n_list.clone().unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
    let points: Vec<(Option<Regime>, (f64, f64), f64)> = match cfg.tau {
        Some(tau) => vec![(None, cfg.nu.unwrap_or((0.3, 0.0)), tau)],
        None => STUDY_POINTS
            .iter()
            .map(|&(r, nu, tau)| (Some(r), (nu, 0.0), tau))
            .collect(),
    };
    let mut quantities = vec![Quantity::LogD];
    quantities.extend(Quantity::Y_FIELDS);
    for (regime, (re, im), tau) in points {
        let run = || -> Result<Vec<ConvergenceStudy>> {
            let regime = match regime {
                Some(r) => r,
                None => Regime::classify(tau)?,
            };
            let nu = Complex::with_val(ctx.bits, (re, im));
            convergence_studies(&quantities, regime, &nu, &ctx.real(tau), &n_list, ctx)
        };
        match run() {
            Ok(studies) => out.extend(studies.iter().map(study_record)),
            Err(e) => out.push(CheckRecord::failed(Suite::Convergence, format!("tau={tau}"), &e)),
        }
    }
}

/// Values of τ where the equilibrium relations are checked by default.
pub const EQUILIBRIUM_TAUS: [f64; 3] = [1.5, 2.0, 3.0];

fn equilibrium_suite(cfg: &SuiteConfig, ctx: &PrecisionContext, out: &mut Vec<CheckRecord>) {
    let nodes = cfg.nodes.unwrap_or(200).max(200);
    let taus: Vec<f64> = cfg.tau.map(|t| vec![t]).unwrap_or_else(|| EQUILIBRIUM_TAUS.to_vec());
    let (re, im) = cfg.nu.unwrap_or((0.4, 0.0));
    for tau in taus {
        let run = || -> Result<Vec<CheckRecord>> {
            let nu = Complex::with_val(ctx.bits, (re, im));
            let g = super_geometry(&ctx.real(tau), &nu, ctx)?;
            let mut recs = Vec::new();
            let mass = Float::with_val(ctx.bits, g.mass(nodes) - 1u32).abs().to_f64();
            recs.push(CheckRecord::bound(
                Suite::Equilibrium,
                format!("tau={tau} mass"),
                mass,
                1e-20,
            ));
            let j = g.jump_report(nodes)?;
            recs.push(CheckRecord::bound(
                Suite::Equilibrium,
                format!("tau={tau} euler-lagrange"),
                j.euler_lagrange_c2,
                1e-15,
            ));
            let mut jr = CheckRecord::bound(Suite::Equilibrium, format!("tau={tau} g-jumps"), j.worst(), 1e-15);
            jr.detail = format!("{j:?}");
            recs.push(jr);
            let sz = g.szego_report();
            let worst = sz.map_product.max(sz.d_product);
            recs.push(CheckRecord::bound(
                Suite::Equilibrium,
                format!("tau={tau} szego"),
                worst,
                1e-15,
            ));
            Ok(recs)
        };
        match run() {
            Ok(r) => out.extend(r),
            Err(e) => out.push(CheckRecord::failed(Suite::Equilibrium, format!("tau={tau}"), &e)),
        }
    }
}

/// Runs one suite (or all of them in a fixed order).
pub fn run_suite(suite: Suite, cfg: &SuiteConfig, ctx: &PrecisionContext) -> ComparisonReport {
    let mut checks = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    for s in suites {
        match s {
            Suite::Identity => identity_suite(cfg, ctx, &mut checks),
            Suite::Recurrence | Suite::Cd => recurrence_suite(s, cfg, ctx, &mut checks),
            Suite::Symmetry => symmetry_suite(cfg, ctx, &mut checks),
            Suite::Convergence => convergence_suite(cfg, ctx, &mut checks),
            Suite::Equilibrium => equilibrium_suite(cfg, ctx, &mut checks),
            Suite::All => unreachable!("expanded above"),
        }
    }
    ComparisonReport { bits: ctx.bits, checks }
}
