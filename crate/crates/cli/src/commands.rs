use std::path::Path;
use std::time::Instant;

use gww_core::asymptotics::{free_energy, thm1_prediction, thm2_prediction};
use gww_core::precision::{abs_c, APComplex, PrecisionContext};
use gww_core::special::{named_constant, MomentCache, CONSTANT_NAMES};
use gww_core::toeplitz::{log_det_cached, log_det_escalated, wrap_branch};
use gww_core::verify::SuiteConfig;
use gww_core::{run_suite, GwwError, ModelParams, Regime, Result};
use rayon::prelude::*;
use rug::{Complex, Float};

use crate::args::{check_bits, ConstantsArgs, Coupling, Format, RunConfig};
use crate::output::{dec, write_constants, write_json, write_rows, ConstantRecord, LogDetRecord, Row};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    VerificationFailed = 1,
    PrecisionFailure = 2,
    ConfigError = 3,
    RegimeGuard = 4,
}

impl Exit {
    pub fn of_error(e: &GwwError) -> Exit {
        match e {
            GwwError::PrecisionEscalation { .. }
            | GwwError::SingularMatrix { .. }
            | GwwError::VanishingMinor { .. }
            | GwwError::ContourTruncation(_) => Exit::PrecisionFailure,
            GwwError::RegimeGuard(_) => Exit::RegimeGuard,
            _ => Exit::ConfigError,
        }
    }
}

/// Moment cache loaded from `--cache`, saved back by [`CacheHandle::finish`].
struct CacheHandle<'a> {
    path: Option<&'a Path>,
    cache: Option<MomentCache>,
}

impl<'a> CacheHandle<'a> {
    fn open(path: Option<&'a Path>) -> Result<Self> {
        let cache = path.map(MomentCache::load).transpose()?;
        Ok(CacheHandle { path, cache })
    }

    fn get(&self) -> Option<&MomentCache> {
        self.cache.as_ref()
    }

    fn finish(self) -> Result<()> {
        if let (Some(p), Some(c)) = (self.path, &self.cache) {
            c.save(p)?;
        }
        Ok(())
    }
}

fn seconds(start: Instant, cfg: &RunConfig) -> f64 {
    if cfg.deterministic {
        0.0
    } else {
        start.elapsed().as_secs_f64()
    }
}

pub fn logdet(cfg: &RunConfig) -> Result<Exit> {
    let n = cfg.single_n()?;
    let (t, tau) = cfg.point_coupling(n)?;
    let ctx = PrecisionContext::new(cfg.bits)?;
    let params = ModelParams::new(n, cfg.nu.clone(), t)?;
    let cache = CacheHandle::open(cfg.cache.as_deref())?;
    let start = Instant::now();
    let esc = log_det_escalated(&params, &ctx, cache.get())?;
    let value = esc.value.rounded(cfg.bits).value();
    let secs = seconds(start, cfg);
    cache.finish()?;
    match cfg.format {
        Format::Json => write_json(
            &LogDetRecord {
                n,
                tau: dec(&tau),
                nu_re: dec(cfg.nu.real()),
                nu_im: dec(cfg.nu.imag()),
                logdet_re: dec(value.real()),
                logdet_im: dec(value.imag()),
                bits: cfg.bits,
                achieved_digits: esc.achieved_digits,
                seconds: secs,
            },
            cfg.out.as_deref(),
        )?,
        Format::Csv => {
            let mut row = Row::new(n, &tau, &cfg.nu, cfg.bits).exact(&value);
            row.seconds = secs;
            write_rows(&[row], Format::Csv, cfg.out.as_deref())?;
        }
    }
    Ok(Exit::Pass)
}

fn prediction(n: usize, nu: &APComplex, tau: &Float, ctx: &PrecisionContext) -> Result<APComplex> {
    match Regime::classify(tau.to_f64())? {
        Regime::Sub => thm1_prediction(n, nu, tau, true, ctx),
        Regime::Super => thm2_prediction(n, nu, tau, ctx),
    }
}

pub fn predict(cfg: &RunConfig) -> Result<Exit> {
    let n = cfg.single_n()?;
    let (t, tau) = cfg.point_coupling(n)?;
    let ctx = PrecisionContext::new(cfg.bits)?;
    let start = Instant::now();
    let pred = prediction(n, &cfg.nu, &tau, &ctx)?;
    let mut row = Row::new(n, &tau, &cfg.nu, cfg.bits).predicted(&pred);
    if cfg.with_exact {
        let cache = CacheHandle::open(cfg.cache.as_deref())?;
        let params = ModelParams::new(n, cfg.nu.clone(), t)?;
        let exact = log_det_cached(&params, &ctx, cache.get())?.value();
        let residual = abs_c(&wrap_branch(&Complex::with_val(cfg.bits, &exact - &pred)));
        row = row.exact(&exact).residual(&residual);
        cache.finish()?;
    }
    row.seconds = seconds(start, cfg);
    write_rows(&[row], cfg.format, cfg.out.as_deref())?;
    Ok(Exit::Pass)
}

pub fn verify(cfg: &RunConfig) -> Result<Exit> {
    let ctx = PrecisionContext::new(cfg.bits)?;
    let nu = (cfg.nu.real().to_f64(), cfg.nu.imag().to_f64());
    let n = match cfg.sizes.as_slice() {
        [n] => Some(*n),
        _ => None,
    };
    let n_list = (cfg.sizes.len() > 1).then(|| cfg.sizes.clone());
    let (t, tau) = match &cfg.coupling {
        Some(Coupling::T(t)) => (Some(t.to_f64()), n.map(|n| t.to_f64() / n as f64)),
        Some(Coupling::Tau(g)) => match g.as_slice() {
            [tau] => (n.map(|n| tau.to_f64() * n as f64), Some(tau.to_f64())),
            _ => return Err(GwwError::OutOfRange("verify takes a single --tau value".into())),
        },
        None => (None, None),
    };
    let suite_cfg = SuiteConfig {
        n,
        t,
        tau,
        nu: cfg.nu_given.then_some(nu),
        n_list,
        nodes: None,
    };
    let report = run_suite(cfg.suite, &suite_cfg, &ctx);
    write_json(&report, cfg.out.as_deref())?;
    for f in report.failures() {
        eprintln!("FAIL [{}] {}: {}", f.suite, f.name, f.detail);
    }
    Ok(if report.passed() {
        Exit::Pass
    } else {
        Exit::VerificationFailed
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<Exit> {
    if cfg.sizes.is_empty() {
        return Err(GwwError::OutOfRange("sweep needs --n or --n-list".into()));
    }
    let grid = cfg.sweep_grid()?;
    let ctx = PrecisionContext::new(cfg.bits)?;
    let cache = CacheHandle::open(cfg.cache.as_deref())?;
    let points: Vec<(usize, &Float)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| grid.iter().map(move |tau| (n, tau)))
        .collect();
    // Collecting an indexed parallel iterator keeps grid order.
    let rows: Vec<Result<Row>> = points
        .par_iter()
        .map(|&(n, tau)| {
            let start = Instant::now();
            let params = ModelParams::from_tau(n, cfg.nu.clone(), tau, &ctx)?;
            // For real ν the determinant is real, so only arg D mod 2π matters.
            let mut log_d = log_det_cached(&params, &ctx, cache.get())?.value();
            if params.nu_is_real() {
                log_d = wrap_branch(&log_d);
            }
            let n2 = Float::with_val(cfg.bits, n as u32).square();
            let scaled = Complex::with_val(cfg.bits, &log_d / &n2);
            let f = free_energy(tau)?.value().clone();
            let residual = abs_c(&Complex::with_val(cfg.bits, &scaled - &f));
            let mut row = Row::new(n, tau, &cfg.nu, cfg.bits)
                .exact(&scaled)
                .predicted(&Complex::with_val(cfg.bits, f))
                .residual(&residual);
            row.seconds = seconds(start, cfg);
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    cache.finish()?;
    write_rows(&rows, cfg.format, cfg.out.as_deref())?;
    Ok(Exit::Pass)
}

pub fn constants(a: &ConstantsArgs) -> Result<Exit> {
    check_bits(a.bits)?;
    let ctx = PrecisionContext::new(a.bits)?;
    let names: Vec<&str> = match &a.name {
        Some(n) => vec![n.as_str()],
        None => CONSTANT_NAMES.to_vec(),
    };
    let records = names
        .iter()
        .map(|&name| {
            Ok(ConstantRecord {
                name: name.to_string(),
                value: dec(&named_constant(name, &ctx)?),
                bits: a.bits,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write_constants(&records, a.format.unwrap_or(Format::Csv), a.out.as_deref())?;
    Ok(Exit::Pass)
}
