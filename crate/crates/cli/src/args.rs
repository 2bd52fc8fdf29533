//! Command-line grammar and validation into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gww_core::precision::{from_decimal_string, APComplex, APReal};
use gww_core::{GwwError, Result, Suite};
use rug::Complex;

/// Smallest and largest `--bits` accepted on the command line.
pub const BITS_RANGE: (u32, u32) = (64, 8192);

/// Sweep grid points must stay outside this open interval.
pub const CRITICAL_WINDOW: (f64, f64) = (0.9, 1.1);

#[derive(Parser, Debug)]
#[command(
    name = "gww",
    version,
    about = "Toeplitz-determinant engine for the perturbed GWW model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact log D_{n,ν}(t) with precision escalation.
    Logdet(CommonArgs),
    /// Large-n prediction for log D, optionally against the exact value.
    Predict(CommonArgs),
    /// Run verification suites and print a JSON report.
    Verify(CommonArgs),
    /// Phase-transition data: (1/n²) log D against the free energy on a τ grid.
    Sweep(CommonArgs),
    /// Named mathematical constants.
    Constants(ConstantsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated sizes, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Scaled coupling τ = t/n; a comma list or `start:stop:step` grid for `sweep`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Coupling t; overrides the τ parametrisation.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Order ν as `re` or `re,im` (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON-lines moment cache, read before and written after the run.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Suite for `verify`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Also compute the exact determinant in `predict`.
    #[arg(long)]
    pub with_exact: bool,
    /// Write 0 for timings so that repeated runs give byte-identical output.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ConstantsArgs {
    /// Constant to print; all of them when omitted.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How the coupling was given.
#[derive(Clone, Debug)]
pub enum Coupling {
    Tau(Vec<APReal>),
    T(APReal),
}

/// Validated options shared by the model commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub sizes: Vec<usize>,
    pub coupling: Option<Coupling>,
    pub nu: APComplex,
    /// Whether `--nu` was given; `verify` falls back to its own points otherwise.
    pub nu_given: bool,
    pub bits: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub suite: Suite,
    pub with_exact: bool,
    pub deterministic: bool,
}

fn config_error(msg: impl Into<String>) -> GwwError {
    GwwError::OutOfRange(msg.into())
}

pub fn check_bits(bits: u32) -> Result<()> {
    if bits < BITS_RANGE.0 || bits > BITS_RANGE.1 {
        return Err(GwwError::InvalidPrecision(format!(
            "--bits {bits} outside [{}, {}]",
            BITS_RANGE.0, BITS_RANGE.1
        )));
    }
    Ok(())
}

/// Parses a decimal, correctly rounded to `bits`.
pub fn parse_real(s: &str, bits: u32, what: &str) -> Result<APReal> {
    let v =
        from_decimal_string(s, bits, bits).map_err(|_| GwwError::Parse(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(config_error(format!("{what} must be finite, got `{s}`")));
    }
    Ok(v)
}

/// `re` or `re,im`.
pub fn parse_nu(s: &str, bits: u32) -> Result<APComplex> {
    let parts: Vec<&str> = s.split(',').collect();
    let (re, im) = match parts.as_slice() {
        [re] => (parse_real(re, bits, "--nu")?, parse_real("0", bits, "--nu")?),
        [re, im] => (parse_real(re, bits, "--nu")?, parse_real(im, bits, "--nu")?),
        _ => return Err(GwwError::Parse(format!("--nu expects `re` or `re,im`, got `{s}`"))),
    };
    Ok(Complex::with_val(bits, (re, im)))
}

/// A comma list, or `start:stop:step` inclusive of `stop` up to rounding.
pub fn parse_tau_grid(s: &str, bits: u32) -> Result<Vec<APReal>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(GwwError::Parse(format!("τ grid must be start:stop:step, got `{s}`")));
        };
        let decimals = if s.contains(['e', 'E']) {
            15
        } else {
            [a, h]
                .iter()
                .map(|p| p.split('.').nth(1).map_or(0, str::len))
                .max()
                .unwrap_or(0)
        };
        let (a, b, h) = (
            parse_real(a, bits, "grid start")?.to_f64(),
            parse_real(b, bits, "grid stop")?.to_f64(),
            parse_real(h, bits, "grid step")?.to_f64(),
        );
        if h <= 0.0 {
            return Err(config_error("grid step must be positive"));
        }
        let steps = ((b - a) / h + 1e-9).floor();
        if steps < 0.0 {
            return Ok(Vec::new());
        }
        // Each point is rounded to the decimals of the inputs and re-read at
        // full precision, so `0.3:0.9:0.1` yields exactly the decimals 0.3, …, 0.9.
        return (0..=steps as u32)
            .map(|k| parse_real(&format!("{:.*}", decimals, a + f64::from(k) * h), bits, "grid point"))
            .collect();
    }
    s.split(',').map(|p| parse_real(p, bits, "--tau")).collect()
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs, default_format: Format) -> Result<Self> {
        check_bits(a.bits)?;
        let bits = a.bits;
        let sizes = match (&a.n, &a.n_list) {
            (Some(_), Some(_)) => return Err(config_error("give --n or --n-list, not both")),
            (Some(n), None) => vec![*n],
            (None, Some(list)) => list.clone(),
            (None, None) => Vec::new(),
        };
        if sizes.contains(&0) {
            return Err(config_error("matrix sizes must be at least 1"));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_error("--n-list must be strictly increasing"));
        }
        let coupling = match (&a.tau, &a.t) {
            (Some(_), Some(_)) => return Err(config_error("give exactly one of --tau and --t")),
            (Some(tau), None) => Some(Coupling::Tau(parse_tau_grid(tau, bits)?)),
            (None, Some(t)) => Some(Coupling::T(parse_real(t, bits, "--t")?)),
            (None, None) => None,
        };
        Ok(RunConfig {
            sizes,
            coupling,
            nu: parse_nu(a.nu.as_deref().unwrap_or("0"), bits)?,
            nu_given: a.nu.is_some(),
            bits,
            format: a.format.unwrap_or(default_format),
            out: a.out.clone(),
            cache: a.cache.clone(),
            suite: a.suite.parse()?,
            with_exact: a.with_exact,
            deterministic: a.deterministic,
        })
    }

    /// The single size a point command works on.
    pub fn single_n(&self) -> Result<usize> {
        match self.sizes.as_slice() {
            [n] => Ok(*n),
            [] => Err(config_error("--n is required")),
            _ => Err(config_error("this command takes a single --n")),
        }
    }

    /// `(t, τ)` for size `n` from whichever of `--t`/`--tau` was given.
    pub fn point_coupling(&self, n: usize) -> Result<(APReal, APReal)> {
        match &self.coupling {
            Some(Coupling::T(t)) => {
                if t.is_sign_negative() && !t.is_zero() {
                    return Err(config_error("--t must be non-negative"));
                }
                Ok((t.clone(), t.clone() / n as u32))
            }
            Some(Coupling::Tau(taus)) => match taus.as_slice() {
                [tau] => {
                    if tau.is_sign_negative() && !tau.is_zero() {
                        return Err(config_error("--tau must be non-negative"));
                    }
                    Ok((tau.clone() * n as u32, tau.clone()))
                }
                _ => Err(config_error("this command takes a single --tau value")),
            },
            None => Err(config_error("give exactly one of --tau and --t")),
        }
    }

    /// The τ grid of a sweep, checked against the critical window.
    pub fn sweep_grid(&self) -> Result<Vec<APReal>> {
        let grid = match &self.coupling {
            Some(Coupling::Tau(g)) => g.clone(),
            Some(Coupling::T(_)) => return Err(config_error("sweep takes a --tau grid, not --t")),
            None => return Err(config_error("sweep needs a --tau grid")),
        };
        if grid.is_empty() {
            return Err(config_error("empty τ grid"));
        }
        for tau in &grid {
            let x = tau.to_f64();
            if x <= 0.0 {
                return Err(config_error(format!("grid point τ = {x} is not positive")));
            }
            if x > CRITICAL_WINDOW.0 && x < CRITICAL_WINDOW.1 {
                return Err(config_error(format!(
                    "grid point τ = {x} lies in the critical window ({}, {})",
                    CRITICAL_WINDOW.0, CRITICAL_WINDOW.1
                )));
            }
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_forms() {
        let z = parse_nu("0.3,-0.2", 128).unwrap();
        assert!((z.real().to_f64() - 0.3).abs() < 1e-15 && (z.imag().to_f64() + 0.2).abs() < 1e-15);
        assert!(parse_nu("1,2,3", 128).is_err());
        assert!(parse_nu("x", 128).is_err());
        assert!(parse_nu("inf", 128).is_err());
    }

    #[test]
    fn grids() {
        let g = parse_tau_grid("0.3:0.9:0.1", 128).unwrap();
        assert_eq!(g.len(), 7);
        assert!((g[6].to_f64() - 0.9).abs() < 1e-15);
        assert_eq!(parse_tau_grid("1.2,2,3", 128).unwrap().len(), 3);
        assert!(parse_tau_grid("0.5:0.3:0.1", 128).unwrap().is_empty());
        assert!(parse_tau_grid("", 128).unwrap().is_empty());
        assert!(parse_tau_grid("0.1:0.2:0", 128).is_err());
    }

    #[test]
    fn bits_bounds() {
        assert!(check_bits(63).is_err());
        assert!(check_bits(64).is_ok());
        assert!(check_bits(8192).is_ok());
        assert!(check_bits(8193).is_err());
    }
}
