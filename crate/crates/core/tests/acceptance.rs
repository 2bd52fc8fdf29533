//! Acceptance criteria A1–A10, one PASS/FAIL line each.
//!
//! Run with `cargo test -p gww-core --test acceptance`; pass criterion
//! names (`A3 A8`) after `--` to run a subset. The process exits with a
//! nonzero status when any selected criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gww_core::asymptotics::{
    free_energy, free_energy_sub, free_energy_super, super_geometry, FreeEnergy, Quantity, Regime,
};
use gww_core::precision::{abs_c, agreeing_digits, PrecisionContext, EXACT_AGREEMENT};
use gww_core::special::constants::log_glaisher;
use gww_core::special::{log_barnes_g, log_gamma, moment, moment_quadrature, named_constant, HankelContour};
use gww_core::toeplitz::{log_det, partition_direct, wrap_branch, ModelParams};
use gww_core::verify::{
    check_differential_identity, check_symmetry, convergence_studies, step_scaling, ConvergenceStudy,
};
use rug::{Complex, Float};

struct Outcome {
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            summary: String::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, note: String) {
        if !ok {
            self.passed = false;
        }
        self.notes.push(format!("{} {note}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn ctx(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).expect("valid precision")
}

const N_LIST: [usize; 5] = [16, 24, 32, 48, 64];

fn study_rows(s: &ConvergenceStudy) -> String {
    s.rows
        .iter()
        .map(|r| format!("n={}: {:.3e}", r.n, r.residual.to_f64()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn log_d_theorem(out: &mut Outcome, regime: Regime, nu: f64, tau: f64, budget: Duration) {
    let c = ctx(512);
    let start = Instant::now();
    let studies =
        convergence_studies(&[Quantity::LogD], regime, &c.complex(nu), &c.real(tau), &N_LIST, &c).expect("study runs");
    let elapsed = start.elapsed();
    let s = &studies[0];
    let fitted = s.fitted_order.unwrap_or(f64::NAN);
    out.summary = format!(
        "fitted order {fitted:.3} (accepted [-1.35, -0.65]), {:.1}s",
        elapsed.as_secs_f64()
    );
    out.notes.push(format!("residuals {}", study_rows(s)));
    out.require(
        s.inversions == 0,
        format!("monotone decrease ({} inversions)", s.inversions),
    );
    out.require((-1.35..=-0.65).contains(&fitted), format!("fitted order {fitted:.3}"));
    if s.superconvergent {
        out.notes.push("flag: superconvergence — check test wiring".into());
    }
    out.require(
        elapsed <= budget,
        format!("runtime {:.1}s ≤ {}s", elapsed.as_secs_f64(), budget.as_secs()),
    );
}

fn a1() -> Outcome {
    let mut o = Outcome::new();
    log_d_theorem(&mut o, Regime::Sub, 0.3, 0.5, Duration::from_secs(120));
    o
}

fn a2() -> Outcome {
    let mut o = Outcome::new();
    log_d_theorem(&mut o, Regime::Super, 0.4, 2.0, Duration::from_secs(180));
    o
}

fn a3() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let n = 64usize;
    let nf = n as f64;
    let super_bound = (nf.ln() + 5.0) / (nf * nf);
    let taus: Vec<f64> = (3..=9)
        .map(|k| k as f64 / 10.0)
        .chain((12..=30).map(|k| k as f64 / 10.0))
        .collect();
    let rows: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        taus.par_iter()
            .map(|&tau| {
                let p = ModelParams::from_tau(n, c.complex(0u32), &c.real(tau), &c).expect("params");
                let ld = log_det(&p, &c).expect("log det").value();
                let per = Float::with_val(256, ld.real() / (nf * nf));
                let fe = free_energy(&c.real(tau)).expect("free energy");
                (tau, Float::with_val(256, per - fe.value()).abs().to_f64())
            })
            .collect()
    };
    let mut worst_sub: f64 = 0.0;
    let mut worst_super: f64 = 0.0;
    for (tau, r) in &rows {
        if *tau < 1.0 {
            worst_sub = worst_sub.max(*r);
            o.require(*r <= 1e-3, format!("tau={tau}: {r:.3e} ≤ 1e-3"));
        } else {
            worst_super = worst_super.max(*r);
            o.require(*r <= super_bound, format!("tau={tau}: {r:.3e} ≤ {super_bound:.3e}"));
        }
    }
    // third derivative jump at τ = 1 from one-sided differences of each branch
    let h = Float::with_val(256, 1e-9f64);
    let third = |f: &dyn Fn(&Float) -> Float, sign: i32| -> f64 {
        let pt = |k: i32| {
            let x = Float::with_val(256, &h * (sign * k)) + 1u32;
            f(&x)
        };
        let d = pt(3) - Float::with_val(256, pt(2) * 3u32) + Float::with_val(256, pt(1) * 3u32) - pt(0);
        let h3 = Float::with_val(256, h.clone().square() * &h);
        (d / h3).to_f64() * f64::from(sign).powi(3)
    };
    let above = third(&|x| free_energy_super(x), 1);
    let below = third(&|x| free_energy_sub(x), -1);
    let gap = above - below;
    o.require(
        (gap + 1.0).abs() <= 1e-6,
        format!("third-derivative gap {gap:.9} vs -1"),
    );
    if let Ok(FreeEnergy::Critical { below, above }) = free_energy(&c.real(1u32)) {
        o.require(below == above, "free energy continuous at τ = 1".into());
    }
    o.summary =
        format!("worst sub {worst_sub:.2e}, worst super {worst_super:.2e} (bound {super_bound:.2e}), gap {gap:.9}");
    o
}

fn a4() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let h = Float::with_val(256, 1u32) >> 40u32;
    let coarse = Float::with_val(256, 1u32) >> 24u32;
    let mut worst: f64 = 0.0;
    for &(n, nu, t) in &[(2usize, 0.1, 0.5), (3, 0.35, 1.7), (5, 0.6, 3.0)] {
        let p = ModelParams::from_f64(n, nu, 0.0, t, &c).unwrap();
        let r = check_differential_identity(&p, &c, &h).unwrap().to_f64();
        worst = worst.max(r);
        o.require(r <= 1e-20, format!("(n,ν,t)=({n},{nu},{t}): residual {r:.3e} ≤ 1e-20"));
        let s = step_scaling(&p, &c, &coarse).unwrap();
        o.require(
            s.is_quadratic(1.0),
            format!(
                "(n,ν,t)=({n},{nu},{t}): halving ratios {:.3}, {:.3} (residuals {:.2e}, {:.2e}, {:.2e})",
                s.ratios[0], s.ratios[1], s.residuals[0], s.residuals[1], s.residuals[2]
            ),
        );
    }
    o.summary = format!("worst residual {worst:.3e} at h = 2^-40; central-difference residual ×4 per halving");
    o
}

fn a5() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let bound = c.tolerance(40).to_f64();
    let mut worst: f64 = 0.0;
    for n in [5usize, 8] {
        for nu in 1..=3 {
            let r = check_symmetry(n, &c.real(2u32), nu, &c).unwrap().to_f64();
            worst = worst.max(r);
            o.require(r <= bound, format!("n={n} ν={nu}: {r:.3e} ≤ {bound:.3e}"));
        }
    }
    o.summary = format!("worst {worst:.3e} vs 2^(-bits+40) = {bound:.3e}");
    o
}

fn a6() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let c = ctx(256);
    let nu = c.complex(0.3f64);
    let t = c.real(0.8f64);
    let mut per_segment = 400;
    let contour = loop {
        let k = HankelContour::auto(&nu, &t, 2, per_segment, &c);
        if k.node_count(&nu) <= 400 {
            break k;
        }
        per_segment -= 4;
    };
    let nodes = contour.node_count(&nu);
    let direct = partition_direct(2, &nu, &t, &contour, &c).unwrap();
    let p = ModelParams::new(2, nu.clone(), t.clone()).unwrap();
    let toeplitz = log_det(&p, &c).unwrap().value().exp();
    let digits = agreeing_digits(&direct, &toeplitz);
    let elapsed = start.elapsed();
    o.require(nodes <= 400, format!("{nodes} nodes per dimension"));
    o.require(digits >= 20, format!("{digits} agreeing digits"));
    o.require(
        elapsed <= Duration::from_secs(60),
        format!("runtime {:.1}s", elapsed.as_secs_f64()),
    );
    o.summary = format!(
        "{digits} digits with {nodes} nodes per dimension, {:.1}s",
        elapsed.as_secs_f64()
    );
    o
}

fn a7() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(512);
    let mut passed = 0;
    let mut total = 0;
    for (regime, nu, tau) in [(Regime::Sub, 0.3, 0.5), (Regime::Super, 0.4, 2.0)] {
        let studies =
            convergence_studies(&Quantity::Y_FIELDS, regime, &c.complex(nu), &c.real(tau), &N_LIST, &c).unwrap();
        for s in &studies {
            total += 1;
            let fitted = s.fitted_order.unwrap_or(f64::NAN);
            let ok = (fitted - s.claimed_order.exponent).abs() <= 0.5;
            if ok {
                passed += 1;
            }
            o.require(ok, s.verdict());
            o.notes.push(format!("     residuals {}", study_rows(s)));
        }
    }
    o.summary = format!("{passed}/{total} Y-field studies within ±0.5 of the claimed order");
    o
}

fn a8() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let nodes = 200;
    let mut worst_mass: f64 = 0.0;
    let mut worst_el: f64 = 0.0;
    let mut worst_jump: f64 = 0.0;
    for tau in [1.5, 2.0, 3.0] {
        let g = super_geometry(&c.real(tau), &c.complex(0.4f64), &c).unwrap();
        let mass = Float::with_val(256, g.mass(nodes) - 1u32).abs().to_f64();
        let j = g.jump_report(nodes).unwrap();
        worst_mass = worst_mass.max(mass);
        worst_el = worst_el.max(j.euler_lagrange_c2);
        worst_jump = worst_jump.max(j.worst());
        o.require(mass <= 1e-20, format!("tau={tau}: |∫ψ - 1| = {mass:.3e}"));
        o.require(
            j.euler_lagrange_c2 <= 1e-15,
            format!("tau={tau}: E-L residual {:.3e}", j.euler_lagrange_c2),
        );
        o.require(
            j.worst() <= 1e-15,
            format!("tau={tau}: worst g relation {:.3e} ({j:?})", j.worst()),
        );
    }
    o.summary =
        format!("mass {worst_mass:.2e}, Euler–Lagrange {worst_el:.2e}, g relations {worst_jump:.2e} ({nodes} nodes)");
    o
}

fn a9() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let zero = log_barnes_g(&c.complex(0u32), &c).unwrap();
    o.require(
        zero.real().is_zero() && zero.imag().is_zero(),
        format!("log G(1) = {}", zero.real().to_f64()),
    );
    let bound = c.tolerance(32).to_f64();
    let mut worst: f64 = 0.0;
    // log G(1+z) - log G(z) = log Γ(z), compared modulo 2πi
    for &(re, im) in &[(0.3, 0.2), (2.5, 0.0), (1.7, -0.4), (-0.45, 0.3), (4.2, 3.1)] {
        let z = Complex::with_val(256, (re, im));
        let zm1 = Complex::with_val(256, &z - 1u32);
        let lhs = log_barnes_g(&z, &c).unwrap() - log_barnes_g(&zm1, &c).unwrap();
        let diff = wrap_branch(&(lhs - log_gamma(&z, &c).unwrap()));
        let r = abs_c(&diff).to_f64();
        worst = worst.max(r);
        o.require(r <= bound, format!("z={re}{im:+}i: recurrence residual {r:.3e}"));
    }
    let zp = named_constant("zeta_prime_minus1", &c).unwrap();
    let oracle = Float::with_val(256, 1u32) / 12u32 - log_glaisher(&c);
    let digits = agreeing_digits(&Complex::with_val(256, &zp), &Complex::with_val(256, &oracle));
    o.require(
        digits >= 30,
        format!("ζ'(-1) agrees with 1/12 - log A to {} digits", show(digits)),
    );
    o.summary = format!(
        "log G(1) = 0, recurrence {worst:.2e} (bound {bound:.2e}), ζ'(-1) {} digits",
        show(digits)
    );
    o
}

fn a10() -> Outcome {
    let mut o = Outcome::new();
    let c = ctx(256);
    let mut worst = u32::MAX;
    for k in [-1i64, 0, 2] {
        for &(re, im) in &[(0.3, 0.0), (0.3, 0.2), (-0.45, 0.0)] {
            for t in [0.8, 2.0, 5.0] {
                let nu = Complex::with_val(256, (re, im));
                let tt = c.real(t);
                let series = moment(k, &nu, &tt, &c).unwrap();
                let contour = HankelContour::auto(&nu, &tt, k.unsigned_abs() as usize + 1, 240, &c);
                let quad = moment_quadrature(k, &nu, &tt, &contour, &c).unwrap();
                let d = agreeing_digits(&series, &quad);
                worst = worst.min(d);
                o.require(d >= 30, format!("k={k} ν={re}{im:+}i t={t}: {} digits", show(d)));
            }
        }
    }
    o.summary = format!("27 points, worst agreement {worst} digits");
    o
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    ("A1", "log D asymptotics, τ < 1", a1),
    ("A2", "log D asymptotics, τ > 1", a2),
    ("A3", "phase transition", a3),
    ("A4", "differential identity", a4),
    ("A5", "integer-ν symmetry", a5),
    ("A6", "direct n-fold integral", a6),
    ("A7", "Y-observable asymptotics", a7),
    ("A8", "equilibrium measure", a8),
    ("A9", "constants", a9),
    ("A10", "moment cross-oracle", a10),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| a.len() >= 2 && a.starts_with('A') && a[1..].chars().all(|c| c.is_ascii_digit()))
        .collect();
    let verbose = std::env::var_os("GWW_ACCEPTANCE_QUIET").is_none();
    let mut failures = 0;
    for (id, title, run) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {id} {title}: {} [{:.1}s]",
            outcome.summary,
            start.elapsed().as_secs_f64()
        );
        if verbose {
            for note in &outcome.notes {
                println!("       {note}");
            }
        }
        if !outcome.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn show(digits: u32) -> String {
    if digits >= EXACT_AGREEMENT {
        "all".into()
    } else {
        digits.to_string()
    }
}
