//! Oracle tests for the public engine: closed forms and limits the exact
//! determinant must reproduce.

use gww_core::asymptotics::{free_energy, third_order_gap};
use gww_core::precision::{abs_c, agreeing_digits, PrecisionContext};
use gww_core::special::{bessel_i, log_barnes_g, moment, named_constant, HankelContour};
use gww_core::toeplitz::{h_sequence, log_det, log_det_escalated, partition_direct, wrap_branch};
use gww_core::ModelParams;
use rug::float::Constant;
use rug::{Complex, Float};

fn ctx(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).unwrap()
}

#[test]
fn half_integer_bessel_closed_form() {
    let c = ctx(256);
    let t = c.real(2.5f64);
    // I_{1/2}(t) = √(2/(πt)) sinh t
    let got = bessel_i(&c.complex(0.5f64), &t, &c).unwrap().value;
    let pi = Float::with_val(256, Constant::Pi);
    let want = (Float::with_val(256, 2u32) / (pi * &t)).sqrt() * Float::with_val(256, t.sinh_ref());
    assert!(agreeing_digits(&got, &Complex::with_val(256, want)) >= 70);
}

#[test]
fn moments_are_shifted_bessel_values() {
    let c = ctx(192);
    let nu = c.complex((0.3f64, 0.2f64));
    let t = c.real(1.25f64);
    for k in [-3i64, 0, 2, 5] {
        let order = Complex::with_val(192, -Complex::with_val(192, &nu + k));
        let want = bessel_i(&order, &t, &c).unwrap().value;
        assert!(agreeing_digits(&moment(k, &nu, &t, &c).unwrap(), &want) >= 55, "k={k}");
    }
}

#[test]
fn szego_limit_for_zero_order() {
    // For ν = 0 the symbol is e^{t cos θ}, and the strong Szegő limit gives
    // log D_n(t) → t²/4 faster than any power once n ≫ t.
    let c = ctx(256);
    let p = ModelParams::from_f64(40, 0.0, 0.0, 2.0, &c).unwrap();
    let ld = log_det(&p, &c).unwrap().value();
    let diff = wrap_branch(&Complex::with_val(256, &ld - 1u32));
    assert!(abs_c(&diff) < 1e-40, "{}", abs_c(&diff));
}

#[test]
fn minors_telescope_to_log_det() {
    let c = ctx(256);
    let p = ModelParams::from_f64(12, 0.3, 0.1, 3.0, &c).unwrap();
    let hs = h_sequence(&p, &c).unwrap();
    for k in 1..=p.n {
        let direct = log_det(&p.with_n(k), &c).unwrap().value();
        let diff = wrap_branch(&Complex::with_val(256, &direct - hs.log_minors[k].value()));
        assert!(abs_c(&diff) < 1e-60, "k={k}");
    }
}

#[test]
fn single_size_partition_function_is_first_moment() {
    let c = ctx(128);
    let p = ModelParams::from_f64(1, 0.3, 0.0, 0.8, &c).unwrap();
    let contour = HankelContour::auto(&p.nu, &p.t, 1, 120, &c);
    let direct = partition_direct(1, &p.nu, &p.t, &contour, &c).unwrap();
    let m0 = moment(0, &p.nu, &p.t, &c).unwrap();
    assert!(agreeing_digits(&direct, &m0) >= 20);
}

#[test]
fn escalation_agrees_with_fixed_precision() {
    let c = ctx(256);
    let p = ModelParams::from_f64(16, 0.4, 0.0, 8.0, &c).unwrap();
    let plain = log_det(&p, &c).unwrap().value();
    let esc = log_det_escalated(&p, &c, None).unwrap();
    assert!(esc.achieved_digits >= c.target_digits);
    assert!(agreeing_digits(&plain, &esc.value.value()) >= 60);
}

#[test]
fn free_energy_is_continuous_with_cubic_gap() {
    let c = ctx(128);
    let at_one = free_energy(&c.real(1u32)).unwrap();
    assert!((at_one.value().to_f64() - 0.25).abs() < 1e-30);
    assert!(third_order_gap(&c.real(1u32)).unwrap().gap.is_zero());
    // The difference of the two phases starts at -(τ-1)³/6.
    for tau in [1.05f64, 1.1] {
        let g = third_order_gap(&c.real(tau)).unwrap();
        let cubic = (tau - 1.0).powi(3) / 6.0;
        assert!((g.gap.to_f64() + cubic).abs() < 0.1 * cubic, "{tau}: {}", g.gap);
        assert!(g.residual.to_f64().abs() < (tau - 1.0).powi(4));
    }
}

#[test]
fn barnes_and_zeta_constants() {
    let c = ctx(256);
    let g1 = log_barnes_g(&c.complex(1u32), &c).unwrap();
    assert!(abs_c(&g1) < 1e-70);
    let z = named_constant("zeta_prime_minus1", &c).unwrap();
    assert!((z.to_f64() + 0.165_421_143_700_450_93).abs() < 1e-16);
}
