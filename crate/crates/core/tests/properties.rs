//! Property tests over randomly drawn parameters.

use gww_core::precision::{abs_c, agreeing_digits, DecimalComplex, DecimalReal, PrecisionContext};
use gww_core::special::{moment, MomentCache, MomentTable};
use gww_core::toeplitz::{log_det, log_det_cached, wrap_branch};
use gww_core::verify::check_symmetry;
use gww_core::ModelParams;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

fn ctx() -> PrecisionContext {
    PrecisionContext::new(192).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decimal_encoding_round_trips(m in -1.0e6f64..1.0e6, e in -300i32..300, bits in 64u32..1024) {
        let x = Float::with_val(bits, m) * Float::with_val(bits, 10u32).pow(e) / 3u32;
        let back = DecimalReal::encode(&x).decode().unwrap();
        prop_assert_eq!(back.prec(), bits);
        prop_assert_eq!(back, x.clone());
        let z = Complex::with_val(bits, (&x, -x.clone()));
        prop_assert_eq!(DecimalComplex::encode(&z).decode().unwrap(), z);
    }

    #[test]
    fn one_by_one_is_the_central_moment(re in -2.5f64..2.5, im in -1.0f64..1.0, t in 0.05f64..6.0) {
        let c = ctx();
        let p = ModelParams::from_f64(1, re, im, t, &c).unwrap();
        let m0 = moment(0, &p.nu, &p.t, &c).unwrap();
        prop_assume!(abs_c(&m0) > 1e-30);
        let ld = log_det(&p, &c).unwrap().value();
        let diff = wrap_branch(&Complex::with_val(192, &ld - m0.ln()));
        prop_assert!(abs_c(&diff) < 1e-45);
    }

    #[test]
    fn integer_orders_are_symmetric(n in 1usize..9, nu in 1i32..=3, t in 0.1f64..5.0) {
        let c = ctx();
        let r = check_symmetry(n, &c.real(t), nu, &c).unwrap();
        prop_assert!(r <= c.tolerance(40), "{}", r);
    }

    #[test]
    fn conjugate_order_conjugates_log_det(n in 1usize..10, re in -0.45f64..0.45, im in 0.05f64..0.5, t in 0.1f64..6.0) {
        let c = ctx();
        let p = ModelParams::from_f64(n, re, im, t, &c).unwrap();
        let q = ModelParams::from_f64(n, re, -im, t, &c).unwrap();
        let a = log_det(&p, &c).unwrap().value();
        let b = log_det(&q, &c).unwrap().value();
        let diff = wrap_branch(&Complex::with_val(192, &a - b.conj()));
        prop_assert!(abs_c(&diff) < 1e-40, "{}", abs_c(&diff));
    }

    #[test]
    fn cache_does_not_change_results(n in 1usize..8, re in -0.45f64..0.45, t in 0.1f64..4.0) {
        let c = ctx();
        let p = ModelParams::from_f64(n, re, 0.0, t, &c).unwrap();
        let cache = MomentCache::new();
        let cold = log_det_cached(&p, &c, Some(&cache)).unwrap();
        prop_assert!(!cache.is_empty());
        let warm = log_det_cached(&p, &c, Some(&cache)).unwrap();
        prop_assert_eq!(cold.value(), warm.value());
        prop_assert_eq!(agreeing_digits(&cold.value(), &log_det(&p, &c).unwrap().value()), gww_core::precision::EXACT_AGREEMENT);
    }

    #[test]
    fn moment_table_matches_pointwise(k_max in 0usize..6, re in -1.0f64..1.0, t in 0.1f64..4.0) {
        let c = ctx();
        let nu = c.complex(re);
        let tt = c.real(t);
        let table = MomentTable::symmetric(&nu, &tt, k_max, &c, None).unwrap();
        for k in -(k_max as i64)..=(k_max as i64) {
            let direct = moment(k, &nu, &tt, &c).unwrap();
            prop_assert!(agreeing_digits(table.get(k), &direct) >= 50, "k={}", k);
        }
    }
}

#[test]
fn cache_file_round_trip() {
    let c = ctx();
    let p = ModelParams::from_f64(6, 0.3, 0.2, 2.5, &c).unwrap();
    let cache = MomentCache::new();
    let before = log_det_cached(&p, &c, Some(&cache)).unwrap().value();
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let path = dir.join("m.jsonl");
    cache.save(&path).unwrap();
    let loaded = MomentCache::load(&path).unwrap();
    assert_eq!(loaded.len(), cache.len());
    let after = log_det_cached(&p, &c, Some(&loaded)).unwrap().value();
    assert_eq!(before, after);
    loaded.save(&dir.join("again.jsonl")).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(dir.join("again.jsonl")).unwrap()
    );
}
