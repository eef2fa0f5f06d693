use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signfocus::cells::CellId;
use signfocus::metrics::{exhaustive_report, sampled_report};
use signfocus::multiplier::{static_error_bound, Multiplier, MultiplierConfig, Variant};
use signfocus::ppm::{evaluate, generate_bw, SignedWord};

fn big(a: i64, b: i64) -> i64 {
    let p = BigInt::from(a) * BigInt::from(b);
    i64::try_from(p).unwrap()
}

fn operands(n: u32) -> std::ops::RangeInclusive<i64> {
    SignedWord::min(n)..=SignedWord::max(n)
}

#[test]
fn matrix_matches_integer_product() {
    for n in [4, 6] {
        let m = generate_bw(n).unwrap();
        for a in operands(n) {
            for b in operands(n) {
                let (wa, wb) = (
                    SignedWord::new(n, a).unwrap(),
                    SignedWord::new(n, b).unwrap(),
                );
                assert_eq!(evaluate(&m, wa, wb).unwrap(), big(a, b), "n={n} {a}*{b}");
            }
        }
    }
    let m = generate_bw(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100_000 {
        let (a, b) = (rng.gen_range(operands(8)), rng.gen_range(operands(8)));
        let (wa, wb) = (
            SignedWord::new(8, a).unwrap(),
            SignedWord::new(8, b).unwrap(),
        );
        assert_eq!(evaluate(&m, wa, wb).unwrap(), big(a, b));
    }
}

#[test]
fn evaluate_examples() {
    let w = |n, v| SignedWord::new(n, v).unwrap();
    assert_eq!(
        evaluate(&generate_bw(4).unwrap(), w(4, -8), w(4, -8)).unwrap(),
        64
    );
    assert_eq!(
        evaluate(&generate_bw(8).unwrap(), w(8, -1), w(8, 1)).unwrap(),
        -1
    );
    assert_eq!(
        evaluate(&generate_bw(8).unwrap(), w(8, 117), w(8, -93)).unwrap(),
        -10881
    );
    assert!(evaluate(&generate_bw(8).unwrap(), w(4, 1), w(8, 1)).is_err());
}

#[test]
fn exact_multiplier_is_exact() {
    for n in [4, 6, 8] {
        let m = Multiplier::new(MultiplierConfig::exact(n).unwrap()).unwrap();
        for a in operands(n) {
            for b in operands(n) {
                assert_eq!(m.multiply(a, b), big(a, b), "n={n} {a}*{b}");
            }
        }
    }
}

#[test]
fn exact_cells_without_transforms_reproduce_exact() {
    // Any preset's skeleton with exact centre cells and no truncation or
    // compensation must be exact: approximation lives only in those parts.
    for v in Variant::PRESETS {
        let mut cfg = MultiplierConfig::preset(v, 8).unwrap();
        cfg.variant = Variant::Exact;
        cfg.truncation = false;
        cfg.compensation = false;
        cfg.csp_cells.low = [CellId::Abc1Exact; 2];
        let m = Multiplier::new(cfg).unwrap();
        for a in operands(8).step_by(3) {
            for b in operands(8) {
                assert_eq!(m.multiply(a, b), a * b);
            }
        }
    }
}

#[test]
fn every_preset_within_static_bound() {
    for v in Variant::PRESETS {
        let cfg = MultiplierConfig::preset(v, 8).unwrap();
        let bound = static_error_bound(&cfg);
        let m = Multiplier::new(cfg).unwrap();
        for a in operands(8) {
            for b in operands(8) {
                let d = (m.multiply(a, b) - a * b).unsigned_abs();
                assert!(d <= bound, "{v}: {a}*{b} off by {d} > {bound}");
            }
        }
    }
}

#[test]
fn other_widths_compile_and_respect_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 4..=16 {
        for v in [Variant::Exact, Variant::Proposed] {
            let cfg = MultiplierConfig::preset(v, n).unwrap();
            let bound = static_error_bound(&cfg);
            let m = Multiplier::new(cfg).unwrap();
            for _ in 0..2000 {
                let (a, b) = (rng.gen_range(operands(n)), rng.gen_range(operands(n)));
                let d = (m.multiply(a, b) - a * b).unsigned_abs();
                assert!(d <= bound, "n={n} {v}");
            }
        }
    }
}

#[test]
fn mean_ed_matches_straight_loop() {
    for v in Variant::PRESETS {
        let cfg = MultiplierConfig::preset(v, 6).unwrap();
        let m = Multiplier::new(cfg).unwrap();
        let mut sum: i64 = 0;
        let mut max = 0u64;
        let mut wrong = 0u64;
        for a in operands(6) {
            for b in operands(6) {
                let d = a * b - m.multiply(a, b);
                sum += d;
                max = max.max(d.unsigned_abs());
                wrong += u64::from(d != 0);
            }
        }
        let r = exhaustive_report(&cfg).unwrap();
        assert_eq!(r.mean_ed, sum as f64 / 4096.0, "{v}");
        assert_eq!(r.max_ed, max);
        assert_eq!(r.er, wrong as f64 / 4096.0);
    }
}

#[test]
fn sampled_full_space_equals_exhaustive() {
    let cfg = MultiplierConfig::proposed(8).unwrap();
    assert_eq!(
        sampled_report(&cfg, 1 << 16, 9, None).unwrap(),
        exhaustive_report(&cfg).unwrap()
    );
}

#[test]
fn sampled_seeds_agree_statistically() {
    let cfg = MultiplierConfig::proposed(8).unwrap();
    let k = 20_000u64;
    let a = sampled_report(&cfg, k, 1, None).unwrap();
    let b = sampled_report(&cfg, k, 2, None).unwrap();
    assert_eq!(sampled_report(&cfg, k, 1, Some(3)).unwrap(), a);
    let full = exhaustive_report(&cfg).unwrap();
    // Spread of per-pair normalized error distances over the full space.
    let m = Multiplier::new(cfg).unwrap();
    let norm = 16384.0;
    let mut sq = 0.0;
    for x in operands(8) {
        for y in operands(8) {
            let e = (m.multiply(x, y) - x * y).unsigned_abs() as f64 / norm;
            sq += (e - full.nmed) * (e - full.nmed);
        }
    }
    let sigma = (sq / 65536.0).sqrt() / (k as f64).sqrt();
    // Difference of two independent means: sd is sqrt(2) sigma.
    assert!((a.nmed - b.nmed).abs() <= 3.0 * 2f64.sqrt() * sigma);
}
