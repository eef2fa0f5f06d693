use proptest::prelude::*;
use signfocus::multiplier::{Multiplier, MultiplierConfig, Variant};
use signfocus::ppm::{apply_truncation, evaluate, generate_bw, partition, SignedWord};

fn width_and_operands() -> impl Strategy<Value = (u32, i64, i64)> {
    (4u32..=16).prop_flat_map(|n| {
        let r = SignedWord::min(n)..=SignedWord::max(n);
        (Just(n), r.clone(), r)
    })
}

proptest! {
    #[test]
    fn matrix_is_exact_at_any_width((n, a, b) in width_and_operands()) {
        let m = generate_bw(n).unwrap();
        let v = evaluate(&m, SignedWord::new(n, a).unwrap(), SignedWord::new(n, b).unwrap()).unwrap();
        prop_assert_eq!(v, a * b);
    }

    #[test]
    fn exact_multiplier_at_any_width((n, a, b) in width_and_operands()) {
        let m = Multiplier::new(MultiplierConfig::exact(n).unwrap()).unwrap();
        prop_assert_eq!(m.multiply(a, b), a * b);
    }

    #[test]
    fn products_are_deterministic((n, a, b) in width_and_operands(), k in 0usize..7) {
        let cfg = MultiplierConfig::preset(Variant::PRESETS[k], n).unwrap();
        let (m1, m2) = (Multiplier::new(cfg).unwrap(), Multiplier::new(cfg).unwrap());
        let p = m1.multiply(a, b);
        prop_assert_eq!(p, m1.multiply(a, b));
        prop_assert_eq!(p, m2.multiply(a, b));
        let half = 1i64 << (2 * n - 1);
        prop_assert!((-half..half).contains(&p));
    }

    #[test]
    fn signed_word_rejects_out_of_range(n in 4u32..=16, off in 1i64..1000) {
        prop_assert!(SignedWord::new(n, SignedWord::max(n) + off).is_err());
        prop_assert!(SignedWord::new(n, SignedWord::min(n) - off).is_err());
    }
}

#[test]
fn regions_cover_every_column_once() {
    for n in 4..=16 {
        let r = partition(n);
        let mut all: Vec<u32> = r
            .lsp
            .iter()
            .chain(r.csp.iter())
            .chain(r.msp.iter())
            .copied()
            .collect();
        all.sort();
        assert_eq!(all, (0..2 * n).collect::<Vec<_>>());
        assert_eq!(r.lsp.len() as u32, n - 1);
    }
}

#[test]
fn truncation_only_removes_low_bits() {
    for n in 4..=16 {
        let m = generate_bw(n).unwrap();
        let t = apply_truncation(&m, &partition(n));
        assert!(t.bit_count() <= m.bit_count());
        for c in 0..2 * n {
            if c < n - 1 {
                assert!(t.column(c).is_empty());
            } else {
                assert_eq!(t.column(c), m.column(c));
            }
        }
    }
    let m = generate_bw(8).unwrap();
    assert_eq!(
        m.bit_count() - apply_truncation(&m, &partition(8)).bit_count(),
        28
    );
}
