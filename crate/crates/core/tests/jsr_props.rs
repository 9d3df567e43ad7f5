use northshield::jsr::{
    inf_norm, jsr_lower_bound, jsr_upper_bound, spectral_radius, word_product, word_product_f64, MatrixSet,
    DEFAULT_BUDGET,
};
use northshield::linrep::QMatrix;
use proptest::prelude::*;

#[test]
fn upper_bound_does_not_grow_when_length_doubles() {
    for set in [MatrixSet::stern(), MatrixSet::northshield()] {
        for n in [1, 2, 4, 8] {
            if (set.len() as u64).pow(2 * n) > DEFAULT_BUDGET {
                continue;
            }
            let single = jsr_upper_bound(&set, n, DEFAULT_BUDGET).unwrap();
            let double = jsr_upper_bound(&set, 2 * n, DEFAULT_BUDGET).unwrap();
            assert!(double <= single + 1e-9, "n = {n}: {double} > {single}");
        }
    }
}

#[test]
fn singleton_silver_matrix() {
    let b1 = MatrixSet::northshield().matrices()[1].clone();
    let set = MatrixSet::new(vec![b1.clone()]).unwrap();
    let rho = spectral_radius(&b1).unwrap();
    let lower = jsr_lower_bound(&set, 1, DEFAULT_BUDGET).unwrap();
    let upper = jsr_upper_bound(&set, 1, DEFAULT_BUDGET).unwrap();
    assert!((lower.value - rho).abs() < 1e-12);
    assert!((upper - rho).abs() < 1e-12);
}

#[test]
fn builtin_lower_below_upper() {
    for set in [MatrixSet::stern(), MatrixSet::northshield()] {
        for lo in 1..=6 {
            let lower = jsr_lower_bound(&set, lo, DEFAULT_BUDGET).unwrap().value;
            for up in 1..=8 {
                assert!(lower <= jsr_upper_bound(&set, up, DEFAULT_BUDGET).unwrap() + 1e-9);
            }
        }
    }
}

fn small_matrix() -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((-3i64..=3, -2i64..=2), 4)
        .prop_map(|e| QMatrix::from_pairs(&[&[e[0], e[1]], &[e[2], e[3]]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_sets_lower_below_upper(ms in prop::collection::vec(small_matrix(), 1..4), lo in 1u32..5, up in 1u32..7) {
        let set = MatrixSet::new(ms).unwrap();
        let lower = jsr_lower_bound(&set, lo, DEFAULT_BUDGET).unwrap().value;
        let upper = jsr_upper_bound(&set, up, DEFAULT_BUDGET).unwrap();
        prop_assert!(lower <= upper * (1.0 + 1e-9) + 1e-9, "{} > {}", lower, upper);
    }

    #[test]
    fn shadow_products_agree(word in prop::collection::vec(0u32..3, 0..=16)) {
        let set = MatrixSet::northshield();
        let exact: Vec<f64> = word_product(&set, &word).unwrap().to_f64();
        let float = word_product_f64(&set, &word).unwrap();
        let scale = inf_norm(&exact, 2);
        for (a, b) in exact.iter().zip(&float) {
            prop_assert!((a - b).abs() <= 1e-9 * scale);
        }
    }
}
