mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use cpsd::exact::{rat, trace_inner, Rational};
use cpsd::{is_psd_exact, psd_check, PsdCheck, SymMatrix};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn symmetric(max_dim: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec(rational(), n * (n + 1) / 2)
            .prop_map(move |upper| SymMatrix::from_upper(n, upper).unwrap())
    })
}

/// `Bᵀ B` for a random rectangular `B`: always PSD, often singular.
fn gram_matrix(max_dim: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_dim, 1..=4usize).prop_flat_map(|(n, k)| {
        proptest::collection::vec(rational(), n * k).prop_map(move |b| {
            SymMatrix::from_fn(n, |i, j| {
                (0..k).map(|l| &b[l * n + i] * &b[l * n + j]).sum()
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_psd_agrees_with_float_eigenvalues(m in symmetric(5)) {
        let eig = common::jacobi_eigenvalues(m.to_f64_rows());
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        // eigenvalues within 1e-9 of zero are left to the exact minor test below
        if min.abs() > 1e-9 {
            prop_assert_eq!(is_psd_exact(&m), min > 0.0);
        }
    }

    #[test]
    fn exact_psd_agrees_with_principal_minors(m in symmetric(4)) {
        prop_assert_eq!(is_psd_exact(&m), common::psd_by_minors(&m));
    }

    #[test]
    fn indefinite_witness_is_negative(m in symmetric(5)) {
        if let PsdCheck::Indefinite { witness } = psd_check(&m) {
            prop_assert!(m.quad_form(&witness).unwrap().is_negative());
        }
    }

    #[test]
    fn gram_matrices_are_psd(g in gram_matrix(5)) {
        prop_assert!(is_psd_exact(&g));
    }

    #[test]
    fn trace_inner_is_a_norm(x in symmetric(4)) {
        let v = trace_inner(&x, &x).unwrap();
        prop_assert!(!v.is_negative());
        prop_assert_eq!(v.is_zero(), x.is_zero());
        prop_assert_eq!(v, common::frobenius(&x, &x));
    }

    #[test]
    fn json_roundtrip(m in symmetric(4)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: SymMatrix = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, m);
    }
}
