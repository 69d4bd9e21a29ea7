use jnr_core::linalg::eigen::hermitian_eig;
use jnr_core::linalg::hermitian::{fro_norm, CMatrix, CVector, HermitianMatrix};
use jnr_core::linalg::ops::{compress, frobenius_inner, numerical_rank, partial_transpose};
use num_complex::Complex64;
use proptest::prelude::*;

mod common;
use common::{cmatrix, hermitian, unitary};

/// Sum of `k` random rank-one terms with signs, so the rank is `k` generically.
fn low_rank(n: usize) -> impl Strategy<Value = (usize, HermitianMatrix)> {
    (0..=n).prop_flat_map(move |k| {
        (Just(k), cmatrix(n)).prop_map(move |(k, m)| {
            let mut a = CMatrix::zeros(n, n);
            for j in 0..k {
                let v: CVector = m.column(j).into_owned();
                let s = if j % 2 == 0 { 1.0 } else { -2.0 };
                a += &v * v.adjoint() * Complex64::new(s, 0.0);
            }
            (k, HermitianMatrix::new(a).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_decomposition_reconstructs(a in (1usize..6).prop_flat_map(hermitian)) {
        let n = a.n();
        let e = hermitian_eig(&a);
        let mut r = CMatrix::zeros(n, n);
        for (i, l) in e.values.iter().enumerate() {
            let v = e.vector(i);
            r += &v * v.adjoint() * Complex64::new(*l, 0.0);
        }
        prop_assert!(fro_norm(&(a.matrix() - r)) <= 1e-9 * a.norm().max(1e-300));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_transpose_is_an_involution(a in hermitian(4)) {
        let back = partial_transpose(&partial_transpose(&a).unwrap()).unwrap();
        prop_assert_eq!(back.matrix(), a.matrix());
    }

    #[test]
    fn rank_and_kernel_add_up((k, a) in low_rank(4)) {
        let tol = 1e-9;
        let thr = tol * a.norm().max(1.0);
        let kernel = a.matrix().clone().singular_values().iter().filter(|s| **s <= thr).count();
        let rank = numerical_rank(&a, tol);
        prop_assert_eq!(rank + kernel, 4);
        prop_assert_eq!(rank, k);
    }

    #[test]
    fn full_compression_keeps_the_spectrum(a in hermitian(4), q in unitary(4)) {
        let b = compress(&a, &q).unwrap();
        let ea = hermitian_eig(&a).values;
        let eb = hermitian_eig(&b).values;
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() < 1e-9, "{:?} vs {:?}", ea, eb);
        }
    }

    #[test]
    fn frobenius_inner_is_positive_definite(a in hermitian(3), zero in any::<bool>()) {
        let a = if zero { HermitianMatrix::zeros(3) } else { a };
        let s = frobenius_inner(&a, &a).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert_eq!(s == 0.0, fro_norm(a.matrix()) == 0.0);
    }
}
