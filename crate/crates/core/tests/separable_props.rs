use jnr_core::linalg::eigen::hermitian_eig;
use jnr_core::linalg::hermitian::HermitianMatrix;
use jnr_core::separable::{ppt_margins, ppt_min, seesaw_min, seesaw_run};
use jnr_core::Settings;
use num_complex::Complex64;
use proptest::prelude::*;

mod common;
use common::hermitian;

fn qubit() -> impl Strategy<Value = [Complex64; 2]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| [Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn seesaw_never_increases(h in hermitian(4), b0 in qubit()) {
        let run = seesaw_run(h.matrix(), b0, 1e-13, 200);
        prop_assert!(run.monotone);
        for w in run.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * h.norm().max(1.0), "{:?}", run.history);
        }
    }

    #[test]
    fn ppt_optimum_is_a_ppt_state_above_the_ground_energy(h in hermitian(4)) {
        let s = Settings::default();
        let (value, rho) = ppt_min(&h, &s).unwrap();
        let (low, low_pt) = ppt_margins(&rho);
        prop_assert!(low >= -1e-9 && low_pt >= -1e-9, "margins {low:e} {low_pt:e}");
        prop_assert!((rho.matrix().trace() - 1.0).abs() < 1e-9);
        prop_assert!(value >= hermitian_eig(&h).values[0] - 1e-8);
        let sw = seesaw_min(h.matrix(), s.seesaw_restarts, s.seed, 0, s.seesaw_tol, s.seesaw_max_iter);
        prop_assert!(sw.value >= value - 1e-6, "seesaw {} below ppt {value}", sw.value);
    }

    #[test]
    fn ppt_minimum_is_superadditive(x in hermitian(4), y in hermitian(4)) {
        let s = Settings::default();
        let xy = HermitianMatrix::combination(&[1.0, 1.0], &[&x, &y]);
        let (vx, _) = ppt_min(&x, &s).unwrap();
        let (vy, _) = ppt_min(&y, &s).unwrap();
        let (vxy, _) = ppt_min(&xy, &s).unwrap();
        prop_assert!(vxy >= vx + vy - 1e-8, "{vxy} < {vx} + {vy}");
    }
}
