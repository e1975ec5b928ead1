// SPDX-License-Identifier: Apache-2.0

use cvneg::fock::{partial_transpose, transpose_full};
use cvneg::negativity::en_analytic;
use cvneg::phase_space::{covariance_from_lambda, lambda_params};
use cvneg::verify::symplectic_trace_norm;
use cvneg::{ChannelParams, Complex64, FockOp, Mode};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn rates() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0..0.5f64, 0.0..0.3f64, 0.0..0.5f64, 0.0..0.3f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transposes_are_involutions(cutoff in 1usize..5, entries in prop::collection::vec(-1.0..1.0f64, 2 * 625)) {
        let dim = (cutoff + 1) * (cutoff + 1);
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(entries[k], entries[k + 1])
        });
        let op = FockOp::from_matrix(2, cutoff, m).unwrap();
        let twice = partial_transpose(&partial_transpose(&op, Mode::Second).unwrap(), Mode::Second).unwrap();
        prop_assert_eq!(twice.matrix(), op.matrix());
        let first = partial_transpose(&op, Mode::First).unwrap();
        let both = partial_transpose(&first, Mode::Second).unwrap();
        let full = transpose_full(&op);
        prop_assert_eq!(both.matrix(), full.matrix());
    }

    #[test]
    fn negativity_is_nonnegative_and_flags_entanglement(r in 0.0..2.0f64, (k1, g1, k2, g2) in rates(), t in 0.0..10.0f64) {
        let ch = ChannelParams::new(k1, g1, k2, g2, t).unwrap();
        let rep = en_analytic(r, &ch).unwrap();
        prop_assert!(rep.e_n >= 0.0);
        prop_assert_eq!(rep.entangled, rep.e_n > 0.0);
        prop_assert!(rep.trace_norm >= 1.0 - 1e-12);
    }

    #[test]
    fn loss_never_increases_negativity(r in 0.0..2.0f64, k1 in 0.0..0.5f64, k2 in 0.0..0.5f64, t in 0.0..10.0f64, dt in 0.0..2.0f64) {
        let at = |t| en_analytic(r, &ChannelParams::new(k1, 0.0, k2, 0.0, t).unwrap()).unwrap().e_n;
        prop_assert!(at(t + dt) <= at(t) + 1e-12);
    }

    #[test]
    fn trace_norm_matches_symplectic_spectrum(r in 0.0..1.5f64, (k1, g1, k2, g2) in rates(), t in 0.0..5.0f64) {
        let ch = ChannelParams::new(k1, g1, k2, g2, t).unwrap();
        let rep = en_analytic(r, &ch).unwrap();
        let cov = covariance_from_lambda(&lambda_params(r, &ch).unwrap()).unwrap().cov4().unwrap();
        let symplectic = symplectic_trace_norm(&cov).unwrap();
        prop_assert!((rep.trace_norm - symplectic).abs() <= 1e-9 * symplectic, "{} vs {}", rep.trace_norm, symplectic);
    }
}
