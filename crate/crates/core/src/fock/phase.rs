// SPDX-License-Identifier: Apache-2.0

//! Phase-space quantities evaluated directly on Fock matrices.
//!
//! Quadratures are `Q = a + a†` and `P = (a − a†)/i`. The characteristic
//! function is `χ(α) = tr[ρ D(α)]`; with `α = q + ip` this is
//! `tr[ρ e^{i(pQ − qP)}]`. The Wigner function is `tr[ρ Δ(α)]` with
//! `Δ(α) = (1/π) D(α) (−1)^{a†a} D(−α)`, so the vacuum gives
//! `(1/π) e^{−2|α|²}`.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

use super::builders::displacement_matrix;
use super::{displacement_op, Factorials, FockOp, ZERO};
use crate::{Error, Result};

/// Extra levels used when forming `D(α) Π D(−α)` so the truncated product
/// converges on the retained block.
const WIGNER_PAD: usize = 40;

/// Largest imaginary part tolerated in a Wigner value.
const WIGNER_IMAG_TOL: f64 = 1e-9;

/// Largest first moment accepted by the covariance extraction.
const MEAN_TOL: f64 = 1e-8;

fn check_points(rho: &FockOp, alphas: &[Complex64]) -> Result<()> {
    if alphas.len() != rho.modes() {
        return Err(Error::invalid(format!(
            "{} phase-space amplitude(s) given for a {}-mode operator",
            alphas.len(),
            rho.modes()
        )));
    }
    Ok(())
}

/// `tr[ρ O₁ ⊗ O₂]` (or `tr[ρ O₁]`) for single-mode factor matrices.
pub(crate) fn trace_with_factors(rho: &FockOp, factors: &[DMatrix<Complex64>]) -> Complex64 {
    let m = rho.matrix();
    match factors {
        [f] => {
            let dim = rho.dim();
            let mut acc = ZERO;
            for col in 0..dim {
                for row in 0..dim {
                    acc += m[(row, col)] * f[(col, row)];
                }
            }
            acc
        }
        [f1, f2] => {
            let levels = rho.levels();
            let mut acc = ZERO;
            for n1 in 0..levels {
                for n2 in 0..levels {
                    let col = n1 * levels + n2;
                    for m1 in 0..levels {
                        let x = f1[(n1, m1)];
                        if x == ZERO {
                            continue;
                        }
                        for m2 in 0..levels {
                            acc += m[(m1 * levels + m2, col)] * x * f2[(n2, m2)];
                        }
                    }
                }
            }
            acc
        }
        _ => unreachable!("operators have one or two modes"),
    }
}

/// `tr[ρ D(α₁) ⊗ D(α₂)]`, one amplitude per mode.
pub fn char_fn_point(rho: &FockOp, alphas: &[Complex64]) -> Result<Complex64> {
    check_points(rho, alphas)?;
    let factors = alphas
        .iter()
        .map(|&a| Ok(displacement_op(a, rho.cutoff())?.into_matrix()))
        .collect::<Result<Vec<_>>>()?;
    Ok(trace_with_factors(rho, &factors))
}

/// Two-mode shorthand for [`char_fn_point`].
pub fn char_fn_point2(rho: &FockOp, alpha1: Complex64, alpha2: Complex64) -> Result<Complex64> {
    char_fn_point(rho, &[alpha1, alpha2])
}

pub(crate) fn wigner_operator(alpha: Complex64, cutoff: usize) -> Result<DMatrix<Complex64>> {
    // the tail check runs at the caller's cutoff; the padded product is internal
    displacement_op(alpha, cutoff)?;
    let big = cutoff + WIGNER_PAD;
    let d = displacement_matrix(alpha, big);
    let dim = cutoff + 1;
    Ok(DMatrix::from_fn(dim, dim, |m, n| {
        let mut acc = ZERO;
        for k in 0..=big {
            let term = d[(m, k)] * d[(n, k)].conj();
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc / std::f64::consts::PI
    }))
}

/// `tr[ρ Δ(α₁) ⊗ Δ(α₂)]`, one amplitude per mode.
pub fn wigner_point_fock(rho: &FockOp, alphas: &[Complex64]) -> Result<f64> {
    check_points(rho, alphas)?;
    let factors = alphas
        .iter()
        .map(|&a| wigner_operator(a, rho.cutoff()))
        .collect::<Result<Vec<_>>>()?;
    let value = trace_with_factors(rho, &factors);
    if value.im.abs() > WIGNER_IMAG_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "Wigner value has imaginary part {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

pub fn wigner_point_fock2(rho: &FockOp, alpha1: Complex64, alpha2: Complex64) -> Result<f64> {
    wigner_point_fock(rho, &[alpha1, alpha2])
}

/// `tr[ρ ⊗_μ a_μ†^{j_μ} a_μ^{k_μ}]` with one `(j, k)` pair per mode.
pub fn expect_normal(rho: &FockOp, powers: &[(usize, usize)]) -> Result<Complex64> {
    if powers.len() != rho.modes() {
        return Err(Error::invalid(format!(
            "{} exponent pair(s) given for a {}-mode operator",
            powers.len(),
            rho.modes()
        )));
    }
    let cutoff = rho.cutoff();
    let fact = Factorials::new(cutoff);
    // ⟨m|a†ʲaᵏ|n⟩ with m = n − k + j
    let element = |n: usize, (j, k): (usize, usize)| -> Option<(usize, f64)> {
        if n < k {
            return None;
        }
        let p = n - k;
        let m = p + j;
        if m > cutoff {
            return None;
        }
        Some((m, fact.ratio(&[n, m], &[p, p], &[])))
    };
    let levels = rho.levels();
    let mut acc = ZERO;
    match powers {
        [pw] => {
            for n in 0..levels {
                if let Some((m, v)) = element(n, *pw) {
                    acc += rho.get(n, m) * v;
                }
            }
        }
        [pw1, pw2] => {
            for n1 in 0..levels {
                let Some((m1, v1)) = element(n1, *pw1) else { continue };
                for n2 in 0..levels {
                    if let Some((m2, v2)) = element(n2, *pw2) {
                        acc += rho.get(n1 * levels + n2, m1 * levels + m2) * (v1 * v2);
                    }
                }
            }
        }
        _ => unreachable!("operators have one or two modes"),
    }
    Ok(acc)
}

/// Quadrature `X = c a + c̄ a†` on mode `mode`: `Q` has `c = 1`, `P` has `c = −i`.
#[derive(Clone, Copy)]
struct Quadrature {
    mode: usize,
    c: Complex64,
}

fn quadratures(modes: usize) -> Vec<Quadrature> {
    (0..modes)
        .flat_map(|mode| {
            [
                Quadrature { mode, c: Complex64::new(1.0, 0.0) },
                Quadrature { mode, c: Complex64::new(0.0, -1.0) },
            ]
        })
        .collect()
}

/// Symmetrized second moments `½⟨XᵢXⱼ + XⱼXᵢ⟩` of a zero-mean operator,
/// quadratures ordered `(Q₁, P₁[, Q₂, P₂])`.
fn covariance_entries(rho: &FockOp) -> Result<Vec<Vec<f64>>> {
    let modes = rho.modes();
    let powers_for = |terms: &[(usize, usize, usize)]| {
        // (mode, creation power, annihilation power)
        let mut p = vec![(0, 0); modes];
        for &(mode, j, k) in terms {
            p[mode].0 += j;
            p[mode].1 += k;
        }
        p
    };
    let quads = quadratures(modes);
    for q in &quads {
        let a = expect_normal(rho, &powers_for(&[(q.mode, 0, 1)]))?;
        let ad = expect_normal(rho, &powers_for(&[(q.mode, 1, 0)]))?;
        let mean = q.c * a + q.c.conj() * ad;
        if mean.norm() > MEAN_TOL {
            return Err(Error::UnsupportedState(format!(
                "nonzero first moment {:.3e} on mode {}",
                mean.norm(),
                q.mode + 1
            )));
        }
    }
    let mut cov = vec![vec![0.0; quads.len()]; quads.len()];
    for (i, qi) in quads.iter().enumerate() {
        for (j, qj) in quads.iter().enumerate().skip(i) {
            let (mu, nu) = (qi.mode, qj.mode);
            let aa = expect_normal(rho, &powers_for(&[(mu, 0, 1), (nu, 0, 1)]))?;
            let ada_nu_mu = expect_normal(rho, &powers_for(&[(nu, 1, 0), (mu, 0, 1)]))?;
            let ada_mu_nu = expect_normal(rho, &powers_for(&[(mu, 1, 0), (nu, 0, 1)]))?;
            let adad = expect_normal(rho, &powers_for(&[(mu, 1, 0), (nu, 1, 0)]))?;
            let delta = if mu == nu { rho.trace() } else { ZERO };
            let xx = qi.c * qj.c * aa
                + qi.c * qj.c.conj() * (ada_nu_mu + delta)
                + qi.c.conj() * qj.c * ada_mu_nu
                + qi.c.conj() * qj.c.conj() * adad;
            cov[i][j] = xx.re;
            cov[j][i] = xx.re;
        }
    }
    Ok(cov)
}

/// Two-mode covariance matrix in the `(Q₁, P₁, Q₂, P₂)` ordering.
pub fn covariance_fock(rho: &FockOp) -> Result<Matrix4<f64>> {
    rho.require_modes(2, "two-mode covariance")?;
    let c = covariance_entries(rho)?;
    Ok(Matrix4::from_fn(|i, j| c[i][j]))
}

/// Single-mode covariance matrix in the `(Q, P)` ordering.
pub fn covariance_fock_single(rho: &FockOp) -> Result<Matrix2<f64>> {
    rho.require_modes(1, "single-mode covariance")?;
    let c = covariance_entries(rho)?;
    Ok(Matrix2::from_fn(|i, j| c[i][j]))
}
