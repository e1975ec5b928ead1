// SPDX-License-Identifier: Apache-2.0

//! Closed-form Gaussian layer: Wigner and characteristic functions, the
//! covariance sign flips induced by (partial) transposition, and the Wigner
//! parameters of a two-mode squeezed vacuum after independent laser channels.
//!
//! Conventions match [`crate::fock`]: `Q = a + a†`, `P = (a − a†)/i`, so the
//! vacuum covariance is the identity. A phase-space amplitude `α` corresponds
//! to quadrature coordinates `(q, p) = (2 Re α, 2 Im α)` for Wigner
//! functions, and the characteristic function at `(q, p)` is `tr[ρ D(q + ip)]`.
//! Wigner values are normalized so that the vacuum gives `(1/π) e^{−2|α|²}`.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::fock::{ChannelParams, Mode};
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Mean vector and covariance matrix of a one- or two-mode Gaussian state,
/// ordered `(Q₁, P₁[, Q₂, P₂])`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n != 2 && n != 4 {
            return Err(Error::invalid(format!("covariance must be 2x2 or 4x4, got {n}x{}", cov.ncols())));
        }
        if cov.ncols() != n || mean.len() != n {
            return Err(Error::invalid("mean and covariance dimensions disagree"));
        }
        check_symmetric(&cov)?;
        if (0..n).any(|i| !(cov[(i, i)] > 0.0)) {
            return Err(Error::invalid("covariance diagonal must be positive"));
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn zero_mean(cov: DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        Self::new(DVector::zeros(n), cov)
    }

    pub fn modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn cov4(&self) -> Result<Matrix4<f64>> {
        if self.modes() != 2 {
            return Err(Error::invalid("state is not two-mode"));
        }
        Ok(Matrix4::from_fn(|i, j| self.cov[(i, j)]))
    }

    /// Conjugates mean and covariance by `diag(signs)`.
    fn reflect(&self, signs: &[f64]) -> GaussianState {
        let n = signs.len();
        GaussianState {
            mean: DVector::from_fn(n, |i, _| signs[i] * self.mean[i]),
            cov: DMatrix::from_fn(n, n, |i, j| signs[i] * signs[j] * self.cov[(i, j)]),
        }
    }

    /// State of `ρ^T` (single mode) or `ρ^{T₂}` (two modes).
    pub fn transposed(&self) -> GaussianState {
        match self.modes() {
            1 => self.reflect(&[1.0, -1.0]),
            _ => self.reflect(&[1.0, 1.0, 1.0, -1.0]),
        }
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL {
                return Err(Error::invalid(format!(
                    "matrix is not symmetric: entry ({i},{j}) = {} vs {}",
                    m[(i, j)],
                    m[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

/// Coefficients of the evolved two-mode Wigner function
/// `W = (π²Γ)⁻¹ exp{−2λ₁|α₁|² − 2λ₂|α₂|² + 2λ₁₂(α₁α₂ + α₁*α₂*)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda12: f64,
    pub gamma: f64,
}

impl WignerParams {
    pub fn validate(&self) -> Result<()> {
        let det = self.lambda1 * self.lambda2 - self.lambda12 * self.lambda12;
        if !(self.gamma > 0.0 && self.lambda1 > 0.0 && self.lambda2 > 0.0 && det > 0.0) {
            return Err(Error::invalid(format!("Wigner exponent is not integrable: {self:?}")));
        }
        Ok(())
    }
}

/// Effect of one laser channel on its mode: quadratures shrink by
/// `√decay = e^{−(κ−g)t}` and pick up added noise `noise = A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeTransfer {
    pub decay: f64,
    pub noise: f64,
}

impl ModeTransfer {
    pub const IDENTITY: ModeTransfer = ModeTransfer { decay: 1.0, noise: 0.0 };

    pub fn from_rates(kappa: f64, g: f64, t: f64) -> ModeTransfer {
        ModeTransfer { decay: (-2.0 * (kappa - g) * t).exp(), noise: channel_a(kappa, g, t) }
    }

    /// Pure loss with intensity transmissivity `T`.
    pub fn pure_loss(transmissivity: f64) -> ModeTransfer {
        ModeTransfer { decay: transmissivity, noise: 1.0 - transmissivity }
    }
}

/// Added noise `A = (κ+g)/(κ−g) · (1 − e^{−2(κ−g)t})`, with the `κ = g`
/// limit `2(κ+g)t` taken when `|κ−g|t < 1e−8`.
pub fn channel_a(kappa: f64, g: f64, t: f64) -> f64 {
    let x = (kappa - g) * t;
    if x.abs() < 1e-8 {
        return 2.0 * (kappa + g) * t * (1.0 - x);
    }
    (kappa + g) / (kappa - g) * -(-2.0 * x).exp_m1()
}

/// Wigner function of the two-mode squeezed vacuum `S(r)|00⟩`.
pub fn tmsv_wigner_point(r: f64, alpha1: Complex64, alpha2: Complex64) -> f64 {
    let exponent = -2.0 * (alpha1.norm_sqr() + alpha2.norm_sqr()) * (2.0 * r).cosh()
        + 4.0 * (alpha1 * alpha2).re * (2.0 * r).sinh();
    exponent.exp() / (PI * PI)
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r must be finite and non-negative, got {r}")));
    }
    Ok(())
}

/// λ₁, λ₂, λ₁₂ and Γ after independent channels on both modes.
pub fn lambda_params(r: f64, ch: &ChannelParams) -> Result<WignerParams> {
    ch.validate()?;
    let (k1, g1) = ch.rates(Mode::First);
    let (k2, g2) = ch.rates(Mode::Second);
    lambda_params_from_transfer(
        r,
        ModeTransfer::from_rates(k1, g1, ch.t),
        ModeTransfer::from_rates(k2, g2, ch.t),
    )
}

pub fn lambda_params_from_transfer(r: f64, first: ModeTransfer, second: ModeTransfer) -> Result<WignerParams> {
    check_r(r)?;
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let (a1, e1) = (first.noise, first.decay);
    let (a2, e2) = (second.noise, second.decay);
    let gamma = (a1 * e2 + a2 * e1) * c + a1 * a2 + e1 * e2;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::NumericalInconsistency(format!("Γ = {gamma} is not positive")));
    }
    Ok(WignerParams {
        lambda1: (a2 + e2 * c) / gamma,
        lambda2: (a1 + e1 * c) / gamma,
        lambda12: (e1 * e2).sqrt() * s / gamma,
        gamma,
    })
}

pub fn evolved_wigner_point(p: &WignerParams, alpha1: Complex64, alpha2: Complex64) -> f64 {
    let exponent = -2.0 * p.lambda1 * alpha1.norm_sqr() - 2.0 * p.lambda2 * alpha2.norm_sqr()
        + 4.0 * p.lambda12 * (alpha1 * alpha2).re;
    exponent.exp() / (PI * PI * p.gamma)
}

/// Gauss–Hermite nodes and weights for `∫ e^{−x²} f(x) dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 3e-14 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const QUADRATURE_ORDERS: [usize; 9] = [8, 12, 16, 24, 32, 40, 48, 64, 80];
const QUADRATURE_TOL: f64 = 1e-10;

/// Evolved TMSV Wigner function by direct quadrature of the per-mode
/// Gaussian channel kernel against the initial Wigner function.
pub fn convolve_wigner(r: f64, ch: &ChannelParams, alpha1: Complex64, alpha2: Complex64) -> Result<f64> {
    check_r(r)?;
    ch.validate()?;
    let (k1, g1) = ch.rates(Mode::First);
    let (k2, g2) = ch.rates(Mode::Second);
    let modes = [(k1 - g1, channel_a(k1, g1, ch.t)), (k2 - g2, channel_a(k2, g2, ch.t))];
    if ch.t == 0.0 || modes.iter().all(|&(_, a)| a == 0.0) {
        return Ok(tmsv_wigner_point(r, alpha1, alpha2));
    }

    // β_j = e^{γ_j t} (α_j + √(A_j/2) z_j), prefactor Π_j e^{2γ_j t}/π
    let grow = [(modes[0].0 * ch.t).exp(), (modes[1].0 * ch.t).exp()];
    let width = [(modes[0].1 / 2.0).sqrt(), (modes[1].1 / 2.0).sqrt()];
    let pre = (grow[0] * grow[1]).powi(2) / (PI * PI);
    let evaluate = |order: usize| -> f64 {
        let (nodes, weights) = gauss_hermite(order);
        let mut total = 0.0;
        for (x1, w1) in nodes.iter().zip(&weights) {
            for (y1, v1) in nodes.iter().zip(&weights) {
                let b1 = (alpha1 + Complex64::new(*x1, *y1) * width[0]) * grow[0];
                let mut inner = 0.0;
                for (x2, w2) in nodes.iter().zip(&weights) {
                    for (y2, v2) in nodes.iter().zip(&weights) {
                        let b2 = (alpha2 + Complex64::new(*x2, *y2) * width[1]) * grow[1];
                        inner += w2 * v2 * tmsv_wigner_point(r, b1, b2);
                    }
                }
                total += w1 * v1 * inner;
            }
        }
        total * pre
    };
    let mut previous = evaluate(QUADRATURE_ORDERS[0]);
    for &order in &QUADRATURE_ORDERS[1..] {
        let current = evaluate(order);
        if (current - previous).abs() < QUADRATURE_TOL {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NumericalInconsistency(format!(
        "Gauss-Hermite quadrature did not converge by order {}",
        QUADRATURE_ORDERS[QUADRATURE_ORDERS.len() - 1]
    )))
}

/// Covariance of `ρ^{T₂}`: conjugation by `diag(1, 1, 1, −1)`.
pub fn covariance_pt(v: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    check_symmetric(&DMatrix::from_fn(4, 4, |i, j| v[(i, j)]))?;
    let s = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    Ok(s * v * s)
}

/// Covariance of a transposed single-mode state: conjugation by `diag(1, −1)`.
pub fn covariance_transpose_single(v: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    check_symmetric(&DMatrix::from_fn(2, 2, |i, j| v[(i, j)]))?;
    let s = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    Ok(s * v * s)
}

/// Symplectic form `⊕ [[0, 1], [−1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

/// `χ(ξ) = exp[−½ ξΩVΩᵀξᵀ + i X̄ ξᵀ]` for `ξ = (q₁, p₁[, q₂, p₂])`.
pub fn gaussian_char_fn(state: &GaussianState, xi: &[f64]) -> Result<Complex64> {
    let n = state.cov.nrows();
    if xi.len() != n {
        return Err(Error::invalid(format!("ξ has length {}, expected {n}", xi.len())));
    }
    let xi = DVector::from_column_slice(xi);
    let omega = symplectic_form(n / 2);
    let rotated = omega.transpose() * &xi;
    let quad = (rotated.transpose() * &state.cov * &rotated)[(0, 0)];
    let linear = state.mean.dot(&xi);
    Ok(Complex64::new(-0.5 * quad, linear).exp())
}

/// Wigner value of a Gaussian state at phase-space amplitudes `α`.
pub fn gaussian_wigner_point(state: &GaussianState, alphas: &[Complex64]) -> Result<f64> {
    let modes = state.modes();
    if alphas.len() != modes {
        return Err(Error::invalid(format!("{} amplitude(s) given for a {modes}-mode state", alphas.len())));
    }
    let x = DVector::from_iterator(
        2 * modes,
        alphas.iter().flat_map(|a| [2.0 * a.re, 2.0 * a.im]),
    ) - &state.mean;
    let inv = state
        .cov
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::invalid("covariance is singular"))?;
    let quad = (x.transpose() * inv * &x)[(0, 0)];
    Ok((-0.5 * quad).exp() / (PI.powi(modes as i32) * state.cov.determinant().sqrt()))
}

pub fn tmsv_covariance(r: f64) -> Result<GaussianState> {
    check_r(r)?;
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let cov = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    ]);
    GaussianState::zero_mean(cov)
}

/// Inverts the Wigner exponent: in `(q₁, p₁, q₂, p₂)` coordinates it reads
/// `−½ xᵀKx` with `K` built from λ₁, λ₂, ±λ₁₂, and `V = K⁻¹`.
pub fn covariance_from_lambda(p: &WignerParams) -> Result<GaussianState> {
    p.validate()?;
    let (l1, l2, l12) = (p.lambda1, p.lambda2, p.lambda12);
    let k = DMatrix::from_row_slice(4, 4, &[
        l1, 0.0, -l12, 0.0, //
        0.0, l1, 0.0, l12, //
        -l12, 0.0, l2, 0.0, //
        0.0, l12, 0.0, l2,
    ]);
    let mut cov = k.try_inverse().ok_or_else(|| Error::invalid("Wigner exponent is singular"))?;
    // symmetrize away rounding from the inverse
    cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::zero_mean(cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn channel_a_limits() {
        assert_eq!(channel_a(0.3, 0.1, 0.0), 0.0);
        assert_abs_diff_eq!(channel_a(0.2, 0.0, 1.5), 1.0 - (-0.6f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(channel_a(0.3, 0.3, 1.0), 1.2, epsilon = 1e-15);
        // continuity across the degenerate branch
        let near = channel_a(0.3 + 2e-8, 0.3, 1.0);
        assert_abs_diff_eq!(near, 1.2, epsilon = 1e-7);
        // gain-dominated channels still add positive noise
        assert!(channel_a(0.1, 0.3, 1.0) > 0.0);
    }

    #[test]
    fn tmsv_wigner_values() {
        assert_abs_diff_eq!(tmsv_wigner_point(0.7, c(0.0, 0.0), c(0.0, 0.0)), 1.0 / (PI * PI), epsilon = 1e-16);
        let (a1, a2) = (c(0.3, -0.2), c(0.1, 0.5));
        let vac = (-2.0 * (a1.norm_sqr() + a2.norm_sqr())).exp() / (PI * PI);
        assert_abs_diff_eq!(tmsv_wigner_point(0.0, a1, a2), vac, epsilon = 1e-16);
    }

    #[test]
    fn tmsv_wigner_normalized_in_quadrature_coordinates() {
        // ∫ W d²α₁ d²α₂ = 1/4; with canonical quadratures α = (x + ip)/√2,
        // d²α = dx dp / 2 per mode, so ∫ W dx₁dp₁dx₂dp₂ = 1.
        // Sum/difference coordinates decouple the exponent; Gauss-Hermite
        // nodes are scaled to each axis' width.
        let (nodes, weights) = gauss_hermite(24);
        for r in [0.0f64, 0.4, 0.8] {
            let e = (2.0 * r).exp();
            // widths of the real-sum, real-difference, imaginary-sum, imaginary-difference axes
            let scale = [1.0 / (2.0 / e).sqrt(), 1.0 / (2.0 * e).sqrt(), 1.0 / (2.0 * e).sqrt(), 1.0 / (2.0 / e).sqrt()];
            let mut total = 0.0;
            for (z0, w0) in nodes.iter().zip(&weights) {
                for (z1, w1) in nodes.iter().zip(&weights) {
                    for (z2, w2) in nodes.iter().zip(&weights) {
                        for (z3, w3) in nodes.iter().zip(&weights) {
                            let (xs, xd, ys, yd) = (z0 * scale[0], z1 * scale[1], z2 * scale[2], z3 * scale[3]);
                            let a1 = c((xs + xd) / 2f64.sqrt(), (ys + yd) / 2f64.sqrt());
                            let a2 = c((xs - xd) / 2f64.sqrt(), (ys - yd) / 2f64.sqrt());
                            let weight = (z0 * z0 + z1 * z1 + z2 * z2 + z3 * z3).exp();
                            total += w0 * w1 * w2 * w3 * weight * tmsv_wigner_point(r, a1, a2);
                        }
                    }
                }
            }
            let integral_alpha = total * scale.iter().product::<f64>();
            assert_abs_diff_eq!(integral_alpha * 4.0, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn lambda_params_at_time_zero() {
        let r = 0.6f64;
        let p = lambda_params(r, &ChannelParams::new(0.3, 0.1, 0.2, 0.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(p.gamma, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.lambda1, (2.0 * r).cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.lambda2, (2.0 * r).cosh(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.lambda12, (2.0 * r).sinh(), epsilon = 1e-14);
        let (a1, a2) = (c(0.2, 0.1), c(-0.3, 0.25));
        assert_abs_diff_eq!(evolved_wigner_point(&p, a1, a2), tmsv_wigner_point(r, a1, a2), epsilon = 1e-14);
    }

    #[test]
    fn lambda_params_symmetry_and_decay() {
        let sym = lambda_params(0.5, &ChannelParams::symmetric(0.2, 0.05, 1.3).unwrap()).unwrap();
        assert_abs_diff_eq!(sym.lambda1, sym.lambda2, epsilon = 1e-15);
        let mut previous = f64::INFINITY;
        for t in [1.0, 5.0, 20.0, 60.0] {
            let p = lambda_params(0.5, &ChannelParams::symmetric(0.3, 0.0, t).unwrap()).unwrap();
            assert!(p.lambda12 < previous);
            previous = p.lambda12;
        }
        assert!(previous < 1e-15);
    }

    #[test]
    fn normalization_matches_exponent_determinant() {
        // a Gaussian Wigner function of a state has Γ(λ₁λ₂ − λ₁₂²) = 1
        for ch in [
            ChannelParams::new(0.1, 0.0, 0.1, 0.0, 1.0).unwrap(),
            ChannelParams::new(0.3, 0.05, 0.1, 0.02, 0.7).unwrap(),
            ChannelParams::new(0.2, 0.2, 0.0, 0.1, 2.0).unwrap(),
        ] {
            let p = lambda_params(0.45, &ch).unwrap();
            assert_abs_diff_eq!(p.gamma * (p.lambda1 * p.lambda2 - p.lambda12 * p.lambda12), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauss_hermite_moments() {
        for n in [5, 20, 80] {
            let (x, w) = gauss_hermite(n);
            let m0: f64 = w.iter().sum();
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            assert_abs_diff_eq!(m0, PI.sqrt(), epsilon = 1e-12);
            assert_abs_diff_eq!(m2, PI.sqrt() / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m4, 3.0 * PI.sqrt() / 4.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn convolution_of_vacuum_stays_gaussian() {
        // product vacuum through independent channels: per mode
        // W = exp(−2|α|²/(A + e^{−2γt})) / (π(A + e^{−2γt}))
        let ch = ChannelParams::new(0.3, 0.0, 0.1, 0.2, 0.8).unwrap();
        let widths: Vec<f64> = [(0.3, 0.0), (0.1, 0.2)]
            .iter()
            .map(|&(k, g)| channel_a(k, g, 0.8) + (-2.0 * (k - g) * 0.8f64).exp())
            .collect();
        for (a1, a2) in [(c(0.0, 0.0), c(0.0, 0.0)), (c(0.4, -0.1), c(0.2, 0.3))] {
            let expected = (-2.0 * a1.norm_sqr() / widths[0]).exp() / (PI * widths[0])
                * (-2.0 * a2.norm_sqr() / widths[1]).exp()
                / (PI * widths[1]);
            let got = convolve_wigner(0.0, &ch, a1, a2).unwrap();
            assert_abs_diff_eq!(got, expected, epsilon = 1e-9);
        }
        // pure loss keeps the vacuum
        let loss = ChannelParams::new(0.4, 0.0, 0.4, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            convolve_wigner(0.0, &loss, c(0.0, 0.0), c(0.0, 0.0)).unwrap(),
            1.0 / (PI * PI),
            epsilon = 1e-10
        );
    }

    #[test]
    fn convolution_matches_closed_form() {
        let r = 0.5;
        let ch = ChannelParams::new(0.25, 0.05, 0.1, 0.0, 0.9).unwrap();
        let p = lambda_params(r, &ch).unwrap();
        for (a1, a2) in [(c(0.1, 0.2), c(-0.3, 0.1)), (c(0.5, 0.0), c(0.4, 0.0)), (c(-0.2, 0.6), c(0.1, -0.5))] {
            let quad = convolve_wigner(r, &ch, a1, a2).unwrap();
            assert_abs_diff_eq!(quad, evolved_wigner_point(&p, a1, a2), epsilon = 1e-8);
        }
        let t0 = ChannelParams::new(0.25, 0.05, 0.1, 0.0, 0.0).unwrap();
        assert_eq!(convolve_wigner(r, &t0, c(0.1, 0.1), c(0.0, 0.2)).unwrap(), tmsv_wigner_point(r, c(0.1, 0.1), c(0.0, 0.2)));
    }

    #[test]
    fn covariance_sign_flips() {
        let v = Matrix4::from_fn(|i, j| (1 + i.min(j) * 4 + i.max(j)) as f64);
        let pt = covariance_pt(&v).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let flipped = (i == 3) != (j == 3);
                assert_eq!(pt[(i, j)], if flipped { -v[(i, j)] } else { v[(i, j)] });
            }
        }
        assert_eq!(covariance_pt(&pt).unwrap(), v);
        let mut asym = v;
        asym[(0, 1)] += 1.0;
        assert!(matches!(covariance_pt(&asym), Err(Error::InvalidArgument(_))));

        let v2 = Matrix2::new(1.3, 0.4, 0.4, 0.9);
        assert_eq!(covariance_transpose_single(&v2).unwrap(), Matrix2::new(1.3, -0.4, -0.4, 0.9));
        let diag = Matrix2::new(2.0, 0.0, 0.0, 0.5);
        assert_eq!(covariance_transpose_single(&diag).unwrap(), diag);
    }

    #[test]
    fn char_fn_basics() {
        let vac = GaussianState::zero_mean(DMatrix::identity(2, 2)).unwrap();
        assert_eq!(gaussian_char_fn(&vac, &[0.0, 0.0]).unwrap(), c(1.0, 0.0));
        let (q, p) = (0.7, -0.4);
        assert_abs_diff_eq!(gaussian_char_fn(&vac, &[q, p]).unwrap().re, (-0.5 * (q * q + p * p)).exp(), epsilon = 1e-15);
        assert!(matches!(gaussian_char_fn(&vac, &[0.0; 4]), Err(Error::InvalidArgument(_))));

        let state = covariance_from_lambda(&lambda_params(0.4, &ChannelParams::new(0.2, 0.0, 0.05, 0.1, 1.0).unwrap()).unwrap()).unwrap();
        let pt = state.transposed();
        for xi in [[0.3, -0.2, 0.5, 0.1], [-0.4, 0.6, 0.2, -0.7]] {
            let reflected = [xi[0], xi[1], -xi[2], xi[3]];
            let lhs = gaussian_char_fn(&pt, &xi).unwrap();
            let rhs = gaussian_char_fn(&state, &reflected).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn covariance_from_lambda_cases() {
        let r = 0.35;
        let p0 = lambda_params(r, &ChannelParams::identity()).unwrap();
        let v0 = covariance_from_lambda(&p0).unwrap();
        assert!((v0.cov() - tmsv_covariance(r).unwrap().cov()).abs().max() < 1e-12);

        let late = lambda_params(r, &ChannelParams::symmetric(0.5, 0.1, 80.0).unwrap()).unwrap();
        let v = covariance_from_lambda(&late).unwrap();
        // thermal product: A_∞ = (κ+g)/(κ−g) = 1.5
        for (i, j) in [(0, 2), (1, 3), (0, 3), (1, 2)] {
            assert!(v.cov()[(i, j)].abs() < 1e-12);
        }
        assert_abs_diff_eq!(v.cov()[(0, 0)], 1.5, epsilon = 1e-12);

        let bad = WignerParams { lambda1: 1.0, lambda2: 1.0, lambda12: 1.5, gamma: 1.0 };
        assert!(matches!(covariance_from_lambda(&bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gaussian_wigner_matches_lambda_form() {
        let r = 0.5;
        let ch = ChannelParams::new(0.15, 0.02, 0.3, 0.0, 1.1).unwrap();
        let p = lambda_params(r, &ch).unwrap();
        let state = covariance_from_lambda(&p).unwrap();
        for (a1, a2) in [(c(0.0, 0.0), c(0.0, 0.0)), (c(0.3, -0.1), c(0.2, 0.4))] {
            assert_abs_diff_eq!(
                gaussian_wigner_point(&state, &[a1, a2]).unwrap(),
                evolved_wigner_point(&p, a1, a2),
                epsilon = 1e-13
            );
            // transposition of mode 2 reflects p₂
            assert_abs_diff_eq!(
                gaussian_wigner_point(&state.transposed(), &[a1, a2]).unwrap(),
                gaussian_wigner_point(&state, &[a1, a2.conj()]).unwrap(),
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(state.transposed().cov().determinant(), state.cov().determinant(), epsilon = 1e-12);
    }

    #[test]
    fn state_validation() {
        assert!(GaussianState::zero_mean(DMatrix::identity(3, 3)).is_err());
        let mut asym = DMatrix::identity(2, 2);
        asym[(0, 1)] = 0.1;
        assert!(GaussianState::zero_mean(asym).is_err());
        let mut neg = DMatrix::identity(2, 2);
        neg[(1, 1)] = -1.0;
        assert!(GaussianState::zero_mean(neg).is_err());
    }
}
