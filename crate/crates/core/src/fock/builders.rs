// SPDX-License-Identifier: Apache-2.0

//! Operator builders from normally ordered factorizations.
//!
//! Every builder evaluates a product `creation part · diagonal part ·
//! annihilation part`. Intermediate states never exceed the occupations of
//! the bra and ket, so each truncated matrix element equals the element of
//! the untruncated operator.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dd::{Dd, DdFactorials};
use super::{ln_factorials, FockOp, TAIL_TOL, ZERO};
use crate::negativity::OmegaParams;
use crate::{Error, Result};

fn check_tail(cutoff: usize, tail: f64, tol: f64) -> Result<()> {
    if !tail.is_finite() || tail > tol {
        return Err(Error::CutoffTooSmall { cutoff, tail, tol });
    }
    Ok(())
}

/// Population of `|n⟩` in the coherent state `|α⟩`.
pub fn coherent_population(alpha_abs: f64, n: usize) -> f64 {
    if alpha_abs == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let lnf = ln_factorials(n);
    (-alpha_abs * alpha_abs + 2.0 * n as f64 * alpha_abs.ln() - lnf[n]).exp()
}

/// Truncated matrix of `D(α) = e^{-|α|²/2} e^{α a†} e^{-α* a}`.
pub fn displacement_op(alpha: Complex64, cutoff: usize) -> Result<FockOp> {
    displacement_op_with(alpha, cutoff, TAIL_TOL)
}

pub fn displacement_op_with(alpha: Complex64, cutoff: usize, tail_tol: f64) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::invalid("displacement amplitude must be finite"));
    }
    check_tail(cutoff, coherent_population(alpha.norm(), cutoff), tail_tol)?;
    Ok(FockOp::from_parts(1, cutoff, displacement_matrix(alpha, cutoff)))
}

/// Displacement matrix without the tail check.
///
/// Entry `(m, n)` is `e^{−|α|²/2} e^{iθ(m−n)} Σ_k (−1)^{n−k} |α|^{m+n−2k}
/// √(m!n!) / (k!(m−k)!(n−k)!)`; the alternating sum is accumulated in
/// double-double precision.
pub(crate) fn displacement_matrix(alpha: Complex64, cutoff: usize) -> DMatrix<Complex64> {
    let dim = cutoff + 1;
    let fact = DdFactorials::new(cutoff);
    let (radius, theta) = alpha.to_polar();
    let pre = (-0.5 * alpha.norm_sqr()).exp();
    let powers = Dd::from_f64(radius).powers(2 * dim);
    DMatrix::from_fn(dim, dim, |m, n| {
        let mut acc = Dd::ZERO;
        for k in 0..=m.min(n) {
            let term = powers[m + n - 2 * k] * fact.ratio(&[m, n], &[], &[k, m - k, n - k]);
            acc = if (n - k) % 2 == 0 { acc + term } else { acc - term };
        }
        Complex64::from_polar(pre, theta * (m as f64 - n as f64)) * acc.to_f64()
    })
}

/// Population of the highest even level `≤ cutoff` in squeezed vacuum.
fn squeezed_vacuum_tail(r: f64, cutoff: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let n = cutoff - cutoff % 2;
    let lnf = ln_factorials(n);
    let half = n / 2;
    let ln_p = -r.cosh().ln() + n as f64 * r.tanh().ln() + lnf[n]
        - n as f64 * 2f64.ln()
        - 2.0 * lnf[half];
    ln_p.exp()
}

/// Single-mode squeezer `S₁(ξ) = exp[½(ξ a†² − ξ* a²)]`, `ξ = r e^{iθ}`.
pub fn squeeze1_op(xi: Complex64, cutoff: usize) -> Result<FockOp> {
    squeeze1_op_with(xi, cutoff, TAIL_TOL)
}

pub fn squeeze1_op_with(xi: Complex64, cutoff: usize, tail_tol: f64) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let r = xi.norm();
    if !r.is_finite() {
        return Err(Error::invalid("squeezing parameter must be finite"));
    }
    check_tail(cutoff, squeezed_vacuum_tail(r, cutoff), tail_tol)?;

    // entry (m, n): √sech e^{iθ(m−n)/2} Σ_k (−1)^l (tanh r / 2)^{j+l} sech^k √(m!n!)/(k! j! l!)
    // with j = (m−k)/2, l = (n−k)/2; sech is derived from tanh r so both
    // describe the same squeezing
    let dim = cutoff + 1;
    let fact = DdFactorials::new(cutoff);
    let theta = if r > 0.0 { xi.arg() } else { 0.0 };
    let th = r.tanh();
    let sech = Dd::one_minus_square(th).sqrt();
    let pre = sech.to_f64().sqrt();
    let half_th = Dd::from_f64(th) * 0.5;
    let th_pow = half_th.powers(dim + 1);
    let sech_pow = sech.powers(dim);

    let data = DMatrix::from_fn(dim, dim, |m, n| {
        if (m + n) % 2 == 1 {
            return ZERO;
        }
        let mut acc = Dd::ZERO;
        let mut k = m % 2;
        while k <= m.min(n) {
            let j = (m - k) / 2;
            let l = (n - k) / 2;
            let term = th_pow[j + l] * sech_pow[k] * fact.ratio(&[m, n], &[], &[k, j, l]);
            acc = if l % 2 == 0 { acc + term } else { acc - term };
            k += 2;
        }
        Complex64::from_polar(pre, theta * 0.5 * (m as f64 - n as f64)) * acc.to_f64()
    });
    Ok(FockOp::from_parts(1, cutoff, data))
}

/// Two-mode operator `pre · e^{τc a†b†} · x^{a†a} y^{b†b} · e^{τa ab}` for
/// real coefficients, times `e^{iφ(m₁−n₁)}` on entry `(m, n)`.
///
/// Entries are nonzero only when `m₁ − m₂ = n₁ − n₂`; each is a sum over the
/// number `l` of annihilated pairs, accumulated in double-double precision.
fn pair_gaussian(pre: Dd, tau_create: Dd, x: Dd, y: Dd, tau_annihilate: Dd, phi: f64, cutoff: usize) -> DMatrix<Complex64> {
    let levels = cutoff + 1;
    let dim = levels * levels;
    let fact = DdFactorials::new(cutoff);
    let create_pow = tau_create.powers(levels);
    let annih_pow = tau_annihilate.powers(levels);
    let x_pow = x.powers(levels);
    let y_pow = y.powers(levels);

    let mut data = DMatrix::zeros(dim, dim);
    for n1 in 0..levels {
        for n2 in 0..levels {
            let col = n1 * levels + n2;
            // rows with m₁ − m₂ = n₁ − n₂
            for m1 in n1.saturating_sub(n2)..levels {
                let m2 = m1 + n2 - n1;
                if m2 >= levels {
                    break;
                }
                let mut acc = Dd::ZERO;
                #[allow(clippy::needless_range_loop)]
                for l in 0..=n1.min(n2) {
                    let (k1, k2) = (n1 - l, n2 - l);
                    if m1 < k1 {
                        continue;
                    }
                    let j = m1 - k1;
                    let term = annih_pow[l]
                        * create_pow[j]
                        * x_pow[k1]
                        * y_pow[k2]
                        * fact.ratio(&[n1, n2], &[k1, k2], &[l])
                        * fact.ratio(&[m1, m2], &[k1, k2], &[j]);
                    acc = acc + term;
                }
                let value = (acc * pre).to_f64();
                if value != 0.0 {
                    data[(m1 * levels + m2, col)] = Complex64::from_polar(value, phi * (m1 as f64 - n1 as f64));
                }
            }
        }
    }
    data
}

/// Two-mode squeezer `S(ξ) = exp(ξ a†b† − ξ* ab)`, `ξ = r e^{iφ}`.
pub fn squeeze2_op(xi: Complex64, cutoff: usize) -> Result<FockOp> {
    squeeze2_op_with(xi, cutoff, TAIL_TOL)
}

pub fn squeeze2_op_with(xi: Complex64, cutoff: usize, tail_tol: f64) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let r = xi.norm();
    if !r.is_finite() {
        return Err(Error::invalid("squeezing parameter must be finite"));
    }
    let th = r.tanh();
    check_tail(cutoff, th.powi(2 * (cutoff as i32 + 1)), tail_tol)?;
    let phi = if r > 0.0 { xi.arg() } else { 0.0 };
    // sech from tanh r keeps the pair (tanh, sech) on the same squeezing
    let sech = Dd::one_minus_square(th).sqrt();
    let tau = Dd::from_f64(th);
    let data = pair_gaussian(sech, tau, sech, sech, -tau, phi, cutoff);
    Ok(FockOp::from_parts(2, cutoff, data))
}

/// `S(r)|0,0⟩⟨0,0|S†(r)` for real `r ≥ 0`.
pub fn tmsv_density(r: f64, cutoff: usize) -> Result<FockOp> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r must be finite and non-negative, got {r}")));
    }
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let th = r.tanh();
    check_tail(cutoff, th.powi(2 * (cutoff as i32 + 1)), TAIL_TOL)?;
    let levels = cutoff + 1;
    let mut ket = vec![ZERO; levels * levels];
    let sech = 1.0 / r.cosh();
    for n in 0..levels {
        ket[n * levels + n] = Complex64::new(sech * th.powi(n as i32), 0.0);
    }
    FockOp::projector(2, cutoff, &ket)
}

pub fn vacuum_state(modes: usize, cutoff: usize) -> Result<FockOp> {
    let mut op = FockOp::zeros(modes, cutoff)?;
    op.data[(0, 0)] = Complex64::new(1.0, 0.0);
    Ok(op)
}

/// Single-mode thermal state with mean photon number `nbar`.
pub fn thermal_state(nbar: f64, cutoff: usize) -> Result<FockOp> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::invalid(format!("nbar must be finite and non-negative, got {nbar}")));
    }
    let mut op = FockOp::zeros(1, cutoff)?;
    let ratio = nbar / (1.0 + nbar);
    check_tail(cutoff, ratio.powi(cutoff as i32) / (1.0 + nbar), TAIL_TOL)?;
    for n in 0..=cutoff {
        op.data[(n, n)] = Complex64::new(ratio.powi(n as i32) / (1.0 + nbar), 0.0);
    }
    Ok(op)
}

/// Two-mode operator `:exp{ã† (U − I) ã}:` for a 2×2 matrix `U`.
///
/// On states generated from vacuum it maps `a_j† ↦ Σ_i U[i][j] a_i†`; it is
/// block diagonal in total photon number.
pub fn linear_mode_map_op(u: [[Complex64; 2]; 2], cutoff: usize) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let levels = cutoff + 1;
    let dim = levels * levels;
    let mut data = DMatrix::zeros(dim, dim);
    let image_a = [u[0][0], u[1][0]];
    let image_b = [u[0][1], u[1][1]];
    for n1 in 0..levels {
        for n2 in 0..levels {
            // amplitudes indexed by the first-mode occupation at fixed total
            let mut amp = vec![Complex64::new(1.0, 0.0)];
            for step in 1..=n2 {
                amp = raise_combination(&amp, image_b, step);
            }
            for step in 1..=n1 {
                amp = raise_combination(&amp, image_a, step);
            }
            let total = n1 + n2;
            let col = n1 * levels + n2;
            for (k, value) in amp.iter().enumerate() {
                let rest = total - k;
                if k <= cutoff && rest <= cutoff {
                    data[(k * levels + rest, col)] = *value;
                }
            }
        }
    }
    Ok(FockOp::from_parts(2, cutoff, data))
}

/// Applies `(c₀ a† + c₁ b†)/√step` to amplitudes at fixed total photon number.
fn raise_combination(amp: &[Complex64], coeff: [Complex64; 2], step: usize) -> Vec<Complex64> {
    let total = amp.len() - 1;
    let norm = 1.0 / (step as f64).sqrt();
    let mut out = vec![ZERO; amp.len() + 1];
    for (k, &value) in amp.iter().enumerate() {
        if value == ZERO {
            continue;
        }
        out[k + 1] += coeff[0] * value * ((k + 1) as f64).sqrt() * norm;
        out[k] += coeff[1] * value * ((total - k + 1) as f64).sqrt() * norm;
    }
    out
}

/// Beam splitter `B(θ) = exp{θ(a†b e^{iφ} − ab† e^{−iφ})}`, the linear mode
/// map with `U = [[cos θ, e^{iφ} sin θ], [−e^{−iφ} sin θ, cos θ]]`.
///
/// Entry `(k, T−k; n₁, n₂)` with `T = n₁ + n₂` is
/// `e^{iφ(k−n₁)} Σ_i (−1)^{n₁−i} cos^{n₂−k+2i}θ sin^{n₁+k−2i}θ
/// √(k!(T−k)!n₁!n₂!) / (i!(n₁−i)!(k−i)!(n₂−k+i)!)`, summed in double-double.
pub fn beam_splitter_op(theta: f64, phi: f64, cutoff: usize) -> Result<FockOp> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::invalid("beam splitter angles must be finite"));
    }
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let levels = cutoff + 1;
    let dim = levels * levels;
    let (s, c) = theta.sin_cos();
    let fact = DdFactorials::new(2 * cutoff);
    let s_pow = Dd::from_f64(s).powers(2 * levels);
    let c_pow = Dd::from_f64(c).powers(2 * levels);
    let mut data = DMatrix::zeros(dim, dim);
    for n1 in 0..levels {
        for n2 in 0..levels {
            let total = n1 + n2;
            let col = n1 * levels + n2;
            for k in total.saturating_sub(cutoff)..=total.min(cutoff) {
                let rest = total - k;
                let mut acc = Dd::ZERO;
                for i in k.saturating_sub(n2)..=n1.min(k) {
                    let term = c_pow[n2 + 2 * i - k]
                        * s_pow[n1 + k - 2 * i]
                        * fact.ratio(&[k, rest, n1, n2], &[], &[i, n1 - i, k - i, n2 + i - k]);
                    acc = if (n1 - i) % 2 == 0 { acc + term } else { acc - term };
                }
                let value = acc.to_f64();
                if value != 0.0 {
                    data[(k * levels + rest, col)] = Complex64::from_polar(value, phi * (k as f64 - n1 as f64));
                }
            }
        }
    }
    Ok(FockOp::from_parts(2, cutoff, data))
}

/// `4Ω₀ :exp{2Ω₁a†a + 2Ω₂b†b + 2Ω₃(ab + a†b†)}:` built as
/// `4Ω₀ e^{2Ω₃a†b†} (1+2Ω₁)^{a†a} (1+2Ω₂)^{b†b} e^{2Ω₃ab}`.
pub fn gaussian_rho_op(omega: &OmegaParams, cutoff: usize) -> Result<FockOp> {
    gaussian_rho_op_with(omega, cutoff, TAIL_TOL)
}

pub fn gaussian_rho_op_with(omega: &OmegaParams, cutoff: usize, tail_tol: f64) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    if !(omega.omega0 > 0.0) {
        return Err(Error::invalid(format!("Ω₀ must be positive, got {}", omega.omega0)));
    }
    let tau = Dd::from_f64(2.0 * omega.omega3);
    let data = pair_gaussian(
        Dd::from_f64(4.0 * omega.omega0),
        tau,
        Dd::from_f64(2.0 * omega.omega1) + 1.0,
        Dd::from_f64(2.0 * omega.omega2) + 1.0,
        tau,
        0.0,
        cutoff,
    );
    let op = FockOp::from_parts(2, cutoff, data);
    let levels = cutoff + 1;
    let tail: f64 = (0..levels)
        .flat_map(|n1| (0..levels).map(move |n2| (n1, n2)))
        .filter(|&(n1, n2)| n1 == cutoff || n2 == cutoff)
        .map(|(n1, n2)| op.data[(n1 * levels + n2, n1 * levels + n2)].re.abs())
        .sum();
    check_tail(cutoff, tail, tail_tol)?;
    Ok(op)
}
