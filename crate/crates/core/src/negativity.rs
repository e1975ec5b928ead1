// SPDX-License-Identifier: Apache-2.0

//! Analytic logarithmic negativity of a decohered two-mode squeezed vacuum.
//!
//! The evolved state is written in normally ordered form
//! `ρ = 4Ω₀ :exp{2Ω₁a†a + 2Ω₂b†b + 2Ω₃(ab + a†b†)}:`; the trace norm of its
//! partial transpose is `4Ω₀/Δ` with `Δ = det(I − √M)`.

use serde::{Deserialize, Serialize};

use crate::fock::ChannelParams;
use crate::phase_space::{lambda_params, lambda_params_from_transfer, ModeTransfer, WignerParams};
use crate::{Error, Result};

/// Tolerance below which `wu − v²` and the Λ± radicands are treated as zero.
pub const RADICAND_TOL: f64 = 1e-12;

/// Trace-norm ratios within this distance above 1 count as separable.
pub const SEPARABLE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaParams {
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

/// Entries of `M = [[w, v], [v, u]]` plus `√det M`.
///
/// `√det M` is carried separately: `wu − v²` cancels catastrophically when
/// the smaller eigenvalue of `M` is tiny, while [`m_params`] obtains it as
/// `|det(I + 2Ω)|` from the factorization `M = (I + 2Ω)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MParams {
    pub w: f64,
    pub u: f64,
    pub v: f64,
    pub sqrt_det: f64,
}

impl MParams {
    /// Validates `wu − v² ≥ −1e−12` and derives `√det M` from the entries.
    pub fn new(w: f64, u: f64, v: f64) -> Result<Self> {
        let det = w * u - v * v;
        let sqrt_det = clamped_sqrt(det, "det M")?;
        Ok(MParams { w, u, v, sqrt_det })
    }

    pub fn det(&self) -> f64 {
        self.sqrt_det * self.sqrt_det
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    /// Logarithmic negativity in bits, clamped at zero.
    pub e_n: f64,
    /// Unclamped `log₂(4Ω₀/Δ)`.
    pub log_ratio: f64,
    pub trace_norm: f64,
    pub delta: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub entangled: bool,
    pub omega: OmegaParams,
    pub m: MParams,
    pub r: f64,
    /// `None` when the state was specified by per-mode transfers.
    pub channel: Option<ChannelParams>,
}

pub fn omega_from_lambda(p: &WignerParams) -> Result<OmegaParams> {
    p.validate()?;
    let (l1, l2, l12) = (p.lambda1, p.lambda2, p.lambda12);
    let den = (l2 + 1.0) * (l1 + 1.0) - l12 * l12;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::NumericalInconsistency(format!("Ω denominator {den} is not positive")));
    }
    let omega = OmegaParams {
        omega0: 1.0 / (p.gamma * den),
        omega1: (l12 * l12 - l1 - l1 * l2) / den,
        omega2: (l12 * l12 - l2 - l1 * l2) / den,
        omega3: l12 / den,
    };
    if !(omega.omega0 > 0.0) {
        return Err(Error::NumericalInconsistency(format!("Ω₀ = {} is not positive", omega.omega0)));
    }
    Ok(omega)
}

pub fn m_params(omega: &OmegaParams) -> Result<MParams> {
    let (o1, o2, o3) = (omega.omega1, omega.omega2, omega.omega3);
    let (b1, b2, b3) = (1.0 + 2.0 * o1, 1.0 + 2.0 * o2, 2.0 * o3);
    let m = MParams {
        w: b1 * b1 + b3 * b3,
        u: b2 * b2 + b3 * b3,
        v: 4.0 * o3 * (1.0 + o1 + o2),
        sqrt_det: (b1 * b2 - b3 * b3).abs(),
    };
    let direct = m.w * m.u - m.v * m.v;
    if direct < -RADICAND_TOL {
        return Err(Error::InvariantViolation(format!("det M = wu − v² = {direct} < 0")));
    }
    Ok(m)
}

fn clamped_sqrt(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_TOL {
        return Err(Error::InvariantViolation(format!("{what} radicand {x} is negative")));
    }
    Ok(x.max(0.0).sqrt())
}

/// `(Λ₊, Λ₋, Δ)`: the eigenvalues of `√M` and
/// `Δ = 1 + √(wu − v²) − Λ₊ − Λ₋ = (1 − Λ₊)(1 − Λ₋)`.
///
/// `Λ₋` is taken as `√det M / Λ₊`; the difference form
/// `(w + u − √(4v² + (w − u)²))/2` cancels catastrophically once `Λ₋ ≪ Λ₊`.
pub fn lambdas_delta(m: &MParams) -> Result<(f64, f64, f64)> {
    let disc = (4.0 * m.v * m.v + (m.w - m.u).powi(2)).sqrt();
    let plus = clamped_sqrt((m.w + m.u + disc) / 2.0, "Λ₊")?;
    if !(m.sqrt_det >= 0.0) {
        return Err(Error::InvariantViolation(format!("√det M = {} is not a non-negative number", m.sqrt_det)));
    }
    let minus = if plus > 0.0 { (m.sqrt_det / plus).min(plus) } else { 0.0 };
    Ok((plus, minus, (1.0 - plus) * (1.0 - minus)))
}

fn report(r: f64, channel: Option<ChannelParams>, p: &WignerParams) -> Result<NegativityReport> {
    let omega = omega_from_lambda(p)?;
    let m = m_params(&omega)?;
    let (lambda_plus, lambda_minus, delta) = lambdas_delta(&m)?;
    if !(delta > 0.0) {
        return Err(Error::NumericalInconsistency(format!("Δ = {delta} is not positive")));
    }
    let trace_norm = 4.0 * omega.omega0 / delta;
    let log_ratio = trace_norm.log2();
    let entangled = trace_norm > 1.0 + SEPARABLE_BAND;
    Ok(NegativityReport {
        e_n: if entangled { log_ratio } else { 0.0 },
        log_ratio,
        trace_norm,
        delta,
        lambda_plus,
        lambda_minus,
        entangled,
        omega,
        m,
        r,
        channel,
    })
}

pub fn en_analytic(r: f64, ch: &ChannelParams) -> Result<NegativityReport> {
    let p = lambda_params(r, ch)?;
    report(r, Some(*ch), &p)
}

/// Same pipeline with each mode's channel given by its decay and added noise.
pub fn en_from_transfer(r: f64, first: ModeTransfer, second: ModeTransfer) -> Result<NegativityReport> {
    let p = lambda_params_from_transfer(r, first, second)?;
    report(r, None, &p)
}

fn check_loss_inputs(r: f64, transmissivity: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r must be finite and non-negative, got {r}")));
    }
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(Error::invalid(format!("transmissivity must lie in [0, 1], got {transmissivity}")));
    }
    Ok(())
}

/// Equal pure loss on both modes: `log₂[1/(1 − T(1 − e^{−2r}))]`.
pub fn en_photon_loss(r: f64, transmissivity: f64) -> Result<f64> {
    check_loss_inputs(r, transmissivity)?;
    let value = -(-transmissivity * -(-2.0 * r).exp_m1()).ln_1p() / std::f64::consts::LN_2;
    Ok(value.max(0.0))
}

/// Pure loss on the first mode only.
pub fn en_single_side_loss(r: f64, transmissivity: f64) -> Result<NegativityReport> {
    check_loss_inputs(r, transmissivity)?;
    let t = transmissivity;
    let loss = 1.0 - t;
    let th = r.tanh();
    let th2 = th * th;
    // wu − v² = T² tanh⁴r
    let m = MParams {
        w: t * th2,
        u: (loss * loss * th2 + t) * th2,
        v: t.sqrt() * loss * th2 * th,
        sqrt_det: t * th2,
    };
    let p = lambda_params_from_transfer(r, ModeTransfer::pure_loss(t), ModeTransfer::IDENTITY)?;
    let omega = omega_from_lambda(&p)?;
    let (lambda_plus, lambda_minus, delta) = lambdas_delta(&m)?;
    let trace_norm = 4.0 * omega.omega0 / delta;
    let log_ratio = trace_norm.log2();
    let entangled = trace_norm > 1.0 + SEPARABLE_BAND;
    Ok(NegativityReport {
        e_n: if entangled { log_ratio } else { 0.0 },
        log_ratio,
        trace_norm,
        delta,
        lambda_plus,
        lambda_minus,
        entangled,
        omega,
        m,
        r,
        channel: None,
    })
}

/// Disentanglement time of bi-symmetric gain + loss:
/// `t_c = ln[(g + κ tanh r)/(g(1 + tanh r))] / (2(κ − g))`.
pub fn threshold_time(r: f64, kappa: f64, g: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must be finite and non-negative, got {kappa}")));
    }
    if !g.is_finite() || g < 0.0 {
        return Err(Error::invalid(format!("g must be finite and non-negative, got {g}")));
    }
    if g == 0.0 {
        return Err(Error::NoThreshold(format!(
            "without gain (g = 0, kappa = {kappa}) the state stays entangled for all finite t"
        )));
    }
    let th = r.tanh();
    let diff = kappa - g;
    if diff == 0.0 {
        return Ok(th / (2.0 * g * (1.0 + th)));
    }
    Ok((diff * th / (g * (1.0 + th))).ln_1p() / (2.0 * diff))
}

/// Disentanglement time by bisection on the `entangled` flag, for the same
/// channel as [`threshold_time`]. Past the threshold `4Ω₀/Δ` equals 1 up to
/// rounding, so the sign of `log₂(4Ω₀/Δ)` is not a usable predicate.
pub fn threshold_time_bisect(r: f64, kappa: f64, g: f64, tol: f64) -> Result<f64> {
    let entangled = |t: f64| -> Result<bool> { Ok(en_analytic(r, &ChannelParams::symmetric(kappa, g, t)?)?.entangled) };
    if !entangled(0.0)? {
        return Err(Error::invalid("state is not entangled at t = 0"));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while entangled(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoThreshold(format!("no sign change of E_N up to t = {hi}")));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if entangled(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
