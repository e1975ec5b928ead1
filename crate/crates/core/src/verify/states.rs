// SPDX-License-Identifier: Apache-2.0

//! Test states for the phase-space checks, built on the truncated basis.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::fock::{
    displacement_op, lindblad_evolve, squeeze1_op, squeeze2_op, tensor, thermal_state, FockOp,
};
use crate::{ChannelParams, Error, Result};

/// A state recipe. Complex amplitudes are written `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    /// `D(α) S₁(r e^{iφ}) |0⟩`.
    DisplacedSqueezed { r: f64, phi: f64, alpha: [f64; 2] },
    /// `S₁(r e^{iφ}) ρ_th S₁(r e^{iφ})†` with mean photon number `nbar`.
    SqueezedThermal { r: f64, phi: f64, nbar: f64 },
    /// `D(α₁) ⊗ D(α₂) S₂(r e^{iφ}) |00⟩`.
    DisplacedTmsv { r: f64, phi: f64, alpha1: [f64; 2], alpha2: [f64; 2] },
    /// `S₂(r e^{iφ}) |00⟩` evolved through a laser channel.
    Decohered { r: f64, phi: f64, channel: ChannelParams, steps: usize },
}

fn amp(a: [f64; 2]) -> Complex64 {
    Complex64::new(a[0], a[1])
}

fn normalized_projector(modes: usize, cutoff: usize, ket: DVector<Complex64>) -> Result<FockOp> {
    let norm = ket.norm();
    if !(norm > 0.0) {
        return Err(Error::NumericalInconsistency("state vector vanished on the truncated basis".into()));
    }
    let ket = ket.unscale(norm);
    FockOp::projector(modes, cutoff, ket.as_slice())
}

fn vacuum_ket(dim: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[0] = Complex64::new(1.0, 0.0);
    v
}

impl StateSpec {
    pub fn modes(&self) -> usize {
        match self {
            StateSpec::DisplacedSqueezed { .. } | StateSpec::SqueezedThermal { .. } => 1,
            StateSpec::DisplacedTmsv { .. } | StateSpec::Decohered { .. } => 2,
        }
    }

    /// Whether the state has zero first moments.
    pub fn zero_mean(&self) -> bool {
        match self {
            StateSpec::DisplacedSqueezed { alpha, .. } => *alpha == [0.0; 2],
            StateSpec::DisplacedTmsv { alpha1, alpha2, .. } => *alpha1 == [0.0; 2] && *alpha2 == [0.0; 2],
            StateSpec::SqueezedThermal { .. } | StateSpec::Decohered { .. } => true,
        }
    }

    pub fn build(&self, cutoff: usize) -> Result<FockOp> {
        let levels = cutoff + 1;
        match *self {
            StateSpec::DisplacedSqueezed { r, phi, alpha } => {
                let s = squeeze1_op(Complex64::from_polar(r, phi), cutoff)?;
                let d = displacement_op(amp(alpha), cutoff)?;
                let ket = d.matrix() * (s.matrix() * vacuum_ket(levels));
                normalized_projector(1, cutoff, ket)
            }
            StateSpec::SqueezedThermal { r, phi, nbar } => {
                let s = squeeze1_op(Complex64::from_polar(r, phi), cutoff)?;
                let rho = s.mul(&thermal_state(nbar, cutoff)?)?.mul(&s.adjoint())?;
                let tr = rho.trace().re;
                Ok(rho.scale(Complex64::new(1.0 / tr, 0.0)))
            }
            StateSpec::DisplacedTmsv { r, phi, alpha1, alpha2 } => {
                let s = squeeze2_op(Complex64::from_polar(r, phi), cutoff)?;
                let d = tensor(&displacement_op(amp(alpha1), cutoff)?, &displacement_op(amp(alpha2), cutoff)?)?;
                let ket = d.matrix() * (s.matrix() * vacuum_ket(levels * levels));
                normalized_projector(2, cutoff, ket)
            }
            StateSpec::Decohered { r, phi, channel, steps } => {
                let s = squeeze2_op(Complex64::from_polar(r, phi), cutoff)?;
                let rho0 = normalized_projector(2, cutoff, s.matrix() * vacuum_ket(levels * levels))?;
                lindblad_evolve(&rho0, &channel, steps)
            }
        }
    }
}

/// Square grid `linspace(−half_width, half_width, points)` per quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::invalid(format!("grid half_width must be positive, got {}", self.half_width)));
        }
        if self.points < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vec<f64> {
        let n = self.points;
        let step = 2.0 * self.half_width / (n - 1) as f64;
        // index-symmetric construction so that −x is exactly on the grid
        (0..n)
            .map(|i| {
                let k = i as f64 - (n - 1) as f64 / 2.0;
                k * step
            })
            .collect()
    }
}
