// SPDX-License-Identifier: Apache-2.0

//! Fixed-step RK4 integration of the two-mode laser-channel master equation
//!
//! ```text
//! dρ/dt = Σ_j g_j (2a_j†ρa_j − a_ja_j†ρ − ρa_ja_j†) + κ_j (2a_jρa_j† − a_j†a_jρ − ρa_j†a_j)
//! ```
//!
//! on the truncated Fock space. The generator only couples entries
//! `⟨m₁m₂|ρ|n₁n₂⟩` with the same coherence orders `(m₁−n₁, m₂−n₂)`, so only
//! the sectors occupied by `ρ₀` are integrated; the rest stay exactly zero.
//! Products such as `a a†` are the products of the truncated matrices, which
//! keeps the truncated generator exactly trace preserving.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ChannelParams, FockOp, Mode, HERMITIAN_TOL, ZERO};
use crate::{Error, Result};

/// Real-axis stability limit of classical RK4.
const RK4_STABILITY: f64 = 2.78;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladConfig {
    pub steps: usize,
    /// Allowed `|tr ρ(t) − tr ρ₀|`.
    pub trace_tol: f64,
}

impl LindbladConfig {
    pub fn with_steps(steps: usize) -> Self {
        LindbladConfig { steps, trace_tol: 1e-8 }
    }
}

pub fn lindblad_evolve(rho0: &FockOp, ch: &ChannelParams, steps: usize) -> Result<FockOp> {
    lindblad_evolve_with(rho0, ch, &LindbladConfig::with_steps(steps))
}

/// Sparse generator restricted to the occupied sectors. `diag[p]` and the
/// `(position, coefficient)` couplings act on the compact entry vector.
struct Generator {
    flat: Vec<usize>,
    diag: Vec<f64>,
    couplings: Vec<[(u32, f64); 4]>,
    partner: Vec<u32>,
    diagonal_positions: Vec<u32>,
}

impl Generator {
    fn build(rho0: &FockOp, ch: &ChannelParams) -> Generator {
        let levels = rho0.levels();
        let cutoff = rho0.cutoff();
        let dim = rho0.dim();
        let span = 2 * levels - 1;
        let mut occupied = vec![false; span * span];
        let sector = |m1: usize, n1: usize, m2: usize, n2: usize| {
            (m1 + cutoff - n1) * span + (m2 + cutoff - n2)
        };
        for col in 0..dim {
            let (n1, n2) = (col / levels, col % levels);
            for row in 0..dim {
                if rho0.matrix()[(row, col)] != ZERO {
                    occupied[sector(row / levels, n1, row % levels, n2)] = true;
                }
            }
        }

        let mut position = vec![u32::MAX; dim * dim];
        let mut flat = Vec::new();
        for col in 0..dim {
            let (n1, n2) = (col / levels, col % levels);
            for row in 0..dim {
                if occupied[sector(row / levels, n1, row % levels, n2)] {
                    position[col * dim + row] = flat.len() as u32;
                    flat.push(col * dim + row);
                }
            }
        }

        let truncated_aad = |n: usize| if n < cutoff { (n + 1) as f64 } else { 0.0 };
        let (k1, g1) = ch.rates(Mode::First);
        let (k2, g2) = ch.rates(Mode::Second);
        let mut diag = Vec::with_capacity(flat.len());
        let mut couplings = Vec::with_capacity(flat.len());
        let mut partner = Vec::with_capacity(flat.len());
        for &f in &flat {
            let (row, col) = (f % dim, f / dim);
            let m = [row / levels, row % levels];
            let n = [col / levels, col % levels];
            let mut d = 0.0;
            let mut links = [(u32::MAX, 0.0); 4];
            for (j, (kappa, gain)) in [(k1, g1), (k2, g2)].into_iter().enumerate() {
                d -= kappa * (m[j] + n[j]) as f64;
                d -= gain * (truncated_aad(m[j]) + truncated_aad(n[j]));
                let unit = if j == 0 { levels } else { 1 };
                if kappa > 0.0 && m[j] < cutoff && n[j] < cutoff {
                    let up = (col + unit) * dim + row + unit;
                    let coeff = 2.0 * kappa * (((m[j] + 1) * (n[j] + 1)) as f64).sqrt();
                    links[2 * j] = (position[up], coeff);
                }
                if gain > 0.0 && m[j] > 0 && n[j] > 0 {
                    let down = (col - unit) * dim + row - unit;
                    let coeff = 2.0 * gain * ((m[j] * n[j]) as f64).sqrt();
                    links[2 * j + 1] = (position[down], coeff);
                }
            }
            diag.push(d);
            couplings.push(links);
            partner.push(position[row * dim + col]);
        }
        let diagonal_positions = (0..dim).map(|i| position[i * dim + i]).filter(|&p| p != u32::MAX).collect();
        Generator { flat, diag, couplings, partner, diagonal_positions }
    }

    /// Gershgorin bound on the spectral radius.
    fn radius(&self) -> f64 {
        self.diag
            .iter()
            .zip(&self.couplings)
            .map(|(d, links)| d.abs() + links.iter().map(|(_, c)| c.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (p, slot) in out.iter_mut().enumerate() {
            let mut acc = x[p] * self.diag[p];
            for &(q, c) in &self.couplings[p] {
                if q != u32::MAX {
                    acc += x[q as usize] * c;
                }
            }
            *slot = acc;
        }
    }

    fn trace(&self, x: &[Complex64]) -> f64 {
        self.diagonal_positions.iter().map(|&p| x[p as usize].re).sum()
    }
}

pub fn lindblad_evolve_with(rho0: &FockOp, ch: &ChannelParams, cfg: &LindbladConfig) -> Result<FockOp> {
    rho0.require_modes(2, "Lindblad evolution")?;
    ch.validate()?;
    if cfg.steps < 1 {
        return Err(Error::invalid("steps must be at least 1"));
    }
    let herm = rho0.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::invalid(format!("initial state is not Hermitian (max |ρ − ρ†| = {herm:.3e})")));
    }
    let trace0 = rho0.trace();
    if (trace0 - Complex64::new(1.0, 0.0)).norm() > 1e-6 {
        return Err(Error::invalid(format!("initial state has trace {trace0}, expected 1")));
    }
    let idle = ch.kappa1 == 0.0 && ch.kappa2 == 0.0 && ch.g1 == 0.0 && ch.g2 == 0.0;
    if idle || ch.t == 0.0 {
        return Ok(rho0.clone());
    }

    let gen = Generator::build(rho0, ch);
    let h = ch.t / cfg.steps as f64;
    let radius = gen.radius();
    if h * radius > RK4_STABILITY {
        let needed = (ch.t * radius / RK4_STABILITY).ceil();
        return Err(Error::StepSizeTooLarge(format!(
            "{} steps over t = {} exceed the RK4 stability limit; need at least {needed}",
            cfg.steps, ch.t
        )));
    }

    let src = rho0.matrix().as_slice();
    let mut x: Vec<Complex64> = gen.flat.iter().map(|&f| src[f]).collect();
    let start_trace = gen.trace(&x);
    let len = x.len();
    let mut k1 = vec![ZERO; len];
    let mut k2 = vec![ZERO; len];
    let mut k3 = vec![ZERO; len];
    let mut k4 = vec![ZERO; len];
    let mut stage = vec![ZERO; len];

    for step in 0..cfg.steps {
        gen.apply(&x, &mut k1);
        for p in 0..len {
            stage[p] = x[p] + k1[p] * (0.5 * h);
        }
        gen.apply(&stage, &mut k2);
        for p in 0..len {
            stage[p] = x[p] + k2[p] * (0.5 * h);
        }
        gen.apply(&stage, &mut k3);
        for p in 0..len {
            stage[p] = x[p] + k3[p] * h;
        }
        gen.apply(&stage, &mut k4);
        for p in 0..len {
            x[p] += (k1[p] + (k2[p] + k3[p]) * 2.0 + k4[p]) * (h / 6.0);
        }
        // ρ ← (ρ + ρ†)/2
        for p in 0..len {
            let q = gen.partner[p] as usize;
            if q > p {
                let avg = (x[p] + x[q].conj()) * 0.5;
                x[p] = avg;
                x[q] = avg.conj();
            } else if q == p {
                x[p].im = 0.0;
            }
        }
        let drift = (gen.trace(&x) - start_trace).abs();
        if !drift.is_finite() || drift > cfg.trace_tol {
            return Err(Error::StepSizeTooLarge(format!(
                "trace drift {drift:.3e} after step {} exceeds {:.1e}",
                step + 1,
                cfg.trace_tol
            )));
        }
    }

    let dim = rho0.dim();
    let mut out = DMatrix::zeros(dim, dim);
    let slice = out.as_mut_slice();
    for (p, &f) in gen.flat.iter().enumerate() {
        slice[f] = x[p];
    }
    Ok(FockOp::from_parts(2, rho0.cutoff(), out))
}
