// SPDX-License-Identifier: Apache-2.0

//! Dense operators on a truncated Fock basis.
//!
//! A single-mode operator with cutoff `N` acts on `|0⟩..|N⟩`. Two-mode
//! operators act on the product basis flattened mode-1-major: the state
//! `|n1, n2⟩` has index `n1 * (N + 1) + n2`. Every builder, the partial
//! transpose and [`tensor`] rely on this ordering.

mod builders;
mod dd;
mod lindblad;
pub(crate) mod phase;
mod spectrum;

pub use builders::{
    beam_splitter_op, coherent_population, displacement_op, displacement_op_with, gaussian_rho_op,
    gaussian_rho_op_with, linear_mode_map_op, squeeze1_op, squeeze1_op_with, squeeze2_op,
    squeeze2_op_with, thermal_state, tmsv_density, vacuum_state,
};
pub use lindblad::{lindblad_evolve, lindblad_evolve_with, LindbladConfig};
pub use phase::{
    char_fn_point, char_fn_point2, covariance_fock, covariance_fock_single, expect_normal,
    wigner_point_fock, wigner_point_fock2,
};
pub use spectrum::{
    eig_hermitian, eigh, hermitian_blocks, log_negativity_fock, trace_norm, HermitianEigen,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default bound on the population of the highest retained Fock level.
pub const TAIL_TOL: f64 = 1e-8;

/// Largest `max |O - O†|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which mode of a two-mode operator an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    First,
    Second,
}

/// Dense complex matrix over a truncated one- or two-mode Fock basis.
///
/// Hermiticity is not an invariant of the type; see
/// [`FockOp::hermiticity_error`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockOp {
    modes: usize,
    cutoff: usize,
    data: DMatrix<Complex64>,
}

impl FockOp {
    pub fn from_matrix(modes: usize, cutoff: usize, data: DMatrix<Complex64>) -> Result<Self> {
        if modes != 1 && modes != 2 {
            return Err(Error::invalid(format!("modes must be 1 or 2, got {modes}")));
        }
        if cutoff < 1 {
            return Err(Error::invalid("cutoff must be at least 1"));
        }
        let dim = (cutoff + 1).pow(modes as u32);
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::invalid(format!(
                "matrix is {}x{}, expected {dim}x{dim} for {modes} mode(s) at cutoff {cutoff}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(FockOp { modes, cutoff, data })
    }

    pub(crate) fn from_parts(modes: usize, cutoff: usize, data: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(data.nrows(), (cutoff + 1).pow(modes as u32));
        FockOp { modes, cutoff, data }
    }

    pub fn zeros(modes: usize, cutoff: usize) -> Result<Self> {
        let dim = checked_dim(modes, cutoff)?;
        Ok(FockOp::from_parts(modes, cutoff, DMatrix::zeros(dim, dim)))
    }

    pub fn identity(modes: usize, cutoff: usize) -> Result<Self> {
        let dim = checked_dim(modes, cutoff)?;
        Ok(FockOp::from_parts(modes, cutoff, DMatrix::identity(dim, dim)))
    }

    /// `|ket⟩⟨ket|` for a state vector given in the flattened basis.
    pub fn projector(modes: usize, cutoff: usize, ket: &[Complex64]) -> Result<Self> {
        let dim = checked_dim(modes, cutoff)?;
        if ket.len() != dim {
            return Err(Error::invalid(format!("ket has length {}, expected {dim}", ket.len())));
        }
        let mut data = DMatrix::zeros(dim, dim);
        let support: Vec<usize> = (0..dim).filter(|&i| ket[i] != ZERO).collect();
        for &j in &support {
            let cj = ket[j].conj();
            for &i in &support {
                data[(i, j)] = ket[i] * cj;
            }
        }
        Ok(FockOp::from_parts(modes, cutoff, data))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of levels per mode, `cutoff + 1`.
    pub fn levels(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    /// Flattened index of `|n1, n2⟩`.
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.levels() + n2
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn adjoint(&self) -> FockOp {
        FockOp::from_parts(self.modes, self.cutoff, self.data.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> FockOp {
        FockOp::from_parts(self.modes, self.cutoff, &self.data * factor)
    }

    pub fn mul(&self, other: &FockOp) -> Result<FockOp> {
        self.check_same_space(other)?;
        Ok(FockOp::from_parts(self.modes, self.cutoff, &self.data * &other.data))
    }

    pub fn add(&self, other: &FockOp) -> Result<FockOp> {
        self.check_same_space(other)?;
        Ok(FockOp::from_parts(self.modes, self.cutoff, &self.data + &other.data))
    }

    /// Largest entry of `|O - O†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in j..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `|O - O'|`.
    pub fn max_abs_diff(&self, other: &FockOp) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm())))
    }

    /// Largest entry difference restricted to states whose occupation is at
    /// most `max_level` in every mode.
    pub fn max_abs_diff_below(&self, other: &FockOp, max_level: usize) -> Result<f64> {
        self.check_same_space(other)?;
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| self.occupations(i).iter().all(|&n| n <= max_level))
            .collect();
        let mut worst = 0.0f64;
        for &j in &keep {
            for &i in &keep {
                worst = worst.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        Ok(worst)
    }

    /// Per-mode occupations of basis index `i`.
    pub fn occupations(&self, i: usize) -> Vec<usize> {
        match self.modes {
            1 => vec![i],
            _ => vec![i / self.levels(), i % self.levels()],
        }
    }

    pub(crate) fn check_same_space(&self, other: &FockOp) -> Result<()> {
        if self.modes != other.modes || self.cutoff != other.cutoff {
            return Err(Error::invalid(format!(
                "operator spaces differ: ({} modes, cutoff {}) vs ({} modes, cutoff {})",
                self.modes, self.cutoff, other.modes, other.cutoff
            )));
        }
        Ok(())
    }

    pub(crate) fn require_modes(&self, modes: usize, what: &str) -> Result<()> {
        if self.modes != modes {
            return Err(Error::invalid(format!(
                "{what} needs a {modes}-mode operator, got {} mode(s)",
                self.modes
            )));
        }
        Ok(())
    }
}

fn checked_dim(modes: usize, cutoff: usize) -> Result<usize> {
    if modes != 1 && modes != 2 {
        return Err(Error::invalid(format!("modes must be 1 or 2, got {modes}")));
    }
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    Ok((cutoff + 1).pow(modes as u32))
}

/// Single-mode annihilation operator: `⟨n-1|a|n⟩ = √n`.
pub fn annihilator(cutoff: usize) -> Result<FockOp> {
    if cutoff < 1 {
        return Err(Error::invalid("cutoff must be at least 1"));
    }
    let dim = cutoff + 1;
    let mut data = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        data[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(FockOp::from_parts(1, cutoff, data))
}

pub fn creator(cutoff: usize) -> Result<FockOp> {
    Ok(transpose_full(&annihilator(cutoff)?))
}

pub fn number_op(cutoff: usize) -> Result<FockOp> {
    let dim = checked_dim(1, cutoff)?;
    let mut data = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        data[(n, n)] = Complex64::new(n as f64, 0.0);
    }
    Ok(FockOp::from_parts(1, cutoff, data))
}

/// Parity `(-1)^{a†a}`.
pub fn parity_op(cutoff: usize) -> Result<FockOp> {
    let dim = checked_dim(1, cutoff)?;
    let mut data = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        data[(n, n)] = if n % 2 == 0 { ONE } else { -ONE };
    }
    Ok(FockOp::from_parts(1, cutoff, data))
}

/// Two-mode operator `A ⊗ B` with mode-1-major indexing.
pub fn tensor(op_a: &FockOp, op_b: &FockOp) -> Result<FockOp> {
    op_a.require_modes(1, "tensor")?;
    op_b.require_modes(1, "tensor")?;
    if op_a.cutoff != op_b.cutoff {
        return Err(Error::invalid(format!(
            "tensor factors have different cutoffs ({} vs {})",
            op_a.cutoff, op_b.cutoff
        )));
    }
    Ok(FockOp::from_parts(2, op_a.cutoff, op_a.data.kronecker(&op_b.data)))
}

/// Transpose in the Fock basis, without conjugation.
pub fn transpose_full(op: &FockOp) -> FockOp {
    FockOp::from_parts(op.modes, op.cutoff, op.data.transpose())
}

/// Partial transpose of a two-mode operator: for [`Mode::Second`] the entry
/// `⟨i,j|O|k,l⟩` moves to `⟨i,l|O^T|k,j⟩`.
pub fn partial_transpose(op: &FockOp, mode: Mode) -> Result<FockOp> {
    op.require_modes(2, "partial transpose")?;
    let levels = op.levels();
    let dim = op.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for k in 0..levels {
        for l in 0..levels {
            let col = k * levels + l;
            for i in 0..levels {
                for j in 0..levels {
                    let value = op.data[(i * levels + j, col)];
                    let (row_t, col_t) = match mode {
                        Mode::Second => (i * levels + l, k * levels + j),
                        Mode::First => (k * levels + j, i * levels + l),
                    };
                    out[(row_t, col_t)] = value;
                }
            }
        }
    }
    Ok(FockOp::from_parts(2, op.cutoff, out))
}

/// `ln n!` for `n` up to `max`, exact summation of logs.
pub(crate) fn ln_factorials(max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(max + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for n in 1..=max {
        acc += (n as f64).ln();
        table.push(acc);
    }
    table
}

/// Largest `n` for which `√n!` products and `1/n!` stay in range.
const DIRECT_FACTORIAL_MAX: usize = 150;

/// Factorial ratios `√(Π a!) / √(Π b!) / Π c!`.
///
/// Up to [`DIRECT_FACTORIAL_MAX`] the ratio is a product of tabulated
/// `√n!` and `1/n!`, accurate to a few ulps. Beyond that it falls back to
/// logarithms, whose relative error grows with `ln n!`.
pub(crate) struct Factorials {
    sqrt: Vec<f64>,
    inv: Vec<f64>,
    inv_sqrt: Vec<f64>,
    ln: Option<Vec<f64>>,
}

impl Factorials {
    pub(crate) fn new(max: usize) -> Self {
        if max > DIRECT_FACTORIAL_MAX {
            return Factorials { sqrt: vec![], inv: vec![], inv_sqrt: vec![], ln: Some(ln_factorials(max)) };
        }
        let mut fact = vec![1.0f64; max + 1];
        for n in 1..=max {
            fact[n] = fact[n - 1] * n as f64;
        }
        Factorials {
            sqrt: fact.iter().map(|f| f.sqrt()).collect(),
            inv: fact.iter().map(|f| 1.0 / f).collect(),
            inv_sqrt: fact.iter().map(|f| 1.0 / f.sqrt()).collect(),
            ln: None,
        }
    }

    pub(crate) fn ratio(&self, sqrt_num: &[usize], sqrt_den: &[usize], den: &[usize]) -> f64 {
        match &self.ln {
            Some(lnf) => {
                let half: f64 = sqrt_num.iter().map(|&n| lnf[n]).sum::<f64>()
                    - sqrt_den.iter().map(|&n| lnf[n]).sum::<f64>();
                (0.5 * half - den.iter().map(|&n| lnf[n]).sum::<f64>()).exp()
            }
            None => {
                let mut acc = 1.0;
                for &n in sqrt_num {
                    acc *= self.sqrt[n];
                }
                for &n in sqrt_den {
                    acc *= self.inv_sqrt[n];
                }
                for &n in den {
                    acc *= self.inv[n];
                }
                acc
            }
        }
    }
}

/// Loss and gain rates of the two laser channels plus the evolution time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub kappa1: f64,
    pub kappa2: f64,
    pub g1: f64,
    pub g2: f64,
    pub t: f64,
}

impl ChannelParams {
    pub fn new(kappa1: f64, g1: f64, kappa2: f64, g2: f64, t: f64) -> Result<Self> {
        let ch = ChannelParams { kappa1, kappa2, g1, g2, t };
        ch.validate()?;
        Ok(ch)
    }

    /// Identical loss `kappa` and gain `g` on both modes.
    pub fn symmetric(kappa: f64, g: f64, t: f64) -> Result<Self> {
        Self::new(kappa, g, kappa, g, t)
    }

    pub fn identity() -> Self {
        ChannelParams { kappa1: 0.0, kappa2: 0.0, g1: 0.0, g2: 0.0, t: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("g1", self.g1),
            ("g2", self.g2),
            ("t", self.t),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// `(kappa, g)` of the given mode.
    pub fn rates(&self, mode: Mode) -> (f64, f64) {
        match mode {
            Mode::First => (self.kappa1, self.g1),
            Mode::Second => (self.kappa2, self.g2),
        }
    }
}
