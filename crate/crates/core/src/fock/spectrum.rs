// SPDX-License-Identifier: Apache-2.0

//! Hermitian spectra, trace norms and the Fock-space logarithmic negativity.
//!
//! Matrices are first split into the connected components of their nonzero
//! pattern; each block is diagonalized with cyclic complex Jacobi rotations.
//! Partially transposed Gaussian states split into blocks no larger than one
//! photon-number shell, which keeps cutoffs of 60 per mode tractable.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{partial_transpose, FockOp, Mode, HERMITIAN_TOL, ZERO};
use crate::{Error, Result};

/// Relative off-diagonal Frobenius norm at which Jacobi sweeps stop.
const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Trace norms in `[1 - CLAMP_BAND, 1]` are reported as exactly one.
const CLAMP_BAND: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: DMatrix<Complex64>,
}

/// Index sets of the connected components of the nonzero pattern, each
/// sorted, ordered by smallest member.
pub fn hermitian_blocks(m: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        let column = m.column(j);
        for (i, value) in column.iter().enumerate() {
            if i != j && *value != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut root_slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_slot[root]].push(i);
    }
    blocks
}

fn require_hermitian(op: &FockOp) -> Result<()> {
    let err = op.hermiticity_error();
    if err > HERMITIAN_TOL {
        return Err(Error::invalid(format!(
            "operator is not Hermitian (max |O - O†| = {err:.3e})"
        )));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian operator, ascending.
pub fn eig_hermitian(op: &FockOp) -> Result<Vec<f64>> {
    require_hermitian(op)?;
    let mut values = Vec::with_capacity(op.dim());
    for block in hermitian_blocks(op.matrix()) {
        let mut sub = extract(op.matrix(), &block);
        values.extend(jacobi(&mut sub, None)?);
    }
    values.sort_by(|a, b| a.total_cmp(b));
    Ok(values)
}

/// Eigenvalues and eigenvectors of a Hermitian operator.
pub fn eigh(op: &FockOp) -> Result<HermitianEigen> {
    require_hermitian(op)?;
    let n = op.dim();
    let mut pairs: Vec<(f64, Vec<(usize, Complex64)>)> = Vec::with_capacity(n);
    for block in hermitian_blocks(op.matrix()) {
        let mut sub = extract(op.matrix(), &block);
        let mut vecs = DMatrix::identity(block.len(), block.len());
        let vals = jacobi(&mut sub, Some(&mut vecs))?;
        for (k, val) in vals.into_iter().enumerate() {
            let entries = block.iter().enumerate().map(|(local, &global)| (global, vecs[(local, k)])).collect();
            pairs.push((val, entries));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vectors = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, (val, entries)) in pairs.into_iter().enumerate() {
        values.push(val);
        for (row, z) in entries {
            vectors[(row, k)] = z;
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn extract(m: &DMatrix<Complex64>, idx: &[usize]) -> Vec<Complex64> {
    let k = idx.len();
    let mut out = vec![ZERO; k * k];
    for (c, &gc) in idx.iter().enumerate() {
        for (r, &gr) in idx.iter().enumerate() {
            out[r * k + c] = m[(gr, gc)];
        }
    }
    out
}

/// Cyclic Jacobi on a row-major Hermitian matrix. Returns the diagonal after
/// convergence; rotations are accumulated into `vectors` when given.
fn jacobi(a: &mut [Complex64], mut vectors: Option<&mut DMatrix<Complex64>>) -> Result<Vec<f64>> {
    let n = (a.len() as f64).sqrt().round() as usize;
    if n == 1 {
        return Ok(vec![a[0].re]);
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_TOL * total;
    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) · R(c, s) on the (p, q) plane
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                // A ← A J
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                // A ← J† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }
    Err(Error::NumericalInconsistency(format!(
        "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (n = {n})"
    )))
}

/// Sum of absolute eigenvalues of a Hermitian operator.
pub fn trace_norm(op: &FockOp) -> Result<f64> {
    Ok(eig_hermitian(op)?.iter().map(|v| v.abs()).sum())
}

/// `log₂ ‖ρ^{T₂}‖₁`, clamped at zero for trace norms in `[1 − 1e−9, 1]`.
pub fn log_negativity_fock(rho: &FockOp) -> Result<f64> {
    rho.require_modes(2, "log negativity")?;
    let norm = trace_norm(&partial_transpose(rho, Mode::Second)?)?;
    if (1.0 - CLAMP_BAND..=1.0).contains(&norm) {
        return Ok(0.0);
    }
    Ok(norm.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{tensor, thermal_state, tmsv_density, vacuum_state};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    }

    #[test]
    fn diagonal_spectra() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(3.0, 0.0);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        let op = FockOp::from_matrix(1, 1, m.clone()).unwrap();
        assert_eq!(eig_hermitian(&op).unwrap(), vec![-1.0, 3.0]);

        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(-2.0, 0.0);
        let op = FockOp::from_matrix(1, 1, m).unwrap();
        assert_eq!(trace_norm(&op).unwrap(), 3.0);

        let vac = vacuum_state(1, 6).unwrap();
        let vals = eig_hermitian(&vac).unwrap();
        assert_eq!(vals[6], 1.0);
        assert!(vals[..6].iter().all(|&v| v == 0.0));
        assert_eq!(trace_norm(&vac).unwrap(), 1.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let op = crate::fock::annihilator(4).unwrap();
        assert!(matches!(eig_hermitian(&op), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn dense_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for cutoff in [3usize, 8, 15] {
            let h = random_hermitian(cutoff + 1, &mut rng);
            let op = FockOp::from_matrix(1, cutoff, h.clone()).unwrap();
            let eig = eigh(&op).unwrap();
            let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                eig.values.len(),
                eig.values.iter().map(|&v| Complex64::new(v, 0.0)),
            ));
            let rebuilt = &eig.vectors * lambda * eig.vectors.adjoint();
            let err = (&rebuilt - &h).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            assert!(err < 1e-9, "reconstruction error {err}");
            let trace: f64 = eig.values.iter().sum();
            assert_abs_diff_eq!(trace, h.trace().re, epsilon = 1e-10);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn two_mode_dense_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(49, &mut rng);
        let op = FockOp::from_matrix(2, 6, h.clone()).unwrap();
        let eig = eigh(&op).unwrap();
        let mut rebuilt = DMatrix::zeros(49, 49);
        for (k, &val) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(k);
            rebuilt += v * v.adjoint() * Complex64::new(val, 0.0);
        }
        let err = (&rebuilt - &h).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(err < 1e-9);
    }

    #[test]
    fn blocks_follow_sparsity() {
        let mut m = DMatrix::zeros(5, 5);
        m[(0, 3)] = Complex64::new(1.0, 0.0);
        m[(3, 0)] = Complex64::new(1.0, 0.0);
        m[(2, 4)] = Complex64::new(0.0, 1.0);
        m[(4, 2)] = Complex64::new(0.0, -1.0);
        assert_eq!(hermitian_blocks(&m), vec![vec![0, 3], vec![1], vec![2, 4]]);
    }

    #[test]
    fn tmsv_trace_norm_and_log_negativity() {
        let rho = tmsv_density(0.5, 30).unwrap();
        let pt = partial_transpose(&rho, Mode::Second).unwrap();
        // truncated series: sech²r · (Σ_{n≤N} tanhⁿ r)²
        let th = 0.5f64.tanh();
        let partial: f64 = (0..=30).map(|n| th.powi(n)).sum();
        let expected = partial * partial / 0.5f64.cosh().powi(2);
        let norm = trace_norm(&pt).unwrap();
        assert_abs_diff_eq!(norm, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(norm, 1f64.exp(), epsilon = 1e-4);
        assert_abs_diff_eq!(log_negativity_fock(&rho).unwrap(), 1.0 / 2f64.ln(), epsilon = 1e-4);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let rho = tensor(&thermal_state(0.4, 20).unwrap(), &vacuum_state(1, 20).unwrap()).unwrap();
        assert_eq!(log_negativity_fock(&rho).unwrap(), 0.0);
    }
}
