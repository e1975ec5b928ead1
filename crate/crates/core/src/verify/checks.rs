// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::states::{GridSpec, StateSpec};
use super::CheckReport;
use crate::fock::phase::{trace_with_factors, wigner_operator};
use crate::fock::{
    annihilator, beam_splitter_op, covariance_fock, covariance_fock_single, creator, displacement_op,
    eig_hermitian, gaussian_rho_op, lindblad_evolve, log_negativity_fock, parity_op, partial_transpose,
    squeeze1_op, squeeze2_op, tmsv_density, transpose_full, wigner_point_fock2, FockOp, Mode,
};
use crate::negativity::{
    en_analytic, en_photon_loss, en_single_side_loss, omega_from_lambda, threshold_time,
    threshold_time_bisect,
};
use crate::phase_space::{
    convolve_wigner, covariance_from_lambda, covariance_pt, covariance_transpose_single,
    evolved_wigner_point, lambda_params,
};
use crate::{ChannelParams, Error, Result};

/// Tolerance for identities that hold to rounding on the truncated basis.
pub const ALGEBRA_TOL: f64 = 1e-10;
/// Squeezer partial transpose against the scaled beam splitter.
pub const SQUEEZER_TOL: f64 = 1e-9;
/// Lindblad density matrix against the normally ordered closed form.
pub const DENSITY_TOL: f64 = 1e-5;
/// Fock-evaluated Wigner values against the evolved closed form.
pub const WIGNER_TOL: f64 = 1e-4;
/// Fock log-negativity against the analytic value.
pub const NEGATIVITY_TOL: f64 = 1e-3;
/// Gauss–Hermite convolution against the closed-form evolved Wigner function.
pub const KERNEL_TOL: f64 = 1e-8;
/// Closed-form special cases against the general pipeline.
pub const SPECIAL_CASE_TOL: f64 = 1e-12;
/// Bisected threshold time against the closed form.
pub const THRESHOLD_TOL: f64 = 1e-8;

/// Smallest cutoff accepted by [`check_transpose_lemma`].
pub const TRANSPOSE_MIN_CUTOFF: usize = 12;
/// Largest per-mode exponent in the two-mode transpose trials.
const TWO_MODE_MAX_POWER: usize = 2;
/// Largest per-operator exponent in the single-mode transpose trials.
const SINGLE_MODE_MAX_POWER: usize = 4;
/// Fixed seed for the Wigner sample points of [`check_channel_pipeline`].
pub const PIPELINE_POINT_SEED: u64 = 7;
const PIPELINE_POINTS: usize = 10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `a†^j a^k` for all `j, k ≤ max_power`, indexed `[j][k]`.
fn monomials(cutoff: usize, max_power: usize) -> Result<Vec<Vec<DMatrix<Complex64>>>> {
    let a = annihilator(cutoff)?.into_matrix();
    let ad = creator(cutoff)?.into_matrix();
    let dim = cutoff + 1;
    let mut a_pow = vec![DMatrix::identity(dim, dim)];
    let mut ad_pow = vec![DMatrix::identity(dim, dim)];
    for p in 1..=max_power {
        a_pow.push(&a_pow[p - 1] * &a);
        ad_pow.push(&ad_pow[p - 1] * &ad);
    }
    Ok((0..=max_power).map(|j| (0..=max_power).map(|k| &ad_pow[j] * &a_pow[k]).collect()).collect())
}

fn weighted_sum<'a>(terms: impl Iterator<Item = (Complex64, &'a DMatrix<Complex64>)>, dim: usize) -> DMatrix<Complex64> {
    let mut acc = DMatrix::zeros(dim, dim);
    for (coeff, m) in terms {
        acc.zip_apply(m, |x, y| *x += coeff * y);
    }
    acc
}

/// Transpose of normally ordered polynomials: `(Σ c_jk a†^j a^k)^T` against
/// `Σ c_jk a†^k a^j`, plus the two-mode analogue for the full transpose and
/// the partial transpose on mode 2. Two-mode trials run at
/// `min(cutoff, 10)` with exponents up to 2 per operator. The identity and
/// `a†²a → a†a²` are always included.
pub fn check_transpose_lemma(seed: u64, trials: usize, cutoff: usize) -> Result<CheckReport> {
    if cutoff < TRANSPOSE_MIN_CUTOFF {
        return Err(Error::invalid(format!(
            "cutoff must be at least {TRANSPOSE_MIN_CUTOFF} for the transpose lemma, got {cutoff}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cutoff + 1;
    let mono = monomials(cutoff, SINGLE_MODE_MAX_POWER)?;
    let mut worst = 0.0f64;

    let identity = FockOp::identity(1, cutoff)?;
    worst = worst.max(transpose_full(&identity).max_abs_diff(&identity)?);
    worst = worst.max(max_diff(&mono[2][1].transpose(), &mono[1][2]));

    let pairs: Vec<(usize, usize)> =
        (0..=SINGLE_MODE_MAX_POWER).flat_map(|j| (0..=SINGLE_MODE_MAX_POWER).map(move |k| (j, k))).collect();
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = pairs.iter().map(|_| random_coeff(&mut rng)).collect();
        let op = weighted_sum(coeffs.iter().zip(&pairs).map(|(&cf, &(j, k))| (cf, &mono[j][k])), dim);
        let swapped = weighted_sum(coeffs.iter().zip(&pairs).map(|(&cf, &(j, k))| (cf, &mono[k][j])), dim);
        worst = worst.max(max_diff(&op.transpose(), &swapped));
    }

    let cutoff2 = cutoff.min(10);
    let dim2 = (cutoff2 + 1) * (cutoff2 + 1);
    let mono2 = monomials(cutoff2, TWO_MODE_MAX_POWER)?;
    let p = TWO_MODE_MAX_POWER + 1;
    let mut products = Vec::with_capacity(p.pow(4));
    for idx in 0..p.pow(4) {
        let (j1, k1, j2, k2) = (idx / p.pow(3), (idx / p.pow(2)) % p, (idx / p) % p, idx % p);
        products.push(mono2[j1][k1].kronecker(&mono2[j2][k2]));
    }
    let at = |j1: usize, k1: usize, j2: usize, k2: usize| ((j1 * p + k1) * p + j2) * p + k2;
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = (0..products.len()).map(|_| random_coeff(&mut rng)).collect();
        let op = weighted_sum(coeffs.iter().copied().zip(products.iter()), dim2);
        let mut full = Vec::with_capacity(products.len());
        let mut second = Vec::with_capacity(products.len());
        for (idx, &c) in coeffs.iter().enumerate() {
            let (j1, k1, j2, k2) = (idx / p.pow(3), (idx / p.pow(2)) % p, (idx / p) % p, idx % p);
            full.push((c, &products[at(k1, j1, k2, j2)]));
            second.push((c, &products[at(j1, k1, k2, j2)]));
        }
        let op_fock = FockOp::from_matrix(2, cutoff2, op)?;
        let pt = partial_transpose(&op_fock, Mode::Second)?;
        worst = worst.max(max_diff(&transpose_full(&op_fock).into_matrix(), &weighted_sum(full.into_iter(), dim2)));
        worst = worst.max(max_diff(pt.matrix(), &weighted_sum(second.into_iter(), dim2)));
    }

    Ok(CheckReport::new(
        "transpose_lemma",
        json!({
            "trials": trials,
            "single_mode_max_power": SINGLE_MODE_MAX_POWER,
            "two_mode_max_power": TWO_MODE_MAX_POWER,
            "two_mode_cutoff": cutoff2,
        }),
        worst,
        ALGEBRA_TOL,
    )
    .with_cutoff(cutoff)
    .with_seed(seed))
}

/// `D(α)^T = D(−α*)`, `S₁(ξ)^T = S₁(−ξ*)`, `S₂(ξ)^T = S₂(−ξ*)` and
/// `Π^T = Π` on a fixed set of amplitudes.
pub fn check_operator_transposes(cutoff: usize) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    let alphas = [c(0.3, -0.2), c(-0.7, 0.5), c(0.8, 0.3)];
    let xis = [c(0.2, 0.1), c(-0.12, 0.16)];
    for alpha in alphas {
        let d = displacement_op(alpha, cutoff)?;
        worst = worst.max(transpose_full(&d).max_abs_diff(&displacement_op(-alpha.conj(), cutoff)?)?);
    }
    for xi in xis {
        let s = squeeze1_op(xi, cutoff)?;
        worst = worst.max(transpose_full(&s).max_abs_diff(&squeeze1_op(-xi.conj(), cutoff)?)?);
        let s2 = squeeze2_op(xi, cutoff)?;
        worst = worst.max(transpose_full(&s2).max_abs_diff(&squeeze2_op(-xi.conj(), cutoff)?)?);
    }
    let parity = parity_op(cutoff)?;
    worst = worst.max(transpose_full(&parity).max_abs_diff(&parity)?);
    let pairs = |zs: &[Complex64]| zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
    let params = json!({ "alpha": pairs(&alphas), "xi": pairs(&xis) });
    Ok(CheckReport::new("operator_transposes", params, worst, ALGEBRA_TOL).with_cutoff(cutoff))
}

/// Entrywise `PT₂[S₂(r)]` against `cos θ · B(θ)` with `sin θ = tanh r`, over
/// the full truncated matrix.
pub fn check_pt_squeezer(r_values: &[f64], cutoff: usize) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for &r in r_values {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("r must be finite and non-negative, got {r}")));
        }
        let pt = partial_transpose(&squeeze2_op(c(r, 0.0), cutoff)?, Mode::Second)?;
        let theta = r.tanh().asin();
        let bs = beam_splitter_op(theta, 0.0, cutoff)?.scale(c(theta.cos(), 0.0));
        worst = worst.max(pt.max_abs_diff(&bs)?);
    }
    Ok(CheckReport::new("pt_squeezer", json!({ "r": r_values }), worst, SQUEEZER_TOL).with_cutoff(cutoff))
}

/// Per-amplitude factor matrices for the reflection grids.
struct Factors {
    axis: Vec<f64>,
    chi: Vec<DMatrix<Complex64>>,
    wigner: Vec<DMatrix<Complex64>>,
}

impl Factors {
    fn new(grid: &GridSpec, cutoff: usize) -> Result<Factors> {
        let axis = grid.axis();
        let mut chi = Vec::new();
        let mut wigner = Vec::new();
        for &q in &axis {
            for &p in &axis {
                chi.push(displacement_op(c(q, p), cutoff)?.into_matrix());
                wigner.push(wigner_operator(c(q, p), cutoff)?);
            }
        }
        Ok(Factors { axis, chi, wigner })
    }

    fn n(&self) -> usize {
        self.axis.len()
    }

    fn at(&self, iq: usize, ip: usize) -> usize {
        iq * self.n() + ip
    }
}

/// χ and W of the (partially) transposed state against reflected arguments:
/// `χ_{ρ^T}(q, p) = χ_ρ(−q, p)` and `W_{ρ^T}(q, p) = W_ρ(q, −p)`, with the
/// reflection acting on mode 2 for two-mode states.
pub fn check_reflections(states: &[StateSpec], grid: &GridSpec, cutoff: usize) -> Result<CheckReport> {
    grid.validate()?;
    let factors = Factors::new(grid, cutoff)?;
    let n = factors.n();
    let mut worst = 0.0f64;
    for spec in states {
        let rho = spec.build(cutoff)?;
        match spec.modes() {
            1 => {
                let rho_t = transpose_full(&rho);
                for iq in 0..n {
                    for ip in 0..n {
                        let here = factors.at(iq, ip);
                        let chi_ref = factors.at(n - 1 - iq, ip);
                        let w_ref = factors.at(iq, n - 1 - ip);
                        let lhs = trace_with_factors(&rho_t, std::slice::from_ref(&factors.chi[here]));
                        let rhs = trace_with_factors(&rho, std::slice::from_ref(&factors.chi[chi_ref]));
                        worst = worst.max((lhs - rhs).norm());
                        let lhs = trace_with_factors(&rho_t, std::slice::from_ref(&factors.wigner[here]));
                        let rhs = trace_with_factors(&rho, std::slice::from_ref(&factors.wigner[w_ref]));
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
            _ => {
                let rho_pt = partial_transpose(&rho, Mode::Second)?;
                for first in 0..n * n {
                    for iq in 0..n {
                        for ip in 0..n {
                            let here = factors.at(iq, ip);
                            let chi_ref = factors.at(n - 1 - iq, ip);
                            let w_ref = factors.at(iq, n - 1 - ip);
                            let pair = |set: &[DMatrix<Complex64>], second: usize| {
                                [set[first].clone(), set[second].clone()]
                            };
                            let lhs = trace_with_factors(&rho_pt, &pair(&factors.chi, here));
                            let rhs = trace_with_factors(&rho, &pair(&factors.chi, chi_ref));
                            worst = worst.max((lhs - rhs).norm());
                            let lhs = trace_with_factors(&rho_pt, &pair(&factors.wigner, here));
                            let rhs = trace_with_factors(&rho, &pair(&factors.wigner, w_ref));
                            worst = worst.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    Ok(CheckReport::new("reflections", json!({ "states": states, "grid": grid }), worst, ALGEBRA_TOL)
        .with_cutoff(cutoff))
}

/// Fock-moment covariance of the transposed state against the sign-flip
/// conjugation of the original covariance. States must have zero mean.
pub fn check_covariance(states: &[StateSpec], cutoff: usize) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for spec in states {
        let rho = spec.build(cutoff)?;
        match spec.modes() {
            1 => {
                let v: Matrix2<f64> = covariance_fock_single(&rho)?;
                let vt = covariance_fock_single(&transpose_full(&rho))?;
                worst = worst.max((vt - covariance_transpose_single(&v)?).abs().max());
            }
            _ => {
                let v: Matrix4<f64> = covariance_fock(&rho)?;
                let vt = covariance_fock(&partial_transpose(&rho, Mode::Second)?)?;
                worst = worst.max((vt - covariance_pt(&v)?).abs().max());
            }
        }
    }
    Ok(CheckReport::new("covariance", json!({ "states": states }), worst, ALGEBRA_TOL).with_cutoff(cutoff))
}

/// Smallest eigenvalue, trace and hermiticity of `ρ^T` for random
/// single-mode density operators `GG†/tr(GG†)`, half of them rank one.
/// The reported error is the largest of `max(0, −λ_min)`, `|tr ρ^T − 1|` and
/// the hermiticity defect.
pub fn check_transpose_positivity(seed: u64, trials: usize, cutoff: usize) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cutoff + 1;
    let mut worst = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for trial in 0..trials {
        let cols = if trial % 2 == 0 { dim } else { 1 };
        let g = DMatrix::from_fn(dim, cols, |_, _| random_coeff(&mut rng));
        let gg = &g * g.adjoint();
        let tr = gg.trace().re;
        let rho = FockOp::from_matrix(1, cutoff, gg.unscale(tr))?;
        let rho_t = transpose_full(&rho);
        let eig = eig_hermitian(&rho_t)?;
        let lowest = eig.iter().copied().fold(f64::INFINITY, f64::min);
        min_eig = min_eig.min(lowest);
        worst = worst
            .max((-lowest).max(0.0))
            .max((rho_t.trace() - c(1.0, 0.0)).norm())
            .max(rho_t.hermiticity_error());
    }
    Ok(CheckReport::new("transpose_positivity", json!({ "trials": trials, "min_eigenvalue": min_eig }), worst, ALGEBRA_TOL)
        .with_cutoff(cutoff)
        .with_seed(seed))
}

/// Sample points for the Wigner comparison, uniform in `[−0.8, 0.8]` per
/// quadrature.
pub fn pipeline_points() -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(PIPELINE_POINT_SEED);
    let mut u = || rng.random_range(-0.8..0.8);
    (0..PIPELINE_POINTS).map(|_| (c(u(), u()), c(u(), u()))).collect()
}

/// End-to-end comparison for a TMSV sent through `ch`:
/// the Lindblad density matrix against the normally ordered closed form,
/// its Wigner values against the evolved closed form, and its Fock
/// log-negativity against the analytic one. One report per comparison.
pub fn check_channel_pipeline(r: f64, ch: &ChannelParams, cutoff: usize, steps: usize) -> Result<Vec<CheckReport>> {
    ch.validate()?;
    let lindblad = lindblad_evolve(&tmsv_density(r, cutoff)?, ch, steps)?;
    let params = lambda_params(r, ch)?;
    let closed = gaussian_rho_op(&omega_from_lambda(&params)?, cutoff)?;
    let density_err = lindblad.max_abs_diff(&closed)?;

    let mut wigner_err = 0.0f64;
    for (a1, a2) in pipeline_points() {
        let fock = wigner_point_fock2(&lindblad, a1, a2)?;
        wigner_err = wigner_err.max((fock - evolved_wigner_point(&params, a1, a2)).abs());
    }

    let analytic = en_analytic(r, ch)?;
    let fock_en = log_negativity_fock(&lindblad)?;
    let negativity_err = (fock_en - analytic.e_n).abs();

    let point = json!({ "r": r, "channel": ch });
    let with_meta = |rep: CheckReport| rep.with_cutoff(cutoff).with_steps(steps);
    Ok(vec![
        with_meta(CheckReport::new("channel_pipeline.density", point.clone(), density_err, DENSITY_TOL)),
        with_meta(
            CheckReport::new(
                "channel_pipeline.wigner",
                json!({ "r": r, "channel": ch, "points": PIPELINE_POINTS }),
                wigner_err,
                WIGNER_TOL,
            )
            .with_seed(PIPELINE_POINT_SEED),
        ),
        with_meta(CheckReport::new(
            "channel_pipeline.negativity",
            json!({ "r": r, "channel": ch, "analytic": analytic.e_n, "fock": fock_en }),
            negativity_err,
            NEGATIVITY_TOL,
        )),
    ])
}

/// Gauss–Hermite convolution of the TMSV Wigner function with the channel
/// kernel against the closed-form evolved Wigner function.
pub fn check_wigner_kernel(r: f64, ch: &ChannelParams) -> Result<CheckReport> {
    let params = lambda_params(r, ch)?;
    let mut worst = 0.0f64;
    for (a1, a2) in pipeline_points() {
        let numeric = convolve_wigner(r, ch, a1, a2)?;
        worst = worst.max((numeric - evolved_wigner_point(&params, a1, a2)).abs());
    }
    Ok(CheckReport::new("wigner_kernel", json!({ "r": r, "channel": ch, "points": PIPELINE_POINTS }), worst, KERNEL_TOL)
        .with_seed(PIPELINE_POINT_SEED))
}

/// Trace norm from the symplectic spectrum of the partially transposed
/// covariance: `Π 1/ν̃` over `ν̃ < 1` (vacuum covariance is the identity).
pub fn symplectic_trace_norm(v: &Matrix4<f64>) -> Result<f64> {
    let vt = covariance_pt(v)?;
    let a = vt.fixed_view::<2, 2>(0, 0).determinant();
    let b = vt.fixed_view::<2, 2>(2, 2).determinant();
    let cc = vt.fixed_view::<2, 2>(0, 2).determinant();
    let delta = a + b + 2.0 * cc;
    let det = vt.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let nu_plus = ((delta + disc) / 2.0).sqrt();
    let nu_minus = det.max(0.0).sqrt() / nu_plus;
    Ok([nu_plus, nu_minus].iter().filter(|&&nu| nu < 1.0).map(|nu| 1.0 / nu).product())
}

/// Trace norm of the normally ordered pipeline against the symplectic
/// eigenvalue route on the same covariance matrix.
pub fn check_trace_norm_forms(points: &[(f64, ChannelParams)]) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for (r, ch) in points {
        let report = en_analytic(*r, ch)?;
        let v = covariance_from_lambda(&lambda_params(*r, ch)?)?.cov4()?;
        worst = worst.max((report.trace_norm - symplectic_trace_norm(&v)?).abs());
    }
    let listed: Vec<_> = points.iter().map(|(r, ch)| json!({ "r": r, "channel": ch })).collect();
    Ok(CheckReport::new("trace_norm_forms", json!({ "points": listed }), worst, ALGEBRA_TOL))
}

/// The general pipeline against the ideal, bi-symmetric loss and single-side
/// loss closed forms.
pub fn check_special_cases(r_values: &[f64], transmissivities: &[f64]) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for &r in r_values {
        let ideal = en_analytic(r, &ChannelParams::identity())?.e_n;
        worst = worst.max((ideal - 2.0 * r / std::f64::consts::LN_2).abs());
        for &t in transmissivities {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::invalid(format!("transmissivity must lie in (0, 1], got {t}")));
            }
            let kappa_t = -t.ln() / 2.0;
            let both = en_analytic(r, &ChannelParams::symmetric(kappa_t, 0.0, 1.0)?)?.e_n;
            worst = worst.max((both - en_photon_loss(r, t)?).abs());
            let one = en_analytic(r, &ChannelParams::new(kappa_t, 0.0, 0.0, 0.0, 1.0)?)?.e_n;
            worst = worst.max((one - en_single_side_loss(r, t)?.e_n).abs());
        }
    }
    Ok(CheckReport::new(
        "special_cases",
        json!({ "r": r_values, "transmissivity": transmissivities }),
        worst,
        SPECIAL_CASE_TOL,
    ))
}

/// Bisection on the entangled flag against the closed-form threshold time.
pub fn check_threshold(points: &[(f64, f64, f64)]) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for &(r, kappa, g) in points {
        let closed = threshold_time(r, kappa, g)?;
        let bisected = threshold_time_bisect(r, kappa, g, 1e-12)?;
        worst = worst.max((closed - bisected).abs());
    }
    let listed: Vec<_> = points.iter().map(|&(r, k, g)| json!({ "r": r, "kappa": k, "g": g })).collect();
    Ok(CheckReport::new("threshold", json!({ "points": listed }), worst, THRESHOLD_TOL))
}

/// Fock log-negativity of the ideal TMSV. Exposed for the acceptance runs.
pub fn tmsv_fock_negativity(r: f64, cutoff: usize) -> Result<f64> {
    log_negativity_fock(&tmsv_density(r, cutoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_lemma_passes_and_rejects_small_cutoff() {
        let rep = check_transpose_lemma(1, 5, 12).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(matches!(check_transpose_lemma(1, 5, 11), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn worked_monomial_transposes_exactly() {
        let m = monomials(14, 2).unwrap();
        assert_eq!(m[2][1].transpose(), m[1][2]);
        assert_eq!(m[0][0].transpose(), m[0][0]);
    }

    #[test]
    fn operator_transposes_hold() {
        let rep = check_operator_transposes(30).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn squeezer_check_detects_wrong_angle() {
        assert!(check_pt_squeezer(&[0.1, 0.3], 20).unwrap().pass);
        // a wrong identity must show up as a failure
        let s = squeeze2_op(c(0.3, 0.0), 20).unwrap();
        let pt = partial_transpose(&s, Mode::Second).unwrap();
        let bs = beam_splitter_op(0.3f64.tanh(), 0.0, 20).unwrap();
        assert!(pt.max_abs_diff(&bs).unwrap() > 1e-3);
    }

    #[test]
    fn reflections_and_covariance_small() {
        let ch = ChannelParams::new(0.1, 0.02, 0.05, 0.0, 1.0).unwrap();
        let states = [
            StateSpec::SqueezedThermal { r: 0.25, phi: -0.4, nbar: 0.3 },
            StateSpec::Decohered { r: 0.3, phi: 0.5, channel: ch, steps: 100 },
        ];
        let grid = GridSpec { half_width: 0.8, points: 3 };
        let rep = check_reflections(&states, &grid, 16).unwrap();
        assert!(rep.pass, "{rep:?}");
        let rep = check_covariance(&states, 16).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn covariance_check_is_not_vacuous() {
        // the transposes change the covariance, so agreement tests the sign flips
        let ch = ChannelParams::new(0.1, 0.02, 0.05, 0.0, 1.0).unwrap();
        let two = StateSpec::Decohered { r: 0.3, phi: 0.5, channel: ch, steps: 100 }.build(14).unwrap();
        let v = covariance_fock(&two).unwrap();
        let vt = covariance_fock(&partial_transpose(&two, Mode::Second).unwrap()).unwrap();
        assert!((v - vt).abs().max() > 0.1);
        let one = StateSpec::SqueezedThermal { r: 0.25, phi: -0.4, nbar: 0.3 }.build(14).unwrap();
        let v = covariance_fock_single(&one).unwrap();
        let vt = covariance_fock_single(&transpose_full(&one)).unwrap();
        assert!((v - vt).abs().max() > 0.1);
    }

    #[test]
    fn covariance_rejects_displaced_state() {
        let states = [StateSpec::DisplacedSqueezed { r: 0.2, phi: 0.0, alpha: [0.3, 0.0] }];
        assert!(matches!(check_covariance(&states, 12), Err(Error::UnsupportedState(_))));
    }

    #[test]
    fn positivity_of_transpose() {
        let rep = check_transpose_positivity(3, 6, 10).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn vacuum_is_a_fixed_point_of_loss() {
        let ch = ChannelParams::symmetric(0.2, 0.0, 1.0).unwrap();
        for rep in check_channel_pipeline(0.0, &ch, 14, 200).unwrap() {
            assert!(rep.max_abs_error.is_some_and(|e| e <= 1e-10), "{rep:?}");
        }
    }

    #[test]
    fn ideal_tmsv_pipeline_at_t_zero() {
        let reps = check_channel_pipeline(0.3, &ChannelParams::identity(), 24, 1).unwrap();
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
    }

    #[test]
    fn symplectic_route_matches_pipeline() {
        let points = [
            (0.5, ChannelParams::symmetric(0.1, 0.0, 1.0).unwrap()),
            (0.5, ChannelParams::new(0.15, 0.0, 0.05, 0.02, 2.0).unwrap()),
            (0.8, ChannelParams::symmetric(0.2, 0.05, 3.0).unwrap()),
            (0.5, ChannelParams::symmetric(0.2, 0.05, 10.0).unwrap()),
        ];
        assert!(check_trace_norm_forms(&points).unwrap().pass);
        assert!(check_special_cases(&[0.2, 0.5, 1.0], &[0.2, 0.5, 0.8, 1.0]).unwrap().pass);
    }

    #[test]
    fn threshold_matches() {
        let rep = check_threshold(&[(0.5, 0.2, 0.05)]).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn kernel_convolution_matches() {
        let rep = check_wigner_kernel(0.4, &ChannelParams::new(0.1, 0.05, 0.2, 0.0, 1.5).unwrap()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
