//! Exact first/second-moment dynamics of the linearized master equation.
//!
//! Means obey `d<R>/dt = A <R>` and the symmetrized covariance obeys the
//! Lyapunov equation `dSigma/dt = A Sigma + Sigma A^T + D`. Both are
//! propagated exactly over each output interval with the block
//! (Van Loan) matrix exponential
//! `exp([[ -A, D ], [ 0, A^T ]] dt) = [[ F11, F12 ], [ 0, F22 ]]`,
//! which gives `Phi = F22^T = e^{A dt}` and the process-noise integral
//! `Q = F22^T F12 = int_0^dt e^{A s} D e^{A^T s} ds`.

use nalgebra::{Matrix2, Matrix4, SMatrix};

use crate::error::Error;
use crate::model::{GaussianState, SystemParams, ThermalBathParams};
use crate::Result;

/// Covariance-entry guard: unstable growth goes as `e^{2 r t}`; integration
/// halts with a diagnostic once any entry exceeds this, well before f64
/// overflow. Large enough that the squeezing plateau (reached by `t r ~ 10`
/// even from n_bar_b = 100) is always observable.
pub const COV_GUARD: f64 = 1e15;

/// Drift matrix `A` and diffusion matrix `D` in ordering `(X_a, P_a, X_b, P_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftDiffusion {
    pub a: Matrix4<f64>,
    pub d: Matrix4<f64>,
}

impl DriftDiffusion {
    /// Moment matrices of the displacement-noise master equation:
    /// cavity decay at `kappa` (`d<a^dag a>/dt = -kappa <a^dag a>`) plus white
    /// displacement noise at `gamma_disp` (`d<b^dag b>/dt = gamma_disp`).
    pub fn from_params(p: &SystemParams) -> Self {
        let (delta, omega, g, kappa) = (p.delta, p.omega, p.g, p.kappa);
        let a = Matrix4::new(
            -kappa / 2.0, delta, 0.0, 0.0, //
            -delta, -kappa / 2.0, -2.0 * g, 0.0, //
            0.0, 0.0, 0.0, omega, //
            -2.0 * g, 0.0, -omega, 0.0,
        );
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(
            kappa / 2.0,
            kappa / 2.0,
            0.0,
            2.0 * p.gamma_disp,
        ));
        DriftDiffusion { a, d }
    }

    /// Variant with the standard thermal optomechanical dissipator on the
    /// mechanical mode (decay `gamma`, bath occupation `n_bar`) in place of
    /// nothing: the displacement-noise term of `p` is kept as well.
    pub fn with_thermal_bath(p: &SystemParams, th: &ThermalBathParams) -> Self {
        let mut dd = Self::from_params(p);
        let gamma = th.gamma_thermal;
        dd.a[(2, 2)] -= gamma / 2.0;
        dd.a[(3, 3)] -= gamma / 2.0;
        let diff = gamma * (th.n_bar + 0.5);
        dd.d[(2, 2)] += diff;
        dd.d[(3, 3)] += diff;
        dd
    }
}

/// One exact propagation step: returns `(Phi, Q)` for the interval `dt`.
fn step_matrices(dd: &DriftDiffusion, dt: f64) -> (Matrix4<f64>, Matrix4<f64>) {
    let mut block = SMatrix::<f64, 8, 8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            block[(i, j)] = -dd.a[(i, j)] * dt;
            block[(i, j + 4)] = dd.d[(i, j)] * dt;
            block[(i + 4, j + 4)] = dd.a[(j, i)] * dt;
        }
    }
    let f = block.exp();
    let f22t = f.fixed_view::<4, 4>(4, 4).transpose();
    let q = f22t * f.fixed_view::<4, 4>(0, 4);
    // symmetrize the noise integral against rounding
    let q = (q + q.transpose()) * 0.5;
    (f22t.into_owned(), q)
}

/// Evolves a Gaussian state to each time in `t_grid` (ascending, from `t = 0`).
///
/// The propagation is exact for the linear dynamics: no step-size control is
/// involved. Fails with the time reached if any covariance entry exceeds
/// [`COV_GUARD`].
pub fn evolve(dd: &DriftDiffusion, s0: &GaussianState, t_grid: &[f64]) -> Result<Vec<GaussianState>> {
    let mut prev_t = 0.0;
    for &t in t_grid {
        if !(t >= prev_t) || !t.is_finite() {
            return Err(Error::InvalidParams("t_grid must be finite, ascending and nonnegative".into()));
        }
        prev_t = t;
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut mean = s0.mean;
    let mut cov = s0.cov;
    let mut t_prev = 0.0;
    for &t in t_grid {
        let dt = t - t_prev;
        if dt > 0.0 {
            let (phi, q) = step_matrices(dd, dt);
            mean = phi * mean;
            cov = phi * cov * phi.transpose() + q;
            cov = (cov + cov.transpose()) * 0.5;
        }
        let peak = cov.abs().max();
        if !peak.is_finite() || peak > COV_GUARD {
            return Err(Error::numeric(format!(
                "covariance entry reached {peak:.3e} at t = {t:.6} (unstable growth guard {COV_GUARD:.1e})"
            )));
        }
        out.push(GaussianState { mean, cov });
        t_prev = t;
    }
    Ok(out)
}

/// Rotates the mechanical phase space by `angle` (mean and covariance).
///
/// The rotation maps the position quadrature onto the generalized quadrature
/// `X(angle)`, i.e. it is the free harmonic evolution for `omega * t = angle`.
/// With `angle = theta_sq + pi/2` the rotated position variance equals the
/// minimal variance.
pub fn rotate_mechanical(s: &GaussianState, angle: f64) -> GaussianState {
    let (c, sn) = (angle.cos(), angle.sin());
    let rot2 = Matrix2::new(c, sn, -sn, c);
    let mut r = Matrix4::identity();
    r.fixed_view_mut::<2, 2>(2, 2).copy_from(&rot2);
    GaussianState { mean: r * s.mean, cov: r * s.cov * r.transpose() }
}
