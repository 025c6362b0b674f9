//! Squeezing diagnostics and closed-form asymptotics.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{GaussianState, SystemParams, ThermalBathParams};
use crate::normalform::instability_ratio;
use crate::design::PhysicalSetup;
use crate::Result;

/// Squeezing diagnostics of the mechanical mode.
///
/// `var_min` is the variance of the generalized quadrature at the optimal
/// angle, `var_min = 1/2 + <b^dag b> - |<b^2>|`; squeezing means
/// `var_min < 1/2` and is quantified as `s_db = -10 log10(2 var_min)`.
/// All moments are central (fluctuations about the mean).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub var_min: f64,
    /// Squeezing angle in `[0, pi)`, from `2 theta_sq = arg <b^2>`.
    pub theta_sq: f64,
    pub s_db: f64,
    /// Mechanical fluctuation occupation `<db^dag db>`.
    pub n_b_mean: f64,
    pub b_sq_re: f64,
    pub b_sq_im: f64,
}

/// Maps an angle into `[0, pi)` (quadrature variance is pi-periodic).
pub fn wrap_angle(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut t = theta % pi;
    if t < 0.0 {
        t += pi;
    }
    t
}

/// Computes the squeezing diagnostics from the mechanical covariance block.
pub fn squeezing_report(s: &GaussianState) -> Result<SqueezingReport> {
    let scale = s.cov.abs().max().max(1.0);
    if !s.is_physical(1e-9) {
        return Err(Error::NonPhysical(format!(
            "covariance violates the Heisenberg bound (defect {:.3e}, scale {:.3e})",
            s.physicality_defect(),
            scale
        )));
    }
    let b = s.mechanical_block();
    let n_b = (b[(0, 0)] + b[(1, 1)] - 1.0) / 2.0;
    let b_sq = Complex64::new((b[(0, 0)] - b[(1, 1)]) / 2.0, b[(0, 1)]);
    let var_min = 0.5 + n_b - b_sq.norm();
    let theta_sq = wrap_angle(b_sq.arg() / 2.0);
    Ok(SqueezingReport {
        var_min,
        theta_sq,
        s_db: -10.0 * (2.0 * var_min).log10(),
        n_b_mean: n_b,
        b_sq_re: b_sq.re,
        b_sq_im: b_sq.im,
    })
}

/// Minimal variance as the smallest eigenvalue of the mechanical block — the
/// independent route to `var_min` (the two must agree).
pub fn var_min_eigen(s: &GaussianState) -> f64 {
    let b = s.mechanical_block();
    let eig = nalgebra::SymmetricEigen::new(b);
    eig.eigenvalues.min()
}

/// Lossless asymptote of the minimal variance, `omega / (2 delta)`.
pub fn asymptotic_var_lossless(p: &SystemParams) -> f64 {
    p.omega / (2.0 * p.delta)
}

/// Asymptotic squeezing angle from
/// `exp(2 i theta_sq) ~ -1 + delta omega/(2 g^2) + i sqrt(delta omega)/g`.
pub fn asymptotic_angle(p: &SystemParams) -> f64 {
    let z = Complex64::new(
        -1.0 + p.delta * p.omega / (2.0 * p.g * p.g),
        (p.delta * p.omega).sqrt() / p.g,
    );
    wrap_angle(z.arg() / 2.0)
}

/// Asymptotic minimal variance with cavity loss and displacement noise:
/// `(omega/2 delta) [1 + kappa/(4g) sqrt(delta/omega) + Gamma delta^2/(4 g^3) sqrt(delta/omega)]`.
pub fn asymptotic_var_dissipative(p: &SystemParams) -> f64 {
    let sdo = (p.delta / p.omega).sqrt();
    asymptotic_var_lossless(p)
        * (1.0
            + p.kappa / (4.0 * p.g) * sdo
            + p.gamma_disp * p.delta * p.delta / (4.0 * p.g.powi(3)) * sdo)
}

/// Asymptotic minimal variance with a thermal optomechanical bath:
/// `(omega/2 delta) [1 + kappa/(4g) sqrt(delta/omega) + n_bar gamma/(2g) (delta/omega)^{3/2}]`.
pub fn asymptotic_var_thermal(p: &SystemParams, th: &ThermalBathParams) -> f64 {
    let d_over_o = p.delta / p.omega;
    asymptotic_var_lossless(p)
        * (1.0
            + p.kappa / (4.0 * p.g) * d_over_o.sqrt()
            + th.n_bar * th.gamma_thermal / (2.0 * p.g) * d_over_o.powf(1.5))
}

/// Regime warnings for the asymptotic formulas (unstable + far-detuned).
pub fn asymptotic_regime_warnings(p: &SystemParams) -> Vec<String> {
    let mut w = crate::model::validate_params(p);
    if instability_ratio(p) <= 1.0 {
        w.push(format!(
            "asymptotics assume the unstable regime; 4g^2/(delta omega) = {:.4} <= 1",
            instability_ratio(p)
        ));
    }
    w
}

/// Crossing search outcome for the extension time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtensionTime {
    /// First time (interpolated) at which the position spread reaches the
    /// linearization threshold `0.1 lambda_c`.
    Crossed(f64),
    /// The spread never reached the threshold on the trajectory.
    NeverCrossed,
}

/// Extension time `t*`: first time with
/// `sqrt( hbar/(m omega) * Sigma_XbXb(t) ) = 0.1 lambda_c`.
///
/// `t_grid` is in model units; `unit_scale_rad` converts it to seconds
/// (`t_seconds = t / unit_scale_rad`). The crossing is located by monotone
/// cubic (Fritsch-Carlson) interpolation of the position spread.
pub fn extension_time(
    traj: &[GaussianState],
    t_grid: &[f64],
    setup: &PhysicalSetup,
    omega_rad: f64,
    unit_scale_rad: f64,
) -> Result<ExtensionTime> {
    if traj.len() != t_grid.len() || traj.len() < 2 {
        return Err(Error::InvalidParams("trajectory and time grid must match, length >= 2".into()));
    }
    let mass = setup.mass();
    let x2_scale = crate::constants::HBAR / (mass * omega_rad);
    let threshold = 0.1 * setup.lambda_c;
    let spread: Vec<f64> =
        traj.iter().map(|s| (x2_scale * s.cov[(2, 2)]).sqrt()).collect();
    if spread[0] >= threshold {
        return Ok(ExtensionTime::Crossed(t_grid[0] / unit_scale_rad));
    }
    for k in 1..spread.len() {
        if spread[k] >= threshold {
            let t = monotone_cubic_crossing(t_grid, &spread, k - 1, threshold);
            return Ok(ExtensionTime::Crossed(t / unit_scale_rad));
        }
    }
    Ok(ExtensionTime::NeverCrossed)
}

/// Fritsch-Carlson slopes for monotone cubic interpolation.
fn pchip_slopes(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = (0..n - 1).map(|i| t[i + 1] - t[i]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m
}

/// Locates `f(t) = y` inside grid interval `k` by bisection on the monotone
/// cubic Hermite interpolant.
fn monotone_cubic_crossing(t: &[f64], f: &[f64], k: usize, y: f64) -> f64 {
    let m = pchip_slopes(t, f);
    let (t0, t1) = (t[k], t[k + 1]);
    let h = t1 - t0;
    let eval = |x: f64| {
        let s = (x - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * f[k] + h10 * h * m[k] + h01 * f[k + 1] + h11 * h * m[k + 1]
    };
    let (mut lo, mut hi) = (t0, t1);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Dense grid of the traced-out mechanical Wigner function
/// `W(x, p) = exp(-1/2 d^T Sigma_b^{-1} d) / (2 pi sqrt(det Sigma_b))`.
pub fn wigner_grid(
    s: &GaussianState,
    x_range: (f64, f64),
    p_range: (f64, f64),
    nx: usize,
    np: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    if nx < 2 || np < 2 {
        return Err(Error::InvalidParams("wigner grid needs at least 2 points per axis".into()));
    }
    let b = s.mechanical_block();
    let det = b.determinant();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::NonPhysical(format!("singular mechanical covariance (det {det:.3e})")));
    }
    let inv = Matrix2::new(b[(1, 1)], -b[(0, 1)], -b[(1, 0)], b[(0, 0)]) / det;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let (mx, mp) = (s.mean[2], s.mean[3]);
    let mut out = Vec::with_capacity(nx * np);
    for i in 0..nx {
        let x = x_range.0 + (x_range.1 - x_range.0) * i as f64 / (nx - 1) as f64;
        for j in 0..np {
            let p = p_range.0 + (p_range.1 - p_range.0) * j as f64 / (np - 1) as f64;
            let dx = x - mx;
            let dp = p - mp;
            let quad = inv[(0, 0)] * dx * dx + 2.0 * inv[(0, 1)] * dx * dp + inv[(1, 1)] * dp * dp;
            out.push((x, p, norm * (-0.5 * quad).exp()));
        }
    }
    Ok(out)
}
