//! Parameter and state types shared by all other modules.
//!
//! All rates are stored dimensionless, as multiples of a scenario-level
//! reference frequency `unit_scale`. The quadrature ordering is fixed as
//! `(X_a, P_a, X_b, P_b)`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// The five model rates of a scenario, in units of `unit_scale`.
///
/// `delta` is the cavity detuning `omega_c - omega_t` (red-detuned: positive),
/// `omega` the mechanical frequency, `g` the optomechanical coupling,
/// `kappa` the cavity photon loss rate (`d<a^dag a>/dt = -kappa <a^dag a>`),
/// and `gamma_disp` the displacement-noise decoherence rate
/// (`d<b^dag b>/dt = gamma_disp`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub delta: f64,
    pub omega: f64,
    pub g: f64,
    pub kappa: f64,
    pub gamma_disp: f64,
    /// Reference frequency in Hz that the dimensionless rates multiply.
    /// Purely bookkeeping; `None` for fully dimensionless scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_scale_hz: Option<f64>,
}

impl SystemParams {
    pub fn new(delta: f64, omega: f64, g: f64, kappa: f64, gamma_disp: f64) -> Result<Self> {
        let p = SystemParams { delta, omega, g, kappa, gamma_disp, unit_scale_hz: None };
        p.validate_hard()?;
        Ok(p)
    }

    /// Lossless variant (`kappa = gamma_disp = 0`).
    pub fn closed(delta: f64, omega: f64, g: f64) -> Result<Self> {
        Self::new(delta, omega, g, 0.0, 0.0)
    }

    fn validate_hard(&self) -> Result<()> {
        let fields = [
            ("delta", self.delta),
            ("omega", self.omega),
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma_disp", self.gamma_disp),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if self.delta <= 0.0 {
            return Err(Error::InvalidParams("delta must be positive (red-detuned)".into()));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParams("omega must be positive".into()));
        }
        if self.g < 0.0 || self.kappa < 0.0 || self.gamma_disp < 0.0 {
            return Err(Error::InvalidParams("g, kappa, gamma_disp must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Standard thermal optomechanical bath (relevant for clamped oscillators).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalBathParams {
    /// Mechanical energy decay rate.
    pub gamma_thermal: f64,
    /// Bath occupation at the oscillator frequency.
    pub n_bar: f64,
}

impl ThermalBathParams {
    pub fn new(gamma_thermal: f64, n_bar: f64) -> Result<Self> {
        if !gamma_thermal.is_finite() || gamma_thermal < 0.0 {
            return Err(Error::InvalidParams("gamma_thermal must be finite and >= 0".into()));
        }
        if !n_bar.is_finite() || n_bar < 0.0 {
            return Err(Error::InvalidParams("n_bar must be finite and >= 0".into()));
        }
        Ok(ThermalBathParams { gamma_thermal, n_bar })
    }
}

/// Initial state description: cavity in vacuum, mechanics thermal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    /// Initial mechanical mean phonon number.
    pub n_bar_b: f64,
    /// Cavity starts in vacuum (the only case treated here).
    #[serde(default = "default_true")]
    pub cavity_vacuum: bool,
}

fn default_true() -> bool {
    true
}

impl InitialConditions {
    pub fn thermal(n_bar_b: f64) -> Result<Self> {
        if !n_bar_b.is_finite() || n_bar_b < 0.0 {
            return Err(Error::InvalidParams("n_bar_b must be finite and >= 0".into()));
        }
        Ok(InitialConditions { n_bar_b, cavity_vacuum: true })
    }

    pub fn vacuum() -> Self {
        InitialConditions { n_bar_b: 0.0, cavity_vacuum: true }
    }
}

/// Two-mode Gaussian state: quadrature means and symmetrized covariance,
/// ordering `(X_a, P_a, X_b, P_b)`, vacuum diagonal 1/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

/// Symplectic form for the ordering `(X_a, P_a, X_b, P_b)`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o[(0, 1)] = 1.0;
    o[(1, 0)] = -1.0;
    o[(2, 3)] = 1.0;
    o[(3, 2)] = -1.0;
    o
}

impl GaussianState {
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        let scale = cov.abs().max().max(1.0);
        if asym > 1e-9 * scale {
            return Err(Error::NonPhysical(format!("covariance not symmetric (defect {asym:.3e})")));
        }
        Ok(GaussianState { mean, cov })
    }

    /// Thermal-mechanical, vacuum-cavity product state with zero means.
    pub fn thermal_vacuum(ic: &InitialConditions) -> Result<Self> {
        if !ic.n_bar_b.is_finite() || ic.n_bar_b < 0.0 {
            return Err(Error::InvalidParams("n_bar_b must be finite and >= 0".into()));
        }
        let v = ic.n_bar_b + 0.5;
        Ok(GaussianState {
            mean: Vector4::zeros(),
            cov: Matrix4::from_diagonal(&Vector4::new(0.5, 0.5, v, v)),
        })
    }

    /// Mechanical 2x2 covariance block.
    pub fn mechanical_block(&self) -> Matrix2<f64> {
        self.cov.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Smallest eigenvalue of `Sigma + (i/2) Omega_s`. Physical states give a
    /// nonnegative value up to floating-point noise of order `eps * |Sigma|`.
    pub fn physicality_defect(&self) -> f64 {
        let omega = symplectic_form();
        let mut h = Matrix4::<Complex64>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                h[(i, j)] = Complex64::new(self.cov[(i, j)], 0.5 * omega[(i, j)]);
            }
        }
        let eig = nalgebra::SymmetricEigen::new(h);
        eig.eigenvalues.min()
    }

    /// Checks `Sigma + (i/2) Omega_s >= -tol * max(1, |Sigma|) * I`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let scale = self.cov.abs().max().max(1.0);
        self.physicality_defect() >= -tol * scale
    }
}

/// Soft regime diagnostics for the analytic approximations.
///
/// Hard validation (finiteness, sign constraints) lives in the constructors;
/// this reports, as human-readable warnings, violations of the assumptions
/// behind the asymptotic formulas.
pub fn validate_params(p: &SystemParams) -> Vec<String> {
    let mut warnings = Vec::new();
    if p.delta <= 2.0 * p.omega {
        warnings.push(format!(
            "far-detuned assumption weak: delta/omega = {:.3} (asymptotics assume delta >> omega)",
            p.delta / p.omega
        ));
    }
    if p.kappa >= p.delta {
        warnings.push(format!(
            "kappa << delta violated: kappa/delta = {:.3} (normal-mode dissipator derivation invalid)",
            p.kappa / p.delta
        ));
    }
    warnings
}
