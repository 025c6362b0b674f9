//! From laboratory setups to model rates, and back to design questions.
//!
//! A levitated nanoparticle coupled to a microcavity by coherent scattering
//! realizes the two-mode model with rates fixed by the tweezers, particle and
//! cavity geometry. This module evaluates those rates, finds the detuning
//! that minimizes the asymptotic variance, and produces stability and
//! squeezing maps plus a cavity-length feasibility sweep.

use serde::{Deserialize, Serialize};

use crate::constants::{SPEED_OF_LIGHT as C, VACUUM_PERMITTIVITY as EPS0};
use crate::dynamics::DriftDiffusion;
use crate::error::Error;
use crate::metrics;
use crate::model::{GaussianState, InitialConditions, SystemParams};
use crate::normalform::{instability_ratio, NormalForm};
use crate::Result;

/// Coherent-scattering setup: tweezers, particle and cavity, all SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup {
    /// Tweezers power (W).
    pub p_t: f64,
    /// Tweezers waist (m).
    pub w_t: f64,
    /// Transverse beam asymmetry factors, in (0, 1].
    pub a_x: f64,
    pub a_y: f64,
    /// Tweezers and cavity wavelengths (m).
    pub lambda_t: f64,
    pub lambda_c: f64,
    /// Particle radius (m); must stay sub-wavelength.
    pub radius: f64,
    /// Relative permittivity of the particle material.
    pub epsilon_rel: f64,
    /// Material density (kg/m^3).
    pub rho_mass: f64,
    /// Cavity length (m).
    pub l_c: f64,
    /// Cavity finesse.
    pub finesse: f64,
}

impl PhysicalSetup {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("p_t", self.p_t),
            ("w_t", self.w_t),
            ("a_x", self.a_x),
            ("a_y", self.a_y),
            ("lambda_t", self.lambda_t),
            ("lambda_c", self.lambda_c),
            ("radius", self.radius),
            ("rho_mass", self.rho_mass),
            ("l_c", self.l_c),
            ("finesse", self.finesse),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.a_x > 1.0 || self.a_y > 1.0 {
            return Err(Error::InvalidParams(format!(
                "asymmetry factors must lie in (0, 1], got a_x = {}, a_y = {}",
                self.a_x, self.a_y
            )));
        }
        if !self.epsilon_rel.is_finite() || self.epsilon_rel <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "relative permittivity must exceed 1, got {}",
                self.epsilon_rel
            )));
        }
        if self.radius >= self.lambda_t {
            return Err(Error::InvalidParams(format!(
                "particle radius {} m is not sub-wavelength (lambda_t = {} m)",
                self.radius, self.lambda_t
            )));
        }
        Ok(())
    }

    /// Silica nanoparticle in a 1064 nm tweezers/cavity system, radius 100 nm,
    /// finesse 1e5, cavity length 300 um.
    pub fn fig3_silica() -> Self {
        PhysicalSetup {
            p_t: 29e-3,
            w_t: 0.7e-6,
            a_x: 0.9,
            a_y: 0.8,
            lambda_t: 1064e-9,
            lambda_c: 1064e-9,
            radius: 100e-9,
            epsilon_rel: 2.1,
            rho_mass: 2200.0,
            l_c: 300e-6,
            finesse: 1e5,
        }
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3)
    }

    pub fn mass(&self) -> f64 {
        self.rho_mass * self.volume()
    }

    /// Polarizability `3 eps0 V (eps - 1)/(eps + 2)`.
    pub fn polarizability(&self) -> f64 {
        3.0 * EPS0 * self.volume() * (self.epsilon_rel - 1.0) / (self.epsilon_rel + 2.0)
    }

    pub fn omega_c(&self) -> f64 {
        2.0 * std::f64::consts::PI * C / self.lambda_c
    }

    pub fn omega_t(&self) -> f64 {
        2.0 * std::f64::consts::PI * C / self.lambda_t
    }
}

/// Model rates derived from a [`PhysicalSetup`], all in rad/s except where noted.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DerivedRates {
    pub omega: f64,
    pub g: f64,
    pub kappa: f64,
    pub gamma_disp: f64,
    /// Particle mass (kg).
    pub mass: f64,
    /// Polarizability (SI).
    pub alpha: f64,
    /// Confocal cavity waist (m).
    pub w_c: f64,
}

/// Evaluates the trap frequency, coupling, cavity decay, and recoil heating
/// rates for a coherent-scattering setup.
pub fn derive_rates(setup: &PhysicalSetup) -> Result<DerivedRates> {
    setup.validate()?;
    let pi = std::f64::consts::PI;
    let m = setup.mass();
    let alpha = setup.polarizability();
    let omega_c = setup.omega_c();
    let omega_t = setup.omega_t();
    let asym = setup.a_y / setup.a_x;
    let w_c = (C * setup.l_c / omega_c).sqrt();

    let omega = 2.0 / (setup.a_y * setup.a_y * setup.w_t * setup.w_t)
        * (setup.p_t * alpha / (pi * EPS0 * C * m) * asym).sqrt();
    let g = 1.0 / (C * w_c)
        * (setup.p_t / (4.0 * C * m * setup.l_c * setup.l_c)
            * asym
            * (alpha * omega_c * omega_c / (pi * EPS0)).powi(3))
        .powf(0.25);
    let kappa = pi * C / (setup.l_c * setup.finesse);
    let gamma_disp = omega_t * omega_t / (30.0 * C.powi(5))
        * (setup.p_t / (C * m) * asym * (alpha * omega_t * omega_t / (pi * EPS0)).powi(3)).sqrt();

    let rates = DerivedRates { omega, g, kappa, gamma_disp, mass: m, alpha, w_c };
    for (name, v) in [("omega", omega), ("g", g), ("kappa", kappa), ("gamma_disp", gamma_disp)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::numeric(format!("derived rate {name} is not positive and finite: {v}")));
        }
    }
    Ok(rates)
}

/// Dimensionless model parameters at a given detuning, in units of the
/// detuning (so `delta = 1` in the result); `unit_scale_hz` records the
/// conversion back to laboratory frequencies.
pub fn model_params(rates: &DerivedRates, delta_rad: f64) -> Result<SystemParams> {
    if !delta_rad.is_finite() || delta_rad <= 0.0 {
        return Err(Error::InvalidParams(format!("detuning must be positive and finite, got {delta_rad}")));
    }
    let mut p = SystemParams::new(
        1.0,
        rates.omega / delta_rad,
        rates.g / delta_rad,
        rates.kappa / delta_rad,
        rates.gamma_disp / delta_rad,
    )?;
    p.unit_scale_hz = Some(delta_rad / (2.0 * std::f64::consts::PI));
    Ok(p)
}

/// Closed-form optimal detuning `g sqrt(kappa/(3 Gamma))`, balancing the
/// cavity-loss and displacement-noise corrections to the asymptotic variance.
pub fn optimal_detuning_approx(g: f64, kappa: f64, gamma_disp: f64) -> Result<f64> {
    if gamma_disp <= 0.0 {
        return Err(Error::regime(
            "design",
            "no finite optimal detuning without displacement noise (the variance is monotone in delta)",
        ));
    }
    Ok(g * (kappa / (3.0 * gamma_disp)).sqrt())
}

/// Which closed-form asymptotic variance to minimize over the detuning.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum DetuningObjective {
    /// Cavity loss plus white displacement noise at rate `gamma_disp`.
    DisplacementNoise { gamma_disp: f64 },
    /// Cavity loss plus a thermal bath with `n_bar_gamma = n_bar * gamma`.
    ThermalBath { n_bar_gamma: f64 },
}

/// Result of the scalar minimization over the detuning.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetuningOptimum {
    /// Minimizer (same units as the input rates).
    pub delta_opt: f64,
    /// Objective (variance) value at the minimizer.
    pub var_at_opt: f64,
    /// Closed-form approximation reported alongside:
    /// `g sqrt(kappa/(3 Gamma))` or `omega kappa/(2 n_bar gamma)`.
    pub approx: Option<f64>,
    /// Set when the minimizer sits at a bracket endpoint (no interior
    /// optimum found; the objective is monotone over the bracket).
    pub at_bracket_edge: bool,
}

fn objective_var(omega: f64, g: f64, kappa: f64, obj: &DetuningObjective, delta: f64) -> f64 {
    let base = omega / (2.0 * delta) * (1.0 + kappa / (4.0 * g) * (delta / omega).sqrt());
    let noise = match obj {
        DetuningObjective::DisplacementNoise { gamma_disp } => {
            omega / (2.0 * delta)
                * gamma_disp * delta * delta / (4.0 * g.powi(3))
                * (delta / omega).sqrt()
        }
        DetuningObjective::ThermalBath { n_bar_gamma } => {
            omega / (2.0 * delta) * n_bar_gamma / (2.0 * g) * (delta / omega).powf(1.5)
        }
    };
    base + noise
}

/// Minimizes the chosen asymptotic variance over the detuning by
/// golden-section search in `log(delta)` on the bracket
/// `[omega, upper]` (default upper `1e6 omega`) to relative tolerance 1e-6.
pub fn optimal_detuning_exact_bracketed(
    omega: f64,
    g: f64,
    kappa: f64,
    obj: DetuningObjective,
    upper: f64,
) -> Result<DetuningOptimum> {
    for (name, v) in [("omega", omega), ("g", g)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
        }
    }
    if kappa < 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidParams(format!("kappa must be non-negative, got {kappa}")));
    }
    if !(upper > omega) {
        return Err(Error::regime("design", format!("empty detuning bracket [{omega}, {upper}]")));
    }
    let f = |x: f64| objective_var(omega, g, kappa, &obj, x.exp());
    let (mut a, mut b) = (omega.ln(), upper.ln());
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // tolerance in log space equals relative tolerance in delta
    while b - a > 1e-6 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let delta_opt = x.exp();
    let var_at_opt = f(x);
    if !var_at_opt.is_finite() {
        return Err(Error::numeric(format!("detuning objective not finite at delta = {delta_opt}")));
    }
    let span = upper.ln() - omega.ln();
    let at_bracket_edge =
        (x - omega.ln()) < 1e-3 * span || (upper.ln() - x) < 1e-3 * span;
    let approx = match obj {
        DetuningObjective::DisplacementNoise { gamma_disp } => {
            optimal_detuning_approx(g, kappa, gamma_disp).ok()
        }
        DetuningObjective::ThermalBath { n_bar_gamma } => {
            (n_bar_gamma > 0.0).then(|| omega * kappa / (2.0 * n_bar_gamma))
        }
    };
    Ok(DetuningOptimum { delta_opt, var_at_opt, approx, at_bracket_edge })
}

/// [`optimal_detuning_exact_bracketed`] with the default bracket `[omega, 1e6 omega]`.
pub fn optimal_detuning_exact(
    omega: f64,
    g: f64,
    kappa: f64,
    obj: DetuningObjective,
) -> Result<DetuningOptimum> {
    optimal_detuning_exact_bracketed(omega, g, kappa, obj, 1e6 * omega)
}

/// One cell of the stability diagram over `(omega/delta, g/delta)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StabilityCell {
    pub omega_over_delta: f64,
    pub g_over_delta: f64,
    pub unstable: bool,
    /// Squeezing timescale `delta/r` (exact `r`), only where unstable.
    pub timescale: Option<f64>,
}

/// Classifies each grid cell as stable/unstable and reports the exact
/// squeezing timescale in the unstable region.
pub fn stability_map(omega_vals: &[f64], g_vals: &[f64]) -> Result<Vec<StabilityCell>> {
    let mut cells = Vec::with_capacity(omega_vals.len() * g_vals.len());
    for &w in omega_vals {
        for &gv in g_vals {
            let p = SystemParams::closed(1.0, w, gv)?;
            let unstable = instability_ratio(&p) > 1.0;
            let timescale = if unstable {
                Some(1.0 / NormalForm::compute(&p)?.r)
            } else {
                None
            };
            cells.push(StabilityCell { omega_over_delta: w, g_over_delta: gv, unstable, timescale });
        }
    }
    Ok(cells)
}

/// One cell of the squeezing map at optimal detuning (rates in units of omega).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SqueezingCell {
    pub kappa_over_omega: f64,
    pub noise_over_omega: f64,
    /// Exact optimal detuning in units of omega, when an unstable detuning exists.
    pub delta_opt_over_omega: Option<f64>,
    /// Asymptotic squeezing in dB at the optimal detuning.
    pub s_db: Option<f64>,
    /// No detuning in the bracket keeps the system unstable.
    pub stable_everywhere: bool,
    /// Optimal detuning below `10 omega`: the far-detuned closed form is
    /// stretched at this cell.
    pub weak_far_detuning: bool,
}

/// Asymptotic squeezing at the optimal detuning over a dissipation grid.
///
/// The detuning bracket is capped at the instability boundary
/// `4 g^2 / omega`, so every reported optimum is in the unstable regime;
/// cells whose entire bracket is stable carry no squeezing value.
pub fn squeezing_map(
    g_over_omega: f64,
    kappa_vals: &[f64],
    noise_vals: &[f64],
    thermal: bool,
) -> Result<Vec<SqueezingCell>> {
    if !g_over_omega.is_finite() || g_over_omega <= 0.0 {
        return Err(Error::InvalidParams(format!("g/omega must be positive, got {g_over_omega}")));
    }
    let omega = 1.0;
    let boundary = 4.0 * g_over_omega * g_over_omega / omega;
    let upper = (1e6 * omega).min(boundary * (1.0 - 1e-3));
    let mut cells = Vec::with_capacity(kappa_vals.len() * noise_vals.len());
    for &kappa in kappa_vals {
        for &noise in noise_vals {
            if kappa < 0.0 || noise < 0.0 {
                return Err(Error::InvalidParams("dissipation rates must be non-negative".into()));
            }
            if upper <= omega {
                cells.push(SqueezingCell {
                    kappa_over_omega: kappa,
                    noise_over_omega: noise,
                    delta_opt_over_omega: None,
                    s_db: None,
                    stable_everywhere: true,
                    weak_far_detuning: false,
                });
                continue;
            }
            let obj = if thermal {
                DetuningObjective::ThermalBath { n_bar_gamma: noise }
            } else {
                DetuningObjective::DisplacementNoise { gamma_disp: noise }
            };
            let opt = optimal_detuning_exact_bracketed(omega, g_over_omega, kappa, obj, upper)?;
            cells.push(SqueezingCell {
                kappa_over_omega: kappa,
                noise_over_omega: noise,
                delta_opt_over_omega: Some(opt.delta_opt),
                s_db: Some(-10.0 * (2.0 * opt.var_at_opt).log10()),
                stable_everywhere: false,
                weak_far_detuning: opt.delta_opt < 10.0 * omega,
            });
        }
    }
    Ok(cells)
}

/// Simulated squeezing for one initial occupation in the feasibility sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityCase {
    pub n_bar_b: f64,
    /// Plateau squeezing from the full simulation, dB.
    pub s_sim_db: Option<f64>,
    /// Extension time (s) at which the position spread reaches a tenth of
    /// the cavity wavelength; `None` if never reached on the simulated window.
    pub t_star_s: Option<f64>,
    pub error: Option<String>,
}

/// One cavity length in the feasibility sweep. Rates in rad/s, times in s.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityPoint {
    pub l_c: f64,
    pub omega: f64,
    pub g: f64,
    pub kappa: f64,
    pub gamma_disp: f64,
    pub delta_opt_approx: f64,
    pub delta_opt_exact: f64,
    pub instability_ratio: f64,
    pub stable: bool,
    /// Closed-form asymptotic squeezing at the exact optimal detuning, dB.
    pub s_analytic_db: f64,
    /// Squeezing-timescale `1/r` (s); only where unstable.
    pub r_inv_s: Option<f64>,
    pub cases: Vec<FeasibilityCase>,
}

/// Sweeps the cavity length: derives rates, optimizes the detuning, and runs
/// the full simulation to the squeezing plateau for each initial occupation.
/// Per-point simulation failures are recorded in the row; the sweep continues.
pub fn feasibility_sweep(
    template: &PhysicalSetup,
    l_c_values: &[f64],
    n_bar_values: &[f64],
) -> Result<Vec<FeasibilityPoint>> {
    if l_c_values.is_empty() {
        return Err(Error::InvalidParams("cavity-length sweep needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(l_c_values.len());
    for &l_c in l_c_values {
        let mut setup = *template;
        setup.l_c = l_c;
        let rates = derive_rates(&setup)?;
        let approx = optimal_detuning_approx(rates.g, rates.kappa, rates.gamma_disp)?;
        let opt = optimal_detuning_exact(
            rates.omega,
            rates.g,
            rates.kappa,
            DetuningObjective::DisplacementNoise { gamma_disp: rates.gamma_disp },
        )?;
        let delta = opt.delta_opt;
        let p = model_params(&rates, delta)?;
        let ratio = instability_ratio(&p);
        let stable = ratio <= 1.0;
        let s_analytic_db = -10.0 * (2.0 * opt.var_at_opt).log10();
        let (r_inv_s, cases) = if stable {
            let cases = n_bar_values
                .iter()
                .map(|&nb| FeasibilityCase {
                    n_bar_b: nb,
                    s_sim_db: None,
                    t_star_s: None,
                    error: Some("stable at optimal detuning; no squeezing dynamics".into()),
                })
                .collect();
            (None, cases)
        } else {
            let nf = NormalForm::compute(&p)?;
            let r_inv_s = Some(1.0 / (nf.r * delta));
            let cases = n_bar_values
                .iter()
                .map(|&nb| simulate_case(&p, &nf, &setup, &rates, delta, nb))
                .collect();
            (r_inv_s, cases)
        };
        rows.push(FeasibilityPoint {
            l_c,
            omega: rates.omega,
            g: rates.g,
            kappa: rates.kappa,
            gamma_disp: rates.gamma_disp,
            delta_opt_approx: approx,
            delta_opt_exact: delta,
            instability_ratio: ratio,
            stable,
            s_analytic_db,
            r_inv_s,
            cases,
        });
    }
    Ok(rows)
}

fn simulate_case(
    p: &SystemParams,
    nf: &NormalForm,
    setup: &PhysicalSetup,
    rates: &DerivedRates,
    delta_rad: f64,
    n_bar_b: f64,
) -> FeasibilityCase {
    let run = || -> Result<(f64, Option<f64>)> {
        let ic = InitialConditions::thermal(n_bar_b)?;
        let s0 = GaussianState::thermal_vacuum(&ic)?;
        let dd = DriftDiffusion::from_params(p);
        let t_end = 8.0 / nf.r;
        let n_points = 240;
        let grid: Vec<f64> =
            (1..=n_points).map(|k| t_end * k as f64 / n_points as f64).collect();
        let traj = crate::dynamics::evolve(&dd, &s0, &grid)?;
        let tail = n_points - n_points / 10;
        let mut sum = 0.0;
        for s in &traj[tail..] {
            sum += metrics::var_min_eigen(s);
        }
        let var = sum / (traj.len() - tail) as f64;
        let t_star = match metrics::extension_time(&traj, &grid, setup, rates.omega, delta_rad)? {
            metrics::ExtensionTime::Crossed(t) => Some(t),
            metrics::ExtensionTime::NeverCrossed => None,
        };
        Ok((-10.0 * (2.0 * var).log10(), t_star))
    };
    match run() {
        Ok((s_db, t_star_s)) => FeasibilityCase {
            n_bar_b,
            s_sim_db: Some(s_db),
            t_star_s,
            error: None,
        },
        Err(e) => FeasibilityCase {
            n_bar_b,
            s_sim_db: None,
            t_star_s: None,
            error: Some(e.to_string()),
        },
    }
}
