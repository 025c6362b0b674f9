//! Reduced description of the unstable mode.
//!
//! Deep in the unstable regime, the dynamics of the second-moment vector of
//! the amplified normal mode `c2` closes on itself: three moments
//! `(<c2^dag c2>, <c2^dag^2>, <c2^2>)` obey a linear ODE with a constant
//! inhomogeneity set by the cavity decay and displacement noise. This module
//! computes those rates from the canonical transformation, solves the ODE in
//! closed form, and maps the result back to mechanical squeezing.

use nalgebra::{Matrix4, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{InitialConditions, SystemParams};
use crate::normalform::{instability_ratio, NormalForm};
use crate::Result;

/// Effective rates driving the unstable-mode moments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReducedRates {
    /// Decay-channel rate `2 kappa |T_12|^2`.
    pub gamma_d: f64,
    /// Amplification-channel rate `2 kappa |T_14|^2`.
    pub gamma_a: f64,
    /// Cross rate `kappa T_12 conj(T_14)` coupling the anomalous moments.
    pub w: Complex64,
    /// Displacement-noise projection `1 - i P_24` onto the unstable mode.
    pub eta: Complex64,
    /// Instability rate `r` (the ODE gain).
    pub r: f64,
    /// Displacement-noise diffusion rate.
    pub gamma_disp: f64,
}

/// Moment vector of the unstable mode: `(n, sd, s)` with
/// `n = <c2^dag c2>`, `sd = <c2^dag^2>`, `s = <c2^2>`.
///
/// Physically `n` is real and `sd = conj(s)`; both are maintained exactly by
/// the closed-form propagator, so `n` is stored real.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReducedMoments {
    pub n: f64,
    pub sd: Complex64,
    pub s: Complex64,
}

/// Computes the reduced-model rates. Requires the unstable regime; the
/// derivation also assumes `kappa << delta` (checked as a warning via
/// [`crate::model::validate_params`], not an error).
pub fn reduced_rates(p: &SystemParams, nf: &NormalForm) -> Result<ReducedRates> {
    if instability_ratio(p) <= 1.0 {
        return Err(Error::regime(
            "reduced",
            format!(
                "reduced model requires the unstable regime; 4g^2/(delta omega) = {:.4}",
                instability_ratio(p)
            ),
        ));
    }
    let t12 = nf.t[(0, 1)];
    let t14 = nf.t[(0, 3)];
    Ok(ReducedRates {
        gamma_d: 2.0 * p.kappa * t12.norm_sqr(),
        gamma_a: 2.0 * p.kappa * t14.norm_sqr(),
        w: p.kappa * t12 * t14.conj(),
        eta: Complex64::new(1.0, -nf.p_24),
        r: nf.r,
        gamma_disp: p.gamma_disp,
    })
}

/// Far-detuned shortcuts for the rates, used as sanity cross-checks:
/// `gamma_d ~ gamma_a ~ 2 kappa g^2/delta^2` and
/// `eta ~ 1 + i sqrt(delta omega)/(4 g)`.
pub fn far_detuned_rates(p: &SystemParams, r: f64) -> ReducedRates {
    let base = 2.0 * p.kappa * p.g * p.g / (p.delta * p.delta);
    ReducedRates {
        gamma_d: base,
        gamma_a: base,
        w: Complex64::new(base, p.kappa * r / (2.0 * p.delta)),
        eta: Complex64::new(1.0, (p.delta * p.omega).sqrt() / (4.0 * p.g)),
        r,
        gamma_disp: p.gamma_disp,
    }
}

/// Initial unstable-mode moments for a cavity-vacuum, mechanically-thermal
/// product state, via congruence of the annihilation-ordered moment matrix
/// `M = <Psi Psi^dag>` with `T^{-1}`.
pub fn initial_moments(nf: &NormalForm, ic: &InitialConditions) -> ReducedMoments {
    let nb = Complex64::new(ic.n_bar_b, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m_psi = Matrix4::from_diagonal(&nalgebra::Vector4::new(one, nb + one, Complex64::new(0.0, 0.0), nb));
    let tinv = nf.t_inverse();
    let m_phi = tinv * m_psi * tinv.adjoint();
    ReducedMoments {
        n: m_phi[(3, 3)].re,
        sd: m_phi[(3, 1)],
        s: m_phi[(1, 3)],
    }
}

/// Inhomogeneity of the moment ODE `dm/dt = B m + v`.
fn drive(rates: &ReducedRates) -> Vector3<Complex64> {
    let r = Complex64::new(rates.r, 0.0);
    let gd = Complex64::new(rates.gamma_disp, 0.0);
    Vector3::new(
        Complex64::new(rates.gamma_a + rates.gamma_disp * rates.eta.norm_sqr(), 0.0),
        r - rates.w - gd * rates.eta * rates.eta,
        r - rates.w.conj() - gd * rates.eta.conj() * rates.eta.conj(),
    )
}

/// Propagates the moments for a time `t` (model units) in closed form.
///
/// The homogeneous part `B = r [[0,1,1],[2,0,0],[2,0,0]]` has eigenvalues
/// `{0, 2r, -2r}` with eigenvectors `(0,1,-1)`, `(1,1,1)`, `(1,-1,-1)`;
/// projecting onto them reduces the ODE to three scalar linear equations.
pub fn evolve_reduced(rates: &ReducedRates, m0: &ReducedMoments, t: f64) -> Result<ReducedMoments> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParams(format!("evolution time must be finite and >= 0, got {t}")));
    }
    let v = drive(rates);
    let m = Vector3::new(Complex64::new(m0.n, 0.0), m0.sd, m0.s);
    // components along (0,1,-1), (1,1,1), (1,-1,-1)
    let project = |x: &Vector3<Complex64>| {
        let a0 = (x[1] - x[2]) / 2.0;
        let diff = (x[1] + x[2]) / 2.0;
        let ap = (x[0] + diff) / 2.0;
        let am = (x[0] - diff) / 2.0;
        (a0, ap, am)
    };
    let (a0, ap, am) = project(&m);
    let (v0, vp, vm) = project(&v);
    let lam = 2.0 * rates.r;
    let propagate = |a: Complex64, vk: Complex64, lam: f64| {
        if lam == 0.0 {
            a + vk * t
        } else {
            let e = (lam * t).exp();
            a * e + vk * (e - 1.0) / lam
        }
    };
    let c0 = propagate(a0, v0, 0.0);
    let cp = propagate(ap, vp, lam);
    let cm = propagate(am, vm, -lam);
    let n = cp + cm;
    if !n.re.is_finite() {
        return Err(Error::numeric(format!("reduced moments overflowed at t = {t}")));
    }
    Ok(ReducedMoments { n: n.re, sd: c0 + cp - cm, s: -c0 + cp - cm })
}

/// Mechanical moments reconstructed from the unstable-mode moments.
///
/// Uses row 2 of `T` (`b` in terms of the normal modes). The spectator mode
/// `c1` stays in its ground state, but its vacuum fluctuations still enter
/// through the commutator constants `|T_23|^2` and `T_21 T_23`.
pub fn mechanical_moments(nf: &NormalForm, m: &ReducedMoments) -> (f64, Complex64) {
    let t21 = nf.t[(1, 0)];
    let t22 = nf.t[(1, 1)];
    let t23 = nf.t[(1, 2)];
    let t24 = nf.t[(1, 3)];
    let n = Complex64::new(m.n, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let bb = Complex64::new(t22.norm_sqr(), 0.0) * n
        + t22.conj() * t24 * m.sd
        + t24.conj() * t22 * m.s
        + Complex64::new(t24.norm_sqr(), 0.0) * (n + one)
        + Complex64::new(t23.norm_sqr(), 0.0);
    let b2 = t22 * t22 * m.s + t22 * t24 * (2.0 * n + one) + t24 * t24 * m.sd + t21 * t23;
    (bb.re, b2)
}

/// Minimal mechanical variance and squeezing angle from the reduced model.
pub fn reduced_var_min(nf: &NormalForm, m: &ReducedMoments) -> (f64, f64) {
    let (n_b, b_sq) = mechanical_moments(nf, m);
    (0.5 + n_b - b_sq.norm(), crate::metrics::wrap_angle(b_sq.arg() / 2.0))
}
