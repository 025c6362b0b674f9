//! Instability classification and the canonical transformation to the
//! normal form of the unstable regime.
//!
//! In the unstable regime `4 g^2 / (delta * omega) > 1` the quadratic
//! Hamiltonian cannot be diagonalized into bosonic modes; it splits into one
//! harmonic normal mode (frequency `omega1`) and one pure squeezer (rate `r`).
//! The canonical 4x4 transformation `T` relates the ladder-operator vectors
//! `Psi = (a, b, a^dag, b^dag)` and `Phi = (c1, c2, c1^dag, c2^dag)` as
//! `Psi = T Phi`, and satisfies `T^dag I T = T I T^dag = I` with
//! `I = diag(1, 1, -1, -1)`.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::Error;
use crate::model::SystemParams;
use crate::Result;

type CMatrix4 = Matrix4<Complex64>;

/// Instability parameter `4 g^2 / (delta * omega)`; the closed dynamics is
/// unstable iff this exceeds 1.
pub fn instability_ratio(p: &SystemParams) -> f64 {
    4.0 * p.g * p.g / (p.delta * p.omega)
}

/// Normal-form data of an unstable configuration.
#[derive(Debug, Clone)]
pub struct NormalForm {
    /// `zeta`, with `zeta^4 = (delta^2 - omega^2)^2 + 16 delta omega g^2`.
    pub zeta: f64,
    /// Harmonic normal-mode frequency, `omega1^2 = (zeta^2 + delta^2 + omega^2)/2`.
    pub omega1: f64,
    /// Squeezing rate, `r^2 = (zeta^2 - delta^2 - omega^2)/2`.
    pub r: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    /// Canonical transformation `Psi = T Phi` in ladder ordering.
    pub t: CMatrix4,
    /// Element `P_24` of the real block matrix; enters `eta = 1 - i P_24`.
    pub p_24: f64,
}

/// Intermediate scalars, computed in cancellation-free form.
///
/// `zeta^2 - (delta^2 + omega^2)` and `zeta^2 - (delta^2 - omega^2)` are
/// differences of nearly equal numbers close to the stability border; both
/// are rewritten using `zeta^4 - x^2 = (zeta^2 - x)(zeta^2 + x)`:
/// `zeta^2 - (delta^2 + omega^2) = 4 delta omega (4 g^2 - delta omega) / (zeta^2 + delta^2 + omega^2)`
/// and `zeta^2 - (delta^2 - omega^2) = 16 delta omega g^2 / (zeta^2 + delta^2 - omega^2)`.
struct Scalars {
    zeta2: f64,
    omega1: f64,
    r: f64,
    a_plus: f64,
    a_minus: f64,
    b_plus: f64,
    b_minus: f64,
}

fn scalars(p: &SystemParams) -> Result<Scalars> {
    let (d, w, g) = (p.delta, p.omega, p.g);
    let excess = 4.0 * g * g - d * w;
    if excess <= 0.0 {
        return Err(Error::regime(
            "normalform",
            format!(
                "configuration is not unstable: 4g^2/(delta omega) = {:.6} <= 1",
                instability_ratio(p)
            ),
        ));
    }
    let d2 = d * d;
    let w2 = w * w;
    let zeta2 = ((d2 - w2).powi(2) + 16.0 * d * w * g * g).sqrt();
    let r2 = 2.0 * d * w * excess / (zeta2 + d2 + w2);
    let omega1 = (0.5 * (zeta2 + d2 + w2)).sqrt();
    let a_minus2 = 2.0 * w * excess / ((zeta2 + d2 + w2) * d);
    let b_minus2 = 8.0 * w * g * g / ((zeta2 + d2 - w2) * d);
    let a_plus2 = (zeta2 + d2 + w2) / (2.0 * d2);
    let b_plus2 = (zeta2 + d2 - w2) / (2.0 * d2);
    for (name, v) in [("a-", a_minus2), ("b-", b_minus2), ("a+", a_plus2), ("b+", b_plus2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::numeric(format!("radicand of factor {name} is not positive: {v}")));
        }
    }
    Ok(Scalars {
        zeta2,
        omega1,
        r: r2.sqrt(),
        a_plus: a_plus2.sqrt(),
        a_minus: a_minus2.sqrt(),
        b_plus: b_plus2.sqrt(),
        b_minus: b_minus2.sqrt(),
    })
}

/// Real block matrix `P` of the transformation `T = G^dag P G`.
fn p_matrix(p: &SystemParams, s: &Scalars) -> Matrix4<f64> {
    let (d, w, g) = (p.delta, p.omega, p.g);
    let z2 = s.zeta2;
    let z = z2.sqrt();
    let (ap, am, bp, bm) = (s.a_plus, s.a_minus, s.b_plus, s.b_minus);
    Matrix4::new(
        (bp / ap.sqrt()) * (d / z),
        -bm * bm * (d * d / (2.0 * g * w)),
        0.0,
        (1.0 / am) * (g * w / z2),
        //
        (2.0 / (bp * ap.sqrt())) * (g * w / (d * z)),
        1.0,
        0.0,
        (-2.0 / (am * bm * bm)) * (g * w / (d * z)).powi(2),
        //
        0.0,
        (1.0 / am) * (bm * bm * (d * d / (2.0 * g * w)) - 2.0 * g / d),
        (1.0 / ap.powf(1.5)) * (bp * (d / z) + (4.0 / bp) * (g * g * w / (d * d * z))),
        (1.0 / (am * am)) * (g * w / z2 - (4.0 / (bm * bm)) * (g.powi(3) * w * w / (d.powi(3) * z2))),
        //
        0.0,
        am * (d / w),
        (2.0 * ap.sqrt() / bp) * (g / z),
        (2.0 / (bm * bm)) * (g * g * w / (d * z2)),
    )
}

/// Quadrature-to-ladder change of basis `G` (acts blockwise on the two modes).
fn g_matrix() -> CMatrix4 {
    let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    CMatrix4::from_row_slice(&[
        s, z, s, z, //
        z, s, z, s, //
        -i * s, z, i * s, z, //
        z, -i * s, z, i * s,
    ])
}

/// `I = diag(1, 1, -1, -1)`, the metric preserved by canonical transformations
/// in ladder ordering.
pub fn bogoliubov_metric() -> CMatrix4 {
    CMatrix4::from_diagonal(&nalgebra::Vector4::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ))
}

impl NormalForm {
    /// Computes the normal form; errors on stable or boundary configurations.
    pub fn compute(p: &SystemParams) -> Result<Self> {
        let s = scalars(p)?;
        let pm = p_matrix(p, &s);
        let g = g_matrix();
        let pc = pm.map(|x| Complex64::new(x, 0.0));
        let t = g.adjoint() * pc * g;
        Ok(NormalForm {
            zeta: s.zeta2.sqrt(),
            omega1: s.omega1,
            r: s.r,
            a_plus: s.a_plus,
            a_minus: s.a_minus,
            b_plus: s.b_plus,
            b_minus: s.b_minus,
            t,
            p_24: pm[(1, 3)],
        })
    }

    /// Inverse transformation, `Phi = T^{-1} Psi`, via `T^{-1} = I T^dag I`.
    pub fn t_inverse(&self) -> CMatrix4 {
        let i = bogoliubov_metric();
        i * self.t.adjoint() * i
    }

    /// Max elementwise defect of `T^dag I T = I` and `T I T^dag = I`.
    pub fn symplectic_defect(&self) -> f64 {
        let i = bogoliubov_metric();
        let d1 = self.t.adjoint() * i * self.t - i;
        let d2 = self.t * i * self.t.adjoint() - i;
        d1.iter().chain(d2.iter()).map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Far-detuned (`delta >> omega`) approximation of the block matrix `P`.
pub fn far_detuned_p(p: &SystemParams) -> Matrix4<f64> {
    let (d, w, g) = (p.delta, p.omega, p.g);
    let swd = (w / d).sqrt();
    Matrix4::new(
        1.0, -2.0 * g / d, 0.0, 0.5 * swd, //
        0.0, 1.0, 0.0, -(d / (4.0 * g)) * swd, //
        0.0, -(4.0 * g * g / (d * d)) * swd, 1.0, 0.0, //
        0.0, 2.0 * g / (d * w).sqrt(), 2.0 * g / d, 0.5,
    )
}

/// Far-detuned composition of the squeezed mode:
/// `c2 ~ -i g/sqrt(omega delta) [ (b^dag + b) + i sqrt(omega/delta) (a^dag - a) ]`.
///
/// Returns the coefficient of `(b^dag + b)` and of `(a^dag - a)`.
pub fn c2_far_detuned_composition(p: &SystemParams) -> (Complex64, Complex64) {
    let pref = Complex64::new(0.0, -p.g / (p.omega * p.delta).sqrt());
    let mech = pref;
    let cav = pref * Complex64::new(0.0, (p.omega / p.delta).sqrt());
    (mech, cav)
}
