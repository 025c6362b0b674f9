//! Physical constants (SI, CODATA).

/// Speed of light in vacuum [m/s] (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant [J/K] (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
