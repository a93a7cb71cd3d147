//! Physical constants in SI units.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Planck mass, kg.
pub const PLANCK_MASS: f64 = 2.176_434e-8;

/// Planck length, m.
pub const PLANCK_LENGTH: f64 = 1.616_255e-35;

/// Largest γ₀ compatible with the electroweak length scale (~1e-18 m).
pub const GAMMA0_ELECTROWEAK_BOUND: f64 = 1e8;

/// Quoted value of √M_Pl·c, used to cross-check the γ₀ → γ conversion.
pub const QUOTED_GAMMA_CONVERSION: f64 = 4.4e4;

/// √M_Pl·c in SI units (γ = γ₀ / this).
pub fn gamma_conversion() -> f64 {
    PLANCK_MASS.sqrt() * SPEED_OF_LIGHT
}
