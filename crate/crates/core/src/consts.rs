//! Physical constants (SI unless the name says otherwise).

/// Equatorial Earth radius [km].
pub const EARTH_RADIUS_KM: f64 = 6378.137;

/// Earth gravitational parameter [km³/s²].
pub const EARTH_MU_KM3_S2: f64 = 398_600.441_8;

/// Stefan–Boltzmann constant [W/(m²·K⁴)].
pub const STEFAN_BOLTZMANN: f64 = 5.670374e-8;

/// Standard gravity [m/s²].
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// 0 °C in kelvin.
pub const ZERO_CELSIUS: f64 = 273.15;

/// Solar constant used for power arithmetic [W/m²].
pub const NOMINAL_SOLAR_FLUX: f64 = 1353.0;

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + ZERO_CELSIUS
}

pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - ZERO_CELSIUS
}
