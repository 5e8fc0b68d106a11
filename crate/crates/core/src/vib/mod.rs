//! Random-vibration data processing: breakpoint profiles, PSD estimation,
//! response magnification and resonance identification.

mod fft;
mod profile;
mod spectrum;
mod welch;

pub use fft::{fft_in_place, is_power_of_two};
pub use profile::{grms, psd_interp, PsdProfile};
pub use spectrum::{
    first_resonance, min_frequency_check, response_mag, FrequencyCheck, MagSpectrum, PeakRule, Resonance,
    DEFAULT_REFERENCE_FLOOR,
};
pub use welch::{estimate_psd, Psd, TimeSeries, WelchConfig, Window};
