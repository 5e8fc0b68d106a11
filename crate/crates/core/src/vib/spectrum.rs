use alloc::string::String;
use alloc::vec::Vec;

use libm::{pow, sqrt};

use super::welch::Psd;
use crate::error::{out_of_range, Error, Result};

/// Reference PSD level below which magnification is not computed [G²/Hz].
pub const DEFAULT_REFERENCE_FLOOR: f64 = 1e-8;

/// `√(PSD_channel / PSD_reference)` per bin; `None` where the reference is
/// below the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct MagSpectrum {
    pub channel: String,
    pub reference: String,
    pub frequencies: Vec<f64>,
    pub magnification: Vec<Option<f64>>,
}

pub fn response_mag(channel: &Psd, reference: &Psd, floor: f64) -> Result<MagSpectrum> {
    let same_grid = channel.frequencies.len() == reference.frequencies.len()
        && channel
            .frequencies
            .iter()
            .zip(&reference.frequencies)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
    if !same_grid {
        return Err(Error::GridMismatch);
    }
    let magnification = channel
        .density
        .iter()
        .zip(&reference.density)
        .map(|(&c, &r)| if r < floor { None } else { Some(sqrt(c / r)) })
        .collect();
    Ok(MagSpectrum {
        channel: channel.channel.clone(),
        reference: reference.channel.clone(),
        frequencies: channel.frequencies.clone(),
        magnification,
    })
}

/// Peak acceptance rule: a strict local maximum whose value exceeds `ratio`
/// times the median over `±half_window_octaves` around it.
///
/// The default window is ±1/3 octave. At ±1/6 octave the half-power band of a
/// Q = 10 resonance fills most of the window: an ideal Q = 10 transmissibility
/// peaks at only 1.497 times its ±1/6-octave median and would be missed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakRule {
    pub ratio: f64,
    pub half_window_octaves: f64,
}

impl Default for PeakRule {
    fn default() -> Self {
        Self {
            ratio: 1.5,
            half_window_octaves: 1.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub frequency: f64,
    pub magnification: f64,
    pub bin: usize,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Lowest-frequency peak above `f_min` that satisfies `rule`.
pub fn first_resonance(mag: &MagSpectrum, f_min: f64, rule: &PeakRule) -> Result<Resonance> {
    let m = &mag.magnification;
    let f = &mag.frequencies;
    let span = pow(2.0, rule.half_window_octaves);
    let mut window = Vec::new();
    for i in 1..m.len().saturating_sub(1) {
        if !(f[i] > f_min) {
            continue;
        }
        let (Some(v), Some(l), Some(r)) = (m[i], m[i - 1], m[i + 1]) else {
            continue;
        };
        if !(v > l && v > r) {
            continue;
        }
        let (lo, hi) = (f[i] / span, f[i] * span);
        window.clear();
        window.extend(
            f.iter()
                .zip(m)
                .filter(|(fk, _)| **fk >= lo && **fk <= hi)
                .filter_map(|(_, mk)| *mk),
        );
        if v > rule.ratio * median(&mut window) {
            return Ok(Resonance {
                frequency: f[i],
                magnification: v,
                bin: i,
            });
        }
    }
    Err(Error::NoPeak)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyCheck {
    pub channel: String,
    pub frequency: f64,
    pub pass: bool,
}

/// Each resonance must lie strictly above `limit`.
pub fn min_frequency_check(resonances: &[(String, f64)], limit: f64) -> Result<Vec<FrequencyCheck>> {
    if !(limit > 0.0) {
        return Err(out_of_range("frequency limit", limit));
    }
    Ok(resonances
        .iter()
        .map(|(channel, f)| FrequencyCheck {
            channel: channel.clone(),
            frequency: *f,
            pass: *f > limit,
        })
        .collect())
}
