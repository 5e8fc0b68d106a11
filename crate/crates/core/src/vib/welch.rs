use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, round};
use num_complex::Complex64;

use super::fft::{fft_in_place, is_power_of_two};
use crate::error::{out_of_range, Error, Result};

/// One sampled acceleration channel [G].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub channel: String,
    /// Hz
    pub sample_rate: f64,
    pub samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(channel: impl Into<String>, sample_rate: f64, samples: Vec<f64>) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(out_of_range("sample rate", sample_rate));
        }
        if samples.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                got: samples.len(),
            });
        }
        Ok(Self {
            channel: channel.into(),
            sample_rate,
            samples,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    /// Periodic window of length `n`.
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Self::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * cos(2.0 * PI * i as f64 / n as f64))
                .collect(),
            Self::Rectangular => vec![1.0; n],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchConfig {
    /// Samples per segment; a power of two.
    pub segment_length: usize,
    /// Fraction of a segment shared with the next, in `[0, 1)`.
    pub overlap: f64,
    pub window: Window,
}

impl WelchConfig {
    /// Hann, 50 % overlap, and the longest power-of-two segment that still
    /// gives at least eight averages (never below 16 samples).
    pub fn for_length(samples: usize) -> Self {
        let mut seg = 16usize;
        while 9 * (seg * 2) <= 2 * samples {
            seg *= 2;
        }
        Self {
            segment_length: seg,
            overlap: 0.5,
            window: Window::Hann,
        }
    }

    fn hop(&self) -> usize {
        let h = round(self.segment_length as f64 * (1.0 - self.overlap)) as usize;
        h.max(1)
    }

    /// Segments this configuration takes from `samples` points.
    pub fn averages(&self, samples: usize) -> usize {
        if samples < self.segment_length {
            0
        } else {
            (samples - self.segment_length) / self.hop() + 1
        }
    }
}

/// One-sided power spectral density [G²/Hz] on a uniform grid from 0 Hz to
/// Nyquist.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub channel: String,
    pub frequencies: Vec<f64>,
    pub density: Vec<f64>,
    pub averages: usize,
}

impl Psd {
    pub fn resolution(&self) -> f64 {
        if self.frequencies.len() > 1 {
            self.frequencies[1] - self.frequencies[0]
        } else {
            0.0
        }
    }

    /// Rectangle-rule `∫PSD df`, the variance the estimate accounts for.
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.resolution()
    }
}

/// Averaged-periodogram PSD: each segment has its mean removed and is
/// windowed before transforming; density scaling makes `∫PSD df` equal the
/// signal variance.
pub fn estimate_psd(series: &TimeSeries, config: &WelchConfig) -> Result<Psd> {
    let l = config.segment_length;
    if !is_power_of_two(l) || l < 2 {
        return Err(Error::Invalid {
            what: "segment length",
            reason: alloc::format!("{l} is not a power of two >= 2"),
        });
    }
    if !(0.0..1.0).contains(&config.overlap) {
        return Err(out_of_range("overlap", config.overlap));
    }
    let x = &series.samples;
    let segments = config.averages(x.len());
    if segments == 0 {
        return Err(Error::SeriesTooShort {
            needed: l,
            got: x.len(),
        });
    }
    let w = config.window.coefficients(l);
    let w_power: f64 = w.iter().map(|v| v * v).sum();
    let fs = series.sample_rate;
    let bins = l / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    for s in 0..segments {
        let seg = &x[s * config.hop()..s * config.hop() + l];
        let mean = seg.iter().sum::<f64>() / l as f64;
        for (b, (v, wi)) in buf.iter_mut().zip(seg.iter().zip(&w)) {
            *b = Complex64::new((v - mean) * wi, 0.0);
        }
        fft_in_place(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
    }
    let scale = 1.0 / (fs * w_power * segments as f64);
    let density = acc
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let one_sided = if k == 0 || k == l / 2 { 1.0 } else { 2.0 };
            v * scale * one_sided
        })
        .collect();
    Ok(Psd {
        channel: series.channel.clone(),
        frequencies: (0..bins).map(|k| k as f64 * fs / l as f64).collect(),
        density,
        averages: segments,
    })
}
