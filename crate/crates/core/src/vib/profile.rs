use alloc::vec::Vec;

use libm::{exp, log, pow, sqrt};

use crate::error::{Error, Result};

/// Breakpoint PSD specification, straight lines in log-log space.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdProfile {
    /// `(Hz, G²/Hz)`, frequencies strictly increasing.
    breakpoints: Vec<(f64, f64)>,
}

impl PsdProfile {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Invalid {
                what: "PSD profile",
                reason: "needs at least two breakpoints".into(),
            });
        }
        for (i, &(f, p)) in breakpoints.iter().enumerate() {
            if !(f > 0.0 && p > 0.0 && f.is_finite() && p.is_finite()) {
                return Err(Error::Invalid {
                    what: "PSD profile",
                    reason: alloc::format!("breakpoint {i} ({f} Hz, {p} G²/Hz) must be positive"),
                });
            }
            if i > 0 && !(f > breakpoints[i - 1].0) {
                return Err(Error::Invalid {
                    what: "PSD profile",
                    reason: alloc::format!("frequencies must increase strictly (breakpoint {i})"),
                });
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn low(&self) -> f64 {
        self.breakpoints[0].0
    }

    pub fn high(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    /// Profile with every level multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.breakpoints.iter().map(|&(f, p)| (f, p * k)).collect())
    }

    fn check(&self, f: f64) -> Result<()> {
        if !(f >= self.low() && f <= self.high()) {
            return Err(Error::OutsideRange {
                frequency: f,
                low: self.low(),
                high: self.high(),
            });
        }
        Ok(())
    }

    /// Index of the segment containing `f`.
    fn segment(&self, f: f64) -> usize {
        let i = self.breakpoints.partition_point(|&(bf, _)| bf <= f);
        i.clamp(1, self.breakpoints.len() - 1) - 1
    }

    /// Integral of the PSD over `[lo, hi]` [G²].
    pub fn band_power(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check(lo)?;
        self.check(hi)?;
        if hi < lo {
            return Err(Error::Invalid {
                what: "frequency band",
                reason: alloc::format!("upper edge {hi} below lower edge {lo}"),
            });
        }
        let mut total = 0.0;
        let mut i = self.segment(lo);
        let mut a = lo;
        while a < hi && i + 1 < self.breakpoints.len() {
            let (f1, p1) = self.breakpoints[i];
            let (f2, p2) = self.breakpoints[i + 1];
            let b = hi.min(f2);
            if b > a {
                total += segment_integral(f1, p1, f2, p2, a, b);
            }
            a = b;
            i += 1;
        }
        Ok(total)
    }
}

/// `∫_a^b P(f) df` on the log-log line through `(f1, p1)` and `(f2, p2)`.
fn segment_integral(f1: f64, p1: f64, f2: f64, p2: f64, a: f64, b: f64) -> f64 {
    let n = log(p2 / p1) / log(f2 / f1);
    let pa = p1 * pow(a / f1, n);
    if (n + 1.0).abs() < 1e-9 {
        pa * a * log(b / a)
    } else {
        pa * a / (n + 1.0) * (pow(b / a, n + 1.0) - 1.0)
    }
}

/// Profile level at `f` [G²/Hz].
pub fn psd_interp(profile: &PsdProfile, f: f64) -> Result<f64> {
    profile.check(f)?;
    let i = profile.segment(f);
    let (f1, p1) = profile.breakpoints[i];
    let (f2, p2) = profile.breakpoints[i + 1];
    if f == f1 {
        return Ok(p1);
    }
    if f == f2 {
        return Ok(p2);
    }
    let s = log(f / f1) / log(f2 / f1);
    Ok(exp(log(p1) + s * (log(p2) - log(p1))))
}

/// Overall level `√∫PSD df` over `[lo, hi]`.
pub fn grms(profile: &PsdProfile, lo: f64, hi: f64) -> Result<f64> {
    profile.band_power(lo, hi).map(sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn table() -> PsdProfile {
        PsdProfile::new(vec![
            (20.0, 0.01),
            (50.0, 0.01),
            (70.0, 0.0115),
            (120.0, 0.0155),
            (230.0, 0.0155),
        ])
        .unwrap()
    }

    #[test]
    fn exact_at_breakpoints() {
        let p = table();
        for &(f, l) in p.breakpoints() {
            assert_eq!(psd_interp(&p, f).unwrap(), l);
        }
    }

    #[test]
    fn log_midpoint_is_geometric_mean() {
        let f = sqrt(50.0 * 70.0);
        assert_relative_eq!(psd_interp(&table(), f).unwrap(), sqrt(0.01 * 0.0115), epsilon = 1e-15);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(psd_interp(&table(), 10.0), Err(Error::OutsideRange { .. })));
        assert!(grms(&table(), 20.0, 2000.0).is_err());
    }

    #[test]
    fn flat_segments() {
        let flat = PsdProfile::new(vec![(10.0, 1.0), (11.0, 1.0)]).unwrap();
        assert_relative_eq!(grms(&flat, 10.0, 11.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(grms(&table(), 20.0, 50.0).unwrap(), sqrt(0.3), epsilon = 1e-14);
    }

    #[test]
    fn minus_one_slope_uses_logarithm() {
        // P = 10/f between 10 and 100 Hz: ∫ = 10·ln 10
        let p = PsdProfile::new(vec![(10.0, 1.0), (100.0, 0.1)]).unwrap();
        assert_relative_eq!(p.band_power(10.0, 100.0).unwrap(), 10.0 * log(10.0), epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(PsdProfile::new(vec![(20.0, 0.01)]).is_err());
        assert!(PsdProfile::new(vec![(20.0, 0.01), (20.0, 0.02)]).is_err());
        assert!(PsdProfile::new(vec![(20.0, 0.01), (30.0, 0.0)]).is_err());
    }
}
