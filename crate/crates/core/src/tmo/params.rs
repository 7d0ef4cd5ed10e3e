use crate::error::{Error, Result};
use crate::raster::Plane;

/// Smallest floor ever applied before the logarithm.
pub const MIN_LOG_FLOOR: f64 = 1e-12;

/// Floor applied to luminance before taking its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogFloor {
    /// Fraction of the image's maximum luminance, never below [`MIN_LOG_FLOOR`].
    Relative(f64),
    /// Fixed floor in linear luminance units.
    Absolute(f64),
}

impl Default for LogFloor {
    fn default() -> Self {
        LogFloor::Relative(1e-6)
    }
}

impl LogFloor {
    /// The floor for a given luminance raster.
    pub fn resolve(&self, luminance: &Plane) -> f64 {
        match *self {
            LogFloor::Absolute(v) => v,
            LogFloor::Relative(f) => {
                let max = luminance.as_slice().iter().copied().fold(0.0, f64::max);
                (f * max).max(MIN_LOG_FLOOR)
            }
        }
    }
}

/// Operator parameters.
///
/// Defaults: 5 bins, 5 scales, `epsilon = 0.1`, `sat = 0.6`, display range
/// `[0, 1]`, gamma 1, scene-relative log floor of `1e-6 * max(L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmoParams {
    /// Histogram bin count `n`.
    pub bins: usize,
    /// Number of receptive fields `s`.
    pub scales: usize,
    /// Variance regularizer in log-luminance units.
    pub epsilon: f64,
    /// Color saturation exponent.
    pub sat: f64,
    pub display_min: f64,
    pub display_max: f64,
    pub log_floor: LogFloor,
    /// Display gamma applied at 8-bit quantization.
    pub gamma: f64,
}

impl Default for TmoParams {
    fn default() -> Self {
        Self {
            bins: 5,
            scales: 5,
            epsilon: 0.1,
            sat: 0.6,
            display_min: 0.0,
            display_max: 1.0,
            log_floor: LogFloor::default(),
            gamma: 1.0,
        }
    }
}

impl TmoParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Parameter(msg));
        if self.bins < 2 || self.bins > crate::integral::MAX_BINS {
            return fail(format!(
                "bin count must be in 2..={}, got {}",
                crate::integral::MAX_BINS,
                self.bins
            ));
        }
        if self.scales < 1 {
            return fail("scale count must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.sat > 0.0 && self.sat <= 1.0) {
            return fail(format!("sat must be in (0, 1], got {}", self.sat));
        }
        if !(self.display_min.is_finite() && self.display_max.is_finite())
            || self.display_min < 0.0
            || self.display_min >= self.display_max
        {
            return fail(format!(
                "display range must satisfy 0 <= min < max, got [{}, {}]",
                self.display_min, self.display_max
            ));
        }
        match self.log_floor {
            LogFloor::Absolute(v) | LogFloor::Relative(v) if !(v > 0.0 && v.is_finite()) => {
                return fail(format!("log floor must be positive, got {v}"));
            }
            _ => {}
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = TmoParams::default();
        assert_eq!((p.bins, p.scales, p.epsilon, p.sat), (5, 5, 0.1, 0.6));
        p.validate().unwrap();
    }

    #[test]
    fn invalid_params() {
        let base = TmoParams::default();
        let cases = [
            TmoParams { bins: 1, ..base },
            TmoParams { scales: 0, ..base },
            TmoParams { epsilon: 0.0, ..base },
            TmoParams { sat: 0.0, ..base },
            TmoParams { sat: 1.5, ..base },
            TmoParams { display_min: 1.0, display_max: 1.0, ..base },
            TmoParams { display_min: -0.5, ..base },
            TmoParams { log_floor: LogFloor::Absolute(0.0), ..base },
            TmoParams { log_floor: LogFloor::Relative(-1.0), ..base },
            TmoParams { gamma: 0.0, ..base },
        ];
        for p in cases {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn floor_resolution() {
        let lum = Plane::from_rows(&[vec![0.0, 2.0, 4.0]]).unwrap();
        assert_eq!(LogFloor::Relative(1e-6).resolve(&lum), 4e-6);
        assert_eq!(LogFloor::Absolute(0.5).resolve(&lum), 0.5);
        let black = Plane::filled(2, 2, 0.0).unwrap();
        assert_eq!(LogFloor::Relative(1e-6).resolve(&black), MIN_LOG_FLOOR);
    }
}
