//! Antenna gain patterns, gain/effective-area conversions, and dB
//! utilities.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Gain pattern of a transmit or receive antenna.
///
/// Directions further than 90 degrees off boresight are behind the
/// pattern and carry zero gain for either variant.
#[derive(Debug, Clone, PartialEq)]
pub enum AntennaPattern {
    /// Constant gain over the forward hemisphere. Used when a horn is
    /// operated near boresight and only its peak gain is known.
    IsotropicWithPeak { peak_gain: f64 },
    /// `peak_gain * cos(angle)^exponent` over the forward hemisphere.
    CosinePower { peak_gain: f64, exponent: f64 },
}

impl AntennaPattern {
    pub fn isotropic_with_peak(peak_gain: f64) -> Result<Self> {
        if !(peak_gain > 0.0 && peak_gain.is_finite()) {
            return Err(Error::InvalidInput("peak gain must be positive".into()));
        }
        Ok(Self::IsotropicWithPeak { peak_gain })
    }

    pub fn cosine_power(peak_gain: f64, exponent: f64) -> Result<Self> {
        if !(peak_gain > 0.0 && peak_gain.is_finite()) {
            return Err(Error::InvalidInput("peak gain must be positive".into()));
        }
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidInput(
                "cosine-power exponent must be non-negative".into(),
            ));
        }
        Ok(Self::CosinePower {
            peak_gain,
            exponent,
        })
    }

    /// Peak (boresight) gain, linear.
    pub fn peak_gain(&self) -> f64 {
        match self {
            Self::IsotropicWithPeak { peak_gain } => *peak_gain,
            Self::CosinePower { peak_gain, .. } => *peak_gain,
        }
    }

    /// Linear gain at the given off-boresight angle in radians.
    pub fn gain(&self, off_boresight_rad: f64) -> f64 {
        let angle = off_boresight_rad.abs();
        if angle > FRAC_PI_2 {
            return 0.0;
        }
        match self {
            Self::IsotropicWithPeak { peak_gain } => *peak_gain,
            Self::CosinePower {
                peak_gain,
                exponent,
            } => peak_gain * angle.cos().powf(*exponent),
        }
    }
}

/// Receive-antenna efficiency in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiency(f64);

impl Efficiency {
    pub fn new(eta_r: f64) -> Result<Self> {
        if !(eta_r > 0.0 && eta_r <= 1.0) {
            return Err(Error::InvalidInput("efficiency must lie in (0, 1]".into()));
        }
        Ok(Self(eta_r))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Effective area `g * lambda^2 / (4*pi)` of an aperture with linear gain
/// `g` at wavelength `lambda`.
pub fn area_from_gain(gain: f64, wavelength_m: f64) -> f64 {
    gain * wavelength_m * wavelength_m / (4.0 * PI)
}

/// Effective area of the receive antenna, `g * lambda^2 / (4*pi*eta_r)`.
///
/// The efficiency sits in the denominator, mirroring how it enters the
/// received-power prefactor; a lower efficiency therefore enlarges this
/// quantity rather than shrinking it.
pub fn rx_area_from_gain(gain: f64, wavelength_m: f64, eta: &Efficiency) -> f64 {
    gain * wavelength_m * wavelength_m / (4.0 * PI * eta.value())
}

/// Convert decibels to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a positive linear ratio to decibels.
pub fn linear_to_db(linear: f64) -> Result<f64> {
    if linear.is_nan() || linear <= 0.0 {
        return Err(Error::InvalidInput(
            "only positive ratios have a dB value".into(),
        ));
    }
    Ok(10.0 * linear.log10())
}
