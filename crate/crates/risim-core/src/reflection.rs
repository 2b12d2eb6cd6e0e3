//! Angle-dependent scattering behaviour of a single surface element:
//! radar cross section, reflection phase for the two control states, and
//! least-squares fitting of the model constants from sampled data.
//!
//! The radar cross section follows a sinc-squared aperture term plus a
//! constant floor:
//!
//! ```text
//! sigma(theta) = 4*pi*A^2/lambda^2 * [sin(k*sqrt(A)*sin(theta)) / (k*sqrt(A)*sin(theta))]^2 + c
//! ```
//!
//! and the reflection phase is a cosine law `a*cos(theta) + b`, with the
//! second control state offset by a fixed phase delta (nominally 180
//! degrees for a two-state element).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::wrap_to_2pi;

/// Nominal phase difference between the two control states.
pub const DEFAULT_STATE_PHASE_DELTA_RAD: f64 = PI;

/// Constants of the element scattering model.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionParams {
    /// Geometric area of one element in m² (pitch product `dx*dy`).
    pub element_area_m2: f64,
    /// Carrier wavelength in metres.
    pub wavelength_m: f64,
    /// Constant floor of the radar cross section in m².
    pub rcs_floor_m2: f64,
    /// Amplitude of the cosine phase law, radians.
    pub phase_amplitude_rad: f64,
    /// Offset of the cosine phase law, radians.
    pub phase_offset_rad: f64,
    /// Additional phase of control state 1 relative to state 0, radians.
    pub state_phase_delta_rad: f64,
}

impl ReflectionParams {
    pub fn new(
        element_area_m2: f64,
        wavelength_m: f64,
        rcs_floor_m2: f64,
        phase_amplitude_rad: f64,
        phase_offset_rad: f64,
        state_phase_delta_rad: f64,
    ) -> Result<Self> {
        let params = Self {
            element_area_m2,
            wavelength_m,
            rcs_floor_m2,
            phase_amplitude_rad,
            phase_offset_rad,
            state_phase_delta_rad,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.element_area_m2 > 0.0 && self.element_area_m2.is_finite()) {
            return Err(Error::InvalidInput("element area must be positive".into()));
        }
        if !(self.wavelength_m > 0.0 && self.wavelength_m.is_finite()) {
            return Err(Error::InvalidInput("wavelength must be positive".into()));
        }
        if !(self.rcs_floor_m2 >= 0.0 && self.rcs_floor_m2.is_finite()) {
            return Err(Error::InvalidInput("rcs floor must be non-negative".into()));
        }
        for v in [
            self.phase_amplitude_rad,
            self.phase_offset_rad,
            self.state_phase_delta_rad,
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidInput("phase constants must be finite".into()));
            }
        }
        // The cross section must stay positive over the forward angles:
        // either the floor is positive or the sinc term has no null
        // before grazing incidence.
        let k = 2.0 * PI / self.wavelength_m;
        if self.rcs_floor_m2 == 0.0 && k * self.element_area_m2.sqrt() >= PI {
            return Err(Error::InvalidInput(
                "zero rcs floor with an aperture null inside the forward angles".into(),
            ));
        }
        Ok(())
    }
}

/// One measured or synthesised sample of the element response at a given
/// reflection zenith angle. At least one of the two observables must be
/// present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSample {
    pub theta_r_rad: f64,
    pub sigma_m2: Option<f64>,
    pub phase_rad: Option<f64>,
}

/// Sinc-squared aperture term of the cross-section model, without the
/// constant floor.
fn rcs_aperture_term(theta_r_rad: f64, element_area_m2: f64, wavelength_m: f64) -> f64 {
    let k = 2.0 * PI / wavelength_m;
    let x = k * element_area_m2.sqrt() * theta_r_rad.sin();
    let ratio = if x == 0.0 { 1.0 } else { x.sin() / x };
    4.0 * PI * element_area_m2 * element_area_m2 / (wavelength_m * wavelength_m) * ratio * ratio
}

/// Radar cross section of one element at reflection zenith angle
/// `theta_r_rad`, in m². Even in the angle; the aperture term is taken as
/// its analytic limit 1 at exactly zero.
pub fn rcs(theta_r_rad: f64, params: &ReflectionParams) -> f64 {
    rcs_aperture_term(theta_r_rad, params.element_area_m2, params.wavelength_m)
        + params.rcs_floor_m2
}

/// Reflection phase of one element in control state `state` (0 or 1; any
/// non-zero value counts as state 1). Returned wrapped into `[0, 2*pi)`.
pub fn phase_shift(theta_r_rad: f64, state: u8, params: &ReflectionParams) -> f64 {
    let base = params.phase_amplitude_rad * theta_r_rad.cos() + params.phase_offset_rad;
    let with_state = if state == 0 {
        base
    } else {
        base + params.state_phase_delta_rad
    };
    wrap_to_2pi(with_state)
}

/// Complex reflection coefficient of one element together with a flag
/// noting whether the amplitude had to be clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficient {
    pub value: Complex64,
    /// True when the cross-section inversion exceeded unit amplitude and
    /// was clamped to 1; a passive element cannot amplify.
    pub amplitude_clamped: bool,
}

impl ReflectionCoefficient {
    pub fn amplitude(&self) -> f64 {
        self.value.norm()
    }

    pub fn phase_rad(&self) -> f64 {
        wrap_to_2pi(self.value.arg())
    }
}

/// Reflection coefficient from the cross section and the two effective
/// areas it couples: amplitude `sigma / sqrt(ae_t * ae_r)` (clamped to 1)
/// and phase from the cosine law for the given state.
pub fn reflection_coefficient(
    theta_r_rad: f64,
    state: u8,
    params: &ReflectionParams,
    ae_t_m2: f64,
    ae_r_m2: f64,
) -> Result<ReflectionCoefficient> {
    if ae_t_m2.is_nan() || ae_r_m2.is_nan() || ae_t_m2 <= 0.0 || ae_r_m2 <= 0.0 {
        return Err(Error::InvalidInput(
            "effective areas must be positive".into(),
        ));
    }
    let raw = rcs(theta_r_rad, params) / (ae_t_m2 * ae_r_m2).sqrt();
    let amplitude_clamped = raw > 1.0;
    let mu = if amplitude_clamped { 1.0 } else { raw };
    let phase = phase_shift(theta_r_rad, state, params);
    Ok(ReflectionCoefficient {
        value: Complex64::from_polar(mu, phase),
        amplitude_clamped,
    })
}

/// Result of fitting the cross-section floor constant.
#[derive(Debug, Clone)]
pub struct RcsFloorFit {
    /// Least-squares estimate of the floor in m².
    pub c_m2: f64,
    /// Per-sample residuals `sigma_i - model(theta_i)`.
    pub residuals: Vec<f64>,
    pub rmse: f64,
}

/// Least-squares estimate of the cross-section floor from samples with a
/// `sigma_m2` observation, holding the aperture term fixed. With only the
/// constant free, the estimate is the mean of the per-sample excess over
/// the aperture term.
pub fn fit_rcs_floor(
    samples: &[ReflectionSample],
    element_area_m2: f64,
    wavelength_m: f64,
) -> Result<RcsFloorFit> {
    if !(element_area_m2 > 0.0 && wavelength_m > 0.0) {
        return Err(Error::InvalidInput(
            "element area and wavelength must be positive".into(),
        ));
    }
    let observed: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| s.sigma_m2.map(|sigma| (s.theta_r_rad, sigma)))
        .collect();
    if observed.is_empty() {
        return Err(Error::InvalidInput(
            "no samples carry a cross-section value".into(),
        ));
    }
    let mut acc = crate::util::CompensatedSum::new();
    for &(theta, sigma) in &observed {
        acc.add(sigma - rcs_aperture_term(theta, element_area_m2, wavelength_m));
    }
    let c = acc.value() / observed.len() as f64;
    let residuals: Vec<f64> = observed
        .iter()
        .map(|&(theta, sigma)| {
            sigma - (rcs_aperture_term(theta, element_area_m2, wavelength_m) + c)
        })
        .collect();
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(RcsFloorFit {
        c_m2: c,
        residuals,
        rmse,
    })
}

/// Result of fitting the cosine phase law.
#[derive(Debug, Clone)]
pub struct PhaseFit {
    /// Amplitude of the cosine term, radians.
    pub amplitude_rad: f64,
    /// Constant offset, radians.
    pub offset_rad: f64,
    pub residuals: Vec<f64>,
    pub rmse: f64,
}

/// Linear least squares of sampled phases on the basis `{cos(theta), 1}`.
///
/// Samples must carry phases from a single 2*pi branch: a jump larger
/// than pi between neighbouring samples (ordered by `cos(theta)`) is
/// rejected rather than unwrapped, since the fit cannot distinguish a
/// wrap from a genuine discontinuity.
pub fn fit_phase(samples: &[ReflectionSample]) -> Result<PhaseFit> {
    let mut observed: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| s.phase_rad.map(|phase| (s.theta_r_rad.cos(), phase)))
        .collect();
    if observed.len() < 2 {
        return Err(Error::InvalidInput(
            "phase fitting needs at least two samples with a phase value".into(),
        ));
    }
    observed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for pair in observed.windows(2) {
        if (pair[1].1 - pair[0].1).abs() > PI {
            return Err(Error::InvalidInput(
                "phase samples span more than one 2*pi branch; unwrap them first".into(),
            ));
        }
    }

    let n = observed.len() as f64;
    let sum_x: f64 = observed.iter().map(|&(c, _)| c).sum();
    let sum_xx: f64 = observed.iter().map(|&(c, _)| c * c).sum();
    let sum_y: f64 = observed.iter().map(|&(_, p)| p).sum();
    let sum_xy: f64 = observed.iter().map(|&(c, p)| c * p).sum();

    let denom = n * sum_xx - sum_x * sum_x;
    if denom <= f64::EPSILON * n * sum_xx.max(1e-300) {
        return Err(Error::RankDeficient(
            "all samples share the same cos(theta); slope is unobservable".into(),
        ));
    }
    let amplitude = (n * sum_xy - sum_x * sum_y) / denom;
    let offset = (sum_y - amplitude * sum_x) / n;

    let residuals: Vec<f64> = observed
        .iter()
        .map(|&(c, p)| p - (amplitude * c + offset))
        .collect();
    let rmse = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(PhaseFit {
        amplitude_rad: amplitude,
        offset_rad: offset,
        residuals,
        rmse,
    })
}

/// Expected header of a reflection-sample CSV file.
pub const SAMPLE_CSV_HEADER: &str = "theta_deg,sigma_m2,phase_deg";

/// Parse reflection samples from CSV text with columns
/// `theta_deg,sigma_m2,phase_deg`. An empty field means the observable is
/// absent; each row must carry at least one of the two.
pub fn samples_from_csv(text: &str) -> Result<Vec<ReflectionSample>> {
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line.trim(),
        None => return Err(Error::Parse("empty sample file".into())),
    };
    if header != SAMPLE_CSV_HEADER {
        return Err(Error::Parse(format!(
            "expected header `{SAMPLE_CSV_HEADER}`, found `{header}`"
        )));
    }

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "line {}: expected 3 comma-separated fields",
                idx + 1
            )));
        }
        let theta_deg: f64 = fields[0].parse().map_err(|_| {
            Error::Parse(format!("line {}: bad theta_deg `{}`", idx + 1, fields[0]))
        })?;
        let parse_opt = |field: &str, name: &str| -> Result<Option<f64>> {
            if field.is_empty() {
                Ok(None)
            } else {
                field
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("line {}: bad {name} `{field}`", idx + 1)))
            }
        };
        let sigma = parse_opt(fields[1], "sigma_m2")?;
        let phase_deg = parse_opt(fields[2], "phase_deg")?;
        if sigma.is_none() && phase_deg.is_none() {
            return Err(Error::Parse(format!(
                "line {}: row carries neither sigma_m2 nor phase_deg",
                idx + 1
            )));
        }
        if !(0.0..=90.0).contains(&theta_deg) {
            return Err(Error::Parse(format!(
                "line {}: theta_deg must lie in [0, 90]",
                idx + 1
            )));
        }
        let theta = theta_deg.to_radians();
        samples.push(ReflectionSample {
            theta_r_rad: theta,
            sigma_m2: sigma,
            phase_rad: phase_deg.map(f64::to_radians),
        });
    }
    Ok(samples)
}

/// Read reflection samples from a CSV file on disk.
pub fn read_samples_csv(path: &std::path::Path) -> Result<Vec<ReflectionSample>> {
    let text = std::fs::read_to_string(path)?;
    samples_from_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn fig2_params() -> ReflectionParams {
        let lambda = crate::SPEED_OF_LIGHT_M_S / 5.8e9;
        ReflectionParams::new(
            0.0143 * 0.01027,
            lambda,
            1.42e-5,
            90f64.to_radians(),
            180f64.to_radians(),
            DEFAULT_STATE_PHASE_DELTA_RAD,
        )
        .unwrap()
    }

    /// Direct evaluation of the cross-section model, kept independent of
    /// the implementation above.
    fn rcs_oracle(theta: f64, area: f64, lambda: f64, floor: f64) -> f64 {
        let k = 2.0 * PI / lambda;
        let x = k * area.sqrt() * theta.sin();
        let ratio = if x.abs() < 1e-300 { 1.0 } else { x.sin() / x };
        4.0 * PI * area.powi(2) / lambda.powi(2) * ratio.powi(2) + floor
    }

    #[test]
    fn rcs_anchor_values() {
        let p = fig2_params();
        let at0 = rcs(0.0, &p);
        assert!((at0 - 1.1565e-4).abs() <= 1e-8, "rcs(0) = {at0}");
        let at30 = rcs(30f64.to_radians(), &p);
        assert!((at30 - 9.85e-5).abs() <= 1e-7, "rcs(30 deg) = {at30}");

        for deg in [0.0, 10.0, 30.0, 45.0, 60.0, 80.0] {
            let theta = f64::to_radians(deg);
            let expected = rcs_oracle(theta, p.element_area_m2, p.wavelength_m, p.rcs_floor_m2);
            assert!((rcs(theta, &p) - expected).abs() <= 1e-15 * expected.max(1e-30));
        }
    }

    #[test]
    fn rcs_is_continuous_at_zero() {
        let p = fig2_params();
        let at0 = rcs(0.0, &p);
        assert!((rcs(1e-9, &p) - at0).abs() <= 1e-12 * at0);
    }

    #[test]
    fn rcs_never_drops_below_floor_and_is_even() {
        let p = fig2_params();
        for i in 0..=89 {
            let theta = (i as f64).to_radians();
            assert!(rcs(theta, &p) >= p.rcs_floor_m2);
            assert_eq!(rcs(theta, &p), rcs(-theta, &p));
        }
    }

    #[test]
    fn rcs_approaches_floor_for_vanishing_area() {
        let lambda = 0.05;
        let tiny = ReflectionParams::new(1e-30, lambda, 1.42e-5, 0.0, 0.0, PI).unwrap();
        assert!((rcs(0.3, &tiny) - 1.42e-5).abs() <= 1e-20);
    }

    #[test]
    fn phase_shift_anchor_values() {
        let p = fig2_params();
        let deg = |x: f64| x.to_degrees();
        assert!((deg(phase_shift(0.0, 0, &p)) - 270.0).abs() <= 1e-10);
        assert!((deg(phase_shift(90f64.to_radians(), 0, &p)) - 180.0).abs() <= 1e-10);
        assert!((deg(phase_shift(0.0, 1, &p)) - 90.0).abs() <= 1e-10);
    }

    #[test]
    fn state_delta_is_constant_over_angles() {
        let p = fig2_params();
        for i in 0..=90 {
            let theta = (i as f64).to_radians();
            let diff =
                crate::util::wrap_to_2pi(phase_shift(theta, 1, &p) - phase_shift(theta, 0, &p));
            assert!((diff - p.state_phase_delta_rad).abs() <= 1e-10);
        }
    }

    #[test]
    fn coefficient_amplitude_inverts_cross_section() {
        let p = fig2_params();
        let theta = 20f64.to_radians();
        let ae = p.element_area_m2 * theta.cos();
        let gamma = reflection_coefficient(theta, 0, &p, p.element_area_m2, ae).unwrap();
        assert!(!gamma.amplitude_clamped);
        let recovered = gamma.amplitude() * (p.element_area_m2 * ae).sqrt();
        assert!((recovered - rcs(theta, &p)).abs() <= 1e-15);
    }

    #[test]
    fn coefficient_with_matched_areas_has_unit_amplitude() {
        let p = fig2_params();
        let sigma0 = rcs(0.0, &p);
        let gamma = reflection_coefficient(0.0, 0, &p, sigma0, sigma0).unwrap();
        assert!((gamma.amplitude() - 1.0).abs() <= 1e-12);
        let expected_phase = p.phase_amplitude_rad + p.phase_offset_rad;
        assert!((gamma.phase_rad() - wrap_to_2pi(expected_phase)).abs() <= 1e-12);
    }

    #[test]
    fn state_flip_changes_phase_only() {
        let p = fig2_params();
        let theta = 35f64.to_radians();
        let ae = p.element_area_m2;
        let g0 = reflection_coefficient(theta, 0, &p, ae, ae).unwrap();
        let g1 = reflection_coefficient(theta, 1, &p, ae, ae).unwrap();
        assert!((g0.amplitude() - g1.amplitude()).abs() <= 1e-15);
        let diff = crate::util::wrap_to_2pi(g1.phase_rad() - g0.phase_rad());
        assert!((diff - p.state_phase_delta_rad).abs() <= 1e-10);
    }

    #[test]
    fn amplitude_clamps_when_areas_are_small() {
        let p = fig2_params();
        let tiny = 1e-9;
        let gamma = reflection_coefficient(0.0, 0, &p, tiny, tiny).unwrap();
        assert!(gamma.amplitude_clamped);
        assert!((gamma.amplitude() - 1.0).abs() <= 1e-15);
        assert!(reflection_coefficient(0.0, 0, &p, 0.0, 1.0).is_err());
    }

    fn synth_samples(p: &ReflectionParams, degrees: &[f64]) -> Vec<ReflectionSample> {
        degrees
            .iter()
            .map(|&deg| {
                let theta = deg.to_radians();
                ReflectionSample {
                    theta_r_rad: theta,
                    sigma_m2: Some(rcs(theta, p)),
                    phase_rad: Some(p.phase_amplitude_rad * theta.cos() + p.phase_offset_rad),
                }
            })
            .collect()
    }

    const FIT_ANGLES: [f64; 9] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0];

    #[test]
    fn floor_fit_recovers_generating_constant() {
        let p = fig2_params();
        let samples = synth_samples(&p, &FIT_ANGLES);
        let fit = fit_rcs_floor(&samples, p.element_area_m2, p.wavelength_m).unwrap();
        assert!((fit.c_m2 - p.rcs_floor_m2).abs() <= 1e-12 * p.rcs_floor_m2);
        assert!(fit.rmse <= 1e-18);
    }

    #[test]
    fn floor_fit_single_sample_closed_form() {
        let p = fig2_params();
        let sigma0 = rcs(0.0, &p);
        let sample = ReflectionSample {
            theta_r_rad: 0.0,
            sigma_m2: Some(sigma0),
            phase_rad: None,
        };
        let fit = fit_rcs_floor(&[sample], p.element_area_m2, p.wavelength_m).unwrap();
        let aperture = 4.0 * PI * p.element_area_m2.powi(2) / p.wavelength_m.powi(2);
        assert!((fit.c_m2 - (sigma0 - aperture)).abs() <= 1e-20);
    }

    #[test]
    fn floor_fit_rejects_empty_input() {
        let p = fig2_params();
        assert!(fit_rcs_floor(&[], p.element_area_m2, p.wavelength_m).is_err());
        let phase_only = ReflectionSample {
            theta_r_rad: 0.1,
            sigma_m2: None,
            phase_rad: Some(1.0),
        };
        assert!(fit_rcs_floor(&[phase_only], p.element_area_m2, p.wavelength_m).is_err());
    }

    #[test]
    fn floor_fit_under_noise_matches_scan_oracle() {
        let p = fig2_params();
        let eps = 2e-6;
        let mut rng = SplitMix64::new(0xF17);
        for _ in 0..20 {
            let samples: Vec<ReflectionSample> = FIT_ANGLES
                .iter()
                .map(|&deg| {
                    let theta = deg.to_radians();
                    ReflectionSample {
                        theta_r_rad: theta,
                        sigma_m2: Some(rcs(theta, &p) + eps * (2.0 * rng.next_f64() - 1.0)),
                        phase_rad: None,
                    }
                })
                .collect();
            let fit = fit_rcs_floor(&samples, p.element_area_m2, p.wavelength_m).unwrap();
            // Symmetric noise of amplitude eps moves the estimate at most eps.
            assert!((fit.c_m2 - p.rcs_floor_m2).abs() <= eps);

            // Brute-force 1-D scan of the squared-residual objective.
            let objective = |c: f64| -> f64 {
                samples
                    .iter()
                    .map(|s| {
                        let model =
                            rcs_aperture_term(s.theta_r_rad, p.element_area_m2, p.wavelength_m) + c;
                        (s.sigma_m2.unwrap() - model).powi(2)
                    })
                    .sum()
            };
            let step = eps / 500.0;
            let mut best = (f64::INFINITY, 0.0);
            for i in -1000..=1000 {
                let c = p.rcs_floor_m2 + i as f64 * step;
                let obj = objective(c);
                if obj < best.0 {
                    best = (obj, c);
                }
            }
            assert!((fit.c_m2 - best.1).abs() <= step);
        }
    }

    #[test]
    fn phase_fit_recovers_generating_constants() {
        let p = fig2_params();
        let samples = synth_samples(&p, &FIT_ANGLES);
        let fit = fit_phase(&samples).unwrap();
        assert!((fit.amplitude_rad.to_degrees() - 90.0).abs() <= 1e-10);
        assert!((fit.offset_rad.to_degrees() - 180.0).abs() <= 1e-10);
    }

    #[test]
    fn phase_fit_two_samples_exact() {
        let samples = [
            ReflectionSample {
                theta_r_rad: 0.0,
                sigma_m2: None,
                phase_rad: Some(270f64.to_radians()),
            },
            ReflectionSample {
                theta_r_rad: 90f64.to_radians(),
                sigma_m2: None,
                phase_rad: Some(180f64.to_radians()),
            },
        ];
        let fit = fit_phase(&samples).unwrap();
        assert!((fit.amplitude_rad.to_degrees() - 90.0).abs() <= 1e-10);
        assert!((fit.offset_rad.to_degrees() - 180.0).abs() <= 1e-10);
    }

    #[test]
    fn phase_fit_rejects_rank_deficiency() {
        let sample = |phase: f64| ReflectionSample {
            theta_r_rad: 0.5,
            sigma_m2: None,
            phase_rad: Some(phase),
        };
        let err = fit_phase(&[sample(1.0), sample(1.2), sample(0.9)]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)));
        assert!(fit_phase(&[sample(1.0)]).is_err());
    }

    #[test]
    fn phase_fit_rejects_branch_crossing() {
        // A wrapped phase sequence jumping from near 0 back to near 2*pi.
        let samples = [
            ReflectionSample {
                theta_r_rad: 0.0,
                sigma_m2: None,
                phase_rad: Some(0.2),
            },
            ReflectionSample {
                theta_r_rad: 60f64.to_radians(),
                sigma_m2: None,
                phase_rad: Some(6.1),
            },
        ];
        assert!(fit_phase(&samples).is_err());
    }

    #[test]
    fn phase_fit_under_noise_matches_grid_oracle() {
        let p = fig2_params();
        let eps = 0.02;
        let mut rng = SplitMix64::new(0xAB);
        let samples: Vec<ReflectionSample> = FIT_ANGLES
            .iter()
            .map(|&deg| {
                let theta = deg.to_radians();
                ReflectionSample {
                    theta_r_rad: theta,
                    sigma_m2: None,
                    phase_rad: Some(
                        p.phase_amplitude_rad * theta.cos()
                            + p.phase_offset_rad
                            + eps * (2.0 * rng.next_f64() - 1.0),
                    ),
                }
            })
            .collect();
        let fit = fit_phase(&samples).unwrap();

        // Brute-force 2-D grid around the generating constants.
        let objective = |a: f64, b: f64| -> f64 {
            samples
                .iter()
                .map(|s| (s.phase_rad.unwrap() - (a * s.theta_r_rad.cos() + b)).powi(2))
                .sum()
        };
        let step = 1e-4;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in -400..=400 {
            for j in -400..=400 {
                let a = p.phase_amplitude_rad + i as f64 * step;
                let b = p.phase_offset_rad + j as f64 * step;
                let obj = objective(a, b);
                if obj < best.0 {
                    best = (obj, a, b);
                }
            }
        }
        assert!((fit.amplitude_rad - best.1).abs() <= step);
        assert!((fit.offset_rad - best.2).abs() <= step);
    }

    #[test]
    fn csv_parsing_handles_absent_fields() {
        let text = "theta_deg,sigma_m2,phase_deg\n0,1.16e-4,270\n30,,243.9\n60,7.1e-5,\n";
        let samples = samples_from_csv(text).unwrap();
        assert_eq!(samples.len(), 3);
        assert!(samples[0].sigma_m2.is_some() && samples[0].phase_rad.is_some());
        assert!(samples[1].sigma_m2.is_none());
        assert!((samples[1].phase_rad.unwrap().to_degrees() - 243.9).abs() < 1e-12);
        assert!(samples[2].phase_rad.is_none());
    }

    #[test]
    fn csv_parsing_rejects_malformed_input() {
        assert!(samples_from_csv("").is_err());
        assert!(samples_from_csv("wrong,header,here\n").is_err());
        assert!(samples_from_csv("theta_deg,sigma_m2,phase_deg\n10,,\n").is_err());
        assert!(samples_from_csv("theta_deg,sigma_m2,phase_deg\n95,1e-5,\n").is_err());
        assert!(samples_from_csv("theta_deg,sigma_m2,phase_deg\nabc,1e-5,\n").is_err());
    }
}
