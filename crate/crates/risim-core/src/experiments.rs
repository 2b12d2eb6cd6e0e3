//! Sweep harness: evaluate the proposed and specular models over a range
//! of one scene parameter, and compare the two curves after anchoring
//! them at a common point.
//!
//! Sweep points are independent and evaluated in parallel; rows are
//! always emitted in ascending parameter order and repeated runs produce
//! bit-identical output.

use rayon::prelude::*;

use crate::control::{self, BaselineKind};
use crate::error::{Error, Result};
use crate::link::{self, SceneConfig};

/// Scene parameter swept over a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Transmitter distance `d1` in metres.
    D1,
    /// Receiver distance `d2` in metres.
    D2,
    /// Receiver zenith angle `theta2` in degrees.
    Theta2,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::D1 => "d1",
            Self::D2 => "d2",
            Self::Theta2 => "theta2",
        }
    }
}

/// Received-power models a sweep can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Coherent per-element sum.
    Proposed,
    /// Plane-mirror baseline.
    Specular,
}

/// How the surface is configured at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceConfiguration {
    /// Two-state configuration search at every point, as a controller
    /// would run against a physical placement.
    OneBit { reference_scan: usize },
    /// Two-state search once at the scene's own placement, then held
    /// fixed across the sweep. Ablation mode: shows what re-configuring
    /// at every point buys.
    FrozenOneBit { reference_scan: usize },
    /// Ideal continuous co-phasing (the aligned-power bound).
    ContinuousAligned,
    /// All elements left in state 0.
    AllZero,
}

/// Description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    /// Start of the range, in the parameter's unit.
    pub from: f64,
    /// End of the range, inclusive.
    pub to: f64,
    /// Number of uniformly spaced points, at least 2.
    pub steps: usize,
    pub models: Vec<ModelKind>,
    pub configuration: SurfaceConfiguration,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if !self.from.is_finite() || !self.to.is_finite() || self.from >= self.to {
            return Err(Error::InvalidInput(
                "sweep range must satisfy from < to".into(),
            ));
        }
        if self.steps < 2 {
            return Err(Error::InvalidInput("sweep needs at least 2 steps".into()));
        }
        if self.models.is_empty() {
            return Err(Error::InvalidInput("sweep needs at least one model".into()));
        }
        match self.configuration {
            SurfaceConfiguration::OneBit { reference_scan }
            | SurfaceConfiguration::FrozenOneBit { reference_scan }
                if reference_scan == 0 =>
            {
                return Err(Error::InvalidInput(
                    "reference scan needs at least one angle".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }
}

/// One sweep point: the parameter value and the attenuation of each
/// requested model in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub proposed_db: Option<f64>,
    pub specular_db: Option<f64>,
}

fn scene_at(scene: &SceneConfig, parameter: SweepParameter, value: f64) -> Result<SceneConfig> {
    let mut shifted = scene.clone();
    match parameter {
        SweepParameter::D1 => shifted.tx.d_m = value,
        SweepParameter::D2 => shifted.rx.d_m = value,
        SweepParameter::Theta2 => shifted.rx.theta_rad = value.to_radians(),
    }
    shifted.validate()?;
    Ok(shifted)
}

fn proposed_attenuation_db(
    scene: &SceneConfig,
    configuration: SurfaceConfiguration,
    frozen: Option<&control::StateGrid>,
) -> Result<f64> {
    let pr = match configuration {
        SurfaceConfiguration::OneBit { reference_scan } => {
            control::one_bit_configure(scene, reference_scan)?.pr_w
        }
        SurfaceConfiguration::FrozenOneBit { .. } => {
            let grid = frozen.expect("frozen grid is prepared before the sweep");
            link::received_power(scene, grid)?.pr_w
        }
        SurfaceConfiguration::ContinuousAligned => link::aligned_power_bound(scene)?.pr_w,
        SurfaceConfiguration::AllZero => {
            let zeros = control::baseline_grids(scene, BaselineKind::AllZero);
            link::received_power(scene, &zeros)?.pr_w
        }
    };
    Ok(10.0 * (pr / scene.pt_w).log10())
}

/// Evaluate the requested models over `steps` uniformly spaced parameter
/// values. The surface is re-configured at every point unless the frozen
/// configuration is requested; the swept parameter's fixed complement
/// comes from the scene.
pub fn run_sweep(scene: &SceneConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    scene.validate()?;
    let frozen = match spec.configuration {
        SurfaceConfiguration::FrozenOneBit { reference_scan } => {
            Some(control::one_bit_configure(scene, reference_scan)?.states)
        }
        _ => None,
    };
    let step = (spec.to - spec.from) / (spec.steps - 1) as f64;
    (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let value = spec.from + i as f64 * step;
            let shifted = scene_at(scene, spec.parameter, value)?;
            let mut row = SweepRow {
                value,
                proposed_db: None,
                specular_db: None,
            };
            for model in &spec.models {
                match model {
                    ModelKind::Proposed => {
                        row.proposed_db = Some(proposed_attenuation_db(
                            &shifted,
                            spec.configuration,
                            frozen.as_ref(),
                        )?);
                    }
                    ModelKind::Specular => {
                        row.specular_db = Some(link::specular_power(&shifted, 1.0)?.attenuation_db);
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

/// Per-row absolute gap in dB between the proposed and specular curves
/// after shifting both to coincide at the row nearest `anchor`.
pub fn divergence_report(rows: &[SweepRow], anchor: f64) -> Result<Vec<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("no sweep rows".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in rows {
        lo = lo.min(row.value);
        hi = hi.max(row.value);
    }
    if !(lo..=hi).contains(&anchor) {
        return Err(Error::InvalidInput(format!(
            "anchor {anchor} outside the swept range [{lo}, {hi}]"
        )));
    }
    let columns = |row: &SweepRow| -> Result<(f64, f64)> {
        match (row.proposed_db, row.specular_db) {
            (Some(p), Some(s)) => Ok((p, s)),
            _ => Err(Error::InvalidInput(
                "divergence needs both model columns in every row".into(),
            )),
        }
    };
    let anchor_row = rows
        .iter()
        .min_by(|a, b| {
            (a.value - anchor)
                .abs()
                .partial_cmp(&(b.value - anchor).abs())
                .unwrap()
        })
        .unwrap();
    let (p_anchor, s_anchor) = columns(anchor_row)?;
    rows.iter()
        .map(|row| {
            let (p, s) = columns(row)?;
            Ok(((p - p_anchor) - (s - s_anchor)).abs())
        })
        .collect()
}

/// Format a value with the given number of significant digits in plain
/// decimal notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Render sweep rows as CSV with header `param,value,...` and one column
/// per requested model, six significant digits, newline-terminated rows.
pub fn rows_to_csv(parameter: SweepParameter, models: &[ModelKind], rows: &[SweepRow]) -> String {
    let mut out = String::from("param,value");
    if models.contains(&ModelKind::Proposed) {
        out.push_str(",proposed_db");
    }
    if models.contains(&ModelKind::Specular) {
        out.push_str(",specular_db");
    }
    out.push('\n');
    for row in rows {
        out.push_str(parameter.as_str());
        out.push(',');
        out.push_str(&format_significant(row.value, 6));
        if models.contains(&ModelKind::Proposed) {
            out.push(',');
            out.push_str(&format_significant(row.proposed_db.unwrap_or(f64::NAN), 6));
        }
        if models.contains(&ModelKind::Specular) {
            out.push(',');
            out.push_str(&format_significant(row.specular_db.unwrap_or(f64::NAN), 6));
        }
        out.push('\n');
    }
    out
}
