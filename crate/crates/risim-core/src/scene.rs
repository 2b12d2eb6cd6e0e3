//! Scene files: a small JSON format describing one link, validated into a
//! [`SceneConfig`].
//!
//! All angles in the file are degrees and all distances metres; unknown
//! keys are rejected so that typos surface as errors instead of silently
//! falling back to defaults. Optional keys: `antennas.pattern` (defaults
//! to `isotropic-with-peak`), `antennas.q` (required by `cosine-power`
//! only), `reflection.state_delta_deg` (default 180) and `pt_w`
//! (default 1).

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{RisLayout, Spherical};
use crate::link::SceneConfig;
use crate::radiation::{db_to_linear, AntennaPattern, Efficiency};
use crate::reflection::ReflectionParams;
use crate::SPEED_OF_LIGHT_M_S;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    frequency_hz: f64,
    layout: LayoutFile,
    tx: PlacementFile,
    rx: PlacementFile,
    antennas: AntennasFile,
    eta_r: f64,
    reflection: ReflectionFile,
    #[serde(default = "default_pt_w")]
    pt_w: f64,
}

fn default_pt_w() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutFile {
    rows: usize,
    cols: usize,
    dx_m: f64,
    dy_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementFile {
    d_m: f64,
    theta_deg: f64,
    phi_deg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennasFile {
    gain_dbi: f64,
    #[serde(default)]
    pattern: PatternKind,
    q: Option<f64>,
}

#[derive(Debug, Default, Deserialize, PartialEq, Eq, Clone, Copy)]
enum PatternKind {
    #[default]
    #[serde(rename = "isotropic-with-peak")]
    IsotropicWithPeak,
    #[serde(rename = "cosine-power")]
    CosinePower,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReflectionFile {
    c_m2: f64,
    a_deg: f64,
    b_deg: f64,
    #[serde(default = "default_state_delta_deg")]
    state_delta_deg: f64,
}

fn default_state_delta_deg() -> f64 {
    180.0
}

fn key_err(key: &str, message: &str) -> Error {
    Error::Parse(format!("{key}: {message}"))
}

fn placement(file: &PlacementFile, key: &str) -> Result<Spherical> {
    if !(file.d_m > 0.0 && file.d_m.is_finite()) {
        return Err(key_err(&format!("{key}.d_m"), "distance must be positive"));
    }
    if !(0.0..90.0).contains(&file.theta_deg) {
        return Err(key_err(
            &format!("{key}.theta_deg"),
            "must lie in [0, 90): the antenna sits strictly in front of the surface",
        ));
    }
    if !(-180.0 < file.phi_deg && file.phi_deg <= 180.0) {
        return Err(key_err(
            &format!("{key}.phi_deg"),
            "must lie in (-180, 180]",
        ));
    }
    Ok(Spherical::new(
        file.d_m,
        file.theta_deg.to_radians(),
        file.phi_deg.to_radians(),
    ))
}

fn build(file: SceneFile) -> Result<SceneConfig> {
    if !(file.frequency_hz > 0.0 && file.frequency_hz.is_finite()) {
        return Err(key_err("frequency_hz", "must be positive"));
    }
    let layout = RisLayout::new(
        file.layout.rows,
        file.layout.cols,
        file.layout.dx_m,
        file.layout.dy_m,
    )
    .map_err(|e| key_err("layout", &e.to_string()))?;

    let peak_gain = db_to_linear(file.antennas.gain_dbi);
    let pattern = match file.antennas.pattern {
        PatternKind::IsotropicWithPeak => {
            if file.antennas.q.is_some() {
                return Err(key_err(
                    "antennas.q",
                    "only valid with pattern \"cosine-power\"",
                ));
            }
            AntennaPattern::isotropic_with_peak(peak_gain)
                .map_err(|e| key_err("antennas.gain_dbi", &e.to_string()))?
        }
        PatternKind::CosinePower => {
            let q = file
                .antennas
                .q
                .ok_or_else(|| key_err("antennas.q", "required with pattern \"cosine-power\""))?;
            AntennaPattern::cosine_power(peak_gain, q)
                .map_err(|e| key_err("antennas", &e.to_string()))?
        }
    };

    let eta_r = Efficiency::new(file.eta_r).map_err(|e| key_err("eta_r", &e.to_string()))?;
    let wavelength = SPEED_OF_LIGHT_M_S / file.frequency_hz;
    let reflection = ReflectionParams::new(
        layout.element_area_m2(),
        wavelength,
        file.reflection.c_m2,
        file.reflection.a_deg.to_radians(),
        file.reflection.b_deg.to_radians(),
        file.reflection.state_delta_deg.to_radians(),
    )
    .map_err(|e| key_err("reflection", &e.to_string()))?;

    if !(file.pt_w > 0.0 && file.pt_w.is_finite()) {
        return Err(key_err("pt_w", "must be positive"));
    }

    let scene = SceneConfig {
        frequency_hz: file.frequency_hz,
        layout,
        tx: placement(&file.tx, "tx")?,
        rx: placement(&file.rx, "rx")?,
        tx_pattern: pattern.clone(),
        rx_pattern: pattern,
        eta_r,
        reflection,
        pt_w: file.pt_w,
    };
    scene.validate().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(scene)
}

/// Parse and validate a scene from JSON text.
pub fn scene_from_json(text: &str) -> Result<SceneConfig> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    let file: SceneFile = serde_path_to_error::deserialize(&mut deserializer).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Error::Parse(e.inner().to_string())
        } else {
            Error::Parse(format!("{path}: {}", e.inner()))
        }
    })?;
    build(file)
}

/// Read and validate a scene file from disk.
pub fn parse_scene(path: &Path) -> Result<SceneConfig> {
    let text = std::fs::read_to_string(path)?;
    scene_from_json(&text)
}
