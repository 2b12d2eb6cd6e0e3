//! Deterministic received-power modeling for links assisted by a
//! reconfigurable reflecting surface.
//!
//! The crate evaluates how much power a receiver captures from a
//! transmitter via a planar grid of two-state scattering elements. The
//! main model sums one complex contribution per element — antenna gains,
//! an angle-dependent per-element radar cross section, an angle-dependent
//! reflection phase, and the propagation phase over both hops — and
//! squares the coherent total. A plane-mirror (specular) baseline, the
//! near/far field boundary of the aperture, a two-state configuration
//! search with an exhaustive oracle, least-squares fitting of the element
//! model constants, and a sweep harness with CSV/SVG output sit on top.
//!
//! Everything is a pure function of its inputs, and all searches and
//! accumulations follow fixed orders, so identical inputs produce
//! identical bits.
//!
//! # Example
//!
//! ```
//! use risim_core::{control, geometry, link, scene};
//!
//! let config = scene::scene_from_json(r#"{
//!     "frequency_hz": 5.8e9,
//!     "layout": { "rows": 4, "cols": 4, "dx_m": 0.0143, "dy_m": 0.01027 },
//!     "tx": { "d_m": 3.0, "theta_deg": 0.0, "phi_deg": 0.0 },
//!     "rx": { "d_m": 2.0, "theta_deg": 30.0, "phi_deg": 0.0 },
//!     "antennas": { "gain_dbi": 17.1 },
//!     "eta_r": 0.5429,
//!     "reflection": { "c_m2": 1.42e-5, "a_deg": 90.0, "b_deg": 180.0 }
//! }"#).unwrap();
//!
//! // Configure the surface and evaluate the link.
//! let report = control::one_bit_configure(&config, 64).unwrap();
//! let bound = link::aligned_power_bound(&config).unwrap();
//! assert!(report.pr_w <= bound.pr_w * (1.0 + 1e-12));
//!
//! // Near/far field boundary of the aperture.
//! let df = geometry::fraunhofer_distance(
//!     &config.layout,
//!     config.wavelength_m(),
//!     geometry::BoundaryConvention::Effective,
//! );
//! assert!(df > 0.0);
//! ```

pub mod control;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod link;
pub mod plot;
pub mod radiation;
pub mod reflection;
pub mod scene;
mod util;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s); wavelengths derive from it exactly.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
