//! C ABI for the risim received-power simulator.
//!
//! Scenes are opaque handles created from JSON (text or file) and freed
//! with [`risim_scene_free`]. Every fallible call returns a
//! [`RisimStatus`]; on failure, [`risim_last_error_message`] returns a
//! thread-local description of what went wrong. Outputs are written
//! through caller-provided pointers only when the call succeeds.
//!
//! All functions are safe to call from multiple threads as long as each
//! scene handle is used by one thread at a time; the error message buffer
//! is per-thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use risim_core::control::{self, BaselineKind};
use risim_core::experiments::{ModelKind, SurfaceConfiguration, SweepParameter, SweepSpec};
use risim_core::geometry::BoundaryConvention;
use risim_core::link::SceneConfig;
use risim_core::{experiments, link, reflection, scene, Error};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisimStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A file could not be read or written.
    IoError = 3,
    /// A scene or sample file could not be decoded.
    ParseError = 4,
    /// An argument violates a documented precondition.
    InvalidInput = 5,
    /// A request exceeds a hard enumeration limit.
    CapacityExceeded = 6,
    /// A caller-provided buffer is too small.
    BufferTooSmall = 7,
    /// An unexpected internal failure; the library state is unchanged.
    InternalError = 8,
}

/// Near/far field boundary conventions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisimBoundaryConvention {
    /// `2*M*N*dx*dy / lambda`.
    Effective = 0,
    /// `2*M*N*dx*dy / lambda^2`.
    AsPrinted = 1,
}

/// Surface configuration applied before an evaluation or at each sweep
/// point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisimConfiguration {
    /// Two-state configuration search with 64 reference angles.
    OneBit = 0,
    /// Ideal continuous co-phasing (aligned-power bound).
    ContinuousAligned = 1,
    /// All elements in state 0.
    AllZero = 2,
}

/// Scene parameter swept by [`risim_sweep_csv`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RisimSweepParameter {
    /// Transmitter distance in metres.
    D1 = 0,
    /// Receiver distance in metres.
    D2 = 1,
    /// Receiver zenith angle in degrees.
    Theta2 = 2,
}

/// Opaque scene handle.
pub struct RisimScene {
    config: SceneConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> RisimStatus {
    match err {
        Error::InvalidInput(_) => RisimStatus::InvalidInput,
        Error::Parse(_) => RisimStatus::ParseError,
        Error::RankDeficient(_) => RisimStatus::InvalidInput,
        Error::Capacity(_) => RisimStatus::CapacityExceeded,
        Error::Io(_) => RisimStatus::IoError,
    }
}

fn fail(err: &Error) -> RisimStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn fail_with(status: RisimStatus, message: &str) -> RisimStatus {
    set_last_error(message);
    status
}

/// Run a body under panic protection so that no unwind crosses the ABI.
fn guarded(body: impl FnOnce() -> RisimStatus) -> RisimStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail_with(RisimStatus::InternalError, "internal panic"),
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, RisimStatus> {
    if ptr.is_null() {
        return Err(fail_with(
            RisimStatus::NullArgument,
            &format!("{name} is null"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail_with(RisimStatus::InvalidUtf8, &format!("{name} is not UTF-8")))
}

fn scene_arg<'a>(handle: *const RisimScene) -> Result<&'a SceneConfig, RisimStatus> {
    if handle.is_null() {
        return Err(fail_with(RisimStatus::NullArgument, "scene handle is null"));
    }
    // SAFETY: non-null handles originate from risim_scene_* constructors.
    Ok(unsafe { &(*handle).config })
}

fn out_arg<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, RisimStatus> {
    if ptr.is_null() {
        return Err(fail_with(
            RisimStatus::NullArgument,
            &format!("{name} is null"),
        ));
    }
    // SAFETY: the caller hands a writable location for the result.
    Ok(unsafe { &mut *ptr })
}

fn new_scene(config: SceneConfig, out: *mut *mut RisimScene) -> RisimStatus {
    match out_arg(out, "out_scene") {
        Ok(slot) => {
            *slot = Box::into_raw(Box::new(RisimScene { config }));
            RisimStatus::Ok
        }
        Err(status) => status,
    }
}

/// Version string of the underlying library; static storage, never freed.
#[no_mangle]
pub extern "C" fn risim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. Valid until
/// the next failing risim call on the same thread; never null.
#[no_mangle]
pub extern "C" fn risim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a scene from a JSON description in memory.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_scene` must be writable.
#[no_mangle]
pub unsafe extern "C" fn risim_scene_from_json(
    json: *const c_char,
    out_scene: *mut *mut RisimScene,
) -> RisimStatus {
    guarded(|| {
        let text = match str_arg(json, "json") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match scene::scene_from_json(text) {
            Ok(config) => new_scene(config, out_scene),
            Err(e) => fail(&e),
        }
    })
}

/// Create a scene from a JSON file on disk.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out_scene` must be writable.
#[no_mangle]
pub unsafe extern "C" fn risim_scene_load(
    path: *const c_char,
    out_scene: *mut *mut RisimScene,
) -> RisimStatus {
    guarded(|| {
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        match scene::parse_scene(Path::new(path)) {
            Ok(config) => new_scene(config, out_scene),
            Err(e) => fail(&e),
        }
    })
}

/// Free a scene handle. Null is accepted and ignored.
///
/// # Safety
/// `handle` must be null or a pointer returned by a risim_scene_*
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn risim_scene_free(handle: *mut RisimScene) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of elements of the scene's surface (`rows * cols`).
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_element_count(
    handle: *const RisimScene,
    out_count: *mut usize,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match out_arg(out_count, "out_count") {
            Ok(slot) => {
                *slot = config.layout.element_count();
                RisimStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Near/far field boundary of the scene's aperture in metres.
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_field_boundary(
    handle: *const RisimScene,
    convention: RisimBoundaryConvention,
    out_distance_m: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let distance = risim_core::geometry::fraunhofer_distance(
            &config.layout,
            config.wavelength_m(),
            match convention {
                RisimBoundaryConvention::Effective => BoundaryConvention::Effective,
                RisimBoundaryConvention::AsPrinted => BoundaryConvention::AsPrinted,
            },
        );
        match out_arg(out_distance_m, "out_distance_m") {
            Ok(slot) => {
                *slot = distance;
                RisimStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Per-element radar cross section of the scene's reflection model, m².
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_rcs(
    handle: *const RisimScene,
    theta_r_rad: f64,
    out_sigma_m2: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match out_arg(out_sigma_m2, "out_sigma_m2") {
            Ok(slot) => {
                *slot = reflection::rcs(theta_r_rad, &config.reflection);
                RisimStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Reflection phase of one element for the given control state, radians
/// in `[0, 2*pi)`.
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_phase_shift(
    handle: *const RisimScene,
    theta_r_rad: f64,
    state: u8,
    out_phase_rad: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        match out_arg(out_phase_rad, "out_phase_rad") {
            Ok(slot) => {
                *slot = reflection::phase_shift(theta_r_rad, state, &config.reflection);
                RisimStatus::Ok
            }
            Err(status) => status,
        }
    })
}

fn states_from_raw(
    config: &SceneConfig,
    states: *const u8,
    len: usize,
) -> Result<control::StateGrid, RisimStatus> {
    let (rows, cols) = (config.layout.rows, config.layout.cols);
    if states.is_null() {
        return Ok(control::baseline_grids(config, BaselineKind::AllZero));
    }
    if len != rows * cols {
        return Err(fail_with(
            RisimStatus::InvalidInput,
            &format!("{len} states for a {rows}x{cols} grid"),
        ));
    }
    // SAFETY: non-null `states` points to `len` readable bytes.
    let slice = unsafe { std::slice::from_raw_parts(states, len) };
    control::StateGrid::from_states(rows, cols, slice.to_vec()).map_err(|e| fail(&e))
}

/// Received power for the given row-major control states (`len` must be
/// `rows*cols`); a null `states` pointer means the all-zero grid.
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_received_power(
    handle: *const RisimScene,
    states: *const u8,
    len: usize,
    out_pr_w: *mut f64,
    out_attenuation_db: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let grid = match states_from_raw(config, states, len) {
            Ok(g) => g,
            Err(status) => return status,
        };
        let result = match link::received_power(config, &grid) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        let pr = match out_arg(out_pr_w, "out_pr_w") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        let att = match out_arg(out_attenuation_db, "out_attenuation_db") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        *pr = result.pr_w;
        *att = result.attenuation_db;
        RisimStatus::Ok
    })
}

/// Received power of the plane-mirror (specular) baseline with mean
/// reflection amplitude `mu_bar` in `(0, 1]`.
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_specular_power(
    handle: *const RisimScene,
    mu_bar: f64,
    out_pr_w: *mut f64,
    out_attenuation_db: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let result = match link::specular_power(config, mu_bar) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        let pr = match out_arg(out_pr_w, "out_pr_w") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        let att = match out_arg(out_attenuation_db, "out_attenuation_db") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        *pr = result.pr_w;
        *att = result.attenuation_db;
        RisimStatus::Ok
    })
}

/// Run the one-bit configuration search and write the chosen row-major
/// states into `out_states` (`len` must be at least `rows*cols`).
/// `out_pr_w` may be null when only the states are wanted.
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
pub unsafe extern "C" fn risim_configure_one_bit(
    handle: *const RisimScene,
    reference_scan: u32,
    out_states: *mut u8,
    len: usize,
    out_pr_w: *mut f64,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let count = config.layout.element_count();
        if out_states.is_null() {
            return fail_with(RisimStatus::NullArgument, "out_states is null");
        }
        if len < count {
            return fail_with(
                RisimStatus::BufferTooSmall,
                &format!("out_states holds {len} entries, need {count}"),
            );
        }
        let report = match control::one_bit_configure(config, reference_scan as usize) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        // SAFETY: out_states points to at least `count` writable bytes.
        let out = std::slice::from_raw_parts_mut(out_states, count);
        for (slot, state) in out.iter_mut().zip(report.states.iter_row_major()) {
            *slot = state;
        }
        if !out_pr_w.is_null() {
            *out_pr_w = report.pr_w;
        }
        RisimStatus::Ok
    })
}

/// Sweep one scene parameter and write the result table as CSV to
/// `out_path` (header `param,value,...`, columns per requested model).
///
/// # Safety
/// Pointers must be valid as documented on the crate.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn risim_sweep_csv(
    handle: *const RisimScene,
    parameter: RisimSweepParameter,
    from: f64,
    to: f64,
    steps: usize,
    include_proposed: bool,
    include_specular: bool,
    configuration: RisimConfiguration,
    out_path: *const c_char,
) -> RisimStatus {
    guarded(|| {
        let config = match scene_arg(handle) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let path = match str_arg(out_path, "out_path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let parameter = match parameter {
            RisimSweepParameter::D1 => SweepParameter::D1,
            RisimSweepParameter::D2 => SweepParameter::D2,
            RisimSweepParameter::Theta2 => SweepParameter::Theta2,
        };
        let mut models = Vec::new();
        if include_proposed {
            models.push(ModelKind::Proposed);
        }
        if include_specular {
            models.push(ModelKind::Specular);
        }
        let spec = SweepSpec {
            parameter,
            from,
            to,
            steps,
            models: models.clone(),
            configuration: match configuration {
                RisimConfiguration::OneBit => SurfaceConfiguration::OneBit { reference_scan: 64 },
                RisimConfiguration::ContinuousAligned => SurfaceConfiguration::ContinuousAligned,
                RisimConfiguration::AllZero => SurfaceConfiguration::AllZero,
            },
        };
        let rows = match experiments::run_sweep(config, &spec) {
            Ok(rows) => rows,
            Err(e) => return fail(&e),
        };
        let csv = experiments::rows_to_csv(parameter, &models, &rows);
        match std::fs::write(path, csv) {
            Ok(()) => RisimStatus::Ok,
            Err(e) => fail(&Error::Io(e)),
        }
    })
}

/// Least-squares fit of the cosine phase law from `len` samples.
///
/// # Safety
/// The sample arrays must hold `len` readable doubles each.
#[no_mangle]
pub unsafe extern "C" fn risim_fit_phase(
    theta_rad: *const f64,
    phase_rad: *const f64,
    len: usize,
    out_amplitude_rad: *mut f64,
    out_offset_rad: *mut f64,
) -> RisimStatus {
    guarded(|| {
        if theta_rad.is_null() || phase_rad.is_null() {
            return fail_with(RisimStatus::NullArgument, "sample arrays are null");
        }
        // SAFETY: both arrays hold `len` readable doubles.
        let thetas = std::slice::from_raw_parts(theta_rad, len);
        let phases = std::slice::from_raw_parts(phase_rad, len);
        let samples: Vec<reflection::ReflectionSample> = thetas
            .iter()
            .zip(phases)
            .map(|(&t, &p)| reflection::ReflectionSample {
                theta_r_rad: t,
                sigma_m2: None,
                phase_rad: Some(p),
            })
            .collect();
        let fit = match reflection::fit_phase(&samples) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        let a = match out_arg(out_amplitude_rad, "out_amplitude_rad") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        let b = match out_arg(out_offset_rad, "out_offset_rad") {
            Ok(slot) => slot,
            Err(status) => return status,
        };
        *a = fit.amplitude_rad;
        *b = fit.offset_rad;
        RisimStatus::Ok
    })
}

/// Least-squares fit of the cross-section floor constant from `len`
/// samples, holding the aperture term fixed.
///
/// # Safety
/// The sample arrays must hold `len` readable doubles each.
#[no_mangle]
pub unsafe extern "C" fn risim_fit_rcs_floor(
    theta_rad: *const f64,
    sigma_m2: *const f64,
    len: usize,
    element_area_m2: f64,
    wavelength_m: f64,
    out_c_m2: *mut f64,
) -> RisimStatus {
    guarded(|| {
        if theta_rad.is_null() || sigma_m2.is_null() {
            return fail_with(RisimStatus::NullArgument, "sample arrays are null");
        }
        // SAFETY: both arrays hold `len` readable doubles.
        let thetas = std::slice::from_raw_parts(theta_rad, len);
        let sigmas = std::slice::from_raw_parts(sigma_m2, len);
        let samples: Vec<reflection::ReflectionSample> = thetas
            .iter()
            .zip(sigmas)
            .map(|(&t, &s)| reflection::ReflectionSample {
                theta_r_rad: t,
                sigma_m2: Some(s),
                phase_rad: None,
            })
            .collect();
        let fit = match reflection::fit_rcs_floor(&samples, element_area_m2, wavelength_m) {
            Ok(f) => f,
            Err(e) => return fail(&e),
        };
        match out_arg(out_c_m2, "out_c_m2") {
            Ok(slot) => {
                *slot = fit.c_m2;
                RisimStatus::Ok
            }
            Err(status) => status,
        }
    })
}
