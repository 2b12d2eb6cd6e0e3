//! Surface geometry: element grid coordinates, spherical/Cartesian
//! transforms, per-element propagation paths, and the near/far field
//! boundary of the aperture.
//!
//! The surface lies in the x-y plane with its geometric centre at the
//! origin; rows run parallel to the x-axis and the surface normal is +z.
//! Transmitter and receiver are described in spherical coordinates seen
//! from the origin (distance, zenith angle from +z, azimuth in the x-y
//! plane).

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Planar element grid: `rows x cols` elements on a fixed pitch, centred
/// on the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RisLayout {
    /// Number of rows (along y).
    pub rows: usize,
    /// Number of columns (along x).
    pub cols: usize,
    /// Element length along x in metres.
    pub dx_m: f64,
    /// Element width along y in metres.
    pub dy_m: f64,
}

impl RisLayout {
    pub fn new(rows: usize, cols: usize, dx_m: f64, dy_m: f64) -> Result<Self> {
        let layout = Self {
            rows,
            cols,
            dx_m,
            dy_m,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidInput(
                "layout must have at least one row and one column".into(),
            ));
        }
        if !(self.dx_m > 0.0 && self.dx_m.is_finite())
            || !(self.dy_m > 0.0 && self.dy_m.is_finite())
        {
            return Err(Error::InvalidInput(
                "element pitch dx, dy must be positive and finite".into(),
            ));
        }
        Ok(())
    }

    /// Total number of elements.
    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Geometric area of a single element in m².
    pub fn element_area_m2(&self) -> f64 {
        self.dx_m * self.dy_m
    }
}

/// Cartesian point in metres, surface centre at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance_to(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    fn dot(&self, other: &Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

impl std::ops::Sub for Point3 {
    type Output = Point3;

    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Neg for Point3 {
    type Output = Point3;

    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Spherical coordinates seen from the surface centre.
///
/// `theta_rad` is the zenith angle measured from the surface normal (+z);
/// `phi_rad` is the azimuth in the x-y plane, in `(-pi, pi]`. Points on
/// the +z axis carry `phi = 0` by convention so that round trips through
/// Cartesian coordinates are deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical {
    pub d_m: f64,
    pub theta_rad: f64,
    pub phi_rad: f64,
}

impl Spherical {
    pub fn new(d_m: f64, theta_rad: f64, phi_rad: f64) -> Self {
        Self {
            d_m,
            theta_rad,
            phi_rad,
        }
    }
}

/// Propagation path of one element: distances and direction angles to the
/// transmitter and receiver, plus the accumulated propagation phase.
#[derive(Debug, Clone, Copy)]
pub struct ElementPath {
    /// Distance transmitter -> element, metres.
    pub d_t_m: f64,
    /// Distance element -> receiver, metres.
    pub d_r_m: f64,
    /// Zenith angle of the element -> transmitter direction.
    pub theta_t_rad: f64,
    /// Azimuth of the element -> transmitter direction.
    pub phi_t_rad: f64,
    /// Zenith angle of the element -> receiver direction.
    pub theta_r_rad: f64,
    /// Azimuth of the element -> receiver direction.
    pub phi_r_rad: f64,
    /// Propagation phase `2*pi/lambda * (d_t + d_r)` in radians.
    pub phase_rad: f64,
    /// Angle at the transmit antenna between its boresight (aimed at the
    /// surface centre) and the line of sight to this element.
    pub tx_off_boresight_rad: f64,
    /// Same as above for the receive antenna.
    pub rx_off_boresight_rad: f64,
}

/// Per-element path geometry for a whole grid, row-major.
#[derive(Debug, Clone)]
pub struct PathGrid {
    rows: usize,
    cols: usize,
    wavelength_m: f64,
    elements: Vec<ElementPath>,
}

impl PathGrid {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }

    /// Path of the element in row `m`, column `n` (1-based, as in the
    /// grid indexing convention).
    pub fn get(&self, m: usize, n: usize) -> Result<&ElementPath> {
        if m == 0 || m > self.rows || n == 0 || n > self.cols {
            return Err(Error::InvalidInput(format!(
                "element index ({m}, {n}) outside grid {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(&self.elements[(m - 1) * self.cols + (n - 1)])
    }

    /// Row-major iteration over all element paths.
    pub fn iter(&self) -> impl Iterator<Item = &ElementPath> {
        self.elements.iter()
    }
}

/// Position of the element in row `m`, column `n` (1-based).
///
/// Columns advance along +x, rows advance along -y, and the grid is
/// centred so that the mean of all element positions is the origin.
pub fn element_position(m: usize, n: usize, layout: &RisLayout) -> Result<Point3> {
    if m == 0 || m > layout.rows || n == 0 || n > layout.cols {
        return Err(Error::InvalidInput(format!(
            "element index ({m}, {n}) outside grid {}x{}",
            layout.rows, layout.cols
        )));
    }
    let x = (n as f64 - (layout.cols as f64 + 1.0) / 2.0) * layout.dx_m;
    let y = ((layout.rows as f64 + 1.0) / 2.0 - m as f64) * layout.dy_m;
    Ok(Point3::new(x, y, 0.0))
}

/// Convert spherical coordinates to Cartesian.
pub fn spherical_to_cartesian(s: &Spherical) -> Point3 {
    let sin_theta = s.theta_rad.sin();
    Point3::new(
        s.d_m * sin_theta * s.phi_rad.cos(),
        s.d_m * sin_theta * s.phi_rad.sin(),
        s.d_m * s.theta_rad.cos(),
    )
}

/// Convert a Cartesian point back to spherical coordinates.
///
/// The origin has no defined direction and is rejected. Points on the
/// z-axis return `phi = 0`.
pub fn cartesian_to_spherical(p: &Point3) -> Result<Spherical> {
    let d = p.norm();
    if d == 0.0 {
        return Err(Error::InvalidInput(
            "direction of the origin is undefined".into(),
        ));
    }
    // atan2 keeps the zenith well conditioned near the axis, where
    // acos(z/d) loses half the significant digits.
    let theta = (p.x * p.x + p.y * p.y).sqrt().atan2(p.z);
    let phi = if p.x == 0.0 && p.y == 0.0 {
        0.0
    } else {
        let raw = p.y.atan2(p.x);
        // atan2 can return -pi for y = -0.0; fold onto +pi.
        if raw <= -std::f64::consts::PI {
            raw + TAU
        } else {
            raw
        }
    };
    Ok(Spherical::new(d, theta, phi))
}

/// Zenith/azimuth of the direction from `from` to `to`, with the zenith
/// measured from +z.
fn direction_angles(from: &Point3, to: &Point3) -> (f64, f64) {
    let v = *to - *from;
    let theta = (v.x * v.x + v.y * v.y).sqrt().atan2(v.z);
    let phi = if v.x == 0.0 && v.y == 0.0 {
        0.0
    } else {
        let raw = v.y.atan2(v.x);
        if raw <= -std::f64::consts::PI {
            raw + TAU
        } else {
            raw
        }
    };
    (theta, phi)
}

/// Angle between the boresight of an antenna at `antenna` aimed at the
/// origin and the line from the antenna to `target`.
fn off_boresight_angle(antenna: &Point3, target: &Point3, target_distance: f64) -> f64 {
    let aim = -*antenna;
    let line = *target - *antenna;
    let denom = antenna.norm() * target_distance;
    (aim.dot(&line) / denom).clamp(-1.0, 1.0).acos()
}

/// Compute per-element distances, direction angles, and propagation phases
/// for a transmitter and receiver in front of the surface (z > 0).
pub fn path_geometry(
    layout: &RisLayout,
    tx: &Point3,
    rx: &Point3,
    wavelength_m: f64,
) -> Result<PathGrid> {
    layout.validate()?;
    if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
        return Err(Error::InvalidInput("wavelength must be positive".into()));
    }
    if tx.z <= 0.0 {
        return Err(Error::InvalidInput(
            "transmitter must be strictly in front of the surface (z > 0)".into(),
        ));
    }
    if rx.z <= 0.0 {
        return Err(Error::InvalidInput(
            "receiver must be strictly in front of the surface (z > 0)".into(),
        ));
    }

    let wavenumber = TAU / wavelength_m;
    let mut elements = Vec::with_capacity(layout.element_count());
    for m in 1..=layout.rows {
        for n in 1..=layout.cols {
            let p = element_position(m, n, layout)?;
            let d_t = p.distance_to(tx);
            let d_r = p.distance_to(rx);
            let (theta_t, phi_t) = direction_angles(&p, tx);
            let (theta_r, phi_r) = direction_angles(&p, rx);
            elements.push(ElementPath {
                d_t_m: d_t,
                d_r_m: d_r,
                theta_t_rad: theta_t,
                phi_t_rad: phi_t,
                theta_r_rad: theta_r,
                phi_r_rad: phi_r,
                phase_rad: wavenumber * (d_t + d_r),
                tx_off_boresight_rad: off_boresight_angle(tx, &p, d_t),
                rx_off_boresight_rad: off_boresight_angle(rx, &p, d_r),
            });
        }
    }
    Ok(PathGrid {
        rows: layout.rows,
        cols: layout.cols,
        wavelength_m,
        elements,
    })
}

/// Convention for the near/far field boundary of the aperture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryConvention {
    /// `2*M*N*dx*dy / lambda`. Default; matches the few-metre boundary
    /// observed for decimetre-scale panels at single-digit GHz.
    Effective,
    /// `2*M*N*dx*dy / lambda^2`, the aperture form with a squared
    /// wavelength in the denominator.
    AsPrinted,
}

/// Near/far field boundary distance of the full aperture in metres.
///
/// Both conventions are exposed because they disagree by a factor of
/// `1/lambda`; callers pick explicitly, and `Effective` is the default
/// wherever this crate chooses on its own.
pub fn fraunhofer_distance(
    layout: &RisLayout,
    wavelength_m: f64,
    convention: BoundaryConvention,
) -> f64 {
    let numerator = 2.0 * layout.element_count() as f64 * layout.element_area_m2();
    match convention {
        BoundaryConvention::Effective => numerator / wavelength_m,
        BoundaryConvention::AsPrinted => numerator / (wavelength_m * wavelength_m),
    }
}
