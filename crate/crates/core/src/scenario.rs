//! Surveillance scenarios: camera and object geometry, the coverage
//! indicator matrix and per-camera monitoring quality.
//!
//! A camera sees a circular sector: every point within `distance_of_view`
//! whose bearing lies within half the angle of view of the boresight.
//! Quality of view for a covered object is
//!
//! ```text
//! w_theta * (1 - |theta / pi|) + w_phi * (1 - |2 phi / pi|) + w_dist * (1 - |L / L_best|)
//! ```
//!
//! where `theta` is the angle between the object's body orientation and the
//! direction from the object toward the camera, `phi` the elevation and `L`
//! the camera-object distance. A camera's quality `Q_k` sums this over the
//! objects it covers only.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Number of full-instance resamples `generate_scenario` tries before giving up.
pub const FEASIBILITY_ATTEMPTS: u32 = 1000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Direction of `other` as seen from `self`, in (-pi, pi].
    pub fn bearing_to(self, other: Point) -> f64 {
        wrap_angle((other.y - self.y).atan2(other.x - self.x))
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// Normalizes an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetObject {
    pub id: usize,
    pub position: Point,
    /// Facing direction of the monitored subject, radians.
    pub body_orientation: f64,
    /// Elevation angle, radians. Always 0 in the 2-D generator.
    #[serde(default)]
    pub elevation_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraSpec {
    pub id: usize,
    pub position: Point,
    /// Central viewing direction, radians.
    pub boresight: f64,
    /// Full sector width, radians.
    pub angle_of_view: f64,
    pub distance_of_view: f64,
    pub best_distance: f64,
    /// Video bit rate, bits per second.
    pub bitrate: f64,
}

impl CameraSpec {
    /// Data to send per 1 ms TTI, in bits.
    pub fn tp(&self) -> f64 {
        self.bitrate * 1e-3
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.angle_of_view > 0.0 && self.angle_of_view <= TAU) {
            return Err(Error::InvalidParameter(format!(
                "camera {}: angle_of_view {} outside (0, 2pi]",
                self.id, self.angle_of_view
            )));
        }
        if !(self.best_distance > 0.0 && self.best_distance <= self.distance_of_view) {
            return Err(Error::InvalidParameter(format!(
                "camera {}: need 0 < best_distance <= distance_of_view",
                self.id
            )));
        }
        if !(self.tp() > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "camera {}: bitrate must be positive",
                self.id
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QoVWeights {
    pub w_theta: f64,
    pub w_phi: f64,
    pub w_dist: f64,
}

impl QoVWeights {
    pub fn new(w_theta: f64, w_phi: f64, w_dist: f64) -> Result<Self> {
        let w = Self {
            w_theta,
            w_phi,
            w_dist,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.w_theta, self.w_phi, self.w_dist];
        if all.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("QoV weights must be finite and >= 0".into()));
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidParameter("QoV weights must not all be zero".into()));
        }
        Ok(())
    }

    pub fn sum(&self) -> f64 {
        self.w_theta + self.w_phi + self.w_dist
    }
}

impl Default for QoVWeights {
    /// The 2-D evaluation setting: angle and distance terms only.
    fn default() -> Self {
        Self {
            w_theta: 1.0,
            w_phi: 0.0,
            w_dist: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceTerm {
    /// `1 - |L / L_best|`
    #[default]
    AsWritten,
    /// `1 - |L - L_best| / L_best`, peaking at the best distance.
    PeakAtBest,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QovOptions {
    /// Clamp each per-object term at zero.
    pub clamp: bool,
    pub distance_term: DistanceTerm,
}

impl Default for QovOptions {
    fn default() -> Self {
        Self {
            clamp: true,
            distance_term: DistanceTerm::AsWritten,
        }
    }
}

/// True iff `object` lies inside `camera`'s viewing sector.
pub fn coverage_indicator(camera: &CameraSpec, object: &TargetObject) -> bool {
    let d = camera.position.distance(object.position);
    if d > camera.distance_of_view {
        return false;
    }
    if d == 0.0 {
        return true;
    }
    let off = wrap_angle(camera.position.bearing_to(object.position) - camera.boresight);
    off.abs() <= camera.angle_of_view / 2.0
}

/// Signed angle between the object's facing direction and the direction
/// from the object toward the camera; 0 when the subject faces the camera.
pub fn facing_angle(camera: &CameraSpec, object: &TargetObject) -> f64 {
    let toward_camera = object.position.bearing_to(camera.position);
    wrap_angle(toward_camera - object.body_orientation)
}

fn qov_terms(
    theta: f64,
    phi: f64,
    distance: f64,
    best: f64,
    weights: &QoVWeights,
    opts: &QovOptions,
) -> f64 {
    let dist_term = match opts.distance_term {
        DistanceTerm::AsWritten => 1.0 - (distance / best).abs(),
        DistanceTerm::PeakAtBest => 1.0 - (distance - best).abs() / best,
    };
    let v = weights.w_theta * (1.0 - (theta / PI).abs())
        + weights.w_phi * (1.0 - (2.0 * phi / PI).abs())
        + weights.w_dist * dist_term;
    if opts.clamp {
        v.max(0.0)
    } else {
        v
    }
}

/// Quality of view of `object` from `camera`. The object must be covered.
pub fn quality_of_view(
    camera: &CameraSpec,
    object: &TargetObject,
    weights: &QoVWeights,
    opts: &QovOptions,
) -> Result<f64> {
    if !coverage_indicator(camera, object) {
        return Err(Error::Precondition(format!(
            "object {} is not covered by camera {}",
            object.id, camera.id
        )));
    }
    Ok(qov_terms(
        facing_angle(camera, object),
        object.elevation_angle,
        camera.position.distance(object.position),
        camera.best_distance,
        weights,
        opts,
    ))
}

/// `Q_k`: summed quality of view over the objects `camera` covers.
pub fn camera_quality(
    camera: &CameraSpec,
    objects: &[TargetObject],
    weights: &QoVWeights,
    opts: &QovOptions,
) -> f64 {
    objects
        .iter()
        .filter_map(|o| quality_of_view(camera, o, weights, opts).ok())
        .sum()
}

/// Physical layout backing a generated (or hand-placed) scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub cell_radius: f64,
    pub base_station: Point,
    pub cameras: Vec<CameraSpec>,
    pub objects: Vec<TargetObject>,
    pub weights: QoVWeights,
    #[serde(default)]
    pub qov: QovOptions,
    /// Generator parameters, when the geometry came from `generate_scenario`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ScenarioParams>,
}

/// A scheduling scenario. `coverage` is K×N and `qualities` has length K.
/// Abstract instances (no geometry) carry only the tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub coverage: Vec<Vec<bool>>,
    pub qualities: Vec<f64>,
}

impl Scenario {
    pub fn from_geometry(geometry: Geometry) -> Result<Self> {
        geometry.weights.validate()?;
        if geometry.cameras.is_empty() || geometry.objects.is_empty() {
            return Err(Error::InvalidParameter(
                "scenario needs at least one camera and one object".into(),
            ));
        }
        for c in &geometry.cameras {
            c.validate()?;
        }
        let coverage = geometry
            .cameras
            .iter()
            .map(|c| {
                geometry
                    .objects
                    .iter()
                    .map(|o| coverage_indicator(c, o))
                    .collect()
            })
            .collect();
        let qualities = geometry
            .cameras
            .iter()
            .map(|c| camera_quality(c, &geometry.objects, &geometry.weights, &geometry.qov))
            .collect();
        Ok(Self {
            geometry: Some(geometry),
            coverage,
            qualities,
        })
    }

    /// Builds an abstract scenario from coverage sets (object indices per
    /// camera) and qualities.
    pub fn from_tables(
        num_objects: usize,
        cover_sets: &[Vec<usize>],
        qualities: Vec<f64>,
    ) -> Result<Self> {
        let mut coverage = vec![vec![false; num_objects]; cover_sets.len()];
        for (k, set) in cover_sets.iter().enumerate() {
            for &n in set {
                let cell = coverage[k].get_mut(n).ok_or_else(|| {
                    Error::Dimension(format!("camera {k} covers object {n} >= N={num_objects}"))
                })?;
                *cell = true;
            }
        }
        let s = Self {
            geometry: None,
            coverage,
            qualities,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.coverage.len();
        if k == 0 {
            return Err(Error::Dimension("no cameras".into()));
        }
        let n = self.coverage[0].len();
        if n == 0 {
            return Err(Error::Dimension("no objects".into()));
        }
        if self.coverage.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("ragged coverage matrix".into()));
        }
        if self.qualities.len() != k {
            return Err(Error::Dimension(format!(
                "{} qualities for {k} cameras",
                self.qualities.len()
            )));
        }
        if self.qualities.iter().any(|q| !q.is_finite()) {
            return Err(Error::InvalidParameter("non-finite camera quality".into()));
        }
        if let Some(g) = &self.geometry {
            if g.cameras.len() != k || g.objects.len() != n {
                return Err(Error::Dimension("geometry does not match tables".into()));
            }
        }
        Ok(())
    }

    pub fn num_cameras(&self) -> usize {
        self.coverage.len()
    }

    pub fn num_objects(&self) -> usize {
        self.coverage.first().map_or(0, Vec::len)
    }

    #[inline]
    pub fn covers(&self, camera: usize, object: usize) -> bool {
        self.coverage[camera][object]
    }

    /// Object indices covered by `camera`, ascending.
    pub fn coverage_set(&self, camera: usize) -> Vec<usize> {
        self.coverage[camera]
            .iter()
            .enumerate()
            .filter_map(|(n, &c)| c.then_some(n))
            .collect()
    }

    pub fn uncovered_objects(&self) -> Vec<usize> {
        (0..self.num_objects())
            .filter(|&n| !self.coverage.iter().any(|row| row[n]))
            .collect()
    }
}

/// True iff every object is covered by at least one camera. Spectrum is
/// not considered.
pub fn check_feasible(scenario: &Scenario) -> bool {
    (0..scenario.num_objects()).all(|n| scenario.coverage.iter().any(|row| row[n]))
}

/// Parameters for random scenario generation. Angles are in degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub cell_radius: f64,
    pub cameras: usize,
    pub objects: usize,
    pub angle_of_view_deg: f64,
    pub distance_of_view: f64,
    /// Defaults to half the distance of view.
    #[serde(default)]
    pub best_distance: Option<f64>,
    /// Bit-rate classes in bits/s; each camera draws one uniformly.
    pub bitrates: Vec<f64>,
    #[serde(default)]
    pub weights: QoVWeights,
    #[serde(default)]
    pub qov: QovOptions,
    pub seed: u64,
}

/// Low, medium and high rate classes, bits/s. Chosen so that covering a
/// default cell fits in 48 RBs for the whole sweep range.
pub const DEFAULT_BITRATES: [f64; 3] = [256_000.0, 500_000.0, 1_000_000.0];

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            cell_radius: 250.0,
            cameras: 50,
            objects: 50,
            angle_of_view_deg: 150.0,
            distance_of_view: 100.0,
            best_distance: None,
            bitrates: DEFAULT_BITRATES.to_vec(),
            weights: QoVWeights::default(),
            qov: QovOptions::default(),
            seed: 0,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.cameras == 0 {
            return bad("need at least one camera (K >= 1)");
        }
        if self.objects == 0 {
            return bad("need at least one object (N >= 1)");
        }
        if !(self.cell_radius > 0.0) {
            return bad("cell_radius must be positive");
        }
        if !(self.angle_of_view_deg > 0.0 && self.angle_of_view_deg <= 360.0) {
            return bad("angle_of_view_deg must be in (0, 360]");
        }
        if !(self.distance_of_view > 0.0) {
            return bad("distance_of_view must be positive");
        }
        if self.bitrates.is_empty() || self.bitrates.iter().any(|b| !(*b > 0.0)) {
            return bad("bitrates must be a non-empty list of positive rates");
        }
        self.weights.validate()
    }

    pub fn best_distance(&self) -> f64 {
        self.best_distance.unwrap_or(self.distance_of_view / 2.0)
    }
}

fn uniform_in_disc<R: Rng>(rng: &mut R, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let a = TAU * rng.random::<f64>();
    Point::new(r * a.cos(), r * a.sin())
}

/// Uniform angle in (-pi, pi].
fn uniform_angle<R: Rng>(rng: &mut R) -> f64 {
    PI - TAU * rng.random::<f64>()
}

fn sample_geometry<R: Rng>(rng: &mut R, p: &ScenarioParams) -> Geometry {
    let cameras = (0..p.cameras)
        .map(|k| CameraSpec {
            id: k,
            position: uniform_in_disc(rng, p.cell_radius),
            boresight: uniform_angle(rng),
            angle_of_view: p.angle_of_view_deg.to_radians(),
            distance_of_view: p.distance_of_view,
            best_distance: p.best_distance(),
            bitrate: p.bitrates[rng.random_range(0..p.bitrates.len())],
        })
        .collect();
    let objects = (0..p.objects)
        .map(|n| TargetObject {
            id: n,
            position: uniform_in_disc(rng, p.cell_radius),
            body_orientation: uniform_angle(rng),
            elevation_angle: 0.0,
        })
        .collect();
    Geometry {
        cell_radius: p.cell_radius,
        base_station: Point::ORIGIN,
        cameras,
        objects,
        weights: p.weights,
        qov: p.qov,
        params: Some(p.clone()),
    }
}

/// Draws cameras and objects uniformly over the cell, resampling the whole
/// instance until every object is covered.
pub fn generate_scenario(params: &ScenarioParams) -> Result<Scenario> {
    generate_scenario_counted(params).map(|(s, _)| s)
}

/// Like [`generate_scenario`], also returning how many draws it took.
pub fn generate_scenario_counted(params: &ScenarioParams) -> Result<(Scenario, u32)> {
    params.validate()?;
    let mut rng = rng::stream(params.seed, &[0x5ce7_a410]);
    for attempt in 1..=FEASIBILITY_ATTEMPTS {
        let g = sample_geometry(&mut rng, params);
        // cheap rejection before any quality is computed
        let coverable = g
            .objects
            .iter()
            .all(|o| g.cameras.iter().any(|c| coverage_indicator(c, o)));
        if coverable {
            return Ok((Scenario::from_geometry(g)?, attempt));
        }
    }
    Err(Error::FeasibilityExhausted {
        attempts: FEASIBILITY_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn camera_at_origin(aov_deg: f64, dov: f64) -> CameraSpec {
        CameraSpec {
            id: 0,
            position: Point::ORIGIN,
            boresight: 0.0,
            angle_of_view: aov_deg.to_radians(),
            distance_of_view: dov,
            best_distance: dov / 2.0,
            bitrate: 1e6,
        }
    }

    fn object(x: f64, y: f64, facing: f64) -> TargetObject {
        TargetObject {
            id: 0,
            position: Point::new(x, y),
            body_orientation: facing,
            elevation_angle: 0.0,
        }
    }

    #[test]
    fn coverage_sector_examples() {
        let cam = camera_at_origin(150.0, 100.0);
        assert!(!coverage_indicator(&cam, &object(200.0, 0.0, 0.0)));
        assert!(coverage_indicator(&cam, &object(50.0, 0.0, 0.0)));
        let b = 80f64.to_radians();
        assert!(!coverage_indicator(&cam, &object(50.0 * b.cos(), 50.0 * b.sin(), 0.0)));
        let b = 70f64.to_radians();
        assert!(coverage_indicator(&cam, &object(50.0 * b.cos(), 50.0 * b.sin(), 0.0)));
    }

    #[test]
    fn coverage_wraps_around_pi() {
        let mut cam = camera_at_origin(90.0, 100.0);
        cam.boresight = PI;
        assert!(coverage_indicator(&cam, &object(-50.0, 1.0, 0.0)));
        assert!(coverage_indicator(&cam, &object(-50.0, -1.0, 0.0)));
        assert!(!coverage_indicator(&cam, &object(50.0, 0.0, 0.0)));
    }

    // Camera at origin looking along +x with best distance 50. An object at
    // (x, 0) facing -x (toward the camera) has theta = 0.
    #[test]
    fn quality_of_view_examples() {
        let cam = camera_at_origin(150.0, 100.0);
        let w = QoVWeights::default();
        let o = QovOptions::default();
        let facing_cam = object(50.0, 0.0, PI);
        assert_abs_diff_eq!(quality_of_view(&cam, &facing_cam, &w, &o).unwrap(), 1.0, epsilon = 1e-12);
        // theta = pi/2, L = L_B / 2
        let side = object(25.0, 0.0, PI / 2.0);
        assert_abs_diff_eq!(facing_angle(&cam, &side).abs(), PI / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(quality_of_view(&cam, &side, &w, &o).unwrap(), 1.0, epsilon = 1e-12);
        // theta = pi, L = L_B
        let away = object(50.0, 0.0, 0.0);
        assert_abs_diff_eq!(quality_of_view(&cam, &away, &w, &o).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quality_of_view_rejects_uncovered() {
        let cam = camera_at_origin(150.0, 100.0);
        let far = object(150.0, 0.0, PI);
        assert!(matches!(
            quality_of_view(&cam, &far, &QoVWeights::default(), &QovOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn clamping_and_alternate_distance_term() {
        // L = 2 L_B, facing away: raw value is 0 + (1 - 2) = -1.
        let cam = camera_at_origin(150.0, 100.0);
        let o = object(100.0, 0.0, 0.0);
        let w = QoVWeights::default();
        let clamped = quality_of_view(&cam, &o, &w, &QovOptions::default()).unwrap();
        assert_eq!(clamped, 0.0);
        let raw = QovOptions {
            clamp: false,
            distance_term: DistanceTerm::AsWritten,
        };
        assert_abs_diff_eq!(quality_of_view(&cam, &o, &w, &raw).unwrap(), -1.0, epsilon = 1e-12);
        let peak = QovOptions {
            clamp: false,
            distance_term: DistanceTerm::PeakAtBest,
        };
        let at_best = object(50.0, 0.0, PI);
        assert_abs_diff_eq!(quality_of_view(&cam, &at_best, &w, &peak).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn camera_quality_sums_covered_objects() {
        let cam = camera_at_origin(150.0, 100.0);
        let w = QoVWeights::default();
        let o = QovOptions::default();
        assert_eq!(camera_quality(&cam, &[object(-50.0, 0.0, 0.0)], &w, &o), 0.0);
        let objs = [object(50.0, 0.0, PI), object(25.0, 0.0, PI / 2.0), object(500.0, 0.0, PI)];
        assert_abs_diff_eq!(camera_quality(&cam, &objs, &w, &o), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_weights_rejected() {
        assert!(QoVWeights::new(0.0, 0.0, 0.0).is_err());
        assert!(QoVWeights::new(-1.0, 0.0, 1.0).is_err());
        assert!(QoVWeights::new(1.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn generate_rejects_zero_cameras() {
        let p = ScenarioParams {
            cameras: 0,
            ..Default::default()
        };
        assert!(matches!(generate_scenario(&p), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn generate_is_deterministic_and_feasible() {
        let p = ScenarioParams {
            seed: 42,
            ..Default::default()
        };
        let a = generate_scenario(&p).unwrap();
        let b = generate_scenario(&p).unwrap();
        assert_eq!(a, b);
        assert!(check_feasible(&a));
        let g = a.geometry.as_ref().unwrap();
        for c in &g.cameras {
            assert!(c.position.norm() <= 250.0);
            assert_eq!(c.best_distance, 50.0);
        }
        for o in &g.objects {
            assert!(o.body_orientation > -PI && o.body_orientation <= PI);
        }
    }

    #[test]
    fn impossible_coverage_exhausts_attempts() {
        // One tiny camera in a huge cell can never cover 40 objects.
        let p = ScenarioParams {
            cell_radius: 10_000.0,
            cameras: 1,
            objects: 40,
            distance_of_view: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            generate_scenario(&p),
            Err(Error::FeasibilityExhausted { attempts: FEASIBILITY_ATTEMPTS })
        ));
    }

    #[test]
    fn check_feasible_detects_orphan() {
        let s = Scenario::from_tables(3, &[vec![0, 1], vec![1]], vec![1.0, 1.0]).unwrap();
        assert!(!check_feasible(&s));
        assert_eq!(s.uncovered_objects(), vec![2]);
        let s = Scenario::from_tables(3, &[vec![0, 1], vec![2]], vec![1.0, 1.0]).unwrap();
        assert!(check_feasible(&s));
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_abs_diff_eq!(wrap_angle(-PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-12);
    }
}
