//! Per-sub-band link quality: path loss, log-normal shadowing, SINR, MCS
//! selection and the resulting RB requirement `r[m][k]`.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scenario::{CameraSpec, Point, Scenario};

pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;
pub const RB_BANDWIDTH_HZ: f64 = 180_000.0;

/// Thermal noise over one 180 kHz RB, dBm.
pub fn noise_floor_dbm_per_rb() -> f64 {
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * RB_BANDWIDTH_HZ.log10()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McsLevel {
    pub id: u8,
    pub name: String,
    pub bits_per_re: f64,
    pub sinr_threshold_db: f64,
}

/// QPSK 1/3, 1/2, 2/3, 3/4 and 16QAM 1/2, 2/3, 3/4.
pub fn default_mcs_table() -> Vec<McsLevel> {
    let rows: [(&str, f64, f64); 7] = [
        ("QPSK 1/3", 2.0 / 3.0, -1.5),
        ("QPSK 1/2", 1.0, 1.0),
        ("QPSK 2/3", 4.0 / 3.0, 3.5),
        ("QPSK 3/4", 1.5, 5.0),
        ("16QAM 1/2", 2.0, 8.0),
        ("16QAM 2/3", 8.0 / 3.0, 11.0),
        ("16QAM 3/4", 3.0, 13.0),
    ];
    rows.iter()
        .enumerate()
        .map(|(i, &(name, bits, thr))| McsLevel {
            id: i as u8 + 1,
            name: name.to_string(),
            bits_per_re: bits,
            sinr_threshold_db: thr,
        })
        .collect()
}

pub fn validate_mcs_table(table: &[McsLevel]) -> Result<()> {
    if table.is_empty() {
        return Err(Error::InvalidParameter("empty MCS table".into()));
    }
    if table.iter().any(|l| !(l.bits_per_re > 0.0)) {
        return Err(Error::InvalidParameter("MCS bits_per_re must be positive".into()));
    }
    for w in table.windows(2) {
        if !(w[1].bits_per_re > w[0].bits_per_re && w[1].sinr_threshold_db > w[0].sinr_threshold_db)
        {
            return Err(Error::InvalidParameter(format!(
                "MCS levels {} -> {} not strictly increasing",
                w[0].id, w[1].id
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub total_rbs: u32,
    pub sub_bands: u32,
    pub rbs_per_subband: u32,
    /// 2 slots x 7 symbols x 12 subcarriers.
    pub res_per_rb_per_tti: u32,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self::new(48, 4).expect("48 RBs split into 4 sub-bands")
    }
}

impl SpectrumConfig {
    pub fn new(total_rbs: u32, sub_bands: u32) -> Result<Self> {
        if sub_bands == 0 || total_rbs == 0 || !total_rbs.is_multiple_of(sub_bands) {
            return Err(Error::InvalidParameter(format!(
                "{total_rbs} RBs cannot be split evenly into {sub_bands} sub-bands"
            )));
        }
        Ok(Self {
            total_rbs,
            sub_bands,
            rbs_per_subband: total_rbs / sub_bands,
            res_per_rb_per_tti: 168,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.sub_bands == 0 || self.rbs_per_subband == 0 || self.res_per_rb_per_tti == 0 {
            return Err(Error::InvalidParameter("spectrum sizes must be positive".into()));
        }
        if self.total_rbs != self.sub_bands * self.rbs_per_subband {
            return Err(Error::InvalidParameter(format!(
                "total_rbs {} != {} sub-bands x {} RBs",
                self.total_rbs, self.sub_bands, self.rbs_per_subband
            )));
        }
        Ok(())
    }

    pub fn num_sub_bands(&self) -> usize {
        self.sub_bands as usize
    }
}

/// `intercept + slope * log10(d / 1 km)`, with `d` clamped below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub intercept_db: f64,
    pub slope_db: f64,
    pub min_distance_m: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self {
            intercept_db: 128.1,
            slope_db: 37.6,
            min_distance_m: 10.0,
        }
    }
}

impl PathLossModel {
    pub fn loss_db(&self, distance_m: f64) -> f64 {
        let d = distance_m.max(self.min_distance_m);
        self.intercept_db + self.slope_db * (d / 1000.0).log10()
    }
}

pub fn path_loss_db(distance_m: f64) -> f64 {
    PathLossModel::default().loss_db(distance_m)
}

/// Inter-cell interference power per RB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interference {
    None,
    Uniform { dbm: f64 },
    PerSubBand { dbm: Vec<f64> },
}

impl Interference {
    /// Linear power in mW on `sub_band`.
    fn milliwatts(&self, sub_band: usize) -> f64 {
        match self {
            Interference::None => 0.0,
            Interference::Uniform { dbm } => dbm_to_mw(*dbm),
            Interference::PerSubBand { dbm } => dbm.get(sub_band).copied().map_or(0.0, dbm_to_mw),
        }
    }
}

fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelEnv {
    pub tx_power_dbm: f64,
    pub shadowing_sigma_db: f64,
    pub interference: Interference,
    pub noise_figure_db: f64,
    #[serde(default)]
    pub path_loss: PathLossModel,
    #[serde(default = "default_mcs_table")]
    pub mcs_table: Vec<McsLevel>,
    pub seed: u64,
}

impl Default for ChannelEnv {
    fn default() -> Self {
        Self {
            tx_power_dbm: 24.0,
            shadowing_sigma_db: 8.0,
            interference: Interference::Uniform { dbm: -110.0 },
            noise_figure_db: 5.0,
            path_loss: PathLossModel::default(),
            mcs_table: default_mcs_table(),
            seed: 0,
        }
    }
}

impl ChannelEnv {
    pub fn validate(&self) -> Result<()> {
        validate_mcs_table(&self.mcs_table)?;
        if !(self.shadowing_sigma_db >= 0.0) {
            return Err(Error::InvalidParameter("shadowing sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Shadowing sample for one (camera, sub-band) cell, dB. Each cell owns its
/// own stream so the value does not depend on evaluation order.
pub fn shadowing_db(env: &ChannelEnv, camera: usize, sub_band: usize) -> f64 {
    if env.shadowing_sigma_db == 0.0 {
        return 0.0;
    }
    let mut rng = rng::stream(env.seed, &[0x5bad_0123, camera as u64, sub_band as u64]);
    Normal::new(0.0, env.shadowing_sigma_db)
        .expect("sigma validated")
        .sample(&mut rng)
}

/// Uplink SINR per RB of `camera` (at index `camera_index`) on `sub_band`.
pub fn sinr_db(
    camera: &CameraSpec,
    camera_index: usize,
    sub_band: usize,
    base_station: Point,
    env: &ChannelEnv,
) -> f64 {
    let rx = env.tx_power_dbm
        - env.path_loss.loss_db(camera.position.distance(base_station))
        - shadowing_db(env, camera_index, sub_band);
    let noise_mw = dbm_to_mw(noise_floor_dbm_per_rb() + env.noise_figure_db);
    let total_mw = noise_mw + env.interference.milliwatts(sub_band);
    rx - 10.0 * total_mw.log10()
}

/// Highest level whose threshold is at or below `sinr`.
pub fn select_mcs(sinr: f64, table: &[McsLevel]) -> Option<&McsLevel> {
    table.iter().rev().find(|l| l.sinr_threshold_db <= sinr)
}

/// RBs needed to carry `tp` bits in one TTI at `mcs`.
pub fn rb_requirement(tp: f64, mcs: &McsLevel, cfg: &SpectrumConfig) -> Result<u32> {
    if !(tp > 0.0) || !tp.is_finite() {
        return Err(Error::InvalidParameter(format!("throughput {tp} must be positive")));
    }
    let bits_per_rb = mcs.bits_per_re * cfg.res_per_rb_per_tti as f64;
    // Tolerance absorbs representation error in fractional code rates.
    let rbs = (tp / bits_per_rb - 1e-9).ceil().max(1.0);
    Ok(rbs as u32)
}

/// Per-(sub-band, camera) channel tables, all indexed `[m][k]`.
/// `rb_req[m][k] == None` means camera k cannot transmit on sub-band m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelState {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sinr_db: Option<Vec<Vec<f64>>>,
    /// MCS level ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcs: Option<Vec<Vec<Option<u8>>>>,
    pub rb_req: Vec<Vec<Option<u32>>>,
}

impl ChannelState {
    /// Builds a state from per-camera rows of RB requirements, one entry
    /// per sub-band (the layout of a "camera x sub-band" table).
    pub fn from_camera_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("camera rows must be non-empty and equal length".into()));
        }
        if rows.iter().flatten().any(|&r| r == 0) {
            return Err(Error::InvalidParameter("RB requirements must be positive".into()));
        }
        let rb_req = (0..m)
            .map(|sb| rows.iter().map(|row| Some(row[sb])).collect())
            .collect();
        Ok(Self {
            sinr_db: None,
            mcs: None,
            rb_req,
        })
    }

    pub fn num_sub_bands(&self) -> usize {
        self.rb_req.len()
    }

    pub fn num_cameras(&self) -> usize {
        self.rb_req.first().map_or(0, Vec::len)
    }

    #[inline]
    pub fn r(&self, sub_band: usize, camera: usize) -> Option<u32> {
        self.rb_req[sub_band][camera]
    }

    pub fn validate(&self, sub_bands: usize, cameras: usize) -> Result<()> {
        fn shape_ok<T>(t: &[Vec<T>], rows: usize, cols: usize) -> bool {
            t.len() == rows && t.iter().all(|r| r.len() == cols)
        }
        if !shape_ok(&self.rb_req, sub_bands, cameras) {
            return Err(Error::Dimension(format!(
                "rb_req must be {sub_bands}x{cameras}"
            )));
        }
        if self.rb_req.iter().flatten().any(|r| *r == Some(0)) {
            return Err(Error::InvalidParameter("RB requirements must be positive".into()));
        }
        if let Some(mcs) = &self.mcs {
            if !shape_ok(mcs, sub_bands, cameras) {
                return Err(Error::Dimension("mcs table shape".into()));
            }
            for (mrow, rrow) in mcs.iter().zip(&self.rb_req) {
                if mrow.iter().zip(rrow).any(|(a, b)| a.is_some() != b.is_some()) {
                    return Err(Error::InvalidParameter(
                        "rb_req present iff mcs present".into(),
                    ));
                }
            }
        }
        if let Some(s) = &self.sinr_db {
            if !shape_ok(s, sub_bands, cameras) {
                return Err(Error::Dimension("sinr table shape".into()));
            }
        }
        Ok(())
    }
}

/// SINR -> MCS -> RB requirement for every (sub-band, camera).
pub fn build_channel_state(
    scenario: &Scenario,
    cfg: &SpectrumConfig,
    env: &ChannelEnv,
) -> Result<ChannelState> {
    cfg.validate()?;
    env.validate()?;
    let geometry = scenario.geometry.as_ref().ok_or_else(|| {
        Error::Precondition("channel state needs camera positions (scenario has no geometry)".into())
    })?;
    let m_count = cfg.num_sub_bands();
    let mut sinr = vec![vec![0.0; geometry.cameras.len()]; m_count];
    let mut mcs = vec![vec![None; geometry.cameras.len()]; m_count];
    let mut rb_req = vec![vec![None; geometry.cameras.len()]; m_count];
    for m in 0..m_count {
        for (k, cam) in geometry.cameras.iter().enumerate() {
            let s = sinr_db(cam, k, m, geometry.base_station, env);
            sinr[m][k] = s;
            if let Some(level) = select_mcs(s, &env.mcs_table) {
                mcs[m][k] = Some(level.id);
                rb_req[m][k] = Some(rb_requirement(cam.tp(), level, cfg)?);
            }
        }
    }
    Ok(ChannelState {
        sinr_db: Some(sinr),
        mcs: Some(mcs),
        rb_req,
    })
}
