use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::channel::SpectrumConfig;
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Who holds a block of RBs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Occupant {
    Camera(usize),
    /// Background traffic flow id.
    Flow(u64),
}

/// A contiguous run of RBs inside one sub-band. `first_rb` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RbRange {
    pub occupant: Occupant,
    pub sub_band: usize,
    pub first_rb: u32,
    pub rb_count: u32,
}

impl RbRange {
    pub fn end(&self) -> u32 {
        self.first_rb + self.rb_count
    }
}

/// Packs requests `(sub_band, rb_count)` left to right in request order.
/// Returns `(first_rb, rb_count)` per request.
pub fn place_contiguous(requests: &[(usize, u32)], cfg: &SpectrumConfig) -> Result<Vec<(u32, u32)>> {
    let mut cursor = vec![0u32; cfg.num_sub_bands()];
    requests
        .iter()
        .map(|&(m, count)| {
            let c = cursor.get_mut(m).ok_or_else(|| {
                Error::Dimension(format!("sub-band {m} out of range"))
            })?;
            let available = cfg.rbs_per_subband - *c;
            if count > available {
                return Err(Error::CapacityExceeded {
                    sub_band: m,
                    requested: count,
                    available,
                });
            }
            let first = *c;
            *c += count;
            Ok((first, count))
        })
        .collect()
}

/// Camera-to-sub-band assignment `x[m][k]`, the physical RB ranges that
/// realize it, and free RBs `remaining[m]` per sub-band.
///
/// Allocation helpers keep every sub-band left-packed: occupied RBs form a
/// prefix, in allocation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationMap {
    pub rbs_per_subband: u32,
    pub x: Vec<Vec<u8>>,
    pub ranges: Vec<RbRange>,
    pub remaining: Vec<u32>,
}

impl AllocationMap {
    pub fn empty(spectrum: &SpectrumConfig, cameras: usize) -> Self {
        let m = spectrum.num_sub_bands();
        Self {
            rbs_per_subband: spectrum.rbs_per_subband,
            x: vec![vec![0; cameras]; m],
            ranges: Vec::new(),
            remaining: vec![spectrum.rbs_per_subband; m],
        }
    }

    pub fn num_sub_bands(&self) -> usize {
        self.x.len()
    }

    pub fn num_cameras(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn sub_band_of(&self, camera: usize) -> Option<usize> {
        (0..self.num_sub_bands()).find(|&m| self.x[m][camera] != 0)
    }

    pub fn is_scheduled(&self, camera: usize) -> bool {
        self.sub_band_of(camera).is_some()
    }

    pub fn scheduled_cameras(&self) -> Vec<usize> {
        (0..self.num_cameras()).filter(|&k| self.is_scheduled(k)).collect()
    }

    pub fn cameras_in(&self, sub_band: usize) -> Vec<usize> {
        (0..self.num_cameras())
            .filter(|&k| self.x[sub_band][k] != 0)
            .collect()
    }

    pub fn range_of(&self, occupant: Occupant) -> Option<&RbRange> {
        self.ranges.iter().find(|r| r.occupant == occupant)
    }

    pub fn used(&self, sub_band: usize) -> u32 {
        self.rbs_per_subband - self.remaining[sub_band]
    }

    pub fn total_used(&self) -> u32 {
        (0..self.num_sub_bands()).map(|m| self.used(m)).sum()
    }

    fn place(&mut self, occupant: Occupant, sub_band: usize, rbs: u32) -> Result<()> {
        let available = *self
            .remaining
            .get(sub_band)
            .ok_or_else(|| Error::Dimension(format!("sub-band {sub_band} out of range")))?;
        if rbs > available {
            return Err(Error::CapacityExceeded {
                sub_band,
                requested: rbs,
                available,
            });
        }
        self.ranges.push(RbRange {
            occupant,
            sub_band,
            first_rb: self.rbs_per_subband - available,
            rb_count: rbs,
        });
        self.remaining[sub_band] -= rbs;
        Ok(())
    }

    /// Places camera `k` at the end of sub-band `m`'s occupied prefix.
    pub fn assign_camera(&mut self, camera: usize, sub_band: usize, rbs: u32) -> Result<()> {
        if camera >= self.num_cameras() {
            return Err(Error::Dimension(format!("camera {camera} out of range")));
        }
        if let Some(m) = self.sub_band_of(camera) {
            return Err(Error::Precondition(format!(
                "camera {camera} already scheduled on sub-band {m}"
            )));
        }
        self.place(Occupant::Camera(camera), sub_band, rbs)?;
        self.x[sub_band][camera] = 1;
        Ok(())
    }

    pub fn assign_flow(&mut self, flow: u64, sub_band: usize, rbs: u32) -> Result<()> {
        if self.range_of(Occupant::Flow(flow)).is_some() {
            return Err(Error::Precondition(format!("flow {flow} already placed")));
        }
        self.place(Occupant::Flow(flow), sub_band, rbs)
    }

    fn release(&mut self, occupant: Occupant) -> Option<RbRange> {
        let idx = self.ranges.iter().position(|r| r.occupant == occupant)?;
        let range = self.ranges.remove(idx);
        self.remaining[range.sub_band] += range.rb_count;
        self.repack(range.sub_band);
        Some(range)
    }

    /// Frees camera `k`'s RBs and re-packs its sub-band.
    pub fn release_camera(&mut self, camera: usize) -> Option<RbRange> {
        let range = self.release(Occupant::Camera(camera))?;
        self.x[range.sub_band][camera] = 0;
        Some(range)
    }

    pub fn release_flow(&mut self, flow: u64) -> Option<RbRange> {
        self.release(Occupant::Flow(flow))
    }

    /// Shifts the ranges of `sub_band` left, keeping their order.
    fn repack(&mut self, sub_band: usize) {
        let mut cursor = 0;
        for r in self.ranges.iter_mut().filter(|r| r.sub_band == sub_band) {
            r.first_rb = cursor;
            cursor += r.rb_count;
        }
    }

    /// Which objects the scheduled cameras cover.
    pub fn covered_objects(&self, scenario: &Scenario) -> Vec<bool> {
        let mut covered = vec![false; scenario.num_objects()];
        for k in self.scheduled_cameras() {
            for (c, &hit) in covered.iter_mut().zip(&scenario.coverage[k]) {
                *c |= hit;
            }
        }
        covered
    }

    /// Tab-separated RB grid, one row per sub-band, with 1-based labels.
    pub fn render_grid(&self) -> String {
        let w = self.rbs_per_subband as usize;
        let mut out = String::new();
        for rb in 1..=w {
            let _ = write!(out, "\tRB{rb}");
        }
        out.push('\n');
        for m in 0..self.num_sub_bands() {
            let mut cells = vec![String::new(); w];
            for r in self.ranges.iter().filter(|r| r.sub_band == m) {
                let label = match r.occupant {
                    Occupant::Camera(k) => format!("Camera{}", k + 1),
                    Occupant::Flow(f) => format!("Flow{f}"),
                };
                for cell in cells.iter_mut().skip(r.first_rb as usize).take(r.rb_count as usize) {
                    *cell = label.clone();
                }
            }
            let _ = writeln!(out, "Sub-band {}\t{}", m + 1, cells.join("\t"));
        }
        out
    }
}

/// `z = sum_m sum_k x[m][k] * Q_k`.
pub fn objective_value(alloc: &AllocationMap, scenario: &Scenario) -> f64 {
    alloc
        .x
        .iter()
        .flat_map(|row| row.iter().enumerate())
        .map(|(k, &x)| f64::from(x) * scenario.qualities[k])
        .sum()
}
