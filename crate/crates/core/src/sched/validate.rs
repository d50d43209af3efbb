use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AllocationMap, Occupant, ScheduleInstance};

/// One breach of the scheduling constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Shape { detail: String },
    /// `x[m][k]` is neither 0 nor 1.
    NonBinary { sub_band: usize, camera: usize, value: u8 },
    /// A camera is assigned to more than one sub-band.
    MultipleSubBands { camera: usize, sub_bands: Vec<usize> },
    /// No scheduled camera covers the object.
    Uncovered { object: usize },
    /// Allocated RBs on a sub-band exceed its size.
    CapacityExceeded { sub_band: usize, used: u32, capacity: u32 },
    /// Camera placed on a sub-band where it has no usable MCS.
    NoUsableMcs { camera: usize, sub_band: usize },
    RbCountMismatch { camera: usize, sub_band: usize, expected: u32, actual: u32 },
    MissingRange { camera: usize, sub_band: usize },
    /// A camera range that `x` does not back.
    StrayRange { camera: usize, sub_band: usize },
    /// Camera holds more than one block on the sub-band.
    NonContiguous { camera: usize, sub_band: usize },
    OutOfBounds { sub_band: usize, first_rb: u32, rb_count: u32 },
    Overlap { sub_band: usize, rb: u32 },
    RemainingMismatch { sub_band: usize, recorded: u32, actual: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "shape: {detail}"),
            Violation::NonBinary { sub_band, camera, value } => {
                write!(f, "x[{sub_band}][{camera}] = {value} is not binary")
            }
            Violation::MultipleSubBands { camera, sub_bands } => {
                write!(f, "camera {camera} on several sub-bands {sub_bands:?}")
            }
            Violation::Uncovered { object } => write!(f, "object {object} uncovered"),
            Violation::CapacityExceeded { sub_band, used, capacity } => {
                write!(f, "sub-band {sub_band} uses {used} of {capacity} RBs")
            }
            Violation::NoUsableMcs { camera, sub_band } => {
                write!(f, "camera {camera} has no usable MCS on sub-band {sub_band}")
            }
            Violation::RbCountMismatch { camera, sub_band, expected, actual } => write!(
                f,
                "camera {camera} holds {actual} RBs on sub-band {sub_band}, needs {expected}"
            ),
            Violation::MissingRange { camera, sub_band } => {
                write!(f, "camera {camera} assigned to sub-band {sub_band} without RBs")
            }
            Violation::StrayRange { camera, sub_band } => {
                write!(f, "camera {camera} holds RBs on unassigned sub-band {sub_band}")
            }
            Violation::NonContiguous { camera, sub_band } => {
                write!(f, "camera {camera} RBs on sub-band {sub_band} are not contiguous")
            }
            Violation::OutOfBounds { sub_band, first_rb, rb_count } => write!(
                f,
                "range {first_rb}+{rb_count} outside sub-band {sub_band}"
            ),
            Violation::Overlap { sub_band, rb } => {
                write!(f, "RB {rb} of sub-band {sub_band} allocated twice")
            }
            Violation::RemainingMismatch { sub_band, recorded, actual } => write!(
                f,
                "sub-band {sub_band} records {recorded} free RBs, actually {actual}"
            ),
        }
    }
}

/// Checks single sub-band per camera, full coverage, per-sub-band
/// capacity, binary `x`, and that the physical ranges are contiguous,
/// disjoint and consistent with `x` and the RB requirements. Returns every
/// violation found; empty means valid.
pub fn validate_allocation(alloc: &AllocationMap, inst: &ScheduleInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let m_count = inst.num_sub_bands();
    let k_count = inst.num_cameras();
    let w = inst.spectrum.rbs_per_subband;

    if alloc.x.len() != m_count || alloc.x.iter().any(|r| r.len() != k_count) {
        out.push(Violation::Shape {
            detail: format!("x must be {m_count}x{k_count}"),
        });
        return out;
    }
    if alloc.remaining.len() != m_count || alloc.rbs_per_subband != w {
        out.push(Violation::Shape {
            detail: "remaining / sub-band size disagree with spectrum".into(),
        });
        return out;
    }

    for (m, row) in alloc.x.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            if v > 1 {
                out.push(Violation::NonBinary {
                    sub_band: m,
                    camera: k,
                    value: v,
                });
            }
        }
    }

    for k in 0..k_count {
        let bands: Vec<usize> = (0..m_count).filter(|&m| alloc.x[m][k] != 0).collect();
        if bands.len() > 1 {
            out.push(Violation::MultipleSubBands {
                camera: k,
                sub_bands: bands.clone(),
            });
        }
        for &m in &bands {
            if inst.r(m, k).is_none() {
                out.push(Violation::NoUsableMcs { camera: k, sub_band: m });
            }
        }
    }

    let covered = alloc.covered_objects(&inst.scenario);
    for (n, &c) in covered.iter().enumerate() {
        if !c {
            out.push(Violation::Uncovered { object: n });
        }
    }

    // Constraint (3) on declared requirements, flows included.
    for m in 0..m_count {
        let cams: u32 = (0..k_count)
            .filter(|&k| alloc.x[m][k] != 0)
            .map(|k| u32::from(alloc.x[m][k]) * inst.r(m, k).unwrap_or(0))
            .sum();
        let flows: u32 = alloc
            .ranges
            .iter()
            .filter(|r| r.sub_band == m && matches!(r.occupant, Occupant::Flow(_)))
            .map(|r| r.rb_count)
            .sum();
        if cams + flows > w {
            out.push(Violation::CapacityExceeded {
                sub_band: m,
                used: cams + flows,
                capacity: w,
            });
        }
    }

    // Physical layout.
    let mut occupancy = vec![vec![false; w as usize]; m_count];
    let mut actual_used = vec![0u32; m_count];
    for r in &alloc.ranges {
        if r.sub_band >= m_count {
            out.push(Violation::Shape {
                detail: format!("range on sub-band {} out of range", r.sub_band),
            });
            continue;
        }
        if r.rb_count == 0 || r.end() > w {
            out.push(Violation::OutOfBounds {
                sub_band: r.sub_band,
                first_rb: r.first_rb,
                rb_count: r.rb_count,
            });
            continue;
        }
        actual_used[r.sub_band] += r.rb_count;
        for rb in r.first_rb..r.end() {
            let cell = &mut occupancy[r.sub_band][rb as usize];
            if *cell {
                out.push(Violation::Overlap {
                    sub_band: r.sub_band,
                    rb,
                });
            }
            *cell = true;
        }
    }

    for k in 0..k_count {
        for m in 0..m_count {
            let held: Vec<u32> = alloc
                .ranges
                .iter()
                .filter(|r| r.occupant == Occupant::Camera(k) && r.sub_band == m)
                .map(|r| r.rb_count)
                .collect();
            let assigned = alloc.x[m][k] != 0;
            match (assigned, held.len()) {
                (true, 0) => out.push(Violation::MissingRange { camera: k, sub_band: m }),
                (false, n) if n > 0 => out.push(Violation::StrayRange { camera: k, sub_band: m }),
                (_, n) if n > 1 => out.push(Violation::NonContiguous { camera: k, sub_band: m }),
                _ => {}
            }
            if assigned && held.len() == 1 {
                if let Some(expected) = inst.r(m, k) {
                    if held[0] != expected {
                        out.push(Violation::RbCountMismatch {
                            camera: k,
                            sub_band: m,
                            expected,
                            actual: held[0],
                        });
                    }
                }
            }
        }
    }

    for m in 0..m_count {
        let actual = w.saturating_sub(actual_used[m]);
        if actual_used[m] > w {
            out.push(Violation::CapacityExceeded {
                sub_band: m,
                used: actual_used[m],
                capacity: w,
            });
        }
        if alloc.remaining[m] != actual {
            out.push(Violation::RemainingMismatch {
                sub_band: m,
                recorded: alloc.remaining[m],
                actual,
            });
        }
    }
    out
}
