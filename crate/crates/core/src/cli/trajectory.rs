//! Trajectory export: one CSV row per component per iterate.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{complex_strings, SolveReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub k: usize,
    /// 1-based.
    pub component_index: usize,
    pub re: String,
    pub im: String,
}

/// Points of `x^(0), ..., x^(k)`, with components written like the JSON
/// report at the same `digits`.
pub fn trajectory_points(report: &SolveReport, digits: Option<usize>) -> Result<Vec<TrajectoryPoint>> {
    if report.trace.is_empty() {
        return Err(Error::Config("report has no iterates".into()));
    }
    Ok(report
        .trace
        .iter()
        .flat_map(|rec| {
            rec.x.iter().enumerate().map(move |(i, z)| {
                let [re, im] = complex_strings(z, digits);
                TrajectoryPoint { k: rec.k, component_index: i + 1, re, im }
            })
        })
        .collect())
}

pub fn write_trajectories<W: Write>(report: &SolveReport, digits: Option<usize>, out: W) -> Result<usize> {
    let points = trajectory_points(report, digits)?;
    let mut w = csv::Writer::from_writer(out);
    for p in &points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(points.len())
}

pub fn export_trajectories(report: &SolveReport, path: &Path, digits: Option<usize>) -> Result<usize> {
    // check before creating the file
    trajectory_points(report, digits)?;
    write_trajectories(report, digits, std::fs::File::create(path)?)
}

pub fn read_trajectories<R: Read>(input: R) -> Result<Vec<TrajectoryPoint>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
