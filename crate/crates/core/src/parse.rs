//! Byte-level entry points for every input format. These never panic on
//! malformed input; the fuzz targets call them directly.

use crate::capability::{CapabilityQuery, SweepSpec};
use crate::error::{Error, Result};
use crate::robot::Robot;
use crate::solution_sets::{IlsProblem, SolveReport};

fn text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::invalid(format!("input is not UTF-8: {e}")))
}

pub fn parse_problem(bytes: &[u8]) -> Result<IlsProblem> {
    IlsProblem::from_json(text(bytes)?)
}

pub fn parse_robot(bytes: &[u8]) -> Result<Robot> {
    Robot::from_json(text(bytes)?)
}

/// A result file as written by `solve`; certified shapes must be well formed.
pub fn parse_result(bytes: &[u8]) -> Result<SolveReport> {
    let r: SolveReport =
        serde_json::from_str(text(bytes)?).map_err(|e| Error::invalid(e.to_string()))?;
    if r.certified && r.to_approx().is_none() {
        return Err(Error::invalid(format!(
            "certified {} result lacks its shape data",
            r.shape
        )));
    }
    Ok(r)
}

pub fn parse_capability_query(bytes: &[u8]) -> Result<CapabilityQuery> {
    CapabilityQuery::from_json(text(bytes)?)
}

pub fn parse_sweep_spec(bytes: &[u8]) -> Result<SweepSpec> {
    SweepSpec::from_json(text(bytes)?)
}
