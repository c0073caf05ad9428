use std::io::Write;
use std::process::{Command, Stdio};

use super::SolverError;
use crate::io::{instance_to_json, samples_from_json};
use crate::model::{IsingModel, SampleSet};

/// Largest tolerated gap between a reported and a recomputed energy.
pub const EXTERNAL_ENERGY_TOLERANCE: f64 = 1e-6;

/// Runs `command` (program then arguments) with the instance JSON on
/// stdin and parses a sample-set JSON from its stdout.
pub fn external_solver(model: &IsingModel, command: &[String]) -> Result<SampleSet, SolverError> {
    let (program, args) =
        command.split_first().ok_or_else(|| SolverError::InvalidConfig("empty external command".into()))?;
    let mut child =
        Command::new(program).args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn()?;

    let input = instance_to_json(model, None, None);
    let mut stdin = child.stdin.take().expect("stdin is piped");
    // a writer thread keeps a full stdout pipe from deadlocking the child
    let writer = std::thread::spawn(move || {
        // a child that exits without reading stdin is not an error here
        let _ = stdin.write_all(input.as_bytes());
    });
    let out = child.wait_with_output()?;
    let _ = writer.join();

    if !out.status.success() {
        return Err(SolverError::NonZeroExit {
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        });
    }
    let text = String::from_utf8(out.stdout).map_err(|e| SolverError::MalformedOutput(e.to_string()))?;
    let set = samples_from_json(&text).map_err(|e| SolverError::MalformedOutput(e.to_string()))?;
    set.verify(model, EXTERNAL_ENERGY_TOLERANCE).map_err(SolverError::EnergyMismatch)?;
    Ok(set)
}
