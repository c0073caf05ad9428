use std::collections::BTreeMap;

use rayon::prelude::*;

use super::SolverError;
use crate::model::{energy_of_spins, IsingModel, SampleRecord, SampleSet, SpinState};

/// Default spin-count cap for exhaustive enumeration.
pub const DEFAULT_EXACT_CAP: usize = 24;

// Candidates within this window of the running minimum are kept during
// the Gray-code walk and re-scored exactly at the end.
const CANDIDATE_WINDOW: f64 = 1e-6;

/// All ground states by exhaustive enumeration (at most 24 spins).
pub fn solve_exact(model: &IsingModel) -> Result<SampleSet, SolverError> {
    solve_exact_with_cap(model, DEFAULT_EXACT_CAP)
}

/// Exhaustive enumeration with an explicit size cap (hard limit 40).
///
/// The state space is split on the top bits into independent blocks; each
/// block is walked in Gray-code order with incremental energy updates.
/// Near-minimal states are re-scored from scratch, and every state within
/// `1e-9` (relative to `max(1, |E_min|)`) of the exact minimum is returned.
pub fn solve_exact_with_cap(model: &IsingModel, cap: usize) -> Result<SampleSet, SolverError> {
    let n = model.num_spins();
    if n > cap.min(40) {
        return Err(SolverError::TooLarge { n, cap });
    }
    let params = BTreeMap::from([("cap".to_string(), serde_json::json!(cap))]);
    if n == 0 {
        let rec = SampleRecord { state: SpinState::all_up(0), energy: 0.0, count: 1 };
        return Ok(SampleSet::new("exact", params, 0, vec![rec])?);
    }

    let block_bits = n.min(6);
    let inner_bits = n - block_bits;
    let candidates: Vec<(u64, f64)> = (0..1u64 << block_bits)
        .into_par_iter()
        .map(|block| scan_block(model, block << inner_bits, inner_bits))
        .reduce(Vec::new, merge_candidates);

    let exact: Vec<(u64, f64)> = candidates
        .into_iter()
        .map(|(bits, _)| (bits, energy_of_spins(model, SpinState::from_bits(bits, n).as_slice())))
        .collect();
    let e_min = exact.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * e_min.abs().max(1.0);
    let mut ground: Vec<(u64, f64)> = exact.into_iter().filter(|&(_, e)| e - e_min <= tol).collect();
    ground.sort_by_key(|&(bits, _)| bits);

    let records = ground
        .into_iter()
        .map(|(bits, energy)| SampleRecord { state: SpinState::from_bits(bits, n), energy, count: 1 })
        .collect();
    Ok(SampleSet::new("exact", params, 0, records)?)
}

fn merge_candidates(mut a: Vec<(u64, f64)>, b: Vec<(u64, f64)>) -> Vec<(u64, f64)> {
    a.extend(b);
    let min = a.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    a.retain(|&(_, e)| e <= min + CANDIDATE_WINDOW);
    a
}

// Walks the 2^inner states whose high bits are fixed by `base`.
fn scan_block(model: &IsingModel, base: u64, inner: usize) -> Vec<(u64, f64)> {
    let n = model.num_spins();
    let mut spins: Vec<i8> = SpinState::from_bits(base, n).as_slice().to_vec();
    let mut fields: Vec<f64> = (0..n).map(|i| model.local_field(&spins, i)).collect();
    let mut energy = energy_of_spins(model, &spins);
    let mut bits = base;
    let mut best = energy;
    let mut cands = vec![(bits, energy)];
    let csr = model.csr();

    for step in 1u64..(1u64 << inner) {
        let i = step.trailing_zeros() as usize;
        let s = f64::from(spins[i]);
        energy -= 2.0 * s * fields[i];
        spins[i] = -spins[i];
        bits ^= 1 << i;
        let (nbrs, ws) = csr.row(i);
        for (&k, &w) in nbrs.iter().zip(ws) {
            fields[k] -= 2.0 * s * w;
        }
        if energy <= best + CANDIDATE_WINDOW {
            if energy < best - CANDIDATE_WINDOW {
                cands.clear();
            }
            best = best.min(energy);
            cands.push((bits, energy));
        }
    }
    cands.retain(|&(_, e)| e <= best + CANDIDATE_WINDOW);
    cands
}
