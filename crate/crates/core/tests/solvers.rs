use std::collections::BTreeMap;
use std::sync::Arc;

use isingbench::generator::{generate_instance, uniform_hardness_family};
use isingbench::io::samples_to_json;
use isingbench::model::{ising_energy, IsingModel, SampleSet, SpinState};
use isingbench::solvers::{
    external_solver, simulated_annealing, simulated_quantum_annealing, solve_exact, BetaSchedule, SaConfig,
    SolverError, SqaConfig,
};
use isingbench::topology::HardwareGraph;

fn uniform_instance(n: usize, seed: u64) -> IsingModel {
    let (h, j) = uniform_hardness_family(1.0).unwrap();
    generate_instance(Arc::new(HardwareGraph::complete(n)), &h, &j, seed).unwrap()
}

fn sa(reads: usize, sweeps: usize, seed: u64) -> SaConfig {
    SaConfig { num_reads: reads, sweeps, seed, ..SaConfig::default() }
}

fn assert_sound(model: &IsingModel, set: &SampleSet, floor: f64) {
    set.verify(model, 1e-9).unwrap();
    for r in &set.records {
        assert!(r.energy >= floor - 1e-9, "{} below ground {floor}", r.energy);
    }
}

#[test]
fn exact_matches_independent_rescan() {
    let m = uniform_instance(12, 4);
    let mut best = f64::INFINITY;
    let mut argmin = Vec::new();
    for b in 0..4096u64 {
        let s = SpinState::from_bits(b, 12);
        let e = ising_energy(&m, &s).unwrap();
        if e < best {
            best = e;
            argmin = vec![s];
        } else if e == best {
            argmin.push(s);
        }
    }
    let set = solve_exact(&m).unwrap();
    assert_eq!(set.min_energy(), Some(best));
    let found: Vec<&SpinState> = set.records.iter().map(|r| &r.state).collect();
    assert_eq!(found, argmin.iter().collect::<Vec<_>>());
}

#[test]
fn zero_model_any_state() {
    let g = Arc::new(HardwareGraph::complete(5));
    let m = IsingModel::new(g, vec![0.0; 5], vec![0.0; 10]).unwrap();
    let s = simulated_annealing(&m, &sa(4, 10, 1)).unwrap();
    assert!(s.records.iter().all(|r| r.energy == 0.0));
    let q = simulated_quantum_annealing(&m, &SqaConfig { num_reads: 2, sweeps: 10, ..SqaConfig::default() }).unwrap();
    assert!(q.records.iter().all(|r| r.energy == 0.0));
}

#[test]
fn ferromagnetic_chain() {
    let g = Arc::new(HardwareGraph::custom(20, (0..19).map(|i| (i, i + 1))).unwrap());
    let m = IsingModel::new(g, vec![0.0; 20], vec![-1.0; 19]).unwrap();
    let s = simulated_annealing(&m, &sa(20, 1000, 3)).unwrap();
    assert_eq!(s.min_energy(), Some(-19.0));
}

#[test]
fn sa_recovers_ground_states() {
    let mut hits = 0;
    for seed in 0..20 {
        let m = uniform_instance(16, 1000 + seed);
        let ground = solve_exact(&m).unwrap().min_energy().unwrap();
        let s = simulated_annealing(&m, &sa(100, 1000, seed)).unwrap();
        assert_sound(&m, &s, ground);
        assert_eq!(s.num_records(), 100);
        if s.min_energy().unwrap() <= ground + 1e-9 {
            hits += 1;
        }
    }
    assert!(hits >= 19, "{hits}/20");
}

#[test]
fn sqa_recovers_ground_states() {
    let cfg = |seed| SqaConfig { num_reads: 30, sweeps: 300, trotter_slices: 16, seed, ..SqaConfig::default() };
    let mut hits = 0;
    for seed in 0..10 {
        let m = uniform_instance(12, 2000 + seed);
        let ground = solve_exact(&m).unwrap().min_energy().unwrap();
        let s = simulated_quantum_annealing(&m, &cfg(seed)).unwrap();
        assert_sound(&m, &s, ground);
        if s.min_energy().unwrap() <= ground + 1e-9 {
            hits += 1;
        }
    }
    assert!(hits >= 9, "{hits}/10");
}

// Longer anneals do not do worse on average.
#[test]
fn sa_quality_improves_with_sweeps() {
    let mean = |sweeps| {
        let mut total = 0.0;
        for seed in 0..30 {
            let m = uniform_instance(16, 3000 + seed);
            let s = simulated_annealing(&m, &sa(5, sweeps, seed)).unwrap();
            total += s.records.iter().map(|r| r.energy).sum::<f64>() / 5.0;
        }
        total / 30.0
    };
    assert!(mean(2000) <= mean(50));
}

fn four_spin_model() -> IsingModel {
    let g = Arc::new(HardwareGraph::custom(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap());
    IsingModel::new(g, vec![0.3, -0.2, 0.1, 0.0], vec![-0.5, 0.4, -0.3, 0.2, 0.25]).unwrap()
}

// Pearson statistic of final states against exact Boltzmann weights.
fn chi_square(model: &IsingModel, set: &SampleSet, temperature: f64) -> f64 {
    let weights: Vec<f64> =
        (0..16u64).map(|b| (-ising_energy(model, &SpinState::from_bits(b, 4)).unwrap() / temperature).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut counts = [0u64; 16];
    for r in &set.records {
        let b = r.state.as_slice().iter().enumerate().filter(|(_, &s)| s == 1).map(|(i, _)| 1u64 << i).sum::<u64>();
        counts[b as usize] += r.count;
    }
    let total = set.total_count() as f64;
    counts
        .iter()
        .zip(&weights)
        .map(|(&c, &w)| {
            let expect = total * w / z;
            (c as f64 - expect).powi(2) / expect
        })
        .sum()
}

// One Trotter slice has no inter-slice term: the sampler is Metropolis at
// temperature T, and its final states follow the Boltzmann law.
#[test]
fn single_slice_samples_boltzmann() {
    let m = four_spin_model();
    let t = 0.7;
    let cfg = SqaConfig {
        num_reads: 20_000,
        sweeps: 50,
        trotter_slices: 1,
        temperature: t,
        gamma_initial: 1e-6,
        gamma_final: 1e-8,
        seed: 17,
    };
    let s = simulated_quantum_annealing(&m, &cfg).unwrap();
    // 15 degrees of freedom; 99.9% point is 37.7
    let chi = chi_square(&m, &s, t);
    assert!(chi < 37.7, "chi^2 = {chi}");

    let beta = 1.0 / t;
    let plain = SaConfig {
        num_reads: 20_000,
        sweeps: 50,
        beta_schedule: BetaSchedule::Linear,
        beta_hot: Some(beta),
        beta_cold: Some(beta * (1.0 + 1e-12)),
        seed: 17,
    };
    let chi = chi_square(&m, &simulated_annealing(&m, &plain).unwrap(), t);
    assert!(chi < 37.7, "chi^2 = {chi}");
}

#[test]
fn solvers_are_deterministic_across_thread_counts() {
    let m = uniform_instance(14, 8);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = simulated_annealing(&m, &sa(16, 200, 5)).unwrap();
    let b = pool.install(|| simulated_annealing(&m, &sa(16, 200, 5))).unwrap();
    assert_eq!(a, b);
    let cfg = SqaConfig { num_reads: 8, sweeps: 50, trotter_slices: 4, seed: 6, ..SqaConfig::default() };
    let a = simulated_quantum_annealing(&m, &cfg).unwrap();
    let b = pool.install(|| simulated_quantum_annealing(&m, &cfg)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exact_solver_refuses_large_models() {
    let m = uniform_instance(25, 1);
    assert!(matches!(solve_exact(&m), Err(SolverError::TooLarge { n: 25, .. })));
}

fn echo_command(dir: &tempfile::TempDir, text: &str) -> Vec<String> {
    let path = dir.path().join("out.json");
    std::fs::write(&path, text).unwrap();
    vec!["sh".into(), "-c".into(), format!("cat > /dev/null; cat '{}'", path.display())]
}

#[test]
fn external_echo_is_parsed() {
    let m = uniform_instance(6, 2);
    let expected = simulated_annealing(&m, &sa(3, 50, 1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let got = external_solver(&m, &echo_command(&dir, &samples_to_json(&expected, None))).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn external_energy_mismatch() {
    let m = uniform_instance(6, 2);
    let mut set = SampleSet::from_states(&m, "ext", BTreeMap::new(), 0, vec![SpinState::all_up(6)]);
    set.records[0].energy += 0.01;
    let dir = tempfile::tempdir().unwrap();
    let err = external_solver(&m, &echo_command(&dir, &samples_to_json(&set, None))).unwrap_err();
    assert!(matches!(err, SolverError::EnergyMismatch(_)), "{err}");
}

#[test]
fn external_failures_are_identified() {
    let m = uniform_instance(4, 2);
    let sh = |script: &str| vec!["sh".to_string(), "-c".to_string(), script.to_string()];
    assert!(matches!(external_solver(&m, &sh("echo boom >&2; exit 3")), Err(SolverError::NonZeroExit { .. })));
    assert!(matches!(external_solver(&m, &sh("echo not json")), Err(SolverError::MalformedOutput(_))));
    assert!(matches!(external_solver(&m, &["/nonexistent/solver".to_string()]), Err(SolverError::Spawn(_))));
}
