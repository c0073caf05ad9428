use std::sync::Arc;

use isingbench::generator::{
    cbfm_distributions, clip_to_ranges, generate_instance, sample_coefficient, uniform_hardness_family,
    CoefficientDistribution, GeneratorError,
};
use isingbench::model::{hardness_ratio, Interval, IsingModel};
use isingbench::rng::{substream, Domain};
use isingbench::topology::{build_chimera, build_pegasus, HardwareGraph};

fn draws(dist: &CoefficientDistribution, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, Domain::MonteCarlo, 0);
    (0..n).map(|_| sample_coefficient(dist, &mut rng)).collect()
}

fn freq(values: &[f64], v: f64) -> f64 {
    values.iter().filter(|&&x| x == v).count() as f64 / values.len() as f64
}

#[test]
fn degenerate_table_is_constant() {
    let d = CoefficientDistribution::discrete(vec![(0.0, 1.0)]).unwrap();
    assert!(draws(&d, 1000, 1).iter().all(|&x| x == 0.0));
}

#[test]
fn cbfm_coupling_frequency() {
    let (_, j) = cbfm_distributions();
    let v = draws(&j, 100_000, 2);
    assert!((freq(&v, 1.0) - 0.55).abs() < 0.01);
}

#[test]
fn cbfm_tables() {
    let (h, j) = cbfm_distributions();
    assert_eq!(j.probability_of(0.0), 0.35);
    assert_eq!(h.probability_of(-1.0), 0.85);
    assert_eq!(h.probability_of(1.0), 0.0);
    for d in [h, j] {
        let CoefficientDistribution::DiscreteTable { table } = d else { panic!("discrete") };
        assert!((table.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn truncated_normal_stays_in_window() {
    let d = CoefficientDistribution::truncated_normal(0.0, 1.0, -1.0, 1.0).unwrap();
    let v = draws(&d, 100_000, 3);
    assert!(v.iter().all(|x| (-1.0..=1.0).contains(x)));
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    assert!(mean.abs() < 0.01);
}

// Sample moments within three standard errors of the closed forms.
#[test]
fn moments_match_closed_forms() {
    let (ch, cj) = cbfm_distributions();
    let dists = [
        ch,
        cj,
        CoefficientDistribution::uniform(-4.0, 4.0).unwrap(),
        CoefficientDistribution::truncated_normal(0.5, 1.0, -1.0, 3.0).unwrap(),
    ];
    for (i, d) in dists.iter().enumerate() {
        let n = 100_000;
        let v = draws(d, n, 10 + i as u64);
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let se_mean = (d.variance() / n as f64).sqrt();
        assert!((mean - d.mean()).abs() < 3.0 * se_mean.max(1e-12), "{d:?} mean {mean}");
        let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        let se_var = ((m4 - var * var) / n as f64).sqrt();
        assert!((var - d.variance()).abs() < 3.0 * se_var.max(1e-12), "{d:?} var {var}");
    }
}

#[test]
fn hardness_family() {
    let (h, j) = uniform_hardness_family(4.0).unwrap();
    assert_eq!(h.support(), (-4.0, 4.0));
    assert_eq!(j.support(), (-1.0, 1.0));
    assert_eq!(uniform_hardness_family(0.5).unwrap().0.support(), (-0.5, 0.5));
    assert!(matches!(uniform_hardness_family(4.1), Err(GeneratorError::ExceedsRange { .. })));
    assert!(uniform_hardness_family(0.0).is_err());
}

#[test]
fn fixed_distributions_fix_every_coefficient() {
    let g = Arc::new(build_chimera(1, 1, 4).unwrap());
    let h = CoefficientDistribution::discrete(vec![(-1.0, 1.0)]).unwrap();
    let j = CoefficientDistribution::discrete(vec![(1.0, 1.0)]).unwrap();
    let m = generate_instance(g, &h, &j, 9).unwrap();
    assert_eq!((m.h().len(), m.j().len()), (8, 16));
    assert!(m.h().iter().all(|&x| x == -1.0) && m.j().iter().all(|&x| x == 1.0));
}

#[test]
fn cbfm_frequencies_on_pegasus() {
    let g = Arc::new(build_pegasus(16).unwrap());
    let (h, j) = cbfm_distributions();
    let mut hs = Vec::new();
    let mut js = Vec::new();
    for seed in 0..3 {
        let m = generate_instance(g.clone(), &h, &j, seed).unwrap();
        hs.extend_from_slice(m.h());
        js.extend_from_slice(m.j());
    }
    assert!(js.len() > 100_000);
    for (v, p) in [(0.0, 0.35), (-1.0, 0.10), (1.0, 0.55)] {
        assert!((freq(&js, v) - p).abs() < 0.02);
    }
    for (v, p) in [(0.0, 0.15), (-1.0, 0.85), (1.0, 0.0)] {
        assert!((freq(&hs, v) - p).abs() < 0.02);
    }
}

#[test]
fn seeds_determine_instances() {
    let g = Arc::new(build_pegasus(4).unwrap());
    let (h, j) = uniform_hardness_family(2.0).unwrap();
    let a = generate_instance(g.clone(), &h, &j, 42).unwrap();
    let b = generate_instance(g.clone(), &h, &j, 42).unwrap();
    let c = generate_instance(g, &h, &j, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.h(), c.h());
}

#[test]
fn thread_count_does_not_change_instances() {
    let g = Arc::new(build_pegasus(6).unwrap());
    let (h, j) = cbfm_distributions();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| generate_instance(g.clone(), &h, &j, 5).unwrap());
    let parallel = generate_instance(g, &h, &j, 5).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn support_outside_range_is_rejected() {
    let g = Arc::new(HardwareGraph::complete(3));
    let wide = CoefficientDistribution::uniform(-2.0, 2.0).unwrap();
    let (h, _) = uniform_hardness_family(1.0).unwrap();
    assert!(matches!(generate_instance(g, &h, &wide, 0), Err(GeneratorError::SupportOutsideRange { .. })));
}

#[test]
fn clipping() {
    let g = Arc::new(HardwareGraph::complete(3));
    let wide = Interval { lo: -10.0, hi: 10.0 };
    let m = IsingModel::with_ranges(g.clone(), vec![5.0, -5.0, 1.0], vec![0.5, 2.0, -0.5], wide, wide).unwrap();
    let c = clip_to_ranges(&m, Interval { lo: -4.0, hi: 4.0 }, Interval { lo: -1.0, hi: 1.0 }).unwrap();
    assert_eq!(c.model.h(), &[4.0, -4.0, 1.0]);
    assert_eq!(c.model.j(), &[0.5, 1.0, -0.5]);
    assert_eq!((c.clipped_h, c.clipped_j), (2, 1));
    let expected = hardness_ratio(&c.model).unwrap();
    let sigma = |v: &[f64]| {
        let mu = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
    };
    assert!((expected.sigma_h - sigma(&[4.0, -4.0, 1.0])).abs() < 1e-15);

    let valid = IsingModel::new(g, vec![1.0, 2.0, 3.0], vec![0.1, 0.2, 0.3]).unwrap();
    let same = clip_to_ranges(&valid, valid.h_range(), valid.j_range()).unwrap();
    assert_eq!(same.clip_count(), 0);
    assert_eq!(same.model, valid);
}
