//! Campaign runner and limit-law statistics.

use clique_process::complex::clique_complex;
use clique_process::experiment::*;
use clique_process::homology::{betti, betti_process, FieldChoice};
use clique_process::maximal::{hitting_time_t, FaceCountProcess};
use clique_process::process::{event_schedule, graph_at, trial_seed};
use clique_process::spectral::garland_certify;
use clique_process::EdgeWeights;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

fn jsonl(records: &[TrialRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_jsonl(records, &mut buf).unwrap();
    buf
}

#[test]
fn single_trial_equals_direct_pipeline() {
    let cfg = ExperimentConfig::new(30, 1, vec![0.0], 1, 77);
    let record = run_trials(&cfg).unwrap().remove(0);
    let w = EdgeWeights::generate(30, trial_seed(77, 0)).unwrap();
    let bp = betti_process(&w, 1, 0.0, FieldChoice::default()).unwrap();
    let fc = FaceCountProcess::new(&w, 1, 0.0).unwrap();
    assert_eq!(record.t, Some(hitting_time_t(&bp).unwrap().time));
    assert_eq!(record.t_prime, fc.hitting_time_t_prime());
    let t0 = record.counts[0].t;
    assert_eq!(record.counts[0].n_k, fc.count_nk(t0));
    assert_eq!(record.counts[0].beta_k, Some(bp.value_at(t0) as usize));
}

#[test]
fn output_is_independent_of_parallelism() {
    let mut cfg = ExperimentConfig::new(24, 1, vec![-1.0, 0.0, 1.0], 16, 0xfeed);
    let a = jsonl(&run_trials(&cfg).unwrap());
    cfg.parallelism = 8;
    let b = jsonl(&run_trials(&cfg).unwrap());
    assert_eq!(a, b);
    let mut k2 = ExperimentConfig::new(16, 2, vec![0.0], 6, 3);
    let c = jsonl(&run_trials(&k2).unwrap());
    k2.parallelism = 3;
    assert_eq!(c, jsonl(&run_trials(&k2).unwrap()));
}

#[test]
fn mean_isolated_edges_near_limit_at_n60() {
    let mut cfg = ExperimentConfig::new(60, 1, vec![0.0], 200, 2024);
    cfg.compute_betti = false;
    let records = run_trials(&cfg).unwrap();
    let xs: Vec<f64> = nk_samples(&records, 0.0).unwrap().into_iter().map(|x| x as f64).collect();
    let e = estimate(&xs);
    assert!((e.mean - mu(1, 0.0)).abs() <= 3.0 * e.standard_error, "{e:?}");
}

#[test]
fn second_factorial_moment_at_n150() {
    let mut cfg = ExperimentConfig::new(150, 1, vec![0.0], 1000, 2024);
    cfg.compute_betti = false;
    let records = run_trials(&cfg).unwrap();
    let fm = factorial_moments(&records, 1, 0.0, 2).unwrap();
    let m1 = estimate(&nk_samples(&records, 0.0).unwrap().into_iter().map(|x| x as f64).collect::<Vec<_>>());
    assert_eq!(fm[0].estimate, m1.mean);
    assert!((fm[1].estimate - mu(1, 0.0).powi(2)).abs() <= 3.0 * fm[1].standard_error, "{:?}", fm[1]);
}

#[test]
fn poisson_synthetic_factorial_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mean = 1.3;
    let dist = Poisson::new(mean).unwrap();
    let xs: Vec<usize> = (0..20_000).map(|_| dist.sample(&mut rng) as usize).collect();
    for f in factorial_moments_of(&xs, mean, 4).unwrap() {
        assert!((f.estimate - f.target).abs() <= 4.0 * f.standard_error, "{f:?}");
    }
    assert!(poisson_fit(&xs, mean).tv_distance < 0.02);
}

#[test]
fn degenerate_records_have_large_tv() {
    let mut cfg = ExperimentConfig::new(40, 1, vec![-2.0], 1, 5);
    cfg.compute_betti = false;
    let mut record = run_trials(&cfg).unwrap().remove(0);
    record.counts[0].n_k = 0;
    let records = vec![record; 30];
    let report = poisson_gof(&records, -2.0, 1).unwrap();
    assert!((report.n_k.tv_distance - (1.0 - (-mu(1, -2.0)).exp())).abs() < 1e-12);
    assert!(report.beta_k.is_none());
}

#[test]
fn agreement_of_equal_records_is_one() {
    let cfg = ExperimentConfig::new(20, 1, vec![0.0], 4, 9);
    let mut records = run_trials(&cfg).unwrap();
    for r in &mut records {
        r.equal = Some(true);
    }
    assert_eq!(hitting_agreement(&records).unwrap(), 1.0);
    records[0].equal = None;
    assert!(hitting_agreement(&records).is_err());
}

#[test]
fn disagreements_show_a_count_mismatch() {
    let cfg = ExperimentConfig::new(40, 1, vec![0.0], 120, 31);
    let records = run_trials(&cfg).unwrap();
    let rate = hitting_agreement(&records).unwrap();
    assert!((0.0..=1.0).contains(&rate));
    let mut audited = 0;
    for r in records.iter().filter(|r| r.equal == Some(false)) {
        let w = EdgeWeights::generate(40, r.seed).unwrap();
        let bp = betti_process(&w, 1, 0.0, FieldChoice::default()).unwrap();
        let nk = FaceCountProcess::new(&w, 1, 0.0).unwrap().step_function(0.0);
        let (lo, hi) = {
            let (a, b) = (r.t.unwrap(), r.t_prime);
            (a.min(b), a.max(b))
        };
        let events = event_schedule(&w, 0.0, 1.0).unwrap();
        let probes = events.events.iter().map(|e| e.weight).filter(|&t| t >= lo && t <= hi);
        let mismatch = probes.into_iter().any(|t| bp.value_at(t) != nk.value_at(t));
        assert!(mismatch, "trial {} disagrees without a count mismatch", r.trial_index);
        audited += 1;
    }
    assert!(audited > 0);
}

#[test]
fn certified_trials_have_betti_equal_to_face_count() {
    let c_grid = vec![0.0, 1.0, 2.0];
    let cfg = ExperimentConfig::new(30, 1, c_grid.clone(), 30, 41);
    let records = run_trials(&cfg).unwrap();
    let mut certified = 0;
    for r in &records {
        let w = EdgeWeights::generate(30, r.seed).unwrap();
        for count in &r.counts {
            let x = clique_complex(&graph_at(&w, count.t).unwrap(), 2);
            let xp = x.remove_maximal_faces(1).unwrap();
            let components_kept =
                betti(&xp, 0, FieldChoice::Rational).unwrap() == betti(&x, 0, FieldChoice::Rational).unwrap();
            if garland_certify(&xp, 1).unwrap().certified && components_kept {
                assert_eq!(count.beta_k, Some(count.n_k), "trial {} at c = {}", r.trial_index, count.c);
                certified += 1;
            }
        }
    }
    assert!(certified > 0);
}

#[test]
fn nhat_curve_is_non_negative_and_decreasing() {
    let c_grid = vec![-1.0, 0.0, 1.0, 2.0];
    let mut cfg = ExperimentConfig::new(50, 1, c_grid.clone(), 100, 8);
    cfg.compute_betti = false;
    let records = run_trials(&cfg).unwrap();
    let curve = nhat_curve(&records, &c_grid).unwrap();
    assert!(curve.iter().all(|p| p.mean >= 0.0));
    assert!(curve.windows(2).all(|w| w[1].mean <= w[0].mean));
}

#[test]
fn void_probability_near_limit() {
    let mut cfg = ExperimentConfig::new(150, 1, vec![0.0], 400, 2024);
    cfg.compute_betti = false;
    let records = run_trials(&cfg).unwrap();
    for (a, b) in [(0.0, 1.0), (0.0, f64::INFINITY), (0.5, 2.0)] {
        let v = void_probability(&records, 1, 150, a, b).unwrap();
        assert!((v.empirical - v.target).abs() <= 0.1, "{v:?}");
    }
    assert!(void_probability(&records, 1, 150, -1.0, 1.0).is_err());
}

#[test]
fn gumbel_report_fields() {
    let cfg = ExperimentConfig::new(40, 1, vec![0.0], 50, 17);
    let records = run_trials(&cfg).unwrap();
    let g = gumbel_gof(&records, 1, 40).unwrap();
    assert_eq!(g.sample_size, 50);
    assert!(g.ks_t.is_some() && g.ks_t_prime > 0.0 && g.ks_t_prime < 1.0);
}
