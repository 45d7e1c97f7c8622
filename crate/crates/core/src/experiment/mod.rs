//! Seeded Monte Carlo campaigns over the clique process.
//!
//! Trial `i` of a campaign uses the weights drawn from
//! `trial_seed(master_seed, i)`, so a campaign is a pure function of its
//! configuration and records come back in index order whatever the thread
//! count.

mod stats;

pub use stats::*;

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::error::{invalid, Error, Result};
use crate::homology::persistence::reduction_size;
use crate::homology::{betti_process, FieldChoice};
use crate::maximal::{hitting_time_t, FaceCountProcess, HittingTimes};
use crate::process::{critical_time, rescale_time, trial_seed, EdgeWeights};

/// Default cap on [`reduction_size`] for homology runs. Admits `k = 1` up to
/// `n ≈ 220` and `k = 2` up to `n ≈ 90`.
pub const DEFAULT_MAX_REDUCTION_SIZE: f64 = 1e7;

/// Default start of the homology window, in rescaled time.
pub const DEFAULT_WINDOW_OFFSET: f64 = -3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub c_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub field: FieldChoice,
    /// Worker threads. Does not affect the output and is not serialized.
    #[serde(skip, default = "one")]
    pub parallelism: usize,
    /// Interval-only runs leave `T`, `equal` and `beta_k` empty.
    pub compute_betti: bool,
    /// Homology is computed on `[t_c, 1]` for this `c` (or from `t = 0` when
    /// absent). Trials whose Betti number already vanished there are redone
    /// from `t = 0`, so this only affects speed.
    pub homology_window_c: Option<f64>,
    /// Wall-clock budget for the whole campaign.
    #[serde(skip)]
    pub time_budget: Option<Duration>,
    pub max_reduction_size: f64,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, c_grid: Vec<f64>, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            n,
            k,
            c_grid,
            trials,
            master_seed,
            field: FieldChoice::default(),
            parallelism: 1,
            compute_betti: true,
            homology_window_c: Some(DEFAULT_WINDOW_OFFSET),
            time_budget: None,
            max_reduction_size: DEFAULT_MAX_REDUCTION_SIZE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.parallelism == 0 {
            return Err(invalid("parallelism must be at least 1"));
        }
        if self.c_grid.is_empty() {
            return Err(invalid("c grid is empty"));
        }
        if self.c_grid.iter().any(|c| !c.is_finite()) || self.c_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("c grid must be finite and strictly increasing"));
        }
        self.field.validate()?;
        for &c in &self.c_grid {
            let t = critical_time(self.k, self.n, c)?;
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::OutOfRegime(format!("c = {c} maps to t = {t} outside (0, 1)")));
            }
        }
        Ok(())
    }

    /// Start of the homology window: `t_c` for the window `c`, capped by the
    /// first grid time, or 0 when that `c` is out of regime.
    pub fn homology_floor(&self) -> Result<f64> {
        let first = critical_time(self.k, self.n, self.c_grid[0])?;
        Ok(match self.homology_window_c {
            Some(c) => critical_time(self.k, self.n, c).map_or(0.0, |t| t.min(first)),
            None => 0.0,
        })
    }

    /// Critical times of the c grid.
    pub fn times(&self) -> Result<Vec<f64>> {
        self.c_grid.iter().map(|&c| critical_time(self.k, self.n, c)).collect()
    }
}

/// Counts at one point of the c grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountAt {
    pub c: f64,
    pub t: f64,
    pub n_k: usize,
    pub n_k_star: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta_k: Option<usize>,
}

impl CountAt {
    pub fn nhat(&self) -> usize {
        self.n_k_star - self.n_k
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    #[serde(rename = "T_prime")]
    pub t_prime: f64,
    #[serde(rename = "c_T")]
    pub c_t: Option<f64>,
    #[serde(rename = "c_T_prime")]
    pub c_t_prime: f64,
    pub equal: Option<bool>,
    pub counts: Vec<CountAt>,
    /// Births and deaths of maximal faces in `(t_{c_min}, 1]`.
    pub jump_times: Vec<f64>,
}

impl TrialRecord {
    pub fn count_at(&self, c: f64) -> Option<&CountAt> {
        self.counts.iter().find(|x| x.c == c)
    }
}

/// A campaign that stopped early, with the records finished so far.
#[derive(Debug, ThisError)]
#[error("{error}")]
pub struct CampaignError {
    pub error: Error,
    pub partial: Vec<TrialRecord>,
}

impl From<Error> for CampaignError {
    fn from(error: Error) -> Self {
        CampaignError {
            error,
            partial: Vec::new(),
        }
    }
}

/// Runs the pipeline on given weights; `index` only labels the record.
pub fn trial_record(cfg: &ExperimentConfig, index: usize, w: &EdgeWeights) -> Result<TrialRecord> {
    let (n, k) = (w.n(), cfg.k);
    let fc = FaceCountProcess::new(w, k, 0.0)?;
    let floor = cfg.homology_floor()?;
    let bp = if cfg.compute_betti {
        Some(betti_process(w, k, floor, cfg.field)?)
    } else {
        None
    };
    let times = cfg.times()?;
    let counts = cfg
        .c_grid
        .iter()
        .zip(&times)
        .map(|(&c, &t)| CountAt {
            c,
            t,
            n_k: fc.count_nk(t),
            n_k_star: fc.count_nk_star(t),
            beta_k: bp.as_ref().map(|b| b.value_at(t) as usize),
        })
        .collect();
    let t_prime = fc.hitting_time_t_prime();
    let hitting = match &bp {
        Some(b) if floor > 0.0 && hitting_time_t(b)?.before_window => {
            Some(HittingTimes::new(&betti_process(w, k, 0.0, cfg.field)?, &fc)?)
        }
        Some(b) => Some(HittingTimes::new(b, &fc)?),
        None => None,
    };
    Ok(TrialRecord {
        trial_index: index,
        seed: w.seed(),
        t: hitting.map(|h| h.t),
        t_prime,
        c_t: hitting.map(|h| h.rescaled_t),
        c_t_prime: rescale_time(t_prime, k, n)?,
        equal: hitting.map(|h| h.equal),
        counts,
        jump_times: fc.endpoints_in(times[0], 1.0),
    })
}

pub fn run_trial(cfg: &ExperimentConfig, index: usize) -> Result<TrialRecord> {
    let w = EdgeWeights::generate(cfg.n, trial_seed(cfg.master_seed, index as u64))?;
    trial_record(cfg, index, &w)
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, CampaignError> {
    cfg.validate()?;
    if cfg.compute_betti {
        let size = reduction_size(cfg.n, cfg.k);
        if size > cfg.max_reduction_size {
            return Err(Error::Budget(format!(
                "reduction size {size:.3e} for n = {}, k = {} exceeds the cap {:.3e}",
                cfg.n, cfg.k, cfg.max_reduction_size
            ))
            .into());
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    let results: Vec<Result<TrialRecord>> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                if deadline.is_some_and(|d| Instant::now() > d) {
                    return Err(Error::Budget(format!("time budget exhausted before trial {i}")));
                }
                run_trial(cfg, i)
            })
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut first_error = None;
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        None => Ok(records),
        Some(error) => Err(CampaignError {
            error,
            partial: records,
        }),
    }
}

/// One JSON object per line.
pub fn write_jsonl<T: Serialize>(records: &[T], out: &mut dyn Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig::new(n, 1, vec![-1.0, 0.0, 1.0], trials, 99)
    }

    #[test]
    fn validation() {
        assert!(cfg(20, 3).validate().is_ok());
        assert!(cfg(20, 0).validate().is_err());
        let mut c = cfg(20, 3);
        c.c_grid = vec![1.0, 0.0];
        assert!(c.validate().is_err());
        c.c_grid = vec![-100.0];
        assert!(matches!(c.validate(), Err(Error::OutOfRegime(_))));
        c.c_grid = vec![];
        assert!(c.validate().is_err());
    }

    #[test]
    fn records_are_consistent() {
        let c = cfg(25, 6);
        let records = run_trials(&c).unwrap();
        assert_eq!(records.len(), 6);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.trial_index, i);
            assert_eq!(r.seed, trial_seed(99, i as u64));
            for x in &r.counts {
                assert!(x.n_k <= x.n_k_star);
            }
            assert_eq!(r.equal, Some(r.t == Some(r.t_prime)));
            assert!(r.jump_times.windows(2).all(|w| w[0] <= w[1]));
        }
        assert_eq!(run_trial(&c, 3).unwrap(), records[3]);
    }

    #[test]
    fn window_does_not_change_records() {
        let mut a = cfg(18, 10);
        a.homology_window_c = None;
        let full = run_trials(&a).unwrap();
        for c in [-2.0, 0.0, -50.0] {
            a.homology_window_c = Some(c);
            assert_eq!(run_trials(&a).unwrap(), full);
        }
    }

    #[test]
    fn interval_only_runs_skip_homology() {
        let mut c = cfg(25, 2);
        c.compute_betti = false;
        let r = run_trials(&c).unwrap();
        assert!(r.iter().all(|r| r.t.is_none() && r.equal.is_none() && r.counts[0].beta_k.is_none()));
    }

    #[test]
    fn parallelism_does_not_change_output() {
        let mut a = cfg(20, 8);
        let ra = run_trials(&a).unwrap();
        a.parallelism = 4;
        let rb = run_trials(&a).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_jsonl(&ra, &mut x).unwrap();
        write_jsonl(&rb, &mut y).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn budgets() {
        let mut c = cfg(20, 4);
        c.max_reduction_size = 10.0;
        let err = run_trials(&c).unwrap_err();
        assert!(matches!(err.error, Error::Budget(_)) && err.partial.is_empty());

        let mut c = cfg(20, 4);
        c.time_budget = Some(Duration::ZERO);
        let err = run_trials(&c).unwrap_err();
        assert!(matches!(err.error, Error::Budget(_)));
    }

    #[test]
    fn config_round_trips_without_parallelism() {
        let mut c = cfg(30, 5);
        c.parallelism = 8;
        let text = serde_json::to_string(&c).unwrap();
        assert!(!text.contains("parallelism"));
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.parallelism, 1);
        assert_eq!(back.c_grid, c.c_grid);
    }
}
