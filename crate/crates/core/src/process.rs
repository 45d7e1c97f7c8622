//! The edge-weight process: i.i.d. uniform weights on the edges of `K_n`,
//! the thresholded graphs `G(n, t)`, the event schedule of the filtration
//! and the critical-window rescaling `t <-> c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Symmetric matrix of pairwise distinct weights in `(0, 1)` on the edges of
/// the complete graph `K_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights {
    n: usize,
    seed: u64,
    // Dense row-major n x n; the diagonal is unused and holds 0.
    dense: Vec<f64>,
}

/// Position of `(i, j)`, `i < j`, in the row-major upper triangle.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn draw_open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            return x;
        }
    }
}

impl EdgeWeights {
    /// Draws the weights from a ChaCha8 stream seeded with `seed`, in
    /// row-major upper-triangle order. Colliding values are redrawn from the
    /// same stream, so the result is a pure function of `(n, seed)`.
    pub fn generate(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("vertex count must be at least 2, got {n}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut upper: Vec<f64> = (0..edge_count(n)).map(|_| draw_open_unit(&mut rng)).collect();
        loop {
            let mut order: Vec<usize> = (0..upper.len()).collect();
            order.sort_by(|&a, &b| upper[a].total_cmp(&upper[b]).then(a.cmp(&b)));
            let colliding: Vec<usize> = order
                .windows(2)
                .filter(|w| upper[w[0]] == upper[w[1]])
                .map(|w| w[0].max(w[1]))
                .collect();
            if colliding.is_empty() {
                break;
            }
            for idx in colliding {
                upper[idx] = draw_open_unit(&mut rng);
            }
        }
        Self::from_upper(n, seed, upper)
    }

    /// Builds weights from a row-major upper triangle, validating range and
    /// distinctness.
    pub fn from_upper(n: usize, seed: u64, upper: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("vertex count must be at least 2, got {n}")));
        }
        if upper.len() != edge_count(n) {
            return Err(invalid(format!(
                "expected {} upper-triangle weights for n = {n}, got {}",
                edge_count(n),
                upper.len()
            )));
        }
        if let Some(bad) = upper.iter().find(|w| !(**w > 0.0 && **w < 1.0)) {
            return Err(invalid(format!("weight {bad} outside (0, 1)")));
        }
        let mut sorted = upper.clone();
        sorted.sort_by(f64::total_cmp);
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate weight {}", w[0])));
        }
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let w = upper[upper_index(n, i, j)];
                dense[i * n + j] = w;
                dense[j * n + i] = w;
            }
        }
        Ok(EdgeWeights { n, seed, dense })
    }

    /// Weights given as an explicit edge list covering every pair once.
    pub fn from_pairs(n: usize, pairs: &[((usize, usize), f64)]) -> Result<Self> {
        let mut upper = vec![f64::NAN; edge_count(n)];
        for &((a, b), w) in pairs {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j || j >= n {
                return Err(invalid(format!("bad pair ({a}, {b})")));
            }
            upper[upper_index(n, i, j)] = w;
        }
        Self::from_upper(n, 0, upper)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `U(i, j)`; panics when `i == j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i != j, "no weight on the diagonal");
        self.dense[i * self.n + j]
    }

    /// Row `i` of the dense matrix (entry `i` is a placeholder 0).
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dense[i * self.n..(i + 1) * self.n]
    }

    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(edge_count(self.n));
        for i in 0..self.n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }

    /// All edges `(i, j, U(i, j))` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Applies a strictly increasing map to every weight. The filtration
    /// order, hence every combinatorial statistic, is preserved.
    pub fn relabel(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let upper: Vec<f64> = self.upper().into_iter().map(f).collect();
        Self::from_upper(self.n, self.seed, upper)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WeightsFile {
            n: self.n,
            seed: self.seed,
            weights: self.upper(),
        })
        .expect("weights serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WeightsFile = serde_json::from_str(text)?;
        Self::from_upper(file.n, file.seed, file.weights)
    }
}

#[derive(Serialize, Deserialize)]
struct WeightsFile {
    n: usize,
    seed: u64,
    weights: Vec<f64>,
}

/// `G(n, t)`: edges with weight at most `t`.
pub fn graph_at(w: &EdgeWeights, t: f64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("time {t} outside [0, 1]")));
    }
    let mut g = Graph::empty(w.n());
    for (i, j, x) in w.edges() {
        if x <= t {
            g.add_edge(i, j);
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEvent {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Edge arrivals inside `(t_lo, t_hi]`, sorted by weight.
#[derive(Clone, Debug)]
pub struct EventSchedule {
    pub events: Vec<EdgeEvent>,
    pub t_lo: f64,
    pub t_hi: f64,
}

pub fn event_schedule(w: &EdgeWeights, t_lo: f64, t_hi: f64) -> Result<EventSchedule> {
    if !(0.0 <= t_lo && t_lo < t_hi && t_hi <= 1.0) {
        return Err(invalid(format!("window ({t_lo}, {t_hi}] is not inside [0, 1] or is empty")));
    }
    let mut events: Vec<EdgeEvent> = w
        .edges()
        .filter(|&(_, _, x)| x > t_lo && x <= t_hi)
        .map(|(u, v, weight)| EdgeEvent { u, v, weight })
        .collect();
    events.sort_by(|a, b| a.weight.total_cmp(&b.weight));
    Ok(EventSchedule { events, t_lo, t_hi })
}

fn scale_offset(k: usize, n: usize) -> f64 {
    let (kf, ln) = (k as f64, (n as f64).ln());
    (kf / 2.0 + 1.0) * ln + kf / 2.0 * ln.ln()
}

fn check_scaling(k: usize, n: usize) -> Result<()> {
    if k < 1 {
        return Err(invalid("dimension k must be at least 1"));
    }
    if n < 3 {
        return Err(invalid(format!("critical window needs n >= 3, got {n}")));
    }
    Ok(())
}

/// `t_c(k, n) = (((k/2 + 1) ln n + (k/2) ln ln n + c) / n)^(1/(k+1))`.
pub fn critical_time(k: usize, n: usize, c: f64) -> Result<f64> {
    check_scaling(k, n)?;
    let numerator = scale_offset(k, n) + c;
    if !(numerator > 0.0) {
        return Err(Error::OutOfRegime(format!(
            "c = {c} gives a non-positive numerator for k = {k}, n = {n}"
        )));
    }
    let t = (numerator / n as f64).powf(1.0 / (k as f64 + 1.0));
    if t > 1.0 {
        return Err(Error::OutOfRegime(format!("c = {c} maps to t = {t} > 1 for k = {k}, n = {n}")));
    }
    Ok(t)
}

/// Inverse of [`critical_time`]: `c = n t^(k+1) - (k/2 + 1) ln n - (k/2) ln ln n`.
pub fn rescale_time(t: f64, k: usize, n: usize) -> Result<f64> {
    check_scaling(k, n)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("time {t} outside [0, 1]")));
    }
    Ok(n as f64 * t.powi(k as i32 + 1) - scale_offset(k, n))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed, a fixed mix of the master seed and the trial index so that
/// results do not depend on scheduling.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03))
}
