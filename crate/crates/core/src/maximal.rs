//! Maximality intervals of `(k+1)`-cliques along the filtration and the
//! counting processes built from them.
//!
//! A `(k+1)`-set `σ` is a maximal clique of `G(n, t)` exactly for
//! `t ∈ [birth, death)`, where `birth` is the largest internal weight and
//! `death = min_{j ∉ σ} max_{l ∈ σ} U(j, l)`.

use std::io::Write;

use serde::Serialize;

use crate::complex::{for_each_subset, Face};
use crate::error::{invalid, Result};
use crate::format;
use crate::graph::Graph;
use crate::homology::{Settle, StepFunction};
use crate::process::{critical_time, rescale_time, EdgeWeights};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalityInterval {
    pub face: Face,
    pub birth: f64,
    pub death: f64,
}

/// `min_{j ∉ σ} max_{l ∈ σ} U(j, l)`; infinite when `σ` is everything.
pub fn death_time(w: &EdgeWeights, face: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    'outer: for j in 0..w.n() {
        let row = w.row(j);
        let mut worst = 0.0f64;
        for &l in face {
            if l == j {
                continue 'outer;
            }
            worst = worst.max(row[l]);
            if worst >= best {
                continue 'outer;
            }
        }
        best = worst;
    }
    best
}

fn birth_time(w: &EdgeWeights, face: &[usize]) -> f64 {
    let mut b = 0.0f64;
    for (i, &u) in face.iter().enumerate() {
        for &v in &face[i + 1..] {
            b = b.max(w.get(u, v));
        }
    }
    b
}

/// Every `(k+1)`-set with `birth < death` and `death > t_lo`, found by an
/// edge sweep: the cliques completed by an arriving edge are born at its
/// weight. Sorted by birth, then face.
pub fn maximality_intervals(w: &EdgeWeights, k: usize, t_lo: f64) -> Result<Vec<MaximalityInterval>> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if !(0.0..1.0).contains(&t_lo) {
        return Err(invalid(format!("t_lo = {t_lo} outside [0, 1)")));
    }
    let n = w.n();
    let mut edges: Vec<(f64, usize, usize)> = w.edges().map(|(i, j, x)| (x, i, j)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut g = Graph::empty(n);
    let mut out = Vec::new();
    let mut face = Vec::with_capacity(k + 1);
    for (x, u, v) in edges {
        if k + 1 <= n {
            let common: Vec<usize> = g.common_neighbors(&[u, v]).ones().collect();
            let mut emit = |rest: &[usize]| {
                face.clear();
                face.extend_from_slice(rest);
                face.push(u);
                face.push(v);
                face.sort_unstable();
                let death = death_time(w, &face);
                if x < death && death > t_lo {
                    out.push(MaximalityInterval {
                        face: Face::from_usize(&face).expect("distinct vertices"),
                        birth: x,
                        death,
                    });
                }
            };
            if k == 1 {
                emit(&[]);
            } else {
                for_each_clique_in(&g, &common, k - 1, &mut emit);
            }
        }
        g.add_edge(u, v);
    }
    out.sort_by(|a, b| a.birth.total_cmp(&b.birth).then_with(|| a.face.cmp(&b.face)));
    Ok(out)
}

/// `size`-cliques of `g` inside the sorted vertex list `within`.
fn for_each_clique_in(g: &Graph, within: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(g: &Graph, within: &[usize], start: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..within.len() {
            let v = within[i];
            if cur.iter().all(|&c| g.has_edge(c, v)) {
                cur.push(v);
                rec(g, within, i + 1, size, cur, f);
                cur.pop();
            }
        }
    }
    rec(g, within, 0, size, &mut Vec::with_capacity(size), f);
}

/// Writes intervals as CSV `face,birth,death`.
pub fn write_intervals_csv(intervals: &[MaximalityInterval], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "face,birth,death")?;
    for iv in intervals {
        writeln!(out, "{},{},{}", iv.face.label(), format::real(iv.birth), format::real(iv.death))?;
    }
    Ok(())
}

/// The interval list of one trial and the counts derived from it.
#[derive(Clone, Debug)]
pub struct FaceCountProcess {
    pub k: usize,
    pub n: usize,
    pub intervals: Vec<MaximalityInterval>,
}

impl FaceCountProcess {
    pub fn new(w: &EdgeWeights, k: usize, t_lo: f64) -> Result<Self> {
        Ok(FaceCountProcess {
            k,
            n: w.n(),
            intervals: maximality_intervals(w, k, t_lo)?,
        })
    }

    /// `N_k(t)`: faces maximal at `t`.
    pub fn count_nk(&self, t: f64) -> usize {
        self.intervals.iter().filter(|iv| iv.birth <= t && t < iv.death).count()
    }

    /// `N_k*(t)`: faces maximal at some `s >= t`.
    pub fn count_nk_star(&self, t: f64) -> usize {
        self.intervals.iter().filter(|iv| iv.death > t).count()
    }

    /// `N̂_k(t) = N_k*(t) - N_k(t)`: faces first maximal after `t`.
    pub fn nhat(&self, t: f64) -> usize {
        self.intervals.iter().filter(|iv| iv.birth > t).count()
    }

    pub fn step_function(&self, start: f64) -> StepFunction {
        StepFunction::from_intervals(self.intervals.iter().map(|iv| (iv.birth, iv.death)), start)
    }

    /// Interval endpoints (births and deaths, with multiplicity) in
    /// `(t_a, t_b]`, sorted.
    pub fn endpoints_in(&self, t_a: f64, t_b: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .intervals
            .iter()
            .flat_map(|iv| [iv.birth, iv.death])
            .filter(|&t| t > t_a && t <= t_b)
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Jumps of `N_k` over the rescaled window `(a, b]`, each birth and each
    /// death counted once. `a = -inf` means `t = 0`, `b = +inf` means `t = 1`.
    pub fn jump_count(&self, a: f64, b: f64) -> Result<usize> {
        if !(a < b) {
            return Err(invalid(format!("empty window ({a}, {b}]")));
        }
        let t_a = if a == f64::NEG_INFINITY { 0.0 } else { critical_time(self.k, self.n, a)? };
        let t_b = if b == f64::INFINITY { 1.0 } else { critical_time(self.k, self.n, b)? };
        Ok(self.endpoints_in(t_a, t_b).len())
    }

    /// `T'`: the last death, or 0 with no intervals.
    pub fn hitting_time_t_prime(&self) -> f64 {
        self.intervals.iter().map(|iv| iv.death).fold(0.0, f64::max)
    }
}

/// `T = inf{t : β_k(s) = 0 for all s >= t}` from a Betti process.
pub fn hitting_time_t(bp: &StepFunction) -> Result<Settle> {
    hitting_time_generalized(bp, 0)
}

/// `inf{t : X(s) <= m for all s >= t}` for a Betti or face-count process.
pub fn hitting_time_generalized(process: &StepFunction, m: i64) -> Result<Settle> {
    if m < 0 {
        return Err(invalid("level m must be non-negative"));
    }
    process.settle_time(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HittingTimes {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "T_prime")]
    pub t_prime: f64,
    #[serde(rename = "c_T")]
    pub rescaled_t: f64,
    #[serde(rename = "c_T_prime")]
    pub rescaled_t_prime: f64,
    pub equal: bool,
    /// `β_k` was already zero throughout the evaluated window.
    pub vanished_before_window: bool,
}

impl HittingTimes {
    pub fn new(bp: &StepFunction, fc: &FaceCountProcess) -> Result<Self> {
        let settle = hitting_time_t(bp)?;
        let t_prime = fc.hitting_time_t_prime();
        Ok(HittingTimes {
            t: settle.time,
            t_prime,
            rescaled_t: rescale_time(settle.time, fc.k, fc.n)?,
            rescaled_t_prime: rescale_time(t_prime, fc.k, fc.n)?,
            equal: settle.time == t_prime,
            vanished_before_window: settle.before_window,
        })
    }
}

/// `R_{k-1,m}(t)` (or the starred variant): `k`-vertex sets that form a
/// `(k-1)`-face with at most `m` cofaces at `t` (at some `s >= t`).
pub fn count_r(w: &EdgeWeights, k: usize, m: usize, t: f64, star: bool) -> Result<usize> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("time {t} outside [0, 1]")));
    }
    let n = w.n();
    let vertices: Vec<usize> = (0..n).collect();
    let mut count = 0;
    let mut conn = Vec::with_capacity(n);
    for_each_subset(&vertices, k, &mut |s: &[usize]| {
        let birth = birth_time(w, s);
        let at = if star {
            birth.max(t)
        } else if birth <= t {
            t
        } else {
            return;
        };
        conn.clear();
        conn.extend((0..n).filter(|j| !s.contains(j)).map(|j| s.iter().map(|&l| w.get(j, l)).fold(0.0, f64::max)));
        // Coface count is non-decreasing in s, so the smallest admissible s is the minimiser.
        if conn.iter().filter(|&&c| c <= at).count() <= m {
            count += 1;
        }
    });
    Ok(count)
}
