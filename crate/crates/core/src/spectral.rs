//! Normalized Laplacian spectra of graphs and the local spectral criteria
//! of Garland (vanishing of `H^k`) and Zuk (property (T)).
//!
//! `λ₂` is the second-smallest eigenvalue of `L = I - D^{-1/2} A D^{-1/2}`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Face, LabeledGraph, SimplicialComplex};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Slack used for every spectral comparison.
pub const SPECTRAL_TOL: f64 = 1e-9;

pub fn normalized_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.n();
    let deg: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
    if let Some(v) = deg.iter().position(|&d| d == 0.0) {
        return Err(Error::DegenerateInput(format!("vertex {v} is isolated")));
    }
    let mut l = DMatrix::identity(n, n);
    for (u, v) in g.edges() {
        let x = -1.0 / (deg[u] * deg[v]).sqrt();
        l[(u, v)] = x;
        l[(v, u)] = x;
    }
    Ok(l)
}

/// Eigenvalues of the normalized Laplacian, ascending.
pub fn spectrum(g: &Graph) -> Result<Vec<f64>> {
    let l = normalized_laplacian(g)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Second-smallest normalized-Laplacian eigenvalue of a connected graph.
pub fn lambda2(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Err(invalid("lambda2 needs at least two vertices"));
    }
    let components = g.components().len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(spectrum(g)?[1])
}

/// Largest component, ties going to the one with the smallest vertex.
pub fn giant_component(g: &Graph) -> Result<LabeledGraph> {
    if g.n() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let comps = g.components();
    let best = comps
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
        .map(|(_, c)| c)
        .expect("non-empty");
    Ok(LabeledGraph {
        graph: g.induced(best),
        labels: best.iter().map(|&v| v as u32).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    /// `λ₂` of the giant component (0 when the graph is disconnected).
    pub lambda2: f64,
    pub connected: bool,
    pub num_components: usize,
    pub giant_size: usize,
    pub margin: f64,
}

pub fn spectral_report(g: &Graph, threshold: f64) -> Result<SpectralReport> {
    let comps = g.components();
    let giant = giant_component(g)?;
    let connected = comps.len() == 1;
    let lambda2 = if connected {
        if g.n() < 2 {
            0.0
        } else {
            lambda2(g)?
        }
    } else {
        0.0
    };
    Ok(SpectralReport {
        lambda2,
        connected,
        num_components: comps.len(),
        giant_size: giant.vertex_count(),
        margin: lambda2 - threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Disconnected,
    SmallGap,
    IsolatedVertexInLink,
    /// `λ₂` within the tolerance of the threshold.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailingFace {
    pub face: Face,
    pub reason: FailureReason,
    pub lambda2: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Garland,
    Zuk,
}

/// Outcome of a local spectral criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub mode: Criterion,
    pub k: usize,
    pub certified: bool,
    pub purity_ok: bool,
    /// Smallest `λ₂` over the links whose eigenvalue was computed.
    pub lambda2_min: Option<f64>,
    pub threshold: f64,
    pub tolerance: f64,
    pub failing: Vec<FailingFace>,
}

pub type GarlandCertificate = Certificate;

/// True when the `dim`-skeleton of `x` is pure of dimension `dim`: every
/// face of dimension below `dim` has a coface.
pub fn is_pure(x: &SimplicialComplex, dim: usize) -> bool {
    if x.dim_cap() < dim || x.faces(dim).is_empty() {
        return false;
    }
    (0..dim).all(|d| x.maximal_faces(d).is_empty())
}

fn check_link(sigma: &Face, link: &LabeledGraph, threshold: f64) -> (Option<FailureReason>, Option<f64>) {
    let g = &link.graph;
    if g.n() > 0 && !g.isolated_vertices().is_empty() {
        return (Some(FailureReason::IsolatedVertexInLink), None);
    }
    if g.n() < 2 || !g.is_connected() {
        return (Some(FailureReason::Disconnected), None);
    }
    let l2 = lambda2(g).unwrap_or_else(|e| panic!("link of {sigma:?}: {e}"));
    let reason = if l2 > threshold + SPECTRAL_TOL {
        None
    } else if l2 < threshold - SPECTRAL_TOL {
        Some(FailureReason::SmallGap)
    } else {
        Some(FailureReason::Inconclusive)
    };
    (reason, Some(l2))
}

fn certify(x: &SimplicialComplex, k: usize, mode: Criterion) -> Result<Certificate> {
    if k < 1 || x.dim_cap() < k + 1 {
        return Err(invalid(format!("certificate for k = {k} needs dim_cap >= {}", k + 1)));
    }
    let x = x.skeleton(k + 1);
    let threshold = k as f64 / (k as f64 + 1.0);
    let purity_ok = is_pure(&x, k + 1);
    let sigmas: Vec<&Face> = x.faces(k - 1).iter().collect();
    let checks: Vec<(Option<FailureReason>, Option<f64>)> = sigmas
        .par_iter()
        .map(|sigma| {
            let link = x.link(sigma).expect("face of x");
            check_link(sigma, &link, threshold)
        })
        .collect();
    let lambda2_min = checks.iter().filter_map(|c| c.1).min_by(f64::total_cmp);
    let failing: Vec<FailingFace> = sigmas
        .iter()
        .zip(&checks)
        .filter_map(|(sigma, (reason, l2))| {
            reason.map(|reason| FailingFace {
                face: (*sigma).clone(),
                reason,
                lambda2: *l2,
            })
        })
        .collect();
    Ok(Certificate {
        mode,
        k,
        certified: purity_ok && failing.is_empty(),
        purity_ok,
        lambda2_min,
        threshold,
        tolerance: SPECTRAL_TOL,
        failing,
    })
}

/// Garland's criterion on the `(k+1)`-skeleton: purity, and every
/// `(k-1)`-face link connected with `λ₂ > k/(k+1)`. Certifies `H^k = 0`.
pub fn garland_certify(x: &SimplicialComplex, k: usize) -> Result<Certificate> {
    certify(x, k, Criterion::Garland)
}

/// Zuk's criterion on the 2-skeleton: purity, and every vertex link
/// connected with `λ₂ > 1/2`. Certifies property (T) of `π₁`.
pub fn zuk_certify(x: &SimplicialComplex) -> Result<Certificate> {
    certify(x, 1, Criterion::Zuk)
}
