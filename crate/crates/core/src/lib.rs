//! Random clique complex process on the complete graph with i.i.d. uniform
//! edge weights.
//!
//! The crate is organised bottom-up:
//!
//! * [`process`] generates the weight matrix, thresholded graphs, the edge
//!   event schedule and the critical-window time rescaling.
//! * [`graph`] holds the bitset graph type and union-find.
//! * [`complex`] builds clique complexes, links, maximal faces and the
//!   maximal-face removal `X -> X'`.
//! * [`homology`] computes exact Betti numbers and the Betti step process.
//! * [`maximal`] tracks maximality intervals, the counts `N_k`, `N_k*`,
//!   `R_{k-1,m}` and both hitting times.
//! * [`spectral`] computes normalized Laplacian spectra and the Garland and
//!   Zuk certificates.
//! * [`experiment`] runs seeded Monte Carlo campaigns and the limit-law
//!   statistics.
//! * [`cli`] is the command-line surface.

pub mod cli;
pub mod complex;
pub mod error;
pub mod experiment;
pub mod format;
pub mod graph;
pub mod homology;
pub mod maximal;
pub mod process;
pub mod spectral;

pub use complex::{Face, SimplicialComplex};
pub use error::{Error, Result};
pub use graph::Graph;
pub use homology::{FieldChoice, StepFunction};
pub use process::EdgeWeights;
