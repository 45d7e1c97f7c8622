//! Exact Betti numbers of finite complexes and the Betti step process
//! `t -> β_k(X(n, t))` of the clique filtration.

mod boundary;
mod field;
pub mod persistence;
mod sparse;
mod step;

pub use boundary::{boundary_matrix, BoundaryMatrix};
pub use field::{Field, FieldChoice, PrimeField, Rationals, DEFAULT_PRIME};
pub use sparse::rank;
pub use step::{Settle, StepFunction};

use crate::complex::SimplicialComplex;
use crate::error::{invalid, Result};
use crate::process::EdgeWeights;

fn rank_of(x: &SimplicialComplex, d: usize, field: FieldChoice) -> Result<usize> {
    if d == 0 || d > x.dim_cap() || x.faces(d).is_empty() {
        return Ok(0);
    }
    boundary_matrix(x, d)?.rank(field)
}

/// `β_k = dim C_k - rank ∂_k - rank ∂_{k+1}`, unreduced (so `β_0` counts
/// components). Needs `dim_cap >= k + 1`.
pub fn betti(x: &SimplicialComplex, k: usize, field: FieldChoice) -> Result<usize> {
    if x.dim_cap() < k + 1 {
        return Err(invalid(format!("betti({k}) needs dim_cap >= {}, got {}", k + 1, x.dim_cap())));
    }
    let value = x.faces(k).len() as i64 - rank_of(x, k, field)? as i64 - rank_of(x, k + 1, field)? as i64;
    assert!(value >= 0, "negative Betti number {value}: rank computation is inconsistent");
    Ok(value as usize)
}

/// All Betti numbers `β_0..=β_{dim_cap}` of a complex stored to its full
/// dimension (the top stored degree has no cofaces).
pub fn betti_numbers(x: &SimplicialComplex, field: FieldChoice) -> Result<Vec<usize>> {
    let ranks: Vec<usize> = (0..=x.dim_cap() + 1).map(|d| rank_of(x, d, field)).collect::<Result<_>>()?;
    Ok((0..=x.dim_cap())
        .map(|d| {
            let b = x.faces(d).len() as i64 - ranks[d] as i64 - ranks[d + 1] as i64;
            assert!(b >= 0, "negative Betti number in degree {d}");
            b as usize
        })
        .collect())
}

/// Euler–Poincaré check: alternating face counts equal alternating Betti
/// numbers.
pub fn euler_check(x: &SimplicialComplex) -> Result<bool> {
    let betti = betti_numbers(x, FieldChoice::Rational)?;
    let sign = |d: usize| if d % 2 == 0 { 1i64 } else { -1 };
    let faces: i64 = x.face_counts().iter().enumerate().map(|(d, &f)| sign(d) * f as i64).sum();
    let bettis: i64 = betti.iter().enumerate().map(|(d, &b)| sign(d) * b as i64).sum();
    Ok(faces == bettis)
}

/// `β_k(X(n, t))` on `[t_lo, 1]` as a step function, from the persistence
/// intervals of the clique filtration.
pub fn betti_process(w: &EdgeWeights, k: usize, t_lo: f64, field: FieldChoice) -> Result<StepFunction> {
    if !(0.0..1.0).contains(&t_lo) {
        return Err(invalid(format!("t_lo = {t_lo} outside [0, 1)")));
    }
    let intervals = persistence::betti_intervals(w, k, t_lo, field)?;
    Ok(StepFunction::from_intervals(intervals, t_lo))
}
