use std::collections::HashMap;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{invalid, Result};

use super::field::{Field, FieldChoice, PrimeField, Rationals};
use super::sparse;

/// Boundary map `∂_d : C_d -> C_{d-1}` with the alternating-sign convention
/// over sorted vertex order: the facet omitting the `i`-th vertex gets
/// sign `(-1)^i`.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub d: usize,
    pub rows: Vec<Face>,
    pub cols: Vec<Face>,
    /// `columns[j]` lists `(row, sign)` sorted by row.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl BoundaryMatrix {
    pub fn rank(&self, field: FieldChoice) -> Result<usize> {
        Ok(match field.validate()? {
            FieldChoice::Rational => sparse::rank(&Rationals, &self.columns),
            FieldChoice::Prime(p) => sparse::rank(&PrimeField::new(p)?, &self.columns),
        })
    }

    pub fn rank_in<F: Field>(&self, field: &F) -> usize {
        sparse::rank(field, &self.columns)
    }

    /// Integer product `self · next` (`∂_d ∂_{d+1}`) as a dense matrix.
    pub fn compose(&self, next: &BoundaryMatrix) -> Vec<Vec<i64>> {
        assert_eq!(next.d, self.d + 1);
        let mut out = vec![vec![0i64; next.cols.len()]; self.rows.len()];
        for (j, col) in next.columns.iter().enumerate() {
            for &(mid, a) in col {
                for &(r, b) in &self.columns[mid] {
                    out[r][j] += a * b;
                }
            }
        }
        out
    }
}

pub fn boundary_matrix(x: &SimplicialComplex, d: usize) -> Result<BoundaryMatrix> {
    if d < 1 || d > x.dim_cap() {
        return Err(invalid(format!("boundary degree {d} outside 1..={}", x.dim_cap())));
    }
    let rows: Vec<Face> = x.faces(d - 1).iter().cloned().collect();
    let index: HashMap<&Face, usize> = rows.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let cols: Vec<Face> = x.faces(d).iter().cloned().collect();
    let columns = cols
        .iter()
        .map(|f| {
            let mut col: Vec<(usize, i64)> = f
                .facets()
                .enumerate()
                .map(|(i, g)| (index[&g], if i % 2 == 0 { 1 } else { -1 }))
                .collect();
            col.sort_by_key(|e| e.0);
            col
        })
        .collect();
    Ok(BoundaryMatrix { d, rows, cols, columns })
}
