//! Sparse column reduction over an exact field.

use std::collections::HashMap;

use super::field::Field;

/// Sparse column: `(row, coefficient)` pairs sorted by row, no zeros.
pub type Column<E> = Vec<(usize, E)>;

/// `a - factor * b`, both sorted by row.
pub fn sub_scaled<F: Field, R: Ord + Copy>(field: &F, a: &[(R, F::Elem)], factor: &F::Elem, b: &[(R, F::Elem)]) -> Vec<(R, F::Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.neg(&field.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(factor, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of the matrix given by its columns, via left-to-right column
/// reduction on the lowest non-zero row. Exact for any [`Field`].
pub fn rank<F: Field>(field: &F, columns: &[Vec<(usize, i64)>]) -> usize {
    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<Column<F::Elem>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut cur: Column<F::Elem> = col
            .iter()
            .map(|&(r, c)| (r, field.from_i64(c)))
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        cur.sort_by_key(|e| e.0);
        while let Some((low, coef)) = cur.last().cloned() {
            match pivots.get(&low) {
                Some(&j) => {
                    let other = &reduced[j];
                    let factor = field.mul(&coef, &field.inv(&other.last().expect("pivot column").1));
                    cur = sub_scaled(field, &cur, &factor, other);
                }
                None => {
                    pivots.insert(low, reduced.len());
                    break;
                }
            }
        }
        reduced.push(cur);
    }
    pivots.len()
}
