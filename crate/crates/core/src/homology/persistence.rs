//! Persistent cohomology of the clique filtration of `K_n` weighted by
//! [`EdgeWeights`]. A simplex enters at the largest weight among its edges.
//!
//! Columns of the coboundary matrix are reduced from the latest simplex to
//! the earliest, the pivot being the earliest coface. Degree `d` skips the
//! columns already paired in degree `d - 1` (clearing); degree 0 is done by
//! Kruskal's algorithm. The intervals coincide with those of persistent
//! homology over the same field.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::error::{invalid, Result};
use crate::graph::UnionFind;
use crate::process::EdgeWeights;

use super::field::{Field, FieldChoice, PrimeField, Rationals};

/// Filtration key: entry value, then combinatorial index.
#[derive(Clone, Copy, Debug)]
struct Key {
    value: f64,
    index: u64,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then(self.index.cmp(&other.index))
    }
}

struct Binomial {
    table: Vec<Vec<u64>>,
}

impl Binomial {
    fn new(n: usize, kmax: usize) -> Self {
        let mut table = vec![vec![0u64; kmax + 1]; n + 1];
        for v in 0..=n {
            table[v][0] = 1;
            for j in 1..=kmax.min(v) {
                table[v][j] = table[v - 1][j - 1] + if j <= v - 1 { table[v - 1][j] } else { 0 };
            }
        }
        Binomial { table }
    }

    #[inline]
    fn c(&self, v: usize, j: usize) -> u64 {
        self.table[v][j]
    }

    fn index(&self, verts: &[u32]) -> u64 {
        verts.iter().enumerate().map(|(i, &v)| self.c(v as usize, i + 1)).sum()
    }
}

/// `C(n, j)` as a float, for budget estimates.
pub fn binomial_f64(n: usize, j: usize) -> f64 {
    if j > n {
        return 0.0;
    }
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of coboundary entries the degree-`k` reduction touches, roughly.
pub fn reduction_size(n: usize, k: usize) -> f64 {
    binomial_f64(n, k + 1) * n.saturating_sub(k + 1) as f64
}

/// `d`-simplices as flat vertex lists with their entry values.
struct Simplices {
    width: usize,
    verts: Vec<u32>,
    keys: Vec<Key>,
}

fn enumerate_simplices(w: &EdgeWeights, d: usize, floor: f64, bin: &Binomial) -> Simplices {
    fn rec(w: &EdgeWeights, width: usize, cur: &mut Vec<u32>, value: f64, bin: &Binomial, out: &mut Simplices) {
        if cur.len() == width {
            out.verts.extend_from_slice(cur);
            out.keys.push(Key { value, index: bin.index(cur) });
            return;
        }
        let start = cur.last().map_or(0, |&v| v as usize + 1);
        let need = width - cur.len();
        for v in start..=w.n() - need {
            let row = w.row(v);
            let val = cur.iter().fold(value, |m, &u| m.max(row[u as usize]));
            cur.push(v as u32);
            rec(w, width, cur, val, bin, out);
            cur.pop();
        }
    }
    let width = d + 1;
    let mut out = Simplices {
        width,
        verts: Vec::new(),
        keys: Vec::new(),
    };
    rec(w, width, &mut Vec::with_capacity(width), floor, bin, &mut out);
    out
}

/// Pushes `factor` times the coboundary of `verts` (entry value `value`).
#[allow(clippy::too_many_arguments)]
fn push_coboundary<F: Field>(
    field: &F,
    w: &EdgeWeights,
    verts: &[u32],
    value: f64,
    bin: &Binomial,
    factor: &F::Elem,
    heap: &mut BinaryHeap<HeapEntry<F::Elem>>,
) {
    let m = verts.len();
    assert!(m < 16, "simplex too large");
    // low[j] = sum_{i<j} C(v_i, i+1); high[j] = sum_{i>=j} C(v_i, i+2).
    let mut low = [0u64; 16];
    let mut high = [0u64; 17];
    for i in 0..m {
        low[i + 1] = low[i] + bin.c(verts[i] as usize, i + 1);
    }
    high[m] = 0;
    for i in (0..m).rev() {
        high[i] = high[i + 1] + bin.c(verts[i] as usize, i + 2);
    }
    let minus = field.neg(factor);
    let mut j = 0;
    for u in 0..w.n() as u32 {
        if j < m && verts[j] == u {
            j += 1;
            continue;
        }
        let row = w.row(u as usize);
        let val = verts.iter().fold(value, |acc, &x| acc.max(row[x as usize]));
        let index = low[j] + bin.c(u as usize, j + 1) + high[j];
        let coef = if j % 2 == 0 { factor.clone() } else { minus.clone() };
        heap.push(HeapEntry {
            key: Key { value: val, index },
            coef,
        });
    }
}

/// Min-heap entry on the key.
struct HeapEntry<E> {
    key: Key,
    coef: E,
}

impl<E> PartialEq for HeapEntry<E> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl<E> Eq for HeapEntry<E> {}

impl<E> PartialOrd for HeapEntry<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E> Ord for HeapEntry<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.cmp(&self.key)
    }
}

/// Smallest key with a non-zero total coefficient, removed from the heap.
fn pop_pivot<F: Field>(field: &F, heap: &mut BinaryHeap<HeapEntry<F::Elem>>) -> Option<(Key, F::Elem)> {
    while let Some(HeapEntry { key, mut coef }) = heap.pop() {
        while heap.peek().is_some_and(|e| e.key == key) {
            coef = field.add(&coef, &heap.pop().expect("peeked").coef);
        }
        if !field.is_zero(&coef) {
            return Some((key, coef));
        }
    }
    None
}

/// Sorts by simplex and merges duplicates, dropping zeros.
fn compact<F: Field>(field: &F, mut v: Vec<(usize, F::Elem)>) -> Vec<(usize, F::Elem)> {
    v.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, F::Elem)> = Vec::with_capacity(v.len());
    for (s, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 = field.add(&last.1, &c),
            _ => out.push((s, c)),
        }
    }
    out.retain(|e| !field.is_zero(&e.1));
    out
}

/// Persistence intervals `[birth, death)` of degree-`k` cohomology with
/// positive length; essential classes die at infinity. Entry values are
/// clamped below at `floor`, which leaves the complexes at `t >= floor`
/// unchanged and spares the reduction of the early filtration.
///
/// Reduced coboundary columns fill in badly, so only the combination of
/// simplices forming each column is stored and coboundaries are regenerated
/// into a heap when needed.
fn intervals_generic<F: Field>(field: &F, w: &EdgeWeights, k: usize, floor: f64) -> Vec<(f64, f64)> {
    let n = w.n();
    let bin = Binomial::new(n, k + 3);

    // Degree 0.
    let mut edges: Vec<(Key, u32, u32)> = w
        .edges()
        .map(|(i, j, x)| {
            let key = Key {
                value: x.max(floor),
                index: bin.index(&[i as u32, j as u32]),
            };
            (key, i as u32, j as u32)
        })
        .collect();
    edges.sort_by(|a, b| a.0.cmp(&b.0));
    let mut uf = UnionFind::new(n);
    let mut cleared: HashSet<u64> = HashSet::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for &(key, i, j) in &edges {
        if uf.union(i as usize, j as usize) {
            cleared.insert(key.index);
            if key.value > floor {
                current.push((floor, key.value));
            }
        }
    }
    current.extend(std::iter::repeat_n((floor, f64::INFINITY), uf.set_count()));
    if k == 0 {
        return current;
    }

    let one = field.from_i64(1);
    for d in 1..=k {
        let simplices = enumerate_simplices(w, d, floor, &bin);
        let width = simplices.width;
        let verts = |s: usize| &simplices.verts[s * width..(s + 1) * width];
        let mut order: Vec<usize> = (0..simplices.keys.len()).collect();
        order.sort_by(|&a, &b| simplices.keys[b].cmp(&simplices.keys[a]));

        let mut pivot_slot: HashMap<u64, usize> = HashMap::new();
        // Per reduced column: its simplex combination and pivot coefficient.
        let mut reduced: Vec<(Vec<(usize, F::Elem)>, F::Elem)> = Vec::new();
        let mut next_cleared: HashSet<u64> = HashSet::new();
        let mut heap = BinaryHeap::new();
        current.clear();
        for s in order {
            let key = simplices.keys[s];
            if cleared.contains(&key.index) {
                continue;
            }
            heap.clear();
            let mut combination = vec![(s, one.clone())];
            push_coboundary(field, w, verts(s), key.value, &bin, &one, &mut heap);
            loop {
                let Some((pivot, coef)) = pop_pivot(field, &mut heap) else {
                    current.push((key.value, f64::INFINITY));
                    break;
                };
                match pivot_slot.get(&pivot.index) {
                    Some(&slot) => {
                        let (other, other_pivot) = &reduced[slot];
                        let factor = field.neg(&field.mul(&coef, &field.inv(other_pivot)));
                        heap.push(HeapEntry { key: pivot, coef });
                        for (t, c) in other {
                            let f = field.mul(&factor, c);
                            push_coboundary(field, w, verts(*t), simplices.keys[*t].value, &bin, &f, &mut heap);
                            combination.push((*t, f));
                        }
                    }
                    None => {
                        if pivot.value > key.value {
                            current.push((key.value, pivot.value));
                        }
                        pivot_slot.insert(pivot.index, reduced.len());
                        next_cleared.insert(pivot.index);
                        reduced.push((compact(field, combination), coef));
                        break;
                    }
                }
            }
        }
        cleared = next_cleared;
    }
    current
}

/// Intervals of the degree-`k` persistence module of the clique filtration
/// restricted to `t >= floor`. Classes alive at `floor` are born there.
pub fn betti_intervals(w: &EdgeWeights, k: usize, floor: f64, field: FieldChoice) -> Result<Vec<(f64, f64)>> {
    if k > 12 {
        return Err(invalid(format!("degree {k} is too large")));
    }
    if !(0.0..1.0).contains(&floor) {
        return Err(invalid(format!("floor {floor} outside [0, 1)")));
    }
    Ok(match field.validate()? {
        FieldChoice::Rational => intervals_generic(&Rationals, w, k, floor),
        FieldChoice::Prime(p) => intervals_generic(&PrimeField::new(p)?, w, k, floor),
    })
}
