//! Finite simplicial complexes stored by dimension, clique complexes of
//! graphs, links, maximal faces and the removal of maximal faces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// A face: strictly increasing vertex labels. Dimension is `len - 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<u32>);

impl Face {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidFace("face has no vertices".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Face(vertices))
    }

    pub fn from_usize(vertices: &[usize]) -> Result<Self> {
        Face::new(vertices.iter().map(|&v| v as u32).collect())
    }

    pub(crate) fn from_sorted(vertices: Vec<u32>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn vertex_indices(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Codimension-one faces, the `i`-th omitting vertex `i`.
    pub fn facets(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).filter(|_| self.0.len() > 1).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Face(v)
        })
    }

    /// `self ∪ {v}`, or `None` if `v` is already a vertex.
    pub fn with_vertex(&self, v: u32) -> Option<Face> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, v);
                Some(Face(out))
            }
        }
    }

    /// Dash-joined vertex ids, e.g. `0-4-7`.
    pub fn label(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// A graph whose vertices carry labels from an ambient vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// `labels[i]` is the ambient label of local vertex `i`, ascending.
    pub labels: Vec<u32>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn isolated_labels(&self) -> Vec<u32> {
        self.graph.isolated_vertices().into_iter().map(|i| self.labels[i]).collect()
    }
}

/// Faces grouped by dimension `0..=dim_cap`; downward closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    dim_cap: usize,
    faces: Vec<BTreeSet<Face>>,
}

impl SimplicialComplex {
    pub fn empty(n: usize, dim_cap: usize) -> Self {
        SimplicialComplex {
            n,
            dim_cap,
            faces: vec![BTreeSet::new(); dim_cap + 1],
        }
    }

    /// Downward closure of `generators`, truncated at `dim_cap`.
    pub fn from_generators(n: usize, dim_cap: usize, generators: impl IntoIterator<Item = Face>) -> Result<Self> {
        let mut x = SimplicialComplex::empty(n, dim_cap);
        for g in generators {
            if let Some(&v) = g.vertices().iter().find(|&&v| v as usize >= n) {
                return Err(Error::InvalidFace(format!("vertex {v} of {g:?} outside 0..{n}")));
            }
            x.insert_closed(g);
        }
        Ok(x)
    }

    fn insert_closed(&mut self, face: Face) {
        let vs = face.vertices().to_vec();
        let top = vs.len().min(self.dim_cap + 1);
        // Every subset of size <= top; generators are small in practice.
        let mut stack: Vec<Face> = Vec::new();
        if vs.len() > top {
            for_each_subset(&vs, top, &mut |s| stack.push(Face::from_sorted(s.to_vec())));
        } else {
            stack.push(face);
        }
        while let Some(f) = stack.pop() {
            let d = f.dim();
            if self.faces[d].contains(&f) {
                continue;
            }
            stack.extend(f.facets());
            self.faces[d].insert(f);
        }
    }

    /// The clique complex of `g` up to dimension `dim_cap`: faces are the
    /// cliques with at most `dim_cap + 1` vertices.
    pub fn clique_complex(g: &Graph, dim_cap: usize) -> Self {
        let mut x = SimplicialComplex::empty(g.n(), dim_cap);
        for_each_clique_up_to(g, dim_cap + 1, &mut |c| {
            x.faces[c.len() - 1].insert(Face::from_sorted(c.iter().map(|&v| v as u32).collect()));
        });
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Faces of dimension `d`; empty beyond `dim_cap`.
    pub fn faces(&self, d: usize) -> &BTreeSet<Face> {
        static EMPTY: BTreeSet<Face> = BTreeSet::new();
        self.faces.get(d).unwrap_or(&EMPTY)
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(BTreeSet::len).collect()
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.faces(f.dim()).contains(f)
    }

    /// Highest dimension holding a face.
    pub fn top_dim(&self) -> Option<usize> {
        (0..=self.dim_cap).rev().find(|&d| !self.faces[d].is_empty())
    }

    pub fn is_downward_closed(&self) -> bool {
        (1..=self.dim_cap).all(|d| self.faces[d].iter().all(|f| f.facets().all(|g| self.faces[d - 1].contains(&g))))
    }

    /// Copy restricted to dimensions `0..=dim`.
    pub fn skeleton(&self, dim: usize) -> Self {
        let dim = dim.min(self.dim_cap);
        SimplicialComplex {
            n: self.n,
            dim_cap: dim,
            faces: self.faces[..=dim].to_vec(),
        }
    }

    pub fn one_skeleton(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for e in self.faces(1) {
            g.add_edge(e.vertices()[0] as usize, e.vertices()[1] as usize);
        }
        g
    }

    /// Number of stored `(d+1)`-faces containing each `d`-face, for `d < dim_cap`.
    fn coface_counts(&self, d: usize) -> HashMap<&Face, usize> {
        let mut counts: HashMap<&Face, usize> = self.faces(d).iter().map(|f| (f, 0)).collect();
        for f in self.faces(d + 1) {
            for g in f.facets() {
                if let Some(c) = counts.get_mut(&g) {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// `k`-faces contained in no stored `(k+1)`-face.
    pub fn maximal_faces(&self, k: usize) -> Vec<Face> {
        if k > self.dim_cap {
            return Vec::new();
        }
        let counts = self.coface_counts(k);
        self.faces[k].iter().filter(|f| counts[f] == 0).cloned().collect()
    }

    /// `X' = X \ Σ` with `Σ` the maximal `k`-faces. Other faces are kept.
    pub fn remove_maximal_faces(&self, k: usize) -> Result<Self> {
        if self.dim_cap < k {
            return Err(invalid(format!("dim_cap {} below k = {k}", self.dim_cap)));
        }
        let mut out = self.clone();
        for f in self.maximal_faces(k) {
            out.faces[k].remove(&f);
        }
        Ok(out)
    }

    /// The 1-skeleton of the link of `sigma`: vertices `v` with
    /// `sigma ∪ {v}` a face, edges `{v, y}` with `sigma ∪ {v, y}` a face.
    pub fn link(&self, sigma: &Face) -> Result<LabeledGraph> {
        if !self.contains(sigma) {
            return Err(Error::InvalidFace(format!("{sigma:?} is not a face")));
        }
        let labels: Vec<u32> = (0..self.n as u32)
            .filter(|&v| sigma.with_vertex(v).is_some_and(|f| self.contains(&f)))
            .collect();
        let mut graph = Graph::empty(labels.len());
        for i in 0..labels.len() {
            let with_i = sigma.with_vertex(labels[i]).expect("link vertex outside sigma");
            for j in i + 1..labels.len() {
                if with_i.with_vertex(labels[j]).is_some_and(|f| self.contains(&f)) {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(LabeledGraph { graph, labels })
    }

    /// `V_k`: vertices that are isolated in the link of some `(k-1)`-face.
    pub fn isolated_link_vertices(&self, k: usize) -> Result<BTreeSet<u32>> {
        if k < 1 || self.dim_cap < k + 1 {
            return Err(invalid(format!("need 1 <= k and dim_cap >= k + 1, got k = {k}, dim_cap = {}", self.dim_cap)));
        }
        let mut out = BTreeSet::new();
        for tau in self.faces(k - 1) {
            out.extend(self.link(tau)?.isolated_labels());
        }
        Ok(out)
    }
}

/// Calls `f` on every `size`-subset of the sorted slice `items`.
pub(crate) fn for_each_subset<T: Copy>(items: &[T], size: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(items: &[T], start: usize, size: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, size, cur, f);
            cur.pop();
        }
    }
    if size <= items.len() {
        rec(items, 0, size, &mut Vec::with_capacity(size), f);
    }
}

/// Calls `f` on every clique of `g` with between 1 and `max_size` vertices,
/// each given as an increasing vertex list.
pub fn for_each_clique_up_to(g: &Graph, max_size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(g: &Graph, cur: &mut Vec<usize>, cand: fixedbitset::FixedBitSet, max_size: usize, f: &mut impl FnMut(&[usize])) {
        f(cur);
        if cur.len() == max_size {
            return;
        }
        for v in cand.ones() {
            let mut next = cand.clone();
            next.intersect_with(g.neighbors(v));
            // Only extend with larger labels.
            next.set_range(..v + 1, false);
            cur.push(v);
            rec(g, cur, next, max_size, f);
            cur.pop();
        }
    }
    if max_size == 0 {
        return;
    }
    for v in 0..g.n() {
        let mut cand = g.neighbors(v).clone();
        cand.set_range(..v + 1, false);
        rec(g, &mut vec![v], cand, max_size, f);
    }
}

/// Cliques of exactly `size` vertices.
pub fn cliques_of_size(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_clique_up_to(g, size, &mut |c| {
        if c.len() == size {
            out.push(c.to_vec());
        }
    });
    out
}

/// The link of a clique `sigma` in the clique complex of `g`: the induced
/// subgraph on the common neighbours of `sigma`, labels preserved.
pub fn link_graph(g: &Graph, sigma: &Face) -> Result<LabeledGraph> {
    let vs = sigma.vertex_indices();
    if vs.iter().any(|&v| v >= g.n()) || !g.is_clique(&vs) {
        return Err(Error::InvalidFace(format!("{sigma:?} is not a clique")));
    }
    let common: Vec<usize> = g.common_neighbors(&vs).ones().collect();
    Ok(LabeledGraph {
        graph: g.induced(&common),
        labels: common.iter().map(|&v| v as u32).collect(),
    })
}

/// Maximal `(k+1)`-cliques of `g` as `k`-faces: cliques on `k + 1`
/// vertices whose common neighbourhood is empty.
pub fn maximal_k_faces(g: &Graph, k: usize) -> Vec<Face> {
    let mut out = Vec::new();
    for_each_clique_up_to(g, k + 1, &mut |c| {
        if c.len() == k + 1 && g.common_neighbors(c).is_clear() {
            out.push(Face::from_sorted(c.iter().map(|&v| v as u32).collect()));
        }
    });
    out.sort();
    out
}

/// Clique complex with `dim_cap = k + 1`, the default for degree-`k` work.
pub fn clique_complex(g: &Graph, dim_cap: usize) -> SimplicialComplex {
    SimplicialComplex::clique_complex(g, dim_cap)
}


#[cfg(test)]
impl SimplicialComplex {
    fn with_dim_cap(mut self, dim_cap: usize) -> Self {
        self.faces.resize(dim_cap + 1, BTreeSet::new());
        self.dim_cap = dim_cap;
        self
    }
}
