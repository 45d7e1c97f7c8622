//! Independent oracles shared by the integration tests. Nothing here calls
//! into the algorithms it is used to check.

#![allow(dead_code)]

use clique_process::complex::{clique_complex, Face, SimplicialComplex};
use clique_process::homology::{betti, FieldChoice};
use clique_process::spectral::{garland_certify, zuk_certify, SPECTRAL_TOL};
use clique_process::Graph;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Maximal cliques by Bron–Kerbosch with pivoting on plain adjacency lists.
pub fn bron_kerbosch(g: &Graph) -> Vec<Vec<usize>> {
    let adj: Vec<Vec<bool>> = (0..g.n()).map(|u| (0..g.n()).map(|v| u != v && g.has_edge(u, v)).collect()).collect();
    fn rec(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort();
            out.push(c);
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        let (mut p, mut x) = (p, x);
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
            rec(adj, r, np, nx, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    rec(&adj, &mut Vec::new(), (0..g.n()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

/// Every clique of `g` (as sorted vertex lists), by scanning all subsets.
pub fn all_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if vs.iter().enumerate().all(|(a, &u)| vs[a + 1..].iter().all(|&v| g.has_edge(u, v))) {
            out.push(vs);
        }
    }
    out
}

/// Rank of an integer matrix by dense Gaussian elimination over `Q`.
pub fn dense_rank(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> usize {
    let mut m = vec![vec![BigRational::zero(); cols]; rows];
    for &(r, c, x) in entries {
        m[r][c] += BigRational::from_integer(x.into());
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for j in c..cols {
                    let sub = &f * &m[rank][j];
                    m[r][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense normalized Laplacian built from adjacency queries.
pub fn laplacian_dense(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let deg: Vec<f64> = (0..n).map(|u| (0..n).filter(|&v| v != u && g.has_edge(u, v)).count() as f64).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1.0
                    } else if g.has_edge(i, j) {
                        -1.0 / (deg[i] * deg[j]).sqrt()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Components of a graph by depth-first search.
pub fn component_count(g: &Graph) -> usize {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if v != u && !seen[v] && g.has_edge(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Checks the face-removal lemmas on the clique complex of `g` in degree
/// `k`, using rational homology. Returns a description of the first
/// violation.
pub fn check_removal_lemmas(g: &Graph, k: usize) -> Result<(), String> {
    let x = clique_complex(g, k + 1);
    let sigma = x.maximal_faces(k);
    let m = sigma.len();
    let xp = x.remove_maximal_faces(k).map_err(|e| e.to_string())?;

    // Vertex characterisation and emptiness.
    let vk = x.isolated_link_vertices(k).map_err(|e| e.to_string())?;
    let mut in_sigma = std::collections::BTreeSet::new();
    for f in &sigma {
        in_sigma.extend(f.vertices().iter().copied());
    }
    if vk != in_sigma {
        return Err(format!("V_k = {vk:?} but vertices of maximal faces = {in_sigma:?}"));
    }
    if vk.is_empty() != sigma.is_empty() {
        return Err("V_k empty does not match maximal faces empty".into());
    }

    // Link connectivity in X' against the shape of the link in X.
    for tau in x.faces(k - 1) {
        let lx = x.link(tau).map_err(|e| e.to_string())?;
        let lxp = xp.link(tau).map_err(|e| e.to_string())?;
        let connected = lxp.graph.n() > 0 && component_count(&lxp.graph) == 1;
        let isolated = lx.graph.isolated_vertices().len();
        let nontrivial = component_count(&lx.graph) - isolated;
        if connected != (nontrivial == 1) {
            return Err(format!("link of {tau:?}: connected in X' = {connected}, non-trivial components in X = {nontrivial}"));
        }
    }

    let q = FieldChoice::Rational;
    let bk = betti(&x, k, q).map_err(|e| e.to_string())?;
    let bkp = betti(&xp, k, q).map_err(|e| e.to_string())?;
    let bk1 = betti(&x, k - 1, q).map_err(|e| e.to_string())?;
    let bk1p = betti(&xp, k - 1, q).map_err(|e| e.to_string())?;
    if bk > m && bkp < 1 {
        return Err(format!("beta_k(X) = {bk} > m = {m} but beta_k(X') = 0"));
    }
    if bk < m && bk1p < 1 {
        return Err(format!("beta_k(X) = {bk} < m = {m} but beta_(k-1)(X') = 0"));
    }
    // The sharper form: removing the faces raises beta_(k-1) by exactly
    // the number of removed faces that were not independent classes.
    if bk1p as i64 - bk1 as i64 != bkp as i64 - bk as i64 + m as i64 {
        return Err(format!("exchange identity fails: {bk1}->{bk1p}, {bk}->{bkp}, m = {m}"));
    }
    if bk < m && bk1p <= bk1 {
        return Err(format!("beta_k(X) = {bk} < m = {m} but beta_(k-1) did not grow ({bk1} -> {bk1p})"));
    }
    Ok(())
}

/// Re-verifies a certified complex: purity in the top dimension and every
/// `(k-1)`-face link connected with spectral gap above `k/(k+1)`, using the
/// Jacobi solver.
pub fn reverify_certificate(x: &SimplicialComplex, k: usize) -> Result<(), String> {
    let top = k + 1;
    for d in 0..top {
        for f in x.faces(d) {
            if !x.faces(d + 1).iter().any(|g| f.vertices().iter().all(|v| g.contains(*v))) {
                return Err(format!("{f:?} has no coface: not pure"));
            }
        }
    }
    if x.faces(top).is_empty() {
        return Err("no top-dimensional faces".into());
    }
    let threshold = k as f64 / (k as f64 + 1.0);
    for tau in x.faces(k - 1) {
        let link = x.link(tau).map_err(|e| e.to_string())?;
        if link.graph.n() < 2 || component_count(&link.graph) != 1 {
            return Err(format!("link of {tau:?} is not connected"));
        }
        let ev = jacobi_eigenvalues(laplacian_dense(&link.graph));
        if !(ev[1] > threshold + SPECTRAL_TOL) {
            return Err(format!("link of {tau:?} has lambda2 = {}", ev[1]));
        }
    }
    Ok(())
}

/// One soundness check: a Garland certification must come with
/// `beta_k = 0`; a Zuk certification must re-verify independently.
pub fn check_certifier(g: &Graph, k: usize) -> Result<(bool, bool), String> {
    let x = clique_complex(g, k + 1);
    let garland = garland_certify(&x, k).map_err(|e| e.to_string())?;
    if garland.certified {
        let b = betti(&x, k, FieldChoice::Rational).map_err(|e| e.to_string())?;
        if b != 0 {
            return Err(format!("garland certified but beta_{k} = {b}"));
        }
        reverify_certificate(&x.skeleton(k + 1), k)?;
    }
    let x2 = clique_complex(g, 2);
    let zuk = zuk_certify(&x2).map_err(|e| e.to_string())?;
    if zuk.certified {
        reverify_certificate(&x2, 1)?;
    }
    Ok((garland.certified, zuk.certified))
}

/// Faces of a graph's clique complex of dimension `d`, from the subset scan.
pub fn faces_by_scan(g: &Graph, d: usize) -> Vec<Face> {
    let mut faces: Vec<Face> =
        all_cliques(g).into_iter().filter(|c| c.len() == d + 1).map(|c| Face::from_usize(&c).unwrap()).collect();
    faces.sort();
    faces
}
