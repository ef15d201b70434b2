//! Two-photon configuration space as a single-particle graph.
//!
//! Two bosons on an N-site lattice live in the span of the states
//! `|q,r⟩ = a†_q a†_r |0⟩` (q < r) and `|q,q⟩ = (a†_q)² |0⟩ / √2`. In that
//! basis the lattice Hamiltonian is the adjacency matrix of a graph on the
//! N(N+1)/2 unordered site pairs:
//!
//! * vertex `{q,r}` carries the potential `β_q + β_r`;
//! * `{s,x} ↔ {s,y}` with `x ≠ y` hop with amplitude `C_{x,y}`, multiplied
//!   by √2 when either endpoint is doubly occupied;
//! * no other pairs of vertices are connected.
//!
//! A single walker on this graph reproduces the two-photon coincidence
//! probabilities of indistinguishable photons.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::evolution::{propagator, Propagator};
use crate::lattice::WaveguideLattice;
use crate::scalar::Real;

/// An unordered pair of lattice sites with `q <= r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairVertex {
    pub q: usize,
    pub r: usize,
}

impl PairVertex {
    pub fn new(a: usize, b: usize) -> Self {
        PairVertex { q: a.min(b), r: a.max(b) }
    }

    pub fn is_doubly_occupied(&self) -> bool {
        self.q == self.r
    }

    /// If the two vertices share exactly one site, returns the two sites that
    /// differ (this vertex's, then the other's).
    fn single_hop(&self, other: &PairVertex) -> Option<(usize, usize)> {
        let (a, b) = (*self, *other);
        if a == b {
            return None;
        }
        for (sa, xa) in [(a.q, a.r), (a.r, a.q)] {
            for (sb, xb) in [(b.q, b.r), (b.r, b.q)] {
                if sa == sb && xa != xb {
                    return Some((xa, xb));
                }
            }
        }
        None
    }
}

/// Linear position of `{q, r}` in lexicographic vertex order.
pub fn pair_index(n: usize, q: usize, r: usize) -> usize {
    let (q, r) = (q.min(r), q.max(r));
    // rows before q hold n, n-1, ..., n-q+1 vertices
    q * n - q * q.saturating_sub(1) / 2 + (r - q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEdge<T> {
    pub a: usize,
    pub b: usize,
    pub amplitude: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigGraph<T: Real> {
    site_labels: Vec<String>,
    vertices: Vec<PairVertex>,
    potentials: Vec<T>,
    edges: Vec<ConfigEdge<T>>,
    adjacency: DMatrix<T>,
}

impl<T: Real> ConfigGraph<T> {
    pub fn n_sites(&self) -> usize {
        self.site_labels.len()
    }

    pub fn vertices(&self) -> &[PairVertex] {
        &self.vertices
    }

    pub fn potentials(&self) -> &[T] {
        &self.potentials
    }

    pub fn edges(&self) -> &[ConfigEdge<T>] {
        &self.edges
    }

    /// Full single-particle Hamiltonian on the pair graph (potentials on the
    /// diagonal).
    pub fn adjacency(&self) -> &DMatrix<T> {
        &self.adjacency
    }

    pub fn vertex_index(&self, q: usize, r: usize) -> Result<usize> {
        let n = self.n_sites();
        for s in [q, r] {
            if s >= n {
                return Err(Error::IndexOutOfRange { index: s, len: n });
            }
        }
        Ok(pair_index(n, q, r))
    }

    /// Vertex label `"<site>-<site>"`, e.g. `X1-Y1`.
    pub fn vertex_label(&self, v: usize) -> String {
        let p = self.vertices[v];
        format!("{}-{}", self.site_labels[p.q], self.site_labels[p.r])
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

/// Builds the pair graph of a lattice. Vertices are ordered lexicographically
/// in `(q, r)`.
pub fn expand<T: Real>(lattice: &WaveguideLattice<T>) -> ConfigGraph<T> {
    let n = lattice.n_sites();
    let beta = lattice.beta();
    let coupling = lattice.coupling();
    let vertices: Vec<PairVertex> = (0..n).flat_map(|q| (q..n).map(move |r| PairVertex { q, r })).collect();
    let m = vertices.len();
    let potentials: Vec<T> = vertices.iter().map(|v| beta[v.q] + beta[v.r]).collect();
    let sqrt2 = T::lit(2.0).sqrt();
    let mut adjacency = DMatrix::zeros(m, m);
    let mut edges = Vec::new();
    for (i, vi) in vertices.iter().enumerate() {
        adjacency[(i, i)] = potentials[i];
        for (j, vj) in vertices.iter().enumerate().skip(i + 1) {
            let Some((x, y)) = vi.single_hop(vj) else { continue };
            let c = coupling[(x, y)];
            if c == T::zero() {
                continue;
            }
            let amplitude = if vi.is_doubly_occupied() || vj.is_doubly_occupied() { sqrt2 * c } else { c };
            adjacency[(i, j)] = amplitude;
            adjacency[(j, i)] = amplitude;
            edges.push(ConfigEdge { a: i, b: j, amplitude });
        }
    }
    ConfigGraph { site_labels: lattice.labels(), vertices, potentials, edges, adjacency }
}

/// Propagator of a single walker on the pair graph.
pub fn graph_propagator<T: Real>(g: &ConfigGraph<T>, z: T) -> Result<Propagator<T>> {
    propagator(&g.adjacency, z)
}

/// Vertex occupation probabilities after length `z`, starting from `{q, r}`.
pub fn simulate_on_graph<T: Real>(g: &ConfigGraph<T>, start: (usize, usize), z: T) -> Result<Vec<T>> {
    let s = g.vertex_index(start.0, start.1)?;
    let p = graph_propagator(g, z)?;
    Ok(p.matrix().column(s).iter().map(|a| a.norm_sqr()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_linear_chain, build_swiss_cross, CouplingModel};
    use std::f64::consts::PI;

    #[test]
    fn pair_index_is_lexicographic() {
        for n in 1..7 {
            let mut k = 0;
            for q in 0..n {
                for r in q..n {
                    assert_eq!(pair_index(n, q, r), k);
                    assert_eq!(pair_index(n, r, q), k);
                    k += 1;
                }
            }
        }
    }

    #[test]
    fn two_site_chain_by_hand() {
        let (beta, c) = (0.4, 1.5);
        let lat = build_linear_chain(2, 18.0, c, beta, 1.0, None).unwrap();
        let g = expand(&lat);
        let s = 2f64.sqrt() * c;
        let expected = DMatrix::from_row_slice(3, 3, &[2.0 * beta, s, 0.0, s, 2.0 * beta, s, 0.0, s, 2.0 * beta]);
        assert!((g.adjacency() - expected).amax() < 1e-15);
        assert_eq!(g.vertices(), &[PairVertex::new(0, 0), PairVertex::new(0, 1), PairVertex::new(1, 1)]);
        assert_eq!(g.vertex_label(1), "W1-W2");
    }

    #[test]
    fn single_site_graph() {
        let lat = build_linear_chain(1, 18.0, 1.5, 0.3, 1.0, None).unwrap();
        let g = expand(&lat);
        assert_eq!(g.vertices().len(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(g.potentials(), &[0.6]);
    }

    #[test]
    fn swiss_cross_graph_shape() {
        let model = CouplingModel::evanescent(1.5, 18.0).unwrap();
        let lat = build_swiss_cross(18.0, 19.0, 1.5, 0.0, 1.4, &model).unwrap();
        let g = expand(&lat);
        assert_eq!(g.vertices().len(), 45);
        assert_eq!(g.vertices().iter().filter(|v| v.is_doubly_occupied()).count(), 9);
        assert_eq!(g.max_degree(), 8);
        let deg = g.degrees();
        let lat_deg = lat.degrees();
        for q in 0..9 {
            assert_eq!(deg[g.vertex_index(q, q).unwrap()], lat_deg[q]);
        }
        let c = lat.site_index("C").unwrap();
        let cc = g.vertex_index(c, c).unwrap();
        let sqrt2c = 2f64.sqrt() * 1.5;
        for l in ["X2", "X3", "Y2", "Y3"] {
            let k = g.vertex_index(c, lat.site_index(l).unwrap()).unwrap();
            assert!((g.adjacency()[(cc, k)] - sqrt2c).abs() < 1e-15);
        }
    }

    #[test]
    fn balanced_coupler_graph_walk() {
        let lat = build_linear_chain(2, 18.0, 1.0, 0.0, 1.0, None).unwrap();
        let g = expand(&lat);
        let p = simulate_on_graph(&g, (0, 1), PI / 4.0).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && p[1].abs() < 1e-12 && (p[2] - 0.5).abs() < 1e-12);
        let p0 = simulate_on_graph(&g, (1, 0), 0.0).unwrap();
        assert_eq!(p0, vec![0.0, 1.0, 0.0]);
        assert!(simulate_on_graph(&g, (0, 2), 1.0).is_err());
    }
}
