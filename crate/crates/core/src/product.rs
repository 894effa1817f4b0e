//! Staircase triangulation of a product of simplicial complexes.
//!
//! Product vertices are pairs `(v, w)` named `v|w`, ordered lexicographically.
//! Inside `s x t` with `s = [v0..vp]` and `t = [w0..wq]`, the simplices whose
//! interiors lie in the open cell `s x t` are the lattice paths from `(0, 0)`
//! to `(p, q)` with steps `(1, 0)`, `(0, 1)` and `(1, 1)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::complex::{same_host, OpenSet, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ProductRecord {
    left: Arc<SimplicialComplex>,
    right: Arc<SimplicialComplex>,
    product: Arc<SimplicialComplex>,
    carrier: Vec<(usize, usize)>,
}

impl ProductRecord {
    pub fn left(&self) -> &Arc<SimplicialComplex> {
        &self.left
    }

    pub fn right(&self) -> &Arc<SimplicialComplex> {
        &self.right
    }

    pub fn product(&self) -> &Arc<SimplicialComplex> {
        &self.product
    }

    /// Index of the product vertex `(v, w)`.
    pub fn vertex(&self, v: usize, w: usize) -> usize {
        v * self.right.num_vertices() + w
    }

    /// Inverse of [`ProductRecord::vertex`].
    pub fn vertex_pair(&self, x: usize) -> (usize, usize) {
        let n = self.right.num_vertices();
        (x / n, x % n)
    }

    /// The pair of open cells whose product contains the open product cell.
    pub fn carrier(&self, cell: usize) -> (usize, usize) {
        self.carrier[cell]
    }

    pub fn carriers(&self) -> &[(usize, usize)] {
        &self.carrier
    }

    pub fn carried_by(&self, left: usize, right: usize) -> impl Iterator<Item = usize> + '_ {
        self.carrier
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == (left, right))
            .map(|(i, _)| i)
    }

    /// Product cells carried by a pair in `a x b`.
    pub fn product_set(&self, a: &OpenSet, b: &OpenSet) -> Result<OpenSet> {
        if !same_host(a.host(), &self.left) || !same_host(b.host(), &self.right) {
            return Err(Error::HostMismatch);
        }
        let cells = (0..self.product.len()).filter(|&c| {
            let (s, t) = self.carrier[c];
            a.contains(s) && b.contains(t)
        });
        OpenSet::new(self.product.clone(), cells)
    }
}

fn staircases(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    fn walk(i: usize, j: usize, p: usize, q: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        path.push((i, j));
        if (i, j) == (p, q) {
            out.push(path.clone());
        } else {
            for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                if i + di <= p && j + dj <= q {
                    walk(i + di, j + dj, p, q, path, out);
                }
            }
        }
        path.pop();
    }
    let mut out = Vec::new();
    walk(0, 0, p, q, &mut Vec::new(), &mut out);
    out
}

/// Staircase triangulation of `a x b` with cell carriers.
pub fn product_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> ProductRecord {
    let nb = b.num_vertices();
    let names = a
        .vertex_names()
        .iter()
        .flat_map(|v| b.vertex_names().iter().map(move |w| format!("{v}|{w}")))
        .collect();
    let mut simplices = BTreeSet::new();
    for s in a.simplices() {
        for t in b.simplices() {
            for path in staircases(s.dim(), t.dim()) {
                let verts = path
                    .iter()
                    .map(|&(i, j)| s.vertices()[i] * nb + t.vertices()[j])
                    .collect();
                simplices.insert(Simplex::from_sorted(verts));
            }
        }
    }
    let product = SimplicialComplex::from_closed(names, simplices);
    let carrier = product
        .simplices()
        .iter()
        .map(|x| {
            let mut left: Vec<usize> = x.vertices().iter().map(|&v| v / nb).collect();
            let mut right: Vec<usize> = x.vertices().iter().map(|&v| v % nb).collect();
            left.dedup();
            right.sort_unstable();
            right.dedup();
            let s = a.id_of(&Simplex::from_sorted(left)).expect("left projection is a simplex");
            let t = b.id_of(&Simplex::from_sorted(right)).expect("right projection is a simplex");
            (s, t)
        })
        .collect();
    ProductRecord { left: a.clone(), right: b.clone(), product: Arc::new(product), carrier }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(vertices, top).unwrap())
    }

    #[test]
    fn square_from_two_edges() {
        let e = closed(&["a", "b"], &[&["a", "b"]]);
        let rec = product_complex(&e, &e);
        let x = rec.product();
        assert_eq!((x.count(0), x.count(1), x.count(2)), (4, 5, 2));
        let ab = e.cell_by_names(&["a", "b"]).unwrap();
        let signed: i64 = rec
            .carried_by(ab, ab)
            .map(|c| if x.cell_dim(c).is_multiple_of(2) { 1 } else { -1 })
            .sum();
        assert_eq!(signed, 1);
        assert_eq!(rec.carried_by(ab, ab).filter(|&c| x.cell_dim(c) == 1).count(), 1);
    }

    #[test]
    fn vertex_factor_is_identity() {
        let v = closed(&["p"], &[]);
        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let rec = product_complex(&v, &t);
        assert_eq!(rec.product().len(), t.len());
        for c in 0..rec.product().len() {
            let (s, tau) = rec.carrier(c);
            assert_eq!(s, 0);
            assert_eq!(rec.product().simplex(c).vertices(), t.simplex(tau).vertices());
        }
    }

    #[test]
    fn signed_counts_match_cell_dimension() {
        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let e = closed(&["x", "y"], &[&["x", "y"]]);
        let rec = product_complex(&t, &e);
        let x = rec.product();
        for (s, ss) in t.simplices().iter().enumerate() {
            for (u, uu) in e.simplices().iter().enumerate() {
                let signed: i64 = rec
                    .carried_by(s, u)
                    .map(|c| if x.cell_dim(c).is_multiple_of(2) { 1 } else { -1 })
                    .sum();
                let expected = if (ss.dim() + uu.dim()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(signed, expected);
            }
        }
        // prism: 3 tetrahedra
        assert_eq!(x.count(3), 3);
    }
}
