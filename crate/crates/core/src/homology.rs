//! Rational homology and the homological Lefschetz number.
//!
//! For each dimension the cycle space is split as `B_p + span(reps)`, where
//! the representatives are kernel basis vectors not already spanned by the
//! boundaries, picked greedily in basis order. A left inverse of that basis
//! gives the projection of any cycle onto homology coordinates.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chain::{boundary_matrices, ChainComplex, ChainMap};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, rref, Rational, SparseMatrix};

/// Homology data of one dimension.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    /// Cycle representatives, as coordinate vectors over the `p`-simplices.
    pub representatives: Vec<Vec<Rational>>,
    /// `betti x n_p` matrix sending a cycle to its homology coordinates.
    pub projection: Vec<Vec<Rational>>,
}

impl HomologyGroup {
    pub fn betti(&self) -> usize {
        self.representatives.len()
    }

    pub fn project(&self, cycle: &[Rational]) -> Vec<Rational> {
        self.projection
            .iter()
            .map(|row| row.iter().zip(cycle).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct HomologyBasis {
    complex: Arc<ChainComplex>,
    groups: Vec<HomologyGroup>,
}

impl HomologyBasis {
    pub fn new(complex: Arc<ChainComplex>) -> Self {
        let groups = (0..complex.num_dims()).map(|p| group(&complex, p)).collect();
        HomologyBasis { complex, groups }
    }

    pub fn of(x: &Arc<SimplicialComplex>) -> Self {
        Self::new(Arc::new(boundary_matrices(x)))
    }

    pub fn complex(&self) -> &Arc<ChainComplex> {
        &self.complex
    }

    pub fn group(&self, p: usize) -> &HomologyGroup {
        &self.groups[p]
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(HomologyGroup::betti).collect()
    }
}

fn group(cx: &ChainComplex, p: usize) -> HomologyGroup {
    let n = cx.rank(p);
    let cycles = if p == 0 {
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        kernel_basis(cx.boundary(p))
    };
    let boundaries: Vec<Vec<Rational>> = if p + 1 < cx.num_dims() {
        let d = cx.boundary(p + 1).to_dense();
        (0..cx.rank(p + 1)).map(|j| d.iter().map(|row| row[j].clone()).collect()).collect()
    } else {
        Vec::new()
    };
    let candidates: Vec<&Vec<Rational>> = boundaries.iter().chain(cycles.iter()).collect();
    let mut m: Vec<Vec<Rational>> =
        (0..n).map(|i| candidates.iter().map(|c| c[i].clone()).collect()).collect();
    let pivots = rref(&mut m, candidates.len());
    let chosen: Vec<&Vec<Rational>> = pivots.iter().map(|&c| candidates[c]).collect();
    let boundary_rank = pivots.iter().filter(|&&c| c < boundaries.len()).count();
    let representatives: Vec<Vec<Rational>> =
        chosen[boundary_rank..].iter().map(|v| (*v).clone()).collect();

    // Row-reduce [chosen | I]; the top rows of the right block form a left
    // inverse of the chosen basis.
    let k = chosen.len();
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = chosen.iter().map(|c| c[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug, k);
    debug_assert_eq!(piv.len(), k);
    let projection = aug[boundary_rank..k].iter().map(|row| row[k..].to_vec()).collect();
    HomologyGroup { representatives, projection }
}

/// Rational Betti numbers, one per dimension.
pub fn betti_numbers(x: &Arc<SimplicialComplex>) -> Vec<usize> {
    let cx = boundary_matrices(x);
    (0..cx.num_dims())
        .map(|p| {
            let kernel = if p == 0 { cx.rank(0) } else { cx.rank(p) - rank(cx.boundary(p)) };
            let image = if p + 1 < cx.num_dims() { rank(cx.boundary(p + 1)) } else { 0 };
            kernel - image
        })
        .collect()
}

/// Matrices of the map induced on homology by a chain endomorphism.
pub fn induced_homology_map(phi: &ChainMap, h: &HomologyBasis) -> Result<Vec<SparseMatrix>> {
    if !phi.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    phi.check_chain_law()?;
    Ok(h
        .groups
        .iter()
        .enumerate()
        .map(|(p, g)| {
            let b = g.betti();
            let dense: Vec<Vec<Rational>> = {
                let images: Vec<Vec<Rational>> =
                    g.representatives.iter().map(|z| g.project(&phi.matrix(p).apply(z))).collect();
                (0..b).map(|i| images.iter().map(|col| col[i].clone()).collect()).collect()
            };
            SparseMatrix::from_dense(&dense, b)
        })
        .collect())
}

/// `sum_p (-1)^p tr H_p(phi)`.
pub fn lefschetz_homological(phi: &ChainMap) -> Result<Rational> {
    let h = HomologyBasis::new(phi.source().clone());
    let maps = induced_homology_map(phi, &h)?;
    Ok(maps.iter().enumerate().fold(Rational::zero(), |acc, (p, m)| {
        if p % 2 == 0 {
            acc + m.trace()
        } else {
            acc - m.trace()
        }
    }))
}
