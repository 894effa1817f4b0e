//! The combinatorial Lefschetz number of a self-map relative to a union of
//! open simplices, together with the product rule and fixed-point
//! certificates.
//!
//! A self-map may be presented on the `n`-th barycentric subdivision of its
//! host, as a simplicial vertex map `sd^n X -> X`. Its chain endomorphism is
//! `f_# . sd_#^n` on `C(X)`, and `lambda(f, U)` is the alternating sum of the
//! traces of that endomorphism restricted to the cells of `U`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chain::{chain_map_of_vertex_map, compose, restricted_trace, subdivision_operator, ChainMap, VertexMap};
use crate::complex::{same_host, OpenSet, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{is_integral, rational, Rational, SparseMatrix};
use crate::product::{product_complex, ProductRecord};
use crate::subdivision::{barycentric_subdivision, iterated_subdivision, refine_set, SubdivisionRecord};

/// A simplicial self-map of `host`, possibly presented on a subdivision.
#[derive(Clone, Debug)]
pub struct SelfMap {
    subdivision: SubdivisionRecord,
    map: VertexMap,
}

impl SelfMap {
    /// A vertex self-map of `host` (depth 0).
    pub fn new(host: Arc<SimplicialComplex>, assignment: Vec<usize>) -> Result<Self> {
        let map = VertexMap::new(host.clone(), host.clone(), assignment)?;
        Ok(SelfMap { subdivision: SubdivisionRecord::identity(host), map })
    }

    pub fn identity(host: Arc<SimplicialComplex>) -> Self {
        let map = VertexMap::identity(host.clone());
        SelfMap { subdivision: SubdivisionRecord::identity(host), map }
    }

    pub fn from_names(host: Arc<SimplicialComplex>, pairs: &[(&str, &str)]) -> Result<Self> {
        let map = VertexMap::from_names(host.clone(), host.clone(), pairs)?;
        Ok(SelfMap { subdivision: SubdivisionRecord::identity(host), map })
    }

    /// A vertex map `rec.refined() -> rec.original()`.
    pub fn on_subdivision(rec: SubdivisionRecord, assignment: Vec<usize>) -> Result<Self> {
        let map = VertexMap::new(rec.refined().clone(), rec.original().clone(), assignment)?;
        Ok(SelfMap { subdivision: rec, map })
    }

    pub fn host(&self) -> &Arc<SimplicialComplex> {
        self.subdivision.original()
    }

    pub fn depth(&self) -> usize {
        self.subdivision.depth()
    }

    pub fn subdivision(&self) -> &SubdivisionRecord {
        &self.subdivision
    }

    pub fn vertex_map(&self) -> &VertexMap {
        &self.map
    }

    fn require_depth_zero(&self, op: &'static str) -> Result<()> {
        if self.depth() == 0 {
            Ok(())
        } else {
            Err(Error::RequiresDepthZero { op })
        }
    }

    /// Cell spanned by the image of a cell (depth 0 only).
    pub fn image_cell(&self, cell: usize) -> usize {
        self.map.image_cell(cell)
    }

    /// `f(S) ⊆ S`, checked on image cells. Returns the first offending cell.
    pub fn first_escaping_cell(&self, s: &OpenSet) -> Result<Option<usize>> {
        self.require_depth_zero("invariance check")?;
        if !same_host(s.host(), self.host()) {
            return Err(Error::HostMismatch);
        }
        Ok(s.cells().iter().copied().find(|&c| !s.contains(self.map.image_cell(c))))
    }

    pub fn check_invariant(&self, s: &OpenSet) -> Result<bool> {
        Ok(self.first_escaping_cell(s)?.is_none())
    }

    /// Bijective on vertices and on simplices.
    pub fn is_isomorphism(&self) -> bool {
        if self.depth() != 0 {
            return false;
        }
        let host = self.host();
        let mut seen = vec![false; host.num_vertices()];
        for &w in self.map.assignment() {
            if std::mem::replace(&mut seen[w], true) {
                return false;
            }
        }
        // injective on vertices, so simplices map to simplices of equal
        // dimension; counting per dimension gives surjectivity.
        let images: BTreeSet<usize> = (0..host.len()).map(|c| self.map.image_cell(c)).collect();
        images.len() == host.len()
    }

    /// Preserves the vertex order on every simplex (weakly, for collapses).
    pub fn is_order_preserving(&self) -> bool {
        self.host().simplices().iter().all(|s| {
            s.vertices().windows(2).all(|w| self.map.apply(w[0]) <= self.map.apply(w[1]))
        })
    }

    /// The map `<s> -> <f(s)>` induced on the barycentric subdivision of the
    /// host (depth 0 only).
    pub fn induced_on_subdivision(&self) -> Result<(SubdivisionRecord, SelfMap)> {
        self.require_depth_zero("subdivision of a map")?;
        let rec = barycentric_subdivision(self.host());
        let assignment = (0..self.host().len()).map(|c| self.map.image_cell(c)).collect();
        let lifted = SelfMap::new(rec.refined().clone(), assignment)?;
        Ok((rec, lifted))
    }

    /// A depth-`depth` presentation of this map: every barycenter goes to the
    /// image of the first vertex of its carrier. This is a simplicial
    /// approximation of the map.
    pub fn approximate_on_subdivision(&self, depth: usize) -> Result<SelfMap> {
        self.require_depth_zero("approximation on a subdivision")?;
        let rec = iterated_subdivision(self.host(), depth);
        let mut verts: Vec<usize> = (0..rec.refined().num_vertices()).collect();
        // a vertex of level i + 1 is a cell of level i; walk down to level 0
        for step in (0..depth).rev() {
            let below = &rec.levels()[step];
            for v in verts.iter_mut() {
                *v = below.simplex(*v).vertices()[0];
            }
        }
        let assignment = verts.into_iter().map(|v| self.map.apply(v)).collect();
        SelfMap::on_subdivision(rec, assignment)
    }

    /// `f_# . sd_#^depth` as an endomorphism of `C(host)`.
    pub fn endomorphism(&self) -> ChainMap {
        let fmap = chain_map_of_vertex_map(&self.map);
        if self.depth() == 0 {
            return fmap;
        }
        let sd = subdivision_operator(&self.subdivision);
        compose(&fmap, &sd).expect("subdivision feeds the vertex map")
    }
}

/// `lambda(f, -)` for a fixed self-map, with its endomorphism cached.
#[derive(Clone, Debug)]
pub struct LefschetzMeasure {
    selfmap: SelfMap,
    endomorphism: ChainMap,
}

impl LefschetzMeasure {
    pub fn new(selfmap: SelfMap) -> Self {
        let endomorphism = selfmap.endomorphism();
        debug_assert!(endomorphism.check_chain_law().is_ok());
        LefschetzMeasure { selfmap, endomorphism }
    }

    pub fn identity(host: Arc<SimplicialComplex>) -> Self {
        Self::new(SelfMap::identity(host))
    }

    pub fn host(&self) -> &Arc<SimplicialComplex> {
        self.selfmap.host()
    }

    pub fn selfmap(&self) -> &SelfMap {
        &self.selfmap
    }

    pub fn endomorphism(&self) -> &ChainMap {
        &self.endomorphism
    }

    /// Fails if `u` is not invariant (checked for depth-0 maps only).
    pub fn check_set(&self, u: &OpenSet) -> Result<()> {
        if !same_host(u.host(), self.host()) {
            return Err(Error::HostMismatch);
        }
        if self.selfmap.depth() == 0 {
            if let Some(c) = self.selfmap.first_escaping_cell(u)? {
                return Err(Error::NotInvariant(self.host().format_cell(c)));
            }
        }
        Ok(())
    }

    /// The combinatorial Lefschetz number `lambda(f, u)`.
    pub fn lambda(&self, u: &OpenSet) -> Result<Rational> {
        self.check_set(u)?;
        let value = lambda_c(&self.endomorphism, u)?;
        debug_assert!(is_integral(&value), "integer endomorphism gave {value}");
        Ok(value)
    }
}

/// `sum_p (-1)^p tr(phi restricted to the p-cells of w)`.
pub fn lambda_c(phi: &ChainMap, w: &OpenSet) -> Result<Rational> {
    let traces = restricted_trace(phi, w)?;
    Ok(alternate(&traces))
}

fn alternate(traces: &[Rational]) -> Rational {
    traces.iter().enumerate().fold(Rational::zero(), |acc, (p, t)| if p % 2 == 0 { acc + t } else { acc - t })
}

/// The tensor product `phi1 ⊗ phi2` of two chain endomorphisms, kept as its
/// Kronecker blocks `phi1_p ⊗ phi2_q`.
pub struct TensorEndomorphism {
    left: Arc<SimplicialComplex>,
    right: Arc<SimplicialComplex>,
    blocks: Vec<Vec<SparseMatrix>>,
}

impl TensorEndomorphism {
    pub fn new(phi1: &ChainMap, phi2: &ChainMap) -> Result<Self> {
        if !phi1.is_endomorphism() || !phi2.is_endomorphism() {
            return Err(Error::NotEndomorphism);
        }
        let blocks = phi1
            .matrices()
            .iter()
            .map(|a| phi2.matrices().iter().map(|b| a.kron(b)).collect())
            .collect();
        Ok(TensorEndomorphism {
            left: phi1.source().host().clone(),
            right: phi2.source().host().clone(),
            blocks,
        })
    }

    /// Diagonal entry at the basis element `s ⊗ t`.
    pub fn diagonal(&self, s: usize, t: usize) -> Rational {
        let p = self.left.cell_dim(s);
        let q = self.right.cell_dim(t);
        let idx = self.left.local_index(s) * self.right.count(q) + self.right.local_index(t);
        self.blocks[p][q].get(idx, idx)
    }

    /// `sum (-1)^(dim s + dim t) (phi1 ⊗ phi2)[s⊗t, s⊗t]` over the given pairs.
    pub fn restricted_alternating_trace(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Rational {
        pairs.into_iter().fold(Rational::zero(), |acc, (s, t)| {
            let d = self.diagonal(s, t);
            if (self.left.cell_dim(s) + self.right.cell_dim(t)).is_multiple_of(2) {
                acc + d
            } else {
                acc - d
            }
        })
    }
}

/// Alternating restricted trace of `phi1 ⊗ phi2` over `w1 x w2`.
pub fn lambda_product_tensor(phi1: &ChainMap, w1: &OpenSet, phi2: &ChainMap, w2: &OpenSet) -> Result<Rational> {
    if !same_host(phi1.source().host(), w1.host()) || !same_host(phi2.source().host(), w2.host()) {
        return Err(Error::HostMismatch);
    }
    let tensor = TensorEndomorphism::new(phi1, phi2)?;
    let pairs = w1.cells().iter().flat_map(|&s| w2.cells().iter().map(move |&t| (s, t)));
    Ok(tensor.restricted_alternating_trace(pairs))
}

/// The product self-map `(v, w) -> (f1 v, f2 w)` on a staircase product.
pub fn product_selfmap(rec: &ProductRecord, f1: &SelfMap, f2: &SelfMap) -> Result<SelfMap> {
    f1.require_depth_zero("product map")?;
    f2.require_depth_zero("product map")?;
    if !same_host(f1.host(), rec.left()) || !same_host(f2.host(), rec.right()) {
        return Err(Error::HostMismatch);
    }
    let assignment = (0..rec.product().num_vertices())
        .map(|x| {
            let (v, w) = rec.vertex_pair(x);
            rec.vertex(f1.map.apply(v), f2.map.apply(w))
        })
        .collect();
    SelfMap::new(rec.product().clone(), assignment)
}

/// `lambda(f1 x f2, u1 x u2)` computed on a staircase triangulation of the
/// product. Maps that do not preserve the vertex order are first replaced by
/// their induced maps on the barycentric subdivision, which always do.
pub fn lambda_product_triangulated(f1: &SelfMap, u1: &OpenSet, f2: &SelfMap, u2: &OpenSet) -> Result<Rational> {
    for (f, u) in [(f1, u1), (f2, u2)] {
        f.require_depth_zero("product map")?;
        if let Some(c) = f.first_escaping_cell(u)? {
            return Err(Error::NotInvariant(u.host().format_cell(c)));
        }
    }
    let lift = |f: &SelfMap, u: &OpenSet| -> Result<(SelfMap, OpenSet)> {
        if f.is_order_preserving() {
            Ok((f.clone(), u.clone()))
        } else {
            let (rec, g) = f.induced_on_subdivision()?;
            Ok((g, refine_set(u, &rec)?))
        }
    };
    let (g1, v1) = lift(f1, u1)?;
    let (g2, v2) = lift(f2, u2)?;
    let rec = product_complex(g1.host(), g2.host());
    let g = product_selfmap(&rec, &g1, &g2)?;
    let v = rec.product_set(&v1, &v2)?;
    LefschetzMeasure::new(g).lambda(&v)
}

/// A setwise-fixed simplex and its barycenter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub cell: usize,
    /// Barycentric coordinates `(vertex, weight)`.
    pub barycentric: Vec<(usize, Rational)>,
}

/// Searches `closure(u)` (cells of `u` first, then its frontier) for a
/// simplex mapped onto itself. An affine vertex permutation of such a simplex
/// fixes its barycenter.
pub fn fixed_point_certificate(f: &SelfMap, u: &OpenSet) -> Result<Option<FixedPoint>> {
    if !f.is_isomorphism() {
        return Err(Error::NotIsomorphism);
    }
    if let Some(c) = f.first_escaping_cell(u)? {
        return Err(Error::NotInvariant(u.host().format_cell(c)));
    }
    let frontier = u.frontier();
    let found = u.cells().iter().chain(frontier.cells().iter()).copied().find(|&c| f.image_cell(c) == c);
    Ok(found.map(|cell| {
        let s: &Simplex = f.host().simplex(cell);
        let w = Rational::one() / rational(s.vertices().len() as i64);
        FixedPoint { cell, barycentric: s.vertices().iter().map(|&v| (v, w.clone())).collect() }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::lefschetz_homological;

    fn closed(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(vertices, top).unwrap())
    }

    fn q(n: i64) -> Rational {
        rational(n)
    }

    fn edge() -> Arc<SimplicialComplex> {
        closed(&["a", "b"], &[&["a", "b"]])
    }

    #[test]
    fn invariance_checks() {
        let e = edge();
        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        assert!(SelfMap::identity(e.clone()).check_invariant(&open_edge).unwrap());
        let swap = SelfMap::from_names(e.clone(), &[("a", "b"), ("b", "a")]).unwrap();
        assert!(swap.check_invariant(&open_edge).unwrap());
        let collapse = SelfMap::from_names(e.clone(), &[("a", "a"), ("b", "a")]).unwrap();
        assert!(!collapse.check_invariant(&open_edge).unwrap());
        let err = LefschetzMeasure::new(collapse).lambda(&open_edge).unwrap_err();
        assert_eq!(err, Error::NotInvariant("(a,b)".into()));
    }

    #[test]
    fn isomorphism_checks() {
        let h = closed(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert!(SelfMap::identity(h.clone()).is_isomorphism());
        let rot = SelfMap::from_names(h.clone(), &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        assert!(rot.is_isomorphism());
        let collapse = SelfMap::from_names(edge(), &[("a", "a"), ("b", "a")]).unwrap();
        assert!(!collapse.is_isomorphism());
        // a bijection on vertices that does not preserve simplices
        let path = closed(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        assert!(SelfMap::from_names(path, &[("a", "b"), ("b", "a"), ("c", "c")]).is_err());
    }

    #[test]
    fn lambda_c_specializations() {
        let e = edge();
        let id = LefschetzMeasure::identity(e.clone());
        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        assert_eq!(id.lambda(&open_edge).unwrap(), q(-1));
        assert_eq!(id.lambda(&OpenSet::empty(e.clone())).unwrap(), q(0));
        let whole = OpenSet::whole(e.clone());
        assert_eq!(id.lambda(&whole).unwrap(), lefschetz_homological(id.endomorphism()).unwrap());
    }

    #[test]
    fn depth_one_presentation_matches_depth_zero() {
        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let refl = SelfMap::from_names(t.clone(), &[("a", "b"), ("b", "a"), ("c", "c")]).unwrap();
        let approx = refl.approximate_on_subdivision(1).unwrap();
        assert_eq!(approx.depth(), 1);
        let m0 = LefschetzMeasure::new(refl);
        let m1 = LefschetzMeasure::new(approx);
        for cells in [vec![6], vec![3, 6], vec![0, 1, 2, 3, 4, 5, 6], vec![2]] {
            let u = OpenSet::new(t.clone(), cells).unwrap();
            assert_eq!(m0.lambda(&u).unwrap(), m1.lambda(&u).unwrap());
        }
    }

    #[test]
    fn tensor_examples() {
        let e = edge();
        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        let id = LefschetzMeasure::identity(e.clone());
        let swap = LefschetzMeasure::new(SelfMap::from_names(e.clone(), &[("a", "b"), ("b", "a")]).unwrap());
        let v = lambda_product_tensor(swap.endomorphism(), &open_edge, id.endomorphism(), &open_edge).unwrap();
        assert_eq!(v, q(-1));
        let whole = OpenSet::whole(e.clone());
        let v = lambda_product_tensor(id.endomorphism(), &whole, id.endomorphism(), &open_edge).unwrap();
        assert_eq!(v, q(-1));
    }

    #[test]
    fn triangulated_product_of_swaps() {
        let e = edge();
        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        let swap = SelfMap::from_names(e.clone(), &[("a", "b"), ("b", "a")]).unwrap();
        let id = SelfMap::identity(e.clone());
        assert_eq!(lambda_product_triangulated(&swap, &open_edge, &id, &open_edge).unwrap(), q(-1));
        assert_eq!(lambda_product_triangulated(&swap, &open_edge, &swap, &open_edge).unwrap(), q(1));
        let whole = OpenSet::whole(e.clone());
        assert_eq!(lambda_product_triangulated(&swap, &whole, &swap, &whole).unwrap(), q(1));
    }

    #[test]
    fn fixed_points() {
        let e = edge();
        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        let cert = fixed_point_certificate(&SelfMap::identity(e.clone()), &open_edge).unwrap().unwrap();
        assert_eq!(e.format_cell(cert.cell), "(a,b)");
        assert_eq!(cert.barycentric, vec![(0, Rational::new(1.into(), 2.into())), (1, Rational::new(1.into(), 2.into()))]);

        let h = closed(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        let rot = SelfMap::from_names(h.clone(), &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let whole = OpenSet::whole(h.clone());
        assert_eq!(LefschetzMeasure::new(rot.clone()).lambda(&whole).unwrap(), q(0));
        assert_eq!(fixed_point_certificate(&rot, &whole).unwrap(), None);
    }
}
