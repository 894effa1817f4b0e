//! Rational simplicial chain complexes and chain maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::complex::{same_host, OpenSet, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{rational, Rational, SparseMatrix};
use crate::subdivision::SubdivisionRecord;

/// Boundary matrices of a complex. `boundary(p)` maps `C_p -> C_{p-1}`
/// (`C_{-1} = 0`), with `d[v0..vp] = sum_i (-1)^i [v0..^vi..vp]`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    host: Arc<SimplicialComplex>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn host(&self) -> &Arc<SimplicialComplex> {
        &self.host
    }

    pub fn num_dims(&self) -> usize {
        self.boundaries.len()
    }

    pub fn rank(&self, p: usize) -> usize {
        self.host.count(p)
    }

    pub fn boundary(&self, p: usize) -> &SparseMatrix {
        &self.boundaries[p]
    }

    /// Every composite `d_{p-1} d_p` vanishes.
    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|p| self.boundaries[p - 1].mul(&self.boundaries[p]).is_zero())
    }
}

pub fn boundary_matrices(x: &Arc<SimplicialComplex>) -> ChainComplex {
    let boundaries = (0..x.num_dims())
        .map(|p| {
            let rows = if p == 0 { 0 } else { x.count(p - 1) };
            let columns = x
                .dim_range(p)
                .map(|id| {
                    let mut col = BTreeMap::new();
                    for (sign, face) in x.simplex(id).boundary() {
                        let f = x.id_of(&face).expect("face-closed");
                        col.insert(x.local_index(f), rational(sign));
                    }
                    col
                })
                .collect();
            SparseMatrix::from_column_maps(rows, columns)
        })
        .collect();
    let cx = ChainComplex { host: x.clone(), boundaries };
    debug_assert!(cx.is_complex());
    cx
}

/// A simplicial vertex map `source -> target`.
#[derive(Clone, Debug)]
pub struct VertexMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    assignment: Vec<usize>,
}

impl VertexMap {
    /// Checks that the image of every simplex spans a simplex of `target`.
    pub fn new(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.num_vertices() {
            return Err(Error::AssignmentLength { expected: source.num_vertices(), got: assignment.len() });
        }
        if let Some(&w) = assignment.iter().find(|&&w| w >= target.num_vertices()) {
            return Err(Error::UnknownVertex(format!("#{w}")));
        }
        let map = VertexMap { source, target, assignment };
        for s in map.source.maximal_simplices() {
            if map.target.id_of(&map.image(s)).is_none() {
                return Err(Error::NotSimplicial(map.source.format_simplex(s)));
            }
        }
        Ok(map)
    }

    pub fn identity(x: Arc<SimplicialComplex>) -> Self {
        let assignment = (0..x.num_vertices()).collect();
        VertexMap { source: x.clone(), target: x, assignment }
    }

    /// Builds a map from `(source name, target name)` pairs covering every
    /// source vertex.
    pub fn from_names(
        source: Arc<SimplicialComplex>,
        target: Arc<SimplicialComplex>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut assignment = vec![None; source.num_vertices()];
        for (a, b) in pairs {
            let v = source.vertex_index(a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let w = target.vertex_index(b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            assignment[v] = Some(w);
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(v, w)| w.ok_or_else(|| Error::UnknownVertex(format!("no image for {}", source.vertex_name(v)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, assignment)
    }

    pub fn source(&self) -> &Arc<SimplicialComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialComplex> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Deduplicated image vertex set of `s`.
    pub fn image(&self, s: &Simplex) -> Simplex {
        let mut verts: Vec<usize> = s.vertices().iter().map(|&v| self.assignment[v]).collect();
        verts.sort_unstable();
        verts.dedup();
        Simplex::new(verts).expect("nonempty")
    }

    /// Target cell spanned by the image of a source cell.
    pub fn image_cell(&self, cell: usize) -> usize {
        self.target.id_of(&self.image(self.source.simplex(cell))).expect("map is simplicial")
    }

    /// Image of a source cell as a signed target cell; `None` when the image
    /// is degenerate.
    pub fn oriented_image(&self, cell: usize) -> Option<(i64, usize)> {
        let verts: Vec<usize> =
            self.source.simplex(cell).vertices().iter().map(|&v| self.assignment[v]).collect();
        let sign = permutation_sign(&verts)?;
        let mut sorted = verts;
        sorted.sort_unstable();
        let id = self.target.id_of(&Simplex::from_sorted(sorted)).expect("map is simplicial");
        Some((sign, id))
    }

    /// `g . self`.
    pub fn then(&self, g: &VertexMap) -> Result<VertexMap> {
        if !same_host(&self.target, &g.source) {
            return Err(Error::HostMismatch);
        }
        let assignment = self.assignment.iter().map(|&v| g.assignment[v]).collect();
        VertexMap::new(self.source.clone(), g.target.clone(), assignment)
    }
}

/// Sign of the permutation sorting `verts`; `None` if a value repeats.
fn permutation_sign(verts: &[usize]) -> Option<i64> {
    let mut inversions = 0usize;
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            match verts[i].cmp(&verts[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Per-dimension matrices `C_p(source) -> C_p(target)`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    matrices: Vec<SparseMatrix>,
}

impl ChainMap {
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, matrices: Vec<SparseMatrix>) -> Result<Self> {
        let map = ChainMap { source, target, matrices };
        map.check_shapes()?;
        Ok(map)
    }

    fn check_shapes(&self) -> Result<()> {
        if self.matrices.len() != self.source.num_dims() {
            return Err(Error::NotChainMap(self.matrices.len()));
        }
        for (p, m) in self.matrices.iter().enumerate() {
            if m.cols() != self.source.rank(p) || m.rows() != self.target.rank(p) {
                return Err(Error::NotChainMap(p));
            }
        }
        Ok(())
    }

    pub fn identity(cx: Arc<ChainComplex>) -> Self {
        let matrices = (0..cx.num_dims()).map(|p| SparseMatrix::identity(cx.rank(p))).collect();
        ChainMap { source: cx.clone(), target: cx, matrices }
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }

    pub fn matrix(&self, p: usize) -> &SparseMatrix {
        &self.matrices[p]
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.matrices
    }

    pub fn is_endomorphism(&self) -> bool {
        same_host(self.source.host(), self.target.host())
    }

    /// Checks `d_p . F_p = F_{p-1} . d_p` exactly in every dimension.
    pub fn check_chain_law(&self) -> Result<()> {
        for p in 1..self.matrices.len() {
            let lhs = if p < self.target.num_dims() {
                self.target.boundary(p).mul(&self.matrices[p])
            } else {
                SparseMatrix::zeros(self.target.rank(p - 1), self.source.rank(p))
            };
            let rhs = self.matrices[p - 1].mul(self.source.boundary(p));
            if lhs != rhs {
                return Err(Error::NotChainMap(p));
            }
        }
        Ok(())
    }

    /// Diagonal entry at a cell of an endomorphism.
    pub fn diagonal(&self, cell: usize) -> Rational {
        let host = self.source.host();
        let p = host.cell_dim(cell);
        let i = host.local_index(cell);
        self.matrices[p].get(i, i)
    }
}

/// Chain map induced by a simplicial vertex map. Degenerate images go to 0,
/// otherwise `s -> sign(pi) * t` with `pi` the sorting permutation.
pub fn chain_map_of_vertex_map(f: &VertexMap) -> ChainMap {
    let source = Arc::new(boundary_matrices(f.source()));
    let target = if same_host(f.source(), f.target()) {
        source.clone()
    } else {
        Arc::new(boundary_matrices(f.target()))
    };
    chain_map_between(f, source, target)
}

pub(crate) fn chain_map_between(f: &VertexMap, source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> ChainMap {
    let x = f.source();
    let y = f.target();
    let matrices = (0..x.num_dims())
        .map(|p| {
            let columns = x
                .dim_range(p)
                .map(|id| {
                    let mut col = BTreeMap::new();
                    if let Some((sign, t)) = f.oriented_image(id) {
                        col.insert(y.local_index(t), rational(sign));
                    }
                    col
                })
                .collect();
            SparseMatrix::from_column_maps(y.count(p), columns)
        })
        .collect();
    ChainMap { source, target, matrices }
}

/// Iterated subdivision operator `C(original) -> C(refined)`, built one level
/// at a time by the cone formula `sd(s) = b_s * sd(ds)`.
pub fn subdivision_operator(rec: &SubdivisionRecord) -> ChainMap {
    let levels = rec.levels();
    let complexes: Vec<Arc<ChainComplex>> = levels.iter().map(|x| Arc::new(boundary_matrices(x))).collect();
    let mut acc = ChainMap::identity(complexes[0].clone());
    for step in 0..rec.depth() {
        let one = one_level_operator(&complexes[step], &complexes[step + 1]);
        acc = compose(&one, &acc).expect("levels chain together");
    }
    acc
}

fn one_level_operator(coarse: &Arc<ChainComplex>, fine: &Arc<ChainComplex>) -> ChainMap {
    let x = coarse.host();
    let sd = fine.host();
    // sd_chain[c] maps refined cell ids to integer coefficients
    let mut sd_chain: Vec<HashMap<usize, i64>> = Vec::with_capacity(x.len());
    for (id, s) in x.simplices().iter().enumerate() {
        let mut out = HashMap::new();
        if s.dim() == 0 {
            // the barycenter of a vertex is the refined vertex with the same index
            out.insert(id, 1);
        } else {
            let p = s.dim() as i64;
            let cone_sign = if p % 2 == 0 { 1 } else { -1 };
            for (sign, face) in s.boundary() {
                let f = x.id_of(&face).expect("face-closed");
                for (&r, &c) in &sd_chain[f] {
                    let mut verts = sd.simplex(r).vertices().to_vec();
                    verts.push(id);
                    let coned = sd.id_of(&Simplex::from_sorted(verts)).expect("cone is a chain");
                    *out.entry(coned).or_insert(0) += sign * c * cone_sign;
                }
            }
            out.retain(|_, c| *c != 0);
        }
        sd_chain.push(out);
    }
    let matrices = (0..x.num_dims())
        .map(|p| {
            let columns = x
                .dim_range(p)
                .map(|id| {
                    sd_chain[id]
                        .iter()
                        .map(|(&r, &c)| (sd.local_index(r), rational(c)))
                        .collect::<BTreeMap<_, _>>()
                })
                .collect();
            SparseMatrix::from_column_maps(sd.count(p), columns)
        })
        .collect();
    ChainMap { source: coarse.clone(), target: fine.clone(), matrices }
}

/// `g . f`.
pub fn compose(g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
    if !same_host(f.target.host(), g.source.host()) {
        return Err(Error::HostMismatch);
    }
    let matrices = f
        .matrices
        .iter()
        .enumerate()
        .map(|(p, fm)| {
            if p < g.matrices.len() {
                g.matrices[p].mul(fm)
            } else {
                SparseMatrix::zeros(g.target.rank(p), fm.cols())
            }
        })
        .collect();
    Ok(ChainMap { source: f.source.clone(), target: g.target.clone(), matrices })
}

/// Per-dimension traces of `phi` restricted to the cells of `w`.
pub fn restricted_trace(phi: &ChainMap, w: &OpenSet) -> Result<Vec<Rational>> {
    if !phi.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    if !same_host(phi.source.host(), w.host()) {
        return Err(Error::HostMismatch);
    }
    let host = w.host();
    Ok((0..host.num_dims())
        .map(|p| {
            w.cells_of_dim(p).fold(Rational::zero(), |acc, c| {
                let i = host.local_index(c);
                acc + phi.matrices[p].get(i, i)
            })
        })
        .collect())
}

/// Alternating sum `sum_p (-1)^p tr(phi_p)` over the full complex.
pub fn alternating_trace(phi: &ChainMap) -> Rational {
    phi.matrices.iter().enumerate().fold(Rational::zero(), |acc, (p, m)| {
        if p % 2 == 0 {
            acc + m.trace()
        } else {
            acc - m.trace()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{barycentric_subdivision, iterated_subdivision};
    use num_traits::Signed;

    fn closed(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(vertices, top).unwrap())
    }

    fn q(n: i64) -> Rational {
        rational(n)
    }

    #[test]
    fn edge_and_triangle_boundaries() {
        let e = closed(&["a", "b"], &[&["a", "b"]]);
        let cx = boundary_matrices(&e);
        assert_eq!(cx.boundary(1).to_dense(), vec![vec![q(-1)], vec![q(1)]]);

        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let cx = boundary_matrices(&t);
        // edges in basis order (a,b), (a,c), (b,c)
        assert_eq!(cx.boundary(2).to_dense(), vec![vec![q(1)], vec![q(-1)], vec![q(1)]]);
        assert!(cx.is_complex());
    }

    #[test]
    fn hollow_triangle_boundary_rank() {
        let h = closed(&["a", "b", "c"], &[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(crate::linalg::rank(boundary_matrices(&h).boundary(1)), 2);
    }

    #[test]
    fn vertex_map_chain_maps() {
        let e = closed(&["a", "b"], &[&["a", "b"]]);
        let id = chain_map_of_vertex_map(&VertexMap::identity(e.clone()));
        assert_eq!(id.matrix(0), &SparseMatrix::identity(2));
        assert_eq!(id.matrix(1), &SparseMatrix::identity(1));

        let collapse = VertexMap::from_names(e.clone(), e.clone(), &[("a", "a"), ("b", "a")]).unwrap();
        let c = chain_map_of_vertex_map(&collapse);
        assert!(c.matrix(1).is_zero());
        assert_eq!(c.matrix(0).to_dense(), vec![vec![q(1), q(1)], vec![q(0), q(0)]]);
        c.check_chain_law().unwrap();

        let swap = VertexMap::from_names(e.clone(), e.clone(), &[("a", "b"), ("b", "a")]).unwrap();
        let s = chain_map_of_vertex_map(&swap);
        assert_eq!(s.matrix(1).get(0, 0), q(-1));
        s.check_chain_law().unwrap();
    }

    #[test]
    fn non_simplicial_map_names_the_simplex() {
        let h = closed(&["a", "b", "c"], &[&["a", "b"], &["b", "c"]]);
        let err = VertexMap::from_names(h.clone(), h.clone(), &[("a", "a"), ("b", "c"), ("c", "a")]).unwrap_err();
        assert_eq!(err, Error::NotSimplicial("(a,b)".into()));
    }

    #[test]
    fn subdivision_operator_on_interval() {
        let e = closed(&["a", "b"], &[&["a", "b"]]);
        let rec = barycentric_subdivision(&e);
        let sd = subdivision_operator(&rec);
        sd.check_chain_law().unwrap();
        let fine = rec.refined();
        let left = fine.cell_by_names(&["<a>", "<a+b>"]).unwrap();
        let right = fine.cell_by_names(&["<b>", "<a+b>"]).unwrap();
        // (a,b) -> [a^, e^] + [e^, b^] = [a^, e^] - [b^, e^]
        assert_eq!(sd.matrix(1).get(fine.local_index(left), 0), q(1));
        assert_eq!(sd.matrix(1).get(fine.local_index(right), 0), q(-1));
    }

    #[test]
    fn subdivision_operator_on_triangle_and_vertex() {
        let v = closed(&["p"], &[]);
        let sd = subdivision_operator(&barycentric_subdivision(&v));
        assert_eq!(sd.matrix(0), &SparseMatrix::identity(1));

        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        for depth in 1..=2 {
            let rec = iterated_subdivision(&t, depth);
            let sd = subdivision_operator(&rec);
            sd.check_chain_law().unwrap();
            let col = sd.matrix(2).column(0);
            let expected = 6usize.pow(depth as u32);
            assert_eq!(col.len(), expected);
            assert!(col.iter().all(|(_, c)| c.abs() == q(1)));
        }
    }

    #[test]
    fn compose_with_identity_and_restricted_traces() {
        let e = closed(&["a", "b"], &[&["a", "b"]]);
        let swap = chain_map_of_vertex_map(&VertexMap::from_names(e.clone(), e.clone(), &[("a", "b"), ("b", "a")]).unwrap());
        let id = ChainMap::identity(swap.source().clone());
        assert_eq!(compose(&id, &swap).unwrap().matrices(), swap.matrices());
        assert_eq!(compose(&swap, &id).unwrap().matrices(), swap.matrices());

        let open_edge = OpenSet::from_names(e.clone(), &[&["a", "b"]]).unwrap();
        assert_eq!(restricted_trace(&id, &open_edge).unwrap(), vec![q(0), q(1)]);
        assert_eq!(restricted_trace(&swap, &open_edge).unwrap(), vec![q(0), q(-1)]);
        assert_eq!(restricted_trace(&swap, &OpenSet::empty(e.clone())).unwrap(), vec![q(0), q(0)]);
    }
}
