//! Finite abstract simplicial complexes and unions of their open simplices.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A simplex as its sorted tuple of vertex indices. Orientation is the
/// ascending order of the tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the vertices; fails on an empty or repeating tuple.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].to_string()));
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces with their incidence signs `(-1)^i`.
    pub fn boundary(&self) -> Vec<(i64, Simplex)> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut face = self.0.clone();
                face.remove(i);
                (if i % 2 == 0 { 1 } else { -1 }, Simplex(face))
            })
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

/// Dimension first, then lexicographic. This is the basis order of every
/// chain group.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A face-closed finite simplicial complex. Vertices carry names and are
/// totally ordered by index; simplices are stored once each in canonical
/// form, sorted by dimension and then lexicographically, and addressed by
/// their position in that order (the cell id).
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_names: Vec<String>,
    simplices: Vec<Simplex>,
    offsets: Vec<usize>,
    index: HashMap<Simplex, usize>,
}

impl SimplicialComplex {
    /// Face closure of `raw` over the declared vertex universe. Every declared
    /// vertex becomes a 0-simplex.
    pub fn new<S: Into<String>>(vertex_names: Vec<S>, raw: &[Vec<usize>]) -> Result<Self> {
        let vertex_names: Vec<String> = vertex_names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateVertexName(name.clone()));
            }
        }
        let mut all: BTreeSet<Simplex> =
            (0..vertex_names.len()).map(|v| Simplex(vec![v])).collect();
        for tuple in raw {
            if let Some(&v) = tuple.iter().find(|&&v| v >= vertex_names.len()) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateVertex(vertex_names[w[0]].clone()));
            }
            let s = Simplex::new(sorted)?;
            if !all.contains(&s) {
                all.extend(s.faces());
            }
        }
        Ok(Self::from_closed(vertex_names, all))
    }

    /// Builds a complex from vertex names and simplices given by name.
    pub fn from_names(vertices: &[&str], raw: &[&[&str]]) -> Result<Self> {
        let lookup: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let tuples = raw
            .iter()
            .map(|t| {
                t.iter()
                    .map(|n| lookup.get(n).copied().ok_or_else(|| Error::UnknownVertex(n.to_string())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices.to_vec(), &tuples)
    }

    /// `simplices` must already be face-closed and contain every vertex.
    pub(crate) fn from_closed(vertex_names: Vec<String>, simplices: BTreeSet<Simplex>) -> Self {
        let simplices: Vec<Simplex> = simplices.into_iter().collect();
        let top = simplices.last().map_or(0, |s| s.dim() + 1);
        let mut offsets = vec![0; top + 1];
        for s in &simplices {
            offsets[s.dim() + 1] += 1;
        }
        for p in 1..offsets.len() {
            offsets[p] += offsets[p - 1];
        }
        let index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        SimplicialComplex { vertex_names, simplices, offsets, index }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    /// Number of cells (simplices of every dimension).
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    /// Number of chain groups, i.e. `dim + 1` (0 when empty).
    pub fn num_dims(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Cell ids of dimension `p`.
    pub fn dim_range(&self, p: usize) -> Range<usize> {
        if p + 1 >= self.offsets.len() {
            return self.simplices.len()..self.simplices.len();
        }
        self.offsets[p]..self.offsets[p + 1]
    }

    pub fn count(&self, p: usize) -> usize {
        self.dim_range(p).len()
    }

    /// Position of a cell inside the basis of its chain group.
    pub fn local_index(&self, id: usize) -> usize {
        id - self.offsets[self.simplices[id].dim()]
    }

    pub fn cell_dim(&self, id: usize) -> usize {
        self.simplices[id].dim()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        let mut covered = vec![false; self.len()];
        for s in &self.simplices {
            if s.dim() == 0 {
                continue;
            }
            for (_, f) in s.boundary() {
                covered[self.index[&f]] = true;
            }
        }
        self.simplices.iter().zip(covered).filter(|(_, c)| !c).map(|(s, _)| s).collect()
    }

    pub fn format_simplex(&self, s: &Simplex) -> String {
        let names: Vec<&str> = s.vertices().iter().map(|&v| self.vertex_name(v)).collect();
        format!("({})", names.join(","))
    }

    pub fn format_cell(&self, id: usize) -> String {
        self.format_simplex(&self.simplices[id])
    }

    /// Looks up a simplex given by vertex names.
    pub fn cell_by_names(&self, names: &[&str]) -> Result<usize> {
        let verts = names
            .iter()
            .map(|n| self.vertex_index(n).ok_or_else(|| Error::UnknownVertex(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let s = Simplex::new(verts)?;
        self.id_of(&s).ok_or_else(|| Error::UnknownSimplex(self.format_simplex(&s)))
    }

    /// Signed simplex count of the whole complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = (0..self.len()).map(|i| self.format_cell(i)).collect();
        f.debug_struct("SimplicialComplex")
            .field("vertices", &self.vertex_names)
            .field("simplices", &cells)
            .finish()
    }
}

pub(crate) fn same_host(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A union of open simplices of a host complex. No face-closure is required.
#[derive(Clone)]
pub struct OpenSet {
    host: Arc<SimplicialComplex>,
    cells: BTreeSet<usize>,
}

impl OpenSet {
    pub fn new(host: Arc<SimplicialComplex>, cells: impl IntoIterator<Item = usize>) -> Result<Self> {
        let cells: BTreeSet<usize> = cells.into_iter().collect();
        if let Some(&c) = cells.iter().find(|&&c| c >= host.len()) {
            return Err(Error::UnknownSimplex(format!("cell #{c}")));
        }
        Ok(OpenSet { host, cells })
    }

    pub fn empty(host: Arc<SimplicialComplex>) -> Self {
        OpenSet { host, cells: BTreeSet::new() }
    }

    pub fn whole(host: Arc<SimplicialComplex>) -> Self {
        let cells = (0..host.len()).collect();
        OpenSet { host, cells }
    }

    /// Cells given by vertex-name tuples, e.g. `[&["a", "b"], &["a"]]`.
    pub fn from_names(host: Arc<SimplicialComplex>, cells: &[&[&str]]) -> Result<Self> {
        let ids = cells.iter().map(|c| host.cell_by_names(c)).collect::<Result<Vec<_>>>()?;
        Self::new(host, ids)
    }

    /// Cells spanned by the given simplices together with all of their faces.
    pub fn closed_from_names(host: Arc<SimplicialComplex>, cells: &[&[&str]]) -> Result<Self> {
        Ok(Self::from_names(host, cells)?.closure())
    }

    pub fn host(&self) -> &Arc<SimplicialComplex> {
        &self.host
    }

    pub fn cells(&self) -> &BTreeSet<usize> {
        &self.cells
    }

    pub fn contains(&self, id: usize) -> bool {
        self.cells.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells of dimension `p`, ascending.
    pub fn cells_of_dim(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.cells.range(self.host.dim_range(p)).copied()
    }

    pub fn is_closed(&self) -> bool {
        self.frontier().is_empty()
    }

    /// All faces of all cells.
    pub fn closure(&self) -> OpenSet {
        let mut cells = BTreeSet::new();
        for &c in &self.cells {
            if cells.contains(&c) {
                continue;
            }
            for f in self.host.simplex(c).faces() {
                cells.insert(self.host.id_of(&f).expect("host is face-closed"));
            }
        }
        OpenSet { host: self.host.clone(), cells }
    }

    /// `closure \ self`.
    pub fn frontier(&self) -> OpenSet {
        let closure = self.closure();
        let cells = closure.cells.difference(&self.cells).copied().collect();
        OpenSet { host: self.host.clone(), cells }
    }

    /// Signed cell count `sum (-1)^dim`.
    pub fn combinatorial_euler(&self) -> i64 {
        self.cells
            .iter()
            .map(|&c| if self.host.cell_dim(c).is_multiple_of(2) { 1 } else { -1 })
            .sum()
    }

    fn check_host(&self, other: &OpenSet) -> Result<()> {
        if same_host(&self.host, &other.host) {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        self.check_host(other)?;
        let cells = self.cells.union(&other.cells).copied().collect();
        Ok(OpenSet { host: self.host.clone(), cells })
    }

    pub fn intersection(&self, other: &OpenSet) -> Result<OpenSet> {
        self.check_host(other)?;
        let cells = self.cells.intersection(&other.cells).copied().collect();
        Ok(OpenSet { host: self.host.clone(), cells })
    }

    pub fn difference(&self, other: &OpenSet) -> Result<OpenSet> {
        self.check_host(other)?;
        let cells = self.cells.difference(&other.cells).copied().collect();
        Ok(OpenSet { host: self.host.clone(), cells })
    }

    pub fn is_disjoint(&self, other: &OpenSet) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    pub fn format(&self) -> String {
        let cells: Vec<String> = self.cells.iter().map(|&c| self.host.format_cell(c)).collect();
        format!("{{{}}}", cells.join(" "))
    }
}

impl PartialEq for OpenSet {
    fn eq(&self, other: &Self) -> bool {
        same_host(&self.host, &other.host) && self.cells == other.cells
    }
}

impl Eq for OpenSet {}

impl fmt::Debug for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenSet{}", self.format())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(&["a", "b"], &[&["a", "b"]]).unwrap())
    }

    fn triangle() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(&["a", "b", "c"], &[&["a", "b", "c"]]).unwrap())
    }

    #[test]
    fn closure_of_edge_and_triangle() {
        let x = edge();
        assert_eq!(x.len(), 3);
        assert_eq!(x.format_cell(2), "(a,b)");
        let t = triangle();
        assert_eq!(t.len(), 7);
        assert_eq!((t.count(0), t.count(1), t.count(2)), (3, 3, 1));
    }

    #[test]
    fn dedup_and_errors() {
        let x = SimplicialComplex::from_names(&["a"], &[&["a"], &["a"]]).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(SimplicialComplex::new(vec!["a"], &[vec![]]), Err(Error::EmptySimplex));
        assert_eq!(
            SimplicialComplex::new(vec!["a", "b"], &[vec![0, 1, 0]]),
            Err(Error::DuplicateVertex("a".into()))
        );
        assert_eq!(
            SimplicialComplex::from_names(&["a"], &[&["a", "z"]]),
            Err(Error::UnknownVertex("z".into()))
        );
    }

    #[test]
    fn basis_order_is_dimension_then_lex() {
        let t = triangle();
        let names: Vec<String> = (0..t.len()).map(|i| t.format_cell(i)).collect();
        assert_eq!(names, ["(a)", "(b)", "(c)", "(a,b)", "(a,c)", "(b,c)", "(a,b,c)"]);
        assert_eq!(t.local_index(5), 2);
        assert_eq!(t.dim_range(2), 6..7);
        assert_eq!(t.dim_range(3), 7..7);
    }

    #[test]
    fn open_edge_closure_and_frontier() {
        let x = edge();
        let s = OpenSet::from_names(x.clone(), &[&["a", "b"]]).unwrap();
        assert_eq!(s.closure(), OpenSet::whole(x.clone()));
        assert_eq!(s.frontier(), OpenSet::from_names(x.clone(), &[&["a"], &["b"]]).unwrap());
        assert!(OpenSet::whole(x.clone()).frontier().is_empty());
        assert_eq!(s.combinatorial_euler(), -1);
        assert_eq!(OpenSet::whole(x).combinatorial_euler(), 1);
    }

    #[test]
    fn frontier_of_triangle_with_one_edge() {
        let t = triangle();
        let s = OpenSet::from_names(t.clone(), &[&["a", "b", "c"], &["a", "b"]]).unwrap();
        // brute force: faces of the cells minus the cells themselves
        let mut expected = BTreeSet::new();
        for &c in s.cells() {
            for f in t.simplex(c).faces() {
                let id = t.id_of(&f).unwrap();
                if !s.contains(id) {
                    expected.insert(id);
                }
            }
        }
        assert_eq!(s.frontier().cells(), &expected);
        assert_eq!(
            s.frontier(),
            OpenSet::from_names(t.clone(), &[&["a", "c"], &["b", "c"], &["a"], &["b"], &["c"]])
                .unwrap()
        );
        assert_eq!(OpenSet::whole(t).combinatorial_euler(), 1);
    }

    #[test]
    fn maximal_simplices_of_closed_triangle_plus_edge() {
        let x = SimplicialComplex::from_names(&["a", "b", "c", "d"], &[&["a", "b", "c"], &["c", "d"]])
            .unwrap();
        let maxes: Vec<String> = x.maximal_simplices().iter().map(|s| x.format_simplex(s)).collect();
        assert_eq!(maxes, ["(c,d)", "(a,b,c)"]);
    }
}
