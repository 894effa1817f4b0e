//! Barycentric subdivision with carrier tracking.
//!
//! The vertices of `sd X` are the simplices of `X` (their barycenters), named
//! `<a+b+...>`, and ordered by the cell order of `X`. A simplex of `sd X` is a
//! chain `s0 < s1 < ... < sk` of faces; its carrier is the top element `sk`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::complex::{same_host, OpenSet, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// An iterated barycentric subdivision of `original`.
#[derive(Clone, Debug)]
pub struct SubdivisionRecord {
    /// `levels[0]` is the original complex and `levels[depth]` the refined one.
    levels: Vec<Arc<SimplicialComplex>>,
    /// One-step carriers: `step_carriers[i][c]` is the cell of `levels[i]`
    /// carrying cell `c` of `levels[i + 1]`.
    step_carriers: Vec<Vec<usize>>,
    carrier: Vec<usize>,
}

impl SubdivisionRecord {
    /// The trivial record of depth 0.
    pub fn identity(original: Arc<SimplicialComplex>) -> Self {
        let carrier = (0..original.len()).collect();
        SubdivisionRecord { levels: vec![original], step_carriers: Vec::new(), carrier }
    }

    pub fn original(&self) -> &Arc<SimplicialComplex> {
        &self.levels[0]
    }

    pub fn refined(&self) -> &Arc<SimplicialComplex> {
        self.levels.last().unwrap()
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Arc<SimplicialComplex>] {
        &self.levels
    }

    pub fn step_carrier(&self, step: usize) -> &[usize] {
        &self.step_carriers[step]
    }

    /// Original cell whose open simplex contains the open refined cell.
    pub fn carrier(&self, refined_cell: usize) -> usize {
        self.carrier[refined_cell]
    }

    pub fn carriers(&self) -> &[usize] {
        &self.carrier
    }

    /// Refined cells carried by the original cell `cell`.
    pub fn carried_by(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.carrier.iter().enumerate().filter(move |(_, &c)| c == cell).map(|(i, _)| i)
    }

    /// Subdivides the refined complex once more.
    pub fn deepen(&self) -> Self {
        let (next, step) = subdivide_once(self.refined());
        let carrier = step.iter().map(|&c| self.carrier[c]).collect();
        let mut levels = self.levels.clone();
        levels.push(Arc::new(next));
        let mut step_carriers = self.step_carriers.clone();
        step_carriers.push(step);
        SubdivisionRecord { levels, step_carriers, carrier }
    }
}

fn barycenter_name(x: &SimplicialComplex, s: &Simplex) -> String {
    let names: Vec<&str> = s.vertices().iter().map(|&v| x.vertex_name(v)).collect();
    format!("<{}>", names.join("+"))
}

fn subdivide_once(x: &SimplicialComplex) -> (SimplicialComplex, Vec<usize>) {
    let names: Vec<String> = x.simplices().iter().map(|s| barycenter_name(x, s)).collect();
    // chains[c] lists every chain of faces whose top element is c.
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(x.len());
    for (id, s) in x.simplices().iter().enumerate() {
        let mut mine = vec![vec![id]];
        for face in s.faces() {
            if face.dim() == s.dim() {
                continue;
            }
            let f = x.id_of(&face).expect("face-closed");
            for chain in &chains[f] {
                let mut c = chain.clone();
                c.push(id);
                mine.push(c);
            }
        }
        chains.push(mine);
    }
    let simplices: BTreeSet<Simplex> =
        chains.iter().flatten().map(|c| Simplex::from_sorted(c.clone())).collect();
    let refined = SimplicialComplex::from_closed(names, simplices);
    let carrier = refined.simplices().iter().map(|s| *s.vertices().last().unwrap()).collect();
    (refined, carrier)
}

/// One barycentric subdivision of `x`.
pub fn barycentric_subdivision(x: &Arc<SimplicialComplex>) -> SubdivisionRecord {
    SubdivisionRecord::identity(x.clone()).deepen()
}

/// `depth` iterated barycentric subdivisions of `x`.
pub fn iterated_subdivision(x: &Arc<SimplicialComplex>, depth: usize) -> SubdivisionRecord {
    (0..depth).fold(SubdivisionRecord::identity(x.clone()), |rec, _| rec.deepen())
}

/// The refined cells covering exactly the points of `s`.
pub fn refine_set(s: &OpenSet, rec: &SubdivisionRecord) -> Result<OpenSet> {
    if !same_host(s.host(), rec.original()) {
        return Err(Error::HostMismatch);
    }
    let cells = (0..rec.refined().len()).filter(|&r| s.contains(rec.carrier(r)));
    OpenSet::new(rec.refined().clone(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(vertices, top).unwrap())
    }

    #[test]
    fn interval_splits_in_two() {
        let x = closed(&["a", "b"], &[&["a", "b"]]);
        let rec = barycentric_subdivision(&x);
        let sd = rec.refined();
        assert_eq!((sd.count(0), sd.count(1)), (3, 2));
        let edge = x.cell_by_names(&["a", "b"]).unwrap();
        assert_eq!(rec.carried_by(edge).filter(|&r| sd.cell_dim(r) == 1).count(), 2);
        assert_eq!(sd.vertex_names(), ["<a>", "<b>", "<a+b>"]);
    }

    #[test]
    fn triangle_face_poset_chains() {
        let x = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let rec = barycentric_subdivision(&x);
        let sd = rec.refined();
        assert_eq!((sd.count(0), sd.count(1), sd.count(2)), (7, 12, 6));
        let top = x.cell_by_names(&["a", "b", "c"]).unwrap();
        assert!(sd.dim_range(2).all(|r| rec.carrier(r) == top));
    }

    #[test]
    fn depth_two_interval() {
        let x = closed(&["a", "b"], &[&["a", "b"]]);
        let rec = iterated_subdivision(&x, 2);
        assert_eq!(rec.depth(), 2);
        let sd = rec.refined();
        let edge = x.cell_by_names(&["a", "b"]).unwrap();
        assert_eq!(rec.carried_by(edge).filter(|&r| sd.cell_dim(r) == 1).count(), 4);
    }

    #[test]
    fn refine_open_sets() {
        let x = closed(&["a", "b"], &[&["a", "b"]]);
        let rec = barycentric_subdivision(&x);
        let open_edge = OpenSet::from_names(x.clone(), &[&["a", "b"]]).unwrap();
        let r = refine_set(&open_edge, &rec).unwrap();
        assert_eq!(r.cells_of_dim(1).count(), 2);
        assert_eq!(r.cells_of_dim(0).count(), 1);
        assert_eq!(refine_set(&OpenSet::whole(x.clone()), &rec).unwrap(), OpenSet::whole(rec.refined().clone()));

        let t = closed(&["a", "b", "c"], &[&["a", "b", "c"]]);
        let rec = barycentric_subdivision(&t);
        let open_tri = OpenSet::from_names(t.clone(), &[&["a", "b", "c"]]).unwrap();
        let r = refine_set(&open_tri, &rec).unwrap();
        let counts: Vec<usize> = (0..3).map(|p| r.cells_of_dim(p).count()).collect();
        assert_eq!(counts, [1, 6, 6]);

        let other = closed(&["p"], &[]);
        assert_eq!(refine_set(&OpenSet::whole(other), &rec), Err(Error::HostMismatch));
    }

    #[test]
    fn top_cells_carried_by_a_tetrahedron() {
        let x = closed(&["a", "b", "c", "d"], &[&["a", "b", "c", "d"]]);
        let rec = barycentric_subdivision(&x);
        let sd = rec.refined();
        for (id, s) in x.simplices().iter().enumerate() {
            let d = s.dim();
            let n = rec.carried_by(id).filter(|&r| sd.cell_dim(r) == d).count();
            assert_eq!(n, (1..=d + 1).product::<usize>());
        }
    }
}
