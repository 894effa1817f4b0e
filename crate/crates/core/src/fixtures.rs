//! Small hand-built complexes with known Lefschetz numbers.

use std::sync::Arc;

use crate::complex::{OpenSet, SimplicialComplex};
use crate::counting::Scenario;
use crate::lefschetz::SelfMap;

/// A self-map together with an invariant set.
#[derive(Clone, Debug)]
pub struct MapOnSet {
    pub map: SelfMap,
    pub set: OpenSet,
}

fn complex(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::from_names(vertices, top).expect("fixture complex"))
}

/// `t -> t^2` on `[0, 1]`, approximated by the identity, on the open interval.
/// Lambda = -1.
pub fn squaring_on_interval() -> MapOnSet {
    let x = complex(&["0", "1"], &[&["0", "1"]]);
    let set = OpenSet::from_names(x.clone(), &[&["0", "1"]]).unwrap();
    MapOnSet { map: SelfMap::identity(x), set }
}

/// A square split along its diagonal. A dilation of the interior fixing the
/// diagonal and the horizontal sides is approximated by the identity; the set
/// is both open triangles, the diagonal and the open horizontal sides.
/// Lambda = -3 + 2 = -1.
pub fn dilated_square() -> MapOnSet {
    let x = complex(
        &["p00", "p10", "p01", "p11"],
        &[&["p00", "p10", "p11"], &["p00", "p01", "p11"]],
    );
    let set = OpenSet::from_names(
        x.clone(),
        &[
            &["p00", "p10", "p11"],
            &["p00", "p01", "p11"],
            &["p00", "p11"],
            &["p00", "p10"],
            &["p01", "p11"],
        ],
    )
    .unwrap();
    MapOnSet { map: SelfMap::identity(x), set }
}

/// Two factors of a cylinder: a hollow triangle `d1 d2 d3` reflected through
/// `d3`, and a path `a3 b3 c3 d3` reversed. Both sets have Lambda = 1.
pub fn cylinder_factors() -> (MapOnSet, MapOnSet) {
    let ring = complex(&["d1", "d2", "d3"], &[&["d1", "d2"], &["d2", "d3"], &["d1", "d3"]]);
    let f1 = SelfMap::from_names(ring.clone(), &[("d1", "d2"), ("d2", "d1"), ("d3", "d3")]).unwrap();
    let u1 = OpenSet::from_names(
        ring.clone(),
        &[&["d1"], &["d2"], &["d3"], &["d1", "d3"], &["d2", "d3"]],
    )
    .unwrap();
    let path = complex(&["a3", "b3", "c3", "d3"], &[&["a3", "b3"], &["b3", "c3"], &["c3", "d3"]]);
    let f2 = SelfMap::from_names(path.clone(), &[("a3", "d3"), ("b3", "c3"), ("c3", "b3"), ("d3", "a3")]).unwrap();
    let u2 = OpenSet::from_names(
        path.clone(),
        &[&["b3"], &["c3"], &["a3", "b3"], &["b3", "c3"], &["c3", "d3"]],
    )
    .unwrap();
    (MapOnSet { map: f1, set: u1 }, MapOnSet { map: f2, set: u2 })
}

/// A square `c1 c2 c3 c4` with an arm `a_i - c_i - b_i` at each corner; the
/// map exchanges every `a_i` with `b_i` and fixes the `c_i`. The set is the
/// complex without the four `c_i`: Lambda = -4, while Lambda of the whole
/// complex is 0.
pub fn four_arms() -> MapOnSet {
    let mut names = Vec::new();
    for i in 1..=4 {
        names.extend([format!("a{i}"), format!("b{i}"), format!("c{i}")]);
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges: Vec<[String; 2]> = Vec::new();
    for i in 1..=4 {
        edges.push([format!("a{i}"), format!("c{i}")]);
        edges.push([format!("b{i}"), format!("c{i}")]);
        edges.push([format!("c{i}"), format!("c{}", i % 4 + 1)]);
    }
    let edge_refs: Vec<Vec<&str>> = edges.iter().map(|e| vec![e[0].as_str(), e[1].as_str()]).collect();
    let edge_slices: Vec<&[&str]> = edge_refs.iter().map(Vec::as_slice).collect();
    let x = complex(&name_refs, &edge_slices);
    let mut pairs = Vec::new();
    for i in 1..=4 {
        pairs.push((format!("a{i}"), format!("b{i}")));
        pairs.push((format!("b{i}"), format!("a{i}")));
        pairs.push((format!("c{i}"), format!("c{i}")));
    }
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let map = SelfMap::from_names(x.clone(), &pair_refs).unwrap();
    let fixed: Vec<usize> = (1..=4).map(|i| x.vertex_index(&format!("c{i}")).unwrap()).collect();
    let set = OpenSet::new(x.clone(), (0..x.len()).filter(|c| !fixed.contains(c))).unwrap();
    MapOnSet { map, set }
}

/// A floor `A1..A9` with a reflection fixing `A4`, `A5`, `A9`. One support
/// is a triangulated disk, the other a triangle with a cone over its edges
/// to `A9`; they share the closed triangle `A2 A5 A8`.
pub struct ReflectedFloor {
    pub host: Arc<SimplicialComplex>,
    pub reflection: SelfMap,
    pub disk: OpenSet,
    pub tent: OpenSet,
}

impl ReflectedFloor {
    pub fn scenario(&self) -> Scenario {
        Scenario::new(self.reflection.clone(), vec![self.disk.clone(), self.tent.clone()]).unwrap()
    }

    pub fn identity_scenario(&self) -> Scenario {
        Scenario::new(SelfMap::identity(self.host.clone()), vec![self.disk.clone(), self.tent.clone()]).unwrap()
    }
}

pub fn reflected_floor() -> ReflectedFloor {
    let disk_faces: [&[&str]; 6] = [
        &["A2", "A5", "A8"],
        &["A2", "A4", "A8"],
        &["A1", "A2", "A4"],
        &["A3", "A4", "A8"],
        &["A1", "A4", "A6"],
        &["A3", "A4", "A7"],
    ];
    let tent_faces: [&[&str]; 4] = [&["A2", "A5", "A8"], &["A2", "A9"], &["A5", "A9"], &["A8", "A9"]];
    let mut top: Vec<&[&str]> = disk_faces.to_vec();
    top.extend_from_slice(&tent_faces);
    let host = complex(&["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"], &top);
    let reflection = SelfMap::from_names(
        host.clone(),
        &[
            ("A1", "A3"),
            ("A3", "A1"),
            ("A2", "A8"),
            ("A8", "A2"),
            ("A6", "A7"),
            ("A7", "A6"),
            ("A4", "A4"),
            ("A5", "A5"),
            ("A9", "A9"),
        ],
    )
    .unwrap();
    let disk = OpenSet::closed_from_names(host.clone(), &disk_faces).unwrap();
    let tent = OpenSet::closed_from_names(host.clone(), &tent_faces).unwrap();
    ReflectedFloor { host, reflection, disk, tent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{betti_numbers, lefschetz_homological};
    use crate::lefschetz::LefschetzMeasure;
    use crate::linalg::rational;

    #[test]
    fn fixtures_are_invariant() {
        let (a, b) = cylinder_factors();
        for m in [squaring_on_interval(), dilated_square(), a, b, four_arms()] {
            assert!(m.map.check_invariant(&m.set).unwrap());
        }
        let floor = reflected_floor();
        assert!(floor.reflection.is_isomorphism());
        assert!(floor.reflection.check_invariant(&floor.disk).unwrap());
        assert!(floor.reflection.check_invariant(&floor.tent).unwrap());
    }

    #[test]
    fn four_arms_against_homology() {
        let m = four_arms();
        let x = m.map.host().clone();
        assert_eq!(betti_numbers(&x), [1, 1]);
        let measure = LefschetzMeasure::new(m.map.clone());
        let whole = measure.lambda(&OpenSet::whole(x)).unwrap();
        assert_eq!(whole, lefschetz_homological(measure.endomorphism()).unwrap());
        assert_eq!(whole, rational(0));
        assert_eq!(measure.lambda(&m.set).unwrap(), rational(-4));
    }

    #[test]
    fn floor_supports() {
        let floor = reflected_floor();
        assert_eq!(floor.disk.combinatorial_euler(), 1);
        assert_eq!(floor.tent.combinatorial_euler(), -1);
        let shared = floor.disk.intersection(&floor.tent).unwrap();
        let triangle = OpenSet::closed_from_names(floor.host.clone(), &[&["A2", "A5", "A8"]]).unwrap();
        assert_eq!(shared, triangle);
    }
}
