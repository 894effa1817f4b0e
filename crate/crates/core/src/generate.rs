//! Seeded random complexes, maps, invariant sets and functions.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{OpenSet, Simplex, SimplicialComplex};
use crate::integral::ConstructibleFunction;
use crate::lefschetz::SelfMap;

#[derive(Clone, Copy, Debug)]
pub struct ComplexParams {
    pub max_vertices: usize,
    pub max_dim: usize,
    pub max_simplices: usize,
}

impl Default for ComplexParams {
    fn default() -> Self {
        ComplexParams { max_vertices: 8, max_dim: 3, max_simplices: 50 }
    }
}

fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// A permutation of `0..n` made of random cycles of length at most 4.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut i = 0;
    while i < n {
        let len = rng.gen_range(1..=4).min(n - i);
        for k in 0..len {
            perm[order[i + k]] = order[i + (k + 1) % len];
        }
        i += len;
    }
    perm
}

/// Face closure of `facets` together with every vertex of `0..n`.
fn closure_of(facets: &BTreeSet<Simplex>, n: usize) -> BTreeSet<Simplex> {
    let vertices = (0..n).map(|v| Simplex::new(vec![v]).expect("one vertex"));
    facets.iter().flat_map(|s| s.faces().collect::<Vec<_>>()).chain(vertices).collect()
}

/// A complex together with a simplicial automorphism: the closure of the
/// orbits of a few random facets under a random vertex permutation.
pub fn symmetric_complex<R: Rng>(rng: &mut R, params: ComplexParams) -> (Arc<SimplicialComplex>, SelfMap) {
    loop {
        let n = rng.gen_range(2..=params.max_vertices.max(2));
        let perm = random_permutation(rng, n);
        let mut facets = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=3) {
            let size = rng.gen_range(1..=(params.max_dim + 1).min(n));
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(rng);
            let mut s: Vec<usize> = verts[..size].to_vec();
            loop {
                s.sort_unstable();
                if !facets.insert(Simplex::new(s.clone()).expect("distinct vertices")) {
                    break;
                }
                s = s.iter().map(|&v| perm[v]).collect();
            }
        }
        let simplices = closure_of(&facets, n);
        if simplices.len() > params.max_simplices {
            continue;
        }
        let host = Arc::new(SimplicialComplex::from_closed(vertex_names(n), simplices));
        let f = SelfMap::new(host.clone(), perm).expect("orbit closure is invariant");
        return (host, f);
    }
}

/// A simplicial self-map collapsing everything into one simplex.
pub fn collapsing_map<R: Rng>(rng: &mut R, host: &Arc<SimplicialComplex>) -> SelfMap {
    let target = host.simplex(rng.gen_range(0..host.len())).vertices().to_vec();
    let assignment = (0..host.num_vertices()).map(|_| *target.choose(rng).unwrap()).collect();
    SelfMap::new(host.clone(), assignment).expect("images lie in one simplex")
}

/// Smallest invariant set containing `seed`: its forward orbit closure.
pub fn forward_closure(f: &SelfMap, seed: impl IntoIterator<Item = usize>) -> OpenSet {
    let mut cells = BTreeSet::new();
    let mut stack: Vec<usize> = seed.into_iter().collect();
    while let Some(c) = stack.pop() {
        if cells.insert(c) {
            stack.push(f.image_cell(c));
        }
    }
    OpenSet::new(f.host().clone(), cells).expect("cells of host")
}

/// A random invariant set; each cell seeds it with probability `p`.
pub fn invariant_set<R: Rng>(rng: &mut R, f: &SelfMap, p: f64) -> OpenSet {
    let seed: Vec<usize> = (0..f.host().len()).filter(|_| rng.gen_bool(p)).collect();
    forward_closure(f, seed)
}

/// A random invariant subset of the invariant set `u`.
pub fn invariant_subset<R: Rng>(rng: &mut R, f: &SelfMap, u: &OpenSet, p: f64) -> OpenSet {
    let seed: Vec<usize> = u.cells().iter().copied().filter(|_| rng.gen_bool(p)).collect();
    forward_closure(f, seed)
}

/// A random presentation `sum c_j 1_{U_j}` with invariant supports.
pub fn random_presentation<R: Rng>(rng: &mut R, f: &SelfMap, terms: usize) -> Vec<(i64, OpenSet)> {
    (0..terms)
        .map(|_| {
            let c = loop {
                let c = rng.gen_range(-3..=3);
                if c != 0 {
                    break c;
                }
            };
            (c, invariant_set(rng, f, 0.3))
        })
        .collect()
}

/// A different presentation of the same function: every support `U` is split
/// as `1_A + 1_B - 1_{A ∩ B}` with invariant `A ∪ B = U`, a cancelling pair
/// is added, and the terms are shuffled.
pub fn rewrite_presentation<R: Rng>(rng: &mut R, f: &SelfMap, p: &[(i64, OpenSet)]) -> Vec<(i64, OpenSet)> {
    let mut out = Vec::new();
    for (c, u) in p {
        let a = invariant_subset(rng, f, u, 0.5);
        let rest: Vec<usize> = u.difference(&a).unwrap().cells().iter().copied().collect();
        let extra: Vec<usize> = u.cells().iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        let b = forward_closure(f, rest.into_iter().chain(extra));
        let ab = a.intersection(&b).unwrap();
        out.push((*c, a));
        out.push((*c, b));
        out.push((-c, ab));
    }
    let w = invariant_set(rng, f, 0.3);
    let d = rng.gen_range(1..=3);
    out.push((d, w.clone()));
    out.push((-d, w));
    out.shuffle(rng);
    out
}

pub fn random_function<R: Rng>(rng: &mut R, f: &SelfMap, terms: usize) -> ConstructibleFunction {
    ConstructibleFunction::normalize(f.host().clone(), random_presentation(rng, f, terms)).expect("single host")
}

/// A small random complex with no symmetry constraint.
pub fn random_complex<R: Rng>(rng: &mut R, params: ComplexParams) -> Arc<SimplicialComplex> {
    let ComplexParams { max_vertices, max_dim, max_simplices } = params;
    loop {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let mut facets = BTreeSet::new();
        for _ in 0..rng.gen_range(0..=3) {
            let size = rng.gen_range(1..=(max_dim + 1).min(n));
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(rng);
            let mut s = verts[..size].to_vec();
            s.sort_unstable();
            facets.insert(Simplex::new(s).expect("distinct vertices"));
        }
        let simplices = closure_of(&facets, n);
        if simplices.len() <= max_simplices {
            return Arc::new(SimplicialComplex::from_closed(vertex_names(n), simplices));
        }
    }
}
