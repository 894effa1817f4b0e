//! Counting targets from a sensor field: each target is seen on an invariant
//! support, the field reports how many targets each cell sees, and the
//! Lefschetz integral of that count divided by the common Lefschetz number
//! of the supports recovers the number of targets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{same_host, OpenSet, SimplicialComplex};
use crate::error::{Error, Result};
use crate::generate::{random_complex, ComplexParams};
use crate::integral::{integrate, integrate_via_levels, ConstructibleFunction};
use crate::lefschetz::{LefschetzMeasure, SelfMap};
use crate::linalg::Rational;
use crate::product::product_complex;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub host: Arc<SimplicialComplex>,
    pub symmetry: SelfMap,
    pub supports: Vec<OpenSet>,
}

impl Scenario {
    pub fn new(symmetry: SelfMap, supports: Vec<OpenSet>) -> Result<Self> {
        let s = Scenario { host: symmetry.host().clone(), symmetry, supports };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !same_host(self.symmetry.host(), &self.host) {
            return Err(Error::HostMismatch);
        }
        for u in &self.supports {
            if !same_host(u.host(), &self.host) {
                return Err(Error::HostMismatch);
            }
            if let Some(c) = self.symmetry.first_escaping_cell(u)? {
                return Err(Error::NotInvariant(self.host.format_cell(c)));
            }
        }
        Ok(())
    }

    pub fn measure(&self) -> LefschetzMeasure {
        LefschetzMeasure::new(self.symmetry.clone())
    }
}

/// `h = sum_a 1_{U_a}`, with the supports as presentation.
pub fn build_counting_function(s: &Scenario) -> Result<ConstructibleFunction> {
    s.validate()?;
    ConstructibleFunction::normalize(s.host.clone(), s.supports.iter().map(|u| (1, u.clone())).collect())
}

/// Per-support Lefschetz numbers.
pub fn support_lambdas(s: &Scenario) -> Result<Vec<Rational>> {
    s.validate()?;
    let m = s.measure();
    s.supports.iter().map(|u| m.lambda(u)).collect()
}

/// The Lefschetz number shared by every support, if it exists and is nonzero.
pub fn common_lambda(s: &Scenario) -> Result<Option<Rational>> {
    let values = support_lambdas(s)?;
    Ok(match values.split_first() {
        Some((first, rest)) if !first.is_zero() && rest.iter().all(|v| v == first) => Some(first.clone()),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: Rational,
    /// Integral over the level sets of the per-cell counts.
    pub integral: Rational,
    /// Integral over the supports, as a cross-check.
    pub presented_integral: Rational,
    pub count: i64,
}

/// `(1/N) ∫ h dΛf`. The integral is taken over the level sets of `h`, which
/// only uses what the sensors report.
pub fn count_targets(s: &Scenario) -> Result<CountReport> {
    let n = common_lambda(s)?.ok_or(Error::NoCommonLambda)?;
    let h = build_counting_function(s)?;
    let m = s.measure();
    let integral = integrate_via_levels(&h.forget_presentation(), &m)?;
    let presented_integral = integrate(&h, &m)?;
    let q = &integral / &n;
    if !q.is_integer() {
        return Err(Error::NonIntegralCount { integral: integral.to_string(), n: n.to_string() });
    }
    let count = i64::try_from(q.to_integer()).expect("count fits in i64");
    Ok(CountReport { n, integral, presented_integral, count })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymmetryKind {
    Identity,
    Mirror,
    ProductSwap,
}

impl SymmetryKind {
    pub const ALL: [SymmetryKind; 3] = [SymmetryKind::Identity, SymmetryKind::Mirror, SymmetryKind::ProductSwap];
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryKind::Identity => "identity",
            SymmetryKind::Mirror => "mirror",
            SymmetryKind::ProductSwap => "product-swap",
        })
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(SymmetryKind::Identity),
            "mirror" => Ok(SymmetryKind::Mirror),
            "product-swap" => Ok(SymmetryKind::ProductSwap),
            other => Err(Error::InfeasibleParams(format!("unknown symmetry kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScenarioParams {
    pub kind: SymmetryKind,
    pub targets: usize,
    /// Upper bound on the number of simplices of the floor complex.
    pub max_simplices: usize,
}

impl ScenarioParams {
    pub const MAX_TARGETS: usize = 20;
    pub const MAX_SIMPLICES: usize = 200;

    fn check(&self) -> Result<()> {
        if self.targets == 0 || self.targets > Self::MAX_TARGETS {
            return Err(Error::InfeasibleParams(format!("targets must be in 1..={}", Self::MAX_TARGETS)));
        }
        if self.max_simplices < 4 || self.max_simplices > Self::MAX_SIMPLICES {
            return Err(Error::InfeasibleParams(format!("max_simplices must be in 4..={}", Self::MAX_SIMPLICES)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedScenario {
    pub seed: u64,
    pub kind: SymmetryKind,
    pub scenario: Scenario,
    pub truth: usize,
}

const ATTEMPTS: usize = 200;

/// A seeded scenario whose supports all share the same nonzero Lefschetz
/// number under the chosen symmetry.
pub fn generate_scenario(seed: u64, params: ScenarioParams) -> Result<GeneratedScenario> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let Some((symmetry, candidates)) = (match params.kind {
            SymmetryKind::Identity => identity_candidates(&mut rng, params.max_simplices),
            SymmetryKind::Mirror => mirror_candidates(&mut rng, params.max_simplices),
            SymmetryKind::ProductSwap => swap_candidates(&mut rng, params.max_simplices),
        }) else {
            continue;
        };
        let m = LefschetzMeasure::new(symmetry.clone());
        let mut classes: BTreeMap<Rational, Vec<OpenSet>> = BTreeMap::new();
        for u in candidates {
            let l = m.lambda(&u)?;
            if !l.is_zero() {
                classes.entry(l).or_default().push(u);
            }
        }
        // largest class, ties broken by the smallest value
        let Some(pool) = classes.into_values().rev().max_by_key(|c| c.len()) else {
            continue;
        };
        let supports = (0..params.targets).map(|_| pool.choose(&mut rng).unwrap().clone()).collect();
        let scenario = Scenario::new(symmetry, supports)?;
        return Ok(GeneratedScenario { seed, kind: params.kind, scenario, truth: params.targets });
    }
    Err(Error::InfeasibleParams(format!("no {} scenario found within {} simplices", params.kind, params.max_simplices)))
}

fn closed_star(host: &Arc<SimplicialComplex>, v: usize) -> OpenSet {
    let cells = (0..host.len()).filter(|&c| host.simplex(c).vertices().contains(&v));
    OpenSet::new(host.clone(), cells).expect("cells of host").closure()
}

fn identity_candidates<R: Rng>(rng: &mut R, max_simplices: usize) -> Option<(SelfMap, Vec<OpenSet>)> {
    let params = ComplexParams { max_vertices: 10, max_dim: 3, max_simplices };
    let host = random_complex(rng, params);
    let stars = (0..host.num_vertices()).map(|v| closed_star(&host, v)).collect();
    Some((SelfMap::identity(host), stars))
}

/// `K ∪ σ(K)` where `σ` fixes the axis vertices and swaps `v` with its copy.
fn mirror_candidates<R: Rng>(rng: &mut R, max_simplices: usize) -> Option<(SelfMap, Vec<OpenSet>)> {
    let axis = rng.gen_range(0..=3usize);
    let side = rng.gen_range(1..=4usize);
    let n = axis + 2 * side;
    let mirror = |v: usize| if v < axis { v } else if v < axis + side { v + side } else { v - side };
    let half = random_complex(rng, ComplexParams { max_vertices: axis + side, max_dim: 3, max_simplices: max_simplices / 2 });
    let mut facets: Vec<Vec<usize>> = half.maximal_simplices().iter().map(|s| s.vertices().to_vec()).collect();
    let mirrored: Vec<Vec<usize>> = facets.iter().map(|s| s.iter().map(|&v| mirror(v)).collect()).collect();
    facets.extend(mirrored);
    let names: Vec<String> = (0..n)
        .map(|v| if v < axis { format!("m{v}") } else if v < axis + side { format!("l{}", v - axis) } else { format!("r{}", v - axis - side) })
        .collect();
    let host = Arc::new(SimplicialComplex::new(names, &facets).ok()?);
    if host.len() > max_simplices {
        return None;
    }
    let f = SelfMap::new(host.clone(), (0..n).map(mirror).collect()).ok()?;
    let stars = (0..n)
        .filter(|&v| v <= mirror(v))
        .map(|v| closed_star(&host, v).union(&closed_star(&host, mirror(v))).unwrap())
        .collect();
    Some((f, stars))
}

/// `G x G` for a random graph `G`, with the coordinate swap.
fn swap_candidates<R: Rng>(rng: &mut R, max_simplices: usize) -> Option<(SelfMap, Vec<OpenSet>)> {
    let n = rng.gen_range(1..=4usize);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                edges.push(vec![a, b]);
            }
        }
    }
    let names: Vec<String> = (0..n).map(|v| format!("g{v}")).collect();
    let g = Arc::new(SimplicialComplex::new(names, &edges).ok()?);
    let rec = product_complex(&g, &g);
    if rec.product().len() > max_simplices {
        return None;
    }
    let nv = rec.product().num_vertices();
    let swap = (0..nv).map(|x| {
        let (v, w) = rec.vertex_pair(x);
        rec.vertex(w, v)
    });
    let f = SelfMap::new(rec.product().clone(), swap.collect()).ok()?;
    let stars: Vec<OpenSet> = (0..n).map(|v| closed_star(&g, v)).collect();
    let mut candidates = Vec::new();
    for (i, s) in stars.iter().enumerate() {
        candidates.push(rec.product_set(s, s).ok()?);
        for t in &stars[i + 1..] {
            let st = rec.product_set(s, t).ok()?;
            let ts = rec.product_set(t, s).ok()?;
            candidates.push(st.union(&ts).ok()?);
        }
    }
    Some((f, candidates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    fn closed(vertices: &[&str], top: &[&[&str]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_names(vertices, top).unwrap())
    }

    #[test]
    fn euler_counting_with_disjoint_stars() {
        let x = closed(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]);
        let u = OpenSet::closed_from_names(x.clone(), &[&["a", "b"]]).unwrap();
        let v = OpenSet::closed_from_names(x.clone(), &[&["c", "d"]]).unwrap();
        let s = Scenario::new(SelfMap::identity(x.clone()), vec![u, v]).unwrap();
        let h = build_counting_function(&s).unwrap();
        assert!(h.values().iter().all(|&v| v <= 1));
        assert_eq!(common_lambda(&s).unwrap(), Some(rational(1)));
        let report = count_targets(&s).unwrap();
        assert_eq!(report.count, 2);
        assert_eq!(report.integral, report.presented_integral);
    }

    #[test]
    fn unequal_euler_characteristics_cannot_count() {
        let x = closed(&["a", "b", "c", "d"], &[&["a", "b"], &["c"]]);
        let u = OpenSet::closed_from_names(x.clone(), &[&["a", "b"]]).unwrap();
        let v = OpenSet::closed_from_names(x.clone(), &[&["a"], &["c"]]).unwrap();
        let s = Scenario::new(SelfMap::identity(x), vec![u, v]).unwrap();
        assert_eq!(common_lambda(&s).unwrap(), None);
        assert_eq!(count_targets(&s).unwrap_err(), Error::NoCommonLambda);
    }

    #[test]
    fn whole_host_support_is_constant() {
        let x = closed(&["a", "b"], &[&["a", "b"]]);
        let s = Scenario::new(SelfMap::identity(x.clone()), vec![OpenSet::whole(x)]).unwrap();
        assert!(build_counting_function(&s).unwrap().values().iter().all(|&v| v == 1));
    }

    #[test]
    fn generated_scenarios_roundtrip() {
        for kind in SymmetryKind::ALL {
            for seed in 0..10 {
                let g = generate_scenario(seed, ScenarioParams { kind, targets: 3, max_simplices: 120 }).unwrap();
                assert_eq!(count_targets(&g.scenario).unwrap().count, g.truth as i64, "{kind} seed {seed}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = ScenarioParams { kind: SymmetryKind::Mirror, targets: 4, max_simplices: 100 };
        let a = generate_scenario(7, p).unwrap();
        let b = generate_scenario(7, p).unwrap();
        assert_eq!(a.scenario.host, b.scenario.host);
        assert_eq!(a.scenario.supports, b.scenario.supports);
    }

    #[test]
    fn generated_supports_follow_the_symmetry() {
        let g = generate_scenario(3, ScenarioParams { kind: SymmetryKind::Identity, targets: 5, max_simplices: 80 }).unwrap();
        assert!(g.scenario.supports.iter().all(OpenSet::is_closed));
        let g = generate_scenario(3, ScenarioParams { kind: SymmetryKind::Mirror, targets: 5, max_simplices: 80 }).unwrap();
        for u in &g.scenario.supports {
            assert!(g.scenario.symmetry.check_invariant(u).unwrap());
        }
    }

    #[test]
    fn infeasible_parameters() {
        let p = ScenarioParams { kind: SymmetryKind::Identity, targets: 21, max_simplices: 80 };
        assert!(matches!(generate_scenario(0, p), Err(Error::InfeasibleParams(_))));
        let p = ScenarioParams { kind: SymmetryKind::Identity, targets: 2, max_simplices: 201 };
        assert!(matches!(generate_scenario(0, p), Err(Error::InfeasibleParams(_))));
    }
}
