//! Constructible functions and their integral against a Lefschetz measure.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::complex::{same_host, OpenSet, SimplicialComplex};
use crate::error::{Error, Result};
use crate::lefschetz::{LefschetzMeasure, SelfMap, TensorEndomorphism};
use crate::linalg::{rational, Rational};
use crate::product::ProductRecord;

/// An integer-valued function constant on the open cells of `host`.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    host: Arc<SimplicialComplex>,
    values: Vec<i64>,
    presentation: Option<Vec<(i64, OpenSet)>>,
}

impl PartialEq for ConstructibleFunction {
    /// Equal as functions; presentations are ignored.
    fn eq(&self, other: &Self) -> bool {
        same_host(&self.host, &other.host) && self.values == other.values
    }
}

impl ConstructibleFunction {
    /// `sum c_j 1_{U_j}`, keeping the presentation.
    pub fn normalize(host: Arc<SimplicialComplex>, presentation: Vec<(i64, OpenSet)>) -> Result<Self> {
        let mut values = vec![0; host.len()];
        for (c, u) in &presentation {
            if !same_host(u.host(), &host) {
                return Err(Error::HostMismatch);
            }
            for &cell in u.cells() {
                values[cell] += c;
            }
        }
        Ok(ConstructibleFunction { host, values, presentation: Some(presentation) })
    }

    pub fn from_values(host: Arc<SimplicialComplex>, values: Vec<i64>) -> Result<Self> {
        if values.len() != host.len() {
            return Err(Error::ValueLength { expected: host.len(), got: values.len() });
        }
        Ok(ConstructibleFunction { host, values, presentation: None })
    }

    /// The indicator function `1_U`.
    pub fn indicator(u: &OpenSet) -> Self {
        Self::normalize(u.host().clone(), vec![(1, u.clone())]).expect("single host")
    }

    pub fn host(&self) -> &Arc<SimplicialComplex> {
        &self.host
    }

    pub fn value(&self, cell: usize) -> i64 {
        self.values[cell]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn presentation(&self) -> Option<&[(i64, OpenSet)]> {
        self.presentation.as_deref()
    }

    /// Drops the presentation, keeping the values.
    pub fn forget_presentation(&self) -> Self {
        ConstructibleFunction { host: self.host.clone(), values: self.values.clone(), presentation: None }
    }

    /// `self + other`; presentations are concatenated when both exist.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_host(&self.host, &other.host) {
            return Err(Error::HostMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let presentation = match (&self.presentation, &other.presentation) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(ConstructibleFunction { host: self.host.clone(), values, presentation })
    }

    pub fn scale(&self, c: i64) -> Self {
        ConstructibleFunction {
            host: self.host.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            presentation: self
                .presentation
                .as_ref()
                .map(|p| p.iter().map(|(d, u)| (d * c, u.clone())).collect()),
        }
    }

    /// The nonzero level sets `{h = k}`.
    pub fn level_sets(&self) -> BTreeMap<i64, OpenSet> {
        let mut cells: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (cell, &v) in self.values.iter().enumerate() {
            if v != 0 {
                cells.entry(v).or_default().push(cell);
            }
        }
        cells
            .into_iter()
            .map(|(k, c)| (k, OpenSet::new(self.host.clone(), c).expect("cells of host")))
            .collect()
    }

    /// `sum_k k 1_{h = k}`.
    pub fn level_presentation(&self) -> Vec<(i64, OpenSet)> {
        self.level_sets().into_iter().collect()
    }
}

/// `sum_j c_j lambda(m, U_j)` over the presentation of `h`, or over its level
/// sets when it has none.
pub fn integrate(h: &ConstructibleFunction, m: &LefschetzMeasure) -> Result<Rational> {
    match h.presentation() {
        Some(p) => {
            if !same_host(h.host(), m.host()) {
                return Err(Error::HostMismatch);
            }
            p.iter().try_fold(Rational::zero(), |acc, (c, u)| Ok(acc + rational(*c) * m.lambda(u)?))
        }
        None => integrate_via_levels(h, m),
    }
}

/// `sum_k k lambda(m, {h = k})`.
pub fn integrate_via_levels(h: &ConstructibleFunction, m: &LefschetzMeasure) -> Result<Rational> {
    if !same_host(h.host(), m.host()) {
        return Err(Error::HostMismatch);
    }
    h.level_sets()
        .iter()
        .try_fold(Rational::zero(), |acc, (k, u)| Ok(acc + rational(*k) * m.lambda(u)?))
}

/// `sum_s h(s) (-1)^dim s`, the integral against the Euler characteristic.
pub fn euler_integrate(h: &ConstructibleFunction) -> i64 {
    h.values
        .iter()
        .enumerate()
        .map(|(cell, &v)| if h.host.cell_dim(cell).is_multiple_of(2) { v } else { -v })
        .sum()
}

/// Both sides of Fubini for `h` on the trivial bundle `B x F` with the
/// fiberwise map `id x l2`.
///
/// `h` lives on the staircase triangulation in `rec` and must be constant on
/// the simplices carried by each product cell `b x s`. The left side is the
/// integral over product cells with the tensor endomorphism `id ⊗ l2`; the
/// right side integrates each fiber against `l2` and then integrates the
/// result over `B` against the Euler characteristic.
pub fn fubini_trivial_bundle(
    rec: &ProductRecord,
    l2: &SelfMap,
    h: &ConstructibleFunction,
) -> Result<(Rational, Rational)> {
    if !same_host(h.host(), rec.product()) || !same_host(l2.host(), rec.right()) {
        return Err(Error::HostMismatch);
    }
    let (base, fiber) = (rec.left(), rec.right());
    let nf = fiber.len();
    let mut cell_value: Vec<Option<i64>> = vec![None; base.len() * nf];
    for c in 0..rec.product().len() {
        let (b, s) = rec.carrier(c);
        let slot = &mut cell_value[b * nf + s];
        match *slot {
            None => *slot = Some(h.value(c)),
            Some(v) if v != h.value(c) => {
                return Err(Error::NotCellCompatible(format!(
                    "{} x {}",
                    base.format_cell(b),
                    fiber.format_cell(s)
                )))
            }
            Some(_) => {}
        }
    }
    let g = |b: usize, s: usize| cell_value[b * nf + s].expect("every product cell carries a simplex");

    if l2.depth() == 0 {
        for b in 0..base.len() {
            for s in 0..nf {
                let t = l2.image_cell(s);
                if g(b, s) != g(b, t) {
                    return Err(Error::NotInvariant(format!(
                        "{} x {}",
                        base.format_cell(b),
                        fiber.format_cell(s)
                    )));
                }
            }
        }
    }

    let measure = LefschetzMeasure::new(l2.clone());
    let id = LefschetzMeasure::identity(base.clone());
    let tensor = TensorEndomorphism::new(id.endomorphism(), measure.endomorphism())?;
    let mut lhs = Rational::zero();
    let mut by_value: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for b in 0..base.len() {
        for s in 0..nf {
            if g(b, s) != 0 {
                by_value.entry(g(b, s)).or_default().push((b, s));
            }
        }
    }
    for (k, pairs) in by_value {
        lhs += rational(k) * tensor.restricted_alternating_trace(pairs);
    }

    let mut rhs = Rational::zero();
    for b in 0..base.len() {
        let fiber_h = ConstructibleFunction::from_values(fiber.clone(), (0..nf).map(|s| g(b, s)).collect())?;
        let v = integrate_via_levels(&fiber_h, &measure)?;
        if base.cell_dim(b) % 2 == 0 {
            rhs += v;
        } else {
            rhs -= v;
        }
    }
    Ok((lhs, rhs))
}
