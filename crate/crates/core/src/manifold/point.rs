//! Points, tangent vectors and covectors in chart coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::atlas::Atlas;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldPoint {
    pub chart: usize,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentVec {
    pub base: ManifoldPoint,
    pub components: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Covector {
    pub base: ManifoldPoint,
    pub components: Vec<f64>,
}

impl ManifoldPoint {
    pub fn new(atlas: &Atlas, chart: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != atlas.dim {
            return Err(Error::dim("point coordinates", atlas.dim, coords.len()));
        }
        let c = atlas.charts.get(chart).ok_or(Error::IndexOutOfRange { index: chart, bound: atlas.charts.len() })?;
        if !c.contains(&coords) {
            return Err(Error::invariant("chart_domain", format!("{coords:?} is not in chart {}", c.id)));
        }
        Ok(ManifoldPoint { chart, coords })
    }

    /// Same point of the manifold, up to `tol` after moving to a common chart.
    pub fn same_as(&self, atlas: &Atlas, other: &ManifoldPoint, tol: f64) -> bool {
        match atlas.transport(other.chart, self.chart, &other.coords) {
            Ok(y) => crate::sample::max_rel_error(&y, &self.coords) <= tol,
            Err(_) => false,
        }
    }
}

impl TangentVec {
    pub fn new(base: ManifoldPoint, components: Vec<f64>) -> Self {
        TangentVec { base, components }
    }
}

impl Covector {
    pub fn new(base: ManifoldPoint, components: Vec<f64>) -> Self {
        Covector { base, components }
    }

    /// `φ(v)`; both must sit on the same chart.
    pub fn pair(&self, v: &TangentVec) -> f64 {
        debug_assert_eq!(self.base.chart, v.base.chart);
        self.components.iter().zip(&v.components).map(|(a, b)| a * b).sum()
    }
}

/// Re-expression in another chart of the same atlas.
pub trait ChangeChart: Sized {
    fn change_chart(&self, atlas: &Atlas, to: usize) -> Result<Self>;
}

impl ChangeChart for ManifoldPoint {
    fn change_chart(&self, atlas: &Atlas, to: usize) -> Result<Self> {
        Ok(ManifoldPoint { chart: to, coords: atlas.transport(self.chart, to, &self.coords)? })
    }
}

fn transition_jacobian(atlas: &Atlas, p: &ManifoldPoint, to: usize) -> Result<(ManifoldPoint, crate::RMatrix)> {
    if p.chart == to {
        return Ok((p.clone(), Matrix::identity(atlas.dim)));
    }
    let (patch, y) = atlas.transition_at(p.chart, to, &p.coords).ok_or_else(|| Error::OutsideOverlap {
        from: atlas.charts[p.chart].id.clone(),
        to: atlas.charts[to].id.clone(),
        point: p.coords.clone(),
    })?;
    Ok((ManifoldPoint { chart: to, coords: y }, patch.jacobian_at(&p.coords)?))
}

impl ChangeChart for TangentVec {
    /// Components map by `J`.
    fn change_chart(&self, atlas: &Atlas, to: usize) -> Result<Self> {
        let (base, j) = transition_jacobian(atlas, &self.base, to)?;
        Ok(TangentVec { base, components: j.mul_vec(&self.components) })
    }
}

impl ChangeChart for Covector {
    /// Components map by `(Jᵀ)⁻¹`.
    fn change_chart(&self, atlas: &Atlas, to: usize) -> Result<Self> {
        let (base, j) = transition_jacobian(atlas, &self.base, to)?;
        let inv = j.transpose().inverse().ok_or(Error::DivisionByZero)?;
        Ok(Covector { base, components: inv.mul_vec(&self.components) })
    }
}
