//! Smooth maps between chart-presented manifolds, given by local
//! representatives, with their tangent and cotangent actions.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::{max_rel_error, Agreement, Method, Sampler};
use crate::smooth::SmoothMap;

use super::atlas::{sample_region, Atlas, Guard, Patch, Region};
use super::point::{ChangeChart, Covector, ManifoldPoint, TangentVec};

pub const DET_FLOOR: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct ManifoldMap {
    pub name: String,
    pub source: Arc<Atlas>,
    pub target: Arc<Atlas>,
    /// `from` indexes source charts, `to` target charts.
    pub reps: Vec<Patch>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaleReport {
    pub etale: bool,
    pub min_det: f64,
    pub worst: Option<ManifoldPoint>,
    pub points: usize,
}

impl ManifoldMap {
    pub fn new(name: impl Into<String>, source: Arc<Atlas>, target: Arc<Atlas>, reps: Vec<Patch>) -> Result<Self> {
        for r in &reps {
            if r.from >= source.charts.len() || r.to >= target.charts.len() {
                return Err(Error::IndexOutOfRange { index: r.from.max(r.to), bound: source.charts.len().max(target.charts.len()) });
            }
            if r.map.dom() != source.dim || r.map.cod() != target.dim {
                return Err(Error::dim("local representative", target.dim, r.map.cod()));
            }
        }
        Ok(ManifoldMap { name: name.into(), source, target, reps })
    }

    pub fn identity(atlas: Arc<Atlas>) -> Self {
        let reps = atlas
            .charts
            .iter()
            .enumerate()
            .map(|(i, c)| Patch::new(i, i, c.region.clone(), c.guards.clone(), SmoothMap::identity(atlas.dim)))
            .collect();
        ManifoldMap { name: "id".into(), source: atlas.clone(), target: atlas, reps }
    }

    /// Every representative valid at `p`, trying the point's own chart first.
    /// Each entry carries the point in the representative's chart and the image.
    pub fn reps_at(&self, p: &ManifoldPoint) -> Vec<(&Patch, ManifoldPoint, ManifoldPoint)> {
        let mut order: Vec<usize> = vec![p.chart];
        order.extend((0..self.source.charts.len()).filter(|&c| c != p.chart));
        let mut out = Vec::new();
        for c in order {
            let Ok(x) = p.change_chart(&self.source, c) else { continue };
            for r in self.reps.iter().filter(|r| r.from == c) {
                if let Some(y) = r.apply(&x.coords, &self.target.charts[r.to]) {
                    out.push((r, x.clone(), ManifoldPoint { chart: r.to, coords: y }));
                }
            }
        }
        out
    }

    pub fn rep_at(&self, p: &ManifoldPoint) -> Result<(&Patch, ManifoldPoint, ManifoldPoint)> {
        self.reps_at(p)
            .into_iter()
            .next()
            .ok_or_else(|| Error::NoRepresentative(format!("{} at {:?} in chart {}", self.name, p.coords, self.source.charts[p.chart].id)))
    }

    pub fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        Ok(self.rep_at(p)?.2)
    }

    /// `T(f)(x, v) = (f(x), J v)`.
    pub fn tangent(&self, v: &TangentVec) -> Result<TangentVec> {
        let (r, x, y) = self.rep_at(&v.base)?;
        let v = v.change_chart(&self.source, x.chart)?;
        Ok(TangentVec { base: y, components: r.jacobian_at(&x.coords)?.mul_vec(&v.components) })
    }

    /// `T*(f)(x, φ) = (x, Jᵀ φ)` for `φ` based at `f(x)`; the result is
    /// expressed in `x`'s chart.
    pub fn cotangent(&self, x: &ManifoldPoint, phi: &Covector) -> Result<Covector> {
        let (r, xr, y) = self.rep_at(x)?;
        let phi = phi
            .change_chart(&self.target, y.chart)
            .map_err(|_| Error::BaseMismatch(format!("covector base {:?} is not f(x) = {:?}", phi.base.coords, y.coords)))?;
        if max_rel_error(&phi.base.coords, &y.coords) > 1e-9 {
            return Err(Error::BaseMismatch(format!("covector base {:?} is not f(x) = {:?}", phi.base.coords, y.coords)));
        }
        let j = r.jacobian_at(&xr.coords)?;
        let out = Covector { base: xr, components: j.transpose().mul_vec(&phi.components) };
        out.change_chart(&self.source, x.chart)
    }

    /// Pointwise invertibility of the local Jacobians at sampled points.
    pub fn is_etale(&self, seed: u64, samples: usize, floor: f64) -> EtaleReport {
        let mut sampler = Sampler::new(seed);
        let mut report = EtaleReport { etale: self.source.dim == self.target.dim, min_det: f64::INFINITY, worst: None, points: 0 };
        if !report.etale {
            report.min_det = 0.0;
            return report;
        }
        for r in &self.reps {
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &r.region);
                if !self.source.charts[r.from].contains(&x) || r.apply(&x, &self.target.charts[r.to]).is_none() {
                    continue;
                }
                let Ok(j) = r.jacobian_at(&x) else { continue };
                report.points += 1;
                let d = j.determinant().abs();
                if d < report.min_det {
                    report.min_det = d;
                    report.worst = Some(ManifoldPoint { chart: r.from, coords: x });
                }
            }
        }
        report.etale = report.points > 0 && report.min_det > floor;
        report
    }

    /// `T̂*(f)(x, φ) = (f(x), (J⁻¹)ᵀ φ)` for `φ` based at `x`.
    pub fn etale_cotangent(&self, phi: &Covector) -> Result<Covector> {
        let (r, x, y) = self.rep_at(&phi.base)?;
        let phi = phi.change_chart(&self.source, x.chart)?;
        let j = r.jacobian_at(&x.coords)?;
        let det = j.determinant().abs();
        if det <= DET_FLOOR {
            return Err(Error::NotEtale { min_det: det, point: x.coords });
        }
        let inv = j.inverse().ok_or(Error::NotEtale { min_det: det, point: x.coords.clone() })?;
        Ok(Covector { base: y, components: inv.transpose().mul_vec(&phi.components) })
    }

    /// The restriction to `f⁻¹(U)` for `U` a box of target chart `chart`:
    /// the projection of the pullback of `self` along `U ↪ B`.
    pub fn restrict_to(&self, chart: usize, region: Region) -> Result<ManifoldMap> {
        let mut reps = Vec::new();
        for r in &self.reps {
            if r.to == chart {
                let mut r = r.clone();
                r.guards.push(Guard { map: r.map.clone(), region: region.clone() });
                reps.push(r);
                continue;
            }
            for back in self.target.transitions.iter().filter(|t| t.from == r.to && t.to == chart) {
                let mut r = r.clone();
                r.guards.push(Guard { map: r.map.clone(), region: back.region.clone() });
                r.guards.push(Guard { map: r.map.then(&back.map)?, region: region.clone() });
                reps.push(r);
            }
        }
        Ok(ManifoldMap { name: format!("{}|", self.name), reps, ..self.clone() })
    }

    /// Representatives agree on overlaps once both sides are moved to a
    /// common chart.
    pub fn verify(&self, seed: u64, samples: usize, tol: f64) -> Agreement {
        let mut sampler = Sampler::new(seed);
        let mut a = Agreement { tolerance: tol, ..Agreement::exact(Method::Numeric, true) };
        for r in &self.reps {
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &r.region);
                let Some(y) = r.apply(&x, &self.target.charts[r.to]) else { continue };
                let p = ManifoldPoint { chart: r.from, coords: x.clone() };
                for (_, _, other) in self.reps_at(&p) {
                    let Ok(y2) = self.target.transport(r.to, other.chart, &y) else { continue };
                    a.points += 1;
                    let err = max_rel_error(&y2, &other.coords);
                    if err > a.max_error {
                        a.max_error = err;
                        if err > tol {
                            a.witness = Some(x.clone());
                        }
                    }
                }
            }
        }
        a.holds = a.max_error <= tol;
        a
    }

    /// `self` then `next`. Representatives are chained through every
    /// transition of the middle atlas so that no chart change is lost.
    pub fn then(&self, next: &ManifoldMap) -> Result<ManifoldMap> {
        let mid = &self.target;
        if mid.dim != next.source.dim || mid.name != next.source.name {
            return Err(Error::BaseMismatch(format!("{} is not {}", mid.name, next.source.name)));
        }
        let n = mid.dim;
        let mut bridges: Vec<Patch> =
            mid.charts.iter().enumerate().map(|(i, c)| Patch::new(i, i, c.region.clone(), Vec::new(), SmoothMap::identity(n))).collect();
        bridges.extend(mid.transitions.iter().cloned());
        let mut reps = Vec::new();
        for r1 in &self.reps {
            for b in bridges.iter().filter(|b| b.from == r1.to) {
                for r2 in next.reps.iter().filter(|r2| r2.from == b.to) {
                    let rb = r1.map.then(&b.map)?;
                    let mut guards = r1.guards.clone();
                    guards.push(Guard { map: r1.map.clone(), region: mid.charts[r1.to].region.clone() });
                    for g in mid.charts[r1.to].guards.iter().chain(&b.guards) {
                        guards.push(g.after(&r1.map)?);
                    }
                    guards.push(Guard { map: r1.map.clone(), region: b.region.clone() });
                    guards.push(Guard { map: rb.clone(), region: mid.charts[b.to].region.clone() });
                    for g in mid.charts[b.to].guards.iter().chain(&r2.guards) {
                        guards.push(g.after(&rb)?);
                    }
                    guards.push(Guard { map: rb.clone(), region: r2.region.clone() });
                    reps.push(Patch::new(r1.from, r2.to, r1.region.clone(), guards, rb.then(&r2.map)?));
                }
            }
        }
        ManifoldMap::new(format!("{};{}", self.name, next.name), self.source.clone(), next.target.clone(), reps)
    }
}
