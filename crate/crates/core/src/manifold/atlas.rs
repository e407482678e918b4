//! Finite atlases with box-shaped chart domains.
//!
//! A chart domain is an open box, optionally cut down by guards (a guard
//! requires some map of the coordinates to land in another box). Transitions
//! are piecewise: several patches may share the same pair of charts, each
//! valid on its own sub-box.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sample::{Agreement, Method, Sampler};
use crate::smooth::SmoothMap;
use crate::tangent::tangent_map;
use crate::RMatrix;

/// An open box, one interval per coordinate.
pub type Region = Vec<(f64, f64)>;

/// Fibre coordinates of tangent atlases range over this box.
pub const UNBOUNDED: f64 = 1e12;

pub fn in_region(region: &[(f64, f64)], x: &[f64]) -> bool {
    region.len() == x.len() && region.iter().zip(x).all(|(&(lo, hi), &v)| lo < v && v < hi)
}

/// Distance to the nearest face, relative to the box width.
pub fn depth(region: &[(f64, f64)], x: &[f64]) -> f64 {
    region.iter().zip(x).map(|(&(lo, hi), &v)| (v - lo).min(hi - v) / (hi - lo).min(4.0)).fold(f64::INFINITY, f64::min)
}

/// Draws a point in `region ∩ [-2, 2]ⁿ`, falling back to the region alone.
pub fn sample_region(sampler: &mut Sampler, region: &[(f64, f64)]) -> Vec<f64> {
    let bounds: Vec<(f64, f64)> = region
        .iter()
        .map(|&(lo, hi)| {
            let (a, b) = (lo.max(-2.0), hi.min(2.0));
            if a < b {
                (a, b)
            } else {
                (lo, hi)
            }
        })
        .collect();
    sampler.point_in(&bounds)
}

/// `map(x)` must lie in `region`.
#[derive(Clone, Debug)]
pub struct Guard {
    pub map: SmoothMap,
    pub region: Region,
}

impl Guard {
    pub fn admits(&self, x: &[f64]) -> bool {
        self.map.eval(x).is_ok_and(|y| in_region(&self.region, &y))
    }

    /// The same condition read through `f`.
    pub fn after(&self, f: &SmoothMap) -> Result<Guard> {
        Ok(Guard { map: f.then(&self.map)?, region: self.region.clone() })
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub id: String,
    pub region: Region,
    pub guards: Vec<Guard>,
}

impl Chart {
    pub fn new(id: impl Into<String>, region: Region) -> Self {
        Chart { id: id.into(), region, guards: Vec::new() }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        in_region(&self.region, x) && self.guards.iter().all(|g| g.admits(x))
    }
}

/// A map from chart `from` to chart `to`, valid on a box and its guards.
#[derive(Clone, Debug)]
pub struct Patch {
    pub from: usize,
    pub to: usize,
    pub region: Region,
    pub guards: Vec<Guard>,
    pub map: SmoothMap,
    jacobian: SmoothMap,
}

impl Patch {
    pub fn new(from: usize, to: usize, region: Region, guards: Vec<Guard>, map: SmoothMap) -> Self {
        let flat = map.jacobian().into_iter().flatten().collect();
        let jacobian = SmoothMap::new(map.dom(), flat).expect("jacobian stays in scope");
        Patch { from, to, region, guards, map, jacobian }
    }

    pub fn covers(&self, x: &[f64]) -> bool {
        in_region(&self.region, x) && self.guards.iter().all(|g| g.admits(x))
    }

    /// The image of `x` when `x` is covered and the image lies in `target`.
    pub fn apply(&self, x: &[f64], target: &Chart) -> Option<Vec<f64>> {
        if !self.covers(x) {
            return None;
        }
        let y = self.map.eval(x).ok()?;
        (y.iter().all(|v| v.is_finite()) && target.contains(&y)).then_some(y)
    }

    pub fn jacobian_at(&self, x: &[f64]) -> Result<RMatrix> {
        let flat = self.jacobian.eval(x)?;
        Ok(Matrix::from_row_major(self.map.cod(), self.map.dom(), flat))
    }
}

#[derive(Clone, Debug)]
pub struct Atlas {
    pub name: String,
    pub dim: usize,
    pub charts: Vec<Chart>,
    pub transitions: Vec<Patch>,
}

impl Atlas {
    pub fn new(name: impl Into<String>, dim: usize, charts: Vec<Chart>, transitions: Vec<Patch>) -> Result<Self> {
        for c in &charts {
            if c.region.len() != dim {
                return Err(Error::dim(format!("domain of chart {}", c.id), dim, c.region.len()));
            }
        }
        for t in &transitions {
            if t.from >= charts.len() || t.to >= charts.len() {
                return Err(Error::IndexOutOfRange { index: t.from.max(t.to), bound: charts.len() });
            }
            if t.map.dom() != dim || t.map.cod() != dim || t.region.len() != dim {
                return Err(Error::dim(format!("transition {} → {}", charts[t.from].id, charts[t.to].id), dim, t.map.dom()));
            }
        }
        Ok(Atlas { name: name.into(), dim, charts, transitions })
    }

    pub fn chart_index(&self, id: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.id == id)
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    /// The patch moving `x` from chart `from` into chart `to`, with the image.
    pub fn transition_at(&self, from: usize, to: usize, x: &[f64]) -> Option<(&Patch, Vec<f64>)> {
        self.transitions.iter().filter(|t| t.from == from && t.to == to).find_map(|t| t.apply(x, &self.charts[to]).map(|y| (t, y)))
    }

    /// Coordinates of `x` (in chart `from`) in chart `to`.
    pub fn transport(&self, from: usize, to: usize, x: &[f64]) -> Result<Vec<f64>> {
        if from == to {
            return Ok(x.to_vec());
        }
        self.transition_at(from, to, x).map(|(_, y)| y).ok_or_else(|| Error::OutsideOverlap {
            from: self.charts[from].id.clone(),
            to: self.charts[to].id.clone(),
            point: x.to_vec(),
        })
    }

    /// Every chart containing the point, with its coordinates there.
    pub fn charts_at(&self, chart: usize, x: &[f64]) -> Vec<(usize, Vec<f64>)> {
        (0..self.charts.len()).filter_map(|j| self.transport(chart, j, x).ok().map(|y| (j, y))).collect()
    }

    /// `T(M)`: charts `U × ℝⁿ`, transitions `T(τ)`.
    pub fn tangent(&self) -> Atlas {
        let n = self.dim;
        let widen = |region: &Region| -> Region { region.iter().copied().chain(std::iter::repeat_n((-UNBOUNDED, UNBOUNDED), n)).collect() };
        let base = SmoothMap::block(2 * n, 0, n);
        let lift = |gs: &[Guard]| -> Vec<Guard> { gs.iter().map(|g| g.after(&base).unwrap()).collect() };
        let charts = self.charts.iter().map(|c| Chart { id: c.id.clone(), region: widen(&c.region), guards: lift(&c.guards) }).collect();
        let transitions =
            self.transitions.iter().map(|t| Patch::new(t.from, t.to, widen(&t.region), lift(&t.guards), tangent_map(&t.map))).collect();
        Atlas { name: format!("T({})", self.name), dim: 2 * n, charts, transitions }
    }

    /// Transition Jacobians are invertible and transitions compose, at
    /// `samples` points drawn from every transition domain.
    pub fn verify(&self, seed: u64, samples: usize, tol: f64, det_floor: f64) -> Vec<(String, Agreement)> {
        let mut sampler = Sampler::new(seed);
        let mut min_det = f64::INFINITY;
        let mut det_witness = None;
        let mut cocycle = Agreement { method: Method::Numeric, tolerance: tol, ..Agreement::exact(Method::Numeric, true) };
        let mut det_points = 0;
        for t in &self.transitions {
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &t.region);
                let Some(y) = t.apply(&x, &self.charts[t.to]) else { continue };
                if !self.charts[t.from].contains(&x) {
                    continue;
                }
                let Ok(j) = t.jacobian_at(&x) else { continue };
                det_points += 1;
                let d = j.determinant().abs();
                if d < min_det {
                    min_det = d;
                    if d <= det_floor {
                        det_witness = Some(x.clone());
                    }
                }
                for k in 0..self.charts.len() {
                    let (Ok(via), Ok(direct)) = (self.transport(t.to, k, &y), self.transport(t.from, k, &x)) else {
                        continue;
                    };
                    cocycle.points += 1;
                    let err = crate::sample::max_rel_error(&via, &direct);
                    if err > cocycle.max_error {
                        cocycle.max_error = err;
                        if err > tol {
                            cocycle.witness = Some(x.clone());
                        }
                    }
                }
            }
        }
        cocycle.holds = cocycle.max_error <= tol;
        let invertible = Agreement {
            method: Method::Numeric,
            holds: det_witness.is_none(),
            points: det_points,
            max_error: if min_det.is_finite() { min_det } else { 0.0 },
            tolerance: det_floor,
            witness: det_witness,
            note: Some("max_error reports the smallest |det J| seen".into()),
        };
        vec![("atlas_cocycle".into(), cocycle), ("atlas_transition_invertible".into(), invertible)]
    }

    /// Fails with the first violated check.
    pub fn validate(&self, seed: u64, samples: usize) -> Result<()> {
        for (name, a) in self.verify(seed, samples, 1e-9, 1e-8) {
            if !a.holds {
                return Err(Error::invariant(name, format!("{} fails, witness {:?}", self.name, a.witness)));
            }
        }
        Ok(())
    }
}
