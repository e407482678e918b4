//! Gradient descent through metric duality: `dh` is a covector, the inverse
//! metric turns it into a tangent vector, and the step is taken in-chart.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sample::{Agreement, Method, Sampler};
use crate::smooth::SmoothMap;
use crate::RMatrix;

use super::atlas::{depth, sample_region, Atlas};
use super::map::ManifoldMap;
use super::point::{ChangeChart, Covector, ManifoldPoint};

pub const MAX_HALVINGS: usize = 30;

/// A symmetric positive definite matrix field per chart, each a map
/// `n → n²` in row-major order.
#[derive(Clone, Debug)]
pub struct Metric {
    pub atlas: Arc<Atlas>,
    pub charts: Vec<SmoothMap>,
}

impl Metric {
    pub fn new(atlas: Arc<Atlas>, charts: Vec<SmoothMap>) -> Result<Self> {
        let n = atlas.dim;
        if charts.len() != atlas.charts.len() {
            return Err(Error::dim("metric charts", atlas.charts.len(), charts.len()));
        }
        for g in &charts {
            if g.dom() != n || g.cod() != n * n {
                return Err(Error::dim("metric matrix entries", n * n, g.cod()));
            }
        }
        Ok(Metric { atlas, charts })
    }

    /// The identity matrix in every chart.
    pub fn euclidean(atlas: Arc<Atlas>) -> Self {
        let n = atlas.dim;
        let id: Vec<_> = (0..n * n).map(|k| crate::scalar::int(i64::from(k % (n + 1) == 0))).collect();
        let charts = vec![SmoothMap::constant(n, &id); atlas.charts.len()];
        Metric { atlas, charts }
    }

    pub fn at(&self, p: &ManifoldPoint) -> Result<RMatrix> {
        let n = self.atlas.dim;
        Ok(Matrix::from_row_major(n, n, self.charts[p.chart].eval(&p.coords)?))
    }

    /// Symmetry and positive leading minors at sampled points.
    pub fn verify(&self, seed: u64, samples: usize) -> Agreement {
        let mut sampler = Sampler::new(seed);
        let mut a = Agreement::exact(Method::Numeric, true);
        for (i, c) in self.atlas.charts.iter().enumerate() {
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &c.region);
                if !c.contains(&x) {
                    continue;
                }
                let Ok(g) = self.at(&ManifoldPoint { chart: i, coords: x.clone() }) else { continue };
                a.points += 1;
                let asym = g.max_abs_diff(&g.transpose());
                a.max_error = a.max_error.max(asym);
                let minors_positive = (1..=g.rows()).all(|k| {
                    let sub = Matrix::from_rows(&(0..k).map(|r| g.row(r)[..k].to_vec()).collect::<Vec<_>>());
                    sub.determinant() > 0.0
                });
                if asym > 1e-12 || !minors_positive {
                    a.holds = false;
                    a.witness.get_or_insert(x);
                }
            }
        }
        a
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub point: ManifoldPoint,
    pub value: f64,
    pub step: f64,
    pub halvings: usize,
}

/// `h(p)` for `h: M → ℝ`.
pub fn value(h: &ManifoldMap, p: &ManifoldPoint) -> Result<f64> {
    Ok(h.apply(p)?.coords[0])
}

/// `dh` at `p`: the cotangent action of `h` on the unit covector of `ℝ`.
pub fn differential(h: &ManifoldMap, p: &ManifoldPoint) -> Result<Covector> {
    if h.target.dim != 1 {
        return Err(Error::dim("objective codomain", 1, h.target.dim));
    }
    let y = h.apply(p)?;
    h.cotangent(p, &Covector::new(y, vec![1.0]))
}

/// One descent step with backtracking; re-charts to the deepest other chart
/// when the full step would leave the current one.
pub fn riemannian_gradient_step(h: &ManifoldMap, metric: &Metric, x: &ManifoldPoint, step: f64) -> Result<Step> {
    let atlas = &h.source;
    let h0 = value(h, x)?;
    let dh = differential(h, x)?;
    if dh.components.iter().all(|&c| c == 0.0) {
        return Ok(Step { point: x.clone(), value: h0, step: 0.0, halvings: 0 });
    }
    let tentative = |p: &ManifoldPoint, t: f64| -> Result<Vec<f64>> {
        let dh = dh.change_chart(atlas, p.chart)?;
        let g = metric.at(p)?;
        let v = g.inverse().ok_or(Error::DivisionByZero)?.mul_vec(&dh.components);
        Ok(p.coords.iter().zip(&v).map(|(a, b)| a - t * b).collect())
    };
    let mut base = x.clone();
    let full = tentative(&base, step)?;
    if !atlas.charts[base.chart].contains(&full) {
        let current = depth(&atlas.charts[base.chart].region, &base.coords);
        let better = atlas
            .charts_at(base.chart, &base.coords)
            .into_iter()
            .filter(|(c, _)| *c != base.chart)
            .map(|(c, y)| (depth(&atlas.charts[c].region, &y), c, y))
            .filter(|(d, _, _)| *d > current)
            .max_by(|a, b| a.0.total_cmp(&b.0));
        match better {
            Some((_, c, y)) => base = ManifoldPoint { chart: c, coords: y },
            None if atlas.charts.len() == 1 => return Err(Error::LeftAllCharts(full)),
            None => {}
        }
    }
    let mut t = step;
    for halvings in 0..=MAX_HALVINGS {
        let y = tentative(&base, t)?;
        if atlas.charts[base.chart].contains(&y) {
            let p = ManifoldPoint { chart: base.chart, coords: y };
            if let Ok(v) = value(h, &p) {
                if v <= h0 {
                    return Ok(Step { point: p, value: v, step: t, halvings });
                }
            }
        }
        t /= 2.0;
    }
    Err(Error::StepUnderflow { halvings: MAX_HALVINGS })
}

#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub points: Vec<ManifoldPoint>,
    pub values: Vec<f64>,
    pub converged: bool,
}

impl Trace {
    pub fn last(&self) -> &ManifoldPoint {
        self.points.last().expect("a trace starts with its initial point")
    }

    pub fn monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Up to `iters` steps, stopping once `|dh| ≤ gtol`.
pub fn optimize(h: &ManifoldMap, metric: &Metric, start: ManifoldPoint, step: f64, iters: usize, gtol: f64) -> Result<Trace> {
    let mut trace = Trace { values: vec![value(h, &start)?], points: vec![start], converged: false };
    for _ in 0..iters {
        let x = trace.last().clone();
        let dh = differential(h, &x)?;
        if dh.components.iter().map(|c| c * c).sum::<f64>().sqrt() <= gtol {
            trace.converged = true;
            break;
        }
        let s = riemannian_gradient_step(h, metric, &x, step)?;
        trace.points.push(s.point);
        trace.values.push(s.value);
    }
    Ok(trace)
}
