//! Vector bundles over chart manifolds, presented by transition matrices.
//!
//! Over each chart the bundle is trivial; an entry `G` from chart `i` to
//! chart `j` changes fibre coordinates by `ξ_j = G(x) ξ_i`, with `x` the
//! coordinates in chart `i`. Inside each chart the bundle maps `q, σ, ζ, λ`
//! are those of the trivial bundle, so the axioms reduce to compatibility of
//! the total-space transitions with them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::Matrix;
use crate::manifold::atlas::{in_region, sample_region, Atlas, Chart, Guard, Patch, Region, UNBOUNDED};
use crate::manifold::ManifoldMap;
use crate::sample::{max_rel_error, Agreement, Method, Sampler};
use crate::smooth::SmoothMap;
use crate::tangent::tangent_map;
use crate::RMatrix;

use super::coordinate::{inverse_matrix, map, vars};

#[derive(Clone, Debug)]
pub struct CocycleEntry {
    pub from: usize,
    pub to: usize,
    pub region: Region,
    pub guards: Vec<Guard>,
    /// `k × k` expressions in the chart-`from` coordinates.
    pub matrix: Vec<Vec<Expr>>,
}

impl CocycleEntry {
    fn covers(&self, x: &[f64]) -> bool {
        in_region(&self.region, x) && self.guards.iter().all(|g| g.admits(x))
    }
}

#[derive(Clone, Debug)]
pub struct CocycleBundle {
    pub name: String,
    pub atlas: Arc<Atlas>,
    pub fibre_dim: usize,
    pub entries: Vec<CocycleEntry>,
    dual: bool,
}

fn eval_matrix(m: &[Vec<Expr>], x: &[f64]) -> Result<RMatrix> {
    let rows = m.iter().map(|row| row.iter().map(|e| e.eval(x)).collect::<Result<Vec<f64>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(&rows))
}

fn transpose(m: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// `(Gᵀ)⁻¹`, symbolically.
pub fn inverse_transpose(m: &[Vec<Expr>]) -> Option<Vec<Vec<Expr>>> {
    inverse_matrix(&transpose(m))
}

impl CocycleBundle {
    pub fn new(name: impl Into<String>, atlas: Arc<Atlas>, fibre_dim: usize, entries: Vec<CocycleEntry>) -> Result<Self> {
        for e in &entries {
            if e.from >= atlas.charts.len() || e.to >= atlas.charts.len() {
                return Err(Error::IndexOutOfRange { index: e.from.max(e.to), bound: atlas.charts.len() });
            }
            if e.matrix.len() != fibre_dim || e.matrix.iter().any(|r| r.len() != fibre_dim) {
                return Err(Error::dim("transition matrix", fibre_dim, e.matrix.len()));
            }
            if let Some(bad) = e.matrix.iter().flatten().map(Expr::arity).find(|&a| a > atlas.dim) {
                return Err(Error::UnboundVariable { index: bad - 1, dim: atlas.dim });
            }
        }
        Ok(CocycleBundle { name: name.into(), atlas, fibre_dim, entries, dual: false })
    }

    /// `T(M)`, with the transition Jacobians as matrices.
    pub fn tangent_bundle(atlas: Arc<Atlas>) -> Self {
        let entries = atlas
            .transitions
            .iter()
            .map(|t| CocycleEntry { from: t.from, to: t.to, region: t.region.clone(), guards: t.guards.clone(), matrix: t.map.jacobian() })
            .collect();
        CocycleBundle { name: format!("T({})", atlas.name), fibre_dim: atlas.dim, atlas, entries, dual: false }
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn display_name(&self) -> String {
        if self.dual {
            format!("{}*", self.name)
        } else {
            self.name.clone()
        }
    }

    /// The effective transition matrix of an entry: `(Gᵀ)⁻¹` on the dual.
    pub fn matrix(&self, entry: &CocycleEntry) -> Vec<Vec<Expr>> {
        if self.dual {
            inverse_transpose(&entry.matrix).expect("transition matrices are invertible")
        } else {
            entry.matrix.clone()
        }
    }

    /// Transition matrix from chart `from` to chart `to` at `x`, identity
    /// within a chart.
    pub fn transition_at(&self, from: usize, to: usize, x: &[f64]) -> Option<RMatrix> {
        if from == to {
            return Some(Matrix::identity(self.fibre_dim));
        }
        self.atlas.transition_at(from, to, x)?;
        let e = self.entries.iter().find(|e| e.from == from && e.to == to && e.covers(x))?;
        eval_matrix(&self.matrix(e), x).ok()
    }

    /// `E*`: every transition becomes its inverse transpose. Twice is `E`.
    pub fn star(&self) -> CocycleBundle {
        CocycleBundle { dual: !self.dual, ..self.clone() }
    }

    /// Total-space transition `(x, u) ↦ (τ(x), G(x) u)` for an entry.
    fn total_transition(&self, patch: &Patch, entry: &CocycleEntry) -> SmoothMap {
        let (n, k) = (self.atlas.dim, self.fibre_dim);
        let mut comps: Vec<Expr> = patch.map.components().to_vec();
        let u = vars(n..n + k);
        comps.extend(self.matrix(entry).iter().map(|row| Expr::sum(row.iter().zip(&u).map(|(g, ui)| g.mul(ui)))));
        map(n + k, comps)
    }

    /// Invertibility, the cocycle condition, and compatibility of every
    /// total-space transition with `ζ`, `σ` and `λ`, at sampled points.
    pub fn verify_axioms(&self, seed: u64, samples: usize, tol: f64) -> Vec<(String, Agreement)> {
        let (n, k) = (self.atlas.dim, self.fibre_dim);
        let mut sampler = Sampler::new(seed);
        let blank = || Agreement { tolerance: tol, ..Agreement::exact(Method::Numeric, true) };
        let (mut invertible, mut cocycle, mut zero, mut sum, mut lift) = (blank(), blank(), blank(), blank(), blank());
        invertible.tolerance = 1e-8;
        let record = |a: &mut Agreement, err: f64, x: &[f64]| {
            a.points += 1;
            if err > a.max_error {
                a.max_error = err;
            }
            if err > a.tolerance && a.witness.is_none() {
                a.witness = Some(x.to_vec());
            }
        };
        // λ(x, u) = (x, 0, 0, u) in T(E) coordinates (x, u, dx, du)
        let lam = |e: &[f64]| -> Vec<f64> { [e[..n].to_vec(), vec![0.0; k + n], e[n..].to_vec()].concat() };
        for entry in &self.entries {
            let patches: Vec<&Patch> = self.atlas.transitions.iter().filter(|t| t.from == entry.from && t.to == entry.to).collect();
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &entry.region);
                if !entry.covers(&x) || !self.atlas.charts[entry.from].contains(&x) {
                    continue;
                }
                let Some((patch, y)) = patches.iter().find_map(|p| p.apply(&x, &self.atlas.charts[entry.to]).map(|y| (*p, y))) else {
                    continue;
                };
                let Ok(g) = eval_matrix(&self.matrix(entry), &x) else { continue };
                let det = g.determinant().abs();
                invertible.points += 1;
                if det <= invertible.tolerance && invertible.witness.is_none() {
                    invertible.witness = Some(x.clone());
                }
                for c in 0..self.atlas.charts.len() {
                    let (Some(g_jc), Some(g_ic)) = (self.transition_at(entry.to, c, &y), self.transition_at(entry.from, c, &x)) else {
                        continue;
                    };
                    let via = g_jc.mul(&g);
                    record(&mut cocycle, via.max_abs_diff(&g_ic) / 1f64.max(g_ic.max_abs_diff(&Matrix::zeros(k, k))), &x);
                }
                let phi = self.total_transition(patch, entry);
                let u = sampler.point(k, -2.0, 2.0);
                let w = sampler.point(k, -2.0, 2.0);
                let at = |v: &[f64]| -> Vec<f64> { phi.eval(&[x.clone(), v.to_vec()].concat()).unwrap()[n..].to_vec() };
                record(&mut zero, max_rel_error(&at(&vec![0.0; k]), &vec![0.0; k]), &x);
                let uw: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
                let split: Vec<f64> = at(&u).iter().zip(at(&w)).map(|(a, b)| a + b).collect();
                record(&mut sum, max_rel_error(&at(&uw), &split), &x);
                // λ T(φ) = φ λ at (x, u)
                let xu = [x.clone(), u.clone()].concat();
                let lhs = tangent_map(&phi).eval(&lam(&xu));
                let rhs = phi.eval(&xu).map(|e| lam(&e));
                if let (Ok(l), Ok(r)) = (lhs, rhs) {
                    record(&mut lift, max_rel_error(&l, &r), &x);
                }
            }
        }
        let mut out = Vec::new();
        invertible.holds = invertible.witness.is_none() && invertible.points > 0;
        for (name, mut a) in [
            ("cocycle_invertible", invertible),
            ("cocycle_condition", cocycle),
            ("cocycle_zero_preserved", zero),
            ("cocycle_sum_linear", sum),
            ("cocycle_lift_compatible", lift),
        ] {
            if name != "cocycle_invertible" {
                a.holds = a.max_error <= tol;
            }
            out.push((name.to_string(), a));
        }
        out
    }

    /// `T(E)` over `T(M)`: fibre coordinates `(u, du)`, transitions
    /// `[[G, 0], [DG·dx, G]]`.
    pub fn tangent(&self) -> CocycleBundle {
        let (n, k) = (self.atlas.dim, self.fibre_dim);
        let base = SmoothMap::block(2 * n, 0, n);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let g = self.matrix(e);
                let mut m = vec![vec![Expr::zero(); 2 * k]; 2 * k];
                for a in 0..k {
                    for b in 0..k {
                        m[a][b] = g[a][b].clone();
                        m[k + a][k + b] = g[a][b].clone();
                        m[k + a][b] = Expr::sum((0..n).map(|i| g[a][b].partial(i).mul(&Expr::var(n + i))));
                    }
                }
                CocycleEntry {
                    from: e.from,
                    to: e.to,
                    region: e.region.iter().copied().chain(std::iter::repeat_n((-UNBOUNDED, UNBOUNDED), n)).collect(),
                    guards: e.guards.iter().map(|g| g.after(&base).unwrap()).collect(),
                    matrix: m,
                }
            })
            .collect();
        CocycleBundle {
            name: format!("T({})", self.display_name()),
            atlas: Arc::new(self.atlas.tangent()),
            fibre_dim: 2 * k,
            entries,
            dual: false,
        }
    }

    /// `f*E` over the refinement of `f`'s source by its representatives:
    /// one chart per representative, transitions `G(f(x))`.
    pub fn pullback(&self, f: &ManifoldMap) -> Result<CocycleBundle> {
        if f.target.name != self.atlas.name {
            return Err(Error::BaseMismatch(format!("{} is over {}, map lands in {}", self.name, self.atlas.name, f.target.name)));
        }
        let src = &f.source;
        let n = src.dim;
        let mut charts = Vec::new();
        for (i, r) in f.reps.iter().enumerate() {
            let mut guards = src.charts[r.from].guards.clone();
            guards.extend(r.guards.iter().cloned());
            guards.push(Guard { map: r.map.clone(), region: self.atlas.charts[r.to].region.clone() });
            for g in &self.atlas.charts[r.to].guards {
                guards.push(g.after(&r.map)?);
            }
            let region = r.region.iter().zip(&src.charts[r.from].region).map(|(a, b)| (a.0.max(b.0), a.1.min(b.1))).collect();
            charts.push(Chart { id: format!("{}:{}", i, src.charts[r.from].id), region, guards });
        }
        let mut transitions = Vec::new();
        let mut entries = Vec::new();
        for (i, r) in f.reps.iter().enumerate() {
            for (j, r2) in f.reps.iter().enumerate() {
                if i == j {
                    continue;
                }
                let pieces: Vec<(Region, Vec<Guard>, SmoothMap)> = if r.from == r2.from {
                    vec![(charts[i].region.clone(), Vec::new(), SmoothMap::identity(n))]
                } else {
                    src.transitions
                        .iter()
                        .filter(|t| t.from == r.from && t.to == r2.from)
                        .map(|t| (t.region.clone(), t.guards.clone(), t.map.clone()))
                        .collect()
                };
                for (region, guards, tau) in pieces {
                    transitions.push(Patch::new(i, j, region.clone(), guards.clone(), tau));
                    let bundle: Vec<(Region, Vec<Guard>, Vec<Vec<Expr>>)> = if r.to == r2.to {
                        let id =
                            (0..self.fibre_dim).map(|a| (0..self.fibre_dim).map(|b| Expr::integer(i64::from(a == b))).collect()).collect();
                        vec![(self.atlas.charts[r.to].region.clone(), Vec::new(), id)]
                    } else {
                        self.entries
                            .iter()
                            .filter(|e| e.from == r.to && e.to == r2.to)
                            .map(|e| (e.region.clone(), e.guards.clone(), self.matrix(e)))
                            .collect()
                    };
                    for (b_region, b_guards, g) in bundle {
                        let mut eg = guards.clone();
                        eg.push(Guard { map: r.map.clone(), region: b_region });
                        for g in &b_guards {
                            eg.push(g.after(&r.map)?);
                        }
                        let images = r.map.components().to_vec();
                        let matrix = g.iter().map(|row| row.iter().map(|e| e.substitute(&images)).collect()).collect();
                        entries.push(CocycleEntry { from: i, to: j, region: region.clone(), guards: eg, matrix });
                    }
                }
            }
        }
        let atlas = Atlas::new(format!("{} refined by {}", src.name, f.name), n, charts, transitions)?;
        CocycleBundle::new(format!("{}*({})", f.name, self.display_name()), Arc::new(atlas), self.fibre_dim, entries)
    }
}
