//! Covector fields (sections of the cotangent projection) and their pullback.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::reverse::reverse_tangent_map;
use crate::sample::{max_rel_error, Agreement, Method, Sampler};
use crate::smooth::SmoothMap;

use super::atlas::{in_region, sample_region, Atlas, Guard, Region};
use super::map::ManifoldMap;
use super::point::{ChangeChart, Covector, ManifoldPoint};

/// A local section `x ↦ (x, ω(x))` valid on a box of one chart.
#[derive(Clone, Debug)]
pub struct FieldPiece {
    pub chart: usize,
    pub region: Region,
    pub guards: Vec<Guard>,
    /// `n → 2n`, first block the identity.
    pub section: SmoothMap,
}

impl FieldPiece {
    pub fn covers(&self, x: &[f64]) -> bool {
        in_region(&self.region, x) && self.guards.iter().all(|g| g.admits(x))
    }

    /// The covector components `ω(x)` as a map `n → n`.
    pub fn components(&self) -> SmoothMap {
        let n = self.section.dom();
        SmoothMap::new(n, self.section.components()[n..].to_vec()).unwrap()
    }

    /// Projecting the section to the base gives back the point, exactly.
    pub fn section_law(&self) -> bool {
        let n = self.section.dom();
        self.section.then(&SmoothMap::block(2 * n, 0, n)).unwrap().structurally_equal(&SmoothMap::identity(n))
    }
}

#[derive(Clone, Debug)]
pub struct CovectorField {
    pub atlas: Arc<Atlas>,
    pub pieces: Vec<FieldPiece>,
}

impl CovectorField {
    /// One component map `n → n` per chart.
    pub fn from_charts(atlas: Arc<Atlas>, components: Vec<SmoothMap>) -> Result<Self> {
        if components.len() != atlas.charts.len() {
            return Err(Error::dim("covector field charts", atlas.charts.len(), components.len()));
        }
        let n = atlas.dim;
        let mut pieces = Vec::new();
        for (i, w) in components.into_iter().enumerate() {
            if w.dom() != n || w.cod() != n {
                return Err(Error::dim("covector field components", n, w.cod()));
            }
            let section = SmoothMap::pairing(&[&SmoothMap::identity(n), &w])?;
            let c = &atlas.charts[i];
            pieces.push(FieldPiece { chart: i, region: c.region.clone(), guards: c.guards.clone(), section });
        }
        Ok(CovectorField { atlas, pieces })
    }

    /// `ω(p)`, in `p`'s chart.
    pub fn at(&self, p: &ManifoldPoint) -> Result<Covector> {
        let mut order = vec![p.chart];
        order.extend((0..self.atlas.charts.len()).filter(|&c| c != p.chart));
        for c in order {
            let Ok(x) = p.change_chart(&self.atlas, c) else { continue };
            for piece in self.pieces.iter().filter(|w| w.chart == c && w.covers(&x.coords)) {
                let Ok(w) = piece.components().eval(&x.coords) else { continue };
                return Covector::new(x, w).change_chart(&self.atlas, p.chart);
            }
        }
        Err(Error::NoRepresentative(format!("covector field at {:?}", p.coords)))
    }

    pub fn section_law(&self) -> bool {
        self.pieces.iter().all(FieldPiece::section_law)
    }

    /// Pieces agree on overlaps through `(Jᵀ)⁻¹`.
    pub fn verify(&self, seed: u64, samples: usize, tol: f64) -> Agreement {
        let mut sampler = Sampler::new(seed);
        let mut a = Agreement { tolerance: tol, ..Agreement::exact(Method::Numeric, true) };
        for piece in &self.pieces {
            for _ in 0..samples {
                let x = sample_region(&mut sampler, &piece.region);
                if !piece.covers(&x) || !self.atlas.charts[piece.chart].contains(&x) {
                    continue;
                }
                let Ok(w) = piece.components().eval(&x) else { continue };
                let here = Covector::new(ManifoldPoint { chart: piece.chart, coords: x.clone() }, w);
                for other in &self.pieces {
                    let Ok(moved) = here.change_chart(&self.atlas, other.chart) else { continue };
                    if !other.covers(&moved.base.coords) {
                        continue;
                    }
                    let Ok(w2) = other.components().eval(&moved.base.coords) else { continue };
                    a.points += 1;
                    let err = max_rel_error(&moved.components, &w2);
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

    /// `f*ω = ⟨1, fω⟩ T*(f)`, one piece per representative and matching
    /// piece of `ω`.
    pub fn pullback(&self, f: &ManifoldMap) -> Result<CovectorField> {
        if f.target.name != self.atlas.name {
            return Err(Error::BaseMismatch(format!("field lives on {}, map lands in {}", self.atlas.name, f.target.name)));
        }
        let n = f.source.dim;
        let mut pieces = Vec::new();
        for r in &f.reps {
            for w in self.pieces.iter().filter(|w| w.chart == r.to) {
                let mut guards = r.guards.clone();
                guards.push(Guard { map: r.map.clone(), region: self.atlas.charts[r.to].region.clone() });
                for g in self.atlas.charts[r.to].guards.iter().chain(&w.guards) {
                    guards.push(g.after(&r.map)?);
                }
                guards.push(Guard { map: r.map.clone(), region: w.region.clone() });
                let fw = r.map.then(&w.components())?;
                let section = SmoothMap::pairing(&[&SmoothMap::identity(n), &fw])?.then(&reverse_tangent_map(&r.map))?;
                pieces.push(FieldPiece { chart: r.from, region: r.region.clone(), guards, section });
            }
        }
        Ok(CovectorField { atlas: f.source.clone(), pieces })
    }
}
