//! JSON formats for atlases, manifold maps, covector fields and metrics.
//!
//! Files that refer to an atlas give either a path (relative to the referring
//! file) or one of `builtin:circle`, `builtin:sphere`, `builtin:torus`,
//! `builtin:R<n>`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::smooth::SmoothMap;

use crate::bundle::{CocycleBundle, CocycleEntry};

use super::atlas::{Atlas, Chart, Patch, Region};
use super::field::CovectorField;
use super::library;
use super::map::ManifoldMap;
use super::optimize::Metric;

/// Seed and sample count for validating loaded artifacts.
pub const LOAD_SEED: u64 = 42;
pub const LOAD_SAMPLES: usize = 50;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtlasFile {
    #[serde(default)]
    name: Option<String>,
    dim: usize,
    charts: Vec<ChartEntry>,
    #[serde(default)]
    transitions: Vec<TransitionEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartEntry {
    id: String,
    #[serde(rename = "box")]
    region: Region,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionEntry {
    from: String,
    to: String,
    map: String,
    overlap_box: Region,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default)]
    name: Option<String>,
    source: String,
    target: String,
    representatives: Vec<RepEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepEntry {
    from: String,
    to: String,
    #[serde(rename = "box")]
    region: Region,
    map: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    atlas: String,
    components: Vec<ChartMap>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartMap {
    chart: String,
    map: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    #[serde(default)]
    name: Option<String>,
    atlas: String,
    fibre_dim: usize,
    transitions: Vec<BundleEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleEntry {
    from: String,
    to: String,
    #[serde(rename = "box")]
    region: Region,
    /// `n → k²`, row-major.
    matrix: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MetricFile {
    Named(String),
    Charts { charts: Vec<ChartMap> },
}

fn format_error(file: &str, message: impl Into<String>) -> Error {
    Error::Format { file: file.to_string(), message: message.into() }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format_error(&path.display().to_string(), e.to_string()))
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str, file: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| format_error(file, format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn parse_in(source: &str, file: &str, what: &str) -> Result<SmoothMap> {
    SmoothMap::parse(source).map_err(|e| match e {
        Error::Syntax { .. } => format_error(file, format!("{what}: {e}")),
        other => other,
    })
}

fn chart_of(atlas: &Atlas, id: &str, file: &str) -> Result<usize> {
    atlas.chart_index(id).ok_or_else(|| format_error(file, format!("unknown chart {id:?} in {}", atlas.name)))
}

/// Parses and validates an atlas.
pub fn parse_atlas(text: &str, file: &str) -> Result<Atlas> {
    let raw: AtlasFile = decode(text, file)?;
    let charts: Vec<Chart> = raw.charts.into_iter().map(|c| Chart::new(c.id, c.region)).collect();
    let name = raw.name.unwrap_or_else(|| file.to_string());
    let lookup = |id: &str| charts.iter().position(|c| c.id == id).ok_or_else(|| format_error(file, format!("unknown chart {id:?}")));
    let mut transitions = Vec::new();
    for (k, t) in raw.transitions.iter().enumerate() {
        let map = parse_in(&t.map, file, &format!("transition {k}"))?;
        transitions.push(Patch::new(lookup(&t.from)?, lookup(&t.to)?, t.overlap_box.clone(), Vec::new(), map));
    }
    let atlas = Atlas::new(name, raw.dim, charts, transitions)?;
    atlas.validate(LOAD_SEED, LOAD_SAMPLES)?;
    Ok(atlas)
}

pub fn load_atlas(path: &Path) -> Result<Atlas> {
    parse_atlas(&read(path)?, &path.display().to_string())
}

/// Resolves an atlas reference made from `referrer`.
pub fn resolve_atlas(reference: &str, referrer: &Path) -> Result<Arc<Atlas>> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        let atlas = match name {
            "circle" => library::circle(),
            "sphere" => library::sphere(),
            "torus" => library::torus(),
            _ => match name.strip_prefix('R').and_then(|n| n.parse().ok()) {
                Some(n) => library::euclidean(n),
                None => return Err(format_error(&referrer.display().to_string(), format!("unknown builtin atlas {name:?}"))),
            },
        };
        return Ok(Arc::new(atlas));
    }
    let dir = referrer.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    load_atlas(&dir.join(reference)).map(Arc::new)
}

/// Loads a manifold map and checks that its representatives agree on overlaps.
pub fn load_map(path: &Path) -> Result<ManifoldMap> {
    let file = path.display().to_string();
    let raw: MapFile = decode(&read(path)?, &file)?;
    let source = resolve_atlas(&raw.source, path)?;
    let target = resolve_atlas(&raw.target, path)?;
    let mut reps = Vec::new();
    for (k, r) in raw.representatives.iter().enumerate() {
        let map = parse_in(&r.map, &file, &format!("representative {k}"))?;
        reps.push(Patch::new(chart_of(&source, &r.from, &file)?, chart_of(&target, &r.to, &file)?, r.region.clone(), Vec::new(), map));
    }
    let name = raw.name.unwrap_or_else(|| file.clone());
    let f = ManifoldMap::new(name, source, target, reps)?;
    let agreement = f.verify(LOAD_SEED, LOAD_SAMPLES, 1e-9);
    if !agreement.holds {
        return Err(Error::invariant("map_overlap_agreement", format!("{file}: witness {:?}", agreement.witness)));
    }
    Ok(f)
}

fn per_chart(atlas: &Atlas, entries: &[ChartMap], file: &str) -> Result<Vec<SmoothMap>> {
    let mut maps: Vec<Option<SmoothMap>> = vec![None; atlas.charts.len()];
    for (k, e) in entries.iter().enumerate() {
        maps[chart_of(atlas, &e.chart, file)?] = Some(parse_in(&e.map, file, &format!("entry {k}"))?);
    }
    maps.into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| format_error(file, format!("no entry for chart {}", atlas.charts[i].id))))
        .collect()
}

pub fn load_field(path: &Path) -> Result<CovectorField> {
    let file = path.display().to_string();
    let raw: FieldFile = decode(&read(path)?, &file)?;
    let atlas = resolve_atlas(&raw.atlas, path)?;
    let comps = per_chart(&atlas, &raw.components, &file)?;
    let field = CovectorField::from_charts(atlas, comps)?;
    let agreement = field.verify(LOAD_SEED, LOAD_SAMPLES, 1e-9);
    if !agreement.holds {
        return Err(Error::invariant("field_overlap_compatibility", format!("{file}: witness {:?}", agreement.witness)));
    }
    Ok(field)
}

/// `"euclidean"` or `{"charts": [{"chart", "map"}]}` with maps `n → n²`.
pub fn load_metric(path: &Path, atlas: Arc<Atlas>) -> Result<Metric> {
    let file = path.display().to_string();
    let metric = match decode::<MetricFile>(&read(path)?, &file)? {
        MetricFile::Named(name) if name == "euclidean" => Metric::euclidean(atlas),
        MetricFile::Named(name) => return Err(format_error(&file, format!("unknown metric {name:?}"))),
        MetricFile::Charts { charts } => {
            let comps = per_chart(&atlas, &charts, &file)?;
            Metric::new(atlas, comps)?
        }
    };
    let spd = metric.verify(LOAD_SEED, LOAD_SAMPLES);
    if !spd.holds {
        return Err(Error::invariant("metric_positive_definite", format!("{file}: witness {:?}", spd.witness)));
    }
    Ok(metric)
}

/// Loads a cocycle bundle and checks its axioms.
pub fn load_bundle(path: &Path) -> Result<CocycleBundle> {
    let file = path.display().to_string();
    let raw: BundleFile = decode(&read(path)?, &file)?;
    let atlas = resolve_atlas(&raw.atlas, path)?;
    let k = raw.fibre_dim;
    let mut entries = Vec::new();
    for (i, e) in raw.transitions.iter().enumerate() {
        let m = parse_in(&e.matrix, &file, &format!("transition {i}"))?;
        if m.dom() != atlas.dim || m.cod() != k * k {
            return Err(Error::dim(format!("{file}: transition {i} matrix entries"), k * k, m.cod()));
        }
        let matrix = m.components().chunks(k.max(1)).map(<[_]>::to_vec).collect();
        entries.push(CocycleEntry {
            from: chart_of(&atlas, &e.from, &file)?,
            to: chart_of(&atlas, &e.to, &file)?,
            region: e.region.clone(),
            guards: Vec::new(),
            matrix,
        });
    }
    let bundle = CocycleBundle::new(raw.name.unwrap_or_else(|| file.clone()), atlas, k, entries)?;
    for (name, a) in bundle.verify_axioms(LOAD_SEED, LOAD_SAMPLES, 1e-9) {
        if !a.holds {
            return Err(Error::invariant(name, format!("{file}: witness {:?}", a.witness)));
        }
    }
    Ok(bundle)
}
