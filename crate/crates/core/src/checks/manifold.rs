//! Chart manifolds: atlases, cotangent maps, covector fields, étale maps and
//! the gradient demo.

use std::sync::Arc;

use crate::manifold::atlas::sample_region;
use crate::manifold::library::{
    angle_form, antipodal, circle, constant_circle_map, double_cover, height, height_form, rotation, sphere, sphere_embedding,
    sphere_point_from_north, torus,
};
use crate::manifold::{optimize, Atlas, ChangeChart, Covector, CovectorField, ManifoldMap, ManifoldPoint, Metric, TangentVec};
use crate::sample::{Agreement, Method, Sampler};
use crate::scalar::rat;

use super::{sampled, CheckConfig, CheckEntry, Recorder};

const FIELDS: &str = "covector field";
const ETALE: &str = "étale map";

/// Seeded points spread over all charts.
fn points(atlas: &Atlas, seed: u64, count: usize) -> Vec<ManifoldPoint> {
    let mut sampler = Sampler::new(seed);
    (0..count)
        .map(|i| {
            let chart = i % atlas.charts.len();
            ManifoldPoint { chart, coords: sample_region(&mut sampler, &atlas.charts[chart].region) }
        })
        .collect()
}

fn covector_rows(a: &CovectorField, b: &CovectorField, pts: &[ManifoldPoint], scale: f64) -> Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    pts.iter()
        .filter_map(|p| {
            let (x, y) = (a.at(p).ok()?, b.at(p).ok()?);
            Some((p.coords.clone(), x.components, y.components.iter().map(|c| scale * c).collect()))
        })
        .collect()
}

pub(super) fn suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("manifold", cfg.seed);
    let c = Arc::new(circle());
    let s = Arc::new(sphere());
    let t = Arc::new(torus());

    for atlas in [&c, &s, &t] {
        for (law, a) in atlas.verify(cfg.seed, cfg.points, cfg.tol, crate::manifold::map::DET_FLOOR) {
            r.record(&law, &atlas.name, "atlas", a);
        }
    }

    let dc = double_cover(c.clone());
    let rot = rotation(c.clone(), rat(1, 8));
    let anti = antipodal(s.clone());
    let h = height(s.clone());
    for m in [&dc, &rot, &anti, &h] {
        r.record("map_overlap_agreement", &m.name, "manifold map", m.verify(cfg.seed, cfg.points, cfg.tol));
    }

    // ⟨f*φ, v⟩ = ⟨φ, f_* v⟩
    let mut sampler = Sampler::new(cfg.seed);
    for (f, atlas) in [(&dc, &c), (&anti, &s)] {
        let rows: Vec<_> = points(atlas, cfg.seed, cfg.points)
            .into_iter()
            .filter_map(|x| {
                let v = TangentVec::new(x.clone(), sampler.point(atlas.dim, -3.0, 3.0));
                let fv = f.tangent(&v).ok()?;
                let phi = Covector::new(fv.base.clone(), sampler.point(atlas.dim, -3.0, 3.0));
                let pulled = f.cotangent(&x, &phi).ok()?;
                Some((x.coords.clone(), vec![pulled.pair(&v)], vec![phi.pair(&fv)]))
            })
            .collect();
        r.record("duality_pairing", &f.name, "cotangent map", sampled(cfg.tight_tol, rows));
    }

    // points in a single chart are skipped, so draw spares
    for atlas in [&c, &s, &t] {
        let rows: Vec<_> = points(atlas, cfg.seed, 4 * cfg.points)
            .into_iter()
            .filter_map(|x| {
                let other = atlas.charts_at(x.chart, &x.coords).into_iter().map(|(k, _)| k).find(|&k| k != x.chart)?;
                let phi = Covector::new(x.clone(), sampler.point(atlas.dim, -3.0, 3.0));
                let back = phi.change_chart(atlas, other).ok()?.change_chart(atlas, x.chart).ok()?;
                Some((x.coords.clone(), back.components, phi.components))
            })
            .take(cfg.points)
            .collect();
        r.record("covector_round_trip", &atlas.name, "change of chart", sampled(cfg.tol, rows));
    }

    let w = angle_form(c.clone());
    let dz = height_form(s.clone());
    r.record("field_overlap_compatibility", "dtheta", FIELDS, w.verify(cfg.seed, cfg.points, cfg.tol));
    r.record("field_overlap_compatibility", "dz", FIELDS, dz.verify(cfg.seed, cfg.points, cfg.tol));
    let circle_pts = points(&c, cfg.seed, cfg.points);
    let sphere_pts = points(&s, cfg.seed, cfg.points);
    match (w.pullback(&dc), w.pullback(&rot), dc.then(&rot), anti.then(&anti)) {
        (Ok(w_dc), Ok(w_rot), Ok(dc_rot), Ok(anti2)) => {
            r.record("pullback_doubles_angle", "", FIELDS, sampled(cfg.chart_tol, covector_rows(&w_dc, &w, &circle_pts, 2.0)));
            r.record("pullback_rotation_invariant", "", FIELDS, sampled(cfg.chart_tol, covector_rows(&w_rot, &w, &circle_pts, 1.0)));
            let mut outputs: Vec<(&str, Result<CovectorField, crate::Error>)> = vec![
                ("dtheta;double_cover", Ok(w_dc.clone())),
                ("dtheta;rotation", Ok(w_rot.clone())),
                ("dtheta;double_cover;rotation", w.pullback(&dc_rot)),
                ("dtheta;rotation;double_cover", w_rot.pullback(&dc)),
                ("dz;antipodal", dz.pullback(&anti)),
                ("dz;antipodal;antipodal", dz.pullback(&anti2)),
            ];
            outputs.push(("dz;antipodal;then_antipodal", dz.pullback(&anti).and_then(|x| x.pullback(&anti))));
            for (case, field) in &outputs {
                match field {
                    Ok(f) => r.exact("pullback_section_law", case, FIELDS, f.section_law()),
                    Err(e) => r.error("pullback_section_law", case, FIELDS, e),
                }
            }
            let find = |name: &str| outputs.iter().find(|(n, _)| *n == name).and_then(|(_, f)| f.as_ref().ok());
            if let (Some(once), Some(twice)) = (find("dtheta;double_cover;rotation"), find("dtheta;rotation;double_cover")) {
                r.record("pullback_functorial", "circle", FIELDS, sampled(cfg.tol, covector_rows(once, twice, &circle_pts, 1.0)));
            }
            if let (Some(once), Some(twice)) = (find("dz;antipodal;antipodal"), find("dz;antipodal;then_antipodal")) {
                r.record("pullback_functorial", "sphere", FIELDS, sampled(cfg.tol, covector_rows(once, twice, &sphere_pts, 1.0)));
                r.record("pullback_involution", "sphere", FIELDS, sampled(cfg.tol, covector_rows(once, &dz, &sphere_pts, 1.0)));
            }
        }
        _ => r.record("pullback_doubles_angle", "", FIELDS, Agreement::failed("pullback or composite failed")),
    }

    etale_checks(&mut r, cfg, &c, &dc, &rot);

    let metric = Metric::euclidean(s.clone());
    r.record("metric_positive_definite", "euclidean", "metric", metric.verify(cfg.seed, cfg.points));
    r.record("optimizer_height", "", "metric-gradient descent", optimizer_demo(&h, &metric));
    r.entries
}

fn etale_checks(r: &mut Recorder, cfg: &CheckConfig, c: &Arc<Atlas>, dc: &ManifoldMap, rot: &ManifoldMap) {
    let report = dc.is_etale(cfg.seed, cfg.points, crate::manifold::map::DET_FLOOR);
    r.record(
        "etale",
        "double_cover",
        ETALE,
        Agreement {
            points: report.points,
            max_error: (report.min_det - 2.0).abs(),
            ..Agreement::exact(Method::Numeric, report.etale && report.min_det == 2.0)
        },
    );
    r.exact("etale", "rotation", ETALE, rot.is_etale(cfg.seed, cfg.points, crate::manifold::map::DET_FLOOR).etale);
    let constant = constant_circle_map(c.clone(), rat(1, 4));
    r.exact("not_etale", "constant", ETALE, !constant.is_etale(cfg.seed, cfg.points, crate::manifold::map::DET_FLOOR).etale);

    let Ok(fg) = dc.then(rot) else {
        r.record("etale_functorial", "double_cover;rotation", ETALE, Agreement::failed("composite failed"));
        return;
    };
    let mut sampler = Sampler::new(cfg.seed);
    let mut rows = Vec::new();
    let mut bases = true;
    let mut inverse = Vec::new();
    for x in points(c, cfg.seed, cfg.points) {
        let phi = Covector::new(x.clone(), vec![sampler.point(1, -3.0, 3.0)[0]]);
        let (Ok(direct), Ok(step)) = (fg.etale_cotangent(&phi), dc.etale_cotangent(&phi).and_then(|p| rot.etale_cotangent(&p))) else {
            continue;
        };
        let Ok(step) = step.change_chart(c, direct.base.chart) else { continue };
        bases &= direct.base.same_as(c, &step.base, cfg.chart_tol);
        rows.push((x.coords.clone(), direct.components.clone(), step.components.clone()));
        // f*(T̂*(f)(φ)) = φ
        if let Ok(back) = dc.etale_cotangent(&phi).and_then(|up| dc.cotangent(&x, &up)) {
            inverse.push((x.coords.clone(), back.components, phi.components.clone()));
        }
    }
    let mut a = sampled(cfg.chart_tol, rows);
    if !bases {
        a.holds = false;
        a.note = Some("base points differ".into());
    }
    r.record("etale_functorial", "double_cover;rotation", ETALE, a);
    r.record("etale_cotangent_inverts_cotangent", "double_cover", ETALE, sampled(cfg.chart_tol, inverse));
}

fn optimizer_demo(h: &ManifoldMap, metric: &Metric) -> Agreement {
    const ITERS: usize = 500;
    match optimize(h, metric, sphere_point_from_north(0.1), 0.1, ITERS, 0.0) {
        Ok(trace) => {
            let e = sphere_embedding(trace.last());
            let dist = (e[0] * e[0] + e[1] * e[1] + (e[2] + 1.0).powi(2)).sqrt();
            let holds = dist < 1e-6 && trace.monotone() && trace.points.len() <= ITERS + 1;
            Agreement {
                method: Method::Numeric,
                holds,
                points: trace.points.len() - 1,
                max_error: dist,
                tolerance: 1e-6,
                witness: if holds { None } else { Some(trace.last().coords.clone()) },
                note: if trace.monotone() { None } else { Some("objective increased".into()) },
            }
        }
        Err(e) => Agreement::failed(e.to_string()),
    }
}
