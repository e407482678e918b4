//! The tangent-structure law list, stated once over any model that supplies
//! `T`, its pullback powers, and the structure maps.
//!
//! Coordinates follow the Euclidean reading: `T₂` is `(x, v, w)`, `T₃` is
//! `(x, a, b, c)`, and `T²` is `(x, v, w, u)` with `(w, u)` the outer
//! tangent direction.

use crate::error::Result;
use crate::sample::{Agreement, Compare};
use crate::smooth::SmoothMap;
use crate::tangent::{tangent_map, tangent_pullback_map, TangentStructureMaps};

pub trait TangentModel {
    type Obj: Clone;
    type Map: Clone;

    fn source(&self, f: &Self::Map) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Map;
    /// First `f`, then `g`.
    fn then(&self, f: &Self::Map, g: &Self::Map) -> Result<Self::Map>;
    fn compare(&self, f: &Self::Map, g: &Self::Map) -> Agreement;

    fn tangent_obj(&self, a: &Self::Obj) -> Self::Obj;
    /// `T(f)`
    fn tangent(&self, f: &Self::Map) -> Self::Map;
    /// `T₂(f)`
    fn tangent_pullback(&self, f: &Self::Map) -> Self::Map;

    /// `p: T → 1`
    fn p(&self, a: &Self::Obj) -> Self::Map;
    /// `z: 1 → T`
    fn z(&self, a: &Self::Obj) -> Self::Map;
    /// `s: T₂ → T`
    fn s(&self, a: &Self::Obj) -> Self::Map;
    /// `ℓ: T → T²`
    fn l(&self, a: &Self::Obj) -> Self::Map;
    /// `c: T² → T²`
    fn c(&self, a: &Self::Obj) -> Self::Map;

    /// Pullback projection `πᵢ: T₂ → T`.
    fn pi(&self, a: &Self::Obj, i: usize) -> Self::Map;
    /// `⟨1, pz⟩: T → T₂`
    fn unit_pair(&self, a: &Self::Obj) -> Self::Map;
    /// `⟨π₁, π₀⟩: T₂ → T₂`
    fn swap(&self, a: &Self::Obj) -> Self::Map;
    /// `s × 1: T₃ → T₂`
    fn sum_left(&self, a: &Self::Obj) -> Self::Map;
    /// `1 × s: T₃ → T₂`
    fn sum_right(&self, a: &Self::Obj) -> Self::Map;
}

fn chain<M: TangentModel>(m: &M, maps: &[M::Map]) -> Result<M::Map> {
    let mut acc = maps[0].clone();
    for g in &maps[1..] {
        acc = m.then(&acc, g)?;
    }
    Ok(acc)
}

fn law<M: TangentModel>(m: &M, lhs: Result<M::Map>, rhs: Result<M::Map>) -> Agreement {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => m.compare(&l, &r),
        (Err(e), _) | (_, Err(e)) => Agreement::failed(format!("ill-typed composite: {e}")),
    }
}

/// Laws at one object, by name.
pub fn object_laws<M: TangentModel>(m: &M, a: &M::Obj) -> Vec<(&'static str, Agreement)> {
    let ta = m.tangent_obj(a);
    let (p, z, s, l, c) = (m.p(a), m.z(a), m.s(a), m.l(a), m.c(a));
    let tp = m.tangent(&p);
    vec![
        ("zero_section", law(m, chain(m, &[z.clone(), p.clone()]), Ok(m.identity(a)))),
        ("sum_over_base", law(m, chain(m, &[s.clone(), p.clone()]), chain(m, &[m.pi(a, 0), p.clone()]))),
        ("sum_over_base_second", law(m, chain(m, &[s.clone(), p.clone()]), chain(m, &[m.pi(a, 1), p.clone()]))),
        ("sum_commutative", law(m, chain(m, &[m.swap(a), s.clone()]), Ok(s.clone()))),
        ("sum_unit", law(m, chain(m, &[m.unit_pair(a), s.clone()]), Ok(m.identity(&ta)))),
        ("sum_associative", law(m, chain(m, &[m.sum_left(a), s.clone()]), chain(m, &[m.sum_right(a), s.clone()]))),
        ("lift_flip", law(m, chain(m, &[l.clone(), c.clone()]), Ok(l.clone()))),
        ("flip_involution", law(m, chain(m, &[c.clone(), c.clone()]), Ok(m.identity(&m.tangent_obj(&ta))))),
        ("lift_vertical", law(m, chain(m, &[l.clone(), m.p(&ta)]), chain(m, &[p.clone(), z.clone()]))),
        ("lift_tangent_projection", law(m, chain(m, &[l.clone(), tp.clone()]), chain(m, &[p.clone(), z.clone()]))),
        ("lift_zero", law(m, chain(m, &[z.clone(), l.clone()]), chain(m, &[z.clone(), m.z(&ta)]))),
        ("flip_projection", law(m, chain(m, &[c.clone(), m.p(&ta)]), Ok(tp))),
    ]
}

/// Naturality of every structure map, and `T(1) = 1`, against `f`.
pub fn map_laws<M: TangentModel>(m: &M, f: &M::Map, target: &M::Obj) -> Vec<(&'static str, Agreement)> {
    let a = m.source(f);
    let b = target;
    let tf = m.tangent(f);
    let ttf = m.tangent(&tf);
    let t2f = m.tangent_pullback(f);
    vec![
        ("functor_identity", law(m, Ok(m.tangent(&m.identity(&a))), Ok(m.identity(&m.tangent_obj(&a))))),
        ("p_natural", law(m, chain(m, &[tf.clone(), m.p(b)]), chain(m, &[m.p(&a), f.clone()]))),
        ("z_natural", law(m, chain(m, &[f.clone(), m.z(b)]), chain(m, &[m.z(&a), tf.clone()]))),
        ("s_natural", law(m, chain(m, &[t2f, m.s(b)]), chain(m, &[m.s(&a), tf.clone()]))),
        ("l_natural", law(m, chain(m, &[tf, m.l(b)]), chain(m, &[m.l(&a), ttf.clone()]))),
        ("c_natural", law(m, chain(m, &[ttf.clone(), m.c(b)]), chain(m, &[m.c(&a), ttf]))),
    ]
}

/// `T(fg) = T(f)T(g)`.
pub fn functor_composition<M: TangentModel>(m: &M, f: &M::Map, g: &M::Map) -> Agreement {
    law(m, m.then(f, g).map(|fg| m.tangent(&fg)), m.then(&m.tangent(f), &m.tangent(g)))
}

/// Euclidean spaces and smooth maps, with the target dimension read off the
/// map.
pub struct Smooth {
    pub cmp: Compare,
}

impl TangentModel for Smooth {
    type Obj = usize;
    type Map = SmoothMap;

    fn source(&self, f: &SmoothMap) -> usize {
        f.dom()
    }

    fn identity(&self, a: &usize) -> SmoothMap {
        SmoothMap::identity(*a)
    }

    fn then(&self, f: &SmoothMap, g: &SmoothMap) -> Result<SmoothMap> {
        f.then(g)
    }

    fn compare(&self, f: &SmoothMap, g: &SmoothMap) -> Agreement {
        self.cmp.maps(f, g)
    }

    fn tangent_obj(&self, a: &usize) -> usize {
        2 * a
    }

    fn tangent(&self, f: &SmoothMap) -> SmoothMap {
        tangent_map(f)
    }

    fn tangent_pullback(&self, f: &SmoothMap) -> SmoothMap {
        tangent_pullback_map(f)
    }

    fn p(&self, a: &usize) -> SmoothMap {
        TangentStructureMaps::new(*a).p
    }

    fn z(&self, a: &usize) -> SmoothMap {
        TangentStructureMaps::new(*a).z
    }

    fn s(&self, a: &usize) -> SmoothMap {
        TangentStructureMaps::new(*a).s
    }

    fn l(&self, a: &usize) -> SmoothMap {
        TangentStructureMaps::new(*a).l
    }

    fn c(&self, a: &usize) -> SmoothMap {
        TangentStructureMaps::new(*a).c
    }

    fn pi(&self, a: &usize, i: usize) -> SmoothMap {
        let n = *a;
        let idx: Vec<usize> = (0..n).chain((1 + i) * n..(2 + i) * n).collect();
        SmoothMap::select(3 * n, &idx)
    }

    fn unit_pair(&self, a: &usize) -> SmoothMap {
        let n = *a;
        let z = SmoothMap::zero(2 * n, n);
        SmoothMap::pairing(&[&SmoothMap::identity(2 * n), &z]).unwrap()
    }

    fn swap(&self, a: &usize) -> SmoothMap {
        let n = *a;
        let idx: Vec<usize> = (0..n).chain(2 * n..3 * n).chain(n..2 * n).collect();
        SmoothMap::select(3 * n, &idx)
    }

    fn sum_left(&self, a: &usize) -> SmoothMap {
        let n = *a;
        let x = SmoothMap::block(4 * n, 0, n);
        let ab = SmoothMap::block(4 * n, n, n).add(&SmoothMap::block(4 * n, 2 * n, n)).unwrap();
        SmoothMap::pairing(&[&x, &ab, &SmoothMap::block(4 * n, 3 * n, n)]).unwrap()
    }

    fn sum_right(&self, a: &usize) -> SmoothMap {
        let n = *a;
        let x = SmoothMap::block(4 * n, 0, n);
        let bc = SmoothMap::block(4 * n, 2 * n, n).add(&SmoothMap::block(4 * n, 3 * n, n)).unwrap();
        SmoothMap::pairing(&[&x, &SmoothMap::block(4 * n, n, n), &bc]).unwrap()
    }
}
