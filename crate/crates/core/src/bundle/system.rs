//! A system of differential bundles: a registry that contains every tangent
//! bundle and is closed under tangent bundles and pullbacks.
//!
//! Closure is lazy: the constructors below register what they return. Entries
//! are keyed by content, so concurrent registration of the same bundle is
//! harmless.

use std::collections::BTreeSet;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::manifold::ManifoldMap;
use crate::smooth::SmoothMap;

use super::cocycle::CocycleBundle;
use super::coordinate::{CoordBundle, LinearBundleMorphism};
use super::fibration::DualFibrationMap;

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum DifferentialBundle {
    Coordinate(CoordBundle),
    Cocycle(CocycleBundle),
}

impl DifferentialBundle {
    pub fn name(&self) -> String {
        match self {
            DifferentialBundle::Coordinate(e) => e.name(),
            DifferentialBundle::Cocycle(e) => e.display_name(),
        }
    }

    /// Content key; the dual flag is part of it only for cocycle bundles,
    /// where the dual has different transitions.
    pub fn key(&self) -> String {
        match self {
            DifferentialBundle::Coordinate(e) => format!(
                "coord {:?} {:?} {:?} {} {} {} {}",
                e.base_idx(),
                e.fibre_idx(),
                e.pairing(),
                e.q().normalize(),
                e.sigma().normalize(),
                e.zeta().normalize(),
                e.lambda().normalize()
            ),
            DifferentialBundle::Cocycle(e) => {
                let mut s = format!("cocycle {} {} {}", e.atlas.name, e.fibre_dim, e.is_dual());
                for entry in &e.entries {
                    s.push_str(&format!(" [{}→{} {:?}", entry.from, entry.to, entry.region));
                    for x in entry.matrix.iter().flatten() {
                        s.push_str(&format!(" {}", x.normalize()));
                    }
                    s.push(']');
                }
                s
            }
        }
    }
}

#[derive(Debug, Default)]
pub struct SystemOfBundles {
    entries: RwLock<BTreeSet<String>>,
}

impl SystemOfBundles {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, e: &DifferentialBundle) -> bool {
        self.entries.read().unwrap().contains(&e.key())
    }

    fn register(&self, e: DifferentialBundle) -> DifferentialBundle {
        self.entries.write().unwrap().insert(e.key());
        e
    }

    /// Adds a bundle as a generator of the system.
    pub fn adjoin(&self, e: DifferentialBundle) -> DifferentialBundle {
        self.register(e)
    }

    fn require(&self, e: &DifferentialBundle) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInSystem(e.name()))
        }
    }

    /// `𝒯(ℝⁿ)`, always present.
    pub fn tangent_bundle(&self, n: usize) -> CoordBundle {
        self.register(DifferentialBundle::Coordinate(CoordBundle::tangent_bundle(n)));
        CoordBundle::tangent_bundle(n)
    }

    /// `T(M)` of an atlas, always present.
    pub fn manifold_tangent_bundle(&self, atlas: std::sync::Arc<crate::manifold::Atlas>) -> CocycleBundle {
        let e = CocycleBundle::tangent_bundle(atlas);
        self.register(DifferentialBundle::Cocycle(e.clone()));
        e
    }

    pub fn tangent_of(&self, e: &DifferentialBundle) -> Result<DifferentialBundle> {
        self.require(e)?;
        Ok(self.register(match e {
            DifferentialBundle::Coordinate(b) => DifferentialBundle::Coordinate(b.tangent()),
            DifferentialBundle::Cocycle(b) => DifferentialBundle::Cocycle(b.tangent()),
        }))
    }

    pub fn pullback(&self, e: &CoordBundle, f: &SmoothMap) -> Result<(CoordBundle, LinearBundleMorphism)> {
        self.require(&DifferentialBundle::Coordinate(e.clone()))?;
        let (pb, cart) = e.pullback(f)?;
        self.register(DifferentialBundle::Coordinate(pb.clone()));
        Ok((pb, cart))
    }

    pub fn pullback_cocycle(&self, e: &CocycleBundle, f: &ManifoldMap) -> Result<CocycleBundle> {
        self.require(&DifferentialBundle::Cocycle(e.clone()))?;
        let pb = e.pullback(f)?;
        self.register(DifferentialBundle::Cocycle(pb.clone()));
        Ok(pb)
    }

    /// The linear involution on objects.
    pub fn star(&self, e: &DifferentialBundle) -> Result<DifferentialBundle> {
        self.require(e)?;
        Ok(self.register(match e {
            DifferentialBundle::Coordinate(b) => DifferentialBundle::Coordinate(b.star()),
            DifferentialBundle::Cocycle(b) => DifferentialBundle::Cocycle(b.star()),
        }))
    }

    /// The linear involution on morphisms, `(f, g)* = (f, g*)`.
    pub fn star_morphism(&self, m: &LinearBundleMorphism) -> Result<DualFibrationMap> {
        self.require(&DifferentialBundle::Coordinate(m.source().clone()))?;
        self.require(&DifferentialBundle::Coordinate(m.target().clone()))?;
        let d = m.star();
        self.register(DifferentialBundle::Coordinate(d.source().clone()));
        self.register(DifferentialBundle::Coordinate(d.target().clone()));
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_registered_lazily() {
        let system = SystemOfBundles::new();
        let t2 = system.tangent_bundle(2);
        let f = SmoothMap::parse("(map 1 2 x0 (* x0 x0))").unwrap();
        let (pb, cart) = system.pullback(&t2, &f).unwrap();
        assert!(system.contains(&DifferentialBundle::Coordinate(pb.clone())));
        let tpb = system.tangent_of(&DifferentialBundle::Coordinate(pb)).unwrap();
        assert!(system.contains(&tpb));
        assert!(system.star_morphism(&cart).is_ok());

        let stranger = DifferentialBundle::Coordinate(CoordBundle::trivial(3, 1));
        assert!(matches!(system.star(&stranger), Err(Error::NotInSystem(_))));
        system.adjoin(stranger.clone());
        assert!(system.star(&stranger).is_ok());
    }

    #[test]
    fn trivial_bundles_are_self_dual() {
        let e = CoordBundle::trivial(2, 3);
        assert_eq!(e.star(), e);
        assert_eq!(e.star().star().name(), e.name());
    }

    #[test]
    fn concurrent_registration_is_idempotent() {
        let system = SystemOfBundles::new();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    system.tangent_bundle(1);
                    system.tangent_bundle(2);
                });
            }
        });
        assert_eq!(system.len(), 2);
    }
}
