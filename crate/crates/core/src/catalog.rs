//! Builtin smooth toric Fano examples.

use serde::Serialize;

use crate::input::GroupSpec;
use crate::polytope::{FanRays, FanoPolytope};

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub rays: FanRays,
    /// Subgroups of `Aut P` tabulated by `report`, trivial group first.
    pub subgroups: Vec<(&'static str, GroupSpec)>,
}

impl CatalogEntry {
    pub fn fano(&self) -> FanoPolytope {
        FanoPolytope::from_rays(self.rays.clone()).expect("catalog fans are complete")
    }
}

const SWAP: [[i64; 2]; 2] = [[0, 1], [1, 0]];
const CYCLE: [[i64; 2]; 2] = [[-1, -1], [1, 0]];

fn gens(ms: &[[[i64; 2]; 2]]) -> GroupSpec {
    GroupSpec::Generators(ms.iter().map(|m| m.iter().map(|r| r.to_vec()).collect()).collect())
}

fn entry(
    name: &'static str,
    description: &'static str,
    rays: &[&[i64]],
    extra: Vec<(&'static str, GroupSpec)>,
) -> CatalogEntry {
    let mut subgroups = vec![("trivial", GroupSpec::Trivial)];
    subgroups.extend(extra);
    subgroups.push(("full", GroupSpec::FullAut));
    CatalogEntry {
        name,
        description,
        rays: FanRays::new(rays[0].len(), rays).expect("valid catalog rays"),
        subgroups,
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        entry(
            "p2",
            "projective plane",
            &[&[1, 0], &[0, 1], &[-1, -1]],
            vec![("swap", gens(&[SWAP])), ("cyclic-3", gens(&[CYCLE]))],
        ),
        entry("dp1", "plane blown up at one point", &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]], vec![]),
        entry(
            "dp2",
            "plane blown up at two points",
            &[&[1, 0], &[0, 1], &[-1, -1], &[-1, 0], &[0, -1]],
            vec![],
        ),
        entry(
            "dp3",
            "plane blown up at three points",
            &[&[1, 0], &[0, 1], &[-1, -1], &[-1, 0], &[0, -1], &[1, 1]],
            vec![("reflection", gens(&[SWAP]))],
        ),
        entry("p1xp1", "product of two lines", &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], vec![]),
        entry("p3", "projective 3-space", &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]], vec![]),
        entry(
            "p2xp1",
            "product of the plane and a line",
            &[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0], &[0, 0, 1], &[0, 0, -1]],
            vec![],
        ),
        entry(
            "p1cubed",
            "product of three lines",
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
            vec![],
        ),
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::RatVec;
    use crate::polytope::smoothness_check;

    #[test]
    fn entries_are_smooth_and_integral() {
        for e in catalog() {
            assert!(smoothness_check(&e.rays).unwrap().smooth, "{}", e.name);
            assert!(e.fano().polytope().integrality_check().passed, "{}", e.name);
            for (label, spec) in &e.subgroups {
                assert!(spec.resolve(&e.fano()).is_ok(), "{} {}", e.name, label);
            }
        }
    }

    #[test]
    fn named_entries() {
        assert_eq!(lookup("p2").unwrap().rays.len(), 3);
        let dp3 = lookup("dp3").unwrap();
        assert_eq!(dp3.rays.len(), 6);
        assert!(dp3.rays.rays().contains(&RatVec::from_ints(&[1, 1])));
        let cube = lookup("p1cubed").unwrap().fano();
        assert_eq!(cube.polytope().vertices().len(), 8);
        assert!(cube
            .polytope()
            .vertices()
            .iter()
            .all(|v| v.iter().all(|c| c.abs() == crate::kernel::Rat::one())));
        assert!(lookup("nope").is_none());
    }
}
