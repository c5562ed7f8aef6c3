use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{Halfspace, Polytope, PolytopeError};
use crate::kernel::{Rat, RatMat, RatVec};

/// Primitive ray generators of a complete fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanRays {
    dim: usize,
    rays: Vec<RatVec>,
}

impl FanRays {
    pub fn new(dim: usize, rays: &[&[i64]]) -> Result<Self, PolytopeError> {
        Self::from_vectors(dim, rays.iter().map(|r| RatVec::from_ints(r)).collect())
    }

    /// Validates integrality, primitivity and distinctness. Positive spanning
    /// is checked when the polytope is built.
    pub fn from_vectors(dim: usize, rays: Vec<RatVec>) -> Result<Self, PolytopeError> {
        let mut seen = BTreeSet::new();
        for (index, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { expected: dim, found: r.dim() });
            }
            if !r.is_integral() {
                return Err(PolytopeError::RayNotIntegral { index });
            }
            if r.is_zero() || !seen.insert(r.clone()) {
                return Err(PolytopeError::RayRepeated { index });
            }
            let g = r.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&c.numer()));
            if !g.is_one() {
                return Err(PolytopeError::RayNotPrimitive { index });
            }
        }
        Ok(FanRays { dim, rays })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RatVec] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Integer coordinates of every ray.
    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        self.rays.iter().map(|r| r.to_i64s().expect("integral rays")).collect()
    }
}

/// `P = {y : ⟨y, -v_i⟩ ≤ 1 for all i}`.
pub fn anticanonical_polytope(rays: &FanRays) -> Result<Polytope, PolytopeError> {
    let halfspaces = rays.rays.iter().map(|v| Halfspace::new(v.neg(), Rat::one())).collect();
    Polytope::from_halfspaces(rays.dim, halfspaces)
}

/// Fan rays together with their anticanonical polytope. Half-space `i` of the
/// polytope is the facet dual to ray `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoPolytope {
    rays: FanRays,
    polytope: Polytope,
}

impl FanoPolytope {
    pub fn from_rays(rays: FanRays) -> Result<Self, PolytopeError> {
        let polytope = anticanonical_polytope(&rays)?;
        Ok(FanoPolytope { rays, polytope })
    }

    /// Recovers the fan from a reflexive polytope given by its vertices.
    pub fn from_vertices(dim: usize, vertices: &[RatVec]) -> Result<Self, PolytopeError> {
        let hull = Polytope::from_vertices(dim, vertices)?;
        if !hull.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let mut rays = Vec::new();
        for (facet, h) in hull.halfspaces().iter().enumerate() {
            let ray = h.normal.scale(&h.rhs.recip()).neg();
            if !ray.is_integral() {
                return Err(PolytopeError::NotReflexive { facet, ray });
            }
            rays.push(ray);
        }
        Self::from_rays(FanRays::from_vectors(dim, rays)?)
    }

    pub fn dim(&self) -> usize {
        self.rays.dim
    }

    pub fn rays(&self) -> &FanRays {
        &self.rays
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// `‖x‖₋P = max_i ⟨x, v_i⟩`, the gauge of `-P`.
    pub fn near_norm(&self, x: &RatVec) -> Rat {
        self.rays.rays.iter().map(|v| v.dot(x)).max().expect("nonempty fan").max(Rat::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// Rays spanning the first facet of `conv(rays)` that is not a unimodular simplex.
    pub failing_facet: Option<Vec<RatVec>>,
}

/// Facets of `Q = conv(rays)` correspond to vertices of `P`; the rays on a
/// facet are those tight at the matching vertex.
pub fn smoothness_check(rays: &FanRays) -> Result<SmoothnessReport, PolytopeError> {
    let p = anticanonical_polytope(rays)?;
    for tight in p.tight_sets() {
        let facet: Vec<RatVec> = tight.iter().map(|&i| rays.rays[i].clone()).collect();
        let unimodular =
            facet.len() == rays.dim && RatMat::from_rows(facet.clone())?.det()?.abs() == Rat::one();
        if !unimodular {
            return Ok(SmoothnessReport { smooth: false, failing_facet: Some(facet) });
        }
    }
    Ok(SmoothnessReport { smooth: true, failing_facet: None })
}
