//! Rational polytopes with synchronized half-space and vertex descriptions.
//!
//! A [`Polytope`] always carries both representations. Vertices are kept in
//! lexicographic order and each vertex records the indices of the
//! half-spaces that are tight at it, which is all the face structure the rest
//! of the crate needs.

mod enumerate;
mod fano;
mod lattice;

pub use enumerate::{hull_facets, vertices_from_halfspaces, VertexRecord};
pub use fano::{anticanonical_polytope, smoothness_check, FanRays, FanoPolytope, SmoothnessReport};
pub use lattice::{evaluate, interpolate};

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelError, Rat, RatMat, RatVec};
use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("half-spaces do not cut out a bounded region")]
    Unbounded,
    #[error("half-spaces have empty intersection")]
    Empty,
    #[error("half-space {index} does not define a facet")]
    Degenerate { index: usize },
    #[error("the origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not simple: vertex {vertex} lies on {tight} facets")]
    NotSimple { vertex: RatVec, tight: usize },
    #[error("point set does not span the ambient space")]
    NotFullDimensional,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("ray {index} is not an integral vector")]
    RayNotIntegral { index: usize },
    #[error("ray {index} is not primitive")]
    RayNotPrimitive { index: usize },
    #[error("ray {index} is zero or duplicated")]
    RayRepeated { index: usize },
    #[error("polytope is not reflexive: facet {facet} gives non-integral ray {ray}")]
    NotReflexive { facet: usize, ray: RatVec },
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// The closed half-space `{x : ⟨x, normal⟩ ≤ rhs}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Halfspace {
    pub normal: RatVec,
    pub rhs: Rat,
}

impl Halfspace {
    pub fn new(normal: RatVec, rhs: Rat) -> Self {
        Halfspace { normal, rhs }
    }

    pub fn slack(&self, x: &RatVec) -> Rat {
        &self.rhs - &self.normal.dot(x)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &RatVec) -> bool {
        self.slack(x).is_zero()
    }
}

/// An edge of a simple polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacePath {
    /// Indices into [`Polytope::vertices`], `from < to`.
    pub from: usize,
    pub to: usize,
    /// Half-spaces tight along the whole edge.
    pub tight: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub passed: bool,
    pub offending_vertex: Option<RatVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vertices: Vec<RatVec>,
    tight: Vec<Vec<usize>>,
}

/// Affine dimension of a finite point set (`-1` is reported as `None`).
pub(crate) fn affine_dim(points: &[&RatVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    if rest.is_empty() {
        return Some(0);
    }
    let diffs: Vec<RatVec> = rest.iter().map(|p| *p - *first).collect();
    Some(RatMat::from_rows(diffs).expect("uniform dimension").rank())
}

impl Polytope {
    /// Builds a polytope from an irredundant half-space description.
    ///
    /// Every half-space must support a facet, otherwise
    /// [`PolytopeError::Degenerate`] names the first one that does not.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, PolytopeError> {
        let records = vertices_from_halfspaces(dim, &halfspaces)?;
        let vertices: Vec<RatVec> = records.into_iter().map(|r| r.point).collect();
        let p = Self::from_parts(dim, halfspaces, vertices)?;
        for (index, _) in p.halfspaces.iter().enumerate() {
            let on: Vec<&RatVec> = p.vertices_on(index).collect();
            if affine_dim(&on) != Some(dim.saturating_sub(1)) || on.is_empty() {
                return Err(PolytopeError::Degenerate { index });
            }
        }
        Ok(p)
    }

    /// Convex hull of a finite full-dimensional point set. Half-spaces come
    /// out with primitive integral normals in lexicographic order.
    pub fn from_vertices(dim: usize, points: &[RatVec]) -> Result<Self, PolytopeError> {
        let facets = hull_facets(dim, points)?;
        let extreme: BTreeSet<RatVec> = points
            .iter()
            .filter(|p| {
                let normals: Vec<RatVec> =
                    facets.iter().filter(|h| h.is_tight(p)).map(|h| h.normal.clone()).collect();
                !normals.is_empty() && RatMat::from_rows(normals).expect("uniform dimension").rank() == dim
            })
            .cloned()
            .collect();
        Self::from_parts(dim, facets, extreme.into_iter().collect())
    }

    /// Assembles a polytope from matching descriptions, recomputing the
    /// tightness lists and checking that every vertex is feasible.
    fn from_parts(
        dim: usize,
        halfspaces: Vec<Halfspace>,
        mut vertices: Vec<RatVec>,
    ) -> Result<Self, PolytopeError> {
        for v in &vertices {
            if v.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { expected: dim, found: v.dim() });
            }
        }
        vertices.sort();
        vertices.dedup();
        let mut tight = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let mut t = Vec::new();
            for (i, h) in halfspaces.iter().enumerate() {
                let s = h.slack(v);
                if s.is_negative() {
                    return Err(PolytopeError::Empty);
                }
                if s.is_zero() {
                    t.push(i);
                }
            }
            tight.push(t);
        }
        Ok(Polytope { dim, halfspaces, vertices, tight })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    /// Indices of the half-spaces tight at each vertex, parallel to [`Polytope::vertices`].
    pub fn tight_sets(&self) -> &[Vec<usize>] {
        &self.tight
    }

    pub(crate) fn vertices_on(&self, halfspace: usize) -> impl Iterator<Item = &RatVec> + '_ {
        self.vertices.iter().zip(&self.tight).filter(move |(_, t)| t.contains(&halfspace)).map(|(v, _)| v)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn on_boundary(&self, x: &RatVec) -> bool {
        self.contains(x) && self.halfspaces.iter().any(|h| h.is_tight(x))
    }

    /// With an irredundant description, the origin is interior exactly when
    /// every right-hand side is positive.
    pub fn origin_is_interior(&self) -> bool {
        self.halfspaces.iter().all(|h| h.rhs.is_positive())
    }

    /// The near-norm `‖x‖ = min { t ≥ 0 : x ∈ t·P }`, evaluated as the
    /// largest ratio `⟨x, normal⟩ / rhs` over facets (clamped at 0).
    pub fn gauge(&self, x: &RatVec) -> Result<Rat, PolytopeError> {
        if !self.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        if x.dim() != self.dim {
            return Err(PolytopeError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(self.halfspaces.iter().map(|h| &h.normal.dot(x) / &h.rhs).fold(Rat::zero(), Ord::max))
    }

    /// `max_{x ∈ P} ⟨x, y⟩`, attained at a vertex.
    pub fn support(&self, y: &RatVec) -> Rat {
        support(&self.vertices, y).expect("polytope has vertices")
    }

    /// `-P`.
    pub fn negated(&self) -> Polytope {
        let halfspaces =
            self.halfspaces.iter().map(|h| Halfspace::new(h.normal.neg(), h.rhs.clone())).collect();
        let vertices = self.vertices.iter().map(RatVec::neg).collect();
        Self::from_parts(self.dim, halfspaces, vertices).expect("negation preserves feasibility")
    }

    /// The polar body `{y : ⟨x, y⟩ ≤ 1 for all x ∈ P}`.
    pub fn polar(&self) -> Result<Polytope, PolytopeError> {
        if !self.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let halfspaces = self.vertices.iter().map(|v| Halfspace::new(v.clone(), Rat::one())).collect();
        let vertices = self.halfspaces.iter().map(|h| h.normal.scale(&h.rhs.recip())).collect();
        Self::from_parts(self.dim, halfspaces, vertices)
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        let set: BTreeSet<&RatVec> = self.vertices.iter().collect();
        self.vertices.iter().all(|v| set.contains(&v.neg()))
    }

    pub fn integrality_check(&self) -> IntegralityReport {
        let offending = self.vertices.iter().find(|v| !v.is_integral()).cloned();
        IntegralityReport { passed: offending.is_none(), offending_vertex: offending }
    }

    pub fn is_simple(&self) -> bool {
        self.tight.iter().all(|t| t.len() == self.dim)
    }

    /// All edges. Requires a simple polytope.
    pub fn edges(&self) -> Result<Vec<FacePath>, PolytopeError> {
        if let Some((v, t)) = self.vertices.iter().zip(&self.tight).find(|(_, t)| t.len() > self.dim) {
            return Err(PolytopeError::NotSimple { vertex: v.clone(), tight: t.len() });
        }
        let mut edges = Vec::new();
        for a in 0..self.vertices.len() {
            for b in a + 1..self.vertices.len() {
                let common: Vec<usize> =
                    self.tight[a].iter().copied().filter(|i| self.tight[b].contains(i)).collect();
                if common.len() + 1 < self.dim {
                    continue;
                }
                let normals: Vec<RatVec> =
                    common.iter().map(|&i| self.halfspaces[i].normal.clone()).collect();
                let rank = if normals.is_empty() { 0 } else { RatMat::from_rows(normals)?.rank() };
                if rank + 1 == self.dim {
                    edges.push(FacePath { from: a, to: b, tight: common });
                }
            }
        }
        Ok(edges)
    }
}

/// `max_{x ∈ points} ⟨x, y⟩`; equals the support function of the convex hull.
pub fn support(points: &[RatVec], y: &RatVec) -> Result<Rat, PolytopeError> {
    points
        .iter()
        .map(|x| x.checked_dot(y))
        .try_fold(None::<Rat>, |best, v| {
            let v = v?;
            Ok::<_, KernelError>(Some(match best {
                Some(b) if b >= v => b,
                _ => v,
            }))
        })?
        .ok_or(PolytopeError::EmptyPointSet)
}

/// Free-function form of [`Polytope::gauge`].
pub fn gauge(p: &Polytope, x: &RatVec) -> Result<Rat, PolytopeError> {
    p.gauge(x)
}
