//! Lattice automorphisms of a polytope, finite subgroups, orbits and the
//! averaging projection onto the fixed subspace.
//!
//! Matrices act on column vectors, `x ↦ A·x`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelError, Rat, RatMat, RatVec};
use crate::lp::{LinearProgram, LpError, LpOutcome};
use crate::polytope::Polytope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("matrix is not a square integer matrix of size {dim}")]
    NotIntegral { dim: usize },
    #[error("matrix has determinant {det}, expected ±1")]
    NotUnimodular { det: Rat },
    #[error("generator {index} is not an automorphism of the polytope")]
    NotAnAutomorphism { index: usize },
    #[error("vertices do not contain a linear frame")]
    NoLinearFrame,
    #[error("group action does not preserve the point set")]
    NotInvariant,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// An element of `GL(n, ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct UnimodularMap {
    matrix: RatMat,
}

impl UnimodularMap {
    pub fn new(matrix: RatMat) -> Result<Self, SymmetryError> {
        if !matrix.is_square() || !matrix.is_integral() {
            return Err(SymmetryError::NotIntegral { dim: matrix.rows() });
        }
        let det = matrix.det()?;
        if det.abs() != Rat::one() {
            return Err(SymmetryError::NotUnimodular { det });
        }
        Ok(UnimodularMap { matrix })
    }

    /// Row-major integer entries.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, SymmetryError> {
        Self::new(RatMat::from_int_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        UnimodularMap { matrix: RatMat::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        self.matrix.row_vectors().iter().map(|r| r.to_i64s().expect("integral")).collect()
    }

    pub fn apply(&self, x: &RatVec) -> RatVec {
        self.matrix.mul_vec(x).expect("dimension checked by caller")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap { matrix: self.matrix.mul(&other.matrix).expect("same dimension") }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == RatMat::identity(self.dim())
    }

    /// True when the map permutes the vertex set of `p`.
    pub fn preserves(&self, p: &Polytope) -> bool {
        if self.dim() != p.dim() {
            return false;
        }
        let verts: BTreeSet<&RatVec> = p.vertices().iter().collect();
        p.vertices().iter().all(|v| verts.contains(&self.apply(v)))
    }
}

/// A finite matrix group, listed with the identity first and the remaining
/// elements in matrix order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<UnimodularMap>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    pub fn trivial(dim: usize) -> Self {
        FiniteGroup { dim, elements: vec![UnimodularMap::identity(dim)], generators: Vec::new() }
    }

    /// Closure of `gens` under composition. The caller guarantees finiteness,
    /// e.g. by checking that each generator preserves a polytope.
    pub fn generated_by(dim: usize, gens: &[UnimodularMap]) -> Result<Self, SymmetryError> {
        for g in gens {
            if g.dim() != dim {
                return Err(SymmetryError::DimensionMismatch { expected: dim, found: g.dim() });
            }
        }
        Ok(Self::from_set(dim, closure_set(dim, gens)))
    }

    fn from_set(dim: usize, set: BTreeSet<UnimodularMap>) -> Self {
        let id = UnimodularMap::identity(dim);
        let mut elements = vec![id.clone()];
        elements.extend(set.into_iter().filter(|g| *g != id));
        let mut group = FiniteGroup { dim, elements, generators: Vec::new() };
        group.generators = group.greedy_generators();
        group
    }

    /// Walks the elements in order, keeping each one not already generated.
    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span: BTreeSet<UnimodularMap> = [UnimodularMap::identity(self.dim)].into();
        for (i, g) in self.elements.iter().enumerate() {
            if span.len() == self.elements.len() {
                break;
            }
            if span.contains(g) {
                continue;
            }
            gens.push(i);
            let gs: Vec<UnimodularMap> = gens.iter().map(|&j| self.elements[j].clone()).collect();
            span = closure_set(self.dim, &gs);
        }
        gens
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[UnimodularMap] {
        &self.elements
    }

    pub fn generators(&self) -> Vec<&UnimodularMap> {
        self.generators.iter().map(|&i| &self.elements[i]).collect()
    }

    pub fn contains(&self, g: &UnimodularMap) -> bool {
        self.elements.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn preserves(&self, p: &Polytope) -> bool {
        self.elements.iter().all(|g| g.preserves(p))
    }

    /// The `H`-orbit of `x`, sorted and deduplicated.
    pub fn orbit(&self, x: &RatVec) -> Vec<RatVec> {
        self.elements.iter().map(|g| g.apply(x)).collect::<BTreeSet<_>>().into_iter().collect()
    }
}

fn closure_set(dim: usize, gens: &[UnimodularMap]) -> BTreeSet<UnimodularMap> {
    let mut set: BTreeSet<UnimodularMap> = BTreeSet::new();
    set.insert(UnimodularMap::identity(dim));
    let mut frontier = vec![UnimodularMap::identity(dim)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every `A ∈ GL(n, ℤ)` permuting the vertices of `p`.
///
/// A set of `n` linearly independent vertices is fixed as a frame; each
/// ordered `n`-tuple of vertices is tried as its image.
pub fn automorphism_group(p: &Polytope) -> Result<FiniteGroup, SymmetryError> {
    let n = p.dim();
    let verts = p.vertices();
    let mut frame: Vec<RatVec> = Vec::new();
    for v in verts {
        let mut trial = frame.clone();
        trial.push(v.clone());
        if RatMat::from_rows(trial.clone())?.rank() == trial.len() {
            frame = trial;
        }
        if frame.len() == n {
            break;
        }
    }
    if frame.len() < n {
        return Err(SymmetryError::NoLinearFrame);
    }
    let frame_inv = RatMat::from_columns(&frame)?.inverse()?.ok_or(SymmetryError::NoLinearFrame)?;
    let mut found = BTreeSet::new();
    for images in verts.iter().permutations(n) {
        let cols: Vec<RatVec> = images.into_iter().cloned().collect();
        let a = RatMat::from_columns(&cols)?.mul(&frame_inv)?;
        if let Ok(map) = UnimodularMap::new(a) {
            if map.preserves(p) {
                found.insert(map);
            }
        }
    }
    Ok(FiniteGroup::from_set(n, found))
}

/// Smallest subgroup of `within` containing `gens`.
pub fn subgroup_closure(gens: &[UnimodularMap], within: &FiniteGroup) -> Result<FiniteGroup, SymmetryError> {
    for (index, g) in gens.iter().enumerate() {
        if !within.contains(g) {
            return Err(SymmetryError::NotAnAutomorphism { index });
        }
    }
    FiniteGroup::generated_by(within.dim, gens)
}

/// Distinct cyclic subgroups, one per element, deduplicated and ordered by
/// (order, elements).
pub fn cyclic_subgroups(group: &FiniteGroup) -> Vec<FiniteGroup> {
    let mut seen: BTreeMap<(usize, Vec<UnimodularMap>), FiniteGroup> = BTreeMap::new();
    for g in &group.elements {
        let h = FiniteGroup::generated_by(group.dim, std::slice::from_ref(g)).expect("same dim");
        seen.entry((h.order(), h.elements.clone())).or_insert(h);
    }
    seen.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: RatVec,
    pub points: Vec<RatVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub k: u64,
    pub group_order: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.orbits.iter().map(|o| o.points.len()).sum()
    }
}

/// Partitions `(1/k)ℤⁿ ∩ P` into `H`-orbits. Representatives are the
/// lexicographically least points, and orbits are listed in that order.
pub fn orbit_decomposition(
    h: &FiniteGroup,
    p: &Polytope,
    k: u64,
) -> Result<OrbitDecomposition, SymmetryError> {
    if h.dim != p.dim() {
        return Err(SymmetryError::DimensionMismatch { expected: p.dim(), found: h.dim });
    }
    let points = p.lattice_points(k);
    let all: BTreeSet<&RatVec> = points.iter().collect();
    let mut assigned: BTreeSet<RatVec> = BTreeSet::new();
    let mut orbits = Vec::new();
    for x in &points {
        if assigned.contains(x) {
            continue;
        }
        let orbit = h.orbit(x);
        if orbit.iter().any(|y| !all.contains(y)) {
            return Err(SymmetryError::NotInvariant);
        }
        assigned.extend(orbit.iter().cloned());
        orbits.push(Orbit { representative: orbit[0].clone(), points: orbit });
    }
    Ok(OrbitDecomposition { k, group_order: h.order(), orbits })
}

/// `π_H(x) = (1/|H|) Σ_{η ∈ H} η·x`.
pub fn project(h: &FiniteGroup, x: &RatVec) -> RatVec {
    let mut acc = RatVec::zeros(x.dim());
    for g in &h.elements {
        acc = &acc + &g.apply(x);
    }
    acc.scale(&Rat::new(1, h.order() as i64))
}

/// `π_H(Ver P)`, sorted and deduplicated. Contains the vertices of `P^H`.
pub fn projected_vertices(h: &FiniteGroup, p: &Polytope) -> Vec<RatVec> {
    p.vertices().iter().map(|v| project(h, v)).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Points of `set` that are not convex combinations of the others.
pub fn extreme_points(set: &[RatVec]) -> Result<Vec<RatVec>, SymmetryError> {
    let mut out = Vec::new();
    for (i, x) in set.iter().enumerate() {
        let others: Vec<&RatVec> = set.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, y)| y).collect();
        if others.is_empty() {
            out.push(x.clone());
            continue;
        }
        let mut lp = LinearProgram::minimize(RatVec::zeros(others.len()));
        for c in 0..x.dim() {
            lp.eq(others.iter().map(|y| y[c].clone()).collect(), x[c].clone());
        }
        lp.eq(RatVec::new(vec![Rat::one(); others.len()]), Rat::one());
        if matches!(lp.solve()?, LpOutcome::Infeasible) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Vertices of the fixed polytope `P^H = π_H(P)`.
pub fn fixed_polytope_vertices(h: &FiniteGroup, p: &Polytope) -> Result<Vec<RatVec>, SymmetryError> {
    extreme_points(&projected_vertices(h, p))
}
