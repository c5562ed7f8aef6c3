use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{affine_dim, Halfspace, PolytopeError};
use crate::kernel::{LinearSolution, Rat, RatMat, RatVec};
use crate::lp::{LinearProgram, LpOutcome};

/// A vertex together with the half-spaces tight at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub point: RatVec,
    pub tight: Vec<usize>,
}

fn check_dims(dim: usize, halfspaces: &[Halfspace]) -> Result<(), PolytopeError> {
    for h in halfspaces {
        if h.normal.dim() != dim {
            return Err(PolytopeError::DimensionMismatch { expected: dim, found: h.normal.dim() });
        }
    }
    Ok(())
}

/// Maximizes each of `±x_i` over the half-spaces; an unbounded direction
/// certifies that the region is not a polytope.
fn check_bounded(dim: usize, halfspaces: &[Halfspace]) -> Result<(), PolytopeError> {
    for axis in 0..dim {
        for sign in [1, -1] {
            let mut lp = LinearProgram::maximize(RatVec::unit(dim, axis).scale(&Rat::from_int(sign)));
            for v in 0..dim {
                lp.set_free(v);
            }
            for h in halfspaces {
                lp.le(h.normal.clone(), h.rhs.clone());
            }
            match lp.solve()? {
                LpOutcome::Optimal(_) => {}
                LpOutcome::Infeasible => return Err(PolytopeError::Empty),
                LpOutcome::Unbounded => return Err(PolytopeError::Unbounded),
            }
        }
    }
    Ok(())
}

/// Enumerates vertices by solving every `n`-subset of boundary equations and
/// keeping the feasible solutions. Output is in lexicographic order.
pub fn vertices_from_halfspaces(
    dim: usize,
    halfspaces: &[Halfspace],
) -> Result<Vec<VertexRecord>, PolytopeError> {
    check_dims(dim, halfspaces)?;
    check_bounded(dim, halfspaces)?;
    let mut found: BTreeMap<RatVec, ()> = BTreeMap::new();
    for subset in (0..halfspaces.len()).combinations(dim) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let rhs: RatVec = subset.iter().map(|&i| halfspaces[i].rhs.clone()).collect();
        let a = RatMat::from_rows(rows)?;
        if let LinearSolution::Unique(x) = a.solve(&rhs)? {
            if halfspaces.iter().all(|h| h.contains(&x)) {
                found.insert(x, ());
            }
        }
    }
    if found.is_empty() {
        return Err(PolytopeError::Empty);
    }
    Ok(found
        .into_keys()
        .map(|point| {
            let tight = (0..halfspaces.len()).filter(|&i| halfspaces[i].is_tight(&point)).collect();
            VertexRecord { point, tight }
        })
        .collect())
}

/// Scales `normal` to a primitive integer vector (positive multiple).
fn primitive(normal: &RatVec, rhs: &Rat) -> Halfspace {
    let lcm = normal.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let ints: Vec<BigInt> = normal.iter().map(|c| (c * &Rat::from_bigint(lcm.clone())).numer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let factor = Rat::from_bigints(lcm, g).expect("nonzero normal");
    Halfspace::new(normal.scale(&factor), rhs * &factor)
}

/// Facet inequalities of `conv(points)` by brute force over `n`-subsets.
/// Requires a full-dimensional point set.
pub fn hull_facets(dim: usize, points: &[RatVec]) -> Result<Vec<Halfspace>, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::EmptyPointSet);
    }
    for p in points {
        if p.dim() != dim {
            return Err(PolytopeError::DimensionMismatch { expected: dim, found: p.dim() });
        }
    }
    let pts: Vec<&RatVec> = points.iter().collect::<BTreeSet<_>>().into_iter().collect();
    if dim == 0 || affine_dim(&pts) != Some(dim) {
        return Err(PolytopeError::NotFullDimensional);
    }
    let mut facets = BTreeSet::new();
    for subset in (0..pts.len()).combinations(dim) {
        let base = pts[subset[0]];
        let normal = if dim == 1 {
            RatVec::unit(1, 0)
        } else {
            let diffs: Vec<RatVec> = subset[1..].iter().map(|&i| pts[i] - base).collect();
            let null = RatMat::from_rows(diffs)?.nullspace();
            if null.len() != 1 {
                continue;
            }
            null.into_iter().next().expect("one basis vector")
        };
        let rhs = normal.dot(base);
        let (mut above, mut below) = (false, false);
        for p in &pts {
            match normal.dot(p).cmp(&rhs) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        if !above {
            facets.insert(primitive(&normal, &rhs));
        }
        if !below {
            facets.insert(primitive(&normal.neg(), &-rhs));
        }
    }
    Ok(facets.into_iter().collect())
}
