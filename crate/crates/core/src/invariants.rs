//! Alpha-type invariants of toric Fano manifolds from the convex geometry of
//! the anticanonical polytope.
//!
//! Throughout, `‖x‖ = max_i ⟨x, v_i⟩` is the gauge of `-P` (the near-norm),
//! and a set `F` of points of `P ∩ (1/k)ℤⁿ` has singularity exponent
//! `c(F) = 1 / (1 + min_{conv F} ‖·‖)`.

use std::sync::Mutex;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{Rat, RatVec};
use crate::lp::{LinearProgram, LpError, LpOutcome};
use crate::oracle::{interior_membership, Membership};
use crate::polytope::{FanoPolytope, PolytopeError};
use crate::symmetry::{orbit_decomposition, project, projected_vertices, FiniteGroup, SymmetryError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("group does not preserve the polytope")]
    NotASubgroup,
    #[error("empty point set")]
    EmptySubset,
    #[error("point {0} lies outside the polytope")]
    PointOutside(RatVec),
    #[error("point {point} is not in (1/{k})Z^n")]
    WrongDenominator { point: RatVec, k: u64 },
    #[error("k and m must be positive")]
    NonPositive,
    #[error("no invariant subspace of dimension {m}: only {available} sections at level k")]
    NoInvariantSubspace { m: u64, available: u64 },
    #[error(
        "subset invariants are only defined for the torus; a nontrivial finite group \
         may admit no invariant subspace of the requested dimension"
    )]
    NonTrivialGroup,
    #[error("the origin is not an interior point of conv U")]
    OriginNotInterior,
    #[error("{count} subsets exceed the enumeration ceiling of {ceiling}")]
    CeilingExceeded { count: u128, ceiling: u128 },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaPath {
    VertexFormula,
    OrbitFormula,
    SubsetSearch,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Point(RatVec),
    Subset(Vec<RatVec>),
}

/// An invariant value together with the data that attains it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaValue {
    pub invariant: &'static str,
    pub value: Rat,
    pub witness: Witness,
    pub path: FormulaPath,
    pub k: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub group_order: usize,
}

fn check_group(f: &FanoPolytope, h: &FiniteGroup) -> Result<(), InvariantError> {
    if h.dim() != f.dim() || !h.preserves(f.polytope()) {
        return Err(InvariantError::NotASubgroup);
    }
    Ok(())
}

fn exponent(norm: &Rat) -> Rat {
    (norm + &Rat::one()).recip()
}

/// `α_{k,G(H)} = min_{u ∈ π_H(Ver P)} 1/(1 + max_i ⟨u, v_i⟩)`. The value does
/// not depend on `k`, which is only recorded.
pub fn alpha_kg(f: &FanoPolytope, h: &FiniteGroup, k: u64) -> Result<AlphaValue, InvariantError> {
    check_group(f, h)?;
    let (value, minimizers) = alpha_minimizers(f, h);
    Ok(AlphaValue {
        invariant: "alpha_kG",
        value,
        witness: Witness::Point(minimizers[0].clone()),
        path: FormulaPath::VertexFormula,
        k,
        m: None,
        group_order: h.order(),
    })
}

/// The global log canonical threshold, which coincides with [`alpha_kg`].
pub fn glct_kg(f: &FanoPolytope, h: &FiniteGroup, k: u64) -> Result<AlphaValue, InvariantError> {
    Ok(AlphaValue { invariant: "glct_kG", ..alpha_kg(f, h, k)? })
}

/// Minimal value over projected vertices and every projected vertex attaining
/// it, in lexicographic order.
fn alpha_minimizers(f: &FanoPolytope, h: &FiniteGroup) -> (Rat, Vec<RatVec>) {
    let candidates = projected_vertices(h, f.polytope());
    let norms: Vec<Rat> = candidates.iter().map(|u| f.near_norm(u)).collect();
    let top = norms.iter().max().expect("nonempty").clone();
    let minimizers = candidates.into_iter().zip(&norms).filter(|(_, n)| **n == top).map(|(u, _)| u).collect();
    (exponent(&top), minimizers)
}

/// Minimum over `H`-orbits in `(1/k)ℤⁿ ∩ P` of `c_k(O)`. The near-norm is
/// `H`-invariant and convex, so its minimum over `conv O` is attained at the
/// orbit barycenter `π_H(O)`.
pub fn alpha_via_orbits(f: &FanoPolytope, h: &FiniteGroup, k: u64) -> Result<AlphaValue, InvariantError> {
    check_group(f, h)?;
    if k == 0 {
        return Err(InvariantError::NonPositive);
    }
    let decomposition = orbit_decomposition(h, f.polytope(), k)?;
    let mut best: Option<(Rat, RatVec)> = None;
    for orbit in &decomposition.orbits {
        let centre = project(h, &orbit.representative);
        let c = exponent(&f.near_norm(&centre));
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, centre));
        }
    }
    let (value, centre) = best.expect("origin is a lattice point");
    Ok(AlphaValue {
        invariant: "alpha_kG",
        value,
        witness: Witness::Point(centre),
        path: FormulaPath::OrbitFormula,
        k,
        m: None,
        group_order: h.order(),
    })
}

fn check_in_polytope(f: &FanoPolytope, points: &[RatVec]) -> Result<(), InvariantError> {
    if points.is_empty() {
        return Err(InvariantError::EmptySubset);
    }
    for x in points {
        if x.dim() != f.dim() {
            return Err(PolytopeError::DimensionMismatch { expected: f.dim(), found: x.dim() }.into());
        }
        if !f.polytope().contains(x) {
            return Err(InvariantError::PointOutside(x.clone()));
        }
    }
    Ok(())
}

/// `min_{x ∈ conv F} ‖x‖` and a minimizer, by the LP
/// `min t  s.t.  x = Σ λ_j f_j, Σ λ_j = 1, ⟨x, v_i⟩ ≤ t`.
pub fn min_near_norm(f: &FanoPolytope, points: &[RatVec]) -> Result<(Rat, RatVec), InvariantError> {
    if points.is_empty() {
        return Err(InvariantError::EmptySubset);
    }
    if let [single] = points {
        return Ok((f.near_norm(single), single.clone()));
    }
    let s = points.len();
    let mut objective = vec![Rat::zero(); s + 1];
    objective[s] = Rat::one();
    let mut lp = LinearProgram::minimize(RatVec::new(objective));
    let mut weights = vec![Rat::one(); s + 1];
    weights[s] = Rat::zero();
    lp.eq(RatVec::new(weights), Rat::one());
    for v in f.rays().rays() {
        let mut row: Vec<Rat> = points.iter().map(|p| p.dot(v)).collect();
        row.push(-Rat::one());
        lp.le(RatVec::new(row), Rat::zero());
    }
    let sol = match lp.solve()? {
        LpOutcome::Optimal(sol) => sol,
        _ => unreachable!("bounded feasible program"),
    };
    let mut x = RatVec::zeros(f.dim());
    for (p, l) in points.iter().zip(sol.point.iter()) {
        if !l.is_zero() {
            x = &x + &p.scale(l);
        }
    }
    Ok((sol.value, x))
}

/// `c_k(F) = 1 / (1 + min_{conv F} ‖·‖)`.
pub fn c_k_subset(f: &FanoPolytope, points: &[RatVec]) -> Result<Rat, InvariantError> {
    check_in_polytope(f, points)?;
    Ok(exponent(&min_near_norm(f, points)?.0))
}

/// The threshold `sup { c : 0 ∈ (1-c)·conv U + c·conv F }`, capped at 1.
///
/// Solved as `max Σ y_i  s.t.  Σ y_i f_i + Σ μ_j u_j = 0, Σ μ_j = 1` with
/// `y, μ ≥ 0`; an optimum `t` gives `t/(1+t)` and an unbounded program
/// (which happens exactly when `0 ∈ conv F`) gives 1.
pub fn c_general(fs: &[RatVec], us: &[RatVec]) -> Result<Rat, InvariantError> {
    if fs.is_empty() || us.is_empty() {
        return Err(InvariantError::EmptySubset);
    }
    if interior_membership(&RatVec::zeros(us[0].dim()), us)? != Membership::Interior {
        return Err(InvariantError::OriginNotInterior);
    }
    c_general_unchecked(fs, us)
}

fn c_general_unchecked(fs: &[RatVec], us: &[RatVec]) -> Result<Rat, InvariantError> {
    let (a, b) = (fs.len(), us.len());
    let dim = us[0].dim();
    let mut objective = vec![Rat::one(); a];
    objective.extend(vec![Rat::zero(); b]);
    let mut lp = LinearProgram::maximize(RatVec::new(objective));
    for c in 0..dim {
        let row: RatVec = fs.iter().chain(us).map(|p| p[c].clone()).collect();
        lp.eq(row, Rat::zero());
    }
    let mut sum_mu = vec![Rat::zero(); a];
    sum_mu.extend(vec![Rat::one(); b]);
    lp.eq(RatVec::new(sum_mu), Rat::one());
    Ok(match lp.solve()? {
        LpOutcome::Unbounded => Rat::one(),
        LpOutcome::Optimal(sol) => &sol.value / &(&sol.value + &Rat::one()),
        LpOutcome::Infeasible => unreachable!("the origin is a convex combination of U"),
    })
}

/// `lct(s_{k,u}) = (1/k) · 1/(1 + max_i ⟨u, v_i⟩)` for `u ∈ P ∩ (1/k)ℤⁿ`.
pub fn lct_monomial(f: &FanoPolytope, u: &RatVec, k: u64) -> Result<Rat, InvariantError> {
    if k == 0 {
        return Err(InvariantError::NonPositive);
    }
    check_in_polytope(f, std::slice::from_ref(u))?;
    if !u.scale(&Rat::from_int(k as i64)).is_integral() {
        return Err(InvariantError::WrongDenominator { point: u.clone(), k });
    }
    Ok(&exponent(&f.near_norm(u)) / &Rat::from_int(k as i64))
}

/// Bookkeeping for a subset search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SubsetQuery {
    pub k: u64,
    pub m: u64,
    pub candidates: u64,
    pub nodes_visited: u64,
    pub nodes_pruned: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads for the top level of the search; 1 runs inline.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { threads: 1 }
    }
}

/// Best subset found so far: largest `μ(F) = min_{conv F} ‖·‖`, ties broken
/// by the lexicographically least index tuple.
struct Incumbent {
    mu: Option<Rat>,
    tuple: Vec<usize>,
}

impl Incumbent {
    fn offer(&mut self, mu: Rat, tuple: &[usize]) {
        let better = match &self.mu {
            None => true,
            Some(b) => mu > *b || (mu == *b && tuple < self.tuple.as_slice()),
        };
        if better {
            self.mu = Some(mu);
            self.tuple = tuple.to_vec();
        }
    }

    /// True when no extension of `prefix` with value at most `bound` can
    /// replace the incumbent.
    fn dominates(&self, bound: &Rat, prefix: &[usize]) -> bool {
        match &self.mu {
            None => false,
            Some(b) => bound < b || (bound == b && self.tuple[..prefix.len()] < *prefix),
        }
    }
}

struct Search<'a> {
    f: &'a FanoPolytope,
    points: Vec<RatVec>,
    norms: Vec<Rat>,
    m: usize,
    incumbent: &'a Mutex<Incumbent>,
    visited: u64,
    pruned: u64,
}

impl Search<'_> {
    fn dominated(&self, bound: &Rat, prefix: &[usize]) -> bool {
        self.incumbent.lock().expect("incumbent lock").dominates(bound, prefix)
    }

    /// Depth-first over increasing index tuples extending `prefix`, whose
    /// value is `mu`. Every completion `F` satisfies `μ(F) ≤ μ(prefix)` and
    /// `μ(F) ≤ ‖p_j‖` for any added point `p_j`; since points are sorted by
    /// decreasing norm, the next index gives the tightest such bound.
    fn descend(&mut self, prefix: &mut Vec<usize>, mu: Rat) -> Result<(), InvariantError> {
        self.visited += 1;
        if prefix.len() == self.m {
            self.incumbent.lock().expect("incumbent lock").offer(mu, prefix);
            return Ok(());
        }
        let start = prefix.last().map_or(0, |&l| l + 1);
        let need = self.m - prefix.len();
        for j in start..=self.points.len() - need {
            let bound = if mu < self.norms[j] { mu.clone() } else { self.norms[j].clone() };
            prefix.push(j);
            if self.dominated(&bound, prefix) {
                prefix.pop();
                self.pruned += 1;
                // Later siblings have no larger bound and a larger tuple.
                break;
            }
            let subset: Vec<RatVec> = prefix.iter().map(|&i| self.points[i].clone()).collect();
            let child =
                if prefix.len() == 1 { self.norms[j].clone() } else { min_near_norm(self.f, &subset)?.0 };
            let child = if child < mu { child } else { mu.clone() };
            if self.dominated(&child, prefix) {
                self.pruned += 1;
            } else {
                self.descend(prefix, child)?;
            }
            prefix.pop();
        }
        Ok(())
    }
}

/// Lattice points of `P` at level `k`, sorted by decreasing near-norm and
/// then lexicographically, with their norms.
fn search_order(f: &FanoPolytope, k: u64) -> (Vec<RatVec>, Vec<Rat>) {
    let mut pts: Vec<(Rat, RatVec)> =
        f.polytope().lattice_points(k).into_iter().map(|x| (f.near_norm(&x), x)).collect();
    pts.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    pts.into_iter().map(|(n, x)| (x, n)).unzip()
}

/// `α_{k,m} = [1 + max_{|F| = m} min_{conv F} ‖·‖]⁻¹` over `m`-subsets of
/// `P ∩ (1/k)ℤⁿ`, by branch and bound.
pub fn alpha_km_search(
    f: &FanoPolytope,
    k: u64,
    m: u64,
    options: SearchOptions,
) -> Result<(AlphaValue, SubsetQuery), InvariantError> {
    if k == 0 || m == 0 {
        return Err(InvariantError::NonPositive);
    }
    let (points, norms) = search_order(f, k);
    let available = points.len() as u64;
    if m > available {
        return Err(InvariantError::NoInvariantSubspace { m, available });
    }
    let incumbent = Mutex::new(Incumbent { mu: None, tuple: Vec::new() });
    let m_us = m as usize;
    let first_indices: Vec<usize> = (0..=points.len() - m_us).collect();
    let run_branch = |first: usize| -> Result<(u64, u64), InvariantError> {
        let mut search = Search {
            f,
            points: points.clone(),
            norms: norms.clone(),
            m: m_us,
            incumbent: &incumbent,
            visited: 0,
            pruned: 0,
        };
        let bound = norms[first].clone();
        let mut prefix = vec![first];
        if search.dominated(&bound, &prefix) {
            return Ok((0, 1));
        }
        search.descend(&mut prefix, bound)?;
        Ok((search.visited, search.pruned))
    };
    let stats: Vec<(u64, u64)> = if options.threads <= 1 {
        first_indices.iter().map(|&i| run_branch(i)).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(options.threads).build().expect("thread pool");
        pool.install(|| first_indices.par_iter().map(|&i| run_branch(i)).collect::<Result<_, _>>())?
    };
    let best = incumbent.into_inner().expect("incumbent lock");
    let mu = best.mu.expect("at least one subset");
    let witness = best.tuple.iter().map(|&i| points[i].clone()).collect();
    let query = SubsetQuery {
        k,
        m,
        candidates: available,
        nodes_visited: stats.iter().map(|s| s.0).sum(),
        nodes_pruned: stats.iter().map(|s| s.1).sum(),
    };
    let value = AlphaValue {
        invariant: "alpha_km",
        value: exponent(&mu),
        witness: Witness::Subset(witness),
        path: FormulaPath::SubsetSearch,
        k,
        m: Some(m),
        group_order: 1,
    };
    Ok((value, query))
}

pub fn alpha_km(f: &FanoPolytope, k: u64, m: u64) -> Result<AlphaValue, InvariantError> {
    Ok(alpha_km_search(f, k, m, SearchOptions::default())?.0)
}

/// [`alpha_km`] for a group given explicitly; only the trivial group is accepted.
pub fn alpha_km_for_group(
    f: &FanoPolytope,
    h: &FiniteGroup,
    k: u64,
    m: u64,
    options: SearchOptions,
) -> Result<(AlphaValue, SubsetQuery), InvariantError> {
    if !h.is_trivial() {
        return Err(InvariantError::NonTrivialGroup);
    }
    alpha_km_search(f, k, m, options)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatEdge {
    pub from: RatVec,
    pub to: RatVec,
    pub midpoint: RatVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarPReport {
    pub holds: bool,
    pub max_gauge: Rat,
    pub argmax_vertices: Vec<RatVec>,
    pub flat_edge: Option<FlatEdge>,
}

/// Whether `‖·‖` attains its maximum on `P` only at vertices.
///
/// The maximum `λ*` is attained at vertices. A positive-dimensional face in
/// the level set `{‖·‖ = λ*}` contains an edge, and a convex function equal
/// to `λ*` at both endpoints and the midpoint of a segment is constant on it.
pub fn star_p_check(f: &FanoPolytope) -> Result<StarPReport, InvariantError> {
    let p = f.polytope();
    let norms: Vec<Rat> = p.vertices().iter().map(|v| f.near_norm(v)).collect();
    let top = norms.iter().max().expect("vertices").clone();
    let argmax: Vec<RatVec> =
        p.vertices().iter().zip(&norms).filter(|(_, n)| **n == top).map(|(v, _)| v.clone()).collect();
    let mut flat_edge = None;
    for e in p.edges()? {
        if norms[e.from] != top || norms[e.to] != top {
            continue;
        }
        let (a, b) = (&p.vertices()[e.from], &p.vertices()[e.to]);
        let mid = (a + b).scale(&Rat::new(1, 2));
        if f.near_norm(&mid) == top {
            flat_edge = Some(FlatEdge { from: a.clone(), to: b.clone(), midpoint: mid });
            break;
        }
    }
    Ok(StarPReport { holds: flat_edge.is_none(), max_gauge: top, argmax_vertices: argmax, flat_edge })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// `m = 1`: `α_{k,1} = α` for every `k`.
    StabilizesForAllK,
    /// `(∗_P)` holds and `m ≥ 2`: `α_{k,m} > α` for every `k`.
    Strict,
    /// `(∗_P)` fails: `α_{k,m} = α` for all large `k`. `first_k` is the least
    /// `k` found such that `α_{k',m} = α` for `k' = k, k+1, k+2`.
    Stabilizes { first_k: Option<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub m: u64,
    pub alpha: Rat,
    pub star_p_holds: bool,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// `(k, α_{k,m})` values computed along the way.
    pub samples: Vec<(u64, Rat)>,
}

/// Compares `α_{k,m}` with `α` as `k` grows. `max_k` bounds the direct
/// search for a stabilizing `k` and the strict-inequality spot checks.
pub fn stabilization_report(
    f: &FanoPolytope,
    m: u64,
    max_k: u64,
    options: SearchOptions,
) -> Result<StabilizationReport, InvariantError> {
    if m == 0 || max_k == 0 {
        return Err(InvariantError::NonPositive);
    }
    let alpha = alpha_kg(f, &FiniteGroup::trivial(f.dim()), 1)?.value;
    let star = star_p_check(f)?;
    let mut samples = Vec::new();
    let mut sample = |k: u64| -> Result<Option<Rat>, InvariantError> {
        match alpha_km_search(f, k, m, options) {
            Ok((v, _)) => {
                samples.push((k, v.value.clone()));
                Ok(Some(v.value))
            }
            Err(InvariantError::NoInvariantSubspace { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let verdict = if m == 1 {
        sample(1)?;
        Verdict::StabilizesForAllK
    } else if star.holds {
        for k in 1..=max_k.min(3) {
            sample(k)?;
        }
        Verdict::Strict
    } else {
        let mut run = 0;
        let mut first_k = None;
        for k in 1..=max_k {
            if sample(k)?.as_ref() == Some(&alpha) {
                run += 1;
                if run == 3 {
                    first_k = Some(k - 2);
                    break;
                }
            } else {
                run = 0;
            }
        }
        Verdict::Stabilizes { first_k }
    };
    Ok(StabilizationReport { m, alpha, star_p_holds: star.holds, verdict, samples })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KZero {
    pub k0: u64,
    pub witness: RatVec,
    pub alpha: Rat,
    pub group_order: usize,
}

/// Least `k` clearing the denominators of an alpha-minimizing projected
/// vertex `u₀`. Among several minimizers the one with the least such `k`
/// wins, then the lexicographically least.
pub fn k_zero(f: &FanoPolytope, h: &FiniteGroup) -> Result<KZero, InvariantError> {
    check_group(f, h)?;
    let (alpha, minimizers) = alpha_minimizers(f, h);
    let witness = minimizers
        .into_iter()
        .min_by(|a, b| a.denominator_lcm().cmp(&b.denominator_lcm()).then_with(|| a.cmp(b)))
        .expect("nonempty");
    Ok(KZero {
        k0: witness.denominator_lcm().to_u64().expect("small denominator"),
        witness,
        alpha,
        group_order: h.order(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryBound {
    pub centrally_symmetric: bool,
    pub alpha: Rat,
    /// `α ≤ 1/2`, with equality exactly for `P = -P`, and `α ≤ 1/3` otherwise.
    pub holds: bool,
}

pub fn symmetry_alpha_bound(f: &FanoPolytope) -> Result<SymmetryBound, InvariantError> {
    let alpha = alpha_kg(f, &FiniteGroup::trivial(f.dim()), 1)?.value;
    let symmetric = f.polytope().is_centrally_symmetric();
    let half = Rat::new(1, 2);
    let holds = alpha <= half && ((alpha == half) == symmetric) && (symmetric || alpha <= Rat::new(1, 3));
    Ok(SymmetryBound { centrally_symmetric: symmetric, alpha, holds })
}

/// The sufficient condition `α > n/(n+1)` for a Kähler-Einstein metric.
pub fn exceeds_tian_bound(alpha: &Rat, dim: usize) -> bool {
    *alpha > Rat::new(dim as i64, dim as i64 + 1)
}
