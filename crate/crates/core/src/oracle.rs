//! Independent verification paths: exact membership bisection for
//! singularity exponents, unpruned subset enumeration, and Ehrhart fits.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::invariants::{AlphaValue, FormulaPath, InvariantError, Witness};
use crate::kernel::{Rat, RatVec};
use crate::lp::{LinearProgram, LpError, LpOutcome};
use crate::polytope::{evaluate, interpolate, FanoPolytope, Halfspace, Polytope};

pub const DEFAULT_CEILING: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Classifies `x` against `conv(points)`.
///
/// For each direction `d = ±e_i` an LP maximizes `ε ≥ 0` with
/// `x + ε·d ∈ conv(points)`. Infeasibility means `x` is outside; `x` is
/// interior exactly when every one of the `2n` maxima is positive.
pub fn interior_membership(x: &RatVec, points: &[RatVec]) -> Result<Membership, LpError> {
    let n = x.dim();
    let s = points.len();
    if s == 0 {
        return Ok(Membership::Outside);
    }
    let mut objective = vec![Rat::zero(); s + 1];
    objective[s] = Rat::one();
    let objective = RatVec::new(objective);
    let mut interior = true;
    for axis in 0..n {
        for sign in [1, -1] {
            let mut lp = LinearProgram::maximize(objective.clone());
            for c in 0..n {
                let mut row: Vec<Rat> = points.iter().map(|p| p[c].clone()).collect();
                row.push(if c == axis { Rat::from_int(-sign) } else { Rat::zero() });
                lp.eq(RatVec::new(row), x[c].clone());
            }
            let mut ones = vec![Rat::one(); s + 1];
            ones[s] = Rat::zero();
            lp.eq(RatVec::new(ones), Rat::one());
            match lp.solve()? {
                LpOutcome::Infeasible => return Ok(Membership::Outside),
                LpOutcome::Optimal(sol) if sol.value.is_zero() => interior = false,
                _ => {}
            }
        }
    }
    Ok(if interior { Membership::Interior } else { Membership::Boundary })
}

/// A certified bracket `lower ≤ c* ≤ upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisectionResult {
    pub lower: Rat,
    pub upper: Rat,
    pub iterations: u32,
}

impl BisectionResult {
    pub fn contains(&self, c: &Rat) -> bool {
        self.lower <= *c && *c <= self.upper
    }

    pub fn width(&self) -> Rat {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> Rat {
        (&self.upper + &self.lower) * Rat::new(1, 2)
    }
}

/// `0 ∈ Int(c·conv F + (1-c)·conv U)`, with the Minkowski combination
/// generated by all pairwise sums.
fn below_threshold(c: &Rat, fs: &[RatVec], us: &[RatVec]) -> Result<bool, LpError> {
    let d = &Rat::one() - c;
    let sums: Vec<RatVec> =
        fs.iter().cartesian_product(us).map(|(f, u)| &f.scale(c) + &u.scale(&d)).sorted().dedup().collect();
    Ok(interior_membership(&RatVec::zeros(fs[0].dim()), &sums)? == Membership::Interior)
}

/// Bisects the threshold `c(F, U)` over `[0, 1]` with dyadic midpoints. The
/// origin is interior to the combination exactly for `c` below the threshold,
/// so every step is an exact test.
pub fn c_star_bisection(
    fs: &[RatVec],
    us: &[RatVec],
    iterations: u32,
) -> Result<BisectionResult, InvariantError> {
    if fs.is_empty() || us.is_empty() {
        return Err(InvariantError::EmptySubset);
    }
    if !below_threshold(&Rat::zero(), fs, us)? {
        return Err(InvariantError::OriginNotInterior);
    }
    let (mut lower, mut upper) = (Rat::zero(), Rat::one());
    for _ in 0..iterations {
        let mid = (&lower + &upper) * Rat::new(1, 2);
        if below_threshold(&mid, fs, us)? {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    Ok(BisectionResult { lower, upper, iterations })
}

/// `C(n, m)`, saturating.
pub fn binomial(n: u64, m: u64) -> u128 {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// The threshold `c(F, U)` with `conv U` given by its facets `⟨x, a⟩ ≤ b`
/// (`b > 0`): `max Σ y_i` subject to `-Σ y_i f_i ∈ conv U`, then `t/(1+t)`,
/// or 1 when unbounded. The slack basis is feasible, so no phase 1 is needed.
pub fn threshold_from_facets(fs: &[RatVec], facets: &[Halfspace]) -> Result<Rat, LpError> {
    let mut lp = LinearProgram::maximize(RatVec::new(vec![Rat::one(); fs.len()]));
    for h in facets {
        let row: RatVec = fs.iter().map(|f| -f.dot(&h.normal)).collect();
        lp.le(row, h.rhs.clone());
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(sol) => &sol.value / &(&sol.value + &Rat::one()),
        LpOutcome::Unbounded => Rat::one(),
        LpOutcome::Infeasible => unreachable!("y = 0 is feasible"),
    })
}

/// `α_{k,m}` by enumerating every `m`-subset of `P ∩ (1/k)ℤⁿ` and taking the
/// least threshold `c(F, P)`. No pruning.
pub fn alpha_km_bruteforce(
    f: &FanoPolytope,
    k: u64,
    m: u64,
    ceiling: u128,
) -> Result<AlphaValue, InvariantError> {
    if k == 0 || m == 0 {
        return Err(InvariantError::NonPositive);
    }
    let points = f.polytope().lattice_points(k);
    let available = points.len() as u64;
    if m > available {
        return Err(InvariantError::NoInvariantSubspace { m, available });
    }
    let count = binomial(available, m);
    if count > ceiling {
        return Err(InvariantError::CeilingExceeded { count, ceiling });
    }
    let facets = f.polytope().halfspaces();
    // least (threshold, index tuple), so the witness does not depend on scheduling
    let (value, subset) = (0..points.len())
        .combinations(m as usize)
        .par_bridge()
        .map(|subset| {
            let fs: Vec<RatVec> = subset.iter().map(|&i| points[i].clone()).collect();
            Ok::<_, InvariantError>((threshold_from_facets(&fs, facets)?, subset))
        })
        .try_reduce_with(|a, b| Ok(a.min(b)))
        .expect("at least one subset")?;
    Ok(AlphaValue {
        invariant: "alpha_km",
        value,
        witness: Witness::Subset(subset.iter().map(|&i| points[i].clone()).collect()),
        path: FormulaPath::BruteForce,
        k,
        m: Some(m),
        group_order: 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhrhartFit {
    /// `E(1), ..., E(kmax)`.
    pub counts: Vec<u64>,
    /// Coefficients `a_0, ..., a_n` of the interpolating polynomial.
    pub coefficients: Vec<Rat>,
    pub volume: Rat,
    pub predictions_match: bool,
    pub leading_matches_volume: bool,
    pub passed: bool,
}

/// Fits a degree-`n` polynomial through `E(1..=n+1)` and checks it against
/// the remaining counts up to `kmax` and against the volume.
pub fn ehrhart_fit_check(p: &Polytope, kmax: u64) -> EhrhartFit {
    let n = p.dim() as u64;
    let kmax = kmax.max(n + 1);
    let counts: Vec<u64> = (1..=kmax).map(|k| p.ehrhart_count(k)).collect();
    let xs: Vec<Rat> = (1..=n + 1).map(|k| Rat::from_int(k as i64)).collect();
    let ys: Vec<Rat> = counts[..=n as usize].iter().map(|&c| Rat::from_int(c as i64)).collect();
    let coefficients = interpolate(&xs, &ys);
    let predictions_match = (n + 2..=kmax).all(|k| {
        evaluate(&coefficients, &Rat::from_int(k as i64)) == Rat::from_int(counts[k as usize - 1] as i64)
    });
    let volume = p.volume();
    let leading_matches_volume = coefficients[n as usize] == volume;
    EhrhartFit {
        passed: predictions_match && leading_matches_volume,
        counts,
        coefficients,
        volume,
        predictions_match,
        leading_matches_volume,
    }
}
