//! Exact two-phase simplex on a dense tableau.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, ratio ties
//! broken by lowest basic variable index), so every solve terminates and is
//! deterministic. Each optimal solve is certified before it is returned: the
//! primal point is checked against every original constraint and a dual
//! multiplier vector is checked for dual feasibility and zero duality gap.

use thiserror::Error;

use crate::kernel::{Rat, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `optimize objective·x` subject to equality rows, `≤` rows and per-variable
/// lower bounds (`None` = free variable). Variables default to `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    objective: RatVec,
    equalities: Vec<(RatVec, Rat)>,
    inequalities: Vec<(RatVec, Rat)>,
    lower_bounds: Vec<Option<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rat,
    pub point: RatVec,
    /// Row multipliers, equality rows first and then `≤` rows, in insertion
    /// order. When every variable has lower bound 0 they satisfy
    /// `value = Σ duals[i]·rhs[i]`.
    pub duals: Vec<Rat>,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        self.optimal().map(|s| &s.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, program has {expected} variables")]
    DimensionMismatch { row: usize, expected: usize, found: usize },
    #[error("simplex exceeded its pivot ceiling of {limit}")]
    PivotLimit { limit: usize },
    #[error("optimality certificate rejected: {0}")]
    CertificateRejected(&'static str),
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: RatVec) -> Self {
        let n = objective.dim();
        LinearProgram {
            sense,
            objective,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            lower_bounds: vec![Some(Rat::zero()); n],
        }
    }

    pub fn minimize(objective: RatVec) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: RatVec) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    /// Adds `row·x = rhs`.
    pub fn eq(&mut self, row: RatVec, rhs: Rat) -> &mut Self {
        self.equalities.push((row, rhs));
        self
    }

    /// Adds `row·x ≤ rhs`.
    pub fn le(&mut self, row: RatVec, rhs: Rat) -> &mut Self {
        self.inequalities.push((row, rhs));
        self
    }

    /// Adds `row·x ≥ rhs` (stored as `-row·x ≤ -rhs`).
    pub fn ge(&mut self, row: RatVec, rhs: Rat) -> &mut Self {
        self.inequalities.push((row.neg(), -rhs));
        self
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<Rat>) -> &mut Self {
        self.lower_bounds[var] = bound;
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_lower_bound(var, None)
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        Solver::default().solve(self)
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let rows = self.equalities.iter().chain(&self.inequalities);
        for (i, (row, _)) in rows.enumerate() {
            if row.dim() != n {
                return Err(LpError::DimensionMismatch { row: i, expected: n, found: row.dim() });
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, x: &RatVec) -> bool {
        x.dim() == self.num_vars()
            && self.equalities.iter().all(|(a, b)| &a.dot(x) == b)
            && self.inequalities.iter().all(|(a, b)| &a.dot(x) <= b)
            && self.lower_bounds.iter().zip(x.iter()).all(|(lb, v)| lb.as_ref().is_none_or(|l| v >= l))
    }
}

/// Simplex driver with a configurable pivot ceiling.
#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    /// Maximum pivots across both phases. `None` uses `10·(rows + columns)`
    /// of the standard-form tableau.
    pub pivot_limit: Option<usize>,
}

/// One column of the standard form in terms of an original variable.
#[derive(Clone, Copy)]
enum ColumnKind {
    Structural { var: usize, negated: bool },
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    cost: Vec<Rat>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
    limit: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.limit {
            return Err(LpError::PivotLimit { limit: self.limit });
        }
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.width).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &k in &nz {
                self.cost[k] -= &f * &pivot_row[k];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        Ok(())
    }

    fn run(&mut self, allowed: &[bool]) -> Result<Phase, LpError> {
        loop {
            let Some(enter) = (0..self.width).find(|&j| allowed[j] && self.cost[j].is_negative()) else {
                return Ok(Phase::Optimal);
            };
            let rhs = self.rhs();
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Ok(Phase::Unbounded),
                Some((r, _)) => self.pivot(r, enter)?,
            }
        }
    }
}

impl Solver {
    pub fn with_pivot_limit(limit: usize) -> Self {
        Solver { pivot_limit: Some(limit) }
    }

    pub fn solve(&self, lp: &LinearProgram) -> Result<LpOutcome, LpError> {
        lp.validate()?;
        let n = lp.num_vars();

        // Columns for original variables: shifted (x = l + x') or split (x = x⁺ - x⁻).
        let mut kinds = Vec::new();
        let mut shift = vec![Rat::zero(); n];
        for (var, lb) in lp.lower_bounds.iter().enumerate() {
            match lb {
                Some(l) => {
                    shift[var] = l.clone();
                    kinds.push(ColumnKind::Structural { var, negated: false });
                }
                None => {
                    kinds.push(ColumnKind::Structural { var, negated: false });
                    kinds.push(ColumnKind::Structural { var, negated: true });
                }
            }
        }
        let structural = kinds.len();
        let shift_vec = RatVec::new(shift);

        let all_rows: Vec<(&RatVec, &Rat, bool)> = lp
            .equalities
            .iter()
            .map(|(a, b)| (a, b, false))
            .chain(lp.inequalities.iter().map(|(a, b)| (a, b, true)))
            .collect();
        let m = all_rows.len();
        let slack_count = lp.inequalities.len();

        let coeff = |a: &RatVec, kind: ColumnKind| -> Rat {
            match kind {
                ColumnKind::Structural { var, negated: false } => a[var].clone(),
                ColumnKind::Structural { var, negated: true } => -&a[var],
                _ => Rat::zero(),
            }
        };

        // Row signs so that every right-hand side is non-negative.
        let mut signs = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (a, b, _) in &all_rows {
            let b = *b - &a.dot(&shift_vec);
            if b.is_negative() {
                signs.push(-1i8);
                rhs.push(-b);
            } else {
                signs.push(1i8);
                rhs.push(b);
            }
        }

        // Identity column per row: the slack when it enters with +1, else an artificial.
        let mut identity_col = vec![0usize; m];
        let mut artificial_rows = Vec::new();
        let mut slack_col_of_row = vec![None; m];
        let mut next = structural;
        for (i, (_, _, is_le)) in all_rows.iter().enumerate() {
            if *is_le {
                kinds.push(ColumnKind::Slack);
                slack_col_of_row[i] = Some(next);
                if signs[i] > 0 {
                    identity_col[i] = next;
                }
                next += 1;
            }
        }
        debug_assert_eq!(next, structural + slack_count);
        for i in 0..m {
            let needs_artificial = !(all_rows[i].2 && signs[i] > 0);
            if needs_artificial {
                kinds.push(ColumnKind::Artificial);
                identity_col[i] = next;
                artificial_rows.push(i);
                next += 1;
            }
        }
        let width = kinds.len();

        let mut rows = Vec::with_capacity(m);
        for (i, (a, _, _)) in all_rows.iter().enumerate() {
            let s = Rat::from_int(signs[i] as i64);
            let mut row = vec![Rat::zero(); width + 1];
            for (j, kind) in kinds.iter().enumerate().take(structural) {
                let v = coeff(a, *kind);
                if !v.is_zero() {
                    row[j] = if signs[i] < 0 { -v } else { v };
                }
            }
            if let Some(sc) = slack_col_of_row[i] {
                row[sc] = s.clone();
            }
            row[identity_col[i]] = Rat::one();
            row[width] = rhs[i].clone();
            rows.push(row);
        }
        let original_rows = rows.clone();

        let limit = self.pivot_limit.unwrap_or(10 * (m + width));
        let is_artificial: Vec<bool> = kinds.iter().map(|k| matches!(k, ColumnKind::Artificial)).collect();

        // Phase 1: minimize the sum of artificials.
        let mut cost = vec![Rat::zero(); width + 1];
        for &i in &artificial_rows {
            for (k, v) in rows[i].iter().enumerate() {
                if k == width || !is_artificial[k] {
                    cost[k] -= v;
                }
            }
        }
        let mut tab = Tableau { rows, cost, basis: identity_col.clone(), width, pivots: 0, limit };
        if !artificial_rows.is_empty() {
            let allowed = vec![true; width];
            tab.run(&allowed)?;
            if !tab.cost[width].is_zero() {
                return Ok(LpOutcome::Infeasible);
            }
            for r in 0..m {
                if !is_artificial[tab.basis[r]] {
                    continue;
                }
                if let Some(c) = (0..width).find(|&c| !is_artificial[c] && !tab.rows[r][c].is_zero()) {
                    tab.pivot(r, c)?;
                }
            }
        }

        // Phase 2 in minimization form.
        let min_cost: Vec<Rat> = kinds
            .iter()
            .map(|kind| {
                let c = coeff(&lp.objective, *kind);
                match lp.sense {
                    Sense::Minimize => c,
                    Sense::Maximize => -c,
                }
            })
            .collect();
        let mut cost = vec![Rat::zero(); width + 1];
        cost[..width].clone_from_slice(&min_cost);
        for (r, &b) in tab.basis.iter().enumerate() {
            let cb = &min_cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in tab.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    cost[k] -= cb * v;
                }
            }
        }
        tab.cost = cost;
        let allowed: Vec<bool> = is_artificial.iter().map(|a| !a).collect();
        if let Phase::Unbounded = tab.run(&allowed)? {
            return Ok(LpOutcome::Unbounded);
        }

        // Primal point.
        let mut std_x = vec![Rat::zero(); width];
        for (r, &b) in tab.basis.iter().enumerate() {
            std_x[b] = tab.rows[r][width].clone();
        }
        if std_x.iter().zip(&is_artificial).any(|(v, &a)| a && !v.is_zero()) {
            return Err(LpError::CertificateRejected("artificial variable left positive"));
        }
        let mut x: Vec<Rat> = shift_vec.coords().to_vec();
        for (j, kind) in kinds.iter().enumerate() {
            if let ColumnKind::Structural { var, negated } = kind {
                if *negated {
                    x[*var] -= &std_x[j];
                } else {
                    x[*var] += &std_x[j];
                }
            }
        }
        let point = RatVec::new(x);
        if !lp.is_feasible(&point) {
            return Err(LpError::CertificateRejected("primal point infeasible"));
        }
        let value = lp.objective.dot(&point);

        // Dual multipliers from the reduced costs of the identity columns.
        let y: Vec<Rat> = identity_col.iter().map(|&c| -&tab.cost[c]).collect();
        let std_value: Rat = min_cost.iter().zip(&std_x).map(|(c, x)| c * x).sum();
        for j in 0..width {
            if is_artificial[j] {
                continue;
            }
            let mut reduced = min_cost[j].clone();
            for (i, row) in original_rows.iter().enumerate() {
                if !row[j].is_zero() && !y[i].is_zero() {
                    reduced -= &y[i] * &row[j];
                }
            }
            if reduced.is_negative() {
                return Err(LpError::CertificateRejected("dual infeasible"));
            }
        }
        let dual_value: Rat = y.iter().zip(&original_rows).map(|(yi, row)| yi * &row[width]).sum();
        if dual_value != std_value {
            return Err(LpError::CertificateRejected("duality gap"));
        }

        let duals = y
            .iter()
            .zip(&signs)
            .map(|(yi, &s)| {
                let v = if s < 0 { -yi } else { yi.clone() };
                match lp.sense {
                    Sense::Minimize => v,
                    Sense::Maximize => -v,
                }
            })
            .collect();

        Ok(LpOutcome::Optimal(LpSolution { value, point, duals, pivots: tab.pivots }))
    }
}
