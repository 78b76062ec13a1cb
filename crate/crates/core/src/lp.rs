//! Exact rational linear feasibility.
//!
//! A dense two-phase simplex with Bland's rule. Every answer carries a
//! certificate that [`verify_certificate`] re-checks from the problem data
//! alone: a primal point for feasible problems, Farkas multipliers otherwise.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CpsdError, Result};
use crate::exact::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "exact::rational_vec_serde")]
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    #[serde(with = "exact::rational_serde")]
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(a, v)| !a.is_zero() && !v.is_zero())
            .map(|(a, v)| a * v)
            .sum()
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    pub vars: usize,
    pub constraints: Vec<Constraint>,
    /// `nonneg[j]` marks `x_j ≥ 0`; unmarked variables are free.
    pub nonneg: Vec<bool>,
}

impl LpProblem {
    /// A problem whose variables are all sign-constrained.
    pub fn nonnegative(vars: usize) -> Self {
        Self {
            vars,
            constraints: Vec::new(),
            nonneg: vec![true; vars],
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints
            .push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn validate(&self) -> Result<()> {
        if self.nonneg.len() != self.vars {
            return Err(CpsdError::DimensionMismatch {
                expected: self.vars,
                found: self.nonneg.len(),
            });
        }
        for c in &self.constraints {
            if c.coeffs.len() != self.vars {
                return Err(CpsdError::DimensionMismatch {
                    expected: self.vars,
                    found: c.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Feasible,
    Infeasible,
}

/// Feasibility answer with its proof.
///
/// Farkas multipliers `y` follow the sign convention `y_i ≤ 0` on `≤` rows,
/// `y_i ≥ 0` on `≥` rows and free on equalities. Then `c = Σ y_i a_i` must
/// satisfy `c_j ≤ 0` on nonnegative variables, `c_j = 0` on free ones, and
/// `Σ y_i b_i > 0`: any feasible `x` would give `0 ≥ c·x ≥ yᵀb > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpCertificate {
    pub status: LpStatus,
    #[serde(
        default,
        with = "exact::rational_opt_vec_serde",
        skip_serializing_if = "Option::is_none"
    )]
    pub primal: Option<Vec<Rational>>,
    #[serde(
        default,
        with = "exact::rational_opt_vec_serde",
        skip_serializing_if = "Option::is_none"
    )]
    pub farkas: Option<Vec<Rational>>,
}

impl LpCertificate {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

/// Re-checks a certificate against the problem, independent of the solver.
pub fn verify_certificate(p: &LpProblem, c: &LpCertificate) -> bool {
    if p.validate().is_err() {
        return false;
    }
    match c.status {
        LpStatus::Feasible => match &c.primal {
            Some(x) if x.len() == p.vars => {
                x.iter()
                    .zip(&p.nonneg)
                    .all(|(v, &nn)| !nn || !v.is_negative())
                    && p.constraints.iter().all(|con| con.holds_at(x))
            }
            _ => false,
        },
        LpStatus::Infeasible => match &c.farkas {
            Some(y) if y.len() == p.constraints.len() => farkas_holds(p, y),
            _ => false,
        },
    }
}

fn farkas_holds(p: &LpProblem, y: &[Rational]) -> bool {
    for (yi, con) in y.iter().zip(&p.constraints) {
        let ok = match con.relation {
            Relation::Le => !yi.is_positive(),
            Relation::Ge => !yi.is_negative(),
            Relation::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    for j in 0..p.vars {
        let cj: Rational = y
            .iter()
            .zip(&p.constraints)
            .filter(|(yi, con)| !yi.is_zero() && !con.coeffs[j].is_zero())
            .map(|(yi, con)| yi * &con.coeffs[j])
            .sum();
        if p.nonneg[j] && cj.is_positive() {
            return false;
        }
        if !p.nonneg[j] && !cj.is_zero() {
            return false;
        }
    }
    let beta: Rational = y
        .iter()
        .zip(&p.constraints)
        .map(|(yi, con)| yi * &con.rhs)
        .sum();
    beta.is_positive()
}

/// Result of [`minimize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Unbounded,
    Infeasible(LpCertificate),
}

/// Decides feasibility and returns a verified certificate.
pub fn solve_feasibility(p: &LpProblem, max_pivots: u64) -> Result<LpCertificate> {
    p.validate()?;
    let mut tab = Tableau::build(p);
    let mut pivots = 0u64;
    tab.run(&mut pivots, max_pivots, true)?;
    let cert = if tab.objective_value().is_zero() {
        LpCertificate {
            status: LpStatus::Feasible,
            primal: Some(tab.primal()),
            farkas: None,
        }
    } else {
        LpCertificate {
            status: LpStatus::Infeasible,
            primal: None,
            farkas: Some(tab.farkas()),
        }
    };
    if !verify_certificate(p, &cert) {
        // a solver defect, never an answer
        return Err(CpsdError::Certificate(
            "simplex produced a certificate that failed verification".into(),
        ));
    }
    Ok(cert)
}

/// Minimizes `objective · x`. Diagnostic use only; feasibility answers come
/// from [`solve_feasibility`].
pub fn minimize(p: &LpProblem, objective: &[Rational], max_pivots: u64) -> Result<LpOutcome> {
    p.validate()?;
    if objective.len() != p.vars {
        return Err(CpsdError::DimensionMismatch {
            expected: p.vars,
            found: objective.len(),
        });
    }
    let mut tab = Tableau::build(p);
    let mut pivots = 0u64;
    tab.run(&mut pivots, max_pivots, true)?;
    if !tab.objective_value().is_zero() {
        let cert = LpCertificate {
            status: LpStatus::Infeasible,
            primal: None,
            farkas: Some(tab.farkas()),
        };
        return Ok(LpOutcome::Infeasible(cert));
    }
    tab.drive_out_artificials();
    tab.set_phase_two_costs(objective);
    match tab.run(&mut pivots, max_pivots, false)? {
        RunEnd::Optimal => {
            let x = tab.primal();
            let value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
            Ok(LpOutcome::Optimal { x, value })
        }
        RunEnd::Unbounded => Ok(LpOutcome::Unbounded),
    }
}

enum RunEnd {
    Optimal,
    Unbounded,
}

#[derive(Clone, Copy)]
enum ColumnKind {
    /// Original variable `j` with sign `+1` or `-1` (free variables split).
    Structural {
        var: usize,
        negated: bool,
    },
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // each row: ncols coefficients then rhs
    cost: Vec<Rational>,      // reduced costs, last entry = -objective value
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    // per row: unit column present in the initial basis, its phase-one cost, and the row sign
    unit_col: Vec<usize>,
    unit_cost: Vec<Rational>,
    row_sign: Vec<bool>, // true when the row was negated
    vars: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Self {
        let m = p.constraints.len();
        let mut kinds = Vec::new();
        let mut col_of_var = Vec::with_capacity(p.vars);
        for j in 0..p.vars {
            col_of_var.push(kinds.len());
            kinds.push(ColumnKind::Structural {
                var: j,
                negated: false,
            });
            if !p.nonneg[j] {
                kinds.push(ColumnKind::Structural {
                    var: j,
                    negated: true,
                });
            }
        }
        let slack_rows: Vec<usize> = (0..m)
            .filter(|&i| p.constraints[i].relation != Relation::Eq)
            .collect();
        let mut slack_col = vec![usize::MAX; m];
        for &i in &slack_rows {
            slack_col[i] = kinds.len();
            kinds.push(ColumnKind::Slack);
        }
        // decide which rows need an artificial column
        let mut row_sign = vec![false; m];
        let mut needs_art = vec![false; m];
        for (i, con) in p.constraints.iter().enumerate() {
            row_sign[i] = con.rhs.is_negative();
            let slack_coeff_positive = match con.relation {
                Relation::Le => !row_sign[i],
                Relation::Ge => row_sign[i],
                Relation::Eq => false,
            };
            needs_art[i] = !slack_coeff_positive;
        }
        let mut art_col = vec![usize::MAX; m];
        for i in 0..m {
            if needs_art[i] {
                art_col[i] = kinds.len();
                kinds.push(ColumnKind::Artificial);
            }
        }
        let ncols = kinds.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut unit_cost = Vec::with_capacity(m);
        for (i, con) in p.constraints.iter().enumerate() {
            let sign = if row_sign[i] {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut row = vec![Rational::zero(); ncols + 1];
            for (j, a) in con.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let v = a * &sign;
                let c = col_of_var[j];
                if !p.nonneg[j] {
                    row[c + 1] = -v.clone();
                }
                row[c] = v;
            }
            match con.relation {
                Relation::Le => row[slack_col[i]] = sign.clone(),
                Relation::Ge => row[slack_col[i]] = -sign.clone(),
                Relation::Eq => {}
            }
            row[ncols] = &con.rhs * &sign;
            if needs_art[i] {
                row[art_col[i]] = Rational::one();
                basis.push(art_col[i]);
                unit_col.push(art_col[i]);
                unit_cost.push(Rational::one());
            } else {
                basis.push(slack_col[i]);
                unit_col.push(slack_col[i]);
                unit_cost.push(Rational::zero());
            }
            rows.push(row);
        }
        // phase-one reduced costs: c_j - Σ_{artificial rows} a_ij
        let mut cost = vec![Rational::zero(); ncols + 1];
        for (j, k) in kinds.iter().enumerate() {
            if matches!(k, ColumnKind::Artificial) {
                cost[j] = Rational::one();
            }
        }
        for i in 0..m {
            if needs_art[i] {
                for j in 0..=ncols {
                    if !rows[i][j].is_zero() {
                        let v = rows[i][j].clone();
                        cost[j] -= v;
                    }
                }
            }
        }
        Self {
            rows,
            cost,
            basis,
            kinds,
            unit_col,
            unit_cost,
            row_sign,
            vars: p.vars,
        }
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn objective_value(&self) -> Rational {
        -self.cost[self.ncols()].clone()
    }

    fn is_artificial(&self, j: usize) -> bool {
        matches!(self.kinds[j], ColumnKind::Artificial)
    }

    fn run(&mut self, pivots: &mut u64, max_pivots: u64, phase_one: bool) -> Result<RunEnd> {
        let ncols = self.ncols();
        loop {
            // Bland: lowest-index improving column
            let entering = (0..ncols).find(|&j| {
                self.cost[j].is_negative() && !(self.is_artificial(j) && !self.basis.contains(&j))
            });
            let Some(e) = entering else {
                return Ok(RunEnd::Optimal);
            };
            if phase_one && self.objective_value().is_zero() {
                return Ok(RunEnd::Optimal);
            }
            // ratio test, ties broken by lowest basic column index
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[ncols] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((l, _)) = leave else {
                return Ok(RunEnd::Unbounded);
            };
            *pivots += 1;
            if *pivots > max_pivots {
                return Err(CpsdError::PivotLimit(max_pivots));
            }
            self.pivot(l, e);
        }
    }

    fn pivot(&mut self, l: usize, e: usize) {
        let ncols = self.ncols();
        let inv = Rational::one() / &self.rows[l][e];
        for v in self.rows[l].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let nz: Vec<usize> = (0..=ncols)
            .filter(|&j| !self.rows[l][j].is_zero())
            .collect();
        let prow = std::mem::take(&mut self.rows[l]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == l || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                row[j] -= d;
            }
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.cost[j] -= d;
            }
        }
        self.rows[l] = prow;
        self.basis[l] = e;
    }

    fn primal(&self) -> Vec<Rational> {
        let ncols = self.ncols();
        let mut x = vec![Rational::zero(); self.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if let ColumnKind::Structural { var, negated } = self.kinds[b] {
                let v = &self.rows[i][ncols];
                if negated {
                    x[var] -= v;
                } else {
                    x[var] += v;
                }
            }
        }
        x
    }

    /// Phase-one duals mapped back to the original row orientation.
    fn farkas(&self) -> Vec<Rational> {
        (0..self.rows.len())
            .map(|i| {
                // y_i = c_unit - reduced cost of the unit column
                let y = &self.unit_cost[i] - &self.cost[self.unit_col[i]];
                if self.row_sign[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn drive_out_artificials(&mut self) {
        let ncols = self.ncols();
        let mut i = 0;
        while i < self.rows.len() {
            if self.is_artificial(self.basis[i]) {
                let col =
                    (0..ncols).find(|&j| !self.is_artificial(j) && !self.rows[i][j].is_zero());
                match col {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant row
                        self.rows.remove(i);
                        self.basis.remove(i);
                        self.unit_col.remove(i);
                        self.unit_cost.remove(i);
                        self.row_sign.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        // artificials may never re-enter
        for j in 0..ncols {
            if self.is_artificial(j) {
                for row in &mut self.rows {
                    row[j] = Rational::zero();
                }
            }
        }
    }

    fn set_phase_two_costs(&mut self, objective: &[Rational]) {
        let ncols = self.ncols();
        let col_cost = |k: &ColumnKind| match *k {
            ColumnKind::Structural { var, negated } => {
                if negated {
                    -objective[var].clone()
                } else {
                    objective[var].clone()
                }
            }
            _ => Rational::zero(),
        };
        let mut cost: Vec<Rational> = self.kinds.iter().map(col_cost).collect();
        cost.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = col_cost(&self.kinds[b]);
            if cb.is_zero() {
                continue;
            }
            for j in 0..=ncols {
                if !self.rows[i][j].is_zero() {
                    let d = &cb * &self.rows[i][j];
                    cost[j] -= d;
                }
            }
        }
        for j in 0..ncols {
            if self.is_artificial(j) {
                cost[j] = Rational::zero();
            }
        }
        self.cost = cost;
    }
}
