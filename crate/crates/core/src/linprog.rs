//! Dense two-phase simplex.
//!
//! Maximizes `c·z` subject to `G z <= h` and optional bounds on `z`. Pivoting
//! uses Bland's rule with lowest-index tie breaking, so identical inputs always
//! give identical outputs. Every optimal point is re-checked against the
//! original constraints before it is returned.

use crate::error::{Error, Result};

/// Tolerance on row-normalized constraint violation.
pub const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const REL_PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub var_lower: Option<Vec<f64>>,
    pub var_upper: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub z: Vec<f64>,
    pub objective_value: f64,
}

impl LpProblem {
    /// Free variables, no constraints.
    pub fn maximize(objective: Vec<f64>) -> Self {
        LpProblem {
            objective,
            ineq_lhs: Vec::new(),
            ineq_rhs: Vec::new(),
            var_lower: None,
            var_upper: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.ineq_lhs.push(row);
        self.ineq_rhs.push(rhs);
        self
    }

    pub fn ge(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.le(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn lower_bounds(&mut self, lo: Vec<f64>) -> &mut Self {
        self.var_lower = Some(lo);
        self
    }

    pub fn upper_bounds(&mut self, hi: Vec<f64>) -> &mut Self {
        self.var_upper = Some(hi);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::invalid("LP has no variables"));
        }
        if self.ineq_lhs.len() != self.ineq_rhs.len() {
            return Err(Error::dims(
                "constraint rows and right-hand sides differ in count",
            ));
        }
        if self.ineq_lhs.iter().any(|r| r.len() != n) {
            return Err(Error::dims(
                "constraint row length differs from variable count",
            ));
        }
        for b in [&self.var_lower, &self.var_upper].into_iter().flatten() {
            if b.len() != n {
                return Err(Error::dims(
                    "bound vector length differs from variable count",
                ));
            }
        }
        let finite = self
            .objective
            .iter()
            .chain(self.ineq_rhs.iter())
            .chain(self.ineq_lhs.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("LP data must be finite"));
        }
        let nan_bound = [&self.var_lower, &self.var_upper]
            .into_iter()
            .flatten()
            .flatten()
            .any(|v| v.is_nan());
        if nan_bound {
            return Err(Error::invalid("NaN variable bound"));
        }
        Ok(())
    }

    fn lower(&self, j: usize) -> f64 {
        self.var_lower.as_ref().map_or(f64::NEG_INFINITY, |l| l[j])
    }

    fn upper(&self, j: usize) -> f64 {
        self.var_upper.as_ref().map_or(f64::INFINITY, |u| u[j])
    }

    /// Largest normalized violation of `z` against rows and bounds.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (row, &h) in self.ineq_lhs.iter().zip(&self.ineq_rhs) {
            let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                worst = worst.max(-h);
                continue;
            }
            let lhs: f64 = row.iter().zip(z).map(|(a, b)| a * b).sum();
            worst = worst.max((lhs - h) / scale / (1.0 + h.abs() / scale));
        }
        for (j, &v) in z.iter().enumerate() {
            let (l, u) = (self.lower(j), self.upper(j));
            if l.is_finite() {
                worst = worst.max((l - v) / (1.0 + l.abs()));
            }
            if u.is_finite() {
                worst = worst.max((v - u) / (1.0 + u.abs()));
            }
        }
        worst
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Copy)]
enum VarMap {
    /// z = l + w
    Shift { col: usize, l: f64 },
    /// z = u - w
    Flip { col: usize, u: f64 },
    /// z = w⁺ - w⁻
    Split { pos: usize, neg: usize },
}

pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let n = p.num_vars();
    for j in 0..n {
        if p.lower(j) > p.upper(j) {
            return Ok(infeasible(n));
        }
    }

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    for j in 0..n {
        let (l, u) = (p.lower(j), p.upper(j));
        let m = if l.is_finite() {
            VarMap::Shift { col: ncols, l }
        } else if u.is_finite() {
            VarMap::Flip { col: ncols, u }
        } else {
            ncols += 1;
            VarMap::Split {
                pos: ncols - 1,
                neg: ncols,
            }
        };
        ncols += 1;
        maps.push(m);
    }

    // Rows in transformed variables.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (g, &h) in p.ineq_lhs.iter().zip(&p.ineq_rhs) {
        let mut r = vec![0.0; ncols];
        let mut rhs = h;
        for (j, &a) in g.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shift { col, l } => {
                    r[col] += a;
                    rhs -= a * l;
                }
                VarMap::Flip { col, u } => {
                    r[col] -= a;
                    rhs -= a * u;
                }
                VarMap::Split { pos, neg } => {
                    r[pos] += a;
                    r[neg] -= a;
                }
            }
        }
        rows.push((r, rhs));
    }
    for j in 0..n {
        if let VarMap::Shift { col, l } = maps[j] {
            let u = p.upper(j);
            if u.is_finite() {
                let mut r = vec![0.0; ncols];
                r[col] = 1.0;
                rows.push((r, u - l));
            }
        }
    }
    let mut cost = vec![0.0; ncols];
    for (j, &c) in p.objective.iter().enumerate() {
        match maps[j] {
            VarMap::Shift { col, .. } => cost[col] += c,
            VarMap::Flip { col, .. } => cost[col] -= c,
            VarMap::Split { pos, neg } => {
                cost[pos] += c;
                cost[neg] -= c;
            }
        }
    }

    // Normalize and drop empty rows.
    let mut kept = Vec::with_capacity(rows.len());
    for (mut r, mut h) in rows {
        let s = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if s == 0.0 {
            if h < -FEAS_TOL {
                return Ok(infeasible(n));
            }
            continue;
        }
        r.iter_mut().for_each(|v| *v /= s);
        h /= s;
        kept.push((r, h));
    }

    let w = match Tableau::run(&kept, &cost, ncols)? {
        Outcome::Optimal(w) => w,
        Outcome::Infeasible => return Ok(infeasible(n)),
        Outcome::Unbounded => {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                z: vec![0.0; n],
                objective_value: f64::INFINITY,
            })
        }
    };

    let z: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, l } => l + w[col],
            VarMap::Flip { col, u } => u - w[col],
            VarMap::Split { pos, neg } => w[pos] - w[neg],
        })
        .collect();
    if p.max_violation(&z) > FEAS_TOL {
        return Err(Error::NumericalFailure);
    }
    let objective_value = p.objective.iter().zip(&z).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        z,
        objective_value,
    })
}

/// Relative slack on the primary optimum when breaking ties.
const TIE_SLACK: f64 = 1e-12;

/// Solves `p`, then for each objective in `ties` maximizes it over the points
/// that stay optimal for everything before it. Optimal faces that are not a
/// single point then resolve to the same vertex regardless of pivoting order.
/// The reported objective value is the primary one.
pub fn solve_lexicographic(p: &LpProblem, ties: &[Vec<f64>]) -> Result<LpSolution> {
    let first = solve(p)?;
    if first.status != LpStatus::Optimal {
        return Ok(first);
    }
    let mut q = p.clone();
    let mut best = first.clone();
    let mut value = first.objective_value;
    for t in ties {
        let floor = value - TIE_SLACK * value.abs().max(1.0);
        q.ge(q.objective.clone(), floor);
        q.objective = t.clone();
        let next = solve(&q)?;
        if next.status != LpStatus::Optimal {
            break;
        }
        value = next.objective_value;
        best = next;
    }
    best.objective_value = p.objective.iter().zip(&best.z).map(|(a, b)| a * b).sum();
    Ok(best)
}

/// Unit objectives `e_j` for `j` in `vars`, in order.
pub fn unit_ties(vars: std::ops::Range<usize>, nv: usize) -> Vec<Vec<f64>> {
    vars.map(|j| {
        let mut e = vec![0.0; nv];
        e[j] = 1.0;
        e
    })
    .collect()
}

fn infeasible(n: usize) -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        z: vec![0.0; n],
        objective_value: f64::NEG_INFINITY,
    }
}

enum Outcome {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    m: usize,
    /// Columns excluding the right-hand side.
    width: usize,
    /// Row stride is `width + 1`; the last entry of each row is the rhs.
    a: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    first_art: usize,
}

impl Tableau {
    fn run(rows: &[(Vec<f64>, f64)], cost: &[f64], ncols: usize) -> Result<Outcome> {
        let m = rows.len();
        let n_art = rows.iter().filter(|(_, h)| *h < 0.0).count();
        let first_slack = ncols;
        let first_art = ncols + m;
        let width = ncols + m + n_art;
        let stride = width + 1;
        let mut a = vec![0.0; m * stride];
        let mut basis = vec![0; m];
        let mut next_art = first_art;
        for (i, (r, h)) in rows.iter().enumerate() {
            let row = &mut a[i * stride..(i + 1) * stride];
            let sign = if *h < 0.0 { -1.0 } else { 1.0 };
            for (k, v) in r.iter().enumerate() {
                row[k] = sign * v;
            }
            row[first_slack + i] = sign;
            row[width] = sign * h;
            if *h < 0.0 {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            } else {
                basis[i] = first_slack + i;
            }
        }
        let mut t = Tableau {
            m,
            width,
            a,
            obj: vec![0.0; stride],
            basis,
            first_art,
        };
        let max_iter = 50 * (m + width) + 1000;

        if n_art > 0 {
            let mut c1 = vec![0.0; width];
            c1[first_art..].iter_mut().for_each(|v| *v = -1.0);
            t.set_objective(&c1);
            if !t.iterate(width, max_iter)? {
                return Err(Error::NumericalFailure);
            }
            if -t.obj[width] < -FEAS_TOL {
                return Ok(Outcome::Infeasible);
            }
            t.drive_out_artificials();
        }

        let mut c2 = vec![0.0; width];
        c2[..ncols].copy_from_slice(cost);
        t.set_objective(&c2);
        if !t.iterate(t.first_art, max_iter)? {
            return Ok(Outcome::Unbounded);
        }
        let mut w = vec![0.0; ncols];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < ncols {
                w[b] = t.a[i * stride + width].max(0.0);
            }
        }
        Ok(Outcome::Optimal(w))
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    /// Reduced costs for `c` under the current basis.
    fn set_objective(&mut self, c: &[f64]) {
        let stride = self.stride();
        self.obj[..self.width].copy_from_slice(c);
        self.obj[self.width] = 0.0;
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let row = &self.a[i * stride..(i + 1) * stride];
                for (o, v) in self.obj.iter_mut().zip(row) {
                    *o -= cb * v;
                }
            }
        }
    }

    /// Runs Bland pivots over entering columns `< limit`. Returns false when unbounded.
    fn iterate(&mut self, limit: usize, max_iter: usize) -> Result<bool> {
        let stride = self.stride();
        for _ in 0..max_iter {
            let Some(e) = (0..limit).find(|&j| self.obj[j] > COST_TOL) else {
                return Ok(true);
            };
            // Pivots that are tiny next to the rest of the column are rounding
            // noise; dividing by them wrecks the tableau.
            let col_max = (0..self.m).fold(0.0f64, |m, i| m.max(self.a[i * stride + e].abs()));
            let tol = PIVOT_TOL.max(REL_PIVOT_TOL * col_max);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aij = self.a[i * stride + e];
                if aij > tol {
                    let ratio = self.a[i * stride + self.width].max(0.0) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, e),
            }
        }
        Err(Error::NumericalFailure)
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let stride = self.stride();
        let p = self.a[r * stride + e];
        for v in &mut self.a[r * stride..(r + 1) * stride] {
            *v /= p;
        }
        let prow: Vec<f64> = self.a[r * stride..(r + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * stride + e];
            if f != 0.0 {
                let row = &mut self.a[i * stride..(i + 1) * stride];
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                row[e] = 0.0;
            }
        }
        let f = self.obj[e];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            self.obj[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Pivots zero-level artificials out of the basis where possible.
    /// Rows where that is impossible are redundant and left alone.
    fn drive_out_artificials(&mut self) {
        let stride = self.stride();
        for i in 0..self.m {
            if self.basis[i] < self.first_art {
                continue;
            }
            let row = &self.a[i * stride..(i + 1) * stride];
            let best = (0..self.first_art)
                .filter(|&j| row[j].abs() > 1e-9)
                .max_by(|&x, &y| row[x].abs().total_cmp(&row[y].abs()).then(y.cmp(&x)));
            if let Some(j) = best {
                self.pivot(i, j);
            }
        }
    }
}
