use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{vertex_hull, VPolytope};

use crate::error::{Error, Result};
use crate::interval::round::{div_down, dot_down, dot_up, norm1_up, norm2_up, sub_down};
use crate::interval::IntervalVector;
use crate::linprog::{self, LpProblem, LpStatus};

/// Rows closer than this after unit normalization are merged.
pub const DEDUP_TOL: f64 = 1e-12;

/// `{ y : H y <= d }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawH")]
pub struct HPolytope {
    #[serde(rename = "H")]
    h: Vec<Vec<f64>>,
    d: Vec<f64>,
}

#[derive(Deserialize)]
struct RawH {
    #[serde(rename = "H")]
    h: Vec<Vec<f64>>,
    d: Vec<f64>,
}

impl TryFrom<RawH> for HPolytope {
    type Error = Error;
    fn try_from(r: RawH) -> Result<Self> {
        HPolytope::new(r.h, r.d)
    }
}

#[derive(Clone, Copy)]
enum Norm {
    L1,
    L2,
}

impl Norm {
    fn up(self, h: &[f64]) -> f64 {
        match self {
            Norm::L1 => norm1_up(h),
            Norm::L2 => norm2_up(h),
        }
    }
}

impl HPolytope {
    pub fn new(h: Vec<Vec<f64>>, d: Vec<f64>) -> Result<Self> {
        if h.is_empty() || h.len() != d.len() {
            return Err(Error::dims(
                "H and d must be nonempty with equal row counts",
            ));
        }
        let m = h[0].len();
        if m == 0 || h.iter().any(|r| r.len() != m) {
            return Err(Error::dims("ragged or empty H rows"));
        }
        if h.iter().flatten().chain(&d).any(|v| !v.is_finite()) {
            return Err(Error::invalid("polytope data must be finite"));
        }
        if h.iter().any(|r| r.iter().all(|&v| v == 0.0)) {
            return Err(Error::invalid("zero row in H"));
        }
        Ok(HPolytope { h, d })
    }

    /// Rows scaled to unit 2-norm, near-duplicate rows merged keeping the tighter offset.
    pub fn normalized(h: Vec<Vec<f64>>, d: Vec<f64>) -> Result<Self> {
        let p = HPolytope::new(h, d)?;
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(p.h.len());
        let mut offs: Vec<f64> = Vec::with_capacity(p.h.len());
        for (r, d) in p.h.into_iter().zip(p.d) {
            let s = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r: Vec<f64> = r.iter().map(|v| v / s).collect();
            let d = d / s;
            match rows
                .iter()
                .position(|q| q.iter().zip(&r).all(|(a, b)| (a - b).abs() <= DEDUP_TOL))
            {
                Some(k) => offs[k] = offs[k].min(d),
                None => {
                    rows.push(r);
                    offs.push(d);
                }
            }
        }
        Ok(HPolytope { h: rows, d: offs })
    }

    pub fn from_box(b: &IntervalVector) -> Self {
        let m = b.dim();
        let mut h = Vec::with_capacity(2 * m);
        let mut d = Vec::with_capacity(2 * m);
        for (i, x) in b.iter().enumerate() {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            h.push(e.clone());
            d.push(x.hi());
            e[i] = -1.0;
            h.push(e);
            d.push(-x.lo());
        }
        HPolytope { h, d }
    }

    pub fn dim(&self) -> usize {
        self.h[0].len()
    }

    pub fn num_facets(&self) -> usize {
        self.h.len()
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.h
    }

    pub fn offsets(&self) -> &[f64] {
        &self.d
    }

    pub fn intersection(&self, other: &HPolytope) -> Result<HPolytope> {
        if self.dim() != other.dim() {
            return Err(Error::dims("polytope dimensions differ"));
        }
        let mut h = self.h.clone();
        h.extend(other.h.iter().cloned());
        let mut d = self.d.clone();
        d.extend(&other.d);
        HPolytope::normalized(h, d)
    }

    /// Largest `hᵢ·y − dᵢ` scaled by the row norm.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        self.h
            .iter()
            .zip(&self.d)
            .map(|(h, &d)| {
                let s = h.iter().map(|v| v * v).sum::<f64>().sqrt();
                (h.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() - d) / s
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        y.len() == self.dim() && self.max_violation(y) <= tol
    }

    pub fn is_empty(&self) -> Result<bool> {
        let m = self.dim();
        let mut lp = LpProblem::maximize(vec![0.0; m]);
        for (h, &d) in self.h.iter().zip(&self.d) {
            lp.le(h.clone(), d);
        }
        Ok(linprog::solve(&lp)?.status == LpStatus::Infeasible)
    }

    /// Vertices by solving every `m`-subset of facet equations; `m <= 3`.
    pub fn vertices(&self) -> Result<Vec<Vec<f64>>> {
        let m = self.dim();
        if m > 3 {
            return Err(Error::DimensionTooLarge { dim: m, cap: 3 });
        }
        let scale = self.d.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut out: Vec<Vec<f64>> = Vec::new();
        for combo in super::Combinations::new(self.h.len(), m) {
            let a = DMatrix::from_fn(m, m, |i, j| self.h[combo[i]][j]);
            let b = DVector::from_fn(m, |i, _| self.d[combo[i]]);
            let Some(x) = a.clone().lu().solve(&b) else {
                continue;
            };
            if super::rank(&a) < m {
                continue;
            }
            let x: Vec<f64> = x.iter().copied().collect();
            if self.max_violation(&x) <= 1e-9 * scale
                && !out
                    .iter()
                    .any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9 * scale))
            {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Vertex form; `m <= 3`. Empty or unbounded sets are errors.
    pub fn to_vpolytope(&self) -> Result<VPolytope> {
        if self.is_empty()? {
            return Err(Error::EmptySolutionSet);
        }
        let m = self.dim();
        for k in 0..m {
            for sign in [1.0, -1.0] {
                let mut obj = vec![0.0; m];
                obj[k] = sign;
                let mut lp = LpProblem::maximize(obj);
                for (h, &d) in self.h.iter().zip(&self.d) {
                    lp.le(h.clone(), d);
                }
                if linprog::solve(&lp)?.status == LpStatus::Unbounded {
                    return Err(Error::invalid("polytope is unbounded"));
                }
            }
        }
        let v = self.vertices()?;
        if v.is_empty() {
            return Err(Error::EmptySolutionSet);
        }
        vertex_hull(&v)
    }

    fn inscribed_at(&self, c: &[f64], norm: Norm) -> Result<f64> {
        if c.len() != self.dim() {
            return Err(Error::dims(format!(
                "center has {} entries, polytope dimension {}",
                c.len(),
                self.dim()
            )));
        }
        let mut r = f64::INFINITY;
        for (h, &d) in self.h.iter().zip(&self.d) {
            if dot_down(h, c) > d {
                return Err(Error::CenterOutside);
            }
            let num = sub_down(d, dot_up(h, c)).max(0.0);
            r = r.min(div_down(num, norm.up(h)));
        }
        Ok(r)
    }

    /// Largest `r` with `c + r[-1,1]^m` inside, rounded down.
    pub fn inscribed_cube_at(&self, c: &[f64]) -> Result<f64> {
        self.inscribed_at(c, Norm::L1)
    }

    /// Largest Euclidean ball radius about `c`, rounded down.
    pub fn inscribed_ball_at(&self, c: &[f64]) -> Result<f64> {
        self.inscribed_at(c, Norm::L2)
    }

    fn chebyshev(&self, norm: Norm) -> Result<(Vec<f64>, f64)> {
        let m = self.dim();
        let mut obj = vec![0.0; m + 1];
        obj[m] = 1.0;
        let mut lp = LpProblem::maximize(obj);
        for (h, &d) in self.h.iter().zip(&self.d) {
            let mut row = h.clone();
            row.push(match norm {
                Norm::L1 => h.iter().map(|v| v.abs()).sum(),
                Norm::L2 => h.iter().map(|v| v * v).sum::<f64>().sqrt(),
            });
            lp.le(row, d);
        }
        let mut lo = vec![f64::NEG_INFINITY; m];
        lo.push(0.0);
        lp.lower_bounds(lo);
        let sol = linprog::solve_lexicographic(&lp, &linprog::unit_ties(0..m, m + 1))?;
        match sol.status {
            LpStatus::Infeasible => Err(Error::EmptySolutionSet),
            LpStatus::Unbounded => Err(Error::invalid("polytope is unbounded")),
            LpStatus::Optimal => {
                let c = sol.z[..m].to_vec();
                let closed = self.inscribed_at(&c, norm)?;
                Ok((c, closed.min(sol.z[m])))
            }
        }
    }

    /// LP center of the largest inscribed cube; the radius is re-evaluated at that center.
    pub fn chebyshev_cube(&self) -> Result<(Vec<f64>, f64)> {
        self.chebyshev(Norm::L1)
    }

    pub fn chebyshev_ball(&self) -> Result<(Vec<f64>, f64)> {
        self.chebyshev(Norm::L2)
    }
}
