//! Tolerance solution sets `Σ∀∃([A],[b]) = {x : Ax ∈ [b] ∀A ∈ [A]}` and the
//! point-matrix case `Σ∃(A,[b])`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{
    vertex_hull, HPolytope, InnerApprox, ShapeRequest, SolutionClass, VPolytope,
};
use crate::interval::round::{div_down, dot_down, dot_up, norm2_up, sub_down};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::linprog::{self, LpProblem, LpStatus, FEAS_TOL};

/// Vertex enumeration over a row of `[A]` is exponential in the number of
/// non-degenerate entries.
pub const MAX_VERTEX_COLS: usize = 12;
/// Above this many free entries per row, the ball radius falls back to interval evaluation.
const MAX_PRUNED_FREE: usize = 16;

fn check(a: &IntervalMatrix, b: &IntervalVector) -> Result<()> {
    if a.nrows() != b.dim() {
        return Err(Error::dims(format!(
            "{}x{} matrix, right-hand side of dimension {}",
            a.nrows(),
            a.ncols(),
            b.dim()
        )));
    }
    Ok(())
}

fn check_point(a: &IntervalMatrix, x: &[f64]) -> Result<()> {
    if a.ncols() != x.len() {
        return Err(Error::dims(format!(
            "{}x{} matrix, point of dimension {}",
            a.nrows(),
            a.ncols(),
            x.len()
        )));
    }
    Ok(())
}

/// `[A]x ⊆ [b]`, evaluated with outward rounding, so `true` is certified.
/// Equivalent to `|Ac x − bc| ≤ −Δ|x| + δ`.
pub fn sigma_membership(a: &IntervalMatrix, b: &IntervalVector, x: &[f64]) -> Result<bool> {
    check(a, b)?;
    check_point(a, x)?;
    Ok(a.mul_point(x)?.subset_of(b))
}

/// `[A](c + r[−1,1]ⁿ) ⊆ [b]`. Interval evaluation is exact for a box, so
/// this is the containment test itself up to rounding.
pub fn sigma_cube_contained(
    a: &IntervalMatrix,
    b: &IntervalVector,
    c: &[f64],
    r: f64,
) -> Result<bool> {
    check(a, b)?;
    check_point(a, c)?;
    if r < 0.0 {
        return Ok(false);
    }
    let cube = IntervalVector::new(c.iter().map(|&v| Interval::point(v).inflate(r)).collect())?;
    Ok(a.mul_vec(&cube)?.subset_of(b))
}

fn require_member(a: &IntervalMatrix, b: &IntervalVector, c: &[f64]) -> Result<()> {
    if !sigma_membership(a, b, c)? {
        return Err(Error::CenterOutside);
    }
    Ok(())
}

/// Radius of the largest cube centered at `c`,
/// `minᵢ inf (rad bᵢ − |mid bᵢ − [aᵢ]c|) / ‖[aᵢ]‖₁` in interval arithmetic.
pub fn sigma_cube_at(a: &IntervalMatrix, b: &IntervalVector, c: &[f64]) -> Result<f64> {
    require_member(a, b, c)?;
    let cv = IntervalVector::from_points(c)?;
    let mut r = f64::INFINITY;
    for (i, row) in a.rows().enumerate() {
        let bi = b[i];
        let radb = (Interval::point(bi.hi()) - Interval::point(bi.lo())) * 0.5;
        let midb = (Interval::point(bi.hi()) + Interval::point(bi.lo())) * 0.5;
        let ac: Interval = row.iter().zip(cv.iter()).map(|(x, y)| *x * *y).sum();
        let num = radb - (midb - ac).abs();
        let norm: Interval = row.iter().map(Interval::abs).sum();
        if norm.hi() == 0.0 {
            continue;
        }
        let lo = num.lo();
        r = r.min(if lo >= 0.0 {
            div_down(lo, norm.hi())
        } else {
            div_down(lo, norm.lo().max(f64::MIN_POSITIVE))
        });
    }
    bounded(r.max(0.0))
}

fn bounded(r: f64) -> Result<f64> {
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::invalid("solution set is unbounded"))
    }
}

/// Each vertex of `[aᵢ]`: entries with nonzero width switch between their bounds.
fn row_vertices(row: &[Interval]) -> Result<Vec<Vec<f64>>> {
    let free: Vec<usize> = (0..row.len()).filter(|&j| !row[j].is_point()).collect();
    if free.len() > MAX_VERTEX_COLS {
        return Err(Error::DimensionTooLarge {
            dim: free.len(),
            cap: MAX_VERTEX_COLS,
        });
    }
    Ok((0..1usize << free.len())
        .map(|mask| {
            let mut v: Vec<f64> = row.iter().map(Interval::lo).collect();
            for (k, &j) in free.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v[j] = row[j].hi();
                }
            }
            v
        })
        .collect())
}

/// Minimum of the cube radius formula over the vertices of each row. This is
/// an estimate only; [`sigma_cube_at`] is the certified value.
pub fn sigma_cube_at_vertex(a: &IntervalMatrix, b: &IntervalVector, c: &[f64]) -> Result<f64> {
    require_member(a, b, c)?;
    let mut r = f64::INFINITY;
    for (i, row) in a.rows().enumerate() {
        let (radb, midb) = (b[i].rad(), b[i].mid());
        for v in row_vertices(row)? {
            let norm: f64 = v.iter().map(|x| x.abs()).sum();
            if norm == 0.0 {
                continue;
            }
            let ac: f64 = v.iter().zip(c).map(|(x, y)| x * y).sum();
            r = r.min((radb - (midb - ac).abs()) / norm);
        }
    }
    bounded(r.max(0.0))
}

/// Grows `r` by `eps` while the cube stays inside; returns the last passing radius.
///
/// Containment is monotone in the radius, so the number of whole steps is
/// found by doubling and then bisection instead of one step at a time.
pub fn sigma_cube_inflate(
    a: &IntervalMatrix,
    b: &IntervalVector,
    c: &[f64],
    r: f64,
    eps: f64,
) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 || r + eps == r {
        return Ok(r);
    }
    let at = |k: u64| r + k as f64 * eps;
    let fits = |k: u64| -> Result<bool> {
        let x = at(k);
        Ok(x.is_finite() && sigma_cube_contained(a, b, c, x)?)
    };
    // `good` passes, `bad` fails.
    let (mut good, mut bad) = (0u64, 1u64);
    while fits(bad)? {
        good = bad;
        if bad >= 1 << 60 {
            return Ok(at(good));
        }
        bad *= 2;
    }
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if fits(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(at(good))
}

/// Largest cube with free center from a linear program in `r`, `x_c` and the
/// per-entry bounds `y`/`z` of `[a_ij](x_cj + r[−1,1])`.
pub fn sigma_cube_variable(a: &IntervalMatrix, b: &IntervalVector) -> Result<(Vec<f64>, f64)> {
    check(a, b)?;
    let (m, n) = (a.nrows(), a.ncols());
    let nv = 1 + n + 2 * m * n;
    let yv = |i: usize, j: usize| 1 + n + i * n + j;
    let zv = |i: usize, j: usize| 1 + n + m * n + i * n + j;
    let mut obj = vec![0.0; nv];
    obj[0] = 1.0;
    let mut lp = LpProblem::maximize(obj);
    for i in 0..m {
        for j in 0..n {
            let e = a.get(i, j);
            let ends: &[f64] = if e.is_point() {
                &[e.lo()]
            } else {
                &[e.lo(), e.hi()]
            };
            for &aij in ends {
                for sign in [1.0, -1.0] {
                    // aij (xc_j + sign r) - y_ij <= 0
                    let mut row = vec![0.0; nv];
                    row[1 + j] = aij;
                    row[0] = aij * sign;
                    row[yv(i, j)] = -1.0;
                    lp.le(row, 0.0);
                    // z_ij - aij (xc_j + sign r) <= 0
                    let mut row = vec![0.0; nv];
                    row[1 + j] = -aij;
                    row[0] = -aij * sign;
                    row[zv(i, j)] = 1.0;
                    lp.le(row, 0.0);
                }
            }
        }
        let mut row = vec![0.0; nv];
        (0..n).for_each(|j| row[yv(i, j)] = 1.0);
        lp.le(row, b[i].hi());
        let mut row = vec![0.0; nv];
        (0..n).for_each(|j| row[zv(i, j)] = -1.0);
        lp.le(row, -b[i].lo());
    }
    let mut lo = vec![f64::NEG_INFINITY; nv];
    lo[0] = 0.0;
    lp.lower_bounds(lo);
    let sol = solve_nonempty(&lp, linprog::unit_ties(1..n + 1, nv))?;
    let c = sol.z[1..=n].to_vec();
    let r = certify_cube(a, b, &c, sol.z[0])?;
    Ok((c, r))
}

fn solve_nonempty(lp: &LpProblem, ties: Vec<Vec<f64>>) -> Result<linprog::LpSolution> {
    let sol = linprog::solve_lexicographic(lp, &ties)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol),
        LpStatus::Infeasible => Err(Error::EmptySolutionSet),
        LpStatus::Unbounded => Err(Error::invalid("solution set is unbounded")),
    }
}

/// Largest radius `<= r_lp` that passes the exact containment test.
fn certify_cube(a: &IntervalMatrix, b: &IntervalVector, c: &[f64], r_lp: f64) -> Result<f64> {
    if sigma_cube_contained(a, b, c, r_lp)? {
        return Ok(r_lp);
    }
    if !sigma_membership(a, b, c)? {
        return Err(Error::NumericalFailure);
    }
    let mut lo = sigma_cube_at(a, b, c)?.min(r_lp);
    let mut hi = r_lp;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sigma_cube_contained(a, b, c, mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Which bound an entry is pinned to when minimizing one side of the ball formula.
fn ball_side_min(
    row: &[Interval],
    c: &[f64],
    bound: f64,
    upper_side: bool,
    prune: bool,
) -> Result<f64> {
    // upper side: (b̄ − a·c)/‖a‖; lower side: (a·c − b̲)/‖a‖.
    let n = row.len();
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    for j in 0..n {
        let e = row[j];
        if e.is_point() {
            fixed[j] = Some(e.lo());
        } else if prune {
            let (nonneg, nonpos) = (e.lo() >= 0.0, e.hi() <= 0.0);
            let (cpos, cneg) = (c[j] >= 0.0, c[j] <= 0.0);
            fixed[j] = if upper_side {
                if cpos && nonneg {
                    Some(e.hi())
                } else if cneg && nonpos {
                    Some(e.lo())
                } else {
                    None
                }
            } else if cneg && nonneg {
                Some(e.hi())
            } else if cpos && nonpos {
                Some(e.lo())
            } else {
                None
            };
        }
    }
    let free: Vec<usize> = (0..n).filter(|&j| fixed[j].is_none()).collect();
    if free.len() > MAX_PRUNED_FREE {
        // Interval fallback: numerator lower bound over the row box, norm upper bound.
        let cv = IntervalVector::from_points(c)?;
        let ac: Interval = row.iter().zip(cv.iter()).map(|(x, y)| *x * *y).sum();
        let num = if upper_side {
            Interval::point(bound) - ac
        } else {
            ac - Interval::point(bound)
        };
        let mags: Vec<f64> = row.iter().map(Interval::mag).collect();
        let norm = norm2_up(&mags);
        return Ok(if norm == 0.0 {
            f64::INFINITY
        } else {
            div_down(num.lo(), norm)
        });
    }
    let mut best = f64::INFINITY;
    let mut v: Vec<f64> = fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
    for mask in 0..1usize << free.len() {
        for (k, &j) in free.iter().enumerate() {
            v[j] = if mask >> k & 1 == 1 {
                row[j].hi()
            } else {
                row[j].lo()
            };
        }
        let norm = norm2_up(&v);
        if norm == 0.0 {
            continue;
        }
        let num = if upper_side {
            sub_down(bound, dot_up(&v, c))
        } else {
            sub_down(dot_down(&v, c), bound)
        };
        let val = if num >= 0.0 {
            div_down(num, norm)
        } else {
            num / v.iter().map(|x| x * x).sum::<f64>().sqrt()
        };
        best = best.min(val);
    }
    Ok(best)
}

fn ball_at(a: &IntervalMatrix, b: &IntervalVector, c: &[f64], prune: bool) -> Result<f64> {
    require_member(a, b, c)?;
    let mut r = f64::INFINITY;
    for (i, row) in a.rows().enumerate() {
        r = r.min(ball_side_min(row, c, b[i].hi(), true, prune)?);
        r = r.min(ball_side_min(row, c, b[i].lo(), false, prune)?);
    }
    bounded(r.max(0.0))
}

/// Radius of the largest ball centered at `c`; the infima over each row are
/// taken over its vertices, with entries pinned where the sign pattern of
/// `c` and the entry decides the minimizing bound.
pub fn sigma_ball_at(a: &IntervalMatrix, b: &IntervalVector, c: &[f64]) -> Result<f64> {
    ball_at(a, b, c, true)
}

/// Same value as [`sigma_ball_at`] by plain enumeration of all row vertices.
pub fn sigma_ball_at_exhaustive(a: &IntervalMatrix, b: &IntervalVector, c: &[f64]) -> Result<f64> {
    ball_at(a, b, c, false)
}

/// Ball with free center; `sup ‖[aᵢ]‖₂` replaces the exact row norms and `y`
/// stands in for `|x_c|`. Gives a certified but possibly smaller ball.
pub fn sigma_ball_variable_lb(a: &IntervalMatrix, b: &IntervalVector) -> Result<(Vec<f64>, f64)> {
    check(a, b)?;
    let (m, n) = (a.nrows(), a.ncols());
    let nv = 2 * n + 1;
    let ac = a.mid();
    let delta = a.rad_up();
    let mut obj = vec![0.0; nv];
    obj[2 * n] = 1.0;
    let mut lp = LpProblem::maximize(obj);
    for i in 0..m {
        let mags: Vec<f64> = a.row(i).iter().map(Interval::mag).collect();
        let s = norm2_up(&mags);
        let mut up = vec![0.0; nv];
        let mut dn = vec![0.0; nv];
        for j in 0..n {
            up[j] = ac[(i, j)];
            dn[j] = -ac[(i, j)];
            up[n + j] = delta[(i, j)];
            dn[n + j] = delta[(i, j)];
        }
        up[2 * n] = s;
        dn[2 * n] = s;
        lp.le(up, b[i].hi());
        lp.le(dn, -b[i].lo());
    }
    for j in 0..n {
        let mut row = vec![0.0; nv];
        row[j] = 1.0;
        row[n + j] = -1.0;
        lp.le(row.clone(), 0.0);
        row[j] = -1.0;
        lp.le(row, 0.0);
    }
    let mut lo = vec![f64::NEG_INFINITY; nv];
    lo[2 * n] = 0.0;
    lp.lower_bounds(lo);
    let sol = solve_nonempty(&lp, linprog::unit_ties(0..n, nv))?;
    let c = sol.z[..n].to_vec();
    let r = certify_ball(a, b, &c, sol.z[2 * n])?;
    Ok((c, r))
}

fn certify_ball(a: &IntervalMatrix, b: &IntervalVector, c: &[f64], r_lp: f64) -> Result<f64> {
    match sigma_ball_at(a, b, c) {
        Ok(r) => Ok(r.min(r_lp)),
        Err(Error::CenterOutside) => Err(Error::NumericalFailure),
        Err(e) => Err(e),
    }
}

/// Largest ball with free center: one constraint pair per vertex of every
/// row. Constraints are generated lazily from the most violated vertex, which
/// gives the same optimum as listing all `m·2ⁿ` rows up front.
pub fn sigma_ball_variable_exact(
    a: &IntervalMatrix,
    b: &IntervalVector,
) -> Result<(Vec<f64>, f64)> {
    check(a, b)?;
    let (m, n) = (a.nrows(), a.ncols());
    if n > MAX_VERTEX_COLS {
        return Err(Error::DimensionTooLarge {
            dim: n,
            cap: MAX_VERTEX_COLS,
        });
    }
    let verts: Vec<Vec<Vec<f64>>> = a.rows().map(row_vertices).collect::<Result<_>>()?;
    let norms: Vec<Vec<f64>> = verts
        .iter()
        .map(|vs| {
            vs.iter()
                .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
                .collect()
        })
        .collect();
    // Active set: (row, vertex, upper side).
    let mut active: Vec<(usize, usize, bool)> = Vec::new();
    for i in 0..m {
        let mid = a.row(i).iter().map(Interval::mid).collect::<Vec<_>>();
        let k = closest_vertex(&verts[i], &mid);
        active.push((i, k, true));
        active.push((i, k, false));
    }
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    for _ in 0..(2 * m * (1 << n) + 1) {
        let mut lp = LpProblem::maximize(obj.clone());
        for &(i, k, upper) in &active {
            let v = &verts[i][k];
            let sgn = if upper { 1.0 } else { -1.0 };
            let mut row: Vec<f64> = v.iter().map(|x| sgn * x).collect();
            row.push(norms[i][k]);
            lp.le(row, if upper { b[i].hi() } else { -b[i].lo() });
        }
        let mut lo = vec![f64::NEG_INFINITY; n + 1];
        lo[n] = 0.0;
        lp.lower_bounds(lo);
        let sol = linprog::solve_lexicographic(&lp, &linprog::unit_ties(0..n, n + 1))?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::EmptySolutionSet),
            LpStatus::Unbounded => {
                // Too few constraints yet: add every vertex of the unbounded rows and retry.
                let before = active.len();
                for i in 0..m {
                    for k in 0..verts[i].len() {
                        for upper in [true, false] {
                            if !active.contains(&(i, k, upper)) {
                                active.push((i, k, upper));
                            }
                        }
                    }
                }
                if active.len() == before {
                    return Err(Error::invalid("solution set is unbounded"));
                }
                continue;
            }
        }
        let (c, r) = (&sol.z[..n], sol.z[n]);
        let mut worst: Option<((usize, usize, bool), f64)> = None;
        for i in 0..m {
            for (k, v) in verts[i].iter().enumerate() {
                let ac: f64 = v.iter().zip(c).map(|(x, y)| x * y).sum();
                for upper in [true, false] {
                    let lhs = if upper { ac } else { -ac } + r * norms[i][k];
                    let rhs = if upper { b[i].hi() } else { -b[i].lo() };
                    let viol = (lhs - rhs) / (1.0 + rhs.abs());
                    if viol > FEAS_TOL && worst.is_none_or(|(_, w)| viol > w) {
                        worst = Some(((i, k, upper), viol));
                    }
                }
            }
        }
        match worst {
            None => {
                let c = c.to_vec();
                let r = certify_ball(a, b, &c, r)?;
                return Ok((c, r));
            }
            Some((key, _)) => {
                if active.contains(&key) {
                    return Err(Error::NumericalFailure);
                }
                active.push(key);
            }
        }
    }
    Err(Error::NumericalFailure)
}

fn closest_vertex(vs: &[Vec<f64>], p: &[f64]) -> usize {
    let d = |v: &Vec<f64>| v.iter().zip(p).map(|(a, b)| (a - b).abs()).sum::<f64>();
    (0..vs.len())
        .min_by(|&x, &y| d(&vs[x]).total_cmp(&d(&vs[y])))
        .unwrap_or(0)
}

/// Half-space form: `a·x ≤ b̄ᵢ` and `−a·x ≤ −b̲ᵢ` for every vertex `a` of
/// every row. Since `sup [aᵢ]x = mid·x + rad·|x|` is the maximum of these
/// linear pieces over sign patterns, this describes the set exactly.
pub fn sigma_hpolytope(a: &IntervalMatrix, b: &IntervalVector) -> Result<HPolytope> {
    check(a, b)?;
    let mut h = Vec::new();
    let mut d = Vec::new();
    for (i, row) in a.rows().enumerate() {
        for v in row_vertices(row)? {
            if v.iter().all(|&x| x == 0.0) {
                if !b[i].contains_zero() {
                    return Err(Error::EmptySolutionSet);
                }
                continue;
            }
            h.push(v.iter().map(|x| -x).collect());
            d.push(-b[i].lo());
            h.push(v);
            d.push(b[i].hi());
        }
    }
    if h.is_empty() {
        return Err(Error::invalid("solution set is unbounded"));
    }
    HPolytope::normalized(h, d)
}

/// Both representations of `Σ∀∃`; the vertex form only for `n <= 3`.
pub fn sigma_polytope(
    a: &IntervalMatrix,
    b: &IntervalVector,
) -> Result<(HPolytope, Option<VPolytope>)> {
    let h = sigma_hpolytope(a, b)?;
    if h.is_empty()? {
        return Err(Error::EmptySolutionSet);
    }
    let v = if a.ncols() <= 3 {
        Some(h.to_vpolytope()?)
    } else {
        None
    };
    Ok((h, v))
}

/// `Σ∃(A,[b])`. Square `A`: the images of the corners of `[b]` under `A⁻¹`.
/// Tall `A`: the vertices of `{x : Ax ∈ [b]}`, which the pseudoinverse maps
/// one-to-one onto the intersection of `[b]` with the column space of `A`.
pub fn sigma_exists_polytope(a: &DMatrix<f64>, b: &IntervalVector) -> Result<VPolytope> {
    let (m, n) = (a.nrows(), a.ncols());
    if m != b.dim() {
        return Err(Error::dims("right-hand side length differs from row count"));
    }
    if n > 3 {
        return Err(Error::DimensionTooLarge { dim: n, cap: 3 });
    }
    if m < n || crate::geometry::rank(a) < n {
        return Err(Error::Singular);
    }
    if m == n {
        let lu = a.clone().lu();
        let pts: Vec<Vec<f64>> = (0..1usize << m)
            .map(|mask| {
                let bv = DVector::from_fn(m, |i, _| {
                    if mask >> i & 1 == 1 {
                        b[i].hi()
                    } else {
                        b[i].lo()
                    }
                });
                lu.solve(&bv)
                    .map(|x| x.iter().copied().collect())
                    .ok_or(Error::Singular)
            })
            .collect::<Result<_>>()?;
        return vertex_hull(&pts);
    }
    let reduced = sigma_exists_reduced(a, b)?;
    let pinv = a.clone().pseudo_inverse(0.0).map_err(|_| Error::Singular)?;
    let pts: Vec<Vec<f64>> = reduced
        .vertices()
        .iter()
        .map(|y| {
            (&pinv * DVector::from_column_slice(y))
                .iter()
                .copied()
                .collect()
        })
        .collect();
    vertex_hull(&pts)
}

/// `[b] ∩ {Ax}` as a polytope in the right-hand-side space; `m <= 3`.
pub fn sigma_exists_reduced(a: &DMatrix<f64>, b: &IntervalVector) -> Result<VPolytope> {
    let (m, n) = (a.nrows(), a.ncols());
    if m > 3 || n > 3 {
        return Err(Error::DimensionTooLarge {
            dim: m.max(n),
            cap: 3,
        });
    }
    let ai = IntervalMatrix::from_point(a)?;
    let h = match sigma_hpolytope(&ai, b) {
        Err(Error::EmptySolutionSet) => return Err(Error::EmptyIntersection),
        other => other?,
    };
    let xs = match h.to_vpolytope() {
        Err(Error::EmptySolutionSet) => return Err(Error::EmptyIntersection),
        other => other?,
    };
    let pts: Vec<Vec<f64>> = xs
        .vertices()
        .iter()
        .map(|x| {
            (a * DVector::from_column_slice(x))
                .iter()
                .copied()
                .collect()
        })
        .collect();
    vertex_hull(&pts)
}

/// Any requested shape inside `Σ([A],[b])`. The variable-center ball is exact
/// up to `MAX_VERTEX_COLS` columns and the lower-bound program beyond.
pub fn sigma_inner(
    class: SolutionClass,
    a: &IntervalMatrix,
    b: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    Ok(match shape {
        ShapeRequest::Polytope => {
            let (h, v) = sigma_polytope(a, b)?;
            InnerApprox::polytope(class, h, v)
        }
        ShapeRequest::CubeAt(c) => InnerApprox::cube(class, c.clone(), sigma_cube_at(a, b, c)?),
        ShapeRequest::BallAt(c) => InnerApprox::ball(class, c.clone(), sigma_ball_at(a, b, c)?),
        ShapeRequest::CubeVariable => {
            let (c, r) = sigma_cube_variable(a, b)?;
            InnerApprox::cube(class, c, r)
        }
        ShapeRequest::BallVariable if a.ncols() <= MAX_VERTEX_COLS => {
            let (c, r) = sigma_ball_variable_exact(a, b)?;
            InnerApprox::ball(class, c, r)
        }
        ShapeRequest::BallVariable | ShapeRequest::BallVariableLb => {
            let (c, r) = sigma_ball_variable_lb(a, b)?;
            InnerApprox::ball(class, c, r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn identity_cube() {
        let a = IntervalMatrix::from_point(&DMatrix::identity(2, 2)).unwrap();
        let b = IntervalVector::from_bounds(&[(-1.0, 1.0); 2]).unwrap();
        assert_eq!(sigma_cube_at(&a, &b, &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(sigma_ball_at(&a, &b, &[0.0, 0.0]).unwrap(), 1.0);
        assert!(sigma_membership(&a, &b, &[0.0, 0.0]).unwrap());
        assert!(!sigma_membership(&a, &b, &[1e6, 1e6]).unwrap());
    }

    #[test]
    fn inflate_with_zero_eps_is_identity() {
        let a = IntervalMatrix::from_point(&DMatrix::identity(2, 2)).unwrap();
        let b = IntervalVector::from_bounds(&[(-1.0, 1.0); 2]).unwrap();
        assert_eq!(
            sigma_cube_inflate(&a, &b, &[0.0, 0.0], 0.25, 0.0).unwrap(),
            0.25
        );
        let r = sigma_cube_inflate(&a, &b, &[0.0, 0.0], 0.0, 0.01).unwrap();
        assert!(r > 0.98 && r <= 1.0);
    }

    #[test]
    fn inflate_matches_single_steps() {
        let a = IntervalMatrix::from_rows(vec![
            vec![iv(0.9, 1.1), iv(0.1, 0.3)],
            vec![iv(-0.2, 0.0), iv(0.8, 1.0)],
        ])
        .unwrap();
        let b = IntervalVector::from_bounds(&[(-2.0, 3.0), (-1.5, 1.0)]).unwrap();
        let c = [0.1, -0.2];
        for eps in [0.1, 0.013, 0.002] {
            let mut k = 0u64;
            while sigma_cube_contained(&a, &b, &c, (k + 1) as f64 * eps).unwrap() {
                k += 1;
            }
            assert_eq!(
                sigma_cube_inflate(&a, &b, &c, 0.0, eps).unwrap(),
                k as f64 * eps
            );
        }
        // Steps below the resolution of `r` leave it unchanged.
        assert_eq!(sigma_cube_inflate(&a, &b, &c, 0.5, 1e-300).unwrap(), 0.5);
    }

    #[test]
    fn empty_tolerance_set() {
        // Row [1 ± 0.5] needs x ∈ [2, 2.1] for all a: impossible.
        let a = IntervalMatrix::from_rows(vec![vec![iv(0.5, 1.5)]]).unwrap();
        let b = IntervalVector::from_bounds(&[(2.0, 2.1)]).unwrap();
        assert_eq!(sigma_cube_variable(&a, &b), Err(Error::EmptySolutionSet));
        assert_eq!(sigma_ball_variable_lb(&a, &b), Err(Error::EmptySolutionSet));
        assert!(matches!(
            sigma_polytope(&a, &b),
            Err(Error::EmptySolutionSet)
        ));
    }

    #[test]
    fn square_sigma_exists_is_preimage_box() {
        let a = DMatrix::identity(2, 2);
        let b = IntervalVector::from_bounds(&[(-1.0, 2.0), (0.0, 1.0)]).unwrap();
        let v = sigma_exists_polytope(&a, &b).unwrap();
        assert_eq!(v.vertices().len(), 4);
        assert!(v.vertices().contains(&vec![2.0, 1.0]));
        assert_eq!(
            sigma_exists_polytope(&DMatrix::zeros(2, 2), &b),
            Err(Error::Singular)
        );
    }

    #[test]
    fn disjoint_image() {
        // Column space {t(1,1)} misses the box [2,3]×[-3,-2].
        let a = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        let b = IntervalVector::from_bounds(&[(2.0, 3.0), (-3.0, -2.0)]).unwrap();
        assert_eq!(sigma_exists_polytope(&a, &b), Err(Error::EmptyIntersection));
    }
}
