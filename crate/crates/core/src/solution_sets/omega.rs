//! Image sets `Ω∃(A,[x]) = {Ax}` and `Ω∀∃([A],[x])`, the vectors reachable
//! from `[x]` under every `A ∈ [A]`.
//!
//! Deciding `b ∈ Ω∀∃` exactly is co-NP-hard; the membership test below
//! solves `2^m` linear programs and is capped accordingly.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{HPolytope, InnerApprox, ShapeRequest, SolutionClass, VPolytope, Zonotope};
use crate::interval::round::{add_up, div_down, mul_up, sub_down};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::linprog::{self, LpProblem, LpStatus};

pub const MAX_MEMBERSHIP_ROWS: usize = 20;

/// Both representations of the zonotope `{A x : x ∈ [x]}`; the vertex form
/// is only built for `m <= 3`.
pub fn omega_exists_polytope(
    a: &DMatrix<f64>,
    x: &IntervalVector,
) -> Result<(HPolytope, Option<VPolytope>)> {
    let z = Zonotope::from_box_image(a, x)?;
    let h = z.hpolytope()?;
    let v = if z.dim() <= 3 {
        Some(z.vpolytope()?)
    } else {
        None
    };
    Ok((h, v))
}

pub fn omega_exists_inner(
    a: &DMatrix<f64>,
    x: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    inner_from_zonotope(
        SolutionClass::OmegaExists,
        &Zonotope::from_box_image(a, x)?,
        shape,
    )
}

fn check_dims(a: &IntervalMatrix, x: &IntervalVector) -> Result<()> {
    if a.ncols() != x.dim() {
        return Err(Error::dims(format!(
            "{}x{} matrix, box of dimension {}",
            a.nrows(),
            a.ncols(),
            x.dim()
        )));
    }
    Ok(())
}

/// Strong solvability test: `b ∈ Ω∀∃([A],[x])` iff for every sign vector `s`
/// the system `b = (Ac − diag(s)Δ)x₁ − (Ac + diag(s)Δ)x₂`, `x₁, x₂ ≥ 0`,
/// `x̲ ≤ x₁ − x₂ ≤ x̄` is feasible.
pub fn omega_forall_exists_membership(
    a: &IntervalMatrix,
    x: &IntervalVector,
    b: &[f64],
) -> Result<bool> {
    check_dims(a, x)?;
    let (m, n) = (a.nrows(), a.ncols());
    if b.len() != m {
        return Err(Error::dims("right-hand side length differs from row count"));
    }
    if m > MAX_MEMBERSHIP_ROWS {
        return Err(Error::DimensionTooLarge {
            dim: m,
            cap: MAX_MEMBERSHIP_ROWS,
        });
    }
    let ac = a.mid();
    let delta = a.rad_up();
    let feasible: Vec<bool> = (0..1usize << m)
        .into_par_iter()
        .map(|mask| {
            let mut lp = LpProblem::maximize(vec![0.0; 2 * n]);
            for i in 0..m {
                let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                let row: Vec<f64> = (0..2 * n)
                    .map(|k| {
                        if k < n {
                            ac[(i, k)] - s * delta[(i, k)]
                        } else {
                            -(ac[(i, k - n)] + s * delta[(i, k - n)])
                        }
                    })
                    .collect();
                lp.ge(row.clone(), b[i]);
                lp.le(row, b[i]);
            }
            for (j, xj) in x.iter().enumerate() {
                let mut row = vec![0.0; 2 * n];
                row[j] = 1.0;
                row[n + j] = -1.0;
                lp.le(row.clone(), xj.hi());
                lp.ge(row, xj.lo());
            }
            lp.lower_bounds(vec![0.0; 2 * n]);
            linprog::solve(&lp).map(|s| s.status == LpStatus::Optimal)
        })
        .collect::<Result<_>>()?;
    Ok(feasible.into_iter().all(|f| f))
}

/// Scale factor for the inner zonotope `Ω∃(mid A, mid x + [−r, r]·rad x)`.
/// A negative value means no certificate is available.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scale {
    pub r: f64,
}

impl Scale {
    pub fn is_certified(&self) -> bool {
        self.r >= 0.0
    }
}

/// `r = minᵢ (rad x − |Ac⁺|·Δ·mag x)ᵢ / (rad x)ᵢ`, rounded down.
pub fn omega_forall_exists_scale(a: &IntervalMatrix, x: &IntervalVector) -> Result<Scale> {
    check_dims(a, x)?;
    let (m, n) = (a.nrows(), a.ncols());
    if a.is_point() {
        // No perturbation to absorb, even for rank-deficient matrices.
        return Ok(Scale { r: 1.0 });
    }
    let ac = a.mid();
    if crate::geometry::rank(&ac) < m {
        return Err(Error::RankDeficient);
    }
    let pinv = ac
        .clone()
        .pseudo_inverse(0.0)
        .map_err(|_| Error::RankDeficient)?;
    let delta = a.rad_up();
    let magx = x.mag();
    let t: Vec<f64> = (0..m)
        .map(|i| (0..n).fold(0.0, |acc, j| add_up(acc, mul_up(delta[(i, j)], magx[j]))))
        .collect();
    let mut r = f64::INFINITY;
    for (j, xj) in x.iter().enumerate() {
        let u = (0..m).fold(0.0, |acc, i| add_up(acc, mul_up(pinv[(j, i)].abs(), t[i])));
        let rad = xj.rad_down();
        let num = sub_down(rad, u);
        if rad == 0.0 {
            if num < 0.0 {
                r = f64::NEG_INFINITY;
            }
            continue;
        }
        r = r.min(if num >= 0.0 {
            div_down(num, rad)
        } else {
            div_down(num, xj.rad_up())
        });
    }
    Ok(Scale { r: r.min(1.0) })
}

/// The certified inner zonotope of `Ω∀∃([A],[x])`.
pub fn omega_forall_exists_zonotope(
    a: &IntervalMatrix,
    x: &IntervalVector,
) -> Result<(Scale, Zonotope)> {
    let scale = omega_forall_exists_scale(a, x)?;
    if !scale.is_certified() {
        return Err(Error::NoCertificate(scale.r));
    }
    let y = shrink_box(x, scale.r)?;
    Ok((scale, Zonotope::from_box_image(&a.mid(), &y)?))
}

/// `mid x + [−r, r]·rad x`, kept inside `x`.
fn shrink_box(x: &IntervalVector, r: f64) -> Result<IntervalVector> {
    IntervalVector::new(
        x.iter()
            .map(|xi| {
                let m = xi.mid();
                let h = crate::interval::round::mul_down(r, xi.rad_down());
                Interval::new(m - h, m + h).map(|y| y.intersect(xi).unwrap_or(Interval::point(m)))
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

pub fn omega_forall_exists_inner(
    a: &IntervalMatrix,
    x: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    let (_, z) = omega_forall_exists_zonotope(a, x)?;
    inner_from_zonotope(SolutionClass::OmegaForallExists, &z, shape)
}

pub(crate) fn inner_from_zonotope(
    class: SolutionClass,
    z: &Zonotope,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    let h = z.hpolytope()?;
    inner_from_hpolytope(
        class,
        &h,
        || {
            if z.dim() <= 3 {
                z.vpolytope().map(Some)
            } else {
                Ok(None)
            }
        },
        shape,
    )
}

pub(crate) fn inner_from_hpolytope(
    class: SolutionClass,
    h: &HPolytope,
    vrep: impl FnOnce() -> Result<Option<VPolytope>>,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    Ok(match shape {
        ShapeRequest::Polytope => InnerApprox::polytope(class, h.clone(), vrep()?),
        ShapeRequest::CubeAt(c) => InnerApprox::cube(class, c.clone(), h.inscribed_cube_at(c)?),
        ShapeRequest::BallAt(c) => InnerApprox::ball(class, c.clone(), h.inscribed_ball_at(c)?),
        ShapeRequest::CubeVariable => {
            let (c, r) = h.chebyshev_cube()?;
            InnerApprox::cube(class, c, r)
        }
        ShapeRequest::BallVariable | ShapeRequest::BallVariableLb => {
            let (c, r) = h.chebyshev_ball()?;
            InnerApprox::ball(class, c, r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 3, &[0.8947, 0.6707, 0.2409, 0.3348, 0.3899, 0.6958])
    }

    fn cube3() -> IntervalVector {
        IntervalVector::from_bounds(&[(-1.0, 1.0); 3]).unwrap()
    }

    #[test]
    fn point_matrix_scale_is_one() {
        let a = IntervalMatrix::from_point(&example_a()).unwrap();
        assert_eq!(omega_forall_exists_scale(&a, &cube3()).unwrap().r, 1.0);
    }

    #[test]
    fn membership_degenerates_to_zonotope_test() {
        let a = IntervalMatrix::from_point(&example_a()).unwrap();
        let (h, _) = omega_exists_polytope(&example_a(), &cube3()).unwrap();
        for b in [[0.0, 0.0], [1.5, 1.0], [1.9, 0.0], [-1.0, 1.2], [0.3, -1.4]] {
            let inside = h.contains(&b, 1e-9);
            assert_eq!(
                omega_forall_exists_membership(&a, &cube3(), &b).unwrap(),
                inside,
                "{b:?}"
            );
        }
    }

    #[test]
    fn membership_cap() {
        let a = IntervalMatrix::from_point(&DMatrix::identity(21, 21)).unwrap();
        let x = IntervalVector::from_bounds(&[(-1.0, 1.0); 21]).unwrap();
        assert!(matches!(
            omega_forall_exists_membership(&a, &x, &[0.0; 21]),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn negative_scale_is_reported() {
        let a = IntervalMatrix::from_mid_rad(&DMatrix::identity(2, 2), 2.0).unwrap();
        let x = IntervalVector::from_bounds(&[(-1.0, 1.0); 2]).unwrap();
        let s = omega_forall_exists_scale(&a, &x).unwrap();
        assert!(!s.is_certified());
        assert!(matches!(
            omega_forall_exists_inner(&a, &x, &ShapeRequest::Polytope),
            Err(Error::NoCertificate(_))
        ));
    }
}
