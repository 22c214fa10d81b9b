//! Randomized checks shared by the per-module tests and the acceptance run.
//! Each panics on the first violation.

#![allow(dead_code)]

use super::{sample3, sample_arm, unit_sphere, Arm};
use innerset::capability::{future_acceleration_capability, propagate_state};
use innerset::geometry::{hyperplane_shift, ShapeRequest, SolutionClass, Zonotope};
use innerset::linprog::{self, LpProblem, LpStatus};
use innerset::robot::{Robot, RobotState};
use innerset::solution_sets::*;
use innerset::{Interval, IntervalMatrix, IntervalVector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The reference arm state: configuration, joint velocity and torque boxes.
#[allow(clippy::approx_constant)]
pub fn reference_state() -> RobotState {
    let b = |c: [f64; 3]| IntervalVector::mid_rad(&c, &[0.01; 3]).unwrap();
    RobotState {
        q: b([0.0, -1.5708, 1.8675]),
        qd: b([1.0, 1.0, 1.0]),
        tau: b([18.0, 1.0, 2.0]),
    }
}

fn random_matrix(rng: &mut impl Rng, m: usize, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..1.0))
}

fn same_point_sets(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| {
            b.iter()
                .any(|q| p.iter().zip(q).all(|(x, y)| (x - y).abs() <= tol))
        })
}

pub fn zonotope_representations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..50 {
        let n = 2 + trial % 4;
        let a = random_matrix(&mut rng, 2, n);
        let x = IntervalVector::new(
            (0..n)
                .map(|_| {
                    Interval::mid_rad(rng.gen_range(-1.0..1.0), rng.gen_range(0.1..2.0)).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let z = Zonotope::from_box_image(&a, &x).unwrap();
        let h = z.hpolytope().unwrap();
        let v = z.vpolytope().unwrap();
        for p in v.vertices() {
            assert!(h.contains(p, 1e-9), "trial {trial}: vertex {p:?} outside H");
        }
        let hv = h.to_vpolytope().unwrap();
        assert!(
            same_point_sets(hv.vertices(), v.vertices(), 1e-7),
            "trial {trial}: {hv:?} vs {v:?}"
        );
        // Both agree with the support function in random directions.
        for _ in 0..10 {
            let d = unit_sphere(&mut rng, 2);
            let sv = v
                .vertices()
                .iter()
                .map(|p| p[0] * d[0] + p[1] * d[1])
                .fold(f64::MIN, f64::max);
            assert!((sv - z.support(&d)).abs() < 1e-9 * (1.0 + sv.abs()));
        }
    }
}

pub fn chebyshev_matches_closed_form_at_center() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let n = rng.gen_range(2..6);
        let a = random_matrix(&mut rng, 2, n);
        let x = IntervalVector::from_bounds(&vec![(-1.0, 1.0); n]).unwrap();
        let h = hyperplane_shift(&a, &x).unwrap();
        let (c, r) = h.chebyshev_cube().unwrap();
        assert!((r - h.inscribed_cube_at(&c).unwrap()).abs() <= 1e-6);
        let (c, r) = h.chebyshev_ball().unwrap();
        assert!((r - h.inscribed_ball_at(&c).unwrap()).abs() <= 1e-6);
    }
}

/// Σ∀∃ instance with a known member `x0`: nonempty and bounded.
fn sigma_instance(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
) -> (IntervalMatrix, IntervalVector, Vec<f64>) {
    let ac = loop {
        let a = random_matrix(rng, m, n);
        if a.clone().svd(false, false).singular_values.min() > 0.2 {
            break a;
        }
    };
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let rad = DMatrix::from_fn(m, n, |_, _| rng.gen_range(0.0..0.05));
    let a = IntervalMatrix::from_fn(m, n, |i, j| {
        Interval::mid_rad(ac[(i, j)], rad[(i, j)]).unwrap()
    })
    .unwrap();
    let b = IntervalVector::new(
        (0..m)
            .map(|i| {
                let y: f64 = (0..n).map(|j| ac[(i, j)] * x0[j]).sum();
                Interval::new(y - rng.gen_range(0.5..2.0), y + rng.gen_range(0.5..2.0)).unwrap()
            })
            .collect(),
    )
    .unwrap();
    (a, b, x0)
}

/// `|Ac x − bc| ≤ −Δ|x| + δ`, evaluated in plain floating point.
fn rohn_member(a: &IntervalMatrix, b: &IntervalVector, x: &[f64]) -> bool {
    (0..a.nrows()).all(|i| {
        let row = a.row(i);
        let ac: f64 = row.iter().zip(x).map(|(e, v)| e.mid() * v).sum();
        let dx: f64 = row.iter().zip(x).map(|(e, v)| e.rad() * v.abs()).sum();
        (ac - b[i].mid()).abs() <= -dx + b[i].rad()
    })
}

fn cube_corners_and_faces(rng: &mut impl Rng, c: &[f64], r: f64, k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|_| {
            let mut p: Vec<f64> = c
                .iter()
                .map(|v| v + r * rng.gen_range(-1.0..=1.0))
                .collect();
            let face = rng.gen_range(0..c.len());
            p[face] = c[face] + if rng.gen_bool(0.5) { r } else { -r };
            p
        })
        .collect()
}

fn ball_surface(rng: &mut impl Rng, c: &[f64], r: f64, k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|_| {
            unit_sphere(rng, c.len())
                .iter()
                .zip(c)
                .map(|(d, v)| v + r * d)
                .collect()
        })
        .collect()
}

pub fn sigma_shapes_pass_membership_on_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..10 {
        let (m, n) = (2 + trial % 3, 2 + trial % 2);
        let (a, b, x0) = sigma_instance(&mut rng, m.max(n), n);
        let shapes = [
            sigma_inner(
                SolutionClass::SigmaForallExists,
                &a,
                &b,
                &ShapeRequest::CubeAt(x0.clone()),
            ),
            sigma_inner(
                SolutionClass::SigmaForallExists,
                &a,
                &b,
                &ShapeRequest::BallAt(x0.clone()),
            ),
            sigma_inner(
                SolutionClass::SigmaForallExists,
                &a,
                &b,
                &ShapeRequest::CubeVariable,
            ),
            sigma_inner(
                SolutionClass::SigmaForallExists,
                &a,
                &b,
                &ShapeRequest::BallVariable,
            ),
            sigma_inner(
                SolutionClass::SigmaForallExists,
                &a,
                &b,
                &ShapeRequest::BallVariableLb,
            ),
        ];
        for (k, s) in shapes.into_iter().enumerate() {
            let s = s.unwrap();
            let (c, r) = (s.center().unwrap().to_vec(), s.radius().unwrap());
            let pts = if s.shape_name() == "cube" {
                cube_corners_and_faces(&mut rng, &c, r, 1000)
            } else {
                ball_surface(&mut rng, &c, r, 1000)
            };
            for p in pts {
                assert!(
                    sigma_membership(&a, &b, &p).unwrap(),
                    "trial {trial} shape {k}: {p:?}"
                );
                assert!(rohn_member(&a, &b, &p), "trial {trial} shape {k}: {p:?}");
            }
        }
    }
}

fn omega_instance(rng: &mut impl Rng, rad: f64) -> (IntervalMatrix, IntervalVector) {
    let ac = loop {
        let a = random_matrix(rng, 2, 3);
        if a.clone().svd(false, false).singular_values.min() > 0.3 {
            break a;
        }
    };
    (
        IntervalMatrix::from_mid_rad(&ac, rad).unwrap(),
        IntervalVector::from_bounds(&[(-1.0, 1.0); 3]).unwrap(),
    )
}

/// `y ∈ {A x : x ∈ [x]}` by a feasibility program, independent of the zonotope code.
fn image_member(a: &DMatrix<f64>, x: &IntervalVector, y: &[f64], tol: f64) -> bool {
    let n = a.ncols();
    let mut lp = LpProblem::maximize(vec![0.0; n]);
    for i in 0..a.nrows() {
        let row: Vec<f64> = (0..n).map(|j| a[(i, j)]).collect();
        lp.le(row.clone(), y[i] + tol);
        lp.ge(row, y[i] - tol);
    }
    lp.lower_bounds(x.lo()).upper_bounds(x.hi());
    linprog::solve(&lp).unwrap().status == LpStatus::Optimal
}

pub fn omega_shapes_pass_membership_on_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for trial in 0..6 {
        let (a, x) = omega_instance(&mut rng, 0.01);
        let origin = vec![0.0, 0.0];
        for shape in [
            ShapeRequest::CubeAt(origin.clone()),
            ShapeRequest::BallAt(origin.clone()),
            ShapeRequest::CubeVariable,
            ShapeRequest::BallVariable,
        ] {
            let e = omega_exists_inner(&a.mid(), &x, &shape).unwrap();
            let fa = omega_forall_exists_inner(&a, &x, &shape).unwrap();
            for (s, forall) in [(e, false), (fa, true)] {
                let (c, r) = (s.center().unwrap().to_vec(), s.radius().unwrap());
                let pts = if s.shape_name() == "cube" {
                    cube_corners_and_faces(&mut rng, &c, r, 1000)
                } else {
                    ball_surface(&mut rng, &c, r, 1000)
                };
                for p in pts {
                    let ok = if forall {
                        omega_forall_exists_membership(&a, &x, &p).unwrap()
                    } else {
                        image_member(&a.mid(), &x, &p, 0.0)
                    };
                    assert!(ok, "trial {trial} {:?} forall={forall}: {p:?}", shape);
                }
            }
        }
    }
}

pub fn grid_oracle_brackets_sigma_radii() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for trial in 0..5 {
        let (a, b, _) = sigma_instance(&mut rng, 2, 2);
        let (_, v) = sigma_polytope(&a, &b).unwrap();
        let verts = v.unwrap().vertices().to_vec();
        let lo: Vec<f64> = (0..2)
            .map(|k| verts.iter().map(|p| p[k]).fold(f64::MAX, f64::min))
            .collect();
        let hi: Vec<f64> = (0..2)
            .map(|k| verts.iter().map(|p| p[k]).fold(f64::MIN, f64::max))
            .collect();
        let pad: Vec<f64> = (0..2).map(|k| 0.1 * (hi[k] - lo[k])).collect();
        let steps = 200;
        let hs: Vec<f64> = (0..2)
            .map(|k| (hi[k] - lo[k] + 2.0 * pad[k]) / (steps - 1) as f64)
            .collect();
        let grid: Vec<(Vec<f64>, bool)> = (0..steps * steps)
            .map(|k| {
                let p = vec![
                    lo[0] - pad[0] + (k % steps) as f64 * hs[0],
                    lo[1] - pad[1] + (k / steps) as f64 * hs[1],
                ];
                let inside = rohn_member(&a, &b, &p);
                (p, inside)
            })
            .collect();
        let cell = hs[0].hypot(hs[1]);
        let members: Vec<&Vec<f64>> = grid
            .iter()
            .filter(|(_, inside)| *inside)
            .map(|(p, _)| p)
            .collect();
        let (vc, vr) = sigma_cube_variable(&a, &b).unwrap();
        let (bc, br) = sigma_ball_variable_exact(&a, &b).unwrap();
        let centers = [
            vc.clone(),
            bc.clone(),
            members[members.len() / 2].clone(),
            members[members.len() / 3].clone(),
        ];
        for c in &centers {
            let (mut grid_cube, mut grid_ball) = (f64::INFINITY, f64::INFINITY);
            for (p, inside) in &grid {
                if !*inside {
                    grid_cube = grid_cube.min((p[0] - c[0]).abs().max((p[1] - c[1]).abs()));
                    grid_ball = grid_ball.min((p[0] - c[0]).hypot(p[1] - c[1]));
                }
            }
            // The closed-form cube is a lower bound; inflation closes the gap.
            let lower = sigma_cube_at(&a, &b, c).unwrap();
            let cube_r = sigma_cube_inflate(&a, &b, c, lower, cell / 20.0).unwrap();
            let ball_r = sigma_ball_at(&a, &b, c).unwrap();
            for (p, inside) in &grid {
                let dinf = (p[0] - c[0]).abs().max((p[1] - c[1]).abs());
                let d2 = (p[0] - c[0]).hypot(p[1] - c[1]);
                if dinf <= cube_r || d2 <= ball_r {
                    assert!(
                        *inside,
                        "trial {trial}: certified point {p:?} fails the grid oracle"
                    );
                }
            }
            assert!(
                lower <= cube_r && cube_r <= grid_cube && cube_r >= grid_cube - cell,
                "trial {trial}: cube {cube_r} vs grid {grid_cube}"
            );
            assert!(
                ball_r <= grid_ball && ball_r >= grid_ball - cell,
                "trial {trial}: ball {ball_r} vs grid {grid_ball}"
            );
            if *c == vc {
                assert!(
                    (vr - cube_r).abs() <= cell,
                    "trial {trial}: variable cube {vr} vs {cube_r}"
                );
            }
            if *c == bc {
                assert!(
                    (br - ball_r).abs() <= 1e-9 * (1.0 + br),
                    "trial {trial}: variable ball {br} vs {ball_r}"
                );
            }
        }
        // No grid member supports a bigger cube or ball than the optimizers found.
        let best_cube = members
            .iter()
            .step_by(97)
            .map(|c| {
                sigma_cube_inflate(&a, &b, c, sigma_cube_at(&a, &b, c).unwrap(), cell / 20.0)
                    .unwrap()
            })
            .fold(0.0, f64::max);
        let best_ball = members
            .iter()
            .step_by(97)
            .map(|c| sigma_ball_at(&a, &b, c).unwrap())
            .fold(0.0, f64::max);
        assert!(
            best_cube <= vr + 1e-9 && best_ball <= br + 1e-9,
            "trial {trial}"
        );
    }
}

pub fn pruned_ball_matches_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..100 {
        let n = rng.gen_range(2..7);
        let (a, b, x0) = sigma_instance(&mut rng, n, n);
        assert_eq!(
            sigma_ball_at(&a, &b, &x0).unwrap(),
            sigma_ball_at_exhaustive(&a, &b, &x0).unwrap()
        );
    }
}

fn widen(a: &IntervalMatrix, k: f64) -> IntervalMatrix {
    IntervalMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        let e = a.get(i, j);
        e.inflate(e.rad() * (k - 1.0))
    })
    .unwrap()
}

pub fn sigma_nesting_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for trial in 0..100 {
        let (a, b, x0) = sigma_instance(&mut rng, 3, 2);
        let wide_a = widen(&a, 1.5);
        let wide_b = IntervalVector::new(b.iter().map(|x| x.inflate(0.1)).collect()).unwrap();
        let point_a = IntervalMatrix::from_point(&a.mid()).unwrap();
        let cube = sigma_cube_at(&a, &b, &x0).unwrap();
        let ball = sigma_ball_at(&a, &b, &x0).unwrap();
        if sigma_membership(&wide_a, &b, &x0).unwrap() {
            assert!(
                sigma_cube_at(&wide_a, &b, &x0).unwrap() <= cube,
                "trial {trial}"
            );
            assert!(
                sigma_ball_at(&wide_a, &b, &x0).unwrap() <= ball,
                "trial {trial}"
            );
        }
        assert!(
            sigma_cube_at(&a, &wide_b, &x0).unwrap() >= cube,
            "trial {trial}"
        );
        assert!(
            sigma_ball_at(&a, &wide_b, &x0).unwrap() >= ball,
            "trial {trial}"
        );
        assert!(
            sigma_cube_at(&point_a, &b, &x0).unwrap() >= cube,
            "trial {trial}"
        );
        assert!(
            sigma_ball_at(&point_a, &b, &x0).unwrap() >= ball,
            "trial {trial}"
        );
        let (_, rv) = sigma_cube_variable(&a, &b).unwrap();
        assert!(rv >= cube * (1.0 - 1e-9), "trial {trial}");
        let (_, bv) = sigma_ball_variable_exact(&a, &b).unwrap();
        let (_, blb) = sigma_ball_variable_lb(&a, &b).unwrap();
        assert!(
            bv >= ball * (1.0 - 1e-9) && blb <= bv + 1e-9,
            "trial {trial}"
        );
    }
}

pub fn omega_nesting_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let origin = ShapeRequest::BallAt(vec![0.0, 0.0]);
    for trial in 0..100 {
        let (a, x) = omega_instance(&mut rng, 0.005);
        let wide = widen(&a, 2.0);
        let s = omega_forall_exists_scale(&a, &x).unwrap().r;
        let sw = omega_forall_exists_scale(&wide, &x).unwrap().r;
        assert!(sw <= s && s <= 1.0, "trial {trial}");
        let exists = omega_exists_inner(&a.mid(), &x, &origin)
            .unwrap()
            .radius()
            .unwrap();
        let forall = omega_forall_exists_inner(&a, &x, &origin)
            .unwrap()
            .radius()
            .unwrap();
        assert!(forall <= exists, "trial {trial}");
        // The inner zonotope's vertices are strongly solvable right-hand sides.
        if let Ok((_, z)) = omega_forall_exists_zonotope(&a, &x) {
            for v in z.vpolytope().unwrap().vertices() {
                assert!(
                    omega_forall_exists_membership(&a, &x, v).unwrap(),
                    "trial {trial}: {v:?}"
                );
            }
        }
    }
}

pub fn point_matrix_membership_is_zonotope_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let (a, x) = omega_instance(&mut rng, 0.0);
        let h = hyperplane_shift(&a.mid(), &x).unwrap();
        let y = [rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)];
        if h.max_violation(&y).abs() < 1e-6 {
            continue;
        }
        assert_eq!(
            omega_forall_exists_membership(&a, &x, &y).unwrap(),
            h.contains(&y, 0.0),
            "{y:?}"
        );
    }
}

fn rk4_step(
    arm: &Arm,
    q: &mut [f64; 3],
    qd: &mut [f64; 3],
    tau: impl Fn(f64) -> [f64; 3],
    t: f64,
    h: f64,
) {
    let f = |q: &[f64; 3], qd: &[f64; 3], t: f64| arm.accel(q, qd, &tau(t));
    let add =
        |a: &[f64; 3], b: &[f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1v = *qd;
    let k1a = f(q, qd, t);
    let k2v = add(qd, &k1a, h / 2.0);
    let k2a = f(&add(q, &k1v, h / 2.0), &k2v, t + h / 2.0);
    let k3v = add(qd, &k2a, h / 2.0);
    let k3a = f(&add(q, &k2v, h / 2.0), &k3v, t + h / 2.0);
    let k4v = add(qd, &k3a, h);
    let k4a = f(&add(q, &k3v, h), &k4v, t + h);
    for i in 0..3 {
        q[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        qd[i] += h / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
    }
}

/// Constant torque-rate rollouts never leave the envelope while they stay
/// within the joint limits.
pub fn rollouts_stay_inside_envelope() {
    let r = Robot::preset();
    let t_max = 0.01;
    let env = propagate_state(
        &r.params,
        &r.limits,
        &reference_state(),
        Interval::new(0.0, t_max).unwrap(),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let dt = 1e-4;
    for _ in 0..100 {
        let arm = sample_arm(&mut rng, &r.params);
        let mut q = sample3(&mut rng, &reference_state().q);
        let mut qd = sample3(&mut rng, &reference_state().qd);
        let tau0 = sample3(&mut rng, &reference_state().tau);
        // Extreme rates are the interesting ones; mix them with interior draws.
        let rate: [f64; 3] = std::array::from_fn(|i| {
            let lim = r.limits.taud[i];
            match rng.gen_range(0..3) {
                0 => lim.lo(),
                1 => lim.hi(),
                _ => rng.gen_range(lim.lo()..=lim.hi()),
            }
        });
        let tau = |t: f64| {
            std::array::from_fn(|i| {
                (tau0[i] + rate[i] * t).clamp(r.limits.tau[i].lo(), r.limits.tau[i].hi())
            })
        };
        let steps = (t_max / dt).round() as usize;
        for k in 0..steps {
            rk4_step(&arm, &mut q, &mut qd, tau, k as f64 * dt, dt);
            if !r.limits.q.contains(&q) || !r.limits.qd.contains(&qd) {
                break;
            }
            assert!(
                env.q_f.contains(&q),
                "q {q:?} escaped {:?} at step {k}",
                env.q_f
            );
            assert!(
                env.qd_f.contains(&qd),
                "qd {qd:?} escaped {:?} at step {k}",
                env.qd_f
            );
        }
    }
}

/// Radii at a ladder of horizons, shortest first.
pub fn horizon_ladder(shape: &ShapeRequest) -> Vec<(f64, f64)> {
    let r = Robot::preset();
    [0.002, 0.004, 0.005, 0.0065, 0.0085, 0.01, 0.012]
        .iter()
        .map(|&t| {
            let (_, a) = future_acceleration_capability(
                &r.params,
                &r.limits,
                &reference_state(),
                Interval::new(0.0, t).unwrap(),
                shape,
            )
            .unwrap();
            (t, a.radius().unwrap())
        })
        .collect()
}

/// Shorter horizons must never certify less.
pub fn future_radius_non_increasing_in_horizon() {
    for shape in [
        ShapeRequest::CubeAt(vec![0.0; 3]),
        ShapeRequest::BallAt(vec![0.0; 3]),
    ] {
        let ladder = horizon_ladder(&shape);
        for w in ladder.windows(2) {
            assert!(
                w[0].1 >= w[1].1,
                "{shape:?}: r({}) = {} < r({}) = {}",
                w[0].0,
                w[0].1,
                w[1].0,
                w[1].1
            );
        }
    }
}
