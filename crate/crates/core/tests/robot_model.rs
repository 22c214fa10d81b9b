// -1.5708 is a joint angle from the worked example, not an approximation of π/2.
#![allow(clippy::approx_constant)]

mod common;

use common::{sample3, sample_arm};
use innerset::robot::*;
use innerset::{Interval, IntervalMatrix, IntervalVector};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn box3(c: [f64; 3], r: f64) -> IntervalVector {
    IntervalVector::mid_rad(&c, &[r; 3]).unwrap()
}

fn contains_mat(a: &IntervalMatrix, m: &[f64], cols: usize) -> bool {
    m.iter()
        .enumerate()
        .all(|(k, &v)| a.get(k / cols, k % cols).contains(v))
}

#[test]
fn kinematics_enclose_point_samples() {
    let robot = Robot::preset();
    let q = box3([1.0, -1.0, 1.0], 0.1);
    let qd = box3([1.0, 1.0, 1.0], 0.01);
    let j = jacobian(&robot.params, &q).unwrap();
    let jd = jacobian_dot(&robot.params, &q, &qd).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let arm = sample_arm(&mut rng, &robot.params);
        let (qs, qds) = (sample3(&mut rng, &q), sample3(&mut rng, &qd));
        let pj = arm.jacobian(&qs);
        let pjd = arm.jacobian_dot(&qs, &qds);
        let row_major =
            |m: nalgebra::Matrix2x3<f64>| (0..6).map(|k| m[(k / 3, k % 3)]).collect::<Vec<_>>();
        assert!(contains_mat(&j, &row_major(pj), 3), "J misses {pj}");
        assert!(contains_mat(&jd, &row_major(pjd), 3), "J̇ misses {pjd}");
    }
}

#[test]
fn dynamics_enclose_point_samples() {
    let robot = Robot::preset();
    let q = box3([0.0, -1.5708, 1.8675], 0.01);
    let qd = box3([1.0, 1.0, 1.0], 0.01);
    let m = mass_matrix(&robot.params, &q).unwrap();
    let c = coriolis(&robot.params, &q, &qd).unwrap();
    let g = gravity(&robot.params, &q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let arm = sample_arm(&mut rng, &robot.params);
        let (qs, qds) = (sample3(&mut rng, &q), sample3(&mut rng, &qd));
        let pm = arm.mass(&qs);
        let flat: Vec<f64> = (0..9).map(|k| pm[(k / 3, k % 3)]).collect();
        assert!(contains_mat(&m, &flat, 3), "M misses {pm}");
        let eig = pm.symmetric_eigenvalues();
        assert!(
            eig.iter().all(|&e| e > 0.0),
            "M not positive definite: {eig}"
        );
        assert!(c.contains(arm.coriolis(&qs, &qds).as_slice()));
        assert!(g.contains(arm.gravity(&qs).as_slice()));
    }
}

#[test]
fn mass_inverse_encloses_point_solves() {
    let robot = Robot::preset();
    let q = box3([0.0, -1.5708, 1.8675], 0.01);
    let rhs = IntervalVector::from_bounds(&[(-5.0, 3.0), (-6.0, 7.0), (-9.0, 9.0)]).unwrap();
    let x = mass_inverse_times(&robot.params, &q, &rhs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let arm = sample_arm(&mut rng, &robot.params);
        let qs = sample3(&mut rng, &q);
        let y = sample3(&mut rng, &rhs);
        let sol = arm
            .mass(&qs)
            .lu()
            .solve(&nalgebra::Vector3::from_column_slice(&y))
            .unwrap();
        assert!(x.contains(sol.as_slice()), "{x:?} misses {sol}");
    }
}

#[test]
fn identity_mass_leaves_rhs() {
    let id = IntervalMatrix::from_point(&DMatrix::identity(3, 3)).unwrap();
    let rhs = IntervalVector::from_bounds(&[(-1.0, 2.0), (0.0, 0.0), (3.0, 4.0)]).unwrap();
    assert_eq!(id.solve_enclosure(&rhs).unwrap(), rhs);
}

#[test]
fn point_inputs_give_thin_outputs() {
    let p = Robot::preset().params.midpoint();
    let q = box3([0.3, -1.2, 0.8], 0.0);
    let qd = box3([0.5, -0.4, 1.1], 0.0);
    let j = jacobian(&p, &q).unwrap();
    let jd = jacobian_dot(&p, &q, &qd).unwrap();
    let m = mass_matrix(&p, &q).unwrap();
    for a in [j, jd, m] {
        assert!(a.rad().iter().all(|&r| r < 1e-14), "{a:?}");
    }
}

#[test]
fn degenerate_mass_is_reported() {
    let tiny = Interval::new(1e-300, 1e-300).unwrap();
    let one = Interval::point(1.0);
    let p = RobotParams::new([one, one, tiny], [one, one, tiny], 9.81).unwrap();
    let q = box3([0.0, 0.5, 0.5], 0.4);
    let rhs = IntervalVector::from_points(&[1.0, 1.0, 1.0]).unwrap();
    assert_eq!(
        mass_inverse_times(&p, &q, &rhs),
        Err(innerset::Error::SingularMass)
    );
}

fn nested(outer: &IntervalMatrix, inner: &IntervalMatrix) -> bool {
    (0..outer.nrows())
        .all(|i| (0..outer.ncols()).all(|j| inner.get(i, j).subset_of(&outer.get(i, j))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shrinking_inputs_shrink_outputs(
        c in prop::array::uniform3(-1.5f64..1.5),
        v in prop::array::uniform3(-2.0f64..2.0),
        r in 0.0f64..0.2,
        f in 0.0f64..1.0,
    ) {
        let p = Robot::preset().params;
        let (q, qd) = (box3(c, r), box3(v, r));
        let (qi, qdi) = (box3(c, r * f), box3(v, r * f));
        prop_assert!(nested(&jacobian(&p, &q).unwrap(), &jacobian(&p, &qi).unwrap()));
        prop_assert!(nested(&jacobian_dot(&p, &q, &qd).unwrap(), &jacobian_dot(&p, &qi, &qdi).unwrap()));
        prop_assert!(nested(&mass_matrix(&p, &q).unwrap(), &mass_matrix(&p, &qi).unwrap()));
        prop_assert!(coriolis(&p, &qi, &qdi).unwrap().subset_of(&coriolis(&p, &q, &qd).unwrap()));
        prop_assert!(gravity(&p, &qi).unwrap().subset_of(&gravity(&p, &q).unwrap()));
    }

    #[test]
    fn velocity_free_terms_vanish(c in prop::array::uniform3(-3.0f64..3.0), r in 0.0f64..0.5) {
        let p = Robot::preset().params;
        let q = box3(c, r);
        let zero = box3([0.0; 3], 0.0);
        prop_assert!(jacobian_dot(&p, &q, &zero).unwrap().mag().iter().all(|&v| v == 0.0));
        prop_assert!(coriolis(&p, &q, &zero).unwrap().mag().iter().all(|&v| v == 0.0));
    }
}
