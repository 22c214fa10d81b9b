//! Plain floating-point model of the planar arm, written from the point-mass
//! Lagrangian rather than the factored forms used by the library.

#![allow(dead_code)]

use innerset::{Interval, IntervalVector};
use nalgebra::{Matrix2x3, Matrix3, Vector3};
use rand::Rng;

pub mod suite;

pub struct Arm {
    pub l: [f64; 3],
    pub m: [f64; 3],
    pub g: f64,
}

fn angles(q: &[f64; 3]) -> [f64; 3] {
    [q[0], q[0] + q[1], q[0] + q[1] + q[2]]
}

impl Arm {
    /// Jacobian of the position of the distal end of link `k` (0-based).
    pub fn link_jacobian(&self, q: &[f64; 3], k: usize) -> Matrix2x3<f64> {
        let phi = angles(q);
        let mut j = Matrix2x3::zeros();
        for col in 0..=k {
            for i in col..=k {
                j[(0, col)] -= self.l[i] * phi[i].sin();
                j[(1, col)] += self.l[i] * phi[i].cos();
            }
        }
        j
    }

    pub fn link_jacobian_dot(&self, q: &[f64; 3], qd: &[f64; 3], k: usize) -> Matrix2x3<f64> {
        let phi = angles(q);
        let phid = [qd[0], qd[0] + qd[1], qd[0] + qd[1] + qd[2]];
        let mut j = Matrix2x3::zeros();
        for col in 0..=k {
            for i in col..=k {
                j[(0, col)] -= self.l[i] * phi[i].cos() * phid[i];
                j[(1, col)] -= self.l[i] * phi[i].sin() * phid[i];
            }
        }
        j
    }

    pub fn jacobian(&self, q: &[f64; 3]) -> Matrix2x3<f64> {
        self.link_jacobian(q, 2)
    }

    pub fn jacobian_dot(&self, q: &[f64; 3], qd: &[f64; 3]) -> Matrix2x3<f64> {
        self.link_jacobian_dot(q, qd, 2)
    }

    pub fn mass(&self, q: &[f64; 3]) -> Matrix3<f64> {
        (0..3)
            .map(|k| {
                let j = self.link_jacobian(q, k);
                j.transpose() * j * self.m[k]
            })
            .sum()
    }

    pub fn coriolis(&self, q: &[f64; 3], qd: &[f64; 3]) -> Vector3<f64> {
        let v = Vector3::from_column_slice(qd);
        (0..3)
            .map(|k| {
                self.link_jacobian(q, k).transpose()
                    * (self.link_jacobian_dot(q, qd, k) * v)
                    * self.m[k]
            })
            .sum()
    }

    pub fn gravity(&self, q: &[f64; 3]) -> Vector3<f64> {
        (0..3)
            .map(|k| {
                let j = self.link_jacobian(q, k);
                Vector3::new(j[(1, 0)], j[(1, 1)], j[(1, 2)]) * (self.m[k] * self.g)
            })
            .sum()
    }

    pub fn accel(&self, q: &[f64; 3], qd: &[f64; 3], tau: &[f64; 3]) -> [f64; 3] {
        let rhs = Vector3::from_column_slice(tau) - self.coriolis(q, qd) - self.gravity(q);
        let a = self
            .mass(q)
            .lu()
            .solve(&rhs)
            .expect("mass matrix invertible");
        [a[0], a[1], a[2]]
    }
}

pub fn sample(rng: &mut impl Rng, x: &Interval) -> f64 {
    if x.is_point() {
        x.lo()
    } else {
        rng.gen_range(x.lo()..=x.hi())
    }
}

pub fn sample3(rng: &mut impl Rng, v: &IntervalVector) -> [f64; 3] {
    [sample(rng, &v[0]), sample(rng, &v[1]), sample(rng, &v[2])]
}

pub fn sample_arm(rng: &mut impl Rng, p: &innerset::robot::RobotParams) -> Arm {
    Arm {
        l: p.l.map(|x| sample(rng, &x)),
        m: p.m.map(|x| sample(rng, &x)),
        g: p.g_const,
    }
}

pub fn unit_sphere(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}
