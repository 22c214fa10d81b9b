//! Three-link planar arm with point masses at the distal link ends.
//!
//! Every quantity is evaluated in one fixed factored form so that the
//! enclosure widths (and the capability radii built on them) do not depend on
//! how an expression happens to be rearranged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;

const PRESET: &str = include_str!("../presets/planar3.json");

#[derive(Clone, Debug, PartialEq)]
pub struct RobotParams {
    pub l: [Interval; 3],
    pub m: [Interval; 3],
    pub g_const: f64,
}

impl RobotParams {
    pub fn new(l: [Interval; 3], m: [Interval; 3], g_const: f64) -> Result<Self> {
        if l.iter().chain(&m).any(|x| x.lo() <= 0.0) {
            return Err(Error::invalid("link lengths and masses must be positive"));
        }
        if !g_const.is_finite() {
            return Err(Error::invalid("gravity must be finite"));
        }
        Ok(RobotParams { l, m, g_const })
    }

    /// Same parameters with every length and mass collapsed to its midpoint.
    pub fn midpoint(&self) -> RobotParams {
        RobotParams {
            l: self.l.map(|x| Interval::point(x.mid())),
            m: self.m.map(|x| Interval::point(x.mid())),
            g_const: self.g_const,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointLimits {
    pub q: IntervalVector,
    pub qd: IntervalVector,
    pub qdd: IntervalVector,
    pub tau: IntervalVector,
    pub taud: IntervalVector,
}

impl JointLimits {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("q", &self.q),
            ("qd", &self.qd),
            ("qdd", &self.qdd),
            ("tau", &self.tau),
            ("taud", &self.taud),
        ] {
            if v.dim() != 3 {
                return Err(Error::dims(format!("limit {name} must have 3 entries")));
            }
        }
        Ok(())
    }
}

/// Joint positions, velocities and torques; each component may carry a
/// small uncertainty box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotState {
    pub q: IntervalVector,
    pub qd: IntervalVector,
    pub tau: IntervalVector,
}

impl RobotState {
    pub fn validate(&self) -> Result<()> {
        if self.q.dim() != 3 || self.qd.dim() != 3 || self.tau.dim() != 3 {
            return Err(Error::dims("robot state vectors must have 3 entries"));
        }
        Ok(())
    }

    /// Components outside their limit box. Out-of-limit states are still usable.
    pub fn limit_warnings(&self, lim: &JointLimits) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v, l) in [
            ("q", &self.q, &lim.q),
            ("qd", &self.qd, &lim.qd),
            ("tau", &self.tau, &lim.tau),
        ] {
            for (i, (x, b)) in v.iter().zip(l.iter()).enumerate() {
                if !x.subset_of(b) {
                    out.push(format!("{name}[{i}] = {x} leaves limit {b}"));
                }
            }
        }
        out
    }
}

/// Robot file: parameters plus joint limits.
#[derive(Clone, Debug, PartialEq)]
pub struct Robot {
    pub params: RobotParams,
    pub limits: JointLimits,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    lengths: [Interval; 3],
    masses: [Interval; 3],
    #[serde(default = "default_gravity")]
    gravity: f64,
    limits: JointLimits,
}

fn default_gravity() -> f64 {
    STANDARD_GRAVITY
}

impl Robot {
    /// The bundled planar model of a 7-DOF arm's pitch joints.
    pub fn preset() -> Robot {
        Robot::from_json(PRESET).expect("bundled preset is valid")
    }

    pub fn from_json(s: &str) -> Result<Robot> {
        let raw: RawRobot =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("robot file: {e}")))?;
        let params = RobotParams::new(raw.lengths, raw.masses, raw.gravity)?;
        raw.limits.validate()?;
        Ok(Robot {
            params,
            limits: raw.limits,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawRobot {
            lengths: self.params.l,
            masses: self.params.m,
            gravity: self.params.g_const,
            limits: self.limits.clone(),
        })
        .expect("robot serializes")
    }
}

fn check3(v: &IntervalVector, what: &str) -> Result<()> {
    if v.dim() != 3 {
        return Err(Error::dims(format!(
            "{what} must have 3 entries, got {}",
            v.dim()
        )));
    }
    Ok(())
}

/// Shared trigonometric terms of a joint box.
struct Trig {
    s1: Interval,
    c1: Interval,
    s12: Interval,
    c12: Interval,
    s123: Interval,
    c123: Interval,
}

impl Trig {
    fn new(q: &IntervalVector) -> Trig {
        let q12 = q[0] + q[1];
        let q123 = q[0] + q[1] + q[2];
        Trig {
            s1: q[0].sin(),
            c1: q[0].cos(),
            s12: q12.sin(),
            c12: q12.cos(),
            s123: q123.sin(),
            c123: q123.cos(),
        }
    }
}

pub fn jacobian(p: &RobotParams, q: &IntervalVector) -> Result<IntervalMatrix> {
    check3(q, "q")?;
    let [l1, l2, l3] = p.l;
    let t = Trig::new(q);
    let j1 = -(t.s123 * l3);
    let j2 = t.c123 * l3;
    let a = j1 - t.s12 * l2;
    let b = j2 + t.c12 * l2;
    IntervalMatrix::from_rows(vec![vec![a - t.s1 * l1, a, j1], vec![b + t.c1 * l1, b, j2]])
}

pub fn jacobian_dot(
    p: &RobotParams,
    q: &IntervalVector,
    qd: &IntervalVector,
) -> Result<IntervalMatrix> {
    check3(q, "q")?;
    check3(qd, "qd")?;
    let [l1, l2, l3] = p.l;
    let t = Trig::new(q);
    let qd12 = qd[0] + qd[1];
    let qd123 = qd[0] + qd[1] + qd[2];
    let j1 = -(t.s123 * l3);
    let j2 = t.c123 * l3;
    let j3 = t.c12 * l2 * qd12;
    let j4 = t.s12 * l2 * qd12;
    let j5 = j1 * qd123;
    let j6 = j2 * qd123;
    let top = -j6 - j3;
    let bot = j5 - j4;
    IntervalMatrix::from_rows(vec![
        vec![top - t.c1 * l1 * qd[0], top, -j6],
        vec![bot - t.s1 * l1 * qd[0], bot, j5],
    ])
}

/// Configuration-only terms of the dynamics.
struct KTerms {
    k1: Interval,
    k2: Interval,
    k3: Interval,
    k4: Interval,
    k5: Interval,
    k6: Interval,
    k7: Interval,
    k8: Interval,
    k9: Interval,
    k12: Interval,
}

impl KTerms {
    fn new(p: &RobotParams, q: &IntervalVector) -> KTerms {
        let [l1, l2, l3] = p.l;
        let [m1, m2, m3] = p.m;
        let m23 = m2 + m3;
        let m123 = m1 + m2 + m3;
        let q23 = q[1] + q[2];
        let (cq2, cq3, cq23) = (q[1].cos(), q[2].cos(), q23.cos());
        let k1 = l1 * l2 * m23 * cq2;
        let k2 = l3 * m3 * (l1 * cq23 + l2 * cq3);
        let k3 = l3 * m3 * (l1 * cq23 + l2.scale(2.0) * cq3);
        let k6 = l3.sqr() * m3;
        let k4 = l2.sqr() * m23 + k6;
        let k5 = l2 * l3 * m3 * cq3;
        let k7 = k1.scale(2.0) + k2.scale(2.0) + k4 + l1.sqr() * m123;
        let k8 = l1 * l3 * m3 * q23.sin();
        let k9 = l2 * l3 * m3 * q[2].sin();
        let k12 = l1 * l2 * m23 * q[1].sin();
        KTerms {
            k1,
            k2,
            k3,
            k4,
            k5,
            k6,
            k7,
            k8,
            k9,
            k12,
        }
    }
}

pub fn mass_matrix(p: &RobotParams, q: &IntervalVector) -> Result<IntervalMatrix> {
    check3(q, "q")?;
    let k = KTerms::new(p, q);
    let m12 = k.k1 + k.k3 + k.k4;
    let m13 = k.k2 + k.k6;
    let m23 = k.k5 + k.k6;
    IntervalMatrix::from_rows(vec![
        vec![k.k7, m12, m13],
        vec![m12, k.k5.scale(2.0) + k.k4, m23],
        vec![m13, m23, k.k6],
    ])
}

/// Centrifugal and Coriolis vector.
pub fn coriolis(
    p: &RobotParams,
    q: &IntervalVector,
    qd: &IntervalVector,
) -> Result<IntervalVector> {
    check3(q, "q")?;
    check3(qd, "qd")?;
    let k = KTerms::new(p, q);
    let k10 = -((qd[0] * qd[1]).scale(2.0) + qd[1].sqr());
    let k11 = -((qd[0] * qd[2]).scale(2.0) + (qd[1] * qd[2]).scale(2.0) + qd[2].sqr());
    let qd1sq = qd[0].sqr();
    IntervalVector::new(vec![
        k10 * (k.k8 + k.k12) + k11 * (k.k8 + k.k9),
        qd1sq * (k.k8 + k.k12) + k.k9 * k11,
        -(k.k9 * k10) + qd1sq * (k.k8 + k.k9),
    ])
}

pub fn gravity(p: &RobotParams, q: &IntervalVector) -> Result<IntervalVector> {
    check3(q, "q")?;
    let [l1, l2, l3] = p.l;
    let [m1, m2, m3] = p.m;
    let t = Trig::new(q);
    let g = Interval::point(p.g_const);
    let g3 = t.c123 * l3 * m3;
    let g2 = g3 + l2 * t.c12 * (m2 + m3);
    let g1 = g2 + l1 * t.c1 * (m1 + m2 + m3);
    IntervalVector::new(vec![g * g1, g * g2, g * g3])
}

/// Enclosure of `{M(q)⁻¹ y : q ∈ [q], y ∈ rhs}`.
pub fn mass_inverse_times(
    p: &RobotParams,
    q: &IntervalVector,
    rhs: &IntervalVector,
) -> Result<IntervalVector> {
    check3(rhs, "right-hand side")?;
    mass_matrix(p, q)?
        .solve_enclosure(rhs)
        .map_err(|e| match e {
            Error::Singular => Error::SingularMass,
            e => e,
        })
}
