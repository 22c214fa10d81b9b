//! Robot capability sets built from the solution-set machinery: velocities,
//! end-effector forces, accelerations and future joint accelerations, plus a
//! parallel configuration-space sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{InnerApprox, ShapeRequest, SolutionClass, Zonotope};
use crate::interval::{Interval, IntervalVector};
use crate::robot::{self, JointLimits, Robot, RobotParams, RobotState};
use crate::solution_sets::{
    inner_from_zonotope, is_uncertified, omega_forall_exists_inner, omega_forall_exists_zonotope,
    sigma_inner, Scale, SolveExtras, SolveReport,
};

/// `Ω∀∃(J([q]), [q̇])`: end-effector velocities reachable for every configuration in the box.
pub fn velocity_capability(
    p: &RobotParams,
    q: &IntervalVector,
    qd: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    omega_forall_exists_inner(&robot::jacobian(p, q)?, qd, shape)
}

/// `Σ∀∃(J([q])ᵀ, [τ])`: end-effector forces the joint torques can balance everywhere in the box.
pub fn kinetostatic_capability(
    p: &RobotParams,
    q: &IntervalVector,
    tau: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    sigma_inner(
        SolutionClass::SigmaForallExists,
        &robot::jacobian(p, q)?.transpose(),
        tau,
        shape,
    )
}

/// The two inner zonotopes of the forward acceleration split and their sum.
#[derive(Clone, Debug)]
pub struct AccelerationSets {
    /// From `J̇([q],[q̇])` over the velocity limits.
    pub bias: (Scale, Zonotope),
    /// From `J([q])` over the acceleration limits.
    pub drive: (Scale, Zonotope),
    pub sum: Zonotope,
}

pub fn acceleration_sets(
    p: &RobotParams,
    q: &IntervalVector,
    qd: &IntervalVector,
    qd_lim: &IntervalVector,
    qdd_lim: &IntervalVector,
) -> Result<AccelerationSets> {
    let bias = omega_forall_exists_zonotope(&robot::jacobian_dot(p, q, qd)?, qd_lim)?;
    let drive = omega_forall_exists_zonotope(&robot::jacobian(p, q)?, qdd_lim)?;
    let sum = bias.1.minkowski_sum(&drive.1)?;
    Ok(AccelerationSets { bias, drive, sum })
}

pub fn acceleration_capability(
    p: &RobotParams,
    q: &IntervalVector,
    qd: &IntervalVector,
    qd_lim: &IntervalVector,
    qdd_lim: &IntervalVector,
    shape: &ShapeRequest,
) -> Result<InnerApprox> {
    let sets = acceleration_sets(p, q, qd, qd_lim, qdd_lim)?;
    inner_from_zonotope(SolutionClass::OmegaForallExists, &sets.sum, shape)
}

/// Joint-space boxes reachable within the horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FutureStateEnvelope {
    pub tau_f: IntervalVector,
    pub qdd_f: IntervalVector,
    pub qd_f: IntervalVector,
    pub q_f: IntervalVector,
    /// False when some box left its limits entirely; the offending box is then
    /// reported before intersection.
    pub feasible: bool,
}

fn check_horizon(t: &Interval) -> Result<()> {
    if t.lo() != 0.0 || t.hi() < 0.0 || !t.hi().is_finite() {
        return Err(Error::invalid(
            "horizon must be [0, t_max] with finite t_max >= 0",
        ));
    }
    Ok(())
}

fn clip(v: IntervalVector, lim: &IntervalVector, feasible: &mut bool) -> Result<IntervalVector> {
    match v.intersect(lim)? {
        Some(x) => Ok(x),
        None => {
            *feasible = false;
            Ok(v)
        }
    }
}

/// Torques ramp at most at the torque-rate limit; accelerations come from the
/// dynamics at the current state, and velocities and positions follow by
/// integrating over the horizon, each clipped to its limits.
pub fn propagate_state(
    p: &RobotParams,
    lim: &JointLimits,
    s: &RobotState,
    horizon: Interval,
) -> Result<FutureStateEnvelope> {
    check_horizon(&horizon)?;
    s.validate()?;
    let t = horizon;
    let mut feasible = true;
    let tau_f = clip(&s.tau + &lim.taud.scale(t), &lim.tau, &mut feasible)?;
    let c = robot::coriolis(p, &s.q, &s.qd)?;
    let g = robot::gravity(p, &s.q)?;
    let rhs = tau_f.try_sub(&c)?.try_sub(&g)?;
    let qdd_f = robot::mass_inverse_times(p, &s.q, &rhs)?;
    let qd_f = clip(&s.qd + &qdd_f.scale(t), &lim.qd, &mut feasible)?;
    let drift = qd_f.scale(t).try_add(&qdd_f.scale(t.sqr().scale(0.5)))?;
    let q_f = clip(&s.q + &drift, &lim.q, &mut feasible)?;
    Ok(FutureStateEnvelope {
        tau_f,
        qdd_f,
        qd_f,
        q_f,
        feasible,
    })
}

/// Torque box left for accelerating once velocity and gravity terms over the
/// future states are paid for: `[τ̲_f + sup cg, τ̄_f + inf cg]` with
/// `cg = −c([q_f],[q̇_f]) − g([q_f])`.
pub fn effective_torque(p: &RobotParams, env: &FutureStateEnvelope) -> Result<IntervalVector> {
    let c = robot::coriolis(p, &env.q_f, &env.qd_f)?;
    let g = robot::gravity(p, &env.q_f)?;
    let cg = IntervalVector::new(c.iter().zip(g.iter()).map(|(c, g)| -*c - *g).collect())?;
    let mut out = Vec::with_capacity(3);
    for (tf, cg) in env.tau_f.iter().zip(cg.iter()) {
        let lo = tf.lo() + cg.hi();
        let hi = tf.hi() + cg.lo();
        out.push(Interval::new(lo, hi).map_err(|_| Error::EmptyEffectiveTorque)?);
    }
    IntervalVector::new(out)
}

/// `Σ∀∃(M([q_f]), [τ_e])`: joint accelerations available throughout the horizon.
pub fn future_acceleration_capability(
    p: &RobotParams,
    lim: &JointLimits,
    s: &RobotState,
    horizon: Interval,
    shape: &ShapeRequest,
) -> Result<(FutureStateEnvelope, InnerApprox)> {
    let env = propagate_state(p, lim, s, horizon)?;
    if !env.feasible {
        return Err(Error::EmptyIntersection);
    }
    let tau_e = effective_torque(p, &env)?;
    let m = robot::mass_matrix(p, &env.q_f)?;
    let approx = match shape {
        ShapeRequest::Polytope => {
            // Bounded by the acceleration limits for display.
            let h = crate::solution_sets::sigma_hpolytope(&m, &tau_e)?
                .intersection(&crate::geometry::HPolytope::from_box(&lim.qdd))?;
            let v = h.to_vpolytope().ok();
            InnerApprox::polytope(SolutionClass::SigmaForallExists, h, v)
        }
        _ => sigma_inner(SolutionClass::SigmaForallExists, &m, &tau_e, shape)?,
    };
    Ok((env, approx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapabilityKind {
    Velocity,
    Kinetostatic,
    ForwardAcceleration,
    FutureDynamics,
}

impl CapabilityKind {
    pub fn class(self) -> SolutionClass {
        match self {
            CapabilityKind::Velocity | CapabilityKind::ForwardAcceleration => {
                SolutionClass::OmegaForallExists
            }
            CapabilityKind::Kinetostatic | CapabilityKind::FutureDynamics => {
                SolutionClass::SigmaForallExists
            }
        }
    }
}

/// One capability question about a robot in a given state.
///
/// Velocity and force capabilities map the joint velocity and torque limits;
/// the state supplies the configuration box (and, for accelerations, the
/// current joint velocity box).
#[derive(Clone, Debug, PartialEq)]
pub struct CapabilityQuery {
    pub kind: CapabilityKind,
    pub state: RobotState,
    pub horizon: Option<Interval>,
    pub shape: ShapeRequest,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawQuery {
    kind: CapabilityKind,
    state: RobotState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<Interval>,
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
}

impl CapabilityQuery {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawQuery = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        let q = CapabilityQuery {
            kind: raw.kind,
            state: raw.state,
            horizon: raw.horizon,
            shape: ShapeRequest::parse(&raw.shape, raw.center).map_err(Error::Invalid)?,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawQuery {
            kind: self.kind,
            state: self.state.clone(),
            horizon: self.horizon,
            shape: self.shape.name().to_string(),
            center: self.shape.center().map(<[f64]>::to_vec),
        })
        .expect("query serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        match (self.kind, &self.horizon) {
            (CapabilityKind::FutureDynamics, Some(t)) => check_horizon(t)?,
            (CapabilityKind::FutureDynamics, None) => {
                return Err(Error::invalid("future_dynamics needs a horizon"))
            }
            (_, Some(_)) => return Err(Error::invalid("horizon only applies to future_dynamics")),
            _ => {}
        }
        let dim = if self.kind == CapabilityKind::FutureDynamics {
            3
        } else {
            2
        };
        if let Some(c) = self.shape.center() {
            if c.len() != dim || c.iter().any(|v| !v.is_finite()) {
                return Err(Error::dims(format!(
                    "center must have {dim} finite entries"
                )));
            }
        }
        Ok(())
    }
}

/// Capability result: the solution-set report plus what was asked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapabilityReport {
    pub kind: CapabilityKind,
    pub state: RobotState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<Interval>,
    #[serde(flatten)]
    pub result: SolveReport,
    /// Component scales of the acceleration split.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scales: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<FutureStateEnvelope>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Runs a query; uncertifiable outcomes come back with `certified: false`.
pub fn run_query(robot: &Robot, q: &CapabilityQuery) -> Result<CapabilityReport> {
    q.validate()?;
    let (p, lim, s) = (&robot.params, &robot.limits, &q.state);
    let mut scales = Vec::new();
    let mut envelope = None;
    let outcome = match q.kind {
        CapabilityKind::Velocity => {
            let j = robot::jacobian(p, &s.q)?;
            crate::solution_sets::omega_forall_exists_scale(&j, &lim.qd)
                .map(|sc| scales.push(sc.r))?;
            velocity_capability(p, &s.q, &lim.qd, &q.shape)
        }
        CapabilityKind::Kinetostatic => kinetostatic_capability(p, &s.q, &lim.tau, &q.shape),
        CapabilityKind::ForwardAcceleration => acceleration_sets(p, &s.q, &s.qd, &lim.qd, &lim.qdd)
            .and_then(|sets| {
                scales = vec![sets.bias.0.r, sets.drive.0.r];
                inner_from_zonotope(SolutionClass::OmegaForallExists, &sets.sum, &q.shape)
            }),
        CapabilityKind::FutureDynamics => {
            let t = q.horizon.expect("validated");
            match propagate_state(p, lim, s, t) {
                Ok(env) => {
                    envelope = Some(env);
                    future_acceleration_capability(p, lim, s, t, &q.shape).map(|(_, a)| a)
                }
                Err(e) => Err(e),
            }
        }
    };
    let result = match outcome {
        Ok(a) => SolveReport::from_approx(&a, &SolveExtras::default()),
        Err(e) if is_uncertified(&e) => {
            SolveReport::uncertified(q.kind.class(), q.shape.name(), &e)
        }
        Err(e) => return Err(e),
    };
    Ok(CapabilityReport {
        kind: q.kind,
        state: s.clone(),
        horizon: q.horizon,
        result,
        scales,
        envelope,
        warnings: s.limit_warnings(lim),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    OriginBallR,
    OriginCubeR,
}

/// Configuration-space sweep: the domain is split along its widest free
/// coordinate until every free side is at most `resolution`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: CapabilityKind,
    pub q_domain: IntervalVector,
    pub resolution: f64,
    pub metric: SweepMetric,
    /// Coordinates that are never split.
    #[serde(default)]
    pub fixed: Vec<usize>,
    /// Keep only boxes certified at `r >= threshold`, refining the rest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

/// Cap on the number of boxes a sweep may produce.
pub const MAX_SWEEP_CELLS: usize = 1 << 22;

impl SweepSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::invalid("resolution must be positive"));
        }
        if self.q_domain.dim() != 3 {
            return Err(Error::dims("q_domain must have 3 entries"));
        }
        if self.fixed.iter().any(|&k| k >= 3) {
            return Err(Error::dims("fixed coordinate out of range"));
        }
        if matches!(
            self.kind,
            CapabilityKind::ForwardAcceleration | CapabilityKind::FutureDynamics
        ) {
            return Err(Error::invalid(
                "sweeps cover velocity and kinetostatic capabilities",
            ));
        }
        if let Some(t) = self.threshold {
            if !t.is_finite() {
                return Err(Error::invalid("threshold must be finite"));
            }
        }
        let mut cells = 1.0f64;
        for (k, x) in self.q_domain.iter().enumerate() {
            let ratio = x.width() / (self.resolution * (1.0 + 1e-9));
            if !self.fixed.contains(&k) && ratio > 1.0 {
                cells *= ratio.log2().ceil().exp2();
            }
        }
        if cells > MAX_SWEEP_CELLS as f64 {
            return Err(Error::DimensionTooLarge {
                dim: cells.min(usize::MAX as f64) as usize,
                cap: MAX_SWEEP_CELLS,
            });
        }
        Ok(())
    }

    fn split_axis(&self, b: &IntervalVector) -> Option<usize> {
        (0..b.dim())
            // The slack keeps decimal resolutions from splitting one level too deep.
            .filter(|k| !self.fixed.contains(k) && b[*k].width() > self.resolution * (1.0 + 1e-9))
            .max_by(|&i, &j| b[i].width().total_cmp(&b[j].width()).then(j.cmp(&i)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub q: IntervalVector,
    /// NaN when the box has no certificate.
    #[serde(with = "nan_as_null")]
    pub r: f64,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_nan() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Origin-centered radius on one configuration box.
pub fn cell_metric(
    robot: &Robot,
    kind: CapabilityKind,
    metric: SweepMetric,
    q: &IntervalVector,
) -> Result<f64> {
    let (p, lim) = (&robot.params, &robot.limits);
    // Both swept capabilities live in the 2-D task space.
    let at = match metric {
        SweepMetric::OriginBallR => ShapeRequest::BallAt(vec![0.0; 2]),
        SweepMetric::OriginCubeR => ShapeRequest::CubeAt(vec![0.0; 2]),
    };
    let out = match kind {
        CapabilityKind::Velocity => velocity_capability(p, q, &lim.qd, &at),
        CapabilityKind::Kinetostatic => kinetostatic_capability(p, q, &lim.tau, &at),
        _ => {
            return Err(Error::invalid(
                "sweeps cover velocity and kinetostatic capabilities",
            ))
        }
    };
    match out {
        Ok(a) => Ok(a.radius().unwrap_or(f64::NAN)),
        Err(e)
            if is_uncertified(&e)
                || matches!(e, Error::RankDeficient | Error::NumericalFailure) =>
        {
            Ok(f64::NAN)
        }
        Err(e) => Err(e),
    }
}

/// Evaluates the metric on every leaf box. Results are in a fixed order (lower
/// half before upper half at each split) whatever the thread count.
pub fn sweep(robot: &Robot, spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    spec.validate()?;
    if !spec.q_domain.subset_of(&robot.limits.q) {
        return Err(Error::invalid("q_domain leaves the joint position limits"));
    }
    let mut frontier = vec![spec.q_domain.clone()];
    let mut out = Vec::new();
    match spec.threshold {
        None => {
            let mut leaves = Vec::new();
            while let Some(b) = frontier.pop() {
                match spec.split_axis(&b) {
                    Some(k) => {
                        let (lo, hi) = b.bisect(k);
                        frontier.push(hi);
                        frontier.push(lo);
                    }
                    None => leaves.push(b),
                }
            }
            let rs: Vec<f64> = leaves
                .par_iter()
                .map(|q| cell_metric(robot, spec.kind, spec.metric, q))
                .collect::<Result<_>>()?;
            out.extend(leaves.into_iter().zip(rs).map(|(q, r)| SweepCell { q, r }));
        }
        Some(r_min) => {
            // Branch and bound: accept certified boxes, refine the rest down to the resolution.
            while !frontier.is_empty() {
                let rs: Vec<f64> = frontier
                    .par_iter()
                    .map(|q| cell_metric(robot, spec.kind, spec.metric, q))
                    .collect::<Result<_>>()?;
                let mut next = Vec::new();
                for (b, r) in frontier.into_iter().zip(rs) {
                    if r >= r_min {
                        out.push(SweepCell { q: b, r });
                    } else if let Some(k) = spec.split_axis(&b) {
                        let (lo, hi) = b.bisect(k);
                        next.push(lo);
                        next.push(hi);
                    }
                }
                frontier = next;
            }
            out.sort_by(|a, b| {
                a.q.lo()
                    .iter()
                    .zip(b.q.lo())
                    .map(|(x, y)| x.total_cmp(&y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        }
    }
    Ok(out)
}

/// CSV with one row per box: `q1_lo,q1_hi,...,r`, empty `r` for NaN.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut s = String::from("q1_lo,q1_hi,q2_lo,q2_hi,q3_lo,q3_hi,r\n");
    for c in cells {
        for x in c.q.iter() {
            s.push_str(&format!("{},{},", x.lo(), x.hi()));
        }
        if c.r.is_nan() {
            s.push('\n');
        } else {
            s.push_str(&format!("{}\n", c.r));
        }
    }
    s
}
