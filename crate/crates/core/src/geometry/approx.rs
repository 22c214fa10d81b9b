use serde::{Deserialize, Serialize};

use super::{HPolytope, VPolytope};

/// Relative shrink applied to every reported radius so that points sampled
/// on the boundary in floating point still pass outward-rounded membership tests.
pub const CERT_MARGIN: f64 = 1e-10;

pub fn certified_radius(r: f64) -> f64 {
    if r.is_finite() && r > 0.0 {
        (r * (1.0 - CERT_MARGIN)).next_down()
    } else if r.is_nan() {
        r
    } else {
        r.max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionClass {
    OmegaExists,
    OmegaForallExists,
    SigmaExists,
    SigmaForallExists,
}

impl SolutionClass {
    pub fn is_omega(self) -> bool {
        matches!(
            self,
            SolutionClass::OmegaExists | SolutionClass::OmegaForallExists
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SolutionClass::OmegaExists => "omega_exists",
            SolutionClass::OmegaForallExists => "omega_forall_exists",
            SolutionClass::SigmaExists => "sigma_exists",
            SolutionClass::SigmaForallExists => "sigma_forall_exists",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Polytope {
        hrep: HPolytope,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vrep: Option<VPolytope>,
    },
    Cube {
        center: Vec<f64>,
        r: f64,
    },
    Ball {
        center: Vec<f64>,
        r: f64,
    },
}

/// A shape certified to lie inside the solution set of `class`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerApprox {
    pub class: SolutionClass,
    #[serde(flatten)]
    pub shape: Shape,
}

impl InnerApprox {
    pub fn cube(class: SolutionClass, center: Vec<f64>, r: f64) -> Self {
        InnerApprox {
            class,
            shape: Shape::Cube {
                center,
                r: certified_radius(r),
            },
        }
    }

    pub fn ball(class: SolutionClass, center: Vec<f64>, r: f64) -> Self {
        InnerApprox {
            class,
            shape: Shape::Ball {
                center,
                r: certified_radius(r),
            },
        }
    }

    pub fn polytope(class: SolutionClass, hrep: HPolytope, vrep: Option<VPolytope>) -> Self {
        InnerApprox {
            class,
            shape: Shape::Polytope { hrep, vrep },
        }
    }

    /// Radius for cubes and balls.
    pub fn radius(&self) -> Option<f64> {
        match &self.shape {
            Shape::Cube { r, .. } | Shape::Ball { r, .. } => Some(*r),
            Shape::Polytope { .. } => None,
        }
    }

    pub fn center(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Cube { center, .. } | Shape::Ball { center, .. } => Some(center),
            Shape::Polytope { .. } => None,
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self.shape {
            Shape::Polytope { .. } => "polytope",
            Shape::Cube { .. } => "cube",
            Shape::Ball { .. } => "ball",
        }
    }
}

/// What to inscribe into a solution set.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeRequest {
    Polytope,
    CubeAt(Vec<f64>),
    BallAt(Vec<f64>),
    /// Cube with optimized center.
    CubeVariable,
    /// Ball with optimized center; exact where the dimension allows.
    BallVariable,
    /// Ball with optimized center from the cheaper lower-bound program.
    BallVariableLb,
}

impl ShapeRequest {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeRequest::Polytope => "polytope",
            ShapeRequest::CubeAt(_) => "cube_at",
            ShapeRequest::BallAt(_) => "ball_at",
            ShapeRequest::CubeVariable => "cube_variable",
            ShapeRequest::BallVariable => "ball_variable",
            ShapeRequest::BallVariableLb => "ball_variable_lb",
        }
    }

    pub fn parse(name: &str, center: Option<Vec<f64>>) -> Result<Self, String> {
        Ok(match name {
            "polytope" => ShapeRequest::Polytope,
            "cube_at" => ShapeRequest::CubeAt(center.ok_or("cube_at requires a center")?),
            "ball_at" => ShapeRequest::BallAt(center.ok_or("ball_at requires a center")?),
            "cube_variable" => ShapeRequest::CubeVariable,
            "ball_variable" => ShapeRequest::BallVariable,
            "ball_variable_lb" => ShapeRequest::BallVariableLb,
            other => return Err(format!("unknown shape `{other}`")),
        })
    }

    pub fn center(&self) -> Option<&[f64]> {
        match self {
            ShapeRequest::CubeAt(c) | ShapeRequest::BallAt(c) => Some(c),
            _ => None,
        }
    }
}
