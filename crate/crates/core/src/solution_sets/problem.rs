use serde::{Deserialize, Serialize};

use super::omega::*;
use super::sigma::*;
use crate::error::{Error, Result};
use crate::geometry::{HPolytope, InnerApprox, Shape, ShapeRequest, SolutionClass, VPolytope};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// An interval linear system together with the requested inner shape.
#[derive(Clone, Debug, PartialEq)]
pub struct IlsProblem {
    pub class: SolutionClass,
    pub a: IntervalMatrix,
    pub x_box: Option<IntervalVector>,
    pub b_box: Option<IntervalVector>,
    pub shape: ShapeRequest,
    /// ε-inflation step for fixed-center cubes of the Σ classes.
    pub eps: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawProblem {
    class: SolutionClass,
    #[serde(rename = "A")]
    a: IntervalMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_box: Option<IntervalVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b_box: Option<IntervalVector>,
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
}

impl IlsProblem {
    pub fn new(
        class: SolutionClass,
        a: IntervalMatrix,
        x_box: Option<IntervalVector>,
        b_box: Option<IntervalVector>,
        shape: ShapeRequest,
    ) -> Result<Self> {
        let p = IlsProblem {
            class,
            a,
            x_box,
            b_box,
            shape,
            eps: None,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let (m, n) = (self.a.nrows(), self.a.ncols());
        if self
            .a
            .rows()
            .flatten()
            .any(|e| !e.lo().is_finite() || !e.hi().is_finite())
        {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        if self.class.is_omega() {
            let x = self
                .x_box
                .as_ref()
                .ok_or_else(|| Error::invalid("omega classes need x_box"))?;
            if self.b_box.is_some() {
                return Err(Error::invalid("omega classes take x_box, not b_box"));
            }
            if x.dim() != n {
                return Err(Error::dims(format!(
                    "x_box has {} entries, A has {n} columns",
                    x.dim()
                )));
            }
            if let Some(c) = self.shape.center() {
                if c.len() != m {
                    return Err(Error::dims(format!(
                        "center has {} entries, expected {m}",
                        c.len()
                    )));
                }
            }
        } else {
            let b = self
                .b_box
                .as_ref()
                .ok_or_else(|| Error::invalid("sigma classes need b_box"))?;
            if self.x_box.is_some() {
                return Err(Error::invalid("sigma classes take b_box, not x_box"));
            }
            if b.dim() != m {
                return Err(Error::dims(format!(
                    "b_box has {} entries, A has {m} rows",
                    b.dim()
                )));
            }
            if let Some(c) = self.shape.center() {
                if c.len() != n {
                    return Err(Error::dims(format!(
                        "center has {} entries, expected {n}",
                        c.len()
                    )));
                }
            }
        }
        for b in [&self.x_box, &self.b_box].into_iter().flatten() {
            if b.iter().any(|e| !e.lo().is_finite() || !e.hi().is_finite()) {
                return Err(Error::invalid("boxes must be bounded"));
            }
        }
        if let Some(c) = self.shape.center() {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("center must be finite"));
            }
        }
        if matches!(
            self.class,
            SolutionClass::OmegaExists | SolutionClass::SigmaExists
        ) && !self.a.is_point()
        {
            return Err(Error::invalid(
                "this class needs a point matrix (every entry [v, v])",
            ));
        }
        if let Some(e) = self.eps {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(Error::invalid("eps must be a nonnegative number"));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(s).map_err(|e| Error::invalid(e.to_string()))?;
        Self::try_from(raw)
    }

    pub fn to_json(&self) -> String {
        let raw = RawProblem {
            class: self.class,
            a: self.a.clone(),
            x_box: self.x_box.clone(),
            b_box: self.b_box.clone(),
            shape: self.shape.name().to_string(),
            center: self.shape.center().map(<[f64]>::to_vec),
            eps: self.eps,
        };
        serde_json::to_string_pretty(&raw).expect("problem serializes")
    }

    fn x(&self) -> &IntervalVector {
        self.x_box.as_ref().expect("validated")
    }

    fn b(&self) -> &IntervalVector {
        self.b_box.as_ref().expect("validated")
    }
}

impl TryFrom<RawProblem> for IlsProblem {
    type Error = Error;
    fn try_from(r: RawProblem) -> Result<Self> {
        let shape = ShapeRequest::parse(&r.shape, r.center).map_err(Error::Invalid)?;
        let p = IlsProblem {
            class: r.class,
            a: r.a,
            x_box: r.x_box,
            b_box: r.b_box,
            shape,
            eps: r.eps,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Extra values computed along the way.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveExtras {
    /// Scale factor of the inner zonotope (`Ω∀∃`).
    pub scale: Option<f64>,
    /// Vertex-enumerated estimate of the fixed-center cube (`Σ` classes); not certified.
    pub r_vertex: Option<f64>,
}

pub fn solve(p: &IlsProblem) -> Result<(InnerApprox, SolveExtras)> {
    let mut extras = SolveExtras::default();
    let approx = match p.class {
        SolutionClass::OmegaExists => omega_exists_inner(&p.a.mid(), p.x(), &p.shape)?,
        SolutionClass::OmegaForallExists => {
            let s = omega_forall_exists_scale(&p.a, p.x())?;
            extras.scale = Some(s.r);
            omega_forall_exists_inner(&p.a, p.x(), &p.shape)?
        }
        SolutionClass::SigmaExists | SolutionClass::SigmaForallExists => {
            let (a, b) = (&p.a, p.b());
            match &p.shape {
                ShapeRequest::CubeAt(c) => {
                    let mut r = sigma_cube_at(a, b, c)?;
                    extras.r_vertex = sigma_cube_at_vertex(a, b, c).ok();
                    if let Some(eps) = p.eps {
                        r = sigma_cube_inflate(a, b, c, r, eps)?;
                    }
                    InnerApprox::cube(p.class, c.clone(), r)
                }
                shape => sigma_inner(p.class, a, b, shape)?,
            }
        }
    };
    Ok((approx, extras))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeReport {
    pub hrep: HPolytope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vrep: Option<VPolytope>,
}

/// Result file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub class: SolutionClass,
    pub shape: String,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_vertex: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SolveReport {
    pub fn from_approx(approx: &InnerApprox, extras: &SolveExtras) -> Self {
        let (r, center, polytope) = match &approx.shape {
            Shape::Cube { center, r } | Shape::Ball { center, r } => {
                (Some(*r), Some(center.clone()), None)
            }
            Shape::Polytope { hrep, vrep } => (
                None,
                None,
                Some(PolytopeReport {
                    hrep: hrep.clone(),
                    vrep: vrep.clone(),
                }),
            ),
        };
        SolveReport {
            class: approx.class,
            shape: approx.shape_name().to_string(),
            certified: true,
            r,
            center,
            polytope,
            scale: extras.scale,
            r_vertex: extras.r_vertex,
            message: None,
        }
    }

    pub fn uncertified(class: SolutionClass, shape: &str, err: &Error) -> Self {
        let scale = match err {
            Error::NoCertificate(r) => Some(*r),
            _ => None,
        };
        SolveReport {
            class,
            shape: shape.to_string(),
            certified: false,
            r: None,
            center: None,
            polytope: None,
            scale,
            r_vertex: None,
            message: Some(err.to_string()),
        }
    }

    pub fn to_approx(&self) -> Option<InnerApprox> {
        if !self.certified {
            return None;
        }
        let shape = match (self.shape.as_str(), &self.r, &self.center, &self.polytope) {
            ("cube", Some(r), Some(c), _) => Shape::Cube {
                center: c.clone(),
                r: *r,
            },
            ("ball", Some(r), Some(c), _) => Shape::Ball {
                center: c.clone(),
                r: *r,
            },
            ("polytope", _, _, Some(p)) => Shape::Polytope {
                hrep: p.hrep.clone(),
                vrep: p.vrep.clone(),
            },
            _ => return None,
        };
        Some(InnerApprox {
            class: self.class,
            shape,
        })
    }
}

/// Errors that mean "no certificate" rather than bad input.
pub fn is_uncertified(e: &Error) -> bool {
    matches!(
        e,
        Error::NoCertificate(_)
            | Error::EmptySolutionSet
            | Error::EmptyIntersection
            | Error::EmptyEffectiveTorque
            | Error::CenterOutside
    )
}

/// Solves and packages the outcome; uncertifiable instances give
/// `certified: false`, other failures are errors.
pub fn solve_report(p: &IlsProblem) -> Result<SolveReport> {
    match solve(p) {
        Ok((a, x)) => Ok(SolveReport::from_approx(&a, &x)),
        Err(e) if is_uncertified(&e) => Ok(SolveReport::uncertified(p.class, p.shape.name(), &e)),
        Err(e) => Err(e),
    }
}

/// Re-checks a returned shape against the class membership tests,
/// independently of how it was produced.
pub fn verify(p: &IlsProblem, approx: &InnerApprox) -> Result<bool> {
    if approx.class != p.class {
        return Ok(false);
    }
    match p.class {
        SolutionClass::SigmaExists | SolutionClass::SigmaForallExists => {
            verify_sigma(&p.a, p.b(), approx)
        }
        SolutionClass::OmegaExists | SolutionClass::OmegaForallExists => verify_omega(p, approx),
    }
}

fn verify_sigma(a: &IntervalMatrix, b: &IntervalVector, approx: &InnerApprox) -> Result<bool> {
    match &approx.shape {
        Shape::Cube { center, r } => sigma_cube_contained(a, b, center, *r),
        Shape::Ball { center, r } => match sigma_ball_at(a, b, center) {
            Ok(rr) => Ok(rr >= *r),
            Err(Error::CenterOutside) => Ok(false),
            Err(e) => Err(e),
        },
        Shape::Polytope { hrep, vrep } => {
            let tol = |v: f64| 1e-9 * (1.0 + v.abs());
            let loose = IntervalVector::new(b.iter().map(|x| x.inflate(tol(x.mag()))).collect())?;
            match vrep {
                Some(v) => {
                    for x in v.vertices() {
                        if !sigma_membership(a, &loose, x)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }
                None => {
                    let fresh = sigma_hpolytope(a, b)?;
                    Ok(fresh.num_facets() == hrep.num_facets()
                        && fresh
                            .offsets()
                            .iter()
                            .zip(hrep.offsets())
                            .all(|(x, y)| (x - y).abs() <= tol(*x)))
                }
            }
        }
    }
}

fn verify_omega(p: &IlsProblem, approx: &InnerApprox) -> Result<bool> {
    let x = p.x();
    let member = |y: &[f64]| -> Result<bool> {
        match p.class {
            SolutionClass::OmegaExists => {
                let (h, _) = omega_exists_polytope(&p.a.mid(), x)?;
                Ok(h.contains(y, 1e-9))
            }
            _ => omega_forall_exists_membership(&p.a, x, y),
        }
    };
    match &approx.shape {
        Shape::Cube { center, r } => {
            let m = center.len();
            if m > 10 {
                return Err(Error::DimensionTooLarge { dim: m, cap: 10 });
            }
            for mask in 0..1usize << m {
                let y: Vec<f64> = (0..m)
                    .map(|i| center[i] + if mask >> i & 1 == 1 { *r } else { -*r })
                    .collect();
                if !member(&y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Shape::Ball { center, r } => {
            if !member(center)? {
                return Ok(false);
            }
            let h = match p.class {
                SolutionClass::OmegaExists => omega_exists_polytope(&p.a.mid(), x)?.0,
                _ => omega_forall_exists_zonotope(&p.a, x)?.1.hpolytope()?,
            };
            Ok(h.inscribed_ball_at(center).is_ok_and(|rr| rr >= *r))
        }
        Shape::Polytope { vrep, .. } => match vrep {
            Some(v) => {
                for y in v.vertices() {
                    if !member(y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            None => Ok(true),
        },
    }
}

/// Convenience for building a point problem.
pub fn point_matrix(rows: &[&[f64]]) -> Result<IntervalMatrix> {
    IntervalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Interval::point(v)).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_box_pairing_is_enforced() {
        let a = point_matrix(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let bx = IntervalVector::from_bounds(&[(-1.0, 1.0); 2]).unwrap();
        assert!(IlsProblem::new(
            SolutionClass::SigmaExists,
            a.clone(),
            Some(bx.clone()),
            None,
            ShapeRequest::Polytope
        )
        .is_err());
        assert!(IlsProblem::new(
            SolutionClass::OmegaExists,
            a.clone(),
            Some(bx.clone()),
            None,
            ShapeRequest::Polytope
        )
        .is_ok());
        let wide = a.inflate(0.1);
        assert!(IlsProblem::new(
            SolutionClass::OmegaExists,
            wide,
            Some(bx),
            None,
            ShapeRequest::Polytope
        )
        .is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"class":"sigma_forall_exists","A":[[[0.9,1.1],[0,0]],[[0,0],[1,1]]],
                    "b_box":[[-1,1],[-2,2]],"shape":"ball_at","center":[0,0]}"#;
        let p = IlsProblem::from_json(s).unwrap();
        assert_eq!(IlsProblem::from_json(&p.to_json()).unwrap(), p);
        let rep = solve_report(&p).unwrap();
        assert!(rep.certified);
        assert!(verify(&p, &rep.to_approx().unwrap()).unwrap());
        assert!(IlsProblem::from_json(r#"{"class":"sigma_exists"}"#).is_err());
        assert!(IlsProblem::from_json(&s.replace("ball_at", "ball_at\",\"bogus\":\"1")).is_err());
    }

    #[test]
    fn empty_instance_is_uncertified_not_error() {
        let s = r#"{"class":"sigma_forall_exists","A":[[[0.5,1.5]]],"b_box":[[2,2.1]],"shape":"cube_variable"}"#;
        let rep = solve_report(&IlsProblem::from_json(s).unwrap()).unwrap();
        assert!(!rep.certified);
    }
}
