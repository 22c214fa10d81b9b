//! Regenerates the worked examples from bundled data: the numbers, 2-D plots,
//! and a pass/fail table against the reference values.

use std::fmt::Write;
use std::time::Instant;

use innerset::capability::*;
use innerset::geometry::{InnerApprox, ShapeRequest, SolutionClass, Zonotope};
use innerset::robot::{Robot, RobotState};
use innerset::solution_sets::*;
use innerset::{Interval, IntervalMatrix, IntervalVector};
use nalgebra::DMatrix;

use crate::bench::{self, BenchSpec};
use crate::svg::{self, Layer};
use crate::CliError;

pub const IDS: [&str; 8] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table3",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tol {
    Abs(f64),
    Rel(f64),
    /// `got` must stay strictly under `want`.
    Below,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub id: &'static str,
    pub name: String,
    pub got: f64,
    pub want: f64,
    pub tol: Tol,
}

impl Check {
    pub fn pass(&self) -> bool {
        match self.tol {
            Tol::Abs(t) => (self.got - self.want).abs() <= t,
            Tol::Rel(t) => (self.got - self.want).abs() <= t * self.want.abs(),
            Tol::Below => self.got < self.want,
        }
    }

    fn tol_text(&self) -> String {
        match self.tol {
            Tol::Abs(t) => format!("±{t}"),
            Tol::Rel(t) => format!("±{}%", t * 100.0),
            Tol::Below => "<".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug)]
pub struct Figure {
    pub id: &'static str,
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Replaces every value tolerance with this relative one.
    pub tolerance: Option<f64>,
    /// Box width of the configuration-space maps.
    pub sweep_resolution: f64,
    pub bench_runs: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tolerance: None,
            sweep_resolution: 0.1,
            bench_runs: 20,
            seed: 0,
        }
    }
}

/// The 2×3 matrix of the small worked example.
pub fn example_a() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 3, &[0.8947, 0.6707, 0.2409, 0.3348, 0.3899, 0.6958])
}

pub fn example_x() -> IntervalVector {
    IntervalVector::from_bounds(&[(-1.0, 1.0); 3]).expect("valid box")
}

pub fn example_b() -> IntervalVector {
    IntervalVector::from_bounds(&[(-74.0, 95.0), (-24.0, 20.0), (-22.0, 33.0)]).expect("valid box")
}

/// Configuration, joint-velocity and torque boxes of the arm examples.
#[allow(clippy::approx_constant)]
pub fn example_state() -> RobotState {
    let b = |c: [f64; 3]| IntervalVector::mid_rad(&c, &[0.01; 3]).expect("valid box");
    RobotState {
        q: b([0.0, -1.5708, 1.8675]),
        qd: b([1.0, 1.0, 1.0]),
        tau: b([18.0, 1.0, 2.0]),
    }
}

pub fn example_horizon() -> Interval {
    Interval::new(0.0, 0.01).expect("valid horizon")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64() * 1e3)
}

struct Builder {
    id: &'static str,
    checks: Vec<Check>,
    artifacts: Vec<Artifact>,
}

impl Builder {
    fn new(id: &'static str) -> Self {
        Builder {
            id,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, got: f64, want: f64, tol: Tol) {
        self.checks.push(Check {
            id: self.id,
            name: name.into(),
            got,
            want,
            tol,
        });
    }

    fn radius(&mut self, name: &str, a: &InnerApprox, want: f64, tol: Tol) {
        self.check(
            format!("{name} r"),
            a.radius().unwrap_or(f64::NAN),
            want,
            tol,
        );
    }

    fn center(&mut self, name: &str, a: &InnerApprox, want: [f64; 2], tol: Tol) {
        let c = a
            .center()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| vec![f64::NAN; 2]);
        self.check(format!("{name} center x"), c[0], want[0], tol);
        self.check(format!("{name} center y"), c[1], want[1], tol);
    }

    fn file(&mut self, name: impl Into<String>, contents: String) {
        self.artifacts.push(Artifact {
            name: name.into(),
            contents,
        });
    }

    fn finish(self) -> Figure {
        Figure {
            id: self.id,
            checks: self.checks,
            artifacts: self.artifacts,
        }
    }
}

fn origin(dim: usize) -> [ShapeRequest; 2] {
    [
        ShapeRequest::CubeAt(vec![0.0; dim]),
        ShapeRequest::BallAt(vec![0.0; dim]),
    ]
}

fn solved(
    class: SolutionClass,
    a: &IntervalMatrix,
    x: Option<&IntervalVector>,
    b: Option<&IntervalVector>,
    shape: ShapeRequest,
) -> Result<(InnerApprox, SolveExtras), CliError> {
    let p = IlsProblem::new(class, a.clone(), x.cloned(), b.cloned(), shape)?;
    Ok(solve(&p)?)
}

/// Standard plot: comparison outline, inner polytope, fixed-center shapes
/// solid and free-center shapes dashed.
fn shapes_plot(
    title: &str,
    outline: Option<Layer>,
    shapes: &[&InnerApprox; 5],
    labels: (&str, &str),
) -> String {
    let mut layers: Vec<Layer> = outline.into_iter().collect();
    let colors = ["purple", "red", "green", "red", "green"];
    for (k, s) in shapes.iter().enumerate() {
        if let Some(ls) = svg::approx_layers(s, colors[k], k >= 3) {
            layers.extend(ls);
        }
    }
    svg::render(title, labels.0, labels.1, &layers)
}

fn outline(vertices: &[Vec<f64>]) -> Layer {
    match svg::polygon(vertices, "steelblue", false) {
        Layer::Polygon { pts, color, .. } => Layer::Polygon {
            pts,
            color,
            fill: false,
            dashed: true,
        },
        other => other,
    }
}

/// Five shapes of one class on the small example, in plot order.
fn five(
    class: SolutionClass,
    a: &IntervalMatrix,
    x: Option<&IntervalVector>,
    b: Option<&IntervalVector>,
    dim: usize,
) -> Result<(Vec<(InnerApprox, SolveExtras)>, f64), CliError> {
    let [cube, ball] = origin(dim);
    let mut out = Vec::new();
    let mut fixed_ms = 0.0;
    for (k, shape) in [
        ShapeRequest::Polytope,
        cube,
        ball,
        ShapeRequest::CubeVariable,
        ShapeRequest::BallVariable,
    ]
    .into_iter()
    .enumerate()
    {
        let (r, ms) = timed(|| solved(class, a, x, b, shape));
        if k == 1 || k == 2 {
            fixed_ms += ms;
        }
        out.push(r?);
    }
    Ok((out, fixed_ms))
}

fn values_json(figure: &Figure) -> String {
    let v: Vec<serde_json::Value> = figure
        .checks
        .iter()
        .map(|c| serde_json::json!({ "check": c.name, "value": c.got, "reference": c.want, "pass": c.pass() }))
        .collect();
    serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
}

fn fig2() -> Result<Figure, CliError> {
    let mut f = Builder::new("fig2");
    let a = IntervalMatrix::from_point(&example_a())?;
    let x = example_x();
    let (s, ms) = five(SolutionClass::OmegaExists, &a, Some(&x), None, 2)?;
    let t = Tol::Abs(5e-4);
    f.radius("origin cube", &s[1].0, 0.4686, t);
    f.radius("origin ball", &s[2].0, 0.6407, t);
    f.radius("variable cube", &s[3].0, 0.4686, t);
    f.center("variable cube", &s[3].0, [0.4855, 0.2823], t);
    f.radius("variable ball", &s[4].0, 0.6407, t);
    f.center("variable ball", &s[4].0, [0.2921, 0.1698], t);
    f.check("origin shapes ms", ms, 10.0, Tol::Below);
    let shapes = [&s[0].0, &s[1].0, &s[2].0, &s[3].0, &s[4].0];
    f.file(
        "fig2.svg",
        shapes_plot("image of the box", None, &shapes, ("b1", "b2")),
    );
    Ok(f.finish())
}

fn fig3() -> Result<Figure, CliError> {
    let mut f = Builder::new("fig3");
    let a = IntervalMatrix::from_mid_rad(&example_a(), 0.01)?;
    let x = example_x();
    let (s, _) = five(SolutionClass::OmegaForallExists, &a, Some(&x), None, 2)?;
    let t = Tol::Abs(5e-4);
    f.check(
        "polytope scale",
        s[0].1.scale.unwrap_or(f64::NAN),
        0.9289,
        t,
    );
    f.radius("origin cube", &s[1].0, 0.4353, t);
    f.radius("origin ball", &s[2].0, 0.5951, t);
    f.radius("variable cube", &s[3].0, 0.4353, t);
    f.center("variable cube", &s[3].0, [0.4510, 0.2622], t);
    f.radius("variable ball", &s[4].0, 0.5951, t);
    f.center("variable ball", &s[4].0, [0.2714, 0.1577], t);
    let mid = Zonotope::from_box_image(&example_a(), &x)?.vpolytope()?;
    let shapes = [&s[0].0, &s[1].0, &s[2].0, &s[3].0, &s[4].0];
    f.file(
        "fig3.svg",
        shapes_plot(
            "common image under every matrix",
            Some(outline(mid.vertices())),
            &shapes,
            ("b1", "b2"),
        ),
    );
    Ok(f.finish())
}

fn sigma_fig(id: &'static str, class: SolutionClass, want: [f64; 8]) -> Result<Builder, CliError> {
    let mut f = Builder::new(id);
    let mid = example_a().transpose();
    let a = match class {
        SolutionClass::SigmaExists => IntervalMatrix::from_point(&mid)?,
        _ => IntervalMatrix::from_mid_rad(&mid, 0.01)?,
    };
    let b = example_b();
    let (s, _) = five(class, &a, None, Some(&b), 2)?;
    let (r, c) = (Tol::Rel(1e-3), Tol::Abs(5e-3));
    f.radius("origin cube", &s[1].0, want[0], r);
    f.radius("origin ball", &s[2].0, want[1], r);
    f.radius("variable cube", &s[3].0, want[2], r);
    f.center("variable cube", &s[3].0, [want[3], want[4]], c);
    f.radius("variable ball", &s[4].0, want[5], r);
    f.center("variable ball", &s[4].0, [want[6], want[7]], c);
    let exists = sigma_exists_polytope(&mid, &b)?;
    let shapes = [&s[0].0, &s[1].0, &s[2].0, &s[3].0, &s[4].0];
    f.file(
        format!("{id}.svg"),
        shapes_plot(
            "solutions for every matrix",
            Some(outline(exists.vertices())),
            &shapes,
            ("x1", "x2"),
        ),
    );
    Ok(f)
}

fn fig4() -> Result<Figure, CliError> {
    let f = sigma_fig(
        "fig4",
        SolutionClass::SigmaForallExists,
        [
            18.5082, 25.3333, 20.3591, -1.0599, -3.1972, 27.8666, -2.5291, -0.6963,
        ],
    )?;
    Ok(f.finish())
}

fn fig5() -> Result<Figure, CliError> {
    let mut f = sigma_fig(
        "fig5",
        SolutionClass::SigmaExists,
        [
            18.8573, 25.7800, 20.7430, -1.0450, -3.3319, 28.3579, -2.5624, -0.7216,
        ],
    )?;
    // The right-hand-side box cut down to the column space: a 3-D point cloud.
    let reduced = sigma_exists_reduced(&example_a().transpose(), &example_b())?;
    f.file(
        "fig5_reduced.csv",
        points_csv(&["b1", "b2", "b3"], reduced.vertices()),
    );
    Ok(f.finish())
}

fn points_csv(header: &[&str], pts: &[Vec<f64>]) -> String {
    let mut s = header.join(",") + "\n";
    for p in pts {
        let row: Vec<String> = p.iter().map(f64::to_string).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn capability_plot(
    title: &str,
    polytope: &InnerApprox,
    cube: &InnerApprox,
    ball: &InnerApprox,
    labels: (&str, &str),
) -> String {
    let mut layers = Vec::new();
    for (a, color) in [(polytope, "purple"), (cube, "red"), (ball, "green")] {
        layers.extend(svg::approx_layers(a, color, false).unwrap_or_default());
    }
    svg::render(title, labels.0, labels.1, &layers)
}

fn fig6(robot: &Robot, opts: &Options) -> Result<Figure, CliError> {
    let mut f = Builder::new("fig6");
    let (p, lim) = (&robot.params, &robot.limits);
    let q = example_state().q;
    let t = Tol::Rel(0.01);
    let [cube, ball] = origin(2);

    let j = innerset::robot::jacobian(p, &q)?;
    f.check(
        "velocity polytope scale",
        omega_forall_exists_scale(&j, &lim.qd)?.r,
        0.9136,
        t,
    );
    let (vc, ms_c) = timed(|| velocity_capability(p, &q, &lim.qd, &cube));
    let (vb, ms_b) = timed(|| velocity_capability(p, &q, &lim.qd, &ball));
    let (vc, vb) = (vc?, vb?);
    f.radius("velocity origin cube", &vc, 0.4748, t);
    f.radius("velocity origin ball", &vb, 0.6657, t);
    f.check("velocity query ms", ms_c.max(ms_b), 100.0, Tol::Below);
    let vp = velocity_capability(p, &q, &lim.qd, &ShapeRequest::Polytope)?;
    f.file(
        "fig6_velocity.svg",
        capability_plot("end-effector velocities", &vp, &vc, &vb, ("vx", "vy")),
    );

    let (kc, ms_c) = timed(|| kinetostatic_capability(p, &q, &lim.tau, &cube));
    let (kb, ms_b) = timed(|| kinetostatic_capability(p, &q, &lim.tau, &ball));
    let (kc, kb) = (kc?, kb?);
    f.radius("kinetostatic origin cube", &kc, 67.3479, t);
    f.radius("kinetostatic origin ball", &kb, 85.1640, t);
    f.check("kinetostatic query ms", ms_c.max(ms_b), 100.0, Tol::Below);
    let kp = kinetostatic_capability(p, &q, &lim.tau, &ShapeRequest::Polytope)?;
    f.file(
        "fig6_kinetostatic.svg",
        capability_plot("end-effector forces", &kp, &kc, &kb, ("fx", "fy")),
    );

    // Maps over the first two joints with the third held at its example box.
    let domain = IntervalVector::new(vec![lim.q[0], lim.q[1], q[2]])?;
    for kind in [CapabilityKind::Velocity, CapabilityKind::Kinetostatic] {
        let spec = SweepSpec {
            kind,
            q_domain: domain.clone(),
            resolution: opts.sweep_resolution,
            metric: SweepMetric::OriginBallR,
            fixed: vec![2],
            threshold: None,
        };
        let cells = sweep(robot, &spec)?;
        let name = if kind == CapabilityKind::Velocity {
            "velocity"
        } else {
            "kinetostatic"
        };
        f.file(format!("fig6_{name}_rmap.csv"), sweep_csv(&cells));
        f.file(
            format!("fig6_{name}_rmap.svg"),
            svg::sweep_heat_map(&cells, 0, 1, &format!("{name} ball radius")),
        );
    }
    Ok(f.finish())
}

fn fig7(robot: &Robot) -> Result<Figure, CliError> {
    let mut f = Builder::new("fig7");
    let (p, lim) = (&robot.params, &robot.limits);
    let s = example_state();
    let t = Tol::Rel(0.01);
    let sets = acceleration_sets(p, &s.q, &s.qd, &lim.qd, &lim.qdd)?;
    f.check("velocity-product scale", sets.bias.0.r, 0.8446, t);
    f.check("joint-acceleration scale", sets.drive.0.r, 0.9237, t);
    let [cube, ball] = origin(2);
    let (c, ms_c) = timed(|| acceleration_capability(p, &s.q, &s.qd, &lim.qd, &lim.qdd, &cube));
    let (b, ms_b) = timed(|| acceleration_capability(p, &s.q, &s.qd, &lim.qd, &lim.qdd, &ball));
    let (c, b) = (c?, b?);
    f.radius("origin cube", &c, 5.7386, t);
    f.radius("origin ball", &b, 7.7526, t);
    f.check("query ms", ms_c.max(ms_b), 100.0, Tol::Below);
    let mut layers = vec![
        outline(sets.bias.1.vpolytope()?.vertices()),
        svg::polygon(sets.drive.1.vpolytope()?.vertices(), "orange", false),
        svg::polygon(sets.sum.vpolytope()?.vertices(), "purple", true),
    ];
    layers.extend(svg::approx_layers(&c, "red", false).unwrap_or_default());
    layers.extend(svg::approx_layers(&b, "green", false).unwrap_or_default());
    f.file(
        "fig7.svg",
        svg::render("end-effector accelerations", "ax", "ay", &layers),
    );
    Ok(f.finish())
}

fn fig8(robot: &Robot) -> Result<Figure, CliError> {
    let mut f = Builder::new("fig8");
    let (p, lim) = (&robot.params, &robot.limits);
    let s = example_state();
    let h = example_horizon();
    let t = Tol::Rel(0.01);
    let [cube, ball] = origin(3);
    let (c, ms_c) = timed(|| future_acceleration_capability(p, lim, &s, h, &cube));
    let (b, ms_b) = timed(|| future_acceleration_capability(p, lim, &s, h, &ball));
    let ((env, c), (_, b)) = (c?, b?);
    f.radius("origin cube", &c, 2.3382, t);
    f.radius("origin ball", &b, 3.2315, t);
    f.check("query ms", ms_c.max(ms_b), 100.0, Tol::Below);
    let (_, poly) = future_acceleration_capability(p, lim, &s, h, &ShapeRequest::Polytope)?;
    if let innerset::geometry::Shape::Polytope { vrep: Some(v), .. } = &poly.shape {
        f.file(
            "fig8_polytope.csv",
            points_csv(&["qdd1", "qdd2", "qdd3"], v.vertices()),
        );
    }
    f.file(
        "fig8_envelope.json",
        serde_json::to_string_pretty(&env).expect("envelope serializes") + "\n",
    );
    Ok(f.finish())
}

/// Timing caps: fixed-center Σ shapes, free-center programs, polytopes.
pub fn timing_cap(class: SolutionClass, op: &str) -> Option<f64> {
    match op {
        "cube_at" | "ball_at" if !class.is_omega() => Some(1.0),
        "cube_variable" | "ball_variable" | "ball_variable_lb" => Some(500.0),
        "polytope" => Some(2000.0),
        _ => None,
    }
}

fn table3(opts: &Options) -> Result<Figure, CliError> {
    let mut f = Builder::new("table3");
    let rows = bench::run(&BenchSpec {
        runs: opts.bench_runs,
        seed: opts.seed,
        ..BenchSpec::default()
    })?;
    let mut csv = String::from("op,class,mean_ms,std_ms,median_ms,reference_ms\n");
    for r in &rows {
        let reference = r.reference_ms.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{:.6},{:.6},{:.6},{}",
            r.op,
            r.class.name(),
            r.mean_ms,
            r.std_ms,
            r.median_ms,
            reference
        );
        if let Some(cap) = timing_cap(r.class, r.op) {
            f.check(
                format!("{} {} mean ms", r.class.name(), r.op),
                r.mean_ms,
                cap,
                Tol::Below,
            );
        }
    }
    f.file("table3.csv", csv);
    Ok(f.finish())
}

pub fn reproduce(id: &str, robot: &Robot, opts: &Options) -> Result<Figure, CliError> {
    let mut fig = match id {
        "fig2" => fig2(),
        "fig3" => fig3(),
        "fig4" => fig4(),
        "fig5" => fig5(),
        "fig6" => fig6(robot, opts),
        "fig7" => fig7(robot),
        "fig8" => fig8(robot),
        "table3" => table3(opts),
        other => Err(CliError::Usage(format!(
            "unknown figure id `{other}`; expected one of {}",
            IDS.join(", ")
        ))),
    }?;
    if let Some(t) = opts.tolerance {
        for c in &mut fig.checks {
            if c.tol != Tol::Below {
                c.tol = Tol::Rel(t);
            }
        }
    }
    let values = values_json(&fig);
    fig.artifacts.push(Artifact {
        name: format!("{}_values.json", fig.id),
        contents: values,
    });
    Ok(fig)
}

/// Fixed-width pass/fail table over all checks.
pub fn table(figs: &[Figure]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<7} {:<46} {:>14} {:>12} {:>9}  result",
        "id", "check", "got", "reference", "tol"
    );
    for fig in figs {
        for c in &fig.checks {
            let _ = writeln!(
                s,
                "{:<7} {:<46} {:>14.6} {:>12} {:>9}  {}",
                c.id,
                c.name,
                c.got,
                c.want,
                c.tol_text(),
                if c.pass() { "PASS" } else { "FAIL" }
            );
        }
    }
    let (n, failed) = figs
        .iter()
        .flat_map(|f| &f.checks)
        .fold((0, 0), |(n, k), c| (n + 1, k + usize::from(!c.pass())));
    let _ = writeln!(s, "{} checks, {} failed", n, failed);
    s
}
