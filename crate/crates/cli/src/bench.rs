//! Timings of every class/shape pair on a random system.

use std::fmt::Write;
use std::time::Instant;

use innerset::geometry::{ShapeRequest, SolutionClass};
use innerset::solution_sets::{solve, IlsProblem};
use innerset::{Interval, IntervalMatrix, IntervalVector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Radius added to every entry for the `∀∃` classes.
pub const BENCH_RADIUS: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub op: &'static str,
    pub class: SolutionClass,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub median_ms: f64,
    /// Reference timing for the same pair, where one was published.
    pub reference_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub n: usize,
    pub m: usize,
    pub runs: usize,
    pub seed: u64,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            n: 7,
            m: 6,
            runs: 20,
            seed: 0,
        }
    }
}

const OPS: [&str; 6] = [
    "polytope",
    "cube_at",
    "cube_variable",
    "ball_at",
    "ball_variable_lb",
    "ball_variable",
];

const CLASSES: [SolutionClass; 4] = [
    SolutionClass::OmegaExists,
    SolutionClass::OmegaForallExists,
    SolutionClass::SigmaExists,
    SolutionClass::SigmaForallExists,
];

/// Published means (ms) at n=7, m=6 on 2010-era hardware.
fn reference_ms(class: SolutionClass, op: &str) -> Option<f64> {
    use SolutionClass::*;
    let row = match op {
        "polytope" => [56.842, 56.719, 187.374, 381.568],
        "cube_at" => [1.496, 1.537, 0.024, 0.024],
        "cube_variable" => [20.748, 20.807, 30.690, 33.154],
        "ball_at" => [1.509, 1.541, 0.036, 0.036],
        "ball_variable_lb" => [f64::NAN, f64::NAN, 17.287, 17.560],
        "ball_variable" => [19.872, 19.883, 34.701, 48.459],
        _ => return None,
    };
    let v = row[match class {
        OmegaExists => 0,
        OmegaForallExists => 1,
        SigmaExists => 2,
        SigmaForallExists => 3,
    }];
    (!v.is_nan()).then_some(v)
}

/// The random problem for one class: `m×n` for the image classes, tall `n×m`
/// for the preimage classes so the set is bounded.
pub fn bench_problem(
    class: SolutionClass,
    op: &str,
    spec: &BenchSpec,
) -> Result<IlsProblem, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (rows, cols) = if class.is_omega() {
        (spec.m, spec.n)
    } else {
        (spec.n, spec.m)
    };
    let mid = DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
    let forall = matches!(
        class,
        SolutionClass::OmegaForallExists | SolutionClass::SigmaForallExists
    );
    let a = if forall {
        IntervalMatrix::from_mid_rad(&mid, BENCH_RADIUS)?
    } else {
        IntervalMatrix::from_point(&mid)?
    };
    let center_dim = if class.is_omega() { rows } else { cols };
    let shape = match op {
        "polytope" => ShapeRequest::Polytope,
        "cube_at" => ShapeRequest::CubeAt(vec![0.0; center_dim]),
        "ball_at" => ShapeRequest::BallAt(vec![0.0; center_dim]),
        "cube_variable" => ShapeRequest::CubeVariable,
        "ball_variable" => ShapeRequest::BallVariable,
        "ball_variable_lb" => ShapeRequest::BallVariableLb,
        other => return Err(CliError::Usage(format!("unknown bench op {other}"))),
    };
    let (x_box, b_box) = if class.is_omega() {
        (
            Some(IntervalVector::from_bounds(&vec![(-1.0, 1.0); cols])?),
            None,
        )
    } else {
        let b: Vec<(f64, f64)> = (0..rows)
            .map(|_| {
                let w = rng.gen_range(1.0..2.0);
                (-w, w)
            })
            .collect();
        (None, Some(IntervalVector::from_bounds(&b)?))
    };
    Ok(IlsProblem::new(class, a, x_box, b_box, shape)?)
}

/// Mean, sample standard deviation and median.
fn summarize(xs: &mut [f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    xs.sort_by(f64::total_cmp);
    let k = xs.len() / 2;
    let median = if xs.len() % 2 == 1 {
        xs[k]
    } else {
        (xs[k - 1] + xs[k]) / 2.0
    };
    (mean, var.sqrt(), median)
}

/// Mean, standard deviation and median wall time (ms) of `solve`.
pub fn time_problem(p: &IlsProblem, runs: usize) -> Result<(f64, f64, f64), innerset::Error> {
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs.max(1) {
        let t = Instant::now();
        std::hint::black_box(solve(std::hint::black_box(p))?);
        times.push(t.elapsed().as_secs_f64() * 1e3);
    }
    Ok(summarize(&mut times))
}

pub fn run(spec: &BenchSpec) -> Result<Vec<BenchRow>, CliError> {
    let mut rows = Vec::new();
    for class in CLASSES {
        for op in OPS {
            if class.is_omega() && op == "ball_variable_lb" {
                continue;
            }
            let p = bench_problem(class, op, spec)?;
            let ((mean_ms, std_ms, median_ms), error) = match time_problem(&p, spec.runs) {
                Ok(t) => (t, None),
                Err(e) => ((f64::NAN, f64::NAN, f64::NAN), Some(e.to_string())),
            };
            let reference_ms = reference_ms(class, op);
            rows.push(BenchRow {
                op,
                class,
                mean_ms,
                std_ms,
                median_ms,
                reference_ms,
                error,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("op,class,mean_ms,std_ms\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.6},{:.6}",
            r.op,
            r.class.name(),
            r.mean_ms,
            r.std_ms
        );
    }
    s
}

/// Median time (ms) of the closed-form cube at the origin for a random
/// square system of each size.
pub fn cube_scaling(sizes: &[usize], reps: usize) -> Result<Vec<(usize, f64)>, CliError> {
    let mut out = Vec::new();
    for &n in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let a = IntervalMatrix::from_fn(n, n, |i, j| {
            let v = if i == j { 4.0 } else { 0.0 };
            Interval::mid_rad(v, 0.01).unwrap()
        })?;
        let b = IntervalVector::from_bounds(
            &(0..n)
                .map(|_| (-rng.gen_range(1.0..2.0), 1.0))
                .collect::<Vec<_>>(),
        )?;
        let c = vec![0.0; n];
        let mut times: Vec<f64> = (0..reps)
            .map(|_| {
                let t = Instant::now();
                for _ in 0..100 {
                    std::hint::black_box(
                        innerset::solution_sets::sigma_cube_at(&a, &b, std::hint::black_box(&c))
                            .unwrap(),
                    );
                }
                t.elapsed().as_secs_f64() * 10.0
            })
            .collect();
        times.sort_by(f64::total_cmp);
        out.push((n, times[times.len() / 2]));
    }
    Ok(out)
}

/// Least-squares slope of `log t` against `log n`.
pub fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_system_completes() {
        let rows = run(&BenchSpec {
            n: 1,
            m: 1,
            runs: 2,
            seed: 3,
        })
        .unwrap();
        assert_eq!(rows.len(), 22);
        let csv = to_csv(&rows);
        assert!(csv.starts_with("op,class,mean_ms,std_ms\n"));
        assert_eq!(csv.lines().count(), 23);
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(usize, f64)> = [4, 8, 16].iter().map(|&n| (n, (n * n) as f64)).collect();
        assert!((loglog_slope(&pts) - 2.0).abs() < 1e-12);
    }
}
