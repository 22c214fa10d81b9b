//! Runs the fuzz entry points over the checked-in corpus and cheap byte
//! mutations of it, so parser panics show up without a fuzzing toolchain.

use std::path::Path;

use innerset::capability::run_query;
use innerset::parse::*;
use innerset::robot::Robot;
use innerset::solution_sets::solve_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{dir:?}: {e}"))
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn mutate(rng: &mut impl Rng, data: &[u8]) -> Vec<u8> {
    let mut d = data.to_vec();
    match rng.gen_range(0..4) {
        0 if !d.is_empty() => {
            let k = rng.gen_range(0..d.len());
            d[k] = rng.gen();
        }
        1 => d.truncate(rng.gen_range(0..=d.len())),
        2 if !d.is_empty() => {
            let k = rng.gen_range(0..d.len());
            d.insert(k, *b"-0.e9[]{},\"".get(rng.gen_range(0..11)).unwrap());
        }
        _ => {
            // Swap a digit run for an extreme number.
            let s = String::from_utf8_lossy(&d).into_owned();
            let extreme =
                ["1e308", "-1e308", "NaN", "0", "1e-320", "99999999999"][rng.gen_range(0..6)];
            d = s.replacen("1", extreme, 1).into_bytes();
        }
    }
    d
}

fn exercise(target: &str, data: &[u8]) {
    match target {
        "parse_problem" => {
            if let Ok(p) = parse_problem(data) {
                if p.a.nrows() <= 4 && p.a.ncols() <= 4 {
                    let _ = solve_report(&p);
                }
                parse_problem(p.to_json().as_bytes()).expect("own output parses");
            }
        }
        "parse_robot" => {
            if let Ok(r) = parse_robot(data) {
                parse_robot(r.to_json().as_bytes()).expect("own output parses");
            }
        }
        "parse_result" => {
            if let Ok(r) = parse_result(data) {
                let _ = r.to_approx();
            }
        }
        "parse_capability_query" => {
            if let Ok(q) = parse_capability_query(data) {
                let _ = run_query(&Robot::preset(), &q);
            }
        }
        "parse_sweep_spec" => {
            if let Ok(s) = parse_sweep_spec(data) {
                let _ = s.validate();
            }
        }
        other => unreachable!("{other}"),
    }
}

const TARGETS: [&str; 5] = [
    "parse_problem",
    "parse_robot",
    "parse_result",
    "parse_capability_query",
    "parse_sweep_spec",
];

#[test]
fn bundled_seeds_parse() {
    for target in TARGETS {
        for (name, data) in seeds(target) {
            let ok = match target {
                "parse_problem" => parse_problem(&data).is_ok(),
                "parse_robot" => parse_robot(&data).is_ok(),
                "parse_result" => parse_result(&data).is_ok(),
                "parse_capability_query" => parse_capability_query(&data).is_ok(),
                _ => parse_sweep_spec(&data).is_ok(),
            };
            let malformed = name == "empty_object.json" || name == "missing_center.json";
            assert_eq!(ok, !malformed, "{target}/{name}");
        }
    }
}

#[test]
fn mutated_seeds_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for target in TARGETS {
        for (_, data) in seeds(target) {
            exercise(target, &data);
            for _ in 0..200 {
                let m = mutate(&mut rng, &data);
                exercise(target, &m);
            }
        }
    }
}
