#![no_main]

use innerset::parse::parse_problem;
use innerset::solution_sets::solve_report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Anything that parses must also solve or fail cleanly, and survive a
    // serialization round trip.
    if let Ok(p) = parse_problem(data) {
        if p.a.nrows() <= 4 && p.a.ncols() <= 4 {
            let _ = solve_report(&p);
        }
        let again = parse_problem(p.to_json().as_bytes()).expect("own output parses");
        assert_eq!(again.class, p.class);
    }
});
