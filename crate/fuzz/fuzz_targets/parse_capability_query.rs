#![no_main]

use innerset::capability::run_query;
use innerset::parse::parse_capability_query;
use innerset::robot::Robot;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(q) = parse_capability_query(data) {
        let _ = run_query(&Robot::preset(), &q);
    }
});
