#![no_main]

use innerset::parse::parse_robot;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = parse_robot(data) {
        assert!(parse_robot(r.to_json().as_bytes()).is_ok());
    }
});
