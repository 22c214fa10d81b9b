#![no_main]

use innerset::parse::parse_result;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = parse_result(data) {
        let _ = r.to_approx();
    }
});
