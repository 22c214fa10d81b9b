#![no_main]

use innerset::parse::parse_sweep_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Sweeps can be arbitrarily long; parsing and validation are the surface.
    if let Ok(s) = parse_sweep_spec(data) {
        let _ = s.validate();
    }
});
