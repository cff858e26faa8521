#![no_main]

use gridex::engine::parse_trace_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(steps) = parse_trace_csv(data) {
        assert!(steps.iter().all(|s| s.weight > 0));
        assert!(steps.windows(2).all(|w| w[0].to == w[1].from));
    }
});
