#![no_main]

use libfuzzer_sys::fuzz_target;
use spiked_edgeworth::grid::{parse_grid, MAX_GRID_POINTS};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(points) = parse_grid(text) {
        assert!(!points.is_empty() && points.len() <= MAX_GRID_POINTS);
        assert!(points.iter().all(|x| x.is_finite()));
    }
});
