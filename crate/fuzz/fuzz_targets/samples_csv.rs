#![no_main]

use libfuzzer_sys::fuzz_target;
use spiked_edgeworth::simulation::{format_float, parse_samples_csv, CSV_HEADER};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_samples_csv(text) {
        // re-emitting accepted rows must parse back to the same values
        let mut again = format!("{CSV_HEADER}\n");
        for r in &rows {
            assert!(r.ell_hat.is_finite() && r.r_n.is_finite());
            again.push_str(&format!("{},{},{}\n", r.replicate_index, format_float(r.ell_hat), format_float(r.r_n)));
        }
        assert_eq!(parse_samples_csv(&again).unwrap(), rows);
    }
});
