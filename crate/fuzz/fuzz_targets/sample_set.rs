#![no_main]

//! Input is `<sidecar JSON>\0<sample CSV>`.

use libfuzzer_sys::fuzz_target;
use spiked_edgeworth::simulation::SampleSet;

fuzz_target!(|data: &[u8]| {
    let Some(split) = data.iter().position(|&b| b == 0) else { return };
    let (Ok(json), Ok(csv)) = (std::str::from_utf8(&data[..split]), std::str::from_utf8(&data[split + 1..])) else {
        return;
    };
    if let Ok(set) = SampleSet::from_csv_and_json(csv, json) {
        let again = SampleSet::from_csv_and_json(&set.to_csv(), &set.meta().to_json()).unwrap();
        assert_eq!(again, set);
    }
});
