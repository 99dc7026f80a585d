#![no_main]

use libfuzzer_sys::fuzz_target;
use spiked_edgeworth::simulation::SampleMeta;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(meta) = SampleMeta::from_json(text) {
        let _ = meta.params();
        let back = SampleMeta::from_json(&meta.to_json()).unwrap();
        assert_eq!(back.to_json(), meta.to_json());
    }
});
