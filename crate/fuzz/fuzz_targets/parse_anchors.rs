#![no_main]

use libfuzzer_sys::fuzz_target;
use salary_model::io::{anchors_to_json, parse_anchors};
use salary_model::{calibrate_from_anchors, ModelParameters};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(anchors) = parse_anchors(text) else { return };
    assert_eq!(parse_anchors(&anchors_to_json(&anchors)).unwrap(), anchors);
    let _ = calibrate_from_anchors(&anchors, &ModelParameters::default());
});
