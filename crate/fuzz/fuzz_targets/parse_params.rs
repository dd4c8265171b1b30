#![no_main]

use libfuzzer_sys::fuzz_target;
use salary_model::io::{params_to_json, parse_params};
use salary_model::{envelope, EnvelopeMode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(params) = parse_params(text) else { return };
    let reparsed = parse_params(&params_to_json(&params)).expect("saved parameters reload");
    assert_eq!(params, reparsed);
    let _ = envelope(&params, EnvelopeMode::Consistent);
});
