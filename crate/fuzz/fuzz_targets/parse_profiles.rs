#![no_main]

use libfuzzer_sys::fuzz_target;
use salary_model::io::{parse_profiles, profiles_to_json};
use salary_model::{total_salary, ModelParameters};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(profiles) = parse_profiles(text) else { return };
    let params = ModelParameters::default();
    for named in &profiles {
        let breakdown = total_salary(&named.profile, &params).expect("validated profile evaluates");
        assert!(breakdown.total.amount().is_finite());
    }
    assert_eq!(parse_profiles(&profiles_to_json(&profiles)).unwrap(), profiles);
});
