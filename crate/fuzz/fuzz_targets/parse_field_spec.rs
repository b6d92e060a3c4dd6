#![no_main]

use ffk::parse::parse_field_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    if let Ok(field) = parse_field_spec(input) {
        assert!(field.size() <= ffk::ffield::MAX_FIELD_SIZE);
        let shown = field.to_string();
        let again = parse_field_spec(&shown).expect("rendered spec parses");
        assert_eq!(again.modulus(), field.modulus(), "{shown}");
    }
});
