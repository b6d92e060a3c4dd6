#![no_main]

//! Any accepted polynomial re-parses from its rendering to the same value.

use ffk::parse::parse_poly;
use ffk::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    for field in [Field::prime(5).unwrap(), Field::new(3, 2, None).unwrap()] {
        if let Ok(p) = parse_poly(&field, input) {
            let shown = p.to_string();
            assert_eq!(parse_poly(&field, &shown).as_ref(), Ok(&p), "{shown}");
        }
    }
});
