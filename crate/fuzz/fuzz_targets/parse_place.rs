#![no_main]

//! Accepted places are infinity or monic irreducibles, and round-trip.

use ffk::places::{parse_place, Place};
use ffk::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    let field = Field::prime(5).unwrap();
    if let Ok(place) = parse_place(&field, input) {
        if let Place::Finite(pi) = &place {
            assert!(pi.is_monic() && pi.is_irreducible().unwrap());
        }
        assert_eq!(parse_place(&field, &place.to_string()).as_ref(), Ok(&place));
    }
});
