#![no_main]

//! Accepted rational functions are in lowest terms and survive a round trip.

use ffk::parse::parse_ratfunc;
use ffk::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    for field in [Field::prime(7).unwrap(), Field::new(3, 2, None).unwrap()] {
        if let Ok(r) = parse_ratfunc(&field, input) {
            assert!(r.num().gcd(r.den()).is_one());
            assert!(r.den().is_monic());
            let shown = r.to_string();
            assert_eq!(parse_ratfunc(&field, &shown).as_ref(), Ok(&r), "{shown}");
        }
    }
});
