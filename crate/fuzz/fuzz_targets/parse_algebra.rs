#![no_main]

use ffk::csa::parse_algebra;
use ffk::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    let field = Field::prime(7).unwrap();
    if let Ok(alg) = parse_algebra(&field, input) {
        let shown = alg.to_string();
        let again = parse_algebra(&field, &shown).expect("rendered algebra parses");
        assert_eq!((again.a(), again.b(), again.degree()), (alg.a(), alg.b(), alg.degree()), "{shown}");
    }
});
