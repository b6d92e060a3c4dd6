#![no_main]

use ffk::parse::parse_poly;
use ffk::tower::{parse_tower_element, TowerSpec};
use ffk::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    let field = Field::prime(5).unwrap();
    let levels = ["t^2+2", "t^2+3"].iter().map(|s| parse_poly(&field, s).unwrap()).collect();
    let spec = TowerSpec::new(&field, 2, levels).unwrap();
    if let Ok(x) = parse_tower_element(&spec, input) {
        let shown = x.to_string();
        assert_eq!(parse_tower_element(&spec, &shown).as_ref(), Ok(&x), "{shown}");
    }
});
