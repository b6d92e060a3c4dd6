//! Replays the fuzz corpus seeds through the round-trip checks of the fuzz
//! targets, so the seeds and the properties stay valid on stable builds.

use std::fs;
use std::path::PathBuf;

use ffk::csa::parse_algebra;
use ffk::parse::{parse_field_spec, parse_poly, parse_ratfunc};
use ffk::places::{parse_place, Place};
use ffk::tower::{parse_tower_element, TowerSpec};
use ffk::Field;

fn seeds(target: &str) -> Vec<String> {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        target,
    ]
    .iter()
    .collect();
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn polynomial_seeds() {
    let mut accepted = 0;
    for src in seeds("parse_poly") {
        for field in [Field::prime(5).unwrap(), Field::new(3, 2, None).unwrap()] {
            if let Ok(p) = parse_poly(&field, &src) {
                assert_eq!(parse_poly(&field, &p.to_string()), Ok(p));
                accepted += 1;
            }
        }
    }
    assert!(accepted > 0);
}

#[test]
fn rational_function_seeds() {
    let field = Field::prime(7).unwrap();
    let mut rejected = 0;
    for src in seeds("parse_ratfunc") {
        match parse_ratfunc(&field, &src) {
            Ok(r) => {
                assert!(r.num().gcd(r.den()).is_one() && r.den().is_monic());
                assert_eq!(parse_ratfunc(&field, &r.to_string()), Ok(r));
            }
            Err(_) => rejected += 1,
        }
    }
    // Exponents are unsigned in the grammar.
    assert_eq!(rejected, 1);
}

#[test]
fn field_spec_seeds() {
    let mut rejected = 0;
    for src in seeds("parse_field_spec") {
        match parse_field_spec(&src) {
            Ok(field) => {
                let again = parse_field_spec(&field.to_string()).unwrap();
                assert_eq!(again.modulus(), field.modulus());
            }
            Err(_) => rejected += 1,
        }
    }
    // p = 2 is outside the supported characteristics.
    assert_eq!(rejected, 1);
}

#[test]
fn place_seeds() {
    let field = Field::prime(5).unwrap();
    let mut rejected = 0;
    for src in seeds("parse_place") {
        match parse_place(&field, &src) {
            Ok(place) => {
                if let Place::Finite(pi) = &place {
                    assert!(pi.is_irreducible().unwrap());
                }
                assert_eq!(parse_place(&field, &place.to_string()), Ok(place));
            }
            Err(_) => rejected += 1,
        }
    }
    assert_eq!(rejected, 1);
}

#[test]
fn tower_element_seeds() {
    let field = Field::prime(5).unwrap();
    let levels = ["t^2+2", "t^2+3"]
        .iter()
        .map(|s| parse_poly(&field, s).unwrap())
        .collect();
    let spec = TowerSpec::new(&field, 2, levels).unwrap();
    for src in seeds("parse_tower_element") {
        let x = parse_tower_element(&spec, &src).unwrap();
        assert_eq!(parse_tower_element(&spec, &x.to_string()), Ok(x));
    }
}

#[test]
fn algebra_seeds() {
    let field = Field::prime(7).unwrap();
    let mut rejected = 0;
    for src in seeds("parse_algebra") {
        match parse_algebra(&field, &src) {
            Ok(alg) => {
                let again = parse_algebra(&field, &alg.to_string()).unwrap();
                assert_eq!(
                    (again.a(), again.b(), again.degree()),
                    (alg.a(), alg.b(), alg.degree())
                );
            }
            Err(_) => rejected += 1,
        }
    }
    assert_eq!(rejected, 1);
}
