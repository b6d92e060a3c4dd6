use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ffk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffk"))
        .args(args)
        .env_remove("FFK_PREC_DEFAULT")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ffk(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .to_string()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&args)).unwrap()
}

fn schema(command: &str) -> Value {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "schemas",
        &format!("{command}.json"),
    ]
    .iter()
    .collect();
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(
        stdout(&[
            "hensel-root",
            "--p",
            "5",
            "--poly",
            "t^2+2",
            "--n",
            "2",
            "--prec",
            "6"
        ]),
        "t + t^-1 + 2*t^-3 + O(t^-5)"
    );
    let profile = json(&[
        "csa-invariants",
        "--p",
        "5",
        "--a",
        "2",
        "--b",
        "t",
        "--l",
        "2",
    ]);
    assert_eq!(
        profile,
        serde_json::json!([
            { "place": "t", "num": 1, "den": 2 },
            { "place": "inf", "num": 1, "den": 2 },
        ])
    );
    assert_eq!(
        stdout(&[
            "tower-enumerate",
            "--p",
            "5",
            "--n",
            "2",
            "--levels",
            "t^2+2",
            "--N",
            "5",
            "--count-only"
        ]),
        "125"
    );
}

#[test]
fn precision_default_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ffk"))
        .args(["hensel-root", "--p", "5", "--poly", "t^2+2", "--n", "2"])
        .env("FFK_PREC_DEFAULT", "6")
        .output()
        .unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "t + t^-1 + 2*t^-3 + O(t^-5)"
    );
    let default = stdout(&[
        "hensel-root",
        "--p",
        "5",
        "--poly",
        "t^2+2",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(serde_json::from_str::<Value>(&default).unwrap()["prec"], 32);
}

#[test]
fn exit_codes_and_diagnostics() {
    for (args, code) in [
        (
            &["place-val", "--p", "5", "--place", "t", "--r", "t+("][..],
            2,
        ),
        (&["place-val", "--place", "t", "--r", "t"][..], 2),
        (&["weak-approx", "--p", "5", "--constraint", "t:0"][..], 2),
        (
            &["place-val", "--p", "5", "--place", "t^2+1", "--r", "t"][..],
            3,
        ),
        (
            &[
                "csa-split",
                "--p",
                "5",
                "--x",
                "1/t",
                "--delta-a",
                "t,inf",
                "--delta-b",
                "t,t-1",
            ][..],
            3,
        ),
        (
            &["tower-norm", "--p", "5", "--levels", "t^2+2", "--x", "0"][..],
            3,
        ),
        (
            &[
                "csa-invariants",
                "--p",
                "5",
                "--a",
                "2",
                "--b",
                "t",
                "--l",
                "3",
            ][..],
            4,
        ),
        (
            &[
                "tower-enumerate",
                "--p",
                "5",
                "--n",
                "3",
                "--levels",
                "t^3+t+1",
                "--N",
                "5",
            ][..],
            4,
        ),
    ] {
        let out = ffk(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = ffk(&["place-val", "--p", "5", "--place", "t^2+1", "--r", "t"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not monic irreducible"));
}

#[test]
fn json_outputs_match_the_shipped_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("field-info", &["--p", "3", "--e", "2", "--n", "4"]),
        ("field-info", &["--p", "7"]),
        (
            "irreducibles",
            &["--p", "5", "--n", "2", "--max-degree", "4"],
        ),
        (
            "hensel-root",
            &["--p", "7", "--poly", "t^3+2", "--n", "3", "--prec", "10"],
        ),
        (
            "place-val",
            &["--p", "5", "--place", "inf", "--r", "(t+1)/t"],
        ),
        ("place-val", &["--p", "5", "--place", "t", "--r", "1/t"]),
        (
            "weak-approx",
            &[
                "--p",
                "5",
                "--constraint",
                "t:0:2",
                "--constraint",
                "t-1:1:1",
            ],
        ),
        (
            "place-split",
            &["--p", "5", "--place", "t", "--n", "2", "--poly", "t^2+2"],
        ),
        (
            "kochen-eval",
            &[
                "--p", "5", "--levels", "t^2+2", "--place", "t", "--x", "u1 + 1/t",
            ],
        ),
        ("kochen-eval", &["--p", "5", "--place", "inf", "--x", "t^2"]),
        (
            "kochen-check",
            &[
                "--p",
                "5",
                "--levels",
                "t^2+2",
                "--place",
                "inf",
                "--samples",
                "20",
            ],
        ),
        (
            "kochen-represent",
            &[
                "--p", "5", "--levels", "t^2+2", "--place", "t", "--r", "u1/t^2",
            ],
        ),
        (
            "tower-norm",
            &["--p", "5", "--levels", "t^2+2", "--x", "t-u1"],
        ),
        (
            "tower-enumerate",
            &["--p", "5", "--levels", "t^2+2", "--N", "5"],
        ),
        (
            "tower-enumerate",
            &["--p", "5", "--levels", "t^2+2", "--N", "25", "--count-only"],
        ),
        ("tower-disc", &["--p", "7", "--poly", "t^3+2", "--n", "3"]),
        (
            "csa-invariants",
            &["--p", "7", "--a", "t", "--b", "t+1", "--l", "3"],
        ),
        (
            "csa-pair",
            &[
                "--p",
                "5",
                "--primary",
                "t",
                "--q1",
                "inf",
                "--q2",
                "t+1",
                "--l",
                "2",
            ],
        ),
        (
            "csa-sample",
            &[
                "--p",
                "5",
                "--a",
                "2",
                "--b",
                "t",
                "--l",
                "2",
                "--samples",
                "10",
            ],
        ),
        (
            "csa-split",
            &[
                "--p",
                "5",
                "--x",
                "(t^2-t+1)/(t-1)",
                "--delta-a",
                "t,inf",
                "--delta-b",
                "t,t-1",
            ],
        ),
    ];
    for (command, args) in cases {
        let mut full = vec![*command];
        full.extend_from_slice(args);
        let value = json(&full);
        let validator = jsonschema::validator_for(&schema(command)).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&value)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{command} {args:?}: {errors:?}\n{value}");
    }
    let strict = jsonschema::validator_for(&schema("csa-invariants")).unwrap();
    assert!(!strict.is_valid(&serde_json::json!([{ "place": "t", "num": 1 }])));
}

#[test]
fn sampling_is_fixed_by_the_seed() {
    let run = |seed: &str| {
        json(&[
            "csa-sample",
            "--p",
            "5",
            "--a",
            "2",
            "--b",
            "t",
            "--l",
            "2",
            "--samples",
            "20",
            "--seed",
            seed,
        ])
    };
    assert_eq!(run("4"), run("4"));
    assert_ne!(run("4")["traces"], run("5")["traces"]);
    let check = |seed: &str| {
        stdout(&[
            "kochen-check",
            "--p",
            "5",
            "--place",
            "t",
            "--samples",
            "50",
            "--seed",
            seed,
            "--format",
            "json",
        ])
    };
    assert_eq!(check("9"), check("9"));
}

#[test]
fn printed_values_parse_back() {
    let y = stdout(&[
        "csa-split",
        "--p",
        "5",
        "--x",
        "(t^2-t+1)/(t-1)",
        "--delta-a",
        "t,inf",
        "--delta-b",
        "t,t-1",
    ]);
    assert_eq!(y, "t");
    let pair = json(&[
        "csa-pair",
        "--p",
        "7",
        "--primary",
        "t",
        "--q1",
        "inf",
        "--q2",
        "t+1",
        "--l",
        "2",
    ]);
    let first = &pair["first"];
    let again = json(&[
        "csa-invariants",
        "--p",
        "7",
        "--a",
        first["a"].as_str().unwrap(),
        "--b",
        first["b"].as_str().unwrap(),
        "--l",
        "2",
    ]);
    assert_eq!(&again, &first["invariants"]);
    let norm = json(&[
        "tower-norm",
        "--p",
        "5",
        "--levels",
        "t^2+2",
        "--x",
        "(t+1)/(t+2) + t*u1",
    ]);
    let element = norm["element"].as_str().unwrap();
    let again = json(&[
        "tower-norm",
        "--p",
        "5",
        "--levels",
        "t^2+2",
        "--x",
        element,
    ]);
    assert_eq!(again, norm);
}
