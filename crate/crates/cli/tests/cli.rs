use std::path::PathBuf;
use std::process::Command;

use evstab_cli::Report;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn evstab(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_evstab"))
        .args(args)
        .env_remove("EVSTAB_DEGREE_CAP")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn golden(name: &str, args: &[&str], code: i32) {
    let run = evstab(args);
    assert_eq!(run.code, code, "{name}: stderr {}", run.stderr);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &run.stdout).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(run.stdout, want, "{name} differs from its golden file");
}

fn error_code(run: &Run) -> String {
    let v: serde_json::Value = serde_json::from_str(run.stderr.trim()).expect("error json");
    v["error"]["code"].as_str().unwrap().to_string()
}

#[test]
fn golden_corpus() {
    let q = ["--field", "Q"];
    let gf5 = ["--field", "GF(5)"];
    let cases: Vec<(&str, Vec<&str>, i32)> = vec![
        ("certify_fullmain", [&["certify"][..], &q, &["--map", "z^2+1", "--point", "0", "--val", "2", "--strategy", "fullmain"]].concat(), 0),
        ("certify_bad_reduction", [&["certify"][..], &q, &["--map", "z^2+1/2", "--point", "0", "--val", "2"]].concat(), 2),
        ("certify_all_z2_third", [&["certify"][..], &q, &["--map", "z^2+1/3", "--val", "2"]].concat(), 0),
        ("certify_evstab1", [&["certify"][..], &q, &["--map", "(z^2+2*z+2)/(z+5)", "--val", "2", "--strategy", "evstab1"]].concat(), 0),
        ("certify_polycor", [&["certify"][..], &q, &["--map", "z^2+1", "--point", "1/4", "--val", "2", "--strategy", "polycor"]].concat(), 0),
        ("certify_function_field", vec!["certify", "--field", "GF(2)(t)", "--map", "z^2+t", "--val", "t"], 0),
        ("counts_gf5", [&["counts"][..], &gf5, &["--map", "z^2+2", "--point", "0", "--N", "8"]].concat(), 0),
        ("counts_cyclotomic", [&["counts"][..], &q, &["--map", "z^2", "--point", "1", "--N", "3"]].concat(), 0),
        ("orbit_gf5", [&["orbit"][..], &gf5, &["--map", "z^2+2"]].concat(), 0),
        ("orbit_q_unresolved", [&["orbit"][..], &q, &["--map", "z^2+1", "--cap", "5"]].concat(), 0),
        ("iterate_q", [&["iterate"][..], &q, &["--map", "z^2+1/3", "--N", "2"]].concat(), 0),
        ("iterate_gf5", [&["iterate"][..], &gf5, &["--map", "z^2+2", "--N", "2"]].concat(), 0),
        ("preimage_infinity", [&["preimage-poly"][..], &q, &["--map", "z^2", "--point", "inf", "--N", "2"]].concat(), 0),
        ("factor_gf5", [&["factor"][..], &gf5, &["--poly", "z^4+4*z^2+1"]].concat(), 0),
        ("factor_q", [&["factor"][..], &q, &["--poly", "2*z^4-2"]].concat(), 0),
        ("tree_q", [&["tree"][..], &q, &["--map", "z^2+1", "--N", "4"]].concat(), 0),
        ("tree_gf3", vec!["tree", "--field", "GF(3)", "--map", "z^2", "--point", "1", "--N", "3"], 0),
        ("stickelberger_gf5", [&["stickelberger"][..], &gf5, &["--poly", "z^2+2"]].concat(), 0),
        ("settled_gf5", [&["settled"][..], &gf5, &["--map", "z^2+2", "--N", "8"]].concat(), 0),
        ("bijectivity_gf2", vec!["bijectivity", "--field", "GF(2)", "--map", "z^2+1"], 0),
        ("bijectivity_gf3", vec!["bijectivity", "--field", "GF(3)", "--map", "z^2"], 0),
        ("preset_chebyshev", vec!["preset", "--family", "chebyshev", "--d", "3"], 0),
        ("preset_quad", vec!["preset", "--family", "quad", "--a", "3"], 0),
    ];
    for (name, args, code) in &cases {
        golden(name, args, *code);
    }
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let args = ["counts", "--field", "GF(7)", "--map", "z^3+z+3", "--N", "4", "--seed", "11"];
    let a = evstab(&args);
    let b = evstab(&args);
    assert_eq!(a.stdout, b.stdout);
    let report: Report = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(report.seed, 11);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", a.stdout);
    // the counts themselves do not depend on the seed
    let c = evstab(&["counts", "--field", "GF(7)", "--map", "z^3+z+3", "--N", "4", "--seed", "12"]);
    let rc: Report = serde_json::from_str(&c.stdout).unwrap();
    assert_eq!(rc.result, report.result);
}

#[test]
fn exit_codes() {
    let r = evstab(&["factor", "--field", "GF(4)", "--poly", "z"]);
    assert_eq!((r.code, error_code(&r).as_str()), (4, "parse"));
    assert!(r.stderr.contains("4 not prime; use GF(2,2)"));
    assert!(r.stdout.is_empty());

    let r = evstab(&["iterate", "--field", "Q", "--map", "z^2", "--N", "11"]);
    assert_eq!((r.code, error_code(&r).as_str()), (3, "resource"));

    let r = evstab(&["iterate", "--field", "Q", "--map", "z^2 +* 1"]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("--map"));

    let r = evstab(&["counts", "--field", "Q", "--map", "z^2+1", "--N", "7"]);
    assert_eq!(r.code, 3, "Q counts default to a degree cap of 64");

    let r = evstab(&["bogus"]);
    assert_eq!(r.code, 4);

    let r = evstab(&["--help"]);
    assert_eq!(r.code, 0);
}

#[test]
fn degree_cap_from_environment_and_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_evstab"));
        cmd.args(["iterate", "--field", "GF(5)", "--map", "z^2+2", "--N", "5"]).args(extra);
        match env {
            Some(v) => cmd.env("EVSTAB_DEGREE_CAP", v),
            None => cmd.env_remove("EVSTAB_DEGREE_CAP"),
        };
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(run(None, &[]), 0);
    assert_eq!(run(Some("16"), &[]), 3);
    assert_eq!(run(Some("16"), &["--degree-cap", "32"]), 0);
}

#[test]
fn text_format() {
    let r = evstab(&["orbit", "--field", "GF(5)", "--map", "z^2+2", "--format", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l.starts_with("result.points") && l.ends_with("[0, 2, 1, 3]")));
}
