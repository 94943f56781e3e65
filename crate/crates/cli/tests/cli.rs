use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    format!("{}/specs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_procat"))
        .args(args)
        .env_remove("PROLIM_DEPTH_DEFAULT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().expect("exit code"), v)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("procat-{}-{name}.toml", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn homset_of_constant_two_has_four_classes() {
    let (code, v) = json(&["homset", &spec("homset-c2.toml"), "X", "Y"]);
    assert_eq!(code, 0);
    assert_eq!(v["output"]["classes"], 4);
    assert_eq!(v["verdict"], "certified");
}

#[test]
fn growing_source_is_not_stable() {
    let (code, v) = json(&["homset", &spec("homset-c2.toml"), "T", "Y", "--depth", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["output"]["classes"], 8);
}

#[test]
fn bundled_specs_certify() {
    let cases: &[&[&str]] = &[
        &["levelrep", "square.toml"],
        &["levelrep", "chain.toml"],
        &["levelrep", "chain.toml", "--method", "strict"],
        &["prolim", "tower.toml"],
        &["prolim", "square.toml"],
        &["procolim", "span.toml"],
        &["procolim", "square.toml"],
        &["procolim", "free.toml"],
        &["check-commute", "tower-coequalizer.toml"],
    ];
    for c in cases {
        let path = spec(c[1]);
        let mut args = vec![c[0], path.as_str()];
        args.extend_from_slice(&c[2..]);
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{c:?}: {v}");
        assert!(
            v["checks"].as_array().is_some_and(|a| !a.is_empty()),
            "{c:?}"
        );
    }
}

#[test]
fn check_commute_reports_formula_checks() {
    let (_, v) = json(&["check-commute", &spec("tower-coequalizer.toml")]);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for n in [
        "lim colim = formula",
        "colim lim = formula",
        "comparison has identity representatives",
    ] {
        assert!(names.contains(&n), "{names:?}");
    }
}

#[test]
fn tower_of_cyclic_groups_is_not_cocompact() {
    let (code, v) = json(&["cocompact", &spec("z2k.toml"), "Z2k"]);
    assert_eq!(code, 2);
    assert_eq!(v["depth"], 5);
    assert!(!v["checks"][0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn constants_are_cocompact_on_samples() {
    let (code, v) = json(&[
        "cocompact",
        &spec("homset-c2.toml"),
        "X",
        "--samples",
        "4",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn constant_group_without_samples_is_undetermined() {
    let (code, v) = json(&["cocompact", &spec("z2k.toml"), "Z2"]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "undetermined");
}

#[test]
fn inexactness_sections_certify() {
    let (code, v) = json(&["repro-inexactness", "--depth", "3"]);
    assert_eq!(code, 0);
    assert!(v["input_digest"].is_null());
    let sections = v["output"]["sections"].as_array().unwrap();
    for s in ["f_n level-mono", "fg = 0", "g != 0"] {
        assert!(sections.iter().any(|x| x == s), "{sections:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["prolim".to_string(), spec("tower.toml")],
        vec!["procolim".to_string(), spec("span.toml")],
        vec![
            "cocompact".to_string(),
            spec("homset-c2.toml"),
            "X".into(),
            "--samples".into(),
            "3".into(),
        ],
    ] {
        for fmt in ["text", "json"] {
            let mut a: Vec<&str> = vec!["--format", fmt];
            a.extend(args.iter().map(String::as_str));
            let (x, y) = (run(&a), run(&a));
            assert_eq!(x.stdout, y.stdout, "{a:?}");
            assert!(!x.stdout.is_empty());
        }
    }
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = json(&["repro-inexactness", "--depth", "1"]);
    assert!(v.get("wall_time_ms").is_none());
    let (_, v) = json(&["--timing", "repro-inexactness", "--depth", "1"]);
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn depth_precedence() {
    let (_, v) = json(&["homset", &spec("homset-c2.toml"), "X", "Y"]);
    assert_eq!(v["depth"], 3);
    let (_, v) = json(&["homset", &spec("homset-c2.toml"), "X", "Y", "--depth", "1"]);
    assert_eq!(v["depth"], 1);
    let out = Command::new(env!("CARGO_BIN_EXE_procat"))
        .args(["--format", "json", "repro-inexactness"])
        .env("PROLIM_DEPTH_DEFAULT", "2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["depth"], 2);
    let (_, v) = json(&["repro-inexactness"]);
    assert_eq!(v["depth"], 4);
}

#[test]
fn digest_tracks_file_bytes() {
    let (_, a) = json(&["homset", &spec("homset-c2.toml"), "X", "Y"]);
    let body = std::fs::read_to_string(spec("homset-c2.toml")).unwrap() + "\n";
    let p = scratch("digest", &body);
    let (_, b) = json(&["homset", p.to_str().unwrap(), "X", "Y"]);
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_ne!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["output"], b["output"]);
}

fn error_of(name: &str, body: &str, args: &[&str]) -> String {
    let p = scratch(name, body);
    let mut a = vec![args[0], p.to_str().unwrap()];
    a.extend_from_slice(&args[1..]);
    let out = run(&a);
    assert_eq!(out.status.code(), Some(1), "{name}");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn parse_errors_carry_line_and_column() {
    let e = error_of(
        "syntax",
        "format = \"procat-diagram/1\"\ncategory = \"finset\"\n[[object]\n",
        &["procolim"],
    );
    assert!(e.contains(":3:"), "{e}");
    let e = error_of(
        "version",
        "format = \"procat-diagram/9\"\ncategory = \"finset\"\n",
        &["procolim"],
    );
    assert!(
        e.contains(":1:10:") && e.contains("unsupported format"),
        "{e}"
    );
    let e = error_of("field", "format = \"procat-diagram/1\"\ncategory = \"finset\"\n\n[[object]]\nname = \"X\"\nsizez = 2\n", &["procolim"]);
    assert!(e.contains(":6:"), "{e}");
}

#[test]
fn validation_errors_point_at_the_declaration() {
    let e = error_of(
        "category",
        "format = \"procat-diagram/1\"\ncategory = \"groups\"\n",
        &["homset", "X", "Y"],
    );
    assert!(
        e.contains(":2:12:") && e.contains("unknown category"),
        "{e}"
    );
    let body = "format = \"procat-diagram/1\"\ncategory = \"finset\"\n\n[[object]]\nname = \"X\"\nsizes = 2\n\n[[object]]\nname = \"Y\"\nsizes = 3\n\n[[map]]\nname = \"f\"\nsource = \"X\"\ntarget = \"Z\"\nrule = \"mod\"\n";
    let e = error_of("reference", body, &["homset", "X", "Y"]);
    assert!(
        e.contains(":15:") && e.contains("no object named `Z`"),
        "{e}"
    );
    let body = "format = \"procat-diagram/1\"\ncategory = \"finset\"\n\n[[object]]\nname = \"X\"\nsizes = [1, 2]\nstructure = \"mod\"\n\n[[object]]\nname = \"Y\"\nsizes = [2, 4]\nstructure = \"mod\"\n\n[[map]]\nname = \"f\"\nsource = \"X\"\ntarget = \"Y\"\nrule = \"clamp\"\n";
    let e = error_of("natural", body, &["homset", "X", "Y"]);
    assert!(e.contains(":15:") && e.contains("not a pro-map"), "{e}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["levelrep"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["homset", "/nonexistent.toml", "X", "Y"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
