use mixmean::cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE, FLOOR_ENV};

fn mixmean(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mixmean").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_writes_json_reports() {
    let (code, out, _) = mixmean(&["verify", "--seq", "1,2", "--claims", "Eq1,Thm5"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["claim"], "Eq1");
    assert_eq!(reports[1]["claim"], "Thm5-chain");
    for r in reports {
        assert_eq!(r["passed"], true);
        for key in ["comparisons", "precision_rounds"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        for c in r["comparisons"].as_array().unwrap() {
            assert_eq!(c["relation"], "GreaterThan");
            assert!(c["margin_lo"].as_str().unwrap().contains('/'));
            assert!(c["margin_hi"].as_str().unwrap().contains('/'));
        }
    }
    assert_eq!(reports[1]["comparisons"].as_array().unwrap().len(), 3);
}

#[test]
fn prop3_json_is_exact() {
    let (code, out, _) = mixmean(&["verify", "--seq", "1,2", "--claims", "Prop3"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["comparisons"][0]["margin_lo"], "1/30");
    assert_eq!(v[0]["comparisons"][0]["margin_hi"], "1/30");
    assert_eq!(v[0]["precision_rounds"], 0);
}

#[test]
fn constant_sequence_reports_equality() {
    let (code, out, _) = mixmean(&["verify", "--seq", "7/2,7/2,7/2,7/2", "--claims", "all"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in v.as_array().unwrap() {
        for c in r["comparisons"].as_array().unwrap() {
            assert_eq!(c["relation"], "Equal", "{}", r["claim"]);
            assert_eq!(c["margin_lo"], "0/1");
        }
    }
}

#[test]
fn text_format_and_digits() {
    let (code, out, _) = mixmean(&["verify", "--seq", "1,2", "--claims", "Eq1", "--format", "text", "--digits", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS Eq1"), "{out}");
    assert!(out.contains("G(A)>=A(G)"));
}

#[test]
fn lemma_check_passes_to_twelve() {
    let (code, out, _) = mixmean(&["check-lemma", "--n", "12"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.contains("PASS")).count(), 5);

    let (code, out, _) = mixmean(&["check-lemma", "--n", "6", "--all", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn table_prints_weights() {
    let (code, out, _) = mixmean(&["table", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("a(2,2) = (1/2, 1/2, 0)"), "{out}");
    let (code, out, _) = mixmean(&["table", "--n", "2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 2);
}

#[test]
fn compute_reports_exact_and_decimal() {
    let (code, out, _) = mixmean(&["compute", "--seq", "1,2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"7/6\""), "{out}");
    assert!(out.contains("\"6/5\""));
}

#[test]
fn domain_and_parse_errors_exit_two() {
    let (code, _, err) = mixmean(&["verify", "--seq", "1,0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("x_2 = 0"), "{err}");

    let (code, _, err) = mixmean(&["verify", "--seq", "1,-3/2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("-3/2"), "{err}");

    for bad in ["1/0", "abc", "1.2.3", "2/x"] {
        let seq = format!("1,{bad}");
        let (code, _, err) = mixmean(&["verify", "--seq", &seq]);
        assert_eq!(code, EXIT_USAGE, "{bad}");
        assert!(err.contains(bad), "{bad}: {err}");
    }

    let (code, _, err) = mixmean(&["verify", "--seq", "1,2", "--claims", "Eq2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Eq2"));

    let (code, _, _) = mixmean(&["check-lemma", "--n", "0"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = mixmean(&["fuzz", "--n-min", "5", "--n-max", "3"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = mixmean(&["fuzz", "--family", "gaussian"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = mixmean(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn claims_are_validated_before_work() {
    // a bad claim name wins over a bad sequence
    let (code, _, err) = mixmean(&["verify", "--seq", "0", "--claims", "Nope"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Nope"), "{err}");
}

#[test]
fn precision_floor_controls_undecided() {
    // the margin here is about 6e-62, far below 2^-64
    let seq = "1,1.000000000000000000000000000001";
    let (code, out, _) = mixmean(&["verify", "--seq", seq, "--claims", "Eq1", "--floor-bits", "64"]);
    assert_eq!(code, EXIT_FAILED, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["comparisons"][0]["relation"], "Undecided");
    assert_eq!(v[0]["passed"], false);
    assert!(v[0]["diagnostics"][0].as_str().unwrap().contains("Undecided"));

    let (code, out, _) = mixmean(&["verify", "--seq", seq, "--claims", "Eq1"]);
    assert_eq!(code, EXIT_OK, "{out}");

    // the environment supplies the floor when the flag is absent;
    // other tests in this binary only use inputs with large margins
    std::env::set_var(FLOOR_ENV, "64");
    let (env_code, _, _) = mixmean(&["verify", "--seq", seq, "--claims", "Eq1"]);
    let (flag_code, _, _) = mixmean(&["verify", "--seq", seq, "--claims", "Eq1", "--floor-bits", "512"]);
    std::env::set_var(FLOOR_ENV, "lots");
    let (bad_code, _, bad_err) = mixmean(&["verify", "--seq", seq, "--claims", "Eq1"]);
    std::env::remove_var(FLOOR_ENV);
    assert_eq!(env_code, EXIT_FAILED);
    assert_eq!(flag_code, EXIT_OK);
    assert_eq!(bad_code, EXIT_USAGE);
    assert!(bad_err.contains("lots"), "{bad_err}");

    let (code, _, _) = mixmean(&["verify", "--seq", "1,2", "--initial-bits", "60", "--floor-bits", "40"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn fuzz_json_is_byte_identical() {
    let args = ["fuzz", "--seed", "42", "--trials", "30", "--n-max", "5", "--json", "-"];
    let (c1, a, _) = mixmean(&args);
    let (c2, b, _) = mixmean(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["failures"], 0);
    assert_eq!(v["undecided"], 0);
    assert_eq!(v["trials"], 30);

    let (_, other, _) = mixmean(&["fuzz", "--seed", "43", "--trials", "30", "--n-max", "5", "--json", "-"]);
    assert_ne!(a, other);
}

#[test]
fn fuzz_summary_and_file_output() {
    let dir = std::env::temp_dir().join(format!("mixmean-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("campaign.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = mixmean(&["fuzz", "--trials", "10", "--family", "log-uniform", "--json", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("seed=42 family=log-uniform trials=10 failures=0"), "{out}");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"family\": \"log-uniform\""));
    std::fs::remove_dir_all(&dir).unwrap();
}

