use std::process::{Command, Output};

fn skl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skl")).args(args).output().expect("skl runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_main_a1_has_four_pairs() {
    let o = skl(&["verify-main", "--type", "A1", "--noncompact", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn kl_outside_bruhat_order() {
    let o = skl(&["kl", "--type", "A2", "--x", "12", "--y", "e", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"][0]["polynomial"], "0");
}

#[test]
fn kl_one_plus_q_in_a3() {
    let o = skl(&["kl", "--type", "A3", "--x", "2", "--y", "2132", "--format", "csv"]);
    assert_eq!(stdout(&o), "x,y,polynomial\n2,2132,1+q\n");
}

#[test]
fn unknown_flag_and_type_exit_two() {
    let o = skl(&["roots", "--type", "A2", "--colour", "red"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    assert_eq!(skl(&["group", "--type", "X9"]).status.code(), Some(2));
    assert_eq!(skl(&["kl"]).status.code(), Some(2));
}

#[test]
fn sweep_prints_matrix() {
    let o = skl(&["sweep", "--jobs", "2"]);
    let text = stdout(&o);
    for id in ["1 ", "2 ", "3a", "3b", "3c", "3d", "4 ", "5 ", "6 ", "7 ", "8 "] {
        assert!(text.contains(&format!("criterion {id}")), "{id}");
    }
    // The containment lemma is the one recorded failure.
    assert_eq!(o.status.code(), Some(1));
    assert!(text.contains("12 passed, 1 failed"));
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("skl-it-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("b2.cfg");
    std::fs::write(&cfg, "type = B2\nnoncompact = 2\nlambda = 3/2,-1/5\ncutoff = 4\nformat = csv\n").unwrap();
    let out = dir.join("chs.csv");
    let o = skl(&["sigchar", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("mu,height,weight,coefficient\n"));
    assert!(text.contains("\"0,0\",0,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_config_round_trip() {
    let dir = std::env::temp_dir().join(format!("skl-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"command":"skl","system":{"type":"G","rank":2,"noncompact":[1]},"lambda":"-rho","cutoff":8,"format":"json","a_descent":"corrected"}"#,
    )
    .unwrap();
    let o = skl(&["skl", "--config", cfg.to_str().unwrap(), "--x", "e", "--y", "e"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"][0]["polynomial"], "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["skl", "--type", "B3", "--noncompact", "1,3", "--format", "json"][..],
        &["epsilon", "--type", "B3", "--noncompact", "2"][..],
        &["sigchar", "--type", "A2", "--noncompact", "1", "--lambda", "5/2,-1/5", "--audit", "--jobs", "3"][..],
    ] {
        let (a, b) = (skl(args), skl(args));
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn verbatim_a_descent_exits_one_on_a3() {
    let o = skl(&["verify-main", "--type", "A3", "--a-descent", "verbatim"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
