use std::process::{Command, Output};

fn twov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twov"))
        .args(args)
        .env_remove("BRIN2V_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn normalize_pi() {
    let out = twov(&["normalize", "--group", "pi", "h2 v1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "v1 h3");
}

#[test]
fn equal_two_v() {
    let out = twov(&["equal", "--group", "2v", "P0 A0", "p0 P1"]);
    assert_eq!(stdout(&out).trim(), "true");
    let out = twov(&["equal", "--group", "2v", "P0 A0", "p0 P2"]);
    assert_eq!(stdout(&out).trim(), "false");
    assert!(out.status.success());
}

#[test]
fn normalize_is_idempotent() {
    for (group, word) in [
        ("pi", "s2 h0 v3 s0"),
        ("2vhat", "v1^-1 h0 s2"),
        ("2v", "C1 P0 A2^-1 p1"),
    ] {
        let once = stdout(&twov(&["normalize", "--group", group, word]));
        let twice = stdout(&twov(&["normalize", "--group", group, once.trim()]));
        assert_eq!(once, twice, "{group} {word}");
    }
}

#[test]
fn eval_prints_json() {
    let out = twov(&["eval", "--group", "pi", "v0"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tail_offset"], 1);
    assert_eq!(v["squares"][0]["rects"].as_array().unwrap().len(), 2);
    let out = twov(&["eval", "--group", "2v", "A0"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.get("range").is_some() && v.get("domain").is_some());
}

#[test]
fn verify_finite_forty_json() {
    let out = twov(&["verify", "--family", "finite-40", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["typography"].as_array().unwrap().len(), 2);
    assert!(v["corrections"].as_array().unwrap().is_empty());
}

#[test]
fn verify_family_with_env_bound() {
    let out = Command::new(env!("CARGO_BIN_EXE_twov"))
        .args(["verify", "--family", "19", "--json"])
        .env("BRIN2V_BOUND", "3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], 3);
    assert_eq!(v["tables"][0]["total"], 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        twov(&["normalize", "--group", "pi", "v1^-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        twov(&["normalize", "--group", "pi", "x3"]).status.code(),
        Some(2)
    );
    assert_eq!(twov(&["verify", "--family", "9"]).status.code(), Some(2));
    assert_eq!(twov(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        twov(&["render", "--squares", "0", "v0"]).status.code(),
        Some(2)
    );
}

#[test]
fn render_figure_pattern() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/figure.json");
    let out = twov(&["render", "--squares", "5", "--pattern", path]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = stdout(&out);
    // Squares are 144 units apart; count rectangles by their left edge.
    let mut counts = [0; 5];
    for line in svg.lines().filter(|l| l.starts_with("<rect ")) {
        let x: f64 = line.split('"').nth(1).unwrap().parse().unwrap();
        counts[((x - 12.0) / 144.0).floor() as usize] += 1;
    }
    assert_eq!(counts, [3, 1, 4, 1, 1]);
    assert_eq!(
        svg,
        stdout(&twov(&["render", "--squares", "5", "--pattern", path]))
    );
}

#[test]
fn render_trivial_from_stdin_and_quartered() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_twov"))
        .args(["render", "--squares", "3", "--pattern", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"tail_start":0,"tail_offset":0,"squares":[]}"#)
        .unwrap();
    let svg = stdout(&child.wait_with_output().unwrap());
    assert_eq!(svg.matches("<rect ").count(), 3);
    for n in 0..3 {
        assert!(svg.contains(&format!(">{n}</text>")));
    }
    let out = twov(&["render", "--squares", "1", "v0 h1 h0"]);
    assert_eq!(stdout(&out).matches("<rect ").count(), 4);
}

#[test]
fn lclm_report_passes() {
    let out = twov(&["lclm", "--surplus", "3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["below_both"].as_array().unwrap().is_empty());
    assert!(v["least"].is_null());
}

#[test]
fn seeded_output_is_byte_identical() {
    let args = ["verify", "--family", "finite-30", "--samples", "20", "--seed", "5", "--json"];
    let (a, b) = (twov(&args), twov(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let render = ["render", "--squares", "2", "v0 h1 h0 s2"];
    assert_eq!(twov(&render).stdout, twov(&render).stdout);
}
