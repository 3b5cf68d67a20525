use std::path::Path;
use std::process::{Command, Output};

fn axi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_axi")).args(args).env_remove("AXI_TOL").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"r": {}, "s": {}}"#);
    let bad = write(dir.path(), "bad.json", r#"{"r": "#);
    assert_eq!(code(&axi(&["classify", "--example", "e5"])), 0);
    assert_eq!(code(&axi(&["classify"])), 1);
    assert_eq!(code(&axi(&["frobnicate"])), 1);
    assert_eq!(code(&axi(&["classify", "--example", "e99"])), 1);
    assert_eq!(code(&axi(&["portrait", "--example", "e3", "--window", "0"])), 1);
    assert_eq!(code(&axi(&["diagram", "--a-range", "3,1"])), 1);
    let o = axi(&["classify", "--jet", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse"));
    assert_eq!(code(&axi(&["portrait", "--jet", &zero])), 3);
}

#[test]
fn classify_reports() {
    let o = axi(&["classify", "--example", "e5"]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["class"], "E5");
    assert_eq!((v["a"].as_f64(), v["b"].as_f64()), (Some(2.0), Some(0.0)));
    assert!(text.contains("\"a\": 2.0000000000000000e0"));
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 5);
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"r": {}, "s": {}}"#);
    let o = axi(&["classify", "--jet", &zero]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "{\n  \"class\": \"Degenerate\",\n  \"reason\": \"r=s=0\"\n}\n");
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.svg");
    let two = dir.path().join("two.svg");
    for p in [&one, &two] {
        let o = axi(&["portrait", "--example", "e3", "--density", "4", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&two).unwrap());
    assert_eq!(std::fs::read(one.with_extension("csv")).unwrap(), std::fs::read(two.with_extension("csv")).unwrap());
    assert_eq!(stdout(&axi(&["classify", "--example", "e45"])), stdout(&axi(&["classify", "--example", "e45"])));
}

#[test]
fn portrait_separatrices() {
    let svg = stdout(&axi(&["portrait", "--example", "e3", "--density", "0"]));
    assert!(svg.starts_with("<svg") && svg.contains("width=\"800\""));
    assert_eq!(svg.matches("class=\"separatrix\"").count(), 3);
    assert_eq!(svg.matches("class=\"generic\"").count(), 0);
    let svg = stdout(&axi(&["portrait", "--example", "e5", "--density", "0"]));
    assert_eq!(svg.matches("class=\"separatrix\"").count(), 5);
}

#[test]
fn diagram_marks_cusps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.svg");
    let o = axi(&["diagram", "--density", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("class=\"cusp\"").count(), 2);
    assert_eq!(svg.matches("class=\"special\"").count(), 1);
    assert_eq!(svg.matches("<rect x=").count(), 400);
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn sweep_events() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = axi(&[
        "sweep", "--example", "e45-sweep", "--family", "e45", "--t0=-1e-4", "--t1=1e-4", "--steps", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let events = std::fs::read_to_string(out.with_extension("events.json")).unwrap();
    assert_eq!(events.matches("\"kind\": \"fold\"").count(), 1);
    assert_eq!(events.matches("\"kind\": \"class_change\"").count(), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,n_points,index,x,y,class,a,b,chi,F\n"));

    let o = axi(&["sweep", "--example", "e5", "--family", "e34", "--steps", "2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"events\": []"));
}

#[test]
fn verify_groups() {
    let o = axi(&["verify", "--only", "resultants"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    assert_eq!(code(&axi(&["verify", "--only", "nothing"])), 1);
}
