use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn wco(args: &[&str], out: &Path) -> (i32, Value) {
    let status = Command::new(env!("CARGO_BIN_EXE_wco"))
        .args(args)
        .arg("--output")
        .arg(out)
        .status()
        .expect("binary runs");
    let doc = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    (status.code().unwrap(), doc)
}

#[test]
fn classify_square() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.json");
    fs::write(&b, r#"{"zeros": [[0,0],[0,0]], "rotation": 0}"#).unwrap();
    let (code, doc) = wco(&["classify", "--blaschke", b.to_str().unwrap()], &dir.path().join("o.json"));
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["kind"], "Elliptic");
    assert_eq!(doc["result"]["z0"], serde_json::json!([0.0, 0.0]));
    assert_eq!(doc["config"]["command"]["classify"]["blaschke"], b.to_str().unwrap());
}

#[test]
fn example7_weight_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w17.json");
    let (code, built) = wco(
        &["build-t6", "--degree", "2", "--lambdas", "0.5,1", "--weight-out", w.to_str().unwrap()],
        &dir.path().join("b.json"),
    );
    assert_eq!(code, 0);
    assert_eq!(built["result"]["weight"], serde_json::from_str::<Value>(&fs::read_to_string(&w).unwrap()).unwrap());

    let (code, doc) = wco(
        &["spectrum", "assemble", "--weight", w.to_str().unwrap(), "--degree", "2"],
        &dir.path().join("s.json"),
    );
    assert_eq!(code, 0);
    let radii: Vec<f64> = serde_json::from_value(doc["result"]["usf_radii"].clone()).unwrap();
    assert_eq!(radii.len(), 2);
    assert!((radii[0] - 0.5).abs() < 1e-6 && (radii[1] - 1.0).abs() < 1e-6, "{radii:?}");
}

#[test]
fn example6_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = wco(
        &["verify-example6", "--k", "2", "--nmax", "4", "--grid", "16384"],
        &dir.path().join("o.json"),
    );
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["verdict"], "PASS");
    assert!(doc["result"]["max_slack"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn scan_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    fs::write(&w, r#"{"coeffs": [[0.5,0],[-0.5,0]], "grid_M": 12}"#).unwrap();
    let csv = dir.path().join("scan.csv");
    let args = [
        "spectrum", "scan", "--weight", w.to_str().unwrap(), "--degree", "2", "--radii", "0.5,0.95",
        "--random", "2", "--seed", "7", "--csv", csv.to_str().unwrap(),
    ];
    let (code, a) = wco(&args, &dir.path().join("a.json"));
    assert_eq!(code, 0);
    let (_, b) = wco(&args, &dir.path().join("b.json"));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["seed"], 7);

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("radius,verdict,certificate-kind,depth,margin"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().any(|r| r.starts_with("0.95,REJECT")));
}

#[test]
fn validation_error_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.json");
    fs::write(&b, r#"{"zeros": [[1.5,0],[0,0]], "rotation": 0}"#).unwrap();
    let (code, doc) = wco(&["classify", "--blaschke", b.to_str().unwrap()], &dir.path().join("o.json"));
    assert_eq!(code, 2);
    assert!(doc["error"]["message"].as_str().unwrap().contains("≥ 1"));
    assert!(doc.get("result").is_none());
}
