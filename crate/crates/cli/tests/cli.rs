use std::path::PathBuf;
use std::process::{Command, Output};

fn dcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcoh")).args(args).output().expect("dcoh runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dcoh-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn homology_tables() {
    let o = dcoh(&["homology", "octahedron"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "H0=Z H1=0 H2=Z");
    assert_eq!(stdout(&dcoh(&["homology", "rp2_6"])), "H0=Z H1=0 H2=Z/2");
    assert_eq!(stdout(&dcoh(&["homology", "rp2_6", "--ring", "q"])), "H0=Q H1=0 H2=0");
}

#[test]
fn empty_complex_has_zero_homology() {
    let path = temp_file("empty.json", r#"{"vertices": [], "facets": []}"#);
    let o = dcoh(&["homology", path.to_str().unwrap(), "--window", "0,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "H0=0 H1=0 H2=0");
}

#[test]
fn parse_errors_name_the_file_and_position() {
    let path = temp_file("broken.json", "{\"facets\": [[0, 1, 2]");
    let o = dcoh(&["homology", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("broken.json") && err.contains("line"), "{err}");

    let curve = temp_file("loop.json", r#"{"coords": {"s": "s*("}}"#);
    let o = dcoh(&["holonomy", "constant_curvature", curve.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offset 3"));
}

#[test]
fn hexagon_passes_including_the_degenerate_truncation() {
    for (name, m) in [("circle3", "1"), ("csaszar_torus", "2"), ("octahedron", "3")] {
        let o = dcoh(&["hexagon", name, "--m", m, "--samples", "20"]);
        assert!(o.status.success(), "{name} m={m}: {}", stdout(&o));
        assert!(stdout(&o).lines().next().unwrap().ends_with("PASS"));
    }
}

#[test]
fn holonomy_trace_in_json() {
    let o = dcoh(&["--format", "json", "holonomy", "circle_rotation", "circle_rotation_loop"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let re = v["trace"][0].as_f64().unwrap();
    assert!((re - 2.0 * 1f64.cos()).abs() < 1e-8, "{re}");
}

#[test]
fn lattice_commands() {
    let bundle = temp_file(
        "monopole.json",
        r#"{"complex": "octahedron", "n": [2, 0, 0, 0, 0, 0, 0, 0], "a": [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]}"#,
    );
    let o = dcoh(&["lattice-class", bundle.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("total curvature = 2"), "{}", stdout(&o));

    let torus = temp_file("torus.json", &format!(r#"{{"complex": "csaszar_torus", "n": {:?}, "a": ["2/7", {}]}}"#, [0; 14], vec!["0"; 20].join(", ")));
    let o = dcoh(&["character", torus.to_str().unwrap(), "--cycle", "0,1,4,0", "--samples", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("chi = 2/7"), "{}", stdout(&o));
}

#[test]
fn cycle_map_check_on_the_torus() {
    let o = dcoh(&["cycle-map-check", "torus_path"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn invalid_sample_count_is_rejected() {
    assert_eq!(dcoh(&["hexagon", "circle3", "--m", "1", "--samples", "0"]).status.code(), Some(2));
}
