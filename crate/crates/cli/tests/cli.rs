use std::fs;
use std::process::{Command, Output};

fn fractafold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fractafold")).args(args).output().expect("spawn fractafold")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn dyadic_depth_six_has_sixty_four_rows() {
    let o = fractafold(&["attractor", "--preset", "dyadic", "--depth", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# system=dyadic\n# depth=6\n# resolution=1/64\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 64);
    assert_eq!(rows[0], "0/1,0.00000000000e0");
    assert_eq!(rows[63], "63/64,9.84375000000e-1");
}

#[test]
fn dyadic_depth_one_rows() {
    let text = stdout(&fractafold(&["attractor", "--depth", "1", "--precision", "3"]));
    assert_eq!(data_rows(&text), ["0/1,0.00e0", "1/2,5.00e-1"]);
}

#[test]
fn validation_errors_exit_two() {
    let o = fractafold(&["blowup", "--word", "12(", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 3"));
    for args in [
        vec!["act", "--gamma", "12(", "--point", "(1);0;(1)"],
        vec!["act", "--gamma", "2(1);0;(2)", "--point", "(2);0;(1)"],
        vec!["act", "--gamma", "2(1);1;(1)", "--point", "(2);0;(1)"],
        vec!["groupoid", "invert", "--element", "(3);0;(3)"],
        vec!["groupoid", "compose", "--left", "(1);0;(1)", "--right", "(2);0;(2)"],
        vec!["attractor", "--preset", "simplex:2:3/2"],
        vec!["attractor", "--preset", "cantor"],
        vec!["attractor", "--depth", "x"],
        vec!["nonsense"],
    ] {
        assert_eq!(fractafold(&args).status.code(), Some(2), "{:?}", args);
    }
}

#[test]
fn help_exits_zero() {
    let o = fractafold(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for sub in ["attractor", "blowup", "orbit", "act", "groupoid", "measure", "selftest"] {
        assert!(text.contains(sub), "{}", sub);
    }
}

#[test]
fn csv_round_trip_through_blowup() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.csv");
    let o = fractafold(&["attractor", "--preset", "gasket", "--depth", "3", "--output", net.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let original = fs::read_to_string(&net).unwrap();
    let back = stdout(&fractafold(&["blowup", "--preset", "gasket", "--word", "-", "--from-csv", net.to_str().unwrap()]));
    assert_eq!(data_rows(&back), data_rows(&original));
    let direct = fractafold(&["blowup", "--preset", "gasket", "--word", "31", "--depth", "3"]);
    let via = fractafold(&["blowup", "--preset", "gasket", "--word", "31", "--from-csv", net.to_str().unwrap()]);
    assert_eq!(direct.stdout, via.stdout);
    assert!(stdout(&direct).starts_with("# word=31\n# depth=3\n# resolution="));
    let bad = fractafold(&["blowup", "--preset", "dyadic", "--word", "1", "--from-csv", net.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn svg_has_one_circle_per_point() {
    let text = stdout(&fractafold(&["attractor", "--preset", "gasket", "--depth", "4", "--format", "svg", "--project", "1,3"]));
    assert_eq!(text.matches("<circle").count(), 81);
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    let line = stdout(&fractafold(&["blowup", "--word", "21", "--depth", "3", "--format", "svg"]));
    assert_eq!(line.matches("<circle").count(), 8);
    assert!(line.contains("<line"));
    assert_eq!(fractafold(&["attractor", "--preset", "gasket", "--format", "svg", "--project", "1,4"]).status.code(), Some(2));
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_fractafold"))
            .env("FRACTAFOLD_WORKERS", w)
            .args(["attractor", "--preset", "simplex:3:1/3", "--depth", "4"])
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, run("2").stdout);
    assert_eq!(one.stdout, run("8").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn act_prints_exact_and_decimal() {
    let text = stdout(&fractafold(&["act", "--gamma", "12(1);2;(1)", "--point", "(1);0;2(1)"]));
    assert_eq!(text, "point: 12(1) ; 2 ; 2(1)\nexact: (0/1)\ndecimal: (0.00000000000e0)\n");
}

#[test]
fn groupoid_round_trip() {
    let text = stdout(&fractafold(&["groupoid", "invert", "--element", "12(1) ; 1 ; (1)"]));
    assert_eq!(text, "element: (1) ; -1 ; 12(1)\nwitness: m=1 n=2\n");
    let unit = stdout(&fractafold(&["groupoid", "compose", "--left", "(1);-1;12(1)", "--right", "12(1);1;(1)"]));
    assert_eq!(unit, "element: (1) ; 0 ; (1)\nwitness: m=0 n=0\n");
}

#[test]
fn orbit_csv_is_sorted_and_labelled() {
    let text = stdout(&fractafold(&["orbit", "--preset", "simplex:2:1/2", "--point", "(1);0;(1)", "--depth", "2"]));
    assert!(text.contains("# points=4\n"));
    assert!(text.contains("base,x1,x2,x1_decimal,x2_decimal\n"));
    assert!(text.contains("\n12(1),3/1,-2/1,"));
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("cantor.ifs");
    fs::write(&good, "# middle thirds\ndim 1\nmaps 2\nmap r=1/3 Q=id b=(0)\nmap r=1/3 Q=[-1] b=(1)\n").unwrap();
    let o = fractafold(&["attractor", "--config", good.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(data_rows(&stdout(&o)).len(), 4);
    let m = fractafold(&["measure", "check-invariance", "--config", good.to_str().unwrap(), "--trials", "50"]);
    assert_eq!(m.status.code(), Some(0));
    assert!(stdout(&m).ends_with("result: PASS\n"));

    let bad = dir.path().join("bad.ifs");
    fs::write(&bad, "dim 1\nmap r=1/3 b=(1/0x)\n").unwrap();
    let o = fractafold(&["attractor", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column"));

    let overlap = dir.path().join("overlap.ifs");
    fs::write(&overlap, "dim 1\nmap r=2/3 b=(0)\nmap r=2/3 b=(1/3)\n").unwrap();
    let o = fractafold(&["measure", "check-invariance", "--config", overlap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("open set condition"));
}

#[test]
fn measure_reports() {
    let json = stdout(&fractafold(&["measure", "check-invariance", "--trials", "100", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["invariance_failures"], 0);
    assert_eq!(v["trials"], 100);
}
