use std::path::{Path, PathBuf};
use std::process::Command;

use tensegrity_cli::{run, EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION};

fn fixture(name: &str) -> String {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

struct Output {
    code: u8,
    stdout: String,
    stderr: String,
}

fn tensegrity(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("tensegrity").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// `(edge, value)` pairs of the first reported vector.
fn first_vector(report: &str) -> Vec<(String, f64)> {
    report
        .lines()
        .skip_while(|l| *l != "vector 1:")
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .map(|l| {
            let (edge, v) = l.trim().split_once(": ").unwrap();
            (edge.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn dimension(report: &str) -> usize {
    let line = report
        .lines()
        .find(|l| l.starts_with("dimension: "))
        .unwrap();
    line["dimension: ".len()..].parse().unwrap()
}

#[test]
fn selfstress_on_wheel_example() {
    let out = tensegrity(&["selfstress", &fixture("paper_wheel.json")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("mode: morse\n"));
    assert_eq!(dimension(&out.stdout), 1);
    let v = first_vector(&out.stdout);
    let get = |e: &str| v.iter().find(|(k, _)| k == e).unwrap().1;
    let spoke = get("a-o");
    assert!((get("a-b") / spoke + 0.5).abs() < 1e-9);
    assert!((get("b-c") / spoke + 2.5).abs() < 1e-9);
    assert_eq!(v.iter().map(|(_, w)| w.abs()).fold(0.0, f64::max), 1.0);
}

#[test]
fn classical_and_lifted_reports_agree() {
    let path = fixture("square_wheel_framework.json");
    let classical = tensegrity(&["selfstress", "--classical", &path]);
    let morse = tensegrity(&["selfstress", "--morse", &path]);
    assert_eq!(classical.code, EXIT_OK);
    assert_eq!(morse.code, EXIT_OK);
    assert_eq!(dimension(&classical.stdout), 1);
    for ((e1, a), (e2, b)) in first_vector(&classical.stdout)
        .iter()
        .zip(first_vector(&morse.stdout))
    {
        assert_eq!(*e1, e2);
        assert!((a - b).abs() < 1e-9);
    }
    let unit = tensegrity(&["selfstress", "--classical", "--unit-vectors", &path]);
    assert_eq!(unit.code, EXIT_OK);
    assert_eq!(dimension(&unit.stdout), 1);
}

#[test]
fn lift_then_selfstress_matches_direct_lift() {
    let dir = tempfile::tempdir().unwrap();
    let lifted = dir.path().join("lifted.json");
    let path = fixture("square_wheel_framework.json");
    let out = tensegrity(&["lift", &path, "--out", lifted.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let via_file = tensegrity(&["selfstress", lifted.to_str().unwrap()]);
    let direct = tensegrity(&["selfstress", &path]);
    assert_eq!(via_file.stdout, direct.stdout);
}

#[test]
fn per_critical_point_mode_is_reported() {
    let out = tensegrity(&[
        "selfstress",
        "--per-critical-point",
        &fixture("saddle_pair.json"),
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("mode: morse (per critical point)\n"));
    assert!(out.stdout.contains("  s: (-1.00000000000, 0) index 1\n"));
}

#[test]
fn edgeless_scene_has_zero_dimension() {
    let out = tensegrity(&["selfstress", &fixture("one_vertex.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(dimension(&out.stdout), 0);
}

#[test]
fn exit_codes() {
    let missing = tensegrity(&["selfstress", "/nonexistent/scene.json"]);
    assert_eq!(missing.code, EXIT_IO);
    assert!(missing.stderr.starts_with("error: "));

    let flat = tensegrity(&["selfstress", &fixture("constant_field.json")]);
    assert_eq!(flat.code, EXIT_NUMERIC);
    assert!(flat.stderr.contains("flat"));

    let cases: [&[&str]; 6] = [
        &["selfstress", "--classical", &fixture("paper_wheel.json")],
        &["selfstress", "--unit-vectors", &fixture("paper_wheel.json")],
        &["selfstress", "--tol", "2", &fixture("paper_wheel.json")],
        &["forcelines", "--grid", "4", &fixture("single_edge.json")],
        &[
            "lift",
            &fixture("paper_wheel.json"),
            "--out",
            "/tmp/unused.json",
        ],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(tensegrity(args).code, EXIT_VALIDATION, "{args:?}");
    }
    assert_eq!(tensegrity(&["--help"]).code, EXIT_OK);
}

#[test]
fn unwritable_output_is_io_error() {
    let out = tensegrity(&[
        "render",
        &fixture("single_edge.json"),
        "--out",
        "/nonexistent/dir/out.svg",
        "--grid",
        "32",
    ]);
    assert_eq!(out.code, EXIT_IO);
}

#[test]
fn forcelines_csv() {
    let out = tensegrity(&[
        "forcelines",
        &fixture("two_paraboloids.json"),
        "--grid",
        "128",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let mut lines = out.stdout.lines();
    assert_eq!(
        lines.next(),
        Some("edge,component,point_index,x,y,start_tag,end_tag")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 7 && r[0] == "p-q"));
    assert!(rows
        .iter()
        .any(|r| r[5] == "critical:p:0" && r[6] == "critical:q:0"
            || r[5] == "critical:q:0" && r[6] == "critical:p:0"));
    assert!(rows
        .iter()
        .any(|r| r[5] == "boundary" || r[6] == "boundary"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("lines.csv");
    let degenerate = tensegrity(&[
        "forcelines",
        &fixture("identical_fields.json"),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(degenerate.code, EXIT_OK);
    assert!(degenerate.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.ends_with("\na-b,,,,,degenerate,degenerate\n"));
}

fn parse_points(attr: &str) -> Vec<(f64, f64)> {
    attr.split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect()
}

fn render_to(dir: &Path, input: &str, extra: &[&str]) -> (PathBuf, Output) {
    let out = dir.join("figure.svg");
    let mut args = vec!["render", input, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let result = tensegrity(&args);
    (out, result)
}

#[test]
fn render_produces_well_formed_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (path, out) = render_to(
        dir.path(),
        &fixture("paper_wheel.json"),
        &["--grid", "128", "--stress-labels"],
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    let view: Vec<f64> = root
        .attribute("viewBox")
        .unwrap()
        .split(' ')
        .map(|v| v.parse().unwrap())
        .collect();
    let inside = |x: f64, y: f64| {
        x >= view[0] && y >= view[1] && x <= view[0] + view[2] && y <= view[1] + view[3]
    };

    let group = |id: &str| {
        doc.descendants()
            .find(|n| n.attribute("id") == Some(id))
            .unwrap_or_else(|| panic!("{id}"))
    };
    for id in ["level-sets", "force-lines-open", "force-lines-compact"] {
        for line in group(id).children().filter(|n| n.is_element()) {
            for (x, y) in parse_points(line.attribute("points").unwrap()) {
                assert!(inside(x, y), "{id}: ({x}, {y})");
            }
        }
    }
    assert!(group("force-lines-compact")
        .children()
        .any(|n| n.is_element()));

    let dots: Vec<_> = group("critical-points")
        .children()
        .filter(|n| n.has_tag_name("circle"))
        .collect();
    assert_eq!(dots.len(), 5);
    let labels: Vec<&str> = group("critical-points")
        .children()
        .filter(|n| n.has_tag_name("text"))
        .map(|n| n.text().unwrap())
        .collect();
    assert_eq!(labels, ["A", "B", "C", "D", "O"]);

    let stresses: Vec<&str> = group("stresses")
        .children()
        .filter(|n| n.has_tag_name("text"))
        .map(|n| n.text().unwrap())
        .collect();
    assert_eq!(stresses.len(), 8);
    for s in &stresses {
        assert!(
            ["1.00", "-1.00", "0.200", "-0.200", "-0.400", "0.400"].contains(s),
            "{s}"
        );
    }
    for node in doc
        .descendants()
        .filter(|n| n.has_tag_name("text") || n.has_tag_name("circle"))
    {
        let (xa, ya) = if node.has_tag_name("circle") {
            ("cx", "cy")
        } else {
            ("x", "y")
        };
        let x: f64 = node.attribute(xa).unwrap().parse().unwrap();
        let y: f64 = node.attribute(ya).unwrap().parse().unwrap();
        assert!(inside(x, y));
    }
}

#[test]
fn render_levels_flag_overrides_scene() {
    let dir = tempfile::tempdir().unwrap();
    let count = |levels: &str| {
        let (path, out) = render_to(
            dir.path(),
            &fixture("one_vertex.json"),
            &["--levels", levels],
        );
        assert_eq!(out.code, EXIT_OK);
        let text = std::fs::read_to_string(path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let g = doc
            .descendants()
            .find(|n| n.attribute("id") == Some("level-sets"))
            .unwrap();
        g.children().filter(|n| n.is_element()).count()
    };
    // At least one curve per level; the outer ellipses are clipped by the box.
    let (three, seven) = (count("3"), count("7"));
    assert!(three >= 3 && seven >= 7 && seven > three, "{three} {seven}");
    let (_, zero) = render_to(dir.path(), &fixture("one_vertex.json"), &["--levels", "0"]);
    assert_eq!(zero.code, EXIT_VALIDATION);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tensegrity");
    let ok = Command::new(bin)
        .args(["selfstress", &fixture("single_edge.json")])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("dimension: 0"));
    let bad = Command::new(bin)
        .args(["selfstress", &fixture("constant_field.json")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
    let usage = Command::new(bin).arg("render").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn lift_rejects_bad_frameworks() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"version": 1, "vertices": [], "edges": []}"#,
        r#"{"version": 1, "vertices": [{"id": "a", "x": 1, "y": 2}, {"id": "b", "x": 1, "y": 2}], "edges": [["a", "b"]]}"#,
    ];
    for text in cases {
        let input = dir.path().join("fw.json");
        std::fs::write(&input, text).unwrap();
        let out = dir.path().join("scene.json");
        let result = tensegrity(&[
            "lift",
            input.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(result.code, EXIT_VALIDATION, "{text}");
        assert!(!out.exists());
    }
}
