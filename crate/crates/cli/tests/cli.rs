use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn converse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_converse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eisenstein_file_has_sigma3() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("e4.txt");
    let o = converse(&[
        "eisenstein",
        "--k",
        "4",
        "--xi1",
        "1.0",
        "--xi2",
        "1.0",
        "--count",
        "1000",
        "--out",
        path(&f),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&f).unwrap();
    assert!(text.starts_with("# k=4 N=1 chi=1.0 X=1000"));
    assert!(text.lines().any(|l| l == "6 252.0 0.0"));
}

#[test]
fn delta_file_verifies_with_unit_root_number() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("delta.txt");
    let o = converse(&[
        "eta",
        "--spec",
        "1^24",
        "--count",
        "1000",
        "--out",
        path(&f),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = converse(&["verify-fe", "--coeffs", path(&f), "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let eps: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("epsilon_re="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((eps - 1.0).abs() < 1e-8);
    assert!(out.ends_with("pass=true\n"));
}

#[test]
fn corrupted_file_fails_with_dispersion() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("delta.txt");
    converse(&[
        "eta",
        "--spec",
        "1^24",
        "--count",
        "1000",
        "--out",
        path(&f),
    ]);
    let text = fs::read_to_string(&f)
        .unwrap()
        .replace("\n2 -24.0 0.0\n", "\n2 -23.99 0.0\n");
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, text).unwrap();
    let o = converse(&["verify-fe", "--coeffs", path(&bad), "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).trim(), "reason=dispersion");
    assert!(stdout(&o).ends_with("pass=false\n"));
    let o = converse(&["hecke-check", "--coeffs", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).trim(), "reason=hecke_relation");
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["verify-fe", "--coeffs", "/nonexistent/file"],
        vec!["verify-fe", "--dataset", "delta", "--tol", "-1"],
        vec!["verify-fe", "--dataset", "delta", "--twist", "5.0"],
        vec!["ramanujan-check", "--dataset", "level11", "--q", "11"],
        vec!["sq-check", "--dataset", "delta", "--q", "4"],
        vec!["slash-check", "--dataset", "level11", "--gamma", "1,0;2,1"],
        vec!["slash-check", "--dataset", "delta", "--gamma", "1,2,3"],
        vec!["hecke-check"],
        vec!["eta", "--spec", "1^x", "--count", "10"],
        vec!["report", "--dataset", "nosuch"],
    ] {
        let o = converse(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.lines().count() >= 1, "{args:?}");
    }
    let o = converse(&["verify-fe", "--coeffs", "/nonexistent/file"]);
    assert!(stderr(&o).starts_with("reason=config "));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn individual_checks_pass_on_bundled_data() {
    let cases: &[&[&str]] = &[
        &["hecke-check", "--dataset", "e4"],
        &[
            "verify-fe",
            "--dataset",
            "delta",
            "--twist",
            "5.1",
            "--tol",
            "1e-6",
        ],
        &[
            "verify-fe",
            "--dataset",
            "level11",
            "--s-grid",
            "0.5+2i,1.5-1i",
            "--tol",
            "1e-6",
        ],
        &[
            "ramanujan-check",
            "--dataset",
            "delta",
            "--q",
            "5",
            "--x",
            "1000",
        ],
        &["sq-check", "--dataset", "delta", "--q", "5"],
        &["sq-check", "--dataset", "e1chi4", "--q", "3"],
        &[
            "slash-check",
            "--dataset",
            "delta",
            "--gamma",
            "0,-1;1,0",
            "--points",
            "0.2+1.3i",
        ],
        &[
            "slash-check",
            "--dataset",
            "level11",
            "--q",
            "3",
            "--b",
            "1",
        ],
        &["matrix-check", "--level", "23"],
        &["matrix-check", "--level", "11", "--primes", "3,23"],
    ];
    for args in cases {
        let o = converse(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}{}",
            stdout(&o),
            stderr(&o)
        );
    }
}

#[test]
fn report_is_deterministic_and_covers_every_check() {
    let dir = tempfile::tempdir().unwrap();
    for d in ["delta", "level11", "e4", "e1chi4"] {
        let a = dir.path().join(format!("{d}.a"));
        let b = dir.path().join(format!("{d}.b"));
        for f in [&a, &b] {
            let o = converse(&["report", "--dataset", d, "--out", path(f)]);
            assert_eq!(o.status.code(), Some(0), "{d}: {}", stderr(&o));
        }
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text, fs::read_to_string(&b).unwrap());
        for section in [
            "hecke.pass",
            "ramanujan.pass",
            "sq.pass",
            "slash.pass",
            "matrix.pass",
        ] {
            assert!(
                text.lines().any(|l| l == format!("{section}=true")),
                "{d} {section}"
            );
        }
        assert!(text
            .lines()
            .any(|l| l.starts_with("fe_") && l.ends_with(".pass=true")));
        assert!(text.ends_with("pass=true\n"));
    }
}

#[test]
fn report_on_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f11.txt");
    converse(&[
        "eta",
        "--spec",
        "1^2*11^2",
        "--count",
        "20000",
        "--out",
        path(&f),
    ]);
    let o = converse(&["report", "--coeffs", path(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("input=file\n"));
}
