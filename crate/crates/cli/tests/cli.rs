use std::path::PathBuf;
use std::process::{Command, Output};

fn cadprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cadprep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cadprep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn circle_cad() {
    let o = cadprep(&["cad", "@circle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("cells: 13"), "{out}");
    assert!(out.contains("stacks 2: 1 3 5 3 1"), "{out}");
    assert!(out.contains("satisfiable: true"), "{out}");
}

#[test]
fn circle_cad_from_a_file() {
    let path = scratch("disc.prob");
    std::fs::write(&path, "vars: x > y\neqs:\nconstraints:\nx^2 + y^2 - 1 < 0\n").unwrap();
    let o = cadprep(&["cad", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("cells: 13"));
}

#[test]
fn groebner_and_normal_form() {
    let o = cadprep(&["groebner", "@spheres-12-lt"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect();
    assert_eq!(lines, ["x", "y^2 + z^2 - 2"]);

    let o = cadprep(&["normalform", "@spheres-12-lt", "--poly", "x^2+y^2-1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-z^2 + 1");
}

#[test]
fn variants_and_recommendation() {
    let o = cadprep(&["variants", "@spheres-12-lt"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Original,8,"), "{out}");
    assert!(out.contains("GrC+AllVars,4,"), "{out}");

    let o = cadprep(&["recommend", "@spheres-12-lt"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(tnoi 4)"));
}

#[test]
fn bench_then_correlate() {
    let csv = scratch("bench.csv");
    let o = cadprep(&["bench", "@spheres-12-lt", "--budget-ms", "60000", "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 7, "{text}");

    let o = cadprep(&["correlate", csv.to_str().unwrap(), "--against", "GrC+AllVars"]);
    assert_eq!(o.status.code(), Some(2), "one problem is too few points");

    let extra = "p2,Original,x>y,timeout,0,0,1000,1000,,6\n\
                 p2,GrC+AllVars,x>y,ok,1,1,10,12,50,3\n\
                 p3,Original,x>y,ok,0,0,40,40,300,7\n\
                 p3,GrC+AllVars,x>y,ok,1,1,30,32,200,7\n";
    std::fs::write(&csv, text + extra).unwrap();
    let o = cadprep(&["correlate", csv.to_str().unwrap(), "--against", "GrC+AllVars"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("timeout"), "censoring rules are reported: {out}");
    assert!(out.contains("p2"), "substitution for the timed-out run is listed: {out}");
}

#[test]
fn exit_codes() {
    assert_eq!(cadprep(&["cad", "/nonexistent/missing.prob"]).status.code(), Some(1));
    assert_eq!(cadprep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cadprep(&["normalform", "@spheres-12-lt", "--poly", "x^^2"]).status.code(), Some(1));
    let o = cadprep(&["cad", "@spheres-34-lt", "--budget-ms", "50"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
