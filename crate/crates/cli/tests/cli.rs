use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hstair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hstair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hstair-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn caps_json_on_stdout() {
    let o = hstair(&["caps", "--b", "1/5", "--scale", "5", "--count", "25"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["caps"][19], "24");
    assert_eq!(v["caps"][5], "10");
    assert_eq!(v["count"], 25);
    assert_eq!(v["caps"].as_array().unwrap().len(), 26);
}

#[test]
fn reduce_verdicts() {
    let o = hstair(&["reduce", "--class", "48,14;111/19"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("FAKE"));
    let o = hstair(&["reduce", "--class", "73,20;170/29", "--log"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("EXCEPTIONAL"));
    assert!(out.lines().nth(1).unwrap().starts_with("0\t73\t"));
    let o = hstair(&["reduce", "--class", "2,0;[1^4]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn acc_and_inverse() {
    assert_eq!(
        stdout(&hstair(&["acc-inv", "--z", "6", "--branch", "U"])).trim(),
        "5/11"
    );
    assert_eq!(
        stdout(&hstair(&["acc-inv", "--z", "6", "--branch", "L"])).trim(),
        "1/5"
    );
    assert_eq!(stdout(&hstair(&["acc", "--b", "1/5"])).trim(), "6");
    assert!(stdout(&hstair(&["acc", "--b", "1/3"])).starts_with("3+2*sqrt(2)"));
    assert_eq!(
        hstair(&["acc-inv", "--z", "5", "--branch", "U"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn embed_lower_rows() {
    let dir = scratch("embed");
    let caps = dir.join("c0.json");
    let csv = dir.join("e0.csv");
    assert!(
        hstair(&["caps", "--b", "0", "--count", "200", "--out", s(&caps)])
            .status
            .success()
    );
    let args = [
        "embed-lower",
        "--caps",
        s(&caps),
        "--zmin",
        "1",
        "--zmax",
        "7",
        "--step",
        "1/4",
        "--out",
        s(&csv),
        "--with-volume",
        "--with-acc-curve",
    ];
    assert!(hstair(&args).status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("z,c_lower b=0,volume,acc L"));
    let row = |z: &str| {
        text.lines()
            .find(|l| l.starts_with(&format!("{z},")))
            .unwrap()
            .to_string()
    };
    assert_eq!(row("4").split(',').nth(2), Some("2"));
    assert_eq!(row("5").split(',').nth(1), Some("2.5"));
    assert_eq!(row("6").split(',').nth(3), Some("2.5"));
    let again = dir.join("e1.csv");
    let mut args2 = args;
    args2[10] = s(&again);
    assert!(hstair(&args2).status.success());
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn obstruction_curves() {
    let dir = scratch("obstruction");
    let a = dir.join("a.csv");
    let o = hstair(&[
        "obstruction",
        "--class",
        "2,0;5",
        "--b",
        "0",
        "--zmin",
        "5",
        "--zmax",
        "6",
        "--step",
        "1/2",
        "--out",
        s(&a),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&a)
        .unwrap()
        .lines()
        .any(|l| l == "5,2.5"));
    let k = dir.join("k.csv");
    let o = hstair(&[
        "obstruction",
        "--k",
        "5",
        "--b",
        "0",
        "--zmin",
        "5",
        "--zmax",
        "5",
        "--step",
        "1",
        "--out",
        s(&k),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&k).unwrap(), "z,c_5 ratio\n5,2.5\n");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn plot_svg() {
    let dir = scratch("plot");
    let csv = dir.join("one.csv");
    fs::write(&csv, "z,c_lower\n1,1\n2,1.5\n").unwrap();
    let svg = dir.join("one.svg");
    assert!(hstair(&["plot", "--in", s(&csv), "--out", s(&svg)])
        .status
        .success());
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 1);
    let again = dir.join("again.svg");
    assert!(hstair(&["plot", "--in", s(&csv), "--out", s(&again)])
        .status
        .success());
    assert_eq!(text, fs::read_to_string(&again).unwrap());

    let empty = dir.join("empty.csv");
    fs::write(&empty, "z,c_lower\n").unwrap();
    let none = dir.join("none.svg");
    assert_eq!(
        hstair(&["plot", "--in", s(&empty), "--out", s(&none)])
            .status
            .code(),
        Some(1)
    );
    assert!(!none.exists());
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn staircase_verify() {
    let o = hstair(&[
        "staircase",
        "--spec",
        "U:u:0:short",
        "--kmax",
        "3",
        "--verify",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("(14,9;4w(29/4))"));
    assert!(out.contains("(100,63;29w(208/29))"));
    for check in [
        "diophantine\tok",
        "recursion\tok",
        "dmin1\tok",
        "cremona\tok",
    ] {
        assert!(out.contains(check), "{check}");
    }
    assert_eq!(
        hstair(&["staircase", "--spec", "Q:u:0:short", "--kmax", "3"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn blocking_family() {
    let out = stdout(&hstair(&["blocking", "--family", "U", "--n", "0"]));
    assert!(out.contains("exact\ttrue"));
    assert!(out
        .lines()
        .any(|l| l.starts_with("z_low\t") && l.ends_with("5.85410196624968")));
    assert_eq!(
        hstair(&["blocking", "--class", "2,0;5"]).status.code(),
        Some(2)
    );
}

#[test]
fn find_classes_modes() {
    assert!(stdout(&hstair(&["find-classes", "--k", "6"])).contains("(3,2;w(6))"));
    assert!(stdout(&hstair(&["find-classes", "--cf", "[5;1,4]"])).contains("(13,5;5w(29/5))"));
    let o = hstair(&[
        "find-classes",
        "--range",
        "5",
        "6",
        "--qmin",
        "1",
        "--qmax",
        "5",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(13,5;5w(29/5))"));
}

#[test]
fn min_obstructing_from_file() {
    let dir = scratch("minobs");
    let caps = dir.join("c.json");
    assert!(
        hstair(&["caps", "--b", "3/10", "--count", "300", "--out", s(&caps)])
            .status
            .success()
    );
    assert_eq!(
        stdout(&hstair(&[
            "min-obstructing-k",
            "--b",
            "3/10",
            "--caps",
            s(&caps)
        ]))
        .trim(),
        "125"
    );
    assert_eq!(
        hstair(&["min-obstructing-k", "--b", "1/5", "--caps", s(&caps)])
            .status
            .code(),
        Some(1)
    );
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_b15_passes() {
    let o = hstair(&["verify-b15", "--tmax", "120"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn exit_codes_and_threads() {
    assert_eq!(hstair(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        hstair(&["caps", "--b", "x", "--count", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        hstair(&["caps", "--b", "1", "--count", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(hstair(&["--help"]).status.code(), Some(0));
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hstair"))
            .args(["caps", "--b", "1/5", "--count", "10"])
            .env("STAIRCASE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run("2").status.success());
    assert_eq!(run("0").status.code(), Some(1));
}
