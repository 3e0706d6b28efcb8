use std::path::PathBuf;
use std::process::{Command, Output};

fn detlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detlab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{}-{name}", std::process::id()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exponent_prints_two_thirds() {
    let o = detlab(&["exponent", "--d", "2", "--e", "2", "--mode", "lattice"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2/3\n");
    let o = detlab(&["--json", "exponent", "--d", "2", "--e", "3", "--mode", "height"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["delta"], "6/5");
}

#[test]
fn sx_ratio_near_one() {
    let o = detlab(&["--json", "sx", "--x-max", "1000"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = v["count_ratio"].as_f64().unwrap();
    assert!((0.98..=1.02).contains(&r), "{r}");
}

#[test]
fn cover_then_verify_and_tamper() {
    let cert = scratch("cert.json");
    let c = cert.to_str().unwrap();
    for (curve, mode, d, e) in [("poly:0,0,0,1@[0,1]", "lattice", "3", "4"), ("poly:0,0,1@[-1,1]", "height", "2", "3")] {
        let o = detlab(&["cover", "--curve", curve, "--mode", mode, "--n", "60", "--d", d, "--e", e, "--out", c]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = detlab(&["verify", "--cert", c]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }

    let text = std::fs::read_to_string(&cert).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let pieces = v["pieces"].as_array_mut().unwrap();
    let k = pieces.iter().position(|p| !p["points"].as_array().unwrap().is_empty()).unwrap();
    pieces[k]["points"].as_array_mut().unwrap().pop();
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let o = detlab(&["verify", "--cert", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAILED"));

    std::fs::write(&cert, "{not json").unwrap();
    assert_eq!(detlab(&["verify", "--cert", c]).status.code(), Some(1));
    assert_eq!(detlab(&["verify", "--cert", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn series_csv_is_deterministic_and_fits() {
    let (a, b, svg) = (scratch("a.csv"), scratch("b.csv"), scratch("plot.svg"));
    for p in [&a, &b] {
        let o = detlab(&["series", "--curve", "poly:0,0,1@[0,1)", "--mode", "lattice", "--grid", "16,25,36,49,64,81,100", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(bytes.starts_with(b"n,count\n16,4\n25,5\n"));

    let o = detlab(&["--json", "fit", "--in", a.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let slope = v["slope"].as_f64().unwrap();
    assert!((0.45..=0.55).contains(&slope), "{slope}");

    let o = detlab(&["plot", "--in", a.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("viewBox=\"0 0 800 600\""));
}

#[test]
fn usage_errors_exit_two() {
    let o = detlab(&["count", "--curve", "poly:0,0,", "--mode", "lattice", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 9"));
    let o = detlab(&["--json", "choose", "--target", "0", "--mode", "lattice"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "usage");
    assert_eq!(detlab(&["series", "--curve", "pow:2", "--mode", "height", "--grid", "9:3:2"]).status.code(), Some(2));
    assert_eq!(detlab(&["nosuch"]).status.code(), Some(2));
}

#[test]
fn choose_and_jarnik() {
    let o = detlab(&["choose", "--target", "3/5", "--mode", "lattice", "--d", "2"]);
    assert_eq!(stdout(&o), "d = 2, e = 4, delta = 4/7\n");
    let o = detlab(&["--json", "jarnik", "--n", "100", "--window", "1/10"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["window"]["violations"], 0);
    assert_eq!(v["upper_check"], true);
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_detlab"))
            .env("DETLAB_THREADS", threads)
            .args(["series", "--curve", "poly:0,0,1", "--mode", "height", "--grid", "16:1024:4"])
            .output()
            .unwrap()
    };
    let one = run("1");
    assert!(one.status.success());
    assert_eq!(one.stdout, run("0").stdout);
    assert_eq!(run("x").status.code(), Some(2));
}
