//! The `polystab` binary end to end.

use std::process::{Command, Output};

use polystab::cli::{check_document, CertificateDocument};
use serde_json::Value;

fn polystab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polystab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timings(mut v: Value) -> Value {
    match &mut v {
        Value::Array(items) => items.iter_mut().for_each(|x| *x = without_timings(x.take())),
        Value::Object(map) => {
            map.remove("timings");
            for x in map.values_mut() {
                *x = without_timings(x.take());
            }
        }
        _ => {}
    }
    v
}

#[test]
fn spec_examples() {
    let o = polystab(&["classify", "--n", "3", "--char", "0", "--input", "h3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "stable");
    for key in ["input", "n", "d", "char", "class", "certificate", "timings", "decisions"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let o = polystab(&["symfun", "syt", "--outer", "2,1"]);
    assert_eq!(stdout(&o).trim(), "2");

    let o = polystab(&["torus", "--weights", "1,-1;-1,1", "--support", "all"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "polystable-not-stable");
}

#[test]
fn exit_codes() {
    assert_eq!(polystab(&["classify", "--n", "3", "--char", "6", "--input", "h3"]).status.code(), Some(2));
    assert_eq!(polystab(&["classify", "--input", "h3"]).status.code(), Some(2));
    assert_eq!(polystab(&["stabdim", "--n", "3", "--input", "x1*"]).status.code(), Some(2));
    let o = polystab(&["stabdim", "--n", "3", "--char", "3", "--input", "x1*x2*x3", "--max-basis", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(polystab(&["--help"]).status.code(), Some(0));
}

#[test]
fn every_subcommand_is_deterministic() {
    let commands: [&[&str]; 8] = [
        &["classify", "--n", "3", "--char", "0,2,3,5,7", "--input", "h3"],
        &["classify", "--n", "4", "--input", "e{2,1} - p3"],
        &["torus", "--weights", "2,0;-1,1;-1,-1;0,3", "--support", "0,1,2"],
        &["symfun", "expand", "--n", "4", "--input", "s{2,1}*e1"],
        &["symfun", "d-schur", "--shape", "3,1", "--n", "5"],
        &["stabdim", "--n", "3", "--input", "x1^3 + x2^3 + x3^3"],
        &["certify-family", "--family", "tensor", "--n", "1"],
        &["appendix"],
    ];
    for args in commands {
        let a = polystab(args);
        let b = polystab(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        let (va, vb): (Value, Value) = (
            serde_json::from_str(&stdout(&a)).unwrap(),
            serde_json::from_str(&stdout(&b)).unwrap(),
        );
        assert_eq!(
            serde_json::to_string(&without_timings(va)).unwrap(),
            serde_json::to_string(&without_timings(vb)).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn emitted_unstable_certificates_revalidate() {
    let dir = std::env::temp_dir().join(format!("polystab-it-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inputs = [
        ("h3", 3, "5"),
        ("e{2,1}", 3, "0,7"),
        ("(x1+x2+x3)^2*(x1^2+x2^2+x3^2)", 3, "0,5"),
        ("p{2,1}", 4, "0,3,5"),
        ("x1^4*x2^2 + x1^2*x2^4", 2, "0"),
        ("h3", 3, "2"),
    ];
    let mut unstable = 0;
    for (k, (input, n, chars)) in inputs.iter().enumerate() {
        let path = dir.join(format!("doc{k}.json"));
        let o = polystab(&[
            "classify", "--n", &n.to_string(), "--char", chars, "--input", input, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{input}: {}", String::from_utf8_lossy(&o.stderr));
        let check = polystab(&["check-certificate", path.to_str().unwrap()]);
        assert_eq!(check.status.code(), Some(0), "{input}: {}", String::from_utf8_lossy(&check.stderr));
        let text = std::fs::read_to_string(&path).unwrap();
        let docs: Vec<CertificateDocument> = if chars.contains(',') {
            serde_json::from_str(&text).unwrap()
        } else {
            vec![serde_json::from_str(&text).unwrap()]
        };
        for d in &docs {
            check_document(d).unwrap();
            if d.class == polystab::torus::StabilityClass::Unstable {
                unstable += 1;
            }
        }
    }
    assert!(unstable >= 4, "{unstable}");

    let path = dir.join("bad.json");
    let mut v: Value = serde_json::from_str(&stdout(&polystab(&["classify", "--n", "3", "--char", "5", "--input", "h3"]))).unwrap();
    v["certificate"]["weights"][0] = Value::from(-1);
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(polystab(&["check-certificate", path.to_str().unwrap()]).status.code(), Some(1));
    v["certificate"]["surplus"] = Value::from(0);
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(polystab(&["check-certificate", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
