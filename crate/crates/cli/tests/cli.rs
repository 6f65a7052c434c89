use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn lancom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lancom")).args(args).env_remove("LANCOM_MAX_MEMORY_MB").output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Minimal JSON Schema check: `type`, `enum`, `required`, `properties`, `items`.
fn conforms(v: &Value, schema: &Value, at: &str) -> Result<(), String> {
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_u64() || v.is_i64(),
            "number" => v.is_number(),
            "boolean" => v.is_boolean(),
            "null" => v.is_null(),
            _ => false,
        });
        if !ok {
            return Err(format!("{at}: expected {types:?}, got {v}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(v) {
            return Err(format!("{at}: {v} not in enum"));
        }
    }
    if let Some(Value::Array(req)) = schema.get("required") {
        for r in req.iter().filter_map(Value::as_str) {
            if v.get(r).is_none() {
                return Err(format!("{at}: missing {r}"));
            }
        }
    }
    if let (Some(Value::Object(props)), Some(obj)) = (schema.get("properties"), v.as_object()) {
        for (k, sub) in props {
            if let Some(x) = obj.get(k) {
                conforms(x, sub, &format!("{at}.{k}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            conforms(x, items, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

fn schema() -> Value {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/history.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn gen_nx2_matches_hand_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("l2.mtx");
    let out = lancom(&["gen", "laplacian-l", "--nx", "2", "-o", p(&f)]);
    assert!(out.status.success());
    let a = lancom::sparse::read_matrix_market(&f).unwrap();
    let d = a.to_dense();
    let expect = [[12.0, -3.0, -3.0], [-3.0, 12.0, 0.0], [-3.0, 0.0, 12.0]];
    for (i, row) in expect.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(d.get(i, j), *v);
        }
    }
}

#[test]
fn gen_nx300_has_order_67500() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("l300.mtx");
    assert!(lancom(&["gen", "laplacian-l", "--nx", "300", "-o", p(&f)]).status.success());
    let text = std::fs::read_to_string(&f).unwrap();
    let size = text.lines().find(|l| !l.starts_with('%')).unwrap();
    assert!(size.starts_with("67500 67500 "), "size line {size}");
}

#[test]
fn gen_rejects_odd_grid() {
    let out = lancom(&["gen", "laplacian-l", "--nx", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn solve_converges_and_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("lap.mtx");
    assert!(lancom(&["gen", "laplacian-l", "--nx", "30", "-o", p(&m)]).status.success());
    let h = dir.path().join("h.json");
    let c = dir.path().join("h.csv");
    let args = [
        "solve", "--method", "lc", "--matrix", p(&m), "--k", "1", "--m", "60", "--tol-res", "1e-8", "--tol-ra", "1e-6",
        "--seed", "42", "-o", p(&h), "--csv", p(&c),
    ];
    let out = lancom(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&h).unwrap()).unwrap();
    conforms(&doc, &schema(), "$").unwrap();
    assert_eq!(doc["converged"], Value::Bool(true));
    let cps = doc["checkpoints"].as_array().unwrap();
    assert!(!cps.is_empty());
    assert_eq!(cps.last().unwrap()["event"], "converged");
    assert_eq!(cps.last().unwrap()["matvecs"], doc["matvecs"]);
    let csv = std::fs::read_to_string(&c).unwrap();
    assert_eq!(csv.lines().count(), cps.len() + 1);
    assert!(csv.starts_with("matvecs,event,residual_estimate,ritz_1\n"));
}

#[test]
fn every_method_emits_valid_history() {
    let s = schema();
    for method in ["lc", "ks", "lanczos"] {
        let out = lancom(&[
            "solve", "--method", method, "--generate", "random:n=150,per-row=3,seed=2", "--k", "3", "--m", "20",
        ]);
        assert_eq!(out.status.code(), Some(0), "{method}: {}", String::from_utf8_lossy(&out.stderr));
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        conforms(&doc, &s, "$").unwrap();
        assert_eq!(doc["method"], method);
    }
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let args = ["solve", "--generate", "random:n=200,per-row=3,seed=5", "--k", "2", "--m", "25", "--seed", "9"];
    let a = lancom(&args);
    let b = lancom(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors_exit_with_one() {
    for args in [
        vec!["solve", "--generate", "laplacian-l:nx=10", "--k", "0"],
        vec!["solve", "--generate", "laplacian-l:nx=10", "--k", "1", "--m", "500"],
        vec!["solve", "--generate", "laplacian-l:nx=10", "--k", "1", "--ell", "4"],
        vec!["solve", "--generate", "cube:nx=10", "--k", "1"],
        vec!["solve", "--matrix", "/nonexistent/a.mtx", "--k", "1"],
        vec!["solve", "--k", "1"],
    ] {
        let out = lancom(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn exhausted_budget_exits_with_two() {
    let out = lancom(&["solve", "--generate", "laplacian-l:nx=40", "--k", "1", "--m", "30", "--max-matvecs", "35"]);
    assert_eq!(out.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["converged"], Value::Bool(false));
    assert_eq!(doc["matvecs"], 35);
}

#[test]
fn memory_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lancom"))
        .args(["solve", "--generate", "laplacian-l:nx=300", "--k", "1", "--m", "60"])
        .env("LANCOM_MAX_MEMORY_MB", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory"));
}

#[test]
fn compare_counts_match_histories() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let gen = "random:n=300,per-row=3,seed=3,shift=4";
    let common = ["--generate", gen, "--k", "2", "--m", "24", "--tol-res", "1e-10", "--seed", "4"];
    let mut args = vec!["compare"];
    args.extend(common);
    args.extend(["-o", p(&report)]);
    let out = lancom(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("improvement"));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["reference_method"], "dense");
    let reference: Vec<f64> = rep["reference"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let tolerances: Vec<f64> = rep["tolerances"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(tolerances, vec![1e-4, 1e-5, 1e-6, 1e-7, 1e-8]);

    for method in ["lc", "ks"] {
        let mut s = vec!["solve", "--method", method];
        s.extend(common);
        let h = lancom(&s);
        let doc: Value = serde_json::from_slice(&h.stdout).unwrap();
        let first = |tol: f64| {
            doc["checkpoints"].as_array().unwrap().iter().find_map(|c| {
                let ritz: Vec<f64> = c["ritz"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
                let err = lancom::metrics::relative_ritz_error(&ritz, &reference);
                (ritz.len() >= reference.len() && err.abs() <= tol).then(|| c["matvecs"].as_u64().unwrap())
            })
        };
        for (i, &t) in tolerances.iter().enumerate() {
            assert_eq!(rep[method]["matvecs_to_tol"][i].as_u64(), first(t), "{method} at {t}");
        }
    }
}
