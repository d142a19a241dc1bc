use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkmloc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jfun_oracle_on_the_projective_line() {
    let o = run(&["jfun", "--builder", "pn:1", "--root", "0", "--mode", "cotangent", "--cap", "2", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("oracle: equal"), "{s}");
    assert_eq!(s.lines().filter(|l| l.starts_with("d=")).count(), 3);
}

#[test]
fn jfun_json_schema() {
    let o = run(&["jfun", "--builder", "pn:2", "--cap", "1", "--oracle", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], "1.0.0");
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        for key in ["degree", "term_factored", "term_expanded", "oracle_equal"] {
            assert!(t.get(key).is_some(), "{key}");
        }
        assert_eq!(t["oracle_equal"], true);
    }
}

#[test]
fn flag_trees_as_dot() {
    let o = run(&["trees", "--builder", "slflag:3", "--root", "e", "--degree", "1,1", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("graph ")).count(), 4);
}

#[test]
fn flag_term_is_unbalanced() {
    let o = run(&["balance", "--builder", "slflag:3", "--root", "e", "--degree", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("unbalanced") && s.contains("witness sigma"), "{s}");
}

#[test]
fn checks_pass_with_exit_zero() {
    let o = run(&["verify-adelic", "--builder", "pn:1", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("overall: pass"));
    let o = run(&["asymptotics", "--builder", "slflag:3", "--root", "e", "--degree", "1,1", "--per-tree"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trees matching prediction: 4/4"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["jfun", "--builder", "pn:1", "--cap", "9"],
        vec!["jfun", "--builder", "cube:1", "--cap", "1"],
        vec!["trees", "--builder", "pn:1", "--root", "7", "--degree", "1"],
        vec!["trees", "--builder", "pn:1", "--degree", "1,1"],
        vec!["trees", "--degree", "1"],
        vec!["bogus"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn graph_files_and_widths_agree() {
    let path = std::env::temp_dir().join(format!("gkmloc-cli-{}.txt", std::process::id()));
    std::fs::write(&path, gkmloc::gkm::write_graph(&gkmloc::gkm::build_projective_space(1))).unwrap();
    let file = path.to_str().unwrap();
    let reference = run(&["contrib", "--builder", "pn:1", "--degree", "2", "--per-tree", "--width", "0"]);
    assert_eq!(reference.status.code(), Some(0));
    for width in ["1", "4"] {
        let o = run(&["contrib", "--graph", file, "--degree", "2", "--per-tree", "--width", width]);
        assert_eq!(o.stdout, reference.stdout);
    }
    std::fs::remove_file(&path).unwrap();
}
