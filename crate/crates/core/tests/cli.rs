use std::process::{Command, Output};

fn tanaka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanaka"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn heisenberg_verify_exit_code_and_dims() {
    let o = tanaka(&["verify", "--n", "1", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("\"g_dims_real\": [2, 2, 1, 0]"), "{out}");
    assert!(out.contains("\"theorem_status\": \"outside_hypotheses\""), "{out}");
}

#[test]
fn depth_four_verify_passes() {
    let o = tanaka(&["verify", "--n", "1", "--mu", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("\"g1_real_dim\": 0"), "{out}");
    assert!(out.contains("\"theorem_status\": \"pass\""), "{out}");
}

#[test]
fn bad_depth_is_a_configuration_error() {
    let o = tanaka(&["verify", "--n", "1", "--mu", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mu"));
    let o = tanaka(&["verify", "--n", "1", "--mu", "4", "--ideal", "[E1,,F1]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn machine_output_is_byte_identical() {
    let args = ["verify", "--n", "1", "--mu", "3", "--format", "machine"];
    let a = tanaka(&args);
    let b = tanaka(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn config_file_with_ideal() {
    let dir = std::env::temp_dir().join(format!("tanaka-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("instance.cfg");
    std::fs::write(
        &path,
        "command = verify\nn = 1\nmu = 4\n# one real relation in degree -4\nideal = [\"[E1,[E1,[E1,F1]]] + [F1,[F1,[E1,F1]]]\"]\n",
    )
    .unwrap();
    let o = tanaka(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("\"m_dims\": [2, 1, 2, 2]"), "{out}");
    assert!(out.contains("\"g1_real_dim\": 0"), "{out}");

    // two configs, two lines, in input order regardless of jobs
    let o = tanaka(&[
        "verify",
        "--config",
        path.to_str().unwrap(),
        "--config",
        path.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(stdout(&o).lines().count(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn hall_single_generator() {
    let o = tanaka(&["hall", "--generators", "1", "--depth", "3", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"dims\": [1, 0, 0]"));
}

#[test]
fn prolong_human_output() {
    let o = tanaka(&["prolong", "--n", "1", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}
