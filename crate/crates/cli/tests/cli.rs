use std::process::{Command, Output};

fn chigf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chigf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name).to_string_lossy().into_owned();
    (dir, path)
}

#[test]
fn spindle_values() {
    let o = chigf(&["lp", "chif", "@m7", "--exact"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "chi_f = 7/2 (3.500000000000)\n");
    let o = chigf(&["lp", "chigf", "@m7", "--exact"]);
    assert_eq!(stdout(&o), "chi_gf = 7/2 (3.500000000000)\n");
    let o = chigf(&["lp", "chigf", "@m7", "--numeric"]);
    assert!(stdout(&o).starts_with("chi_gf ~ 3.500000000000\n"));
}

#[test]
fn independent_set_count_reports_both_conventions() {
    let o = chigf(&["indep", "count", "@g27"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "182303");
    assert!(String::from_utf8_lossy(&o.stderr).contains("182304 counting the empty set"));
    let o = chigf(&["indep", "enumerate", "@m7"]);
    assert_eq!(stdout(&o).lines().count(), 17);
}

#[test]
fn bundled_colouring_verifies() {
    let o = chigf(&["colouring", "verify", "@g27", "@g27"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("valid gfc colouring, weight 4"));
}

#[test]
fn broken_colouring_is_a_verification_failure() {
    let text = chigf::io::G27_COLOURING_TXT.replacen('1', "2", 1);
    let (_d, path) = tmp("colours.txt");
    std::fs::write(&path, text).unwrap();
    let o = chigf(&["colouring", "verify", "@g27", &path]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(chigf(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        chigf(&["lp", "chigf", "/no/such/file"]).status.code(),
        Some(1)
    );
    assert_eq!(
        chigf(&["certify", "@m7", "--target", "x"]).status.code(),
        Some(1)
    );
    let (_d, path) = tmp("bad.txt");
    std::fs::write(&path, "0 0 0\n").unwrap();
    let o = chigf(&["graph", "info", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("reading graph"));
    assert_eq!(chigf(&["--help"]).status.code(), Some(0));
}

#[test]
fn certify_then_check_witness() {
    let (dir, w) = tmp("w.txt");
    let o = chigf(&["certify", "@m7", "--target", "7/2", "--witness-out", &w]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("verdict: valid\n"));
    let o = chigf(&["witness", "check", "@m7", &w]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&w)
        .unwrap()
        .replacen("target 7/2", "target 351/100", 1);
    let w2 = dir.path().join("w2.txt");
    std::fs::write(&w2, text).unwrap();
    let o = chigf(&["witness", "check", "@m7", w2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let o = chigf(&["certify", "@m7", "--target", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).ends_with("verdict: invalid\n"));
}

#[test]
fn lp_export_reimports() {
    let o = chigf(&["lp", "export", "@m7", "--model", "chigf"]);
    assert!(o.status.success());
    let model = chigf::lp::import_lp(&stdout(&o)).unwrap();
    assert_eq!(model.n_vars(), 17);
    let sol = chigf::lp::solve(&model, &chigf::lp::Mode::exact()).unwrap();
    assert_eq!(sol.exact_objective().unwrap(), &chigf::field::rat(7, 2));
}

#[test]
fn search_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let o = chigf(&[
        "search",
        "run",
        "--max-iterations",
        "2",
        "--checkpoint",
        &p("ck.txt"),
        "--log",
        &p("log.csv"),
        "--figure2",
        &p("fig.csv"),
        "--champions",
        &p("best"),
        "--exact-champions",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("n=8 best 3.500000000000 exact 7/2"));
    let fig = std::fs::read_to_string(p("fig.csv")).unwrap();
    assert_eq!(fig.lines().next(), Some("n,best_chi_gf"));
    assert!(fig.contains("\n8,3.5"));
    let log = std::fs::read_to_string(p("log.csv")).unwrap();
    assert_eq!(log.lines().count(), 3);
    let o = chigf(&["search", "figure2", &p("ck.txt")]);
    assert_eq!(stdout(&o), fig);
    let o = chigf(&[
        "search",
        "run",
        "--resume",
        &p("ck.txt"),
        "--max-iterations",
        "3",
    ]);
    assert!(stdout(&o).contains("after 3 iterations"));
    assert!(std::path::Path::new(&p("best/best_8.txt")).exists());
}

#[test]
fn greedy_and_descendants() {
    let o = chigf(&["search", "greedy", "@m7", "--threshold", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no child improves"));
    let o = chigf(&["search", "descendants", "@m7", "--samples", "5"]);
    let out = stdout(&o);
    assert!(out.contains("children: 21"));
    assert!(out.contains("grandchildren sampled: 5"));
}
