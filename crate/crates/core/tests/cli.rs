use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;
use tworoute::generator::seeded_rng;
use tworoute::vrp::random_2vrp_instance;

fn tworoute(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tworoute"))
        .args(args)
        .current_dir(dir)
        .env_remove("TWOROUTE_MAX_SUBSET_BITS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generate_solve_verify_two_tsp() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let gen = tworoute(&["gen", "--n", "10", "--fixed", "4", "--count", "2", "--seed", "5", "--out", "b"], d);
    assert_eq!(code(&gen), 0, "{gen:?}");
    assert!(d.join("b/inst-002.matrix").exists());

    for mode in ["2tsp-exact", "2tsp-lowmem", "2tsp-oracle", "ks"] {
        let out = tworoute(&["solve", mode, "b/inst-001.matrix", "--out", "sol.txt"], d);
        assert_eq!(code(&out), 0, "{mode}: {out:?}");
        let check = tworoute(&["verify", "b/inst-001.matrix", "sol.txt"], d);
        assert_eq!(code(&check), 0, "{mode}: {check:?}");
        assert!(stdout(&check).starts_with("feasible"));
    }
}

#[test]
fn two_vrp_round_trip_and_infeasible_solution() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&tworoute(&["gen", "--family", "random2vrp", "--n", "7", "--seed", "3", "--out", "v"], d)), 0);
    let out = tworoute(&["solve", "2vrp-exact", "v/inst-001.vrp", "--out", "sol.txt"], d);
    match code(&out) {
        0 => {
            assert_eq!(code(&tworoute(&["verify", "v/inst-001.vrp", "sol.txt"], d)), 0);
            // Dropping the last visit of route 2 leaves a customer unserved.
            let text = fs::read_to_string(d.join("sol.txt")).unwrap();
            let broken: Vec<String> = text
                .lines()
                .map(|l| {
                    if l.starts_with("route2") && l.split_whitespace().count() > 1 {
                        let mut parts: Vec<&str> = l.split_whitespace().collect();
                        parts.pop();
                        parts.join(" ")
                    } else if l.starts_with("route1") && l.split_whitespace().count() > 1 {
                        "route1".to_string()
                    } else {
                        l.to_string()
                    }
                })
                .collect();
            fs::write(d.join("bad.txt"), broken.join("\n")).unwrap();
            let check = tworoute(&["verify", "v/inst-001.vrp", "bad.txt"], d);
            assert_eq!(code(&check), 2, "{check:?}");
            assert!(stdout(&check).contains("infeasible"));
        }
        2 => {}
        other => panic!("unexpected exit {other}: {out:?}"),
    }
}

#[test]
fn infeasible_instance_exits_2() {
    let dir = tempdir().unwrap();
    let mut inst = random_2vrp_instance(&mut seeded_rng(1), 6);
    inst.capacity = [0.5, 0.5];
    fs::write(dir.path().join("tight.vrp"), inst.to_text()).unwrap();
    let out = tworoute(&["solve", "2vrp-exact", "tight.vrp"], dir.path());
    assert_eq!(code(&out), 2, "{out:?}");
}

#[test]
fn size_guard_exits_3_and_env_overrides() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let inst = random_2vrp_instance(&mut seeded_rng(8), 8);
    fs::write(d.join("i.vrp"), inst.to_text()).unwrap();
    let guarded = Command::new(env!("CARGO_BIN_EXE_tworoute"))
        .args(["solve", "2vrp-exact", "i.vrp"])
        .current_dir(d)
        .env("TWOROUTE_MAX_SUBSET_BITS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&guarded), 3, "{guarded:?}");
    assert!(matches!(code(&tworoute(&["solve", "2vrp-exact", "i.vrp"], d)), 0 | 2));
}

#[test]
fn missing_file_exits_4() {
    let dir = tempdir().unwrap();
    let out = tworoute(&["solve", "2tsp-exact", "nowhere.matrix"], dir.path());
    assert_eq!(code(&out), 4, "{out:?}");
    let garbage = dir.path().join("junk.vrp");
    fs::write(&garbage, "customers two\n").unwrap();
    assert_eq!(code(&tworoute(&["solve", "2vrp-exact", "junk.vrp"], dir.path())), 4);
}

#[test]
fn heuristic_requires_seed() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&tworoute(&["gen", "--n", "16", "--fixed", "4", "--seed", "2", "--out", "."], d)), 0);
    let unseeded = tworoute(&["solve", "heuristic", "inst-001.matrix"], d);
    assert_ne!(code(&unseeded), 0);
    assert!(String::from_utf8_lossy(&unseeded.stderr).contains("--seed"));

    let args = ["solve", "heuristic", "inst-001.matrix", "--seed", "4", "--repetitions", "2", "--log", "log.csv"];
    let first = tworoute(&args, d);
    assert_eq!(code(&first), 0, "{first:?}");
    let second = tworoute(&args, d);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(fs::read_to_string(d.join("log.csv")).unwrap().starts_with("instance_id,"));
}

#[test]
fn experiment_writes_csv() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let out = tworoute(
        &[
            "experiment", "--n", "14", "--fixed", "4", "--count", "2", "--seed", "9", "--repetitions", "3",
            "--checkpoints", "1,2,3", "--out", "exp",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{out:?}");
    for f in ["iterations.csv", "checkpoints.csv", "instances.csv"] {
        assert!(d.join("exp").join(f).exists(), "{f}");
    }
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("iteration")).count(), 3);
}
