use std::fs;
use std::path::Path;
use std::process::Command;

use partlab::harness::{self, Criterion, ExperimentSpec, RunResult};
use partlab::lb::{self, LbEvent};
use partlab::nbody::{make_scenario, Scenario, SimConfig};
use partlab::partition::{partition, PartitionParams, PartitionerKind};

fn small(scenario: Scenario, kind: PartitionerKind, criterion: Criterion) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(scenario, kind);
    spec.sim.n = 600;
    spec.sim.steps = 500;
    spec.parts = 8;
    spec.criterion = criterion;
    spec
}

fn rows(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let body = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, body)
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(harness::SUMMARY_JSON)).unwrap()).unwrap()
}

#[test]
fn effort_file_recomputes_from_trace_files() {
    let spec = small(
        Scenario::Contraction,
        PartitionerKind::Rib,
        Criterion::Automatic,
    );
    let result = harness::run(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    harness::emit_traces(&result, dir.path()).unwrap();

    let (header, iters) = rows(&dir.path().join(harness::ITERATIONS_CSV));
    assert_eq!(header, "iteration,max_work,mean_work,u,cumulative_u");
    assert_eq!(iters.len(), spec.sim.steps);
    let u: Vec<f64> = iters.iter().map(|r| r[3].parse().unwrap()).collect();
    for (i, r) in iters.iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), i);
        let (max, mean): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert_eq!(max - mean, u[i]);
    }

    let (header, evs) = rows(&dir.path().join(harness::EVENTS_CSV));
    assert_eq!(header, "tau,cost,migrated,algorithm");
    let initial_cost = summary(dir.path())["initial_cost"].as_f64().unwrap();
    let mut events = vec![LbEvent {
        tau: 0,
        cost: initial_cost,
        algorithm: PartitionerKind::Rib,
        migrated: 0,
    }];
    for r in &evs {
        assert_eq!(r[3], "rib");
        events.push(LbEvent {
            tau: r[0].parse().unwrap(),
            cost: r[1].parse().unwrap(),
            algorithm: PartitionerKind::Rib,
            migrated: r[2].parse().unwrap(),
        });
    }
    let series = lb::effort_series(PartitionerKind::Rib, &u, &events).unwrap();

    let (header, eff) = rows(&dir.path().join(harness::EFFORT_CSV));
    assert_eq!(header, "tau_start,tau_end,effort");
    assert_eq!(eff.len(), series.intervals.len());
    let mut expect_start = 0;
    for (r, iv) in eff.iter().zip(&series.intervals) {
        let (s, e): (usize, usize) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(s, expect_start);
        assert!(e > s);
        assert_eq!((s, e), (iv.tau_start, iv.tau_end));
        assert_eq!(r[2].parse::<f64>().unwrap(), iv.effort);
        expect_start = e;
    }
    assert_eq!(expect_start, spec.sim.steps);

    let modeled = summary(dir.path())["modeled_time"].as_f64().unwrap();
    assert_eq!(modeled, result.modeled_time);
}

#[test]
fn no_events_gives_header_only_file() {
    let spec = small(
        Scenario::ContractionToy,
        PartitionerKind::Hsfc,
        Criterion::Periodic(10_000),
    );
    let result = harness::run(&spec).unwrap();
    assert!(result.events.is_empty());
    let dir = tempfile::tempdir().unwrap();
    harness::emit_traces(&result, dir.path()).unwrap();
    let (_, evs) = rows(&dir.path().join(harness::EVENTS_CSV));
    assert!(evs.is_empty());
    let (_, eff) = rows(&dir.path().join(harness::EFFORT_CSV));
    assert_eq!(eff.len(), 1);
    assert_eq!(eff[0][..2], ["0".to_string(), spec.sim.steps.to_string()]);
}

#[test]
fn periodic_call_count() {
    let mut spec = small(
        Scenario::ContractionToy,
        PartitionerKind::NoRcb,
        Criterion::Periodic(600),
    );
    spec.sim.n = 300;
    spec.sim.steps = 5000;
    let result = harness::run(&spec).unwrap();
    assert_eq!(result.lb_call_count, 4999 / 600);
    let taus: Vec<usize> = result.events.iter().map(|e| e.tau).collect();
    assert_eq!(taus, (1..=8).map(|i| 600 * i).collect::<Vec<_>>());
}

fn check_automatic_events(result: &RunResult) {
    let u = result.u();
    let mut last = result.initial;
    let mut ev = result.events.iter().peekable();
    for t in 1..u.len() {
        let fired = lb::automatic_criterion(&u[last.tau + 1..t], last.cost);
        match ev.peek() {
            Some(e) if e.tau == t => {
                assert!(fired, "event at {t} without the criterion holding");
                last = **e;
                ev.next();
            }
            _ => assert!(!fired, "criterion held at {t} but no event"),
        }
    }
    assert!(ev.next().is_none());
}

#[test]
fn automatic_events_follow_the_criterion() {
    for kind in PartitionerKind::ALL {
        let mut spec = small(Scenario::Gravity, kind, Criterion::Automatic);
        spec.cost_model.c_part = 0.05;
        spec.cost_model.c_mig = 0.5;
        let result = harness::run(&spec).unwrap();
        assert!(!result.events.is_empty(), "{kind} never balanced");
        check_automatic_events(&result);
        for e in &result.events {
            assert_eq!(e.cost, lb::lb_cost(spec.sim.n, e.migrated, spec.cost_model));
            assert!(e.migrated <= spec.sim.n);
        }
    }
}

#[test]
fn effort_and_modeled_time_use_the_initial_partition() {
    let spec = small(
        Scenario::RotationContraction,
        PartitionerKind::Rcb,
        Criterion::Periodic(100),
    );
    let result = harness::run(&spec).unwrap();
    assert_eq!(result.initial.tau, 0);
    assert_eq!(
        result.initial.cost,
        spec.cost_model.c_part * spec.sim.n as f64
    );
    let all = result.all_events();
    let expect = lb::modeled_parallel_time(&result.trace, &all, spec.sim.steps).unwrap();
    assert_eq!(result.modeled_time, expect);
    assert_eq!(result.effort.intervals.len(), all.len());
}

#[test]
fn every_particle_has_exactly_one_owner() {
    for scenario in [
        Scenario::Contraction,
        Scenario::Gravity,
        Scenario::RotationContraction,
    ] {
        let cfg = SimConfig {
            n: 3000,
            ..SimConfig::for_scenario(scenario)
        };
        let (particles, _) = make_scenario(&cfg).unwrap();
        let params = PartitionParams {
            domain: cfg.domain,
            ..PartitionParams::default()
        };
        for kind in PartitionerKind::ALL {
            for parts in [2, 8, 32] {
                let part = partition(kind, &particles, parts, &params).unwrap();
                let counts = part.assignment.counts();
                assert_eq!(counts.len(), parts);
                assert_eq!(counts.iter().sum::<usize>(), particles.len());
                for (i, p) in particles.iter().enumerate() {
                    assert_eq!(
                        part.tessellation.locate(p.position, p.id),
                        part.assignment.rank_of(i),
                        "{kind} P={parts} particle {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn seeds_change_the_run_and_repeat_exactly() {
    let spec = small(
        Scenario::Gravity,
        PartitionerKind::Hsfc,
        Criterion::Periodic(50),
    );
    let a = harness::run(&spec).unwrap();
    let b = harness::run(&spec).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.events, b.events);
    let mut other = spec.clone();
    other.sim.seed += 1;
    let c = harness::run(&other).unwrap();
    assert_ne!(a.trace, c.trace);
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("exp.toml");
    fs::write(&path, body).unwrap();
    path
}

const TINY: &str = "scenario = \"contraction_toy\"\nn = 400\nsteps = 120\nparts = 4\ncriterion = \"periodic:50\"\nseed = 3\n";

#[test]
fn cli_run_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out = dir.path().join("run");
    let status = Command::new(env!("CARGO_BIN_EXE_partlab"))
        .args(["run", "--partitioner", "rib", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    for f in [
        harness::ITERATIONS_CSV,
        harness::EVENTS_CSV,
        harness::EFFORT_CSV,
        harness::SUMMARY_JSON,
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let s = summary(&out);
    assert_eq!(s["algorithm"], "rib");
    assert_eq!(s["lb_call_count"], 2);
    assert_eq!(s["seed"], 3);
}

#[test]
fn cli_compare_writes_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let out = dir.path().join("cmp");
    let status = Command::new(env!("CARGO_BIN_EXE_partlab"))
        .args(["compare", "--partitioners", "norcb,hsfc", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    assert!(out.join("norcb").join(harness::ITERATIONS_CSV).is_file());
    assert!(out.join("hsfc").join(harness::ITERATIONS_CSV).is_file());
    let (header, ranking) = rows(&out.join("ranking.csv"));
    assert_eq!(header, "iteration,rank_1,rank_2");
    assert!(!ranking.is_empty());
    let cmp: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("comparison.json")).unwrap()).unwrap();
    assert!(["norcb", "hsfc"].contains(&cmp["winner"].as_str().unwrap()));
}

#[test]
fn cli_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_partlab");

    let missing = Command::new(bin)
        .args(["run", "--config", "/nonexistent/exp.toml"])
        .output()
        .unwrap();
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    let cfg = write_config(dir.path(), &format!("{TINY}bogus_key = 1\n"));
    let unknown = Command::new(bin)
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!unknown.status.success());

    let cfg = write_config(dir.path(), TINY.replace("parts = 4", "parts = 6").as_str());
    let odd = Command::new(bin)
        .args(["run", "--partitioner", "rcb", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!odd.status.success());
    assert!(String::from_utf8_lossy(&odd.stderr).contains("power-of-two"));

    let bad_kind = Command::new(bin)
        .args(["compare", "--partitioners", "norcb,kd", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!bad_kind.status.success());
}
