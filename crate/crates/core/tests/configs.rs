use std::path::Path;

use blockweight::classes::{planar, ClassFile};
use blockweight::phase::critical_u;
use blockweight::stats::{run_config, RunConfig, WeightSpec};

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

#[test]
fn planar_file_matches_builtin() {
    let file = ClassFile::load(&configs().join("planar.toml")).unwrap();
    let builtin = planar();
    for k in 1..=6 {
        assert_eq!(file.exact_count(k), builtin.exact_count(k), "k = {k}");
    }
    assert!((critical_u(&file).unwrap() - 24.837).abs() < 1e-9);
    assert!((file.rho_b() - builtin.rho_b()).abs() < 1e-15);
}

#[test]
fn run_configs_parse() {
    let cfg = RunConfig::load(&configs().join("polylog-phases.toml")).unwrap();
    assert_eq!(cfg.n, vec![1000, 10000, 100000]);
    assert_eq!(cfg.u[1], WeightSpec::Named("critical".into()));
    RunConfig::load(&configs().join("cacti-small.toml")).unwrap();
}

#[test]
fn small_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::load(&configs().join("cacti-small.toml")).unwrap();
    cfg.replicates = 5;
    let (records, report) = run_config(&cfg, Some(configs())).unwrap();
    assert_eq!(records.len(), 2 * 3 * 5);
    let csv = dir.path().join("r.csv");
    blockweight::stats::write_records_csv(&records, std::fs::File::create(&csv).unwrap()).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 31);
    assert_eq!(report.runs.len(), 2);
    assert!(serde_json::to_string(&report).unwrap().contains("\"class\":\"cacti\""));
}
