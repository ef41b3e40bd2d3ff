use motivic::config::{CurveSelector, RunConfig};
use motivic::emit::midi::{expected_note_events, note_events, read_midi, write_midi};
use motivic::emit::svg::{strip_positions, write_svg_strip};
use motivic::suite::{analyze, scores_for};

fn c1(out: &std::path::Path) -> RunConfig {
    RunConfig {
        curve: CurveSelector::Named("C1".into()),
        primes: vec![7, 11, 13, 17, 19],
        out: out.to_path_buf(),
        ..RunConfig::default()
    }
}

#[test]
fn c1_performance_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = c1(dir.path());
    let analysis = analyze(&cfg).unwrap();
    assert!(analysis.ok());
    let plan = analysis.plan(0, &scores_for(&cfg).unwrap(), &cfg);
    assert_eq!(plan.segments.len(), 5);
    let bytes = write_midi(&plan).unwrap();
    let events = note_events(&read_midi(&bytes).unwrap());
    assert_eq!(events, expected_note_events(&plan));
    assert_eq!(events.len(), 5 * 10 * cfg.n_periods * 2);
}

#[test]
fn strip_rows_follow_primes() {
    let dir = tempfile::tempdir().unwrap();
    let analysis = analyze(&c1(dir.path())).unwrap();
    let patterns: Vec<_> = analysis.results[0].values().map(|r| r.rhythm.clone()).collect();
    let svg = write_svg_strip(&patterns);
    for p in [7, 11, 13, 17, 19] {
        assert!(svg.contains(&format!("data-p=\"{p}\"")), "{p}");
    }
    for rp in &patterns {
        assert!(strip_positions(rp).iter().all(|x| (0.0..=1.0).contains(x)));
    }
}
