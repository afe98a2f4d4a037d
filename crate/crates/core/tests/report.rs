use fibevo::engine::{ConfigRecord, EngineConfig, GenerationRecord, Mode, RunHeader, RunLog};
use fibevo::moo::{FrontPoint, HvReference};
use fibevo::search_space::CanonicalKey;
use fibevo::stats::compare_report;
use fibevo::Error;

fn fake(dataset: &str, front: &[(f64, usize)]) -> RunLog {
    let header = RunHeader {
        kind: "header".into(),
        mode: Mode::Adaptive,
        seed: 0,
        config: ConfigRecord::from(&EngineConfig::default()),
        dataset_id: dataset.into(),
        dataset_digest: String::new(),
    };
    let front: Vec<FrontPoint> = front
        .iter()
        .enumerate()
        .map(|(i, &(score, complexity))| FrontPoint { score, complexity, key: CanonicalKey::from_raw(format!("P{i}")) })
        .collect();
    let record = GenerationRecord {
        kind: "generation".into(),
        gen: 0,
        mu: 1,
        lambda: 1,
        mutation_rate: 1.0,
        crossover_rate: 0.0,
        sigma: 0.0,
        max_sigma: 0.0,
        best_score: front.first().map(|p| p.score),
        best_complexity: front.first().map(|p| p.complexity),
        evaluations_total: 0,
        cache_size: 0,
        cache_hits: 0,
        elapsed_ms: 0,
        offspring: 0,
        offspring_failed: 0,
        mutations: 0,
        crossovers: 0,
        stumps: 0,
        candidates: 0,
        survivors: 0,
        progress: None,
        front,
        initial_complexities: None,
    };
    RunLog { header, records: vec![record] }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn hand_worked_means() {
    let a = [fake("d1", &[(0.9, 3), (0.8, 1)]), fake("d1", &[(0.7, 2)]), fake("d2", &[(0.5, 1)])];
    let b = [fake("d1", &[(0.6, 1)]), fake("d1", &[(0.8, 2)]), fake("d2", &[(0.5, 1)])];
    let r = compare_report(&a, &b, HvReference::default(), "A", "B").unwrap();
    assert_eq!(r.hv_ref, "0,10");
    let d1 = &r.datasets[0];
    assert_eq!(d1.dataset_id, "d1");
    assert!(close(d1.a.score, 0.8) && close(d1.b.score, 0.7));
    assert!(close(d1.a.complexity.unwrap(), 2.5) && close(d1.b.complexity.unwrap(), 1.5));
    // (0.9-0.8)*7 + 0.8*9 = 7.9 and 0.7*8 = 5.6; 0.6*9 = 5.4 and 0.8*8 = 6.4
    assert!(close(d1.a.hypervolume, 6.75) && close(d1.b.hypervolume, 5.9));
    let d2 = &r.datasets[1];
    assert!(close(d2.a.hypervolume, 4.5) && close(d2.a.score, 0.5));

    assert_eq!(r.tests.len(), 3);
    let hv = r.tests.iter().find(|t| t.metric == "hypervolume").unwrap();
    assert_eq!(hv.test.n_effective, 1);
    assert!(close(hv.mean_difference, 0.425));
    assert!(!hv.significant);

    // averaged frontier of A on d1: best per complexity {1: 0.8, 2: 0.7, 3: 0.9}
    let f = &r.frontiers[0];
    let got: Vec<(usize, f64)> = f.a.iter().map(|p| (p.complexity, p.score)).collect();
    assert_eq!(got, vec![(1, 0.8), (3, 0.9)]);
}

#[test]
fn self_comparison_is_degenerate() {
    let a = [fake("x", &[(0.9, 2)]), fake("y", &[(0.4, 1), (0.6, 4)])];
    let r = compare_report(&a, &a, HvReference::default(), "A", "A").unwrap();
    assert_eq!(r.tests.len(), 3);
    assert!(r.tests.iter().all(|t| t.test.degenerate && t.test.p_value == 1.0 && !t.significant));
    assert!(r.to_text().contains("degenerate"));
}

#[test]
fn swapping_methods_negates_differences() {
    let a = [fake("x", &[(0.9, 2)]), fake("y", &[(0.4, 1)]), fake("z", &[(0.7, 3)])];
    let b = [fake("x", &[(0.8, 1)]), fake("y", &[(0.5, 2)]), fake("z", &[(0.6, 1)])];
    let ab = compare_report(&a, &b, HvReference::default(), "A", "B").unwrap();
    let ba = compare_report(&b, &a, HvReference::default(), "B", "A").unwrap();
    for (x, y) in ab.tests.iter().zip(&ba.tests) {
        assert_eq!(x.test.p_value, y.test.p_value);
        assert!(close(x.mean_difference, -y.mean_difference));
    }
}

#[test]
fn mismatched_datasets_name_the_difference() {
    let a = [fake("x", &[(0.9, 2)]), fake("only_a", &[(0.9, 2)])];
    let b = [fake("x", &[(0.9, 2)]), fake("only_b", &[(0.9, 2)])];
    match compare_report(&a, &b, HvReference::default(), "A", "B") {
        Err(Error::Config(m)) => assert!(m.contains("only_a") && m.contains("only_b"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn points_outside_reference_are_excluded_from_hypervolume() {
    let a = [fake("x", &[(0.9, 12), (0.5, 1)])];
    let r = compare_report(&a, &a, HvReference::default(), "A", "B").unwrap();
    assert_eq!(r.datasets[0].hv_excluded_points, 2);
    assert!(close(r.datasets[0].a.hypervolume, 4.5));
}
