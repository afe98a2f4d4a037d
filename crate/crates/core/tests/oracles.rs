//! Checks against independent reference implementations and frozen values
//! from external tools (see scripts/).

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fibevo::data::{generate_synthetic, SyntheticKind, SyntheticSpec};
use fibevo::evaluation::{Evaluator, FitnessVector, Metric};
use fibevo::moo::{hypervolume_2d, nsga2_select, HvReference};
use fibevo::search_space::SearchSpace;
use fibevo::stats::{average_ranks, exact_p, signed_rank_test};

// scripts/oracle_cv.py: scikit-learn DecisionTreeClassifier(max_depth=10)
// on the same data and the same fold assignment (k = 5, seed 42).
const SKLEARN_TREE_BLOBS: f64 = 0.998010;
const SKLEARN_TREE_SPIRALS: f64 = 0.697314;

fn tree_cv(spec: SyntheticSpec) -> f64 {
    let data = generate_synthetic(&spec).unwrap();
    let space = SearchSpace::default();
    let ev = Evaluator::new(&space, &data, 5, Metric::F1Macro, Duration::from_secs(60), 42).unwrap();
    let tree = space.parse("DecisionTree{max_depth=10}").unwrap();
    ev.evaluate(&tree).fitness().unwrap().score
}

#[test]
fn cross_validated_tree_matches_sklearn() {
    let blobs = tree_cv(SyntheticSpec {
        kind: SyntheticKind::Blobs,
        instances: 500,
        features: 5,
        classes: 3,
        noise: 1.0,
        seed: 42,
    });
    assert!((blobs - SKLEARN_TREE_BLOBS).abs() <= 0.05, "{blobs}");
    assert!(blobs >= 0.95);
    let spirals = tree_cv(SyntheticSpec {
        kind: SyntheticKind::Spirals,
        instances: 300,
        features: 2,
        classes: 3,
        noise: 0.05,
        seed: 7,
    });
    assert!((spirals - SKLEARN_TREE_SPIRALS).abs() <= 0.05, "{spirals}");
}

fn brute_dominates(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 >= b.0 && a.1 <= b.1 && a != b
}

/// Peels non-dominated layers one at a time, then truncates the splitting
/// layer by crowding distance.
fn brute_nsga(points: &[(f64, usize)], target: usize) -> Vec<usize> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut chosen = Vec::new();
    while chosen.len() < target && !left.is_empty() {
        let layer: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| brute_dominates(points[j], points[i])))
            .collect();
        left.retain(|i| !layer.contains(i));
        if chosen.len() + layer.len() <= target {
            chosen.extend(&layer);
            continue;
        }
        let m = layer.len();
        let mut dist = vec![0.0f64; m];
        for obj in 0..2 {
            let v = |w: usize| if obj == 0 { points[layer[w]].0 } else { points[layer[w]].1 as f64 };
            let mut idx: Vec<usize> = (0..m).collect();
            // insertion sort: stable, ascending
            for a in 1..m {
                let mut b = a;
                while b > 0 && v(idx[b - 1]) > v(idx[b]) {
                    idx.swap(b - 1, b);
                    b -= 1;
                }
            }
            dist[idx[0]] = f64::INFINITY;
            dist[idx[m - 1]] = f64::INFINITY;
            let range = v(idx[m - 1]) - v(idx[0]);
            if range > 0.0 {
                for w in 1..m - 1 {
                    dist[idx[w]] += (v(idx[w + 1]) - v(idx[w - 1])) / range;
                }
            }
        }
        let mut by_crowding: Vec<usize> = (0..m).collect();
        for a in 1..m {
            let mut b = a;
            while b > 0 && dist[by_crowding[b - 1]] < dist[by_crowding[b]] {
                by_crowding.swap(b - 1, b);
                b -= 1;
            }
        }
        let room = target - chosen.len();
        chosen.extend(by_crowding[..room].iter().map(|&w| layer[w]));
    }
    chosen.sort_unstable();
    chosen
}

#[test]
fn nsga2_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.gen_range(1..=50);
        let pts: Vec<(f64, usize)> = (0..n)
            .map(|_| {
                // coarse scores make ties common
                let s = if rng.gen_bool(0.3) { rng.gen_range(0..5) as f64 / 4.0 } else { rng.gen() };
                (s, rng.gen_range(1..=9))
            })
            .collect();
        let fv: Vec<FitnessVector> = pts.iter().map(|&(s, c)| FitnessVector::new(s, c)).collect();
        let target = rng.gen_range(1..=n);
        assert_eq!(nsga2_select(&fv, target), brute_nsga(&pts, target), "{pts:?} target {target}");
    }
}

/// Union area of the boxes [ref.score, s] x [c, ref.complexity] by
/// inclusion-exclusion over all subsets.
fn inclusion_exclusion(front: &[(f64, usize)], r: HvReference) -> f64 {
    let n = front.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let (mut s, mut c) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, p) in front.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s = s.min(p.0);
                c = c.max(p.1 as f64);
            }
        }
        let area = (s - r.score) * (r.complexity - c);
        total += if mask.count_ones() % 2 == 1 { area } else { -area };
    }
    total
}

#[test]
fn hypervolume_matches_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let r = HvReference::default();
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let pts: Vec<(f64, usize)> = (0..n).map(|_| (rng.gen_range(0.01..1.0), rng.gen_range(1..=9))).collect();
        let fv: Vec<FitnessVector> = pts.iter().map(|&(s, c)| FitnessVector::new(s, c)).collect();
        let hv = hypervolume_2d(&fv, r).unwrap();
        assert!((hv - inclusion_exclusion(&pts, r)).abs() < 1e-9);
    }
}

/// Two-sided p by listing all 2^n sign assignments.
fn enumerate_p(d: &[f64]) -> f64 {
    let d: Vec<f64> = d.iter().copied().filter(|x| *x != 0.0).collect();
    let ranks = average_ranks(&d.iter().map(|x| x.abs()).collect::<Vec<_>>());
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).map(|(_, r)| r).sum();
    let total: f64 = ranks.iter().sum();
    let w = w_plus.min(total - w_plus);
    let n = d.len();
    let hits = (0u32..1 << n)
        .filter(|mask| {
            let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
            s <= w + 1e-9
        })
        .count();
    (2.0 * hits as f64 / (1u64 << n) as f64).min(1.0)
}

#[test]
fn exact_wilcoxon_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(1..=14);
        // integer differences produce ties and zeros
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-6i32..=6) as f64).collect();
        let r = signed_rank_test(&d);
        if r.degenerate {
            assert!(d.iter().all(|x| *x == 0.0));
            continue;
        }
        assert!(r.exact);
        assert!((r.p_value - enumerate_p(&d)).abs() < 1e-12, "{d:?}");
    }
}

// scipy.stats.wilcoxon(d, method="approx", correction=True), and
// method="exact" for the tie-free vector (scipy's exact null ignores ties).
#[test]
fn wilcoxon_matches_scipy() {
    let d: Vec<f64> = [
        1, 2, 2, 3, -3, 4, 4, 4, -5, 6, 7, 7, -8, 9, 10, 11, 11, 12, -13, 14, 15, 16, 16, 17, -18, 0, 0,
    ]
    .iter()
    .map(|&x| x as f64)
    .collect();
    let r = signed_rank_test(&d);
    assert!(!r.exact);
    assert_eq!(r.statistic, 70.5);
    assert!((r.p_value - 0.013778542796068157).abs() < 1e-9);

    let d: Vec<f64> = (0..22)
        .map(|i| {
            let v = i as f64 + 0.5;
            if [1, 4, 7, 11, 16, 21].contains(&i) {
                -v
            } else {
                v
            }
        })
        .collect();
    let r = signed_rank_test(&d);
    assert_eq!(r.statistic, 66.0);
    assert!((r.p_value - 0.051422260832520626).abs() < 1e-9);

    let r = signed_rank_test(&[1.0, 2.0, -3.0, 4.0, 5.0, -6.0, 7.0, 8.0, 9.0, 10.0]);
    assert_eq!(r.statistic, 9.0);
    assert!((r.p_value - 0.064453125).abs() < 1e-12);
    assert_eq!(exact_p(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.0), 0.0625);
}
