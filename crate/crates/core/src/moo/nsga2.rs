use super::dominates;
use crate::evaluation::FitnessVector;

/// Fast non-dominated sort. Each returned front lists candidate indices in
/// ascending order.
pub fn non_dominated_sort(points: &[FitnessVector]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&points[i], &points[j]) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates(&points[j], &points[i]) {
                dominated_by_me[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by_me[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of each member of `front` (same order). Per objective
/// the members are stably sorted ascending; the two ends get infinity and
/// interior members the normalised gap between their neighbours. An
/// objective with zero range contributes nothing.
pub fn crowding_distance(points: &[FitnessVector], front: &[usize]) -> Vec<f64> {
    let m = front.len();
    let mut distance = vec![0.0; m];
    if m == 0 {
        return distance;
    }
    let objectives: [&dyn Fn(usize) -> f64; 2] =
        [&|i| points[i].score, &|i| points[i].complexity as f64];
    for value in objectives {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| value(front[a]).total_cmp(&value(front[b])));
        let lo = value(front[order[0]]);
        let hi = value(front[order[m - 1]]);
        distance[order[0]] = f64::INFINITY;
        distance[order[m - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..m.saturating_sub(1) {
            let gap = value(front[order[w + 1]]) - value(front[order[w - 1]]);
            distance[order[w]] += gap / range;
        }
    }
    distance
}

/// NSGA-II survival: whole fronts while they fit, then the splitting front
/// truncated by descending crowding distance (ties keep candidate order).
/// Returns `min(target, len)` indices in ascending order.
pub fn nsga2_select(points: &[FitnessVector], target: usize) -> Vec<usize> {
    if points.len() <= target {
        return (0..points.len()).collect();
    }
    let mut selected = Vec::with_capacity(target);
    for front in non_dominated_sort(points) {
        let room = target - selected.len();
        if room == 0 {
            break;
        }
        if front.len() <= room {
            selected.extend_from_slice(&front);
            continue;
        }
        let distance = crowding_distance(points, &front);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| distance[b].total_cmp(&distance[a]));
        selected.extend(order[..room].iter().map(|&w| front[w]));
    }
    selected.sort_unstable();
    selected
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(s: f64, c: usize) -> FitnessVector {
        FitnessVector::new(s, c)
    }

    #[test]
    fn small_population_is_kept_whole() {
        let p = [fv(0.1, 5), fv(0.2, 4)];
        assert_eq!(nsga2_select(&p, 2), vec![0, 1]);
        assert_eq!(nsga2_select(&p, 7), vec![0, 1]);
    }

    #[test]
    fn five_point_example() {
        let p = [fv(0.9, 1), fv(0.8, 1), fv(0.9, 2), fv(0.7, 3), fv(0.5, 1)];
        let fronts = non_dominated_sort(&p);
        assert_eq!(fronts[0], vec![0]);
        assert_eq!(fronts[1], vec![1, 2]);
        assert_eq!(nsga2_select(&p, 3), vec![0, 1, 2]);
    }

    #[test]
    fn crowding_prefers_extremes_then_isolated_points() {
        // One front of five points spread along the trade-off.
        let p = [fv(0.5, 1), fv(0.6, 2), fv(0.65, 3), fv(0.9, 4), fv(0.95, 9)];
        let d = crowding_distance(&p, &[0, 1, 2, 3, 4]);
        assert!(d[0].is_infinite() && d[4].is_infinite());
        // interior: score gaps /0.45 + complexity gaps /8
        assert!((d[1] - (0.15 / 0.45 + 2.0 / 8.0)).abs() < 1e-12);
        assert!((d[2] - (0.3 / 0.45 + 2.0 / 8.0)).abs() < 1e-12);
        assert!((d[3] - (0.3 / 0.45 + 6.0 / 8.0)).abs() < 1e-12);
        assert_eq!(nsga2_select(&p, 3), vec![0, 3, 4]);
    }
}
