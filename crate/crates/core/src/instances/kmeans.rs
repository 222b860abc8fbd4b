//! Lloyd's k-means with k-means++ seeding.

use rand::Rng;

use crate::error::{Error, Result};

/// Iteration cap for Lloyd's algorithm.
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    /// Cluster label of every point, in `0..k`; every label is used.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances to the assigned centroid after each iteration.
    pub distortion: Vec<f64>,
    pub iterations: usize,
}

impl KMeans {
    pub fn final_distortion(&self) -> f64 {
        self.distortion.last().copied().unwrap_or(0.0)
    }

    /// Point indices grouped by label.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let k = self.centroids.len();
        let mut groups = vec![Vec::new(); k];
        for (i, &c) in self.assignment.iter().enumerate() {
            groups[c].push(i);
        }
        groups
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_plus_plus<R: Rng + ?Sized>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points[first].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[first])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // Remaining points coincide with existing centroids.
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen[next] = true;
        centroids.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, &points[next]));
        }
    }
    centroids
}

/// Partitions `points` into `k` non-empty groups minimizing squared
/// Euclidean distortion (locally). Stops when assignments are stable or
/// after [`MAX_ITERATIONS`] iterations.
pub fn kmeans<R: Rng + ?Sized>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Result<KMeans> {
    if k == 0 {
        return Err(Error::domain("k-means needs k >= 1"));
    }
    if k > points.len() {
        return Err(Error::domain(format!(
            "k = {k} exceeds the {} points",
            points.len()
        )));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::domain("points have mixed dimensions"));
    }
    let mut centroids = seed_plus_plus(points, k, rng);
    let mut assignment = vec![usize::MAX; points.len()];
    let mut distortion = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut changed = false;
        let mut total = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            total += d;
            if assignment[i] != c {
                assignment[i] = c;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        // An empty group takes over the point farthest from its own centroid.
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let (far, _) = points
                .iter()
                .enumerate()
                .filter(|&(i, _)| counts[assignment[i]] > 1)
                .map(|(i, p)| (i, sq_dist(p, &centroids[assignment[i]])))
                .fold(
                    (usize::MAX, -1.0),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
            counts[assignment[far]] -= 1;
            assignment[far] = c;
            counts[c] = 1;
            centroids[c] = points[far].clone();
            changed = true;
        }
        let after: f64 = points
            .iter()
            .zip(&assignment)
            .map(|(p, &c)| sq_dist(p, &centroids[c]))
            .sum();
        distortion.push(after.min(total));
        if !changed {
            break;
        }
    }
    // Final re-assignment keeps labels consistent with the returned centroids.
    Ok(KMeans {
        assignment,
        centroids,
        distortion,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStreams;

    fn pts(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    /// Best 2-partition by exhaustive search over all labelings.
    fn brute_force_two(points: &[Vec<f64>]) -> (f64, Vec<usize>) {
        let n = points.len();
        let mut best = (f64::INFINITY, Vec::new());
        for mask in 1..(1u32 << n) - 1 {
            let labels: Vec<usize> = (0..n).map(|i| ((mask >> i) & 1) as usize).collect();
            let mut cost = 0.0;
            for g in 0..2 {
                let members: Vec<&Vec<f64>> = points
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &l)| l == g)
                    .map(|(p, _)| p)
                    .collect();
                let mean = members.iter().map(|p| p[0]).sum::<f64>() / members.len() as f64;
                cost += members.iter().map(|p| (p[0] - mean).powi(2)).sum::<f64>();
            }
            if cost < best.0 {
                best = (cost, labels);
            }
        }
        best
    }

    #[test]
    fn two_obvious_groups() {
        let points = pts(&[0.0, 0.01, 0.99, 1.0]);
        let (oracle_cost, oracle_labels) = brute_force_two(&points);
        for seed in 0..20 {
            let km = kmeans(&points, 2, &mut SeedStreams::new(seed).instance()).unwrap();
            assert_eq!(km.assignment[0], km.assignment[1]);
            assert_eq!(km.assignment[2], km.assignment[3]);
            assert_ne!(km.assignment[0], km.assignment[2]);
            assert_eq!(oracle_labels[0], oracle_labels[1]);
            assert!((km.final_distortion() - oracle_cost).abs() < 1e-12);
        }
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let points = pts(&[0.3, 0.1, 0.7, 0.5, 0.9]);
        let km = kmeans(&points, 5, &mut SeedStreams::new(1).instance()).unwrap();
        let mut labels = km.assignment.clone();
        labels.sort_unstable();
        assert_eq!(labels, vec![0, 1, 2, 3, 4]);
        assert_eq!(km.final_distortion(), 0.0);
    }

    #[test]
    fn distortion_never_increases_and_groups_non_empty() {
        let mut rng = SeedStreams::new(2).instance();
        let points: Vec<Vec<f64>> = (0..300)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let km = kmeans(&points, 12, &mut rng).unwrap();
        for w in km.distortion.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{w:?}");
        }
        assert!(km.groups().iter().all(|g| !g.is_empty()));
        assert!(km.iterations <= MAX_ITERATIONS);
    }

    #[test]
    fn duplicates_and_errors() {
        let points = pts(&[0.5, 0.5, 0.5, 0.2]);
        let km = kmeans(&points, 3, &mut SeedStreams::new(3).instance()).unwrap();
        assert!(km.groups().iter().all(|g| !g.is_empty()));
        assert!(kmeans(&points, 5, &mut SeedStreams::new(3).instance()).is_err());
        assert!(kmeans(&points, 0, &mut SeedStreams::new(3).instance()).is_err());
    }
}
