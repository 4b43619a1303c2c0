//! Dominance, nondominated filtering and sorting, crowding distance and
//! objective normalization.
//!
//! Everything here works in the maximization sense: `u` dominates `v` when
//! `u >= v` componentwise and `u != v`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::{Error, Result};

/// `true` iff `u` dominates `v` under maximization.
pub fn dominates(u: &[f64], v: &[f64]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(dominates_unchecked(u, v))
}

/// [`dominates`] without the length check.
#[inline]
pub fn dominates_unchecked(u: &[f64], v: &[f64]) -> bool {
    debug_assert_eq!(u.len(), v.len());
    let mut strictly = false;
    for (a, b) in u.iter().zip(v) {
        if a < b {
            return false;
        }
        if a > b {
            strictly = true;
        }
    }
    strictly
}

/// Checks that `points` is nonempty, rectangular and finite; returns `k`.
pub(crate) fn validate_points<P: AsRef<[f64]>>(points: &[P]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let k = first.as_ref().len();
    if k == 0 {
        return Err(Error::Empty("objective vector"));
    }
    for p in points {
        let p = p.as_ref();
        if p.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("objective vector"));
        }
    }
    Ok(k)
}

/// A set of mutually nondominated objective vectors (maximization).
///
/// Exact duplicates may appear; [`FrontApproximation::dedup`] removes them.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontApproximation {
    points: Vec<Vec<f64>>,
}

impl FrontApproximation {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> usize {
        self.points[0].len()
    }

    /// Removes exact objective-space duplicates, keeping first occurrences.
    pub fn dedup(mut self) -> Self {
        let mut kept: Vec<Vec<f64>> = Vec::with_capacity(self.points.len());
        for p in self.points.drain(..) {
            if !kept.contains(&p) {
                kept.push(p);
            }
        }
        FrontApproximation { points: kept }
    }

    /// Componentwise best (maximum) over the front.
    pub fn ideal(&self) -> Vec<f64> {
        fold_columns(&self.points, f64::max)
    }

    /// Componentwise worst (minimum) over the front.
    pub fn nadir(&self) -> Vec<f64> {
        fold_columns(&self.points, f64::min)
    }
}

pub(crate) fn fold_columns<P: AsRef<[f64]>>(points: &[P], f: fn(f64, f64) -> f64) -> Vec<f64> {
    let mut acc = points[0].as_ref().to_vec();
    for p in &points[1..] {
        for (a, &x) in acc.iter_mut().zip(p.as_ref()) {
            *a = f(*a, x);
        }
    }
    acc
}

/// Indices of the points not dominated by any other point, in input order.
pub fn nondominated_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .any(|q| dominates_unchecked(q.as_ref(), points[i].as_ref()))
        })
        .collect()
}

/// The nondominated subset of `points`. Duplicates of survivors are kept.
pub fn nondominated_filter<P: AsRef<[f64]>>(points: &[P]) -> Result<FrontApproximation> {
    validate_points(points)?;
    let points = nondominated_indices(points)
        .into_iter()
        .map(|i| points[i].as_ref().to_vec())
        .collect();
    Ok(FrontApproximation { points })
}

/// Result of [`fast_nondominated_sort`]. Points are referenced by index into
/// the sorted input.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPopulation {
    /// Front index of each point, 0 for the nondominated front.
    pub rank: Vec<usize>,
    /// Crowding distance of each point within its own front.
    pub crowding: Vec<f64>,
    /// Members of each front in ascending input order.
    pub fronts: Vec<Vec<usize>>,
}

/// Deb's fast nondominated sort, followed by per-front crowding distances.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Result<RankedPopulation> {
    validate_points(points)?;
    let fronts = sort_fronts(points);
    let mut rank = vec![0; points.len()];
    let mut crowding = vec![0.0; points.len()];
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<&[f64]> = front.iter().map(|&i| points[i].as_ref()).collect();
        let distances = crowding_distance(&members);
        for (&i, d) in front.iter().zip(distances) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    Ok(RankedPopulation {
        rank,
        crowding,
        fronts,
    })
}

/// Front decomposition without validation or crowding.
pub(crate) fn sort_fronts<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by_me: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (points[i].as_ref(), points[j].as_ref());
            if dominates_unchecked(p, q) {
                dominated_by_me[i].push(j);
                domination_count[j] += 1;
            } else if dominates_unchecked(q, p) {
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
        fronts.push(core::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance of each point of a front.
///
/// Boundary points of every objective get `+inf`; interior points sum the
/// normalized gap `(next - prev) / (max - min)` over objectives, skipping
/// objectives whose range is zero. The distance is computed over the distinct
/// points; when a point occurs several times, every copy of an interior point
/// gets 0 and only the first copy of a boundary point keeps `+inf`.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    // Map every point to its first exact duplicate.
    let mut representative: Vec<usize> = (0..n).collect();
    let mut unique: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        match unique
            .iter()
            .find(|&&u| front[u].as_ref() == front[i].as_ref())
        {
            Some(&u) => representative[i] = u,
            None => unique.push(i),
        }
    }

    let mut distance = vec![0.0; n];
    if unique.len() <= 2 {
        for &u in &unique {
            distance[u] = f64::INFINITY;
        }
    } else {
        let k = front[0].as_ref().len();
        let mut order = unique.clone();
        for m in 0..k {
            let value = |i: usize| front[i].as_ref()[m];
            order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
            let (lo, hi) = (value(order[0]), value(order[order.len() - 1]));
            distance[order[0]] = f64::INFINITY;
            distance[order[order.len() - 1]] = f64::INFINITY;
            let range = hi - lo;
            if range <= 0.0 {
                continue;
            }
            for w in order.windows(3) {
                distance[w[1]] += (value(w[2]) - value(w[0])) / range;
            }
        }
    }

    let mut copies = vec![0usize; n];
    for &r in &representative {
        copies[r] += 1;
    }
    for i in 0..n {
        let r = representative[i];
        if copies[r] > 1 && (r != i || distance[r].is_finite()) {
            distance[i] = 0.0;
        }
    }
    distance
}

/// Maps maximized objective vectors into the minimization unit box:
/// `(ideal - y) / (ideal - nadir)` per coordinate, so `ideal -> 0` and
/// `nadir -> 1`. Points outside the ideal–nadir box map outside `[0, 1]`.
pub fn normalize<P: AsRef<[f64]>>(points: &[P], ideal: &[f64], nadir: &[f64]) -> Result<Vec<Vec<f64>>> {
    if ideal.len() != nadir.len() {
        return Err(Error::DimensionMismatch {
            expected: ideal.len(),
            found: nadir.len(),
        });
    }
    if let Some(j) = (0..ideal.len()).find(|&j| ideal[j] == nadir[j]) {
        return Err(invalid(
            "normalization bounds",
            alloc::format!("ideal equals nadir in objective {j}"),
        ));
    }
    points
        .iter()
        .map(|p| {
            let p = p.as_ref();
            if p.len() != ideal.len() {
                return Err(Error::DimensionMismatch {
                    expected: ideal.len(),
                    found: p.len(),
                });
            }
            Ok(p.iter()
                .zip(ideal.iter().zip(nadir))
                .map(|(&y, (&best, &worst))| (best - y) / (best - worst))
                .collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomSource, Stream};
    use proptest::prelude::*;

    fn random_points(rng: &mut Stream, n: usize, k: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| (0..k).map(|_| (rng.next_f64() * 10.0).floor()).collect())
            .collect()
    }

    // Brute-force all-pairs oracle.
    fn brute_nondominated(points: &[Vec<f64>]) -> Vec<usize> {
        let mut out = Vec::new();
        'outer: for i in 0..points.len() {
            for j in 0..points.len() {
                let ge = points[j].iter().zip(&points[i]).all(|(a, b)| a >= b);
                let ne = points[j] != points[i];
                if ge && ne {
                    continue 'outer;
                }
            }
            out.push(i);
        }
        out
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[2.0, 3.0], &[1.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn filter_examples() {
        let f = nondominated_filter(&[vec![1.0, 2.0], vec![2.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(f.points(), &[vec![1.0, 2.0], vec![2.0, 1.0]]);
        let f = nondominated_filter(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(f.len(), 2);
        assert!(matches!(
            nondominated_filter::<Vec<f64>>(&[]),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn filter_matches_pairwise_oracle() {
        let mut rng = Stream::new(20);
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|_| vec![rng.next_f64(), rng.next_f64()])
            .collect();
        let expected: Vec<Vec<f64>> = brute_nondominated(&pts).into_iter().map(|i| pts[i].clone()).collect();
        assert_eq!(nondominated_filter(&pts).unwrap().points(), expected.as_slice());
    }

    #[test]
    fn sort_examples() {
        let r = fast_nondominated_sort(&[[3.0, 3.0], [2.0, 2.0], [1.0, 1.0]]).unwrap();
        assert_eq!(r.rank, vec![0, 1, 2]);
        let r = fast_nondominated_sort(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert_eq!(r.rank, vec![0, 0]);
    }

    #[test]
    fn sort_matches_peeling_oracle() {
        let mut rng = Stream::new(30);
        let pts = random_points(&mut rng, 30, 3);
        let mut expected = vec![usize::MAX; pts.len()];
        let mut remaining: Vec<usize> = (0..pts.len()).collect();
        let mut r = 0;
        while !remaining.is_empty() {
            let sub: Vec<Vec<f64>> = remaining.iter().map(|&i| pts[i].clone()).collect();
            let keep = brute_nondominated(&sub);
            for &j in &keep {
                expected[remaining[j]] = r;
            }
            remaining = remaining
                .iter()
                .enumerate()
                .filter(|(j, _)| !keep.contains(j))
                .map(|(_, &i)| i)
                .collect();
            r += 1;
        }
        assert_eq!(fast_nondominated_sort(&pts).unwrap().rank, expected);
    }

    #[test]
    fn crowding_examples() {
        assert_eq!(crowding_distance(&[[1.0, 1.0]]), vec![f64::INFINITY]);
        let d = crowding_distance(&[[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
        assert_eq!(d, vec![f64::INFINITY, 2.0, f64::INFINITY]);
        let d = crowding_distance(&[[0.0, 2.0], [1.0, 1.0], [1.0, 1.0], [2.0, 0.0]]);
        assert_eq!(d, vec![f64::INFINITY, 0.0, 0.0, f64::INFINITY]);
        // a duplicated boundary point keeps one infinite copy
        let d = crowding_distance(&[[0.0, 2.0], [0.0, 2.0], [1.0, 1.0], [2.0, 0.0]]);
        assert_eq!(d, vec![f64::INFINITY, 0.0, 2.0, f64::INFINITY]);
    }

    #[test]
    fn crowding_skips_zero_range() {
        let d = crowding_distance(&[[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]]);
        assert_eq!(d, vec![f64::INFINITY, 1.0, f64::INFINITY]);
    }

    #[test]
    fn normalize_examples() {
        let ideal = [0.0, 0.0];
        let nadir = [2.0, 4.0];
        let n = normalize(&[ideal, nadir, [1.0, 1.0]], &ideal, &nadir).unwrap();
        assert_eq!(n, vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.5, 0.25]]);
        // maximization orientation: ideal above nadir
        let n = normalize(&[[1.0, 1.0]], &[2.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(n, vec![vec![0.5, 0.5]]);
        assert!(normalize(&[[1.0, 1.0]], &[1.0, 0.0], &[1.0, 2.0]).is_err());
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-3i32..3, 3).prop_map(|v| v.into_iter().map(f64::from).collect())
    }

    proptest! {
        #[test]
        fn antisymmetric_and_transitive(u in vec3(), v in vec3(), w in vec3()) {
            prop_assert!(!(dominates_unchecked(&u, &v) && dominates_unchecked(&v, &u)));
            if dominates_unchecked(&u, &v) && dominates_unchecked(&v, &w) {
                prop_assert!(dominates_unchecked(&u, &w));
            }
        }

        #[test]
        fn filter_idempotent_and_matches_rank_zero(pts in proptest::collection::vec(vec3(), 1..25)) {
            let once = nondominated_filter(&pts).unwrap();
            let twice = nondominated_filter(once.points()).unwrap();
            prop_assert_eq!(&once, &twice);
            let sorted = fast_nondominated_sort(&pts).unwrap();
            let rank0: Vec<Vec<f64>> = sorted.fronts[0].iter().map(|&i| pts[i].clone()).collect();
            prop_assert_eq!(rank0.as_slice(), once.points());
        }

        #[test]
        fn ranks_invariant_and_consistent(pts in proptest::collection::vec(vec3(), 1..25), scale in 0.1f64..10.0) {
            let r = fast_nondominated_sort(&pts).unwrap();
            let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| x * scale).collect()).collect();
            prop_assert_eq!(&r.rank, &fast_nondominated_sort(&scaled).unwrap().rank);
            for i in 0..pts.len() {
                if r.rank[i] > 0 {
                    prop_assert!((0..pts.len()).any(|j| r.rank[j] + 1 == r.rank[i] && dominates_unchecked(&pts[j], &pts[i])));
                }
            }
        }
    }
}
