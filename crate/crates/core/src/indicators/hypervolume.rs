//! Hypervolume of minimization fronts.
//!
//! Exact computation covers two objectives (sorted sweep) and three
//! objectives (slicing along the last objective, maintaining the 2D staircase
//! of the slices seen so far). A Monte Carlo estimator is provided as an
//! independent check.

use alloc::vec::Vec;

use crate::rng::{RandomSource, Stream};
use crate::{Error, Result};

fn check_ref<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Result<()> {
    for p in front {
        if p.as_ref().len() != reference.len() {
            return Err(Error::DimensionMismatch {
                expected: reference.len(),
                found: p.as_ref().len(),
            });
        }
    }
    if reference.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("reference point"));
    }
    Ok(())
}

/// Points strictly better than `reference` in every coordinate.
fn inside<'a, P: AsRef<[f64]>>(front: &'a [P], reference: &'a [f64]) -> impl Iterator<Item = &'a [f64]> {
    front
        .iter()
        .map(|p| p.as_ref())
        .filter(move |p| p.iter().zip(reference).all(|(x, r)| x < r))
}

/// Exact hypervolume dominated by `front` (minimization) and bounded by
/// `reference`. Points not strictly better than the reference in every
/// coordinate contribute nothing.
pub fn hypervolume_exact<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Result<f64> {
    check_ref(front, reference)?;
    match reference.len() {
        2 => {
            let mut pts: Vec<[f64; 2]> = inside(front, reference).map(|p| [p[0], p[1]]).collect();
            Ok(sweep_2d(&mut pts, reference[0], reference[1]))
        }
        3 => {
            let mut pts: Vec<[f64; 3]> = inside(front, reference).map(|p| [p[0], p[1], p[2]]).collect();
            Ok(slice_3d(&mut pts, reference))
        }
        k => Err(Error::UnsupportedObjectiveCount(k)),
    }
}

fn sweep_2d(pts: &mut [[f64; 2]], rx: f64, ry: f64) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut y_floor = ry;
    for p in pts.iter() {
        if p[1] < y_floor {
            area += (rx - p[0]) * (y_floor - p[1]);
            y_floor = p[1];
        }
    }
    area
}

fn slice_3d(pts: &mut [[f64; 3]], reference: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    // Staircase of the slice: nondominated 2D points sorted by x ascending,
    // hence y strictly descending.
    let mut stair: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    let mut area = 0.0;
    let mut volume = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let q = [p[0], p[1]];
        if insert_staircase(&mut stair, q) {
            area = staircase_area(&stair, reference[0], reference[1]);
        }
        let next_z = pts.get(i + 1).map_or(reference[2], |n| n[2]);
        volume += area * (next_z - p[2]);
    }
    volume
}

/// Inserts `q` into the staircase; returns `false` if `q` was dominated.
fn insert_staircase(stair: &mut Vec<[f64; 2]>, q: [f64; 2]) -> bool {
    let pos = stair.partition_point(|s| s[0] < q[0]);
    // Weakly dominated by the predecessor (smaller x) or an equal-x entry.
    if pos > 0 && stair[pos - 1][1] <= q[1] {
        return false;
    }
    if pos < stair.len() && stair[pos][0] == q[0] && stair[pos][1] <= q[1] {
        return false;
    }
    let end = pos + stair[pos..].iter().take_while(|s| s[1] >= q[1]).count();
    stair.splice(pos..end, core::iter::once(q));
    true
}

fn staircase_area(stair: &[[f64; 2]], rx: f64, ry: f64) -> f64 {
    let mut area = 0.0;
    let mut y_floor = ry;
    for s in stair {
        area += (rx - s[0]) * (y_floor - s[1]);
        y_floor = s[1];
    }
    area
}

/// Exclusive hypervolume contribution of every point of `front`:
/// `HV(front) - HV(front without i)`. Exact duplicates contribute 0.
pub fn hypervolume_contributions<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Result<Vec<f64>> {
    let total = hypervolume_exact(front, reference)?;
    let mut rest: Vec<&[f64]> = Vec::with_capacity(front.len());
    (0..front.len())
        .map(|i| {
            rest.clear();
            rest.extend(
                front
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.as_ref()),
            );
            Ok((total - hypervolume_exact(&rest, reference)?).max(0.0))
        })
        .collect()
}

/// Monte Carlo estimate of the hypervolume: the fraction of uniform samples
/// from the box `[ideal, reference]` that some front point weakly dominates,
/// times the box volume. `ideal` is the componentwise minimum of the points
/// that lie inside the reference box.
pub fn hypervolume_mc<P: AsRef<[f64]>>(front: &[P], reference: &[f64], samples: usize, seed: u64) -> Result<f64> {
    check_ref(front, reference)?;
    if samples == 0 {
        return Err(crate::error::invalid("samples", "must be at least 1"));
    }
    let pts: Vec<&[f64]> = inside(front, reference).collect();
    if pts.is_empty() {
        return Ok(0.0);
    }
    let ideal = crate::pareto::fold_columns(&pts, f64::min);
    let volume: f64 = ideal.iter().zip(reference).map(|(l, r)| r - l).product();
    let mut rng = Stream::new(seed);
    let mut sample = alloc::vec![0.0; reference.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (s, (l, r)) in sample.iter_mut().zip(ideal.iter().zip(reference)) {
            *s = rng.uniform(*l, *r);
        }
        if pts.iter().any(|p| p.iter().zip(&sample).all(|(a, b)| a <= b)) {
            hits += 1;
        }
    }
    Ok(volume * hits as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn worked_examples() {
        assert_eq!(hypervolume_exact(&[[0.0, 0.0]], &[1.0, 1.0]).unwrap(), 1.0);
        let hv = hypervolume_exact(&[[0.0, 0.5], [0.5, 0.0]], &[1.0, 1.0]).unwrap();
        assert!((hv - 0.75).abs() < 1e-12);
        assert_eq!(hypervolume_exact(&[[0.0, 0.0, 0.0]], &[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(
            hypervolume_exact(&[[0.0; 4]], &[1.0; 4]),
            Err(Error::UnsupportedObjectiveCount(4))
        ));
    }

    #[test]
    fn points_outside_reference_are_dropped() {
        let hv = hypervolume_exact(&[[0.5, 0.5], [1.0, 0.0], [0.2, 1.5]], &[1.0, 1.0]).unwrap();
        assert!((hv - 0.25).abs() < 1e-15);
        assert_eq!(hypervolume_exact::<[f64; 2]>(&[], &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn three_d_inclusion_exclusion() {
        // two unit-ish boxes overlapping in [0.5,1]^3 region
        let front = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.0]];
        // 1*0.5*0.5 + 0.5*1*1 - 0.5*0.5*0.5
        let expected = 0.25 + 0.5 - 0.125;
        let hv = hypervolume_exact(&front, &[1.0, 1.0, 1.0]).unwrap();
        assert!((hv - expected).abs() < 1e-12);
    }

    #[test]
    fn three_d_with_dominated_and_duplicate_points() {
        let front = [
            [0.2, 0.2, 0.2],
            [0.3, 0.3, 0.3],
            [0.2, 0.2, 0.2],
            [0.1, 0.9, 0.5],
        ];
        let reduced = [[0.2, 0.2, 0.2], [0.1, 0.9, 0.5]];
        let a = hypervolume_exact(&front, &[1.0, 1.0, 1.0]).unwrap();
        let b = hypervolume_exact(&reduced, &[1.0, 1.0, 1.0]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn contributions_of_three_point_front() {
        let c = hypervolume_contributions(&[[0.0, 0.9], [0.5, 0.5], [0.9, 0.0]], &[1.0, 1.0]).unwrap();
        assert!((c[0] - 0.05).abs() < 1e-12);
        assert!((c[1] - 0.16).abs() < 1e-12);
        assert!((c[2] - 0.05).abs() < 1e-12);
        let c = hypervolume_contributions(&[[0.5, 0.5], [0.5, 0.5], [0.0, 0.9]], &[1.0, 1.0]).unwrap();
        assert_eq!(&c[..2], &[0.0, 0.0]);
    }

    #[test]
    fn mc_examples() {
        assert_eq!(hypervolume_mc(&[[1.0, 1.0]], &[1.0, 1.0], 1000, 1).unwrap(), 0.0);
        assert_eq!(hypervolume_mc(&[[0.0, 0.0]], &[1.0, 1.0], 100_000, 9).unwrap(), 1.0);
    }

    /// Independent 2D oracle: exact area of the union of boxes on the grid
    /// induced by all coordinates.
    fn grid_union_area(front: &[[f64; 2]], r: [f64; 2]) -> f64 {
        let mut xs: Vec<f64> = front.iter().map(|p| p[0]).chain([r[0]]).collect();
        let mut ys: Vec<f64> = front.iter().map(|p| p[1]).chain([r[1]]).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let mut area = 0.0;
        for i in 0..xs.len() - 1 {
            for j in 0..ys.len() - 1 {
                let (cx, cy) = ((xs[i] + xs[i + 1]) / 2.0, (ys[j] + ys[j + 1]) / 2.0);
                if front.iter().any(|p| p[0] <= cx && p[1] <= cy) {
                    area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
                }
            }
        }
        area
    }

    fn grid_union_volume(front: &[[f64; 3]], r: [f64; 3]) -> f64 {
        let axis = |d: usize| {
            let mut v: Vec<f64> = front.iter().map(|p| p[d]).chain([r[d]]).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (xs, ys, zs) = (axis(0), axis(1), axis(2));
        let mut vol = 0.0;
        for i in 0..xs.len() - 1 {
            for j in 0..ys.len() - 1 {
                for l in 0..zs.len() - 1 {
                    let c = [(xs[i] + xs[i + 1]) / 2.0, (ys[j] + ys[j + 1]) / 2.0, (zs[l] + zs[l + 1]) / 2.0];
                    if front.iter().any(|p| p.iter().zip(&c).all(|(a, b)| a <= b)) {
                        vol += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]) * (zs[l + 1] - zs[l]);
                    }
                }
            }
        }
        vol
    }

    #[test]
    fn exact_matches_grid_oracle() {
        let mut rng = Stream::new(77);
        for n in 1..12 {
            let f2: Vec<[f64; 2]> = (0..n).map(|_| [rng.next_f64(), rng.next_f64()]).collect();
            let a = hypervolume_exact(&f2, &[1.0, 1.0]).unwrap();
            assert!((a - grid_union_area(&f2, [1.0, 1.0])).abs() < 1e-12);
            let f3: Vec<[f64; 3]> = (0..n)
                .map(|_| [rng.next_f64(), rng.next_f64(), rng.next_f64()])
                .collect();
            let b = hypervolume_exact(&f3, &[1.0, 1.0, 1.0]).unwrap();
            assert!((b - grid_union_volume(&f3, [1.0, 1.0, 1.0])).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_and_permutation_invariant() {
        let mut rng = Stream::new(78);
        for _ in 0..30 {
            let mut f: Vec<[f64; 3]> = (0..6)
                .map(|_| [rng.next_f64(), rng.next_f64(), rng.next_f64()])
                .collect();
            let r = [1.0, 1.0, 1.0];
            let before = hypervolume_exact(&f, &r).unwrap();
            f.reverse();
            assert!((hypervolume_exact(&f, &r).unwrap() - before).abs() < 1e-14);
            f.push([rng.next_f64(), rng.next_f64(), rng.next_f64()]);
            assert!(hypervolume_exact(&f, &r).unwrap() >= before);
        }
    }

    #[test]
    fn mc_agrees_with_exact_on_random_2d_fronts() {
        let mut rng = Stream::new(5);
        for t in 0..20 {
            let front: Vec<[f64; 2]> = (0..5).map(|_| [rng.next_f64(), rng.next_f64()]).collect();
            let exact = hypervolume_exact(&front, &[1.0, 1.0]).unwrap();
            let samples = 100_000;
            let mc = hypervolume_mc(&front, &[1.0, 1.0], samples, t).unwrap();
            let ideal = [
                front.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
                front.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
            ];
            let volume = (1.0 - ideal[0]) * (1.0 - ideal[1]);
            let p = exact / volume;
            let sigma = volume * (p * (1.0 - p) / samples as f64).sqrt();
            assert!((mc - exact).abs() < 3.0 * sigma + 1e-12, "{mc} vs {exact}");
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(hypervolume_exact(&[vec![0.0, 0.0, 0.0]], &[1.0, 1.0]).is_err());
    }
}
