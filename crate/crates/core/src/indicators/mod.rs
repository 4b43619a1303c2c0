//! Front quality indicators and reference-front construction.
//!
//! Hypervolume is reported in the normalized minimization box defined by a
//! reference front (see [`ReferenceScale`]) against the point `(1, ..., 1)`.
//! GD and IGD stay on the raw objective scale and use the plain mean of
//! Euclidean distances.

mod hypervolume;

use alloc::vec;
use alloc::vec::Vec;

pub use hypervolume::{hypervolume_contributions, hypervolume_exact, hypervolume_mc};

use crate::pareto::{nondominated_filter, validate_points, FrontApproximation};
use crate::{Error, Result};

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

fn mean_nearest_distance<P: AsRef<[f64]>, Q: AsRef<[f64]>>(from: &[P], to: &[Q]) -> Result<f64> {
    let k = validate_points(from)?;
    let k2 = validate_points(to)?;
    if k != k2 {
        return Err(Error::DimensionMismatch { expected: k, found: k2 });
    }
    let total: f64 = from
        .iter()
        .map(|a| {
            to.iter()
                .map(|r| euclidean(a.as_ref(), r.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / from.len() as f64)
}

/// Generational distance: mean over `approx` of the distance to the nearest
/// `reference` point.
pub fn gd<P: AsRef<[f64]>, Q: AsRef<[f64]>>(approx: &[P], reference: &[Q]) -> Result<f64> {
    mean_nearest_distance(approx, reference)
}

/// Inverted generational distance: mean over `reference` of the distance to
/// the nearest `approx` point.
pub fn igd<P: AsRef<[f64]>, Q: AsRef<[f64]>>(approx: &[P], reference: &[Q]) -> Result<f64> {
    mean_nearest_distance(reference, approx)
}

/// Nondominated union of `fronts` with exact duplicates removed.
pub fn build_reference_front<P: AsRef<[f64]>>(fronts: &[&[P]]) -> Result<FrontApproximation> {
    let union: Vec<&[f64]> = fronts
        .iter()
        .flat_map(|f| f.iter().map(|p| p.as_ref()))
        .collect();
    Ok(nondominated_filter(&union)?.dedup())
}

/// Normalization bounds taken from a reference front.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceScale {
    pub ideal: Vec<f64>,
    pub nadir: Vec<f64>,
}

impl ReferenceScale {
    /// Fails when the front has the same best and worst value in some
    /// objective, which leaves the normalization undefined.
    pub fn new(reference: &FrontApproximation) -> Result<Self> {
        let ideal = reference.ideal();
        let nadir = reference.nadir();
        if let Some(objective) = (0..ideal.len()).find(|&j| ideal[j] == nadir[j]) {
            return Err(Error::DegenerateFront { objective });
        }
        Ok(ReferenceScale { ideal, nadir })
    }

    /// Normalized hypervolume of the nondominated subset of `points`, which
    /// are maximized objective vectors. Normalized coordinates are clipped to
    /// `[0, 1]` so points outside the box contribute their intersection.
    pub fn hypervolume<P: AsRef<[f64]>>(&self, points: &[P]) -> Result<f64> {
        let front = nondominated_filter(points)?;
        let mut normalized = crate::pareto::normalize(front.points(), &self.ideal, &self.nadir)?;
        for p in &mut normalized {
            for x in p.iter_mut() {
                *x = x.clamp(0.0, 1.0);
            }
        }
        hypervolume_exact(&normalized, &vec![1.0; self.ideal.len()])
    }
}

/// Indicator values of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorReport {
    pub generation: usize,
    pub hv: f64,
    pub gd: f64,
    pub igd: f64,
}

/// Indicators for every generation of a run. `generations[g]` holds the
/// objective vectors of the population at generation `g`; each generation is
/// reduced to its nondominated set before scoring.
pub fn indicator_series<P: AsRef<[f64]>>(
    generations: &[Vec<P>],
    reference: &FrontApproximation,
) -> Result<Vec<IndicatorReport>> {
    let scale = ReferenceScale::new(reference)?;
    generations
        .iter()
        .enumerate()
        .map(|(generation, points)| {
            let front = nondominated_filter(points)?;
            Ok(IndicatorReport {
                generation,
                hv: scale.hypervolume(front.points())?,
                gd: gd(front.points(), reference.points())?,
                igd: igd(front.points(), reference.points())?,
            })
        })
        .collect()
}
