//! Friedman test with the Nemenyi post-hoc critical difference.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Scores of `m` algorithms (columns) on `n` datasets (rows).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub algorithms: Vec<String>,
    pub scores: Vec<Vec<f64>>,
    pub higher_is_better: bool,
}

impl ScoreTable {
    pub fn new(algorithms: Vec<String>, scores: Vec<Vec<f64>>, higher_is_better: bool) -> Result<Self> {
        let m = algorithms.len();
        if m < 2 {
            return Err(Error::Statistics(format!("need at least 2 algorithms, got {m}")));
        }
        if scores.len() < 2 {
            return Err(Error::Statistics(format!("need at least 2 datasets, got {}", scores.len())));
        }
        for (i, row) in scores.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Statistics(format!(
                    "dataset {i} has {} scores for {m} algorithms",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Statistics(format!("dataset {i} has a non-finite score")));
            }
        }
        Ok(ScoreTable {
            algorithms,
            scores,
            higher_is_better,
        })
    }

    pub fn algorithm_count(&self) -> usize {
        self.algorithms.len()
    }

    pub fn dataset_count(&self) -> usize {
        self.scores.len()
    }
}

/// Ranks every row; rank 1 is best, tied scores share their average rank.
pub fn rank_rows(table: &ScoreTable) -> Vec<Vec<f64>> {
    table
        .scores
        .iter()
        .map(|row| rank_row(row, table.higher_is_better))
        .collect()
}

fn rank_row(row: &[f64], higher_is_better: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        let o = row[a].total_cmp(&row[b]);
        if higher_is_better {
            o.reverse()
        } else {
            o
        }
    });
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && row[order[end]] == row[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

pub fn mean_ranks(table: &ScoreTable) -> Vec<f64> {
    let ranks = rank_rows(table);
    let n = ranks.len() as f64;
    (0..table.algorithm_count())
        .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect()
}

/// Friedman chi-square statistic and its p-value (chi-square, `m - 1` df).
pub fn friedman(table: &ScoreTable) -> Result<(f64, f64)> {
    let m = table.algorithm_count();
    if m < 3 {
        return Err(Error::Statistics(format!(
            "the chi-square approximation needs at least 3 algorithms, got {m}"
        )));
    }
    let n = table.dataset_count() as f64;
    let mf = m as f64;
    let sum_sq: f64 = mean_ranks(table).iter().map(|r| r * r).sum();
    let statistic = (12.0 * n / (mf * (mf + 1.0)) * (sum_sq - mf * (mf + 1.0) * (mf + 1.0) / 4.0)).max(0.0);
    let p_value = chi_square_sf(statistic, mf - 1.0);
    Ok((statistic, p_value))
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof / 2.0, x / 2.0)
}

/// Regularized upper incomplete gamma `Q(a, x)`: series expansion below
/// `x = a + 1`, Lentz continued fraction above.
fn gamma_q(a: f64, x: f64) -> f64 {
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;
    let log_prefactor = a * libm::log(x) - x - libm::lgamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..1000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        1.0 - sum * libm::exp(log_prefactor)
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                break;
            }
        }
        libm::exp(log_prefactor) * h
    }
}

/// Two-tailed Nemenyi critical values `q_0.05` for `m = 2..=10` (studentized
/// range at infinite degrees of freedom divided by `sqrt(2)`).
const Q_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];

/// Nemenyi critical difference `q_alpha(m) * sqrt(m (m + 1) / (6 n))`.
pub fn nemenyi_cd(m: usize, n: usize, alpha: f64) -> Result<f64> {
    if (alpha - 0.05).abs() > 1e-12 {
        return Err(Error::Statistics(format!(
            "critical values are tabulated for alpha = 0.05 only, got {alpha}"
        )));
    }
    if !(2..=10).contains(&m) {
        return Err(Error::Statistics(format!(
            "critical values are tabulated for 2 to 10 algorithms, got {m}"
        )));
    }
    if n == 0 {
        return Err(Error::Statistics("need at least one dataset".into()));
    }
    let (mf, nf) = (m as f64, n as f64);
    Ok(Q_05[m - 2] * libm::sqrt(mf * (mf + 1.0) / (6.0 * nf)))
}

/// Groups of algorithms whose mean ranks are not significantly different:
/// every maximal run of consecutive (by mean rank) algorithms whose extreme
/// ranks differ by at most `critical_difference`. Groups hold indices into
/// `mean_ranks` sorted by rank and are ordered by their best member.
pub fn cd_groups(mean_ranks: &[f64], critical_difference: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..mean_ranks.len()).collect();
    order.sort_by(|&a, &b| mean_ranks[a].total_cmp(&mean_ranks[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last_end = 0;
    for start in 0..order.len() {
        let mut end = start + 1;
        while end < order.len()
            && mean_ranks[order[end]] - mean_ranks[order[start]] <= critical_difference
        {
            end += 1;
        }
        // windows ending no later than the previous one are contained in it
        if end > last_end {
            groups.push(order[start..end].to_vec());
            last_end = end;
        }
    }
    groups
}

/// Full Friedman + Nemenyi comparison of one score table.
#[derive(Debug, Clone, PartialEq)]
pub struct CdResult {
    pub algorithms: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub critical_difference: f64,
    pub groups: Vec<Vec<usize>>,
}

impl CdResult {
    /// Indices of the groups that contain algorithm `j`.
    pub fn groups_of(&self, j: usize) -> Vec<usize> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.contains(&j))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn compare(table: &ScoreTable, alpha: f64) -> Result<CdResult> {
    let (statistic, p_value) = friedman(table)?;
    let mean_ranks = mean_ranks(table);
    let critical_difference = nemenyi_cd(table.algorithm_count(), table.dataset_count(), alpha)?;
    let groups = cd_groups(&mean_ranks, critical_difference);
    Ok(CdResult {
        algorithms: table.algorithms.clone(),
        mean_ranks,
        statistic,
        p_value,
        critical_difference,
        groups,
    })
}
