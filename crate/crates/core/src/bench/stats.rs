//! Gaps, box-and-whisker summaries and table rows.

use crate::{Error, Result};

/// `100 * (found - optimum) / optimum`.
pub fn gap_percent(found: f64, optimum: f64) -> f64 {
    100.0 * (found - optimum) / optimum
}

/// Iterations `1, 5, 10, 20, 30, ...` up to `max`.
pub fn default_checkpoints(max: usize) -> Vec<usize> {
    let mut v: Vec<usize> = [1, 5].into_iter().filter(|&k| k <= max).collect();
    v.extend((10..=max).step_by(10));
    v
}

pub fn validate_checkpoints(points: &[usize]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidParams("no checkpoints".into()));
    }
    if points[0] == 0 || points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("checkpoints must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Tukey box plot: quartiles by linear interpolation, whiskers at the most
/// extreme observations within 1.5 IQR of the box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxWhisker {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    pub outliers: Vec<f64>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn box_whisker(values: &[f64]) -> Option<BoxWhisker> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside: Vec<f64> = v.iter().copied().filter(|x| (lo_fence..=hi_fence).contains(x)).collect();
    Some(BoxWhisker {
        count: v.len(),
        mean: v.iter().sum::<f64>() / v.len() as f64,
        min: v[0],
        q1,
        median,
        q3,
        max: v[v.len() - 1],
        lower_whisker: inside.first().copied().unwrap_or(q1),
        upper_whisker: inside.last().copied().unwrap_or(q3),
        outliers: v.iter().copied().filter(|x| !(lo_fence..=hi_fence).contains(x)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointStats {
    pub iteration: usize,
    pub gaps: BoxWhisker,
    /// Instances whose best cost equals the optimum (within rounding).
    pub count_optimal: usize,
}

/// Gap statistics at each checkpoint. `best_by_iteration[i][k]` is the best
/// cost of instance `i` after iteration `k + 1`; runs that stopped early
/// keep their last value.
pub fn checkpoint_summary(
    best_by_iteration: &[Vec<f64>],
    optima: &[f64],
    checkpoints: &[usize],
) -> Result<Vec<CheckpointStats>> {
    validate_checkpoints(checkpoints)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &k in checkpoints {
        let gaps: Vec<f64> = best_by_iteration
            .iter()
            .zip(optima)
            .filter_map(|(run, &opt)| run.get(k - 1).or(run.last()).map(|&b| gap_percent(b, opt)))
            .collect();
        let Some(gaps_box) = box_whisker(&gaps) else { continue };
        let count_optimal = gaps.iter().filter(|&&g| g <= 1e-7).count();
        out.push(CheckpointStats { iteration: k, gaps: gaps_box, count_optimal });
    }
    Ok(out)
}

/// One row of a results table against reference values.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSummary {
    pub mean_percent: f64,
    pub best_percent: f64,
    pub worst_percent: f64,
    /// Instances where the found cost is no worse than the reference.
    pub improved: usize,
}

pub fn table_summary(found: &[f64], reference: &[f64]) -> Option<TableSummary> {
    if found.is_empty() || found.len() != reference.len() {
        return None;
    }
    let gaps: Vec<f64> = found.iter().zip(reference).map(|(&f, &r)| gap_percent(f, r)).collect();
    Some(TableSummary {
        mean_percent: gaps.iter().sum::<f64>() / gaps.len() as f64,
        best_percent: gaps.iter().copied().fold(f64::INFINITY, f64::min),
        worst_percent: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        improved: found.iter().zip(reference).filter(|(f, r)| f <= r).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints() {
        assert_eq!(default_checkpoints(100), vec![1, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100]);
        assert_eq!(default_checkpoints(7), vec![1, 5]);
        assert!(validate_checkpoints(&[]).unwrap_err().to_string().contains("no checkpoints"));
        assert!(validate_checkpoints(&[5, 1]).is_err());
    }

    #[test]
    fn tukey_box() {
        let b = box_whisker(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (2.0, 3.0, 4.0));
        assert_eq!(b.upper_whisker, 4.0);
        assert_eq!(b.outliers, vec![100.0]);
        assert_eq!(b.lower_whisker, 1.0);
    }

    #[test]
    fn gap_basics() {
        assert_eq!(gap_percent(5.0, 5.0), 0.0);
        assert!((gap_percent(10.1, 10.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn improved_counts_ties() {
        let t = table_summary(&[10.0, 9.0, 12.0], &[10.0, 10.0, 10.0]).unwrap();
        assert_eq!(t.improved, 2);
        assert_eq!(t.worst_percent, 20.0);
        assert_eq!(t.best_percent, -10.0);
    }

    #[test]
    fn summary_holds_last_value() {
        let runs = vec![vec![11.0, 10.0], vec![12.0, 12.0, 10.0]];
        let s = checkpoint_summary(&runs, &[10.0, 10.0], &[1, 3]).unwrap();
        assert_eq!(s[0].count_optimal, 0);
        assert_eq!(s[1].count_optimal, 2);
    }
}
