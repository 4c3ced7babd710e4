use super::{AssemblyError, TriDiagMatrix};
use crate::basis::{QuadratureRule, TemporalGrid};

/// Temporal Gram matrix `B_ij = ∫_T w_i w_j` of the hat functions, in closed
/// form: `B_jj = (h_{j−1} + h_j)/3`, `B_{j,j+1} = h_j/6`.
pub fn assemble_temporal_gram(grid: &TemporalGrid) -> TriDiagMatrix {
    let steps: Vec<f64> = grid.steps().collect();
    let n = grid.len();
    let mut diag = vec![0.0; n];
    for (j, h) in steps.iter().enumerate() {
        diag[j] += h / 3.0;
        diag[j + 1] += h / 3.0;
    }
    let off = steps.iter().map(|h| h / 6.0).collect();
    TriDiagMatrix::new(diag, off)
}

/// One temporal integration point: time, weight, and the two hat values it
/// touches (`1 − s` on node `k`, `s` on node `k + 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TimePoint {
    pub t: f64,
    pub weight: f64,
    pub k: usize,
    pub s: f64,
}

/// Integration points over the target grid. Each target interval is split at
/// source nodes lying strictly inside it, so a source that is piecewise
/// linear in time is integrated exactly by any rule of order two or more.
pub(crate) fn time_points(
    grid: &TemporalGrid,
    source_nodes: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<TimePoint>, AssemblyError> {
    if rule.dim() != 1 {
        return Err(AssemblyError::QuadratureDimension { mesh: 1, rule: rule.dim() });
    }
    let times = grid.times();
    let mut points = Vec::new();
    let mut breaks = Vec::new();
    for k in 0..times.len() - 1 {
        let (lo, hi) = (times[k], times[k + 1]);
        let h = hi - lo;
        let guard = 1e-12 * h;
        breaks.clear();
        breaks.push(lo);
        let first = source_nodes.partition_point(|&t| t <= lo + guard);
        breaks.extend(source_nodes[first..].iter().take_while(|&&t| t < hi - guard));
        breaks.push(hi);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            for (x, weight) in rule.interval_points() {
                let t = a + (b - a) * x;
                points.push(TimePoint {
                    t,
                    weight: (b - a) * weight,
                    k,
                    s: (t - lo) / h,
                });
            }
        }
    }
    Ok(points)
}
