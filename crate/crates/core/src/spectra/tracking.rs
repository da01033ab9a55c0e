//! Continuity tracking of eigenvalue curves over a coupling sweep.

use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct LevelSample {
    pub lambda: f64,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Eigenvectors as columns; without them tracking falls back to linear
    /// extrapolation of the curves.
    pub vectors: Option<DMatrix<f64>>,
}

#[derive(Debug, Clone)]
pub struct TrackingOptions {
    /// Only crossings among the lowest `window` sorted levels are reported.
    pub window: usize,
    /// Gap minima at or below this are treated as unresolved crossings, not
    /// avoided crossings.
    pub gap_threshold: f64,
    /// Two candidate overlaps closer than this make a match ambiguous.
    pub ambiguity: f64,
    /// Relative separation below which two levels count as degenerate.
    pub degenerate: f64,
}

impl Default for TrackingOptions {
    fn default() -> Self {
        Self { window: usize::MAX, gap_threshold: 0.0, ambiguity: 1e-3, degenerate: 1e-9 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    /// Tracked curve ids.
    pub curves: (usize, usize),
    /// Sorted positions (0-based) the pair occupies just before the crossing.
    pub levels: (usize, usize),
    pub lambda: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AvoidedCrossing {
    /// Sorted positions (0-based).
    pub levels: (usize, usize),
    pub lambda: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ambiguity {
    pub sample: usize,
    pub curve: usize,
    pub best: f64,
    pub second: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelCurves {
    pub lambdas: Vec<f64>,
    /// curves[c][s]: energy of tracked curve c at sample s.
    pub curves: Vec<Vec<f64>>,
    /// position[c][s]: sorted index curve c occupies at sample s.
    pub position: Vec<Vec<usize>>,
    pub crossings: Vec<Crossing>,
    pub avoided: Vec<AvoidedCrossing>,
    pub ambiguities: Vec<Ambiguity>,
}

/// Curve ids are the sorted positions at the first sample.
pub fn track_levels(samples: &[LevelSample], opts: &TrackingOptions) -> LevelCurves {
    let ns = samples.len();
    let k = samples.iter().map(|s| s.energies.len()).min().unwrap_or(0);
    let mut position = vec![vec![0usize; ns]; k];
    let mut ambiguities = Vec::new();
    for c in 0..k {
        if ns > 0 {
            position[c][0] = c;
        }
    }
    for s in 1..ns {
        let prev: Vec<usize> = (0..k).map(|c| position[c][s - 1]).collect();
        let score = match (&samples[s - 1].vectors, &samples[s].vectors) {
            (Some(a), Some(b)) => {
                let o = a.columns(0, k).transpose() * b.columns(0, k);
                DMatrix::from_fn(k, k, |c, j| o[(prev[c], j)].powi(2))
            }
            _ => {
                let pred: Vec<f64> = (0..k)
                    .map(|c| {
                        let e1 = samples[s - 1].energies[prev[c]];
                        if s >= 2 {
                            let e0 = samples[s - 2].energies[position[c][s - 2]];
                            2.0 * e1 - e0
                        } else {
                            e1
                        }
                    })
                    .collect();
                DMatrix::from_fn(k, k, |c, j| -(pred[c] - samples[s].energies[j]).abs())
            }
        };
        for c in 0..k {
            let mut row: Vec<f64> = score.row(c).iter().copied().collect();
            row.sort_by(|a, b| b.total_cmp(a));
            if samples[s].vectors.is_some() && k > 1 && row[0] - row[1] < opts.ambiguity {
                ambiguities.push(Ambiguity { sample: s, curve: c, best: row[0], second: row[1] });
            }
        }
        let assign = greedy_assignment(&score);
        for c in 0..k {
            position[c][s] = assign[c];
        }
    }
    let curves: Vec<Vec<f64>> = (0..k)
        .map(|c| (0..ns).map(|s| samples[s].energies[position[c][s]]).collect())
        .collect();
    let lambdas: Vec<f64> = samples.iter().map(|s| s.lambda).collect();

    let mut crossings = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for s in 0..ns.saturating_sub(1) {
                let d0 = curves[a][s] - curves[b][s];
                let d1 = curves[a][s + 1] - curves[b][s + 1];
                // a pair that starts degenerate has no ordering to swap
                let scale = curves[a][s].abs().max(curves[b][s].abs());
                if d0.abs() <= opts.degenerate * scale || d0 * d1 >= 0.0 {
                    continue;
                }
                let (pa, pb) = (position[a][s], position[b][s]);
                if pa.max(pb) >= opts.window {
                    continue;
                }
                let t = d0 / (d0 - d1);
                let lambda = lambdas[s] + t * (lambdas[s + 1] - lambdas[s]);
                let energy = curves[a][s] + t * (curves[a][s + 1] - curves[a][s]);
                crossings.push(Crossing { curves: (a, b), levels: (pa.min(pb), pa.max(pb)), lambda, energy });
            }
        }
    }
    crossings.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));

    // Avoided crossings: interior gap minima between sorted neighbours where
    // the tracked curves do not swap.
    let mut avoided = Vec::new();
    for i in 0..k.saturating_sub(1) {
        let gap: Vec<f64> = samples.iter().map(|s| s.energies[i + 1] - s.energies[i]).collect();
        for s in 1..ns.saturating_sub(1) {
            if !(gap[s] < gap[s - 1] && gap[s] <= gap[s + 1]) || gap[s] <= opts.gap_threshold {
                continue;
            }
            let swapped = crossings.iter().any(|c| {
                c.levels == (i, i + 1) && c.lambda >= lambdas[s - 1] && c.lambda <= lambdas[s + 1]
            });
            if swapped {
                continue;
            }
            // parabolic refinement of the minimum location
            let (g0, g1, g2) = (gap[s - 1], gap[s], gap[s + 1]);
            let denom = g0 - 2.0 * g1 + g2;
            let h = lambdas[s + 1] - lambdas[s];
            let shift = if denom > 0.0 { 0.5 * (g0 - g2) / denom } else { 0.0 };
            avoided.push(AvoidedCrossing { levels: (i, i + 1), lambda: lambdas[s] + shift.clamp(-1.0, 1.0) * h, gap: g1 });
        }
    }
    LevelCurves { lambdas, curves, position, crossings, avoided, ambiguities }
}

/// Maximize total score by repeatedly taking the best free pair.
fn greedy_assignment(score: &DMatrix<f64>) -> Vec<usize> {
    let k = score.nrows();
    let mut pairs: Vec<(usize, usize)> = (0..k).flat_map(|c| (0..k).map(move |j| (c, j))).collect();
    pairs.sort_by(|a, b| score[(b.0, b.1)].total_cmp(&score[(a.0, a.1)]).then(a.cmp(b)));
    let mut out = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for (c, j) in pairs {
        if out[c] == usize::MAX && !used[j] {
            out[c] = j;
            used[j] = true;
        }
    }
    out
}
