use super::conditional::Mesh;
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Minimum {
    pub point: usize,
    pub coords: Vec<f64>,
    pub value: f64,
    /// Height of the lower barrier to either side (1D) or to the nearest
    /// neighbours (2D).
    pub depth: f64,
}

#[derive(Debug, Clone, Serialize)]
pub enum WellClass {
    Single(Vec<Minimum>),
    Double(Vec<Minimum>),
    Multiple(Vec<Minimum>),
}

impl WellClass {
    pub fn minima(&self) -> &[Minimum] {
        match self {
            WellClass::Single(m) | WellClass::Double(m) | WellClass::Multiple(m) => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WellClass::Single(_) => "single",
            WellClass::Double(_) => "double",
            WellClass::Multiple(_) => "multiple",
        }
    }
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

fn smooth(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| if i == 0 || i == n - 1 { v[i] } else { median3(v[i - 1], v[i], v[i + 1]) })
        .collect()
}

/// Strict interior minima after 3-point median smoothing. A surface with no
/// interior minimum falls back to its lowest point as a single well.
pub fn classify_wells(mesh: &Mesh, values: &[f64]) -> WellClass {
    let mut minima = match mesh.axes.len() {
        1 => minima_1d(values),
        _ => minima_2d(mesh, values),
    };
    for m in &mut minima {
        m.coords = mesh.coords(m.point);
    }
    minima.sort_by(|a, b| a.coords.partial_cmp(&b.coords).unwrap());
    if minima.is_empty() {
        // ties (a flat surface) resolve to the point nearest the centre
        let c = mesh.center() as i64;
        let (p, &v) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(((a.0 as i64) - c).abs().cmp(&((b.0 as i64) - c).abs())))
            .unwrap();
        minima.push(Minimum { point: p, coords: mesh.coords(p), value: v, depth: 0.0 });
    }
    match minima.len() {
        1 => WellClass::Single(minima),
        2 => WellClass::Double(minima),
        _ => WellClass::Multiple(minima),
    }
}

fn minima_1d(values: &[f64]) -> Vec<Minimum> {
    let s = smooth(values);
    let n = s.len();
    // a discrete minimum survives the median filter as a two-point plateau,
    // so minima are runs of equal smoothed values below both bounding points
    let mut idx = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let mut j = i;
        while j + 1 < n && s[j + 1] == s[i] {
            j += 1;
        }
        if j + 1 < n && s[i - 1] > s[i] && s[j + 1] > s[j] {
            idx.push((i..=j).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap());
        }
        i = j + 1;
    }
    idx.iter()
        .enumerate()
        .map(|(k, &i)| {
            let lo = if k == 0 { 0 } else { idx[k - 1] };
            let hi = if k + 1 == idx.len() { n - 1 } else { idx[k + 1] };
            let left = values[lo..=i].iter().copied().fold(f64::MIN, f64::max);
            let right = values[i..=hi].iter().copied().fold(f64::MIN, f64::max);
            Minimum { point: i, coords: vec![], value: values[i], depth: left.min(right) - values[i] }
        })
        .collect()
}

fn minima_2d(mesh: &Mesh, values: &[f64]) -> Vec<Minimum> {
    let shape = mesh.shape();
    let (n0, n1) = (shape[0], shape[1]);
    let mut s = values.to_vec();
    for i in 0..n0 {
        let row = smooth(&s[i * n1..(i + 1) * n1]);
        s[i * n1..(i + 1) * n1].copy_from_slice(&row);
    }
    for j in 0..n1 {
        let col: Vec<f64> = (0..n0).map(|i| s[i * n1 + j]).collect();
        for (i, v) in smooth(&col).into_iter().enumerate() {
            s[i * n1 + j] = v;
        }
    }
    let neighbours = |p: usize| -> Vec<usize> {
        let (i, j) = ((p / n1) as i64, (p % n1) as i64);
        let mut v = Vec::with_capacity(8);
        for di in -1..=1 {
            for dj in -1..=1 {
                let (a, b) = (i + di, j + dj);
                if (di, dj) != (0, 0) && a >= 0 && b >= 0 && a < n0 as i64 && b < n1 as i64 {
                    v.push(a as usize * n1 + b as usize);
                }
            }
        }
        v
    };
    // connected regions of equal smoothed value that nothing around undercuts
    let mut seen = vec![false; s.len()];
    let mut out = Vec::new();
    for start in 0..s.len() {
        if seen[start] {
            continue;
        }
        let level = s[start];
        let mut region = vec![start];
        let mut stack = vec![start];
        seen[start] = true;
        let mut is_min = true;
        while let Some(p) = stack.pop() {
            let (i, j) = (p / n1, p % n1);
            if i == 0 || j == 0 || i == n0 - 1 || j == n1 - 1 {
                is_min = false;
            }
            for q in neighbours(p) {
                if s[q] == level {
                    if !seen[q] {
                        seen[q] = true;
                        region.push(q);
                        stack.push(q);
                    }
                } else if s[q] < level {
                    is_min = false;
                }
            }
        }
        if is_min {
            let p = *region.iter().min_by(|&&a, &&b| values[a].total_cmp(&values[b])).unwrap();
            let rim = region
                .iter()
                .flat_map(|&r| neighbours(r))
                .filter(|&q| s[q] != level)
                .map(|q| s[q])
                .fold(f64::INFINITY, f64::min);
            out.push(Minimum { point: p, coords: vec![], value: values[p], depth: rim - level });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct HarmonicFit {
    pub center: f64,
    pub omega: f64,
    pub value: f64,
    /// Largest deviation from the fitted parabola inside the window.
    pub max_residual: f64,
    pub window: (usize, usize),
}

/// Least-squares parabola V ≈ V0 + ½ω̃²(q − q0)² over the points [lo, hi]
/// of a one-dimensional surface.
pub fn fit_window(mesh: &Mesh, values: &[f64], lo: usize, hi: usize) -> Result<HarmonicFit> {
    if mesh.axes.len() != 1 || hi < lo + 2 || hi >= values.len() {
        return Err(Error::InvalidParameter("harmonic fit needs a 1D window of at least 3 points".into()));
    }
    let g = &mesh.axes[0].grid;
    let x0 = g.coord((lo + hi) / 2);
    let mut a = Matrix3::zeros();
    let mut b = Vector3::zeros();
    for i in lo..=hi {
        let x = g.coord(i) - x0;
        let row = Vector3::new(1.0, x, x * x);
        a += row * row.transpose();
        b += row * values[i];
    }
    let c = a.lu().solve(&b).ok_or(Error::NoMinimum)?;
    if !(c[2] > 0.0) {
        return Err(Error::NoMinimum);
    }
    let max_residual = (lo..=hi)
        .map(|i| {
            let x = g.coord(i) - x0;
            (values[i] - (c[0] + c[1] * x + c[2] * x * x)).abs()
        })
        .fold(0.0, f64::max);
    let shift = -c[1] / (2.0 * c[2]);
    Ok(HarmonicFit {
        center: x0 + shift,
        omega: (2.0 * c[2]).sqrt(),
        value: c[0] - c[1] * c[1] / (4.0 * c[2]),
        max_residual,
        window: (lo, hi),
    })
}

/// Harmonic fit around each well minimum, using the points that lie within
/// `depth_fraction` of the well depth above the minimum, trimmed to be
/// symmetric (at least 5 points).
pub fn harmonic_fit(mesh: &Mesh, values: &[f64], wells: &WellClass, depth_fraction: f64) -> Result<Vec<HarmonicFit>> {
    if mesh.axes.len() != 1 {
        return Err(Error::InvalidParameter("harmonic fit is defined on a photon-only mesh".into()));
    }
    let n = values.len();
    wells
        .minima()
        .iter()
        .map(|m| {
            let i = m.point;
            if i == 0 || i == n - 1 {
                return Err(Error::NoMinimum);
            }
            let depth = if m.depth > 0.0 { m.depth } else { values[0].min(values[n - 1]) - m.value };
            let cut = m.value + depth_fraction * depth;
            let (mut lo, mut hi) = (i, i);
            while lo > 0 && values[lo - 1] <= cut && values[lo - 1] >= values[lo] {
                lo -= 1;
            }
            while hi + 1 < n && values[hi + 1] <= cut && values[hi + 1] >= values[hi] {
                hi += 1;
            }
            // symmetric about the minimum so cubic anharmonicity drops out
            let half = (i - lo).min(hi - i).max(2).min(i).min(n - 1 - i);
            fit_window(mesh, values, i - half, i + half)
        })
        .collect()
}

/// Locate where `is_double` switches from false (at `lo`) to true (at
/// `hi`) to within `tol`.
pub fn bisect_transition(mut is_double: impl FnMut(f64) -> Result<bool>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    if is_double(lo)? || !is_double(hi)? {
        return Err(Error::InvalidParameter(format!("no single→double transition bracketed by [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_double(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
