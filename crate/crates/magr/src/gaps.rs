//! Gap injection and the six baseline gap treatments: gap closure (GC),
//! linear (LI), cubic (CI), spline (SPI), nearest neighbor (NNI) and
//! stochastic (STI) interpolation.
//!
//! All fill methods leave present entries untouched and return a gap-free
//! series of the original length. Edge gaps are filled by nearest-present
//! extension, since interpolation is undefined outside the span of present
//! times.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MagrError, Result};
use crate::series::GappySeries;

/// Shape of the injected missingness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    /// Individual samples at uniformly random distinct positions.
    Single,
    /// Blocks of a fixed size; the last block may be truncated to hit g.
    FixedBlock { size: usize },
    /// Block sizes drawn uniformly from `min..=max` until g is reached.
    VaryingBlock { min: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapPlan {
    pub kind: GapKind,
    /// Total number of samples to remove.
    pub g: usize,
    pub seed: u64,
}

/// Rejection-sampling attempt cap per plan: 1000 attempts per block.
const ATTEMPTS_PER_BLOCK: usize = 1000;

/// Remove exactly `plan.g` entries from a gap-free series. Block gaps never
/// touch or overlap: at least one present sample separates any two blocks.
/// Deterministic given the seed.
pub fn inject_gaps(series: &GappySeries, plan: &GapPlan) -> Result<GappySeries> {
    if !series.is_gap_free() {
        return Err(MagrError::Input("inject_gaps expects a gap-free series".into()));
    }
    let n = series.len();
    if plan.g >= n && plan.g > 0 {
        return Err(MagrError::Input(format!(
            "cannot remove g={} samples from a series of length {n}",
            plan.g
        )));
    }
    if plan.g == 0 {
        return Ok(series.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut values: Vec<Option<f64>> = series.values().to_vec();

    match plan.kind {
        GapKind::Single => {
            for idx in rand::seq::index::sample(&mut rng, n, plan.g) {
                values[idx] = None;
            }
        }
        GapKind::FixedBlock { size } => {
            if size == 0 {
                return Err(MagrError::Parameter("block size must be >= 1".into()));
            }
            let mut sizes = vec![size; plan.g / size];
            if plan.g % size != 0 {
                sizes.push(plan.g % size);
            }
            place_blocks(&mut values, &sizes, &mut rng)?;
        }
        GapKind::VaryingBlock { min, max } => {
            if min < 1 || max < min || max >= n {
                return Err(MagrError::Parameter(format!(
                    "block size range [{min}, {max}] must lie within [1, {})",
                    n
                )));
            }
            let mut sizes = Vec::new();
            let mut total = 0usize;
            while total < plan.g {
                let mut s = rng.random_range(min..=max);
                if total + s > plan.g {
                    s = plan.g - total; // truncate the final block
                }
                sizes.push(s);
                total += s;
            }
            place_blocks(&mut values, &sizes, &mut rng)?;
        }
    }
    Ok(GappySeries::new(values))
}

/// Place blocks of the given sizes at uniformly random positions, rejecting
/// placements that overlap or touch an existing block.
fn place_blocks(values: &mut [Option<f64>], sizes: &[usize], rng: &mut ChaCha8Rng) -> Result<()> {
    let n = values.len();
    let cap = ATTEMPTS_PER_BLOCK * sizes.len();
    let mut attempts = 0usize;
    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(sizes.len()); // [start, end] inclusive
    for &size in sizes {
        if size > n {
            return Err(MagrError::Input(format!("block of size {size} exceeds series length {n}")));
        }
        loop {
            attempts += 1;
            if attempts > cap {
                return Err(MagrError::Feasibility { attempts });
            }
            let start = rng.random_range(0..=n - size);
            let end = start + size - 1;
            // Require a present sample between blocks: reject adjacency too.
            let clash = placed.iter().any(|&(a, b)| end + 1 >= a && b + 1 >= start);
            if !clash {
                placed.push((start, end));
                break;
            }
        }
    }
    for (a, b) in placed {
        for v in &mut values[a..=b] {
            *v = None;
        }
    }
    Ok(())
}

/// Gap closure: concatenate the present values in time order, length N - g.
pub fn gap_closure(series: &GappySeries) -> Result<GappySeries> {
    let present = series.present_values();
    if present.is_empty() {
        return Err(MagrError::DegenerateInput("gap closure on an all-absent series".into()));
    }
    Ok(GappySeries::from_values(present))
}

/// Present (time, value) points, 0-based time.
fn present_points(series: &GappySeries) -> Vec<(usize, f64)> {
    series
        .values()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|x| (i, x)))
        .collect()
}

fn check_min_points(pts: &[(usize, f64)], min: usize, method: &str) -> Result<()> {
    if pts.is_empty() {
        return Err(MagrError::DegenerateInput(format!("{method} on an all-absent series")));
    }
    if pts.len() < min {
        return Err(MagrError::InsufficientData(format!(
            "{method} needs >= {min} present values, got {}",
            pts.len()
        )));
    }
    Ok(())
}

/// Fill gaps with an interpolant evaluated at the gap positions; positions
/// before the first or after the last present sample take that sample's
/// value.
fn fill_with(series: &GappySeries, eval: impl Fn(&[(usize, f64)], usize, f64) -> f64) -> GappySeries {
    let pts = present_points(series);
    let values = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            Some(v.unwrap_or_else(|| {
                if i <= pts[0].0 {
                    pts[0].1
                } else if i >= pts[pts.len() - 1].0 {
                    pts[pts.len() - 1].1
                } else {
                    // Interval index k with pts[k].0 < i < pts[k+1].0.
                    let k = pts.partition_point(|p| p.0 < i) - 1;
                    eval(&pts, k, i as f64)
                }
            }))
        })
        .collect();
    GappySeries::new(values)
}

/// Piecewise linear interpolation through the present points.
pub fn fill_linear(series: &GappySeries) -> Result<GappySeries> {
    let pts = present_points(series);
    check_min_points(&pts, 2, "linear interpolation")?;
    Ok(fill_with(series, |pts, k, t| {
        let (t0, v0) = (pts[k].0 as f64, pts[k].1);
        let (t1, v1) = (pts[k + 1].0 as f64, pts[k + 1].1);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }))
}

/// Value of the temporally nearest present sample; the earlier sample wins
/// ties.
pub fn fill_nearest(series: &GappySeries) -> Result<GappySeries> {
    let pts = present_points(series);
    check_min_points(&pts, 2, "nearest neighbor interpolation")?;
    Ok(fill_with(series, |pts, k, t| {
        let (t0, v0) = (pts[k].0 as f64, pts[k].1);
        let (t1, v1) = (pts[k + 1].0 as f64, pts[k + 1].1);
        if t - t0 <= t1 - t { v0 } else { v1 }
    }))
}

/// Finite-difference slopes at the present points: central differences at
/// interior points, one-sided at the ends.
fn hermite_slopes(pts: &[(usize, f64)]) -> Vec<f64> {
    let k = pts.len();
    let mut d = vec![0.0; k];
    for i in 0..k {
        let (lo, hi) = if i == 0 {
            (0, 1)
        } else if i == k - 1 {
            (k - 2, k - 1)
        } else {
            (i - 1, i + 1)
        };
        d[i] = (pts[hi].1 - pts[lo].1) / (pts[hi].0 as f64 - pts[lo].0 as f64);
    }
    d
}

/// Piecewise cubic Hermite interpolation (continuous first derivative).
pub fn fill_cubic(series: &GappySeries) -> Result<GappySeries> {
    let pts = present_points(series);
    check_min_points(&pts, 4, "cubic interpolation")?;
    let slopes = hermite_slopes(&pts);
    Ok(fill_with(series, move |pts, k, t| {
        let (t0, v0) = (pts[k].0 as f64, pts[k].1);
        let (t1, v1) = (pts[k + 1].0 as f64, pts[k + 1].1);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * v0 + h10 * h * slopes[k] + h01 * v1 + h11 * h * slopes[k + 1]
    }))
}

/// Second derivatives of the natural cubic spline through the present
/// points (tridiagonal solve, zero curvature at the ends).
fn natural_spline_m2(pts: &[(usize, f64)]) -> Vec<f64> {
    let k = pts.len();
    let mut m2 = vec![0.0; k];
    if k < 3 {
        return m2;
    }
    let h: Vec<f64> = (0..k - 1)
        .map(|i| pts[i + 1].0 as f64 - pts[i].0 as f64)
        .collect();
    // Thomas algorithm on the interior equations.
    let mut diag = vec![0.0; k - 2];
    let mut rhs = vec![0.0; k - 2];
    for i in 1..k - 1 {
        diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
        rhs[i - 1] = 6.0
            * ((pts[i + 1].1 - pts[i].1) / h[i] - (pts[i].1 - pts[i - 1].1) / h[i - 1]);
    }
    for i in 1..k - 2 {
        let w = h[i] / diag[i - 1];
        diag[i] -= w * h[i];
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (0..k - 2).rev() {
        let upper = if i + 1 < k - 2 { h[i + 1] * m2[i + 2] } else { 0.0 };
        m2[i + 1] = (rhs[i] - upper) / diag[i];
    }
    m2
}

/// Natural cubic spline interpolation (continuous second derivative, zero
/// at the ends).
pub fn fill_spline(series: &GappySeries) -> Result<GappySeries> {
    let pts = present_points(series);
    check_min_points(&pts, 4, "spline interpolation")?;
    let m2 = natural_spline_m2(&pts);
    Ok(fill_with(series, move |pts, k, t| {
        let (t0, v0) = (pts[k].0 as f64, pts[k].1);
        let (t1, v1) = (pts[k + 1].0 as f64, pts[k + 1].1);
        let h = t1 - t0;
        let a = (t1 - t) / h;
        let b = (t - t0) / h;
        a * v0 + b * v1
            + ((a * a * a - a) * m2[k] + (b * b * b - b) * m2[k + 1]) * h * h / 6.0
    }))
}

/// Stochastic interpolation ("random replacement"): each gap takes a value
/// drawn uniformly, with replacement, from the present values of the same
/// series. Deterministic given the seed.
pub fn fill_stochastic(series: &GappySeries, seed: u64) -> Result<GappySeries> {
    let donors = series.present_values();
    if donors.is_empty() {
        return Err(MagrError::DegenerateInput(
            "stochastic interpolation on an all-absent series".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = series
        .values()
        .iter()
        .map(|v| Some(v.unwrap_or_else(|| donors[rng.random_range(0..donors.len())])))
        .collect();
    Ok(GappySeries::new(values))
}
