//! The three connectivity measures, computed from a MAGR-filtered (or
//! gap-free) joint data matrix.
//!
//! Conventions: natural logarithm throughout; the correlation sum uses the
//! maximum (Chebyshev) norm with a strict Heaviside step, so pairs at
//! distance exactly `r` do not count while coincident points do. Inside the
//! transfer entropy ratio the four correlation sums share the same row set,
//! so raw pair counts are used and the normalization constants cancel.

use crate::error::{MagrError, Result};
use crate::series::JointDataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    CrossCorrelation,
    CrossMutualInformation,
    TransferEntropy,
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureKind::CrossCorrelation => write!(f, "cc"),
            MeasureKind::CrossMutualInformation => write!(f, "cmi"),
            MeasureKind::TransferEntropy => write!(f, "te"),
        }
    }
}

/// Estimator parameters actually used, recorded alongside the value.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureParams {
    pub kind: MeasureKind,
    pub tau: usize,
    pub m: usize,
    /// Bin count b (cross mutual information only).
    pub bins: Option<usize>,
    /// Correlation-sum distance r under the max norm (transfer entropy only).
    pub radius: Option<f64>,
}

/// A measure value plus the effective sample count it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub effective_n: usize,
    pub params: MeasureParams,
}

/// Complete (x, y) rows of a two-column matrix.
fn complete_pairs(matrix: &JointDataMatrix) -> Result<Vec<(f64, f64)>> {
    if matrix.n_cols != 2 {
        return Err(MagrError::Input(format!(
            "expected a two-column pair matrix, got {} columns",
            matrix.n_cols
        )));
    }
    Ok(matrix
        .rows
        .iter()
        .filter_map(|r| match (r.cells[0], r.cells[1]) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        })
        .collect())
}

/// Sample Pearson correlation over the retained pairs; means and variances
/// are computed over exactly those pairs.
pub fn cross_correlation(matrix: &JointDataMatrix) -> Result<MeasureResult> {
    cross_correlation_tau(matrix, 0)
}

pub fn cross_correlation_tau(matrix: &JointDataMatrix, tau: usize) -> Result<MeasureResult> {
    let pairs = complete_pairs(matrix)?;
    let n = pairs.len();
    if n < 3 {
        return Err(MagrError::InsufficientData(format!(
            "cross correlation needs >= 3 pairs, got {n}"
        )));
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in &pairs {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MagrError::DegenerateInput(
            "cross correlation: zero variance column".into(),
        ));
    }
    Ok(MeasureResult {
        value: sxy / (sxx * syy).sqrt(),
        effective_n: n,
        params: MeasureParams {
            kind: MeasureKind::CrossCorrelation,
            tau,
            m: 1,
            bins: None,
            radius: None,
        },
    })
}

/// Assign each value a bin in 0..b with equal occupancy up to a difference
/// of one. Ties are broken by stable rank order, so the equal-occupancy
/// property holds even for constant columns.
pub fn equiprobable_bins(column: &[f64], b: usize) -> Result<Vec<usize>> {
    if b < 2 {
        return Err(MagrError::Parameter(format!("bin count b={b} must be >= 2")));
    }
    let n = column.len();
    if n < b {
        return Err(MagrError::InsufficientData(format!(
            "{n} values cannot fill b={b} bins"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps original order among ties.
    order.sort_by(|&i, &j| column[i].partial_cmp(&column[j]).unwrap());
    let mut bins = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        bins[idx] = rank * b / n;
    }
    Ok(bins)
}

/// Default bin count b = max(2, floor(sqrt(n/5))).
pub fn default_bin_count(effective_n: usize) -> usize {
    ((effective_n as f64 / 5.0).sqrt().floor() as usize).max(2)
}

/// Cross mutual information with equiprobable marginal binning. Marginal
/// probabilities are the row/column sums of the joint table, so the
/// estimate is a proper plug-in mutual information (non-negative, at most
/// log b). Natural logarithm.
pub fn cross_mutual_information(matrix: &JointDataMatrix, b: Option<usize>) -> Result<MeasureResult> {
    cross_mutual_information_tau(matrix, b, 0)
}

pub fn cross_mutual_information_tau(
    matrix: &JointDataMatrix,
    b: Option<usize>,
    tau: usize,
) -> Result<MeasureResult> {
    let pairs = complete_pairs(matrix)?;
    let n = pairs.len();
    if n < 10 {
        return Err(MagrError::InsufficientData(format!(
            "cross mutual information needs >= 10 pairs, got {n}"
        )));
    }
    let b = b.unwrap_or_else(|| default_bin_count(n));
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let bx = equiprobable_bins(&xs, b)?;
    let by = equiprobable_bins(&ys, b)?;

    let mut joint = vec![0usize; b * b];
    for i in 0..n {
        joint[bx[i] * b + by[i]] += 1;
    }
    let mut px = vec![0usize; b];
    let mut py = vec![0usize; b];
    for ix in 0..b {
        for iy in 0..b {
            px[ix] += joint[ix * b + iy];
            py[iy] += joint[ix * b + iy];
        }
    }
    let nf = n as f64;
    let mut mi = 0.0;
    for ix in 0..b {
        for iy in 0..b {
            let c = joint[ix * b + iy];
            if c > 0 {
                let pxy = c as f64 / nf;
                let pmarg = (px[ix] as f64 / nf) * (py[iy] as f64 / nf);
                mi += pxy * (pxy / pmarg).ln();
            }
        }
    }
    Ok(MeasureResult {
        value: mi,
        effective_n: n,
        params: MeasureParams {
            kind: MeasureKind::CrossMutualInformation,
            tau,
            m: 1,
            bins: Some(b),
            radius: None,
        },
    })
}

fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Fraction of unordered point pairs closer than `r` under the max norm:
/// (2 / (M(M-1))) * #{i < j : ||p_i - p_j|| < r}.
pub fn correlation_sum(points: &[Vec<f64>], r: f64) -> Result<f64> {
    if points.len() < 2 {
        return Err(MagrError::InsufficientData(
            "correlation sum needs >= 2 points".into(),
        ));
    }
    if r <= 0.0 {
        return Err(MagrError::Parameter("correlation sum needs r > 0".into()));
    }
    let m = points.len();
    let mut count: u64 = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            if chebyshev(&points[i], &points[j]) < r {
                count += 1;
            }
        }
    }
    Ok(2.0 * count as f64 / (m as f64 * (m - 1) as f64))
}

/// The four raw pair counts entering the transfer entropy ratio, all over
/// the same retained row set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TePairCounts {
    /// C(Y_{t+1}, X_t, Y_t)
    pub full: u64,
    /// C(X_t, Y_t)
    pub xy: u64,
    /// C(Y_{t+1}, Y_t)
    pub yfy: u64,
    /// C(Y_t)
    pub y: u64,
    pub rows: usize,
}

/// Counts all four sums in one pass over the pairs. Every sum includes the
/// Y lag block, so a pair farther than `r` there contributes to none of
/// them and the remaining columns are skipped.
pub fn te_pair_counts(matrix: &JointDataMatrix, r: f64) -> Result<TePairCounts> {
    let roles = &matrix.roles;
    let yf_col = roles
        .y_future
        .ok_or_else(|| MagrError::Input("transfer entropy needs a lead-1 matrix".into()))?;
    let m = roles.x_block.len();
    let rows: Vec<&crate::series::JointRow> =
        matrix.rows.iter().filter(|row| row.is_complete()).collect();
    let n = rows.len();

    // Flat column-major-by-row copies keep the O(n^2) loop in cache.
    let mut yfut = Vec::with_capacity(n);
    let mut xb = Vec::with_capacity(n * m);
    let mut yb = Vec::with_capacity(n * m);
    for row in &rows {
        yfut.push(row.cells[yf_col].unwrap());
        for c in roles.x_block.clone() {
            xb.push(row.cells[c].unwrap());
        }
        for c in roles.y_block.clone() {
            yb.push(row.cells[c].unwrap());
        }
    }

    let mut full = 0u64;
    let mut xy = 0u64;
    let mut yfy = 0u64;
    let mut cy = 0u64;
    for i in 0..n {
        let yi = &yb[i * m..(i + 1) * m];
        let xi = &xb[i * m..(i + 1) * m];
        'pairs: for j in (i + 1)..n {
            let yj = &yb[j * m..(j + 1) * m];
            for k in 0..m {
                if (yi[k] - yj[k]).abs() >= r {
                    continue 'pairs;
                }
            }
            cy += 1;
            let xj = &xb[j * m..(j + 1) * m];
            let mut x_near = true;
            for k in 0..m {
                if (xi[k] - xj[k]).abs() >= r {
                    x_near = false;
                    break;
                }
            }
            let f_near = (yfut[i] - yfut[j]).abs() < r;
            if x_near {
                xy += 1;
            }
            if f_near {
                yfy += 1;
            }
            if x_near && f_near {
                full += 1;
            }
        }
    }
    Ok(TePairCounts {
        full,
        xy,
        yfy,
        y: cy,
        rows: n,
    })
}

/// Transfer entropy from correlation sums:
/// TE = log[ C(Y_{t+1}, X_t, Y_t) C(Y_t) / ( C(X_t, Y_t) C(Y_{t+1}, Y_t) ) ].
///
/// The matrix must be fully present (post-MAGR) with lead 1; the direction
/// is X -> Y, the reverse direction uses a matrix with roles swapped. Input
/// series are expected normalized to zero mean and unit standard deviation
/// so that r is on a common scale.
pub fn transfer_entropy(matrix: &JointDataMatrix, r: f64) -> Result<MeasureResult> {
    transfer_entropy_tagged(matrix, r, 1)
}

pub fn transfer_entropy_tagged(matrix: &JointDataMatrix, r: f64, tau: usize) -> Result<MeasureResult> {
    if r <= 0.0 {
        return Err(MagrError::Parameter("transfer entropy needs r > 0".into()));
    }
    let counts = te_pair_counts(matrix, r)?;
    if counts.rows < 50 {
        return Err(MagrError::InsufficientData(format!(
            "transfer entropy needs >= 50 complete rows, got {}",
            counts.rows
        )));
    }
    for (c, which) in [
        (counts.full, "C(Y_{t+1},X_t,Y_t)"),
        (counts.xy, "C(X_t,Y_t)"),
        (counts.yfy, "C(Y_{t+1},Y_t)"),
        (counts.y, "C(Y_t)"),
    ] {
        if c == 0 {
            return Err(MagrError::UndefinedTe { which });
        }
    }
    let value = (counts.full as f64).ln() + (counts.y as f64).ln()
        - (counts.xy as f64).ln()
        - (counts.yfy as f64).ln();
    Ok(MeasureResult {
        value,
        effective_n: counts.rows,
        params: MeasureParams {
            kind: MeasureKind::TransferEntropy,
            tau,
            m: matrix.roles.x_block.len(),
            bins: None,
            radius: Some(r),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_joint_matrix, lagged_pair_matrix, magr_filter, GappySeries, LagSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pair_matrix(xs: &[f64], ys: &[f64]) -> JointDataMatrix {
        lagged_pair_matrix(
            &GappySeries::from_values(xs.to_vec()),
            &GappySeries::from_values(ys.to_vec()),
            0,
        )
        .unwrap()
    }

    /// Textbook Pearson formula, written independently of the estimator.
    fn pearson_oracle(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|v| v * v).sum();
        let syy: f64 = ys.iter().map(|v| v * v).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    #[test]
    fn perfect_correlation_is_one() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let r = cross_correlation(&pair_matrix(&xs, &xs)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_matches_textbook_formula() {
        let xs = [2.1, -0.3, 4.5, 1.1, 0.0, -2.2, 3.3, 0.7, -1.5, 2.9];
        let ys = [1.0, 0.2, 3.9, -0.4, 0.3, -1.8, 2.2, 1.5, -0.9, 2.0];
        let r = cross_correlation(&pair_matrix(&xs, &ys)).unwrap();
        assert!((r.value - pearson_oracle(&xs, &ys)).abs() < 1e-12);
    }

    #[test]
    fn correlation_symmetric_at_lag_zero() {
        let xs = [2.1, -0.3, 4.5, 1.1, 0.0, -2.2, 3.3, 0.7, -1.5, 2.9];
        let ys = [1.0, 0.2, 3.9, -0.4, 0.3, -1.8, 2.2, 1.5, -0.9, 2.0];
        let rxy = cross_correlation(&pair_matrix(&xs, &ys)).unwrap();
        let ryx = cross_correlation(&pair_matrix(&ys, &xs)).unwrap();
        assert!((rxy.value - ryx.value).abs() < 1e-12);
    }

    #[test]
    fn correlation_affine_invariant() {
        let xs = [2.1, -0.3, 4.5, 1.1, 0.0, -2.2, 3.3, 0.7, -1.5, 2.9];
        let ys = [1.0, 0.2, 3.9, -0.4, 0.3, -1.8, 2.2, 1.5, -0.9, 2.0];
        let scaled: Vec<f64> = xs.iter().map(|v| 3.7 * v + 11.0).collect();
        let a = cross_correlation(&pair_matrix(&xs, &ys)).unwrap();
        let b = cross_correlation(&pair_matrix(&scaled, &ys)).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
    }

    #[test]
    fn correlation_error_paths() {
        let xs = [1.0, 2.0];
        assert!(matches!(
            cross_correlation(&pair_matrix(&xs, &xs)),
            Err(MagrError::InsufficientData(_))
        ));
        let flat = [3.0, 3.0, 3.0, 3.0];
        let ys = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            cross_correlation(&pair_matrix(&flat, &ys)),
            Err(MagrError::DegenerateInput(_))
        ));
    }

    #[test]
    fn bins_divisible_case() {
        let vals: Vec<f64> = (1..=10).map(f64::from).collect();
        let bins = equiprobable_bins(&vals, 5).unwrap();
        let mut occ = [0usize; 5];
        for b in bins {
            occ[b] += 1;
        }
        assert_eq!(occ, [2, 2, 2, 2, 2]);
    }

    #[test]
    fn bins_pigeonhole_case() {
        let vals: Vec<f64> = (1..=10).map(f64::from).collect();
        let bins = equiprobable_bins(&vals, 3).unwrap();
        let mut occ = [0usize; 3];
        for b in bins {
            occ[b] += 1;
        }
        occ.sort_unstable();
        assert_eq!(occ, [3, 3, 4]);
    }

    #[test]
    fn bins_all_ties_split_by_rank() {
        let bins = equiprobable_bins(&[7.0, 7.0, 7.0, 7.0], 2).unwrap();
        assert_eq!(bins, vec![0, 0, 1, 1]);
    }

    #[test]
    fn bins_parameter_error() {
        assert!(matches!(
            equiprobable_bins(&[1.0, 2.0, 3.0], 1),
            Err(MagrError::Parameter(_))
        ));
    }

    #[test]
    fn mi_of_identical_series_is_log_b() {
        let xs: Vec<f64> = (0..40).map(f64::from).collect();
        let mi = cross_mutual_information(&pair_matrix(&xs, &xs), Some(4)).unwrap();
        assert!((mi.value - 4.0_f64.ln()).abs() < 1e-12);
    }

    /// Brute-force evaluation of the 2x2 contingency table.
    fn mi_oracle(xs: &[f64], ys: &[f64], b: usize) -> f64 {
        let bx = equiprobable_bins(xs, b).unwrap();
        let by = equiprobable_bins(ys, b).unwrap();
        let n = xs.len() as f64;
        let mut mi = 0.0;
        for ix in 0..b {
            for iy in 0..b {
                let c = bx
                    .iter()
                    .zip(&by)
                    .filter(|(a, b)| **a == ix && **b == iy)
                    .count() as f64;
                if c > 0.0 {
                    let px = bx.iter().filter(|v| **v == ix).count() as f64 / n;
                    let py = by.iter().filter(|v| **v == iy).count() as f64 / n;
                    mi += (c / n) * ((c / n) / (px * py)).ln();
                }
            }
        }
        mi
    }

    #[test]
    fn mi_matches_contingency_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..40).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|v| v * 0.5 + rng.random::<f64>())
            .collect();
        let mi = cross_mutual_information(&pair_matrix(&xs, &ys), Some(2)).unwrap();
        assert!((mi.value - mi_oracle(&xs, &ys, 2)).abs() < 1e-12);
    }

    #[test]
    fn mi_independent_series_near_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let xs: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let mi = cross_mutual_information(&pair_matrix(&xs, &ys), None).unwrap();
        assert!(mi.value >= 0.0);
        // Noise floor from a shuffled surrogate: the plug-in estimator has a
        // positive bias of about (b-1)^2 / 2n even under independence.
        use rand::seq::SliceRandom;
        let mut shuffled = xs.clone();
        shuffled.shuffle(&mut rng);
        let floor = cross_mutual_information(&pair_matrix(&shuffled, &ys), None)
            .unwrap()
            .value;
        assert!(mi.value < 2.0 * floor + 0.01, "mi = {}, floor = {floor}", mi.value);
    }

    #[test]
    fn mi_insufficient_data() {
        let xs: Vec<f64> = (0..5).map(f64::from).collect();
        assert!(matches!(
            cross_mutual_information(&pair_matrix(&xs, &xs), Some(2)),
            Err(MagrError::InsufficientData(_))
        ));
    }

    #[test]
    fn correlation_sum_identical_points() {
        let pts = vec![vec![1.0, 1.0]; 4];
        assert!((correlation_sum(&pts, 0.2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_sum_distant_points() {
        let pts = vec![vec![0.0], vec![0.4]];
        assert_eq!(correlation_sum(&pts, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn correlation_sum_exact_distance_excluded() {
        let pts = vec![vec![0.0], vec![0.2]];
        assert_eq!(correlation_sum(&pts, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn correlation_sum_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.random::<f64>()).collect())
            .collect();
        let r = 0.2;
        let mut count = 0u32;
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                if i < j {
                    let d = pts[i]
                        .iter()
                        .zip(&pts[j])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    if d < r {
                        count += 1;
                    }
                }
            }
        }
        let expected = 2.0 * count as f64 / (20.0 * 19.0);
        assert!((correlation_sum(&pts, r).unwrap() - expected).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn correlation_sum_monotone_in_r(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vec<f64>> = (0..15)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let mut last = 0.0;
            for r in [0.05, 0.1, 0.2, 0.4, 0.8, 1.6] {
                let c = correlation_sum(&pts, r).unwrap();
                prop_assert!(c >= last);
                last = c;
            }
        }
    }

    fn te_matrix(xs: &[f64], ys: &[f64], m: usize) -> JointDataMatrix {
        let spec = LagSpec::new(m, 1, 1).unwrap();
        let matrix = build_joint_matrix(
            &GappySeries::from_values(xs.to_vec()).normalize().unwrap(),
            &GappySeries::from_values(ys.to_vec()).normalize().unwrap(),
            &spec,
        )
        .unwrap();
        magr_filter(&matrix).0
    }

    /// TE recomputed from four standalone normalized correlation sums; the
    /// normalization constants cancel in the ratio.
    #[test]
    fn te_matches_standalone_correlation_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let xs: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = xs.iter().map(|v| v * 0.7 + 0.3 * rng.random::<f64>()).collect();
        let matrix = te_matrix(&xs, &ys, 1);
        let r = 0.5;
        let te = transfer_entropy(&matrix, r).unwrap();

        let rows: Vec<&crate::series::JointRow> = matrix.rows.iter().collect();
        let grab = |cols: &[usize]| -> Vec<Vec<f64>> {
            rows.iter()
                .map(|row| cols.iter().map(|&c| row.cells[c].unwrap()).collect())
                .collect()
        };
        let c_full = correlation_sum(&grab(&[0, 1, 2]), r).unwrap();
        let c_xy = correlation_sum(&grab(&[1, 2]), r).unwrap();
        let c_yfy = correlation_sum(&grab(&[0, 2]), r).unwrap();
        let c_y = correlation_sum(&grab(&[2]), r).unwrap();
        let expected = (c_full * c_y / (c_xy * c_yfy)).ln();
        assert!((te.value - expected).abs() < 1e-12);
    }

    #[test]
    fn te_independent_noise_near_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xs: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let ys: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let te = transfer_entropy(&te_matrix(&xs, &ys, 1), 0.2).unwrap();
        // Noise floor from a time-shuffled surrogate of the X block.
        let mut shuffled = xs.clone();
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut rng);
        let te_sur = transfer_entropy(&te_matrix(&shuffled, &ys, 1), 0.2).unwrap();
        let floor = te_sur.value.abs().max(0.01) * 5.0;
        assert!(te.value.abs() < floor, "te = {}, floor = {}", te.value, floor);
    }

    #[test]
    fn te_insufficient_rows() {
        let xs: Vec<f64> = (0..30).map(f64::from).collect();
        let ys = xs.clone();
        assert!(matches!(
            transfer_entropy(&te_matrix(&xs, &ys, 1), 0.2),
            Err(MagrError::InsufficientData(_))
        ));
    }

    #[test]
    fn te_reports_vanishing_sum() {
        // Spread-out points: no pair is within r on the Y block.
        let xs: Vec<f64> = (0..60).map(f64::from).collect();
        let ys: Vec<f64> = (0..60).map(|v| f64::from(v) * 7.0).collect();
        let err = transfer_entropy(&te_matrix(&xs, &ys, 1), 1e-6).unwrap_err();
        assert!(matches!(err, MagrError::UndefinedTe { .. }));
    }
}
