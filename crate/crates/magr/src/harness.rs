//! Evaluation protocol: generate a system pair, inject gaps, treat them
//! with each method, and compare the measure against a matched-length
//! original. The difference (treated minus original) is the d-measure;
//! zero means the treatment is unbiased.

use crate::error::{MagrError, Result};
use crate::gaps::{self, GapKind, GapPlan};
use crate::measures::{self, MeasureResult};
use crate::series::{build_joint_matrix, lagged_pair_matrix, magr_filter, GappySeries, LagSpec};
use crate::systems::SystemSpec;

/// Gap treatment applied before (or, for MAGR, inside) the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Treatment {
    Magr,
    Gc,
    Li,
    Ci,
    Spi,
    Nni,
    Sti,
}

pub const ALL_TREATMENTS: [Treatment; 7] = [
    Treatment::Magr,
    Treatment::Gc,
    Treatment::Li,
    Treatment::Ci,
    Treatment::Spi,
    Treatment::Nni,
    Treatment::Sti,
];

impl std::fmt::Display for Treatment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Treatment::Magr => "magr",
            Treatment::Gc => "gc",
            Treatment::Li => "li",
            Treatment::Ci => "ci",
            Treatment::Spi => "spi",
            Treatment::Nni => "nni",
            Treatment::Sti => "sti",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Treatment {
    type Err = MagrError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "magr" => Ok(Treatment::Magr),
            "gc" => Ok(Treatment::Gc),
            "li" => Ok(Treatment::Li),
            "ci" => Ok(Treatment::Ci),
            "spi" => Ok(Treatment::Spi),
            "nni" => Ok(Treatment::Nni),
            "sti" => Ok(Treatment::Sti),
            other => Err(MagrError::Parameter(format!("unknown treatment '{other}'"))),
        }
    }
}

/// Which measure to run and with what parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureSpec {
    /// Cross correlation r_XY(tau).
    Cc { tau: usize },
    /// Cross mutual information I_XY(tau); `bins = None` uses
    /// b = max(2, floor(sqrt(effective_n / 5))).
    Cmi { tau: usize, bins: Option<usize> },
    /// Transfer entropy X -> Y with embedding (m, tau) and radius r.
    Te { m: usize, tau: usize, radius: f64 },
}

impl MeasureSpec {
    /// Minimal matched length still accepted by the estimator; used only
    /// for error reporting.
    pub fn name(&self) -> &'static str {
        match self {
            MeasureSpec::Cc { .. } => "cc",
            MeasureSpec::Cmi { .. } => "cmi",
            MeasureSpec::Te { .. } => "te",
        }
    }
}

/// Compute the measure on a (possibly gappy) pair; gappy rows are removed
/// by MAGR inside the joint data matrix. Returns the result together with
/// the number of removed rows N_r.
pub fn measure_pair_magr(
    x: &GappySeries,
    y: &GappySeries,
    spec: &MeasureSpec,
) -> Result<(MeasureResult, usize)> {
    match *spec {
        MeasureSpec::Cc { tau } => {
            let (matrix, removed) = magr_filter(&lagged_pair_matrix(x, y, tau)?);
            Ok((measures::cross_correlation_tau(&matrix, tau)?, removed))
        }
        MeasureSpec::Cmi { tau, bins } => {
            let (matrix, removed) = magr_filter(&lagged_pair_matrix(x, y, tau)?);
            Ok((measures::cross_mutual_information_tau(&matrix, bins, tau)?, removed))
        }
        MeasureSpec::Te { m, tau, radius } => {
            let nx = x.normalize()?;
            let ny = y.normalize()?;
            let lag = LagSpec::new(m, tau, 1)?;
            let (matrix, removed) = magr_filter(&build_joint_matrix(&nx, &ny, &lag)?);
            Ok((measures::transfer_entropy_tagged(&matrix, radius, tau)?, removed))
        }
    }
}

/// Measure on a gap-free pair (no rows removed).
pub fn measure_pair(x: &GappySeries, y: &GappySeries, spec: &MeasureSpec) -> Result<MeasureResult> {
    measure_pair_magr(x, y, spec).map(|(r, _)| r)
}

fn fill_pair(
    x: &GappySeries,
    y: &GappySeries,
    treatment: Treatment,
    sti_seed: u64,
) -> Result<(GappySeries, GappySeries)> {
    Ok(match treatment {
        Treatment::Li => (gaps::fill_linear(x)?, gaps::fill_linear(y)?),
        Treatment::Ci => (gaps::fill_cubic(x)?, gaps::fill_cubic(y)?),
        Treatment::Spi => (gaps::fill_spline(x)?, gaps::fill_spline(y)?),
        Treatment::Nni => (gaps::fill_nearest(x)?, gaps::fill_nearest(y)?),
        Treatment::Sti => (
            gaps::fill_stochastic(x, sti_seed)?,
            gaps::fill_stochastic(y, sti_seed.wrapping_add(1))?,
        ),
        _ => return Err(MagrError::Parameter("fill_pair on a non-fill treatment".into())),
    })
}

/// Treat a gappy pair and compute the measure. Returns the result plus the
/// matched length of the original series for this treatment: N for the
/// gap-filling methods, N - g for gap closure and N - N_r for MAGR.
pub fn treated_measure(
    x: &GappySeries,
    y: &GappySeries,
    treatment: Treatment,
    spec: &MeasureSpec,
    sti_seed: u64,
) -> Result<(MeasureResult, usize)> {
    let n = x.len();
    match treatment {
        Treatment::Magr => {
            let (result, removed) = measure_pair_magr(x, y, spec)?;
            Ok((result, n - removed))
        }
        Treatment::Gc => {
            let xc = gaps::gap_closure(x)?;
            let yc = gaps::gap_closure(y)?;
            // Equal gap counts give equal closed lengths; otherwise both
            // series are truncated to the shorter one.
            let len = xc.len().min(yc.len());
            let result = measure_pair(&xc.truncated(len), &yc.truncated(len), spec)?;
            Ok((result, len))
        }
        _ => {
            let (fx, fy) = fill_pair(x, y, treatment, sti_seed)?;
            Ok((measure_pair(&fx, &fy, spec)?, n))
        }
    }
}

/// Measure on the original pair truncated to the matched length.
pub fn matched_original(
    x: &GappySeries,
    y: &GappySeries,
    matched_len: usize,
    spec: &MeasureSpec,
) -> Result<MeasureResult> {
    measure_pair(&x.truncated(matched_len), &y.truncated(matched_len), spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemSpec,
    pub measure: MeasureSpec,
    pub methods: Vec<Treatment>,
    pub gap_kind: GapKind,
    /// Gap levels as percentages of N, each in (0, 100).
    pub gap_percentages: Vec<f64>,
    pub realizations: usize,
    pub base_seed: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations < 1 {
            return Err(MagrError::Parameter("realizations must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(MagrError::Parameter("at least one method required".into()));
        }
        for &p in &self.gap_percentages {
            if !(0.0 < p && p < 100.0) {
                return Err(MagrError::Parameter(format!(
                    "gap percentage {p} must be in (0, 100)"
                )));
            }
        }
        Ok(())
    }
}

/// Aggregated results for one (method, gap level) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellStats {
    pub method: Treatment,
    pub gap_pct: f64,
    pub n_total: usize,
    pub n_success: usize,
    /// Mean and sample standard deviation of d = treated - original.
    pub mean_d: f64,
    pub std_d: f64,
    /// Mean and sample standard deviation of the treated measure itself.
    pub mean_treated: f64,
    pub std_treated: f64,
    pub mean_original: f64,
    pub mean_effective_n: f64,
    /// Cause of the first failed realization, if any.
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentStats {
    pub cells: Vec<CellStats>,
}

impl ExperimentStats {
    pub fn cell(&self, method: Treatment, gap_pct: f64) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.method == method && (c.gap_pct - gap_pct).abs() < 1e-9)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed derivation; the system stream depends only on the
/// realization index, so changing the gap plan never changes the
/// trajectories.
pub(crate) fn derive_seed(parts: &[u64]) -> u64 {
    let mut acc = 0x243F_6A88_85A3_08D3u64;
    for &p in parts {
        acc = splitmix64(acc ^ p);
    }
    acc
}

const STREAM_SYSTEM: u64 = 1;
const STREAM_GAPS: u64 = 2;
const STREAM_STI: u64 = 3;

#[derive(Default)]
struct CellAccumulator {
    d: Vec<f64>,
    treated: Vec<f64>,
    original: Vec<f64>,
    effective_n: Vec<f64>,
    first_error: Option<String>,
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn sample_std(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

/// Run the full protocol: per realization, generate the pair, inject gaps
/// independently into each series, treat with every method, and record
/// d = treated - matched original. Failed cells are recorded with their
/// error cause, not silently dropped. Fully deterministic given base_seed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentStats> {
    config.validate()?;
    let n = config.system.n;
    let n_methods = config.methods.len();
    let n_pcts = config.gap_percentages.len();
    let mut accs: Vec<CellAccumulator> = (0..n_methods * n_pcts)
        .map(|_| CellAccumulator::default())
        .collect();

    for i in 0..config.realizations {
        let real = i as u64;
        let sys_spec = config
            .system
            .with_seed(derive_seed(&[config.base_seed, STREAM_SYSTEM, real]));
        let (x0, y0) = sys_spec.generate()?;

        for (pi, &pct) in config.gap_percentages.iter().enumerate() {
            let g = ((pct / 100.0) * n as f64).round() as usize;
            let pct_bits = pct.to_bits();
            let plan_x = GapPlan {
                kind: config.gap_kind,
                g,
                seed: derive_seed(&[config.base_seed, STREAM_GAPS, real, pct_bits, 0]),
            };
            let plan_y = GapPlan {
                kind: config.gap_kind,
                g,
                seed: derive_seed(&[config.base_seed, STREAM_GAPS, real, pct_bits, 1]),
            };
            let xg = gaps::inject_gaps(&x0, &plan_x)?;
            let yg = gaps::inject_gaps(&y0, &plan_y)?;

            for (mi, &method) in config.methods.iter().enumerate() {
                let acc = &mut accs[mi * n_pcts + pi];
                let sti_seed = derive_seed(&[config.base_seed, STREAM_STI, real, pct_bits]);
                let outcome = treated_measure(&xg, &yg, method, &config.measure, sti_seed)
                    .and_then(|(treated, matched_len)| {
                        let original = matched_original(&x0, &y0, matched_len, &config.measure)?;
                        Ok((treated, original))
                    });
                match outcome {
                    Ok((treated, original)) => {
                        acc.d.push(treated.value - original.value);
                        acc.treated.push(treated.value);
                        acc.original.push(original.value);
                        acc.effective_n.push(treated.effective_n as f64);
                    }
                    Err(e) => {
                        acc.first_error.get_or_insert_with(|| e.to_string());
                    }
                }
            }
        }
    }

    let mut cells = Vec::with_capacity(accs.len());
    for (mi, &method) in config.methods.iter().enumerate() {
        for (pi, &pct) in config.gap_percentages.iter().enumerate() {
            let acc = &accs[mi * n_pcts + pi];
            cells.push(CellStats {
                method,
                gap_pct: pct,
                n_total: config.realizations,
                n_success: acc.d.len(),
                mean_d: mean(&acc.d),
                std_d: sample_std(&acc.d),
                mean_treated: mean(&acc.treated),
                std_treated: sample_std(&acc.treated),
                mean_original: mean(&acc.original),
                mean_effective_n: mean(&acc.effective_n),
                first_error: acc.first_error.clone(),
            });
        }
    }
    Ok(ExperimentStats { cells })
}

/// Same protocol at several series lengths; results keyed by N.
pub fn length_sweep(config: &ExperimentConfig, lengths: &[usize]) -> Result<Vec<(usize, ExperimentStats)>> {
    lengths
        .iter()
        .map(|&n| {
            let cfg = ExperimentConfig {
                system: config.system.with_length(n),
                ..config.clone()
            };
            Ok((n, run_experiment(&cfg)?))
        })
        .collect()
}

/// One cell of a pairwise connectivity matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixCell {
    Value(f64),
    /// Diagonal of a directed (transfer entropy) matrix.
    NotApplicable,
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    pub names: Vec<String>,
    /// Row-major; for transfer entropy, the row series drives the column
    /// series.
    pub cells: Vec<Vec<MatrixCell>>,
    pub directed: bool,
}

/// Pairwise connectivity matrix over a set of equal-length series, each
/// cell computed via MAGR on that pair's joint matrix. Correlation-type
/// measures yield a symmetric matrix; transfer entropy yields a full
/// directed matrix with the diagonal marked not-applicable.
pub fn pairwise_matrix(series: &[(String, GappySeries)], spec: &MeasureSpec) -> Result<PairwiseMatrix> {
    if series.len() < 2 {
        return Err(MagrError::Input("pairwise matrix needs >= 2 series".into()));
    }
    let n = series[0].1.len();
    if series.iter().any(|(_, s)| s.len() != n) {
        return Err(MagrError::Input("pairwise matrix needs equal-length series".into()));
    }
    let k = series.len();
    let directed = matches!(spec, MeasureSpec::Te { .. });
    let mut cells = vec![vec![MatrixCell::NotApplicable; k]; k];

    let compute = |a: &GappySeries, b: &GappySeries| match measure_pair_magr(a, b, spec) {
        Ok((r, _)) => MatrixCell::Value(r.value),
        Err(e) => MatrixCell::Error(e.to_string()),
    };

    for i in 0..k {
        for j in 0..k {
            if directed {
                if i != j {
                    cells[i][j] = compute(&series[i].1, &series[j].1);
                }
            } else if i <= j {
                let cell = compute(&series[i].1, &series[j].1);
                cells[j][i] = cell.clone();
                cells[i][j] = cell;
            }
        }
    }
    Ok(PairwiseMatrix {
        names: series.iter().map(|(n, _)| n.clone()).collect(),
        cells,
        directed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::SystemKind;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            system: SystemSpec::new(SystemKind::Mvar, 200, 0.0, 0, 200).unwrap(),
            measure: MeasureSpec::Cc { tau: 0 },
            methods: vec![Treatment::Magr, Treatment::Gc, Treatment::Li, Treatment::Sti],
            gap_kind: GapKind::Single,
            gap_percentages: vec![10.0, 30.0],
            realizations: 3,
            base_seed: 42,
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = small_config();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matched_lengths_follow_protocol() {
        let (x0, y0) = SystemSpec::mvar(300, 9).unwrap().generate().unwrap();
        let plan = GapPlan { kind: GapKind::Single, g: 30, seed: 4 };
        let xg = gaps::inject_gaps(&x0, &plan).unwrap();
        let yg = gaps::inject_gaps(&y0, &GapPlan { seed: 5, ..plan }).unwrap();
        let spec = MeasureSpec::Cc { tau: 0 };

        let (_, len_li) = treated_measure(&xg, &yg, Treatment::Li, &spec, 0).unwrap();
        assert_eq!(len_li, 300);
        let (_, len_gc) = treated_measure(&xg, &yg, Treatment::Gc, &spec, 0).unwrap();
        assert_eq!(len_gc, 270);
        let (res, len_magr) = treated_measure(&xg, &yg, Treatment::Magr, &spec, 0).unwrap();
        assert_eq!(len_magr, 300 - (300 - res.effective_n));
    }

    #[test]
    fn magr_without_gaps_gives_zero_d() {
        let (x0, y0) = SystemSpec::mvar(300, 9).unwrap().generate().unwrap();
        let spec = MeasureSpec::Cc { tau: 0 };
        let (treated, matched) = treated_measure(&x0, &y0, Treatment::Magr, &spec, 0).unwrap();
        assert_eq!(matched, 300);
        let original = matched_original(&x0, &y0, matched, &spec).unwrap();
        assert_eq!(treated.value, original.value);
    }

    #[test]
    fn failed_cells_recorded_not_dropped() {
        // m = 2 transfer entropy at 50% gaps on a short series runs out of
        // complete rows.
        let cfg = ExperimentConfig {
            system: SystemSpec::new(SystemKind::Henon, 120, 0.4, 0, 200).unwrap(),
            measure: MeasureSpec::Te { m: 2, tau: 1, radius: 0.2 },
            methods: vec![Treatment::Magr],
            gap_kind: GapKind::Single,
            gap_percentages: vec![50.0],
            realizations: 2,
            base_seed: 7,
        };
        let stats = run_experiment(&cfg).unwrap();
        let cell = stats.cell(Treatment::Magr, 50.0).unwrap();
        assert_eq!(cell.n_total, 2);
        assert!(cell.n_success < 2);
        assert!(cell.first_error.is_some());
    }

    #[test]
    fn symmetric_matrix_with_unit_diagonal() {
        let series: Vec<(String, GappySeries)> = (0..5)
            .map(|i| {
                let (x, _) = SystemSpec::mvar(200, i as u64).unwrap().generate().unwrap();
                (format!("s{i}"), x)
            })
            .collect();
        let m = pairwise_matrix(&series, &MeasureSpec::Cc { tau: 0 }).unwrap();
        assert!(!m.directed);
        for i in 0..5 {
            match &m.cells[i][i] {
                MatrixCell::Value(v) => assert!((v - 1.0).abs() < 1e-9),
                other => panic!("diagonal cell {other:?}"),
            }
            for j in 0..5 {
                assert_eq!(m.cells[i][j], m.cells[j][i]);
            }
        }
    }

    #[test]
    fn te_matrix_diagonal_not_applicable() {
        let series: Vec<(String, GappySeries)> = (0..3)
            .map(|i| {
                let (x, _) = SystemSpec::henon(400, 0.4, i as u64).unwrap().generate().unwrap();
                (format!("s{i}"), x)
            })
            .collect();
        let m = pairwise_matrix(&series, &MeasureSpec::Te { m: 1, tau: 1, radius: 0.2 }).unwrap();
        assert!(m.directed);
        for i in 0..3 {
            assert_eq!(m.cells[i][i], MatrixCell::NotApplicable);
        }
    }
}
