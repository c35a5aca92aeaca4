//! Gappy time series and the lagged joint data matrix.
//!
//! A gap is a first-class absent value, never a sentinel number. Every
//! connectivity measure in this crate operates on a [`JointDataMatrix`]:
//! time-ordered rows pairing a target's (possibly future) value with lagged
//! values of both series. Measure-adapted gap removal keeps only the rows
//! with no absent cell.

use std::ops::Range;

use crate::error::{MagrError, Result};

/// A time-indexed sequence of optional observations, time steps t = 1..N.
#[derive(Debug, Clone, PartialEq)]
pub struct GappySeries {
    values: Vec<Option<f64>>,
}

impl GappySeries {
    pub fn new(values: Vec<Option<f64>>) -> Self {
        Self { values }
    }

    /// A gap-free series from plain values.
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Value at 1-based time step `t`.
    pub fn at(&self, t: usize) -> Option<f64> {
        self.values[t - 1]
    }

    /// Number of absent entries g.
    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn is_gap_free(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }

    /// Present values in time order.
    pub fn present_values(&self) -> Vec<f64> {
        self.values.iter().filter_map(|v| *v).collect()
    }

    /// The first `n` time steps.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            values: self.values[..n.min(self.values.len())].to_vec(),
        }
    }

    /// Shift/scale present values to sample mean 0 and sample standard
    /// deviation 1 (computed over present values only, n-1 denominator).
    /// Absent entries stay absent.
    pub fn normalize(&self) -> Result<Self> {
        let present = self.present_values();
        if present.len() < 2 {
            return Err(MagrError::DegenerateInput(
                "normalize needs at least 2 present values".into(),
            ));
        }
        let n = present.len() as f64;
        let mean = present.iter().sum::<f64>() / n;
        let var = present.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        if var <= 0.0 {
            return Err(MagrError::DegenerateInput(
                "normalize needs non-zero variance".into(),
            ));
        }
        let sd = var.sqrt();
        Ok(Self {
            values: self
                .values
                .iter()
                .map(|v| v.map(|x| (x - mean) / sd))
                .collect(),
        })
    }
}

/// Lag structure of the joint data matrix: embedding dimension `m`, delay
/// `tau`, and `lead` future steps of the target (0 for correlation-type
/// measures, 1 for transfer entropy).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagSpec {
    pub m: usize,
    pub tau: usize,
    pub lead: usize,
}

impl LagSpec {
    pub fn new(m: usize, tau: usize, lead: usize) -> Result<Self> {
        if m < 1 {
            return Err(MagrError::Parameter("embedding dimension m must be >= 1".into()));
        }
        if tau < 1 {
            return Err(MagrError::Parameter("delay tau must be >= 1".into()));
        }
        if lead > 1 {
            return Err(MagrError::Parameter("lead must be 0 or 1".into()));
        }
        Ok(Self { m, tau, lead })
    }

    /// Time steps lost to lags at the start of the series.
    pub fn warmup(&self) -> usize {
        (self.m - 1) * self.tau
    }
}

/// Which cells belong to the target's future value, the X lag block and the
/// Y lag block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnRoles {
    pub y_future: Option<usize>,
    pub x_block: Range<usize>,
    pub y_block: Range<usize>,
}

/// One row of the joint data matrix, at 1-based time step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointRow {
    pub t: usize,
    pub cells: Vec<Option<f64>>,
}

impl JointRow {
    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| c.is_some())
    }
}

/// Time-ordered rows of lagged cells, possibly with missing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDataMatrix {
    pub rows: Vec<JointRow>,
    pub roles: ColumnRoles,
    pub n_cols: usize,
}

impl JointDataMatrix {
    /// Number of rows with no missing cell.
    pub fn effective_count(&self) -> usize {
        self.rows.iter().filter(|r| r.is_complete()).count()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Build the joint data matrix for series `x` and `y` under `spec`.
///
/// For `lead = 1` each row at time t holds
/// `(y_{t+1}, x_t, ..., x_{t-(m-1)tau}, y_t, ..., y_{t-(m-1)tau})`;
/// for `lead = 0` the future column is dropped, so `(m = 1, tau = 1,
/// lead = 0)` yields the plain pairs `(x_t, y_t)`. Rows exist for
/// `(m-1)tau + 1 <= t <= N - lead`, absences preserved.
pub fn build_joint_matrix(x: &GappySeries, y: &GappySeries, spec: &LagSpec) -> Result<JointDataMatrix> {
    if x.len() != y.len() {
        return Err(MagrError::Input(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    let warmup = spec.warmup();
    if n <= warmup + spec.lead {
        return Err(MagrError::InsufficientData(format!(
            "series of length {n} too short for m={}, tau={}, lead={}",
            spec.m, spec.tau, spec.lead
        )));
    }

    let offset = if spec.lead > 0 { 1 } else { 0 };
    let n_cols = offset + 2 * spec.m;
    let roles = ColumnRoles {
        y_future: (spec.lead > 0).then_some(0),
        x_block: offset..offset + spec.m,
        y_block: offset + spec.m..offset + 2 * spec.m,
    };

    let mut rows = Vec::with_capacity(n - warmup - spec.lead);
    for t in (warmup + 1)..=(n - spec.lead) {
        let mut cells = Vec::with_capacity(n_cols);
        if spec.lead > 0 {
            cells.push(y.at(t + spec.lead));
        }
        for k in 0..spec.m {
            cells.push(x.at(t - k * spec.tau));
        }
        for k in 0..spec.m {
            cells.push(y.at(t - k * spec.tau));
        }
        rows.push(JointRow { t, cells });
    }
    Ok(JointDataMatrix { rows, roles, n_cols })
}

/// Two-column matrix of lagged pairs `(x_t, y_{t+tau})`, the substrate of
/// the delayed correlation measures. `tau = 0` gives the synchronous pairs.
pub fn lagged_pair_matrix(x: &GappySeries, y: &GappySeries, tau: usize) -> Result<JointDataMatrix> {
    if x.len() != y.len() {
        return Err(MagrError::Input(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n <= tau {
        return Err(MagrError::InsufficientData(format!(
            "series of length {n} too short for lag tau={tau}"
        )));
    }
    let rows = (1..=n - tau)
        .map(|t| JointRow {
            t,
            cells: vec![x.at(t), y.at(t + tau)],
        })
        .collect();
    Ok(JointDataMatrix {
        rows,
        roles: ColumnRoles {
            y_future: None,
            x_block: 0..1,
            y_block: 1..2,
        },
        n_cols: 2,
    })
}

/// Measure-adapted gap removal: keep only rows with no missing cell.
/// Returns the reduced matrix and the number of removed rows N_r. Retained
/// rows keep their original time indices.
pub fn magr_filter(matrix: &JointDataMatrix) -> (JointDataMatrix, usize) {
    let rows: Vec<JointRow> = matrix
        .rows
        .iter()
        .filter(|r| r.is_complete())
        .cloned()
        .collect();
    let removed = matrix.rows.len() - rows.len();
    (
        JointDataMatrix {
            rows,
            roles: matrix.roles.clone(),
            n_cols: matrix.n_cols,
        },
        removed,
    )
}

/// Upper bound d = m*g_x + (m+1)*g_y on the rows MAGR removes from a
/// transfer entropy matrix (lead = 1, tau = 1). Consecutive or synchronous
/// gaps remove fewer.
pub fn discard_bound(m: usize, g_x: usize, g_y: usize) -> usize {
    m * g_x + (m + 1) * g_y
}
