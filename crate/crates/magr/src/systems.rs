//! Seeded generators for the two benchmark systems: a bivariate linear
//! autoregressive process driven by Gaussian white noise, and the
//! uni-directionally coupled Henon map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{MagrError, Result};
use crate::series::GappySeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Mvar,
    Henon,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SystemKind::Mvar => write!(f, "mvar"),
            SystemKind::Henon => write!(f, "henon"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub n: usize,
    /// Coupling strength C in [0, 1] (Henon map only).
    pub coupling: f64,
    pub seed: u64,
    /// Warm-up samples discarded before the output window.
    pub transient: usize,
}

pub const DEFAULT_TRANSIENT: usize = 1000;

/// Restart cap for Henon trajectories escaping the attractor.
const HENON_MAX_RESTARTS: usize = 100;
const HENON_ESCAPE: f64 = 10.0;

impl SystemSpec {
    pub fn mvar(n: usize, seed: u64) -> Result<Self> {
        Self::new(SystemKind::Mvar, n, 0.0, seed, DEFAULT_TRANSIENT)
    }

    pub fn henon(n: usize, coupling: f64, seed: u64) -> Result<Self> {
        Self::new(SystemKind::Henon, n, coupling, seed, DEFAULT_TRANSIENT)
    }

    pub fn new(kind: SystemKind, n: usize, coupling: f64, seed: u64, transient: usize) -> Result<Self> {
        if n < 100 {
            return Err(MagrError::Parameter(format!("series length {n} must be >= 100")));
        }
        if transient < 100 {
            return Err(MagrError::Parameter(format!("transient {transient} must be >= 100")));
        }
        if kind == SystemKind::Henon && !(0.0..=1.0).contains(&coupling) {
            return Err(MagrError::Parameter(format!(
                "coupling {coupling} must be in [0, 1]"
            )));
        }
        Ok(Self { kind, n, coupling, seed, transient })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_length(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// Generate the (x, y) pair for this spec.
    pub fn generate(&self) -> Result<(GappySeries, GappySeries)> {
        match self.kind {
            SystemKind::Mvar => gen_mvar(self),
            SystemKind::Henon => gen_henon(self),
        }
    }
}

/// X_t = 1.2 X_{t-1} - 0.95 X_{t-2} + W^X_t,
/// Y_t = -0.5 X_{t-1} + 0.4 Y_{t-9} + W^Y_t,
/// with zero initial conditions; values before t = 0 are treated as zero.
fn mvar_path(total: usize, mut noise: impl FnMut() -> (f64, f64)) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; total];
    let mut y = vec![0.0; total];
    let at = |v: &[f64], t: isize| if t < 0 { 0.0 } else { v[t as usize] };
    for t in 0..total {
        let (wx, wy) = noise();
        let ti = t as isize;
        x[t] = 1.2 * at(&x, ti - 1) - 0.95 * at(&x, ti - 2) + wx;
        y[t] = -0.5 * at(&x, ti - 1) + 0.4 * at(&y, ti - 9) + wy;
    }
    (x, y)
}

/// Simulate the linear autoregressive pair with independent standard
/// Gaussian innovations, discarding the transient.
pub fn gen_mvar(spec: &SystemSpec) -> Result<(GappySeries, GappySeries)> {
    if spec.kind != SystemKind::Mvar {
        return Err(MagrError::Parameter("gen_mvar called with a non-mvar spec".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.transient + spec.n;
    let (x, y) = mvar_path(total, || {
        (rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    Ok((
        GappySeries::from_values(x[spec.transient..].to_vec()),
        GappySeries::from_values(y[spec.transient..].to_vec()),
    ))
}

/// Iterate X_{t+1} = 1.4 - X_t^2 + 0.3 X_{t-1},
/// Y_{t+1} = 1.4 - C X_t Y_t - (1 - C) Y_t^2 + 0.3 Y_{t-1}.
/// Initial conditions drawn uniformly from [0, 0.5]; trajectories escaping
/// |value| > 10 restart with a fresh draw.
pub fn gen_henon(spec: &SystemSpec) -> Result<(GappySeries, GappySeries)> {
    if spec.kind != SystemKind::Henon {
        return Err(MagrError::Parameter("gen_henon called with a non-henon spec".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.transient + spec.n;
    let c = spec.coupling;
    'restart: for _ in 0..HENON_MAX_RESTARTS {
        let mut x = vec![0.0; total];
        let mut y = vec![0.0; total];
        x[0] = rng.random_range(0.0..0.5);
        x[1] = rng.random_range(0.0..0.5);
        y[0] = rng.random_range(0.0..0.5);
        y[1] = rng.random_range(0.0..0.5);
        for t in 1..total - 1 {
            x[t + 1] = 1.4 - x[t] * x[t] + 0.3 * x[t - 1];
            y[t + 1] = 1.4 - c * x[t] * y[t] - (1.0 - c) * y[t] * y[t] + 0.3 * y[t - 1];
            if x[t + 1].abs() > HENON_ESCAPE || y[t + 1].abs() > HENON_ESCAPE {
                continue 'restart;
            }
        }
        return Ok((
            GappySeries::from_values(x[spec.transient..].to_vec()),
            GappySeries::from_values(y[spec.transient..].to_vec()),
        ));
    }
    Err(MagrError::Generation(format!(
        "henon trajectory diverged in {HENON_MAX_RESTARTS} restarts (seed {})",
        spec.seed
    )))
}
