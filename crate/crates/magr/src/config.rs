//! Experiment configuration files: flat `key = value` lines grouped under
//! `[section]` headers, `#` comments. See the README for the schema.
//!
//! ```text
//! [system]
//! kind = henon        # mvar | henon
//! n = 1500
//! coupling = 0.4      # henon only
//! transient = 1000
//!
//! [measure]
//! kind = te           # cc | cmi | te
//! tau = 1
//! m = 2               # te only
//! r = 0.2             # te only
//! # b = 8             # cmi only; default sqrt(n_eff/5)
//!
//! [gaps]
//! kind = single       # single | fixed_block | varying_block
//! percentages = 5,10,15,20,25,30,35,40,45,50
//! # block_size = 10   # fixed_block
//! # block_min = 1     # varying_block
//! # block_max = 15
//!
//! [experiment]
//! methods = magr,gc,li,ci,spi,nni,sti
//! realizations = 50
//! base_seed = 1
//! # lengths = 500,1500,2500   # optional length sweep
//! ```

use std::collections::HashMap;
use std::path::Path;

use crate::error::{MagrError, Result};
use crate::gaps::GapKind;
use crate::harness::{ExperimentConfig, MeasureSpec, Treatment};
use crate::systems::{SystemKind, SystemSpec, DEFAULT_TRANSIENT};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentFile {
    pub config: ExperimentConfig,
    /// When present, run a length sweep over these N values.
    pub lengths: Option<Vec<usize>>,
}

fn parse_sections(text: &str) -> Result<HashMap<String, HashMap<String, String>>> {
    let mut sections: HashMap<String, HashMap<String, String>> = HashMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = name.trim().to_lowercase();
            sections.entry(current.clone()).or_default();
        } else if let Some((k, v)) = line.split_once('=') {
            if current.is_empty() {
                return Err(MagrError::Config(format!(
                    "line {}: key before any [section]",
                    lineno + 1
                )));
            }
            sections
                .get_mut(&current)
                .unwrap()
                .insert(k.trim().to_lowercase(), v.trim().to_string());
        } else {
            return Err(MagrError::Config(format!(
                "line {}: expected 'key = value' or '[section]'",
                lineno + 1
            )));
        }
    }
    Ok(sections)
}

struct Section<'a> {
    name: &'a str,
    map: &'a HashMap<String, String>,
}

impl<'a> Section<'a> {
    fn get(&self, key: &str) -> Result<&'a str> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| MagrError::Config(format!("[{}] missing key '{key}'", self.name)))
    }

    fn opt(&self, key: &str) -> Option<&'a str> {
        self.map.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.get(key)?;
        raw.parse().map_err(|_| {
            MagrError::Config(format!("[{}] cannot parse '{key} = {raw}'", self.name))
        })
    }

    fn parse_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.opt(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                MagrError::Config(format!("[{}] cannot parse '{key} = {raw}'", self.name))
            }),
        }
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let raw = self.get(key)?;
        raw.split(',')
            .map(|s| {
                s.trim().parse().map_err(|_| {
                    MagrError::Config(format!("[{}] bad list element '{s}' in '{key}'", self.name))
                })
            })
            .collect()
    }
}

pub fn load_experiment(path: &Path) -> Result<ExperimentFile> {
    parse_experiment(&std::fs::read_to_string(path)?)
}

pub fn parse_experiment(text: &str) -> Result<ExperimentFile> {
    let sections = parse_sections(text)?;
    let section = |name: &'static str| -> Result<Section<'_>> {
        sections
            .get(name)
            .map(|map| Section { name, map })
            .ok_or_else(|| MagrError::Config(format!("missing [{name}] section")))
    };

    let sys = section("system")?;
    let kind = match sys.get("kind")? {
        "mvar" => SystemKind::Mvar,
        "henon" => SystemKind::Henon,
        other => return Err(MagrError::Config(format!("unknown system kind '{other}'"))),
    };
    let system = SystemSpec::new(
        kind,
        sys.parse("n")?,
        sys.parse_opt("coupling")?.unwrap_or(0.0),
        0, // per-realization seeds are derived from base_seed
        sys.parse_opt("transient")?.unwrap_or(DEFAULT_TRANSIENT),
    )?;

    let meas = section("measure")?;
    let tau: usize = meas.parse_opt("tau")?.unwrap_or(0);
    let measure = match meas.get("kind")? {
        "cc" => MeasureSpec::Cc { tau },
        "cmi" => MeasureSpec::Cmi { tau, bins: meas.parse_opt("b")? },
        "te" => MeasureSpec::Te {
            m: meas.parse_opt("m")?.unwrap_or(1),
            tau: if tau == 0 { 1 } else { tau },
            radius: meas.parse_opt("r")?.unwrap_or(0.2),
        },
        other => return Err(MagrError::Config(format!("unknown measure kind '{other}'"))),
    };

    let gaps = section("gaps")?;
    let gap_kind = match gaps.get("kind")? {
        "single" => GapKind::Single,
        "fixed_block" => GapKind::FixedBlock { size: gaps.parse("block_size")? },
        "varying_block" => GapKind::VaryingBlock {
            min: gaps.parse("block_min")?,
            max: gaps.parse("block_max")?,
        },
        other => return Err(MagrError::Config(format!("unknown gap kind '{other}'"))),
    };
    let gap_percentages: Vec<f64> = gaps.parse_list("percentages")?;

    let exp = section("experiment")?;
    let methods: Vec<Treatment> = exp.parse_list("methods")?;
    let config = ExperimentConfig {
        system,
        measure,
        methods,
        gap_kind,
        gap_percentages,
        realizations: exp.parse_opt("realizations")?.unwrap_or(50),
        base_seed: exp.parse_opt("base_seed")?.unwrap_or(0),
    };
    config.validate()?;
    let lengths = match exp.opt("lengths") {
        Some(_) => Some(exp.parse_list("lengths")?),
        None => None,
    };
    Ok(ExperimentFile { config, lengths })
}
