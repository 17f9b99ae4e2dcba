use serde::{Deserialize, Serialize};

use crate::design::LeftFactor;
use crate::error::{Error, Result};
use crate::model::SpikeKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Histogram,
    OracleSweep,
    RecoverySweep,
    DimensionRatio,
    EnergySweep,
}

impl ExperimentKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExperimentKind::Histogram => "histogram",
            ExperimentKind::OracleSweep => "oracle_sweep",
            ExperimentKind::RecoverySweep => "recovery_sweep",
            ExperimentKind::DimensionRatio => "dimension_ratio",
            ExperimentKind::EnergySweep => "energy_sweep",
        }
    }
}

/// Sensing-matrix design as named in a config file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum DesignSpec {
    Gaussian,
    Tf1 {
        alpha: f64,
    },
    Tf2 {
        #[serde(default)]
        left_factor: LeftFactor,
    },
}

impl DesignSpec {
    pub fn label(&self) -> String {
        match self {
            DesignSpec::Gaussian => "gaussian".into(),
            DesignSpec::Tf1 { alpha } => format!("tf1(alpha={alpha})"),
            DesignSpec::Tf2 {
                left_factor: LeftFactor::Identity,
            } => "tf2".into(),
            DesignSpec::Tf2 {
                left_factor: LeftFactor::RandomOrthonormal,
            } => "tf2(random_left)".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DictionaryKind {
    Gaussian,
    Canonical,
    Specified { ratio: f64 },
}

impl DictionaryKind {
    pub fn label(&self) -> String {
        match self {
            DictionaryKind::Gaussian => "gaussian".into(),
            DictionaryKind::Canonical => "canonical".into(),
            DictionaryKind::Specified { ratio } => format!("specified({ratio})"),
        }
    }

    pub fn is_overcomplete(&self) -> bool {
        !matches!(self, DictionaryKind::Canonical)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Oracle,
    Omp,
    Bpdn,
}

impl Estimator {
    pub fn label(&self) -> &'static str {
        match self {
            Estimator::Oracle => "oracle",
            Estimator::Omp => "omp",
            Estimator::Bpdn => "bpdn",
        }
    }
}

/// Optional overrides for the ℓ₁ solver used in recovery sweeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpdnSettings {
    /// Fixed `ε`; when absent `ε² = σ²(m + 2√(2m))`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub penalty: Option<f64>,
}

/// One Monte Carlo experiment, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub nhat: Option<usize>,
    /// Fixed sparsity for measurement- and dimension-axis sweeps.
    #[serde(default)]
    pub s: Option<usize>,
    pub sigma2: f64,
    #[serde(default)]
    pub sparsity_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub measurement_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub dimension_grid: Option<Vec<usize>>,
    pub designs: Vec<DesignSpec>,
    pub dictionary_kind: DictionaryKind,
    #[serde(default)]
    pub estimators: Vec<Estimator>,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(default)]
    pub bins: Option<usize>,
    #[serde(default)]
    pub spike_kind: SpikeKind,
    #[serde(default)]
    pub bpdn: Option<BpdnSettings>,
}

/// A validated sweep axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Axis {
    Sparsity(Vec<usize>),
    Measurements(Vec<usize>),
    Dimension(Vec<usize>),
    Single,
}

/// Concrete dimensions of one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CellDims {
    pub s: usize,
    pub m: usize,
    pub n: usize,
    pub nhat: usize,
}

pub(crate) const MAX_TRIALS: usize = 1 << 32;
pub(crate) const MAX_DESIGNS: usize = 200;
pub(crate) const MAX_CELLS: usize = (1 << 24) - 1;
pub(crate) const DEFAULT_BINS: usize = 20;

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_grid(name: &str, grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(bad(format!("{name} must not be empty")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

fn need(field: Option<usize>, name: &str, experiment: ExperimentKind) -> Result<usize> {
    field.ok_or_else(|| bad(format!("{} requires '{name}'", experiment.label())))
}

/// `n̂ = round(1.2 n)` for overcomplete dictionaries, `n` for the canonical basis.
pub(crate) fn scaled_nhat(kind: &DictionaryKind, n: usize) -> usize {
    if kind.is_overcomplete() {
        (1.2 * n as f64).round() as usize
    } else {
        n
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses either a single config object or an array of them.
    pub fn list_from_json(text: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let items = match value {
            serde_json::Value::Array(items) => items,
            other => vec![other],
        };
        if items.is_empty() {
            return Err(bad("config array is empty"));
        }
        items
            .into_iter()
            .map(|v| {
                let cfg: Self = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub(crate) fn axis(&self) -> Result<Axis> {
        let k = self.experiment;
        let grids = [
            self.sparsity_grid.is_some(),
            self.measurement_grid.is_some(),
            self.dimension_grid.is_some(),
        ];
        let set = grids.iter().filter(|&&g| g).count();
        let axis = match k {
            ExperimentKind::Histogram => {
                if set != 0 {
                    return Err(bad("histogram takes no sweep grid"));
                }
                Axis::Single
            }
            ExperimentKind::OracleSweep => {
                if set != 1 || self.sparsity_grid.is_none() {
                    return Err(bad("oracle_sweep requires exactly 'sparsity_grid'"));
                }
                Axis::Sparsity(self.sparsity_grid.clone().unwrap())
            }
            ExperimentKind::RecoverySweep => {
                if set != 1 || self.dimension_grid.is_some() {
                    return Err(bad(
                        "recovery_sweep requires exactly one of 'sparsity_grid' or 'measurement_grid'",
                    ));
                }
                match (&self.sparsity_grid, &self.measurement_grid) {
                    (Some(g), None) => Axis::Sparsity(g.clone()),
                    (None, Some(g)) => Axis::Measurements(g.clone()),
                    _ => unreachable!(),
                }
            }
            ExperimentKind::DimensionRatio | ExperimentKind::EnergySweep => {
                if set != 1 || self.dimension_grid.is_none() {
                    return Err(bad(format!("{} requires exactly 'dimension_grid'", k.label())));
                }
                Axis::Dimension(self.dimension_grid.clone().unwrap())
            }
        };
        match &axis {
            Axis::Sparsity(g) => check_grid("sparsity_grid", g)?,
            Axis::Measurements(g) => check_grid("measurement_grid", g)?,
            Axis::Dimension(g) => check_grid("dimension_grid", g)?,
            Axis::Single => {}
        }
        Ok(axis)
    }

    /// Dimensions of every cell along the sweep axis, in grid order.
    pub(crate) fn cells(&self) -> Result<Vec<CellDims>> {
        let k = self.experiment;
        let fixed_nhat = |n: usize| -> Result<usize> {
            match (self.dictionary_kind, self.nhat) {
                (DictionaryKind::Canonical, Some(h)) if h != n => {
                    Err(bad(format!("canonical dictionary needs nhat = n, got nhat={h} n={n}")))
                }
                (DictionaryKind::Canonical, _) => Ok(n),
                (_, Some(h)) => Ok(h),
                (_, None) => Err(bad(format!("{} requires 'nhat'", k.label()))),
            }
        };
        let cells = match self.axis()? {
            Axis::Single => {
                let n = need(self.n, "n", k)?;
                vec![CellDims {
                    s: 0,
                    m: need(self.m, "m", k)?,
                    n,
                    nhat: fixed_nhat(n)?,
                }]
            }
            Axis::Sparsity(grid) => {
                let n = need(self.n, "n", k)?;
                let (m, nhat) = (need(self.m, "m", k)?, fixed_nhat(n)?);
                grid.iter().map(|&s| CellDims { s, m, n, nhat }).collect()
            }
            Axis::Measurements(grid) => {
                let n = need(self.n, "n", k)?;
                let (s, nhat) = (need(self.s, "s", k)?, fixed_nhat(n)?);
                grid.iter().map(|&m| CellDims { s, m, n, nhat }).collect()
            }
            Axis::Dimension(grid) => {
                if self.n.is_some() || self.nhat.is_some() {
                    return Err(bad("dimension sweeps derive n and nhat from 'dimension_grid'"));
                }
                let m = need(self.m, "m", k)?;
                let s = match k {
                    ExperimentKind::EnergySweep => self.s.unwrap_or(0),
                    _ => need(self.s, "s", k)?,
                };
                grid.iter()
                    .map(|&n| CellDims {
                        s,
                        m,
                        n,
                        nhat: scaled_nhat(&self.dictionary_kind, n),
                    })
                    .collect()
            }
        };
        Ok(cells)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.experiment;
        if self.trials == 0 || self.trials >= MAX_TRIALS {
            return Err(bad(format!("trials must lie in 1..{MAX_TRIALS}")));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(bad("sigma2 must be finite and >= 0"));
        }
        if self.designs.is_empty() || self.designs.len() > MAX_DESIGNS {
            return Err(bad(format!("need between 1 and {MAX_DESIGNS} designs")));
        }
        for d in &self.designs {
            if let DesignSpec::Tf1 { alpha } = d {
                if !(*alpha >= 0.0) || !alpha.is_finite() {
                    return Err(bad("tf1 alpha must be finite and >= 0"));
                }
            }
        }
        if let DictionaryKind::Specified { ratio } = self.dictionary_kind {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(bad("specified dictionary ratio must lie in (0, 1]"));
            }
        }
        if k == ExperimentKind::Histogram && self.trials != 1 {
            return Err(bad("histogram draws a single design set; trials must be 1"));
        }
        if k == ExperimentKind::DimensionRatio && !(self.sigma2 > 0.0) {
            return Err(bad("dimension_ratio needs sigma2 > 0"));
        }
        if self.bins.is_some() && k != ExperimentKind::Histogram {
            return Err(bad("'bins' only applies to histogram"));
        }
        if self.bpdn.is_some() && !self.estimators.contains(&Estimator::Bpdn) {
            return Err(bad("'bpdn' settings given but bpdn is not an estimator"));
        }
        for grid in [&self.sparsity_grid, &self.measurement_grid, &self.dimension_grid].into_iter().flatten() {
            if grid.len() >= MAX_CELLS {
                return Err(bad(format!("grids are limited to {} points", MAX_CELLS - 1)));
            }
        }
        if self.bins == Some(0) {
            return Err(bad("bins must be >= 1"));
        }
        match k {
            ExperimentKind::Histogram | ExperimentKind::EnergySweep => {
                if !self.estimators.is_empty() {
                    return Err(bad(format!("{} takes no estimators", k.label())));
                }
            }
            ExperimentKind::OracleSweep => {
                if self.estimators != [Estimator::Oracle] {
                    return Err(bad("oracle_sweep requires estimators = [\"oracle\"]"));
                }
            }
            ExperimentKind::RecoverySweep | ExperimentKind::DimensionRatio => {
                if self.estimators.is_empty() {
                    return Err(bad(format!("{} needs at least one estimator", k.label())));
                }
                let mut seen = self.estimators.clone();
                seen.sort_by_key(|e| e.label());
                seen.dedup();
                if seen.len() != self.estimators.len() {
                    return Err(bad("estimators must be distinct"));
                }
            }
        }
        if k == ExperimentKind::DimensionRatio {
            let has_gauss = self.designs.contains(&DesignSpec::Gaussian);
            let has_tf2 = self.designs.iter().any(|d| matches!(d, DesignSpec::Tf2 { .. }));
            if !has_gauss || !has_tf2 {
                return Err(bad("dimension_ratio needs both a tf2 and a gaussian design"));
            }
        }
        let mut labels: Vec<String> = self.designs.iter().map(|d| d.label()).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != self.designs.len() {
            return Err(bad("designs must be distinct"));
        }
        for c in self.cells()? {
            let sparse = matches!(
                k,
                ExperimentKind::OracleSweep | ExperimentKind::RecoverySweep | ExperimentKind::DimensionRatio
            );
            if sparse && c.s == 0 {
                return Err(bad("sparsity must be >= 1"));
            }
            if sparse && c.s >= c.m {
                return Err(bad(format!("need s < m, got s={} m={}", c.s, c.m)));
            }
            if c.m == 0 || c.m > c.n {
                return Err(bad(format!("need 1 <= m <= n, got m={} n={}", c.m, c.n)));
            }
            if c.n > c.nhat {
                return Err(bad(format!("need n <= nhat, got n={} nhat={}", c.n, c.nhat)));
            }
        }
        Ok(())
    }
}
