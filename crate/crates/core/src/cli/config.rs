//! TOML run configuration.
//!
//! ```toml
//! [model]
//! omega_a = 1.0
//! omega_f = 1.0
//! lambda = 0.2
//! alpha = 1.0          # or "auto" (needs lambda and omega_f)
//! cutoff = "auto"      # or an integer n_max
//! convention = "paper" # or "standard"
//!
//! [grids]
//! time = { start = 0.0, stop = 10.0, steps = 100 }
//! alpha = { start = 0.0, stop = 3.0, steps = 300 }
//! fig2_steps = 1000
//! cutoffs = [10, 20, 40, 80, 128]
//!
//! [state]
//! preset = "plus"      # or c_plus/c_minus = [re, im], or file = "state.amp"
//!
//! [run]
//! engine = "analytic"
//! interaction_time = 1.0
//! shots = 0
//! seed = 0
//!
//! [output]
//! dir = "out"
//! svg = false
//! ```
//!
//! Every section and key is optional; unknown keys are rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::analytic::SuperpositionCoeffs;
use crate::hilbert::{AtomFieldVector, Cutoff};
use crate::model::{AlphaPolicy, RabiParams, TimeConvention};
use crate::pipeline::{AtomPreset, Engine, InitialState, PipelineConfig};

use super::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelSection,
    pub grids: GridSection,
    pub state: StateSection,
    pub run: RunSection,
    pub output: OutputSection,
    /// Directory relative paths inside the file are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
enum NumberOrWord<T> {
    Number(T),
    Word(Keyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Keyword {
    Auto,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub omega_a: Option<f64>,
    pub omega_f: Option<f64>,
    pub lambda: Option<f64>,
    alpha: Option<NumberOrWord<f64>>,
    cutoff: Option<NumberOrWord<usize>>,
    #[serde(default)]
    pub convention: ConventionSetting,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionSetting {
    #[default]
    Paper,
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    /// Number of intervals; the grid has `steps + 1` points.
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.steps as f64;
        (0..=self.steps).map(|k| self.start + (self.stop - self.start) * (k as f64 / n)).collect()
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.steps < 1 {
            return Err(CliError::Config(format!("grids.{name}: steps must be >= 1")));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.stop >= self.start) {
            return Err(CliError::Config(format!("grids.{name}: need finite start <= stop")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub time: Grid,
    pub alpha: Grid,
    /// Intervals per panel of the second figure.
    pub fig2_steps: usize,
    pub cutoffs: Vec<usize>,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            time: Grid { start: 0.0, stop: 10.0, steps: 100 },
            alpha: Grid { start: 0.0, stop: 3.0, steps: 300 },
            fig2_steps: 1000,
            cutoffs: vec![10, 20, 40, 80, 128],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetSetting {
    Ground,
    Excited,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub preset: Option<PresetSetting>,
    pub c_plus: Option<[f64; 2]>,
    pub c_minus: Option<[f64; 2]>,
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineSetting {
    #[default]
    Analytic,
    Oracle,
    Both,
}

impl From<EngineSetting> for Engine {
    fn from(e: EngineSetting) -> Self {
        match e {
            EngineSetting::Analytic => Engine::Analytic,
            EngineSetting::Oracle => Engine::Oracle,
            EngineSetting::Both => Engine::Both,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub engine: EngineSetting,
    pub interaction_time: f64,
    pub shots: u64,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { engine: EngineSetting::Analytic, interaction_time: 1.0, shots: 0, seed: 0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub svg: bool,
    /// Write the final joint state of `pipeline` as an amplitude file.
    pub export_state: Option<PathBuf>,
    /// Half-width of the square Wigner window.
    pub wigner_extent: f64,
    pub wigner_resolution: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
            svg: false,
            export_state: None,
            wigner_extent: 4.0,
            wigner_resolution: 81,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grids.time.validate("time")?;
        self.grids.alpha.validate("alpha")?;
        if self.grids.fig2_steps < 1 {
            return Err(CliError::Config("grids.fig2_steps must be >= 1".into()));
        }
        if self.grids.cutoffs.len() < 2 {
            return Err(CliError::Config("grids.cutoffs needs at least two entries".into()));
        }
        let m = &self.model;
        if matches!(m.alpha, Some(NumberOrWord::Word(Keyword::Auto))) && (m.lambda.is_none() || m.omega_f.is_none()) {
            return Err(CliError::Config("alpha = \"auto\" requires model.lambda and model.omega_f".into()));
        }
        let s = &self.state;
        if s.c_plus.is_some() != s.c_minus.is_some() {
            return Err(CliError::Config("state.c_plus and state.c_minus go together".into()));
        }
        let sources = [s.preset.is_some(), s.c_plus.is_some(), s.file.is_some()];
        if sources.iter().filter(|&&b| b).count() > 1 {
            return Err(CliError::Config("state: give one of preset, c_plus/c_minus, file".into()));
        }
        if self.output.wigner_resolution < 2 || self.output.wigner_extent.is_nan() || self.output.wigner_extent <= 0.0 {
            return Err(CliError::Config("output: wigner_resolution >= 2 and wigner_extent > 0".into()));
        }
        self.params()?;
        Ok(())
    }

    pub fn params(&self) -> Result<RabiParams, CliError> {
        let m = &self.model;
        let policy = match m.alpha {
            None => AlphaPolicy::Fixed(1.0),
            Some(NumberOrWord::Number(a)) => AlphaPolicy::Fixed(a),
            Some(NumberOrWord::Word(Keyword::Auto)) => AlphaPolicy::AutoConsistent,
        };
        RabiParams::new(m.omega_a.unwrap_or(1.0), m.omega_f.unwrap_or(1.0), m.lambda.unwrap_or(0.0), policy)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Explicit cutoff, if the file fixes one.
    pub fn cutoff(&self) -> Option<Cutoff> {
        match self.model.cutoff {
            Some(NumberOrWord::Number(n)) => Some(Cutoff::new(n)),
            _ => None,
        }
    }

    pub fn convention(&self) -> TimeConvention {
        match self.model.convention {
            ConventionSetting::Paper => TimeConvention::Paper,
            ConventionSetting::Standard => TimeConvention::Standard,
        }
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Initial state from `[state]`; the `plus` preset when nothing is given.
    pub fn initial_state(&self) -> Result<InitialState, CliError> {
        let s = &self.state;
        if let (Some(p), Some(m)) = (s.c_plus, s.c_minus) {
            let c = SuperpositionCoeffs::normalized(C64::new(p[0], p[1]), C64::new(m[0], m[1]))
                .map_err(|e| CliError::Config(e.to_string()))?;
            return Ok(InitialState::Coefficients(c));
        }
        if let Some(file) = &s.file {
            let path = self.resolve(file);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let state = AtomFieldVector::from_amplitude_text(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            return Ok(InitialState::Joint(state));
        }
        let preset = match s.preset.unwrap_or(PresetSetting::Plus) {
            PresetSetting::Ground => AtomPreset::Ground,
            PresetSetting::Excited => AtomPreset::Excited,
            PresetSetting::Plus => AtomPreset::Plus,
            PresetSetting::Minus => AtomPreset::Minus,
        };
        Ok(preset.into())
    }

    pub fn pipeline_config(&self) -> Result<PipelineConfig, CliError> {
        let initial = self.initial_state()?;
        let mut cutoff = self.cutoff();
        if let (InitialState::Joint(j), None) = (&initial, cutoff) {
            cutoff = Some(j.cutoff());
        }
        let mut pc = PipelineConfig::new(initial, self.params()?, self.run.interaction_time);
        pc.engine = self.run.engine.into();
        pc.cutoff = cutoff;
        pc.convention = self.convention();
        pc.shots = self.run.shots;
        pc.seed = self.run.seed;
        Ok(pc)
    }
}
