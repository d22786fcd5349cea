//! End-to-end generator: atom preparation, rotation, cavity interaction,
//! inverse rotation and atomic detection.
//!
//! The cavity stage is generated by the rotated Hamiltonian sandwiched
//! between the two physical rotations, so the net map on the lab state is
//! `exp(±iHt)`. The analytic engine expands the initial state on the two
//! approximate eigenstates and evolves the coefficients; the oracle engine
//! propagates the truncated rotated Hamiltonian exactly.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::analytic::{eigenstate, energy, Sign, SuperpositionCoeffs};
use crate::error::{Error, Result};
use crate::hilbert::{
    coherent, tensor_state, AtomFieldVector, AtomLevel, AtomState, Cutoff, FieldVector, NORMALIZED_TOL,
};
use crate::measurement::{
    cat_fidelity, measure_atom, pointer_probabilities, sample, CatTarget, Counts, PointerMode, PointerReadout,
};
use crate::model::{hamiltonian_rotated, rotation_y, AlphaPolicy, RabiParams, TimeConvention};
use crate::oracle::{eigendecompose, fidelity};

/// A branch gets a named label only at or above this fidelity.
pub const LABEL_THRESHOLD: f64 = 0.99;

/// Analytic mode refuses initial states with more weight than this outside
/// `span{psi_+, psi_-}`.
pub const ANALYTIC_RESIDUAL_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomPreset {
    Ground,
    Excited,
    /// `(|g> + |e>)/sqrt 2`
    Plus,
    /// `(|g> - |e>)/sqrt 2`
    Minus,
}

impl AtomPreset {
    pub fn state(self) -> AtomState {
        match self {
            AtomPreset::Ground => AtomState::ground(),
            AtomPreset::Excited => AtomState::excited(),
            AtomPreset::Plus => AtomState::plus(),
            AtomPreset::Minus => AtomState::minus(),
        }
    }
}

/// What leaves the oven.
#[derive(Debug, Clone)]
pub enum InitialState {
    /// `atom ⊗ |alpha>`
    Atom(AtomState),
    /// `c_+ psi_+ + c_- psi_-` directly. Product states cannot reach every
    /// coefficient pair (e.g. `(1, 0)` for `alpha != 0`).
    Coefficients(SuperpositionCoeffs),
    /// Arbitrary joint state, e.g. read from an amplitude file.
    Joint(AtomFieldVector),
}

impl From<AtomPreset> for InitialState {
    fn from(p: AtomPreset) -> Self {
        InitialState::Atom(p.state())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Oracle,
    /// Oracle result reported, analytic run alongside for comparison.
    Both,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub initial: InitialState,
    pub params: RabiParams,
    pub interaction_time: f64,
    pub engine: Engine,
    /// `None` chooses the automatic cutoff for the current alpha.
    pub cutoff: Option<Cutoff>,
    pub convention: TimeConvention,
    /// 0 means distribution only.
    pub shots: u64,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(initial: impl Into<InitialState>, params: RabiParams, interaction_time: f64) -> Self {
        PipelineConfig {
            initial: initial.into(),
            params,
            interaction_time,
            engine: Engine::Analytic,
            cutoff: None,
            convention: TimeConvention::Paper,
            shots: 0,
            seed: 0,
        }
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff.unwrap_or_else(|| self.params.auto_cutoff())
    }

    fn validate(&self) -> Result<()> {
        if !(self.interaction_time >= 0.0 && self.interaction_time.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "interaction_time = {} must be finite and >= 0",
                self.interaction_time
            )));
        }
        match &self.initial {
            InitialState::Atom(a) if (a.norm_sqr() - 1.0).abs() > NORMALIZED_TOL => {
                Err(Error::InvalidParameter(format!("atom_init has norm^2 {}", a.norm_sqr())))
            }
            InitialState::Coefficients(c) if !c.is_normalized() => {
                Err(Error::InvalidParameter(format!("|c+|^2 + |c-|^2 = {}", c.weight())))
            }
            InitialState::Joint(j) if j.cutoff() != self.cutoff() => {
                Err(Error::DimensionMismatch { expected: self.cutoff().joint_dim(), found: j.dim() })
            }
            InitialState::Joint(j) if !j.is_normalized() => {
                Err(Error::InvalidParameter(format!("initial state has norm^2 {}", j.norm_sqr())))
            }
            _ => Ok(()),
        }
    }
}

/// `c_± = <psi_±|initial>` and the weight the pair misses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub coeffs: SuperpositionCoeffs,
    pub residual_weight: f64,
}

pub fn coefficients_from_initial(atom_init: &AtomState, params: &RabiParams, cutoff: Cutoff) -> Result<Projection> {
    let joint = tensor_state(atom_init, &coherent(params.alpha(), cutoff)?);
    project_joint(&joint, params)
}

fn project_joint(joint: &AtomFieldVector, params: &RabiParams) -> Result<Projection> {
    let cut = joint.cutoff();
    let c_plus = eigenstate(Sign::Plus, params, cut)?.inner(joint)?;
    let c_minus = eigenstate(Sign::Minus, params, cut)?.inner(joint)?;
    let coeffs = SuperpositionCoeffs::new(c_plus, c_minus);
    Ok(Projection { coeffs, residual_weight: (joint.norm_sqr() - coeffs.weight()).max(0.0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    Cat(CatTarget),
    Unclassified,
}

impl BranchLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchLabel::Cat(t) => t.label(),
            BranchLabel::Unclassified => "unclassified_superposition",
        }
    }
}

/// One detector outcome and what it leaves in the cavity.
#[derive(Debug, Clone)]
pub struct Branch {
    pub level: AtomLevel,
    pub probability: f64,
    pub post_field: Option<FieldVector>,
    pub label: BranchLabel,
    /// Best fidelity over the reference states, labeled or not.
    pub fidelity: f64,
    /// Which reference state attained `fidelity`.
    pub best_match: Option<CatTarget>,
    /// Pointer readout treating `|±alpha>` as orthogonal. The analytic engine
    /// reads it off the closed-form coefficients, so it exists even at
    /// `alpha = 0`; otherwise it is `None` when the pointers coincide.
    pub pointer_idealized: Option<PointerReadout>,
    pub pointer_exact: Option<PointerReadout>,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub alpha: f64,
    pub cutoff: Cutoff,
    pub engine: Engine,
    /// Ground branch first.
    pub branches: [Branch; 2],
    pub counts: Option<Counts>,
    /// Present whenever the initial state was expanded on `psi_±`.
    pub projection: Option<Projection>,
    /// `|<analytic|oracle>|^2` when both engines ran.
    pub engine_fidelity: Option<f64>,
    /// Squared norm after each unitary stage.
    pub stage_norms: Vec<(&'static str, f64)>,
    pub final_state: AtomFieldVector,
}

impl PipelineResult {
    pub fn branch(&self, level: AtomLevel) -> &Branch {
        &self.branches[level.index()]
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

struct Evolved {
    state: AtomFieldVector,
    /// Coefficients of `|alpha>` and `|-alpha>` per atomic level.
    formal_pointer: Option<[(C64, C64); 2]>,
    stage_norms: Vec<(&'static str, f64)>,
}

fn initial_joint(cfg: &PipelineConfig, cut: Cutoff) -> Result<AtomFieldVector> {
    match &cfg.initial {
        InitialState::Atom(a) => Ok(tensor_state(a, &coherent(cfg.params.alpha(), cut)?)),
        InitialState::Coefficients(c) => {
            let p = eigenstate(Sign::Plus, &cfg.params, cut)?;
            let m = eigenstate(Sign::Minus, &cfg.params, cut)?;
            AtomFieldVector::combination(&[(c.c_plus, &p), (c.c_minus, &m)])?.normalized()
        }
        InitialState::Joint(j) => Ok(j.clone()),
    }
}

fn run_analytic(cfg: &PipelineConfig, projection: &Projection, cut: Cutoff) -> Result<Evolved> {
    if projection.residual_weight > ANALYTIC_RESIDUAL_LIMIT {
        return Err(Error::OutsideEigenspan { weight: projection.residual_weight });
    }
    let p = &cfg.params;
    let t = cfg.interaction_time;
    let s = cfg.convention.sign();
    let wp = projection.coeffs.c_plus * C64::from_polar(1.0, s * energy(Sign::Plus, p) * t);
    let wm = projection.coeffs.c_minus * C64::from_polar(1.0, s * energy(Sign::Minus, p) * t);
    let psi_p = eigenstate(Sign::Plus, p, cut)?;
    let psi_m = eigenstate(Sign::Minus, p, cut)?;
    let raw = AtomFieldVector::combination(&[(wp, &psi_p), (wm, &psi_m)])?;
    let w = raw.norm_sqr();
    // psi_+ = ½(|g>(|a> + |-a>) + |e>(|a> - |-a>)), psi_- with the signs of |-a> swapped
    let even = (wp + wm) * 0.5;
    let odd = (wp - wm) * 0.5;
    Ok(Evolved {
        state: raw.normalized()?,
        formal_pointer: Some([(even, odd), (even, -odd)]),
        stage_norms: vec![("coefficients", projection.coeffs.weight()), ("evolved", w)],
    })
}

fn run_oracle(cfg: &PipelineConfig, psi0: &AtomFieldVector, cut: Cutoff) -> Result<Evolved> {
    let rotated = rotation_y(FRAC_PI_2, cut).apply(psi0)?;
    let spectrum = eigendecompose(&hamiltonian_rotated(&cfg.params, cut))?;
    let evolved = spectrum.propagate(&rotated, cfg.interaction_time, cfg.convention)?;
    let back = rotation_y(-FRAC_PI_2, cut).apply(&evolved)?;
    let stage_norms =
        vec![("rotated", rotated.norm_sqr()), ("evolved", evolved.norm_sqr()), ("rotated_back", back.norm_sqr())];
    let (state, _) = back.normalize()?;
    Ok(Evolved { state, formal_pointer: None, stage_norms })
}

fn best_match(field: &FieldVector, alpha: f64) -> Result<(Option<CatTarget>, f64)> {
    let mut best: Option<(CatTarget, f64)> = None;
    for target in CatTarget::ALL {
        let f = match cat_fidelity(field, target, alpha) {
            Ok(f) => f,
            Err(Error::Degenerate { .. }) => continue,
            Err(e) => return Err(e),
        };
        if best.is_none_or(|(_, b)| f > b) {
            best = Some((target, f));
        }
    }
    Ok(best.map_or((None, 0.0), |(t, f)| (Some(t), f)))
}

fn formal_readout(a: C64, b: C64) -> Option<PointerReadout> {
    let total = a.norm_sqr() + b.norm_sqr();
    (total > 0.0).then(|| PointerReadout {
        p_plus: a.norm_sqr() / total,
        p_minus: b.norm_sqr() / total,
        outside_weight: 0.0,
    })
}

fn numeric_readout(field: &FieldVector, alpha: f64, mode: PointerMode) -> Result<Option<PointerReadout>> {
    match pointer_probabilities(field, alpha, mode) {
        Ok(r) => Ok(Some(r)),
        Err(Error::Degenerate { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn branches(ev: &Evolved, alpha: f64) -> Result<[Branch; 2]> {
    let m = measure_atom(&ev.state)?;
    let make = |level: AtomLevel| -> Result<Branch> {
        let o = m.outcome(level);
        let (best, fid, ideal, exact) = match &o.post_field {
            Some(f) => {
                let (best, fid) = best_match(f, alpha)?;
                let ideal = match ev.formal_pointer {
                    Some(fp) => formal_readout(fp[level.index()].0, fp[level.index()].1),
                    None => numeric_readout(f, alpha, PointerMode::Idealized)?,
                };
                (best, fid, ideal, numeric_readout(f, alpha, PointerMode::Exact)?)
            }
            None => (None, 0.0, None, None),
        };
        let label = match best {
            Some(t) if fid >= LABEL_THRESHOLD => BranchLabel::Cat(t),
            _ => BranchLabel::Unclassified,
        };
        Ok(Branch {
            level,
            probability: o.probability,
            post_field: o.post_field.clone(),
            label,
            fidelity: fid,
            best_match: best,
            pointer_idealized: ideal,
            pointer_exact: exact,
        })
    };
    Ok([make(AtomLevel::Ground)?, make(AtomLevel::Excited)?])
}

pub fn run(cfg: &PipelineConfig) -> Result<PipelineResult> {
    cfg.validate()?;
    let cut = cfg.cutoff();
    let alpha = cfg.params.alpha();
    let psi0 = initial_joint(cfg, cut)?;
    let projection = match cfg.engine {
        Engine::Oracle => None,
        _ => Some(match &cfg.initial {
            InitialState::Coefficients(c) => Projection { coeffs: *c, residual_weight: 0.0 },
            _ => project_joint(&psi0, &cfg.params)?,
        }),
    };

    let analytic = match &projection {
        Some(p) => Some(run_analytic(cfg, p, cut)?),
        None => None,
    };
    let oracle = match cfg.engine {
        Engine::Analytic => None,
        _ => Some(run_oracle(cfg, &psi0, cut)?),
    };
    let engine_fidelity = match (&analytic, &oracle) {
        (Some(a), Some(o)) => Some(fidelity(&a.state, &o.state)?),
        _ => None,
    };
    let primary = oracle.or(analytic).expect("at least one engine runs");
    let mut stage_norms = vec![("initial", psi0.norm_sqr())];
    stage_norms.extend(primary.stage_norms.iter().copied());

    let counts = match cfg.shots {
        0 => None,
        n => Some(sample(&primary.state, n, cfg.seed)?),
    };
    Ok(PipelineResult {
        alpha,
        cutoff: cut,
        engine: cfg.engine,
        branches: branches(&primary, alpha)?,
        counts,
        projection,
        engine_fidelity,
        stage_norms,
        final_state: primary.state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Time,
    OmegaA,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Time => "t",
            SweepAxis::OmegaA => "omega_a",
        }
    }
}

/// Per-branch numbers of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSummary {
    pub probability: f64,
    pub label: BranchLabel,
    pub fidelity: f64,
    pub pointer_idealized: Option<PointerReadout>,
    pub pointer_exact: Option<PointerReadout>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub alpha: f64,
    pub interaction_time: f64,
    pub omega_a: f64,
    pub branches: [BranchSummary; 2],
    pub counts: Option<Counts>,
    pub engine_fidelity: Option<f64>,
}

fn point_config(template: &PipelineConfig, axis: SweepAxis, v: f64) -> Result<PipelineConfig> {
    let mut cfg = template.clone();
    match axis {
        SweepAxis::Alpha => {
            if template.params.alpha_policy() == AlphaPolicy::AutoConsistent {
                return Err(Error::InvalidParameter("cannot sweep alpha under the auto alpha policy".into()));
            }
            cfg.params = template.params.with_alpha(v)?;
        }
        SweepAxis::Time => cfg.interaction_time = v,
        SweepAxis::OmegaA => cfg.params = template.params.with_omega_a(v)?,
    }
    Ok(cfg)
}

/// Runs the template once per grid value. Rows are computed in parallel and
/// returned in grid order.
pub fn sweep(template: &PipelineConfig, axis: SweepAxis, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("sweep grid is empty".into()));
    }
    grid.par_iter()
        .map(|&v| {
            let cfg = point_config(template, axis, v)?;
            let r = run(&cfg)?;
            let summary = |b: &Branch| BranchSummary {
                probability: b.probability,
                label: b.label,
                fidelity: b.fidelity,
                pointer_idealized: b.pointer_idealized,
                pointer_exact: b.pointer_exact,
            };
            Ok(SweepRow {
                value: v,
                alpha: r.alpha,
                interaction_time: cfg.interaction_time,
                omega_a: cfg.params.omega_a(),
                branches: [summary(&r.branches[0]), summary(&r.branches[1])],
                counts: r.counts,
                engine_fidelity: r.engine_fidelity,
            })
        })
        .collect()
}
