//! Subcommand bodies. Each returns the data it wrote so tests can inspect it.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::analytic::{eigenstate_rotated, energy, overlap_factor, Sign};
use crate::hilbert::{AtomLevel, Cutoff};
use crate::measurement::{wigner_grid, WignerGrid};
use crate::model::{hamiltonian_rotated, AlphaPolicy, RabiParams};
use crate::oracle::{cutoff_convergence, eigendecompose, residual_norm, ConvergenceTable, Probe};
use crate::pipeline::{run, sweep, AtomPreset, Engine, PipelineConfig, PipelineResult, SweepAxis, SweepRow};

use super::config::RunConfig;
use super::svg::{self, Panel, Series};
use super::CliError;

/// Values of `omega_a t / 2` for the panels of the first figure.
pub const FIG1_PANELS: [f64; 4] = [1.0, 2.0, 5.0, 10.0];
/// Values of alpha for the panels of the second figure.
pub const FIG2_PANELS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Shortest decimal that round-trips is not enough for byte-stable files
/// across tools, so every float gets 17 significant digits.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    /// 1-based panel index, top-left first.
    pub panel: usize,
    /// The value that labels the panel.
    pub fixed: f64,
    /// The horizontal-axis value.
    pub swept: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

fn figure_template(cfg: &RunConfig) -> Result<PipelineConfig, CliError> {
    let p = cfg.params()?;
    if p.omega_a() <= 0.0 {
        return Err(CliError::Config("figures need model.omega_a > 0".into()));
    }
    let p = RabiParams::new(p.omega_a(), p.omega_f(), p.lambda(), AlphaPolicy::Fixed(p.alpha()))?;
    let mut t = PipelineConfig::new(AtomPreset::Plus, p, 0.0);
    t.engine = Engine::Analytic;
    t.cutoff = cfg.cutoff();
    t.convention = cfg.convention();
    Ok(t)
}

fn figure_rows(panel: usize, fixed: f64, swept: &[f64], rows: &[SweepRow]) -> Result<Vec<FigureRow>, CliError> {
    swept
        .iter()
        .zip(rows)
        .map(|(&x, r)| {
            let pr = r.branches[AtomLevel::Excited.index()]
                .pointer_idealized
                .ok_or_else(|| CliError::Numerical("pointer readout unavailable".into()))?;
            Ok(FigureRow { panel, fixed, swept: x, p_plus: pr.p_plus, p_minus: pr.p_minus })
        })
        .collect()
}

/// Pointer probabilities against alpha at fixed `omega_a t / 2`.
pub fn figure1_rows(cfg: &RunConfig) -> Result<Vec<FigureRow>, CliError> {
    let template = figure_template(cfg)?;
    let wa = template.params.omega_a();
    let alphas = cfg.grids.alpha.points();
    let mut out = Vec::new();
    for (k, &x) in FIG1_PANELS.iter().enumerate() {
        let mut t = template.clone();
        t.interaction_time = 2.0 * x / wa;
        let rows = sweep(&t, SweepAxis::Alpha, &alphas)?;
        out.extend(figure_rows(k + 1, x, &alphas, &rows)?);
    }
    Ok(out)
}

/// Pointer probabilities against `omega_a t / 2` at fixed alpha, each panel
/// spanning `[0, 2 pi e^{2 alpha^2}]`.
pub fn figure2_rows(cfg: &RunConfig) -> Result<Vec<FigureRow>, CliError> {
    let template = figure_template(cfg)?;
    let wa = template.params.omega_a();
    let steps = cfg.grids.fig2_steps;
    let mut out = Vec::new();
    for (k, &alpha) in FIG2_PANELS.iter().enumerate() {
        let span = 2.0 * PI / overlap_factor(alpha);
        let xs: Vec<f64> = (0..=steps).map(|i| span * (i as f64 / steps as f64)).collect();
        let times: Vec<f64> = xs.iter().map(|x| 2.0 * x / wa).collect();
        let mut t = template.clone();
        t.params = t.params.with_alpha(alpha)?;
        let rows = sweep(&t, SweepAxis::Time, &times)?;
        out.extend(figure_rows(k + 1, alpha, &xs, &rows)?);
    }
    Ok(out)
}

fn figure_csv_rows(rows: &[FigureRow]) -> impl Iterator<Item = Vec<String>> + '_ {
    rows.iter().map(|r| vec![r.panel.to_string(), fmt_f(r.fixed), fmt_f(r.swept), fmt_f(r.p_plus), fmt_f(r.p_minus)])
}

fn figure_svg(rows: &[FigureRow], title: impl Fn(f64) -> String, x_label: &str) -> String {
    let mut panels = Vec::new();
    for k in 1..=4 {
        let sel: Vec<&FigureRow> = rows.iter().filter(|r| r.panel == k).collect();
        let Some(first) = sel.first() else { continue };
        panels.push(Panel {
            title: title(first.fixed),
            x_label: x_label.into(),
            y_label: "probability".into(),
            series: vec![
                Series { label: "p+".into(), points: sel.iter().map(|r| (r.swept, r.p_plus)).collect(), dashed: false },
                Series { label: "p-".into(), points: sel.iter().map(|r| (r.swept, r.p_minus)).collect(), dashed: true },
            ],
        });
    }
    svg::panels(&panels, 2)
}

pub fn cmd_figures(cfg: &RunConfig, out: &Path, with_svg: bool) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(out)?;
    let f1 = figure1_rows(cfg)?;
    let f2 = figure2_rows(cfg)?;
    let p1 = out.join("fig1.csv");
    let p2 = out.join("fig2.csv");
    write_csv(&p1, &["panel", "omega_a_t_over_2", "alpha", "p_plus", "p_minus"], figure_csv_rows(&f1))?;
    write_csv(&p2, &["panel", "alpha", "omega_a_t_over_2", "p_plus", "p_minus"], figure_csv_rows(&f2))?;
    let mut written = vec![p1, p2];
    if with_svg {
        let s1 = out.join("fig1.svg");
        let s2 = out.join("fig2.svg");
        write_text(&s1, &figure_svg(&f1, |x| format!("omega_a t/2 = {x}"), "alpha"))?;
        write_text(&s2, &figure_svg(&f2, |a| format!("alpha = {a}"), "omega_a t/2"))?;
        written.extend([s1, s2]);
    }
    println!("figures: {} + {} rows", f1.len(), f2.len());
    Ok(written)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub sign: Sign,
    pub analytic: f64,
    /// The two oracle eigenvalues closest to `analytic`.
    pub nearest: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub alpha: f64,
    pub cutoff: Cutoff,
    pub lowest: Vec<f64>,
    pub rows: Vec<SpectrumRow>,
}

pub fn spectrum_report(params: &RabiParams, cutoff: Cutoff) -> Result<SpectrumReport, CliError> {
    let h = hamiltonian_rotated(params, cutoff);
    let spec = eigendecompose(&h)?;
    let mut rows = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let e = energy(sign, params);
        let psi = eigenstate_rotated(sign, params, cutoff)?;
        rows.push(SpectrumRow {
            sign,
            analytic: e,
            nearest: spec.nearest(e, 2),
            residual: residual_norm(&h, &psi, e)?,
        });
    }
    Ok(SpectrumReport { alpha: params.alpha(), cutoff, lowest: spec.eigenvalues[..2].to_vec(), rows })
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &Path) -> Result<SpectrumReport, CliError> {
    ensure_dir(out)?;
    let params = cfg.params()?;
    let cutoff = cfg.cutoff().unwrap_or_else(|| params.auto_cutoff());
    let rep = spectrum_report(&params, cutoff)?;
    println!("alpha = {}, n_max = {}", rep.alpha, cutoff.n_max());
    println!("lowest oracle eigenvalues: {} {}", rep.lowest[0], rep.lowest[1]);
    println!("{:>4} {:>24} {:>24} {:>24} {:>12}", "sign", "analytic", "oracle_0", "oracle_1", "residual");
    for r in &rep.rows {
        println!(
            "{:>4} {:>24.16e} {:>24.16e} {:>24.16e} {:>12.4e}",
            r.sign.symbol(),
            r.analytic,
            r.nearest[0],
            r.nearest[1],
            r.residual
        );
    }
    write_csv(
        &out.join("spectrum.csv"),
        &[
            "sign",
            "alpha",
            "cutoff",
            "analytic_energy",
            "oracle_nearest_0",
            "oracle_nearest_1",
            "oracle_lowest_0",
            "oracle_lowest_1",
            "residual_norm",
        ],
        rep.rows.iter().map(|r| {
            vec![
                r.sign.symbol().to_string(),
                fmt_f(rep.alpha),
                cutoff.n_max().to_string(),
                fmt_f(r.analytic),
                fmt_f(r.nearest[0]),
                fmt_f(r.nearest[1]),
                fmt_f(rep.lowest[0]),
                fmt_f(rep.lowest[1]),
                fmt_f(r.residual),
            ]
        }),
    )?;
    Ok(rep)
}

pub fn cmd_evolve(cfg: &RunConfig, out: &Path) -> Result<Vec<SweepRow>, CliError> {
    ensure_dir(out)?;
    let template = cfg.pipeline_config()?;
    let rows = sweep(&template, SweepAxis::Time, &cfg.grids.time.points())?;
    write_csv(
        &out.join("evolve.csv"),
        &["t", "p_g", "p_e", "fidelity_analytic_vs_oracle", "label_g", "label_e", "fidelity_g", "fidelity_e"],
        rows.iter().map(|r| {
            let [g, e] = &r.branches;
            vec![
                fmt_f(r.interaction_time),
                fmt_f(g.probability),
                fmt_f(e.probability),
                fmt_opt(r.engine_fidelity),
                g.label.as_str().into(),
                e.label.as_str().into(),
                fmt_f(g.fidelity),
                fmt_f(e.fidelity),
            ]
        }),
    )?;
    println!("evolve: {} time points", rows.len());
    Ok(rows)
}

fn wigner_of(cfg: &RunConfig, r: &PipelineResult, level: AtomLevel) -> Result<Option<WignerGrid>, CliError> {
    let Some(f) = &r.branch(level).post_field else { return Ok(None) };
    let e = cfg.output.wigner_extent;
    let n = cfg.output.wigner_resolution;
    Ok(Some(wigner_grid(f, (-e, e), (-e, e), (n, n))?))
}

pub fn cmd_pipeline(cfg: &RunConfig, out: &Path, with_svg: bool) -> Result<PipelineResult, CliError> {
    ensure_dir(out)?;
    let pc = cfg.pipeline_config()?;
    let r = run(&pc)?;
    write_csv(
        &out.join("pipeline.csv"),
        &[
            "level",
            "probability",
            "label",
            "best_match",
            "fidelity",
            "p_plus_idealized",
            "p_minus_idealized",
            "p_plus_exact",
            "p_minus_exact",
            "outside_weight_exact",
            "counts",
            "seed",
        ],
        r.branches.iter().map(|b| {
            let count = r.counts.map(|c| match b.level {
                AtomLevel::Ground => c.ground,
                AtomLevel::Excited => c.excited,
            });
            vec![
                b.level.symbol().to_string(),
                fmt_f(b.probability),
                b.label.as_str().into(),
                b.best_match.map(|t| t.label()).unwrap_or_default().into(),
                fmt_f(b.fidelity),
                fmt_opt(b.pointer_idealized.map(|p| p.p_plus)),
                fmt_opt(b.pointer_idealized.map(|p| p.p_minus)),
                fmt_opt(b.pointer_exact.map(|p| p.p_plus)),
                fmt_opt(b.pointer_exact.map(|p| p.p_minus)),
                fmt_opt(b.pointer_exact.map(|p| p.outside_weight)),
                count.map(|c| c.to_string()).unwrap_or_default(),
                pc.seed.to_string(),
            ]
        }),
    )?;

    let mut summary = vec![
        vec!["alpha".into(), fmt_f(r.alpha)],
        vec!["cutoff".into(), r.cutoff.n_max().to_string()],
        vec!["interaction_time".into(), fmt_f(pc.interaction_time)],
        vec!["seed".into(), pc.seed.to_string()],
    ];
    if let Some(p) = r.projection {
        let c = |name: &str, z: C64| [vec![format!("{name}_re"), fmt_f(z.re)], vec![format!("{name}_im"), fmt_f(z.im)]];
        summary.extend(c("c_plus", p.coeffs.c_plus));
        summary.extend(c("c_minus", p.coeffs.c_minus));
        summary.push(vec!["residual_weight".into(), fmt_f(p.residual_weight)]);
    }
    if let Some(f) = r.engine_fidelity {
        summary.push(vec!["fidelity_analytic_vs_oracle".into(), fmt_f(f)]);
    }
    for (name, n) in &r.stage_norms {
        summary.push(vec![format!("norm_sqr_{name}"), fmt_f(*n)]);
    }
    write_csv(&out.join("pipeline_summary.csv"), &["key", "value"], summary)?;

    if let Some(path) = &cfg.output.export_state {
        write_text(&cfg.resolve(path), &r.final_state.to_amplitude_text())?;
    }
    if with_svg {
        for level in AtomLevel::BOTH {
            let Some(w) = wigner_of(cfg, &r, level)? else { continue };
            let tag = level.symbol();
            write_csv(
                &out.join(format!("wigner_{tag}.csv")),
                &["x", "p", "w"],
                w.ps.iter()
                    .zip(&w.values)
                    .flat_map(|(&p, row)| w.xs.iter().zip(row).map(move |(&x, &v)| vec![fmt_f(x), fmt_f(p), fmt_f(v)])),
            )?;
            let title = format!("W after detecting {tag}: {}", r.branch(level).label.as_str());
            write_text(&out.join(format!("wigner_{tag}.svg")), &svg::heatmap(&title, &w.xs, &w.ps, &w.values))?;
        }
    }
    for b in &r.branches {
        println!(
            "{}: P = {:.12} label = {} (fidelity {:.12})",
            b.level.symbol(),
            b.probability,
            b.label.as_str(),
            b.fidelity
        );
    }
    if let Some(p) = r.projection {
        println!("residual weight outside span(psi+, psi-) = {:e}", p.residual_weight);
    }
    if let Some(c) = r.counts {
        println!("counts: g = {} e = {} (seed {})", c.ground, c.excited, c.seed);
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub alpha: f64,
    pub sign: Sign,
    pub energy: f64,
    pub residual: f64,
    pub cutoff: Cutoff,
}

/// Rotated-frame residual of both closed-form eigenstates along the alpha
/// grid, or at the single self-consistent alpha under the auto policy.
pub fn residual_rows(cfg: &RunConfig) -> Result<Vec<ResidualRow>, CliError> {
    let base = cfg.params()?;
    let alphas = match base.alpha_policy() {
        AlphaPolicy::AutoConsistent => vec![None],
        AlphaPolicy::Fixed(_) => cfg.grids.alpha.points().into_iter().map(Some).collect(),
    };
    let mut out = Vec::new();
    for a in alphas {
        let p = match a {
            Some(a) => base.with_alpha(a)?,
            None => base,
        };
        let cutoff = cfg.cutoff().unwrap_or_else(|| p.auto_cutoff());
        let h = hamiltonian_rotated(&p, cutoff);
        for sign in [Sign::Plus, Sign::Minus] {
            let e = energy(sign, &p);
            let psi = eigenstate_rotated(sign, &p, cutoff)?;
            out.push(ResidualRow { alpha: p.alpha(), sign, energy: e, residual: residual_norm(&h, &psi, e)?, cutoff });
        }
    }
    Ok(out)
}

pub fn cmd_residuals(cfg: &RunConfig, out: &Path) -> Result<Vec<ResidualRow>, CliError> {
    ensure_dir(out)?;
    let rows = residual_rows(cfg)?;
    write_csv(
        &out.join("residuals.csv"),
        &["alpha", "sign", "energy", "residual_norm", "cutoff"],
        rows.iter().map(|r| {
            vec![
                fmt_f(r.alpha),
                r.sign.symbol().to_string(),
                fmt_f(r.energy),
                fmt_f(r.residual),
                r.cutoff.n_max().to_string(),
            ]
        }),
    )?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    println!("residuals: {} rows, max residual {worst:e}", rows.len());
    Ok(rows)
}

pub fn cmd_convergence(cfg: &RunConfig, out: &Path) -> Result<Vec<ConvergenceTable>, CliError> {
    ensure_dir(out)?;
    let p = cfg.params()?;
    let probes = [Probe::GroundEnergy(p), Probe::CoherentTailMass(p.alpha()), Probe::RotatedResidual(p, Sign::Plus)];
    let tables =
        probes.iter().map(|probe| cutoff_convergence(probe, &cfg.grids.cutoffs)).collect::<Result<Vec<_>, _>>()?;
    write_csv(
        &out.join("convergence.csv"),
        &["probe", "cutoff", "value", "delta", "converged"],
        tables.iter().flat_map(|t| {
            t.rows.iter().map(move |r| {
                vec![t.probe.clone(), r.cutoff.to_string(), fmt_f(r.value), fmt_opt(r.delta), t.converged.to_string()]
            })
        }),
    )?;
    for t in &tables {
        let last = t.rows.last().expect("at least two cutoffs");
        println!("{}: {} at n_max = {} (converged: {})", t.probe, last.value, last.cutoff, t.converged);
    }
    Ok(tables)
}
