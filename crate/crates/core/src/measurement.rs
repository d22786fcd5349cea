//! Projective atomic detection, coherent-pointer readout, Monte Carlo
//! sampling and cat-state characterization.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{cat_state, yurke_stoler, CatKind, Sign};
use crate::error::{Error, Result};
use crate::hilbert::{coherent, AtomFieldVector, AtomLevel, FieldVector, DEGENERATE_NORM};

/// Probabilities below this mark an outcome as impossible.
pub const IMPOSSIBLE_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub atom_level: AtomLevel,
    pub probability: f64,
    /// Normalized field left behind; `None` when the outcome is impossible.
    pub post_field: Option<FieldVector>,
}

/// Both outcomes of a projective `{|g>, |e>}` measurement.
#[derive(Debug, Clone)]
pub struct AtomMeasurement {
    pub ground: MeasurementOutcome,
    pub excited: MeasurementOutcome,
}

impl AtomMeasurement {
    pub fn outcome(&self, level: AtomLevel) -> &MeasurementOutcome {
        match level {
            AtomLevel::Ground => &self.ground,
            AtomLevel::Excited => &self.excited,
        }
    }

    pub fn outcomes(&self) -> [&MeasurementOutcome; 2] {
        [&self.ground, &self.excited]
    }
}

fn require_normalized<S: crate::hilbert::Space>(s: &crate::hilbert::State<S>, what: &str) -> Result<()> {
    if !s.is_normalized() {
        return Err(Error::InvalidParameter(format!("{what} must be normalized (norm^2 = {})", s.norm_sqr())));
    }
    Ok(())
}

/// Born rule on the atom: probability is the squared norm of each atomic
/// block, the post-measurement field is that block renormalized.
pub fn measure_atom(state: &AtomFieldVector) -> Result<AtomMeasurement> {
    require_normalized(state, "measured state")?;
    let project = |level: AtomLevel| -> Result<MeasurementOutcome> {
        let block = state.block(level);
        let probability = block.norm_sqr();
        let post_field = if probability < IMPOSSIBLE_PROBABILITY { None } else { Some(block.normalized()?) };
        Ok(MeasurementOutcome { atom_level: level, probability, post_field })
    };
    Ok(AtomMeasurement { ground: project(AtomLevel::Ground)?, excited: project(AtomLevel::Excited)? })
}

/// How `{|alpha>, |-alpha>}` is turned into a readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointerMode {
    /// Treat the two coherent states as if they were orthogonal: expand the
    /// field as `a|alpha> + b|-alpha>` and report `|a|^2, |b|^2` rescaled to
    /// sum to one.
    Idealized,
    /// Born weights on the symmetrically orthonormalized pair
    /// `(|C_e~> ± |C_o~>)/sqrt 2`, built from the normalized even and odd cats.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerReadout {
    pub p_plus: f64,
    pub p_minus: f64,
    /// Field weight outside `span{|alpha>, |-alpha>}`.
    pub outside_weight: f64,
}

pub fn pointer_probabilities(field: &FieldVector, alpha: f64, mode: PointerMode) -> Result<PointerReadout> {
    require_normalized(field, "field")?;
    let cut = field.cutoff();
    match mode {
        PointerMode::Idealized => {
            let plus = coherent(alpha, cut)?;
            let minus = coherent(-alpha, cut)?;
            let s = plus.inner(&minus)?;
            let det = 1.0 - s.norm_sqr();
            if det < DEGENERATE_NORM {
                return Err(Error::Degenerate { norm: det });
            }
            let u = plus.inner(field)?;
            let v = minus.inner(field)?;
            // Gram system [[1, s], [s*, 1]] (a, b) = (u, v)
            let a = (u - s * v) / det;
            let b = (v - s.conj() * u) / det;
            let in_span = (a.conj() * u + b.conj() * v).re;
            let total = a.norm_sqr() + b.norm_sqr();
            Ok(PointerReadout {
                p_plus: a.norm_sqr() / total,
                p_minus: b.norm_sqr() / total,
                outside_weight: (1.0 - in_span).max(0.0),
            })
        }
        PointerMode::Exact => {
            let even = cat_state(CatKind::Even, alpha, cut, true)?;
            let odd = cat_state(CatKind::Odd, alpha, cut, true)?;
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            let phi_p = FieldVector::combination(&[(h, &even), (h, &odd)])?;
            let phi_m = FieldVector::combination(&[(h, &even), (-h, &odd)])?;
            let p_plus = phi_p.inner(field)?.norm_sqr();
            let p_minus = phi_m.inner(field)?.norm_sqr();
            Ok(PointerReadout { p_plus, p_minus, outside_weight: (1.0 - p_plus - p_minus).max(0.0) })
        }
    }
}

/// Detector tallies from [`sample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counts {
    pub ground: u64,
    pub excited: u64,
    pub seed: u64,
}

impl Counts {
    pub fn shots(&self) -> u64 {
        self.ground + self.excited
    }

    pub fn excited_fraction(&self) -> f64 {
        self.excited as f64 / self.shots() as f64
    }

    /// Pearson chi-square (one degree of freedom) against Born probabilities.
    pub fn chi_square(&self, p_ground: f64) -> f64 {
        let n = self.shots() as f64;
        let mut chi = 0.0;
        for (obs, p) in [(self.ground, p_ground), (self.excited, 1.0 - p_ground)] {
            let exp = n * p;
            if exp > 0.0 {
                chi += (obs as f64 - exp).powi(2) / exp;
            }
        }
        chi
    }
}

/// Simulated atomic detector: `shots` independent projective measurements.
///
/// Draws come from ChaCha8 seeded with `seed`; the same seed always gives
/// the same counts.
pub fn sample(state: &AtomFieldVector, shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be >= 1".into()));
    }
    let m = measure_atom(state)?;
    let p_excited = m.excited.probability / (m.ground.probability + m.excited.probability);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let excited = (0..shots).filter(|_| rng.random::<f64>() < p_excited).count() as u64;
    Ok(Counts { ground: shots - excited, excited, seed })
}

/// Reference states a detected field branch is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatTarget {
    Even,
    Odd,
    YurkeStoler(Sign),
    /// `|alpha>` for `Plus`, `|-alpha>` for `Minus`.
    Coherent(Sign),
}

impl CatTarget {
    pub const ALL: [CatTarget; 6] = [
        CatTarget::Even,
        CatTarget::Odd,
        CatTarget::YurkeStoler(Sign::Plus),
        CatTarget::YurkeStoler(Sign::Minus),
        CatTarget::Coherent(Sign::Plus),
        CatTarget::Coherent(Sign::Minus),
    ];

    pub fn label(self) -> &'static str {
        match self {
            CatTarget::Even => "even_cat",
            CatTarget::Odd => "odd_cat",
            CatTarget::YurkeStoler(Sign::Plus) => "yurke_stoler_plus",
            CatTarget::YurkeStoler(Sign::Minus) => "yurke_stoler_minus",
            CatTarget::Coherent(Sign::Plus) => "coherent_plus_alpha",
            CatTarget::Coherent(Sign::Minus) => "coherent_minus_alpha",
        }
    }

    /// Normalized target state at the field's cutoff.
    pub fn state(self, alpha: f64, cutoff: crate::hilbert::Cutoff) -> Result<FieldVector> {
        match self {
            CatTarget::Even => cat_state(CatKind::Even, alpha, cutoff, true),
            CatTarget::Odd => cat_state(CatKind::Odd, alpha, cutoff, true),
            CatTarget::YurkeStoler(s) => yurke_stoler(alpha, s, cutoff),
            CatTarget::Coherent(s) => coherent(s.value() * alpha, cutoff),
        }
    }
}

/// `|<target|field>|^2` with the target normalized.
pub fn cat_fidelity(field: &FieldVector, target: CatTarget, alpha: f64) -> Result<f64> {
    require_normalized(field, "field")?;
    let t = target.state(alpha, field.cutoff())?;
    Ok(t.inner(field)?.norm_sqr().min(1.0))
}

/// Wigner function sampled on a rectangular phase-space grid.
///
/// `values[j][i]` is `W(x_i + i p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Trapezoidal `∬ W dx dp`.
    pub fn integral(&self) -> f64 {
        let weights = |v: &[f64]| -> Vec<f64> {
            let n = v.len();
            (0..n)
                .map(|i| {
                    let left = if i > 0 { v[i] - v[i - 1] } else { 0.0 };
                    let right = if i + 1 < n { v[i + 1] - v[i] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect()
        };
        let wx = weights(&self.xs);
        let wp = weights(&self.ps);
        let mut total = 0.0;
        for (row, w_p) in self.values.iter().zip(&wp) {
            for (v, w_x) in row.iter().zip(&wx) {
                total += v * w_x * w_p;
            }
        }
        total
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![range.0];
    }
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

/// `W(beta) = (2/pi) <psi| D(beta) Π D(beta)^dag |psi>` with `Π = diag((-1)^n)`.
///
/// Uses `D(beta) Π D(beta)^dag = D(2 beta) Π`, with the matrix elements of
/// `D(2 beta)` generated column by column from the exact recurrence
/// `<m|D|n+1> = (sqrt(m) <m-1|D|n> - gamma* <m|D|n>) / sqrt(n+1)`.
pub fn wigner_point(field: &FieldVector, beta: C64) -> f64 {
    let psi = field.amplitudes();
    let dim = psi.len();
    let gamma = 2.0 * beta;
    let sqrt: Vec<f64> = (0..=dim).map(|k| (k as f64).sqrt()).collect();

    let mut col = vec![C64::new(0.0, 0.0); dim];
    col[0] = C64::new((-gamma.norm_sqr() / 2.0).exp(), 0.0);
    for m in 1..dim {
        col[m] = col[m - 1] * gamma / sqrt[m];
    }
    let mut acc = C64::new(0.0, 0.0);
    for n in 0..dim {
        let overlap: C64 = psi.iter().zip(&col).map(|(a, d)| a.conj() * d).sum();
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += overlap * psi[n] * parity;
        if n + 1 < dim {
            let mut next = vec![C64::new(0.0, 0.0); dim];
            for m in 0..dim {
                let up = if m > 0 { col[m - 1] * sqrt[m] } else { C64::new(0.0, 0.0) };
                next[m] = (up - gamma.conj() * col[m]) / sqrt[n + 1];
            }
            col = next;
        }
    }
    2.0 / PI * acc.re
}

/// Samples `W` on `resolution.0` x-points by `resolution.1` p-points.
pub fn wigner_grid(
    field: &FieldVector,
    x_range: (f64, f64),
    p_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<WignerGrid> {
    require_normalized(field, "field")?;
    if resolution.0 == 0 || resolution.1 == 0 {
        return Err(Error::InvalidParameter("Wigner resolution must be >= 1".into()));
    }
    let xs = linspace(x_range, resolution.0);
    let ps = linspace(p_range, resolution.1);
    let values = ps.iter().map(|&p| xs.iter().map(|&x| wigner_point(field, C64::new(x, p))).collect()).collect();
    Ok(WignerGrid { xs, ps, values })
}
