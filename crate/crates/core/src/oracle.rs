//! Exact diagonalization on the truncated space: the numerical ground truth
//! that every closed form is checked against.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::analytic::{eigenstate_rotated, energy, Sign};
use crate::error::{Error, Result};
use crate::hilbert::{coherent_state, AtomFieldVector, Cutoff, OperatorMatrix, Space, State};
use crate::model::{hamiltonian_full, hamiltonian_rotated, RabiParams, TimeConvention};

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// Full Hermitian eigendecomposition.
///
/// Each eigenvector's phase is fixed so that its largest-magnitude component
/// (first one on ties) is real and positive.
pub fn eigendecompose(h: &OperatorMatrix) -> Result<Spectrum> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian { deviation: h.hermiticity_error() });
    }
    let eig = h.entries().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let dim = h.dim();
    let mut vectors = DMatrix::zeros(dim, dim);
    let mut values = Vec::with_capacity(dim);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let v = eig.eigenvectors.column(k);
        let mut pivot = 0;
        let mut best = -1.0;
        for (i, z) in v.iter().enumerate() {
            // strict > keeps the first index among equal magnitudes
            if z.norm() > best + 1e-14 {
                best = z.norm();
                pivot = i;
            }
        }
        let phase = v[pivot].conj() / v[pivot].norm();
        vectors.set_column(col, &(v * phase));
    }
    Ok(Spectrum { eigenvalues: values, eigenvectors: vectors })
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V exp(±i Λ t) V^dag psi`.
    pub fn propagate<S: Space>(&self, psi: &State<S>, t: f64, convention: TimeConvention) -> Result<State<S>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let s = convention.sign();
        let mut coeffs: DVector<C64> = self.eigenvectors.ad_mul(psi.amplitudes());
        for (c, &e) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= C64::from_polar(1.0, s * e * t);
        }
        State::from_amplitudes(&self.eigenvectors * coeffs, psi.cutoff())
    }

    /// `max |H - V Λ V^dag|`
    pub fn reconstruction_error(&self, h: &OperatorMatrix) -> f64 {
        let lam = DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&e| C64::new(e, 0.0)),
        ));
        let rebuilt = &self.eigenvectors * lam * self.eigenvectors.adjoint();
        (h.entries() - rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |V^dag V - I|`
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.eigenvectors.ad_mul(&self.eigenvectors);
        let id = DMatrix::<C64>::identity(self.dim(), self.dim());
        (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Weight of `psi` inside the eigenspace of eigenvalues within `tol` of `energy`.
    ///
    /// Used in place of a single-vector fidelity wherever the spectrum is
    /// degenerate and individual eigenvectors are not unique.
    pub fn eigenspace_weight<S: Space>(&self, psi: &State<S>, energy: f64, tol: f64) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        let mut w = 0.0;
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            if (e - energy).abs() <= tol {
                w += self.eigenvectors.column(k).dotc(psi.amplitudes()).norm_sqr();
            }
        }
        Ok(w)
    }

    /// The `count` eigenvalues closest to `energy`, in ascending order.
    pub fn nearest(&self, energy: f64, count: usize) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| (a - energy).abs().total_cmp(&(b - energy).abs()));
        v.truncate(count);
        v.sort_by(f64::total_cmp);
        v
    }
}

/// One-shot exact propagation `exp(±iHt) psi0`.
pub fn evolve_exact(
    h: &OperatorMatrix,
    psi0: &AtomFieldVector,
    t: f64,
    convention: TimeConvention,
) -> Result<AtomFieldVector> {
    eigendecompose(h)?.propagate(psi0, t, convention)
}

/// `||H psi - E psi||`
pub fn residual_norm(h: &OperatorMatrix, psi: &AtomFieldVector, e: f64) -> Result<f64> {
    let hpsi = h.apply(psi)?;
    hpsi.distance(&psi.scale(C64::new(e, 0.0)))
}

/// `|<psi|phi>|^2`
pub fn fidelity<S: Space>(psi: &State<S>, phi: &State<S>) -> Result<f64> {
    Ok(psi.inner(phi)?.norm_sqr().min(1.0))
}

/// Quantity tracked across cutoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    /// Lowest eigenvalue of the full Hamiltonian.
    GroundEnergy(RabiParams),
    /// Mass a coherent state loses to truncation.
    CoherentTailMass(f64),
    /// `||H_R psi_R± - E± psi_R±||`
    RotatedResidual(RabiParams, Sign),
}

impl Probe {
    pub fn name(&self) -> String {
        match self {
            Probe::GroundEnergy(_) => "ground_energy".into(),
            Probe::CoherentTailMass(a) => format!("coherent_tail_mass(alpha={a})"),
            Probe::RotatedResidual(_, s) => format!("rotated_residual({})", s.symbol()),
        }
    }

    pub fn evaluate(&self, cutoff: Cutoff) -> Result<f64> {
        match *self {
            Probe::GroundEnergy(p) => {
                let spec = eigendecompose(&hamiltonian_full(&p, cutoff))?;
                Ok(spec.eigenvalues[0])
            }
            Probe::CoherentTailMass(a) => Ok(coherent_state(C64::new(a, 0.0), cutoff)?.tail_mass),
            Probe::RotatedResidual(p, sign) => {
                let psi = eigenstate_rotated(sign, &p, cutoff)?;
                residual_norm(&hamiltonian_rotated(&p, cutoff), &psi, energy(sign, &p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub value: f64,
    /// `|value - previous value|`; `None` on the first row.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub probe: String,
    pub rows: Vec<ConvergenceRow>,
    /// Successive deltas never grow (up to round-off).
    pub converged: bool,
}

/// Evaluates `probe` at each cutoff and checks that successive changes shrink.
///
/// A delta may exceed its predecessor by at most a round-off floor of
/// `64 eps max(1, |value|)`; below that the sequence counts as settled.
pub fn cutoff_convergence(probe: &Probe, cutoffs: &[usize]) -> Result<ConvergenceTable> {
    if cutoffs.len() < 2 {
        return Err(Error::InvalidParameter("need at least two cutoffs".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let value = probe.evaluate(Cutoff::new(n))?;
        let delta = rows.last().map(|r| (value - r.value).abs());
        rows.push(ConvergenceRow { cutoff: n, value, delta });
    }
    let deltas: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.delta.map(|d| (d, r.value))).collect();
    let converged = deltas.windows(2).all(|w| {
        let floor = 64.0 * f64::EPSILON * w[1].1.abs().max(1.0);
        w[1].0 <= w[0].0 + floor
    });
    Ok(ConvergenceTable { probe: probe.name(), rows, converged })
}
