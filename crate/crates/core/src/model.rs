//! Rabi Hamiltonians, the y-axis frame rotation and the parity operator.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{
    atom_operators, field_parity, ladder_operators, position_quadrature, tensor_op, Cutoff, OperatorMatrix,
};

/// How the coherent amplitude alpha is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaPolicy {
    Fixed(f64),
    /// `alpha = -lambda / omega_f`, the displacement that makes the
    /// rotated-frame product states exact eigenstates when `omega_a = 0`.
    AutoConsistent,
}

/// Model constants, in units with hbar = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiParams {
    omega_a: f64,
    omega_f: f64,
    lam: f64,
    alpha_policy: AlphaPolicy,
}

impl RabiParams {
    pub fn new(omega_a: f64, omega_f: f64, lam: f64, alpha_policy: AlphaPolicy) -> Result<Self> {
        if !(omega_f > 0.0 && omega_f.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega_f = {omega_f} must be > 0")));
        }
        if !(omega_a >= 0.0 && omega_a.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega_a = {omega_a} must be >= 0")));
        }
        if !lam.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda = {lam} must be finite")));
        }
        if let AlphaPolicy::Fixed(a) = alpha_policy {
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!("alpha = {a} must be finite")));
            }
        }
        Ok(RabiParams { omega_a, omega_f, lam, alpha_policy })
    }

    /// Fixed alpha given as a complex number; anything off the real axis is rejected.
    pub fn with_complex_alpha(omega_a: f64, omega_f: f64, lam: f64, alpha: C64) -> Result<Self> {
        if alpha.im != 0.0 {
            return Err(Error::ComplexAlpha { re: alpha.re, im: alpha.im });
        }
        Self::new(omega_a, omega_f, lam, AlphaPolicy::Fixed(alpha.re))
    }

    pub fn auto(omega_a: f64, omega_f: f64, lam: f64) -> Result<Self> {
        Self::new(omega_a, omega_f, lam, AlphaPolicy::AutoConsistent)
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn omega_f(&self) -> f64 {
        self.omega_f
    }

    pub fn lambda(&self) -> f64 {
        self.lam
    }

    pub fn alpha_policy(&self) -> AlphaPolicy {
        self.alpha_policy
    }

    pub fn alpha(&self) -> f64 {
        match self.alpha_policy {
            AlphaPolicy::Fixed(a) => a,
            AlphaPolicy::AutoConsistent => -self.lam / self.omega_f,
        }
    }

    pub fn with_omega_a(self, omega_a: f64) -> Result<Self> {
        Self::new(omega_a, self.omega_f, self.lam, self.alpha_policy)
    }

    pub fn with_lambda(self, lam: f64) -> Result<Self> {
        Self::new(self.omega_a, self.omega_f, lam, self.alpha_policy)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.omega_a, self.omega_f, self.lam, AlphaPolicy::Fixed(alpha))
    }

    /// Cutoff from the default policy, sized for this alpha.
    pub fn auto_cutoff(&self) -> Cutoff {
        Cutoff::auto(self.alpha())
    }
}

/// Which atom-field coupling terms to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// Full dipole coupling, counter-rotating terms included.
    #[default]
    Rabi,
    /// Jaynes-Cummings: only `sigma_+ a + sigma_- a^dagger`.
    RotatingWave,
}

/// Sign of the exponent in the propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeConvention {
    /// `U = exp(+iHt)`, the convention the closed forms are written in.
    #[default]
    Paper,
    /// `U = exp(-iHt)`.
    Standard,
}

impl TimeConvention {
    pub fn sign(self) -> f64 {
        match self {
            TimeConvention::Paper => 1.0,
            TimeConvention::Standard => -1.0,
        }
    }
}

/// `(omega_a/2) sigma_z + omega_f a^dag a + lambda sigma_x (a + a^dag)`.
pub fn hamiltonian_full(p: &RabiParams, cutoff: Cutoff) -> OperatorMatrix {
    hamiltonian(p, cutoff, Coupling::Rabi)
}

pub fn hamiltonian(p: &RabiParams, cutoff: Cutoff, coupling: Coupling) -> OperatorMatrix {
    let s = atom_operators();
    let l = ladder_operators(cutoff);
    let id_f = OperatorMatrix::identity(cutoff.field_dim());
    let id_a = OperatorMatrix::identity(2);

    let atom = tensor_op(&s.sigma_z, &id_f).unwrap().scale(p.omega_a / 2.0);
    let field = tensor_op(&id_a, &l.number).unwrap().scale(p.omega_f);
    let interaction = match coupling {
        Coupling::Rabi => tensor_op(&s.sigma_x, &position_quadrature(cutoff)).unwrap(),
        Coupling::RotatingWave => {
            tensor_op(&s.sigma_plus, &l.a).unwrap().add(&tensor_op(&s.sigma_minus, &l.a_dagger).unwrap()).unwrap()
        }
    }
    .scale(p.lam);

    sum_hermitian(&[atom, field, interaction])
}

/// `-(omega_a/2) sigma_x + omega_f a^dag a + lambda sigma_z (a + a^dag)`.
pub fn hamiltonian_rotated(p: &RabiParams, cutoff: Cutoff) -> OperatorMatrix {
    let s = atom_operators();
    let l = ladder_operators(cutoff);
    let id_f = OperatorMatrix::identity(cutoff.field_dim());

    let atom = tensor_op(&s.sigma_x, &id_f).unwrap().scale(-p.omega_a / 2.0);
    let field = tensor_op(&OperatorMatrix::identity(2), &l.number).unwrap().scale(p.omega_f);
    let interaction = tensor_op(&s.sigma_z, &position_quadrature(cutoff)).unwrap().scale(p.lam);

    sum_hermitian(&[atom, field, interaction])
}

fn sum_hermitian(terms: &[OperatorMatrix]) -> OperatorMatrix {
    let mut acc = DMatrix::zeros(terms[0].dim(), terms[0].dim());
    for t in terms {
        acc += t.entries();
    }
    OperatorMatrix::hermitian(acc).expect("sum of Hermitian terms")
}

/// Atomic rotation `exp(-i (angle/2) sigma_y)` as a 2x2 matrix.
///
/// The generator is `sigma_y = i(sigma_+ - sigma_-)`, which in (g, e) order is
/// the textbook `[[0, -i], [i, 0]]`. With it, `R(pi/2) sigma_z R^dag = -sigma_x`
/// and `R(pi/2) sigma_x R^dag = sigma_z`, which turns the full Hamiltonian into
/// the rotated one term by term. The matrix is real.
pub fn atom_rotation_y(angle: f64) -> OperatorMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let m = DMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]);
    OperatorMatrix::new(m).unwrap()
}

/// `atom_rotation_y(angle) ⊗ I_field`.
pub fn rotation_y(angle: f64, cutoff: Cutoff) -> OperatorMatrix {
    tensor_op(&atom_rotation_y(angle), &OperatorMatrix::identity(cutoff.field_dim())).unwrap()
}

/// `sigma_x ⊗ diag((-1)^n)`.
pub fn parity_operator(cutoff: Cutoff) -> OperatorMatrix {
    tensor_op(&atom_operators().sigma_x, &field_parity(cutoff)).unwrap()
}
