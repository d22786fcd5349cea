//! Closed-form eigenstates, energies and time evolution.
//!
//! In the rotated frame the two parity-definite product states
//! `(|e,alpha> ± |g,-alpha>)/sqrt 2` play the role of eigenstates; rotating
//! back gives `psi_± = ½[|e>|C_o> + |g>|C_e>]`, `½[|e>|C_e> + |g>|C_o>]` with
//! the unnormalized cats `C_e = |alpha> + |-alpha>`, `C_o = |alpha> - |-alpha>`.
//! These are exact eigenstates only when `omega_a = 0` and
//! `alpha = -lambda/omega_f`; elsewhere they are the displaced-oscillator
//! approximation and [`crate::oracle`] measures the gap.
//!
//! Every constructor returns an exactly normalized state. Printed prefactors
//! are not reproduced; the global phase `A(t)` is reported separately by
//! [`phase_factors`].

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{coherent, AtomFieldVector, AtomLevel, Cutoff, FieldVector, NORMALIZED_TOL};
use crate::model::{RabiParams, TimeConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatKind {
    Even,
    Odd,
}

const I: C64 = C64::new(0.0, 1.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `exp(-2 alpha^2)`, the overlap `<alpha|-alpha>` for real alpha.
pub fn overlap_factor(alpha: f64) -> f64 {
    (-2.0 * alpha * alpha).exp()
}

/// `(E_+, E_-)` with `E_± = ∓(omega_a/2) e^{-2 alpha^2} + omega_f alpha^2 + 2 lambda alpha`.
///
/// The upper sign belongs to `E_+`, so `E_+ <= E_-`.
pub fn energies(p: &RabiParams) -> (f64, f64) {
    (energy(Sign::Plus, p), energy(Sign::Minus, p))
}

pub fn energy(sign: Sign, p: &RabiParams) -> f64 {
    let a = p.alpha();
    let split = 0.5 * p.omega_a() * overlap_factor(a);
    // omega_f |alpha|^2 + lambda (alpha + alpha*) with alpha real
    let mean = p.omega_f() * a * a + 2.0 * p.lambda() * a;
    mean - sign.value() * split
}

/// Normalized `|alpha>` and `|-alpha>` at one cutoff.
fn pointer_pair(alpha: f64, cutoff: Cutoff) -> Result<(FieldVector, FieldVector)> {
    Ok((coherent(alpha, cutoff)?, coherent(-alpha, cutoff)?))
}

/// `(|e, alpha> ± |g, -alpha>)/sqrt 2`, the rotated-frame eigenstates.
pub fn eigenstate_rotated(sign: Sign, p: &RabiParams, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let (plus, minus) = pointer_pair(p.alpha(), cutoff)?;
    let g = minus.scale(re(sign.value() * FRAC_1_SQRT_2));
    let e = plus.scale(re(FRAC_1_SQRT_2));
    AtomFieldVector::from_blocks(&g, &e)?.normalized()
}

/// Lab-frame eigenstate `½[|e,alpha> + |g,alpha> ± (|g,-alpha> - |e,-alpha>)]`.
pub fn eigenstate(sign: Sign, p: &RabiParams, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let (plus, minus) = pointer_pair(p.alpha(), cutoff)?;
    let s = re(sign.value());
    let h = re(0.5);
    let g = FieldVector::combination(&[(h, &plus), (h * s, &minus)])?;
    let e = FieldVector::combination(&[(h, &plus), (-h * s, &minus)])?;
    AtomFieldVector::from_blocks(&g, &e)?.normalized()
}

/// Same eigenstate assembled from cat components: `½[|e>C_o + |g>C_e]` for `+`,
/// `½[|e>C_e + |g>C_o]` for `-`.
pub fn eigenstate_from_cats(sign: Sign, p: &RabiParams, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let a = p.alpha();
    let even = cat_state(CatKind::Even, a, cutoff, false)?.scale(re(0.5));
    let odd = cat_state(CatKind::Odd, a, cutoff, false)?.scale(re(0.5));
    let state = match sign {
        Sign::Plus => AtomFieldVector::from_blocks(&even, &odd)?,
        Sign::Minus => AtomFieldVector::from_blocks(&odd, &even)?,
    };
    state.normalized()
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub sign: Sign,
    pub energy: f64,
    pub state: AtomFieldVector,
    pub rotated_state: AtomFieldVector,
}

pub fn eigen_pair(sign: Sign, p: &RabiParams, cutoff: Cutoff) -> Result<EigenPair> {
    Ok(EigenPair {
        sign,
        energy: energy(sign, p),
        state: eigenstate(sign, p, cutoff)?,
        rotated_state: eigenstate_rotated(sign, p, cutoff)?,
    })
}

/// `|alpha> + |-alpha>` (even) or `|alpha> - |-alpha>` (odd).
///
/// Unnormalized cats have `norm^2 = 2(1 ± <alpha|-alpha>)`. The normalized odd
/// cat does not exist at `alpha = 0`.
pub fn cat_state(kind: CatKind, alpha: f64, cutoff: Cutoff, normalized: bool) -> Result<FieldVector> {
    let (plus, minus) = pointer_pair(alpha, cutoff)?;
    let s = match kind {
        CatKind::Even => 1.0,
        CatKind::Odd => -1.0,
    };
    let cat = FieldVector::combination(&[(re(1.0), &plus), (re(s), &minus)])?;
    let cat = FieldVector::unnormalized(cat.into_amplitudes(), cutoff)?;
    if normalized {
        cat.normalized()
    } else {
        Ok(cat)
    }
}

/// `(|alpha> ± i|-alpha>)/sqrt 2`; exactly normalized for real alpha.
pub fn yurke_stoler(alpha: f64, sign: Sign, cutoff: Cutoff) -> Result<FieldVector> {
    let (plus, minus) = pointer_pair(alpha, cutoff)?;
    let h = re(FRAC_1_SQRT_2);
    FieldVector::combination(&[(h, &plus), (h * I * sign.value(), &minus)])?.normalized()
}

/// Expansion coefficients on `{psi_+, psi_-}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionCoeffs {
    pub c_plus: C64,
    pub c_minus: C64,
}

impl SuperpositionCoeffs {
    pub fn new(c_plus: C64, c_minus: C64) -> Self {
        SuperpositionCoeffs { c_plus, c_minus }
    }

    /// Like `new` but insists on `|c_+|^2 + |c_-|^2 = 1`.
    pub fn normalized(c_plus: C64, c_minus: C64) -> Result<Self> {
        let c = Self::new(c_plus, c_minus);
        if !c.is_normalized() {
            return Err(Error::InvalidParameter(format!("|c+|^2 + |c-|^2 = {} is not 1", c.weight())));
        }
        Ok(c)
    }

    pub fn weight(&self) -> f64 {
        self.c_plus.norm_sqr() + self.c_minus.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        (self.weight() - 1.0).abs() <= NORMALIZED_TOL
    }

    /// `c_+ = c_- = 1/sqrt 2`
    pub fn example1() -> Self {
        Self::new(re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2))
    }

    /// `c_+ = -c_- = 1/sqrt 2`
    pub fn example2() -> Self {
        Self::new(re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2))
    }

    /// `c_+ = 1, c_- = 0`
    pub fn example3() -> Self {
        Self::new(re(1.0), re(0.0))
    }
}

/// `c_+ e^{±iE_+t} psi_+ + c_- e^{±iE_-t} psi_-`, renormalized.
pub fn evolve(
    coeffs: SuperpositionCoeffs,
    p: &RabiParams,
    t: f64,
    cutoff: Cutoff,
    convention: TimeConvention,
) -> Result<AtomFieldVector> {
    let (ep, em) = energies(p);
    let s = convention.sign();
    let psi_p = eigenstate(Sign::Plus, p, cutoff)?;
    let psi_m = eigenstate(Sign::Minus, p, cutoff)?;
    let wp = coeffs.c_plus * C64::from_polar(1.0, s * ep * t);
    let wm = coeffs.c_minus * C64::from_polar(1.0, s * em * t);
    AtomFieldVector::combination(&[(wp, &psi_p), (wm, &psi_m)])?.normalized()
}

/// `theta(t)` and the global phase `A(t)` of the worked examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFactors {
    pub theta: f64,
    pub a_phase: C64,
}

/// `theta(t) = (omega_a t / 2) e^{-2 alpha^2}`
pub fn theta(p: &RabiParams, t: f64) -> f64 {
    theta_from_half_phase(0.5 * p.omega_a() * t, p.alpha())
}

/// `theta` as a function of `omega_a t / 2` and alpha alone.
pub fn theta_from_half_phase(omega_a_t_over_2: f64, alpha: f64) -> f64 {
    omega_a_t_over_2 * overlap_factor(alpha)
}

/// `A(t) = exp(i (omega_f |alpha|^2 + lambda(alpha + alpha*)) t)`
pub fn phase_a(p: &RabiParams, t: f64) -> C64 {
    let a = p.alpha();
    C64::from_polar(1.0, (p.omega_f() * a * a + 2.0 * p.lambda() * a) * t)
}

pub fn phase_factors(p: &RabiParams, t: f64) -> PhaseFactors {
    PhaseFactors { theta: theta(p, t), a_phase: phase_a(p, t) }
}

/// Idealized pointer probabilities `(cos^2 theta, sin^2 theta)` of the first example.
pub fn probabilities_pm(p: &RabiParams, t: f64) -> (f64, f64) {
    probabilities_from_theta(theta(p, t))
}

/// Second example: the two probabilities are interchanged.
pub fn probabilities_pm_example2(p: &RabiParams, t: f64) -> (f64, f64) {
    let (a, b) = probabilities_pm(p, t);
    (b, a)
}

pub fn probabilities_from_theta(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * c, s * s)
}

fn from_branches(g: FieldVector, e: FieldVector) -> Result<AtomFieldVector> {
    AtomFieldVector::from_blocks(&g, &e)?.normalized()
}

/// `A(t)/sqrt 2 (cos theta [|g> + |e>]|alpha> - i sin theta [|g> - |e>]|-alpha>)`
///
/// The closed form of `evolve(example1, t)`.
pub fn example1_state(p: &RabiParams, t: f64, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let PhaseFactors { theta, a_phase } = phase_factors(p, t);
    let g = example1_field(AtomLevel::Ground, p.alpha(), theta, cutoff)?;
    let e = example1_field(AtomLevel::Excited, p.alpha(), theta, cutoff)?;
    let k = a_phase * FRAC_1_SQRT_2;
    from_branches(g.scale(k), e.scale(k))
}

/// `cos theta |alpha> ± i sin theta |-alpha>`, `+` for the excited atom.
///
/// The field left behind when the first example's atom is detected in `level`.
pub fn example1_field(level: AtomLevel, alpha: f64, theta: f64, cutoff: Cutoff) -> Result<FieldVector> {
    let (plus, minus) = pointer_pair(alpha, cutoff)?;
    let s = match level {
        AtomLevel::Excited => 1.0,
        AtomLevel::Ground => -1.0,
    };
    let (sn, cs) = theta.sin_cos();
    FieldVector::combination(&[(re(cs), &plus), (I * (s * sn), &minus)])
}

/// `A(t)/sqrt 2 (-i sin theta [|g> + |e>]|alpha> + cos theta [|g> - |e>]|-alpha>)`
pub fn example2_state(p: &RabiParams, t: f64, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let PhaseFactors { theta, a_phase } = phase_factors(p, t);
    let g = example2_field(AtomLevel::Ground, p.alpha(), theta, cutoff)?;
    let e = example2_field(AtomLevel::Excited, p.alpha(), theta, cutoff)?;
    let k = a_phase * FRAC_1_SQRT_2;
    from_branches(g.scale(k), e.scale(k))
}

/// `-i sin theta |alpha> ∓ cos theta |-alpha>`, `-` for the excited atom.
pub fn example2_field(level: AtomLevel, alpha: f64, theta: f64, cutoff: Cutoff) -> Result<FieldVector> {
    let (plus, minus) = pointer_pair(alpha, cutoff)?;
    let s = match level {
        AtomLevel::Excited => -1.0,
        AtomLevel::Ground => 1.0,
    };
    let (sn, cs) = theta.sin_cos();
    FieldVector::combination(&[(-I * sn, &plus), (re(s * cs), &minus)])
}

/// `e^{iE_+t} psi_+`: stationary up to a global phase.
pub fn example3_state(p: &RabiParams, t: f64, cutoff: Cutoff) -> Result<AtomFieldVector> {
    let phase = C64::from_polar(1.0, energy(Sign::Plus, p) * t);
    eigenstate_from_cats(Sign::Plus, p, cutoff)?.scale(phase).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{tensor_state, AtomState};
    use crate::model::{hamiltonian_rotated, rotation_y, AlphaPolicy};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params(wa: f64, wf: f64, lam: f64, alpha: f64) -> RabiParams {
        RabiParams::new(wa, wf, lam, AlphaPolicy::Fixed(alpha)).unwrap()
    }

    fn residual(sign: Sign, p: &RabiParams, cut: Cutoff) -> f64 {
        let psi = eigenstate_rotated(sign, p, cut).unwrap();
        let hpsi = hamiltonian_rotated(p, cut).apply(&psi).unwrap();
        hpsi.distance(&psi.scale(re(energy(sign, p)))).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energies(&params(1.0, 1.0, 0.0, 0.0)), (-0.5, 0.5));
        let (a, b) = energies(&RabiParams::auto(0.0, 1.0, 0.1).unwrap());
        assert!((a + 0.01).abs() < 1e-15 && (b + 0.01).abs() < 1e-15);
        let (a, b) = energies(&params(1.0, 1.0, 0.0, 1.0));
        let d = 0.5 * (-2.0f64).exp();
        assert!((a - (1.0 - d)).abs() < 1e-15 && (b - (1.0 + d)).abs() < 1e-15);
        assert!((d - 0.067668).abs() < 1e-6);
    }

    #[test]
    fn rotated_eigenstate_at_zero_alpha() {
        let cut = Cutoff::new(4);
        let p = params(1.0, 1.0, 0.0, 0.0);
        let e0 = tensor_state(&AtomState::excited(), &FieldVector::vacuum(cut));
        let g0 = tensor_state(&AtomState::ground(), &FieldVector::vacuum(cut));
        let h = re(FRAC_1_SQRT_2);
        let want = AtomFieldVector::combination(&[(h, &e0), (h, &g0)]).unwrap();
        assert!(eigenstate_rotated(Sign::Plus, &p, cut).unwrap().distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn rotated_eigenstate_residuals() {
        let p = RabiParams::auto(0.0, 1.0, 0.3).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            assert!(residual(sign, &p, Cutoff::new(60)) <= 1e-8);
        }
        let p = RabiParams::auto(0.5, 1.0, 0.3).unwrap();
        assert!(residual(Sign::Plus, &p, Cutoff::new(60)) > 1e-3);
        // without the alpha constraint the state is not an eigenstate either
        let p = params(0.0, 1.0, 0.3, 0.5);
        assert!(residual(Sign::Plus, &p, Cutoff::new(60)) > 1e-3);
    }

    #[test]
    fn lab_eigenstate_two_paths() {
        let cut = Cutoff::new(40);
        let p = params(1.0, 1.0, 0.2, -0.2);
        for sign in [Sign::Plus, Sign::Minus] {
            let direct = eigenstate(sign, &p, cut).unwrap();
            let rotated = rotation_y(-FRAC_PI_2, cut).apply(&eigenstate_rotated(sign, &p, cut).unwrap()).unwrap();
            assert!(direct.distance(&rotated).unwrap() <= 1e-12);
            let cats = eigenstate_from_cats(sign, &p, cut).unwrap();
            assert!(direct.distance(&cats).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn lab_eigenstate_at_zero_alpha_is_ground_vacuum() {
        let cut = Cutoff::new(8);
        let p = params(1.0, 1.0, 0.0, 0.0);
        let want = tensor_state(&AtomState::ground(), &FieldVector::vacuum(cut));
        assert!(eigenstate(Sign::Plus, &p, cut).unwrap().distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn eigenstates_are_orthonormal() {
        let cut = Cutoff::new(40);
        let p = params(1.0, 1.0, 0.3, 0.7);
        let a = eigenstate(Sign::Plus, &p, cut).unwrap();
        let b = eigenstate(Sign::Minus, &p, cut).unwrap();
        assert!(a.inner(&b).unwrap().norm() <= 1e-12);
        assert!((a.norm() - 1.0).abs() <= 1e-12 && (b.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn cat_norms_and_symmetry() {
        let cut = Cutoff::new(20);
        let even0 = cat_state(CatKind::Even, 0.0, cut, false).unwrap();
        assert!(even0.distance(&FieldVector::vacuum(cut).scale(re(2.0))).unwrap() < 1e-15);
        assert!(!even0.is_normalized());

        let cut = Cutoff::new(40);
        let even = cat_state(CatKind::Even, 1.0, cut, false).unwrap();
        assert!((even.norm_sqr() - 2.0 * (1.0 + (-2.0f64).exp())).abs() < 1e-12);
        assert!((even.norm_sqr() - 2.270671).abs() < 1e-6);
        let odd = cat_state(CatKind::Odd, 1.0, cut, true).unwrap();
        assert_eq!(odd.amplitude(0), re(0.0));
        for n in (0..=40).step_by(2) {
            assert_eq!(odd.amplitude(n), re(0.0));
        }
        for n in (1..=40).step_by(2) {
            assert_eq!(even.amplitude(n), re(0.0));
        }
        let err = cat_state(CatKind::Odd, 0.0, cut, true).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn evolve_at_zero_time() {
        let cut = Cutoff::new(30);
        let p = params(1.0, 1.0, 0.2, 0.8);
        let c = SuperpositionCoeffs::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let got = evolve(c, &p, 0.0, cut, TimeConvention::Paper).unwrap();
        let want = AtomFieldVector::combination(&[
            (c.c_plus, &eigenstate(Sign::Plus, &p, cut).unwrap()),
            (c.c_minus, &eigenstate(Sign::Minus, &p, cut).unwrap()),
        ])
        .unwrap();
        assert!(got.distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn evolve_conventions_differ_only_in_phase() {
        let cut = Cutoff::new(30);
        let p = params(1.3, 1.0, 0.2, 0.6);
        let c = SuperpositionCoeffs::example1();
        let a = evolve(c, &p, 2.1, cut, TimeConvention::Paper).unwrap();
        let b = evolve(c, &p, 2.1, cut, TimeConvention::Standard).unwrap();
        let pp = eigenstate(Sign::Plus, &p, cut).unwrap();
        assert!((a.inner(&pp).unwrap().norm() - b.inner(&pp).unwrap().norm()).abs() < 1e-14);
        assert!(a.distance(&b).unwrap() > 1e-3);
    }

    #[test]
    fn example_closed_forms_match_evolution() {
        let cut = Cutoff::new(45);
        for &(alpha, t) in &[(0.3, 0.0), (0.5, 1.7), (1.0, 4.0), (1.5, 11.0)] {
            let p = params(1.2, 0.9, 0.25, alpha);
            let cases: [(SuperpositionCoeffs, AtomFieldVector); 3] = [
                (SuperpositionCoeffs::example1(), example1_state(&p, t, cut).unwrap()),
                (SuperpositionCoeffs::example2(), example2_state(&p, t, cut).unwrap()),
                (SuperpositionCoeffs::example3(), example3_state(&p, t, cut).unwrap()),
            ];
            for (c, closed) in cases {
                let general = evolve(c, &p, t, cut, TimeConvention::Paper).unwrap();
                assert!(closed.distance(&general).unwrap() <= 1e-12, "alpha {alpha} t {t}");
            }
        }
    }

    #[test]
    fn example_initial_states() {
        let cut = Cutoff::new(40);
        let p = params(1.0, 1.0, 0.1, 1.1);
        let a = coherent(1.1, cut).unwrap();
        let want1 = tensor_state(&AtomState::plus(), &a);
        assert!(example1_state(&p, 0.0, cut).unwrap().distance(&want1).unwrap() < 1e-14);
        let m = coherent(-1.1, cut).unwrap();
        let want2 = tensor_state(&AtomState::minus(), &m);
        assert!(example2_state(&p, 0.0, cut).unwrap().distance(&want2).unwrap() < 1e-14);
    }

    #[test]
    fn example3_is_stationary() {
        let cut = Cutoff::new(40);
        let p = params(1.0, 1.0, 0.1, 0.9);
        let s0 = example3_state(&p, 0.0, cut).unwrap();
        for t in [0.5, 3.0, 100.0] {
            let st = example3_state(&p, t, cut).unwrap();
            assert!((s0.inner(&st).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_atom_frequency_gives_global_phase() {
        let cut = Cutoff::new(40);
        let p = params(0.0, 1.0, 0.2, 0.8);
        let s0 = example1_state(&p, 0.0, cut).unwrap();
        let st = example1_state(&p, 7.3, cut).unwrap();
        assert!((s0.inner(&st).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn theta_and_phase() {
        let p = params(2.0, 1.0, 0.3, 1.0);
        assert_eq!(theta(&p, 0.0), 0.0);
        assert_eq!(phase_a(&p, 0.0), re(1.0));
        assert!((theta(&p, 1.0) - (-2.0f64).exp()).abs() < 1e-16);
        assert!((theta(&p, 1.0) - 0.135335).abs() < 1e-6);
        let p0 = params(2.0, 1.0, 0.3, 0.0);
        assert_eq!(theta(&p0, 1.25), 1.25);
        assert!((phase_a(&p, 3.7).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn probability_formulas() {
        let p = params(2.0, 1.0, 0.3, 1.0);
        assert_eq!(probabilities_pm(&p, 0.0), (1.0, 0.0));
        let (a, b) = probabilities_from_theta(FRAC_PI_4);
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        let (a, _) = probabilities_from_theta(theta_from_half_phase(10.0, 3.0));
        assert!((a - 1.0).abs() <= 1e-12);
        assert_eq!(probabilities_pm_example2(&p, 0.0), (0.0, 1.0));
        for t in [0.1, 1.0, 2.5, 13.0] {
            let (a, b) = probabilities_pm(&p, t);
            assert!((a + b - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn yurke_stoler_states() {
        let cut = Cutoff::new(50);
        let ys = yurke_stoler(0.0, Sign::Plus, cut).unwrap();
        let want = FieldVector::vacuum(cut).scale(C64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2));
        assert!(ys.distance(&want).unwrap() < 1e-15);
        for a in [0.5, 1.0, 2.0] {
            for s in [Sign::Plus, Sign::Minus] {
                // the unnormalized combination already has unit norm
                let (p, m) = pointer_pair(a, cut).unwrap();
                let raw =
                    FieldVector::combination(&[(re(FRAC_1_SQRT_2), &p), (I * s.value() * FRAC_1_SQRT_2, &m)]).unwrap();
                assert!((raw.norm() - 1.0).abs() <= 1e-13);
            }
        }
        let even = cat_state(CatKind::Even, 2.0, cut, true).unwrap();
        let f = even.inner(&yurke_stoler(2.0, Sign::Plus, cut).unwrap()).unwrap().norm_sqr();
        assert!((f - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn yurke_stoler_at_equal_branch_weights() {
        // cos theta = sin theta is where the detected branch becomes a YS state
        let cut = Cutoff::new(40);
        let branch = example1_field(AtomLevel::Excited, 1.0, FRAC_PI_4, cut).unwrap();
        let ys = yurke_stoler(1.0, Sign::Plus, cut).unwrap();
        let f = branch.normalized().unwrap().inner(&ys).unwrap().norm_sqr();
        assert!((f - 1.0).abs() <= 1e-12);
    }
}
