use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use rabi_cat::analytic::{cat_state, eigenstate, eigenstate_rotated, example1_field, probabilities_pm, CatKind, Sign};
use rabi_cat::hilbert::{
    coherent, coherent_state, ladder_operators, tensor_op, tensor_state, AtomFieldVector, AtomLevel, AtomState, Cutoff,
    OperatorMatrix,
};
use rabi_cat::measurement::{measure_atom, pointer_probabilities, PointerMode};
use rabi_cat::model::{
    hamiltonian_full, hamiltonian_rotated, parity_operator, rotation_y, AlphaPolicy, RabiParams, TimeConvention,
};
use rabi_cat::oracle::eigendecompose;
use rabi_cat::pipeline::{run, AtomPreset, Engine, InitialState, PipelineConfig};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn params() -> impl Strategy<Value = RabiParams> {
    (0.0..2.0f64, 0.3..2.0f64, -0.8..0.8f64, -2.0..2.0f64)
        .prop_map(|(wa, wf, lam, a)| RabiParams::new(wa, wf, lam, AlphaPolicy::Fixed(a)).unwrap())
}

fn joint_state(cut: Cutoff) -> impl Strategy<Value = AtomFieldVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), cut.joint_dim()).prop_filter_map("zero vector", move |v| {
        let amps = DVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| c(a, b)));
        AtomFieldVector::unnormalized(amps, cut).ok()?.normalized().ok()
    })
}

fn apply_atom(m: &OperatorMatrix, a: &AtomState) -> AtomState {
    let e = m.entries();
    AtomState::new(e[(0, 0)] * a.0[0] + e[(0, 1)] * a.0[1], e[(1, 0)] * a.0[0] + e[(1, 1)] * a.0[1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coherent_norm_and_overlap(alpha in -3.0..3.0f64) {
        let cut = Cutoff::auto(alpha.abs());
        let cs = coherent_state(c(alpha, 0.0), cut).unwrap();
        prop_assert!(cs.tail_mass < 1e-12);
        prop_assert!((cs.state.norm() - 1.0).abs() <= 1e-12);
        let minus = coherent(-alpha, cut).unwrap();
        let ov = cs.state.inner(&minus).unwrap();
        prop_assert!((ov - c((-2.0 * alpha * alpha).exp(), 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn cat_parity_support(alpha in 0.05..3.0f64) {
        let cut = Cutoff::auto(alpha);
        let even = cat_state(CatKind::Even, alpha, cut, false).unwrap();
        let odd = cat_state(CatKind::Odd, alpha, cut, false).unwrap();
        for n in 0..cut.field_dim() {
            let zero = if n % 2 == 0 { odd.amplitude(n) } else { even.amplitude(n) };
            prop_assert_eq!(zero, c(0.0, 0.0));
        }
    }

    #[test]
    fn tensor_products_factor(
        atom in prop::array::uniform4((-1.0..1.0f64, -1.0..1.0f64)),
        g in (-1.0..1.0f64, -1.0..1.0f64),
        e in (-1.0..1.0f64, -1.0..1.0f64),
        alpha in -1.5..1.5f64,
    ) {
        let cut = Cutoff::new(20);
        let a = OperatorMatrix::new(DMatrix::from_iterator(2, 2, atom.iter().map(|&(r, i)| c(r, i)))).unwrap();
        let b = ladder_operators(cut).a;
        let u = AtomState::new(c(g.0, g.1), c(e.0, e.1));
        let v = coherent(alpha, cut).unwrap();
        let lhs = tensor_op(&a, &b).unwrap().apply(&tensor_state(&u, &v)).unwrap();
        let rhs = tensor_state(&apply_atom(&a, &u), &b.apply(&v).unwrap());
        prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-13);
    }

    #[test]
    fn hamiltonians_hermitian_and_isospectral(p in params()) {
        let cut = Cutoff::new(14);
        let h = hamiltonian_full(&p, cut);
        let hr = hamiltonian_rotated(&p, cut);
        prop_assert!(h.hermiticity_error() <= 1e-13);
        prop_assert!(hr.hermiticity_error() <= 1e-13);
        let a = eigendecompose(&h).unwrap().eigenvalues;
        let b = eigendecompose(&hr).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn parity_commutes_exactly(p in params(), n in 2usize..30) {
        let cut = Cutoff::new(n);
        let hr = hamiltonian_rotated(&p, cut);
        let comm = hr.commutator(&parity_operator(cut)).unwrap();
        prop_assert!(comm.max_abs() <= 1e-14 * hr.max_abs());
    }

    #[test]
    fn eigenstates_orthonormal_two_paths(p in params()) {
        let cut = p.auto_cutoff();
        let a = eigenstate(Sign::Plus, &p, cut).unwrap();
        let b = eigenstate(Sign::Minus, &p, cut).unwrap();
        prop_assert!(a.inner(&b).unwrap().norm() <= 1e-12);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-12 && (b.norm() - 1.0).abs() <= 1e-12);
        let back = rotation_y(-std::f64::consts::FRAC_PI_2, cut);
        for s in [Sign::Plus, Sign::Minus] {
            let via = back.apply(&eigenstate_rotated(s, &p, cut).unwrap()).unwrap();
            prop_assert!(via.distance(&eigenstate(s, &p, cut).unwrap()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn pointer_probabilities_sum_to_one(p in params(), t in 0.0..50.0f64) {
        let (a, b) = probabilities_pm(&p, t);
        prop_assert!((a + b - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn exact_propagation_unitary_and_composable(p in params(), t1 in 0.0..5.0f64, t2 in 0.0..5.0f64) {
        let cut = Cutoff::new(12);
        let spec = eigendecompose(&hamiltonian_full(&p, cut)).unwrap();
        let psi = tensor_state(&AtomState::plus(), &coherent(0.7, cut).unwrap());
        let one = spec.propagate(&psi, t1, TimeConvention::Paper).unwrap();
        prop_assert!((one.norm() - 1.0).abs() <= 1e-11);
        let two = spec.propagate(&one, t2, TimeConvention::Paper).unwrap();
        let direct = spec.propagate(&psi, t1 + t2, TimeConvention::Paper).unwrap();
        prop_assert!(two.distance(&direct).unwrap() <= 1e-10);
    }

    #[test]
    fn measurement_complete_and_idempotent(psi in joint_state(Cutoff::new(6))) {
        let m = measure_atom(&psi).unwrap();
        prop_assert!((m.ground.probability + m.excited.probability - 1.0).abs() <= 1e-12);
        for o in m.outcomes() {
            if let Some(f) = &o.post_field {
                prop_assert!((f.norm() - 1.0).abs() <= 1e-12);
                let atom = if o.atom_level.index() == 0 { AtomState::ground() } else { AtomState::excited() };
                let again = measure_atom(&tensor_state(&atom, f)).unwrap();
                prop_assert!((again.outcome(o.atom_level).probability - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn pointer_modes_agree_up_to_overlap(alpha in 1.0..3.0f64, theta in 0.0..6.3f64, level in 0usize..2) {
        let cut = Cutoff::auto(alpha);
        let level = AtomLevel::BOTH[level];
        let f = example1_field(level, alpha, theta, cut).unwrap().normalized().unwrap();
        let i = pointer_probabilities(&f, alpha, PointerMode::Idealized).unwrap();
        let e = pointer_probabilities(&f, alpha, PointerMode::Exact).unwrap();
        prop_assert!(i.outside_weight <= 1e-12 && e.outside_weight <= 1e-12);
        // worst case theta = 0 gives (1 - sqrt(1 - s^2)) / 2 with s^2 = e^{-4 alpha^2}
        let s2 = (-4.0 * alpha * alpha).exp();
        prop_assert!((i.p_plus - e.p_plus).abs() <= 0.26 * s2 + 1e-15);
    }

    #[test]
    fn pipeline_conserves_probability(p in params(), t in 0.0..8.0f64, preset in 0usize..4) {
        let preset = [AtomPreset::Ground, AtomPreset::Excited, AtomPreset::Plus, AtomPreset::Minus][preset];
        let mut cfg = PipelineConfig::new(preset, p, t);
        cfg.engine = Engine::Oracle;
        let r = run(&cfg).unwrap();
        for (name, n) in &r.stage_norms {
            prop_assert!((n - 1.0).abs() <= 1e-12, "{} {}", name, n);
        }
        prop_assert!((r.total_probability() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn amplitude_text_round_trips(psi in joint_state(Cutoff::new(5))) {
        let text = psi.to_amplitude_text();
        let back = AtomFieldVector::from_amplitude_text(&text).unwrap();
        prop_assert_eq!(back.amplitudes(), psi.amplitudes());
        prop_assert_eq!(back.to_amplitude_text(), text);
    }
}

#[test]
fn pipeline_is_deterministic() {
    let p = RabiParams::new(0.7, 1.0, 0.3, AlphaPolicy::Fixed(1.1)).unwrap();
    let mut cfg = PipelineConfig::new(InitialState::Atom(AtomState::plus()), p, 4.0);
    cfg.engine = Engine::Both;
    cfg.shots = 2000;
    cfg.seed = 3;
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.final_state.amplitudes(), b.final_state.amplitudes());
    assert_eq!(a.counts, b.counts);
    assert_eq!(a.engine_fidelity, b.engine_fidelity);
}
