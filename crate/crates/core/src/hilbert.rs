//! Truncated Fock space for a single field mode, coupled to a two-level atom.
//!
//! Joint states are ordered atom-major, field-minor: joint index
//! `atom * (n_max + 1) + n`, with the `|g>` block first (atom index 0) and
//! the `|e>` block second (atom index 1). Every operator in the crate is
//! built against this ordering.

use std::fmt::Write as _;
use std::marker::PhantomData;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Norms below this are treated as the zero vector.
pub const DEGENERATE_NORM: f64 = 1e-14;

/// Tolerance attached to the "normalized" flag.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// Highest retained Fock level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cutoff(usize);

impl Cutoff {
    pub const fn new(n_max: usize) -> Self {
        Cutoff(n_max)
    }

    /// Default policy `ceil(|alpha|^2 + 10|alpha| + 20)`.
    ///
    /// Keeps the coherent-state tail mass below 1e-12 for `|alpha| <= 4`.
    pub fn auto(alpha_abs: f64) -> Self {
        let a = alpha_abs.abs();
        Cutoff((a * a + 10.0 * a + 20.0).ceil() as usize)
    }

    pub const fn n_max(self) -> usize {
        self.0
    }

    pub const fn field_dim(self) -> usize {
        self.0 + 1
    }

    pub const fn joint_dim(self) -> usize {
        2 * (self.0 + 1)
    }
}

/// Two atomic levels in their fixed storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    Ground,
    Excited,
}

impl AtomLevel {
    pub const BOTH: [AtomLevel; 2] = [AtomLevel::Ground, AtomLevel::Excited];

    pub const fn index(self) -> usize {
        match self {
            AtomLevel::Ground => 0,
            AtomLevel::Excited => 1,
        }
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            AtomLevel::Ground => "g",
            AtomLevel::Excited => "e",
        }
    }
}

/// Marker for which Hilbert space a [`State`] lives in.
pub trait Space: Copy + PartialEq + std::fmt::Debug {
    fn dim(cutoff: Cutoff) -> usize;
    /// Inverse of `dim`, if `dim` is a valid dimension for this space.
    fn cutoff_for_dim(dim: usize) -> Option<Cutoff>;
}

/// Single field mode, dimension `n_max + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field;

/// Atom ⊗ field, dimension `2 (n_max + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtomField;

impl Space for Field {
    fn dim(cutoff: Cutoff) -> usize {
        cutoff.field_dim()
    }

    fn cutoff_for_dim(dim: usize) -> Option<Cutoff> {
        dim.checked_sub(1).map(Cutoff)
    }
}

impl Space for AtomField {
    fn dim(cutoff: Cutoff) -> usize {
        cutoff.joint_dim()
    }

    fn cutoff_for_dim(dim: usize) -> Option<Cutoff> {
        if dim >= 2 && dim.is_multiple_of(2) {
            Some(Cutoff(dim / 2 - 1))
        } else {
            None
        }
    }
}

/// Pure state vector of amplitudes in the Fock (or atom ⊗ Fock) basis.
///
/// Unnormalized vectors are allowed; `is_normalized` reports whether the
/// vector was verified to have unit norm within [`NORMALIZED_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct State<S> {
    amps: DVector<C64>,
    cutoff: Cutoff,
    normalized: bool,
    _space: PhantomData<S>,
}

pub type FieldVector = State<Field>;
pub type AtomFieldVector = State<AtomField>;

impl<S: Space> State<S> {
    /// Wraps raw amplitudes; the normalized flag is set iff the norm is unit.
    pub fn from_amplitudes(amps: DVector<C64>, cutoff: Cutoff) -> Result<Self> {
        let expected = S::dim(cutoff);
        if amps.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amps.len() });
        }
        let normalized = (amps.norm_squared() - 1.0).abs() <= NORMALIZED_TOL;
        Ok(State { amps, cutoff, normalized, _space: PhantomData })
    }

    /// Wraps raw amplitudes and deliberately clears the normalized flag.
    pub fn unnormalized(amps: DVector<C64>, cutoff: Cutoff) -> Result<Self> {
        let mut s = Self::from_amplitudes(amps, cutoff)?;
        s.normalized = false;
        Ok(s)
    }

    pub fn zeros(cutoff: Cutoff) -> Self {
        State { amps: DVector::zeros(S::dim(cutoff)), cutoff, normalized: false, _space: PhantomData }
    }

    /// Unit amplitude at `index`.
    pub fn basis(index: usize, cutoff: Cutoff) -> Result<Self> {
        let dim = S::dim(cutoff);
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Self::from_amplitudes(amps, cutoff)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_dim(other)?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Returns the unit vector and the norm it was divided by.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let norm = self.norm();
        if norm < DEGENERATE_NORM {
            return Err(Error::Degenerate { norm });
        }
        let amps = self.amps.unscale(norm);
        Ok((State { amps, cutoff: self.cutoff, normalized: true, _space: PhantomData }, norm))
    }

    /// Shorthand for `normalize` discarding the scale.
    pub fn normalized(&self) -> Result<Self> {
        self.normalize().map(|(s, _)| s)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut s = self.clone();
        s.amps *= factor;
        s.normalized = (s.amps.norm_squared() - 1.0).abs() <= NORMALIZED_TOL;
        s
    }

    /// `sum_k c_k |v_k>`; all terms must share a dimension.
    pub fn combination(terms: &[(C64, &Self)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let mut amps = DVector::zeros(first.dim());
        for (c, v) in terms {
            first.check_same_dim(v)?;
            amps.axpy(*c, &v.amps, C64::new(1.0, 0.0));
        }
        Self::from_amplitudes(amps, first.cutoff)
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok((&self.amps - &other.amps).norm())
    }

    /// Writes the amplitude-file representation.
    ///
    /// ```text
    /// # dim=<D> normalized=<0|1>
    /// <index> <re> <im>
    /// ```
    /// Floats carry 17 significant digits so the text round-trips bit-exactly.
    pub fn to_amplitude_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dim={} normalized={}", self.dim(), u8::from(self.normalized));
        for (i, c) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{} {:.16e} {:.16e}", i, c.re, c.im);
        }
        out
    }

    pub fn from_amplitude_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))?;
        let (dim, flagged) = parse_header(header)?;
        let cutoff =
            S::cutoff_for_dim(dim).ok_or_else(|| Error::Format(format!("dim={dim} is not valid for this space")))?;
        let mut amps = DVector::from_element(dim, C64::new(f64::NAN, f64::NAN));
        let mut seen = vec![false; dim];
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Format(format!("expected `index re im`, got `{line}`")));
            }
            let index: usize = fields[0].parse().map_err(|_| Error::Format(format!("bad index `{}`", fields[0])))?;
            if index >= dim || seen[index] {
                return Err(Error::Format(format!("index {index} out of range or repeated")));
            }
            let re: f64 = parse_float(fields[1])?;
            let im: f64 = parse_float(fields[2])?;
            amps[index] = C64::new(re, im);
            seen[index] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Format(format!("missing amplitude for index {missing}")));
        }
        let state = Self::from_amplitudes(amps, cutoff)?;
        if flagged && !state.normalized {
            return Err(Error::Format(format!("header claims normalized but norm^2 = {}", state.norm_sqr())));
        }
        if !flagged {
            return Ok(State { normalized: false, ..state });
        }
        Ok(state)
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Format(format!("bad float `{s}`")))
}

fn parse_header(line: &str) -> Result<(usize, bool)> {
    let body =
        line.trim().strip_prefix('#').ok_or_else(|| Error::Format("missing `# dim=.. normalized=..` header".into()))?;
    let mut dim = None;
    let mut normalized = None;
    for tok in body.split_whitespace() {
        match tok.split_once('=') {
            Some(("dim", v)) => dim = v.parse::<usize>().ok(),
            Some(("normalized", "0")) => normalized = Some(false),
            Some(("normalized", "1")) => normalized = Some(true),
            _ => return Err(Error::Format(format!("unexpected header token `{tok}`"))),
        }
    }
    match (dim, normalized) {
        (Some(d), Some(n)) => Ok((d, n)),
        _ => Err(Error::Format(format!("malformed header `{line}`"))),
    }
}

impl FieldVector {
    pub fn fock(n: usize, cutoff: Cutoff) -> Result<Self> {
        Self::basis(n, cutoff)
    }

    pub fn vacuum(cutoff: Cutoff) -> Self {
        Self::basis(0, cutoff).expect("vacuum always fits")
    }
}

impl AtomFieldVector {
    /// Reassembles a joint state from its `|g>` and `|e>` field blocks.
    pub fn from_blocks(ground: &FieldVector, excited: &FieldVector) -> Result<Self> {
        ground.check_same_dim(excited)?;
        let n = ground.dim();
        let mut amps = DVector::zeros(2 * n);
        amps.rows_mut(0, n).copy_from(&ground.amps);
        amps.rows_mut(n, n).copy_from(&excited.amps);
        Self::from_amplitudes(amps, ground.cutoff)
    }

    /// The (unnormalized) field block paired with one atomic level.
    pub fn block(&self, level: AtomLevel) -> FieldVector {
        let n = self.cutoff.field_dim();
        let amps = self.amps.rows(level.index() * n, n).into_owned();
        FieldVector::unnormalized(amps, self.cutoff).expect("block has field dimension")
    }
}

/// Two-component atomic state in (g, e) order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState(pub [C64; 2]);

impl AtomState {
    pub fn new(ground: C64, excited: C64) -> Self {
        AtomState([ground, excited])
    }

    pub fn ground() -> Self {
        AtomState([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn excited() -> Self {
        AtomState([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
    }

    /// `(|g> + |e>)/sqrt 2`
    pub fn plus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        AtomState([h, h])
    }

    /// `(|g> - |e>)/sqrt 2`
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        AtomState([C64::new(h, 0.0), C64::new(-h, 0.0)])
    }

    pub fn amplitude(&self, level: AtomLevel) -> C64 {
        self.0[level.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Dense complex matrix with an optional, verified Hermitian flag.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian: bool,
}

/// Tolerance for the Hermitian flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        Ok(OperatorMatrix { entries, hermitian: false })
    }

    /// Wraps `entries` and sets the Hermitian flag after checking it.
    pub fn hermitian(entries: DMatrix<C64>) -> Result<Self> {
        let mut op = Self::new(entries)?;
        let deviation = op.hermiticity_error();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        op.hermitian = true;
        Ok(op)
    }

    /// Same matrix with the Hermitian flag set, if it qualifies.
    pub fn into_hermitian(self) -> Result<Self> {
        Self::hermitian(self.entries)
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { entries: DMatrix::identity(dim, dim), hermitian: true }
    }

    pub fn from_real_diagonal(diag: impl IntoIterator<Item = f64>) -> Self {
        let d: Vec<C64> = diag.into_iter().map(|x| C64::new(x, 0.0)).collect();
        OperatorMatrix { entries: DMatrix::from_diagonal(&DVector::from_vec(d)), hermitian: true }
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max |M - M^dagger|`
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.entries.adjoint();
        max_abs(&(&self.entries - adj))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(max_abs(&(&self.entries - &other.entries)))
    }

    fn check_same_dim(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn dagger(&self) -> OperatorMatrix {
        OperatorMatrix { entries: self.entries.adjoint(), hermitian: self.hermitian }
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_dim(other)?;
        OperatorMatrix::new(&self.entries * &other.entries)
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_dim(other)?;
        OperatorMatrix::new(&self.entries + &other.entries)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_dim(other)?;
        OperatorMatrix::new(&self.entries - &other.entries)
    }

    /// Multiplication by a real scalar keeps the Hermitian flag.
    pub fn scale(&self, factor: f64) -> OperatorMatrix {
        OperatorMatrix { entries: &self.entries * C64::new(factor, 0.0), hermitian: self.hermitian }
    }

    /// `[A, B] = AB - BA`
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn apply<S: Space>(&self, state: &State<S>) -> Result<State<S>> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: state.dim() });
        }
        State::from_amplitudes(&self.entries * &state.amps, state.cutoff)
    }

    /// `<u|M|v>`
    pub fn matrix_element<S: Space>(&self, u: &State<S>, v: &State<S>) -> Result<C64> {
        u.inner(&self.apply(v)?)
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A coherent state together with the probability mass the cutoff discarded.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub state: FieldVector,
    /// `1 - sum |c_n|^2` before renormalization.
    pub tail_mass: f64,
}

/// `|alpha>` truncated at `cutoff` and renormalized.
///
/// Rejects `|alpha|^2 > n_max`, where more than about half the mass would fall
/// beyond the cutoff.
pub fn coherent_state(alpha: C64, cutoff: Cutoff) -> Result<CoherentState> {
    let alpha_sq = alpha.norm_sqr();
    if !alpha_sq.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} is not finite")));
    }
    if alpha_sq > cutoff.n_max() as f64 {
        return Err(Error::CutoffTooSmall { n_max: cutoff.n_max(), alpha_sq });
    }
    let dim = cutoff.field_dim();
    let mut amps = DVector::zeros(dim);
    // c_n = c_{n-1} alpha / sqrt(n)
    let mut c = C64::new((-alpha_sq / 2.0).exp(), 0.0);
    amps[0] = c;
    for n in 1..dim {
        c = c * alpha / (n as f64).sqrt();
        amps[n] = c;
    }
    let kept: f64 = amps.norm_squared();
    let tail_mass = (1.0 - kept).max(0.0);
    let state = FieldVector::from_amplitudes(amps.unscale(kept.sqrt()), cutoff)?;
    Ok(CoherentState { state, tail_mass })
}

/// Renormalized `|alpha>` for real alpha, without the tail bookkeeping.
pub fn coherent(alpha: f64, cutoff: Cutoff) -> Result<FieldVector> {
    coherent_state(C64::new(alpha, 0.0), cutoff).map(|c| c.state)
}

#[derive(Debug, Clone)]
pub struct LadderOperators {
    pub a: OperatorMatrix,
    pub a_dagger: OperatorMatrix,
    pub number: OperatorMatrix,
}

pub fn ladder_operators(cutoff: Cutoff) -> LadderOperators {
    let dim = cutoff.field_dim();
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let a = OperatorMatrix { entries: a, hermitian: false };
    let a_dagger = a.dagger();
    let number = OperatorMatrix::from_real_diagonal((0..dim).map(|n| n as f64));
    LadderOperators { a, a_dagger, number }
}

/// Field quadrature `a + a^dagger`, built directly so it is exactly symmetric.
pub fn position_quadrature(cutoff: Cutoff) -> OperatorMatrix {
    let dim = cutoff.field_dim();
    let mut x = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        let s = C64::new((n as f64).sqrt(), 0.0);
        x[(n - 1, n)] = s;
        x[(n, n - 1)] = s;
    }
    OperatorMatrix { entries: x, hermitian: true }
}

/// `diag((-1)^n)` on the field, i.e. `exp(i pi N)` without the imaginary noise.
pub fn field_parity(cutoff: Cutoff) -> OperatorMatrix {
    OperatorMatrix::from_real_diagonal((0..cutoff.field_dim()).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }))
}

#[derive(Debug, Clone)]
pub struct AtomOperators {
    pub sigma_z: OperatorMatrix,
    pub sigma_x: OperatorMatrix,
    pub sigma_plus: OperatorMatrix,
    pub sigma_minus: OperatorMatrix,
}

/// Pauli-type operators in (g, e) order: `sigma_z |e> = +|e>`, `sigma_+ |g> = |e>`.
pub fn atom_operators() -> AtomOperators {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let sigma_z = OperatorMatrix::from_real_diagonal([-1.0, 1.0]);
    let sigma_x = OperatorMatrix { entries: DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]), hermitian: true };
    // |e><g|: row e, column g
    let sigma_plus =
        OperatorMatrix { entries: DMatrix::from_row_slice(2, 2, &[zero, zero, one, zero]), hermitian: false };
    let sigma_minus = sigma_plus.dagger();
    AtomOperators { sigma_z, sigma_x, sigma_plus, sigma_minus }
}

/// `|atom> ⊗ |field>` in atom-major order.
pub fn tensor_state(atom: &AtomState, field: &FieldVector) -> AtomFieldVector {
    let g = field.scale(atom.amplitude(AtomLevel::Ground));
    let e = field.scale(atom.amplitude(AtomLevel::Excited));
    AtomFieldVector::from_blocks(&g, &e).expect("blocks share the field dimension")
}

/// `A ⊗ B` for a 2x2 atomic operator and a field operator.
pub fn tensor_op(atom: &OperatorMatrix, field: &OperatorMatrix) -> Result<OperatorMatrix> {
    if atom.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: atom.dim() });
    }
    Ok(OperatorMatrix { entries: atom.entries.kronecker(&field.entries), hermitian: atom.hermitian && field.hermitian })
}
