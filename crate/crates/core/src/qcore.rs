//! Dense complex linear algebra for finite Hilbert spaces: state vectors,
//! operators, density matrices and the harmonic-oscillator (Fock) factories
//! the other modules build on. Units are ħ = 1 throughout.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Amplitude below which a truncated expansion counts as converged.
pub const TRUNCATION_AMPLITUDE: f64 = 1e-6;

/// Harmonic trap with mass `M` and frequency `ν` (dimensionless, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSpec {
    mass: f64,
    frequency: f64,
}

impl TrapSpec {
    pub fn new(mass: f64, frequency: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid("M", "must be positive"));
        }
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::invalid("nu", "must be positive"));
        }
        Ok(TrapSpec { mass, frequency })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    /// Ground-state length scale `x0 = sqrt(1 / (2 M ν))`.
    pub fn x0(&self) -> f64 {
        (1.0 / (2.0 * self.mass * self.frequency)).sqrt()
    }
}

impl Default for TrapSpec {
    fn default() -> Self {
        TrapSpec {
            mass: 1.0,
            frequency: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("dim", "must be positive"));
        }
        Ok(StateVector { amps })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amps))
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amps.len(),
            amps.iter().map(|&a| C64::new(a, 0.0)),
        ))
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut amps = DVector::zeros(dim);
        amps[k] = ONE;
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("state", "cannot normalize a zero vector"));
        }
        self.amps /= C64::new(n, 0.0);
        Ok(n)
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        StateVector { amps: &self.amps * c }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        check_dim(mat.nrows(), mat.ncols())?;
        Ok(Operator { mat })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        let mut mat = DMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            check_dim(n, row.len())?;
            for (j, v) in row.iter().enumerate() {
                mat[(i, j)] = *v;
            }
        }
        Self::new(mat)
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        Operator {
            mat: DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        }
    }

    pub fn pauli_y() -> Self {
        Operator {
            mat: DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        }
    }

    pub fn pauli_z() -> Self {
        Operator {
            mat: DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Self {
        Operator {
            mat: &a.amps * b.amps.adjoint(),
        }
    }

    pub fn projector(s: &StateVector) -> Self {
        Self::outer(s, s)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            mat: self.mat.adjoint(),
        }
    }

    /// Largest entry of `|A − A†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() < hermitian_tolerance(&self.mat)
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        check_dim(self.dim(), s.dim())?;
        Ok(StateVector {
            amps: &self.mat * &s.amps,
        })
    }

    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Operator {
            mat: &self.mat * &rhs.mat,
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Operator {
            mat: &self.mat + &rhs.mat,
        })
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        check_dim(self.dim(), rhs.dim())?;
        Ok(Operator {
            mat: &self.mat - &rhs.mat,
        })
    }

    pub fn scale(&self, c: C64) -> Operator {
        Operator { mat: &self.mat * c }
    }

    pub fn scale_real(&self, c: f64) -> Operator {
        self.scale(C64::new(c, 0.0))
    }

    pub fn commutator(&self, rhs: &Operator) -> Result<Operator> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Real eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let mut ev: Vec<f64> = SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation < hermitian_tolerance(&self.mat) {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        check_dim(mat.nrows(), mat.ncols())?;
        Ok(DensityMatrix { mat })
    }

    pub fn pure(s: &StateVector) -> Self {
        DensityMatrix {
            mat: &s.amps * s.amps.adjoint(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: DMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        }
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ|ρ_ij|² for Hermitian ρ
        self.mat.norm_squared()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn normalize_trace(&mut self) -> Result<f64> {
        let tr = self.trace();
        if !(tr > 0.0 && tr.is_finite()) {
            return Err(Error::invalid("rho", "trace must be positive"));
        }
        self.mat /= C64::new(tr, 0.0);
        Ok(tr)
    }

    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        check_dim(self.dim(), op.dim())?;
        Ok((&op.mat * &self.mat).trace())
    }

    /// Restores exact Hermiticity, `ρ ← (ρ + ρ†)/2`.
    pub(crate) fn symmetrize(&mut self) {
        let adj = self.mat.adjoint();
        self.mat += adj;
        self.mat *= C64::new(0.5, 0.0);
    }
}

/// Kronecker product; entry `(i·db + k, j·db + l) = a[i,j]·b[k,l]`.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator {
        mat: a.mat.kronecker(&b.mat),
    }
}

pub fn kron_states(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector {
        amps: a.amps.kronecker(&b.amps),
    }
}

/// `U = exp(−i h t)` through the eigendecomposition of the Hermitian `h`.
pub fn hermitian_propagator(h: &Operator, t: f64) -> Result<Operator> {
    h.require_hermitian()?;
    let eig = SymmetricEigen::new(h.mat.clone());
    let v = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, -e * t)),
    );
    let mut vd = v.clone();
    for (j, mut col) in vd.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(Operator { mat: vd * v.adjoint() })
}

/// Ladder, position and momentum operators on Fock levels `0..=n_max`.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub a: Operator,
    pub a_dag: Operator,
    pub x: Operator,
    pub p: Operator,
}

/// `x̂ = x0 (â + â†)`, `p̂ = i/(2 x0) (â† − â)`.
pub fn fock_operators(n_max: usize, trap: &TrapSpec) -> Result<FockOperators> {
    if n_max < 2 {
        return Err(Error::invalid("n_max", "must be at least 2"));
    }
    let dim = n_max + 1;
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let x0 = trap.x0();
    let x = (&a + &a_dag) * C64::new(x0, 0.0);
    let p = (&a_dag - &a) * C64::new(0.0, 1.0 / (2.0 * x0));
    Ok(FockOperators {
        a: Operator { mat: a },
        a_dag: Operator { mat: a_dag },
        x: Operator { mat: x },
        p: Operator { mat: p },
    })
}

fn coherent_amplitudes(alpha: C64, len: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(len);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..len {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    amps
}

/// Smallest `n_max` at which the coherent-state amplitude has dropped below
/// [`TRUNCATION_AMPLITUDE`] past the Poisson peak.
pub fn required_fock_cutoff(alpha: C64) -> usize {
    let r = alpha.norm();
    if r == 0.0 {
        return 2;
    }
    let peak = (r * r).ceil() as usize;
    // log-space so large |α| does not underflow the leading factor
    let mut log_c = -r * r / 2.0;
    let mut n = 0usize;
    loop {
        if n >= peak && log_c.exp() < TRUNCATION_AMPLITUDE {
            return n.max(2);
        }
        n += 1;
        log_c += r.ln() - 0.5 * (n as f64).ln();
    }
}

/// Default Fock cutoff for a displaced ground state: `⌈|α|² + 10|α|⌉`.
pub fn default_fock_cutoff(alpha: C64) -> usize {
    let r = alpha.norm();
    ((r * r + 10.0 * r).ceil() as usize).max(required_fock_cutoff(alpha))
}

/// Truncated, renormalized coherent state `|α⟩` on levels `0..=n_max`.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<StateVector> {
    let required = required_fock_cutoff(alpha);
    if n_max < required {
        return Err(Error::TruncationTooSmall { n_max, required });
    }
    let amps = coherent_amplitudes(alpha, n_max + 1);
    StateVector::from_slice(&amps)?.normalized()
}

pub fn fidelity_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_mixed(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    check_dim(rho.dim(), psi.dim())?;
    Ok(psi.amps.dotc(&(&rho.mat * &psi.amps)).re)
}

pub fn expectation(op: &Operator, s: &StateVector) -> Result<C64> {
    check_dim(op.dim(), s.dim())?;
    Ok(s.amps.dotc(&(&op.mat * &s.amps)))
}

/// Reduced state of factor `keep` (0 or 1) of a `d1 ⊗ d2` bipartite state.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: usize) -> Result<DensityMatrix> {
    let (d1, d2) = dims;
    check_dim(d1 * d2, rho.dim())?;
    let m = &rho.mat;
    let out = match keep {
        0 => DMatrix::from_fn(d1, d1, |i, j| (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()),
        1 => DMatrix::from_fn(d2, d2, |k, l| (0..d1).map(|i| m[(i * d2 + k, i * d2 + l)]).sum()),
        _ => return Err(Error::invalid("keep", "must be 0 or 1")),
    };
    Ok(DensityMatrix { mat: out })
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_tolerance(m: &DMatrix<C64>) -> f64 {
    1e-12 * max_abs(m).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn kron_identity_and_bit_flip() {
        let i4 = kron(&Operator::identity(2), &Operator::identity(2));
        assert_eq!(i4, Operator::identity(4));
        let xx = kron(&Operator::pauli_x(), &Operator::pauli_x());
        let out = xx.apply(&StateVector::basis(4, 0)).unwrap();
        assert_eq!(out, StateVector::basis(4, 3));
    }

    #[test]
    fn kron_entry_layout() {
        let a = Operator::from_rows(&[&[c(1.0), c(2.0)], &[c(3.0), c(4.0)]]).unwrap();
        let b = Operator::from_rows(&[&[c(5.0), c(6.0)], &[c(7.0), c(8.0)]]).unwrap();
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(
                            k.matrix()[(i * 2 + p, j * 2 + q)],
                            a.matrix()[(i, j)] * b.matrix()[(p, q)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn yy_spectrum() {
        let yy = kron(&Operator::pauli_y(), &Operator::pauli_y());
        let ev = yy.hermitian_eigenvalues().unwrap();
        let expected = [-1.0, -1.0, 1.0, 1.0];
        for (e, x) in ev.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_basics() {
        let u = hermitian_propagator(&Operator::pauli_z(), 0.0).unwrap();
        assert!(max_abs(&(u.matrix() - Operator::identity(2).matrix())) < 1e-14);

        // exp(−i σy π/2) = −i σy, which sends |1⟩ to −|0⟩
        let u = hermitian_propagator(&Operator::pauli_y(), FRAC_PI_2).unwrap();
        let out = u.apply(&StateVector::basis(2, 1)).unwrap();
        assert!(fidelity_pure(&out, &StateVector::basis(2, 0)).unwrap() > 1.0 - 1e-14);
        assert!((out.amplitudes()[0] + ONE).norm() < 1e-14);
    }

    #[test]
    fn yy_propagator_closed_form() {
        let g = 0.8;
        let yy = kron(&Operator::pauli_y(), &Operator::pauli_y());
        let h = yy.scale_real(-g);
        for &t in &[0.0, 0.3, 1.7, 4.0] {
            let u = hermitian_propagator(&h, t).unwrap();
            let oracle = Operator::identity(4)
                .scale_real((g * t).cos())
                .add(&yy.scale(C64::new(0.0, (g * t).sin())))
                .unwrap();
            assert!(max_abs(&(u.matrix() - oracle.matrix())) < 1e-12);
            let utu = u.adjoint().compose(&u).unwrap();
            assert!(max_abs(&(utu.matrix() - Operator::identity(4).matrix())) < 1e-10);
        }
    }

    #[test]
    fn propagator_rejects_non_hermitian() {
        let m = Operator::from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]]).unwrap();
        assert!(matches!(hermitian_propagator(&m, 1.0), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn fock_ladder_and_commutator() {
        let trap = TrapSpec::default();
        let f = fock_operators(12, &trap).unwrap();
        let out = f.a.apply(&StateVector::basis(13, 1)).unwrap();
        assert_eq!(out, StateVector::basis(13, 0));
        for n in 1..13 {
            assert!((f.a.matrix()[(n - 1, n)].re - (n as f64).sqrt()).abs() < 1e-15);
        }
        let comm = f.x.commutator(&f.p).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { I } else { ZERO };
                assert!((comm.matrix()[(i, j)] - want).norm() < 1e-12, "[x,p] at ({i},{j})");
            }
        }
        let x0 = trap.x0();
        let x2 = f.x.compose(&f.x).unwrap();
        let v = expectation(&x2, &StateVector::basis(13, 0)).unwrap();
        assert!((v.re - x0 * x0).abs() < 1e-14);
    }

    #[test]
    fn fock_rejects_tiny_cutoff() {
        assert!(fock_operators(1, &TrapSpec::default()).is_err());
    }

    #[test]
    fn coherent_state_properties() {
        let vac = coherent_state(ZERO, 10).unwrap();
        assert_eq!(vac, StateVector::basis(11, 0));

        let trap = TrapSpec::default();
        let x0 = trap.x0();
        let alpha = c(5.0);
        // untruncated norm deficit at n_max = 80 is far below 1e-8
        let raw: f64 = coherent_amplitudes(alpha, 81).iter().map(|z| z.norm_sqr()).sum();
        assert!((raw - 1.0).abs() < 1e-8);
        let s = coherent_state(alpha, 80).unwrap();
        let f = fock_operators(80, &trap).unwrap();
        let mean_x = expectation(&f.x, &s).unwrap().re;
        assert!((mean_x - 10.0 * x0).abs() < 1e-9);
        assert!((mean_x - 5.0 * SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn coherent_state_truncation_error_names_cutoff() {
        match coherent_state(c(5.0), 20) {
            Err(Error::TruncationTooSmall { n_max, required }) => {
                assert_eq!(n_max, 20);
                assert!(required > 25);
                assert!(coherent_state(c(5.0), required).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn default_cutoff_rule() {
        assert_eq!(default_fock_cutoff(c(5.0)), 75);
        assert_eq!(default_fock_cutoff(c(7.5)), 132);
    }

    #[test]
    fn fidelities_and_partial_trace() {
        let zero = StateVector::basis(2, 0);
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap().normalized().unwrap();
        assert!((fidelity_pure(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!((fidelity_pure(&zero, &plus).unwrap() - 0.5).abs() < 1e-15);

        let bell = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0])
            .unwrap()
            .normalized()
            .unwrap();
        let rho = DensityMatrix::pure(&bell);
        for keep in 0..2 {
            let r = partial_trace(&rho, (2, 2), keep).unwrap();
            assert!(max_abs(&(r.matrix() - DensityMatrix::maximally_mixed(2).matrix())) < 1e-15);
        }
        assert!(fidelity_pure(&zero, &bell).is_err());
        assert!(partial_trace(&rho, (2, 3), 0).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::pure(&StateVector::from_slice(&[c(0.6), C64::new(0.0, 0.8)]).unwrap());
        let b = DensityMatrix::maximally_mixed(3);
        let ab = a.kron(&b);
        let ra = partial_trace(&ab, (2, 3), 0).unwrap();
        let rb = partial_trace(&ab, (2, 3), 1).unwrap();
        assert!(max_abs(&(ra.matrix() - a.matrix())) < 1e-12);
        assert!(max_abs(&(rb.matrix() - b.matrix())) < 1e-12);
        assert!((rb.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_fidelity_of_pure_state() {
        let psi = StateVector::from_slice(&[c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let phi = StateVector::from_real(&[1.0, 1.0]).unwrap().normalized().unwrap();
        let fm = fidelity_mixed(&DensityMatrix::pure(&psi), &phi).unwrap();
        assert!((fm - fidelity_pure(&psi, &phi).unwrap()).abs() < 1e-12);
    }
}
