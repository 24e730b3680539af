//! Pre/post-selection pairs, weak values, and the readout of a single
//! coupling-then-post-selection event at arbitrary measurement strength.
//!
//! For a pair `(|i⟩, |f⟩)` and coupling `exp(−i gT σx ⊗ p̂)`, post-selection
//! leaves the apparatus in `c0 Ψ(x − gT) + c1 Ψ(x + gT)` where `c0`, `c1`
//! come from expanding both states in the `σx` eigenbasis. Overlap of the
//! two branches is `exp(−Γ²)` with `Γ = gT/(√2 x0)`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qcore::{Operator, StateVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionKind {
    /// Real weak value `⟨σx⟩_w = 1/√p`.
    SigmaXOptimal,
    /// Same amplitudes with a relative `−i` phase; `σy|i⟩ = |f⟩`, so
    /// `⟨σy⟩_w = 1/√p`.
    SigmaYPhased,
    /// `|i⟩ = |0⟩`, `|f⟩ = √p|0⟩ + √(1−p)|1⟩`; strong-limit readout equals
    /// `⟨f|σx|f⟩`.
    EigenAnchored,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionPair {
    p: f64,
    kind: SelectionKind,
    initial: StateVector,
    fin: StateVector,
}

impl SelectionKind {
    pub fn label(self) -> &'static str {
        match self {
            SelectionKind::SigmaXOptimal => "sigma-x",
            SelectionKind::SigmaYPhased => "sigma-y",
            SelectionKind::EigenAnchored => "eigen",
        }
    }

    /// Accepts the labels plus `A` (σx-optimal) and `B` (eigen-anchored).
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma-x" | "A" | "a" => Some(SelectionKind::SigmaXOptimal),
            "sigma-y" => Some(SelectionKind::SigmaYPhased),
            "eigen" | "B" | "b" => Some(SelectionKind::EigenAnchored),
            _ => None,
        }
    }
}

impl SelectionPair {
    pub fn probability(&self) -> f64 {
        self.p
    }

    pub fn kind(&self) -> SelectionKind {
        self.kind
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn final_state(&self) -> &StateVector {
        &self.fin
    }

    /// `⟨f|i⟩`.
    pub fn overlap(&self) -> C64 {
        self.fin.amplitudes().dotc(self.initial.amplitudes())
    }

    pub fn design(kind: SelectionKind, p: f64) -> Result<Self> {
        match kind {
            SelectionKind::SigmaXOptimal => design_sigma_x_pair(p),
            SelectionKind::SigmaYPhased => design_sigma_y_pair(p),
            SelectionKind::EigenAnchored => design_eigen_anchored_pair(p),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("p", "must be in (0,1]"))
    }
}

/// Amplitudes `(a, b) = (√((1−√(1−p))/2), √((1+√(1−p))/2))`; `2ab = √p`.
fn optimal_amplitudes(p: f64) -> (f64, f64) {
    let s = (1.0 - p).sqrt();
    (((1.0 - s) / 2.0).sqrt(), ((1.0 + s) / 2.0).sqrt())
}

pub fn design_sigma_x_pair(p: f64) -> Result<SelectionPair> {
    check_probability(p)?;
    let (a, b) = optimal_amplitudes(p);
    Ok(SelectionPair {
        p,
        kind: SelectionKind::SigmaXOptimal,
        initial: StateVector::from_real(&[a, b])?,
        fin: StateVector::from_real(&[b, a])?,
    })
}

/// `|i⟩ = a|0⟩ + i b|1⟩`, `|f⟩ = b|0⟩ + i a|1⟩`.
pub fn design_sigma_y_pair(p: f64) -> Result<SelectionPair> {
    check_probability(p)?;
    let (a, b) = optimal_amplitudes(p);
    Ok(SelectionPair {
        p,
        kind: SelectionKind::SigmaYPhased,
        initial: StateVector::from_slice(&[C64::new(a, 0.0), C64::new(0.0, b)])?,
        fin: StateVector::from_slice(&[C64::new(b, 0.0), C64::new(0.0, a)])?,
    })
}

pub fn design_eigen_anchored_pair(p: f64) -> Result<SelectionPair> {
    check_probability(p)?;
    Ok(SelectionPair {
        p,
        kind: SelectionKind::EigenAnchored,
        initial: StateVector::basis(2, 0),
        fin: StateVector::from_real(&[p.sqrt(), (1.0 - p).sqrt()])?,
    })
}

/// `⟨f|A|i⟩ / ⟨f|i⟩`.
pub fn weak_value(pair: &SelectionPair, op: &Operator) -> Result<C64> {
    let overlap = pair.overlap();
    if overlap.norm() < 1e-14 {
        return Err(Error::OrthogonalSelection);
    }
    let num = pair.fin.amplitudes().dotc(op.apply(&pair.initial)?.amplitudes());
    Ok(num / overlap)
}

/// Branch weights of one post-selected kick plus the interference factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatReadout {
    /// Weight of the branch moved by `+gT` (`σx = +1`).
    pub c0: C64,
    /// Weight of the branch moved by `−gT` (`σx = −1`).
    pub c1: C64,
    pub gamma: f64,
    pub coupling_area: f64,
}

impl CatReadout {
    pub fn with_strength(mut self, gamma: f64, coupling_area: f64) -> Self {
        self.gamma = gamma;
        self.coupling_area = coupling_area;
        self
    }
}

/// `c0 = ⟨f|+⟩⟨+|i⟩`, `c1 = ⟨f|−⟩⟨−|i⟩`; `Γ` and `gT` are left at zero.
pub fn cat_coefficients(pair: &SelectionPair) -> CatReadout {
    let h = FRAC_1_SQRT_2;
    let i = pair.initial.amplitudes();
    let f = pair.fin.amplitudes();
    let (a0, a1) = ((i[0] + i[1]) * h, (i[0] - i[1]) * h);
    let (b0, b1) = ((f[0] + f[1]) * h, (f[0] - f[1]) * h);
    CatReadout {
        c0: a0 * b0.conj(),
        c1: a1 * b1.conj(),
        gamma: 0.0,
        coupling_area: 0.0,
    }
}

/// Interference factor `Γ = gT / (√2 x0)`.
pub fn interference_factor(coupling_area: f64, x0: f64) -> f64 {
    coupling_area / (std::f64::consts::SQRT_2 * x0)
}

/// `⟨x̂⟩` of the normalized cat state:
/// `(|c0|² − |c1|²) gT / (|c0|² + |c1|² + 2 Re(c0* c1) e^{−Γ²})`.
pub fn expected_shift(cr: &CatReadout) -> Result<f64> {
    let (n0, n1) = (cr.c0.norm_sqr(), cr.c1.norm_sqr());
    let cross = 2.0 * (cr.c0.conj() * cr.c1).re;
    let den = n0 + n1 + cross * (-cr.gamma * cr.gamma).exp();
    if den.abs() < 1e-300 || (den.abs() < 1e-14 * (n0 + n1)) {
        return Err(Error::VanishingDenominator);
    }
    Ok((n0 - n1) * cr.coupling_area / den)
}

/// Weak (`Γ → 0`) and strong (`Γ → ∞`) limits of `δx/gT`.
pub fn readout_limits(kind: SelectionKind, p: f64) -> Result<(f64, f64)> {
    let cr = cat_coefficients(&SelectionPair::design(kind, p)?);
    let (n0, n1) = (cr.c0.norm_sqr(), cr.c1.norm_sqr());
    let cross = 2.0 * (cr.c0.conj() * cr.c1).re;
    Ok(((n0 - n1) / (n0 + n1 + cross), (n0 - n1) / (n0 + n1)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutPoint {
    pub kind: SelectionKind,
    pub p: f64,
    pub gamma: f64,
    pub shift_over_gt: f64,
    pub weak_limit: f64,
    pub strong_limit: f64,
}

/// `δx/gT` over a `(Γ, p)` grid; rows ordered by `Γ`, then `p`.
pub fn readout_curve(kind: SelectionKind, gammas: &[f64], p_grid: &[f64]) -> Result<Vec<ReadoutPoint>> {
    let mut rows = Vec::with_capacity(gammas.len() * p_grid.len());
    for &gamma in gammas {
        for &p in p_grid {
            let pair = SelectionPair::design(kind, p)?;
            let cr = cat_coefficients(&pair).with_strength(gamma, 1.0);
            let (weak_limit, strong_limit) = readout_limits(kind, p)?;
            rows.push(ReadoutPoint {
                kind,
                p,
                gamma,
                shift_over_gt: expected_shift(&cr)?,
                weak_limit,
                strong_limit,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{fidelity_pure, Operator};

    const KINDS: [SelectionKind; 3] = [
        SelectionKind::SigmaXOptimal,
        SelectionKind::SigmaYPhased,
        SelectionKind::EigenAnchored,
    ];

    #[test]
    fn rejects_bad_probability() {
        for kind in KINDS {
            for p in [0.0, -0.1, 1.5, f64::NAN] {
                let err = SelectionPair::design(kind, p).unwrap_err();
                assert_eq!(err.to_string(), "p must be in (0,1]");
            }
        }
    }

    #[test]
    fn sigma_x_pair_values() {
        let pair = design_sigma_x_pair(1.0).unwrap();
        let plus = StateVector::from_real(&[1.0, 1.0]).unwrap().normalized().unwrap();
        assert!(fidelity_pure(pair.initial(), &plus).unwrap() > 1.0 - 1e-15);
        assert_eq!(pair.initial(), pair.final_state());
        assert!((weak_value(&pair, &Operator::pauli_x()).unwrap() - 1.0).norm() < 1e-12);

        let pair = design_sigma_x_pair(0.25).unwrap();
        assert!((weak_value(&pair, &Operator::pauli_x()).unwrap() - 2.0).norm() < 1e-12);

        let pair = design_sigma_x_pair(0.81).unwrap();
        assert!((pair.overlap() - 0.9).norm() < 1e-12);
        assert!((weak_value(&pair, &Operator::pauli_x()).unwrap() - 1.0 / 0.9).norm() < 1e-12);
    }

    #[test]
    fn sigma_y_pair_values() {
        let pair = design_sigma_y_pair(1.0).unwrap();
        assert!((weak_value(&pair, &Operator::pauli_y()).unwrap() - 1.0).norm() < 1e-12);

        let p = 0.9f64.powf(1.0 / 8.0);
        let pair = design_sigma_y_pair(p).unwrap();
        let wv = weak_value(&pair, &Operator::pauli_y()).unwrap();
        assert!((wv - 0.9f64.powf(-1.0 / 16.0)).norm() < 1e-12);
        for p in [0.1, 0.5, 0.77, 1.0] {
            let pair = design_sigma_y_pair(p).unwrap();
            let yi = Operator::pauli_y().apply(pair.initial()).unwrap();
            let m = pair.final_state().amplitudes().dotc(yi.amplitudes());
            assert!((m - 1.0).norm() < 1e-12);
            assert!((yi.amplitudes() - pair.final_state().amplitudes()).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_anchored_values() {
        let x = Operator::pauli_x();
        assert!((weak_value(&design_eigen_anchored_pair(0.5).unwrap(), &x).unwrap() - 1.0).norm() < 1e-12);
        assert!(
            weak_value(&design_eigen_anchored_pair(1.0).unwrap(), &x)
                .unwrap()
                .norm()
                < 1e-12
        );
        assert!((weak_value(&design_eigen_anchored_pair(0.2).unwrap(), &x).unwrap() - 2.0).norm() < 1e-12);
        let (_, strong) = readout_limits(SelectionKind::EigenAnchored, 0.5).unwrap();
        assert!((strong - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_weak_value_and_orthogonal_pair() {
        for kind in KINDS {
            let pair = SelectionPair::design(kind, 0.37).unwrap();
            assert!((weak_value(&pair, &Operator::identity(2)).unwrap() - 1.0).norm() < 1e-12);
        }
        let orth = SelectionPair {
            p: 0.5,
            kind: SelectionKind::EigenAnchored,
            initial: StateVector::basis(2, 0),
            fin: StateVector::basis(2, 1),
        };
        assert_eq!(weak_value(&orth, &Operator::pauli_x()), Err(Error::OrthogonalSelection));
    }

    #[test]
    fn cat_weights() {
        let p: f64 = 0.36;
        let cr = cat_coefficients(&design_sigma_x_pair(p).unwrap());
        assert!((cr.c0 - (p.sqrt() + 1.0) / 2.0).norm() < 1e-12);
        assert!((cr.c1 - (p.sqrt() - 1.0) / 2.0).norm() < 1e-12);

        let cr = cat_coefficients(&design_sigma_x_pair(1.0).unwrap());
        assert!(cr.c1.norm() < 1e-12);

        let cr = cat_coefficients(&design_eigen_anchored_pair(p).unwrap());
        let q = (1.0 - p).sqrt();
        assert!((cr.c0 - (p.sqrt() + q) / 2.0).norm() < 1e-12);
        assert!((cr.c1 - (p.sqrt() - q) / 2.0).norm() < 1e-12);
    }

    #[test]
    fn shift_limits() {
        let gt = 0.7;
        let cr = cat_coefficients(&design_sigma_x_pair(0.25).unwrap());
        let weak = expected_shift(&cr.with_strength(0.0, gt)).unwrap();
        assert!((weak - 2.0 * gt).abs() < 1e-12);
        let strong = expected_shift(&cr.with_strength(40.0, gt)).unwrap();
        assert!((strong - 0.8 * gt).abs() < 1e-12);

        let single = CatReadout {
            c0: C64::new(0.3, 0.2),
            c1: C64::new(0.0, 0.0),
            gamma: 0.0,
            coupling_area: gt,
        };
        for gamma in [0.0, 0.5, 3.0] {
            assert!((expected_shift(&single.with_strength(gamma, gt)).unwrap() - gt).abs() < 1e-12);
        }

        let degenerate = CatReadout {
            c0: C64::new(0.5, 0.0),
            c1: C64::new(-0.5, 0.0),
            gamma: 0.0,
            coupling_area: 1.0,
        };
        assert_eq!(expected_shift(&degenerate), Err(Error::VanishingDenominator));
    }

    #[test]
    fn curve_examples() {
        let rows = readout_curve(SelectionKind::SigmaXOptimal, &[0.0, 0.5, 2.0, 10.0], &[1.0]).unwrap();
        for r in rows {
            assert!((r.shift_over_gt - 1.0).abs() < 1e-12);
        }
        let rows = readout_curve(SelectionKind::EigenAnchored, &[0.0, 0.5, 2.0, 10.0], &[0.5]).unwrap();
        for r in rows {
            assert!((r.shift_over_gt - 1.0).abs() < 1e-12);
        }
        let r = readout_curve(SelectionKind::SigmaXOptimal, &[0.01], &[0.49]).unwrap()[0];
        assert!((r.shift_over_gt - 1.0 / 0.7).abs() < 1e-3);
    }
}
