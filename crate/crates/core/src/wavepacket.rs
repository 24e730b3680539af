//! Position-grid wave packets for the motional mode, with spectral
//! translation, split-operator propagation in a moving harmonic trap and the
//! exact displaced-Gaussian superposition used as an analytic oracle.
//!
//! The discrete Fourier transform treats the grid as periodic, so every
//! operation insists that the packet stays clear of the edges.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::qcore::{StateVector, TrapSpec, C64};

/// Largest amplitude tolerated on the outermost grid points.
pub const BOUNDARY_AMPLITUDE: f64 = 1e-6;

const EDGE_POINTS: usize = 8;

/// Margin, in units of `x0`, kept between a packet centre and the grid edge.
pub const GRID_MARGIN_X0: f64 = 8.0;

/// Uniform periodic grid `x_j = x_min + j·dx`, `dx = (x_max − x_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::invalid("grid", "requires x_max > x_min"));
        }
        if n_points < 256 || !n_points.is_power_of_two() {
            return Err(Error::invalid("grid points", "must be a power of two >= 256"));
        }
        Ok(GridSpec { x_min, x_max, n_points })
    }

    /// Grid spanning `[lo − 8x0, hi + 8x0]` with at least 2048 points and
    /// spacing no coarser than `x0/16`.
    pub fn covering(lo: f64, hi: f64, trap: &TrapSpec) -> Result<Self> {
        let x0 = trap.x0();
        let x_min = lo.min(hi) - GRID_MARGIN_X0 * x0;
        let x_max = lo.max(hi) + GRID_MARGIN_X0 * x0;
        let wanted = ((x_max - x_min) / (x0 / 16.0)).ceil() as usize;
        let n_points = wanted.max(2048).next_power_of_two();
        Self::new(x_min, x_max, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dk = 2.0 * PI / self.length();
        (0..n)
            .map(|j| if j < n / 2 { j as f64 * dk } else { (j - n) as f64 * dk })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridWavePacket {
    grid: GridSpec,
    trap: TrapSpec,
    amps: Vec<C64>,
}

impl GridWavePacket {
    pub fn new(grid: GridSpec, trap: TrapSpec, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != grid.n_points() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_points(),
                got: amps.len(),
            });
        }
        Ok(GridWavePacket { grid, trap, amps })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn trap(&self) -> &TrapSpec {
        &self.trap
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `Σ|ψ|² dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid("wave packet", "cannot normalize a zero packet"));
        }
        for z in &mut self.amps {
            *z /= n;
        }
        Ok(n)
    }

    /// `⟨self|other⟩ = Σ ψ* φ dx`.
    pub fn inner(&self, other: &GridWavePacket) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::invalid("grid", "packets live on different grids"));
        }
        let s: C64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.dx())
    }

    /// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`.
    pub fn fidelity(&self, other: &GridWavePacket) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    pub fn mean_x(&self) -> f64 {
        let dx = self.grid.dx();
        let m: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, z)| z.norm_sqr() * self.grid.x(j))
            .sum();
        m * dx / self.norm_sqr()
    }

    pub fn variance_x(&self) -> f64 {
        let mean = self.mean_x();
        let dx = self.grid.dx();
        let v: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(j, z)| z.norm_sqr() * (self.grid.x(j) - mean).powi(2))
            .sum();
        v * dx / self.norm_sqr()
    }

    /// Largest `|ψ|` on the outermost points, relative to a unit-norm packet.
    pub fn boundary_amplitude(&self) -> f64 {
        let scale = self.norm_sqr().sqrt().max(f64::MIN_POSITIVE);
        edge_amplitude(&self.amps) / scale
    }

    pub fn check_boundary(&self, time: Option<f64>) -> Result<()> {
        let amplitude = self.boundary_amplitude();
        if amplitude < BOUNDARY_AMPLITUDE {
            Ok(())
        } else {
            Err(Error::BoundaryContact { amplitude, time })
        }
    }

    fn scaled(&self, c: C64) -> GridWavePacket {
        GridWavePacket {
            grid: self.grid,
            trap: self.trap,
            amps: self.amps.iter().map(|z| z * c).collect(),
        }
    }
}

fn edge_amplitude(amps: &[C64]) -> f64 {
    let n = amps.len();
    let k = EDGE_POINTS.min(n / 2);
    amps[..k]
        .iter()
        .chain(&amps[n - k..])
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Spin-1/2 ⊗ motion on a shared grid; `up` is the `|0⟩` component.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinGridWavePacket {
    pub up: GridWavePacket,
    pub down: GridWavePacket,
}

impl SpinGridWavePacket {
    /// Product state `|spin⟩ ⊗ |motion⟩`.
    pub fn product(spin: &StateVector, motion: &GridWavePacket) -> Result<Self> {
        if spin.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: spin.dim(),
            });
        }
        let s = spin.amplitudes();
        Ok(SpinGridWavePacket {
            up: motion.scaled(s[0]),
            down: motion.scaled(s[1]),
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn inner(&self, other: &SpinGridWavePacket) -> Result<C64> {
        Ok(self.up.inner(&other.up)? + self.down.inner(&other.down)?)
    }

    /// Unnormalized motional state `(⟨f| ⊗ 1)|Ψ⟩`.
    pub fn project(&self, f: &StateVector) -> Result<GridWavePacket> {
        if f.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: f.dim(),
            });
        }
        let (f0, f1) = (f.amplitudes()[0].conj(), f.amplitudes()[1].conj());
        let amps = self
            .up
            .amps
            .iter()
            .zip(&self.down.amps)
            .map(|(u, d)| f0 * u + f1 * d)
            .collect();
        GridWavePacket::new(self.up.grid, self.up.trap, amps)
    }
}

/// Cached FFT plans and wavenumbers for one grid.
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    scratch: Vec<C64>,
}

impl Spectral {
    pub fn new(grid: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n_points();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral {
            forward,
            inverse,
            k: grid.wavenumbers(),
            scratch: vec![C64::new(0.0, 0.0); scratch_len],
        }
    }

    /// Multiplies the momentum-space amplitude by `phase(k)`.
    pub fn apply_in_momentum(&mut self, amps: &mut [C64], phase: impl Fn(f64) -> C64) {
        let n = amps.len() as f64;
        self.forward.process_with_scratch(amps, &mut self.scratch);
        for (z, &k) in amps.iter_mut().zip(&self.k) {
            *z *= phase(k) / n;
        }
        self.inverse.process_with_scratch(amps, &mut self.scratch);
    }

    /// `e^{−i s p̂}`: `ψ(x) → ψ(x − s)`.
    pub fn translate_in_place(&mut self, amps: &mut [C64], shift: f64) {
        self.apply_in_momentum(amps, |k| C64::from_polar(1.0, -k * shift));
    }
}

/// Ground state of the trap centred at `center`,
/// `ψ(x) ∝ exp(−(x − c)² / (4 x0²))`, normalized on the grid.
pub fn gaussian_ground_state(grid: &GridSpec, trap: &TrapSpec, center: f64) -> Result<GridWavePacket> {
    let x0 = trap.x0();
    let norm = (2.0 * PI * x0 * x0).powf(-0.25);
    let amps = grid
        .points()
        .map(|x| C64::new(norm * (-(x - center).powi(2) / (4.0 * x0 * x0)).exp(), 0.0))
        .collect();
    let mut packet = GridWavePacket::new(*grid, *trap, amps)?;
    packet.check_boundary(None)?;
    packet.normalize()?;
    Ok(packet)
}

pub fn translate(packet: &GridWavePacket, shift: f64) -> Result<GridWavePacket> {
    let mut out = packet.clone();
    Spectral::new(&packet.grid).translate_in_place(&mut out.amps, shift);
    out.check_boundary(None)?;
    Ok(out)
}

/// Exact `exp(−i g τ σx ⊗ p̂)`: the `σx = ±1` branches move by `±gτ`.
pub fn conditional_translate(sp: &SpinGridWavePacket, g: f64, tau: f64) -> Result<SpinGridWavePacket> {
    let mut spectral = Spectral::new(&sp.up.grid);
    conditional_translate_with(&mut spectral, sp, g * tau)
}

pub(crate) fn conditional_translate_with(
    spectral: &mut Spectral,
    sp: &SpinGridWavePacket,
    shift: f64,
) -> Result<SpinGridWavePacket> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut plus: Vec<C64> = sp.up.amps.iter().zip(&sp.down.amps).map(|(u, d)| (u + d) * h).collect();
    let mut minus: Vec<C64> = sp.up.amps.iter().zip(&sp.down.amps).map(|(u, d)| (u - d) * h).collect();
    spectral.translate_in_place(&mut plus, shift);
    spectral.translate_in_place(&mut minus, -shift);
    let up = plus.iter().zip(&minus).map(|(p, m)| (p + m) * h).collect();
    let down = plus.iter().zip(&minus).map(|(p, m)| (p - m) * h).collect();
    let out = SpinGridWavePacket {
        up: GridWavePacket::new(sp.up.grid, sp.up.trap, up)?,
        down: GridWavePacket::new(sp.up.grid, sp.up.trap, down)?,
    };
    let scale = out.norm_sqr().sqrt();
    let edge = edge_amplitude(&out.up.amps).max(edge_amplitude(&out.down.amps)) / scale;
    if edge >= BOUNDARY_AMPLITUDE {
        return Err(Error::BoundaryContact {
            amplitude: edge,
            time: None,
        });
    }
    Ok(out)
}

/// Strang split-operator evolution under
/// `H = p̂²/2M + M ν² (x − x_trap(t))² / 2` from `t = 0` to `duration`.
///
/// The step is shrunk so that it divides `duration` exactly.
pub fn evolve_split_operator(
    packet: &GridWavePacket,
    trap_center: impl Fn(f64) -> f64,
    dt: f64,
    duration: f64,
) -> Result<GridWavePacket> {
    if !(dt > 0.0) || !(duration >= 0.0) {
        return Err(Error::invalid("dt", "step and duration must be positive"));
    }
    let steps = (duration / dt - 1e-9).ceil().max(0.0) as usize;
    let mut out = packet.clone();
    if steps == 0 {
        return Ok(out);
    }
    let h = duration / steps as f64;
    let m = packet.trap.mass();
    let nu = packet.trap.frequency();
    let grid = packet.grid;
    let xs: Vec<f64> = grid.points().collect();
    let mut spectral = Spectral::new(&grid);
    let kinetic: Vec<C64> = spectral
        .k
        .iter()
        .map(|&k| C64::from_polar(1.0, -k * k / (2.0 * m) * h))
        .collect();
    let mut half_potential = vec![C64::new(0.0, 0.0); xs.len()];
    let n = xs.len() as f64;
    for step in 0..steps {
        let t_mid = (step as f64 + 0.5) * h;
        let c = trap_center(t_mid);
        for (v, &x) in half_potential.iter_mut().zip(&xs) {
            *v = C64::from_polar(1.0, -0.5 * m * nu * nu * (x - c).powi(2) * h / 2.0);
        }
        for (z, v) in out.amps.iter_mut().zip(&half_potential) {
            *z *= v;
        }
        spectral
            .forward
            .process_with_scratch(&mut out.amps, &mut spectral.scratch);
        for (z, k) in out.amps.iter_mut().zip(&kinetic) {
            *z *= k / n;
        }
        spectral
            .inverse
            .process_with_scratch(&mut out.amps, &mut spectral.scratch);
        for (z, v) in out.amps.iter_mut().zip(&half_potential) {
            *z *= v;
        }
        if step % 256 == 255 || step + 1 == steps {
            out.check_boundary(Some((step + 1) as f64 * h))?;
        }
    }
    Ok(out)
}

/// `Σ c_k G(x − x_k)` with unit-norm ground-state Gaussians of common width.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSuperposition {
    terms: Vec<(C64, f64)>,
    x0: f64,
}

impl GaussianSuperposition {
    pub fn new(terms: Vec<(C64, f64)>, x0: f64) -> Result<Self> {
        if !(x0 > 0.0) {
            return Err(Error::invalid("x0", "must be positive"));
        }
        Ok(GaussianSuperposition { terms, x0 })
    }

    pub fn single(center: f64, x0: f64) -> Result<Self> {
        Self::new(vec![(C64::new(1.0, 0.0), center)], x0)
    }

    pub fn terms(&self) -> &[(C64, f64)] {
        &self.terms
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn norm_sqr(&self) -> f64 {
        gaussian_overlap(self, self).map(|z| z.re).unwrap_or(0.0)
    }

    /// `⟨x̂⟩` of the normalized superposition.
    pub fn mean_x(&self) -> f64 {
        let mut num = 0.0;
        for &(ca, xa) in &self.terms {
            for &(cb, xb) in &self.terms {
                num += (ca.conj() * cb).re * pair_overlap(xa - xb, self.x0) * 0.5 * (xa + xb);
            }
        }
        num / self.norm_sqr()
    }
}

fn pair_overlap(delta: f64, x0: f64) -> f64 {
    (-delta * delta / (8.0 * x0 * x0)).exp()
}

/// `⟨a|b⟩`; displaced unit Gaussians overlap as `exp(−Δ²/(8 x0²))`.
pub fn gaussian_overlap(a: &GaussianSuperposition, b: &GaussianSuperposition) -> Result<C64> {
    if (a.x0 - b.x0).abs() > 1e-12 * a.x0.max(b.x0) {
        return Err(Error::invalid("width", "superpositions must share x0"));
    }
    let mut s = C64::new(0.0, 0.0);
    for &(ca, xa) in &a.terms {
        for &(cb, xb) in &b.terms {
            s += ca.conj() * cb * pair_overlap(xa - xb, a.x0);
        }
    }
    Ok(s)
}

/// Samples the superposition on `grid` and normalizes it.
pub fn render(gsup: &GaussianSuperposition, grid: &GridSpec, trap: &TrapSpec) -> Result<GridWavePacket> {
    if (trap.x0() - gsup.x0).abs() > 1e-12 * gsup.x0 {
        return Err(Error::invalid("width", "superposition width differs from the trap x0"));
    }
    let x0 = gsup.x0;
    let norm = (2.0 * PI * x0 * x0).powf(-0.25);
    let amps = grid
        .points()
        .map(|x| {
            gsup.terms
                .iter()
                .map(|&(c, xc)| c * norm * (-(x - xc).powi(2) / (4.0 * x0 * x0)).exp())
                .sum()
        })
        .collect();
    let mut packet = GridWavePacket::new(*grid, *trap, amps)?;
    packet.check_boundary(None)?;
    packet.normalize()?;
    Ok(packet)
}

/// Position representation of a Fock-basis state, `Σ c_n φ_n(x)`, using the
/// Hermite functions of the trap (same phase convention as `x̂ = x0(â+â†)`).
pub fn fock_to_grid(state: &StateVector, grid: &GridSpec, trap: &TrapSpec) -> Result<GridWavePacket> {
    let x0 = trap.x0();
    let coeffs = state.amplitudes();
    let norm = (2.0 * PI * x0 * x0).powf(-0.25);
    let amps = grid
        .points()
        .map(|x| {
            let xi = x / (std::f64::consts::SQRT_2 * x0);
            let mut prev = 0.0;
            let mut cur = norm * (-xi * xi / 2.0).exp();
            let mut acc = coeffs[0] * cur;
            for n in 1..coeffs.len() {
                let m = (n - 1) as f64;
                let next = (2.0 / (m + 1.0)).sqrt() * xi * cur - (m / (m + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                acc += coeffs[n] * cur;
            }
            acc
        })
        .collect();
    GridWavePacket::new(*grid, *trap, amps)
}
