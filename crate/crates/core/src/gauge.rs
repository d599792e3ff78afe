//! Mean reduction and the gauge transform on the torus.
//!
//! For a real zero-mean `u` let `F = ∂ₓ⁻¹u` (zero mean). The gauge variable is
//! `w = ∂ₓP₊ e^{-iF - iθ}` with a constant phase `θ`. When `u` solves the
//! equation and `θ = μt` with `μ = (1/L)∫u²`, `w` satisfies
//! `∂ₜw - i∂ₓ²w = -2P₊∂ₓ[∂ₓ⁻¹w · P₋∂ₓu]`.
//!
//! The exponential is formed on a 4× oversampled grid and kept there; the
//! energy of its modes beyond the base lattice is reported as `tail_mass`.

use num_complex::Complex64;

use crate::error::{BolabError, Result};
use crate::solver::Trajectory;
use crate::spectral::{self, Grid, Mode, SpectralField, Symbol};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const OVERSAMPLE: usize = 4;

/// Result of removing the mean: `u(t, x) = mean + v(t, x + velocity·t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanReduction {
    pub v0: SpectralField,
    pub mean: f64,
    pub velocity: f64,
}

/// Split off the mean `c₀` of real data; the remainder travels at speed `2c₀`.
pub fn mean_reduce(u0: &SpectralField) -> Result<MeanReduction> {
    u0.ensure_real(1e-12 * (1.0 + u0.max_abs()))?;
    let mean = u0.mean().re;
    let mut v0 = u0.clone();
    v0.coeffs[0] = Complex64::new(0.0, 0.0);
    Ok(MeanReduction {
        v0,
        mean,
        velocity: 2.0 * mean,
    })
}

/// Undo [`mean_reduce`] for a state `v(t)` of the reduced problem.
pub fn restore_mean(v: &SpectralField, red: &MeanReduction, t: f64) -> SpectralField {
    let shift = red.velocity * t;
    let mut u = v.apply_fn(|k| Complex64::from_polar(1.0, k * shift));
    u.coeffs[0] += red.mean;
    u
}

/// Zero-mean antiderivative `∂ₓ⁻¹u`.
pub fn antiderivative(u: &SpectralField) -> Result<SpectralField> {
    u.ensure_zero_mean(1e-12 * (1.0 + u.max_abs()))?;
    Ok(u.apply(Symbol::DxInv))
}

/// The mass density `μ = (1/L)∫u² = Σ|cₙ|²`.
pub fn mass_density(u: &SpectralField) -> f64 {
    u.coeffs.iter().map(|c| c.norm_sqr()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeState {
    /// Input field on the base grid.
    pub u: SpectralField,
    /// `F = ∂ₓ⁻¹u` on the base grid.
    pub f: SpectralField,
    /// Constant phase `θ`.
    pub theta: f64,
    /// `e^{-iF-iθ}` on the oversampled grid.
    pub expf: SpectralField,
    /// `W = P₊ e^{-iF-iθ}` on the oversampled grid.
    pub big_w: SpectralField,
    /// `w = ∂ₓW` on the oversampled grid.
    pub w: SpectralField,
    /// `L²` mass of `e^{-iF}` outside the base lattice.
    pub tail_mass: f64,
}

impl GaugeState {
    pub fn base_grid(&self) -> Grid {
        self.u.grid
    }

    /// `w` truncated to the base lattice.
    pub fn w_base(&self) -> SpectralField {
        self.w.resample(self.u.grid).expect("same period")
    }

    pub fn reconstruct(&self) -> Result<SpectralField> {
        reconstruct_u(&self.w, &self.f, self.theta)
    }
}

fn oversampled(grid: Grid) -> Grid {
    grid.resized(grid.n * OVERSAMPLE).expect("valid grid")
}

/// `e^{-iF-iθ}` on the oversampled grid.
fn exp_minus_if(f: &SpectralField, theta: f64) -> Result<SpectralField> {
    let ext = oversampled(f.grid);
    let samples: Vec<Complex64> = spectral::to_physical(f, OVERSAMPLE)
        .into_iter()
        .map(|z| Complex64::from_polar(1.0, -z.re - theta))
        .collect();
    spectral::from_physical(&samples, ext)
}

pub fn gauge_forward(u: &SpectralField) -> Result<GaugeState> {
    gauge_forward_phase(u, 0.0)
}

/// Gauge transform with an explicit phase `θ`.
pub fn gauge_forward_phase(u: &SpectralField, theta: f64) -> Result<GaugeState> {
    u.ensure_real(1e-12 * (1.0 + u.max_abs()))?;
    let f = antiderivative(u)?;
    let expf = exp_minus_if(&f, theta)?;
    let big_w = expf.apply(Symbol::PPlus);
    let w = big_w.apply(Symbol::Dx);
    let base = u.grid;
    let mut tail = 0.0;
    for i in 0..expf.grid.n {
        let m = expf.grid.lattice(i);
        if base.index(m).is_none() || m == -(base.n as i64) / 2 {
            tail += expf.coeffs[i].norm_sqr();
        }
    }
    Ok(GaugeState {
        u: u.clone(),
        f,
        theta,
        expf,
        big_w,
        w,
        tail_mass: (tail * base.period).sqrt(),
    })
}

/// Gauge transform at time `t` of a solution with mass density `mu`.
pub fn gauge_forward_at(u: &SpectralField, t: f64, mu: f64) -> Result<GaugeState> {
    gauge_forward_phase(u, mu * t)
}

/// Invert the gauge: `u = i e^{iF+iθ} (w + P₋∂ₓ e^{-iF-iθ})`.
///
/// `w` may live on the base grid or on any finer grid of the same period.
pub fn reconstruct_u(w: &SpectralField, f: &SpectralField, theta: f64) -> Result<SpectralField> {
    let base = f.grid;
    if w.grid.period != base.period {
        return Err(BolabError::GridMismatch("w and F have different periods".into()));
    }
    let expf = exp_minus_if(f, theta)?;
    let ext = expf.grid;
    let w_ext = w.resample(ext)?;
    let v = w_ext.add(&expf.apply(Symbol::PMinus).apply(Symbol::Dx))?;
    let vs = spectral::to_physical(&v, 1);
    let fs = spectral::to_physical(&f.resample(ext)?, 1);
    let prod: Vec<Complex64> = vs
        .iter()
        .zip(&fs)
        .map(|(a, b)| I * Complex64::from_polar(1.0, b.re + theta) * a)
        .collect();
    spectral::from_physical(&prod, base)
}

/// The low-frequency remainder `E[f, g]`.
///
/// Torus mode: `-2P₊P_low∂ₓ[f · P₋∂ₓg]`. Line mode:
/// `-2P₊^{hi}∂ₓ[(P_low f) · P₋∂ₓg]`.
pub fn negligible_term(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.grid.check_same(&g.grid)?;
    let dg = g.apply(Symbol::Dx).apply(Symbol::PMinus);
    let two = Complex64::new(-2.0, 0.0);
    match f.grid.mode {
        Mode::Torus => {
            let p = spectral::multiply(f, &dg)?;
            Ok(p.apply(Symbol::Dx)
                .apply(Symbol::PLow)
                .apply(Symbol::PPlus)
                .scale(two))
        }
        Mode::Line => {
            let p = spectral::multiply(&f.apply(Symbol::PLow), &dg)?;
            Ok(p.apply(Symbol::Dx).apply(Symbol::ChiPlus).scale(two))
        }
    }
}

/// `-2P₊∂ₓ[∂ₓ⁻¹w · P₋∂ₓu]`, evaluated on the grid of `w`.
pub fn gauge_nonlinearity(w: &SpectralField, u: &SpectralField) -> Result<SpectralField> {
    let u = u.resample(w.grid)?;
    let a = w.apply(Symbol::DxInv);
    let b = u.apply(Symbol::Dx).apply(Symbol::PMinus);
    let p = spectral::multiply(&a, &b)?;
    Ok(p.apply(Symbol::Dx)
        .apply(Symbol::PPlus)
        .scale(Complex64::new(-2.0, 0.0)))
}

/// Gauge states along a trajectory, with the phase `θ(t) = μt`.
pub fn gauge_trajectory(traj: &Trajectory) -> Result<Vec<GaugeState>> {
    let mu = mass_density(&traj.fields[0]);
    traj.times
        .iter()
        .zip(&traj.fields)
        .map(|(&t, u)| gauge_forward_at(u, t, mu))
        .collect()
}

/// `‖∂ₜw - i∂ₓ²w + 2P₊∂ₓ[∂ₓ⁻¹w · P₋∂ₓu]‖_{L²}` at interior stored times.
///
/// `∂ₜw` is a centred difference over neighbouring records; the residual is
/// measured on the base lattice.
pub fn gauge_residual(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    if traj.fields.len() < 3 {
        return Err(BolabError::InvalidArgument(
            "gauge residual needs at least three records".into(),
        ));
    }
    let states = gauge_trajectory(traj)?;
    let mut out = Vec::with_capacity(states.len() - 2);
    for k in 1..states.len() - 1 {
        let dt = traj.times[k + 1] - traj.times[k - 1];
        let dw = states[k + 1]
            .w
            .sub(&states[k - 1].w)?
            .scale(Complex64::new(1.0 / dt, 0.0));
        let w = &states[k].w;
        let lin = w.apply_fn(|q| Complex64::new(0.0, q * q));
        let rhs = gauge_nonlinearity(w, &states[k].u)?;
        let r = dw.add(&lin)?.sub(&rhs)?.resample(traj.grid)?;
        out.push((traj.times[k], spectral::l2_norm(&r)));
    }
    Ok(out)
}
