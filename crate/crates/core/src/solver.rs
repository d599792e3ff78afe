//! Integrating-factor time stepping for `∂ₜu + ℋ∂ₓ²u = ∂ₓ(u²) + f`.
//!
//! In Fourier variables `∂ₜûₙ = -i kₙ|kₙ| ûₙ + i kₙ (u²)^ₙ + f̂ₙ`. The linear
//! part is integrated exactly and the schemes are Runge-Kutta methods applied
//! to the twisted variable `e^{i k|k| t} û` (Lawson form).

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BolabError, Result};
use crate::spectral::{self, Grid, Mode, SpectralField};

const MAGIC: &[u8; 8] = b"BOLABTRJ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Fourth-order integrating-factor Runge-Kutta.
    Ifrk4,
    /// Second-order integrating-factor midpoint rule.
    IfMidpoint,
}

impl Scheme {
    pub fn order(&self) -> u32 {
        match self {
            Scheme::Ifrk4 => 4,
            Scheme::IfMidpoint => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Final time; negative values integrate backwards.
    pub t_final: f64,
    /// Step size; `None` selects [`default_dt`]. Always adjusted to divide `t_final`.
    pub dt: Option<f64>,
    pub scheme: Scheme,
    /// Store every this many steps (the final state is always stored).
    pub store_every: usize,
    /// Apply the 2/3 rule to the state and the nonlinearity.
    pub dealias: bool,
}

impl SolverConfig {
    pub fn new(t_final: f64) -> Self {
        Self {
            t_final,
            dt: None,
            scheme: Scheme::Ifrk4,
            store_every: 1,
            dealias: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub dt: f64,
    pub scheme: Scheme,
    pub times: Vec<f64>,
    pub fields: Vec<SpectralField>,
}

/// `0.5 · (L/N) · min(1, 1/‖u₀‖_∞)`.
pub fn default_dt(u0: &SpectralField) -> f64 {
    let sup = spectral::lp_norm(u0, f64::INFINITY);
    let h = u0.grid.period / u0.grid.n as f64;
    0.5 * h * if sup > 1.0 { 1.0 / sup } else { 1.0 }
}

/// Time-dependent forcing, returned as Fourier coefficients on the solver grid.
pub type Forcing<'a> = &'a dyn Fn(f64) -> SpectralField;

struct Stepper {
    grid: Grid,
    ik: Vec<Complex64>,
    omega: Vec<f64>,
    keep: Vec<bool>,
}

impl Stepper {
    fn new(grid: Grid, dealias: bool) -> Self {
        let cut = grid.dealias_mode();
        let mut ik = Vec::with_capacity(grid.n);
        let mut omega = Vec::with_capacity(grid.n);
        let mut keep = Vec::with_capacity(grid.n);
        for i in 0..grid.n {
            let k = grid.wavenumber(i);
            ik.push(Complex64::new(0.0, k));
            omega.push(k * k.abs());
            let m = grid.lattice(i);
            keep.push(m != -(grid.n as i64) / 2 && (!dealias || m.abs() <= cut));
        }
        Self {
            grid,
            ik,
            omega,
            keep,
        }
    }

    fn project(&self, v: &mut [Complex64]) {
        for (c, &k) in v.iter_mut().zip(&self.keep) {
            if !k {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// `i k (u²)^ + f̂(t)` on the retained modes.
    fn nonlinear(&self, v: &[Complex64], t: f64, forcing: Option<Forcing>) -> Vec<Complex64> {
        let f = SpectralField {
            grid: self.grid,
            coeffs: v.to_vec(),
        };
        let mut phys = spectral::to_physical(&f, 1);
        for z in phys.iter_mut() {
            *z = *z * *z;
        }
        let sq = spectral::from_physical(&phys, self.grid).expect("grid sized buffer");
        let mut out: Vec<Complex64> = sq.coeffs.iter().zip(&self.ik).map(|(a, b)| a * b).collect();
        if let Some(force) = forcing {
            let g = force(t);
            for (o, c) in out.iter_mut().zip(&g.coeffs) {
                *o += c;
            }
        }
        self.project(&mut out);
        out
    }

    /// Multiply by the linear propagator `e^{-i k|k| h}`.
    fn propagate(&self, v: &[Complex64], h: f64) -> Vec<Complex64> {
        v.iter()
            .zip(&self.omega)
            .map(|(c, &w)| c * Complex64::from_polar(1.0, -w * h))
            .collect()
    }

    fn step(
        &self,
        scheme: Scheme,
        u: &[Complex64],
        t: f64,
        h: f64,
        forcing: Option<Forcing>,
    ) -> Vec<Complex64> {
        let axpy = |x: &[Complex64], a: f64, y: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(y).map(|(p, q)| p + q * a).collect()
        };
        match scheme {
            Scheme::IfMidpoint => {
                let k1 = self.nonlinear(u, t, forcing);
                let mid = self.propagate(&axpy(u, 0.5 * h, &k1), 0.5 * h);
                let k2 = self.nonlinear(&mid, t + 0.5 * h, forcing);
                let a = self.propagate(u, h);
                let b = self.propagate(&k2, 0.5 * h);
                axpy(&a, h, &b)
            }
            Scheme::Ifrk4 => {
                let half = 0.5 * h;
                let eu_half = self.propagate(u, half);
                let k1 = self.nonlinear(u, t, forcing);
                let ek1_half = self.propagate(&k1, half);
                let k2 = self.nonlinear(&axpy(&eu_half, half, &ek1_half), t + half, forcing);
                let k3 = self.nonlinear(&axpy(&eu_half, half, &k2), t + half, forcing);
                let ek3_half = self.propagate(&k3, half);
                let eu = self.propagate(u, h);
                let k4 = self.nonlinear(&axpy(&eu, h, &ek3_half), t + h, forcing);
                let ek1 = self.propagate(&k1, h);
                let k23: Vec<Complex64> = k2.iter().zip(&k3).map(|(a, b)| a + b).collect();
                let ek23 = self.propagate(&k23, half);
                let mut out = eu;
                for i in 0..out.len() {
                    out[i] += (ek1[i] + ek23[i] * 2.0 + k4[i]) * (h / 6.0);
                }
                self.project(&mut out);
                out
            }
        }
    }
}

pub fn solve(u0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    solve_forced(u0, cfg, None)
}

/// Evolve `u0` to `cfg.t_final`, optionally with a forcing term.
pub fn solve_forced(
    u0: &SpectralField,
    cfg: &SolverConfig,
    forcing: Option<Forcing>,
) -> Result<Trajectory> {
    if !cfg.t_final.is_finite() {
        return Err(BolabError::InvalidArgument("t_final must be finite".into()));
    }
    if cfg.store_every == 0 {
        return Err(BolabError::InvalidArgument("store_every must be positive".into()));
    }
    let grid = u0.grid;
    let dt_req = cfg.dt.unwrap_or_else(|| default_dt(u0)).abs();
    if !(dt_req > 0.0 && dt_req.is_finite()) {
        return Err(BolabError::InvalidArgument(format!("invalid dt {dt_req}")));
    }
    let span = cfg.t_final.abs();
    let steps = ((span / dt_req) - 1e-9).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if steps == 0 { 0.0 } else { cfg.t_final / steps as f64 };

    let stepper = Stepper::new(grid, cfg.dealias);
    let mut u = u0.coeffs.clone();
    stepper.project(&mut u);
    let mut times = vec![0.0];
    let mut fields = vec![SpectralField {
        grid,
        coeffs: u.clone(),
    }];
    for s in 0..steps {
        let t = s as f64 * h;
        u = stepper.step(cfg.scheme, &u, t, h, forcing);
        if (s + 1) % cfg.store_every == 0 || s + 1 == steps {
            times.push((s + 1) as f64 * h);
            fields.push(SpectralField {
                grid,
                coeffs: u.clone(),
            });
        }
    }
    Ok(Trajectory {
        grid,
        dt: h,
        scheme: cfg.scheme,
        times,
        fields,
    })
}

impl Trajectory {
    pub fn last(&self) -> &SpectralField {
        self.fields.last().expect("trajectory holds the initial state")
    }

    /// The same records restricted (or zero-padded) to another grid.
    pub fn resampled(&self, grid: Grid) -> Result<Trajectory> {
        Ok(Trajectory {
            grid,
            dt: self.dt,
            scheme: self.scheme,
            times: self.times.clone(),
            fields: self
                .fields
                .iter()
                .map(|f| f.resample(grid))
                .collect::<Result<_>>()?,
        })
    }

    /// Largest `|ĉ₀(t) - ĉ₀(0)|` over the stored states.
    pub fn mean_drift(&self) -> f64 {
        let m0 = self.fields[0].mean();
        self.fields
            .iter()
            .fold(0.0, |a, f| a.max((f.mean() - m0).norm()))
    }

    /// Largest relative change of the `L²` norm over the stored states.
    pub fn l2_drift(&self) -> f64 {
        let n0 = spectral::l2_norm(&self.fields[0]);
        self.fields.iter().fold(0.0, |a, f| {
            a.max((spectral::l2_norm(f) - n0).abs() / n0.max(f64::MIN_POSITIVE))
        })
    }

    /// Write the binary trajectory format.
    ///
    /// Layout: the 8 bytes `BOLABTRJ`, a little-endian `u64` header length, a
    /// UTF-8 JSON header, then one record per stored time. A record is the time
    /// followed by `N` interleaved `(re, im)` pairs for modes `-N/2 … N/2-1`.
    /// All numbers are little-endian `f64`.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let header = TrajectoryHeader {
            format: "bolab-trajectory".into(),
            version: 1,
            n: self.grid.n,
            period: self.grid.period,
            mode: self.grid.mode,
            dt: self.dt,
            scheme: self.scheme,
            records: self.fields.len(),
        };
        let text = serde_json::to_vec(&header)?;
        w.write_all(MAGIC)?;
        w.write_all(&(text.len() as u64).to_le_bytes())?;
        w.write_all(&text)?;
        let half = self.grid.n as i64 / 2;
        for (t, f) in self.times.iter().zip(&self.fields) {
            w.write_all(&t.to_le_bytes())?;
            for m in -half..half {
                let c = f.coeff(m);
                w.write_all(&c.re.to_le_bytes())?;
                w.write_all(&c.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(BolabError::Format("bad magic".into()));
        }
        let mut len = [0u8; 8];
        r.read_exact(&mut len)?;
        let len = u64::from_le_bytes(len) as usize;
        let mut text = vec![0u8; len];
        r.read_exact(&mut text)?;
        let header: TrajectoryHeader = serde_json::from_slice(&text)?;
        if header.version != 1 {
            return Err(BolabError::Format(format!("unsupported version {}", header.version)));
        }
        let grid = Grid::new(header.n, header.period, header.mode)?;
        let mut read_f64 = || -> Result<f64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(f64::from_le_bytes(b))
        };
        let half = grid.n as i64 / 2;
        let mut times = Vec::with_capacity(header.records);
        let mut fields = Vec::with_capacity(header.records);
        for _ in 0..header.records {
            times.push(read_f64()?);
            let mut f = SpectralField::zeros(grid);
            for m in -half..half {
                let re = read_f64()?;
                let im = read_f64()?;
                f.coeffs[grid.index(m).unwrap()] = Complex64::new(re, im);
            }
            f.zero_nyquist();
            fields.push(f);
        }
        Ok(Self {
            grid,
            dt: header.dt,
            scheme: header.scheme,
            times,
            fields,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectoryHeader {
    format: String,
    version: u32,
    n: usize,
    period: f64,
    mode: Mode,
    dt: f64,
    scheme: Scheme,
    records: usize,
}

/// Manufactured solution `u*(t, x) = e^{-t} cos(x - t)` on the `2π` torus.
pub fn mms_exact(grid: Grid, t: f64) -> SpectralField {
    let c = Complex64::from_polar(0.5 * (-t).exp(), -t);
    SpectralField::from_fn(grid, |m| match m {
        1 => c,
        -1 => c.conj(),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Forcing that makes [`mms_exact`] an exact solution:
/// `f = -u* + e^{-2t} sin(2(x - t))`.
pub fn mms_forcing(grid: Grid, t: f64) -> SpectralField {
    let c1 = Complex64::from_polar(0.5 * (-t).exp(), -t);
    // e^{-2t} sin(2x - 2t) = e^{-2t} (e^{i(2x-2t)} - e^{-i(2x-2t)}) / (2i)
    let c2 = Complex64::from_polar(0.5 * (-2.0 * t).exp(), -2.0 * t) * Complex64::new(0.0, -1.0);
    SpectralField::from_fn(grid, |m| match m {
        1 => -c1,
        -1 => -c1.conj(),
        2 => c2,
        -2 => c2.conj(),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// Errors of the manufactured-solution run at `t_final` for each step size,
/// and the observed orders between consecutive step sizes.
pub fn mms_convergence(
    n: usize,
    scheme: Scheme,
    t_final: f64,
    dts: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = Grid::torus(n)?;
    let u0 = mms_exact(grid, 0.0);
    let exact = mms_exact(grid, t_final);
    let forcing = move |t: f64| mms_forcing(grid, t);
    let mut errs = Vec::with_capacity(dts.len());
    for &dt in dts {
        let cfg = SolverConfig {
            t_final,
            dt: Some(dt),
            scheme,
            store_every: usize::MAX,
            dealias: true,
        };
        let traj = solve_forced(&u0, &cfg, Some(&forcing))?;
        errs.push(spectral::l2_norm(&traj.last().sub(&exact)?));
    }
    let orders = errs
        .windows(2)
        .zip(dts.windows(2))
        .map(|(e, d)| (e[0] / e[1]).ln() / (d[0] / d[1]).ln())
        .collect();
    Ok((errs, orders))
}
