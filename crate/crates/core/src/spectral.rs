//! Periodic grids, Fourier-coefficient fields and Fourier multipliers.
//!
//! A field on a grid with `N` points stores the coefficients `cₙ` of
//! `u(x) = Σ cₙ e^{i kₙ x}` for lattice modes `n ∈ [-N/2, N/2)` in FFT order.
//! The Nyquist mode `-N/2` is kept at zero by every operation.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{BolabError, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// How cutoff symbols are realised.
///
/// `Torus` uses sharp indicators, `Line` uses the smooth bump [`bump`] and is
/// meant for large periods that mimic the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Torus,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub period: f64,
    pub mode: Mode,
}

impl Grid {
    pub fn new(n: usize, period: f64, mode: Mode) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(BolabError::InvalidGrid(format!(
                "N must be even and at least 4, got {n}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(BolabError::InvalidGrid(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { n, period, mode })
    }

    /// The standard torus `ℝ/2πℤ`, where `kₙ = n`.
    pub fn torus(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI, Mode::Torus)
    }

    pub fn line(n: usize, period: f64) -> Result<Self> {
        Self::new(n, period, Mode::Line)
    }

    /// Same period and mode with a different number of points.
    pub fn resized(&self, n: usize) -> Result<Self> {
        Self::new(n, self.period, self.mode)
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Lattice mode stored at FFT index `i`.
    pub fn lattice(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index of lattice mode `m`, if it lies in `[-N/2, N/2)`.
    pub fn index(&self, m: i64) -> Option<usize> {
        let n = self.n as i64;
        if m >= -n / 2 && m < n / 2 {
            Some(m.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        self.lattice(i) as f64 * self.dk()
    }

    /// Largest retained lattice mode, `N/2 - 1`.
    pub fn max_mode(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    /// Largest mode kept by the 2/3 rule.
    pub fn dealias_mode(&self) -> i64 {
        self.n as i64 / 3
    }

    pub fn nodes(&self, oversample: usize) -> Vec<f64> {
        let m = self.n * oversample;
        (0..m).map(|j| j as f64 * self.period / m as f64).collect()
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self.n != other.n || self.mode != other.mode || self.period != other.period {
            return Err(BolabError::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// C^∞ bump: 1 on `[-1, 1]`, 0 outside `[-2, 2]`, monotone in between.
///
/// The transition is `g(2-|x|) / (g(2-|x|) + g(|x|-1))` with `g(y) = e^{-1/y}`.
pub fn bump(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let g = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    let p = g(2.0 - a);
    let q = g(a - 1.0);
    p / (p + q)
}

fn sharp_le(k: f64, cut: f64) -> f64 {
    if k.abs() <= cut * (1.0 + 1e-12) {
        1.0
    } else {
        0.0
    }
}

/// Fourier multipliers, evaluated at the physical wavenumber `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symbol {
    Identity,
    /// `-i sgn(k)`
    Hilbert,
    PPlus,
    PMinus,
    PZero,
    /// `P_{≤1}`
    PLow,
    /// `P_{≤N}`
    PLeq(f64),
    /// `P_N = P_{≤N} - P_{≤N/2}` for `N ≥ 2`, and `P_1 = P_{≤1}`.
    PDyadic(f64),
    /// `χ₊ = 1_{k>0}(1 - P_low)`, the symbol of `P₊^{hi}`.
    ChiPlus,
    Dx,
    /// `1/(ik)`, zero on the zero mode.
    DxInv,
    /// `J^s = ⟨k⟩^s`, `⟨k⟩ = 1 + |k|`.
    Bessel(f64),
    /// `D^s = |k|^s`, zero on the zero mode.
    Riesz(f64),
    /// `e^{-tℋ∂ₓ²}`: `e^{-i k|k| t}`.
    BoFlow(f64),
    /// `e^{it∂ₓ²}`: `e^{-i k² t}`.
    SchrodingerFlow(f64),
}

impl Symbol {
    pub fn eval(&self, k: f64, mode: Mode) -> Complex64 {
        let re = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Symbol::Identity => re(1.0),
            Symbol::Hilbert => -I * k.signum() * if k == 0.0 { 0.0 } else { 1.0 },
            Symbol::PPlus => re(if k > 0.0 { 1.0 } else { 0.0 }),
            Symbol::PMinus => re(if k < 0.0 { 1.0 } else { 0.0 }),
            Symbol::PZero => re(if k == 0.0 { 1.0 } else { 0.0 }),
            Symbol::PLow => re(low_cut(k, 1.0, mode)),
            Symbol::PLeq(n) => re(low_cut(k, n, mode)),
            Symbol::PDyadic(n) => {
                if n <= 1.0 {
                    re(low_cut(k, 1.0, mode))
                } else {
                    re(low_cut(k, n, mode) - low_cut(k, n / 2.0, mode))
                }
            }
            Symbol::ChiPlus => re(chi_plus(k, mode)),
            Symbol::Dx => I * k,
            Symbol::DxInv => {
                if k == 0.0 {
                    re(0.0)
                } else {
                    -I / k
                }
            }
            Symbol::Bessel(s) => re((1.0 + k.abs()).powf(s)),
            Symbol::Riesz(s) => {
                if k == 0.0 {
                    re(0.0)
                } else {
                    re(k.abs().powf(s))
                }
            }
            Symbol::BoFlow(t) => Complex64::from_polar(1.0, -k * k.abs() * t),
            Symbol::SchrodingerFlow(t) => Complex64::from_polar(1.0, -k * k * t),
        }
    }
}

fn low_cut(k: f64, n: f64, mode: Mode) -> f64 {
    match mode {
        Mode::Torus => sharp_le(k, n),
        Mode::Line => bump(k / n),
    }
}

/// Symbol of `P₊^{hi}`; in torus mode this is `1_{k>1}`.
pub fn chi_plus(k: f64, mode: Mode) -> f64 {
    if k > 0.0 {
        1.0 - low_cut(k, 1.0, mode)
    } else {
        0.0
    }
}

/// Symbol of `P_low`.
pub fn p_low(k: f64, mode: Mode) -> f64 {
    low_cut(k, 1.0, mode)
}

/// Fourier coefficients on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n {
            return Err(BolabError::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.n,
                coeffs.len()
            )));
        }
        let mut f = Self { grid, coeffs };
        f.zero_nyquist();
        Ok(f)
    }

    /// Build from a function of the lattice mode.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.n {
            out.coeffs[i] = f(grid.lattice(i));
        }
        out.zero_nyquist();
        out
    }

    /// Build from a list of `(mode, coefficient)` pairs; out-of-range modes are an error.
    pub fn from_modes(grid: Grid, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut out = Self::zeros(grid);
        for &(m, c) in modes {
            let i = grid
                .index(m)
                .filter(|_| m > -(grid.n as i64) / 2)
                .ok_or_else(|| BolabError::InvalidArgument(format!("mode {m} not on grid")))?;
            out.coeffs[i] += c;
        }
        Ok(out)
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        match self.grid.index(m) {
            Some(i) => self.coeffs[i],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero_nyquist(&mut self) {
        let i = self.grid.n / 2;
        self.coeffs[i] = Complex64::new(0.0, 0.0);
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn apply(&self, sym: Symbol) -> Self {
        let mode = self.grid.mode;
        self.apply_fn(|k| sym.eval(k, mode))
    }

    /// Multiply by an arbitrary symbol of the physical wavenumber.
    pub fn apply_fn(&self, sym: impl Fn(f64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c *= sym(self.grid.wavenumber(i));
        }
        out.zero_nyquist();
        out
    }

    /// Zero every mode with `|n| > N/3`.
    pub fn dealiased(&self) -> Self {
        let cut = self.grid.dealias_mode();
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if self.grid.lattice(i).abs() > cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out.zero_nyquist();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= s;
        }
        out
    }

    /// Pointwise complex conjugate in physical space: `c̄_{-n}`.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.grid, |m| self.coeff(-m).conj())
    }

    /// Move onto another grid of the same period by zero padding or truncation.
    pub fn resample(&self, grid: Grid) -> Result<Self> {
        if grid.period != self.grid.period {
            return Err(BolabError::GridMismatch("periods differ".into()));
        }
        Ok(Self::from_fn(grid, |m| self.coeff(m)))
    }

    /// Largest `|Im u(x)|` relative to `max |u|`, measured on the coefficients.
    pub fn imag_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.grid.n {
            let m = self.grid.lattice(i);
            d = d.max((self.coeffs[i] - self.coeff(-m).conj()).norm());
        }
        d
    }

    pub fn ensure_real(&self, tol: f64) -> Result<()> {
        let d = self.imag_defect();
        if d > tol {
            return Err(BolabError::NotReal(d));
        }
        Ok(())
    }

    pub fn ensure_zero_mean(&self, tol: f64) -> Result<()> {
        let m = self.mean().norm();
        if m > tol {
            return Err(BolabError::NotZeroMean(m));
        }
        Ok(())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.norm()))
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let plan = if inverse {
            p.borrow_mut().plan_fft_inverse(buf.len())
        } else {
            p.borrow_mut().plan_fft_forward(buf.len())
        };
        plan.process(buf);
    });
}

/// Samples of `u` at `x_j = jL/(N·oversample)`.
pub fn to_physical(f: &SpectralField, oversample: usize) -> Vec<Complex64> {
    let m = f.grid.n * oversample.max(1);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..f.grid.n {
        let k = f.grid.lattice(i);
        buf[k.rem_euclid(m as i64) as usize] += f.coeffs[i];
    }
    fft(&mut buf, true);
    buf
}

/// Real parts of [`to_physical`].
pub fn to_physical_real(f: &SpectralField, oversample: usize) -> Vec<f64> {
    to_physical(f, oversample).into_iter().map(|z| z.re).collect()
}

/// Coefficients of equispaced samples, truncated to `grid`.
///
/// The number of samples may exceed `grid.n`; the modes outside the grid
/// lattice are discarded.
pub fn from_physical(samples: &[Complex64], grid: Grid) -> Result<SpectralField> {
    let m = samples.len();
    if m < grid.n {
        return Err(BolabError::InvalidArgument(format!(
            "{m} samples cannot represent {} modes",
            grid.n
        )));
    }
    let mut buf = samples.to_vec();
    fft(&mut buf, false);
    let scale = 1.0 / m as f64;
    Ok(SpectralField::from_fn(grid, |k| {
        buf[k.rem_euclid(m as i64) as usize] * scale
    }))
}

pub fn from_physical_real(samples: &[f64], grid: Grid) -> Result<SpectralField> {
    let z: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    from_physical(&z, grid)
}

/// Exact product of two fields, truncated to the common grid.
///
/// The product is formed on a twice-oversampled grid, which holds every mode
/// of the full product without aliasing.
pub fn multiply(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.grid.check_same(&g.grid)?;
    let a = to_physical(f, 2);
    let b = to_physical(g, 2);
    let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    from_physical(&prod, f.grid)
}

/// `‖u‖_{H^s} = (L Σ ⟨kₙ⟩^{2s} |cₙ|²)^{1/2}` with `⟨k⟩ = 1 + |k|`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..f.grid.n {
        let k = f.grid.wavenumber(i);
        acc += (1.0 + k.abs()).powf(2.0 * s) * f.coeffs[i].norm_sqr();
    }
    (f.grid.period * acc).sqrt()
}

pub fn l2_norm(f: &SpectralField) -> f64 {
    sobolev_norm(f, 0.0)
}

/// `L^p` norm by quadrature on a 4× oversampled grid. `p = ∞` gives the sup.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    let samples = to_physical(f, 4);
    lp_of_samples(&samples, f.grid.period, p)
}

pub(crate) fn lp_of_samples(samples: &[Complex64], period: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().fold(0.0, |a, z| a.max(z.norm()));
    }
    let h = period / samples.len() as f64;
    let s: f64 = samples.iter().map(|z| z.norm().powf(p)).sum();
    (s * h).powf(1.0 / p)
}

/// Dyadic frequencies `1, 2, 4, …` needed to cover every wavenumber on the grid.
pub fn dyadic_levels(grid: &Grid) -> Vec<f64> {
    let kmax = grid.max_mode() as f64 * grid.dk();
    let mut out = vec![1.0];
    let mut n = 1.0;
    while n < kmax {
        n *= 2.0;
        out.push(n);
    }
    out
}

/// Littlewood-Paley pieces `(N, P_N f)`; the pieces sum to `f`.
pub fn littlewood_paley(f: &SpectralField) -> Vec<(f64, SpectralField)> {
    dyadic_levels(&f.grid)
        .into_iter()
        .map(|n| (n, f.apply(Symbol::PDyadic(n))))
        .collect()
}

/// Real field with `|cₙ| = envelope(|n|)` and seeded random phases, `c₀ = 0`.
///
/// Modes with `|n| > max_mode` are left empty.
pub fn random_real_field(
    grid: Grid,
    seed: u64,
    max_mode: i64,
    envelope: impl Fn(i64) -> f64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpectralField::zeros(grid);
    let top = max_mode.min(grid.max_mode());
    for m in 1..=top {
        let phase: f64 = rng.gen_range(0.0..2.0 * PI);
        let c = Complex64::from_polar(envelope(m), phase);
        out.coeffs[grid.index(m).unwrap()] = c;
        out.coeffs[grid.index(-m).unwrap()] = c.conj();
    }
    out
}

/// Rescale so that `‖f‖_{H^s} = target`.
pub fn normalize(f: &SpectralField, s: f64, target: f64) -> SpectralField {
    let n = sobolev_norm(f, s);
    if n == 0.0 {
        return f.clone();
    }
    f.scale(Complex64::new(target / n, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cosine_has_half_coefficients() {
        let g = Grid::torus(16).unwrap();
        let x = g.nodes(1);
        let u: Vec<f64> = x.iter().map(|x| x.cos()).collect();
        let f = from_physical_real(&u, g).unwrap();
        assert!((f.coeff(1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((f.coeff(-1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((l2_norm(&f) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn hilbert_of_cos_is_sin() {
        let g = Grid::torus(16).unwrap();
        let f = SpectralField::from_modes(g, &[(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]).unwrap();
        let h = f.apply(Symbol::Hilbert);
        let samples = to_physical_real(&h, 1);
        for (x, v) in g.nodes(1).iter().zip(samples) {
            assert!((v - x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn nyquist_is_dropped() {
        let g = Grid::torus(8).unwrap();
        let f = SpectralField::from_fn(g, |_| c(1.0, 0.0));
        assert_eq!(f.coeff(-4), c(0.0, 0.0));
        assert!(SpectralField::from_modes(g, &[(-4, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn bump_golden_values() {
        assert_eq!(bump(0.3), 1.0);
        assert_eq!(bump(-1.0), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
        // frozen: e^{-1/0.75} / (e^{-1/0.75} + e^{-1/0.25})
        assert!((bump(1.25) - 0.935_030_830_871_336).abs() < 1e-15);
        assert!((bump(1.75) - 0.064_969_169_128_664_06).abs() < 1e-15);
    }

    #[test]
    fn bernstein_on_a_band() {
        let g = Grid::torus(64).unwrap();
        let f = random_real_field(g, 3, 31, |_| 1.0);
        for &(n, ref p) in littlewood_paley(&f).iter().skip(1) {
            let d = p.apply(Symbol::Riesz(0.7));
            let ratio = l2_norm(&d) / l2_norm(p);
            let lo = 2f64.powf(-0.7) * n.powf(0.7);
            let hi = n.powf(0.7);
            assert!(ratio >= lo - 1e-12 && ratio <= hi + 1e-12, "N={n}");
        }
    }

    #[test]
    fn lp_norm_of_constant() {
        let g = Grid::torus(8).unwrap();
        let f = SpectralField::from_modes(g, &[(0, c(2.0, 0.0))]).unwrap();
        assert!((lp_norm(&f, 4.0) - 2.0 * (2.0 * PI).powf(0.25)).abs() < 1e-13);
        assert!((lp_norm(&f, f64::INFINITY) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn product_matches_trig_identity() {
        let g = Grid::torus(8).unwrap();
        let f = SpectralField::from_modes(g, &[(3, c(0.5, 0.0)), (-3, c(0.5, 0.0))]).unwrap();
        let p = multiply(&f, &f).unwrap();
        // cos²(3x) = 1/2 + cos(6x)/2, mode 6 is off the grid
        assert!((p.coeff(0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(p.coeff(2).norm() < 1e-15);
    }
}
