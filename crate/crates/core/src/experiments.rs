//! Smoothing, Strichartz and difference scans with CSV/JSON reports.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BolabError, Result};
use crate::gauge;
use crate::solver::{self, Scheme, SolverConfig, Trajectory};
use crate::spectral::{self, Grid, Mode, SpectralField, Symbol};

/// Scalars in which the exponent formulas are evaluated.
pub trait Exponent:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn ratio(num: i64, den: i64) -> Self;
}

impl Exponent for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Exponent for Rational64 {
    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
}

/// `α(s, p) = (3/2 - s)/p - s`.
pub fn alpha<T: Exponent>(s: T, p: T) -> T {
    (T::ratio(3, 2) - s) / p - s
}

/// `β(s, p) = (3/2 - s)(1/4 - 1/(2p)) - s`.
pub fn beta<T: Exponent>(s: T, p: T) -> T {
    (T::ratio(3, 2) - s) * (T::ratio(1, 4) - T::ratio(1, 1) / (T::ratio(2, 1) * p)) - s
}

/// `s² - 6s + 3/4 + δ(3/2 - s)`; the admissible range is where this is negative.
pub fn regularity_gate<T: Exponent>(s: T, delta: T) -> T {
    s * s - T::ratio(6, 1) * s + T::ratio(3, 4) + delta * (T::ratio(3, 2) - s)
}

/// Initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum U0Spec {
    Zero,
    /// `amplitude · cos x`.
    Cos { amplitude: f64 },
    /// `Σ (cₙ e^{inx} + c.c.)` over the listed `(n, Re cₙ, Im cₙ)`, `n > 0`.
    Modes { modes: Vec<(i64, f64, f64)> },
    /// `|cₙ| ∝ e^{-decay·|n|}` for `1 ≤ |n| ≤ max_mode`, random phases, scaled
    /// to `‖u₀‖_{H^s} = norm`.
    Smooth {
        seed: u64,
        max_mode: i64,
        decay: f64,
        s: f64,
        norm: f64,
    },
    /// `|cₙ| = amplitude · ⟨n⟩^{-(s+1/2)} |n|^{-eps}` with random phases, up to
    /// the dealiasing limit of the grid.
    Rough {
        seed: u64,
        s: f64,
        #[serde(default = "default_eps")]
        eps: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Flat envelope on the dyadic band `band/2 < |n| ≤ band`, random phases.
    Packet { seed: u64, band: i64, amplitude: f64 },
}

fn default_eps() -> f64 {
    0.01
}

fn one() -> f64 {
    1.0
}

impl U0Spec {
    pub fn seed(&self) -> u64 {
        match self {
            U0Spec::Smooth { seed, .. } | U0Spec::Rough { seed, .. } | U0Spec::Packet { seed, .. } => {
                *seed
            }
            _ => 0,
        }
    }

    /// Real zero-mean data on `grid`.
    pub fn build(&self, grid: Grid) -> Result<SpectralField> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            U0Spec::Zero => Ok(SpectralField::zeros(grid)),
            U0Spec::Cos { amplitude } => SpectralField::from_modes(
                grid,
                &[(1, c(amplitude / 2.0, 0.0)), (-1, c(amplitude / 2.0, 0.0))],
            ),
            U0Spec::Modes { modes } => {
                let mut list = Vec::with_capacity(2 * modes.len());
                for &(n, re, im) in modes {
                    if n <= 0 {
                        return Err(BolabError::InvalidArgument(format!(
                            "listed modes must be positive, got {n}"
                        )));
                    }
                    list.push((n, c(re, im)));
                    list.push((-n, c(re, -im)));
                }
                SpectralField::from_modes(grid, &list)
            }
            U0Spec::Smooth {
                seed,
                max_mode,
                decay,
                s,
                norm,
            } => {
                let f = spectral::random_real_field(grid, *seed, *max_mode, |n| {
                    (-decay * n as f64).exp()
                });
                Ok(spectral::normalize(&f, *s, *norm))
            }
            U0Spec::Rough {
                seed,
                s,
                eps,
                amplitude,
            } => Ok(spectral::random_real_field(
                grid,
                *seed,
                grid.dealias_mode(),
                |n| {
                    let n = n as f64;
                    amplitude * (1.0 + n).powf(-(s + 0.5)) * n.powf(-eps)
                },
            )),
            U0Spec::Packet {
                seed,
                band,
                amplitude,
            } => {
                let lo = band / 2;
                Ok(spectral::random_real_field(grid, *seed, *band, |n| {
                    if n > lo {
                        *amplitude
                    } else {
                        0.0
                    }
                }))
            }
        }
    }
}

/// Time stepping options shared by the scans.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default)]
    pub dt: Option<f64>,
}

fn default_scheme() -> Scheme {
    Scheme::Ifrk4
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::Ifrk4,
            dt: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingConfig {
    pub u0: U0Spec,
    pub s: f64,
    pub delta: f64,
    pub t_final: f64,
    pub resolutions: Vec<usize>,
    #[serde(default)]
    pub run: RunSpec,
    /// Steps between stored samples.
    #[serde(default = "default_store")]
    pub store_every: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzConfig {
    pub u0: U0Spec,
    pub n: usize,
    pub s: f64,
    pub p: f64,
    pub t_final: f64,
    pub bands: Vec<f64>,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default = "default_store")]
    pub store_every: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferenceConfig {
    pub u0: U0Spec,
    pub n: usize,
    pub s: f64,
    pub t_final: f64,
    /// Number of sampling intervals of `[0, t_final]`.
    pub samples: usize,
    pub first: RunSpec,
    pub second: RunSpec,
}

fn default_store() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scan", rename_all = "snake_case")]
pub enum ScanConfig {
    Smoothing(SmoothingConfig),
    Strichartz(StrichartzConfig),
    Difference(DifferenceConfig),
    Empty,
}

/// One measurement. `trajectory` names the run it was taken from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub scan_type: String,
    pub seed: u64,
    pub n: usize,
    pub s: f64,
    pub delta_or_p: f64,
    pub t_or_band: f64,
    pub value: f64,
    pub comparator: Option<f64>,
    pub ratio: Option<f64>,
    pub trajectory: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub scan_type: String,
    pub seed: u64,
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
    pub summary: BTreeMap<String, f64>,
}

impl ScanReport {
    pub fn empty(scan_type: &str) -> Self {
        Self {
            scan_type: scan_type.into(),
            seed: 0,
            config: ScanConfig::Empty,
            rows: Vec::new(),
            summary: BTreeMap::new(),
        }
    }
}

pub const CSV_COLUMNS: [&str; 9] = [
    "scan_type",
    "seed",
    "N",
    "s",
    "delta_or_p",
    "t_or_band",
    "value",
    "comparator",
    "ratio",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv(report: &ScanReport, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e: csv::Error| BolabError::Format(e.to_string());
    out.write_record(CSV_COLUMNS).map_err(err)?;
    for r in &report.rows {
        out.write_record([
            r.scan_type.clone(),
            r.seed.to_string(),
            r.n.to_string(),
            r.s.to_string(),
            r.delta_or_p.to_string(),
            r.t_or_band.to_string(),
            r.value.to_string(),
            opt(r.comparator),
            opt(r.ratio),
        ])
        .map_err(err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_report(report: &ScanReport, path: &Path, format: ReportFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        ReportFormat::Csv => write_csv(report, &mut w)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut w, report)?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn evolve(u0: &SpectralField, t_final: f64, run: &RunSpec, store_every: usize) -> Result<Trajectory> {
    let mut cfg = SolverConfig::new(t_final);
    cfg.scheme = run.scheme;
    cfg.dt = run.dt;
    cfg.store_every = store_every;
    solver::solve(u0, &cfg)
}

fn torus_data(spec: &U0Spec, n: usize) -> Result<SpectralField> {
    let grid = Grid::new(n, 2.0 * std::f64::consts::PI, Mode::Torus)?;
    let u0 = spec.build(grid)?;
    u0.ensure_zero_mean(1e-12)?;
    Ok(u0)
}

struct SmoothingPoint {
    n: usize,
    gauge: f64,
    comparator: f64,
    t_gauge: f64,
}

/// Resolution study of `sup_t ‖w(t) - e^{it∂ₓ²}w₀‖_{H^{s+δ}}` against the
/// ungauged `sup_t ‖u(t) - e^{-tℋ∂ₓ²}u₀‖_{H^{s+δ}}`.
pub fn smoothing_scan(cfg: &SmoothingConfig) -> Result<ScanReport> {
    if !(cfg.delta > 0.0) {
        return Err(BolabError::InvalidArgument("delta must be positive".into()));
    }
    if cfg.resolutions.is_empty() {
        return Err(BolabError::InvalidArgument("no resolutions given".into()));
    }
    let sd = cfg.s + cfg.delta;
    let points: Vec<SmoothingPoint> = cfg
        .resolutions
        .par_iter()
        .map(|&n| -> Result<SmoothingPoint> {
            let u0 = torus_data(&cfg.u0, n)?;
            let traj = evolve(&u0, cfg.t_final, &cfg.run, cfg.store_every)?;
            let states = gauge::gauge_trajectory(&traj)?;
            let w0 = states[0].w_base();
            let u0 = &traj.fields[0];
            let mut p = SmoothingPoint {
                n,
                gauge: 0.0,
                comparator: 0.0,
                t_gauge: 0.0,
            };
            for ((&t, u), st) in traj.times.iter().zip(&traj.fields).zip(&states) {
                let free_w = w0.apply(Symbol::SchrodingerFlow(t));
                let g = spectral::sobolev_norm(&st.w_base().sub(&free_w)?, sd);
                if g > p.gauge {
                    p.gauge = g;
                    p.t_gauge = t;
                }
                let free_u = u0.apply(Symbol::BoFlow(t));
                p.comparator = p.comparator.max(spectral::sobolev_norm(&u.sub(&free_u)?, sd));
            }
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut summary = BTreeMap::new();
    let seed = cfg.u0.seed();
    for (i, p) in points.iter().enumerate() {
        let ratio = (i > 0 && points[i - 1].gauge > 0.0).then(|| p.gauge / points[i - 1].gauge);
        if i > 0 {
            let q = &points[i - 1];
            if let Some(r) = ratio {
                summary.insert(format!("gauge_ratio_{}_{}", q.n, p.n), r);
            }
            if q.comparator > 0.0 {
                summary.insert(format!("comparator_ratio_{}_{}", q.n, p.n), p.comparator / q.comparator);
            }
        }
        summary.insert(format!("t_at_sup_{}", p.n), p.t_gauge);
        rows.push(ScanRow {
            scan_type: "smoothing".into(),
            seed,
            n: p.n,
            s: cfg.s,
            delta_or_p: cfg.delta,
            t_or_band: cfg.t_final,
            value: p.gauge,
            comparator: Some(p.comparator),
            ratio,
            trajectory: format!("N={}", p.n),
        });
    }
    Ok(ScanReport {
        scan_type: "smoothing".into(),
        seed,
        config: ScanConfig::Smoothing(cfg.clone()),
        rows,
        summary,
    })
}

/// Space-time `L^p` norms of dyadic pieces against the refined bound
/// `T^{1/p} N^{β(s,p)} (‖P_N u‖_{L^∞_T H^s} + ‖u‖²_{L^∞_T H^s})`.
///
/// Time integrals are left Riemann sums over the stored samples.
pub fn strichartz_scan(cfg: &StrichartzConfig) -> Result<ScanReport> {
    if !(2.0..=4.0).contains(&cfg.p) {
        return Err(BolabError::InvalidArgument(format!(
            "p = {} outside [2, 4] in torus mode",
            cfg.p
        )));
    }
    if !(cfg.t_final > 0.0) {
        return Err(BolabError::InvalidArgument("t_final must be positive".into()));
    }
    let u0 = torus_data(&cfg.u0, cfg.n)?;
    let traj = evolve(&u0, cfg.t_final, &cfg.run, cfg.store_every)?;
    let sup_u = traj
        .fields
        .iter()
        .fold(0.0f64, |a, f| a.max(spectral::sobolev_norm(f, cfg.s)));
    let b = beta(cfg.s, cfg.p);
    let measured: Vec<(f64, f64, f64)> = cfg
        .bands
        .par_iter()
        .map(|&band| {
            let mut integral = 0.0;
            let mut sup_band = 0.0f64;
            for k in 0..traj.times.len() {
                let piece = traj.fields[k].apply(Symbol::PDyadic(band));
                sup_band = sup_band.max(spectral::sobolev_norm(&piece, cfg.s));
                if k + 1 < traj.times.len() {
                    let dt = traj.times[k + 1] - traj.times[k];
                    integral += dt * spectral::lp_norm(&piece, cfg.p).powf(cfg.p);
                }
            }
            let value = integral.powf(1.0 / cfg.p);
            let bound = cfg.t_final.powf(1.0 / cfg.p) * band.powf(b) * (sup_band + sup_u * sup_u);
            (band, value, bound)
        })
        .collect();
    let seed = cfg.u0.seed();
    let mut rows = Vec::new();
    let mut qmax = 0.0f64;
    let mut fit = Vec::new();
    for &(band, value, bound) in &measured {
        let q = (bound > 0.0).then(|| value / bound);
        if let Some(q) = q {
            qmax = qmax.max(q);
        }
        if value > 0.0 {
            fit.push((band.ln(), value.ln()));
        }
        rows.push(ScanRow {
            scan_type: "strichartz".into(),
            seed,
            n: cfg.n,
            s: cfg.s,
            delta_or_p: cfg.p,
            t_or_band: band,
            value,
            comparator: Some(bound),
            ratio: q,
            trajectory: format!("N={}", cfg.n),
        });
    }
    let mut summary = BTreeMap::new();
    summary.insert("beta".into(), b);
    summary.insert("max_q".into(), qmax);
    if let Some(slope) = slope(&fit) {
        summary.insert("slope".into(), slope);
    }
    Ok(ScanReport {
        scan_type: "strichartz".into(),
        seed,
        config: ScanConfig::Strichartz(cfg.clone()),
        rows,
        summary,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Run with `samples` equal storage intervals; the step is reduced so that
/// every interval holds a whole number of steps.
fn sampled(u0: &SpectralField, cfg: &DifferenceConfig, run: &RunSpec) -> Result<Trajectory> {
    let interval = cfg.t_final / cfg.samples as f64;
    let dt = run.dt.unwrap_or_else(|| solver::default_dt(u0));
    let per = ((interval.abs() / dt) - 1e-9).ceil().max(1.0) as usize;
    let spec = RunSpec {
        scheme: run.scheme,
        dt: Some(interval.abs() / per as f64),
    };
    evolve(u0, cfg.t_final, &spec, per)
}

/// Time series of `‖u₁-u₂‖_{H^s}`, `‖w₁-w₂‖_{H^s}` and `‖F₁-F₂‖_{L^∞}` for two
/// solver settings from the same data.
pub fn difference_scan(cfg: &DifferenceConfig) -> Result<ScanReport> {
    if cfg.samples == 0 {
        return Err(BolabError::InvalidArgument("samples must be positive".into()));
    }
    let u0 = torus_data(&cfg.u0, cfg.n)?;
    let (a, b) = rayon::join(|| sampled(&u0, cfg, &cfg.first), || sampled(&u0, cfg, &cfg.second));
    let (a, b) = (a?, b?);
    let ga = gauge::gauge_trajectory(&a)?;
    let gb = gauge::gauge_trajectory(&b)?;
    let seed = cfg.u0.seed();
    let mut rows = Vec::new();
    let (mut max_u, mut max_w, mut max_f, mut c_f) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..a.times.len() {
        let t = a.times[k];
        let du = a.fields[k].sub(&b.fields[k])?;
        let u_s = spectral::sobolev_norm(&du, cfg.s);
        let u_l2 = spectral::l2_norm(&du);
        let w_s = spectral::sobolev_norm(&ga[k].w_base().sub(&gb[k].w_base())?, cfg.s);
        let f_inf = spectral::lp_norm(&ga[k].f.sub(&gb[k].f)?, f64::INFINITY);
        max_u = max_u.max(u_s);
        max_w = max_w.max(w_s);
        max_f = max_f.max(f_inf);
        let rf = (u_l2 > 0.0).then(|| f_inf / u_l2);
        if let Some(r) = rf {
            c_f = c_f.max(r);
        }
        let row = |scan: &str, value, comparator, ratio| ScanRow {
            scan_type: scan.into(),
            seed,
            n: cfg.n,
            s: cfg.s,
            delta_or_p: cfg.s,
            t_or_band: t,
            value,
            comparator: Some(comparator),
            ratio,
            trajectory: format!("{:?}/{:?} vs {:?}/{:?}", a.scheme, a.dt, b.scheme, b.dt),
        };
        rows.push(row("difference", w_s, u_s, (u_s > 0.0).then(|| w_s / u_s)));
        rows.push(row("difference_f", f_inf, u_l2, rf));
    }
    let mut summary = BTreeMap::new();
    summary.insert("max_u_diff".into(), max_u);
    summary.insert("max_w_diff".into(), max_w);
    summary.insert("max_f_diff".into(), max_f);
    summary.insert("f_over_u_l2".into(), c_f);
    summary.insert("dt_first".into(), a.dt);
    summary.insert("dt_second".into(), b.dt);
    Ok(ScanReport {
        scan_type: "difference".into(),
        seed,
        config: ScanConfig::Difference(cfg.clone()),
        rows,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn exponent_identities_are_exact() {
        for (n, d) in [(0, 1), (1, 7), (1, 8), (1, 4), (3, 17)] {
            let s = r(n, d);
            assert_eq!(alpha(s, r(4, 1)), (r(3, 1) - r(10, 1) * s) / r(8, 1));
            assert_eq!(alpha(s, r(8, 1)), (r(3, 1) - r(18, 1) * s) / r(16, 1));
            assert_eq!(alpha(s, r(12, 1)), (r(3, 1) - r(26, 1) * s) / r(24, 1));
        }
        assert_eq!(beta(r(1, 4), r(4, 1)), r(-3, 32));
        assert_eq!(alpha(r(1, 4), r(4, 1)), r(1, 16));
    }

    #[test]
    fn gate_sign() {
        let g = regularity_gate(r(1, 7), r(0, 1));
        assert_eq!(g, r(1, 49) - r(6, 7) + r(3, 4));
        assert!(g < r(0, 1));
        let root = 3.0 - (33.0f64 / 4.0).sqrt();
        assert!(regularity_gate(0.13, 0.0) < 0.0);
        assert!(regularity_gate(0.12, 0.0) > 0.0);
        assert!(regularity_gate(root, 0.0).abs() < 1e-14);
    }

    #[test]
    fn strichartz_rejects_large_p() {
        let cfg = StrichartzConfig {
            u0: U0Spec::Zero,
            n: 16,
            s: 0.0,
            p: 5.0,
            t_final: 1.0,
            bands: vec![1.0],
            run: RunSpec::default(),
            store_every: 1,
        };
        assert!(matches!(strichartz_scan(&cfg), Err(BolabError::InvalidArgument(_))));
    }
}
