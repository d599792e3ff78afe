//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line with the
//! measured quantities, then asserts the criterion.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;

use bolab_core::experiments::{
    alpha, beta, regularity_gate, smoothing_scan, RunSpec, SmoothingConfig, U0Spec,
};
use bolab_core::gauge::{self, gauge_forward, gauge_nonlinearity, negligible_term};
use bolab_core::normalform::{eval_grouped, eval_term, lattice, normalform_residual, TermId, TermTable};
use bolab_core::solver::{self, mms_convergence, Scheme, SolverConfig};
use bolab_core::spectral::{self, Grid, SpectralField, Symbol};

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn sci(xs: &[f64]) -> String {
    let v: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", v.join(", "))
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    spectral::l2_norm(&a.sub(b).unwrap()) / spectral::l2_norm(b).max(f64::MIN_POSITIVE)
}

fn complex_field(grid: Grid, seed: u64) -> SpectralField {
    let re = spectral::random_real_field(grid, seed, grid.max_mode(), |n| 1.0 / (1.0 + n as f64));
    let im = spectral::random_real_field(grid, seed + 1, grid.max_mode(), |n| 0.5 / (1.0 + n as f64));
    re.add(&im.scale(Complex64::new(0.0, 1.0))).unwrap()
}

#[test]
fn criterion_01_spectral_identities() {
    let start = Instant::now();
    let mut exact = true;
    let mut round_trip = 0.0f64;
    for (i, n) in [16usize, 32, 64, 128, 256, 512].into_iter().enumerate() {
        let g = Grid::torus(n).unwrap();
        let f = complex_field(g, 10 + i as u64);
        let sum = f
            .apply(Symbol::PPlus)
            .add(&f.apply(Symbol::PMinus))
            .unwrap()
            .add(&f.apply(Symbol::PZero))
            .unwrap();
        exact &= sum == f;
        let i_c = Complex64::new(0.0, 1.0);
        let h = f
            .apply(Symbol::PPlus)
            .scale(-i_c)
            .add(&f.apply(Symbol::PMinus).scale(i_c))
            .unwrap();
        exact &= h == f.apply(Symbol::Hilbert);
        let mut lp = SpectralField::zeros(g);
        for (_, piece) in spectral::littlewood_paley(&f) {
            lp = lp.add(&piece).unwrap();
        }
        exact &= lp == f;
        for os in [1, 2, 4] {
            let back = spectral::from_physical(&spectral::to_physical(&f, os), g).unwrap();
            round_trip = round_trip.max(rel(&back, &f));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        exact && round_trip <= 1e-13 && secs < 5.0,
        format!("lattice identities exact = {exact}, round trip {round_trip:.2e}, {secs:.2} s"),
    );
}

#[test]
fn criterion_02_resonance_factorization() {
    let start = Instant::now();
    let c = lattice::check_factorization(256);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        2,
        c.violations == 0 && c.checked > 0 && secs < 30.0,
        format!("{} points on supp sigma, {} violations, {secs:.2} s", c.checked, c.violations),
    );
}

#[test]
fn criterion_03_phase_additivity() {
    let start = Instant::now();
    let mut checks = lattice::check_additivity(64);
    checks.extend(lattice::check_second_step_phases(64));
    checks.push(lattice::check_branches(64));
    let secs = start.elapsed().as_secs_f64();
    let checked: u64 = checks.iter().map(|c| c.checked).sum();
    let bad: u64 = checks.iter().map(|c| c.violations).sum();
    verdict(
        3,
        bad == 0 && secs < 60.0,
        format!("{checked} identities checked, {bad} violations, {secs:.2} s"),
    );
}

#[test]
fn criterion_04_multiplier_consistency() {
    let mut ok = true;
    let mut detail = Vec::new();
    for m in [4.0, 16.0] {
        let (checks, err, _) = lattice::check_multipliers(32, m);
        let bad: u64 = checks.iter().map(|c| c.violations).sum();
        ok &= bad == 0 && err <= 1e-12;
        detail.push(format!("M={m}: {bad} violations, max rel err {err:.2e}"));
    }
    verdict(4, ok, detail.join("; "));
}

#[test]
fn criterion_05_convolution_oracle() {
    let g = Grid::torus(64).unwrap();
    let u = spectral::normalize(
        &spectral::random_real_field(g, 5, 20, |n| (-0.2 * n as f64).exp()),
        0.25,
        1.0,
    );
    let st = gauge_forward(&u).unwrap();
    let w = st.w_base();
    let n1 = eval_term(TermId::N1, &[&w, &u], 0.0, 0.0).unwrap();
    let physical = gauge_nonlinearity(&w, &u).unwrap();
    let e = negligible_term(&w.apply(Symbol::DxInv), &u).unwrap();
    let err_hi = rel(&n1, &physical.apply(Symbol::ChiPlus));
    let err_full = rel(&n1.add(&e).unwrap(), &physical);

    let g = Grid::torus(32).unwrap();
    let w = complex_field(g, 40).apply(Symbol::PPlus);
    let v: Vec<SpectralField> = (0..3).map(|i| complex_field(g, 50 + 2 * i)).collect();
    let t = 0.37;
    let mut err_grouped = 0.0f64;
    let mut pairs = vec![(3u8, 3u8)];
    pairs.extend((1..=3).map(|j| (j, 1)));
    for (j, k) in pairs {
        let fields = [&w, &v[0], &v[1], &v[2]];
        let direct = TermTable::build(TermId::N3(j, k), g, 4.0).eval(&fields, t).unwrap();
        let fast = eval_grouped(j, k, &fields, t, 4.0).unwrap();
        err_grouped = err_grouped.max(rel(&fast, &direct));
    }
    verdict(
        5,
        err_hi <= 1e-10 && err_full <= 1e-10 && err_grouped <= 1e-10,
        format!(
            "N1 vs physical (high output) {err_hi:.2e}, N1+E vs full {err_full:.2e}, grouped vs direct {err_grouped:.2e}"
        ),
    );
}

#[test]
fn criterion_06_solver_order() {
    let (errs, orders) = mms_convergence(64, Scheme::Ifrk4, 1.0, &[1e-2, 5e-3, 2.5e-3]).unwrap();
    let ok = orders.iter().all(|p| (3.8..=4.2).contains(p));
    verdict(6, ok, format!("errors {}, orders {orders:.3?}", sci(&errs)));
}

#[test]
fn criterion_07_conservation() {
    let g = Grid::torus(256).unwrap();
    let u0 = spectral::normalize(
        &spectral::random_real_field(g, 3, 40, |n| (-0.3 * n as f64).exp()),
        1.0,
        1.0,
    );
    let mut cfg = SolverConfig::new(1.0);
    cfg.dt = Some(0.25 * solver::default_dt(&u0));
    let traj = solver::solve(&u0, &cfg).unwrap();
    let (mean, l2) = (traj.mean_drift(), traj.l2_drift());
    verdict(
        7,
        mean <= 1e-12 && l2 <= 1e-8,
        format!(
            "mean drift {mean:.2e}, relative L2 drift {l2:.2e}, dt {:.3e}",
            traj.dt
        ),
    );
}

#[test]
fn criterion_08_gauge_round_trip() {
    let mut worst = 0.0f64;
    let mut tails = Vec::new();
    for (i, n) in [32usize, 64, 128].into_iter().enumerate() {
        let g = Grid::torus(n).unwrap();
        let raw = spectral::random_real_field(g, 80 + i as u64, g.max_mode(), |m| {
            (1.0 + m as f64).powf(-0.75)
        });
        let u = spectral::normalize(&raw, 0.25, 1.0);
        let st = gauge_forward(&u).unwrap();
        worst = worst.max(rel(&st.reconstruct().unwrap(), &u));
        tails.push(st.tail_mass);
    }
    verdict(
        8,
        worst <= 1e-9,
        format!("max relative round-trip error {worst:.2e}, tail masses {}", sci(&tails)),
    );
}

#[test]
fn criterion_09_gauge_equation_residual() {
    let g = Grid::torus(64).unwrap();
    let u0 = spectral::normalize(
        &spectral::random_real_field(g, 9, 8, |n| (-0.5 * n as f64).exp()),
        0.25,
        0.5,
    );
    let mut cfg = SolverConfig::new(0.2);
    cfg.dt = Some(2.5e-4);
    let fine = solver::solve(&u0, &cfg).unwrap();
    let centre = 0.1;
    let mut res = Vec::new();
    for stride in [64usize, 32, 16, 8] {
        let idx: Vec<usize> = (0..fine.times.len()).step_by(stride).collect();
        let sub = solver::Trajectory {
            grid: fine.grid,
            dt: fine.dt,
            scheme: fine.scheme,
            times: idx.iter().map(|&i| fine.times[i]).collect(),
            fields: idx.iter().map(|&i| fine.fields[i].clone()).collect(),
        };
        let r = gauge::gauge_residual(&sub).unwrap();
        let (_, v) = r
            .into_iter()
            .min_by(|a, b| (a.0 - centre).abs().total_cmp(&(b.0 - centre).abs()))
            .unwrap();
        res.push((stride as f64 * fine.dt, v));
    }
    let orders: Vec<f64> = res.windows(2).map(|w| (w[0].1 / w[1].1).log2()).collect();
    verdict(
        9,
        orders.iter().all(|&p| p >= 1.9),
        format!(
            "h {}, residual at t=0.1 {}, orders {orders:.3?}",
            sci(&res.iter().map(|r| r.0).collect::<Vec<_>>()),
            sci(&res.iter().map(|r| r.1).collect::<Vec<_>>())
        ),
    );
}

#[test]
fn criterion_10_integrated_normal_form() {
    let start = Instant::now();
    let coarse = Grid::torus(32).unwrap();
    let fine = Grid::torus(64).unwrap();
    let u0 = U0Spec::Smooth {
        seed: 7,
        max_mode: 3,
        decay: 1.0,
        s: 0.25,
        norm: 0.1,
    }
    .build(fine)
    .unwrap();
    let mut cfg = SolverConfig::new(0.1);
    cfg.dt = Some(2.5e-4);
    cfg.store_every = 10;
    let traj = solver::solve(&u0, &cfg).unwrap().resampled(coarse).unwrap();
    let r1 = normalform_residual(&traj, 16.0, 0.25, 0.1, 1).unwrap();
    let r2 = normalform_residual(&traj, 16.0, 0.25, 0.1, 2).unwrap();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        10,
        r1.relative_residual <= 1e-6 && r1.residual < r2.residual && secs < 600.0,
        format!(
            "relative residual {:.2e} ({} samples), {:.2e} ({} samples), {secs:.1} s",
            r1.relative_residual, r1.samples, r2.relative_residual, r2.samples
        ),
    );
}

#[test]
fn criterion_11_smoothing_contrast() {
    let cfg = SmoothingConfig {
        u0: U0Spec::Rough {
            seed: 1,
            s: 0.25,
            eps: 0.01,
            amplitude: 1.0,
        },
        s: 0.25,
        delta: 0.125,
        t_final: 0.5,
        resolutions: vec![128, 256],
        run: RunSpec {
            scheme: Scheme::Ifrk4,
            dt: Some(2.5e-4),
        },
        store_every: 8,
    };
    let r = smoothing_scan(&cfg).unwrap();
    let gauge = r.summary["gauge_ratio_128_256"];
    let comparator = r.summary["comparator_ratio_128_256"];
    verdict(
        11,
        (0.9..=1.1).contains(&gauge) && comparator > 1.25,
        format!("gauge-difference ratio {gauge:.4}, ungauged comparator ratio {comparator:.4}"),
    );
}

#[test]
fn criterion_12_exponent_identities() {
    let r = Rational64::new;
    let mut ok = true;
    for d in 1..=40 {
        for n in 0..=d / 4 {
            let s = r(n, d);
            ok &= alpha(s, r(4, 1)) == (r(3, 1) - r(10, 1) * s) / r(8, 1);
            ok &= alpha(s, r(8, 1)) == (r(3, 1) - r(18, 1) * s) / r(16, 1);
            ok &= alpha(s, r(12, 1)) == (r(3, 1) - r(26, 1) * s) / r(24, 1);
        }
    }
    let b = beta(r(1, 4), r(4, 1));
    ok &= b == r(-3, 32) && alpha(r(1, 4), r(4, 1)) == r(1, 16);
    let gate = regularity_gate(r(1, 7), r(0, 1));
    ok &= gate < r(0, 1);
    verdict(12, ok, format!("beta(1/4, 4) = {b}, gate(1/7) = {gate}"));
}
