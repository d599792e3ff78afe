use num_complex::Complex64;
use proptest::prelude::*;

use bolab_core::normalform::multiplier::{self, Cutoffs};
use bolab_core::normalform::phase::{omega2, omega3, res, telescoped};
use bolab_core::normalform::{
    eval_grouped, normalform_residual, verify_lattice, TermId, TermTable,
};
use bolab_core::solver::{self, SolverConfig};
use bolab_core::spectral::{self, Grid, SpectralField};

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn small_lattice_report_passes() {
    let r = verify_lattice(16, 4.0);
    assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| c.violations > 0).collect::<Vec<_>>());
    assert_eq!(r.multiplier_max_freq, 16);
    assert!(r.checks.iter().all(|c| c.checked > 0));
    assert!(r.bounds.iter().all(|b| b.constant.is_finite()));
}

#[test]
fn boundary_multiplier_is_minus_reciprocal_of_first_input() {
    let c = Cutoffs::torus(4.0);
    for x1 in 2i64..40 {
        for x2 in -60..0 {
            let v = multiplier::n1_0(&c, x1 as f64, x2 as f64);
            let xi = x1 + x2;
            if xi >= 2 && (2 * xi * x2).abs() > 4 {
                assert!(close(v, Complex64::new(-1.0 / x1 as f64, 0.0)), "{x1} {x2}");
            } else {
                assert_eq!(v, Complex64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn term_names_round_trip() {
    let mut all = vec![
        TermId::N1,
        TermId::N1LeM,
        TermId::N1GtM,
        TermId::N1Zero,
        TermId::N2Bold2,
        TermId::N2LeM,
    ];
    for j in 1..=3 {
        all.push(TermId::N2(j));
        all.push(TermId::N2Zero(j));
    }
    all.extend(TermId::third_step());
    for t in all {
        assert_eq!(t.to_string().parse::<TermId>().unwrap(), t);
    }
    for bad in ["N4", "N2_4", "N3_40", "n1", ""] {
        assert!(bad.parse::<TermId>().is_err());
    }
}

fn random_field(g: Grid, seed: u64) -> SpectralField {
    spectral::random_real_field(g, seed, g.max_mode(), |m| 1.0 / (1.0 + m as f64))
}

#[test]
fn grouped_third_step_matches_table() {
    let g = Grid::torus(16).unwrap();
    let fs: Vec<SpectralField> = (0..4).map(|i| random_field(g, 40 + i)).collect();
    let refs: Vec<&SpectralField> = fs.iter().collect();
    for t in TermId::third_step() {
        let TermId::N3(j, k) = t else { unreachable!() };
        let table = TermTable::build(t, g, 3.0).eval(&refs, 0.37).unwrap();
        let grouped = eval_grouped(j, k, &refs, 0.37, 3.0).unwrap();
        let d = spectral::l2_norm(&table.sub(&grouped).unwrap());
        assert!(d <= 1e-12 * (1.0 + spectral::l2_norm(&table)), "{t}: {d}");
    }
}

#[test]
fn residual_rejects_odd_interval_counts() {
    let g = Grid::torus(16).unwrap();
    let u0 = spectral::normalize(&random_field(g, 1), 0.25, 0.1);
    let mut cfg = SolverConfig::new(0.03);
    cfg.dt = Some(0.01);
    let traj = solver::solve(&u0, &cfg).unwrap();
    assert_eq!(traj.times.len(), 4);
    assert!(normalform_residual(&traj, 4.0, 0.25, 0.1, 1).is_err());
    assert!(normalform_residual(&traj, 4.0, 0.25, 0.1, 0).is_err());
}

proptest! {
    #[test]
    fn resonance_factorizes_on_the_interaction_region(x1 in 1i64..1_000_000, x2 in -1_000_000i64..0) {
        let xi = x1 + x2;
        prop_assume!(xi > 0);
        prop_assert_eq!(res(xi, x1, x2), 2 * xi * x2);
    }

    #[test]
    fn compositions_telescope(x in prop::array::uniform4(-1_000_000i64..1_000_000)) {
        for j in 1..=3 {
            prop_assert_eq!(omega2(j, [x[0], x[1], x[2]]), telescoped(&x[..3]));
            for k in 1..=3 {
                prop_assert_eq!(omega3(j, k, x), telescoped(&x));
            }
        }
    }

    #[test]
    fn expanded_multipliers_match_compositions(
        x in prop::array::uniform4(-48i64..48),
        m in prop::sample::select(vec![2.0f64, 4.0, 16.0]),
    ) {
        let c = Cutoffs::torus(m);
        let f = x.map(|v| v as f64);
        let x3 = [f[0], f[1], f[2]];
        for j in 1..=3 {
            prop_assert!(close(multiplier::m2(&c, j, x3), multiplier::m2_expanded(&c, j, x3)));
            for k in 1..=3 {
                prop_assert!(close(multiplier::m3(&c, j, k, f), multiplier::m3_expanded(&c, j, k, f)));
            }
        }
        prop_assert!(close(multiplier::n2_le_m(&c, x3), multiplier::n2_le_m_expanded(&c, x3)));
    }
}
