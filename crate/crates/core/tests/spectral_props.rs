use num_complex::Complex64;
use proptest::prelude::*;

use bolab_core::spectral::{self, Grid, Mode, SpectralField, Symbol};

fn field_strategy(n: usize) -> impl Strategy<Value = SpectralField> {
    let g = Grid::torus(n).unwrap();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |v| {
        let mut f = SpectralField::from_coeffs(
            g,
            v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap();
        f.zero_nyquist();
        f
    })
}

fn real_strategy(n: usize) -> impl Strategy<Value = SpectralField> {
    let g = Grid::torus(n).unwrap();
    (any::<u64>(), 0.0f64..1.5).prop_map(move |(seed, decay)| {
        spectral::random_real_field(g, seed, g.max_mode(), |m| (-decay * m as f64).exp())
    })
}

fn dist(a: &SpectralField, b: &SpectralField) -> f64 {
    spectral::l2_norm(&a.sub(b).unwrap())
}

proptest! {
    #[test]
    fn riesz_projections_partition_identity(f in field_strategy(32)) {
        let sum = f.apply(Symbol::PPlus)
            .add(&f.apply(Symbol::PMinus)).unwrap()
            .add(&f.apply(Symbol::PZero)).unwrap();
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn hilbert_squares_to_minus_identity_off_zero(f in field_strategy(32)) {
        let hh = f.apply(Symbol::Hilbert).apply(Symbol::Hilbert);
        let want = f.sub(&f.apply(Symbol::PZero)).unwrap().scale(Complex64::new(-1.0, 0.0));
        prop_assert_eq!(hh, want);
    }

    #[test]
    fn littlewood_paley_pieces_sum_to_field(f in field_strategy(64)) {
        let mut acc = SpectralField::zeros(f.grid);
        for (_, p) in spectral::littlewood_paley(&f) {
            acc = acc.add(&p).unwrap();
        }
        prop_assert_eq!(acc, f);
    }

    #[test]
    fn transform_round_trip(f in field_strategy(64), os in 1usize..5) {
        let back = spectral::from_physical(&spectral::to_physical(&f, os), f.grid).unwrap();
        prop_assert!(dist(&back, &f) <= 1e-13 * (1.0 + spectral::l2_norm(&f)));
    }

    #[test]
    fn parseval(f in field_strategy(32)) {
        let samples = spectral::to_physical(&f, 1);
        let h = f.grid.period / samples.len() as f64;
        let phys: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * h;
        let l2 = spectral::l2_norm(&f);
        prop_assert!((phys.sqrt() - l2).abs() <= 1e-12 * (1.0 + l2));
    }

    #[test]
    fn hilbert_keeps_real_fields_real(f in real_strategy(32)) {
        prop_assert!(f.apply(Symbol::Hilbert).imag_defect() < 1e-15);
    }

    #[test]
    fn sobolev_norm_increases_with_s(f in field_strategy(32), s in -1.0f64..1.0, d in 0.0f64..1.0) {
        prop_assert!(spectral::sobolev_norm(&f, s) <= spectral::sobolev_norm(&f, s + d) * (1.0 + 1e-14));
    }

    #[test]
    fn bessel_potential_matches_sobolev_norm(f in field_strategy(32), s in -1.0f64..1.0) {
        let lhs = spectral::l2_norm(&f.apply(Symbol::Bessel(s)));
        let rhs = spectral::sobolev_norm(&f, s);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn product_matches_direct_convolution(f in field_strategy(16), g in field_strategy(16)) {
        let p = spectral::multiply(&f, &g).unwrap();
        let grid = f.grid;
        let top = grid.max_mode();
        let direct = SpectralField::from_fn(grid, |m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in -top..=top {
                let b = m - a;
                if b.abs() <= top {
                    acc += f.coeff(a) * g.coeff(b);
                }
            }
            acc
        });
        prop_assert!(dist(&p, &direct) <= 1e-13);
    }

    #[test]
    fn lp_norms_are_ordered_on_unit_torus_measure(f in real_strategy(32)) {
        // with normalized measure dx/L, p ↦ ‖f‖_p is nondecreasing
        let l = f.grid.period;
        let norms: Vec<f64> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&p| spectral::lp_norm(&f, p) / l.powf(1.0 / p))
            .collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12));
        }
        prop_assert!(norms[3] <= spectral::lp_norm(&f, f64::INFINITY) * (1.0 + 1e-12));
    }
}

#[test]
fn line_mode_projections_use_the_bump() {
    let g = Grid::new(64, 64.0, Mode::Line).unwrap();
    for (k, want) in [(1.25, 0.935030830871336), (1.5, 0.5), (1.75, 0.06496916912866406)] {
        let v = Symbol::PLow.eval(k, Mode::Line).re;
        assert!((v - want).abs() < 1e-14, "{k}: {v}");
        let chi = Symbol::ChiPlus.eval(k, Mode::Line).re;
        assert!((chi - (1.0 - want)).abs() < 1e-14);
    }
    assert_eq!(Symbol::PLow.eval(-0.5, g.mode).re, 1.0);
    assert_eq!(Symbol::ChiPlus.eval(-3.0, g.mode).re, 0.0);
}

#[test]
fn torus_chi_plus_starts_at_two() {
    assert_eq!(Symbol::ChiPlus.eval(1.0, Mode::Torus).re, 0.0);
    assert_eq!(Symbol::ChiPlus.eval(2.0, Mode::Torus).re, 1.0);
}

#[test]
fn from_modes_rejects_nyquist_and_off_grid() {
    let g = Grid::torus(8).unwrap();
    assert!(SpectralField::from_modes(g, &[(-4, Complex64::new(1.0, 0.0))]).is_err());
    assert!(SpectralField::from_modes(g, &[(5, Complex64::new(1.0, 0.0))]).is_err());
    assert!(SpectralField::from_modes(g, &[(3, Complex64::new(1.0, 0.0))]).is_ok());
}

#[test]
fn invalid_grids_are_rejected() {
    assert!(Grid::torus(7).is_err());
    assert!(Grid::torus(2).is_err());
    assert!(Grid::new(16, -1.0, Mode::Line).is_err());
}
