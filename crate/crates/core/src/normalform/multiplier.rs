//! Multipliers of the normal-form terms.
//!
//! Arguments are the input wavenumbers; the output wavenumber is their sum.
//! The compositional forms build every multiplier from the first-step kernel
//! `K(ξ₁, ξ₂) = -2i ξξ₂/ξ₁ · σ`; the `*_expanded` functions are independent
//! closed forms used to cross-check them.

use num_complex::Complex64;

use super::phase::{omega2, res};
use crate::spectral::{chi_plus, Mode};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Cutoff data shared by every multiplier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoffs {
    /// Resonance threshold `M`.
    pub m: f64,
    pub mode: Mode,
}

impl Cutoffs {
    pub fn torus(m: f64) -> Self {
        Self {
            m,
            mode: Mode::Torus,
        }
    }

    #[inline]
    pub fn chi(&self, x: f64) -> f64 {
        chi_plus(x, self.mode)
    }
}

#[inline]
fn neg(x: f64) -> f64 {
    if x < 0.0 {
        1.0
    } else {
        0.0
    }
}

#[inline]
fn nonneg(x: f64) -> f64 {
    1.0 - neg(x)
}

#[inline]
fn gt(a: f64, b: f64) -> f64 {
    if a > b {
        1.0
    } else {
        0.0
    }
}

/// `σ(ξ, ξ₁, ξ₂) = χ₊(ξ)χ₊(ξ₁)1_{ξ₂<0}`.
#[inline]
pub fn sigma(c: &Cutoffs, x1: f64, x2: f64) -> f64 {
    let s = neg(x2);
    if s == 0.0 {
        return 0.0;
    }
    c.chi(x1 + x2) * c.chi(x1) * s
}

/// First-step kernel `-2i ξξ₂/ξ₁ σ(ξ, ξ₁, ξ₂)`.
#[inline]
pub fn k1(c: &Cutoffs, x1: f64, x2: f64) -> Complex64 {
    let s = sigma(c, x1, x2);
    if s == 0.0 {
        return ZERO;
    }
    -2.0 * I * ((x1 + x2) * x2 / x1) * s
}

#[inline]
pub fn n1_le_m(c: &Cutoffs, x1: f64, x2: f64) -> Complex64 {
    if res(x1 + x2, x1, x2).abs() > c.m {
        ZERO
    } else {
        k1(c, x1, x2)
    }
}

#[inline]
pub fn n1_gt_m(c: &Cutoffs, x1: f64, x2: f64) -> Complex64 {
    if res(x1 + x2, x1, x2).abs() > c.m {
        k1(c, x1, x2)
    } else {
        ZERO
    }
}

/// Boundary multiplier `K/(iΩ) · 1_{|Ω|>M}`.
#[inline]
pub fn n1_0(c: &Cutoffs, x1: f64, x2: f64) -> Complex64 {
    let om = res(x1 + x2, x1, x2);
    if om.abs() <= c.m {
        return ZERO;
    }
    let k = k1(c, x1, x2);
    if k == ZERO {
        return ZERO;
    }
    k / (I * om)
}

/// Multiplier of the full `u`-derivative remainder, `-N₀⁽¹⁾(ξ₁, ξ₂₃) · iξ₂₃`.
#[inline]
pub fn bold22(c: &Cutoffs, x: [f64; 3]) -> Complex64 {
    let x23 = x[1] + x[2];
    let b = n1_0(c, x[0], x23);
    if b == ZERO {
        return ZERO;
    }
    -b * I * x23
}

/// Second-step multipliers `m⁽²⁾ⱼ`, compositional form.
pub fn m2(c: &Cutoffs, j: usize, x: [f64; 3]) -> Complex64 {
    let [x1, x2, x3] = x;
    match j {
        1 => {
            let k = k1(c, x1, x2);
            if k == ZERO || omega2(1, x).abs() <= c.m {
                return ZERO;
            }
            -n1_0(c, x1 + x2, x3) * k
        }
        2 | 3 => {
            let branch = if j == 2 { neg(x3) } else { nonneg(x3) };
            let ind = neg(x2) * branch * gt((x1 + x2).abs(), 1.0) * gt(omega2(2, x).abs(), c.m);
            if ind == 0.0 {
                return ZERO;
            }
            bold22(c, x) * ind
        }
        _ => panic!("second-step index must be 1, 2 or 3"),
    }
}

/// The part of [`bold22`] that is not integrated by parts again.
///
/// Equal to `bold22 - m⁽²⁾₂ - m⁽²⁾₃ - m⁽²⁾₃∘(ξ₂↔ξ₃)`, so that the full
/// remainder is `N_{≤M} + N⁽²⁾₂ + 2N⁽²⁾₃` whenever slots two and three carry
/// the same field.
pub fn n2_le_m(c: &Cutoffs, x: [f64; 3]) -> Complex64 {
    bold22(c, x) - m2(c, 2, x) - m2(c, 3, x) - m2(c, 3, [x[0], x[2], x[1]])
}

/// Second-step boundary multiplier `m⁽²⁾ⱼ/(iΩ⁽²⁾ⱼ)`.
pub fn n2_0(c: &Cutoffs, j: usize, x: [f64; 3]) -> Complex64 {
    let m = m2(c, j, x);
    if m == ZERO {
        return ZERO;
    }
    m / (I * omega2(j, x))
}

/// Third-step multipliers `m⁽³⁾ⱼ,ₖ`, compositional form.
///
/// `k` names the slot of `N⁽²⁾ⱼ,₀` whose time derivative was substituted:
/// `k = 1` the `w` slot, `k = 2, 3` the `u` slots.
pub fn m3(c: &Cutoffs, j: usize, k: usize, x: [f64; 4]) -> Complex64 {
    let [x1, x2, x3, x4] = x;
    match k {
        1 => {
            let inner = k1(c, x1, x2);
            if inner == ZERO {
                return ZERO;
            }
            n2_0(c, j, [x1 + x2, x3, x4]) * inner
        }
        2 => {
            let y = x2 + x3;
            n2_0(c, j, [x1, y, x4]) * I * y
        }
        3 => {
            let y = x3 + x4;
            n2_0(c, j, [x1, x2, y]) * I * y
        }
        _ => panic!("third-step index must be 1, 2 or 3"),
    }
}

/// Closed forms of `m⁽²⁾ⱼ` with the phase conditions written out.
pub fn m2_expanded(c: &Cutoffs, j: usize, x: [f64; 3]) -> Complex64 {
    let [x1, x2, x3] = x;
    let xi = x1 + x2 + x3;
    let x12 = x1 + x2;
    let x23 = x2 + x3;
    let h = c.m / 2.0;
    match j {
        1 => {
            let ind = c.chi(xi)
                * c.chi(x12).powi(2)
                * c.chi(x1)
                * neg(x2)
                * neg(x3)
                * gt((xi * x3).abs(), h)
                * gt((xi * x3 + x12 * x2).abs(), h);
            if ind == 0.0 {
                return ZERO;
            }
            -2.0 * I * (x2 / x1) * ind
        }
        2 => {
            let ind = c.chi(xi)
                * c.chi(x1)
                * neg(x2)
                * neg(x3)
                * gt(x12.abs(), 1.0)
                * gt((xi * x23).abs(), h)
                * gt((xi * x23 - x2 * x3).abs(), h);
            if ind == 0.0 {
                return ZERO;
            }
            I * (x23 / x1) * ind
        }
        3 => {
            let ind = c.chi(xi)
                * c.chi(x1)
                * neg(x2)
                * nonneg(x3)
                * neg(x23)
                * gt(x12.abs(), 1.0)
                * gt((xi * x23).abs(), h)
                * gt((xi * x23 - x3 * x23).abs(), h);
            if ind == 0.0 {
                return ZERO;
            }
            I * (x23 / x1) * ind
        }
        _ => panic!("second-step index must be 1, 2 or 3"),
    }
}

/// Region form of [`n2_le_m`].
pub fn n2_le_m_expanded(c: &Cutoffs, x: [f64; 3]) -> Complex64 {
    let [x1, x2, x3] = x;
    let xi = x1 + x2 + x3;
    let x23 = x2 + x3;
    let base = c.chi(xi) * c.chi(x1) * neg(x23) * gt((xi * x23).abs(), c.m / 2.0);
    if base == 0.0 {
        return ZERO;
    }
    let inner = if x2 < 0.0 && x3 < 0.0 {
        -2.0 * x2 * x3
    } else if x2 >= 0.0 {
        -2.0 * x2 * x23
    } else {
        -2.0 * x3 * x23
    };
    let far = gt((2.0 * xi * x23 + inner).abs(), c.m);
    let region = if x2 < 0.0 {
        1.0 - gt((x1 + x2).abs(), 1.0) * far
    } else {
        1.0 - gt((x1 + x3).abs(), 1.0) * far
    };
    if region == 0.0 {
        return ZERO;
    }
    I * (x23 / x1) * base * region
}

/// Closed forms of `m⁽³⁾ⱼ,ₖ` after cancelling the factored phases.
pub fn m3_expanded(c: &Cutoffs, j: usize, k: usize, x: [f64; 4]) -> Complex64 {
    let [x1, x2, x3, x4] = x;
    let xi = x1 + x2 + x3 + x4;
    let x12 = x1 + x2;
    let x23 = x2 + x3;
    let x34 = x3 + x4;
    let x123 = x12 + x3;
    let x234 = x23 + x4;
    let h = c.m / 2.0;
    let chi = |v: f64| c.chi(v);
    let (ind, value) = match (j, k) {
        (3, 3) => (
            chi(xi)
                * chi(x1)
                * neg(x2)
                * nonneg(x34)
                * neg(x234)
                * gt(x12.abs(), 1.0)
                * gt((xi * x234).abs(), h)
                * gt((x12 * x234).abs(), h),
            0.5 * I * x34 / (x1 * x12),
        ),
        (2, 3) => {
            let d = xi * x234 - x2 * x34;
            (
                chi(xi)
                    * chi(x1)
                    * neg(x2)
                    * neg(x34)
                    * neg(x234)
                    * gt(x12.abs(), 1.0)
                    * gt((xi * x234).abs(), h)
                    * gt(d.abs(), h),
                0.5 * I * x234 * x34 / (x1 * d),
            )
        }
        (1, 3) => {
            let d = xi * x34 + x12 * x2;
            (
                chi(xi)
                    * chi(x12).powi(2)
                    * chi(x1)
                    * neg(x2)
                    * neg(x34)
                    * gt((xi * x34).abs(), h)
                    * gt(d.abs(), h),
                -I * x2 * x34 / (x1 * d),
            )
        }
        (3, 2) => (
            chi(xi)
                * chi(x1)
                * neg(x23)
                * nonneg(x4)
                * neg(x234)
                * gt(x123.abs(), 1.0)
                * gt((xi * x234).abs(), h)
                * gt((x123 * x234).abs(), h),
            0.5 * I * x23 / (x1 * x123),
        ),
        (2, 2) => {
            let d = xi * x234 - x23 * x4;
            (
                chi(xi)
                    * chi(x1)
                    * neg(x23)
                    * neg(x4)
                    * neg(x234)
                    * gt(x123.abs(), 1.0)
                    * gt((xi * x234).abs(), h)
                    * gt(d.abs(), h),
                0.5 * I * x23 * x234 / (x1 * d),
            )
        }
        (1, 2) => {
            let d = xi * x4 + x123 * x23;
            (
                chi(xi)
                    * chi(x123).powi(2)
                    * chi(x1)
                    * neg(x23)
                    * neg(x4)
                    * gt((xi * x4).abs(), h)
                    * gt(d.abs(), h),
                -I * x23 * x23 / (x1 * d),
            )
        }
        (3, 1) => (
            chi(xi)
                * chi(x12).powi(2)
                * chi(x1)
                * neg(x2)
                * neg(x3)
                * nonneg(x4)
                * neg(x34)
                * gt(x123.abs(), 1.0)
                * gt((xi * x34).abs(), h)
                * gt((x123 * x34).abs(), h),
            -I * x2 / (x1 * x123),
        ),
        (2, 1) => {
            let d = xi * x34 - x3 * x4;
            (
                chi(xi)
                    * chi(x12).powi(2)
                    * chi(x1)
                    * neg(x2)
                    * neg(x3)
                    * neg(x4)
                    * gt(x123.abs(), 1.0)
                    * gt((xi * x34).abs(), h)
                    * gt(d.abs(), h),
                -I * x2 * x34 / (x1 * d),
            )
        }
        (1, 1) => {
            let d = xi * x4 + x123 * x3;
            (
                chi(xi)
                    * chi(x123).powi(2)
                    * chi(x12).powi(2)
                    * chi(x1)
                    * neg(x2)
                    * neg(x3)
                    * neg(x4)
                    * gt((xi * x4).abs(), h)
                    * gt(d.abs(), h),
                2.0 * I * x2 * x3 / (x1 * d),
            )
        }
        _ => panic!("third-step indices must lie in 1..=3"),
    };
    if ind == 0.0 {
        ZERO
    } else {
        value * ind
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let c = Cutoffs::torus(4.0);
        assert_eq!(sigma(&c, 5.0, -2.0), 1.0);
        assert_eq!(sigma(&c, -5.0, 8.0), 0.0);
        // output mode 1 is low frequency
        assert_eq!(sigma(&c, 3.0, -2.0), 0.0);
    }

    #[test]
    fn boundary_example() {
        // (ξ, ξ₁, ξ₂) = (3, 5, -2): Ω = -12, value -2·(1/Ω)·(3·(-2)/5) = -1/5
        let c = Cutoffs::torus(4.0);
        assert!((n1_0(&c, 5.0, -2.0) - Complex64::new(-0.2, 0.0)).norm() < 1e-15);
        assert_eq!(n1_0(&Cutoffs::torus(12.0), 5.0, -2.0), ZERO);
    }

    #[test]
    fn m21_vanishes_for_positive_second_input() {
        let c = Cutoffs::torus(1.0);
        assert_eq!(m2(&c, 1, [9.0, 2.0, -3.0]), ZERO);
        assert_eq!(m2_expanded(&c, 1, [9.0, 2.0, -3.0]), ZERO);
    }
}
