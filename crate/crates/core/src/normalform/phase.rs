//! Resonance functions `Ω` and their two- and three-step compositions.
//!
//! Everything is generic over [`Freq`] so that the lattice checks run in exact
//! integer arithmetic while the multilinear sums use `f64` wavenumbers.

use std::ops::{Add, Mul, Neg, Sub};

pub trait Freq:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn two() -> Self;
    fn abs_val(self) -> Self;
}

impl Freq for i64 {
    fn zero() -> Self {
        0
    }
    fn two() -> Self {
        2
    }
    fn abs_val(self) -> Self {
        self.abs()
    }
}

impl Freq for f64 {
    fn zero() -> Self {
        0.0
    }
    fn two() -> Self {
        2.0
    }
    fn abs_val(self) -> Self {
        self.abs()
    }
}

/// Dispersion relation `ω(ξ) = ξ|ξ|`.
#[inline]
pub fn omega<T: Freq>(x: T) -> T {
    x * x.abs_val()
}

/// `Ω(ξ, ξ₁, ξ₂) = ω(ξ) - ω(ξ₁) - ω(ξ₂)`.
#[inline]
pub fn res<T: Freq>(xi: T, x1: T, x2: T) -> T {
    omega(xi) - omega(x1) - omega(x2)
}

/// `ω(Σxᵢ) - Σω(xᵢ)`.
#[inline]
pub fn telescoped<T: Freq>(xs: &[T]) -> T {
    let mut sum = T::zero();
    let mut acc = T::zero();
    for &x in xs {
        sum = sum + x;
        acc = acc - omega(x);
    }
    acc + omega(sum)
}

/// Second-step phase `Ω⁽²⁾ⱼ` as a composition.
///
/// `j = 1`: `Ω(ξ, ξ₁₂, ξ₃) + Ω(ξ₁₂, ξ₁, ξ₂)`;
/// `j = 2, 3`: `Ω(ξ, ξ₁, ξ₂₃) + Ω(ξ₂₃, ξ₂, ξ₃)`.
#[inline]
pub fn omega2<T: Freq>(j: usize, x: [T; 3]) -> T {
    let xi = x[0] + x[1] + x[2];
    match j {
        1 => {
            let x12 = x[0] + x[1];
            res(xi, x12, x[2]) + res(x12, x[0], x[1])
        }
        2 | 3 => {
            let x23 = x[1] + x[2];
            res(xi, x[0], x23) + res(x23, x[1], x[2])
        }
        _ => panic!("second-step index must be 1, 2 or 3"),
    }
}

/// Third-step phase `Ω⁽³⁾ⱼ,ₖ`: `Ω⁽²⁾ⱼ` with the `k`-th pair merged, plus the
/// resonance of that pair.
#[inline]
pub fn omega3<T: Freq>(j: usize, k: usize, x: [T; 4]) -> T {
    match k {
        1 => {
            let y = x[0] + x[1];
            omega2(j, [y, x[2], x[3]]) + res(y, x[0], x[1])
        }
        2 => {
            let y = x[1] + x[2];
            omega2(j, [x[0], y, x[3]]) + res(y, x[1], x[2])
        }
        3 => {
            let y = x[2] + x[3];
            omega2(j, [x[0], x[1], y]) + res(y, x[2], x[3])
        }
        _ => panic!("third-step index must be 1, 2 or 3"),
    }
}

/// `Ω(ξ₂₃, ξ₂, ξ₃)` on `ξ₂₃ < 0` by branch:
/// `-2ξ₂ξ₃` (both negative), `-2ξ₂ξ₂₃` (`ξ₂ ≥ 0`), `-2ξ₃ξ₂₃` (`ξ₃ ≥ 0`).
pub fn inner_branch<T: Freq>(x2: T, x3: T) -> Option<T> {
    let z = T::zero();
    let two = T::two();
    let x23 = x2 + x3;
    if !(x23 < z) {
        return None;
    }
    Some(if x2 < z && x3 < z {
        -two * x2 * x3
    } else if x2 >= z {
        -two * x2 * x23
    } else {
        -two * x3 * x23
    })
}
