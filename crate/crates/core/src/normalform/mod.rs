//! Normal-form machinery for the gauge equation.
//!
//! With the twisted variables `w̃ = e^{-it∂ₓ²}w` and `ũ = e^{tℋ∂ₓ²}u`, the
//! gauge equation reads
//! `∂ₜw̃(ξ) = Σ_{ξ₁+ξ₂=ξ} e^{itΩ} K(ξ₁, ξ₂) w̃(ξ₁)ũ(ξ₂) + Ẽ(ξ)`. Splitting at
//! `|Ω| = M` and integrating by parts twice gives the terms enumerated by
//! [`TermId`]; [`identity`] assembles them into the time-integrated identity.

pub mod eval;
pub mod identity;
pub mod lattice;
pub mod multiplier;
pub mod phase;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::BolabError;
use multiplier::Cutoffs;

pub use eval::{eval_grouped, eval_majorant, eval_term, TermTable};
pub use identity::{normalform_residual, NfResidualReport};
pub use lattice::{verify_lattice, LatticeReport};

/// A multilinear term of the expansion.
///
/// Slot 1 always carries `w̃` (or `Ẽ`), the remaining slots carry `ũ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TermId {
    /// First-step term without splitting.
    N1,
    /// `|Ω| ≤ M` part of the first-step term.
    N1LeM,
    /// `|Ω| > M` part of the first-step term.
    N1GtM,
    /// First boundary term `N⁽¹⁾₀`.
    N1Zero,
    /// Remainder produced by the `ũ`-derivative in `∂ₜN⁽¹⁾₀`.
    N2Bold2,
    /// Part of that remainder that is kept as is.
    N2LeM,
    /// `N⁽²⁾ⱼ`, `j ∈ 1..=3`.
    N2(u8),
    /// `N⁽²⁾ⱼ,₀`.
    N2Zero(u8),
    /// `N⁽³⁾ⱼ,ₖ`.
    N3(u8, u8),
}

impl TermId {
    pub fn arity(&self) -> usize {
        match self {
            TermId::N1 | TermId::N1LeM | TermId::N1GtM | TermId::N1Zero => 2,
            TermId::N2Bold2 | TermId::N2LeM | TermId::N2(_) | TermId::N2Zero(_) => 3,
            TermId::N3(..) => 4,
        }
    }

    /// All nine third-step terms.
    pub fn third_step() -> Vec<TermId> {
        let mut v = Vec::with_capacity(9);
        for j in 1..=3 {
            for k in 1..=3 {
                v.push(TermId::N3(j, k));
            }
        }
        v
    }

    /// Multiplier at the given input wavenumbers (the output is their sum).
    pub fn multiplier(&self, c: &Cutoffs, x: &[f64]) -> Complex64 {
        use multiplier::*;
        match *self {
            TermId::N1 => k1(c, x[0], x[1]),
            TermId::N1LeM => n1_le_m(c, x[0], x[1]),
            TermId::N1GtM => n1_gt_m(c, x[0], x[1]),
            TermId::N1Zero => n1_0(c, x[0], x[1]),
            TermId::N2Bold2 => bold22(c, [x[0], x[1], x[2]]),
            TermId::N2LeM => n2_le_m(c, [x[0], x[1], x[2]]),
            TermId::N2(j) => m2(c, j as usize, [x[0], x[1], x[2]]),
            TermId::N2Zero(j) => n2_0(c, j as usize, [x[0], x[1], x[2]]),
            TermId::N3(j, k) => m3(c, j as usize, k as usize, [x[0], x[1], x[2], x[3]]),
        }
    }

    /// Resonance function of the term, as the appropriate composition.
    pub fn phase(&self, x: &[f64]) -> f64 {
        match *self {
            TermId::N1 | TermId::N1LeM | TermId::N1GtM | TermId::N1Zero => {
                phase::res(x[0] + x[1], x[0], x[1])
            }
            TermId::N2Bold2 | TermId::N2LeM | TermId::N2(_) | TermId::N2Zero(_) => {
                let j = match *self {
                    TermId::N2(j) | TermId::N2Zero(j) => j as usize,
                    _ => 2,
                };
                phase::omega2(j, [x[0], x[1], x[2]])
            }
            TermId::N3(j, k) => phase::omega3(j as usize, k as usize, [x[0], x[1], x[2], x[3]]),
        }
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermId::N1 => write!(f, "N1"),
            TermId::N1LeM => write!(f, "N1_leM"),
            TermId::N1GtM => write!(f, "N1_gtM"),
            TermId::N1Zero => write!(f, "N1_0"),
            TermId::N2Bold2 => write!(f, "N2_bold2"),
            TermId::N2LeM => write!(f, "N2_leM"),
            TermId::N2(j) => write!(f, "N2_{j}"),
            TermId::N2Zero(j) => write!(f, "N2_{j}0"),
            TermId::N3(j, k) => write!(f, "N3_{j}{k}"),
        }
    }
}

impl FromStr for TermId {
    type Err = BolabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BolabError::InvalidArgument(format!("unknown term {s:?}"));
        let digit = |c: u8| -> Result<u8, BolabError> {
            match c {
                b'1'..=b'3' => Ok(c - b'0'),
                _ => Err(bad()),
            }
        };
        match s {
            "N1" => Ok(TermId::N1),
            "N1_leM" => Ok(TermId::N1LeM),
            "N1_gtM" => Ok(TermId::N1GtM),
            "N1_0" => Ok(TermId::N1Zero),
            "N2_bold2" => Ok(TermId::N2Bold2),
            "N2_leM" => Ok(TermId::N2LeM),
            _ => {
                let b = s.as_bytes();
                match (b.len(), s.get(..3)) {
                    (4, Some("N2_")) => Ok(TermId::N2(digit(b[3])?)),
                    (5, Some("N2_")) if b[4] == b'0' => Ok(TermId::N2Zero(digit(b[3])?)),
                    (5, Some("N3_")) => Ok(TermId::N3(digit(b[3])?, digit(b[4])?)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
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
        assert!("N3_41".parse::<TermId>().is_err());
    }
}
