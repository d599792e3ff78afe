//! Multilinear Fourier sums `Σ e^{itΩ} m(ξ₁,…) Π v̂ᵢ(ξᵢ)` on a lattice.

use num_complex::Complex64;
use rayon::prelude::*;

use super::multiplier::{self, Cutoffs};
use super::phase::omega;
use super::TermId;
use crate::error::{BolabError, Result};
use crate::spectral::{Grid, SpectralField};

#[derive(Clone, Copy, Debug)]
struct Entry {
    out: u32,
    ins: [u32; 4],
    m: Complex64,
    phase: f64,
}

/// Non-zero multiplier values of one term on a grid.
///
/// Inputs and output range over the lattice without the Nyquist mode.
#[derive(Clone, Debug)]
pub struct TermTable {
    pub term: TermId,
    pub grid: Grid,
    pub cutoffs: Cutoffs,
    entries: Vec<Entry>,
}

fn modes(grid: &Grid) -> Vec<i64> {
    let top = grid.max_mode();
    (-top..=top).collect()
}

impl TermTable {
    pub fn build(term: TermId, grid: Grid, m: f64) -> Self {
        let cutoffs = Cutoffs { m, mode: grid.mode };
        let arity = term.arity();
        let all = modes(&grid);
        let top = grid.max_mode();
        let dk = grid.dk();
        // every term carries χ₊ of the first input
        let first: Vec<i64> = all.iter().copied().filter(|&n| n > 0).collect();
        let chunks: Vec<Vec<Entry>> = first
            .par_iter()
            .map(|&n1| {
                let mut out = Vec::new();
                let mut idx = [0i64; 4];
                idx[0] = n1;
                let mut rec = |idx: &[i64; 4]| {
                    let s: i64 = idx[..arity].iter().sum();
                    if s.abs() > top {
                        return;
                    }
                    let mut x = [0.0; 4];
                    for i in 0..arity {
                        x[i] = idx[i] as f64 * dk;
                    }
                    let mv = term.multiplier(&cutoffs, &x[..arity]);
                    if mv == Complex64::new(0.0, 0.0) {
                        return;
                    }
                    let mut ins = [0u32; 4];
                    for i in 0..arity {
                        ins[i] = grid.index(idx[i]).unwrap() as u32;
                    }
                    out.push(Entry {
                        out: grid.index(s).unwrap() as u32,
                        ins,
                        m: mv,
                        phase: term.phase(&x[..arity]),
                    });
                };
                match arity {
                    2 => {
                        for &a in &all {
                            idx[1] = a;
                            rec(&idx);
                        }
                    }
                    3 => {
                        for &a in &all {
                            idx[1] = a;
                            for &b in &all {
                                idx[2] = b;
                                rec(&idx);
                            }
                        }
                    }
                    _ => {
                        for &a in &all {
                            idx[1] = a;
                            for &b in &all {
                                idx[2] = b;
                                for &c in &all {
                                    idx[3] = c;
                                    rec(&idx);
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        Self {
            term,
            grid,
            cutoffs,
            entries: chunks.into_iter().flatten().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check(&self, fields: &[&SpectralField]) -> Result<()> {
        if fields.len() != self.term.arity() {
            return Err(BolabError::InvalidArgument(format!(
                "{} takes {} fields, got {}",
                self.term,
                self.term.arity(),
                fields.len()
            )));
        }
        for f in fields {
            self.grid.check_same(&f.grid)?;
        }
        Ok(())
    }

    /// `Σ e^{itΩ} m Π v̂ᵢ` at every output mode.
    pub fn eval(&self, fields: &[&SpectralField], t: f64) -> Result<SpectralField> {
        self.check(fields)?;
        let arity = self.term.arity();
        let mut out = SpectralField::zeros(self.grid);
        for e in &self.entries {
            let mut p = e.m * Complex64::from_polar(1.0, t * e.phase);
            for i in 0..arity {
                p *= fields[i].coeffs[e.ins[i] as usize];
            }
            out.coeffs[e.out as usize] += p;
        }
        Ok(out)
    }

    /// `Σ |m| Π |v̂ᵢ|`, an upper bound for the modulus of every output mode.
    pub fn eval_majorant(&self, fields: &[&SpectralField]) -> Result<Vec<f64>> {
        self.check(fields)?;
        let arity = self.term.arity();
        let mut out = vec![0.0; self.grid.n];
        for e in &self.entries {
            let mut p = e.m.norm();
            for i in 0..arity {
                p *= fields[i].coeffs[e.ins[i] as usize].norm();
            }
            out[e.out as usize] += p;
        }
        Ok(out)
    }
}

/// One-shot evaluation of a term at time `t` with threshold `m`.
pub fn eval_term(term: TermId, fields: &[&SpectralField], t: f64, m: f64) -> Result<SpectralField> {
    let grid = fields
        .first()
        .ok_or_else(|| BolabError::InvalidArgument("no fields".into()))?
        .grid;
    TermTable::build(term, grid, m).eval(fields, t)
}

pub fn eval_majorant(term: TermId, fields: &[&SpectralField], m: f64) -> Result<Vec<f64>> {
    let grid = fields
        .first()
        .ok_or_else(|| BolabError::InvalidArgument("no fields".into()))?
        .grid;
    TermTable::build(term, grid, m).eval_majorant(fields)
}

/// Untwist `ṽ ↦ e^{-itω(k)} ṽ` so that phases factor mode by mode.
fn untwisted(f: &SpectralField, t: f64) -> Vec<(f64, Complex64)> {
    let g = f.grid;
    let top = g.max_mode();
    (-top..=top)
        .map(|n| {
            let k = n as f64 * g.dk();
            (k, f.coeff(n) * Complex64::from_polar(1.0, -t * omega(k)))
        })
        .collect()
}

/// Grouped evaluation of `N⁽³⁾ⱼ,ₖ`.
///
/// The merged pair of inputs (`ξ₁₂` for `k = 1`, `ξ₂₃` for `k = 2`, `ξ₃₄` for
/// `k = 3`) is summed first into an auxiliary field, which reduces the
/// quadrilinear sum to a trilinear one. Phases are handled by untwisting the
/// inputs and twisting the output.
pub fn eval_grouped(
    j: u8,
    k: u8,
    fields: &[&SpectralField],
    t: f64,
    m: f64,
) -> Result<SpectralField> {
    if fields.len() != 4 {
        return Err(BolabError::InvalidArgument("N3 terms take four fields".into()));
    }
    let grid = fields[0].grid;
    for f in fields {
        grid.check_same(&f.grid)?;
    }
    let c = Cutoffs { m, mode: grid.mode };
    let dk = grid.dk();
    let top = grid.max_mode();
    let v: Vec<Vec<(f64, Complex64)>> = fields.iter().map(|f| untwisted(f, t)).collect();
    let width = (2 * top + 1) as usize;
    // merged field on modes -2top..=2top
    let gtop = 2 * top;
    let mut g = vec![Complex64::new(0.0, 0.0); (2 * gtop + 1) as usize];
    let (pa, pb) = match k {
        1 => (0, 1),
        2 => (1, 2),
        3 => (2, 3),
        _ => return Err(BolabError::InvalidArgument("k must be 1, 2 or 3".into())),
    };
    for a in 0..width {
        for b in 0..width {
            let (xa, va) = v[pa][a];
            let (xb, vb) = v[pb][b];
            let w = if k == 1 {
                multiplier::k1(&c, xa, xb)
            } else {
                Complex64::new(1.0, 0.0)
            };
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let s = (a as i64 - top) + (b as i64 - top);
            g[(s + gtop) as usize] += w * va * vb;
        }
    }
    let others: Vec<usize> = (0..4).filter(|&i| i != pa && i != pb).collect();
    let mut out = SpectralField::zeros(grid);
    for xi_n in -top..=top {
        let xi = xi_n as f64 * dk;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..width {
            for q in 0..width {
                let (xp, vp) = v[others[0]][p];
                let (xq, vq) = v[others[1]][q];
                let eta_n = xi_n - (p as i64 - top) - (q as i64 - top);
                if eta_n.abs() > gtop {
                    continue;
                }
                let ge = g[(eta_n + gtop) as usize];
                if ge == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let eta = eta_n as f64 * dk;
                let outer = match k {
                    1 => multiplier::n2_0(&c, j as usize, [eta, xp, xq]),
                    2 => multiplier::n2_0(&c, j as usize, [xp, eta, xq]) * Complex64::new(0.0, eta),
                    _ => multiplier::n2_0(&c, j as usize, [xp, xq, eta]) * Complex64::new(0.0, eta),
                };
                acc += outer * vp * vq * ge;
            }
        }
        let idx = grid.index(xi_n).unwrap();
        out.coeffs[idx] = acc * Complex64::from_polar(1.0, t * omega(xi));
    }
    Ok(out)
}
