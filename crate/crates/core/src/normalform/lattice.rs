//! Exhaustive checks of the resonance algebra and the multipliers on integer
//! lattices of the `2π` torus.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::multiplier::{self, Cutoffs};
use super::phase::{inner_branch, omega2, omega3, res, telescoped};
use super::TermId;

/// Tally of one family of exact checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
}

impl CheckCount {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked: 0,
            violations: 0,
        }
    }

    fn merge(mut self, o: &CheckCount) -> Self {
        self.checked += o.checked;
        self.violations += o.violations;
        self
    }

    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
    }
}

/// Empirical constant `sup |m| / template` of a multiplier bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstant {
    pub name: String,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeReport {
    pub max_freq: i64,
    pub m: f64,
    /// Frequency bound of the multiplier scans, `min(max_freq, 32)`.
    pub multiplier_max_freq: i64,
    pub checks: Vec<CheckCount>,
    /// Largest relative gap between compositional and closed-form multipliers.
    pub expanded_max_rel_err: f64,
    pub bounds: Vec<BoundConstant>,
    pub runtime_s: f64,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0) && self.expanded_max_rel_err <= 1e-12
    }
}

fn range(max: i64) -> Vec<i64> {
    (-max..=max).collect()
}

fn merge_all(parts: Vec<Vec<CheckCount>>, names: &[String]) -> Vec<CheckCount> {
    let mut acc: Vec<CheckCount> = names.iter().map(|n| CheckCount::new(n.clone())).collect();
    for p in parts {
        for (a, b) in acc.iter_mut().zip(&p) {
            *a = a.clone().merge(b);
        }
    }
    acc
}

/// On `supp σ` (torus cutoffs): `Ω(ξ, ξ₁, ξ₂) = 2ξξ₂` and `Ω < 0`.
pub fn check_factorization(max: i64) -> CheckCount {
    let xs = range(max);
    xs.par_iter()
        .map(|&x1| {
            let mut c = CheckCount::new("factorization");
            for x2 in -max..=max {
                let xi = x1 + x2;
                if xi > 1 && x1 > 1 && x2 < 0 {
                    let om = res(xi, x1, x2);
                    c.record(om == 2 * xi * x2 && om < 0);
                }
            }
            c
        })
        .reduce(|| CheckCount::new("factorization"), |a, b| a.merge(&b))
}

/// Factored second-step phases on the sign supports of `m⁽²⁾ⱼ`:
/// `2ξξ₃ + 2ξ₁₂ξ₂`, `2ξξ₂₃ - 2ξ₂ξ₃`, `2ξ₁₂ξ₂₃`.
pub fn check_second_step_phases(max: i64) -> Vec<CheckCount> {
    let names: Vec<String> = (1..=3).map(|j| format!("omega2_{j}_factored")).collect();
    let xs = range(max);
    let parts = xs
        .par_iter()
        .map(|&x1| {
            let mut c: Vec<CheckCount> = names.iter().map(|n| CheckCount::new(n.clone())).collect();
            for x2 in -max..=max {
                for x3 in -max..=max {
                    let xi = x1 + x2 + x3;
                    let x12 = x1 + x2;
                    let x23 = x2 + x3;
                    let om1 = omega2(1, [x1, x2, x3]);
                    let om2 = omega2(2, [x1, x2, x3]);
                    if xi > 1 && x12 > 1 && x1 > 1 && x2 < 0 && x3 < 0 {
                        c[0].record(om1 == 2 * xi * x3 + 2 * x12 * x2);
                    }
                    if xi > 1 && x1 > 1 && x2 < 0 && x3 < 0 {
                        c[1].record(om2 == 2 * xi * x23 - 2 * x2 * x3);
                    }
                    if xi > 1 && x1 > 1 && x2 < 0 && x3 >= 0 && x23 < 0 {
                        c[2].record(omega2(3, [x1, x2, x3]) == 2 * x12 * x23);
                    }
                }
            }
            c
        })
        .collect();
    merge_all(parts, &names)
}

/// Every `Ω⁽²⁾ⱼ` and `Ω⁽³⁾ⱼ,ₖ` composition equals `ω(ξ) - Σω(ξᵢ)`.
pub fn check_additivity(max: i64) -> Vec<CheckCount> {
    let mut names: Vec<String> = (1..=3).map(|j| format!("omega2_{j}_additive")).collect();
    for j in 1..=3 {
        for k in 1..=3 {
            names.push(format!("omega3_{j}{k}_additive"));
        }
    }
    let xs = range(max);
    let parts = xs
        .par_iter()
        .map(|&x1| {
            let mut c: Vec<CheckCount> = names.iter().map(|n| CheckCount::new(n.clone())).collect();
            for x2 in -max..=max {
                for x3 in -max..=max {
                    let t3 = telescoped(&[x1, x2, x3]);
                    for j in 1..=3 {
                        c[j - 1].record(omega2(j, [x1, x2, x3]) == t3);
                    }
                    let mut bad = [0u64; 9];
                    for x4 in -max..=max {
                        let x = [x1, x2, x3, x4];
                        let t4 = telescoped(&x);
                        for j in 1..=3 {
                            for k in 1..=3 {
                                bad[(j - 1) * 3 + k - 1] += (omega3(j, k, x) != t4) as u64;
                            }
                        }
                    }
                    let n = (2 * max + 1) as u64;
                    for (i, b) in bad.iter().enumerate() {
                        c[3 + i].checked += n;
                        c[3 + i].violations += b;
                    }
                }
            }
            c
        })
        .collect();
    merge_all(parts, &names)
}

/// The three-branch formula for `Ω(ξ₂₃, ξ₂, ξ₃)` on `ξ₂₃ < 0`.
pub fn check_branches(max: i64) -> CheckCount {
    let mut c = CheckCount::new("inner_branches");
    for x2 in -max..=max {
        for x3 in -max..=max {
            if let Some(b) = inner_branch(x2, x3) {
                c.record(b == res(x2 + x3, x2, x3));
            }
        }
    }
    c
}

const MULTIPLIER_CAP: i64 = 32;

type Ineq = fn(&[i64; 5]) -> bool;

/// Frequency inequalities on the support of each term, indexed `[ξ, ξ₁, …]`.
fn inequalities() -> Vec<(TermId, &'static str, Ineq)> {
    vec![
        (TermId::N3(3, 3), "xi<x1, |x234|<x1", |v| {
            v[0] < v[1] && (v[2] + v[3] + v[4]).abs() < v[1]
        }),
        (TermId::N3(2, 3), "|x2|,|x34|<|x234|<x1, xi<x1", |v| {
            let x234 = (v[2] + v[3] + v[4]).abs();
            v[2].abs() < x234 && (v[3] + v[4]).abs() < x234 && x234 < v[1] && v[0] < v[1]
        }),
        (TermId::N3(1, 3), "|x34|<x12, xi<x12<x1, |x2|<x1", |v| {
            let x12 = v[1] + v[2];
            (v[3] + v[4]).abs() < x12 && v[0] < x12 && x12 < v[1] && v[2].abs() < v[1]
        }),
        (TermId::N3(3, 2), "xi<x1, x4<|x23|", |v| {
            v[0] < v[1] && v[4] < (v[2] + v[3]).abs()
        }),
        (TermId::N3(2, 2), "|x23|<|x234|<x1, xi<x1", |v| {
            let x234 = (v[2] + v[3] + v[4]).abs();
            (v[2] + v[3]).abs() < x234 && x234 < v[1] && v[0] < v[1]
        }),
        (TermId::N3(1, 2), "|x23|<x1, xi<x123, |x4|<x123", |v| {
            let x123 = v[1] + v[2] + v[3];
            (v[2] + v[3]).abs() < v[1] && v[0] < x123 && v[4].abs() < x123
        }),
        (TermId::N3(3, 1), "|x2|<=x1, x4<|x3|, xi<x12", |v| {
            v[2].abs() <= v[1] && v[4] < v[3].abs() && v[0] < v[1] + v[2]
        }),
        (TermId::N3(2, 1), "xi<=x1, |x2|<=x1, xi<x12", |v| {
            v[0] <= v[1] && v[2].abs() <= v[1] && v[0] < v[1] + v[2]
        }),
        (TermId::N3(1, 1), "xi<x123<x12<x1, |x4|<x123", |v| {
            let x12 = v[1] + v[2];
            let x123 = x12 + v[3];
            v[0] < x123 && x123 < x12 && x12 < v[1] && v[4].abs() < x123
        }),
    ]
}

#[derive(Clone, Debug)]
struct MultAcc {
    checks: Vec<CheckCount>,
    rel: f64,
    bounds: Vec<f64>,
}

fn bound_names() -> Vec<String> {
    let mut v: Vec<String> = vec![
        "N1: |m| <= C<xi>".into(),
        "N1_0: |m| <= C<x1>^-1".into(),
        "m2_1: |m| <= C|x2|/x1".into(),
        "m2_2: |m| <= C".into(),
        "m2_3: |m| <= C".into(),
        "N2_leM: |m| <= C".into(),
        "m3_33 (x34 <= |x12|): |m| <= C<x1>^-1".into(),
        "m3_33 (x34 > |x12|): |m| <= C<x12>^-1".into(),
        "m3_13: |m| <= C<x1>^-1".into(),
    ];
    for t in TermId::third_step() {
        v.push(format!("{t}: |m| <= C"));
    }
    v
}

fn jb(x: i64) -> f64 {
    1.0 + x.abs() as f64
}

/// Compositional against closed-form multipliers, support inequalities and
/// empirical bound constants for `|ξᵢ| ≤ max`.
pub fn check_multipliers(max: i64, m: f64) -> (Vec<CheckCount>, f64, Vec<BoundConstant>) {
    let c = Cutoffs::torus(m);
    let ineqs = inequalities();
    let mut names: Vec<String> = vec![
        "sigma support: xi<x1, |x2|<x1".into(),
        "m2_1 support: xi<x12<x1, |x3|<x12, |x2|<x1".into(),
        "m2_2/m2_3 support: xi<x1, |x23|<x1".into(),
        "m2 expanded support".into(),
        "m3 expanded support".into(),
    ];
    for (t, s, _) in &ineqs {
        names.push(format!("{t} support: {s}"));
    }
    let bnames = bound_names();
    let nb = bnames.len();
    let xs: Vec<i64> = (2..=max).collect();
    let agree = |a: Complex64, b: Complex64| -> (bool, f64) {
        let z = Complex64::new(0.0, 0.0);
        if (a == z) != (b == z) {
            return (false, 0.0);
        }
        let scale = a.norm().max(b.norm());
        if scale == 0.0 {
            return (true, 0.0);
        }
        (true, (a - b).norm() / scale)
    };
    let parts: Vec<MultAcc> = xs
        .par_iter()
        .map(|&x1| {
            let mut acc = MultAcc {
                checks: names.iter().map(|n| CheckCount::new(n.clone())).collect(),
                rel: 0.0,
                bounds: vec![0.0; nb],
            };
            let f1 = x1 as f64;
            for x2 in -max..=max {
                let f2 = x2 as f64;
                let xi2 = x1 + x2;
                if multiplier::sigma(&c, f1, f2) != 0.0 {
                    acc.checks[0].record(xi2 < x1 && x2.abs() < x1);
                    let k = multiplier::k1(&c, f1, f2).norm();
                    acc.bounds[0] = acc.bounds[0].max(k / jb(xi2));
                    let b = multiplier::n1_0(&c, f1, f2).norm();
                    acc.bounds[1] = acc.bounds[1].max(b * jb(x1));
                }
                for x3 in -max..=max {
                    let f3 = x3 as f64;
                    let x = [f1, f2, f3];
                    let xi = x1 + x2 + x3;
                    let x12 = x1 + x2;
                    let x23 = x2 + x3;
                    for j in 1..=3 {
                        let a = multiplier::m2(&c, j, x);
                        let b = multiplier::m2_expanded(&c, j, x);
                        let (ok, r) = agree(a, b);
                        acc.checks[3].record(ok);
                        acc.rel = acc.rel.max(r);
                        if a == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        if j == 1 {
                            acc.checks[1].record(
                                xi < x12 && x12 < x1 && x3.abs() < x12 && x2.abs() < x1,
                            );
                            acc.bounds[2] = acc.bounds[2].max(a.norm() * f1 / f2.abs());
                        } else {
                            acc.checks[2].record(xi < x1 && x23.abs() < x1);
                            acc.bounds[1 + j] = acc.bounds[1 + j].max(a.norm());
                        }
                    }
                    let a = multiplier::n2_le_m(&c, x);
                    let (ok, r) = agree(a, multiplier::n2_le_m_expanded(&c, x));
                    acc.checks[3].record(ok);
                    acc.rel = acc.rel.max(r);
                    acc.bounds[5] = acc.bounds[5].max(a.norm());
                    for x4 in -max..=max {
                        let x = [f1, f2, f3, x4 as f64];
                        let v = [x1 + x2 + x3 + x4, x1, x2, x3, x4];
                        for (ti, (t, _, pred)) in ineqs.iter().enumerate() {
                            let TermId::N3(j, k) = *t else { unreachable!() };
                            let a = multiplier::m3(&c, j as usize, k as usize, x);
                            let b = multiplier::m3_expanded(&c, j as usize, k as usize, x);
                            let (ok, r) = agree(a, b);
                            acc.checks[4].record(ok);
                            acc.rel = acc.rel.max(r);
                            if a == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            acc.checks[5 + ti].record(pred(&v));
                            let bi = 9 + (j as usize - 1) * 3 + (k as usize - 1);
                            acc.bounds[bi] = acc.bounds[bi].max(a.norm());
                            if (j, k) == (3, 3) {
                                let x34 = x3 + x4;
                                if x34 <= x12.abs() {
                                    acc.bounds[6] = acc.bounds[6].max(a.norm() * jb(x1));
                                } else {
                                    acc.bounds[7] = acc.bounds[7].max(a.norm() * jb(x12));
                                }
                            }
                            if (j, k) == (1, 3) {
                                acc.bounds[8] = acc.bounds[8].max(a.norm() * jb(x1));
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut checks: Vec<CheckCount> = names.iter().map(|n| CheckCount::new(n.clone())).collect();
    let mut rel: f64 = 0.0;
    let mut bounds = vec![0.0f64; nb];
    for p in &parts {
        for (a, b) in checks.iter_mut().zip(&p.checks) {
            *a = a.clone().merge(b);
        }
        rel = rel.max(p.rel);
        for (a, b) in bounds.iter_mut().zip(&p.bounds) {
            *a = a.max(*b);
        }
    }
    let bounds = bnames
        .into_iter()
        .zip(bounds)
        .map(|(name, constant)| BoundConstant { name, constant })
        .collect();
    (checks, rel, bounds)
}

/// Run every lattice check with `|ξᵢ| ≤ max_freq` and threshold `m`.
///
/// The quadrilinear multiplier scans are capped at `|ξᵢ| ≤ 32`.
pub fn verify_lattice(max_freq: i64, m: f64) -> LatticeReport {
    let start = Instant::now();
    let mut checks = vec![check_factorization(max_freq)];
    checks.extend(check_second_step_phases(max_freq));
    checks.extend(check_additivity(max_freq));
    checks.push(check_branches(max_freq));
    let mmax = max_freq.min(MULTIPLIER_CAP);
    let (mc, rel, bounds) = check_multipliers(mmax, m);
    checks.extend(mc);
    LatticeReport {
        max_freq,
        m,
        multiplier_max_freq: mmax,
        checks,
        expanded_max_rel_err: rel,
        bounds,
        runtime_s: start.elapsed().as_secs_f64(),
    }
}
