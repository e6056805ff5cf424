//! Pluggable nonlinearities (f, F) with closed-form antiderivatives, and
//! sampling-based certificates for the structural growth conditions the
//! variational framework assumes:
//!
//! * sign and control:  f(x,t)·t ≥ 0,  F(x,t) ≤ M₀|f(x,t)| for |t| ≥ t₀
//! * critical exponential growth: f/e^{αt²} → 0 for α > α₀, → ∞ for α < α₀
//! * super-exponential mass:  |t|^q F(x,t)/e^{α₀t²} → ∞
//! * Ambrosetti–Rabinowitz type:  f·t ≥ μ₁F − μ₂V(x)t²
//! * fiber monotonicity:  g_p(x,t) = (f − μV t)/|t|^{2p−1} non-decreasing
//! * small-t behaviour:  f = o(t) (p = 2), f = O(t^{s₀}) (p > 2)
//!
//! A "pass" verdict means no violation was found at the sampling resolution;
//! a "fail" always carries a concrete witness (x, t). Exponential-scale
//! ratios are evaluated in log space so that growth-tag checks work far
//! beyond f64 overflow.

use crate::error::{CoreError, Result};
use crate::fields::RandomFieldSpec;
use crate::grid::{self, Grid2D, Potential};
use std::sync::Arc;

/// Built-in (f, F) families. All are autonomous — f(x,t) = f(t) — but the
/// evaluation interface carries the point so x-dependent families can slot
/// in with a declared symmetry.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlinearity {
    /// f(t) = λ t (e^{α₀t²} − 1); critical exponential growth of rate α₀,
    /// F(t) = λ[(e^{α₀t²} − 1)/(2α₀) − t²/2].
    CriticalExp { lambda: f64, alpha0: f64 },
    /// f(t) = b|t|^{q−2}t; F(t) = (b/q)|t|^q. Needs q ≥ 2p in a model with
    /// exponent p.
    SubcriticalPower { b: f64, q_pow: f64 },
    /// f(t) = λ t (e^{β|t|} − 1); subcritical exponential growth,
    /// F(t) = λ[e^{β|t|}(|t|/β − 1/β²) + 1/β² − t²/2].
    SubcriticalExp { lambda: f64, beta: f64 },
}

impl Nonlinearity {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Nonlinearity::CriticalExp { lambda, alpha0 } => {
                if !(lambda > 0.0) || !(alpha0 > 0.0) {
                    return Err(CoreError::OutOfRange(format!(
                        "critical family needs λ > 0 and α₀ > 0, got λ={lambda}, α₀={alpha0}"
                    )));
                }
            }
            Nonlinearity::SubcriticalPower { b, q_pow } => {
                if !(b > 0.0) || !(q_pow >= 2.0) {
                    return Err(CoreError::OutOfRange(format!(
                        "power family needs b > 0 and q ≥ 2, got b={b}, q={q_pow}"
                    )));
                }
            }
            Nonlinearity::SubcriticalExp { lambda, beta } => {
                if !(lambda > 0.0) || !(beta > 0.0) {
                    return Err(CoreError::OutOfRange(format!(
                        "subcritical-exp family needs λ > 0 and β > 0, got λ={lambda}, β={beta}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Growth rate α₀ for the critical family.
    pub fn alpha0(&self) -> Option<f64> {
        match *self {
            Nonlinearity::CriticalExp { alpha0, .. } => Some(alpha0),
            _ => None,
        }
    }

    /// Near-zero exponent: f(t) = O(t^{s₀}) as t → 0.
    pub fn s0(&self) -> f64 {
        match *self {
            Nonlinearity::CriticalExp { .. } => 3.0,
            Nonlinearity::SubcriticalPower { q_pow, .. } => q_pow - 1.0,
            Nonlinearity::SubcriticalExp { .. } => 2.0,
        }
    }

    pub fn f(&self, _x: f64, _y: f64, t: f64) -> f64 {
        match *self {
            Nonlinearity::CriticalExp { lambda, alpha0 } => {
                lambda * t * (alpha0 * t * t).exp_m1()
            }
            Nonlinearity::SubcriticalPower { b, q_pow } => {
                if t == 0.0 {
                    0.0
                } else {
                    b * t.abs().powf(q_pow - 2.0) * t
                }
            }
            Nonlinearity::SubcriticalExp { lambda, beta } => {
                lambda * t * (beta * t.abs()).exp_m1()
            }
        }
    }

    pub fn big_f(&self, _x: f64, _y: f64, t: f64) -> f64 {
        match *self {
            Nonlinearity::CriticalExp { lambda, alpha0 } => {
                lambda * ((alpha0 * t * t).exp_m1() / (2.0 * alpha0) - t * t / 2.0)
            }
            Nonlinearity::SubcriticalPower { b, q_pow } => b / q_pow * t.abs().powf(q_pow),
            Nonlinearity::SubcriticalExp { lambda, beta } => {
                let a = t.abs();
                lambda * ((beta * a).exp() * (a / beta - 1.0 / (beta * beta))
                    + 1.0 / (beta * beta)
                    - t * t / 2.0)
            }
        }
    }

    /// ln f(t) for t > 0, stable far beyond f64 overflow of f itself.
    pub fn log_f(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match *self {
            Nonlinearity::CriticalExp { lambda, alpha0 } => {
                let s = alpha0 * t * t;
                lambda.ln() + t.ln() + s + (-((-s).exp())).ln_1p()
            }
            Nonlinearity::SubcriticalPower { b, q_pow } => b.ln() + (q_pow - 1.0) * t.ln(),
            Nonlinearity::SubcriticalExp { lambda, beta } => {
                let s = beta * t;
                lambda.ln() + t.ln() + s + (-((-s).exp())).ln_1p()
            }
        }
    }

    /// ln F(t) for t > 0 (valid once F(t) > 0).
    pub fn log_big_f(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match *self {
            Nonlinearity::CriticalExp { lambda, alpha0 } => {
                let s = alpha0 * t * t;
                if s < 500.0 {
                    self.big_f(0.0, 0.0, t).ln()
                } else {
                    // F = λ e^s [(1 − e^{−s})/(2α₀) − (t²/2)e^{−s}]
                    lambda.ln() + s - (2.0 * alpha0).ln()
                }
            }
            _ => self.big_f(0.0, 0.0, t).ln(),
        }
    }

    /// Smallest sampled t₀ with |t|^q F(t)/e^{α₀t²} ≥ 1 for all sampled
    /// t ≥ t₀ (the super-exponential mass threshold); None if the scan range
    /// never reaches it.
    pub fn mass_threshold(&self, q: f64) -> Option<f64> {
        let alpha0 = self.alpha0()?;
        let log_ratio = |t: f64| q * t.ln() + self.log_big_f(t) - alpha0 * t * t;
        let mut t0 = None;
        let samples = 4000;
        for j in 0..samples {
            let t = 1e-2 * (1e8_f64 / 1e-2).powf(j as f64 / (samples - 1) as f64);
            if self.big_f(0.0, 0.0, t) > 0.0 && log_ratio(t) >= 0.0 {
                if t0.is_none() {
                    t0 = Some(t);
                }
            } else {
                t0 = None;
            }
        }
        t0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Witness {
    pub x: (f64, f64),
    pub t: f64,
    pub value: f64,
}

/// Outcome of a condition check: verdict, violating points if any, and the
/// extremal sampled ratios that justify the verdict.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub id: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub extremal: Vec<(String, f64)>,
    pub note: Option<String>,
}

impl ConditionReport {
    fn new(id: &str) -> Self {
        ConditionReport {
            id: id.to_string(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            extremal: Vec::new(),
            note: None,
        }
    }
}

/// The condition under test, with its parameters.
#[derive(Debug, Clone, Copy)]
pub enum Condition {
    /// V ≥ 0 everywhere, inf V > 0 on the outer ring.
    V0,
    /// Exponential growth tag (critical if the family has an α₀, else
    /// subcritical decay of f/e^{αt²} for every α).
    GrowthTag,
    /// f·t ≥ 0 and F ≤ M₀|f| for |t| ≥ t₀.
    F2 { m0: f64, t0: f64 },
    /// |t|^q F/e^{α₀t²} → ∞.
    F3 { q: f64 },
    /// f·t ≥ μ₁F − μ₂V(x)t².
    F4 { mu1: f64, mu2: f64 },
    /// g_p(x,t) = (f − μV t)/|t|^{2p−1} non-decreasing on each half-line
    /// (μ = 1 when p = 2).
    F4PrimeMono { mu: f64 },
    /// f·t > 0 for t ≠ 0 and f·t ≥ μF for |t| ≥ t₁.
    F4PrimeAr { mu: f64, t1: f64 },
    /// f = o(t) at 0 for p = 2; f = O(t^{s₀}) for p > 2 (s taken = s₀).
    F5 { s0: f64 },
}

impl Condition {
    pub fn id(&self) -> String {
        match self {
            Condition::V0 => "V0".into(),
            Condition::GrowthTag => "F1".into(),
            Condition::F2 { .. } => "F2".into(),
            Condition::F3 { .. } => "F3".into(),
            Condition::F4 { .. } => "F4".into(),
            Condition::F4PrimeMono { .. } => "F4prime_mono".into(),
            Condition::F4PrimeAr { .. } => "F4prime_AR".into(),
            Condition::F5 { .. } => "F5".into(),
        }
    }
}

/// Sampling box and tolerances for condition checks.
#[derive(Debug, Clone, Copy)]
pub struct CheckParams {
    pub t_max: f64,
    pub t_samples: usize,
    pub x_samples: usize,
    pub p: f64,
    pub check_tol: f64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            t_max: 20.0,
            t_samples: 10_000,
            x_samples: 8,
            p: 2.0,
            check_tol: 1e-9,
        }
    }
}

/// Log-spaced t-grid on one side, dense near 0 and near t_max.
fn t_grid(t_max: f64, n: usize) -> Vec<f64> {
    let lo: f64 = 1e-8 * t_max;
    (0..n)
        .map(|j| lo * (t_max / lo).powf(j as f64 / (n - 1) as f64))
        .collect()
}

fn x_grid(grid: &Arc<Grid2D>, count: usize) -> Vec<(f64, f64)> {
    let n = grid.size();
    let step = (n / count).max(1);
    let mut pts = Vec::new();
    for ix in (step / 2..n).step_by(step) {
        for iy in (step / 2..n).step_by(step) {
            pts.push((grid.coord(ix), grid.coord(iy)));
        }
    }
    pts
}

/// Run a sampling certificate for one condition. Quantifiers over ℝ²×ℝ are
/// replaced by dense sampled sweeps; see the report's extremal entries for
/// the margins observed.
pub fn check_condition(
    nl: &Nonlinearity,
    v: &Potential,
    grid: &Arc<Grid2D>,
    cond: Condition,
    params: &CheckParams,
) -> ConditionReport {
    let mut rep = ConditionReport::new(&cond.id());
    let ts = t_grid(params.t_max, params.t_samples);
    let xs = x_grid(grid, params.x_samples);
    match cond {
        Condition::V0 => match v.validate(grid) {
            Ok(()) => {
                let ring_min = (0..grid.size())
                    .map(|i| v.eval(grid.coord(i), grid.coord(0)))
                    .fold(f64::INFINITY, f64::min);
                rep.extremal.push(("ring_inf".into(), ring_min));
            }
            Err(e) => {
                rep.verdict = Verdict::Fail;
                rep.note = Some(e.to_string());
            }
        },
        Condition::GrowthTag => match nl.alpha0() {
            Some(a0) => {
                let t = 10.0;
                let hi = nl.log_f(t) - 1.2 * a0 * t * t;
                let lo = nl.log_f(t) - 0.8 * a0 * t * t;
                rep.extremal.push(("log_ratio_above".into(), hi));
                rep.extremal.push(("log_ratio_below".into(), lo));
                if !(hi < (1e-6_f64).ln() && lo > (1e6_f64).ln()) {
                    rep.verdict = Verdict::Fail;
                    rep.witnesses.push(Witness {
                        x: (0.0, 0.0),
                        t,
                        value: hi,
                    });
                }
            }
            None => {
                // subcritical: f/e^{αt²} must decay for small α too
                let alpha = 0.05;
                let scale = match nl {
                    Nonlinearity::SubcriticalExp { beta, .. } => beta / alpha + 10.0,
                    _ => 10.0,
                };
                let probes = [scale, 2.0 * scale, 4.0 * scale];
                let ratios: Vec<f64> =
                    probes.iter().map(|&t| nl.log_f(t) - alpha * t * t).collect();
                rep.extremal
                    .push(("log_ratio_tail".into(), ratios[2]));
                if !(ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] < -10.0) {
                    rep.verdict = Verdict::Fail;
                    rep.witnesses.push(Witness {
                        x: (0.0, 0.0),
                        t: probes[2],
                        value: ratios[2],
                    });
                }
            }
        },
        Condition::F2 { m0, t0 } => {
            let mut sup_ratio: f64 = 0.0;
            for &t in ts.iter() {
                for sign in [1.0, -1.0] {
                    let tt = sign * t;
                    let f = nl.f(0.0, 0.0, tt);
                    if f * tt < 0.0 {
                        rep.verdict = Verdict::Fail;
                        rep.witnesses.push(Witness {
                            x: (0.0, 0.0),
                            t: tt,
                            value: f * tt,
                        });
                    }
                    if tt.abs() >= t0 {
                        let big = nl.big_f(0.0, 0.0, tt);
                        if f.abs() > 0.0 {
                            sup_ratio = sup_ratio.max(big / f.abs());
                        }
                        if big > m0 * f.abs() + params.check_tol {
                            rep.verdict = Verdict::Fail;
                            rep.witnesses.push(Witness {
                                x: (0.0, 0.0),
                                t: tt,
                                value: big - m0 * f.abs(),
                            });
                        }
                    }
                }
            }
            rep.extremal.push(("sup_F_over_absf".into(), sup_ratio));
        }
        Condition::F3 { q } => match nl.mass_threshold(q) {
            Some(t0) => {
                rep.extremal.push(("threshold_t0".into(), t0));
            }
            None => {
                rep.verdict = if nl.alpha0().is_some() {
                    Verdict::Inconclusive
                } else {
                    Verdict::Inconclusive
                };
                rep.note = Some("ratio never reached 1 on the scan range".into());
            }
        },
        Condition::F4 { mu1, mu2 } => {
            let mut min_margin = f64::INFINITY;
            for &(x, y) in &xs {
                let vx = v.eval(x, y);
                for &t in &ts {
                    for sign in [1.0, -1.0] {
                        let tt = sign * t;
                        let f = nl.f(x, y, tt);
                        let big = nl.big_f(x, y, tt);
                        if !f.is_finite() || !big.is_finite() {
                            continue;
                        }
                        let margin = f * tt - mu1 * big + mu2 * vx * tt * tt;
                        let scale = (f * tt).abs().max(mu1 * big.abs()).max(1.0);
                        min_margin = min_margin.min(margin / scale);
                        if margin < -params.check_tol * scale {
                            if rep.witnesses.len() < 4 {
                                rep.witnesses.push(Witness {
                                    x: (x, y),
                                    t: tt,
                                    value: margin,
                                });
                            }
                            rep.verdict = Verdict::Fail;
                        }
                    }
                }
            }
            rep.extremal.push(("min_margin_rel".into(), min_margin));
        }
        Condition::F4PrimeMono { mu } => {
            let two_p_minus_1 = 2.0 * params.p - 1.0;
            let mu_eff = if params.p == 2.0 { 1.0 } else { mu };
            let mut min_step = f64::INFINITY;
            for &(x, y) in &xs {
                let vx = v.eval(x, y);
                let g = |t: f64| {
                    (nl.f(x, y, t) - mu_eff * vx * t) / t.abs().powf(two_p_minus_1)
                };
                for side in [1.0, -1.0] {
                    let mut prev: Option<(f64, f64)> = None;
                    for &t in &ts {
                        let tt = side * t;
                        let gv = g(tt);
                        if !gv.is_finite() {
                            continue;
                        }
                        if let Some((pt, pg)) = prev {
                            // sweep runs outward from 0 on each side: t
                            // increases on (0,∞), decreases on (−∞,0), so
                            // non-decreasing g means gv ≥ pg for side > 0
                            // and gv ≤ pg for side < 0.
                            let step = if side > 0.0 { gv - pg } else { pg - gv };
                            let scale = gv.abs().max(pg.abs()).max(1.0);
                            min_step = min_step.min(step / scale);
                            if step < -1e-7 * scale {
                                rep.verdict = Verdict::Fail;
                                if rep.witnesses.len() < 4 {
                                    rep.witnesses.push(Witness {
                                        x: (x, y),
                                        t: tt,
                                        value: step,
                                    });
                                }
                            }
                            let _ = pt;
                        }
                        prev = Some((tt, gv));
                    }
                }
            }
            rep.extremal.push(("min_monotone_step_rel".into(), min_step));
        }
        Condition::F4PrimeAr { mu, t1 } => {
            let mut min_margin = f64::INFINITY;
            for &t in &ts {
                for sign in [1.0, -1.0] {
                    let tt = sign * t;
                    let f = nl.f(0.0, 0.0, tt);
                    if f * tt <= 0.0 && tt.abs() > 1e-12 {
                        rep.verdict = Verdict::Fail;
                        rep.witnesses.push(Witness {
                            x: (0.0, 0.0),
                            t: tt,
                            value: f * tt,
                        });
                    }
                    if tt.abs() >= t1 {
                        let big = nl.big_f(0.0, 0.0, tt);
                        if !f.is_finite() || !big.is_finite() {
                            continue;
                        }
                        let margin = f * tt - mu * big;
                        let scale = (f * tt).abs().max(1.0);
                        min_margin = min_margin.min(margin / scale);
                        if margin < -params.check_tol * scale {
                            rep.verdict = Verdict::Fail;
                            if rep.witnesses.len() < 4 {
                                rep.witnesses.push(Witness {
                                    x: (0.0, 0.0),
                                    t: tt,
                                    value: margin,
                                });
                            }
                        }
                    }
                }
            }
            rep.extremal.push(("min_AR_margin_rel".into(), min_margin));
        }
        Condition::F5 { s0 } => {
            let small: Vec<f64> = (0..200)
                .map(|j| 1e-8 * (1e-1_f64 / 1e-8).powf(j as f64 / 199.0))
                .collect();
            if params.p == 2.0 {
                // f = o(t): |f/t| must vanish with t
                let r_at = |t: f64| (nl.f(0.0, 0.0, t) / t).abs();
                let head = r_at(small[0]);
                let tail = r_at(*small.last().unwrap());
                rep.extremal.push(("f_over_t_at_0".into(), head));
                if !(head <= 1e-6 * tail.max(1.0) || head < 1e-12) {
                    rep.verdict = Verdict::Fail;
                    rep.witnesses.push(Witness {
                        x: (0.0, 0.0),
                        t: small[0],
                        value: head,
                    });
                }
            } else {
                // f = O(t^{s₀}): |f|/t^{s₀} bounded near 0 (s taken = s₀)
                let sup = small
                    .iter()
                    .map(|&t| (nl.f(0.0, 0.0, t).abs() / t.powf(s0)))
                    .fold(0.0f64, f64::max);
                rep.extremal.push(("sup_f_over_ts0".into(), sup));
                rep.note = Some("near-zero exponent s taken equal to s0".into());
                if !sup.is_finite() || sup > 1e8 {
                    rep.verdict = Verdict::Fail;
                }
            }
        }
    }
    rep
}

/// Empirical upper estimate of γ = inf ‖u‖/‖u‖_{H¹}: minimize the Rayleigh
/// ratio over seeded random smooth fields; for constant V the analytic value
/// min(1, √v0) is included.
pub fn estimate_gamma(v: &Potential, grid: &Arc<Grid2D>, samples: usize) -> Result<f64> {
    if samples == 0 {
        return Err(CoreError::OutOfRange("estimate_gamma needs samples ≥ 1".into()));
    }
    let one = Potential::Constant { v0: 1.0 };
    let mut best = f64::INFINITY;
    for seed in 0..samples as u64 {
        let u = RandomFieldSpec::generate(0xBEEF ^ seed, grid.half_width() / 4.0).sample(grid);
        let num = grid::norm_h(&u, v)?;
        let den = grid::norm_h(&u, &one)?;
        if den > 0.0 {
            best = best.min(num / den);
        }
    }
    if let Potential::Constant { v0 } = *v {
        best = best.min(1.0_f64.min(v0.sqrt()));
    }
    Ok(best)
}

/// Sampled supremum of F(x,t)/t² over 0 < |t| ≤ t1.
pub fn m_t1(nl: &Nonlinearity, t1: f64) -> Result<f64> {
    if !(t1 > 0.0) {
        return Err(CoreError::OutOfRange(format!("m_t1 needs t1 > 0, got {t1}")));
    }
    let mut sup: f64 = 0.0;
    let n = 10_000;
    for j in 0..n {
        let t = 1e-6 * t1 * (1e6_f64).powf(j as f64 / (n - 1) as f64);
        for sign in [1.0, -1.0] {
            let tt = sign * t;
            sup = sup.max(nl.big_f(0.0, 0.0, tt) / (tt * tt));
        }
    }
    Ok(sup)
}
