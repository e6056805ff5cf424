//! The energy functional and its discrete Gâteaux derivative:
//!
//! ```text
//!   Φ(u)        = ½‖u‖² + (1/4pπ) I₀(u) − ∫ F(x,u) dx
//!   ⟨Φ′(u), v⟩  = ⟨u,v⟩ + (1/2π) A₀(|u|^p, |u|^{p−2}u v) − ∫ f(x,u) v dx
//! ```
//!
//! The gradient field g satisfies ∫ g·v = ⟨Φ′(u), v⟩ for every grid field v,
//! to roundoff: g = −Δ_h u + V u + φ_u |u|^{p−2}u − f(x,u), where −Δ_h is the
//! exact adjoint composition of the centered differences and φ_u the Newton
//! potential of |u|^p with matched singular-cell treatment.
//!
//! Also here: the fiber machinery along rays t ↦ Φ(tu) with the polynomial
//! g(t) = t^{2p} − pt² + p − 1 (fiber inequality and uniqueness), the
//! Ambrosetti–Rabinowitz combination bound, the pointwise inequality
//! (1/2p)f·t − F ≥ (μ(1−p)/2p)V t², and the calibrated small-ball lower
//! bound Φ(u) ≥ ¼‖u‖² − C₃‖u‖³ − C₄‖u‖^{2p}.

use crate::error::{CoreError, Result};
use crate::fields;
use crate::grid::{self, GridField, Potential};
use crate::model::Model;
use crate::nonlinearity::Nonlinearity;
use std::f64::consts::PI;

/// The three terms of Φ(u) and their sum.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBreakdown {
    /// ½‖u‖²
    pub quadratic: f64,
    /// (1/4pπ) I₀(u)
    pub nonlocal: f64,
    /// ∫ F(x,u) dx
    pub potential_term: f64,
    /// quadratic + nonlocal − potential_term
    pub total: f64,
}

/// Weighted-residual diagnostic for critical-point searches:
/// ρ = ‖g‖₂ · (1 + ‖u‖ + ‖u‖_*), a grid proxy for ‖Φ′‖(1 + ‖u‖_{X_p}).
#[derive(Debug, Clone, Copy)]
pub struct CeramiDiagnostic {
    pub iter: usize,
    pub phi: f64,
    pub rho: f64,
}

/// |u|^{p−2}u with the continuous extension 0 at u = 0.
fn signed_pow(u: f64, p: f64) -> f64 {
    if p == 2.0 {
        u
    } else if u == 0.0 {
        0.0
    } else {
        u.abs().powf(p - 2.0) * u
    }
}

/// ½ ∫ (|∇_h u|² + V u²) using the sampled potential.
fn quadratic_half(u: &GridField, v_samples: &GridField) -> f64 {
    let gx = grid::diff_x(u);
    let gy = grid::diff_y(u);
    let mut total = 0.0;
    let n = u.grid().size();
    for ix in 0..n {
        let mut row = 0.0;
        for iy in 0..n {
            let k = u.grid().idx(ix, iy);
            let uv = u.values()[k];
            row += gx.values()[k] * gx.values()[k]
                + gy.values()[k] * gy.values()[k]
                + v_samples.values()[k] * (uv * uv);
        }
        total += row;
    }
    0.5 * total * u.grid().cell_area()
}

/// ∫ F(x, s·u) dx; −∞ when the integrand overflows (large rays).
fn potential_integral(u: &GridField, scale: f64, model: &Model) -> f64 {
    let g = u.grid();
    let n = g.size();
    let nl = model.nonlinearity();
    let mut total = 0.0;
    for ix in 0..n {
        let x = g.coord(ix);
        let mut row = 0.0;
        for iy in 0..n {
            row += nl.big_f(x, g.coord(iy), scale * u.values()[g.idx(ix, iy)]);
        }
        total += row;
    }
    total * g.cell_area()
}

/// ∫ f(x, s·u)·(s·u) dx.
fn f_times_u_integral(u: &GridField, scale: f64, model: &Model) -> f64 {
    let g = u.grid();
    let n = g.size();
    let nl = model.nonlinearity();
    let mut total = 0.0;
    for ix in 0..n {
        let x = g.coord(ix);
        let mut row = 0.0;
        for iy in 0..n {
            let tu = scale * u.values()[g.idx(ix, iy)];
            row += nl.f(x, g.coord(iy), tu) * tu;
        }
        total += row;
    }
    total * g.cell_area()
}

/// −Δ_h u + V u, the Euler–Lagrange operator of the quadratic part.
pub(crate) fn linear_euler_part(u: &GridField, v_samples: &GridField) -> GridField {
    let mut out = grid::neg_laplacian(u);
    for ((o, &vu), &uu) in out
        .values_mut()
        .iter_mut()
        .zip(v_samples.values())
        .zip(u.values())
    {
        *o += vu * uu;
    }
    out
}

/// Φ(u) split into its three terms.
pub fn energy(u: &GridField, model: &Model) -> Result<EnergyBreakdown> {
    u.same_grid(model.v_samples())?;
    if !u.is_finite() {
        return Err(CoreError::NonFinite("energy input"));
    }
    let quadratic = quadratic_half(u, model.v_samples());
    let i0 = model.plans().functional_i(u, model.p(), 0)?;
    let nonlocal = i0 / (4.0 * model.p() * PI);
    let potential_term = potential_integral(u, 1.0, model);
    let total = quadratic + nonlocal - potential_term;
    if !total.is_finite() {
        return Err(CoreError::NonFinite("energy"));
    }
    Ok(EnergyBreakdown {
        quadratic,
        nonlocal,
        potential_term,
        total,
    })
}

/// The gradient field g with ∫ g·v = ⟨Φ′(u), v⟩ for all grid fields v.
pub fn gradient(u: &GridField, model: &Model) -> Result<GridField> {
    Ok(energy_and_gradient(u, model)?.1)
}

/// (Φ(u) breakdown, gradient field) sharing one kernel transform.
pub fn energy_and_gradient(u: &GridField, model: &Model) -> Result<(EnergyBreakdown, GridField)> {
    u.same_grid(model.v_samples())?;
    if !u.is_finite() {
        return Err(CoreError::NonFinite("energy input"));
    }
    let p = model.p();
    let (i0, phi) = model.plans().i0_and_newton(u, p)?;
    let quadratic = quadratic_half(u, model.v_samples());
    let nonlocal = i0 / (4.0 * p * PI);
    let potential_term = potential_integral(u, 1.0, model);
    let total = quadratic + nonlocal - potential_term;
    if !total.is_finite() {
        return Err(CoreError::NonFinite("energy"));
    }
    let mut g = linear_euler_part(u, model.v_samples());
    let grid_ref = u.grid();
    let n = grid_ref.size();
    let nl = model.nonlinearity();
    for ix in 0..n {
        let x = grid_ref.coord(ix);
        for iy in 0..n {
            let k = grid_ref.idx(ix, iy);
            let uv = u.values()[k];
            g.values_mut()[k] +=
                phi.values()[k] * signed_pow(uv, p) - nl.f(x, grid_ref.coord(iy), uv);
        }
    }
    if !g.is_finite() {
        return Err(CoreError::NonFinite("gradient"));
    }
    Ok((
        EnergyBreakdown {
            quadratic,
            nonlocal,
            potential_term,
            total,
        },
        g,
    ))
}

/// ⟨Φ′(u), u⟩ = ‖u‖² + (1/2π) I₀(u) − ∫ f(x,u)u dx.
pub fn dphi_u_u(u: &GridField, model: &Model) -> Result<f64> {
    let q = 2.0 * quadratic_half(u, model.v_samples());
    let i0 = model.plans().functional_i(u, model.p(), 0)?;
    Ok(q + i0 / (2.0 * PI) - f_times_u_integral(u, 1.0, model))
}

/// Ray evaluator: precomputes ‖u‖² and I₀(u) so that Φ(tu) and the Nehari
/// residual ⟨Φ′(tu), tu⟩ cost one pointwise pass per t.
pub struct Fiber<'a> {
    u: &'a GridField,
    model: &'a Model,
    /// ‖u‖²
    pub q: f64,
    /// I₀(u)
    pub i0: f64,
}

impl<'a> Fiber<'a> {
    pub fn new(u: &'a GridField, model: &'a Model) -> Result<Self> {
        let q = 2.0 * quadratic_half(u, model.v_samples());
        let i0 = model.plans().functional_i(u, model.p(), 0)?;
        Ok(Fiber { u, model, q, i0 })
    }

    /// Φ(tu); −∞ once the nonlinear term overflows (large t on a fixed ray).
    pub fn phi(&self, t: f64) -> f64 {
        let p = self.model.p();
        let quad = 0.5 * t * t * self.q;
        let nonloc = t.powf(2.0 * p) / (4.0 * p * PI) * self.i0;
        quad + nonloc - potential_integral(self.u, t, self.model)
    }

    /// ⟨Φ′(tu), tu⟩ = t²‖u‖² + (t^{2p}/2π) I₀(u) − ∫ f(x,tu) tu dx, the
    /// quantity that vanishes exactly on the Nehari set.
    pub fn nehari_residual(&self, t: f64) -> f64 {
        let p = self.model.p();
        t * t * self.q + t.powf(2.0 * p) / (2.0 * PI) * self.i0
            - f_times_u_integral(self.u, t, self.model)
    }
}

/// g(t) = t^{2p} − pt² + p − 1; nonnegative for t ≥ 0 with minimum g(1) = 0.
pub fn g_poly(t: f64, p: f64) -> f64 {
    t.powf(2.0 * p) - p * t * t + p - 1.0
}

/// Fiber inequality surplus
/// Φ(u) − Φ(tu) − ((1−t^{2p})/2p)⟨Φ′(u),u⟩ − (g(t)/2p)‖u‖²,
/// nonnegative (to quadrature accuracy) for monotone-fiber families.
pub fn fiber_gap(u: &GridField, t: f64, model: &Model) -> Result<f64> {
    if t < 0.0 {
        return Err(CoreError::OutOfRange(format!("fiber_gap needs t ≥ 0, got {t}")));
    }
    let fiber = Fiber::new(u, model)?;
    let p = model.p();
    let phi_u = fiber.phi(1.0);
    let phi_tu = fiber.phi(t);
    let dphi = fiber.nehari_residual(1.0);
    Ok(phi_u
        - phi_tu
        - (1.0 - t.powf(2.0 * p)) / (2.0 * p) * dphi
        - g_poly(t, p) / (2.0 * p) * fiber.q)
}

/// Ambrosetti–Rabinowitz combination surplus
/// Φ(u) − λ₀⟨Φ′(u),u⟩ − (½ − μ₂/μ₁ − λ₀)‖u‖² − (λ₀ − 1/μ₁)∫f(x,u)u,
/// nonnegative under f·t ≥ μ₁F − μ₂V t² with λ₀ ∈ (1/μ₁, ½ − μ₂/μ₁).
pub fn ar_combo_bound(
    u: &GridField,
    model: &Model,
    lambda0: f64,
    mu1: f64,
    mu2: f64,
) -> Result<f64> {
    let p = model.p();
    if !(mu1 > 2.0 && mu1 <= 2.0 * p) {
        return Err(CoreError::OutOfRange(format!(
            "ar_combo_bound needs μ₁ ∈ (2, 2p], got {mu1}"
        )));
    }
    if !(mu2 >= 0.0 && mu2 < mu1 / 2.0 - 1.0) {
        return Err(CoreError::OutOfRange(format!(
            "ar_combo_bound needs 0 ≤ μ₂ < μ₁/2 − 1, got {mu2}"
        )));
    }
    if !(lambda0 > 1.0 / mu1 && lambda0 < 0.5 - mu2 / mu1) {
        return Err(CoreError::OutOfRange(format!(
            "λ₀ = {lambda0} outside (1/μ₁, ½ − μ₂/μ₁) = ({}, {})",
            1.0 / mu1,
            0.5 - mu2 / mu1
        )));
    }
    let fiber = Fiber::new(u, model)?;
    let phi = fiber.phi(1.0);
    let dphi = fiber.nehari_residual(1.0);
    let fu = f_times_u_integral(u, 1.0, model);
    Ok(phi
        - lambda0 * dphi
        - (0.5 - mu2 / mu1 - lambda0) * fiber.q
        - (lambda0 - 1.0 / mu1) * fu)
}

/// Pointwise surplus (1/2p)f(x,t)t − F(x,t) − (μ(1−p)/2p)V(x)t², nonnegative
/// under the monotone-fiber condition with parameter μ (μ = 1 when p = 2).
pub fn eq_fiber_pointwise_gap(
    nl: &Nonlinearity,
    v: &Potential,
    x: (f64, f64),
    t: f64,
    p: f64,
    mu: f64,
) -> f64 {
    let f = nl.f(x.0, x.1, t);
    let big = nl.big_f(x.0, x.1, t);
    let vx = v.eval(x.0, x.1);
    (f * t) / (2.0 * p) - big - mu * (1.0 - p) / (2.0 * p) * vx * t * t
}

/// Calibrated constants of the small-ball lower bound
/// Φ(u) ≥ ¼‖u‖² − C₃‖u‖³ − C₄‖u‖^{2p} on ‖u‖ ≤ ρ_max.
#[derive(Debug, Clone, Copy)]
pub struct SmallBallFit {
    pub c3: f64,
    pub c4: f64,
    pub rho_max: f64,
}

fn calibrate_small_ball(model: &Model) -> Result<SmallBallFit> {
    let rho_max = model.small_ball_radius();
    let u0 = fields::gaussian(model.grid(), 0.0, 0.0, 0.6, 1.0);
    let n0 = grid::norm_h(&u0, model.potential())?;
    let unit = u0.scaled(1.0 / n0);
    let mut pts = Vec::new();
    for j in 0..32 {
        let s = 0.02 * (0.98f64 / 0.02).powf(j as f64 / 31.0);
        let c = s * rho_max;
        let u = unit.scaled(c);
        let norm = grid::norm_h(&u, model.potential())?;
        let phi = energy(&u, model)?.total;
        pts.push((norm, norm * norm / 4.0 - phi));
    }
    let p2 = 2.0 * model.p();
    let mut c3: f64 = 0.0;
    for &(n, d) in pts.iter().filter(|(n, _)| *n <= rho_max / 2.0) {
        c3 = c3.max(d / (n * n * n));
    }
    let mut c4: f64 = 0.0;
    for &(n, d) in &pts {
        c4 = c4.max((d - c3 * n * n * n) / n.powf(p2));
    }
    let fit = SmallBallFit {
        c3: c3.max(0.0),
        c4: c4.max(0.0),
        rho_max,
    };
    // the fit must reproduce the sweep it was built from
    for &(n, d) in &pts {
        let rhs = fit.c3 * n.powi(3) + fit.c4 * n.powf(p2);
        if d > rhs + 1e-9 * (1.0 + d.abs()) {
            return Err(CoreError::OutOfRange(
                "small-ball calibration failed to dominate its own sweep".into(),
            ));
        }
    }
    Ok(fit)
}

pub fn small_ball_fit(model: &Model) -> Result<SmallBallFit> {
    if let Some(fit) = model.small_ball.get() {
        return Ok(*fit);
    }
    let fit = calibrate_small_ball(model)?;
    Ok(*model.small_ball.get_or_init(|| fit))
}

/// (Φ(u), ¼‖u‖² − C₃‖u‖³ − C₄‖u‖^{2p}) with the model's calibrated C₃, C₄;
/// errors outside the regime ‖u‖ ≤ ρ_max.
pub fn small_ball_bound(u: &GridField, model: &Model) -> Result<(f64, f64)> {
    let fit = small_ball_fit(model)?;
    let n = grid::norm_h(u, model.potential())?;
    if n > fit.rho_max * (1.0 + 1e-12) {
        return Err(CoreError::OutOfRange(format!(
            "small_ball_bound needs ‖u‖ ≤ {}, got {n}",
            fit.rho_max
        )));
    }
    let phi = energy(u, model)?.total;
    let rhs = n * n / 4.0 - fit.c3 * n.powi(3) - fit.c4 * n.powf(2.0 * model.p());
    Ok((phi, rhs))
}

/// Largest value of the calibrated small-ball minorant over ρ ∈ (0, ρ_max):
/// a computable positive floor κ₀ for mountain-pass levels.
pub fn small_ball_floor(model: &Model) -> Result<f64> {
    let fit = small_ball_fit(model)?;
    let p2 = 2.0 * model.p();
    let mut best: f64 = 0.0;
    for j in 1..=2000 {
        let r = fit.rho_max * j as f64 / 2000.0;
        best = best.max(r * r / 4.0 - fit.c3 * r.powi(3) - fit.c4 * r.powf(p2));
    }
    Ok(best)
}
