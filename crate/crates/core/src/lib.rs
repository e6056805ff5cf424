//! Numerical variational toolkit for the planar Schrödinger–Poisson system
//!
//! ```text
//!   -Δu + V(x)u + φ(x)|u|^{p-2}u = f(x,u),   Δφ = |u|^p   in ℝ²,  p ≥ 2,
//! ```
//!
//! discretized on a truncated square grid. The toolkit evaluates the nonlocal
//! energy functional
//!
//! ```text
//!   Φ(u) = ½‖u‖² + (1/4pπ) I₀(u) − ∫ F(x,u) dx,
//! ```
//!
//! where `I₀(u) = ∬ ln|x−y| |u(x)|^p |u(y)|^p dxdy` is the logarithmic
//! double integral induced by the 2-D Newton potential, searches for
//! group-invariant critical points (Nehari-constrained minimization and a
//! numerical mountain-pass scheme), and certifies the quantitative
//! inequalities the variational framework rests on: the sign `I₀ ≤ 0`, the
//! splitting `ln r = ln(1+r) − ln(1+1/r)`, the coercivity bound
//! `A₁(|u|^p,|v|^p) ≥ k⁻²‖u‖_*^p‖v‖_p^p` on k-fold symmetric functions, the
//! fiber inequality with `g(t) = t^{2p} − pt² + p − 1`, and the
//! Moser-function threshold `max_t Φ(tωₙ) < 2π/α₀`.
//!
//! Modules follow the mathematical layering: [`grid`] (domain, quadrature,
//! norms), [`logkernel`] (bilinear forms A₁/A₂/A₀ and fast convolution),
//! [`nonlinearity`] (pluggable (f,F) pairs and growth-condition checks),
//! [`symmetry`] (group actions and the averaging projector), [`functional`]
//! (energy, gradient, fiber machinery), [`moser`] (threshold certificates),
//! [`solver`] (critical-point searches), [`radial`] (1-D quadrature for
//! radial profiles), [`fields`] (test-field generators) and [`report`]
//! (deterministic JSON/CSV output).

pub mod constants;
pub mod error;
pub mod fields;
pub mod functional;
pub mod grid;
pub mod logkernel;
pub mod model;
pub mod moser;
pub mod nonlinearity;
pub mod radial;
pub mod report;
pub mod solver;
pub mod symmetry;

pub use error::{CoreError, Result};
pub use grid::{Grid2D, GridField, Potential};
pub use logkernel::{ConvolutionPlan, KernelKind, LogKernelPlans};
pub use model::Model;
pub use nonlinearity::Nonlinearity;
// pub use solver::{SolveConfig, SolveReport};
pub use symmetry::SymmetryGroup;

/// Worker-count cap for row-parallel loops, normally set once at startup
/// from the `LOGSP_THREADS` environment variable. Defaults to 1 (sequential).
pub fn set_max_threads(n: usize) {
    constants::MAX_THREADS.store(n.max(1), std::sync::atomic::Ordering::SeqCst);
}

pub fn max_threads() -> usize {
    constants::MAX_THREADS.load(std::sync::atomic::Ordering::SeqCst)
}
