//! The assembled problem bundle: grid, potential, nonlinearity, exponent p,
//! and precomputed kernel plans. Immutable after construction; safe to share
//! across threads for concurrent evaluation on distinct fields.

use crate::error::{CoreError, Result};
use crate::functional::SmallBallFit;
use crate::grid::{Grid2D, GridField, Potential};
use crate::logkernel::LogKernelPlans;
use crate::nonlinearity::Nonlinearity;
use std::sync::Arc;
use std::sync::OnceLock;

pub struct Model {
    grid: Arc<Grid2D>,
    potential: Potential,
    nl: Nonlinearity,
    p: f64,
    plans: LogKernelPlans,
    v_samples: GridField,
    pub(crate) small_ball: OnceLock<SmallBallFit>,
}

impl Model {
    pub fn new(
        grid: Arc<Grid2D>,
        potential: Potential,
        nl: Nonlinearity,
        p: f64,
    ) -> Result<Self> {
        if !(p >= 2.0) {
            return Err(CoreError::OutOfRange(format!("model needs p ≥ 2, got {p}")));
        }
        nl.validate()?;
        if let Nonlinearity::SubcriticalPower { q_pow, .. } = nl {
            if q_pow < 2.0 * p {
                return Err(CoreError::OutOfRange(format!(
                    "power family needs q ≥ 2p = {}, got q = {q_pow}",
                    2.0 * p
                )));
            }
        }
        potential.validate(&grid)?;
        let plans = LogKernelPlans::new(&grid)?;
        let v_samples = potential.sample(&grid);
        Ok(Model {
            grid,
            potential,
            nl,
            p,
            plans,
            v_samples,
            small_ball: OnceLock::new(),
        })
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn plans(&self) -> &LogKernelPlans {
        &self.plans
    }

    /// V sampled at every node (hot-path form of the potential).
    pub fn v_samples(&self) -> &GridField {
        &self.v_samples
    }

    /// Relative defect of V under the group (V must be declared-invariant
    /// before symmetric solves; exact groups see ~1e−16 here).
    pub fn potential_defect(&self, group: &crate::symmetry::SymmetryGroup) -> f64 {
        group.defect(&self.v_samples)
    }

    /// Trudinger–Moser small-ball radius √(π/α₀) for critical families; a
    /// unit radius is used for subcritical families, where the bound is not
    /// scale-critical.
    pub fn small_ball_radius(&self) -> f64 {
        match self.nl.alpha0() {
            Some(a0) => (std::f64::consts::PI / a0).sqrt(),
            None => 1.0,
        }
    }
}
