//! The `flow` command: RK4 trajectories written as CSV.

use lie_semigroup::enforcing::{cuberoot_group_action, cuberoot_system, sqrt_action, sqrt_branch_system, Branch};
use lie_semigroup::gls::TimeAction;
use lie_semigroup::reduction::{integrate_flow, FlowSettings, OdeSystem, Trajectory};

use crate::error::CliError;

/// Start offset used when a system is singular at its start time.
pub const LIMIT_EPS: f64 = 1e-8;

type Build = fn() -> (OdeSystem<f64>, Option<TimeAction<f64>>);

pub struct FlowSystem {
    pub name: &'static str,
    pub summary: &'static str,
    build: Build,
}

pub static SYSTEMS: &[FlowSystem] = &[
    FlowSystem {
        name: "sqrt-minus",
        summary: "bounded branch of the square-root action ODE",
        build: || (sqrt_branch_system(Branch::Minus), Some(sqrt_action())),
    },
    FlowSystem {
        name: "sqrt-plus",
        summary: "other branch of the square-root action ODE",
        build: || (sqrt_branch_system(Branch::Plus), None),
    },
    FlowSystem {
        name: "cuberoot",
        summary: "Y' = 1/Y^2",
        build: || (cuberoot_system(), Some(cuberoot_group_action())),
    },
];

pub fn find(name: &str) -> Option<&'static FlowSystem> {
    SYSTEMS.iter().find(|s| s.name == name)
}

/// Integrates `system` from `(t0, y0)` to `t1`.
///
/// If the system is singular at `t0` and has a closed form, integration
/// starts at `t0 + LIMIT_EPS` from the closed-form value, which realizes
/// the limit initial condition `Y(t) -> y0` as `t -> t0`.
pub fn run_flow(system: &FlowSystem, t0: f64, t1: f64, y0: f64, steps: usize) -> Result<Trajectory<f64>, CliError> {
    let (sys, closed) = (system.build)();
    if steps == 0 {
        return Err(CliError::Config("--steps must be positive".into()));
    }
    if !(t0.is_finite() && t1.is_finite() && y0.is_finite()) {
        return Err(CliError::Config("t0, t1 and y0 must be finite".into()));
    }
    if sys.is_valid(t0, &[y0]) {
        return Ok(integrate_flow(&sys, t0, &[y0], t1, &FlowSettings::new(steps, 0.0))?);
    }
    match closed {
        Some(a) if t0 == 0.0 && t1 > LIMIT_EPS => {
            let start = a.apply(LIMIT_EPS, &[y0])?;
            Ok(integrate_flow(&sys, t0, &start, t1, &FlowSettings::new(steps, LIMIT_EPS))?)
        }
        _ => Err(CliError::Config(format!(
            "`{}` is singular at t0 = {t0}, y0 = {y0} and has no limit start there",
            system.name
        ))),
    }
}
