//! Reduction of non-autonomous ODEs to autonomous ones, evolution operators
//! and their composition laws.
//!
//! A non-autonomous system `Y′ = F(t, Y)` on `ℝ^l` becomes the autonomous
//! system `Y_A′ = (1, F(Y_A))` on `ℝ^{l+1}` by carrying time as the first
//! coordinate. Its one-time evolution operator `E_A(s)(t, y) = (t + s,
//! E(t, t + s)(y))` then obeys the one-parameter law `E_A(s + r) =
//! E_A(r)∘E_A(s)`, while the two-time operator `E(t0, t)` obeys `E(s, r)∘E(t, s) = E(t, r)`.

mod evolution;
mod flow;
mod recover;

pub use evolution::{
    autonomous_from_two_time, first_component_check, gls_autonomous, gls_evolution, gls_two_time,
    one_time_law_check, quadratic_autonomous, quadratic_two_time, time_pairs, time_triples, two_time_law_check, ystar_branch,
    EvolutionKind, EvolutionOp,
};
pub use flow::{
    augment_system, flow_vs_closed_form, integrate_flow, FlowSettings, Mesh, OdeKind, OdeSystem,
    Trajectory,
};
pub use recover::{recover_evolution, Recovery, RecoverySettings, SliceMap, SymbolicSlice};
