//! Quantum game protocols: the penny flip, the entangled prisoner's dilemma
//! with its invasion analysis, and the tactic-mixing (MW) scheme.

pub mod ewl;
pub mod mw;
pub mod pennyflip;

pub use ewl::{
    entangler, ewl_final_state, ewl_invasion_fitness, ewl_nash_scan, ewl_payoff_surface, ewl_payoffs,
    invasion_threshold, strategy_grid, EwlEquilibrium, EwlGame, EwlSpec, EwlStrategy, PdPayoffs, SurfacePoint,
};
pub use mw::{mw_final_state, mw_nash_scan, mw_payoffs, MwEquilibrium, MwGame, MwSpec};
pub use pennyflip::{penny_unitary, pennyflip_round, win_probability};
