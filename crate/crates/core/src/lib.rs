//! Shock-profile analysis for a first-order viscous pure-radiation fluid.
//!
//! The crate decides whether an ideal standing shock admits a continuous
//! dissipation profile, i.e. a heteroclinic orbit of the reduced profile ODE
//! `B(ψ) ψ' = F(ψ, q̃)`, and maps causality classes and the saddle/attractor
//! transition of the upstream state over parameter space.
//!
//! Module map:
//! - [`state`]: fluid states, ideal flux and its Jacobian
//! - [`hugoniot`]: Rankine–Hugoniot states and Lax classification
//! - [`dissipation`]: the dissipation matrices and `det B`
//! - [`causality`]: characteristic speeds of the dissipation operator
//! - [`dynamics`]: rest-point types, orbit integration, profile shooting
//! - [`sweep`], [`portrait`]: parameter sweeps, region maps, phase portraits
//! - [`cli`]: the `shockprof` command-line front end

pub mod causality;
pub mod cli;
pub mod dissipation;
pub mod dynamics;
pub mod error;
pub mod hugoniot;
pub mod mat2;
pub mod poly;
pub mod portrait;
pub mod state;
pub mod sweep;

pub use causality::{classify_causality, dispersion_roots, Causality, CausalityReport};
pub use dissipation::{
    b_components, b_total, det_b_closed_form, singular_speeds, DissipationParams,
};
pub use dynamics::{
    classify_rest_point, find_profile, integrate_orbit, vector_field, IntegratorControls, Orbit,
    ProfileVerdict, RestPointClass, RestPointKind, VerdictKind,
};
pub use error::{Error, Result};
pub use hugoniot::{lax_classify, shock_states, solve_t_eq_q, FluxTarget, ShockPair};
pub use mat2::Mat2;
pub use state::FluidState;
