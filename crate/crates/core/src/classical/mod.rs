//! Classical mechanics: Hamilton flows, boundary-value shooting, exact actions,
//! secular profiles and the short-time action series.

mod classify;
mod exact;
mod flow;
mod potential;
mod secular;
mod series;

pub use classify::{classify_hamiltonian, Classification, RejectReason};
pub use exact::{exact_action, harmonic_action_taylor, ExactKind};
pub use flow::{action_along, action_excess, hamilton_rhs, integrate_ivp, solve_bvp, solve_bvp_with, BvpOptions, PhasePath, DEFAULT_BVP_STEPS};
pub use potential::{path_average, path_average_with, FnSegment, HamiltonianSpec, MagneticTerm, Poly, Potential, SegmentFn, DEFAULT_GL_ORDER};
pub use secular::{
    chi2_osc_derived, chi2_osc_printed, magnetic_pi1_printed, magnetic_pi2_printed, pi3_printed, secular_profiles, secular_profiles_with,
    SecularProfile, DEFAULT_CHEB_DEGREE,
};
pub use series::{
    action_series, adjudicate_c5, c5_candidates, fit_series_numeric, fit_series_numeric_with, log_sweep, numeric_action, numeric_action_excess, ActionSeries,
    C5Adjudication, C5Candidates, C5Route, FitOptions, SeriesBasis, SeriesFit, DESIGNATED_C5_ROUTE,
};
