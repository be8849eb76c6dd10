//! Time-sliced propagators, the spectral reference, convergence and scaling studies,
//! and the Chernoff iteration.

mod chernoff;
mod reference;
mod scheme;
mod slice;
mod study;

pub use chernoff::{chernoff_factor, chernoff_iterate, chernoff_iterate_with, ChernoffResult};
pub use reference::{reference_propagator, Spectrum};
pub use scheme::SliceScheme;
pub use slice::{compose_slices, compose_slices_with, slice_kernel, slice_kernel_with, PropagatorMatrix, SliceForm};
pub use study::{
    convergence_study, convergence_study_with, loglog_slope, short_time_phase_scaling, ConvergenceReport, PairConvergence, ScalingReport,
    SchemeConvergence, SchemeScaling, SlopeFit,
};
