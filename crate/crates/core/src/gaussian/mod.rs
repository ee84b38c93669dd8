//! Gaussian β ensemble: tridiagonal models, Sturm counts, and counting by
//! lifted transfer maps.

pub mod carousel;
pub mod sweep;
pub mod tridiag;
pub mod verify;

pub use carousel::{carousel_params, semicircle_count, semicircle_residual, strict_integer_part, CarouselParams};
pub use sweep::{
    backward_phase, build_r, build_w, carousel_step_map, forward_phase, phase_sweep, relative_phase,
    relative_phase_with, PhaseSweep, NEAR_DEGENERATE,
};
pub use tridiag::{conjugate_model, sample_tridiagonal, sturm_count, ConjugatedModel, TridiagonalModel};
pub use verify::{cross_check, probe_points, CrossCheckReport, Mismatch};
