//! Morse-theoretic data of normal cycles for piecewise-linear sets.
//!
//! The crate computes, for embedded finite simplicial complexes:
//!
//! * Morse indices of generic linear functionals and their Morse-data
//!   slices ([`morse`]),
//! * the combinatorial and topological Euler characteristics, constructible
//!   functions and Euler integrals ([`euler`]),
//! * jump measures of constructible functions and a bounded-Lipschitz
//!   distance for the convergence harness ([`jump`]),
//! * an explicit normal-cycle structure with slicing, Legendrian and cycle
//!   checks in low ambient dimension,
//! * intrinsic volumes via the tube formula, external angles and the
//!   Crofton formula.

pub mod complex;
pub mod converge;
pub mod crofton;
pub mod error;
pub mod euler;
pub mod geometry;
pub mod io;
pub mod jump;
pub mod morse;
pub mod normal_cycle;
pub mod sampling;
pub mod shapes;
pub mod subdivide;
pub mod tube;
pub mod volumes;

pub use complex::{build_complex, CellSelection, Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use euler::{chi_o, chi_top_compact, euler_integral, ConstructibleFunction};
pub use geometry::{Covector, Point};
pub use jump::{bl_distance, jump_measure, JumpMeasure};
pub use morse::{
    index_sum_check, jump_identity_check, morse_index, morse_slice, superlevel_chi,
    IndexProfile, MorseDataSlice,
};
pub use converge::{convergence_harness, convergence_harness_complexes, ConvergenceReport};
pub use crofton::{crofton_calibrate, crofton_estimate, CroftonEstimate};
pub use normal_cycle::{
    build_normal_cycle, check_cycle_2d, check_legendrian, cone_extend, slice_at, NormalCycle,
    NormalCyclePiece, SphericalCell,
};
pub use sampling::sample_generic_covector;
pub use subdivide::subdivide_by_level;
pub use tube::{fit_tube_polynomial, run_tube_experiment, tube_volume_mc, TubeExperiment, TubeFit};
pub use volumes::{hausdorff_measure_exact, intrinsic_volumes_convex, IntrinsicVolumes};
