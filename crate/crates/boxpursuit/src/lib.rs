//! Recovery of sparse signals with entries from a finite integer alphabet.
//!
//! Basis pursuit alone ignores that a signal is, say, 0/1-valued. Adding
//! the alphabet's convex hull as a box constraint changes the geometry:
//! the descent cone shrinks, recovery needs fewer Gaussian measurements,
//! and for dense binary signals the required count saturates at N/2. This
//! crate implements that program family end to end:
//!
//! * [`solver`] — l1 minimization over an affine slice of a box (exact,
//!   via a built-in dense simplex), a ball-constrained variant for noisy
//!   measurements, mirrored/auto binary recovery, rounding, and an LP
//!   certificate that a claimed solution is the unique minimizer.
//! * [`nsp`] — exact checkers for the null space properties that
//!   characterize unique recovery per alphabet family, with explicit
//!   failure witnesses, plus a crosscheck harness that plays the
//!   checkers against the solver-side uniqueness certificates.
//! * [`statdim`] — closed-form phase-transition curves from the
//!   statistical dimension of the descent cones, measurement-count
//!   bounds, and a Monte Carlo oracle for the same quantities.
//! * [`harness`] — seeded, reproducible phase-transition and robustness
//!   sweeps with CSV output and theory overlays.
//!
//! The `examples/` directory holds one runnable example per capability;
//! the `boxpursuit` binary exposes the same operations as subcommands.
//!
//! ```
//! use boxpursuit::prelude::*;
//! use nalgebra::DVector;
//!
//! // recover a binary signal from 6 Gaussian measurements in dimension 10
//! let streams = Streams::new(1);
//! let mut rng = streams.root();
//! let alphabet = Alphabet::new(0, 1).unwrap();
//! let profile = SupportProfile::new(&alphabet, 10, &[(1, 2)]).unwrap();
//! let x0 = sample_signal(&mut rng, &alphabet, &profile);
//! let a = sample_gaussian_matrix(&mut rng, 6, 10);
//! let b = &a * x0.values();
//!
//! let bounds = BoxBounds::from_alphabet(&alphabet, 10);
//! let result = solve_box_bp(&a, &b, &bounds).unwrap();
//! assert_eq!(result.status, SolveStatus::Optimal);
//! assert!((result.vector() - x0.values()).norm() < 1e-6);
//! ```

pub mod alphabet;
pub mod fixtures;
pub mod harness;
pub mod io;
pub mod lp;
pub mod normal;
pub mod nsp;
pub mod rng;
pub mod sampling;
pub mod solver;
pub mod statdim;

pub mod prelude {
    pub use crate::alphabet::{Alphabet, Polarity, Signal, SupportProfile};
    pub use crate::harness::{
        emit_theory_overlay, empirical_transition_location, run_phase_grid, run_robustness_grid,
        PhaseGridConfig, PhaseTable,
    };
    pub use crate::nsp::{check_nsp, kernel_basis, nsp_recovery_crosscheck, NspQuery, NspVerdict};
    pub use crate::rng::Streams;
    pub use crate::sampling::{sample_gaussian_matrix, sample_signal};
    pub use crate::solver::{
        check_unique, recover_binary_auto, round_to_alphabet, solve_box_bp, solve_box_bp_denoise,
        solve_mirrored_binary, BoxBounds, ProgramKind, SolveResult, SolveStatus, Uniqueness,
    };
    pub use crate::statdim::{
        delta_curve, gaussian_lower_moment, gaussian_upper_moment, j_curve, mc_statdim_oracle,
        measurement_bound, noisy_measurement_bound, CurveSpec,
    };
}
