//! Coded real numbers, register-machine enumerations, and the recursive
//! counterexamples built from them: Specker sequences, singular covers, and a
//! constructive measurement homomorphism, tied together by a harness that runs
//! the discrete, continuous, and covering sorites arguments.

pub mod covers;
pub mod creal;
pub mod harness;
pub mod machine;
pub mod measurement;
pub mod numerics;
pub mod specker;

pub use covers::{
    covers_point, creep, finite_subcover, singular_cover, total_length, ChainStatus, ChainWalk, Cover,
    CoverError, OpenInterval, PointCoverage, SubcoverResult,
};
pub use creal::{creal_add, creal_approx, creal_cmp_gap, creal_from_rational, CompReal, GapComparison};
pub use harness::{
    check_continuous_premises, eval_pi, eval_sigma, run_continuous, run_covering, run_discrete,
    DiscreteSoritesSpec, Evidence, PiPredicate, PiVerdict, SigmaPredicate, SigmaVerdict, SoritesReport, Verdict,
};
pub use machine::{
    decode, encode, halting_enum, totality_enum, GodelIndex, Instruction, MachineError, MachineProgram,
    Numbering, RunOutcome,
};
pub use measurement::{
    check_homomorphism, check_scalar_uniqueness, holder_phi, holder_phi_real, n_count, subunits,
    MeasurementError, MeasurementStructure, PositiveDyadics, PositiveRationals,
};
pub use numerics::{eta, eta_inverse, NumericsError, Rational, RationalIndex};
pub use specker::{specker_jump_ladder, specker_jump_witness, JumpWitness, SpeckerError, SpeckerSequence};
