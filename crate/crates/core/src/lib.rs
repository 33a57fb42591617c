//! Symbolic-numeric toolkit for conjugate energy operators on smooth
//! signals.
//!
//! The crate combines exact truncated Taylor arithmetic ([`jet`]) with the
//! conjugate operator family Ψ_k^± and its iterated generalizations
//! ([`operators`]), the decomposition identities that express derivatives of
//! integer powers through the k = 1 plus operator ([`decomposition`]),
//! adaptive interval energies and Taylor continuation of energy integrals
//! ([`energy`]), an evanescent plane-wave family with closed-form
//! cross-checks ([`waves`]), and an emptiness scanner for the derived
//! energy spaces ([`scanner`]).
//!
//! Everything is deterministic: no randomness, no parallelism, no
//! time-dependent state. Identical inputs produce bitwise-identical
//! reports.

pub mod decomposition;
pub mod energy;
pub mod error;
pub mod jet;
pub mod operators;
pub mod scanner;
pub mod smooth;
pub mod waves;

pub use decomposition::{
    leibniz_expand, nonpositive_power_decompose, recover_pair_coefficients, DecompositionPlan,
    IdentityCheck, PowerDecomposition, PowerRoute, RecoveredPair, DEFAULT_POWER_FLOOR,
};
pub use energy::{
    duplication_classify, energy, integrate_square, taylor_energy_extrapolate, DuplicationClass,
    DuplicationReport, EnergyEstimate, ExtrapolationReport,
};
pub use error::{Error, Result};
pub use jet::{Jet, MAX_ORDER};
pub use num_complex::Complex64;
pub use operators::{
    bracket, derived_bracket_value, kernel_scan, psi, schwartz_decay_check, Axis, DecayReport,
    KernelRow, MembershipReport, OperatorSpec, Sign,
};
pub use scanner::{
    generalized_level_comparison, minkowski_check, scan_energy_spaces, LevelComparison,
    MinkowskiReport, ScanCell, ScanOptions, ScanReport, LEVEL_RATIO_THRESHOLD,
};
pub use smooth::{
    fd_oracle, ClosureFn, Constant, Exponential, FdEstimate, Harmonic, Polynomial, SmoothFn,
    ZeroFn,
};
pub use waves::{
    closed_form_derivative, dispersion_residual, psi_derivative_comparison, wave_eval,
    DispersionReport, PsiDerivativeComparison, RealConvention, WaveParams, WaveSlice,
};
