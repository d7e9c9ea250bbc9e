//! Analytic propagators for a spin-half driven by a polychromatic quantized
//! field, built by dressing the spin with one mode at a time, together with a
//! brute-force lattice solver for cross-checking.
//!
//! The symbolic layers ([`term`], [`matrix`], [`cascade`], [`propagator`],
//! [`closed_forms`], [`field_state`]) are generic over [`Real`] (`f32`/`f64`).
//! The [`oracle`] and [`spectrum`] modules work in `f64`.
//!
//! ```
//! use polydress::{analytic_pe, linspace, ModeConfig64};
//!
//! let cfg = ModeConfig64::real(3, vec![0, 2], &[0.5, 0.5], 1.0).unwrap();
//! let tau = linspace(0.0, 4.0 * std::f64::consts::PI, 200);
//! let pe = analytic_pe(&cfg, &tau, &[3, 5]).unwrap();
//! assert!(pe.values[0] < 1e-30);
//! ```

pub mod cascade;
pub mod closed_forms;
pub mod config;
pub mod error;
pub mod field_state;
pub mod matrix;
pub mod oracle;
pub mod propagator;
pub mod scalar;
pub mod spectrum;
pub mod term;

pub use cascade::{
    build_m, next_stage, run_cascade, stage_zero, CascadeResult, StageParams, TruncatedTerm,
};
pub use closed_forms::{
    single_mode_rabi, two_mode_u0, weak_field_pe, weak_field_uge, SidebandPhase, WeakFieldConfig,
};
pub use config::ModeConfig;
pub use error::{Error, Result};
pub use field_state::{gamma_weights, weighted_pe, weighted_pe_oracle, FieldWeights};
pub use matrix::{TermMatrix, TermVector};
pub use oracle::{
    build_hamiltonian, compare, evolve, run_oracle, verify_sk, ComparisonReport, Hamiltonian,
    OracleRun, SkReport, TruncatedBasis,
};
pub use propagator::{
    analytic_pe, build_t, channel_amplitudes, dressed_propagator, excitation_probability, linspace,
    undress, PeSeries, PropagatorComponents,
};
pub use scalar::Real;
pub use spectrum::dominant_frequency;
pub use term::{Term, TermSum};

pub type Term64 = Term<f64>;
pub type TermSum64 = TermSum<f64>;
pub type ModeConfig64 = ModeConfig<f64>;
pub type StageParams64 = StageParams<f64>;
pub type CascadeResult64 = CascadeResult<f64>;
pub type PropagatorComponents64 = PropagatorComponents<f64>;
pub type PeSeries64 = PeSeries<f64>;
pub type WeakFieldConfig64 = WeakFieldConfig<f64>;
pub type FieldWeights64 = FieldWeights<f64>;

pub type Term32 = Term<f32>;
pub type TermSum32 = TermSum<f32>;
pub type ModeConfig32 = ModeConfig<f32>;
pub type StageParams32 = StageParams<f32>;
pub type CascadeResult32 = CascadeResult<f32>;
pub type PropagatorComponents32 = PropagatorComponents<f32>;
pub type PeSeries32 = PeSeries<f32>;
pub type WeakFieldConfig32 = WeakFieldConfig<f32>;
pub type FieldWeights32 = FieldWeights<f32>;
