//! Leibniz and almost-metriplectic structures on ℝⁿ and on the doubled space
//! ℝⁿ × ℝⁿ, with constructed ("revisited") dissipative systems and a
//! method-of-steps integrator for the resulting constant-delay dynamics.
//!
//! The pieces fit together as follows:
//!
//! - [`state`] holds points of the state space and of the doubled space;
//! - [`scalar`] and [`tensor`] carry Hamiltonians with analytic gradients
//!   and coefficient-matrix tensor fields, plus finite-difference and
//!   symmetry checks for both;
//! - [`bracket`] assembles vector fields from a skew tensor, a metric tensor
//!   and a Hamiltonian pair, and verifies the bracket derivation laws with
//!   random polynomial test functions;
//! - [`revisited`] constructs the dissipation tensor annihilating a chosen
//!   gradient, turning a conservative system into a revisited one;
//! - [`dde`] integrates ẋ(t) = X(x(t−τ), x(t)) by the method of steps with
//!   dense output;
//! - [`catalog`] names the concrete systems and bundles their invariants
//!   and structural checks;
//! - [`diagnostics`] measures drift, dissipation and refinement behavior.

pub mod bracket;
pub mod catalog;
pub mod dde;
pub mod diagnostics;
pub mod error;
pub mod poly;
pub mod revisited;
pub mod sample;
pub mod scalar;
pub mod state;
pub mod tensor;

pub use bracket::{
    almost_leibniz_vector_field, delay_vector_field, leibniz_vector_field, pseudometric_bracket,
    verify_bracket_laws, verify_bracket_laws_form, verify_equivalence_prop42, EquivalenceReport,
    LawForm, LawReport, VectorFieldSpec, Wiring,
};
pub use catalog::{by_name, default_catalog, CatalogEntry, CATALOG_NAMES};
pub use dde::{
    convergence_order, eval_trajectory, integrate, DenseTrajectory, HistoryFunction,
    IntegrationConfig, OrderEstimate, Reference,
};
pub use diagnostics::{
    dissipation_monitor, first_integral_drift, structural_residual, DissipationReport, DriftReport,
    StructuralReport,
};
pub use error::{Error, Result};
pub use revisited::{
    build_annihilator_metric, build_outer_product_metric, build_revisited_system, BuildMode,
    BuiltMetric, MetricVariant, RevisitedSystem,
};
pub use scalar::{check_gradient, finite_diff_gradient, FieldKind, GradientReport, ScalarField, Slot};
pub use state::{DelayPair, PhaseState};
pub use tensor::{check_symmetry, SlotSignature, SymmetryClass, SymmetryReport, TensorField};
