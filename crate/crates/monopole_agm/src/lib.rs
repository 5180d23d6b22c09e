//! Genus-2 hyperelliptic period integrals by Richelot's arithmetic-geometric
//! mean, and the reduced Ercolani–Sinha constraints for charge-3 monopole
//! spectral curves with cyclic symmetry.
//!
//! The numeric kernels ([`agm_elliptic`], [`hyperpoly`], [`quadrature`],
//! [`richelot`]) are generic over the real scalar type; the curve-level
//! modules work in `f64`. Double-precision aliases of the generic types are
//! re-exported at the crate root.

// Negated comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agm_elliptic;
pub mod es_solver;
pub mod hyperpoly;
pub mod monopole_curve;
pub mod quadrature;
pub mod richelot;
pub mod scalar;
pub mod theta;

pub use scalar::Real;

/// Complex double.
pub type C64 = num_complex::Complex<f64>;
pub type AgmState = agm_elliptic::AgmState<f64>;
pub type Quadratic = hyperpoly::Quadratic<f64>;
pub type SexticModel = hyperpoly::SexticModel<f64>;
pub type Linear = hyperpoly::Linear<f64>;
pub type RichelotOrbit = richelot::RichelotOrbit<f64>;
pub type PairIntegralTable = richelot::PairIntegralTable<f64>;
pub type CutSheet = quadrature::CutSheet<f64>;
pub type SheetedContour = quadrature::SheetedContour<f64>;

pub use es_solver::{SolutionPoint, SolveError, SweepConfig};
pub use monopole_curve::{BranchPointSet, CurveParams, CycleExpr, IntSet, PeriodData, PeriodMethod};
pub use theta::{FlowPoint, H3Scan, ThetaChar};
