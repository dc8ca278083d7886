//! Function-coherent desirability toolkit.
//!
//! Non-linear utilities ([`utility`]) composed with discount regimes
//! ([`discount`]) value dated payments ([`intertemporal`]); finite-state
//! gambles ([`gamble`]) are accepted or rejected in the utility-transformed
//! cone ([`coherence`]) using a small dense simplex solver ([`lp`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherence;
pub mod discount;
pub mod error;
pub mod gamble;
pub mod intertemporal;
pub mod lp;
pub mod utility;

pub use coherence::{
    acceptance, accepts, audit, avoids_partial_loss, check_ordering_invariance,
    check_transform_invariance, fit_functional, partial_loss_witness, representation_conflicts,
    rho, Acceptance, AssessmentRef, AssessmentSet, CoherenceAudit, Finding, FitOutcome, Functional,
    PartialLossWitness,
};
pub use discount::{
    check_scale_monotonicity, ConstraintReport, DiscountKind, DiscountSpec, EtaSpec, FactorMode,
};
pub use error::{Error, Result};
pub use gamble::{dominates, transform, u_convex_combine, Gamble, StateSpace};
pub use intertemporal::{
    compare, effective_utility, reversal_scan, schedule_value, DatedPayment, PaymentSchedule,
    Preference, ReversalScan, ScanRow, Valuation,
};
pub use lp::{solve, LpOutcome, LpProblem, Relation, VarBound};
pub use utility::{audit_admissibility, AdmissibilityReport, Phi, UtilityKind, UtilitySpec};
