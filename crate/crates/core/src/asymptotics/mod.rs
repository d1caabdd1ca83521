//! Every estimator for the cell integrals `J_x`, `I_x` and the long-interval
//! mean, each returned as an [`EstimateReport`].

mod line;
mod reconcile;
mod stationary;
mod theorem1;

pub use line::{corollary2_Ix, corollary3_Ix, critical_line_x1_display};
pub use reconcile::{
    euler_maclaurin_tail_identity, reconciliation_identities, ReconciliationReport, TailIdentity,
};
pub use stationary::{script_E, script_E_integral_form, theorem2_Ix, theorem3_mean};
pub use theorem1::{
    corollary1_Jx, in_excluded_set, theorem1_Jx, S_N, T_N_expanded, T_N_integral,
};

use crate::numerics::Complex;
use serde::Serialize;

/// An estimator value with the literal size of its cited error term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub value: Complex,
    /// The error term evaluated at the inputs with constant 1.
    pub predicted_error_scale: f64,
    pub terms_used: usize,
    pub branch_notes: String,
    pub exceptional: Option<ExceptionalFlag>,
}

/// Membership of `x` in `A(t, eta) = {x : ||y|| < eta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceptionalFlag {
    pub in_a: bool,
    pub eta: f64,
}
