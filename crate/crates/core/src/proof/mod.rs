//! The constructive constant-curvature deduction for block tensors whose
//! shift is 2-stein.

pub mod certificate;
pub mod deduction;
pub mod ledger;
pub mod solver;
pub mod symmetric;
pub mod quadratic;
pub mod symmetrize;
pub mod weights;

pub use certificate::{identities_certificate, Comparison, IdentityCertificate};
pub use deduction::{
    constant_curvature_deduction, Deduction, DeductionFailure, ProofTrace, Verdict, ViolationCertificate,
};
pub use ledger::{coefficient_forms, published_forms, FormLedger, PublishedForms};
pub use quadratic::{case1_identity_check, final_quadratic_form, q4_psd_witness, Q4Witness, QuadDecomposition};
pub use solver::{case2_target, solve_vector_set, VectorSet};
pub use symmetric::{
    abc_coefficients, elementary_symmetric, random_zvector, rhs_combination, rhs_identity_value, CoefficientVector10,
    ZVector, COEFFICIENT_NAMES,
};
pub use symmetrize::{symmetrized_trace_direct, symmetrized_trace_formula, DIRECT_GUARD};
pub use weights::{select_xi_eta, WeightPair};
