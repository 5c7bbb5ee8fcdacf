//! Independent checking of factors and certificates, an exhaustive
//! existence oracle, and a family of graphs without small factors.

mod family;
mod oracle;
mod report;

pub use family::{
    counting_certificate, gen_counterexample, triangle_instance, Attachment,
    CounterexampleDescriptor, CountingOutcome, CountingProof,
};
pub use oracle::{
    degree4_variant_check, exists_factor, OracleBudget, OracleOutcome, MAX_ORACLE_EDGES,
    MAX_ORACLE_VERTICES,
};
pub use report::{check_cycle_witness, verify_certificate, verify_factor, PropertyReport, VerificationReport};
