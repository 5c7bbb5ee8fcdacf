//! Construction of [2,4]-factors in graph squares.

mod certificate;
mod lemma;
mod theorem;

pub use certificate::{
    CertificateJson, CertificateKind, Designation, DesignationJson, FactorCertificate,
    TaggedEdgeJson,
};
pub use lemma::{check_lemma_preconditions, lemma_factor, Attach, PeelStep};
pub use theorem::{
    build_factor, check_theorem_preconditions, plan_bad_leaves, BadLeafPlan, LeafCase, LeafRecord,
};
