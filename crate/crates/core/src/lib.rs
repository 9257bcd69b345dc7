//! Geometric interpretations of ELH ontologies: parsing, normalization,
//! saturation-based reasoning, the finite canonical model, binary vector
//! embeddings, exact convex-hull membership, and faithfulness checking.

pub mod canonical;
pub mod embed;
pub mod error;
pub mod faithfulness;
pub mod hull;
pub mod interp;
pub mod modelcheck;
pub mod normalize;
pub mod ontology;
pub mod parser;
pub mod reasoner;

pub use canonical::{build_canonical, canonical_elements, verify_canonical, CanonicalElement};
pub use embed::{
    build_geometric, canonical_embedding, concat, mu, rational_from_binary, BinaryVector,
    GeometricModel, IndexSystem, RationalVector,
};
pub use error::{Error, Result};
pub use hull::{
    check_binary_hull_collapse, hull_member, hull_member_simplex, solve_nonnegative_system,
};
pub use faithfulness::{
    axiom_universe, axiom_universe_size, ontology_digest, verify_model_faithfulness,
    verify_model_faithfulness_with, verify_nonconvex_faithfulness,
    verify_nonconvex_faithfulness_with, verify_strong_faithfulness,
    verify_strong_faithfulness_with, FaithfulnessOptions, FaithfulnessReport, Mismatch,
};
pub use interp::{enumerate_interpretations, random_interpretation, FiniteInterpretation};
pub use modelcheck::{check, check_ci, check_ci_with, check_iq, check_ri, CheckResult, Membership};
pub use normalize::{normalize, FRESH_PREFIX};
pub use ontology::{Axiom, Concept, ConceptName, IndividualName, Ontology, RoleName, Signature};
pub use parser::{parse_axiom, parse_ontology, serialize};
pub use reasoner::{entails, role_closure, Saturation};
