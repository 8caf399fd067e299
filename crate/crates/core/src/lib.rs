//! Symmetric interaction combinators end to end.
//!
//! Nets of δ, ζ and ε cells with a textual format and α-canonical keys,
//! β-reduction under several strategies, the ε-reduction driven by a sound
//! blindness oracle, geometry-of-interaction path semantics, edifices of
//! observable-axiom addresses, semi-decision procedures for the
//! observational equivalences, and the code/decoder/recursion constructions.

pub mod address;
pub mod canon;
pub mod dot;
pub mod edifice;
pub mod encodings;
pub mod equivalence;
pub mod error;
pub mod gen;
pub mod goi;
pub mod net;
pub mod observe;
pub mod parse;
pub mod rewrite;
pub mod structure;
pub mod word;

pub use address::{obs_axioms, Address, AddressSet, Pillar};
pub use canon::{alpha_eq, canonical_key, canonical_text};
pub use edifice::{
    canonicalize, closure_equal_up_to, edifice_equal, trace_addresses, truncate, vault_contained, TraceResult,
    TruncationSet,
};
pub use error::{Error, ParseErrorKind, Result};
pub use goi::{
    addresses_via_goi, build_port_graph, execution_formula, goi_matrix, interpret, is_clash_free, maximal_paths,
    mono_rewrite, mono_value, Atom, Base, Execution, GoIMatrix, MaxPath, Monomial, Nilpotency, PortGraph,
    SemiringElement, Term,
};
pub use net::{Cell, CellId, CellKind, Net, PortRef, Role, Slot, Tag};
pub use observe::{
    all_obs_paths, blindness_oracle, eps_reduce, finiteness_verdict, is_beta_eps_normal, BlindReason, BlindVerdict,
    Finiteness, ObsCertificate, ObsPaths,
};
pub use parse::{parse_named, parse_net, serialize_named, serialize_net};
pub use rewrite::{reduce, reduce_step, ReductionOutcome, Rule, Status, Strategy, TraceEntry};
pub use structure::{
    apply_feedback, branch_address, classify_wires, cut_free_canonical_form, decompose, is_cut_free, plug,
    CutFreeForm, Feedback, Forest, LeafRef, Tree, WireClass, WireReport,
};
pub use word::{BiWord, Letter, Word};
