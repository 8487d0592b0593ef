//! Reductions from graph isomorphism.

mod encode;
mod forms;
mod gadget;
mod graph;
mod reduce;
mod witness;

pub use encode::{
    encode_h4, encode_oneinthree, encode_oneinthree_expanded, encode_or, encode_xor3,
    encode_xor3_compact, Encoder,
};
pub use forms::{build_SiD, canonical_form, f_var, form_vars, lift_constants, realize_form, t_var};
pub use gadget::{attach_gadget, direct_encoding, find_gadget, gadget_vars, Gadget, GadgetTarget};
pub use graph::{
    brute_force_graph_iso, fixed_non_isomorphic_pair, preprocess_pair, Graph, PreprocessStats,
    Preprocessed, Rejection,
};
pub use reduce::{
    reduce_gi_to_iso, GadgetUse, ReduceOptions, Reduction, ReductionOutput, Transcript,
};
pub use witness::{template_vars, witness_substitution, Checkpoint, Witness, WitnessMode};
