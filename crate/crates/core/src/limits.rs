use serde::{Deserialize, Serialize};

/// Size guards for the exhaustive routines.
///
/// Every brute-force path checks its input against one of these and fails
/// with [`crate::Error::GuardExceeded`] instead of running unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest constraint arity accepted anywhere (truth tables are `2^arity` bits).
    pub max_arity: usize,
    /// Universe size for model enumeration (`count_sat`, `equivalent`).
    pub max_vars: usize,
    /// Universe size for the unguided permutation search.
    pub max_perm_vars: usize,
    /// Universe size for closure computation and closure-guided search.
    pub max_closure_vars: usize,
    /// Number of candidate argument tuples a closure may enumerate.
    pub max_candidates: usize,
    /// Vertex count for the graph isomorphism oracle.
    pub max_graph_vertices: usize,
    /// Variable count accepted by `realize`.
    pub max_realize_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_arity: 16,
            max_vars: 20,
            max_perm_vars: 10,
            max_closure_vars: 128,
            max_candidates: 4_000_000,
            max_graph_vertices: 10,
            max_realize_vars: 8,
        }
    }
}

impl Limits {
    pub(crate) fn check(what: &'static str, size: usize, limit: usize) -> crate::Result<()> {
        if size > limit {
            Err(crate::Error::GuardExceeded { what, size, limit })
        } else {
            Ok(())
        }
    }
}
