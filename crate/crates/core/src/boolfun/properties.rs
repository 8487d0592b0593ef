use serde::{Deserialize, Serialize};

use super::TruthTable;

/// Closure properties of a single Boolean function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PropertySet {
    pub zero_valid: bool,
    pub one_valid: bool,
    pub horn: bool,
    pub anti_horn: bool,
    pub bijunctive: bool,
    pub affine: bool,
    pub two_affine: bool,
    pub complementative: bool,
}

impl PropertySet {
    pub fn schaefer(&self) -> bool {
        self.horn || self.anti_horn || self.bijunctive || self.affine
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn flags(&self) -> [(&'static str, bool); 8] {
        [
            ("zero_valid", self.zero_valid),
            ("one_valid", self.one_valid),
            ("horn", self.horn),
            ("anti_horn", self.anti_horn),
            ("bijunctive", self.bijunctive),
            ("affine", self.affine),
            ("two_affine", self.two_affine),
            ("complementative", self.complementative),
        ]
    }
}

/// Decides every property by closure of the satisfying set.
///
/// Horn and anti-Horn close under AND and OR of pairs, bijunctive under
/// majority of triples, affine under XOR of triples. The majority check is
/// cubic in the number of models, so it is `O(2^(3k))` in the worst case.
pub fn detect_properties(t: &TruthTable) -> PropertySet {
    let models: Vec<usize> = t.models().collect();
    let full = t.len() - 1;
    let horn = closed_pairwise(t, &models, |a, b| a & b);
    let anti_horn = closed_pairwise(t, &models, |a, b| a | b);
    let bijunctive = majority_closed(t, &models);
    let affine = xor_closed(t, &models);
    PropertySet {
        zero_valid: t.get(0),
        one_valid: t.get(full),
        horn,
        anti_horn,
        bijunctive,
        affine,
        two_affine: affine && bijunctive,
        complementative: (0..t.len()).all(|r| t.get(r) == t.get(full ^ r)),
    }
}

fn closed_pairwise(t: &TruthTable, models: &[usize], op: impl Fn(usize, usize) -> usize) -> bool {
    models
        .iter()
        .enumerate()
        .all(|(i, &a)| models[i + 1..].iter().all(|&b| t.get(op(a, b))))
}

fn majority_closed(t: &TruthTable, models: &[usize]) -> bool {
    let m = models.len();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (models[i], models[j]);
            for &c in &models[j + 1..] {
                if !t.get((a & b) | (b & c) | (a & c)) {
                    return false;
                }
            }
        }
    }
    true
}

pub(crate) fn is_affine_table(t: &TruthTable) -> bool {
    let models: Vec<usize> = t.models().collect();
    xor_closed(t, &models)
}

// Closure under s^t^u for all model triples is the same as R ^ s0 being a
// linear subspace for one fixed model s0, which only needs pairs.
fn xor_closed(t: &TruthTable, models: &[usize]) -> bool {
    let Some(&s0) = models.first() else {
        return true;
    };
    models
        .iter()
        .enumerate()
        .all(|(i, &a)| models[i + 1..].iter().all(|&b| t.get(a ^ b ^ s0)))
}
