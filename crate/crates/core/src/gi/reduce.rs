//! Graph isomorphism to constraint isomorphism without constants.

use serde::Serialize;

use super::forms::{build_SiD, lift_constants, realize_form};
use super::gadget::{attach_gadget, direct_encoding, find_gadget, Gadget, GadgetTarget};
use super::graph::{
    fixed_non_isomorphic_pair, preprocess_pair, PreprocessStats, Preprocessed, Rejection,
};
use super::Graph;
use crate::boolfun::ConstraintSet;
use crate::instances::InstanceSet;
use crate::{builtin_set, classify_trichotomy, Error, Limits, Result, TrichotomyClass};

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOptions {
    /// When preprocessing already separates the graphs, reduce the fixed
    /// non-isomorphic pair instead so that an instance pair is always
    /// produced.
    pub substitute_fixed_pair: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetUse {
    /// Canonical-form copies plus gadget copies for `f1, f2, t1`.
    Attached,
    /// The gadget alone encodes the graphs.
    Direct,
}

#[derive(Clone, Debug, Serialize)]
pub struct Transcript {
    pub class: TrichotomyClass,
    /// Why the input pair was replaced by the fixed pair, if it was.
    pub substituted_fixed_pair: Option<Rejection>,
    pub preprocessing: PreprocessStats,
    /// Canonical form realized with constants, 1 to 6.
    pub form: Option<u8>,
    pub realization: Vec<String>,
    pub gadget_target: GadgetTarget,
    pub gadget_id: usize,
    pub gadget: Vec<String>,
    pub gadget_use: GadgetUse,
    pub left_vars: usize,
    pub left_apps: usize,
    pub right_apps: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub left: InstanceSet,
    pub right: InstanceSet,
    pub constraint_set: ConstraintSet,
    pub transcript: Transcript,
}

#[derive(Clone, Debug)]
pub enum Reduction {
    /// Preprocessing showed the graphs are not isomorphic.
    NotIsomorphic(Rejection),
    Output(Box<ReductionOutput>),
}

impl ReductionOutput {
    /// A basis for deciding the output pair with the guided search.
    ///
    /// Any basis keeps the search exact; small arities keep the closures
    /// cheap. Constraints of arity above three are swapped for a fixed set
    /// of binary and ternary builtins.
    pub fn iso_basis(&self) -> ConstraintSet {
        let mut basis = ConstraintSet::new();
        let mut wide = false;
        for c in self.constraint_set.iter() {
            if c.arity() <= 3 {
                basis
                    .insert_or_get((**c).clone())
                    .expect("names are unique in a set");
            } else {
                wide = true;
            }
        }
        if wide {
            for c in builtin_set(&["or0", "or1", "or2", "xor2", "one-in-three", "xor3"])
                .expect("builtins")
                .iter()
            {
                // a user constraint may already hold the name; it is skipped
                let _ = basis.insert_or_get((**c).clone());
            }
        }
        basis
    }
}

fn show(s: &InstanceSet) -> Vec<String> {
    s.apps().iter().map(|a| a.to_string()).collect()
}

/// Form numbers to try: only the XOR form when every constraint is affine.
fn form_order(cs: &ConstraintSet) -> &'static [u8] {
    if cs.iter().all(|c| c.properties().affine) {
        &[6]
    } else {
        &[1, 2, 3, 4, 5, 6]
    }
}

/// Maps `(g, h)` to constant-free instances over `cs` that are isomorphic
/// exactly when the graphs are.
pub fn reduce_gi_to_iso(
    cs: &ConstraintSet,
    g: &Graph,
    h: &Graph,
    options: ReduceOptions,
    limits: &Limits,
) -> Result<Reduction> {
    let class = classify_trichotomy(cs)?;
    if class == TrichotomyClass::InP {
        return Err(Error::InP);
    }
    let (substituted, (g3, h3, stats)) = match preprocess_pair(g, h)? {
        Preprocessed::Pair { g, h, stats } => (None, (g, h, stats)),
        Preprocessed::NotIsomorphic(r) if !options.substitute_fixed_pair => {
            return Ok(Reduction::NotIsomorphic(r))
        }
        Preprocessed::NotIsomorphic(r) => {
            let (a, b) = fixed_non_isomorphic_pair();
            match preprocess_pair(&a, &b)? {
                Preprocessed::Pair { g, h, stats } => (Some(r), (g, h, stats)),
                Preprocessed::NotIsomorphic(_) => unreachable!("fixed pair passes the counts"),
            }
        }
    };

    let mut form = None;
    for &i in form_order(cs) {
        if let Some(d) = realize_form(cs, i, limits)? {
            form = Some((i, d));
            break;
        }
    }
    let gadget: Gadget = find_gadget(cs, limits)?
        .ok_or_else(|| Error::RealizationFailed("no gadget target is realizable".into()))?;

    let (left, right, used) = if gadget.target.is_direct() {
        (
            direct_encoding(&gadget, &g3)?.expect("direct target"),
            direct_encoding(&gadget, &h3)?.expect("direct target"),
            GadgetUse::Direct,
        )
    } else {
        let (i, d) = form
            .as_ref()
            .ok_or_else(|| Error::RealizationFailed("no canonical form is realizable".into()))?;
        let lifted = lift_constants(d)?;
        let sg = build_SiD(*i, &lifted, &g3)?;
        let sh = build_SiD(*i, &lifted, &h3)?;
        let attach = |s: &InstanceSet| {
            attach_gadget(&gadget, s)?.ok_or(Error::NotAttachable(gadget.target.name()))
        };
        (attach(&sg)?, attach(&sh)?, GadgetUse::Attached)
    };
    debug_assert_eq!(left.universe(), right.universe());
    let transcript = Transcript {
        class,
        substituted_fixed_pair: substituted,
        preprocessing: stats,
        form: form.as_ref().map(|(i, _)| *i),
        realization: form.as_ref().map(|(_, d)| show(d)).unwrap_or_default(),
        gadget_target: gadget.target,
        gadget_id: gadget.target.id(),
        gadget: show(&gadget.u),
        gadget_use: used,
        left_vars: left.universe().len(),
        left_apps: left.len(),
        right_apps: right.len(),
    };
    let constraint_set = ConstraintSet::from_constraints(
        cs.iter()
            .filter(|c| {
                left.apps()
                    .iter()
                    .chain(right.apps())
                    .any(|a| a.constraint().name() == c.name())
            })
            .map(|c| (**c).clone()),
    )?;
    Ok(Reduction::Output(Box::new(ReductionOutput {
        left,
        right,
        constraint_set,
        transcript,
    })))
}
