use std::fmt;

use serde::Serialize;

use super::ConstraintSet;
use crate::{Error, Result};

/// Complexity of isomorphism for instances over a constraint set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TrichotomyClass {
    #[serde(rename = "CONP_AND_GI_HARD")]
    ConpAndGiHard,
    #[serde(rename = "GI_EQUIVALENT")]
    GiEquivalent,
    #[serde(rename = "IN_P")]
    InP,
}

impl fmt::Display for TrichotomyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrichotomyClass::ConpAndGiHard => "CONP_AND_GI_HARD",
            TrichotomyClass::GiEquivalent => "GI_EQUIVALENT",
            TrichotomyClass::InP => "IN_P",
        })
    }
}

fn non_empty(cs: &ConstraintSet) -> Result<()> {
    if cs.is_empty() {
        Err(Error::EmptyConstraintSet)
    } else {
        Ok(())
    }
}

/// True iff every member shares one of horn, anti-horn, affine, bijunctive.
pub fn is_schaefer_set(cs: &ConstraintSet) -> Result<bool> {
    non_empty(cs)?;
    let all = |f: fn(&super::PropertySet) -> bool| cs.iter().all(|c| f(c.properties()));
    Ok(all(|p| p.horn) || all(|p| p.anti_horn) || all(|p| p.affine) || all(|p| p.bijunctive))
}

pub fn is_two_affine_set(cs: &ConstraintSet) -> bool {
    cs.iter().all(|c| c.properties().two_affine)
}

pub fn classify_trichotomy(cs: &ConstraintSet) -> Result<TrichotomyClass> {
    Ok(if !is_schaefer_set(cs)? {
        TrichotomyClass::ConpAndGiHard
    } else if is_two_affine_set(cs) {
        TrichotomyClass::InP
    } else {
        TrichotomyClass::GiEquivalent
    })
}
