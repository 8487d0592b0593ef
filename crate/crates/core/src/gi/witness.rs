//! Turning a closure violation of a constraint into a six-variable
//! application with constants.

use std::sync::Arc;

use serde::Serialize;

use crate::boolfun::{Constraint, TruthTable};
use crate::instances::{Application, Arg, BoolFn};
use crate::{Error, Result, Var};

/// Which closure the witnesses violate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessMode {
    /// Majority of three models is not a model.
    NonBijunctive,
    /// XOR of three models is not a model.
    NonAffine,
}

/// Template variables `x, y, z, x', y', z'` in this order.
pub fn template_vars() -> [Var; 6] {
    ["x", "y", "z", "x'", "y'", "z'"].map(|n| Var::new(n).expect("valid"))
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub mode: WitnessMode,
    /// The three models, as rows of the constraint's table.
    pub s: usize,
    pub t: usize,
    pub u: usize,
    /// The constraint applied to template variables and constants.
    pub application: Application,
    /// Its table over the template variables.
    pub table: TruthTable,
}

/// A checkpoint: assignment to the template variables, expected value.
pub type Checkpoint = ([bool; 6], bool);

impl Witness {
    pub fn checkpoints(&self, affine_constraint: bool) -> Vec<Checkpoint> {
        let mut out = vec![
            ([false, false, false, true, true, true], true),
            ([false, true, true, true, false, false], true),
            ([true, false, true, false, true, false], true),
        ];
        match self.mode {
            WitnessMode::NonBijunctive => {
                out.push(([false, false, true, true, true, false], false));
                if affine_constraint {
                    out.push(([true, true, false, false, false, true], true));
                }
            }
            WitnessMode::NonAffine => out.push(([true, true, false, false, false, true], false)),
        }
        out
    }

    pub fn value_at(&self, point: &[bool; 6]) -> bool {
        let row = point.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.table.get(row)
    }

    pub fn passes(&self, affine_constraint: bool) -> bool {
        self.checkpoints(affine_constraint)
            .iter()
            .all(|(p, want)| self.value_at(p) == *want)
    }
}

fn find_triple(t: &TruthTable, mode: WitnessMode) -> Option<(usize, usize, usize)> {
    let models: Vec<usize> = t.models().collect();
    let m = models.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (models[i], models[j], models[k]);
                let image = match mode {
                    WitnessMode::NonBijunctive => (a & b) | (b & c) | (a & c),
                    WitnessMode::NonAffine => a ^ b ^ c,
                };
                if !t.get(image) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Builds the substituted application from the first violating triple of
/// models `s < t < u`.
///
/// Position `i` receives, by the bit pattern `(s_i, t_i, u_i)`:
/// `000 -> 0`, `111 -> 1`, `001 -> x`, `110 -> x'`, `010 -> y`,
/// `101 -> y'`, `011 -> z`, `100 -> z'`.
pub fn witness_substitution(b: &Arc<Constraint>, mode: WitnessMode) -> Result<Witness> {
    let table = b.table();
    let (s, t, u) =
        find_triple(table, mode).ok_or_else(|| Error::NoWitness(b.name().to_string()))?;
    let [x, y, z, x1, y1, z1] = template_vars();
    let args: Vec<Arg> = (0..b.arity())
        .map(|p| {
            let bit = table.position_bit(p);
            let pat =
                ((s & bit != 0) as u8) << 2 | ((t & bit != 0) as u8) << 1 | (u & bit != 0) as u8;
            match pat {
                0b000 => Arg::Const(false),
                0b111 => Arg::Const(true),
                0b001 => Arg::Var(x.clone()),
                0b110 => Arg::Var(x1.clone()),
                0b010 => Arg::Var(y.clone()),
                0b101 => Arg::Var(y1.clone()),
                0b011 => Arg::Var(z.clone()),
                _ => Arg::Var(z1.clone()),
            }
        })
        .collect();
    let application = Application::new(b.clone(), args)?;
    let key: &BoolFn = application.key();
    let vars = template_vars();
    let tt = TruthTable::from_fn(6, |row| {
        key.eval(|v| {
            let p = vars.iter().position(|w| w == v).expect("template variable");
            row & (1 << (5 - p)) != 0
        })
    });
    let w = Witness {
        mode,
        s,
        t,
        u,
        application,
        table: tt,
    };
    debug_assert!(w.passes(b.properties().affine && mode == WitnessMode::NonBijunctive));
    Ok(w)
}
