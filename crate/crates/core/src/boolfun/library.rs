use super::{Constraint, ConstraintSet};
use crate::{Error, Result};

/// Names resolvable with [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "or0",
    "or1",
    "or2",
    "xor2",
    "xor3",
    "one-in-three",
    "id",
    "neg",
    "xnor2",
    "h4",
    "h6-one-in-three",
    "h6-xor3",
];

fn exactly_one(a: &[bool]) -> bool {
    a.iter().filter(|&&b| b).count() == 1
}

fn primed_pairs(a: &[bool], n: usize) -> bool {
    (0..n).all(|i| a[i] != a[i + n])
}

/// Looks up a built-in constraint by name.
///
/// Multi-argument variants take the primed copies last, so `h4` is
/// `(x v y) & (x ^ x') & (y ^ y')` over `(x, y, x', y')`.
pub fn builtin(name: &str) -> Result<Constraint> {
    match name {
        "or0" => Constraint::from_bits(name, 2, "0111"),
        "or1" => Constraint::from_bits(name, 2, "1101"),
        "or2" => Constraint::from_bits(name, 2, "1110"),
        "xor2" => Constraint::from_bits(name, 2, "0110"),
        "xor3" => Constraint::from_bits(name, 3, "01101001"),
        "one-in-three" => Constraint::from_bits(name, 3, "01101000"),
        "id" => Constraint::from_bits(name, 1, "01"),
        "neg" => Constraint::from_bits(name, 1, "10"),
        "xnor2" => Constraint::from_bits(name, 2, "1001"),
        "h4" => Constraint::from_fn(name, 4, |a| (a[0] || a[1]) && primed_pairs(a, 2)),
        "h6-one-in-three" => {
            Constraint::from_fn(name, 6, |a| exactly_one(&a[..3]) && primed_pairs(a, 3))
        }
        "h6-xor3" => Constraint::from_fn(name, 6, |a| (a[0] ^ a[1] ^ a[2]) && primed_pairs(a, 3)),
        _ => Err(Error::UnknownConstraint(name.to_string())),
    }
}

pub fn builtin_set(names: &[&str]) -> Result<ConstraintSet> {
    let mut cs = ConstraintSet::new();
    for n in names {
        cs.insert(builtin(n)?)?;
    }
    Ok(cs)
}
