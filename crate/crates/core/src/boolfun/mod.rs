//! Constraints as truth tables, their closure properties, and the
//! three-way classification of constraint sets.

mod classify;
mod library;
mod properties;
mod table;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use classify::{classify_trichotomy, is_schaefer_set, is_two_affine_set, TrichotomyClass};
pub use library::{builtin, builtin_set, BUILTIN_NAMES};
pub(crate) use properties::is_affine_table;
pub use properties::{detect_properties, PropertySet};
pub use table::TruthTable;

use crate::{Error, Limits, Result};

/// A named Boolean function of fixed positive arity.
#[derive(Clone)]
pub struct Constraint {
    name: String,
    table: TruthTable,
    props: OnceLock<PropertySet>,
}

impl Constraint {
    /// Builds a constraint, enforcing the default arity cap.
    pub fn new(name: impl Into<String>, table: TruthTable) -> Result<Self> {
        Self::with_max_arity(name, table, Limits::default().max_arity)
    }

    pub fn with_max_arity(
        name: impl Into<String>,
        table: TruthTable,
        max_arity: usize,
    ) -> Result<Self> {
        let name = name.into();
        validate_name(&name)?;
        if table.arity() == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: 0,
            });
        }
        if table.arity() > max_arity {
            return Err(Error::ArityTooLarge {
                arity: table.arity(),
                max: max_arity,
            });
        }
        Ok(Constraint {
            name,
            table,
            props: OnceLock::new(),
        })
    }

    /// Parses a `0/1` table string of length `2^arity`.
    pub fn from_bits(name: impl Into<String>, arity: usize, bits: &str) -> Result<Self> {
        let name = name.into();
        let max = Limits::default().max_arity;
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        let expected = 1usize << arity;
        let table = TruthTable::from_bit_str(arity, bits).ok_or_else(|| Error::TableLength {
            name: name.clone(),
            expected,
            got: bits.len(),
        })?;
        Self::new(name, table)
    }

    /// Builds a constraint from a predicate over argument values.
    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[bool]) -> bool,
    ) -> Result<Self> {
        let mut buf = vec![false; arity];
        let table = TruthTable::from_fn(arity, |row| {
            for (j, b) in buf.iter_mut().enumerate() {
                *b = row & (1 << (arity - 1 - j)) != 0;
            }
            f(&buf)
        });
        Self::new(name, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.table.arity()
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn eval(&self, a: &[bool]) -> Result<bool> {
        if a.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: a.len(),
            });
        }
        let row = a.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Ok(self.table.get(row))
    }

    /// Cached closure properties.
    pub fn properties(&self) -> &PropertySet {
        self.props.get_or_init(|| detect_properties(&self.table))
    }

    pub fn renamed(&self, name: impl Into<String>) -> Result<Self> {
        Self::with_max_arity(name, self.table.clone(), usize::MAX)
    }
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
        return Err(Error::Parse {
            line: 0,
            msg: format!("invalid constraint name `{name}`"),
        });
    }
    Ok(())
}

impl PartialEq for Constraint {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.table == other.table
    }
}

impl Eq for Constraint {}

impl std::hash::Hash for Constraint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.table.hash(state);
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}:{}",
            self.name,
            self.arity(),
            self.table.to_bit_string()
        )
    }
}

/// A finite set of constraints with unique names, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    items: Vec<Arc<Constraint>>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_constraints(cs: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        let mut set = Self::new();
        for c in cs {
            set.insert(c)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, c: Constraint) -> Result<Arc<Constraint>> {
        if self.get(c.name()).is_some() {
            return Err(Error::DuplicateName(c.name().to_string()));
        }
        let c = Arc::new(c);
        self.items.push(c.clone());
        Ok(c)
    }

    /// Adds `c` unless an identical constraint is already present.
    pub fn insert_or_get(&mut self, c: Constraint) -> Result<Arc<Constraint>> {
        match self.get(c.name()) {
            Some(old) if **old == c => Ok(old.clone()),
            Some(_) => Err(Error::DuplicateName(c.name().to_string())),
            None => self.insert(c),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Constraint>> {
        self.items.iter().find(|c| c.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<Constraint>> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.items.iter().map(|c| c.arity()).max().unwrap_or(0)
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a Arc<Constraint>;
    type IntoIter = std::slice::Iter<'a, Arc<Constraint>>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
