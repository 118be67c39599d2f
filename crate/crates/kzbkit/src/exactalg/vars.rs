//! Ordered variable tables. Variables are globally ordered by declaration;
//! two tables are compatible only when their name lists agree exactly.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// An ordered list of variable names, shared by reference.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarTable {
    names: Arc<Vec<String>>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        VarTable {
            names: Arc::new(names.into_iter().map(Into::into).collect()),
        }
    }

    /// Convenience constructor from string literals.
    pub fn of(names: &[&str]) -> Self {
        VarTable::new(names.to_vec())
    }

    /// Indexed family `base1..baseN` (1-based), e.g. `p1, p2, p3`.
    pub fn indexed(base: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{base}{i}")).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::VariableMismatch(format!("unknown variable {name:?}")))
    }

    pub fn check_same(&self, other: &VarTable) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VariableMismatch(format!(
                "expected {:?}, found {:?}",
                self.names, other.names
            )))
        }
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarTable{:?}", self.names)
    }
}
