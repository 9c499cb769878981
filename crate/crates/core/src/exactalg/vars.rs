//! Ordered symbol lists shared by all values of one computation.

use std::fmt;
use std::sync::Arc;

/// An ordered list of variable names. Every [`MPoly`](super::MPoly) and
/// [`RatFunc`](super::RatFunc) carries one; mixing values over different
/// symbol lists is an error surfaced by the arithmetic entry points.
///
/// The declared order fixes the graded-lexicographic monomial order, and
/// with it the canonical form of every printed value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let v: Vec<String> = names.into_iter().map(Into::into).collect();
        debug_assert!(
            v.iter().collect::<std::collections::BTreeSet<_>>().len() == v.len(),
            "duplicate variable name"
        );
        Vars(Arc::new(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// True when every variable of `self` appears in `other`.
    pub fn subset_of(&self, other: &Vars) -> bool {
        self.0.iter().all(|n| other.index(n).is_some())
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars[{}]", self.0.join(","))
    }
}
