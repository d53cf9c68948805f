use std::collections::HashMap;

use super::monomial::{grevlex_unchecked, Monomial};

/// Distinct monomials kept in grevlex-descending order, with an index for
/// exact membership queries.
#[derive(Clone, Default)]
pub struct MonomialSet {
    items: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts and removes duplicates.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut items: Vec<Monomial> = iter.into_iter().collect();
        items.sort_unstable_by(|a, b| grevlex_unchecked(b, a));
        items.dedup();
        Self::from_sorted(items)
    }

    fn from_sorted(items: Vec<Monomial>) -> Self {
        let index = items
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self { items, index }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    /// Position in grevlex-descending order.
    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Monomial> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Monomial] {
        &self.items
    }

    pub fn get(&self, i: usize) -> Option<&Monomial> {
        self.items.get(i)
    }

    pub fn union(&self, other: &MonomialSet) -> MonomialSet {
        Self::from_monomials(self.items.iter().chain(other.items.iter()).cloned())
    }

    pub fn difference(&self, other: &MonomialSet) -> MonomialSet {
        Self::from_sorted(
            self.items
                .iter()
                .filter(|m| !other.contains(m))
                .cloned()
                .collect(),
        )
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> MonomialSet {
        Self::from_sorted(self.items.iter().filter(|m| keep(m)).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &MonomialSet) -> bool {
        self.items.iter().all(|m| !other.contains(m))
    }

    pub fn is_subset(&self, other: &MonomialSet) -> bool {
        self.items.iter().all(|m| other.contains(m))
    }

    pub fn into_vec(self) -> Vec<Monomial> {
        self.items
    }
}

impl PartialEq for MonomialSet {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for MonomialSet {}

impl std::fmt::Debug for MonomialSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.items.iter()).finish()
    }
}

impl FromIterator<Monomial> for MonomialSet {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Self::from_monomials(iter)
    }
}

impl<'a> IntoIterator for &'a MonomialSet {
    type Item = &'a Monomial;
    type IntoIter = std::slice::Iter<'a, Monomial>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
