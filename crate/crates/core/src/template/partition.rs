use crate::laurent::{Monomial, MonomialSet};

/// Disjoint split of a support into excessive, reducible and basis monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    pub excessive: MonomialSet,
    pub reducible: MonomialSet,
    pub basis: MonomialSet,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.excessive.len() + self.reducible.len() + self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn column_order(&self) -> Vec<Monomial> {
        self.excessive
            .iter()
            .chain(self.reducible.iter())
            .chain(self.basis.iter())
            .cloned()
            .collect()
    }

    pub fn is_disjoint(&self) -> bool {
        self.excessive.is_disjoint(&self.reducible)
            && self.excessive.is_disjoint(&self.basis)
            && self.reducible.is_disjoint(&self.basis)
    }

    /// `E ∪ R ∪ B == universe` and the three sets are pairwise disjoint.
    pub fn covers_exactly(&self, universe: &MonomialSet) -> bool {
        self.is_disjoint()
            && self.len() == universe.len()
            && self.excessive.is_subset(universe)
            && self.reducible.is_subset(universe)
            && self.basis.is_subset(universe)
    }

    /// `b·m ∈ R ∪ B` for every `b` in the action support and `m ∈ B`.
    pub fn is_closed_under(&self, action: &[Monomial]) -> bool {
        self.basis.iter().all(|m| {
            action.iter().all(|b| {
                let bm = b * m;
                self.reducible.contains(&bm) || self.basis.contains(&bm)
            })
        })
    }
}

/// Permissible monomials `{m ∈ U : b·m ∈ U for all b ∈ U_a}`.
pub fn permissible(universe: &MonomialSet, action: &[Monomial]) -> MonomialSet {
    universe.filter(|m| {
        action
            .iter()
            .all(|b| b.try_mul(m).map_or(false, |bm| universe.contains(&bm)))
    })
}

/// `R = {b·m : b ∈ U_a, m ∈ B} \ B`.
pub(crate) fn reducible_for(basis: &MonomialSet, action: &[Monomial]) -> MonomialSet {
    basis
        .iter()
        .flat_map(|m| action.iter().map(move |b| b * m))
        .filter(|bm| !basis.contains(bm))
        .collect()
}

/// Initial partition for a monomial action: `B = P`, `R = a·B \ B`, `E` the rest.
pub fn partition_for_action(universe: &MonomialSet, action: &Monomial) -> Partition {
    let action = std::slice::from_ref(action);
    let basis = permissible(universe, action);
    let reducible = reducible_for(&basis, action);
    let excessive = universe.filter(|m| !basis.contains(m) && !reducible.contains(m));
    Partition {
        excessive,
        reducible,
        basis,
    }
}
