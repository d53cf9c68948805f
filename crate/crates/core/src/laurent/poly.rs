use std::collections::HashMap;

use super::monomial::{check_arity, grevlex_unchecked, Monomial};
use super::set::MonomialSet;
use super::AlgebraError;
use crate::field::{Field, FieldError};

/// Coefficient types a [`LaurentPoly`] can hold.
pub trait Coefficient: Copy + PartialEq + std::fmt::Debug + Send + Sync {
    fn is_zero_coeff(&self) -> bool;
}

impl Coefficient for u32 {
    fn is_zero_coeff(&self) -> bool {
        *self == 0
    }
}

impl Coefficient for f64 {
    fn is_zero_coeff(&self) -> bool {
        *self == 0.0
    }
}

/// Laurent polynomial with terms sorted grevlex-descending. Zero
/// coefficients are dropped on construction.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C> {
    arity: usize,
    terms: Vec<(Monomial, C)>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn new(arity: usize, terms: Vec<(Monomial, C)>) -> Result<Self, AlgebraError> {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero_coeff()).collect();
        for (m, _) in &terms {
            if m.arity() != arity {
                return Err(AlgebraError::ArityMismatch {
                    expected: arity,
                    found: m.arity(),
                });
            }
        }
        terms.sort_by(|a, b| grevlex_unchecked(&b.0, &a.0));
        if let Some(w) = terms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(AlgebraError::DuplicateMonomial(format!("{:?}", w[0].0)));
        }
        Ok(Self { arity, terms })
    }

    /// Sum duplicate monomials with the field's addition before building.
    pub fn accumulate<F>(field: &F, arity: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self, AlgebraError>
    where
        F: Field<Elem = C>,
    {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            let slot = acc.entry(m).or_insert_with(|| field.zero());
            *slot = field.add(*slot, c);
        }
        Self::new(arity, acc.into_iter().collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> Option<C> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| *c)
    }

    pub fn support(&self) -> MonomialSet {
        // terms are already sorted and distinct
        self.terms.iter().map(|(m, _)| m.clone()).collect()
    }

    /// Multiply by a monomial: every exponent vector is translated by `m`.
    pub fn shift(&self, m: &Monomial) -> Result<Self, AlgebraError> {
        if m.arity() != self.arity {
            return Err(AlgebraError::ArityMismatch {
                expected: self.arity,
                found: m.arity(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| Ok((t.try_mul(m)?, *c)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        // translation preserves grevlex order, so no re-sort
        Ok(Self {
            arity: self.arity,
            terms,
        })
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            arity: self.arity,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(C) -> D) -> LaurentPoly<D> {
        LaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(*c)))
                .filter(|(_, c)| !c.is_zero_coeff())
                .collect(),
        }
    }

    pub fn scale<F: Field<Elem = C>>(&self, field: &F, s: C) -> Self {
        self.map_coeffs(|c| field.mul(c, s))
    }

    pub fn eval<F: Field<Elem = C>>(&self, field: &F, point: &[C]) -> Result<C, FieldError> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            acc = field.add(acc, field.mul(*c, eval_monomial(field, m, point)?));
        }
        Ok(acc)
    }
}

impl<C: std::fmt::Debug> std::fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c:?}*{m:?}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Evaluate a monomial at a point with all coordinates in the field.
pub fn eval_monomial<F: Field>(field: &F, m: &Monomial, point: &[F::Elem]) -> Result<F::Elem, FieldError> {
    let mut acc = field.one();
    for (&e, &x) in m.exponents().iter().zip(point) {
        if e != 0 {
            acc = field.mul(acc, field.pow(x, e as i32)?);
        }
    }
    Ok(acc)
}

/// An ordered list of Laurent polynomials in a common set of variables.
#[derive(Clone, PartialEq)]
pub struct LaurentSystem<C> {
    arity: usize,
    polys: Vec<LaurentPoly<C>>,
}

impl<C: Coefficient> LaurentSystem<C> {
    /// Rejects empty systems, arity mismatches, and constant polynomials.
    pub fn new(arity: usize, polys: Vec<LaurentPoly<C>>) -> Result<Self, AlgebraError> {
        if polys.is_empty() {
            return Err(AlgebraError::EmptySystem);
        }
        for (i, f) in polys.iter().enumerate() {
            if f.arity() != arity {
                return Err(AlgebraError::ArityMismatch {
                    expected: arity,
                    found: f.arity(),
                });
            }
            if f.is_constant() {
                return Err(AlgebraError::ConstantPolynomial(i));
            }
        }
        Ok(Self { arity, polys })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn polys(&self) -> &[LaurentPoly<C>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn support(&self) -> MonomialSet {
        support(&self.polys)
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(C) -> D) -> LaurentSystem<D> {
        LaurentSystem {
            arity: self.arity,
            polys: self.polys.iter().map(|p| p.map_coeffs(&f)).collect(),
        }
    }

    /// Per-polynomial supports, the "structure" of the family member.
    pub fn structure(&self) -> Vec<MonomialSet> {
        self.polys.iter().map(|p| p.support()).collect()
    }
}

impl<C: std::fmt::Debug> std::fmt::Debug for LaurentSystem<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.polys.iter()).finish()
    }
}

/// Grevlex-sorted union of the term monomials of all polynomials.
pub fn support<C: Coefficient>(polys: &[LaurentPoly<C>]) -> MonomialSet {
    polys
        .iter()
        .flat_map(|p| p.terms.iter().map(|(m, _)| m.clone()))
        .collect()
}

/// `m * f` for a polynomial and monomial of equal arity.
pub fn poly_shift<C: Coefficient>(f: &LaurentPoly<C>, m: &Monomial) -> Result<LaurentPoly<C>, AlgebraError> {
    if let Some((t, _)) = f.terms.first() {
        check_arity(t, m)?;
    }
    f.shift(m)
}
