use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use smallvec::SmallVec;

use super::AlgebraError;

/// Exponent bound: every exponent satisfies `|e| < 2^15`.
pub const EXPONENT_LIMIT: i32 = 1 << 15;

type Exponents = SmallVec<[i16; 8]>;

/// A Laurent monomial `x1^e1 * ... * xk^ek` with signed exponents.
///
/// Equality and hashing are by exponent vector. The derived `Ord` is
/// lexicographic on the raw vector and is only used for map keys; all
/// algorithmic ordering goes through [`grevlex_cmp`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exponents,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Self {
            exps: SmallVec::from_elem(0, arity),
        }
    }

    pub fn new(exponents: &[i32]) -> Result<Self, AlgebraError> {
        let exps = exponents
            .iter()
            .map(|&e| checked_exponent(e))
            .collect::<Result<Exponents, _>>()?;
        Ok(Self { exps })
    }

    /// `x_var^power` in `arity` variables.
    pub fn var(arity: usize, var: usize, power: i32) -> Result<Self, AlgebraError> {
        let mut m = Self::one(arity);
        m.exps[var] = checked_exponent(power)?;
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[i16] {
        &self.exps
    }

    pub fn degree(&self) -> i32 {
        self.exps.iter().map(|&e| e as i32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial, AlgebraError> {
        check_arity(self, other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| checked_exponent(a as i32 + b as i32))
            .collect::<Result<Exponents, _>>()?;
        Ok(Monomial { exps })
    }

    pub fn inverse(&self) -> Monomial {
        // -e never overflows because |e| < 2^15
        Monomial {
            exps: self.exps.iter().map(|&e| -e).collect(),
        }
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    /// Panics on arity mismatch or exponent overflow; use [`Monomial::try_mul`]
    /// where either can happen.
    fn mul(self, rhs: &Monomial) -> Monomial {
        self.try_mul(rhs).expect("monomial product")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&[]))
    }
}

impl Monomial {
    /// Render in the `x1^2*x2^-1` grammar. Missing names fall back to `x<i+1>`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayMonomial { m: self, names }
    }
}

struct DisplayMonomial<'a> {
    m: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for DisplayMonomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match self.names.get(i) {
                Some(name) => write!(f, "{name}^{e}")?,
                None => write!(f, "x{}^{e}", i + 1)?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

fn checked_exponent(e: i32) -> Result<i16, AlgebraError> {
    if e.abs() >= EXPONENT_LIMIT {
        Err(AlgebraError::ExponentOverflow(e))
    } else {
        Ok(e as i16)
    }
}

pub(crate) fn check_arity(a: &Monomial, b: &Monomial) -> Result<(), AlgebraError> {
    if a.arity() != b.arity() {
        return Err(AlgebraError::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    Ok(())
}

/// Graded reverse lexicographic comparison.
///
/// Higher total degree is greater. On ties, scan from the last variable
/// backwards; at the first differing exponent the monomial with the smaller
/// exponent is greater.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering, AlgebraError> {
    check_arity(a, b)?;
    Ok(grevlex_unchecked(a, b))
}

pub(crate) fn grevlex_unchecked(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for (ea, eb) in a.exps.iter().zip(&b.exps).rev() {
        if ea != eb {
            return eb.cmp(ea);
        }
    }
    Ordering::Equal
}

/// Sort key wrapper that orders monomials grevlex-descending.
#[derive(Clone, PartialEq, Eq)]
pub struct Grevlex(pub Monomial);

impl PartialOrd for Grevlex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Grevlex {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_unchecked(&self.0, &other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[i32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn toy_support_order() {
        // x^2/y, x, y, y^2/x, x/y, 1, y/x, 1/x
        let listed = vec![
            m(&[2, -1]),
            m(&[1, 0]),
            m(&[0, 1]),
            m(&[-1, 2]),
            m(&[1, -1]),
            m(&[0, 0]),
            m(&[-1, 1]),
            m(&[-1, 0]),
        ];
        assert_eq!(grevlex_cmp(&listed[0], &listed[1]).unwrap(), Ordering::Greater);
        let mut shuffled = listed.clone();
        shuffled.reverse();
        shuffled.swap(1, 5);
        shuffled.sort_by(|a, b| grevlex_unchecked(b, a));
        assert_eq!(shuffled, listed);
    }

    #[test]
    fn reflexive() {
        let a = m(&[3, -2, 1]);
        assert_eq!(grevlex_cmp(&a, &a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            grevlex_cmp(&m(&[1]), &m(&[1, 0])),
            Err(AlgebraError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn overflow_is_an_error() {
        let big = m(&[EXPONENT_LIMIT - 1]);
        assert!(matches!(big.try_mul(&m(&[1])), Err(AlgebraError::ExponentOverflow(_))));
        assert!(Monomial::new(&[-EXPONENT_LIMIT]).is_err());
    }

    #[test]
    fn display_grammar() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(m(&[2, -1]).display(&names).to_string(), "x^2*y^-1");
        assert_eq!(m(&[0, 0]).display(&names).to_string(), "1");
        assert_eq!(m(&[0, 3]).display(&[]).to_string(), "x2^3");
    }
}
