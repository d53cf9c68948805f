//! Monomial syntax: `1` or factors `name^exp` joined by `*`, e.g. `x1^2*x2^-1`.
//! The exponent may be omitted on input (`x` means `x^1`); output always
//! writes it.

use thiserror::Error;

use crate::laurent::Monomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("empty monomial")]
    Empty,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("bad exponent `{0}`")]
    BadExponent(String),
    #[error("malformed factor `{0}`")]
    BadFactor(String),
    #[error("invalid variable name `{0}`")]
    BadName(String),
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_monomial(text: &str, names: &[String]) -> Result<Monomial, GrammarError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(GrammarError::Empty);
    }
    let mut exps = vec![0i32; names.len()];
    if text == "1" {
        return Monomial::new(&exps).map_err(|_| GrammarError::BadExponent(text.into()));
    }
    for factor in text.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i32 = e.parse().map_err(|_| GrammarError::BadExponent(e.to_string()))?;
                (n, e)
            }
            None => (factor, 1),
        };
        if !is_identifier(name) {
            return Err(GrammarError::BadFactor(factor.to_string()));
        }
        let idx = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GrammarError::UnknownVariable(name.to_string()))?;
        exps[idx] = exps[idx]
            .checked_add(exp)
            .ok_or_else(|| GrammarError::BadExponent(factor.to_string()))?;
    }
    Monomial::new(&exps).map_err(|_| GrammarError::BadExponent(text.to_string()))
}

pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    m.display(names).to_string()
}
