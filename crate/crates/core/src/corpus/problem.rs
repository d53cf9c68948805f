//! Problem documents: variable names and, per polynomial, the monomial
//! structure with a coefficient provider.
//!
//! ```text
//! elimgen-problem 1
//! name toy
//! vars x y
//! roots 3
//! seed 0
//! polys 2
//! term 0 x^-1*y^2 2
//! term 0 x^1 -7
//! term 1 x^2*y^-1 ?
//! end
//! ```
//!
//! Coefficients are integers, decimals (`1.25`), fractions (`-3/2`) or `?`
//! for a generic value drawn from the problem seed. A `builder <tag>` line
//! replaces the term list by one of the corpus builders.

use std::fmt;
use std::fmt::Write as _;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::grammar::{format_monomial, is_identifier, parse_monomial};
use crate::field::{Field, PrimeField};
use crate::laurent::{grevlex_cmp, AlgebraError, LaurentPoly, LaurentSystem, Monomial};

pub const PROBLEM_HEADER: &str = "elimgen-problem 1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("coefficient {0} has no image in GF(p)")]
    Field(String),
}

/// A coefficient slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeff {
    Exact(Rational64),
    Generic,
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Coeff::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Generic => f.write_str("?"),
        }
    }
}

pub fn parse_coeff(text: &str) -> Result<Coeff, String> {
    if text == "?" {
        return Ok(Coeff::Generic);
    }
    let bad = || format!("bad coefficient `{text}`");
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Coeff::Exact(Rational64::new(n, d)));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = match int {
            "" | "-" | "+" => 0,
            _ => int.parse().map_err(|_| bad())?,
        };
        let den = 10i64.pow(frac.len() as u32);
        let part: i64 = frac.parse().map_err(|_| bad())?;
        let num = whole
            .checked_mul(den)
            .and_then(|w| if negative { w.checked_sub(part) } else { w.checked_add(part) })
            .ok_or_else(bad)?;
        return Ok(Coeff::Exact(Rational64::new(num, den)));
    }
    text.parse::<i64>().map(|n| Coeff::Exact(Rational64::from_integer(n))).map_err(|_| bad())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemDef {
    pub name: String,
    pub vars: Vec<String>,
    /// Number of true roots, when known.
    pub roots: Option<usize>,
    pub seed: u64,
    pub builder: Option<String>,
    /// Per polynomial, terms in grevlex-descending order. Empty when a
    /// builder supplies the system.
    pub polys: Vec<Vec<(Monomial, Coeff)>>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

impl ProblemDef {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, l)) if l.trim() == PROBLEM_HEADER => {}
            Some((n, l)) => return Err(parse_error(n, 1, format!("expected `{PROBLEM_HEADER}`, found `{}`", l.trim()))),
            None => return Err(parse_error(1, 1, "empty document")),
        }
        let mut name = None;
        let mut vars: Option<Vec<String>> = None;
        let mut roots = None;
        let mut seed = 0;
        let mut builder = None;
        let mut polys: Option<Vec<Vec<(Monomial, Coeff)>>> = None;
        let mut ended = false;

        for (n, line) in lines {
            if ended {
                return Err(parse_error(n, 1, "content after `end`"));
            }
            let w = words(line);
            let (kc, key) = w[0];
            let args = &w[1..];
            let single = || match args {
                [one] => Ok(*one),
                _ => Err(parse_error(n, kc, format!("`{key}` takes one value"))),
            };
            let number = |(c, s): (usize, &str)| s.parse::<u64>().map_err(|_| parse_error(n, c, format!("bad number `{s}`")));
            match key {
                "name" => name = Some(single()?.1.to_string()),
                "vars" => {
                    if args.is_empty() {
                        return Err(parse_error(n, kc, "no variables"));
                    }
                    let mut names: Vec<String> = Vec::new();
                    for &(c, v) in args {
                        if !is_identifier(v) || names.iter().any(|x| x == v) {
                            return Err(parse_error(n, c, format!("bad variable name `{v}`")));
                        }
                        names.push(v.to_string());
                    }
                    vars = Some(names);
                }
                "roots" => roots = Some(number(single()?)? as usize),
                "seed" => seed = number(single()?)?,
                "builder" => builder = Some(single()?.1.to_string()),
                "polys" => {
                    let count = number(single()?)? as usize;
                    if count == 0 {
                        return Err(parse_error(n, kc, "empty polynomial list"));
                    }
                    polys = Some(vec![Vec::new(); count]);
                }
                "term" => {
                    let [(jc, j), (mc, m), (cc, c)] = args else {
                        return Err(parse_error(n, kc, "expected `term <poly> <monomial> <coefficient>`"));
                    };
                    let names = vars.as_ref().ok_or_else(|| parse_error(n, kc, "`vars` must come first"))?;
                    let list = polys.as_mut().ok_or_else(|| parse_error(n, kc, "`polys` must come first"))?;
                    let j = number((*jc, j))? as usize;
                    let slot = list.get_mut(j).ok_or_else(|| parse_error(n, *jc, format!("no polynomial {j}")))?;
                    let m = parse_monomial(m, names).map_err(|e| parse_error(n, *mc, e.to_string()))?;
                    let c = parse_coeff(c).map_err(|e| parse_error(n, *cc, e))?;
                    if c == Coeff::Exact(Rational64::from_integer(0)) {
                        return Err(parse_error(n, *cc, "zero coefficient"));
                    }
                    if slot.iter().any(|(x, _)| *x == m) {
                        return Err(parse_error(n, *mc, "monomial repeated in one polynomial"));
                    }
                    slot.push((m, c));
                }
                "end" => ended = true,
                other => return Err(parse_error(n, kc, format!("unknown key `{other}`"))),
            }
        }
        if !ended {
            return Err(ProblemError::Invalid("missing `end`".into()));
        }
        let vars = vars.ok_or_else(|| ProblemError::Invalid("missing `vars`".into()))?;
        let mut polys = polys.unwrap_or_default();
        for p in &mut polys {
            p.sort_by(|a, b| grevlex_cmp(&b.0, &a.0).expect("same arity"));
        }
        let def = ProblemDef {
            name: name.ok_or_else(|| ProblemError::Invalid("missing `name`".into()))?,
            vars,
            roots,
            seed,
            builder,
            polys,
        };
        def.validate()?;
        Ok(def)
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.builder.is_some() {
            return Ok(());
        }
        if self.polys.is_empty() {
            return Err(ProblemError::Invalid("empty polynomial list".into()));
        }
        for (j, p) in self.polys.iter().enumerate() {
            if p.is_empty() || p.iter().all(|(m, _)| m.is_one()) {
                return Err(AlgebraError::ConstantPolynomial(j).into());
            }
        }
        for (v, name) in self.vars.iter().enumerate() {
            let used = self.polys.iter().flatten().any(|(m, _)| m.exponents()[v] != 0);
            if !used {
                return Err(ProblemError::Invalid(format!("variable `{name}` does not occur")));
            }
        }
        Ok(())
    }

    /// Canonical text: fixed key order, terms grevlex-descending.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{PROBLEM_HEADER}").unwrap();
        writeln!(out, "name {}", self.name).unwrap();
        writeln!(out, "vars {}", self.vars.join(" ")).unwrap();
        if let Some(r) = self.roots {
            writeln!(out, "roots {r}").unwrap();
        }
        writeln!(out, "seed {}", self.seed).unwrap();
        if let Some(b) = &self.builder {
            writeln!(out, "builder {b}").unwrap();
        }
        if !self.polys.is_empty() {
            writeln!(out, "polys {}", self.polys.len()).unwrap();
            for (j, p) in self.polys.iter().enumerate() {
                for (m, c) in p {
                    writeln!(out, "term {j} {} {c}", format_monomial(m, &self.vars)).unwrap();
                }
            }
        }
        writeln!(out, "end").unwrap();
        out
    }

    /// The system over GF(p); generic slots are drawn from the seed.
    pub fn gf_system(&self, field: PrimeField) -> Result<LaurentSystem<u32>, ProblemError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let p = field.modulus();
        let polys = self
            .polys
            .iter()
            .map(|terms| {
                let terms = terms
                    .iter()
                    .map(|(m, c)| {
                        let v = match c {
                            Coeff::Exact(r) => field
                                .from_ratio(*r.numer(), *r.denom())
                                .map_err(|_| ProblemError::Field(c.to_string()))?,
                            Coeff::Generic => rng.gen_range(1..p),
                        };
                        if v == 0 {
                            return Err(ProblemError::Field(c.to_string()));
                        }
                        Ok((m.clone(), v))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(LaurentPoly::new(self.arity(), terms)?)
            })
            .collect::<Result<Vec<_>, ProblemError>>()?;
        Ok(LaurentSystem::new(self.arity(), polys)?)
    }

    /// The system over the reals; `None` if some slot is generic.
    pub fn real_system(&self) -> Option<Result<LaurentSystem<f64>, ProblemError>> {
        let mut polys = Vec::with_capacity(self.polys.len());
        for terms in &self.polys {
            let mut out = Vec::with_capacity(terms.len());
            for (m, c) in terms {
                let Coeff::Exact(r) = c else { return None };
                out.push((m.clone(), *r.numer() as f64 / *r.denom() as f64));
            }
            match LaurentPoly::new(self.arity(), out) {
                Ok(p) => polys.push(p),
                Err(e) => return Some(Err(e.into())),
            }
        }
        Some(LaurentSystem::new(self.arity(), polys).map_err(Into::into))
    }
}
